//! Finite windows of the coset graph and its contraction pipeline.
//!
//! A window of the coset graph carries A-, B- and V-edges on the vertices
//! (n, e) with |n| <= N. Contracting the B-cycles gives the bar stage, the
//! AV-vertex quotient gives the tilde stage, and pruning torsion-labeled
//! loops and leaves gives the bar0/tilde0 stages whose cores have the Betti
//! numbers predicted by the structure computation.

use crate::invospec::InvolutionSpec;
use crate::neumann::{act, sigma, Node, OrderClass};
use crate::pgl2::{GroupElement, Letter};
use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

/// Pipeline stage of a graph value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Stage {
    Gamma,
    Bar,
    Tilde,
    Bar0,
    Tilde0,
}

/// A finite window of the coset graph: action maps restricted to |n| <= N.
/// A vertex is boundary-flagged when some group move leaves the window, so
/// structural claims are asserted on interior vertices only.
#[derive(Clone, Debug)]
pub struct GammaWindow {
    pub n_max: i64,
    pub a: BTreeMap<Node, Node>,
    pub b: BTreeMap<Node, Node>,
    pub v: BTreeMap<Node, Node>,
    pub c: BTreeMap<Node, Node>,
    pub boundary: BTreeSet<Node>,
}

impl GammaWindow {
    pub fn vertices(&self) -> Vec<Node> {
        let mut out = Vec::new();
        for n in -self.n_max..=self.n_max {
            for e in 0..2 {
                out.push(Node::new(n, e));
            }
        }
        out
    }

    pub fn contains(&self, x: Node) -> bool {
        x.n.abs() <= self.n_max
    }

    pub fn is_interior(&self, x: Node) -> bool {
        self.contains(x) && !self.boundary.contains(&x)
    }
}

fn build_from_actions(n_max: i64, action: impl Fn(Letter, Node) -> Option<Node>) -> GammaWindow {
    let mut g = GammaWindow {
        n_max,
        a: BTreeMap::new(),
        b: BTreeMap::new(),
        v: BTreeMap::new(),
        c: BTreeMap::new(),
        boundary: BTreeSet::new(),
    };
    let all = [
        Letter::A,
        Letter::B,
        Letter::B2,
        Letter::V,
        Letter::C,
        Letter::CInv,
    ];
    for n in -n_max..=n_max {
        for e in 0..2 {
            let x = Node::new(n, e);
            for letter in all {
                match action(letter, x) {
                    Some(y) if y.n.abs() <= n_max => {
                        let map = match letter {
                            Letter::A => &mut g.a,
                            Letter::B => &mut g.b,
                            Letter::V => &mut g.v,
                            Letter::C => &mut g.c,
                            Letter::B2 | Letter::CInv => continue,
                        };
                        map.insert(x, y);
                    }
                    _ => {
                        g.boundary.insert(x);
                    }
                }
            }
        }
    }
    g
}

/// Builds the window of the coset graph of the spec's subgroup.
pub fn build_window(spec: &InvolutionSpec, n_max: i64) -> GammaWindow {
    build_from_actions(n_max, |letter, x| act(spec, letter, x).ok())
}

/// The window of the example graph with two C-orbits u_n = (n, 0) and
/// w_m = (m, 1) that are not exchanged by V: C adds one on both rows,
/// V reflects each row into itself, and A matches the rows in residue
/// classes mod 3, fixing u_{3k} and w_{3k+1}.
pub fn fig1_window(n_max: i64) -> GammaWindow {
    let a = |x: Node| -> Node {
        let Node { n, e } = x;
        if e == 0 {
            match n.rem_euclid(3) {
                0 => x,
                1 => Node::new(-n, 1),
                _ => Node::new(-n - 1, 1),
            }
        } else {
            match n.rem_euclid(3) {
                1 => x,
                2 => Node::new(-n, 0),
                _ => Node::new(-n - 1, 0),
            }
        }
    };
    build_from_actions(n_max, move |letter, x| {
        Some(match letter {
            Letter::C => Node::new(x.n + 1, x.e),
            Letter::CInv => Node::new(x.n - 1, x.e),
            Letter::V => {
                if x.e == 0 {
                    Node::new(-x.n, 0)
                } else {
                    Node::new(-1 - x.n, 1)
                }
            }
            Letter::A => a(x),
            Letter::B => {
                let y = a(x);
                Node::new(y.n + 1, y.e)
            }
            Letter::B2 => a(Node::new(x.n - 1, x.e)),
        })
    })
}

/// One structural defect found by [`validate_axioms`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AxiomViolation {
    pub vertex: Node,
    pub detail: String,
}

/// Checks the defining conditions at every interior vertex: A and V are
/// involutions with exactly one edge each, B-orbits are loops or 3-cycles,
/// and every AVAV- and ABVABV-path closes.
pub fn validate_axioms(g: &GammaWindow) -> Vec<AxiomViolation> {
    let mut out = Vec::new();
    let mut push = |vertex: Node, detail: String| out.push(AxiomViolation { vertex, detail });
    for x in g.vertices() {
        if !g.is_interior(x) {
            continue;
        }
        match g.a.get(&x) {
            None => push(x, "missing A-edge".into()),
            Some(&y) => {
                if g.a.get(&y).copied() != Some(x) && g.is_interior(y) {
                    push(x, format!("A-edge to {y} is not mirrored"));
                }
            }
        }
        match g.v.get(&x) {
            None => push(x, "missing V-edge".into()),
            Some(&y) => {
                if g.v.get(&y).copied() != Some(x) && g.is_interior(y) {
                    push(x, format!("V-edge to {y} is not mirrored"));
                }
            }
        }
        // B-orbit through x must close after 1 or 3 steps.
        let mut steps = 0;
        let mut cur = x;
        let closed = loop {
            match g.b.get(&cur) {
                Some(&y) => {
                    steps += 1;
                    cur = y;
                    if cur == x {
                        break true;
                    }
                    if steps > 3 {
                        break false;
                    }
                }
                None => break true, // leaves the window; not x's defect
            }
        };
        if !closed || (cur == x && steps != 1 && steps != 3 && g.b.contains_key(&x)) {
            push(x, format!("B-cycle length {steps}"));
        }
        // Closing paths.
        let walk = |letters: &[Letter]| -> Option<Node> {
            letters.iter().try_fold(x, |acc, l| match l {
                Letter::A => g.a.get(&acc).copied(),
                Letter::B => g.b.get(&acc).copied(),
                Letter::V => g.v.get(&acc).copied(),
                _ => None,
            })
        };
        if let Some(end) = walk(&[Letter::A, Letter::V, Letter::A, Letter::V]) {
            if end != x {
                push(x, format!("AVAV-path ends at {end}"));
            }
        }
        let abv = [
            Letter::A,
            Letter::B,
            Letter::V,
            Letter::A,
            Letter::B,
            Letter::V,
        ];
        if let Some(end) = walk(&abv) {
            if end != x {
                push(x, format!("ABVABV-path ends at {end}"));
            }
        }
    }
    out
}

/// Summary of the C-orbit partition of a window.
#[derive(Clone, Debug)]
pub struct NeumannCheck {
    pub orbit_count: usize,
    pub all_open: bool,
    pub v_exchanged: bool,
    /// True iff exactly two open C-orbits exchanged by V.
    pub is_neumann: bool,
}

/// Partitions the window's vertices into C-orbits and tests the coset-graph
/// criterion: a Neumann window has exactly two orbits, both open at the
/// boundary, exchanged by the V-action.
pub fn c_orbits(g: &GammaWindow) -> (Vec<Vec<Node>>, NeumannCheck) {
    let mut orbits: Vec<Vec<Node>> = Vec::new();
    let mut open: Vec<bool> = Vec::new();
    let mut seen = BTreeSet::new();
    let preimage: BTreeMap<Node, Node> = g.c.iter().map(|(&x, &y)| (y, x)).collect();
    for x in g.vertices() {
        if seen.contains(&x) {
            continue;
        }
        // Walk to the backward end of the orbit, then forward through it.
        let mut start = x;
        while let Some(&p) = preimage.get(&start) {
            if p == x {
                break; // closed orbit
            }
            start = p;
        }
        let mut orbit = Vec::new();
        let mut cur = start;
        let mut is_open = !preimage.contains_key(&start);
        loop {
            orbit.push(cur);
            seen.insert(cur);
            match g.c.get(&cur) {
                Some(&y) if !seen.contains(&y) => cur = y,
                Some(_) => break, // closed
                None => {
                    is_open = true;
                    break;
                }
            }
        }
        orbits.push(orbit);
        open.push(is_open);
    }
    let all_open = open.iter().all(|&o| o);
    let v_exchanged = orbits.len() == 2 && {
        let sets: Vec<BTreeSet<Node>> = orbits.iter().map(|o| o.iter().copied().collect()).collect();
        let mut crossings = 0usize;
        let mut ok = true;
        for (i, o) in orbits.iter().enumerate() {
            for x in o {
                if let Some(y) = g.v.get(x) {
                    if sets[1 - i].contains(y) {
                        crossings += 1;
                    } else {
                        ok = false;
                    }
                }
            }
        }
        ok && crossings > 0
    };
    let check = NeumannCheck {
        orbit_count: orbits.len(),
        all_open,
        v_exchanged,
        is_neumann: orbits.len() == 2 && all_open && v_exchanged,
    };
    (orbits, check)
}

/// True iff the window is connected under the union of A-, B- and V-edges.
pub fn is_connected(g: &GammaWindow) -> bool {
    let verts = g.vertices();
    if verts.is_empty() {
        return true;
    }
    let mut seen = BTreeSet::new();
    let mut stack = vec![verts[0]];
    while let Some(x) = stack.pop() {
        if !seen.insert(x) {
            continue;
        }
        for map in [&g.a, &g.b, &g.v, &g.c] {
            if let Some(&y) = map.get(&x) {
                stack.push(y);
            }
            for (&p, &q) in map.iter() {
                if q == x {
                    stack.push(p);
                }
            }
        }
    }
    seen.len() == verts.len()
}

/// A vertex of a contracted graph: a class of coset-graph vertices.
#[derive(Clone, Debug)]
pub struct ClassVertex {
    pub members: Vec<Node>,
    pub boundary: bool,
}

/// An A-edge surviving contraction, labeled by the unordered index pair
/// {n, iota(n)} of the Schreier generators it represents.
#[derive(Clone, Debug)]
pub struct ClassEdge {
    pub u: usize,
    pub v: usize,
    pub label: (i64, i64),
    pub class: Option<OrderClass>,
    /// The underlying coset-graph A-edge (kept for path bookkeeping).
    pub gamma: (Node, Node),
}

/// A graph at stage bar, tilde, bar0 or tilde0.
#[derive(Clone, Debug)]
pub struct ContractedGraph {
    pub stage: Stage,
    pub vertices: Vec<ClassVertex>,
    pub edges: Vec<ClassEdge>,
}

impl ContractedGraph {
    fn vertex_of(&self, x: Node) -> Option<usize> {
        self.vertices.iter().position(|v| v.members.contains(&x))
    }

    fn valence(&self, i: usize) -> usize {
        self.edges
            .iter()
            .map(|e| (e.u == i) as usize + (e.v == i) as usize)
            .sum()
    }
}

fn order_pair(a: i64, b: i64) -> (i64, i64) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Contracts each B-loop or B-3-cycle of the window to a single vertex.
/// A-edges survive with their labels; V-edges are dropped. When a spec is
/// given, each surviving edge also records the order class of its label.
pub fn contract_b(g: &GammaWindow, spec: Option<&InvolutionSpec>) -> ContractedGraph {
    // Union of B-orbits.
    let mut cycle_of: BTreeMap<Node, usize> = BTreeMap::new();
    let mut cycles: Vec<Vec<Node>> = Vec::new();
    for x in g.vertices() {
        if cycle_of.contains_key(&x) {
            continue;
        }
        let mut members = vec![x];
        let mut cur = x;
        while let Some(&y) = g.b.get(&cur) {
            if members.contains(&y) {
                break;
            }
            members.push(y);
            cur = y;
        }
        // Also absorb backward images so partial boundary cycles cohere.
        loop {
            let prev = g.b.iter().find(|(_, &q)| q == members[0]).map(|(&p, _)| p);
            match prev {
                Some(p) if !members.contains(&p) => members.insert(0, p),
                _ => break,
            }
        }
        members.sort_unstable();
        members.dedup();
        let idx = cycles.len();
        for &m in &members {
            cycle_of.insert(m, idx);
        }
        cycles.push(members);
    }
    let mut vertices: Vec<ClassVertex> = cycles
        .iter()
        .map(|members| {
            let complete = members.len() == 1 || members.len() == 3;
            let boundary = !complete || members.iter().any(|&m| !g.is_interior(m));
            ClassVertex {
                members: members.clone(),
                boundary,
            }
        })
        .collect();
    // Canonical vertex order by smallest member.
    let mut order: Vec<usize> = (0..vertices.len()).collect();
    order.sort_by_key(|&i| vertices[i].members[0]);
    let rank: BTreeMap<usize, usize> = order.iter().enumerate().map(|(r, &i)| (i, r)).collect();
    let mut sorted = Vec::with_capacity(vertices.len());
    for &i in &order {
        sorted.push(vertices[i].clone());
    }
    vertices = sorted;

    let mut edges = Vec::new();
    for (&x, &y) in g.a.iter() {
        // One edge per unordered A-pair; A fixed points become loops.
        if y < x {
            continue;
        }
        let u = rank[&cycle_of[&x]];
        let v = rank[&cycle_of[&y]];
        let label = order_pair(x.n, y.n);
        let class = spec.and_then(|s| sigma(s, x.n).ok()).map(|s| s.class);
        let (u, v) = (u.min(v), u.max(v));
        edges.push(ClassEdge {
            u,
            v,
            label,
            class,
            gamma: (x, y),
        });
    }
    edges.sort_by_key(|e| (e.u, e.v, e.label, e.gamma));
    ContractedGraph {
        stage: Stage::Bar,
        vertices,
        edges,
    }
}

/// Quotients a bar-stage graph by the AV-action on vertex classes and
/// identifies parallel edges carrying the same label, making the labeling
/// by generator pairs bijective.
pub fn quotient_av(bar: &ContractedGraph, g: &GammaWindow) -> ContractedGraph {
    assert_eq!(bar.stage, Stage::Bar, "quotient_av expects the bar stage");
    let av = |x: Node| -> Option<Node> {
        let y = g.v.get(&x)?;
        g.a.get(y).copied()
    };
    // Orbit partition of bar vertices under the induced AV map.
    let n = bar.vertices.len();
    let mut orbit: Vec<usize> = (0..n).collect();
    for (i, vert) in bar.vertices.iter().enumerate() {
        for &m in &vert.members {
            if let Some(y) = av(m) {
                if let Some(j) = bar.vertex_of(y) {
                    let (lo, hi) = (orbit[i].min(orbit[j]), orbit[i].max(orbit[j]));
                    for o in orbit.iter_mut() {
                        if *o == hi {
                            *o = lo;
                        }
                    }
                }
            }
        }
    }
    let mut reps: Vec<usize> = orbit.clone();
    reps.sort_unstable();
    reps.dedup();
    let class_index: BTreeMap<usize, usize> =
        reps.iter().enumerate().map(|(r, &o)| (o, r)).collect();
    let mut vertices: Vec<ClassVertex> = reps
        .iter()
        .map(|&o| {
            let mut members = Vec::new();
            let mut boundary = false;
            for (i, vert) in bar.vertices.iter().enumerate() {
                if orbit[i] == o {
                    members.extend(vert.members.iter().copied());
                    boundary |= vert.boundary;
                    // Orbits cut by the window edge are boundary.
                    boundary |= vert.members.iter().any(|&m| av(m).is_none());
                }
            }
            members.sort_unstable();
            ClassVertex { members, boundary }
        })
        .collect();
    for v in &mut vertices {
        v.members.dedup();
    }
    let mut edges: Vec<ClassEdge> = Vec::new();
    let mut seen = BTreeSet::new();
    for e in &bar.edges {
        let u = class_index[&orbit[e.u]];
        let v = class_index[&orbit[e.v]];
        let (u, v) = (u.min(v), u.max(v));
        if seen.insert((u, v, e.label)) {
            edges.push(ClassEdge {
                u,
                v,
                label: e.label,
                class: e.class,
                gamma: e.gamma,
            });
        }
    }
    edges.sort_by_key(|e| (e.u, e.v, e.label));
    ContractedGraph {
        stage: Stage::Tilde,
        vertices,
        edges,
    }
}

/// Pruning result: the reduced graph plus the removed finite-order labels.
#[derive(Clone, Debug)]
pub struct Pruned {
    pub graph: ContractedGraph,
    pub removed_labels: Vec<(i64, i64)>,
}

/// Removes loops labeled by order-2 generators and interior valence-1
/// vertices whose edge label has order 3, recording the removed labels.
/// Idempotent: pruning a pruned graph removes nothing further.
pub fn prune(input: &ContractedGraph) -> Pruned {
    let stage = match input.stage {
        Stage::Bar | Stage::Bar0 => Stage::Bar0,
        Stage::Tilde | Stage::Tilde0 => Stage::Tilde0,
        Stage::Gamma => panic!("prune expects a contracted stage"),
    };
    let mut graph = input.clone();
    let mut removed = Vec::new();
    loop {
        let mut changed = false;
        // Order-2 loops.
        let before = graph.edges.len();
        graph.edges.retain(|e| {
            let drop = e.u == e.v && e.class == Some(OrderClass::Order2);
            if drop {
                removed.push(e.label);
            }
            !drop
        });
        changed |= graph.edges.len() != before;
        // Interior leaves with an order-3 label.
        let leaf = (0..graph.vertices.len()).find(|&i| {
            !graph.vertices[i].boundary
                && graph.valence(i) == 1
                && graph
                    .edges
                    .iter()
                    .any(|e| (e.u == i || e.v == i) && e.class == Some(OrderClass::Order3))
        });
        if let Some(i) = leaf {
            graph.edges.retain(|e| {
                let drop = e.u == i || e.v == i;
                if drop {
                    removed.push(e.label);
                }
                !drop
            });
            graph.vertices[i].members.clear(); // keep indices stable, mark dead
            changed = true;
        }
        if !changed {
            break;
        }
    }
    removed.sort_unstable();
    removed.dedup();
    graph.stage = stage;
    Pruned {
        graph,
        removed_labels: removed,
    }
}

/// The node indices of the first m periods' blocks together with the gluing
/// pairs joining them; graph claims are asserted on vertices all of whose
/// members fall in this core.
pub fn core_indices(spec: &InvolutionSpec, m: i64) -> BTreeSet<i64> {
    let per = spec.blocks().len() as i64;
    let mut core = BTreeSet::new();
    for seq in 0..m * per {
        let start = spec.block_start(seq).expect("cyclic specs cover all blocks");
        let l = spec.block_at(seq).expect("cyclic").l() as i64;
        core.extend(start..=start + l);
    }
    for i in 0..m * per - 1 {
        core.insert(-2 - i);
        core.insert(spec.gluing_target(i + 1).expect("cyclic"));
    }
    core
}

fn in_core(v: &ClassVertex, core: &BTreeSet<i64>) -> bool {
    !v.members.is_empty() && v.members.iter().all(|m| core.contains(&m.n))
}

/// Betti number |E| - |V| + #components of the core-induced subgraph,
/// loops counting as edges with equal endpoints.
pub fn betti(graph: &ContractedGraph, core: &BTreeSet<i64>) -> i64 {
    let keep: Vec<bool> = graph.vertices.iter().map(|v| in_core(v, core)).collect();
    let verts: Vec<usize> = (0..graph.vertices.len()).filter(|&i| keep[i]).collect();
    let edges: Vec<&ClassEdge> = graph
        .edges
        .iter()
        .filter(|e| keep[e.u] && keep[e.v])
        .collect();
    // Components via repeated merging.
    let mut comp: BTreeMap<usize, usize> = verts.iter().map(|&i| (i, i)).collect();
    let mut changed = true;
    while changed {
        changed = false;
        for e in &edges {
            let (cu, cv) = (comp[&e.u], comp[&e.v]);
            if cu != cv {
                let lo = cu.min(cv);
                for c in comp.values_mut() {
                    if *c == cu.max(cv) {
                        *c = lo;
                        changed = true;
                    }
                }
            }
        }
    }
    let components: BTreeSet<usize> = comp.values().copied().collect();
    edges.len() as i64 - verts.len() as i64 + components.len() as i64
}

/// Count of edges leaving the core: each is an infinite tail of the pruned
/// graph truncated by the window.
pub fn exit_count(graph: &ContractedGraph, core: &BTreeSet<i64>) -> i64 {
    graph
        .edges
        .iter()
        .filter(|e| {
            let ku = in_core(&graph.vertices[e.u], core);
            let kv = in_core(&graph.vertices[e.v], core);
            ku != kv
        })
        .count() as i64
}

/// Independent generators delivered by m periods, with the graph-side
/// cross-check data.
#[derive(Clone, Debug)]
pub struct ExtractionResult {
    /// Finite-order surviving generator indices with their orders.
    pub l0: Vec<(i64, OrderClass)>,
    /// Infinite-order surviving generator indices.
    pub linf: Vec<i64>,
    /// Betti number of the tilde0 core over the same periods.
    pub beta: i64,
    /// Truncated infinite tails leaving that core.
    pub s: i64,
}

/// Runs the per-block elimination over m periods and the graph pipeline over
/// a window containing the corresponding core. The counts satisfy
/// |linf| = beta + s - 1.
pub fn extract_generators(
    spec: &InvolutionSpec,
    m: i64,
) -> Result<ExtractionResult, crate::invospec::SpecError> {
    let per = spec.blocks().len() as i64;
    let mut l0 = Vec::new();
    let mut linf = Vec::new();
    for seq in 0..m * per {
        for sv in crate::neumann::block_survivors(spec, seq)? {
            match sv.class {
                OrderClass::Order2 | OrderClass::Order3 => l0.push((sv.index, sv.class)),
                OrderClass::Infinite => linf.push(sv.index),
            }
        }
    }
    let core = core_indices(spec, m);
    let n_max = core.iter().map(|n| n.abs()).max().unwrap_or(0) + 2 * spec_period(spec) + 4;
    let g = build_window(spec, n_max);
    let bar = contract_b(&g, Some(spec));
    let tilde = quotient_av(&bar, &g);
    let tilde0 = prune(&tilde).graph;
    let beta = betti(&tilde0, &core);
    let s = exit_count(&tilde0, &core);
    Ok(ExtractionResult { l0, linf, beta, s })
}

fn spec_period(spec: &InvolutionSpec) -> i64 {
    spec.blocks().iter().map(|b| b.l() as i64 + 2).sum()
}

#[derive(Debug, thiserror::Error)]
pub enum PathError {
    #[error("not quasi-Eulerian: {0}")]
    NotQuasiEulerian(String),
}

/// One step of a projected C-orbit walk: the bar edge traversed and its
/// orientation (true = from gamma.0 towards gamma.1).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathStep {
    pub edge: usize,
    pub forward: bool,
}

/// Projects the two C-orbits onto the bar graph and verifies the pair of
/// paths is quasi-Eulerian on the interior: jointly they traverse every
/// oriented interior edge between distinct vertices exactly once, and each
/// path is reduced except at valence-1 vertices.
pub fn quasi_eulerian(
    g: &GammaWindow,
    bar: &ContractedGraph,
) -> Result<(Vec<PathStep>, Vec<PathStep>), PathError> {
    let (orbits, check) = c_orbits(g);
    if check.orbit_count != 2 {
        return Err(PathError::NotQuasiEulerian(format!(
            "{} C-orbits instead of 2",
            check.orbit_count
        )));
    }
    let edge_at = |x: Node| -> Option<(usize, bool)> {
        bar.edges.iter().enumerate().find_map(|(i, e)| {
            if e.gamma.0 == x {
                Some((i, true))
            } else if e.gamma.1 == x {
                Some((i, false))
            } else {
                None
            }
        })
    };
    let mut paths = Vec::new();
    for orbit in &orbits {
        let mut path = Vec::new();
        for &x in orbit {
            if let Some((edge, forward)) = edge_at(x) {
                path.push(PathStep { edge, forward });
            }
        }
        paths.push(path);
    }
    // Oriented coverage over fully interior inter-vertex edges.
    let interior_edge = |e: &ClassEdge| -> bool {
        e.u != e.v && !bar.vertices[e.u].boundary && !bar.vertices[e.v].boundary
    };
    let mut covered: BTreeMap<(usize, bool), usize> = BTreeMap::new();
    for path in &paths {
        for step in path {
            if interior_edge(&bar.edges[step.edge]) {
                *covered.entry((step.edge, step.forward)).or_default() += 1;
            }
        }
    }
    for (i, e) in bar.edges.iter().enumerate() {
        if !interior_edge(e) {
            continue;
        }
        for dir in [true, false] {
            match covered.get(&(i, dir)).copied().unwrap_or(0) {
                1 => {}
                k => {
                    return Err(PathError::NotQuasiEulerian(format!(
                        "oriented edge {:?} direction {dir} covered {k} times",
                        e.label
                    )))
                }
            }
        }
    }
    // Reduced except at valence-1 vertices.
    for path in &paths {
        for w in path.windows(2) {
            if w[0].edge == w[1].edge && w[0].forward != w[1].forward {
                let e = &bar.edges[w[0].edge];
                let mid = if w[0].forward { e.v } else { e.u };
                if bar.valence(mid) != 1 && !bar.vertices[mid].boundary {
                    return Err(PathError::NotQuasiEulerian(format!(
                        "immediate backtrack at a vertex of valence {}",
                        bar.valence(mid)
                    )));
                }
            }
        }
    }
    let mut it = paths.into_iter();
    Ok((it.next().unwrap(), it.next().unwrap()))
}

/// Deterministic DOT text of a window: vertices `n_e` sorted by (n, e);
/// A-edges undirected bold, B-edges directed solid, V-edges undirected
/// dashed.
pub fn export_dot(g: &GammaWindow) -> String {
    let mut out = String::from("digraph coset_window {\n");
    let name = |x: Node| format!("\"{}_{}\"", x.n, x.e);
    for x in g.vertices() {
        let _ = writeln!(out, "  {};", name(x));
    }
    for (&x, &y) in g.a.iter() {
        if y < x {
            continue;
        }
        let _ = writeln!(out, "  {} -> {} [dir=none, style=bold];", name(x), name(y));
    }
    for (&x, &y) in g.b.iter() {
        let _ = writeln!(out, "  {} -> {} [style=solid];", name(x), name(y));
    }
    for (&x, &y) in g.v.iter() {
        if y < x {
            continue;
        }
        let _ = writeln!(out, "  {} -> {} [dir=none, style=dashed];", name(x), name(y));
    }
    out.push_str("}\n");
    out
}

/// The involution generators of the example subgroup: V together with the
/// conjugates C^{3k} A C^{-3k} and C^{3k+2} B A B^{-1} C^{-3k-2} for |k| <= K.
pub fn fig1_generators(k_max: i64) -> Vec<(String, GroupElement)> {
    let a = GroupElement::omega();
    let b = GroupElement::phi();
    let c = GroupElement::tau();
    let mut out = vec![("V".to_string(), GroupElement::nu())];
    for k in -k_max..=k_max {
        out.push((
            format!("C^{}AC^{}", 3 * k, -3 * k),
            c.pow(3 * k).mul(&a).mul(&c.pow(-3 * k)),
        ));
        let bab = b.mul(&a).mul(&b.inverse());
        out.push((
            format!("C^{}BAB^-1C^{}", 3 * k + 2, -3 * k - 2),
            c.pow(3 * k + 2).mul(&bab).mul(&c.pow(-3 * k - 2)),
        ));
    }
    out
}

/// The symmetry of the example generators under V: conjugation carries
/// a_k = C^{3k}AC^{-3k} to a_{-k} and b_k = C^{3k+2}BAB^{-1}C^{-3k-2} to
/// b_{-k-1}. This follows from (AV)^2 = 1 and shows V is not independent
/// of the conjugate involutions; the free product is carried by them alone.
pub fn fig1_conjugation_checks(k_max: i64) -> Vec<(String, bool)> {
    let a = GroupElement::omega();
    let b = GroupElement::phi();
    let c = GroupElement::tau();
    let nu = GroupElement::nu();
    let a_k = |k: i64| c.pow(3 * k).mul(&a).mul(&c.pow(-3 * k));
    let bab = b.mul(&a).mul(&b.inverse());
    let b_k = |k: i64| c.pow(3 * k + 2).mul(&bab).mul(&c.pow(-3 * k - 2));
    let mut out = Vec::new();
    for k in -k_max..=k_max {
        out.push((
            format!("V a_{k} V = a_{}", -k),
            nu.mul(&a_k(k)).mul(&nu) == a_k(-k),
        ));
        out.push((
            format!("V b_{k} V = b_{}", -k - 1),
            nu.mul(&b_k(k)).mul(&nu) == b_k(-k - 1),
        ));
    }
    out
}

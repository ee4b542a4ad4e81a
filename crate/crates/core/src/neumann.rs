//! The Neumann subgroup determined by an involution spec: coset action,
//! Schreier generators, rewriting and membership, rational transitivity,
//! structure vectors and the modular part.

use crate::invospec::{InvolutionSpec, Sign, SpecError};
use crate::pgl2::{
    classify, eval_word, moebius_image, ElementClass, GroupElement, Letter, RationalPoint, Word,
};
use num_integer::Integer;
use num_traits::Zero;
use std::collections::BTreeMap;
use std::fmt;

/// The coset S tau^n nu^e, encoded as (n, e). The base node (0,0) is the
/// stabilized coset of the subgroup itself.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Node {
    pub n: i64,
    pub e: u8,
}

impl Node {
    pub fn new(n: i64, e: u8) -> Self {
        debug_assert!(e < 2);
        Self { n, e }
    }

    pub fn base() -> Self {
        Self::new(0, 0)
    }

    /// The coset representative tau^n nu^e.
    pub fn rep(&self) -> GroupElement {
        let t = GroupElement::tau().pow(self.n);
        if self.e == 1 {
            t.mul(&GroupElement::nu())
        } else {
            t
        }
    }
}

impl fmt::Display for Node {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.n, self.e)
    }
}

fn flip(e: u8) -> u8 {
    1 - e
}

/// Sign of (-1)^e.
fn par(e: u8) -> i64 {
    if e == 0 {
        1
    } else {
        -1
    }
}

/// The closed-form right action of one letter on a coset node:
/// C: (n,e) -> (n+(-1)^e, e);  V: (n,e) -> (n, 1-e);
/// A: (n,e) -> (iota(n), e+(1-delta_n)/2);  B = A then C; B^2 and C^-1 invert.
pub fn act(spec: &InvolutionSpec, letter: Letter, node: Node) -> Result<Node, SpecError> {
    let Node { n, e } = node;
    Ok(match letter {
        Letter::C => Node::new(n + par(e), e),
        Letter::CInv => Node::new(n - par(e), e),
        Letter::V => Node::new(n, flip(e)),
        Letter::A => {
            let i = spec.iota(n)?;
            let e2 = if spec.delta(n)? == 1 { e } else { flip(e) };
            Node::new(i, e2)
        }
        Letter::B => {
            let mid = act(spec, Letter::A, node)?;
            act(spec, Letter::C, mid)?
        }
        Letter::B2 => {
            let mid = act(spec, Letter::CInv, node)?;
            act(spec, Letter::A, mid)?
        }
    })
}

/// Order class of a Schreier generator.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OrderClass {
    Order2,
    Order3,
    Infinite,
}

impl fmt::Display for OrderClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OrderClass::Order2 => write!(f, "2"),
            OrderClass::Order3 => write!(f, "3"),
            OrderClass::Infinite => write!(f, "inf"),
        }
    }
}

fn order_class(g: &GroupElement) -> OrderClass {
    match classify(g) {
        ElementClass::Elliptic2 | ElementClass::IsotropicInvolution => OrderClass::Order2,
        ElementClass::Elliptic3 => OrderClass::Order3,
        _ => OrderClass::Infinite,
    }
}

/// The Schreier generator Sigma_n with its matrix and invariants.
#[derive(Clone, Debug)]
pub struct SigmaGenerator {
    pub index: i64,
    pub partner: i64,
    pub delta: Sign,
    pub matrix: GroupElement,
    pub class: OrderClass,
}

/// The word C^n A V^{(1-delta_n)/2} C^{-iota(n)}.
pub fn sigma_letters(spec: &InvolutionSpec, n: i64) -> Result<Word, SpecError> {
    let i = spec.iota(n)?;
    let d = spec.delta(n)?;
    let mut w = Word::new();
    let power = |w: &mut Word, k: i64| {
        let letter = if k >= 0 { Letter::C } else { Letter::CInv };
        for _ in 0..k.unsigned_abs() {
            w.push(letter);
        }
    };
    power(&mut w, n);
    w.push(Letter::A);
    if d == -1 {
        w.push(Letter::V);
    }
    power(&mut w, -i);
    Ok(w)
}

pub fn sigma(spec: &InvolutionSpec, n: i64) -> Result<SigmaGenerator, SpecError> {
    let matrix = eval_word(&sigma_letters(spec, n)?);
    let class = order_class(&matrix);
    Ok(SigmaGenerator {
        index: n,
        partner: spec.iota(n)?,
        delta: spec.delta(n)?,
        matrix,
        class,
    })
}

/// One failed generator identity.
#[derive(Clone, Debug)]
pub struct RelationViolation {
    pub index: i64,
    pub relation: String,
}

/// Checks, for every n in [-window, window]:
/// det Sigma_n = delta_n, Sigma_n Sigma_{iota(n)} = 1 and
/// Sigma_n Sigma_{iota(n)+delta_n} Sigma_{iota(n-1)} = 1, exactly.
pub fn verify_relations(spec: &InvolutionSpec, window: i64) -> Vec<RelationViolation> {
    let mut out = Vec::new();
    let mut cache: BTreeMap<i64, GroupElement> = BTreeMap::new();
    let get = |cache: &mut BTreeMap<i64, GroupElement>, n: i64| -> Option<GroupElement> {
        if let Some(g) = cache.get(&n) {
            return Some(g.clone());
        }
        let g = sigma(spec, n).ok()?.matrix;
        cache.insert(n, g.clone());
        Some(g)
    };
    for n in -window..=window {
        let (i_n, d_n) = match (spec.iota(n), spec.delta(n)) {
            (Ok(i), Ok(d)) => (i, d),
            _ => continue,
        };
        let s_n = match get(&mut cache, n) {
            Some(g) => g,
            None => continue,
        };
        if s_n.det() != d_n {
            out.push(RelationViolation {
                index: n,
                relation: format!("det Sigma_{n} = {} but delta = {d_n}", s_n.det()),
            });
        }
        if let Some(s_p) = get(&mut cache, i_n) {
            if !s_n.mul(&s_p).is_identity() {
                out.push(RelationViolation {
                    index: n,
                    relation: format!("Sigma_{n} Sigma_{i_n} != 1"),
                });
            }
        }
        if let (Some(s_mid), Ok(i_prev)) = (get(&mut cache, i_n + d_n as i64), spec.iota(n - 1)) {
            if let Some(s_last) = get(&mut cache, i_prev) {
                if !s_n.mul(&s_mid).mul(&s_last).is_identity() {
                    out.push(RelationViolation {
                        index: n,
                        relation: format!(
                            "Sigma_{n} Sigma_{} Sigma_{} != 1",
                            i_n + d_n as i64,
                            i_prev
                        ),
                    });
                }
            }
        }
    }
    out
}

/// Result of the Reidemeister-Schreier rewriting of a word.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    /// Emitted Sigma indices, all with exponent +1.
    pub sigma_indices: Vec<i64>,
    /// The final coset node; membership in the subgroup is node == (0,0).
    pub node: Node,
}

impl Decomposition {
    pub fn in_subgroup(&self) -> bool {
        self.node == Node::base()
    }
}

/// Serializes a Sigma-word as `S<n>` tokens.
pub fn sigma_word_string(indices: &[i64]) -> String {
    if indices.is_empty() {
        return "(empty)".into();
    }
    indices
        .iter()
        .map(|n| format!("S{n}"))
        .collect::<Vec<_>>()
        .join(" ")
}

pub fn eval_sigma_word(spec: &InvolutionSpec, indices: &[i64]) -> Result<GroupElement, SpecError> {
    let mut acc = GroupElement::identity();
    for &n in indices {
        acc = acc.mul(&sigma(spec, n)?.matrix);
    }
    Ok(acc)
}

/// Walks the coset nodes from (0,0) and emits a Schreier generator for each
/// A- or B-type letter: A and B emit Sigma at the current node, B^2 emits
/// after a virtual C^-1 step, and V, C, C^-1 emit nothing. The contract
/// eval(w) = eval(sigma_word) * tau^n * nu^e holds exactly.
pub fn decompose(spec: &InvolutionSpec, word: &[Letter]) -> Result<Decomposition, SpecError> {
    let mut node = Node::base();
    let mut sigma_indices = Vec::new();
    for &letter in word {
        match letter {
            Letter::A | Letter::B => sigma_indices.push(node.n),
            Letter::B2 => sigma_indices.push(node.n - par(node.e)),
            Letter::V | Letter::C | Letter::CInv => {}
        }
        node = act(spec, letter, node)?;
    }
    Ok(Decomposition {
        sigma_indices,
        node,
    })
}

/// A letter word whose evaluation sends infinity to x, built by the
/// Euclidean expansion p/q = a + 1/(-(−q/r)) with C- and A-letters.
fn word_with_image(x: &RationalPoint) -> Word {
    let mut word = Word::new();
    let mut p = x.numer().clone();
    let mut q = x.denom().clone();
    while !q.is_zero() {
        // p = a q + r with 0 <= r < q (q > 0 here); C^a shifts, A inverts.
        let (a, r) = p.div_mod_floor(&q);
        let a64: i64 = a.to_string().parse().expect("coefficient fits i64");
        let letter = if a64 >= 0 { Letter::C } else { Letter::CInv };
        for _ in 0..a64.unsigned_abs() {
            word.push(letter);
        }
        word.push(Letter::A);
        // A(t) = -1/t, so the remaining target is -q/r.
        p = -q;
        q = r;
    }
    word
}

/// Transitivity on Q*: returns a Sigma-word s with eval(s)(infinity) = x.
pub fn reach_rational(spec: &InvolutionSpec, x: &RationalPoint) -> Result<Vec<i64>, SpecError> {
    let word = word_with_image(x);
    debug_assert_eq!(moebius_image(&eval_word(&word), &RationalPoint::infinity()), *x);
    let dec = decompose(spec, &word)?;
    Ok(dec.sigma_indices)
}

/// A finite-or-infinite multiplicity in a free-product structure vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Count {
    Finite(u64),
    Infinite,
}

impl Count {
    fn double(self) -> Count {
        match self {
            Count::Finite(k) => Count::Finite(2 * k),
            Count::Infinite => Count::Infinite,
        }
    }

    fn double_minus_one(self) -> Count {
        match self {
            Count::Finite(0) => Count::Finite(0),
            Count::Finite(k) => Count::Finite(2 * k - 1),
            Count::Infinite => Count::Infinite,
        }
    }
}

impl fmt::Display for Count {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Count::Finite(k) => write!(f, "{k}"),
            Count::Infinite => write!(f, "inf"),
        }
    }
}

/// Multiplicities (r2, r3, r_inf) of free-product factors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct StructureVector {
    pub r2: Count,
    pub r3: Count,
    pub r_inf: Count,
}

impl fmt::Display for StructureVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.r2, self.r3, self.r_inf)
    }
}

/// A surviving independent generator of one block after Tietze elimination.
#[derive(Clone, Debug)]
pub struct Survivor {
    pub index: i64,
    pub class: OrderClass,
    pub matrix: GroupElement,
}

/// Per-block Tietze elimination.
///
/// Partners are eliminated first via Sigma_n Sigma_{iota(n)} = 1, then the
/// chain relations R(j): sigma_{k+j} = sigma_{k+j+1} sigma_{iota(k+j+1)+delta}
/// eliminate every generator that occurs exactly once in some relation.
/// What remains are the independent generators delivered by the block.
pub fn block_survivors(spec: &InvolutionSpec, seq: i64) -> Result<Vec<Survivor>, SpecError> {
    let block = spec.block_at(seq)?;
    let k = spec.block_start(seq)?;
    let l = block.l() as i64;

    // Canonical generator of a pair is the smaller index.
    let canon = |n: i64| -> (i64, i32) {
        let p = k + block.pairing()[(n - k) as usize] as i64;
        if p < n {
            (p, -1)
        } else {
            (n, 1)
        }
    };
    let reduce = |w: Vec<(i64, i32)>| -> Vec<(i64, i32)> {
        let mut out: Vec<(i64, i32)> = Vec::new();
        for (g, e) in w {
            if let Some(last) = out.last_mut() {
                if last.0 == g {
                    last.1 += e;
                    if last.1 == 0 {
                        out.pop();
                    }
                    continue;
                }
            }
            out.push((g, e));
        }
        out
    };

    let mut gens: Vec<i64> = (k..=k + l).map(|n| canon(n).0).collect();
    gens.sort_unstable();
    gens.dedup();

    // Chain relations rewritten over canonical generators.
    let mut relations: Vec<Vec<(i64, i32)>> = Vec::new();
    for j in 0..l {
        let lhs = k + j;
        let mid = k + j + 1;
        let last = spec.iota(mid)? + spec.delta(mid)? as i64;
        if !(k..=k + l).contains(&last) {
            // Happens only for specs that fail global validation (e.g. a
            // flipped endpoint sign); elimination is meaningless there.
            return Err(SpecError::InvalidBlock {
                index: (mid - k) as usize,
                reason: "chain relation leaves the block; spec fails the chain identity".into(),
            });
        }
        let word = vec![
            {
                let (g, e) = canon(lhs);
                (g, -e)
            },
            canon(mid),
            canon(last),
        ];
        // Expand to single-exponent letters before reduction.
        let letters: Vec<(i64, i32)> = word.into_iter().collect();
        relations.push(reduce(letters));
    }

    // Eliminate generators that occur exactly once in some relation.
    loop {
        let mut progress = false;
        'rels: for ri in 0..relations.len() {
            if relations[ri].is_empty() {
                continue;
            }
            for &g in &gens {
                let occurrences: i32 = relations[ri]
                    .iter()
                    .filter(|(h, _)| *h == g)
                    .map(|(_, e)| e.abs())
                    .sum();
                if occurrences != 1 {
                    continue;
                }
                // Solve the relation for g: rotate so the g-letter is first,
                // then g^e = inverse of the rest.
                let pos = relations[ri].iter().position(|(h, _)| *h == g).unwrap();
                let rel = relations[ri].clone();
                let (g_exp, mut rest): (i32, Vec<(i64, i32)>) = {
                    let mut rot = rel.clone();
                    rot.rotate_left(pos);
                    let (head, tail) = rot.split_first().unwrap();
                    (head.1, tail.to_vec())
                };
                // g^g_exp * rest = 1  =>  g^g_exp = rest^-1.
                rest.reverse();
                for t in &mut rest {
                    t.1 = -t.1;
                }
                let replacement: Vec<(i64, i32)> = if g_exp == 1 {
                    rest
                } else {
                    // g^-1 = rest^-1  =>  g = rest.
                    let mut r = rest;
                    r.reverse();
                    for t in &mut r {
                        t.1 = -t.1;
                    }
                    r
                };
                // Substitute in every other relation.
                for rj in 0..relations.len() {
                    if rj == ri {
                        continue;
                    }
                    let mut new_rel: Vec<(i64, i32)> = Vec::new();
                    for &(h, e) in &relations[rj] {
                        if h != g {
                            new_rel.push((h, e));
                            continue;
                        }
                        for _ in 0..e.abs() {
                            if e > 0 {
                                new_rel.extend(replacement.iter().copied());
                            } else {
                                new_rel.extend(replacement.iter().rev().map(|&(x, y)| (x, -y)));
                            }
                        }
                    }
                    relations[rj] = reduce(new_rel);
                }
                relations[ri].clear();
                gens.retain(|&h| h != g);
                progress = true;
                break 'rels;
            }
        }
        if !progress {
            break;
        }
    }

    // Residual relations must be consistent with the matrices.
    for rel in &relations {
        if rel.is_empty() {
            continue;
        }
        let mut acc = GroupElement::identity();
        for &(g, e) in rel {
            let m = sigma(spec, g)?.matrix;
            let m = if e < 0 { m.inverse() } else { m };
            for _ in 0..e.abs() {
                acc = acc.mul(&m);
            }
        }
        assert!(acc.is_identity(), "residual relation does not evaluate to 1");
    }

    gens.into_iter()
        .map(|g| {
            let s = sigma(spec, g)?;
            Ok(Survivor {
                index: g,
                class: s.class,
                matrix: s.matrix,
            })
        })
        .collect()
}

/// Structure computation for a cyclic spec.
#[derive(Clone, Debug)]
pub struct StructureReport {
    /// Survivor counts (order 2, order 3, infinite) contributed by one pass
    /// over the block list.
    pub per_period: (u64, u64, u64),
    /// Structure vector of the Neumann subgroup of the extended group.
    pub s_hat: StructureVector,
    /// Structure vector of the modular part S.
    pub s: StructureVector,
    /// True iff every delta is +1, i.e. the spec defines a classical Neumann
    /// subgroup of the modular group and the doubling formula does not apply.
    pub classical: bool,
}

pub fn structure(spec: &InvolutionSpec) -> Result<StructureReport, SpecError> {
    let mut per = (0u64, 0u64, 0u64);
    for seq in 0..spec.blocks().len() as i64 {
        for sv in block_survivors(spec, seq)? {
            match sv.class {
                OrderClass::Order2 => per.0 += 1,
                OrderClass::Order3 => per.1 += 1,
                OrderClass::Infinite => per.2 += 1,
            }
        }
    }
    let lift = |count: u64| -> Count {
        if !spec.is_cyclic() {
            Count::Finite(count)
        } else if count > 0 {
            Count::Infinite
        } else {
            Count::Finite(0)
        }
    };
    let s_hat = StructureVector {
        r2: lift(per.0),
        r3: lift(per.1),
        r_inf: lift(per.2),
    };
    let classical = !spec.has_negative_determinant();
    let s = if classical {
        s_hat
    } else {
        StructureVector {
            r2: s_hat.r2.double(),
            r3: s_hat.r3.double(),
            r_inf: s_hat.r_inf.double_minus_one(),
        }
    };
    Ok(StructureReport {
        per_period: per,
        s_hat,
        s,
        classical,
    })
}

#[derive(Debug, thiserror::Error)]
pub enum ModularError {
    #[error("no generator of negative determinant in the window")]
    NoNegativeDeterminant,
    #[error(transparent)]
    Spec(#[from] SpecError),
}

/// A generator of the modular part S together with its Schreier expression.
#[derive(Clone, Debug)]
pub struct ModularGenerator {
    pub matrix: GroupElement,
    pub expression: String,
    /// The same element as a product of Sigma generators (all exponent +1;
    /// inverses appear as the partner index).
    pub sigma_indices: Vec<i64>,
}

/// The Schreier generating set { E^e Sigma_n E^{-e delta_n + (delta_n-1)/2} }
/// of S over the window, with E = Sigma_m for the smallest |m| with
/// delta_m = -1 (ties: negative m first). Identities and duplicates removed.
pub fn modular_generators(
    spec: &InvolutionSpec,
    window: i64,
) -> Result<Vec<ModularGenerator>, ModularError> {
    let mut e_index = None;
    for n in 0..=window {
        for cand in [-n, n] {
            if spec.delta(cand).map(|d| d == -1).unwrap_or(false) {
                e_index = Some(cand);
                break;
            }
        }
        if e_index.is_some() {
            break;
        }
    }
    let e_index = e_index.ok_or(ModularError::NoNegativeDeterminant)?;
    let e = sigma(spec, e_index)?.matrix;
    let e_inv_index = spec.iota(e_index)?;

    let mut seen = std::collections::BTreeSet::new();
    let mut out = Vec::new();
    for n in -window..=window {
        let (s_n, d_n) = match sigma(spec, n) {
            Ok(s) => {
                let d = s.delta;
                (s.matrix, d)
            }
            Err(_) => continue,
        };
        for eps in [0i64, 1] {
            let right = -eps * d_n as i64 + (d_n as i64 - 1) / 2;
            let g = e.pow(eps).mul(&s_n).mul(&e.pow(right));
            if g.is_identity() || !seen.insert(g.clone()) {
                continue;
            }
            let mut sigma_indices = vec![e_index; eps as usize];
            sigma_indices.push(n);
            let tail = if right >= 0 { e_index } else { e_inv_index };
            sigma_indices.extend(std::iter::repeat(tail).take(right.unsigned_abs() as usize));
            out.push(ModularGenerator {
                expression: format!("E^{eps} S{n} E^{right}"),
                matrix: g,
                sigma_indices,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::invospec::{spec_b2_b3_binf_cyclic, spec_binf_cyclic};
    use crate::pgl2::parse_word;

    #[test]
    fn action_closed_forms() {
        let s = spec_binf_cyclic();
        assert_eq!(act(&s, Letter::A, Node::base()).unwrap(), Node::new(1, 1));
        // B-3-cycle through (0,0), (0,1), (2,0).
        let b1 = act(&s, Letter::B, Node::base()).unwrap();
        let b2 = act(&s, Letter::B, b1).unwrap();
        let b3 = act(&s, Letter::B, b2).unwrap();
        assert_eq!(b1, Node::new(0, 1));
        assert_eq!(b2, Node::new(2, 0));
        assert_eq!(b3, Node::base());
        // V is an involution on every node.
        for n in -5..5 {
            for e in 0..2 {
                let node = Node::new(n, e);
                let vv = act(&s, Letter::V, act(&s, Letter::V, node).unwrap()).unwrap();
                assert_eq!(vv, node);
            }
        }
    }

    #[test]
    fn quadruple_axioms_hold_on_nodes() {
        for spec in [spec_binf_cyclic(), spec_b2_b3_binf_cyclic()] {
            for n in -40..=40 {
                for e in 0..2 {
                    let node = Node::new(n, e);
                    let run = |ls: &[Letter]| {
                        ls.iter()
                            .try_fold(node, |acc, &l| act(&spec, l, acc))
                            .unwrap()
                    };
                    assert_eq!(run(&[Letter::A, Letter::A]), node);
                    assert_eq!(run(&[Letter::V, Letter::V]), node);
                    assert_eq!(run(&[Letter::B, Letter::B, Letter::B]), node);
                    assert_eq!(run(&[Letter::A, Letter::V, Letter::A, Letter::V]), node);
                    assert_eq!(
                        run(&[
                            Letter::A,
                            Letter::B,
                            Letter::V,
                            Letter::A,
                            Letter::B,
                            Letter::V
                        ]),
                        node
                    );
                    // B2 acts as the inverse of B.
                    assert_eq!(run(&[Letter::B, Letter::B2]), node);
                }
            }
        }
    }

    #[test]
    fn sigma_worked_examples() {
        let binf = spec_binf_cyclic();
        let s0 = sigma(&binf, 0).unwrap();
        assert_eq!(s0.matrix, GroupElement::new(0, -1, -1, 1));
        assert_eq!(s0.delta, -1);
        assert_eq!(s0.class, OrderClass::Infinite);
        let sm1 = sigma(&binf, -1).unwrap();
        assert_eq!(sm1.matrix, GroupElement::new(-1, 1, 1, -2));
        assert_eq!(sm1.delta, 1);
        assert_eq!(sm1.class, OrderClass::Infinite);

        let mixed = spec_b2_b3_binf_cyclic();
        let sm1 = sigma(&mixed, -1).unwrap();
        assert_eq!(sm1.matrix, GroupElement::new(-1, -2, 1, 1));
        assert_eq!(sm1.class, OrderClass::Order2);
    }

    #[test]
    fn relation_identities() {
        let binf = spec_binf_cyclic();
        assert!(verify_relations(&binf, 60).is_empty());
        assert!(verify_relations(&spec_b2_b3_binf_cyclic(), 60).is_empty());
        // The worked identity Sigma_0^2 = Sigma_2^-1.
        let s0 = sigma(&binf, 0).unwrap().matrix;
        let s2 = sigma(&binf, 2).unwrap().matrix;
        assert_eq!(s2, GroupElement::new(2, 1, 1, 1));
        assert_eq!(s0.mul(&s0), s2.inverse());
        assert_eq!(s0.mul(&s0), GroupElement::new(1, -1, -1, 2));
    }

    #[test]
    fn decompose_examples() {
        let spec = spec_b2_b3_binf_cyclic();
        let empty = decompose(&spec, &[]).unwrap();
        assert!(empty.sigma_indices.is_empty());
        assert!(empty.in_subgroup());

        let dec = decompose(&spec, &parse_word("w").unwrap()).unwrap();
        assert_eq!(dec.node, Node::new(1, 0));
        assert_eq!(dec.sigma_indices, vec![0]);
        let s0 = sigma(&spec, 0).unwrap().matrix;
        assert_eq!(s0, GroupElement::new(0, -1, 1, -1));
        // omega = Sigma_0 * tau.
        assert_eq!(s0.mul(&GroupElement::tau()), GroupElement::omega());
    }

    #[test]
    fn reach_rational_examples() {
        let spec = spec_b2_b3_binf_cyclic();
        assert!(reach_rational(&spec, &RationalPoint::infinity())
            .unwrap()
            .is_empty());
        let word = reach_rational(&spec, &RationalPoint::new(0, 1)).unwrap();
        let g = eval_sigma_word(&spec, &word).unwrap();
        assert_eq!(
            moebius_image(&g, &RationalPoint::infinity()),
            RationalPoint::new(0, 1)
        );
    }

    #[test]
    fn block_survivor_classes() {
        let spec = spec_b2_b3_binf_cyclic();
        let b2 = block_survivors(&spec, 0).unwrap();
        assert_eq!(b2.len(), 1);
        assert_eq!(b2[0].index, -1);
        assert_eq!(b2[0].class, OrderClass::Order2);
        let b3 = block_survivors(&spec, 1).unwrap();
        assert_eq!(b3.len(), 1);
        assert_eq!(b3[0].index, 0);
        assert_eq!(b3[0].class, OrderClass::Order3);
        let binf = block_survivors(&spec, 2).unwrap();
        assert_eq!(binf.len(), 1);
        assert_eq!(binf[0].index, 4);
        assert_eq!(binf[0].class, OrderClass::Infinite);
        assert_eq!(binf[0].matrix.det(), -1);
    }

    #[test]
    fn structure_vectors() {
        let binf = structure(&spec_binf_cyclic()).unwrap();
        assert_eq!(binf.per_period, (0, 0, 1));
        assert_eq!(binf.s_hat.r_inf, Count::Infinite);
        assert_eq!(binf.s_hat.r2, Count::Finite(0));
        assert_eq!(binf.s.r_inf, Count::Infinite);
        assert!(!binf.classical);

        let mixed = structure(&spec_b2_b3_binf_cyclic()).unwrap();
        assert_eq!(mixed.per_period, (1, 1, 1));
        assert_eq!(mixed.s_hat.r2, Count::Infinite);
        assert_eq!(mixed.s_hat.r3, Count::Infinite);
    }

    #[test]
    fn modular_generator_invariants() {
        let spec = spec_binf_cyclic();
        let gens = modular_generators(&spec, 4).unwrap();
        assert!(!gens.is_empty());
        for g in &gens {
            assert_eq!(g.matrix.det(), 1, "modular generator {} has det -1", g.expression);
            let eval = eval_sigma_word(&spec, &g.sigma_indices).unwrap();
            assert_eq!(eval, g.matrix, "sigma word mismatch for {}", g.expression);
        }
    }
}

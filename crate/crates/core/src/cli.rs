//! Command-line front end: binds spec files to the verification,
//! construction, scan and export pipelines.
//!
//! Every run prints a human-readable report followed by a final
//! machine-parsable line `RESULT <subcommand> <PASS|FAIL|INFO>`; the exit
//! code is 0 for success/PASS, 1 for a verification FAIL and 2 for input
//! errors.

use crate::graph232::{
    self, betti, build_window, c_orbits, contract_b, core_indices, exit_count, export_dot,
    prune, quotient_av, validate_axioms, ContractedGraph, Stage,
};
use crate::invospec::{parse_spec, validate, InvolutionSpec};
use crate::neumann::{
    block_survivors, decompose, eval_sigma_word, modular_generators, reach_rational, sigma,
    sigma_word_string, structure, verify_relations,
};
use crate::oracle::{
    anisotropy_control, anisotropy_scan, factors_from_survivors, freeness_scan,
    maximality_identity_scan, MaximalityOutcome, Verdict,
};
use crate::pgl2::{
    check_presentation, classify, eval_word, moebius_image, parse_word, word_to_string,
    GroupElement, RationalPoint,
};
use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigInt;
use std::fmt::Write as _;
use std::path::PathBuf;

#[derive(Parser, Debug)]
#[command(
    name = "extmodular",
    about = "Neumann subgroups of the extended modular group: construction, verification, scans"
)]
pub struct RunConfig {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum StageArg {
    Gamma,
    Bar,
    Tilde,
    Bar0,
    Tilde0,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckArg {
    Freeness,
    Anisotropy,
    Maximality,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Check the group presentation, the involution identities, the
    /// Schreier-generator relations and the coset-graph criterion.
    Verify {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 100)]
        window: i64,
    },
    /// Print one Schreier generator: word, matrix, determinant, class.
    Sigma {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
    },
    /// Structure vectors of the subgroup and of its modular part.
    Structure {
        #[arg(long)]
        spec: PathBuf,
    },
    /// Build a window of the coset graph, contract/prune to a stage, and
    /// optionally export DOT.
    Graph {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, default_value_t = 10)]
        window: i64,
        #[arg(long, value_enum, default_value_t = StageArg::Gamma)]
        stage: StageArg,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Rewrite a word over the generators into Schreier generators and
    /// decide membership.
    Rewrite {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Produce a subgroup element carrying infinity to a rational target.
    Reach {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        target: String,
    },
    /// Run a brute-force certification scan.
    Scan {
        #[arg(long)]
        spec: PathBuf,
        #[arg(long, value_enum)]
        check: CheckArg,
        #[arg(long, default_value_t = 50)]
        window: i64,
        #[arg(long, default_value_t = 0)]
        max_len: usize,
    },
    /// Verify the two-orbit example: involutions, conjugation symmetry,
    /// freeness of the conjugate factors, and its window axioms.
    Fixture,
}

enum Outcome {
    Pass,
    Fail,
    Info,
}

fn input_error(report: &mut String, sub: &str, msg: impl std::fmt::Display) -> (String, i32) {
    let _ = writeln!(report, "input error: {msg}");
    let _ = writeln!(report, "RESULT {sub} FAIL");
    (std::mem::take(report), 2)
}

fn load_spec(path: &PathBuf) -> Result<InvolutionSpec, String> {
    let text =
        std::fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))
}

/// Runs one invocation; returns the full report text and the exit code.
pub fn run(config: RunConfig) -> (String, i32) {
    let mut report = String::new();
    let (sub, outcome) = match &config.command {
        Command::Verify { spec, window } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "verify", e),
            };
            ("verify", run_verify(&mut report, &spec, *window))
        }
        Command::Sigma { spec, n } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "sigma", e),
            };
            match run_sigma(&mut report, &spec, *n) {
                Ok(o) => ("sigma", o),
                Err(e) => return input_error(&mut report, "sigma", e),
            }
        }
        Command::Structure { spec } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "structure", e),
            };
            match run_structure(&mut report, &spec) {
                Ok(o) => ("structure", o),
                Err(e) => return input_error(&mut report, "structure", e),
            }
        }
        Command::Graph {
            spec,
            window,
            stage,
            dot,
        } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "graph", e),
            };
            match run_graph(&mut report, &spec, *window, *stage, dot.as_ref()) {
                Ok(o) => ("graph", o),
                Err(e) => return input_error(&mut report, "graph", e),
            }
        }
        Command::Rewrite { spec, word } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "rewrite", e),
            };
            match run_rewrite(&mut report, &spec, word) {
                Ok(o) => ("rewrite", o),
                Err(e) => return input_error(&mut report, "rewrite", e),
            }
        }
        Command::Reach { spec, target } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "reach", e),
            };
            match run_reach(&mut report, &spec, target) {
                Ok(o) => ("reach", o),
                Err(e) => return input_error(&mut report, "reach", e),
            }
        }
        Command::Scan {
            spec,
            check,
            window,
            max_len,
        } => {
            let spec = match load_spec(spec) {
                Ok(s) => s,
                Err(e) => return input_error(&mut report, "scan", e),
            };
            match run_scan(&mut report, &spec, *check, *window, *max_len) {
                Ok(o) => ("scan", o),
                Err(e) => return input_error(&mut report, "scan", e),
            }
        }
        Command::Fixture => ("fixture", run_fixture(&mut report)),
    };
    let (tag, code) = match outcome {
        Outcome::Pass => ("PASS", 0),
        Outcome::Fail => ("FAIL", 1),
        Outcome::Info => ("INFO", 0),
    };
    let _ = writeln!(report, "RESULT {sub} {tag}");
    (report, code)
}

fn run_verify(report: &mut String, spec: &InvolutionSpec, window: i64) -> Outcome {
    let mut ok = true;
    for (name, holds) in check_presentation() {
        let _ = writeln!(report, "presentation {name}: {}", tick(holds));
        ok &= holds;
    }
    let violations = validate(spec, window);
    let _ = writeln!(
        report,
        "involution identities on [-{window}, {window}]: {} violations",
        violations.len()
    );
    for v in violations.iter().take(10) {
        let _ = writeln!(report, "  {v}");
    }
    ok &= violations.is_empty();
    let rel = verify_relations(spec, window.min(200));
    let _ = writeln!(
        report,
        "generator relations on [-{0}, {0}]: {1} violations",
        window.min(200),
        rel.len()
    );
    for v in rel.iter().take(10) {
        let _ = writeln!(report, "  index {}: {}", v.index, v.relation);
    }
    ok &= rel.is_empty();
    let g = build_window(spec, window.min(40));
    let axioms = validate_axioms(&g);
    let _ = writeln!(report, "graph axioms: {} violations", axioms.len());
    ok &= axioms.is_empty();
    let (_, check) = c_orbits(&g);
    let _ = writeln!(
        report,
        "C-orbits: {} (open: {}, exchanged by V: {})",
        check.orbit_count, check.all_open, check.v_exchanged
    );
    ok &= check.is_neumann;
    if spec.has_negative_determinant() {
        let connected = graph232::is_connected(&g);
        let _ = writeln!(report, "window connected: {}", tick(connected));
        ok &= connected;
    }
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn run_sigma(report: &mut String, spec: &InvolutionSpec, n: i64) -> Result<Outcome, String> {
    let s = sigma(spec, n).map_err(|e| e.to_string())?;
    let word = crate::neumann::sigma_letters(spec, n).map_err(|e| e.to_string())?;
    let _ = writeln!(report, "Sigma_{n} = {}", word_to_string(&word));
    let _ = writeln!(report, "matrix: {}", s.matrix);
    let _ = writeln!(report, "determinant: {}", s.delta);
    let _ = writeln!(report, "partner: {}", s.partner);
    let _ = writeln!(report, "order class: {}", s.class);
    Ok(Outcome::Info)
}

fn run_structure(report: &mut String, spec: &InvolutionSpec) -> Result<Outcome, String> {
    let st = structure(spec).map_err(|e| e.to_string())?;
    let _ = writeln!(
        report,
        "survivors per period: order2={} order3={} infinite={}",
        st.per_period.0, st.per_period.1, st.per_period.2
    );
    let _ = writeln!(report, "subgroup structure vector: {}", st.s_hat);
    let _ = writeln!(report, "modular part structure vector: {}", st.s);
    if st.classical {
        let _ = writeln!(
            report,
            "all determinants +1: the subgroup already lies in the modular group"
        );
    } else {
        let gens = modular_generators(spec, 6).map_err(|e| e.to_string())?;
        let _ = writeln!(report, "modular generators (window 6): {}", gens.len());
    }
    Ok(Outcome::Info)
}

fn stage_of(arg: StageArg) -> Stage {
    match arg {
        StageArg::Gamma => Stage::Gamma,
        StageArg::Bar => Stage::Bar,
        StageArg::Tilde => Stage::Tilde,
        StageArg::Bar0 => Stage::Bar0,
        StageArg::Tilde0 => Stage::Tilde0,
    }
}

fn contracted_dot(g: &ContractedGraph) -> String {
    let mut out = String::from("digraph contracted {\n");
    for (i, v) in g.vertices.iter().enumerate() {
        if v.members.is_empty() {
            continue;
        }
        let label: Vec<String> = v.members.iter().map(|m| format!("{}_{}", m.n, m.e)).collect();
        let _ = writeln!(out, "  \"c{i}\" [label=\"{}\"];", label.join(" "));
    }
    for e in &g.edges {
        let _ = writeln!(
            out,
            "  \"c{}\" -> \"c{}\" [dir=none, style=bold, label=\"{{S{}, S{}}}\"];",
            e.u, e.v, e.label.0, e.label.1
        );
    }
    out.push_str("}\n");
    out
}

fn run_graph(
    report: &mut String,
    spec: &InvolutionSpec,
    window: i64,
    stage: StageArg,
    dot: Option<&PathBuf>,
) -> Result<Outcome, String> {
    if window < 0 {
        return Err("window must be nonnegative".into());
    }
    let g = build_window(spec, window);
    let axioms = validate_axioms(&g);
    let _ = writeln!(report, "graph axioms: {} violations", axioms.len());
    let stage = stage_of(stage);
    let dot_text = match stage {
        Stage::Gamma => {
            let _ = writeln!(
                report,
                "stage gamma: {} vertices, {} A-edges, {} B-edges, {} V-edges",
                g.vertices().len(),
                g.a.iter().filter(|(x, y)| *x <= *y).count(),
                g.b.len(),
                g.v.iter().filter(|(x, y)| *x <= *y).count()
            );
            export_dot(&g)
        }
        _ => {
            let bar = contract_b(&g, Some(spec));
            let cg = match stage {
                Stage::Bar => bar,
                Stage::Tilde => quotient_av(&bar, &g),
                Stage::Bar0 => prune(&bar).graph,
                Stage::Tilde0 => prune(&quotient_av(&bar, &g)).graph,
                Stage::Gamma => unreachable!(),
            };
            let live = cg.vertices.iter().filter(|v| !v.members.is_empty()).count();
            let _ = writeln!(
                report,
                "stage {:?}: {} vertices, {} edges",
                cg.stage,
                live,
                cg.edges.len()
            );
            if spec.is_cyclic() {
                let core = core_indices(spec, 1);
                let _ = writeln!(
                    report,
                    "core of 1 period: betti {}, exits {}",
                    betti(&cg, &core),
                    exit_count(&cg, &core)
                );
            }
            contracted_dot(&cg)
        }
    };
    if let Some(path) = dot {
        std::fs::write(path, &dot_text).map_err(|e| format!("cannot write DOT: {e}"))?;
        let _ = writeln!(report, "DOT written to {}", path.display());
    }
    if axioms.is_empty() {
        Ok(Outcome::Pass)
    } else {
        Ok(Outcome::Fail)
    }
}

fn run_rewrite(report: &mut String, spec: &InvolutionSpec, word: &str) -> Result<Outcome, String> {
    let letters = parse_word(word).map_err(|e| e.to_string())?;
    let dec = decompose(spec, &letters).map_err(|e| e.to_string())?;
    let _ = writeln!(report, "word: {}", word_to_string(&letters));
    let _ = writeln!(report, "sigma word: {}", sigma_word_string(&dec.sigma_indices));
    let _ = writeln!(report, "node: {}", dec.node);
    let _ = writeln!(report, "in subgroup: {}", dec.in_subgroup());
    // The rewriting contract, verified exactly.
    let lhs = eval_word(&letters);
    let rhs = eval_sigma_word(spec, &dec.sigma_indices)
        .map_err(|e| e.to_string())?
        .mul(&GroupElement::tau().pow(dec.node.n))
        .mul(&GroupElement::nu().pow(dec.node.e as i64));
    let ok = lhs == rhs;
    let _ = writeln!(report, "contract eval(w) = eval(sigma)*C^n*V^e: {}", tick(ok));
    Ok(if ok { Outcome::Pass } else { Outcome::Fail })
}

fn parse_target(text: &str) -> Result<RationalPoint, String> {
    let text = text.trim();
    if text == "inf" || text == "infinity" {
        return Ok(RationalPoint::infinity());
    }
    let (p, q) = match text.split_once('/') {
        Some((p, q)) => (p, q),
        None => (text, "1"),
    };
    let p: BigInt = p.trim().parse().map_err(|_| format!("bad numerator {p:?}"))?;
    let q: BigInt = q.trim().parse().map_err(|_| format!("bad denominator {q:?}"))?;
    if q == BigInt::from(0) && p == BigInt::from(0) {
        return Err("0/0 is not a point".into());
    }
    Ok(RationalPoint::new(p, q))
}

fn run_reach(report: &mut String, spec: &InvolutionSpec, target: &str) -> Result<Outcome, String> {
    let x = parse_target(target)?;
    let indices = reach_rational(spec, &x).map_err(|e| e.to_string())?;
    let _ = writeln!(report, "target: {x}");
    let _ = writeln!(report, "sigma word: {}", sigma_word_string(&indices));
    let g = eval_sigma_word(spec, &indices).map_err(|e| e.to_string())?;
    let image = moebius_image(&g, &RationalPoint::infinity());
    let _ = writeln!(report, "element: {g}");
    let _ = writeln!(report, "image of infinity: {image}");
    Ok(if image == x {
        Outcome::Pass
    } else {
        Outcome::Fail
    })
}

fn run_scan(
    report: &mut String,
    spec: &InvolutionSpec,
    check: CheckArg,
    window: i64,
    max_len: usize,
) -> Result<Outcome, String> {
    match check {
        CheckArg::Freeness => {
            let max_len = if max_len == 0 { 8 } else { max_len };
            let mut survivors = Vec::new();
            for seq in 0..spec.blocks().len() as i64 {
                survivors.extend(block_survivors(spec, seq).map_err(|e| e.to_string())?);
            }
            let factors = factors_from_survivors(&survivors);
            let names: Vec<&str> = factors.iter().map(|f| f.name.as_str()).collect();
            let _ = writeln!(report, "factors: {}", names.join(" "));
            let verdict = freeness_scan(&factors, max_len);
            let _ = writeln!(report, "freeness at length {max_len}: {verdict}");
            Ok(verdict_outcome(&verdict))
        }
        CheckArg::Anisotropy => {
            let max_len = if max_len == 0 { 6 } else { max_len };
            let w = window.min(9);
            let verdict = anisotropy_scan(spec, w, max_len);
            let _ = writeln!(
                report,
                "anisotropy over window [-{w}, {w}] at length {max_len}: {verdict}"
            );
            let control = anisotropy_control(2);
            let _ = writeln!(report, "whole-group control at length 2: {control}");
            Ok(match (&verdict, &control) {
                (Verdict::Pass, Verdict::Fail { .. }) => Outcome::Pass,
                _ => Outcome::Fail,
            })
        }
        CheckArg::Maximality => {
            match maximality_identity_scan(|k| spec.iota(k).ok(), window) {
                MaximalityOutcome::Pass { witnesses } => {
                    let _ = writeln!(
                        report,
                        "sum identity refuted for all |n| <= {window} ({} witnesses)",
                        witnesses.len()
                    );
                    for (n, k) in witnesses.iter().take(5) {
                        let _ = writeln!(report, "  n={n}: k={k}");
                    }
                    Ok(Outcome::Pass)
                }
                MaximalityOutcome::WitnessInconclusive { n } => {
                    let _ = writeln!(report, "no witness for n={n} inside the window");
                    Ok(Outcome::Fail)
                }
            }
        }
    }
}

fn run_fixture(report: &mut String) -> Outcome {
    let mut ok = true;
    let gens = graph232::fig1_generators(1);
    for (name, g) in &gens {
        let inv = g.mul(g).is_identity();
        let _ = writeln!(report, "{name}: {:?}, involution {}", classify(g), tick(inv));
        ok &= inv;
    }
    for (name, holds) in graph232::fig1_conjugation_checks(1) {
        let _ = writeln!(report, "{name}: {}", tick(holds));
        ok &= holds;
    }
    let factors: Vec<_> = gens
        .iter()
        .filter(|(name, _)| name != "V")
        .map(|(name, g)| crate::oracle::FreeFactor {
            name: name.clone(),
            matrix: crate::oracle::Mat2::from_group(g),
            order: crate::neumann::OrderClass::Order2,
        })
        .collect();
    let verdict = freeness_scan(&factors, 6);
    let _ = writeln!(
        report,
        "freeness of the {} conjugate involutions at length 6: {verdict}",
        factors.len()
    );
    ok &= verdict.passed();
    let g = graph232::fig1_window(10);
    let axioms = validate_axioms(&g);
    let _ = writeln!(report, "window axioms: {} violations", axioms.len());
    ok &= axioms.is_empty();
    let (_, check) = c_orbits(&g);
    let _ = writeln!(
        report,
        "C-orbits: {} (exchanged by V: {})",
        check.orbit_count, check.v_exchanged
    );
    ok &= check.orbit_count == 2 && !check.v_exchanged;
    if ok {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn verdict_outcome(v: &Verdict) -> Outcome {
    if v.passed() {
        Outcome::Pass
    } else {
        Outcome::Fail
    }
}

fn tick(b: bool) -> &'static str {
    if b {
        "ok"
    } else {
        "FAIL"
    }
}

//! Brute-force verifiers certifying, at desk scale, what the algebra
//! elsewhere in the crate delivers abstractly: freeness of the generating
//! set, absence of isotropic words, and the maximality identity.
//!
//! The scans run on an independent checked-i128 matrix kernel rather than
//! the big-integer group type, so they cross-check it as well as the claims.

use crate::invospec::InvolutionSpec;
use crate::neumann::{sigma, OrderClass};
use crate::pgl2::GroupElement;
use num_traits::ToPrimitive;
use std::collections::BTreeMap;
use std::fmt;

/// A 2x2 integer matrix over i128 with overflow-checked products,
/// sign-canonicalized like the group type.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mat2 {
    pub a: i128,
    pub b: i128,
    pub c: i128,
    pub d: i128,
}

impl Mat2 {
    pub fn new(a: i128, b: i128, c: i128, d: i128) -> Self {
        Self { a, b, c, d }.canonical()
    }

    fn canonical(mut self) -> Self {
        let first = [self.a, self.b, self.c, self.d]
            .into_iter()
            .find(|&x| x != 0)
            .expect("zero matrix");
        if first < 0 {
            self = Self {
                a: -self.a,
                b: -self.b,
                c: -self.c,
                d: -self.d,
            };
        }
        self
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    pub fn mul(self, r: Self) -> Self {
        let m = |x: i128, y: i128| x.checked_mul(y).expect("scan entry overflow");
        let s = |x: i128, y: i128| x.checked_add(y).expect("scan entry overflow");
        Self::new(
            s(m(self.a, r.a), m(self.b, r.c)),
            s(m(self.a, r.b), m(self.b, r.d)),
            s(m(self.c, r.a), m(self.d, r.c)),
            s(m(self.c, r.b), m(self.d, r.d)),
        )
    }

    pub fn inverse(self) -> Self {
        Self::new(self.d, -self.b, -self.c, self.a)
    }

    pub fn det(self) -> i128 {
        self.a * self.d - self.b * self.c
    }

    pub fn trace_abs(self) -> i128 {
        (self.a + self.d).abs()
    }

    pub fn is_identity(self) -> bool {
        self == Self::identity()
    }

    /// Parabolic or a reflection: the nontrivial isotropic classes.
    pub fn is_isotropic(self) -> bool {
        if self.is_identity() {
            return false;
        }
        (self.det() == 1 && self.trace_abs() == 2) || (self.det() == -1 && self.trace_abs() == 0)
    }

    pub fn from_group(g: &GroupElement) -> Self {
        let (a, b, c, d) = g.entries();
        let cv = |x: &num_bigint::BigInt| x.to_i128().expect("entry exceeds i128 desk scale");
        Self::new(cv(a), cv(b), cv(c), cv(d))
    }
}

impl fmt::Display for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// One free factor: a generator with its declared order.
#[derive(Clone, Debug)]
pub struct FreeFactor {
    pub name: String,
    pub matrix: Mat2,
    pub order: OrderClass,
}

/// Scan outcome with optional witnesses in generator-token syntax.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail { witness: String },
}

impl Verdict {
    pub fn passed(&self) -> bool {
        matches!(self, Verdict::Pass)
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Pass => write!(f, "PASS"),
            Verdict::Fail { witness } => write!(f, "FAIL ({witness})"),
        }
    }
}

/// A letter of the reduced-word alphabet of a free product: a factor index
/// and an exponent (order 2: {1}; order 3: {1, 2}; infinite: {1, -1}).
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
struct Syllable {
    factor: usize,
    exponent: i32,
}

fn letters(factors: &[FreeFactor]) -> Vec<Syllable> {
    let mut out = Vec::new();
    for (i, f) in factors.iter().enumerate() {
        let exps: &[i32] = match f.order {
            OrderClass::Order2 => &[1],
            OrderClass::Order3 => &[1, 2],
            OrderClass::Infinite => &[1, -1],
        };
        for &e in exps {
            out.push(Syllable {
                factor: i,
                exponent: e,
            });
        }
    }
    out
}

fn syllable_matrix(factors: &[FreeFactor], s: Syllable) -> Mat2 {
    let base = if s.exponent < 0 {
        factors[s.factor].matrix.inverse()
    } else {
        factors[s.factor].matrix
    };
    let mut acc = Mat2::identity();
    for _ in 0..s.exponent.unsigned_abs() {
        acc = acc.mul(base);
    }
    acc
}

/// Normal-form adjacency: in a free product, consecutive syllables come
/// from distinct factors except that an infinite factor may repeat in the
/// same direction (we enumerate over single steps for those).
fn may_follow(factors: &[FreeFactor], prev: Syllable, next: Syllable) -> bool {
    if prev.factor != next.factor {
        return true;
    }
    factors[prev.factor].order == OrderClass::Infinite && prev.exponent == next.exponent
}

fn word_name(factors: &[FreeFactor], word: &[Syllable]) -> String {
    word.iter()
        .map(|s| {
            if s.exponent == 1 {
                factors[s.factor].name.clone()
            } else {
                format!("{}^{}", factors[s.factor].name, s.exponent)
            }
        })
        .collect::<Vec<_>>()
        .join(" ")
}

/// Number of reduced words of each length in the declared free product,
/// counted over the same syllable alphabet.
fn reduced_word_count(factors: &[FreeFactor], max_len: usize) -> u128 {
    let alphabet = letters(factors);
    // dp[i] = number of words of the current length ending with syllable i.
    let mut dp: Vec<u128> = vec![1; alphabet.len()];
    let mut total: u128 = alphabet.len() as u128;
    for _ in 1..max_len {
        let mut next = vec![0u128; alphabet.len()];
        for (j, &sj) in alphabet.iter().enumerate() {
            for (i, &si) in alphabet.iter().enumerate() {
                if may_follow(factors, si, sj) {
                    next[j] += dp[i];
                }
            }
        }
        dp = next;
        total += dp.iter().sum::<u128>();
    }
    total
}

/// Enumerates all nonempty reduced words of length at most `max_len` and
/// passes iff they evaluate to pairwise-distinct non-identity matrices;
/// the distinct-matrix count must also equal the theoretical reduced-word
/// count of the declared free product.
pub fn freeness_scan(factors: &[FreeFactor], max_len: usize) -> Verdict {
    assert!(max_len >= 1);
    let alphabet = letters(factors);
    let mut seen: BTreeMap<Mat2, Vec<Syllable>> = BTreeMap::new();
    let mut stack: Vec<(Vec<Syllable>, Mat2)> = alphabet
        .iter()
        .map(|&s| (vec![s], syllable_matrix(factors, s)))
        .collect();
    let mut enumerated: u128 = 0;
    while let Some((word, m)) = stack.pop() {
        enumerated += 1;
        if m.is_identity() {
            return Verdict::Fail {
                witness: format!("{} = identity", word_name(factors, &word)),
            };
        }
        if let Some(other) = seen.insert(m, word.clone()) {
            return Verdict::Fail {
                witness: format!(
                    "{} = {}",
                    word_name(factors, &word),
                    word_name(factors, &other)
                ),
            };
        }
        if word.len() < max_len {
            for &s in &alphabet {
                if may_follow(factors, *word.last().unwrap(), s) {
                    let mut w = word.clone();
                    w.push(s);
                    stack.push((w, m.mul(syllable_matrix(factors, s))));
                }
            }
        }
    }
    let expected = reduced_word_count(factors, max_len);
    if enumerated != expected || seen.len() as u128 != expected {
        return Verdict::Fail {
            witness: format!(
                "word count {} (distinct {}) != free-product count {expected}",
                enumerated,
                seen.len()
            ),
        };
    }
    Verdict::Pass
}

/// A window generator for the anisotropy scan, with the in-window index of
/// its inverse when the partner index falls inside the window.
#[derive(Clone, Debug)]
struct WindowGen {
    index: i64,
    matrix: Mat2,
    inverse_idx: Option<usize>,
}

/// Enumerates reduced words (no generator followed by its inverse) of
/// length at most `max_len` over the window's Schreier generators and
/// passes iff no nontrivial product is isotropic.
pub fn anisotropy_scan(spec: &InvolutionSpec, window: i64, max_len: usize) -> Verdict {
    let mut gens: Vec<WindowGen> = Vec::new();
    for n in -window..=window {
        if let Ok(s) = sigma(spec, n) {
            gens.push(WindowGen {
                index: n,
                matrix: Mat2::from_group(&s.matrix),
                inverse_idx: None,
            });
        }
    }
    for i in 0..gens.len() {
        let inv = gens[i].matrix.inverse();
        gens[i].inverse_idx = gens.iter().position(|g| g.matrix == inv);
    }
    scan_isotropic(&gens, max_len, |i| format!("S{}", gens[i].index))
}

fn scan_isotropic(
    gens: &[WindowGen],
    max_len: usize,
    name: impl Fn(usize) -> String,
) -> Verdict {
    // Depth-first over reduced words with a shared buffer; first failing
    // word in lexicographic order becomes the witness, so the verdict is
    // deterministic.
    fn dfs(gens: &[WindowGen], max_len: usize, word: &mut Vec<usize>, m: Mat2) -> Option<()> {
        if word.len() >= max_len {
            return None;
        }
        let last = word.last().copied();
        for i in 0..gens.len() {
            if last.is_some_and(|l| gens[l].inverse_idx == Some(i)) {
                continue;
            }
            let next = m.mul(gens[i].matrix);
            word.push(i);
            if next.is_isotropic() || dfs(gens, max_len, word, next).is_some() {
                return Some(());
            }
            word.pop();
        }
        None
    }
    let mut word = Vec::new();
    if dfs(gens, max_len, &mut word, Mat2::identity()).is_some() {
        let witness = word.iter().map(|&i| name(i)).collect::<Vec<_>>().join(" ");
        return Verdict::Fail { witness };
    }
    Verdict::Pass
}

/// Negative control for the anisotropy scan: the whole extended group,
/// generated by A, B, V, fails immediately because AB is the translation.
pub fn anisotropy_control(max_len: usize) -> Verdict {
    let gens = vec![
        WindowGen {
            index: 0,
            matrix: Mat2::from_group(&GroupElement::omega()),
            inverse_idx: Some(0),
        },
        WindowGen {
            index: 1,
            matrix: Mat2::from_group(&GroupElement::phi()),
            inverse_idx: None,
        },
        WindowGen {
            index: 2,
            matrix: Mat2::from_group(&GroupElement::nu()),
            inverse_idx: Some(2),
        },
    ];
    let names = ["A", "B", "V"];
    scan_isotropic(&gens, max_len, |i| names[i].to_string())
}

/// Outcome of the maximality identity scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MaximalityOutcome {
    /// Every n in the window has a witness k with iota(k)+iota(n-k) != n.
    Pass { witnesses: Vec<(i64, i64)> },
    /// Some n found no witness inside the window; enlarge it — a finite
    /// window can fail to find a witness but never refute the identity.
    WitnessInconclusive { n: i64 },
}

/// For each n with |n| <= window, searches k with iota(k) + iota(n-k) != n.
/// The derivation of maximality hinges on no involution satisfying the sum
/// identity for every k, so each n must produce a witness.
pub fn maximality_identity_scan(
    iota: impl Fn(i64) -> Option<i64>,
    window: i64,
) -> MaximalityOutcome {
    let mut witnesses = Vec::new();
    'outer: for n in -window..=window {
        for k in -window..=window {
            if let (Some(a), Some(b)) = (iota(k), iota(n - k)) {
                if a + b != n {
                    witnesses.push((n, k));
                    continue 'outer;
                }
            }
        }
        return MaximalityOutcome::WitnessInconclusive { n };
    }
    MaximalityOutcome::Pass { witnesses }
}

/// Builds the factor list for a freeness scan from extraction survivors.
pub fn factors_from_survivors(survivors: &[crate::neumann::Survivor]) -> Vec<FreeFactor> {
    survivors
        .iter()
        .map(|s| FreeFactor {
            name: format!("S{}", s.index),
            matrix: Mat2::from_group(&s.matrix),
            order: s.class,
        })
        .collect()
}

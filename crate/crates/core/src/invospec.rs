//! Involution data (iota, delta) defining a Neumann subgroup.
//!
//! A spec is an ordered list of generating-involution blocks glued together:
//! block 0 starts at -1, block 1 starts right after it, and from then on each
//! block leaves a one-index gap that pairs with the next negative integer.
//! In cyclic mode the block list repeats forever, so iota and delta are total
//! on Z; in finite mode queries outside the covered range are errors.

use std::fmt;

pub type Sign = i32;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SpecError {
    #[error("malformed block: {0}")]
    MalformedBlock(String),
    #[error("invalid block at relative index {index}: {reason}")]
    InvalidBlock { index: usize, reason: String },
    #[error("spec has no blocks")]
    EmptySpec,
    #[error("index {0} is outside the covered range of a finite spec")]
    OutOfRange(i64),
}

/// A generating involution on relative indices {0, ..., l}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratingBlock {
    pairing: Vec<usize>,
    signs: Vec<Sign>,
}

impl GeneratingBlock {
    pub fn new(pairing: Vec<usize>, signs: Vec<Sign>) -> Result<Self, SpecError> {
        let len = pairing.len();
        let invalid = |index: usize, reason: &str| SpecError::InvalidBlock {
            index,
            reason: reason.into(),
        };
        if len == 0 || signs.len() != len {
            return Err(SpecError::MalformedBlock(
                "pairing and sign tables must be nonempty and of equal length".into(),
            ));
        }
        let l = len - 1;
        for (j, &t) in pairing.iter().enumerate() {
            if t > l {
                return Err(invalid(j, "pairing target outside block"));
            }
            if pairing[t] != j {
                return Err(invalid(j, "pairing is not an involution"));
            }
        }
        if pairing[0] != l {
            return Err(invalid(0, "first index must pair with the last"));
        }
        for (j, &s) in signs.iter().enumerate() {
            if s != 1 && s != -1 {
                return Err(invalid(j, "sign must be +1 or -1"));
            }
            if signs[pairing[j]] != s {
                return Err(invalid(j, "sign must agree with the sign of the partner"));
            }
        }
        // Chain identity on interior indices, relative form:
        // iota(iota(n) + delta_n) = iota(n-1) - delta_{n-1} whenever all four
        // arguments stay inside the block.
        let it = |j: i64| -> Option<i64> {
            (0..=l as i64).contains(&j).then(|| pairing[j as usize] as i64)
        };
        for n in 1..=l as i64 {
            let lhs = match it(n).and_then(|t| it(t + signs[n as usize] as i64)) {
                Some(x) => x,
                None => continue,
            };
            let rhs = match it(n - 1) {
                Some(t) => t - signs[n as usize - 1] as i64,
                None => continue,
            };
            if lhs != rhs {
                return Err(invalid(n as usize, "chain identity fails inside block"));
            }
        }
        Ok(Self { pairing, signs })
    }

    /// l = block length minus one; the block occupies {k, ..., k+l}.
    pub fn l(&self) -> usize {
        self.pairing.len() - 1
    }

    pub fn len(&self) -> usize {
        self.pairing.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    pub fn signs(&self) -> &[Sign] {
        &self.signs
    }
}

/// The three block shapes used by the structure theorem.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinBlock {
    /// One index, self-paired: yields a generator of order 2.
    B2,
    /// Two indices swapped: yields a generator of order 3.
    B3,
    /// Four indices, nested pairing, inner signs -1: yields a generator of
    /// infinite order and determinant -1.
    Binf,
}

impl BuiltinBlock {
    pub fn block(self) -> GeneratingBlock {
        let (pairing, signs) = match self {
            BuiltinBlock::B2 => (vec![0], vec![1]),
            BuiltinBlock::B3 => (vec![1, 0], vec![1, 1]),
            BuiltinBlock::Binf => (vec![3, 2, 1, 0], vec![1, -1, -1, 1]),
        };
        GeneratingBlock::new(pairing, signs).expect("builtin blocks are valid")
    }
}

/// Parses one block directive body: `B2`, `B3`, `BINF`, or
/// `CUSTOM iota=<t0,t1,...> delta=<+,-,...>`.
pub fn parse_block(text: &str) -> Result<GeneratingBlock, SpecError> {
    let text = text.trim();
    match text {
        "B2" => return Ok(BuiltinBlock::B2.block()),
        "B3" => return Ok(BuiltinBlock::B3.block()),
        "BINF" => return Ok(BuiltinBlock::Binf.block()),
        _ => {}
    }
    let rest = text
        .strip_prefix("CUSTOM")
        .ok_or_else(|| SpecError::MalformedBlock(format!("unknown block {text:?}")))?;
    let mut pairing = None;
    let mut signs = None;
    for field in rest.split_whitespace() {
        if let Some(list) = field.strip_prefix("iota=") {
            let parsed: Result<Vec<usize>, _> = list.split(',').map(|s| s.trim().parse()).collect();
            pairing = Some(parsed.map_err(|_| {
                SpecError::MalformedBlock(format!("bad iota list {list:?}"))
            })?);
        } else if let Some(list) = field.strip_prefix("delta=") {
            let parsed: Result<Vec<Sign>, SpecError> = list
                .split(',')
                .map(|s| match s.trim() {
                    "+" | "+1" => Ok(1),
                    "-" | "-1" => Ok(-1),
                    other => Err(SpecError::MalformedBlock(format!("bad sign {other:?}"))),
                })
                .collect();
            signs = Some(parsed?);
        } else {
            return Err(SpecError::MalformedBlock(format!("unknown field {field:?}")));
        }
    }
    match (pairing, signs) {
        (Some(p), Some(s)) => GeneratingBlock::new(p, s),
        _ => Err(SpecError::MalformedBlock(
            "CUSTOM needs both iota= and delta=".into(),
        )),
    }
}

/// Repetition mode of the assembled block list.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    Finite,
    Cyclic,
}

/// Where an integer lands in the assembled spec.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Cover {
    /// Inside assembled block `seq` (0-based), at relative offset `rel`.
    Block { seq: i64, rel: usize },
    /// A negative gluing index -m-2 (m >= 0), paired with the gap after
    /// assembled block m+1.
    GluingSource { m: i64 },
    /// The gap index right after assembled block `seq` (seq >= 1), paired
    /// with -seq-1.
    GluingTarget { seq: i64 },
}

/// An assembled involution spec.
#[derive(Clone, Debug)]
pub struct InvolutionSpec {
    blocks: Vec<GeneratingBlock>,
    mode: Mode,
    /// cum[r] = sum over the first r blocks of (l_j + 2).
    cum: Vec<i64>,
}

impl InvolutionSpec {
    pub fn assemble(blocks: Vec<GeneratingBlock>, mode: Mode) -> Result<Self, SpecError> {
        if blocks.is_empty() {
            return Err(SpecError::EmptySpec);
        }
        let mut cum = Vec::with_capacity(blocks.len() + 1);
        cum.push(0);
        for b in &blocks {
            cum.push(cum.last().unwrap() + b.l() as i64 + 2);
        }
        Ok(Self { blocks, mode, cum })
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn is_cyclic(&self) -> bool {
        self.mode == Mode::Cyclic
    }

    pub fn blocks(&self) -> &[GeneratingBlock] {
        &self.blocks
    }

    /// True iff some covered index carries delta = -1, i.e. the subgroup is
    /// not contained in the modular group.
    pub fn has_negative_determinant(&self) -> bool {
        self.blocks.iter().any(|b| b.signs().iter().any(|&s| s == -1))
    }

    fn period_count(&self) -> i64 {
        self.blocks.len() as i64
    }

    /// Shift of block starts over one full period.
    fn period_shift(&self) -> i64 {
        *self.cum.last().unwrap()
    }

    /// The block shape used by assembled block `seq`.
    pub fn block_at(&self, seq: i64) -> Result<&GeneratingBlock, SpecError> {
        let b = self.period_count();
        match self.mode {
            Mode::Cyclic => Ok(&self.blocks[(seq.rem_euclid(b)) as usize]),
            Mode::Finite => {
                if (0..b).contains(&seq) {
                    Ok(&self.blocks[seq as usize])
                } else {
                    Err(SpecError::OutOfRange(seq))
                }
            }
        }
    }

    /// Start index k_seq of assembled block `seq`:
    /// k_0 = -1, k_1 = l_0, k_{i+1} = k_i + l_i + 2 for i >= 1.
    pub fn block_start(&self, seq: i64) -> Result<i64, SpecError> {
        assert!(seq >= 0, "block sequence numbers are nonnegative");
        if self.mode == Mode::Finite && seq >= self.period_count() {
            return Err(SpecError::OutOfRange(seq));
        }
        if seq == 0 {
            return Ok(-1);
        }
        // k_seq = k_1 + sum_{j=1..seq-1} (l_j + 2) and k_1 = l_0; using the
        // cumulative table this is cum[seq] - 2 with period wrap-around.
        let b = self.period_count();
        let (periods, r) = (seq.div_euclid(b), seq.rem_euclid(b));
        Ok(periods * self.period_shift() + self.cum[r as usize] - 2)
    }

    fn block_end(&self, seq: i64) -> Result<i64, SpecError> {
        Ok(self.block_start(seq)? + self.block_at(seq)?.l() as i64)
    }

    /// The gap index after assembled block `seq` (defined for seq >= 1).
    pub fn gluing_target(&self, seq: i64) -> Result<i64, SpecError> {
        assert!(seq >= 1);
        Ok(self.block_end(seq)? + 1)
    }

    pub fn cover(&self, n: i64) -> Result<Cover, SpecError> {
        if n <= -2 {
            let m = -n - 2;
            // Partner is the gap after block m+1, which must exist.
            if self.mode == Mode::Finite && m + 1 >= self.period_count() {
                return Err(SpecError::OutOfRange(n));
            }
            return Ok(Cover::GluingSource { m });
        }
        // n >= -1: walk block starts, skipping whole periods when far away.
        let mut seq: i64 = 0;
        if self.is_cyclic() && n >= self.period_shift() {
            // After block 1 the starts advance by period_shift per period.
            let approx = (n - self.block_start(1)?) / self.period_shift();
            seq = (approx * self.period_count()).max(0);
            while self.block_start(seq)? > n {
                seq -= self.period_count();
            }
        }
        loop {
            let start = self.block_start(seq)?;
            let end = self.block_end(seq)?;
            if n < start {
                // Only possible for the gap right before this block.
                return if seq >= 2 && n == start - 1 {
                    Ok(Cover::GluingTarget { seq: seq - 1 })
                } else {
                    Err(SpecError::OutOfRange(n))
                };
            }
            if n <= end {
                return Ok(Cover::Block {
                    seq,
                    rel: (n - start) as usize,
                });
            }
            if n == end + 1 && seq >= 1 {
                return Ok(Cover::GluingTarget { seq });
            }
            if self.mode == Mode::Finite && seq + 1 >= self.period_count() {
                return Err(SpecError::OutOfRange(n));
            }
            seq += 1;
        }
    }

    /// The glued involution value at n.
    pub fn iota(&self, n: i64) -> Result<i64, SpecError> {
        match self.cover(n)? {
            Cover::Block { seq, rel } => {
                let block = self.block_at(seq)?;
                Ok(self.block_start(seq)? + block.pairing()[rel] as i64)
            }
            Cover::GluingSource { m } => self.gluing_target(m + 1),
            Cover::GluingTarget { seq } => Ok(-seq - 1),
        }
    }

    /// The sign at n; +1 on every gluing index.
    pub fn delta(&self, n: i64) -> Result<Sign, SpecError> {
        match self.cover(n)? {
            Cover::Block { seq, rel } => Ok(self.block_at(seq)?.signs()[rel]),
            Cover::GluingSource { .. } | Cover::GluingTarget { .. } => Ok(1),
        }
    }
}

/// One failed identity found by [`validate`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub index: i64,
    pub kind: ViolationKind,
    pub detail: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ViolationKind {
    NotInvolution,
    SignAsymmetry,
    ChainIdentity,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match self.kind {
            ViolationKind::NotInvolution => "involution",
            ViolationKind::SignAsymmetry => "sign symmetry",
            ViolationKind::ChainIdentity => "chain identity",
        };
        write!(f, "index {}: {} violated ({})", self.index, kind, self.detail)
    }
}

/// Checks, for every covered n in [-window, window]:
/// iota(iota(n)) = n, delta_{iota(n)} = delta_n, and the chain identity
/// iota(iota(n) + delta_n) = iota(n-1) - delta_{n-1} whenever the needed
/// arguments are covered.
pub fn validate(spec: &InvolutionSpec, window: i64) -> Vec<Violation> {
    let mut out = Vec::new();
    for n in -window..=window {
        let (i_n, d_n) = match (spec.iota(n), spec.delta(n)) {
            (Ok(i), Ok(d)) => (i, d),
            _ => continue,
        };
        match spec.iota(i_n) {
            Ok(back) if back == n => {}
            Ok(back) => out.push(Violation {
                index: n,
                kind: ViolationKind::NotInvolution,
                detail: format!("iota(iota({n})) = {back}"),
            }),
            Err(_) => {}
        }
        match spec.delta(i_n) {
            Ok(d) if d == d_n => {}
            Ok(d) => out.push(Violation {
                index: n,
                kind: ViolationKind::SignAsymmetry,
                detail: format!("delta({i_n}) = {d} but delta({n}) = {d_n}"),
            }),
            Err(_) => {}
        }
        if let (Ok(lhs), Ok(i_prev), Ok(d_prev)) = (
            spec.iota(i_n + d_n as i64),
            spec.iota(n - 1),
            spec.delta(n - 1),
        ) {
            let rhs = i_prev - d_prev as i64;
            if lhs != rhs {
                out.push(Violation {
                    index: n,
                    kind: ViolationKind::ChainIdentity,
                    detail: format!("iota(iota({n})+delta) = {lhs}, expected {rhs}"),
                });
            }
        }
    }
    out
}

/// Parses a spec file: one directive per line, `#` comments.
/// Directives: `block <B2|B3|BINF|CUSTOM ...>` and `mode <cyclic|finite>`.
pub fn parse_spec(text: &str) -> Result<InvolutionSpec, SpecError> {
    let mut blocks = Vec::new();
    let mut mode = Mode::Cyclic;
    for raw in text.lines() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some(body) = line.strip_prefix("block") {
            blocks.push(parse_block(body)?);
        } else if let Some(body) = line.strip_prefix("mode") {
            mode = match body.trim() {
                "cyclic" => Mode::Cyclic,
                "finite" => Mode::Finite,
                other => {
                    return Err(SpecError::MalformedBlock(format!("unknown mode {other:?}")))
                }
            };
        } else {
            return Err(SpecError::MalformedBlock(format!(
                "unknown directive {line:?}"
            )));
        }
    }
    InvolutionSpec::assemble(blocks, mode)
}

/// Convenience constructors for the specs used throughout the tests.
pub fn spec_binf_cyclic() -> InvolutionSpec {
    InvolutionSpec::assemble(vec![BuiltinBlock::Binf.block()], Mode::Cyclic).unwrap()
}

pub fn spec_b2_b3_binf_cyclic() -> InvolutionSpec {
    InvolutionSpec::assemble(
        vec![
            BuiltinBlock::B2.block(),
            BuiltinBlock::B3.block(),
            BuiltinBlock::Binf.block(),
        ],
        Mode::Cyclic,
    )
    .unwrap()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn builtin_tables() {
        let b = BuiltinBlock::Binf.block();
        assert_eq!(b.pairing(), &[3, 2, 1, 0]);
        assert_eq!(b.signs(), &[1, -1, -1, 1]);
        assert_eq!(parse_block("B2").unwrap().pairing(), &[0]);
    }

    #[test]
    fn custom_block_sign_asymmetry_rejected() {
        let err = parse_block("CUSTOM iota=1,0 delta=+,-").unwrap_err();
        assert!(matches!(err, SpecError::InvalidBlock { .. }));
    }

    #[test]
    fn binf_layout() {
        let s = spec_binf_cyclic();
        assert_eq!(s.block_start(0).unwrap(), -1);
        assert_eq!(s.block_start(1).unwrap(), 3);
        assert_eq!(s.block_start(2).unwrap(), 8);
        assert_eq!(s.iota(-2).unwrap(), 7);
        assert_eq!(s.iota(-3).unwrap(), 12);
        assert_eq!(s.iota(0).unwrap(), 1);
        assert_eq!(s.delta(0).unwrap(), -1);
        assert_eq!(s.delta(-2).unwrap(), 1);
    }

    #[test]
    fn mixed_layout() {
        let s = spec_b2_b3_binf_cyclic();
        // B2 on {-1}, B3 on {0,1}, BINF on {3..6}, next B2 on {8}.
        assert_eq!(s.block_start(0).unwrap(), -1);
        assert_eq!(s.block_start(1).unwrap(), 0);
        assert_eq!(s.block_start(2).unwrap(), 3);
        assert_eq!(s.block_start(3).unwrap(), 8);
        assert_eq!(s.iota(-2).unwrap(), 2);
        assert_eq!(s.iota(-3).unwrap(), 7);
        assert_eq!(s.iota(-4).unwrap(), 9);
        assert_eq!(s.iota(-1).unwrap(), -1);
    }

    #[test]
    fn finite_single_block_coverage() {
        let s = InvolutionSpec::assemble(vec![BuiltinBlock::B2.block()], Mode::Finite).unwrap();
        assert_eq!(s.iota(-1).unwrap(), -1);
        assert!(matches!(s.iota(0), Err(SpecError::OutOfRange(0))));
        assert!(matches!(s.iota(-2), Err(SpecError::OutOfRange(-2))));
    }

    #[test]
    fn involution_everywhere() {
        for spec in [spec_binf_cyclic(), spec_b2_b3_binf_cyclic()] {
            for n in -300..=300 {
                assert_eq!(spec.iota(spec.iota(n).unwrap()).unwrap(), n);
                assert_eq!(spec.delta(spec.iota(n).unwrap()), spec.delta(n));
            }
        }
    }

    #[test]
    fn validation_clean_on_builtins() {
        assert!(validate(&spec_binf_cyclic(), 200).is_empty());
        assert!(validate(&spec_b2_b3_binf_cyclic(), 200).is_empty());
    }

    #[test]
    fn validation_flags_broken_chain() {
        // A hand-built block whose signs break the chain identity: pairing as
        // BINF but all signs +1 fails the relative chain check already.
        let err = GeneratingBlock::new(vec![3, 2, 1, 0], vec![1, 1, 1, 1]).unwrap_err();
        assert!(matches!(err, SpecError::InvalidBlock { .. }));
    }

    #[test]
    fn flipped_delta_parses_but_fails_validation() {
        // A one-index block with delta = -1 satisfies the block-level
        // conditions (the chain identity has no interior instances), but the
        // assembled spec breaks the identity at the block boundaries.
        let s = parse_spec("block CUSTOM iota=0 delta=-\nmode cyclic\n").unwrap();
        let violations = validate(&s, 10);
        assert!(!violations.is_empty());
        assert!(violations
            .iter()
            .any(|v| v.index == 0 && v.kind == ViolationKind::ChainIdentity));
    }

    #[test]
    fn coverage_partitions() {
        // Every covered index is hit exactly once by blocks and gluing pairs.
        let s = spec_b2_b3_binf_cyclic();
        for n in -100..=100 {
            let c = s.cover(n).unwrap();
            // cover() is a function, so it suffices that iota round-trips and
            // block/gap ranges are disjoint by construction; spot check gaps.
            if let Cover::GluingTarget { seq } = c {
                assert_eq!(s.gluing_target(seq).unwrap(), n);
            }
        }
    }

    #[test]
    fn spec_file_roundtrip() {
        let s = parse_spec("# demo\nblock B2\nblock B3\nblock BINF\nmode cyclic\n").unwrap();
        assert_eq!(s.blocks().len(), 3);
        assert!(s.is_cyclic());
        assert!(parse_spec("mode cyclic\n").is_err());
        assert!(parse_spec("block B5\n").is_err());
    }
}

//! Exact arithmetic in the extended modular group PGL(2,Z).
//!
//! Elements are 2x2 integer matrices of determinant +-1 taken modulo sign.
//! The canonical representative negates the matrix so that the first nonzero
//! entry in the order (a, b, c, d) is positive; equality, hashing and ordering
//! all act on that representative.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::fmt;

/// An element of PGL(2,Z): a sign-canonicalized integer matrix with det +-1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl GroupElement {
    /// Builds an element from raw entries. Panics if the determinant is not +-1;
    /// matrices reaching this type are always products of the generators.
    pub fn new(a: impl Into<BigInt>, b: impl Into<BigInt>, c: impl Into<BigInt>, d: impl Into<BigInt>) -> Self {
        let (a, b, c, d) = (a.into(), b.into(), c.into(), d.into());
        let det = &a * &d - &b * &c;
        assert!(
            det == BigInt::one() || det == -BigInt::one(),
            "determinant must be +-1, got {det}"
        );
        Self { a, b, c, d }.canonicalized()
    }

    fn canonicalized(mut self) -> Self {
        let first = [&self.a, &self.b, &self.c, &self.d]
            .into_iter()
            .find(|x| !x.is_zero())
            .expect("zero matrix is not a group element");
        if first.is_negative() {
            self.a = -&self.a;
            self.b = -&self.b;
            self.c = -&self.c;
            self.d = -&self.d;
        }
        self
    }

    pub fn identity() -> Self {
        Self::new(1, 0, 0, 1)
    }

    /// omega: z -> -1/z
    pub fn omega() -> Self {
        Self::new(0, -1, 1, 0)
    }

    /// phi: z -> -1/(z+1)
    pub fn phi() -> Self {
        Self::new(0, -1, 1, 1)
    }

    /// nu: z -> -z
    pub fn nu() -> Self {
        Self::new(-1, 0, 0, 1)
    }

    /// tau = omega * phi: z -> z+1
    pub fn tau() -> Self {
        Self::new(1, 1, 0, 1)
    }

    pub fn entries(&self) -> (&BigInt, &BigInt, &BigInt, &BigInt) {
        (&self.a, &self.b, &self.c, &self.d)
    }

    pub fn det(&self) -> i32 {
        let det = &self.a * &self.d - &self.b * &self.c;
        if det.is_one() {
            1
        } else {
            -1
        }
    }

    /// Trace of the canonical representative.
    pub fn trace(&self) -> BigInt {
        &self.a + &self.d
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        Self::new(
            &self.a * &rhs.a + &self.b * &rhs.c,
            &self.a * &rhs.b + &self.b * &rhs.d,
            &self.c * &rhs.a + &self.d * &rhs.c,
            &self.c * &rhs.b + &self.d * &rhs.d,
        )
    }

    pub fn inverse(&self) -> Self {
        // The adjugate differs from the inverse by the determinant, which is a
        // sign here and vanishes under canonicalization.
        Self::new(self.d.clone(), -&self.b, -&self.c, self.a.clone())
    }

    pub fn pow(&self, exp: i64) -> Self {
        let base = if exp < 0 { self.inverse() } else { self.clone() };
        let mut acc = Self::identity();
        for _ in 0..exp.unsigned_abs() {
            acc = acc.mul(&base);
        }
        acc
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::identity()
    }
}

impl fmt::Debug for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]", self.a, self.b, self.c, self.d)
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Conjugacy-invariant classification by determinant and trace.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementClass {
    Identity,
    Elliptic2,
    Elliptic3,
    Parabolic,
    Hyperbolic,
    IsotropicInvolution,
    GlideHyperbolic,
}

/// Classifies a canonical element by |trace| and determinant.
pub fn classify(g: &GroupElement) -> ElementClass {
    let tr = g.trace().abs();
    if g.det() == 1 {
        if g.is_identity() {
            ElementClass::Identity
        } else if tr.is_zero() {
            ElementClass::Elliptic2
        } else if tr.is_one() {
            ElementClass::Elliptic3
        } else if tr == BigInt::from(2) {
            ElementClass::Parabolic
        } else {
            ElementClass::Hyperbolic
        }
    } else if tr.is_zero() {
        ElementClass::IsotropicInvolution
    } else {
        ElementClass::GlideHyperbolic
    }
}

/// True iff g is a nontrivial element of some isotropy subgroup, i.e. a
/// conjugate of a nontrivial element of <tau, nu>.
pub fn is_isotropic(g: &GroupElement) -> bool {
    match classify(g) {
        ElementClass::Parabolic | ElementClass::IsotropicInvolution => true,
        _ => false,
    }
}

/// One letter of the generator alphabet.
///
/// `A` = omega, `B` = phi, `B2` = phi^2, `V` = nu, `C` = tau, `CInv` = tau^-1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Letter {
    A,
    B,
    B2,
    V,
    C,
    CInv,
}

impl Letter {
    pub fn matrix(self) -> GroupElement {
        match self {
            Letter::A => GroupElement::omega(),
            Letter::B => GroupElement::phi(),
            Letter::B2 => GroupElement::phi().mul(&GroupElement::phi()),
            Letter::V => GroupElement::nu(),
            Letter::C => GroupElement::tau(),
            Letter::CInv => GroupElement::tau().inverse(),
        }
    }

    pub fn token(self) -> char {
        match self {
            Letter::A => 'w',
            Letter::B => 'f',
            Letter::B2 => 'F',
            Letter::V => 'v',
            Letter::C => 't',
            Letter::CInv => 'T',
        }
    }
}

pub type Word = Vec<Letter>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
#[error("unknown letter {0:?}; expected one of w f F v t T")]
pub struct WordParseError(pub char);

/// Parses the shared word syntax: `w`=omega, `f`=phi, `F`=phi^2, `v`=nu,
/// `t`=tau, `T`=tau^-1; whitespace optional.
pub fn parse_word(text: &str) -> Result<Word, WordParseError> {
    let mut word = Vec::new();
    for ch in text.chars() {
        if ch.is_whitespace() {
            continue;
        }
        word.push(match ch {
            'w' => Letter::A,
            'f' => Letter::B,
            'F' => Letter::B2,
            'v' => Letter::V,
            't' => Letter::C,
            'T' => Letter::CInv,
            other => return Err(WordParseError(other)),
        });
    }
    Ok(word)
}

pub fn word_to_string(w: &[Letter]) -> String {
    w.iter().map(|l| l.token()).collect()
}

/// Evaluates a word left-to-right; the leftmost letter is the leftmost factor.
pub fn eval_word(w: &[Letter]) -> GroupElement {
    w.iter()
        .fold(GroupElement::identity(), |acc, l| acc.mul(&l.matrix()))
}

/// The defining relations of the presentation of PGL(2,Z).
pub fn check_presentation() -> Vec<(String, bool)> {
    let w = GroupElement::omega();
    let p = GroupElement::phi();
    let n = GroupElement::nu();
    let sq = |g: &GroupElement| g.mul(g);
    vec![
        ("omega^2".into(), sq(&w).is_identity()),
        ("phi^3".into(), p.mul(&p).mul(&p).is_identity()),
        ("nu^2".into(), sq(&n).is_identity()),
        ("(omega nu)^2".into(), sq(&w.mul(&n)).is_identity()),
        ("(omega phi nu)^2".into(), sq(&w.mul(&p).mul(&n)).is_identity()),
    ]
}

/// A point of Q* = Q union {infinity} as a coprime pair (p, q), q >= 0,
/// with (1, 0) standing for infinity.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RationalPoint {
    p: BigInt,
    q: BigInt,
}

impl RationalPoint {
    pub fn new(p: impl Into<BigInt>, q: impl Into<BigInt>) -> Self {
        let (mut p, mut q) = (p.into(), q.into());
        assert!(!(p.is_zero() && q.is_zero()), "(0,0) is not a point of Q*");
        let g = p.gcd(&q);
        if !g.is_zero() {
            p /= &g;
            q /= &g;
        }
        if q.is_negative() || (q.is_zero() && p.is_negative()) {
            p = -p;
            q = -q;
        }
        Self { p, q }
    }

    pub fn infinity() -> Self {
        Self::new(1, 0)
    }

    pub fn numer(&self) -> &BigInt {
        &self.p
    }

    pub fn denom(&self) -> &BigInt {
        &self.q
    }

    pub fn is_infinity(&self) -> bool {
        self.q.is_zero()
    }
}

impl fmt::Display for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_infinity() {
            write!(f, "inf")
        } else {
            write!(f, "{}/{}", self.p, self.q)
        }
    }
}

impl fmt::Debug for RationalPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Boundary action of g on Q*: (p : q) -> (a p + b q : c p + d q).
pub fn moebius_image(g: &GroupElement, x: &RationalPoint) -> RationalPoint {
    RationalPoint::new(&g.a * &x.p + &g.b * &x.q, &g.c * &x.p + &g.d * &x.q)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn constants_match_moebius_maps() {
        // tau = omega * phi evaluates to z -> z+1.
        assert_eq!(GroupElement::omega().mul(&GroupElement::phi()), GroupElement::tau());
        assert_eq!(GroupElement::nu(), GroupElement::new(1, 0, 0, -1));
    }

    #[test]
    fn empty_word_is_identity() {
        assert!(eval_word(&[]).is_identity());
    }

    #[test]
    fn word_ab_is_tau() {
        assert_eq!(eval_word(&parse_word("w f").unwrap()), GroupElement::tau());
    }

    #[test]
    fn word_bbb_is_identity() {
        assert!(eval_word(&parse_word("fff").unwrap()).is_identity());
    }

    #[test]
    fn presentation_relations_hold() {
        for (name, ok) in check_presentation() {
            assert!(ok, "relation {name} failed");
        }
        // (omega phi nu)^2 via the explicit matrix.
        let g = GroupElement::omega().mul(&GroupElement::phi()).mul(&GroupElement::nu());
        assert_eq!(g, GroupElement::new(-1, 1, 0, 1));
        assert!(g.mul(&g).is_identity());
    }

    #[test]
    fn classification_table() {
        assert_eq!(classify(&GroupElement::tau()), ElementClass::Parabolic);
        assert_eq!(classify(&GroupElement::identity()), ElementClass::Identity);
        assert_eq!(classify(&GroupElement::nu()), ElementClass::IsotropicInvolution);
        assert_eq!(classify(&GroupElement::omega()), ElementClass::Elliptic2);
        assert_eq!(classify(&GroupElement::phi()), ElementClass::Elliptic3);
        assert_eq!(classify(&GroupElement::new(2, 1, 1, 1)), ElementClass::Hyperbolic);
    }

    #[test]
    fn isotropy_criterion() {
        assert!(is_isotropic(&GroupElement::tau().pow(3)));
        assert!(!is_isotropic(&GroupElement::new(2, 1, 1, 1)));
        assert!(!is_isotropic(&GroupElement::identity()));
        assert!(is_isotropic(&GroupElement::nu()));
        // nu tau: z -> -z-1 is still a reflection, hence isotropic.
        let r = GroupElement::nu().mul(&GroupElement::tau());
        assert_eq!(classify(&r), ElementClass::IsotropicInvolution);
        // A hyperbolic times nu is a glide and not isotropic.
        let g = GroupElement::new(2, 1, 1, 1).mul(&GroupElement::nu());
        assert_eq!(classify(&g), ElementClass::GlideHyperbolic);
        assert!(!is_isotropic(&g));
    }

    #[test]
    fn moebius_basic_images() {
        let inf = RationalPoint::infinity();
        assert_eq!(moebius_image(&GroupElement::tau(), &inf), inf);
        assert_eq!(moebius_image(&GroupElement::omega(), &inf), RationalPoint::new(0, 1));
        assert_eq!(
            moebius_image(&GroupElement::tau(), &RationalPoint::new(0, 1)),
            RationalPoint::new(1, 1)
        );
    }

    #[test]
    fn canonical_form_idempotent() {
        let g = GroupElement::new(-1, -1, 0, -1);
        assert_eq!(g, GroupElement::new(1, 1, 0, 1));
        assert_eq!(g.clone().canonicalized(), g);
    }

    #[test]
    #[should_panic]
    fn rejects_non_unimodular() {
        GroupElement::new(2, 0, 0, 2);
    }
}

//! Coefficient rings with involution: ℤ, ℚ and the group rings ℤ[ℤ/k].
//!
//! Elements carry their own representation, so arithmetic is implemented on
//! [`RingElem`] directly; a [`Ring`] value is only needed to build constants
//! (`zero`, `one`) and to check that operands live in the same ring.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, Mul, Neg, Sub};

use num_rational::Ratio;

/// Exact rationals used for ℚ-coefficient complexes.
pub type Rational = Ratio<i64>;

/// A ring with involution.
///
/// The involution is the identity on ℤ and ℚ and `g ↦ g⁻¹` on group elements
/// of ℤ[ℤ/k], extended additively.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Ring {
    Integers,
    Rationals,
    /// ℤ[ℤ/k] for `k ≥ 1`.
    CyclicGroupRing(usize),
}

/// An element of a [`Ring`].
///
/// For ℤ[ℤ/k] the coefficient vector has length `k`, entry `m` being the
/// coefficient of `g^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum RingElem {
    Int(i64),
    Rat(Rational),
    Group(Vec<i64>),
}

impl Ring {
    pub fn zero(self) -> RingElem {
        match self {
            Ring::Integers => RingElem::Int(0),
            Ring::Rationals => RingElem::Rat(Rational::from_integer(0)),
            Ring::CyclicGroupRing(k) => RingElem::Group(vec![0; k]),
        }
    }

    pub fn one(self) -> RingElem {
        self.from_int(1)
    }

    /// The image of an integer under ℤ → A.
    pub fn from_int(self, n: i64) -> RingElem {
        match self {
            Ring::Integers => RingElem::Int(n),
            Ring::Rationals => RingElem::Rat(Rational::from_integer(n)),
            Ring::CyclicGroupRing(k) => {
                let mut v = vec![0; k];
                v[0] = n;
                RingElem::Group(v)
            }
        }
    }

    /// `c · g^m` in ℤ[ℤ/k]; on ℤ and ℚ the group element is ignored.
    pub fn monomial(self, c: i64, m: usize) -> RingElem {
        match self {
            Ring::CyclicGroupRing(k) => {
                let mut v = vec![0; k];
                v[m % k] = c;
                RingElem::Group(v)
            }
            _ => self.from_int(c),
        }
    }

    /// Rank of A as a free ℤ-module (`k` for ℤ[ℤ/k], 1 for ℤ).
    ///
    /// ℚ reports 1 as well; callers restricting scalars must reject it first.
    pub fn z_rank(self) -> usize {
        match self {
            Ring::CyclicGroupRing(k) => k,
            _ => 1,
        }
    }

    /// Whether `e` is a valid element of this ring.
    pub fn contains(self, e: &RingElem) -> bool {
        match (self, e) {
            (Ring::Integers, RingElem::Int(_)) => true,
            (Ring::Rationals, RingElem::Rat(_)) => true,
            (Ring::CyclicGroupRing(k), RingElem::Group(v)) => v.len() == k,
            _ => false,
        }
    }

    /// Whether the ring is ℤ or ℤ[ℤ/k], i.e. admits restriction of scalars to ℤ.
    pub fn is_integral(self) -> bool {
        !matches!(self, Ring::Rationals)
    }
}

impl fmt::Display for Ring {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Ring::Integers => write!(f, "Z"),
            Ring::Rationals => write!(f, "Q"),
            Ring::CyclicGroupRing(k) => write!(f, "Z[Z/{k}]"),
        }
    }
}

impl RingElem {
    pub fn ring(&self) -> Ring {
        match self {
            RingElem::Int(_) => Ring::Integers,
            RingElem::Rat(_) => Ring::Rationals,
            RingElem::Group(v) => Ring::CyclicGroupRing(v.len()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            RingElem::Int(a) => *a == 0,
            RingElem::Rat(a) => *a.numer() == 0,
            RingElem::Group(v) => v.iter().all(|&c| c == 0),
        }
    }

    /// The involution `a ↦ ā`.
    pub fn involute(&self) -> RingElem {
        match self {
            RingElem::Group(v) => {
                let k = v.len();
                RingElem::Group((0..k).map(|m| v[(k - m) % k]).collect())
            }
            other => other.clone(),
        }
    }

    /// Multiply by an integer.
    pub fn scale(&self, c: i64) -> RingElem {
        match self {
            RingElem::Int(a) => RingElem::Int(a * c),
            RingElem::Rat(a) => RingElem::Rat(a * c),
            RingElem::Group(v) => RingElem::Group(v.iter().map(|x| x * c).collect()),
        }
    }

    /// The inverse of a unit, or `None`.
    ///
    /// Units of ℤ[ℤ/k] recognised here are the trivial units `±g^m`; these
    /// are the only units exploited by elimination.
    pub fn unit_inverse(&self) -> Option<RingElem> {
        match self {
            RingElem::Int(a) if *a == 1 || *a == -1 => Some(RingElem::Int(*a)),
            RingElem::Int(_) => None,
            RingElem::Rat(a) if *a.numer() != 0 => Some(RingElem::Rat(a.recip())),
            RingElem::Rat(_) => None,
            RingElem::Group(v) => {
                let mut nz = v.iter().enumerate().filter(|(_, c)| **c != 0);
                let (m, c) = nz.next()?;
                if nz.next().is_some() || (*c != 1 && *c != -1) {
                    return None;
                }
                let k = v.len();
                let mut inv = vec![0; k];
                inv[(k - m) % k] = *c;
                Some(RingElem::Group(inv))
            }
        }
    }

    pub fn is_unit(&self) -> bool {
        self.unit_inverse().is_some()
    }

    /// Integer coordinates (restriction of scalars); `None` for ℚ.
    pub fn coords(&self) -> Option<Vec<i64>> {
        match self {
            RingElem::Int(a) => Some(vec![*a]),
            RingElem::Rat(_) => None,
            RingElem::Group(v) => Some(v.clone()),
        }
    }

    pub fn as_int(&self) -> Option<i64> {
        match self {
            RingElem::Int(a) => Some(*a),
            _ => None,
        }
    }

    /// Embed an integral element in ℚ (only meaningful for ℤ and ℚ).
    pub fn to_rational(&self) -> Option<Rational> {
        match self {
            RingElem::Int(a) => Some(Rational::from_integer(*a)),
            RingElem::Rat(a) => Some(*a),
            RingElem::Group(_) => None,
        }
    }
}

impl fmt::Display for RingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RingElem::Int(a) => write!(f, "{a}"),
            RingElem::Rat(a) => write!(f, "{a}"),
            RingElem::Group(v) => {
                let mut first = true;
                for (m, c) in v.iter().enumerate().filter(|(_, c)| **c != 0) {
                    if !first {
                        write!(f, "{}", if *c < 0 { " - " } else { " + " })?;
                    } else if *c < 0 {
                        write!(f, "-")?;
                    }
                    first = false;
                    let a = c.abs();
                    match (m, a) {
                        (0, _) => write!(f, "{a}")?,
                        (1, 1) => write!(f, "g")?,
                        (_, 1) => write!(f, "g^{m}")?,
                        (1, _) => write!(f, "{a}g")?,
                        _ => write!(f, "{a}g^{m}")?,
                    }
                }
                if first {
                    write!(f, "0")?;
                }
                Ok(())
            }
        }
    }
}

fn mismatch(a: &RingElem, b: &RingElem) -> ! {
    panic!("ring mismatch: {} vs {}", a.ring(), b.ring())
}

impl RingElem {
    /// `self + rhs`, or `None` on overflow.
    pub fn checked_add(&self, rhs: &RingElem) -> Option<RingElem> {
        match (self, rhs) {
            (RingElem::Int(a), RingElem::Int(b)) => a.checked_add(*b).map(RingElem::Int),
            (RingElem::Rat(a), RingElem::Rat(b)) => rat_op(a, b, |x, y| x + y),
            (RingElem::Group(a), RingElem::Group(b)) if a.len() == b.len() => {
                a.iter().zip(b).map(|(x, y)| x.checked_add(*y)).collect::<Option<_>>().map(RingElem::Group)
            }
            _ => mismatch(self, rhs),
        }
    }

    /// `self · rhs`, or `None` on overflow.
    pub fn checked_mul(&self, rhs: &RingElem) -> Option<RingElem> {
        match (self, rhs) {
            (RingElem::Int(a), RingElem::Int(b)) => a.checked_mul(*b).map(RingElem::Int),
            (RingElem::Rat(a), RingElem::Rat(b)) => rat_op(a, b, |x, y| x * y),
            (RingElem::Group(a), RingElem::Group(b)) if a.len() == b.len() => {
                let k = a.len();
                let mut out = vec![0i64; k];
                for (i, x) in a.iter().enumerate().filter(|(_, x)| **x != 0) {
                    for (j, y) in b.iter().enumerate().filter(|(_, y)| **y != 0) {
                        let slot = &mut out[(i + j) % k];
                        *slot = slot.checked_add(x.checked_mul(*y)?)?;
                    }
                }
                Some(RingElem::Group(out))
            }
            _ => mismatch(self, rhs),
        }
    }
}

// computed in i128, where products of i64 fractions cannot overflow
fn rat_op(a: &Rational, b: &Rational, op: impl Fn(Ratio<i128>, Ratio<i128>) -> Ratio<i128>) -> Option<RingElem> {
    let wide = |x: &Rational| Ratio::new_raw(i128::from(*x.numer()), i128::from(*x.denom()));
    let r = op(wide(a), wide(b));
    let numer = i64::try_from(*r.numer()).ok()?;
    let denom = i64::try_from(*r.denom()).ok()?;
    Some(RingElem::Rat(Rational::new_raw(numer, denom)))
}

impl Add for &RingElem {
    type Output = RingElem;
    fn add(self, rhs: &RingElem) -> RingElem {
        self.checked_add(rhs).expect("ring addition overflowed")
    }
}

impl Sub for &RingElem {
    type Output = RingElem;
    fn sub(self, rhs: &RingElem) -> RingElem {
        self + &(-rhs)
    }
}

impl Neg for &RingElem {
    type Output = RingElem;
    fn neg(self) -> RingElem {
        self.scale(-1)
    }
}

impl Mul for &RingElem {
    type Output = RingElem;
    fn mul(self, rhs: &RingElem) -> RingElem {
        self.checked_mul(rhs).expect("ring multiplication overflowed")
    }
}

/// `involute` as a free function, mirroring the operation list.
pub fn involute(a: &RingElem) -> RingElem {
    a.involute()
}

/// Parity `i` (mod 2) selecting the sign `ε = (−1)^i`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Parity(pub u8);

impl Parity {
    pub fn of(i: i64) -> Parity {
        Parity(i.rem_euclid(2) as u8)
    }

    /// `(−1)^i`.
    pub fn sign(self) -> i64 {
        if self.0 == 0 {
            1
        } else {
            -1
        }
    }

    pub fn is_even(self) -> bool {
        self.0 == 0
    }
}

/// An element of `Q_{(−1)^i}(A) = A / {a − (−1)^i ā}` in canonical form.
///
/// Canonical forms:
/// * ℤ: `i` even → the integer itself; `i` odd → residue in `{0, 1}`.
/// * ℚ: `i` even → the rational itself; `i` odd → always zero (`2a` spans ℚ).
/// * ℤ[ℤ/k]: for each orbit `{m, −m}` with `m ≠ −m` the coefficients are
///   folded onto the smaller exponent (`g^{−m} ≡ ε g^m`); self-inverse
///   exponents keep their coefficient (ε = +1) or reduce mod 2 (ε = −1).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QClass {
    parity: Parity,
    rep: RingElem,
}

impl QClass {
    pub fn parity(&self) -> Parity {
        self.parity
    }

    /// The canonical representative.
    pub fn rep(&self) -> &RingElem {
        &self.rep
    }

    pub fn is_zero(&self) -> bool {
        self.rep.is_zero()
    }

    pub fn zero(ring: Ring, parity: Parity) -> QClass {
        QClass { parity, rep: ring.zero() }
    }
}

impl Add for &QClass {
    type Output = QClass;
    fn add(self, rhs: &QClass) -> QClass {
        assert_eq!(self.parity, rhs.parity, "adding Q-classes of different parity");
        q_reduce(&(&self.rep + &rhs.rep), self.parity)
    }
}

impl fmt::Display for QClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.rep)
    }
}

/// Canonical class of `a` in `Q_{(−1)^i}(A)`.
pub fn q_reduce(a: &RingElem, parity: Parity) -> QClass {
    let eps = parity.sign();
    let rep = match a {
        RingElem::Int(x) => RingElem::Int(if eps == 1 { *x } else { x.rem_euclid(2) }),
        RingElem::Rat(x) => RingElem::Rat(if eps == 1 { *x } else { Rational::from_integer(0) }),
        RingElem::Group(v) => {
            let k = v.len();
            let mut out = vec![0i64; k];
            for m in 0..k {
                let inv = (k - m) % k;
                if inv == m {
                    out[m] = if eps == 1 { v[m] } else { v[m].rem_euclid(2) };
                } else if m < inv {
                    out[m] = v[m] + eps * v[inv];
                }
            }
            RingElem::Group(out)
        }
    };
    QClass { parity, rep }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn zc(v: &[i64]) -> RingElem {
        RingElem::Group(v.to_vec())
    }

    #[test]
    fn involution_examples() {
        assert_eq!(RingElem::Int(5).involute(), RingElem::Int(5));
        // g in Z[Z/3] goes to g^2
        assert_eq!(zc(&[0, 1, 0]).involute(), zc(&[0, 0, 1]));
        assert_eq!(zc(&[3, 2]).involute(), zc(&[3, 2]));
    }

    #[test]
    fn involution_reverses_products() {
        let a = zc(&[1, -2, 0, 3]);
        let b = zc(&[0, 1, 5, -1]);
        assert_eq!((&a * &b).involute(), &b.involute() * &a.involute());
        assert_eq!(a.involute().involute(), a);
        assert_eq!(Ring::CyclicGroupRing(4).one().involute(), Ring::CyclicGroupRing(4).one());
    }

    #[test]
    fn checked_arithmetic_reports_overflow() {
        let big = RingElem::Int(i64::MAX);
        assert_eq!(big.checked_add(&RingElem::Int(1)), None);
        assert_eq!(big.checked_mul(&RingElem::Int(-1)), Some(RingElem::Int(-i64::MAX)));
        // the g·g and 1·1 terms both land on the unit coefficient
        assert_eq!(zc(&[1 << 32, 1 << 32]).checked_mul(&zc(&[1 << 31, 1 << 31])), None);
        assert_eq!(zc(&[2, 3]).checked_mul(&zc(&[1, -1])), Some(zc(&[-1, 1])));
        let q = RingElem::Rat(Rational::new(i64::MAX, 2));
        assert_eq!(q.checked_mul(&RingElem::Rat(Rational::new(2, 3))), Some(RingElem::Rat(Rational::new(i64::MAX, 3))));
        assert_eq!(q.checked_add(&q.clone()), Some(RingElem::Rat(Rational::from_integer(i64::MAX))));
        assert_eq!(q.checked_mul(&RingElem::Rat(Rational::from_integer(3))), None);
    }

    #[test]
    fn q_reduce_examples() {
        // {a + ā} = 2Z, so 3 is the class of 1
        assert_eq!(q_reduce(&RingElem::Int(3), Parity(1)).rep(), &RingElem::Int(1));
        assert_eq!(q_reduce(&RingElem::Int(7), Parity(0)).rep(), &RingElem::Int(7));
        let g = zc(&[0, 1]);
        assert_eq!(q_reduce(&g, Parity(0)).rep(), &g);
        assert!(q_reduce(&(&g - &g.involute()), Parity(0)).is_zero());
    }

    #[test]
    fn q_reduce_kills_the_subgroup() {
        // brute-force over small coefficient vectors in Z[Z/k], k = 1..5
        for k in 1..=5usize {
            for p in 0..2u8 {
                let eps = Parity(p).sign();
                for seed in 0..40i64 {
                    let a: Vec<i64> = (0..k).map(|m| ((seed * 7 + m as i64 * 3) % 9) - 4).collect();
                    let a = zc(&a);
                    let rel = &a - &a.involute().scale(eps);
                    assert!(q_reduce(&rel, Parity(p)).is_zero(), "k={k} p={p} a={a}");
                }
            }
        }
    }

    #[test]
    fn trivial_units() {
        assert_eq!(zc(&[0, 0, -1]).unit_inverse(), Some(zc(&[0, -1, 0])));
        assert!(zc(&[1, 1]).unit_inverse().is_none());
        assert!(RingElem::Int(2).unit_inverse().is_none());
    }
}

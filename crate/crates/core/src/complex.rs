//! Bounded chain complexes of f.g. free modules and chain maps between them.
//!
//! A complex lives on an explicit degree window `[lo, hi]`; outside it every
//! module is zero, and `d(r)` returns a correctly shaped zero matrix there, so
//! block formulas never need to special-case the ends.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::intmat::{self, IntMat};
use crate::matrix::{ring_matmul, Matrix};
use crate::ring::{Ring, RingElem};
use crate::sgn;

/// Collected failures of a report-valued checker.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Report {
    pub failures: Vec<String>,
}

impl Report {
    pub fn ok() -> Report {
        Report::default()
    }

    pub fn is_valid(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn push(&mut self, msg: String) {
        self.failures.push(msg);
    }

    pub fn merge(&mut self, prefix: &str, other: Report) {
        for f in other.failures {
            self.failures.push(format!("{prefix}{f}"));
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.failures.is_empty() {
            return write!(f, "valid");
        }
        for (i, msg) in self.failures.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            write!(f, "{msg}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainComplex {
    ring: Ring,
    lo: i64,
    ranks: Vec<usize>,
    /// `d[idx]` is `d_r` for `r = lo + idx + 1`.
    d: Vec<Matrix>,
}

impl ChainComplex {
    /// Build a complex and check shapes and `d∘d = 0`.
    ///
    /// `d` lists `d_r` for `r = lo+1, …, hi`.
    pub fn new(ring: Ring, lo: i64, ranks: Vec<usize>, d: Vec<Matrix>) -> Result<ChainComplex> {
        let c = ChainComplex::new_unchecked(ring, lo, ranks, d)?;
        for r in c.lo + 2..=c.hi() {
            if !(&c.d(r - 1) * &c.d(r)).is_zero() {
                return Err(Error::NotAChainComplex { degree: r });
            }
        }
        Ok(c)
    }

    /// Build a complex checking shapes only; pair with [`validate_complex`].
    pub fn new_unchecked(ring: Ring, lo: i64, ranks: Vec<usize>, d: Vec<Matrix>) -> Result<ChainComplex> {
        if d.len() != ranks.len().saturating_sub(1) {
            return Err(Error::DimensionMismatch(format!("{} differentials for {} degrees", d.len(), ranks.len())));
        }
        for (idx, m) in d.iter().enumerate() {
            let r = lo + idx as i64 + 1;
            if m.ring() != ring {
                return Err(Error::RingMismatch(format!("d_{r} is over {}, complex over {ring}", m.ring())));
            }
            if m.rows() != ranks[idx] || m.cols() != ranks[idx + 1] {
                return Err(Error::DimensionMismatch(format!(
                    "d_{r} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    ranks[idx],
                    ranks[idx + 1]
                )));
            }
        }
        Ok(ChainComplex { ring, lo, ranks, d })
    }

    /// Build over the window `[lo, hi]` from a rank function and a differential function.
    pub fn build(
        ring: Ring,
        lo: i64,
        hi: i64,
        rank: impl Fn(i64) -> usize,
        d: impl Fn(i64) -> Matrix,
    ) -> Result<ChainComplex> {
        if hi < lo {
            return Ok(ChainComplex::zero(ring));
        }
        let ranks: Vec<usize> = (lo..=hi).map(&rank).collect();
        let ds: Vec<Matrix> = (lo + 1..=hi).map(d).collect();
        ChainComplex::new(ring, lo, ranks, ds)
    }

    pub fn zero(ring: Ring) -> ChainComplex {
        ChainComplex { ring, lo: 0, ranks: Vec::new(), d: Vec::new() }
    }

    /// Free modules with zero differential; `ranks[idx]` sits in degree `lo + idx`.
    pub fn graded(ring: Ring, lo: i64, ranks: Vec<usize>) -> ChainComplex {
        let d = (1..ranks.len()).map(|i| Matrix::zeros(ring, ranks[i - 1], ranks[i])).collect();
        ChainComplex { ring, lo, ranks, d }
    }

    /// `S^i A^m`: a rank-`m` module concentrated in degree `i`.
    pub fn sphere_module(ring: Ring, i: i64, m: usize) -> ChainComplex {
        ChainComplex::graded(ring, i, vec![m])
    }

    #[inline]
    pub fn ring(&self) -> Ring {
        self.ring
    }

    #[inline]
    pub fn lo(&self) -> i64 {
        self.lo
    }

    /// Top of the window; `lo − 1` for an empty window.
    #[inline]
    pub fn hi(&self) -> i64 {
        self.lo + self.ranks.len() as i64 - 1
    }

    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn rank(&self, r: i64) -> usize {
        if r < self.lo || r > self.hi() {
            0
        } else {
            self.ranks[(r - self.lo) as usize]
        }
    }

    /// `d_r: C_r → C_{r−1}`.
    pub fn d(&self, r: i64) -> Matrix {
        if r > self.lo && r <= self.hi() {
            self.d[(r - self.lo - 1) as usize].clone()
        } else {
            Matrix::zeros(self.ring, self.rank(r - 1), self.rank(r))
        }
    }

    /// Borrowing access where the differential is stored.
    pub fn d_ref(&self, r: i64) -> Option<&Matrix> {
        if r > self.lo && r <= self.hi() {
            Some(&self.d[(r - self.lo - 1) as usize])
        } else {
            None
        }
    }

    pub fn total_rank(&self) -> usize {
        self.ranks.iter().sum()
    }

    /// Whether every module is zero.
    pub fn is_zero(&self) -> bool {
        self.ranks.iter().all(|&r| r == 0)
    }

    /// Smallest window containing every nonzero module, `None` for the zero complex.
    pub fn support(&self) -> Option<(i64, i64)> {
        let first = self.ranks.iter().position(|&r| r > 0)?;
        let last = self.ranks.iter().rposition(|&r| r > 0)?;
        Some((self.lo + first as i64, self.lo + last as i64))
    }

    /// The same complex on the window `[lo, hi]`; nonzero modules must fit.
    pub fn with_window(&self, lo: i64, hi: i64) -> Result<ChainComplex> {
        if let Some((a, b)) = self.support() {
            if a < lo || b > hi {
                return Err(Error::DimensionMismatch(format!("support [{a},{b}] outside [{lo},{hi}]")));
            }
        }
        ChainComplex::build(self.ring, lo, hi, |r| self.rank(r), |r| self.d(r))
    }

    /// The same complex on its support window.
    pub fn trimmed(&self) -> ChainComplex {
        match self.support() {
            Some((a, b)) => self.with_window(a, b).expect("support fits"),
            None => ChainComplex::zero(self.ring),
        }
    }

    /// `C_{*−k}`: degree `r` holds `C_{r−k}`, differentials unchanged.
    pub fn shift(&self, k: i64) -> ChainComplex {
        ChainComplex { ring: self.ring, lo: self.lo + k, ranks: self.ranks.clone(), d: self.d.clone() }
    }

    pub fn direct_sum(&self, other: &ChainComplex) -> ChainComplex {
        assert_eq!(self.ring, other.ring, "direct sum across rings");
        let (lo, hi) = union_window(self, other);
        ChainComplex::build(self.ring, lo, hi, |r| self.rank(r) + other.rank(r), |r| self.d(r).direct_sum(&other.d(r)))
            .expect("direct sum of complexes is a complex")
    }

    /// The dual complex `C^{n−*}`: `(C^{n−*})_r = C^{n−r}` with `d = (−1)^r d_C*`.
    pub fn dual(&self, n: i64) -> ChainComplex {
        if self.ranks.is_empty() {
            return ChainComplex::zero(self.ring);
        }
        ChainComplex::build(
            self.ring,
            n - self.hi(),
            n - self.lo,
            |r| self.rank(n - r),
            |r| self.d(n - r + 1).star().scale(sgn(r)),
        )
        .expect("dual of a complex is a complex")
    }

    /// Restriction of scalars from ℤ[ℤ/k] to ℤ (identity on ℤ).
    pub fn restrict_scalars(&self) -> Result<ChainComplex> {
        let k = match self.ring {
            Ring::Integers => return Ok(self.clone()),
            Ring::CyclicGroupRing(k) => k,
            Ring::Rationals => return Err(Error::UnsupportedRing("Q".into())),
        };
        let d = self.d.iter().map(|m| int_to_matrix(&m.restrict().expect("integral"))).collect();
        ChainComplex::new(Ring::Integers, self.lo, self.ranks.iter().map(|r| r * k).collect(), d)
    }

    /// Entries of `d` as integer matrices after restriction of scalars.
    fn restricted_d(&self, r: i64) -> Result<IntMat> {
        self.d(r).restrict().ok_or_else(|| Error::UnsupportedRing(format!("{}", self.ring)))
    }
}

pub(crate) fn union_window(a: &ChainComplex, b: &ChainComplex) -> (i64, i64) {
    match (a.ranks.is_empty(), b.ranks.is_empty()) {
        (true, true) => (0, -1),
        (true, false) => (b.lo, b.hi()),
        (false, true) => (a.lo, a.hi()),
        (false, false) => (a.lo.min(b.lo), a.hi().max(b.hi())),
    }
}

fn int_to_matrix(m: &IntMat) -> Matrix {
    Matrix::from_fn(Ring::Integers, m.rows(), m.cols(), |i, j| RingElem::Int(m.get(i, j) as i64))
}

impl fmt::Display for ChainComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "complex over {} on [{}, {}] ranks {:?}", self.ring, self.lo, self.hi(), self.ranks)
    }
}

/// Check `d∘d = 0` and shape coherence, listing failures by degree.
pub fn validate_complex(c: &ChainComplex) -> Report {
    let mut rep = Report::ok();
    for r in c.lo + 1..=c.hi() {
        let m = c.d_ref(r).expect("in window");
        if m.rows() != c.rank(r - 1) || m.cols() != c.rank(r) {
            rep.push(format!("degree {r}: d has shape {}x{}", m.rows(), m.cols()));
        }
    }
    if !rep.is_valid() {
        return rep;
    }
    for r in c.lo + 2..=c.hi() {
        let dd = &c.d(r - 1) * &c.d(r);
        if !dd.is_zero() {
            rep.push(format!("degree {r}: d_{}∘d_{r} = {dd} ≠ 0", r - 1));
        }
    }
    rep
}

/// Free function form of [`ChainComplex::dual`].
pub fn dual_complex(c: &ChainComplex, n: i64) -> ChainComplex {
    c.dual(n)
}

/// A degree-preserving chain map.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainMap {
    source: ChainComplex,
    target: ChainComplex,
    /// `maps[idx]` is `f_r` for `r = source.lo + idx`.
    maps: Vec<Matrix>,
}

impl ChainMap {
    /// Build `f` from its components and check `d f = f d`.
    pub fn new(source: &ChainComplex, target: &ChainComplex, f: impl Fn(i64) -> Matrix) -> Result<ChainMap> {
        let m = ChainMap::new_unchecked(source, target, f)?;
        if let Some(r) = m.first_failure() {
            return Err(Error::NotAChainMap { degree: r });
        }
        Ok(m)
    }

    /// Build checking shapes only.
    pub fn new_unchecked(source: &ChainComplex, target: &ChainComplex, f: impl Fn(i64) -> Matrix) -> Result<ChainMap> {
        if source.ring != target.ring {
            return Err(Error::RingMismatch(format!("{} → {}", source.ring, target.ring)));
        }
        let mut maps = Vec::with_capacity(source.ranks.len());
        for r in source.lo..=source.hi() {
            let m = f(r);
            if m.rows() != target.rank(r) || m.cols() != source.rank(r) {
                return Err(Error::DimensionMismatch(format!(
                    "f_{r} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    target.rank(r),
                    source.rank(r)
                )));
            }
            maps.push(m);
        }
        Ok(ChainMap { source: source.clone(), target: target.clone(), maps })
    }

    pub fn identity(c: &ChainComplex) -> ChainMap {
        ChainMap::new_unchecked(c, c, |r| Matrix::identity(c.ring, c.rank(r))).expect("shapes")
    }

    pub fn zero(source: &ChainComplex, target: &ChainComplex) -> ChainMap {
        ChainMap::new_unchecked(source, target, |r| Matrix::zeros(source.ring, target.rank(r), source.rank(r)))
            .expect("shapes")
    }

    pub fn source(&self) -> &ChainComplex {
        &self.source
    }

    pub fn target(&self) -> &ChainComplex {
        &self.target
    }

    pub fn ring(&self) -> Ring {
        self.source.ring
    }

    /// `f_r`.
    pub fn map(&self, r: i64) -> Matrix {
        if r >= self.source.lo && r <= self.source.hi() {
            self.maps[(r - self.source.lo) as usize].clone()
        } else {
            Matrix::zeros(self.source.ring, self.target.rank(r), self.source.rank(r))
        }
    }

    fn first_failure(&self) -> Option<i64> {
        let (lo, hi) = union_window(&self.source, &self.target);
        (lo..=hi + 1).find(|&r| {
            let lhs = &self.target.d(r) * &self.map(r);
            let rhs = &self.map(r - 1) * &self.source.d(r);
            lhs != rhs
        })
    }

    /// Degrees where `d f ≠ f d`.
    pub fn validate(&self) -> Report {
        let mut rep = Report::ok();
        let (lo, hi) = union_window(&self.source, &self.target);
        for r in lo..=hi + 1 {
            if &self.target.d(r) * &self.map(r) != &self.map(r - 1) * &self.source.d(r) {
                rep.push(format!("degree {r}: d f ≠ f d"));
            }
        }
        rep
    }

    /// `self ∘ other`.
    pub fn compose(&self, other: &ChainMap) -> Result<ChainMap> {
        if other.target != self.source {
            return Err(Error::DimensionMismatch("composition: target ≠ source".into()));
        }
        ChainMap::new_unchecked(&other.source, &self.target, |r| &self.map(r) * &other.map(r))
    }

    /// `f − g` for maps with the same source and target.
    pub fn sub(&self, other: &ChainMap) -> ChainMap {
        assert!(self.source == other.source && self.target == other.target, "sub of unrelated maps");
        ChainMap::new_unchecked(&self.source, &self.target, |r| &self.map(r) - &other.map(r)).expect("shapes")
    }

    /// The dual map `f*: D^{n−*} → C^{n−*}` with components `f_{n−r}*`.
    pub fn dual(&self, n: i64) -> ChainMap {
        let s = self.target.dual(n);
        let t = self.source.dual(n);
        ChainMap::new_unchecked(&s, &t, |r| self.map(n - r).star()).expect("shapes")
    }

    /// Restriction of scalars of both ends and every component.
    pub fn restrict_scalars(&self) -> Result<ChainMap> {
        let s = self.source.restrict_scalars()?;
        let t = self.target.restrict_scalars()?;
        ChainMap::new_unchecked(&s, &t, |r| int_to_matrix(&self.map(r).restrict().expect("integral")))
    }
}

/// Chain homotopy `h: f ≃ g`, components `h_r: C_r → D_{r+1}`.
#[derive(Clone, Debug)]
pub struct ChainHomotopy {
    pub f: ChainMap,
    pub g: ChainMap,
    h: Vec<Matrix>,
}

impl ChainHomotopy {
    pub fn new(f: &ChainMap, g: &ChainMap, h: impl Fn(i64) -> Matrix) -> Result<ChainHomotopy> {
        let src = f.source();
        let tgt = f.target();
        let mut hs = Vec::new();
        for r in src.lo..=src.hi() {
            let m = h(r);
            if m.rows() != tgt.rank(r + 1) || m.cols() != src.rank(r) {
                return Err(Error::DimensionMismatch(format!("h_{r} has the wrong shape")));
            }
            hs.push(m);
        }
        Ok(ChainHomotopy { f: f.clone(), g: g.clone(), h: hs })
    }

    pub fn h(&self, r: i64) -> Matrix {
        let src = self.f.source();
        if r >= src.lo && r <= src.hi() {
            self.h[(r - src.lo) as usize].clone()
        } else {
            Matrix::zeros(src.ring, self.f.target().rank(r + 1), src.rank(r))
        }
    }

    /// Whether `d h + h d = f − g` in every degree.
    pub fn verify(&self) -> bool {
        let src = self.f.source();
        let tgt = self.f.target();
        (src.lo..=src.hi()).all(|r| {
            let lhs = &(&tgt.d(r + 1) * &self.h(r)) + &(&self.h(r - 1) * &src.d(r));
            lhs == &self.f.map(r) - &self.g.map(r)
        })
    }
}

/// The algebraic mapping cone `𝒞(f)_r = D_r ⊕ C_{r−1}`,
/// `d = [[d_D, (−1)^r f], [0, d_C]]`.
pub fn mapping_cone(f: &ChainMap) -> ChainComplex {
    let c = f.source();
    let dd = f.target();
    let ring = f.ring();
    let (lo, hi) = union_window(c, dd);
    let (lo, hi) = if c.ranks.is_empty() { (lo, hi) } else { (lo.min(c.lo + 1), hi.max(c.hi() + 1)) };
    ChainComplex::build(
        ring,
        lo,
        hi,
        |r| dd.rank(r) + c.rank(r - 1),
        |r| {
            Matrix::blocks(
                ring,
                &[dd.rank(r - 1), c.rank(r - 2)],
                &[dd.rank(r), c.rank(r - 1)],
                &[(0, 0, &dd.d(r)), (0, 1, &f.map(r - 1).scale(sgn(r))), (1, 1, &c.d(r - 1))],
            )
        },
    )
    .expect("mapping cone of a chain map is a complex")
}

/// Homology in one degree: free rank and torsion coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Homology {
    pub degree: i64,
    pub free_rank: usize,
    /// Invariant factors greater than one (always empty over ℚ).
    pub torsion: Vec<i128>,
}

impl Homology {
    pub fn is_zero(&self) -> bool {
        self.free_rank == 0 && self.torsion.is_empty()
    }
}

impl fmt::Display for Homology {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.free_rank == 1 {
            parts.push("Z".into());
        } else if self.free_rank > 1 {
            parts.push(format!("Z^{}", self.free_rank));
        }
        for t in &self.torsion {
            parts.push(format!("Z/{t}"));
        }
        if parts.is_empty() {
            write!(f, "0")
        } else {
            write!(f, "{}", parts.join(" + "))
        }
    }
}

/// `H_r = ker d_r / im d_{r+1}` in every degree of the window.
///
/// Over ℚ only ranks are reported. ℤ[ℤ/k] is rejected: restrict scalars first.
pub fn homology(c: &ChainComplex) -> Result<Vec<Homology>> {
    match c.ring {
        Ring::CyclicGroupRing(_) => Err(Error::UnsupportedRing(format!("{}", c.ring))),
        Ring::Rationals => {
            let ranks: Vec<usize> = (c.lo..=c.hi() + 1).map(|r| c.d(r).z_rank()).collect::<Result<_>>()?;
            Ok((c.lo..=c.hi())
                .map(|r| {
                    let i = (r - c.lo) as usize;
                    Homology { degree: r, free_rank: c.rank(r) - ranks[i] - ranks[i + 1], torsion: Vec::new() }
                })
                .collect())
        }
        Ring::Integers => {
            let mut out = Vec::new();
            let mut below = intmat::snf(&c.restricted_d(c.lo)?)?;
            for r in c.lo..=c.hi() {
                let above = intmat::snf(&c.restricted_d(r + 1)?)?;
                let free = c.rank(r) - below.rank() - above.rank();
                let torsion = above.diag.iter().copied().filter(|&x| x > 1).collect();
                out.push(Homology { degree: r, free_rank: free, torsion });
                below = above;
            }
            Ok(out)
        }
    }
}

/// Whether all homology vanishes (ℤ after restriction of scalars, or ℚ).
pub fn is_acyclic(c: &ChainComplex) -> Result<bool> {
    let c = if c.ring.is_integral() { c.restrict_scalars()? } else { c.clone() };
    Ok(homology(&c)?.iter().all(Homology::is_zero))
}

/// A chain contraction `h` of an acyclic complex: `d h + h d = 1`.
#[derive(Clone, Debug)]
pub struct Contraction {
    pub complex: ChainComplex,
    /// `h[idx]` is `h_r: E_r → E_{r+1}` for `r = complex.lo + idx`.
    pub h: Vec<Matrix>,
}

impl Contraction {
    pub fn h(&self, r: i64) -> Matrix {
        let e = &self.complex;
        if r >= e.lo && r <= e.hi() {
            self.h[(r - e.lo) as usize].clone()
        } else {
            Matrix::zeros(e.ring, e.rank(r + 1), e.rank(r))
        }
    }

    /// Whether `d h + h d = 1`; an overflow while checking counts as failure.
    pub fn verify(&self) -> bool {
        self.try_verify().unwrap_or(false)
    }

    /// Whether `d h + h d = 1`, or [`Error::Overflow`] if the products do not fit.
    pub fn try_verify(&self) -> Result<bool> {
        let e = &self.complex;
        for r in e.lo..=e.hi() {
            let lhs = ring_matmul(&e.d(r + 1), &self.h(r))?.try_add(&ring_matmul(&self.h(r - 1), &e.d(r))?)?;
            if lhs != Matrix::identity(e.ring, e.rank(r)) {
                return Ok(false);
            }
        }
        Ok(true)
    }
}

/// Build a contraction degree by degree, or `None` if some step is unsolvable.
///
/// At degree `r` solve `d_{r+1} h_r = 1 − h_{r−1} d_r`; the right side lands in
/// `ker d_r`, which equals `im d_{r+1}` exactly when the complex is acyclic.
pub fn find_contraction(e: &ChainComplex) -> Result<Option<Contraction>> {
    let mut h: Vec<Matrix> = Vec::new();
    let mut prev = Matrix::zeros(e.ring, e.rank(e.lo), e.rank(e.lo - 1));
    for r in e.lo..=e.hi() {
        let rhs = Matrix::identity(e.ring, e.rank(r)).try_add(&-&ring_matmul(&prev, &e.d(r))?)?;
        let Some(hr) = e.d(r + 1).solve(&rhs)? else { return Ok(None) };
        prev = hr.clone();
        h.push(hr);
    }
    let c = Contraction { complex: e.clone(), h };
    Ok(if c.try_verify()? { Some(c) } else { None })
}

/// Verdict of [`is_chain_equivalence`].
#[derive(Clone, Debug)]
pub struct EquivalenceVerdict {
    pub holds: bool,
    /// Contraction of the mapping cone, when one was found.
    pub contraction: Option<Contraction>,
}

/// Whether `f` is a chain equivalence.
///
/// The test is acyclicity of the mapping cone, over ℤ after restriction of
/// scalars or over ℚ. For bounded free complexes this is the same as
/// contractibility. Over integral rings a contraction is also constructed and
/// verified, and attached as a certificate when the verdict is positive. If
/// its entries overflow, the verdict stands and no certificate is attached.
pub fn is_chain_equivalence(f: &ChainMap) -> Result<EquivalenceVerdict> {
    let cone = mapping_cone(f);
    if !is_acyclic(&cone)? {
        return Ok(EquivalenceVerdict { holds: false, contraction: None });
    }
    if !cone.ring.is_integral() {
        return Ok(EquivalenceVerdict { holds: true, contraction: None });
    }
    match find_contraction(&cone) {
        Ok(contraction) => Ok(EquivalenceVerdict { holds: contraction.is_some(), contraction }),
        // a bounded acyclic free complex is contractible; only the certificate is lost
        Err(Error::Overflow) => Ok(EquivalenceVerdict { holds: true, contraction: None }),
        Err(e) => Err(e),
    }
}

/// A smaller complex together with chain equivalences `f: C → C'`, `g: C' → C`
/// satisfying `f g = 1`.
#[derive(Clone, Debug)]
pub struct Reduction {
    pub reduced: ChainComplex,
    pub f: ChainMap,
    pub g: ChainMap,
}

struct Reducer {
    ring: Ring,
    lo: i64,
    ranks: Vec<usize>,
    d: Vec<Matrix>,
    // F_r: C_r → current_r and G_r: current_r → C_r
    fm: Vec<Matrix>,
    gm: Vec<Matrix>,
}

impl Reducer {
    fn idx(&self, r: i64) -> Option<usize> {
        if r >= self.lo && r < self.lo + self.ranks.len() as i64 {
            Some((r - self.lo) as usize)
        } else {
            None
        }
    }

    fn d(&self, r: i64) -> Option<&Matrix> {
        let i = self.idx(r)?;
        self.idx(r - 1)?;
        Some(&self.d[i - 1])
    }

    /// Cancel the unit `d_r[a][b]`.
    fn eliminate(&mut self, r: i64, a: usize, b: usize) {
        let ring = self.ring;
        let ir = self.idx(r).expect("window");
        let dr = self.d[ir - 1].clone();
        let uinv = dr.get(a, b).unit_inverse().expect("unit pivot");
        let keep_rows: Vec<usize> = (0..dr.rows()).filter(|&x| x != a).collect();
        let keep_cols: Vec<usize> = (0..dr.cols()).filter(|&x| x != b).collect();
        // Schur complement
        let new_dr = Matrix::from_fn(ring, keep_rows.len(), keep_cols.len(), |i, j| {
            let (p, q) = (keep_rows[i], keep_cols[j]);
            let corr = &(dr.get(p, b) * &uinv) * dr.get(a, q);
            dr.get(p, q) - &corr
        });
        // d_{r+1}: drop row b
        if let Some(up) = self.d(r + 1).cloned() {
            let m = Matrix::from_fn(ring, keep_cols.len(), up.cols(), |i, j| up.get(keep_cols[i], j).clone());
            self.d[ir] = m;
        }
        // d_{r−1}: drop column a
        if let Some(down) = self.d(r - 1).cloned() {
            let m = Matrix::from_fn(ring, down.rows(), keep_rows.len(), |i, j| down.get(i, keep_rows[j]).clone());
            self.d[ir - 2] = m;
        }
        // f_r: projection away from b; f_{r−1}: y' − γ u⁻¹ y_a
        let f_r =
            Matrix::from_fn(
                ring,
                keep_cols.len(),
                dr.cols(),
                |i, j| {
                    if keep_cols[i] == j {
                        ring.one()
                    } else {
                        ring.zero()
                    }
                },
            );
        let f_r1 = Matrix::from_fn(ring, keep_rows.len(), dr.rows(), |i, j| {
            if j == a {
                -&(dr.get(keep_rows[i], b) * &uinv)
            } else if keep_rows[i] == j {
                ring.one()
            } else {
                ring.zero()
            }
        });
        // g_r: x' ↦ (−u⁻¹ β x', x'); g_{r−1}: inclusion
        let g_r = Matrix::from_fn(ring, dr.cols(), keep_cols.len(), |i, j| {
            if i == b {
                -&(&uinv * dr.get(a, keep_cols[j]))
            } else if i == keep_cols[j] {
                ring.one()
            } else {
                ring.zero()
            }
        });
        let g_r1 =
            Matrix::from_fn(
                ring,
                dr.rows(),
                keep_rows.len(),
                |i, j| {
                    if i == keep_rows[j] {
                        ring.one()
                    } else {
                        ring.zero()
                    }
                },
            );
        self.fm[ir] = &f_r * &self.fm[ir];
        self.fm[ir - 1] = &f_r1 * &self.fm[ir - 1];
        self.gm[ir] = &self.gm[ir] * &g_r;
        self.gm[ir - 1] = &self.gm[ir - 1] * &g_r1;
        self.d[ir - 1] = new_dr;
        self.ranks[ir] -= 1;
        self.ranks[ir - 1] -= 1;
    }

    /// Replace `d_r` by its Smith form, changing bases of `C_r` and `C_{r−1}`.
    fn smith_basis(&mut self, r: i64) -> Result<()> {
        let ir = self.idx(r).expect("window");
        let dr = self.d[ir - 1].restrict().expect("integers");
        let s = intmat::snf(&dr)?;
        let u = int_to_matrix(&s.u);
        let u_inv = int_to_matrix(&s.u_inv);
        let v = int_to_matrix(&s.v);
        let v_inv = int_to_matrix(&s.v_inv);
        self.d[ir - 1] = &(&u * &self.d[ir - 1]) * &v;
        if let Some(up) = self.d(r + 1).cloned() {
            self.d[ir] = &v_inv * &up;
        }
        if let Some(down) = self.d(r - 1).cloned() {
            self.d[ir - 2] = &down * &u_inv;
        }
        self.fm[ir] = &v_inv * &self.fm[ir];
        self.fm[ir - 1] = &u * &self.fm[ir - 1];
        self.gm[ir] = &self.gm[ir] * &v;
        self.gm[ir - 1] = &self.gm[ir - 1] * &u_inv;
        Ok(())
    }

    fn find_unit(&self) -> Option<(i64, usize, usize)> {
        for r in self.lo + 1..self.lo + self.ranks.len() as i64 {
            let m = self.d(r)?;
            for a in 0..m.rows() {
                for b in 0..m.cols() {
                    if m.get(a, b).is_unit() {
                        return Some((r, a, b));
                    }
                }
            }
        }
        None
    }
}

/// Cancel unit entries of the differentials until none remain.
///
/// Over ℤ each differential is first brought to Smith form so that every
/// unit invariant factor is cancelled; the result is then minimal (all
/// differentials have entries divisible by non-units). Over ℤ[ℤ/k] the
/// trivial units `±g^m` are cancelled.
pub fn reduce_complex(c: &ChainComplex) -> Result<Reduction> {
    let ring = c.ring;
    let mut red = Reducer {
        ring,
        lo: c.lo,
        ranks: c.ranks.clone(),
        d: c.d.clone(),
        fm: c.ranks.iter().map(|&n| Matrix::identity(ring, n)).collect(),
        gm: c.ranks.iter().map(|&n| Matrix::identity(ring, n)).collect(),
    };
    loop {
        if let Some((r, a, b)) = red.find_unit() {
            red.eliminate(r, a, b);
            continue;
        }
        if ring != Ring::Integers {
            break;
        }
        // expose hidden unit invariant factors
        let mut changed = false;
        for r in red.lo + 1..red.lo + red.ranks.len() as i64 {
            let m = red.d(r).expect("window").restrict().expect("integers");
            let s = intmat::snf(&m)?;
            if s.diag.first() == Some(&1) {
                red.smith_basis(r)?;
                changed = true;
                break;
            }
        }
        if !changed {
            break;
        }
    }
    let reduced = ChainComplex::new(ring, red.lo, red.ranks.clone(), red.d.clone())?;
    let fm = red.fm;
    let gm = red.gm;
    let lo = c.lo;
    let f = ChainMap::new(c, &reduced, |r| fm[(r - lo) as usize].clone())?;
    let g = ChainMap::new(&reduced, c, |r| gm[(r - lo) as usize].clone())?;
    Ok(Reduction { reduced, f, g })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_ints(Ring::Integers, rows, cols, e)
    }

    #[test]
    fn invalid_complex_is_reported() {
        let c =
            ChainComplex::new_unchecked(Ring::Integers, 0, vec![1, 1, 1], vec![z(1, 1, &[1]), z(1, 1, &[2])]).unwrap();
        let rep = validate_complex(&c);
        assert!(!rep.is_valid());
        assert!(rep.failures[0].starts_with("degree 2"));
        assert!(ChainComplex::new(Ring::Integers, 0, vec![1, 1, 1], vec![z(1, 1, &[1]), z(1, 1, &[2])]).is_err());
    }

    #[test]
    fn dual_of_sphere_module() {
        let c = ChainComplex::sphere_module(Ring::Integers, 1, 1);
        let d = c.dual(4);
        assert_eq!(d.rank(3), 1);
        assert_eq!(d.support(), Some((3, 3)));
    }

    #[test]
    fn double_dual_sign() {
        let c = ChainComplex::new(Ring::Integers, 0, vec![2, 1], vec![z(2, 1, &[1, 2])]).unwrap();
        assert_eq!(c.dual(3).dual(3), c);
        let dd = c.dual(2).dual(2);
        assert_eq!(dd.d(1), c.d(1).scale(-1));
    }

    #[test]
    fn cone_of_two() {
        let c = ChainComplex::sphere_module(Ring::Integers, 0, 1);
        let f = ChainMap::new(&c, &c, |_| z(1, 1, &[2])).unwrap();
        let cone = mapping_cone(&f);
        let h = homology(&cone).unwrap();
        let h0 = h.iter().find(|x| x.degree == 0).unwrap();
        assert_eq!((h0.free_rank, h0.torsion.clone()), (0, vec![2]));
        assert!(!is_chain_equivalence(&f).unwrap().holds);
        let id = ChainMap::identity(&c);
        let v = is_chain_equivalence(&id).unwrap();
        assert!(v.holds && v.contraction.unwrap().verify());
    }

    #[test]
    fn group_ring_equivalence_has_contraction() {
        let r = Ring::CyclicGroupRing(2);
        let c = ChainComplex::sphere_module(r, 0, 1);
        let g = ChainMap::new(&c, &c, |_| Matrix::from_fn(r, 1, 1, |_, _| r.monomial(-1, 1))).unwrap();
        let v = is_chain_equivalence(&g).unwrap();
        assert!(v.holds);
        assert!(v.contraction.unwrap().verify());
        let n = ChainMap::new(&c, &c, |_| Matrix::from_fn(r, 1, 1, |_, _| RingElem::Group(vec![1, 1]))).unwrap();
        assert!(!is_chain_equivalence(&n).unwrap().holds);
    }

    #[test]
    fn reduction_of_contractible_and_hidden_units() {
        let c = ChainComplex::new(Ring::Integers, 0, vec![2, 2], vec![z(2, 2, &[2, 3, 1, 2])]).unwrap();
        let red = reduce_complex(&c).unwrap();
        assert_eq!(red.reduced.total_rank(), 0);
        // determinant −2 leaves a single Z/2
        let c = ChainComplex::new(Ring::Integers, 0, vec![2, 2], vec![z(2, 2, &[2, 3, 4, 5])]).unwrap();
        let red = reduce_complex(&c).unwrap();
        assert_eq!(red.reduced.ranks(), &[1, 1]);
        assert_eq!(red.reduced.d(1).get(0, 0).as_int().map(i64::abs), Some(2));
        let c = ChainComplex::new(Ring::Integers, 0, vec![1, 2], vec![z(1, 2, &[2, 3])]).unwrap();
        let red = reduce_complex(&c).unwrap();
        assert_eq!(red.reduced.ranks(), &[0, 1]);
        assert_eq!(red.f.compose(&red.g).unwrap(), ChainMap::identity(&red.reduced));
        assert!(is_chain_equivalence(&red.g).unwrap().holds);
    }
}

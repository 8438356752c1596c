//! Symmetric and quadratic structures on chain complexes and pairs.
//!
//! A structure on an `n`-dimensional complex `C` is a family of matrices
//! indexed by `(s, r)`:
//!
//! * symmetric `φ_s(r): C^{n−r+s} → C_r`,
//! * quadratic `ψ_s(r): C^{n−r−s} → C_r`.
//!
//! The duality involution on `Hom(C^p, C_q)` is `T θ = (−1)^{pq} θ*`.
//!
//! Relations (every `s ≥ 0`, every `r`, `φ_{−1} = 0`):
//!
//! ```text
//! d φ_s + (−1)^r φ_s d* + (−1)^{n+s−1} (φ_{s−1} + (−1)^s T φ_{s−1}) = 0   on C^{n−r+s−1} → C_r
//! d ψ_s + (−1)^r ψ_s d* + (−1)^{n−s−1} (ψ_{s+1} + (−1)^{s+1} T ψ_{s+1}) = 0   on C^{n−r−s−1} → C_r
//! ```
//!
//! For a pair `(j: C → D, (δφ, φ))` with `D` of dimension `n+1`, write
//! `∂δφ` for the left side of the `(n+1)`-dimensional relation evaluated on
//! `δφ`. The pair relation used here is `∂δφ_s = (−1)^{n+1} j φ_s j*`, and
//! likewise `∂δψ_s = (−1)^{n+1} j ψ_s j*` in the quadratic case. This is
//! the normalisation under which the surgery effect formulas in
//! [`crate::surgery`] produce complexes satisfying the relations above.

use alloc::collections::BTreeMap;
use alloc::format;

use crate::complex::{self, ChainComplex, ChainMap, Report};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::sgn;

/// `T θ = (−1)^{pq} θ*` for `θ: C^p → C_q`; the result maps `C^q → C_p`.
pub fn t_dual(theta: &Matrix, p: i64, q: i64) -> Matrix {
    theta.star().scale(sgn(p * q))
}

/// Which family shape a [`Family`] carries.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Kind {
    Symmetric,
    Quadratic,
}

impl Kind {
    /// Source degree of the `(s, r)` component on an `n`-dimensional complex.
    #[inline]
    pub fn source_degree(self, n: i64, s: usize, r: i64) -> i64 {
        match self {
            Kind::Symmetric => n - r + s as i64,
            Kind::Quadratic => n - r - s as i64,
        }
    }
}

/// Sparse family of structure maps keyed by `(s, r)`; zero matrices are not stored.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Family {
    maps: BTreeMap<(usize, i64), Matrix>,
}

impl Family {
    pub fn new() -> Family {
        Family::default()
    }

    pub fn insert(&mut self, s: usize, r: i64, m: Matrix) {
        if m.is_zero() {
            self.maps.remove(&(s, r));
        } else {
            self.maps.insert((s, r), m);
        }
    }

    pub fn get_stored(&self, s: usize, r: i64) -> Option<&Matrix> {
        self.maps.get(&(s, r))
    }

    pub fn iter(&self) -> impl Iterator<Item = (&(usize, i64), &Matrix)> {
        self.maps.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.maps.is_empty()
    }

    /// Largest `s` with a nonzero component.
    pub fn max_s(&self) -> Option<usize> {
        self.maps.keys().map(|(s, _)| *s).max()
    }

    pub fn scale(&self, c: i64) -> Family {
        let mut out = Family::new();
        for ((s, r), m) in &self.maps {
            out.insert(*s, *r, m.scale(c));
        }
        out
    }

    /// Component `(s, r)` on `c`, with a zero of the right shape when absent.
    fn component(&self, c: &ChainComplex, kind: Kind, n: i64, s: usize, r: i64) -> Matrix {
        match self.maps.get(&(s, r)) {
            Some(m) => m.clone(),
            None => Matrix::zeros(c.ring(), c.rank(r), c.rank(kind.source_degree(n, s, r))),
        }
    }

    fn check_shapes(&self, c: &ChainComplex, kind: Kind, n: i64) -> Result<()> {
        for ((s, r), m) in &self.maps {
            let p = kind.source_degree(n, *s, *r);
            if m.ring() != c.ring() {
                return Err(Error::RingMismatch(format!("component ({s},{r}) over {}", m.ring())));
            }
            if m.rows() != c.rank(*r) || m.cols() != c.rank(p) {
                return Err(Error::DimensionMismatch(format!(
                    "component s={s} r={r} is {}x{}, expected {}x{}",
                    m.rows(),
                    m.cols(),
                    c.rank(*r),
                    c.rank(p)
                )));
            }
        }
        Ok(())
    }
}

/// An `n`-dimensional symmetric complex `(C, φ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricComplex {
    complex: ChainComplex,
    n: i64,
    phi: Family,
}

/// An `n`-dimensional quadratic complex `(C, ψ)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticComplex {
    complex: ChainComplex,
    n: i64,
    psi: Family,
}

macro_rules! structured_common {
    ($ty:ident, $field:ident, $kind:expr) => {
        impl $ty {
            /// Shapes are checked; relations are not (see the `check_*` functions).
            pub fn new(complex: ChainComplex, n: i64, $field: Family) -> Result<$ty> {
                $field.check_shapes(&complex, $kind, n)?;
                Ok($ty { complex, n, $field })
            }

            /// Build from a component function over every `(s, r)` with `s ≤ s_max`.
            pub fn from_fn(
                complex: ChainComplex,
                n: i64,
                s_max: usize,
                f: impl Fn(usize, i64) -> Matrix,
            ) -> Result<$ty> {
                let mut fam = Family::new();
                for s in 0..=s_max {
                    for r in complex.lo()..=complex.hi() {
                        let p = $kind.source_degree(n, s, r);
                        if complex.rank(r) == 0 || complex.rank(p) == 0 {
                            continue;
                        }
                        fam.insert(s, r, f(s, r));
                    }
                }
                $ty::new(complex, n, fam)
            }

            pub fn complex(&self) -> &ChainComplex {
                &self.complex
            }

            pub fn n(&self) -> i64 {
                self.n
            }

            pub fn ring(&self) -> Ring {
                self.complex.ring()
            }

            pub fn family(&self) -> &Family {
                &self.$field
            }

            /// Component `(s, r)`.
            pub fn $field(&self, s: usize, r: i64) -> Matrix {
                self.$field.component(&self.complex, $kind, self.n, s, r)
            }

            /// `T` applied to the family at `(s, r)`.
            pub fn t(&self, s: usize, r: i64) -> Matrix {
                let q = $kind.source_degree(self.n, s, r);
                t_dual(&self.$field(s, q), r, q)
            }

            /// Componentwise negation.
            pub fn negate(&self) -> $ty {
                $ty { complex: self.complex.clone(), n: self.n, $field: self.$field.scale(-1) }
            }

            /// `(C ⊕ C', θ ⊕ θ')` with block-diagonal components.
            pub fn direct_sum(&self, other: &$ty) -> Result<$ty> {
                if self.n != other.n {
                    return Err(Error::DimensionMismatch(format!("dimensions {} and {}", self.n, other.n)));
                }
                let c = self.complex.direct_sum(&other.complex);
                let s_max = self.$field.max_s().max(other.$field.max_s()).unwrap_or(0);
                $ty::from_fn(c, self.n, s_max, |s, r| self.$field(s, r).direct_sum(&other.$field(s, r)))
            }

            /// Transport along a chain map `f: C → C'`: components `f θ f*`.
            ///
            /// The result satisfies the relations for any chain map; it is
            /// Poincaré when `f` is a chain equivalence and the input is.
            pub fn transport(&self, f: &ChainMap) -> Result<$ty> {
                if f.source() != &self.complex {
                    return Err(Error::DimensionMismatch("transport: source is not the carrier".into()));
                }
                let s_max = self.$field.max_s().unwrap_or(0);
                let n = self.n;
                $ty::from_fn(f.target().clone(), n, s_max, |s, r| {
                    let p = $kind.source_degree(n, s, r);
                    &(&f.map(r) * &self.$field(s, r)) * &f.map(p).star()
                })
            }

            /// Degree shift `C ↦ C_{*−k}` with `n ↦ n + 2k`, components carried along.
            ///
            /// Signs `(−1)^r` and `(−1)^{pq}` are unchanged when `k` is even,
            /// which is the case used for 4-periodicity (`k = 2`).
            pub fn shift(&self, k: i64) -> Result<$ty> {
                let mut fam = Family::new();
                for ((s, r), m) in self.$field.iter() {
                    fam.insert(*s, r + k, m.clone());
                }
                $ty::new(self.complex.shift(k), self.n + 2 * k, fam)
            }
        }
    };
}

structured_common!(SymmetricComplex, phi, Kind::Symmetric);
structured_common!(QuadraticComplex, psi, Kind::Quadratic);

impl SymmetricComplex {
    /// The chain map `φ_0: C^{n−*} → C`, unchecked.
    pub fn phi0_map(&self) -> Result<ChainMap> {
        let dual = self.complex.dual(self.n);
        ChainMap::new_unchecked(&dual, &self.complex, |r| self.phi(0, r))
    }
}

impl QuadraticComplex {
    /// `(1+T)ψ_0` at degree `r`: `C^{n−r} → C_r`.
    pub fn sym_psi0(&self, r: i64) -> Matrix {
        &self.psi(0, r) + &self.t(0, r)
    }

    /// The chain map `(1+T)ψ_0: C^{n−*} → C`, unchecked.
    pub fn sym_psi0_map(&self) -> Result<ChainMap> {
        let dual = self.complex.dual(self.n);
        ChainMap::new_unchecked(&dual, &self.complex, |r| self.sym_psi0(r))
    }
}

/// Residual of the symmetric relation for `(s, r)` on an `n`-dimensional family.
pub(crate) fn sym_residual(c: &ChainComplex, n: i64, fam: &Family, s: usize, r: i64) -> Matrix {
    let k = Kind::Symmetric;
    let si = s as i64;
    let p = n - r + si - 1;
    let mut out = &c.d(r + 1) * &fam.component(c, k, n, s, r + 1);
    out = &out + &(&fam.component(c, k, n, s, r) * &c.d(n - r + si).star()).scale(sgn(r));
    if s >= 1 {
        let prev = fam.component(c, k, n, s - 1, r);
        let tprev = t_dual(&fam.component(c, k, n, s - 1, p), r, p);
        let inner = &prev + &tprev.scale(sgn(si));
        out = &out + &inner.scale(sgn(n + si - 1));
    }
    out
}

/// Residual of the quadratic relation for `(s, r)`.
pub(crate) fn quad_residual(c: &ChainComplex, n: i64, fam: &Family, s: usize, r: i64) -> Matrix {
    let k = Kind::Quadratic;
    let si = s as i64;
    let p = n - r - si - 1;
    let mut out = &c.d(r + 1) * &fam.component(c, k, n, s, r + 1);
    out = &out + &(&fam.component(c, k, n, s, r) * &c.d(n - r - si).star()).scale(sgn(r));
    let next = fam.component(c, k, n, s + 1, r);
    let tnext = t_dual(&fam.component(c, k, n, s + 1, p), r, p);
    let inner = &next + &tnext.scale(sgn(si + 1));
    &out + &inner.scale(sgn(n - si - 1))
}

/// Range of `s` that can carry a nonzero relation instance.
fn s_range(fam: &Family, c: &ChainComplex, kind: Kind) -> core::ops::RangeInclusive<usize> {
    let span = (c.hi() - c.lo()).max(0) as usize;
    match kind {
        Kind::Symmetric => 0..=fam.max_s().map_or(0, |m| m + 1).max(span + 1),
        Kind::Quadratic => 0..=fam.max_s().unwrap_or(0).max(span + 1),
    }
}

fn check_family(c: &ChainComplex, n: i64, fam: &Family, kind: Kind) -> Report {
    let mut rep = complex::validate_complex(c);
    if !rep.is_valid() {
        return rep;
    }
    for s in s_range(fam, c, kind) {
        for r in c.lo()..=c.hi() {
            let res = match kind {
                Kind::Symmetric => sym_residual(c, n, fam, s, r),
                Kind::Quadratic => quad_residual(c, n, fam, s, r),
            };
            if !res.is_zero() {
                rep.push(format!("relation s={s} r={r} fails: residual {res}"));
            }
        }
    }
    rep
}

/// Verify every instance of the symmetric relation.
pub fn check_symmetric(x: &SymmetricComplex) -> Report {
    check_family(&x.complex, x.n, &x.phi, Kind::Symmetric)
}

/// Verify every instance of the quadratic relation.
pub fn check_quadratic(x: &QuadraticComplex) -> Report {
    check_family(&x.complex, x.n, &x.psi, Kind::Quadratic)
}

/// `φ_0 = (1+T)ψ_0`, `φ_s = 0` for `s ≥ 1`.
pub fn symmetrize(x: &QuadraticComplex) -> SymmetricComplex {
    SymmetricComplex::from_fn(x.complex.clone(), x.n, 0, |_, r| x.sym_psi0(r)).expect("shapes")
}

fn poincare_of(map: Result<ChainMap>) -> Result<bool> {
    let map = map?;
    if !map.validate().is_valid() {
        return Ok(false);
    }
    Ok(complex::is_chain_equivalence(&map)?.holds)
}

/// Whether `φ_0: C^{n−*} → C` is a chain equivalence.
pub fn is_poincare_sym(x: &SymmetricComplex) -> Result<bool> {
    poincare_of(x.phi0_map())
}

/// Whether `(1+T)ψ_0: C^{n−*} → C` is a chain equivalence.
pub fn is_poincare_quad(x: &QuadraticComplex) -> Result<bool> {
    poincare_of(x.sym_psi0_map())
}

/// Sign `ε` in the pair relation `∂δθ_s = ε j θ_s j*`.
#[inline]
pub(crate) fn pair_sign(n: i64) -> i64 {
    sgn(n + 1)
}

/// An `(n+1)`-dimensional symmetric pair `(j: C → D, (δφ, φ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SymmetricPair {
    j: ChainMap,
    boundary: SymmetricComplex,
    delta: Family,
}

/// An `(n+1)`-dimensional quadratic pair `(j: C → D, (δψ, ψ))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticPair {
    j: ChainMap,
    boundary: QuadraticComplex,
    delta: Family,
}

macro_rules! pair_common {
    ($ty:ident, $bty:ident, $bfield:ident, $kind:expr) => {
        impl $ty {
            /// Shapes and chain-map-ness of `j` are checked; relations are not.
            pub fn new(j: ChainMap, boundary: $bty, delta: Family) -> Result<$ty> {
                if j.source() != boundary.complex() {
                    return Err(Error::DimensionMismatch("j does not start at the boundary complex".into()));
                }
                if let Some(f) = j.validate().failures.first() {
                    return Err(Error::InvalidStructure(format!("j: {f}")));
                }
                delta.check_shapes(j.target(), $kind, boundary.n() + 1)?;
                Ok($ty { j, boundary, delta })
            }

            /// Build `δ` from a component function over `s ≤ s_max`.
            pub fn from_fn(j: ChainMap, boundary: $bty, s_max: usize, f: impl Fn(usize, i64) -> Matrix) -> Result<$ty> {
                let d = j.target().clone();
                let m = boundary.n() + 1;
                let mut fam = Family::new();
                for s in 0..=s_max {
                    for r in d.lo()..=d.hi() {
                        let p = $kind.source_degree(m, s, r);
                        if d.rank(r) == 0 || d.rank(p) == 0 {
                            continue;
                        }
                        fam.insert(s, r, f(s, r));
                    }
                }
                $ty::new(j, boundary, fam)
            }

            pub fn j(&self) -> &ChainMap {
                &self.j
            }

            pub fn boundary(&self) -> &$bty {
                &self.boundary
            }

            /// The `(n+1)`-dimensional complex `D`.
            pub fn target(&self) -> &ChainComplex {
                self.j.target()
            }

            pub fn delta_family(&self) -> &Family {
                &self.delta
            }

            /// `δ` component `(s, r)` on `D`.
            pub fn delta(&self, s: usize, r: i64) -> Matrix {
                self.delta.component(self.j.target(), $kind, self.boundary.n() + 1, s, r)
            }

            /// `T δ` at `(s, r)`.
            pub fn t_delta(&self, s: usize, r: i64) -> Matrix {
                let q = $kind.source_degree(self.boundary.n() + 1, s, r);
                t_dual(&self.delta(s, q), r, q)
            }

            /// `j θ_s j*` at `(s, r)`: a map `D^{p} → D_r` with `p` the boundary source degree.
            pub fn j_theta_jstar(&self, s: usize, r: i64) -> Matrix {
                let p = $kind.source_degree(self.boundary.n(), s, r);
                &(&self.j.map(r) * &self.boundary.$bfield(s, r)) * &self.j.map(p).star()
            }

            /// The `(n+1)`-dimensional structure `δ` viewed on `D` alone.
            fn delta_residual(&self, s: usize, r: i64) -> Matrix {
                let d = self.j.target();
                let m = self.boundary.n() + 1;
                match $kind {
                    Kind::Symmetric => sym_residual(d, m, &self.delta, s, r),
                    Kind::Quadratic => quad_residual(d, m, &self.delta, s, r),
                }
            }

            /// Relation report without the Poincaré condition.
            pub fn check_relations(&self) -> Report {
                let mut rep = Report::ok();
                let d = self.j.target();
                let eps = pair_sign(self.boundary.n());
                let span = (d.hi() - d.lo()).max(0) as usize + 2;
                let s_top = self.delta.max_s().unwrap_or(0).max(self.boundary.family().max_s().unwrap_or(0)) + 1;
                for s in 0..=s_top.max(span) {
                    for r in d.lo()..=d.hi() {
                        // the residual lands in D^{p} → D_r, the same shape as j θ_s j*
                        let lhs = self.delta_residual(s, r);
                        let rhs = self.j_theta_jstar(s, r).scale(eps);
                        if lhs != rhs {
                            rep.push(format!("pair relation s={s} r={r} fails"));
                        }
                    }
                }
                rep
            }
        }
    };
}

pair_common!(SymmetricPair, SymmetricComplex, phi, Kind::Symmetric);
pair_common!(QuadraticPair, QuadraticComplex, psi, Kind::Quadratic);

/// Sign on the lower block of the Poincaré-pair column map at degree `r`.
#[inline]
fn pair_map_sign(n: i64, r: i64) -> i64 {
    sgn(n + r)
}

impl SymmetricPair {
    /// `(δφ_0 ; ±φ_0 j*): D^{n+1−*} → 𝒞(j)`.
    pub fn duality_map(&self) -> Result<ChainMap> {
        let n = self.boundary.n();
        let d = self.j.target();
        let c = self.boundary.complex();
        let src = d.dual(n + 1);
        let cone = complex::mapping_cone(&self.j);
        ChainMap::new_unchecked(&src, &cone, |r| {
            let lower = (&self.boundary.phi(0, r - 1) * &self.j.map(n + 1 - r).star()).scale(pair_map_sign(n, r));
            Matrix::blocks(
                c.ring(),
                &[d.rank(r), c.rank(r - 1)],
                &[d.rank(n + 1 - r)],
                &[(0, 0, &self.delta(0, r)), (1, 0, &lower)],
            )
        })
    }
}

impl QuadraticPair {
    /// `(1+T)δψ_0` at degree `r`.
    pub fn sym_delta0(&self, r: i64) -> Matrix {
        &self.delta(0, r) + &self.t_delta(0, r)
    }

    /// `((1+T)δψ_0 ; ±(1+T)ψ_0 j*): D^{n+1−*} → 𝒞(j)`.
    pub fn duality_map(&self) -> Result<ChainMap> {
        let n = self.boundary.n();
        let d = self.j.target();
        let c = self.boundary.complex();
        let src = d.dual(n + 1);
        let cone = complex::mapping_cone(&self.j);
        ChainMap::new_unchecked(&src, &cone, |r| {
            let lower = (&self.boundary.sym_psi0(r - 1) * &self.j.map(n + 1 - r).star()).scale(pair_map_sign(n, r));
            Matrix::blocks(
                c.ring(),
                &[d.rank(r), c.rank(r - 1)],
                &[d.rank(n + 1 - r)],
                &[(0, 0, &self.sym_delta0(r)), (1, 0, &lower)],
            )
        })
    }

    /// The symmetric pair `(j, ((1+T)δψ_0, 0, …), (1+T)ψ_0)`.
    pub fn symmetrize(&self) -> SymmetricPair {
        let b = symmetrize(&self.boundary);
        SymmetricPair::from_fn(self.j.clone(), b, 0, |_, r| self.sym_delta0(r)).expect("shapes")
    }
}

fn check_pair_common(relations: Report, boundary: Report, map: Result<ChainMap>, poincare: bool) -> Result<Report> {
    let mut rep = Report::ok();
    rep.merge("boundary: ", boundary);
    rep.merge("", relations);
    if poincare && rep.is_valid() {
        let map = map?;
        let chain = map.validate();
        if !chain.is_valid() {
            rep.merge("duality map: ", chain);
        } else if !complex::is_chain_equivalence(&map)?.holds {
            rep.push("duality map D^{n+1-*} → C(j) is not a chain equivalence".into());
        }
    }
    Ok(rep)
}

/// Verify a symmetric pair; with `poincare`, also certify the duality map.
pub fn check_pair_sym(p: &SymmetricPair, poincare: bool) -> Result<Report> {
    check_pair_common(p.check_relations(), check_symmetric(&p.boundary), p.duality_map(), poincare)
}

/// Verify a quadratic pair; with `poincare`, also certify the duality map.
pub fn check_pair_quad(p: &QuadraticPair, poincare: bool) -> Result<Report> {
    check_pair_common(p.check_relations(), check_quadratic(&p.boundary), p.duality_map(), poincare)
}

/// Bound on `s` beyond which every component of a family on `c` vanishes.
fn s_bound(c: &ChainComplex, kind: Kind, n: i64) -> usize {
    let b = match kind {
        Kind::Symmetric => 2 * c.hi() - n - c.lo(),
        Kind::Quadratic => n - 2 * c.lo(),
    };
    b.max(0) as usize + 1
}

/// Positions `(s, r)` where a family on `c` can be nonzero.
fn slots(c: &ChainComplex, kind: Kind, n: i64) -> alloc::vec::Vec<(usize, i64)> {
    let mut out = alloc::vec::Vec::new();
    for s in 0..=s_bound(c, kind, n) {
        for r in c.lo()..=c.hi() {
            if c.rank(r) > 0 && c.rank(kind.source_degree(n, s, r)) > 0 {
                out.push((s, r));
            }
        }
    }
    out
}

fn residual(c: &ChainComplex, kind: Kind, n: i64, fam: &Family, s: usize, r: i64) -> Matrix {
    match kind {
        Kind::Symmetric => sym_residual(c, n, fam, s, r),
        Kind::Quadratic => quad_residual(c, n, fam, s, r),
    }
}

/// The integer linear system `∂X = target` for a family `X` on `c`.
///
/// Columns index the ℤ-coordinates of the unknown components, rows the
/// ℤ-coordinates of every relation instance. Integral rings only.
pub struct FamilySystem {
    c: ChainComplex,
    kind: Kind,
    n: i64,
    unknowns: alloc::vec::Vec<(usize, i64, usize, usize, usize)>,
    equations: alloc::vec::Vec<(usize, i64)>,
    top: usize,
    pub matrix: crate::intmat::IntMat,
}

impl FamilySystem {
    pub fn new(c: &ChainComplex, kind: Kind, n: i64) -> Result<FamilySystem> {
        let ring = c.ring();
        if !ring.is_integral() {
            return Err(Error::UnsupportedRing(format!("{ring}")));
        }
        let k = ring.z_rank();
        let mut unknowns = alloc::vec::Vec::new();
        for (s, r) in slots(c, kind, n) {
            let p = kind.source_degree(n, s, r);
            for a in 0..c.rank(r) {
                for b in 0..c.rank(p) {
                    for m in 0..k {
                        unknowns.push((s, r, a, b, m));
                    }
                }
            }
        }
        let eq_bound = s_bound(c, kind, n) + 1;
        let mut equations = alloc::vec::Vec::new();
        let mut eq_rows = 0usize;
        for s in 0..=eq_bound {
            for r in c.lo()..=c.hi() {
                let p = match kind {
                    Kind::Symmetric => n - r + s as i64 - 1,
                    Kind::Quadratic => n - r - s as i64 - 1,
                };
                let size = c.rank(r) * c.rank(p) * k;
                if size > 0 {
                    equations.push((s, r));
                    eq_rows += size;
                }
            }
        }
        let mut matrix = crate::intmat::IntMat::zeros(eq_rows, unknowns.len());
        for (col, &(s, r, a, b, m)) in unknowns.iter().enumerate() {
            let p = kind.source_degree(n, s, r);
            let mut e = Matrix::zeros(ring, c.rank(r), c.rank(p));
            e.set(a, b, ring.monomial(1, m));
            let mut fam = Family::new();
            fam.insert(s, r, e);
            let v = Self::flatten_with(&equations, |s2, r2| residual(c, kind, n, &fam, s2, r2));
            for (row, x) in v.into_iter().enumerate() {
                if x != 0 {
                    matrix.set(row, col, x);
                }
            }
        }
        Ok(FamilySystem { c: c.clone(), kind, n, unknowns, equations, top: eq_bound, matrix })
    }

    fn flatten_with(equations: &[(usize, i64)], f: impl Fn(usize, i64) -> Matrix) -> alloc::vec::Vec<i128> {
        let mut out = alloc::vec::Vec::new();
        for &(s, r) in equations {
            let m = f(s, r);
            for a in 0..m.rows() {
                for b in 0..m.cols() {
                    for x in m.get(a, b).coords().expect("integral") {
                        out.push(x as i128);
                    }
                }
            }
        }
        out
    }

    /// Flatten a right-hand side given per relation instance `(s, r)` with `s ≤ s_max`.
    ///
    /// Past the last instance in the system `∂X` vanishes for every `X`, so a
    /// target that is nonzero there has no solution and `None` is returned.
    pub fn rhs_up_to(&self, s_max: usize, f: impl Fn(usize, i64) -> Matrix) -> Option<alloc::vec::Vec<i128>> {
        let c = &self.c;
        if (self.top + 1..=s_max).any(|s| (c.lo()..=c.hi()).any(|r| !f(s, r).is_zero())) {
            return None;
        }
        Some(Self::flatten_with(&self.equations, f))
    }

    /// Read a solution vector back as a family.
    pub fn family(&self, x: &[i128]) -> Result<Family> {
        let ring = self.c.ring();
        let mut comps: BTreeMap<(usize, i64), Matrix> = BTreeMap::new();
        for (&(s, r, a, b, m), &v) in self.unknowns.iter().zip(x) {
            if v == 0 {
                continue;
            }
            let v = i64::try_from(v).map_err(|_| Error::Overflow)?;
            let p = self.kind.source_degree(self.n, s, r);
            let e = comps.entry((s, r)).or_insert_with(|| Matrix::zeros(ring, self.c.rank(r), self.c.rank(p)));
            let cur = e.get(a, b).clone();
            e.set(a, b, &cur + &ring.monomial(v, m));
        }
        let mut fam = Family::new();
        for ((s, r), m) in comps {
            fam.insert(s, r, m);
        }
        Ok(fam)
    }

    pub fn num_unknowns(&self) -> usize {
        self.unknowns.len()
    }
}

/// Some family `X` on `c` with `∂X = target` (every relation instance), or `None`.
///
/// `target` must vanish for `s > s_max`.
pub fn solve_family(
    c: &ChainComplex,
    kind: Kind,
    n: i64,
    s_max: usize,
    target: impl Fn(usize, i64) -> Matrix,
) -> Result<Option<Family>> {
    let sys = FamilySystem::new(c, kind, n)?;
    let Some(b) = sys.rhs_up_to(s_max, target) else { return Ok(None) };
    match crate::intmat::solve(&sys.matrix, &b)? {
        Some(x) => Ok(Some(sys.family(&x)?)),
        None => Ok(None),
    }
}

/// Structured pairs whose boundary is a direct sum `C ⊕ C'` with structure `θ ⊕ −θ'`.
#[derive(Clone, Debug)]
pub struct Cobordism<X, P> {
    pub left: X,
    pub right: X,
    /// The pair `((f f'): C ⊕ C' → D, (δ, θ ⊕ −θ'))`.
    pub pair: P,
}

pub type SymmetricCobordism = Cobordism<SymmetricComplex, SymmetricPair>;
pub type QuadraticCobordism = Cobordism<QuadraticComplex, QuadraticPair>;

macro_rules! cobordism_common {
    ($x:ident, $p:ident, $check:ident) => {
        impl Cobordism<$x, $p> {
            /// Assemble from `f: C → D`, `f': C' → D` and `δ` on `D`.
            pub fn from_maps(left: $x, right: $x, f: &ChainMap, f_prime: &ChainMap, delta: Family) -> Result<Self> {
                let boundary = left.direct_sum(&right.negate())?;
                let bc = boundary.complex().clone();
                let d = f.target().clone();
                if f_prime.target() != &d || f.source() != left.complex() || f_prime.source() != right.complex() {
                    return Err(Error::DimensionMismatch("cobordism maps do not match".into()));
                }
                let j = ChainMap::new_unchecked(&bc, &d, |r| {
                    let a = f.map(r);
                    let b = f_prime.map(r);
                    Matrix::blocks(bc.ring(), &[d.rank(r)], &[a.cols(), b.cols()], &[(0, 0, &a), (0, 1, &b)])
                })?;
                let pair = $p::new(j, boundary, delta)?;
                Ok(Cobordism { left, right, pair })
            }

            /// `f: C → D`, the first component of `j`.
            pub fn f(&self) -> ChainMap {
                let c = self.left.complex();
                let j = self.pair.j();
                ChainMap::new_unchecked(c, j.target(), |r| j.map(r).sub_block(0, j.target().rank(r), 0, c.rank(r)))
                    .expect("shapes")
            }

            /// `f': C' → D`, the second component of `j`.
            pub fn f_prime(&self) -> ChainMap {
                let c = self.left.complex();
                let cp = self.right.complex();
                let j = self.pair.j();
                ChainMap::new_unchecked(cp, j.target(), |r| {
                    j.map(r).sub_block(0, j.target().rank(r), c.rank(r), cp.rank(r))
                })
                .expect("shapes")
            }

            /// Pair relations and, with `poincare`, the duality condition.
            pub fn check(&self, poincare: bool) -> Result<Report> {
                $check(&self.pair, poincare)
            }
        }
    };
}

cobordism_common!(SymmetricComplex, SymmetricPair, check_pair_sym);
cobordism_common!(QuadraticComplex, QuadraticPair, check_pair_quad);

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::Ring;

    fn z(rows: usize, cols: usize, e: &[i64]) -> Matrix {
        Matrix::from_ints(Ring::Integers, rows, cols, e)
    }

    fn sphere_like(n: i64) -> SymmetricComplex {
        let c = ChainComplex::graded(Ring::Integers, 0, {
            let mut v = alloc::vec![0; n as usize + 1];
            v[0] = 1;
            v[n as usize] = 1;
            v
        });
        SymmetricComplex::from_fn(c, n, 0, |_, _| z(1, 1, &[1])).unwrap()
    }

    #[test]
    fn zero_family_is_valid() {
        let c = ChainComplex::graded(Ring::Integers, 0, alloc::vec![1, 2, 1]);
        let x = SymmetricComplex::new(c.clone(), 2, Family::new()).unwrap();
        assert!(check_symmetric(&x).is_valid());
        let q = QuadraticComplex::new(c, 2, Family::new()).unwrap();
        assert!(check_quadratic(&q).is_valid());
    }

    #[test]
    fn sphere_identity_blocks() {
        for n in 1..=4 {
            let x = sphere_like(n);
            assert!(check_symmetric(&x).is_valid(), "n={n}: {}", check_symmetric(&x));
            assert!(is_poincare_sym(&x).unwrap());
        }
    }

    #[test]
    fn symmetrize_hyperbolic_seed() {
        // i odd: n = 2, middle degree 1
        let c = ChainComplex::sphere_module(Ring::Integers, 1, 2);
        let q = QuadraticComplex::from_fn(c, 2, 0, |_, _| z(2, 2, &[0, 1, 0, 0])).unwrap();
        assert!(check_quadratic(&q).is_valid());
        let s = symmetrize(&q);
        assert_eq!(s.phi(0, 1), z(2, 2, &[0, 1, -1, 0]));
        assert!(check_symmetric(&s).is_valid());
        assert!(is_poincare_quad(&q).unwrap());
    }
}

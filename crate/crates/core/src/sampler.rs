//! Constructive random generators for complexes, structures and surgery data.
//!
//! Everything is built so that validity holds by construction: complexes are
//! elementary pieces conjugated by unimodular basis changes, Poincaré
//! structures are fixtures stabilised and transported along isomorphisms,
//! and pair structures come from solving the pair relation as an integer
//! linear system. Draws with no solution return `None`.

use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::fixtures;
use crate::intmat::{self, IntMat};
use crate::matrix::Matrix;
use crate::ring::{Ring, RingElem};
use crate::sgn;
use crate::structure::{
    is_poincare_quad, is_poincare_sym, pair_sign, FamilySystem, Kind, QuadraticComplex, QuadraticPair,
    SymmetricComplex, SymmetricPair,
};

/// Small random ring element with integer coefficients in `[-bound, bound]`.
pub fn random_elem<R: Rng + ?Sized>(rng: &mut R, ring: Ring, bound: i64) -> RingElem {
    match ring {
        Ring::Integers => RingElem::Int(rng.gen_range(-bound..=bound)),
        Ring::Rationals => {
            let num = rng.gen_range(-bound..=bound);
            let den = rng.gen_range(1..=bound.max(1));
            RingElem::Rat(crate::ring::Rational::new(num, den))
        }
        Ring::CyclicGroupRing(k) => RingElem::Group((0..k).map(|_| rng.gen_range(-bound..=bound)).collect()),
    }
}

/// A unit `±g^m` (or `±1` over ℤ, a nonzero fraction over ℚ).
pub fn random_unit<R: Rng + ?Sized>(rng: &mut R, ring: Ring) -> RingElem {
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    match ring {
        Ring::CyclicGroupRing(k) => ring.monomial(sign, rng.gen_range(0..k)),
        Ring::Rationals => RingElem::Rat(crate::ring::Rational::new(sign * rng.gen_range(1..=3), rng.gen_range(1..=3))),
        Ring::Integers => RingElem::Int(sign),
    }
}

pub fn random_matrix<R: Rng + ?Sized>(rng: &mut R, ring: Ring, rows: usize, cols: usize, bound: i64) -> Matrix {
    Matrix::from_fn(ring, rows, cols, |_, _| random_elem(rng, ring, bound))
}

/// A random invertible matrix and its inverse, as a product of elementary and unit-diagonal moves.
pub fn random_unimodular<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: usize, steps: usize) -> (Matrix, Matrix) {
    let mut m = Matrix::identity(ring, n);
    let mut inv = Matrix::identity(ring, n);
    if n == 0 {
        return (m, inv);
    }
    for _ in 0..steps {
        if n >= 2 && rng.gen_bool(0.7) {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            let c = random_elem(rng, ring, 1);
            // E = 1 + c e_{ab}; E⁻¹ = 1 − c e_{ab}
            let mut e = Matrix::identity(ring, n);
            e.set(a, b, c.clone());
            let mut e_inv = Matrix::identity(ring, n);
            e_inv.set(a, b, -&c);
            m = &e * &m;
            inv = &inv * &e_inv;
        } else {
            let a = rng.gen_range(0..n);
            let u = random_unit(rng, ring);
            let u_inv = u.unit_inverse().expect("unit");
            let mut e = Matrix::identity(ring, n);
            e.set(a, a, u);
            let mut e_inv = Matrix::identity(ring, n);
            e_inv.set(a, a, u_inv);
            m = &e * &m;
            inv = &inv * &e_inv;
        }
    }
    (m, inv)
}

/// Random complex on degrees `lo..lo+len` with ranks at most `max_rank`.
///
/// Built from free generators with zero differential and elementary pieces
/// `R --a--> R`, then conjugated degreewise by random unimodular matrices.
pub fn random_complex<R: Rng + ?Sized>(rng: &mut R, ring: Ring, lo: i64, len: usize, max_rank: usize) -> ChainComplex {
    if len == 0 {
        return ChainComplex::zero(ring);
    }
    let mut ranks = vec![0usize; len];
    // pieces[k] = (degree index of the upper generator, coefficient)
    let mut pieces: Vec<(usize, RingElem)> = Vec::new();
    for k in 1..len {
        if rng.gen_bool(0.5) && ranks[k] < max_rank && ranks[k - 1] < max_rank {
            ranks[k] += 1;
            ranks[k - 1] += 1;
            let a = if rng.gen_bool(0.4) { random_unit(rng, ring) } else { random_elem(rng, ring, 2) };
            pieces.push((k, a));
        }
    }
    for r in ranks.iter_mut() {
        let room = max_rank - *r;
        if room > 0 {
            *r += rng.gen_range(0..=room.min(2));
        }
    }
    // assign generator slots: pieces first, free generators after
    let mut next = vec![0usize; len];
    let mut d: Vec<Matrix> = (1..len).map(|k| Matrix::zeros(ring, ranks[k - 1], ranks[k])).collect();
    for (k, a) in pieces {
        let top = next[k];
        let bot = next[k - 1];
        next[k] += 1;
        next[k - 1] += 1;
        d[k - 1].set(bot, top, a);
    }
    let c = ChainComplex::new(ring, lo, ranks, d).expect("elementary pieces square to zero");
    random_iso(rng, &c).target().clone()
}

/// A random chain isomorphism `f: C → C'` given by degreewise basis changes.
pub fn random_iso<R: Rng + ?Sized>(rng: &mut R, c: &ChainComplex) -> ChainMap {
    let ring = c.ring();
    if c.lo() > c.hi() {
        return ChainMap::identity(c);
    }
    let mut u = Vec::new();
    let mut u_inv = Vec::new();
    for r in c.lo()..=c.hi() {
        let (m, inv) = random_unimodular(rng, ring, c.rank(r), 2 * c.rank(r) + 2);
        u.push(m);
        u_inv.push(inv);
    }
    let idx = |r: i64| (r - c.lo()) as usize;
    let target = ChainComplex::build(
        ring,
        c.lo(),
        c.hi(),
        |r| c.rank(r),
        |r| {
            if r - 1 < c.lo() || r > c.hi() {
                return c.d(r);
            }
            &(&u[idx(r - 1)] * &c.d(r)) * &u_inv[idx(r)]
        },
    )
    .expect("conjugate of a complex");
    ChainMap::new(c, &target, |r| if r < c.lo() || r > c.hi() { Matrix::zeros(ring, 0, 0) } else { u[idx(r)].clone() })
        .expect("conjugation is a chain map")
}

/// Integer kernel of the linear map `x ↦ eval(x)` on `ℤ^unknowns`, as columns.
fn linear_kernel(unknowns: usize, eval: impl Fn(&[i128]) -> Vec<i128>) -> Result<IntMat> {
    let cols: Vec<Vec<i128>> = (0..unknowns)
        .map(|i| {
            let mut e = vec![0i128; unknowns];
            e[i] = 1;
            eval(&e)
        })
        .collect();
    let rows = cols.first().map_or(0, Vec::len);
    let mut a = IntMat::zeros(rows, unknowns);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            a.set(i, j, *v);
        }
    }
    intmat::kernel(&a)
}

fn random_kernel_vector<R: Rng + ?Sized>(rng: &mut R, k: &IntMat, bound: i64) -> Result<Vec<i128>> {
    let mut v = vec![0i128; k.rows()];
    for c in 0..k.cols() {
        let t = rng.gen_range(-bound..=bound) as i128;
        if t == 0 {
            continue;
        }
        for (i, x) in v.iter_mut().enumerate() {
            *x = t.checked_mul(k.get(i, c)).and_then(|y| x.checked_add(y)).ok_or(Error::Overflow)?;
        }
    }
    Ok(v)
}

/// Up to this many fresh draws are made when a draw does not fit in machine integers.
const DRAWS: usize = 16;

/// Run `draw` until it stops overflowing, at most [`DRAWS`] times.
fn redraw<R: Rng + ?Sized, T>(rng: &mut R, mut draw: impl FnMut(&mut R) -> Result<T>) -> Result<T> {
    for _ in 1..DRAWS {
        match draw(rng) {
            Err(Error::Overflow) => continue,
            other => return other,
        }
    }
    draw(rng)
}

fn coords_of(m: &Matrix) -> Vec<i128> {
    let mut out = Vec::new();
    for a in 0..m.rows() {
        for b in 0..m.cols() {
            out.extend(m.get(a, b).coords().expect("integral ring").into_iter().map(|x| x as i128));
        }
    }
    out
}

fn from_coords(ring: Ring, rows: usize, cols: usize, x: &[i128]) -> Result<Matrix> {
    let k = ring.z_rank();
    let narrow: Vec<i64> = x[..rows * cols * k]
        .iter()
        .map(|&v| i64::try_from(v))
        .collect::<core::result::Result<_, _>>()
        .map_err(|_| Error::Overflow)?;
    Ok(Matrix::from_fn(ring, rows, cols, |a, b| {
        let base = (a * cols + b) * k;
        match ring {
            Ring::CyclicGroupRing(_) => RingElem::Group(narrow[base..base + k].to_vec()),
            _ => ring.from_int(narrow[base]),
        }
    }))
}

/// A random chain map `C → D` drawn from the integer kernel of the chain-map equations.
///
/// Integral rings only; over ℚ the zero map is returned.
pub fn random_chain_map<R: Rng + ?Sized>(rng: &mut R, c: &ChainComplex, d: &ChainComplex) -> Result<ChainMap> {
    let ring = c.ring();
    if !ring.is_integral() || c.lo() > c.hi() {
        return Ok(ChainMap::zero(c, d));
    }
    let k = ring.z_rank();
    let degrees: Vec<i64> = (c.lo()..=c.hi()).collect();
    let offsets: Vec<usize> = degrees
        .iter()
        .scan(0usize, |acc, &r| {
            let o = *acc;
            *acc += d.rank(r) * c.rank(r) * k;
            Some(o)
        })
        .collect();
    let total: usize = degrees.iter().map(|&r| d.rank(r) * c.rank(r) * k).sum();
    let unpack = |x: &[i128], r: i64| -> Result<Matrix> {
        match degrees.iter().position(|&q| q == r) {
            Some(i) => from_coords(ring, d.rank(r), c.rank(r), &x[offsets[i]..]),
            None => Ok(Matrix::zeros(ring, d.rank(r), c.rank(r))),
        }
    };
    // evaluated on unit vectors only
    let eval = |x: &[i128]| -> Vec<i128> {
        let mut out = Vec::new();
        for r in c.lo()..=c.hi() + 1 {
            let lhs = &d.d(r) * &unpack(x, r).expect("unit vector");
            let rhs = &unpack(x, r - 1).expect("unit vector") * &c.d(r);
            out.extend(coords_of(&(&lhs - &rhs)));
        }
        out
    };
    let ker = linear_kernel(total, eval)?;
    let v = random_kernel_vector(rng, &ker, 2)?;
    let maps: Vec<Matrix> = degrees.iter().map(|&r| unpack(&v, r)).collect::<Result<_>>()?;
    ChainMap::new(c, d, |r| match degrees.iter().position(|&q| q == r) {
        Some(i) => maps[i].clone(),
        None => Matrix::zeros(ring, d.rank(r), c.rank(r)),
    })
}

fn base_symmetric<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: i64, _max_rank: usize) -> SymmetricComplex {
    let i = n.div_euclid(2);
    let choice = rng.gen_range(0..3);
    if choice == 0 || n == 0 {
        return fixtures::sphere_over(ring, n);
    }
    if n % 2 == 0 {
        // middle-degree form with φ_0 = Tφ_0 = (−1)^i φ_0*
        let eps = sgn(i);
        let m = if choice == 1 && eps == 1 {
            Matrix::from_ints(ring, 1, 1, &[if rng.gen_bool(0.5) { 1 } else { -1 }])
        } else {
            Matrix::from_ints(ring, 2, 2, &[0, 1, eps, 0])
        };
        fixtures::middle_symmetric(ring, i, m).expect("square")
    } else {
        // degrees i, i+1 with φ_0(i) = P, φ_0(i+1) = P*
        let size = rng.gen_range(1..=2);
        let (p, _) = random_unimodular(rng, ring, size, 3);
        let c = ChainComplex::graded(ring, i, vec![size, size]);
        SymmetricComplex::from_fn(c, n, 0, |_, r| if r == i { p.clone() } else { p.star() }).expect("shapes")
    }
}

fn base_quadratic<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: i64, max_rank: usize) -> QuadraticComplex {
    let i = n.div_euclid(2);
    let choice = rng.gen_range(0..4);
    if choice == 0 {
        return fixtures::quadratic_sphere(ring, n);
    }
    if n % 2 == 0 {
        let psi = match choice {
            // the E8 form needs room for rank 8
            2 if ring == Ring::Integers && i % 2 == 0 && max_rank >= 8 => {
                let e8 = fixtures::upper_refinement(&fixtures::e8_matrix());
                if rng.gen_bool(0.5) {
                    e8
                } else {
                    e8.scale(-1)
                }
            }
            3 if i % 2 != 0 => Matrix::from_ints(ring, 2, 2, &[1, 1, 0, 1]),
            _ => fixtures::hyperbolic_psi(ring, 1),
        };
        fixtures::middle_quadratic(ring, i, psi).expect("square")
    } else {
        let size = rng.gen_range(1..=2);
        let (p, _) = random_unimodular(rng, ring, size, 3);
        let c = ChainComplex::graded(ring, i, vec![size, size]);
        QuadraticComplex::from_fn(c, n, 0, |_, r| if r == i { p.clone() } else { Matrix::zeros(ring, size, size) })
            .expect("shapes")
    }
}

/// Add an elementary contractible piece `R --1--> R` in degrees `r, r−1` inside `[lo, hi]`.
fn stabilize<R: Rng + ?Sized>(
    rng: &mut R,
    c: &ChainComplex,
    lo: i64,
    hi: i64,
    max_rank: usize,
) -> Option<ChainComplex> {
    if hi <= lo {
        return None;
    }
    let r = rng.gen_range(lo + 1..=hi);
    if c.rank(r) >= max_rank || c.rank(r - 1) >= max_rank {
        return None;
    }
    let ring = c.ring();
    let piece = ChainComplex::new(ring, r - 1, vec![1, 1], vec![Matrix::identity(ring, 1)]).expect("piece");
    Some(c.direct_sum(&piece))
}

macro_rules! random_poincare {
    ($name:ident, $ty:ident, $base:ident, $kind:expr, $poincare:ident) => {
        /// A random Poincaré complex of dimension `n`: a fixture, stabilised,
        /// transported along a random isomorphism, then shifted by a random
        /// cycle of the structure system when that keeps it Poincaré.
        pub fn $name<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: i64, max_rank: usize) -> $ty {
            let base = $base(rng, ring, n, max_rank);
            let mut x = base.clone();
            let (lo, hi) = (0, n.max(1));
            for _ in 0..rng.gen_range(0..=2) {
                if let Some(c) = stabilize(rng, x.complex(), lo, hi, max_rank) {
                    let pad = c.clone();
                    let s_max = x.family().max_s().unwrap_or(0);
                    let old = x.clone();
                    x = $ty::from_fn(pad.clone(), n, s_max, |s, r| {
                        let p = $kind.source_degree(n, s, r);
                        let mut m = Matrix::zeros(ring, pad.rank(r), pad.rank(p));
                        m.put(0, 0, &old.family_component(s, r));
                        m
                    })
                    .expect("padded structure");
                }
            }
            let f = random_iso(rng, x.complex());
            x = x.transport(&f).expect("transport along an isomorphism");
            if ring.is_integral() && rng.gen_bool(0.7) {
                if let Ok(sys) = FamilySystem::new(x.complex(), $kind, n) {
                    if let Ok(ker) = intmat::kernel(&sys.matrix) {
                        if let Ok(extra) = random_kernel_vector(rng, &ker, 1).and_then(|v| sys.family(&v)) {
                            let s_max = extra.max_s().unwrap_or(0).max(x.family().max_s().unwrap_or(0));
                            let cand = $ty::from_fn(x.complex().clone(), n, s_max, |s, r| {
                                let p = $kind.source_degree(n, s, r);
                                let e = extra
                                    .get_stored(s, r)
                                    .cloned()
                                    .unwrap_or_else(|| Matrix::zeros(ring, x.complex().rank(r), x.complex().rank(p)));
                                &x.family_component(s, r) + &e
                            });
                            if let Ok(cand) = cand {
                                if $poincare(&cand).unwrap_or(false) {
                                    x = cand;
                                }
                            }
                        }
                    }
                }
            }
            x
        }
    };
}

random_poincare!(random_symmetric_poincare, SymmetricComplex, base_symmetric, Kind::Symmetric, is_poincare_sym);
random_poincare!(random_quadratic_poincare, QuadraticComplex, base_quadratic, Kind::Quadratic, is_poincare_quad);

macro_rules! random_structure {
    ($name:ident, $ty:ident, $kind:expr) => {
        /// A random structure on a random complex in degrees `0..=n`: a random
        /// integer solution of the homogeneous structure relations. Not Poincaré in general.
        ///
        /// Draws that overflow are discarded and redrawn.
        pub fn $name<R: Rng + ?Sized>(rng: &mut R, ring: Ring, n: i64, max_rank: usize) -> Result<$ty> {
            redraw(rng, |rng| {
                let c = random_complex(rng, ring, 0, (n + 1) as usize, max_rank);
                let sys = FamilySystem::new(&c, $kind, n)?;
                let ker = intmat::kernel(&sys.matrix)?;
                let v = random_kernel_vector(rng, &ker, 2)?;
                $ty::new(c, n, sys.family(&v)?)
            })
        }
    };
}

random_structure!(random_symmetric, SymmetricComplex, Kind::Symmetric);
random_structure!(random_quadratic, QuadraticComplex, Kind::Quadratic);

/// A cobordism from `x` built as the union of the traces of `steps` random surgeries.
pub fn random_cobordism<R: Rng + ?Sized>(
    rng: &mut R,
    x: &SymmetricComplex,
    steps: usize,
    max_rank: usize,
) -> Result<Option<crate::structure::SymmetricCobordism>> {
    let mut acc: Option<crate::structure::SymmetricCobordism> = None;
    let mut cur = x.clone();
    for _ in 0..steps.max(1) {
        let Some(p) = random_sym_pair(rng, &cur, max_rank)? else { return Ok(None) };
        let t = crate::surgery::trace_sym(&p)?;
        cur = t.right.clone();
        acc = Some(match acc {
            None => t,
            Some(prev) => crate::surgery::union_sym(&prev, &t)?,
        });
    }
    Ok(acc)
}

/// Random target complex for surgery data on an `n`-dimensional complex: window inside `[lo, n+1]`.
fn random_target<R: Rng + ?Sized>(rng: &mut R, ring: Ring, lo: i64, n: i64, max_rank: usize) -> ChainComplex {
    let top = n + 1;
    let a = rng.gen_range(lo..=top);
    let b = rng.gen_range(a..=top.min(a + 3));
    random_complex(rng, ring, a, (b - a + 1) as usize, max_rank)
}

macro_rules! random_pair {
    ($name:ident, $pty:ident, $xty:ident, $kind:expr) => {
        /// Random surgery data on `x`: a random target `D`, a random chain map
        /// `j`, and `δ` solving the pair relation plus a random homogeneous solution.
        ///
        /// Draws that overflow are discarded and redrawn.
        pub fn $name<R: Rng + ?Sized>(rng: &mut R, x: &$xty, max_rank: usize) -> Result<Option<$pty>> {
            redraw(rng, |rng| {
                let ring = x.ring();
                let n = x.n();
                let lo = x.complex().lo().min(0);
                let d = random_target(rng, ring, lo, n, max_rank);
                let j = random_chain_map(rng, x.complex(), &d)?;
                let probe = $pty::new(j.clone(), x.clone(), crate::structure::Family::new())?;
                let eps = pair_sign(n);
                let sys = FamilySystem::new(&d, $kind, n + 1)?;
                // j θ_s j* vanishes past the boundary's top s
                let s_top = x.family().max_s().unwrap_or(0);
                let Some(b) = sys.rhs_up_to(s_top, |s, r| probe.j_theta_jstar(s, r).scale(eps)) else {
                    return Ok(None);
                };
                let Some(sol) = intmat::solve(&sys.matrix, &b)? else { return Ok(None) };
                let ker = intmat::kernel(&sys.matrix)?;
                let extra = random_kernel_vector(rng, &ker, 1)?;
                let v: Vec<i128> = sol
                    .iter()
                    .zip(&extra)
                    .map(|(a, b)| a.checked_add(*b))
                    .collect::<Option<_>>()
                    .ok_or(Error::Overflow)?;
                let fam = sys.family(&v)?;
                Ok(Some($pty::new(j, x.clone(), fam)?))
            })
        }
    };
}

random_pair!(random_sym_pair, SymmetricPair, SymmetricComplex, Kind::Symmetric);
random_pair!(random_quad_pair, QuadraticPair, QuadraticComplex, Kind::Quadratic);

/// A single-entry change of a structure component, recorded for reporting.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Perturbation {
    pub s: usize,
    pub r: i64,
    pub row: usize,
    pub col: usize,
    pub delta: RingElem,
}

/// Whether a single-entry change at `(s, r, row, col)` by `e` can leave every relation intact.
///
/// The change appears in the `(s+1, r)` symmetric (resp. `(s−1, r)`
/// quadratic) instance as `E + c E*` with `c = ±1`; it can only cancel on a
/// diagonal entry of a self-dual slot with `ē = −c e`. Quadratic `ψ_0`
/// entries are not constrained by any instance of that form.
pub fn is_admissible_change(kind: Kind, n: i64, s: usize, r: i64, row: usize, col: usize, e: &RingElem) -> bool {
    let si = s as i64;
    let p = kind.source_degree(n, s, r);
    match kind {
        Kind::Quadratic if s == 0 => true,
        _ => {
            if p != r || row != col {
                return false;
            }
            // symmetric: E + (−1)^{s+1} T E, quadratic: E + (−1)^s T E, with T = (−1)^{r r} (.)*
            let c = match kind {
                Kind::Symmetric => sgn(si + 1 + r * r),
                Kind::Quadratic => sgn(si + r * r),
            };
            (e + &e.involute().scale(c)).is_zero()
        }
    }
}

/// Random single-entry perturbations that must break a relation.
pub fn breaking_perturbations<R: Rng + ?Sized>(
    rng: &mut R,
    c: &ChainComplex,
    kind: Kind,
    n: i64,
    s_max: usize,
    count: usize,
) -> Vec<Perturbation> {
    let ring = c.ring();
    let mut slots = Vec::new();
    for s in 0..=s_max {
        for r in c.lo()..=c.hi() {
            let p = kind.source_degree(n, s, r);
            if c.rank(r) > 0 && c.rank(p) > 0 {
                slots.push((s, r, p));
            }
        }
    }
    let mut out = Vec::new();
    let mut tries = 0;
    while out.len() < count && tries < 50 * count.max(1) && !slots.is_empty() {
        tries += 1;
        let &(s, r, p) = slots.choose(rng).expect("non-empty");
        let row = rng.gen_range(0..c.rank(r));
        let col = rng.gen_range(0..c.rank(p));
        let delta = random_unit(rng, ring);
        if !is_admissible_change(kind, n, s, r, row, col, &delta) {
            out.push(Perturbation { s, r, row, col, delta });
        }
    }
    out
}

impl SymmetricComplex {
    /// `φ_s(r)` including zero components (alias used by generic code).
    pub fn family_component(&self, s: usize, r: i64) -> Matrix {
        self.phi(s, r)
    }

    /// A copy with one entry changed.
    pub fn perturbed(&self, p: &Perturbation) -> Result<SymmetricComplex> {
        let mut fam = self.family().clone();
        let mut m = self.phi(p.s, p.r);
        let cur = m.get(p.row, p.col).clone();
        m.set(p.row, p.col, &cur + &p.delta);
        fam.insert(p.s, p.r, m);
        SymmetricComplex::new(self.complex().clone(), self.n(), fam)
    }
}

impl QuadraticComplex {
    /// `ψ_s(r)` including zero components (alias used by generic code).
    pub fn family_component(&self, s: usize, r: i64) -> Matrix {
        self.psi(s, r)
    }

    /// A copy with one entry changed.
    pub fn perturbed(&self, p: &Perturbation) -> Result<QuadraticComplex> {
        let mut fam = self.family().clone();
        let mut m = self.psi(p.s, p.r);
        let cur = m.get(p.row, p.col).clone();
        m.set(p.row, p.col, &cur + &p.delta);
        fam.insert(p.s, p.r, m);
        QuadraticComplex::new(self.complex().clone(), self.n(), fam)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::validate_complex;
    use crate::structure::{check_quadratic, check_symmetric};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unimodular_inverse() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for ring in [Ring::Integers, Ring::CyclicGroupRing(2), Ring::CyclicGroupRing(3)] {
            for n in 0..4 {
                let (m, inv) = random_unimodular(&mut rng, ring, n, 10);
                assert_eq!(&m * &inv, Matrix::identity(ring, n));
            }
        }
    }

    #[test]
    fn random_complexes_are_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for ring in [Ring::Integers, Ring::CyclicGroupRing(2)] {
            for _ in 0..20 {
                let c = random_complex(&mut rng, ring, 0, 4, 3);
                assert!(validate_complex(&c).is_valid());
                assert!(c.ranks().iter().all(|&r| r <= 3));
            }
        }
    }

    #[test]
    fn random_chain_maps_commute() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10 {
            let c = random_complex(&mut rng, Ring::Integers, 0, 3, 2);
            let d = random_complex(&mut rng, Ring::Integers, 0, 3, 2);
            let f = random_chain_map(&mut rng, &c, &d).unwrap();
            assert!(f.validate().is_valid());
        }
    }

    #[test]
    fn random_poincare_complexes() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for ring in [Ring::Integers, Ring::CyclicGroupRing(2)] {
            for n in 0..=3 {
                let x = random_symmetric_poincare(&mut rng, ring, n, 3);
                assert!(check_symmetric(&x).is_valid(), "{}", check_symmetric(&x));
                assert!(is_poincare_sym(&x).unwrap());
                let q = random_quadratic_poincare(&mut rng, ring, n, 3);
                assert!(check_quadratic(&q).is_valid(), "{}", check_quadratic(&q));
                assert!(is_poincare_quad(&q).unwrap());
            }
        }
    }

    #[test]
    fn admissible_changes() {
        let one = RingElem::Int(1);
        // symmetric form in middle degree 2 (n = 4): diagonal changes keep φ_0 = φ_0*
        assert!(is_admissible_change(Kind::Symmetric, 4, 0, 2, 0, 0, &one));
        // skew form in middle degree 1 (n = 2): they do not
        assert!(!is_admissible_change(Kind::Symmetric, 2, 0, 1, 0, 0, &one));
        assert!(!is_admissible_change(Kind::Symmetric, 4, 0, 2, 0, 1, &one));
        assert!(is_admissible_change(Kind::Quadratic, 2, 0, 1, 0, 1, &one));
    }

    #[test]
    fn random_structures_and_perturbations() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for ring in [Ring::Integers, Ring::CyclicGroupRing(2)] {
            for n in 0..=3 {
                let x = random_symmetric(&mut rng, ring, n, 3).unwrap();
                assert!(check_symmetric(&x).is_valid());
                for p in breaking_perturbations(&mut rng, x.complex(), Kind::Symmetric, n, 2, 5) {
                    assert!(!check_symmetric(&x.perturbed(&p).unwrap()).is_valid(), "{p:?}");
                }
                let q = random_quadratic(&mut rng, ring, n, 3).unwrap();
                assert!(check_quadratic(&q).is_valid());
                for p in breaking_perturbations(&mut rng, q.complex(), Kind::Quadratic, n, 2, 5) {
                    assert!(!check_quadratic(&q.perturbed(&p).unwrap()).is_valid(), "{p:?}");
                }
            }
        }
    }

    #[test]
    fn random_cobordisms_are_poincare() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let mut done = 0;
        while done < 4 {
            let x = random_symmetric_poincare(&mut rng, Ring::Integers, 2, 2);
            if let Some(g) = random_cobordism(&mut rng, &x, 3, 2).unwrap() {
                assert!(g.check(true).unwrap().is_valid());
                done += 1;
            }
        }
    }
}

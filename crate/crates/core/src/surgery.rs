//! Algebraic surgery: effect, trace, and the cobordism-to-data construction.
//!
//! Surgery data on an `n`-dimensional complex `(C, θ)` is an `(n+1)`-dimensional
//! pair `(j: C → D, (δθ, θ))`. The effect lives on
//!
//! ```text
//! C'_r = C_r ⊕ D_{r+1} ⊕ D^{n−r+1}
//! ```
//!
//! and the trace is a cobordism on `D'_r = C_r ⊕ D^{n−r+1}`.
//!
//! The bottom-right block of both differentials is the differential of
//! `D^{n+1−*}` in degree `r`, i.e. `(−1)^r d_D*`; without that sign the
//! blocks do not square to zero.

use alloc::format;
use alloc::vec::Vec;

use crate::complex::{self, ChainComplex, ChainMap, EquivalenceVerdict, Reduction};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::sgn;
use crate::structure::{
    check_pair_quad, check_pair_sym, Family, QuadraticCobordism, QuadraticComplex, QuadraticPair, SymmetricCobordism,
    SymmetricComplex, SymmetricPair,
};

/// Window of `C'_r = C_r ⊕ D_{r+1} ⊕ D^{n−r+1}`.
fn effect_window(c: &ChainComplex, d: &ChainComplex, n: i64) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    let mut take = |a: i64, b: i64| {
        if a <= b {
            lo = lo.min(a);
            hi = hi.max(b);
        }
    };
    take(c.lo(), c.hi());
    take(d.lo() - 1, d.hi() - 1);
    take(n + 1 - d.hi(), n + 1 - d.lo());
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

/// Window of `D'_r = C_r ⊕ D^{n−r+1}`.
fn trace_window(c: &ChainComplex, d: &ChainComplex, n: i64) -> (i64, i64) {
    let mut lo = i64::MAX;
    let mut hi = i64::MIN;
    if c.lo() <= c.hi() {
        lo = c.lo();
        hi = c.hi();
    }
    if d.lo() <= d.hi() {
        lo = lo.min(n + 1 - d.hi());
        hi = hi.max(n + 1 - d.lo());
    }
    if lo > hi {
        (0, -1)
    } else {
        (lo, hi)
    }
}

/// The effect complex `C'` given the upper-right blocks `a_r: D^{n−r+1} → C_{r−1}`
/// and `b_r: D^{n−r+1} → D_r` (before the `(−1)^{n+1}` and `(−1)^r` signs).
fn effect_complex(
    c: &ChainComplex,
    d: &ChainComplex,
    j: &ChainMap,
    n: i64,
    a: impl Fn(i64) -> Matrix,
    b: impl Fn(i64) -> Matrix,
) -> Result<ChainComplex> {
    let ring = c.ring();
    let (lo, hi) = effect_window(c, d, n);
    ChainComplex::build(
        ring,
        lo,
        hi,
        |r| c.rank(r) + d.rank(r + 1) + d.rank(n - r + 1),
        |r| {
            let top = a(r).scale(sgn(n + 1));
            let jr = j.map(r).scale(sgn(r));
            let mid = b(r).scale(sgn(r));
            let dual = d.d(n - r + 2).star().scale(sgn(r));
            Matrix::blocks(
                ring,
                &[c.rank(r - 1), d.rank(r), d.rank(n - r + 2)],
                &[c.rank(r), d.rank(r + 1), d.rank(n - r + 1)],
                &[(0, 0, &c.d(r)), (0, 2, &top), (1, 0, &jr), (1, 1, &d.d(r + 1)), (1, 2, &mid), (2, 2, &dual)],
            )
        },
    )
    .map_err(|e| Error::InvalidStructure(format!("effect differential: {e}")))
}

fn require_valid(rep: crate::complex::Report) -> Result<()> {
    if rep.is_valid() {
        Ok(())
    } else {
        Err(Error::InvalidStructure(format!("surgery data: {}", rep.failures.join("; "))))
    }
}

/// The effect `(C', φ')` of symmetric surgery.
pub fn surgery_effect_sym(p: &SymmetricPair) -> Result<SymmetricComplex> {
    require_valid(check_pair_sym(p, false)?)?;
    Ok(effect_sym_unchecked(p)?.0)
}

fn effect_sym_unchecked(p: &SymmetricPair) -> Result<(SymmetricComplex, ChainComplex)> {
    let x = p.boundary();
    let n = x.n();
    let c = x.complex();
    let d = p.target();
    let j = p.j();
    let ring = c.ring();
    let cp = effect_complex(c, d, j, n, |r| &x.phi(0, r - 1) * &j.map(n - r + 1).star(), |r| p.delta(0, r))?;
    let s_max = x.family().max_s().unwrap_or(0).max(p.delta_family().max_s().unwrap_or(0));
    let phi = SymmetricComplex::from_fn(cp.clone(), n, s_max, |s, r| {
        let si = s as i64;
        let rows = [c.rank(r), d.rank(r + 1), d.rank(n - r + 1)];
        let cols = [c.rank(n - r + si), d.rank(n - r + si + 1), d.rank(r - si + 1)];
        let jt = (&j.map(r + 1) * &x.t(s + 1, r + 1)).scale(sgn(n + r + 1));
        let td = p.t_delta(s + 1, r + 1).scale(sgn(n + r + si));
        let id = Matrix::identity(ring, d.rank(n - r + 1));
        let corner = Matrix::identity(ring, d.rank(r + 1)).scale(sgn(r * (n + 1)));
        let base = x.phi(s, r);
        let mut parts: Vec<(usize, usize, &Matrix)> = alloc::vec![(0, 0, &base), (1, 0, &jt), (1, 1, &td)];
        if s == 0 {
            parts.push((2, 1, &id));
            parts.push((1, 2, &corner));
        }
        Matrix::blocks(ring, &rows, &cols, &parts)
    })?;
    Ok((phi, cp))
}

/// The effect `(C', ψ')` of quadratic surgery.
pub fn surgery_effect_quad(p: &QuadraticPair) -> Result<QuadraticComplex> {
    require_valid(check_pair_quad(p, false)?)?;
    effect_quad_unchecked(p)
}

fn effect_quad_unchecked(p: &QuadraticPair) -> Result<QuadraticComplex> {
    let x = p.boundary();
    let n = x.n();
    let c = x.complex();
    let d = p.target();
    let j = p.j();
    let ring = c.ring();
    let cp = effect_complex(c, d, j, n, |r| &x.sym_psi0(r - 1) * &j.map(n - r + 1).star(), |r| p.sym_delta0(r))?;
    let s_max = x.family().max_s().unwrap_or(0).max(p.delta_family().max_s().unwrap_or(0)) + 1;
    QuadraticComplex::from_fn(cp, n, s_max, |s, r| {
        let si = s as i64;
        let rows = [c.rank(r), d.rank(r + 1), d.rank(n - r + 1)];
        let cols = [c.rank(n - r - si), d.rank(n - r - si + 1), d.rank(r + si + 1)];
        let base = x.psi(s, r);
        if s == 0 {
            let id = Matrix::identity(ring, d.rank(n - r + 1));
            return Matrix::blocks(ring, &rows, &cols, &[(0, 0, &base), (2, 1, &id)]);
        }
        let tj = (&x.t(s - 1, r) * &j.map(n - r - si + 1).star()).scale(sgn(si));
        let td = p.t_delta(s - 1, r + 1).scale(sgn(n + r + si));
        Matrix::blocks(ring, &rows, &cols, &[(0, 0, &base), (0, 1, &tj), (1, 1, &td)])
    })
}

/// `D'` with `d = [[d_C, (−1)^{n+1} a], [0, (−1)^r d_D*]]` and the maps `f`, `f'`.
fn trace_parts(
    c: &ChainComplex,
    d: &ChainComplex,
    cp: &ChainComplex,
    n: i64,
    a: impl Fn(i64) -> Matrix,
) -> Result<(ChainComplex, ChainMap, ChainMap)> {
    let ring = c.ring();
    let (lo, hi) = trace_window(c, d, n);
    let dp = ChainComplex::build(
        ring,
        lo,
        hi,
        |r| c.rank(r) + d.rank(n - r + 1),
        |r| {
            let top = a(r).scale(sgn(n + 1));
            let dual = d.d(n - r + 2).star().scale(sgn(r));
            Matrix::blocks(
                ring,
                &[c.rank(r - 1), d.rank(n - r + 2)],
                &[c.rank(r), d.rank(n - r + 1)],
                &[(0, 0, &c.d(r)), (0, 1, &top), (1, 1, &dual)],
            )
        },
    )?;
    let f = ChainMap::new(c, &dp, |r| {
        let id = Matrix::identity(ring, c.rank(r));
        Matrix::blocks(ring, &[c.rank(r), d.rank(n - r + 1)], &[c.rank(r)], &[(0, 0, &id)])
    })?;
    let fp = ChainMap::new(cp, &dp, |r| {
        let id1 = Matrix::identity(ring, c.rank(r));
        let id2 = Matrix::identity(ring, d.rank(n - r + 1));
        Matrix::blocks(
            ring,
            &[c.rank(r), d.rank(n - r + 1)],
            &[c.rank(r), d.rank(r + 1), d.rank(n - r + 1)],
            &[(0, 0, &id1), (1, 2, &id2)],
        )
    })?;
    Ok((dp, f, fp))
}

/// The trace `((f f'): C ⊕ C' → D', (0, φ ⊕ −φ'))`.
pub fn trace_sym(p: &SymmetricPair) -> Result<SymmetricCobordism> {
    let effect = surgery_effect_sym(p)?;
    let x = p.boundary();
    let n = x.n();
    let j = p.j();
    let (_, f, fp) =
        trace_parts(x.complex(), p.target(), effect.complex(), n, |r| &x.phi(0, r - 1) * &j.map(n - r + 1).star())?;
    SymmetricCobordism::from_maps(x.clone(), effect, &f, &fp, Family::new())
}

/// The trace `((f f'): C ⊕ C' → D', (0, ψ ⊕ −ψ'))` of quadratic surgery.
pub fn trace_quad(p: &QuadraticPair) -> Result<QuadraticCobordism> {
    let effect = surgery_effect_quad(p)?;
    let x = p.boundary();
    let n = x.n();
    let j = p.j();
    let (_, f, fp) =
        trace_parts(x.complex(), p.target(), effect.complex(), n, |r| &x.sym_psi0(r - 1) * &j.map(n - r + 1).star())?;
    QuadraticCobordism::from_maps(x.clone(), effect, &f, &fp, Family::new())
}

/// Both outputs of a surgery.
#[derive(Clone, Debug)]
pub struct SurgeryOutcome<X, G> {
    pub effect: X,
    pub trace: G,
}

pub fn surgery_sym(p: &SymmetricPair) -> Result<SurgeryOutcome<SymmetricComplex, SymmetricCobordism>> {
    let trace = trace_sym(p)?;
    Ok(SurgeryOutcome { effect: trace.right.clone(), trace })
}

pub fn surgery_quad(p: &QuadraticPair) -> Result<SurgeryOutcome<QuadraticComplex, QuadraticCobordism>> {
    let trace = trace_quad(p)?;
    Ok(SurgeryOutcome { effect: trace.right.clone(), trace })
}

/// Union `Γ ∪ Γ'` of cobordisms `C → D ← C'` and `C' → D' ← C''` glued along `C'`.
///
/// `D''_r = D_r ⊕ C'_{r−1} ⊕ D'_r` is the mapping cone of `(f'; g'): C' → D ⊕ D'`, and
///
/// ```text
/// δφ''_s = [[δφ_s, (−1)^s f'φ'_s,               0                   ],
///           [0,    (−1)^{n+r+s+1} Tφ'_{s−1},    (−1)^{n+r} φ'_s g'* ],
///           [0,    0,                           δφ'_s               ]]
/// ```
pub fn union_sym(g1: &SymmetricCobordism, g2: &SymmetricCobordism) -> Result<SymmetricCobordism> {
    if g1.right != g2.left {
        return Err(Error::DimensionMismatch(
            "union: right end of the first cobordism is not the left end of the second".into(),
        ));
    }
    let mid = &g1.right;
    let n = mid.n();
    let c = g1.left.complex();
    let cm = mid.complex();
    let c2 = g2.right.complex();
    let d1 = g1.pair.target();
    let d2 = g2.pair.target();
    let ring = c.ring();
    let fp = g1.f_prime();
    let gp = g2.f();
    let lo = [c.lo(), cm.lo() + 1, c2.lo(), d1.lo(), d2.lo()].into_iter().min().unwrap_or(0);
    let hi = [c.hi(), cm.hi() + 1, c2.hi(), d1.hi(), d2.hi()].into_iter().max().unwrap_or(-1);
    let sizes = |r: i64| [d1.rank(r), cm.rank(r - 1), d2.rank(r)];
    let dd = ChainComplex::build(
        ring,
        lo,
        hi,
        |r| sizes(r).iter().sum(),
        |r| {
            let a = fp.map(r - 1).scale(sgn(r));
            let b = gp.map(r - 1).scale(sgn(r));
            Matrix::blocks(
                ring,
                &sizes(r - 1),
                &sizes(r),
                &[(0, 0, &d1.d(r)), (0, 1, &a), (1, 1, &cm.d(r - 1)), (2, 1, &b), (2, 2, &d2.d(r))],
            )
        },
    )?;
    let f = ChainMap::new(c, &dd, |r| Matrix::blocks(ring, &sizes(r), &[c.rank(r)], &[(0, 0, &g1.f().map(r))]))?;
    let f2 =
        ChainMap::new(c2, &dd, |r| Matrix::blocks(ring, &sizes(r), &[c2.rank(r)], &[(2, 0, &g2.f_prime().map(r))]))?;
    let s_max = [g1.pair.delta_family().max_s(), g2.pair.delta_family().max_s(), mid.family().max_s()]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(0)
        + 1;
    let mut delta = Family::new();
    for s in 0..=s_max {
        let si = s as i64;
        for r in lo..=hi {
            let q = n + 1 - r + si;
            let (rows, cols) = (sizes(r), sizes(q));
            let x1 = g1.pair.delta(s, r);
            let x2 = g2.pair.delta(s, r);
            let a = (&fp.map(r) * &mid.phi(s, r)).scale(sgn(si));
            let b = if s >= 1 {
                mid.t(s - 1, r - 1).scale(sgn(n + r + si + 1))
            } else {
                Matrix::zeros(ring, rows[1], cols[1])
            };
            let e = (&mid.phi(s, r - 1) * &gp.map(q).star()).scale(sgn(n + r));
            let block =
                Matrix::blocks(ring, &rows, &cols, &[(0, 0, &x1), (0, 1, &a), (1, 1, &b), (1, 2, &e), (2, 2, &x2)]);
            if !block.is_zero() {
                delta.insert(s, r, block);
            }
        }
    }
    SymmetricCobordism::from_maps(g1.left.clone(), g2.right.clone(), &f, &f2, delta)
}

/// Output of [`cobordism_to_data`].
#[derive(Clone, Debug)]
pub struct RoundTrip {
    /// Surgery data `(j: C → 𝒞(f'), (δφ/φ', φ))`.
    pub data: SymmetricPair,
    /// Trace of that surgery.
    pub trace: SymmetricCobordism,
    /// `g: C̄' → C'`, the projection onto the `C'_r` summand.
    pub g: ChainMap,
    /// `h: D̄ → D`, `h = (f  δφ_0  f'φ'_0)`.
    pub h: ChainMap,
    /// Certificate for `g`.
    pub g_verdict: EquivalenceVerdict,
}

/// Turn a Poincaré cobordism into surgery data whose effect is equivalent to `C'`.
pub fn cobordism_to_data(gamma: &SymmetricCobordism) -> Result<RoundTrip> {
    let rep = gamma.check(true)?;
    if !rep.is_valid() {
        return Err(Error::NotPoincare(format!("cobordism: {}", rep.failures.join("; "))));
    }
    let x = &gamma.left;
    let xp = &gamma.right;
    let n = x.n();
    let f = gamma.f();
    let fp = gamma.f_prime();
    let c = x.complex();
    let cpx = xp.complex();
    let dd = gamma.pair.target();
    let ring = c.ring();
    let cone = complex::mapping_cone(&fp);
    let j = ChainMap::new(c, &cone, |r| {
        let fr = f.map(r);
        Matrix::blocks(ring, &[dd.rank(r), cpx.rank(r - 1)], &[c.rank(r)], &[(0, 0, &fr)])
    })?;
    let s_max = gamma.pair.delta_family().max_s().unwrap_or(0).max(xp.family().max_s().unwrap_or(0)) + 1;
    // δφ̄_s = [[δφ_s, (−1)^s f'φ'_s], [0, (−1)^{n−r+s+1} Tφ'_{s−1}]]; the extra
    // sign on Tφ' comes from the (−1)^{n+1} in the pair relation.
    let data = SymmetricPair::from_fn(j, x.clone(), s_max, |s, r| {
        let si = s as i64;
        let rows = [dd.rank(r), cpx.rank(r - 1)];
        let cols = [dd.rank(n - r + si + 1), cpx.rank(n - r + si)];
        let dl = gamma.pair.delta(s, r);
        let fphi = (&fp.map(r) * &xp.phi(s, r)).scale(sgn(si));
        let tphi =
            if s >= 1 { xp.t(s - 1, r - 1).scale(sgn(n - r + si + 1)) } else { Matrix::zeros(ring, rows[1], cols[1]) };
        Matrix::blocks(ring, &rows, &cols, &[(0, 0, &dl), (0, 1, &fphi), (1, 1, &tphi)])
    })?;
    let trace = trace_sym(&data)?;
    let cbar = trace.right.complex();
    // C̄'_r = C_r ⊕ D_{r+1} ⊕ C'_r ⊕ D^{n−r+1} ⊕ C'^{n−r}
    let g = ChainMap::new(cbar, cpx, |r| {
        let id = Matrix::identity(ring, cpx.rank(r));
        Matrix::blocks(
            ring,
            &[cpx.rank(r)],
            &[c.rank(r), dd.rank(r + 1), cpx.rank(r), dd.rank(n - r + 1), cpx.rank(n - r)],
            &[(0, 2, &id)],
        )
    })?;
    let dbar = trace.pair.target();
    let h = ChainMap::new(dbar, dd, |r| {
        let fr = f.map(r);
        let dl = gamma.pair.delta(0, r);
        let fphi = &fp.map(r) * &xp.phi(0, r);
        Matrix::blocks(
            ring,
            &[dd.rank(r)],
            &[c.rank(r), dd.rank(n - r + 1), cpx.rank(n - r)],
            &[(0, 0, &fr), (0, 1, &dl), (0, 2, &fphi)],
        )
    })?;
    let g_verdict = complex::is_chain_equivalence(&g)?;
    Ok(RoundTrip { data, trace, g, h, g_verdict })
}

/// Symmetric cobordism underlying a quadratic one: `(1+T)` on every structure,
/// `δφ_0 = (1+T)δψ_0` and `δφ_s = 0` for `s ≥ 1`.
pub fn symmetrize_cobordism(gamma: &QuadraticCobordism) -> Result<SymmetricCobordism> {
    let left = crate::structure::symmetrize(&gamma.left);
    let right = crate::structure::symmetrize(&gamma.right);
    let sp = gamma.pair.symmetrize();
    SymmetricCobordism::from_maps(left, right, &gamma.f(), &gamma.f_prime(), sp.delta_family().clone())
}

/// Quadratic round trip, carried out on the symmetrization.
pub fn cobordism_to_data_quad(gamma: &QuadraticCobordism) -> Result<RoundTrip> {
    let rep = gamma.check(true)?;
    if !rep.is_valid() {
        return Err(Error::NotPoincare(format!("cobordism: {}", rep.failures.join("; "))));
    }
    cobordism_to_data(&symmetrize_cobordism(gamma)?)
}

/// Surgery data `(j: C → D, (0, ψ))` with `D` the quotient `D_r = C_r` for `r > n − i`.
pub fn highly_connected_data(x: &QuadraticComplex) -> Result<QuadraticPair> {
    let n = x.n();
    let i = n.div_euclid(2);
    let c = x.complex();
    let ring = c.ring();
    let keep = |r: i64| r > n - i;
    let d = if c.lo() > c.hi() {
        ChainComplex::zero(ring)
    } else {
        ChainComplex::build(
            ring,
            c.lo(),
            c.hi(),
            |r| if keep(r) { c.rank(r) } else { 0 },
            |r| {
                if keep(r) && keep(r - 1) {
                    c.d(r)
                } else {
                    Matrix::zeros(
                        ring,
                        if keep(r - 1) { c.rank(r - 1) } else { 0 },
                        if keep(r) { c.rank(r) } else { 0 },
                    )
                }
            },
        )?
    };
    let j = ChainMap::new(c, &d, |r| {
        if keep(r) {
            Matrix::identity(ring, c.rank(r))
        } else {
            Matrix::zeros(ring, 0, c.rank(r))
        }
    })?;
    QuadraticPair::new(j, x.clone(), Family::new())
}

/// Reduce the carrier of a quadratic complex and transport `ψ` along the reduction.
pub fn reduce_quadratic(x: &QuadraticComplex) -> Result<(QuadraticComplex, Reduction)> {
    let red = complex::reduce_complex(x.complex())?;
    let y = x.transport(&red.f)?;
    Ok((y, red))
}

/// Reduce the carrier of a symmetric complex and transport `φ` along the reduction.
pub fn reduce_symmetric(x: &SymmetricComplex) -> Result<(SymmetricComplex, Reduction)> {
    let red = complex::reduce_complex(x.complex())?;
    let y = x.transport(&red.f)?;
    Ok((y, red))
}

/// Surgery data used internally by tests that bypass relation checks.
#[doc(hidden)]
pub fn effect_sym_raw(p: &SymmetricPair) -> Result<SymmetricComplex> {
    Ok(effect_sym_unchecked(p)?.0)
}

#[doc(hidden)]
pub fn effect_quad_raw(p: &QuadraticPair) -> Result<QuadraticComplex> {
    effect_quad_unchecked(p)
}

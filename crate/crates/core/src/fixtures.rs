//! Structured complexes modelled on small manifolds and forms.
//!
//! Every constructor validates its output; a fixture that fails its checker
//! is a bug and panics.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::complex::{ChainComplex, ChainMap};
use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::ring::Ring;
use crate::structure::{
    check_quadratic, check_symmetric, is_poincare_quad, is_poincare_sym, Family, QuadraticComplex, QuadraticPair,
    SymmetricComplex, SymmetricPair,
};

fn sphere_complex(ring: Ring, n: i64) -> ChainComplex {
    if n == 0 {
        return ChainComplex::graded(ring, 0, vec![2]);
    }
    let mut ranks = vec![0; n as usize + 1];
    ranks[0] = 1;
    ranks[n as usize] = 1;
    ChainComplex::graded(ring, 0, ranks)
}

fn validated_sym(x: SymmetricComplex, poincare: bool) -> SymmetricComplex {
    let rep = check_symmetric(&x);
    assert!(rep.is_valid(), "fixture fails symmetric relations: {rep}");
    if poincare {
        assert!(is_poincare_sym(&x).expect("poincare check"), "fixture is not Poincaré");
    }
    x
}

fn validated_quad(x: QuadraticComplex, poincare: bool) -> QuadraticComplex {
    let rep = check_quadratic(&x);
    assert!(rep.is_valid(), "fixture fails quadratic relations: {rep}");
    if poincare {
        assert!(is_poincare_quad(&x).expect("poincare check"), "fixture is not Poincaré");
    }
    x
}

/// `S^n` over ℤ: rank 1 in degrees 0 and `n` (rank 2 in degree 0 for `n = 0`), `φ_0` unit blocks.
pub fn sphere(n: i64) -> SymmetricComplex {
    sphere_over(Ring::Integers, n)
}

/// [`sphere`] over an arbitrary ring.
pub fn sphere_over(ring: Ring, n: i64) -> SymmetricComplex {
    assert!(n >= 0, "sphere dimension must be non-negative");
    let c = sphere_complex(ring, n);
    let x = SymmetricComplex::from_fn(c.clone(), n, 0, |_, r| Matrix::identity(ring, c.rank(r))).expect("shapes");
    validated_sym(x, true)
}

/// Quadratic refinement of the sphere: `ψ_0 = 1` on `C^n → C_0`, so `(1+T)ψ_0` is the unit pairing.
///
/// For `n = 0` the two points carry the hyperbolic pairing instead, since the
/// diagonal pairing has no quadratic refinement over ℤ.
pub fn quadratic_sphere(ring: Ring, n: i64) -> QuadraticComplex {
    assert!(n >= 0, "sphere dimension must be non-negative");
    let c = sphere_complex(ring, n);
    let x = if n == 0 {
        let h = Matrix::from_ints(ring, 2, 2, &[0, 1, 0, 0]);
        QuadraticComplex::from_fn(c, 0, 0, |_, _| h.clone())
    } else {
        let mut fam = Family::new();
        fam.insert(0, 0, Matrix::identity(ring, 1));
        QuadraticComplex::new(c, n, fam)
    }
    .expect("shapes");
    validated_quad(x, true)
}

/// `2i`-dimensional complex concentrated in degree `i` with `ψ_0 = psi0`.
pub fn middle_quadratic(ring: Ring, i: i64, psi0: Matrix) -> Result<QuadraticComplex> {
    if !psi0.is_square() {
        return Err(Error::DimensionMismatch("ψ_0 must be square".into()));
    }
    let c = ChainComplex::sphere_module(ring, i, psi0.rows());
    QuadraticComplex::from_fn(c, 2 * i, 0, |_, _| psi0.clone())
}

/// `2i`-dimensional complex concentrated in degree `i` with `φ_0 = phi0`.
pub fn middle_symmetric(ring: Ring, i: i64, phi0: Matrix) -> Result<SymmetricComplex> {
    if !phi0.is_square() {
        return Err(Error::DimensionMismatch("φ_0 must be square".into()));
    }
    let c = ChainComplex::sphere_module(ring, i, phi0.rows());
    SymmetricComplex::from_fn(c, 2 * i, 0, |_, _| phi0.clone())
}

/// `ψ_0` whose symmetrization is the hyperbolic form of rank `2g`: blocks `[[0,1],[0,0]]`.
pub fn hyperbolic_psi(ring: Ring, g: usize) -> Matrix {
    let mut m = Matrix::zeros(ring, 2 * g, 2 * g);
    for k in 0..g {
        m.set(2 * k, 2 * k + 1, ring.one());
    }
    m
}

/// The hyperbolic quadratic complex: rank `2g` in degree `i`, `n = 2i`.
pub fn hyperbolic_complex(ring: Ring, i: i64, g: usize) -> QuadraticComplex {
    validated_quad(middle_quadratic(ring, i, hyperbolic_psi(ring, g)).expect("square"), true)
}

/// The E8 Gram matrix (positive definite, even, unimodular).
pub fn e8_matrix() -> Matrix {
    #[rustfmt::skip]
    let e = [
         2, -1,  0,  0,  0,  0,  0,  0,
        -1,  2, -1,  0,  0,  0,  0,  0,
         0, -1,  2, -1,  0,  0,  0, -1,
         0,  0, -1,  2, -1,  0,  0,  0,
         0,  0,  0, -1,  2, -1,  0,  0,
         0,  0,  0,  0, -1,  2, -1,  0,
         0,  0,  0,  0,  0, -1,  2,  0,
         0,  0, -1,  0,  0,  0,  0,  2,
    ];
    Matrix::from_ints(Ring::Integers, 8, 8, &e)
}

/// Upper-triangular quadratic refinement `ψ` of an even symmetric matrix `λ`: `ψ + ψ* = λ`.
pub fn upper_refinement(lambda: &Matrix) -> Matrix {
    let n = lambda.rows();
    let ring = lambda.ring();
    Matrix::from_fn(ring, n, n, |a, b| {
        if a < b {
            lambda.get(a, b).clone()
        } else if a == b {
            let v = lambda.get(a, a).as_int().expect("integer diagonal");
            ring.from_int(v / 2)
        } else {
            ring.zero()
        }
    })
}

/// The E8 quadratic complex in degree `i` (`i` even, `n = 2i`).
pub fn e8_complex(i: i64) -> QuadraticComplex {
    assert!(i % 2 == 0, "E8 is a symmetric form; i must be even");
    validated_quad(middle_quadratic(Ring::Integers, i, upper_refinement(&e8_matrix())).expect("square"), true)
}

/// The rank-2 skew form with `μ = (1, 1)` in degree `i` (`i` odd): Arf invariant 1.
pub fn arf_one_complex(i: i64) -> QuadraticComplex {
    assert!(i % 2 != 0, "the Arf form lives in odd middle degree");
    let psi = Matrix::from_ints(Ring::Integers, 2, 2, &[1, 1, 0, 1]);
    validated_quad(middle_quadratic(Ring::Integers, i, psi).expect("square"), true)
}

/// Variant of the circle double cover.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum DoubleCover {
    /// The two arcs move in opposite senses; the effect is `S¹ ⊔ S¹`.
    Orientable,
    /// The two arcs move in the same sense; the effect is the connected double cover.
    Nonorientable,
}

impl DoubleCover {
    pub fn parse(s: &str) -> Option<DoubleCover> {
        match s {
            "orientable" | "trivial" => Some(DoubleCover::Orientable),
            "nonorientable" | "nontrivial" => Some(DoubleCover::Nonorientable),
            _ => None,
        }
    }

    /// Framing integer carried by `δψ_0` and by the cone cochain `y`.
    pub fn framing(self) -> i64 {
        match self {
            DoubleCover::Orientable => 0,
            DoubleCover::Nonorientable => 1,
        }
    }
}

/// Surgery on `S⁰ × D¹ ⊂ S¹`: data `j: C(S¹) → S¹ℤ` with `δψ_0` carrying the framing.
///
/// The core is the class of two points, which is null in `H_0(S¹; ℤ)`, so
/// `j = 0`; the variants differ only in `δψ_0`.
pub fn double_cover_surgery(variant: DoubleCover) -> QuadraticPair {
    let ring = Ring::Integers;
    let x = quadratic_sphere(ring, 1);
    let d = ChainComplex::sphere_module(ring, 1, 1);
    let j = ChainMap::zero(x.complex(), &d);
    let mut delta = Family::new();
    delta.insert(0, 1, Matrix::from_ints(ring, 1, 1, &[variant.framing()]));
    let p = QuadraticPair::new(j, x, delta).expect("shapes");
    let rep = p.check_relations();
    assert!(rep.is_valid(), "double cover data fails the pair relations: {rep}");
    p
}

/// Symmetric version of [`double_cover_surgery`].
pub fn double_cover_surgery_sym(variant: DoubleCover) -> SymmetricPair {
    double_cover_surgery(variant).symmetrize()
}

/// The smaller effect complex of a surgery on an `i`-sphere in an `n`-dimensional complex.
///
/// Adds one generator in degree `i+1` attached by `x: S^iℤ → C` and one in
/// degree `n−i−1` hit by the cochain `y` on the cone of `x` in degree `n−i`.
/// `x` is the column `C_i ← ℤ`; `y` is the row on `C_{n−i} ⊕ (S^iℤ)_{n−i−1}`.
pub fn small_effect(c: &ChainComplex, x: &Matrix, y: &Matrix, n: i64, i: i64) -> Result<ChainComplex> {
    let ring = c.ring();
    if x.rows() != c.rank(i) || x.cols() != 1 {
        return Err(Error::DimensionMismatch(format!("x must be a {}x1 column", c.rank(i))));
    }
    let sphere = ChainComplex::sphere_module(ring, i, 1);
    let xmap = ChainMap::new(&sphere, c, |r| if r == i { x.clone() } else { Matrix::zeros(ring, c.rank(r), 0) })?;
    let cone = crate::complex::mapping_cone(&xmap);
    let top = n - i;
    if y.rows() != 1 || y.cols() != cone.rank(top) {
        return Err(Error::DimensionMismatch(format!("y must be a 1x{} row", cone.rank(top))));
    }
    if !(y * &cone.d(top + 1)).is_zero() {
        return Err(Error::InvalidStructure("y is not a cocycle on the cone of x".into()));
    }
    let ydeg = n - i - 1;
    let xdeg = i + 1;
    let extra_y = |r: i64| usize::from(r == ydeg);
    let extra_x = |r: i64| usize::from(r == xdeg);
    let lo = c.lo().min(ydeg).min(xdeg).min(i);
    let hi = c.hi().max(ydeg).max(xdeg).max(top);
    let yc = y.sub_block(0, 1, 0, c.rank(top));
    let ys = y.sub_block(0, 1, c.rank(top), y.cols() - c.rank(top));
    ChainComplex::build(
        ring,
        lo,
        hi,
        |r| c.rank(r) + extra_y(r) + extra_x(r),
        |r| {
            let rows = [c.rank(r - 1), extra_y(r - 1), extra_x(r - 1)];
            let cols = [c.rank(r), extra_y(r), extra_x(r)];
            let dc = c.d(r);
            let mut parts: Vec<(usize, usize, &Matrix)> = vec![(0, 0, &dc)];
            if r == xdeg {
                parts.push((0, 2, x));
            }
            if r == top {
                parts.push((1, 0, &yc));
                if xdeg == top {
                    parts.push((1, 2, &ys));
                }
            }
            Matrix::blocks(ring, &rows, &cols, &parts)
        },
    )
}

/// The circle fixture's smaller effect: `x = 0`, `y = (0, framing)`.
pub fn double_cover_small_effect(variant: DoubleCover) -> ChainComplex {
    let ring = Ring::Integers;
    let c = sphere_complex(ring, 1);
    let x = Matrix::zeros(ring, 1, 1);
    let y = Matrix::from_ints(ring, 1, 2, &[0, variant.framing()]);
    small_effect(&c, &x, &y, 1, 0).expect("circle small effect")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::complex::homology;

    #[test]
    fn spheres_are_poincare() {
        for n in 0..=6 {
            let x = sphere(n);
            assert!(is_poincare_sym(&x).unwrap());
            let h = homology(x.complex()).unwrap();
            let total: usize = h.iter().map(|g| g.free_rank).sum();
            assert_eq!(total, 2);
        }
        for n in 0..=4 {
            quadratic_sphere(Ring::Integers, n);
            quadratic_sphere(Ring::CyclicGroupRing(2), n);
        }
    }

    #[test]
    fn form_fixtures() {
        for i in 1..=3 {
            hyperbolic_complex(Ring::Integers, i, 2);
        }
        e8_complex(2);
        arf_one_complex(1);
        assert_eq!(e8_matrix().star(), e8_matrix());
    }

    #[test]
    fn small_effect_of_the_circle() {
        let h = homology(&double_cover_small_effect(DoubleCover::Orientable)).unwrap();
        assert_eq!(h.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![2, 2]);
        let h = homology(&double_cover_small_effect(DoubleCover::Nonorientable)).unwrap();
        assert_eq!(h.iter().map(|g| g.free_rank).collect::<Vec<_>>(), vec![1, 1]);
        assert!(h.iter().all(|g| g.torsion.is_empty()));
    }

    #[test]
    fn small_effect_rejects_non_cocycles() {
        let ring = Ring::Integers;
        let c = ChainComplex::new(
            ring,
            0,
            vec![1, 1, 1],
            vec![Matrix::zeros(ring, 1, 1), Matrix::from_ints(ring, 1, 1, &[1])],
        )
        .unwrap();
        let x = Matrix::zeros(ring, 1, 1);
        let bad = Matrix::from_ints(ring, 1, 2, &[1, 0]);
        assert!(matches!(small_effect(&c, &x, &bad, 1, 0), Err(Error::InvalidStructure(_))));
        let good = Matrix::from_ints(ring, 1, 2, &[0, 1]);
        assert!(small_effect(&c, &x, &good, 1, 0).is_ok());
    }
}

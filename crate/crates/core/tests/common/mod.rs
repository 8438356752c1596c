//! Independent oracles and generators shared by the integration tests.
#![allow(dead_code, clippy::needless_range_loop)]

use algsurg_core::fixtures;
use algsurg_core::forms::{hyperbolic, EpsQuadraticForm};
use algsurg_core::sampler::random_unimodular;
use algsurg_core::{Matrix, Ring};
use num_rational::Ratio;
use rand::Rng;

type Q = Ratio<i128>;

/// Characteristic polynomial `det(xI − A)` by Faddeev–LeVerrier, coefficients from `x^0` up.
pub fn charpoly(a: &Matrix) -> Vec<Q> {
    let n = a.rows();
    let m: Vec<Vec<Q>> = a.to_rational().expect("rational entries");
    let mul = |x: &Vec<Vec<Q>>, y: &Vec<Vec<Q>>| -> Vec<Vec<Q>> {
        (0..n).map(|i| (0..n).map(|j| (0..n).map(|k| x[i][k] * y[k][j]).sum()).collect()).collect()
    };
    let mut coeffs = vec![Q::from_integer(0); n + 1];
    coeffs[n] = Q::from_integer(1);
    let mut mk = vec![vec![Q::from_integer(0); n]; n];
    for k in 1..=n {
        for (i, row) in mk.iter_mut().enumerate() {
            row[i] += coeffs[n - k + 1];
        }
        let am = mul(&m, &mk);
        let tr: Q = (0..n).map(|i| am[i][i]).sum();
        coeffs[n - k] = -tr / Q::from_integer(k as i128);
        mk = am;
    }
    coeffs
}

fn sign_changes(c: &[Q]) -> usize {
    let signs: Vec<bool> = c.iter().filter(|x| **x != Q::from_integer(0)).map(|x| *x > Q::from_integer(0)).collect();
    signs.windows(2).filter(|w| w[0] != w[1]).count()
}

/// Signature of a symmetric matrix by Descartes' rule on its (real-rooted) characteristic polynomial.
pub fn signature_oracle(a: &Matrix) -> i64 {
    let mut p = charpoly(a);
    while p.len() > 1 && p[0] == Q::from_integer(0) {
        p.remove(0);
    }
    let pos = sign_changes(&p);
    let neg: Vec<Q> = p.iter().enumerate().map(|(k, c)| if k % 2 == 1 { -*c } else { *c }).collect();
    pos as i64 - sign_changes(&neg) as i64
}

/// Arf invariant by brute force over all `2^{2g}` vectors, written independently of the library.
pub fn arf_oracle(lambda: &[Vec<i64>], mu: &[i64]) -> u8 {
    let n = mu.len();
    let mut zeros = 0u64;
    for bits in 0u64..1 << n {
        let mut v = 0i64;
        for j in 0..n {
            if bits >> j & 1 == 1 {
                v += mu[j];
                for k in j + 1..n {
                    if bits >> k & 1 == 1 {
                        v += lambda[j][k];
                    }
                }
            }
        }
        if v.rem_euclid(2) == 0 {
            zeros += 1;
        }
    }
    u8::from(zeros < 1 << (n - 1))
}

/// A random nonsingular `(−1)^i`-quadratic form over ℤ: a sum of fixture forms in a random basis.
///
/// Returns the form together with its expected class (signature/8 or Arf).
pub fn random_form<R: Rng + ?Sized>(rng: &mut R, i: i64, max_summands: usize) -> (EpsQuadraticForm, i64) {
    let ring = Ring::Integers;
    let mut q = hyperbolic(ring, 0, i);
    let mut class = 0i64;
    for _ in 0..rng.gen_range(1..=max_summands) {
        let (piece, c) = if i.rem_euclid(2) == 0 {
            match rng.gen_range(0..3) {
                0 => (EpsQuadraticForm::from_psi(i, &fixtures::upper_refinement(&fixtures::e8_matrix())).unwrap(), 1),
                1 => (
                    EpsQuadraticForm::from_psi(i, &fixtures::upper_refinement(&fixtures::e8_matrix()).scale(-1))
                        .unwrap(),
                    -1,
                ),
                _ => (hyperbolic(ring, 1, i), 0),
            }
        } else if rng.gen_bool(0.5) {
            (EpsQuadraticForm::from_psi(i, &Matrix::from_ints(ring, 2, 2, &[1, 1, 0, 1])).unwrap(), 1)
        } else {
            (hyperbolic(ring, 1, i), 0)
        };
        q = q.direct_sum(&piece).unwrap();
        class = if i.rem_euclid(2) == 0 { class + c } else { (class + c) % 2 };
    }
    let (p, _) = random_unimodular(rng, ring, q.rank(), 3 * q.rank());
    (q.pullback(&p), class)
}

/// Rank over ℚ by plain Gaussian elimination.
pub fn rank_oracle(a: &Matrix) -> usize {
    let mut m: Vec<Vec<Q>> = a.to_rational().expect("rational entries");
    let (rows, cols) = (a.rows(), a.cols());
    let mut rank = 0;
    for col in 0..cols {
        let Some(p) = (rank..rows).find(|&r| m[r][col] != Q::from_integer(0)) else { continue };
        m.swap(rank, p);
        for r in 0..rows {
            if r != rank && m[r][col] != Q::from_integer(0) {
                let f = m[r][col] / m[rank][col];
                for c in col..cols {
                    let v = m[rank][c];
                    m[r][c] -= f * v;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Betti numbers `rank C_r − rank d_r − rank d_{r+1}` over ℚ.
pub fn betti_oracle(c: &algsurg_core::ChainComplex, r: i64) -> usize {
    c.rank(r) - rank_oracle(&c.d(r)) - rank_oracle(&c.d(r + 1))
}

//! Dense complex linear algebra helpers: SVD-based rank and null spaces with a
//! guarded gap check, Kronecker-vectorized commutation operators, matrix
//! exponentials and their derivatives.

use nalgebra::{DMatrix, DVector};
pub use num_complex::Complex64 as C64;

use crate::error::{NcgError, Result};

pub type CMatrix = DMatrix<C64>;
pub type CVector = DVector<C64>;

/// Relative singular-value threshold used for every rank decision.
pub const DEFAULT_RANK_TOL: f64 = 1e-8;

/// Absolute floor below which singular values count as zero regardless of
/// the largest one. Keeps pure round-off matrices from being full rank.
const ABSOLUTE_FLOOR: f64 = 1e3 * f64::EPSILON;

/// Outcome of a rank decision on a list of singular values.
#[derive(Debug, Clone, PartialEq)]
pub struct RankDecision {
    pub rank: usize,
    pub threshold: f64,
    /// Singular values in decreasing order.
    pub singular_values: Vec<f64>,
}

/// Decides the numerical rank of a matrix from its singular values.
///
/// A singular value counts when it exceeds `rel_tol * σ_max` (with an
/// absolute floor). Any value within a factor 10 of that threshold makes
/// the decision ambiguous and is reported as an error, so the returned rank
/// is stable under ×10 / ÷10 perturbation of the threshold.
pub fn decide_rank(mut singular_values: Vec<f64>, rel_tol: f64) -> Result<RankDecision> {
    singular_values.sort_by(|a, b| b.total_cmp(a));
    let smax = singular_values.first().copied().unwrap_or(0.0);
    let threshold = (rel_tol * smax).max(ABSOLUTE_FLOOR);
    let mut rank = 0;
    for &s in &singular_values {
        if s > 10.0 * threshold {
            rank += 1;
        } else if s >= threshold / 10.0 && s > ABSOLUTE_FLOOR {
            return Err(NcgError::AmbiguousRank {
                singular_value: s,
                threshold,
            });
        }
    }
    Ok(RankDecision {
        rank,
        threshold,
        singular_values,
    })
}

/// Orthonormal basis of a null space together with the rank decision.
#[derive(Debug, Clone)]
pub struct NullSpace<T> {
    pub basis: Vec<DVector<T>>,
    pub decision: RankDecision,
}

impl<T> NullSpace<T> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Brings a matrix to a square `cols × cols` matrix with the same row space:
/// QR for tall inputs, zero padding for wide ones.
fn square_up_complex(a: &CMatrix) -> CMatrix {
    let (m, n) = a.shape();
    if m > n {
        a.clone().qr().r()
    } else if m < n {
        let mut padded = CMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        padded
    } else {
        a.clone()
    }
}

fn square_up_real(a: &DMatrix<f64>) -> DMatrix<f64> {
    let (m, n) = a.shape();
    if m > n {
        a.clone().qr().r()
    } else if m < n {
        let mut padded = DMatrix::zeros(n, n);
        padded.view_mut((0, 0), (m, n)).copy_from(a);
        padded
    } else {
        a.clone()
    }
}

/// Complex-linear null space of `a`.
pub fn null_space(a: &CMatrix, rel_tol: f64) -> Result<NullSpace<C64>> {
    let n = a.ncols();
    if n == 0 {
        return Ok(NullSpace {
            basis: vec![],
            decision: decide_rank(vec![], rel_tol)?,
        });
    }
    if a.nrows() == 0 {
        return Ok(NullSpace {
            basis: (0..n).map(|k| unit_vector(n, k)).collect(),
            decision: decide_rank(vec![], rel_tol)?,
        });
    }
    let sq = square_up_complex(a);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let decision = decide_rank(svd.singular_values.iter().copied().collect(), rel_tol)?;
    let threshold = decision.threshold;
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(k, _)| v_t.row(k).adjoint())
        .collect();
    Ok(NullSpace { basis, decision })
}

/// Real-linear null space of `a`.
pub fn real_null_space(a: &DMatrix<f64>, rel_tol: f64) -> Result<NullSpace<f64>> {
    let n = a.ncols();
    if n == 0 {
        return Ok(NullSpace {
            basis: vec![],
            decision: decide_rank(vec![], rel_tol)?,
        });
    }
    if a.nrows() == 0 {
        return Ok(NullSpace {
            basis: (0..n)
                .map(|k| {
                    let mut v = DVector::zeros(n);
                    v[k] = 1.0;
                    v
                })
                .collect(),
            decision: decide_rank(vec![], rel_tol)?,
        });
    }
    let sq = square_up_real(a);
    let svd = sq.svd(false, true);
    let v_t = svd.v_t.expect("requested V");
    let decision = decide_rank(svd.singular_values.iter().copied().collect(), rel_tol)?;
    let threshold = decision.threshold;
    let basis = svd
        .singular_values
        .iter()
        .enumerate()
        .filter(|(_, s)| **s <= threshold)
        .map(|(k, _)| v_t.row(k).transpose())
        .collect();
    Ok(NullSpace { basis, decision })
}

/// Numerical rank of a complex matrix with the guarded gap check.
pub fn rank(a: &CMatrix, rel_tol: f64) -> Result<usize> {
    if a.nrows() == 0 || a.ncols() == 0 {
        return Ok(0);
    }
    let sv = square_up_complex(a).singular_values();
    Ok(decide_rank(sv.iter().copied().collect(), rel_tol)?.rank)
}

/// Minimum-norm least-squares solution of `a x = b`, with the residual norm
/// `‖a x − b‖₂`.
pub fn least_squares(a: &CMatrix, b: &CVector, rel_tol: f64) -> Result<(CVector, f64)> {
    let n = a.ncols();
    if n == 0 {
        return Ok((CVector::zeros(0), b.norm()));
    }
    let svd = a.clone().svd(true, true);
    let decision = decide_rank(svd.singular_values.iter().copied().collect(), rel_tol)?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V");
    let mut x = CVector::zeros(n);
    for (k, &s) in svd.singular_values.iter().enumerate() {
        if s > decision.threshold {
            let coeff = u.column(k).dotc(b) / C64::new(s, 0.0);
            x += v_t.row(k).adjoint() * coeff;
        }
    }
    let residual = (a * &x - b).norm();
    Ok((x, residual))
}

pub fn unit_vector(n: usize, k: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[k] = C64::new(1.0, 0.0);
    v
}

/// Column-major vectorization.
pub fn vectorize(m: &CMatrix) -> CVector {
    CVector::from_column_slice(m.as_slice())
}

pub fn unvectorize(v: &CVector, rows: usize, cols: usize) -> CMatrix {
    CMatrix::from_column_slice(rows, cols, v.as_slice())
}

/// Matrix of `X ↦ left·X − X·right` acting on column-major `vec(X)`, where
/// `X` is `left.nrows() × right.ncols()`.
pub fn sylvester_operator(left: &CMatrix, right: &CMatrix) -> CMatrix {
    let il = CMatrix::identity(right.nrows(), right.nrows());
    let ir = CMatrix::identity(left.nrows(), left.nrows());
    il.kronecker(left) - right.transpose().kronecker(&ir)
}

/// Largest entry modulus.
pub fn max_abs(m: &CMatrix) -> f64 {
    m.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn is_finite(m: &CMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

pub fn expm(m: &CMatrix) -> CMatrix {
    m.exp()
}

/// Directional derivative of the matrix exponential, `d/ds exp(x + s·dx)` at
/// `s = 0`, read off the upper-right block of `exp([[x, dx], [0, x]])`.
pub fn expm_derivative(x: &CMatrix, dx: &CMatrix) -> CMatrix {
    let n = x.nrows();
    let mut block = CMatrix::zeros(2 * n, 2 * n);
    block.view_mut((0, 0), (n, n)).copy_from(x);
    block.view_mut((n, n), (n, n)).copy_from(x);
    block.view_mut((0, n), (n, n)).copy_from(dx);
    let e = block.exp();
    e.view((0, n), (n, n)).into_owned()
}

/// `‖U*U − 1‖` as a max-entry defect.
pub fn unitarity_defect(u: &CMatrix) -> f64 {
    let n = u.nrows();
    max_abs(&(u.adjoint() * u - CMatrix::identity(n, n)))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn rank_of_rank_one_outer_product() {
        let u = CVector::from_vec(vec![c(1.0), c(2.0), c(-1.0)]);
        let v = CVector::from_vec(vec![c(0.5), C64::new(0.0, 1.0)]);
        let a = &u * v.adjoint();
        assert_eq!(rank(&a, DEFAULT_RANK_TOL).unwrap(), 1);
        let ns = null_space(&a, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(ns.dim(), 1);
        assert!((&a * &ns.basis[0]).norm() < 1e-12);
    }

    #[test]
    fn ambiguous_rank_is_reported() {
        let a = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(2e-8)]));
        assert!(matches!(
            rank(&a, DEFAULT_RANK_TOL),
            Err(NcgError::AmbiguousRank { .. })
        ));
        let clear = CMatrix::from_diagonal(&CVector::from_vec(vec![c(1.0), c(1e-12)]));
        assert_eq!(rank(&clear, DEFAULT_RANK_TOL).unwrap(), 1);
    }

    #[test]
    fn wide_matrix_null_space_is_complete() {
        let a = CMatrix::from_row_slice(1, 3, &[c(1.0), c(1.0), c(0.0)]);
        let ns = null_space(&a, DEFAULT_RANK_TOL).unwrap();
        assert_eq!(ns.dim(), 2);
        for v in &ns.basis {
            assert!((&a * v).norm() < 1e-12);
        }
    }

    #[test]
    fn sylvester_operator_matches_commutator() {
        let l = CMatrix::from_fn(2, 2, |i, j| C64::new(i as f64 + 1.0, j as f64));
        let x = CMatrix::from_fn(2, 2, |i, j| C64::new((i * 2 + j) as f64, -1.0));
        let lhs = unvectorize(&(sylvester_operator(&l, &l) * vectorize(&x)), 2, 2);
        let rhs = &l * &x - &x * &l;
        assert!(max_abs(&(lhs - rhs)) < 1e-12);
    }

    #[test]
    fn exp_derivative_matches_finite_difference() {
        let x = CMatrix::from_fn(2, 2, |i, j| C64::new(0.3 * i as f64, 0.2 * j as f64 - 0.1));
        let dx = CMatrix::from_fn(2, 2, |i, j| C64::new(0.1 + j as f64, 0.05 * i as f64));
        let h = 1e-5;
        let fd = ((&x + &dx * c(h)).exp() - (&x - &dx * c(h)).exp()) / c(2.0 * h);
        assert!(max_abs(&(expm_derivative(&x, &dx) - fd)) < 1e-8);
    }

    #[test]
    fn least_squares_recovers_consistent_solution() {
        let a = CMatrix::from_row_slice(3, 2, &[c(1.0), c(0.0), c(0.0), c(1.0), c(1.0), c(1.0)]);
        let x = CVector::from_vec(vec![c(2.0), C64::new(0.0, -1.0)]);
        let b = &a * &x;
        let (sol, res) = least_squares(&a, &b, DEFAULT_RANK_TOL).unwrap();
        assert!(res < 1e-12);
        assert!((sol - x).norm() < 1e-12);
    }
}

//! Exact arithmetic over the Gaussian rationals: scalars, dense matrices,
//! polynomials.

mod gauss;
mod matrix;
mod poly;

pub use gauss::{gauss_parse, GaussRat};
pub use matrix::{columns_to_matrix, mat_rank, solve_sylvester, Echelon, ExactMatrix};
pub use poly::{char_poly, eigenvalues, roots_in_qi, GaussPoly};

use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Similarity test without eigenvalues: `a ~ b` iff the commutator maps
/// `X ↦ aX − Xa`, `X ↦ aX − Xb`, `X ↦ bX − Xb` have kernels of equal
/// dimension (Byrnes–Gauger).
pub fn are_similar(a: &ExactMatrix, b: &ExactMatrix) -> Result<bool> {
    if !a.is_square() || !b.is_square() {
        return Err(Error::Dimension("similarity of non-square matrices".into()));
    }
    if a.rows() != b.rows() {
        return Ok(false);
    }
    let n = a.rows();
    let id = ExactMatrix::identity(n);
    let nullity = |x: &ExactMatrix, y: &ExactMatrix| {
        let op = &id.kron(x) - &y.transpose().kron(&id);
        n * n - op.rank()
    };
    let ab = nullity(a, b);
    Ok(ab == nullity(a, a) && ab == nullity(b, b))
}

/// `rank ∏_{l≤k} (r − ξ_l)` for `k = 1..=ξ.len()`.
pub fn rank_sequence(r: &ExactMatrix, xi: &[GaussRat]) -> Vec<usize> {
    let mut prod = ExactMatrix::identity(r.rows());
    xi.iter()
        .map(|x| {
            prod = &prod * &r.shift(x);
            prod.rank()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn similarity_distinguishes_jordan_types() {
        let j2 = ExactMatrix::from_ints(&[&[1, 1], &[0, 1]]);
        let d = ExactMatrix::from_ints(&[&[1, 0], &[0, 1]]);
        let p = ExactMatrix::from_ints(&[&[2, 1], &[1, 1]]);
        let conj = &(&p * &j2) * &p.inverse().unwrap();
        assert!(are_similar(&j2, &conj).unwrap());
        assert!(!are_similar(&j2, &d).unwrap());
    }

    #[test]
    fn rank_sequence_of_jordan_block() {
        let j = ExactMatrix::from_ints(&[&[0, 1, 0], &[0, 0, 1], &[0, 0, 0]]);
        let zero = GaussRat::from_int(0);
        assert_eq!(rank_sequence(&j, &[zero.clone(), zero.clone(), zero]), vec![2, 1, 0]);
    }
}

//! Exact rational row reduction and null spaces.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

/// Reduced row echelon form in place; returns the pivot columns.
pub fn rref(m: &mut [Vec<BigRational>], ncols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..ncols {
        if row == m.len() {
            break;
        }
        let Some(p) = (row..m.len()).find(|&r| !m[r][col].is_zero()) else {
            continue;
        };
        m.swap(row, p);
        let inv = m[row][col].recip();
        for x in m[row].iter_mut() {
            *x = &*x * &inv;
        }
        for r in 0..m.len() {
            if r != row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for c in 0..ncols {
                    let d = &f * &m[row][c];
                    m[r][c] -= d;
                }
            }
        }
        pivots.push(col);
        row += 1;
    }
    pivots
}

/// Rank of a rational matrix with `ncols` columns.
pub fn rank(m: &[Vec<BigRational>], ncols: usize) -> usize {
    let mut a = m.to_vec();
    rref(&mut a, ncols).len()
}

/// Basis of `{v : M·v = 0}`, itself in reduced echelon form.
///
/// ```
/// use num_rational::BigRational;
/// use pexp_core::mullattice::v_space_kernel;
///
/// let q = |n: i64| BigRational::from_integer(n.into());
/// let k = v_space_kernel(&[vec![q(1), q(-1)]], 2);
/// assert_eq!(k, vec![vec![q(1), q(1)]]);
/// ```
pub fn v_space_kernel(matrix: &[Vec<BigRational>], ncols: usize) -> Vec<Vec<BigRational>> {
    let mut a = matrix.to_vec();
    let pivots = rref(&mut a, ncols);
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    let mut basis: Vec<Vec<BigRational>> = free
        .iter()
        .map(|&f| {
            let mut v = vec![BigRational::zero(); ncols];
            v[f] = BigRational::one();
            for (r, &pc) in pivots.iter().enumerate() {
                v[pc] = -a[r][f].clone();
            }
            v
        })
        .collect();
    let k = rref(&mut basis, ncols).len();
    basis.truncate(k);
    basis
}

/// Clear denominators and divide by the content; first nonzero entry positive.
pub fn primitive_integer_vector(v: &[BigRational]) -> Vec<BigInt> {
    let l = v
        .iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints: Vec<BigInt> = v.iter().map(|q| (q * &l).to_integer()).collect();
    let g = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() {
        return ints;
    }
    let sign = match ints.iter().find(|x| !x.is_zero()) {
        Some(x) if x.is_negative() => -BigInt::one(),
        _ => BigInt::one(),
    };
    ints.iter().map(|x| x / &g * &sign).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn zero_matrix_gives_full_space() {
        let k = v_space_kernel(&[vec![q(0); 3]], 3);
        assert_eq!(k.len(), 3);
        assert_eq!(k[0], vec![q(1), q(0), q(0)]);
    }

    #[test]
    fn kernel_annihilates() {
        let m = vec![vec![q(1), q(2), q(3), q(4)], vec![q(2), q(4), q(7), q(1)]];
        let k = v_space_kernel(&m, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let s: BigRational = row.iter().zip(v).map(|(a, b)| a * b).sum();
                assert!(s.is_zero());
            }
        }
    }

    #[test]
    fn primitive_scaling() {
        let v = vec![BigRational::new((-2).into(), 3.into()), q(4)];
        let p = primitive_integer_vector(&v);
        assert_eq!(p, vec![BigInt::from(1), BigInt::from(-6)]);
    }
}

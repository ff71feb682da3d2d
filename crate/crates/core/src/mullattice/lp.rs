//! Dense exact simplex for `max c·x` subject to `A·x ≤ b`, `x ≥ 0`, `b ≥ 0`.

use num_rational::BigRational;
use num_traits::{Signed, Zero};

#[derive(Clone, Debug, PartialEq)]
pub enum LpOutcome {
    Optimal {
        value: BigRational,
        x: Vec<BigRational>,
    },
    Unbounded,
}

/// Bland's rule keeps the pivot sequence finite on degenerate problems.
pub fn maximize(c: &[BigRational], a: &[Vec<BigRational>], b: &[BigRational]) -> LpOutcome {
    let n = c.len();
    let m = a.len();
    assert!(b.iter().all(|v| !v.is_negative()), "origin must be feasible");
    // Tableau columns: n structural, m slack, then the right-hand side.
    let width = n + m + 1;
    let mut t: Vec<Vec<BigRational>> = (0..m)
        .map(|r| {
            let mut row = vec![BigRational::zero(); width];
            row[..n].clone_from_slice(&a[r]);
            row[n + r] = BigRational::from_integer(1.into());
            row[width - 1] = b[r].clone();
            row
        })
        .collect();
    // Objective row holds reduced costs −c; optimal when all are ≥ 0.
    let mut obj = vec![BigRational::zero(); width];
    for j in 0..n {
        obj[j] = -c[j].clone();
    }
    let mut basis: Vec<usize> = (n..n + m).collect();

    loop {
        let Some(enter) = (0..width - 1).find(|&j| obj[j].is_negative()) else {
            break;
        };
        let mut leave: Option<(usize, BigRational)> = None;
        for r in 0..m {
            if t[r][enter].is_positive() {
                let ratio = &t[r][width - 1] / &t[r][enter];
                let better = match &leave {
                    None => true,
                    Some((lr, best)) => {
                        ratio < *best || (ratio == *best && basis[r] < basis[*lr])
                    }
                };
                if better {
                    leave = Some((r, ratio));
                }
            }
        }
        let Some((pr, _)) = leave else {
            return LpOutcome::Unbounded;
        };
        let inv = t[pr][enter].recip();
        for v in t[pr].iter_mut() {
            *v = &*v * &inv;
        }
        let pivot_row = t[pr].clone();
        for (r, row) in t.iter_mut().enumerate() {
            if r != pr && !row[enter].is_zero() {
                let f = row[enter].clone();
                for (v, p) in row.iter_mut().zip(&pivot_row) {
                    *v -= &f * p;
                }
            }
        }
        let f = obj[enter].clone();
        for (v, p) in obj.iter_mut().zip(&pivot_row) {
            *v -= &f * p;
        }
        basis[pr] = enter;
    }

    let mut x = vec![BigRational::zero(); n];
    for (r, &bv) in basis.iter().enumerate() {
        if bv < n {
            x[bv] = t[r][width - 1].clone();
        }
    }
    LpOutcome::Optimal {
        value: obj[width - 1].clone(),
        x,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn textbook_problem() {
        // max 3x + 5y, x ≤ 4, 2y ≤ 12, 3x + 2y ≤ 18 → 36 at (2, 6)
        let out = maximize(
            &[q(3), q(5)],
            &[vec![q(1), q(0)], vec![q(0), q(2)], vec![q(3), q(2)]],
            &[q(4), q(12), q(18)],
        );
        assert_eq!(
            out,
            LpOutcome::Optimal {
                value: q(36),
                x: vec![q(2), q(6)]
            }
        );
    }

    #[test]
    fn unbounded_detected() {
        let out = maximize(&[q(1), q(1)], &[vec![q(1), q(-1)]], &[q(1)]);
        assert_eq!(out, LpOutcome::Unbounded);
    }
}

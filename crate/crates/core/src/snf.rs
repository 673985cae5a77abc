//! Smith normal form over the integers, with transforms.
//!
//! For an `r × c` matrix `A` this computes unimodular `U` (`r × r`) and `V`
//! (`c × c`) with `U·A·V = D`, where `D` is diagonal, non-negative, and each
//! diagonal entry divides the next. `V⁻¹` is tracked alongside `V` so that
//! callers can map lattice coordinates in both directions.
//!
//! Pivoting always picks the nonzero entry of least absolute value in the
//! remaining block, scanning rows first and taking the leftmost on ties. The
//! transforms are therefore fully determined by the input.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::matrix::IntMatrix;

#[derive(Clone, Debug)]
pub struct SmithForm {
    pub u: IntMatrix,
    pub d: IntMatrix,
    pub v: IntMatrix,
    pub v_inv: IntMatrix,
    pub rank: usize,
}

impl SmithForm {
    /// The nonzero diagonal entries `d₁ | d₂ | ⋯`.
    pub fn invariant_factors(&self) -> Vec<BigInt> {
        (0..self.rank).map(|i| self.d[(i, i)].clone()).collect()
    }

    /// Invariant factors greater than one.
    pub fn torsion(&self) -> Vec<BigInt> {
        self.invariant_factors()
            .into_iter()
            .filter(|x| !x.is_one())
            .collect()
    }

    /// Dimension of the cokernel's free part, `cols − rank`.
    pub fn corank(&self) -> usize {
        self.d.cols() - self.rank
    }
}

fn find_pivot(a: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize, BigInt)> = None;
    for i in k..a.rows() {
        for j in k..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            let ax = x.abs();
            if best.as_ref().is_none_or(|(_, _, b)| ax < *b) {
                let unit = ax.is_one();
                best = Some((i, j, ax));
                if unit {
                    return best.map(|(i, j, _)| (i, j));
                }
            }
        }
    }
    best.map(|(i, j, _)| (i, j))
}

pub fn smith_normal_form(a: &IntMatrix) -> SmithForm {
    let (rows, cols) = (a.rows(), a.cols());
    let mut d = a.clone();
    let mut u = IntMatrix::identity(rows);
    let mut v = IntMatrix::identity(cols);
    let mut v_inv = IntMatrix::identity(cols);

    let row_add = |d: &mut IntMatrix, u: &mut IntMatrix, dst, src, f: &BigInt| {
        d.add_row_multiple(dst, src, f);
        u.add_row_multiple(dst, src, f);
    };
    // V ← V·E and V⁻¹ ← E⁻¹·V⁻¹ for the elementary column operation E.
    let col_add =
        |d: &mut IntMatrix, v: &mut IntMatrix, vi: &mut IntMatrix, dst, src, f: &BigInt| {
            d.add_col_multiple(dst, src, f);
            v.add_col_multiple(dst, src, f);
            vi.add_row_multiple(src, dst, &-f);
        };

    let mut rank = 0;
    for k in 0..rows.min(cols) {
        let Some((pi, pj)) = find_pivot(&d, k) else {
            break;
        };
        d.swap_rows(k, pi);
        u.swap_rows(k, pi);
        d.swap_cols(k, pj);
        v.swap_cols(k, pj);
        v_inv.swap_rows(k, pj);

        loop {
            let mut dirty = false;
            for i in k + 1..rows {
                if d[(i, k)].is_zero() {
                    continue;
                }
                let q = d[(i, k)].div_floor(&d[(k, k)]);
                row_add(&mut d, &mut u, i, k, &-q);
                if !d[(i, k)].is_zero() {
                    dirty = true;
                }
            }
            for j in k + 1..cols {
                if d[(k, j)].is_zero() {
                    continue;
                }
                let q = d[(k, j)].div_floor(&d[(k, k)]);
                col_add(&mut d, &mut v, &mut v_inv, j, k, &-q);
                if !d[(k, j)].is_zero() {
                    dirty = true;
                }
            }
            if !dirty {
                // Pivot row and column are clear; enforce divisibility of the
                // remaining block by folding an offending row into row k.
                let p = d[(k, k)].clone();
                let offender = (k + 1..rows)
                    .find(|&i| (k + 1..cols).any(|j| !d[(i, j)].is_multiple_of(&p)));
                match offender {
                    Some(i) => {
                        row_add(&mut d, &mut u, k, i, &BigInt::one());
                    }
                    None => break,
                }
            }
            // Re-pivot within the row/column cross if a smaller entry appeared.
            if let Some((pi, pj)) = find_pivot_cross(&d, k) {
                d.swap_rows(k, pi);
                u.swap_rows(k, pi);
                d.swap_cols(k, pj);
                v.swap_cols(k, pj);
                v_inv.swap_rows(k, pj);
            }
        }
        if d[(k, k)].is_negative() {
            d.negate_row(k);
            u.negate_row(k);
        }
        rank += 1;
    }

    SmithForm {
        u,
        d,
        v,
        v_inv,
        rank,
    }
}

/// Smallest nonzero entry in row `k` or column `k` (beyond the pivot), if it
/// is strictly smaller than the current pivot.
fn find_pivot_cross(d: &IntMatrix, k: usize) -> Option<(usize, usize)> {
    let mut best = d[(k, k)].abs();
    let mut at = None;
    if best.is_zero() {
        return find_pivot(d, k);
    }
    for i in k + 1..d.rows() {
        let x = d[(i, k)].abs();
        if !x.is_zero() && x < best {
            best = x;
            at = Some((i, k));
        }
    }
    for j in k + 1..d.cols() {
        let x = d[(k, j)].abs();
        if !x.is_zero() && x < best {
            best = x;
            at = Some((k, j));
        }
    }
    at
}

/// Solves `A·x = b` over the integers, returning one solution if any exists.
pub fn solve_integer(a: &IntMatrix, b: &[BigInt]) -> Option<Vec<BigInt>> {
    solve_with(&smith_normal_form(a), b)
}

/// Solves `A·x = b` given a precomputed Smith form of `A`.
pub fn solve_with(snf: &SmithForm, b: &[BigInt]) -> Option<Vec<BigInt>> {
    assert_eq!(snf.u.cols(), b.len());
    // A = U⁻¹ D V⁻¹, so A x = b ⇔ D y = U b with x = V y.
    let ub = snf.u.mul_vec(b);
    let mut y = vec![BigInt::zero(); snf.v.rows()];
    for (i, c) in ub.iter().enumerate() {
        if i < snf.rank {
            let (q, r) = c.div_mod_floor(&snf.d[(i, i)]);
            if !r.is_zero() {
                return None;
            }
            y[i] = q;
        } else if !c.is_zero() {
            return None;
        }
    }
    Some(snf.v.mul_vec(&y))
}

/// A basis of the integer lattice `{x : A·x = 0}` (saturated, since it is
/// cut out by columns of a unimodular matrix).
pub fn integer_kernel(a: &IntMatrix) -> Vec<Vec<BigInt>> {
    let snf = smith_normal_form(a);
    (snf.rank..a.cols()).map(|j| snf.v.column(j)).collect()
}

/// Rank over the rationals.
pub fn rank(a: &IntMatrix) -> usize {
    smith_normal_form(a).rank
}

/// Inverse of a unimodular square matrix, or `None` if `|det| ≠ 1`.
pub fn unimodular_inverse(a: &IntMatrix) -> Option<IntMatrix> {
    assert!(a.is_square());
    let snf = smith_normal_form(a);
    if snf.rank != a.rows() || snf.torsion().iter().any(|x| !x.is_one()) {
        return None;
    }
    // U A V = I  ⇒  A⁻¹ = V U.
    Some(snf.v.mul(&snf.u))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[Vec<i64>]) -> IntMatrix {
        IntMatrix::from_rows(rows)
    }

    fn check(a: &IntMatrix) -> SmithForm {
        let s = smith_normal_form(a);
        assert_eq!(s.u.mul(a).mul(&s.v), s.d);
        assert!(s.u.determinant().abs().is_one());
        assert!(s.v.determinant().abs().is_one());
        assert!(s.v.mul(&s.v_inv).is_identity());
        for i in 0..s.d.rows() {
            for j in 0..s.d.cols() {
                if i != j {
                    assert!(s.d[(i, j)].is_zero());
                }
            }
        }
        let f = s.invariant_factors();
        for w in f.windows(2) {
            assert!(w[1].is_multiple_of(&w[0]));
        }
        s
    }

    #[test]
    fn classical_cases() {
        let s = check(&m(&[vec![2, 0], vec![0, 3]]));
        assert_eq!(s.invariant_factors(), vec![1.into(), 6.into()]);

        let z = IntMatrix::zeros(2, 3);
        let s = check(&z);
        assert_eq!(s.rank, 0);
        assert!(s.u.is_identity() && s.v.is_identity());

        let s = check(&m(&[vec![1, 2], vec![3, 4]]));
        assert_eq!(s.invariant_factors(), vec![1.into(), 2.into()]);
    }

    #[test]
    fn rectangular_and_kernel() {
        let a = m(&[vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&a);
        assert_eq!(s.invariant_factors(), vec![2.into(), 6.into(), 12.into()]);

        let b = m(&[vec![1, -1, 0], vec![0, 1, -1]]);
        let k = integer_kernel(&b);
        assert_eq!(k.len(), 1);
        let v: Vec<i64> = k[0].iter().map(|x| i64::try_from(x).unwrap()).collect();
        assert!(v == vec![1, 1, 1] || v == vec![-1, -1, -1]);
    }

    #[test]
    fn solves_systems() {
        let a = m(&[vec![2, 0], vec![0, 1]]);
        assert!(solve_integer(&a, &[1.into(), 0.into()]).is_none());
        let x = solve_integer(&a, &[4.into(), 3.into()]).unwrap();
        assert_eq!(x, vec![BigInt::from(2), BigInt::from(3)]);
    }

    #[test]
    fn inverse_of_unimodular() {
        let a = m(&[vec![2, 1], vec![1, 1]]);
        let inv = unimodular_inverse(&a).unwrap();
        assert!(a.mul(&inv).is_identity());
        assert!(unimodular_inverse(&m(&[vec![2, 0], vec![0, 1]])).is_none());
    }

    proptest! {
        #[test]
        fn transforms_are_consistent(rows in 1usize..5, cols in 1usize..5,
                                     seed in proptest::collection::vec(-9i64..10, 25)) {
            let data: Vec<Vec<i64>> = (0..rows)
                .map(|i| (0..cols).map(|j| seed[i * 5 + j]).collect())
                .collect();
            let a = m(&data);
            let s = check(&a);
            // Rank agrees with fraction-free determinant test on square inputs.
            if rows == cols {
                prop_assert_eq!(s.rank == rows, !a.determinant().is_zero());
            }
        }
    }
}

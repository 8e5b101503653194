//! Smith normal form by elementary row and column operations.
//!
//! Pivot rule: the nonzero entry of smallest absolute value in the active
//! submatrix, ties broken by lowest `(row, col)`. Remainders are taken with
//! floor division so that every reduction step strictly shrinks the pivot
//! candidate, which bounds the loop.

use std::cmp::Ordering;

use super::{IntScalar, Matrix};

/// `U * M * V = D` with `D` diagonal, `d_1 | d_2 | ...`, nonnegative, zeros last.
/// `u_inv` is the inverse of `u`, kept so that normal forms can be mapped back
/// to the original generators.
#[derive(Clone, Debug)]
pub struct SmithForm<T> {
    pub diag: Vec<T>,
    pub u: Matrix<T>,
    pub u_inv: Matrix<T>,
    pub v: Matrix<T>,
}

impl<T: IntScalar> SmithForm<T> {
    pub fn rank(&self) -> usize {
        self.diag.iter().filter(|d| !d.is_zero()).count()
    }

    /// The diagonal matrix `D` with the shape of the input.
    pub fn d_matrix(&self) -> Matrix<T> {
        Matrix::diagonal(self.u.rows(), self.v.rows(), &self.diag)
    }
}

/// Receives the elementary operations applied to the working matrix.
trait OpSink<T> {
    fn swap_rows(&mut self, a: usize, b: usize);
    fn swap_cols(&mut self, a: usize, b: usize);
    /// row[dst] += c * row[src]
    fn add_row(&mut self, dst: usize, src: usize, c: &T);
    /// col[dst] += c * col[src]
    fn add_col(&mut self, dst: usize, src: usize, c: &T);
    fn negate_row(&mut self, i: usize);
}

struct Discard;

impl<T> OpSink<T> for Discard {
    fn swap_rows(&mut self, _: usize, _: usize) {}
    fn swap_cols(&mut self, _: usize, _: usize) {}
    fn add_row(&mut self, _: usize, _: usize, _: &T) {}
    fn add_col(&mut self, _: usize, _: usize, _: &T) {}
    fn negate_row(&mut self, _: usize) {}
}

struct Transforms<T> {
    u: Matrix<T>,
    u_inv: Matrix<T>,
    v: Matrix<T>,
}

impl<T: IntScalar> OpSink<T> for Transforms<T> {
    fn swap_rows(&mut self, a: usize, b: usize) {
        self.u.swap_rows(a, b);
        self.u_inv.swap_cols(a, b);
    }
    fn swap_cols(&mut self, a: usize, b: usize) {
        self.v.swap_cols(a, b);
    }
    fn add_row(&mut self, dst: usize, src: usize, c: &T) {
        // E = I + c e_dst e_src^T, E^{-1} = I - c e_dst e_src^T
        self.u.add_row_multiple(dst, src, c);
        self.u_inv.add_col_multiple(src, dst, &-c.clone());
    }
    fn add_col(&mut self, dst: usize, src: usize, c: &T) {
        self.v.add_col_multiple(dst, src, c);
    }
    fn negate_row(&mut self, i: usize) {
        self.u.negate_row(i);
        self.u_inv.negate_col(i);
    }
}

/// Smith normal form with both unimodular transforms.
pub fn smith_normal_form<T: IntScalar>(m: &Matrix<T>) -> SmithForm<T> {
    let mut sink = Transforms {
        u: Matrix::identity(m.rows()),
        u_inv: Matrix::identity(m.rows()),
        v: Matrix::identity(m.cols()),
    };
    let diag = eliminate(m.clone(), &mut sink);
    SmithForm {
        diag,
        u: sink.u,
        u_inv: sink.u_inv,
        v: sink.v,
    }
}

/// Diagonal of the Smith normal form only; skips transform bookkeeping.
pub fn smith_diagonal<T: IntScalar>(m: &Matrix<T>) -> Vec<T> {
    eliminate(m.clone(), &mut Discard)
}

fn find_pivot<T: IntScalar>(a: &Matrix<T>, t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    for i in t..a.rows() {
        for j in t..a.cols() {
            let x = &a[(i, j)];
            if x.is_zero() {
                continue;
            }
            match best {
                None => best = Some((i, j)),
                Some(b) => {
                    // strict comparison keeps the lowest (row, col) on ties
                    if x.abs_cmp(&a[b]) == Ordering::Less {
                        best = Some((i, j));
                    }
                }
            }
            if x.is_unit() {
                // first unit in scan order: nothing smaller can follow
                return best;
            }
        }
    }
    best
}

fn eliminate<T: IntScalar, S: OpSink<T>>(mut a: Matrix<T>, sink: &mut S) -> Vec<T> {
    let r = a.rows();
    let c = a.cols();
    let n = r.min(c);
    let mut diag = Vec::with_capacity(n);

    'outer: for t in 0..n {
        loop {
            let Some((pi, pj)) = find_pivot(&a, t) else {
                break 'outer;
            };
            a.swap_rows(t, pi);
            sink.swap_rows(t, pi);
            a.swap_cols(t, pj);
            sink.swap_cols(t, pj);

            let mut clean = true;
            for i in t + 1..r {
                if a[(i, t)].is_zero() {
                    continue;
                }
                let q = a[(i, t)].div_floor(&a[(t, t)]);
                let neg_q = -q;
                a.add_row_multiple(i, t, &neg_q);
                sink.add_row(i, t, &neg_q);
                if !a[(i, t)].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..c {
                if a[(t, j)].is_zero() {
                    continue;
                }
                let q = a[(t, j)].div_floor(&a[(t, t)]);
                let neg_q = -q;
                a.add_col_multiple(j, t, &neg_q);
                sink.add_col(j, t, &neg_q);
                if !a[(t, j)].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }

            // the pivot must divide the whole remaining block
            let pivot = a[(t, t)].clone();
            let offending = (t + 1..r).find(|&i| {
                (t + 1..c).any(|j| !a[(i, j)].is_zero() && !a[(i, j)].is_multiple_of(&pivot))
            });
            match offending {
                Some(i) => {
                    let one = T::one();
                    a.add_row_multiple(t, i, &one);
                    sink.add_row(t, i, &one);
                }
                None => break,
            }
        }
        if a[(t, t)].is_negative() {
            a.negate_row(t);
            sink.negate_row(t);
        }
        diag.push(a[(t, t)].clone());
    }
    diag.resize(n, T::zero());
    diag
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn check<T: IntScalar>(m: &Matrix<T>) -> SmithForm<T> {
        let s = smith_normal_form(m);
        assert_eq!(s.u.mul(m).mul(&s.v), s.d_matrix());
        assert!(s.u.mul(&s.u_inv).is_identity());
        for w in s.diag.windows(2) {
            if !w[1].is_zero() {
                assert!(!w[0].is_zero() && w[1].is_multiple_of(&w[0]));
            }
        }
        s
    }

    #[test]
    fn diag_2_3_becomes_1_6() {
        let s = check(&Matrix::<i64>::from_rows(vec![vec![2, 0], vec![0, 3]]));
        assert_eq!(s.diag, vec![1, 6]);
    }

    #[test]
    fn diag_4_2_reorders() {
        let s = check(&Matrix::<i64>::from_rows(vec![vec![4, 0], vec![0, 2]]));
        assert_eq!(s.diag, vec![2, 4]);
    }

    #[test]
    fn zero_one_by_one() {
        let s = check(&Matrix::<BigInt>::from_i64_rows(&[&[0]]));
        assert_eq!(s.diag, vec![BigInt::from(0)]);
        assert_eq!(s.rank(), 0);
    }

    #[test]
    fn rectangular_and_negative() {
        let m = Matrix::<i64>::from_rows(vec![vec![2, 4, 4], vec![-6, 6, 12], vec![10, -4, -16]]);
        let s = check(&m);
        assert_eq!(s.diag, vec![2, 6, 12]);
        let m = Matrix::<i64>::from_rows(vec![vec![6, 10, 15]]);
        assert_eq!(check(&m).diag, vec![1]);
    }

    #[test]
    fn diagonal_only_matches_full() {
        let m = Matrix::<i64>::from_rows(vec![vec![3, 9, 27], vec![0, 9, 1], vec![5, 5, 5]]);
        assert_eq!(smith_diagonal(&m), smith_normal_form(&m).diag);
    }

    #[test]
    fn deterministic() {
        let m = Matrix::<i64>::from_rows(vec![vec![4, 6], vec![6, 9], vec![2, 2]]);
        let a = smith_normal_form(&m);
        let b = smith_normal_form(&m);
        assert_eq!(a.u, b.u);
        assert_eq!(a.v, b.v);
    }
}

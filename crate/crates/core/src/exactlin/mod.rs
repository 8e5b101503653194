//! Exact integer linear algebra: Smith normal form, cokernels and presented
//! finite abelian groups.

mod invariant;
mod matrix;
mod presented;
mod snf;

use std::cmp::Ordering;
use std::fmt::{Debug, Display};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{FromPrimitive, Signed};

pub use invariant::InvariantFactorGroup;
pub use matrix::Matrix;
pub use presented::PresentedAbGroup;
pub use snf::{smith_diagonal, smith_normal_form, SmithForm};

/// Exact integer scalar usable as a matrix entry.
///
/// Fixed-width types are accepted for tests and small inputs; everything that
/// feeds a structure computation uses [`BigInt`].
pub trait IntScalar:
    Integer + Signed + Clone + Debug + Display + FromPrimitive + Send + Sync
{
    fn abs_cmp(&self, other: &Self) -> Ordering;

    fn is_unit(&self) -> bool {
        self.is_one() || (-self.clone()).is_one()
    }
}

macro_rules! prim_scalar {
    ($($t:ty),*) => {$(
        impl IntScalar for $t {
            fn abs_cmp(&self, other: &Self) -> Ordering {
                self.unsigned_abs().cmp(&other.unsigned_abs())
            }
        }
    )*};
}
prim_scalar!(i32, i64, i128);

impl IntScalar for BigInt {
    fn abs_cmp(&self, other: &Self) -> Ordering {
        self.magnitude().cmp(other.magnitude())
    }
}

/// Invariants of `Z^rows / column-span(m)`.
pub fn cokernel<T: IntScalar>(m: &Matrix<T>) -> InvariantFactorGroup
where
    BigInt: From<T>,
{
    let mut free_rank = 0usize;
    let mut orders = Vec::new();
    for (rows, cols) in block_components(m) {
        if cols.is_empty() {
            free_rank += rows.len();
            continue;
        }
        let sub = m.select(&rows, &cols);
        let diag = smith_diagonal(&sub);
        free_rank += rows.len() - diag.iter().filter(|d| !d.is_zero()).count();
        orders.extend(diag.into_iter().filter(|d| !d.is_zero()).map(BigInt::from));
    }
    InvariantFactorGroup::from_cyclic_orders(&orders, free_rank)
}

/// Cokernel invariants from one dense elimination of the whole matrix.
pub fn cokernel_dense<T: IntScalar>(m: &Matrix<T>) -> InvariantFactorGroup
where
    BigInt: From<T>,
{
    let diag = smith_diagonal(m);
    let rank = diag.iter().filter(|d| !d.is_zero()).count();
    let orders: Vec<BigInt> = diag
        .into_iter()
        .filter(|d| !d.is_zero())
        .map(BigInt::from)
        .collect();
    InvariantFactorGroup::from_cyclic_orders(&orders, m.rows() - rank)
}

/// Splits a matrix into independent diagonal blocks: connected components of
/// the bipartite row/column graph with an edge per nonzero entry. Rows that
/// are entirely zero come back as singleton blocks with no columns; zero
/// columns are dropped. Blocks are ordered by their smallest row index.
pub fn block_components<T: IntScalar>(m: &Matrix<T>) -> Vec<(Vec<usize>, Vec<usize>)> {
    let r = m.rows();
    let c = m.cols();
    let mut parent: Vec<usize> = (0..r + c).collect();
    fn find(parent: &mut [usize], mut x: usize) -> usize {
        while parent[x] != x {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        x
    }
    for i in 0..r {
        for j in 0..c {
            if !m[(i, j)].is_zero() {
                let a = find(&mut parent, i);
                let b = find(&mut parent, r + j);
                if a != b {
                    parent[a.max(b)] = a.min(b);
                }
            }
        }
    }
    let mut index_of_root = vec![usize::MAX; r + c];
    let mut blocks: Vec<(Vec<usize>, Vec<usize>)> = Vec::new();
    for i in 0..r {
        let root = find(&mut parent, i);
        if index_of_root[root] == usize::MAX {
            index_of_root[root] = blocks.len();
            blocks.push((Vec::new(), Vec::new()));
        }
        blocks[index_of_root[root]].0.push(i);
    }
    for j in 0..c {
        let root = find(&mut parent, r + j);
        let idx = index_of_root[root];
        if idx != usize::MAX {
            blocks[idx].1.push(j);
        }
    }
    blocks
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ifg(factors: &[u64], free: usize) -> InvariantFactorGroup {
        let f: Vec<BigInt> = factors.iter().map(|&x| BigInt::from(x)).collect();
        InvariantFactorGroup::from_cyclic_orders(&f, free)
    }

    #[test]
    fn cokernel_examples() {
        let m = Matrix::from_i64_rows(&[&[2, 0], &[0, 2]]);
        assert_eq!(cokernel(&m), ifg(&[2, 2], 0));
        let empty = Matrix::<BigInt>::zeros(1, 0);
        assert_eq!(cokernel(&empty), ifg(&[], 1));
        let zero = Matrix::from_i64_rows(&[&[0]]);
        assert_eq!(cokernel(&zero), ifg(&[], 1));
    }

    /// C4 x C2 modulo <(2,0)>, checked against the 8-element coset count.
    #[test]
    fn cokernel_c4xc2_mod_2_0() {
        let m = Matrix::from_i64_rows(&[&[4, 0, 2], &[0, 2, 0]]);
        let got = cokernel(&m);
        assert_eq!(got, ifg(&[2, 2], 0));

        // brute force: elements of C4 x C2, identify a ~ a + (2,0)
        let mut classes = std::collections::BTreeSet::new();
        let mut max_order = 1;
        for a in 0..4 {
            for b in 0..2 {
                let rep = (a % 2, b);
                classes.insert(rep);
                // order of the class of (a,b) in the quotient
                let mut k = 1;
                while ((k * a) % 2, (k * b) % 2) != (0, 0) {
                    k += 1;
                }
                max_order = max_order.max(k);
            }
        }
        assert_eq!(classes.len(), 4);
        assert_eq!(max_order, 2);
    }

    #[test]
    fn components_split_block_diagonal() {
        let m = Matrix::from_i64_rows(&[&[2, 0, 0], &[0, 0, 3], &[0, 0, 0]]);
        let blocks = block_components(&m);
        assert_eq!(
            blocks,
            vec![(vec![0], vec![0]), (vec![1], vec![2]), (vec![2], vec![])]
        );
        assert_eq!(cokernel(&m), cokernel_dense(&m));
    }
}

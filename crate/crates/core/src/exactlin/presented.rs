use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use super::{
    block_components, cokernel, smith_normal_form, InvariantFactorGroup, Matrix, SmithForm,
};
use crate::error::{Error, Result};

/// One independent diagonal block of the relation matrix.
#[derive(Clone, Debug)]
struct Block {
    rows: Vec<usize>,
    snf: SmithForm<BigInt>,
}

impl Block {
    /// Invariant of SNF coordinate `t`: `Some(d)` torsion (d may be 1),
    /// `None` free.
    fn modulus(&self, t: usize) -> Option<&BigInt> {
        self.snf.diag.get(t).filter(|d| !d.is_zero())
    }
}

/// Abelian group given by generators and relations: `Z^gens / column-span(R)`.
///
/// The relation matrix is split into independent blocks and each block is put
/// in Smith normal form, which yields the structure, a canonical normal form
/// for coordinate vectors, and element and subgroup orders.
#[derive(Clone, Debug)]
pub struct PresentedAbGroup {
    labels: Vec<String>,
    relations: Matrix<BigInt>,
    blocks: Vec<Block>,
    structure: InvariantFactorGroup,
}

/// Coordinate of an element along one cyclic summand of the SNF basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Component {
    pub modulus: Option<BigInt>,
    pub value: BigInt,
}

impl PresentedAbGroup {
    pub fn new(labels: Vec<String>, relations: Matrix<BigInt>) -> Self {
        assert_eq!(labels.len(), relations.rows(), "one label per generator");
        let blocks: Vec<Block> = block_components(&relations)
            .into_iter()
            .map(|(rows, cols)| {
                let sub = relations.select(&rows, &cols);
                Block {
                    snf: smith_normal_form(&sub),
                    rows,
                }
            })
            .collect();
        let mut orders = Vec::new();
        let mut free = 0;
        for b in &blocks {
            for t in 0..b.rows.len() {
                match b.modulus(t) {
                    Some(d) => orders.push(d.clone()),
                    None => free += 1,
                }
            }
        }
        let structure = InvariantFactorGroup::from_cyclic_orders(&orders, free);
        PresentedAbGroup {
            labels,
            relations,
            blocks,
            structure,
        }
    }

    /// Builds the presentation from relation vectors (one per relation).
    pub fn from_relation_vectors(labels: Vec<String>, relations: &[Vec<BigInt>]) -> Self {
        let m = Matrix::from_columns(labels.len(), relations);
        Self::new(labels, m)
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn generator_count(&self) -> usize {
        self.labels.len()
    }

    pub fn relation_count(&self) -> usize {
        self.relations.cols()
    }

    pub fn relations(&self) -> &Matrix<BigInt> {
        &self.relations
    }

    pub fn relation_vector(&self, j: usize) -> Vec<BigInt> {
        self.relations.column(j)
    }

    pub fn structure(&self) -> &InvariantFactorGroup {
        &self.structure
    }

    pub fn order(&self) -> Option<BigInt> {
        self.structure.order()
    }

    fn check_len(&self, v: &[BigInt]) -> Result<()> {
        if v.len() != self.labels.len() {
            return Err(Error::LengthMismatch {
                expected: self.labels.len(),
                got: v.len(),
            });
        }
        Ok(())
    }

    fn snf_coordinates(block: &Block, v: &[BigInt]) -> Vec<BigInt> {
        let local: Vec<BigInt> = block.rows.iter().map(|&i| v[i].clone()).collect();
        block.snf.u.mul_vec(&local)
    }

    /// Canonical representative of the class of `v`: two vectors reduce to the
    /// same result iff their difference is a combination of relations.
    pub fn reduce(&self, v: &[BigInt]) -> Result<Vec<BigInt>> {
        self.check_len(v)?;
        let mut out = vec![BigInt::zero(); v.len()];
        for b in &self.blocks {
            let mut y = Self::snf_coordinates(b, v);
            for (t, yt) in y.iter_mut().enumerate() {
                if let Some(d) = b.modulus(t) {
                    *yt = yt.mod_floor(d);
                }
            }
            let back = b.snf.u_inv.mul_vec(&y);
            for (&i, x) in b.rows.iter().zip(back) {
                out[i] = x;
            }
        }
        Ok(out)
    }

    pub fn is_zero(&self, v: &[BigInt]) -> Result<bool> {
        Ok(self.components(v)?.iter().all(|c| c.value.is_zero()))
    }

    pub fn equivalent(&self, a: &[BigInt], b: &[BigInt]) -> Result<bool> {
        self.check_len(a)?;
        self.check_len(b)?;
        let diff: Vec<BigInt> = a.iter().zip(b).map(|(x, y)| x - y).collect();
        self.is_zero(&diff)
    }

    /// Coordinates of `v` along the nontrivial cyclic summands.
    pub(crate) fn components(&self, v: &[BigInt]) -> Result<Vec<Component>> {
        self.check_len(v)?;
        let mut out = Vec::new();
        for b in &self.blocks {
            let y = Self::snf_coordinates(b, v);
            for (t, yt) in y.into_iter().enumerate() {
                match b.modulus(t) {
                    Some(d) if d.is_one() => {}
                    Some(d) => out.push(Component {
                        modulus: Some(d.clone()),
                        value: yt.mod_floor(d),
                    }),
                    None => out.push(Component {
                        modulus: None,
                        value: yt,
                    }),
                }
            }
        }
        Ok(out)
    }

    /// Order of the class of `v`; `None` if it has infinite order.
    pub fn element_order(&self, v: &[BigInt]) -> Result<Option<BigInt>> {
        let mut order = BigInt::one();
        for c in self.components(v)? {
            match c.modulus {
                None if !c.value.is_zero() => return Ok(None),
                None => {}
                Some(d) => {
                    let o = &d / d.gcd(&c.value);
                    order = order.lcm(&o);
                }
            }
        }
        Ok(Some(order))
    }

    /// Order of the subgroup generated by the classes of `gens`.
    pub fn subgroup_order(&self, gens: &[Vec<BigInt>]) -> Result<BigInt> {
        let comps: Vec<Vec<Component>> = gens
            .iter()
            .map(|g| self.components(g))
            .collect::<Result<_>>()?;
        let width = comps.first().map_or(0, Vec::len);
        // keep only summands that some generator touches
        let mut moduli = Vec::new();
        let mut rows: Vec<Vec<BigInt>> = Vec::new();
        for k in 0..width {
            let touched = comps.iter().any(|c| !c[k].value.is_zero());
            if !touched {
                continue;
            }
            let Some(d) = comps[0][k].modulus.clone() else {
                return Err(Error::InfiniteSubgroup);
            };
            rows.push(comps.iter().map(|c| c[k].value.clone()).collect());
            moduli.push(d);
        }
        if moduli.is_empty() {
            return Ok(BigInt::one());
        }
        // subgroup order = |(+) Z/d| / |coker [diag(d) | Y]|
        let m = moduli.len();
        let mut mat = Matrix::<BigInt>::zeros(m, m + gens.len());
        for (i, d) in moduli.iter().enumerate() {
            mat[(i, i)] = d.clone();
            for (j, y) in rows[i].iter().enumerate() {
                mat[(i, m + j)] = y.clone();
            }
        }
        let quotient = cokernel(&mat)
            .order()
            .expect("diagonal columns make the quotient finite");
        let ambient = moduli.iter().fold(BigInt::one(), |acc, d| acc * d);
        Ok(ambient / quotient)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(x: &[i64]) -> Vec<BigInt> {
        x.iter().map(|&a| BigInt::from(a)).collect()
    }

    fn labels(n: usize) -> Vec<String> {
        (0..n).map(|i| format!("e{i}")).collect()
    }

    /// C4 x C2 presented with an extra redundant generator tied to the first.
    fn sample() -> PresentedAbGroup {
        PresentedAbGroup::from_relation_vectors(
            labels(3),
            &[v(&[4, 0, 0]), v(&[0, 2, 0]), v(&[1, 0, -1])],
        )
    }

    #[test]
    fn structure_and_order() {
        let p = sample();
        assert_eq!(p.structure().factors(), v(&[2, 4]).as_slice());
        assert_eq!(p.order(), Some(BigInt::from(8)));
    }

    #[test]
    fn relations_reduce_to_zero() {
        let p = sample();
        for j in 0..p.relation_count() {
            let r = p.relation_vector(j);
            assert!(p.is_zero(&r).unwrap());
            assert!(p.reduce(&r).unwrap().iter().all(Zero::is_zero));
        }
    }

    #[test]
    fn reduce_is_idempotent_and_relation_invariant() {
        let p = sample();
        let x = v(&[7, -3, 5]);
        let r = p.reduce(&x).unwrap();
        assert_eq!(p.reduce(&r).unwrap(), r);
        let shifted: Vec<BigInt> = x
            .iter()
            .zip(p.relation_vector(2))
            .map(|(a, b)| a + b * 3)
            .collect();
        assert_eq!(p.reduce(&shifted).unwrap(), r);
        assert!(p.reduce(&v(&[1, 2])).is_err());
    }

    #[test]
    fn orders() {
        let p = sample();
        assert_eq!(
            p.element_order(&v(&[1, 0, 0])).unwrap(),
            Some(BigInt::from(4))
        );
        assert_eq!(
            p.element_order(&v(&[0, 0, 2])).unwrap(),
            Some(BigInt::from(2))
        );
        assert_eq!(
            p.subgroup_order(&[p.relation_vector(0)]).unwrap(),
            BigInt::from(1)
        );
        let all = vec![v(&[1, 0, 0]), v(&[0, 1, 0]), v(&[0, 0, 1])];
        assert_eq!(p.subgroup_order(&all).unwrap(), BigInt::from(8));
        assert_eq!(p.subgroup_order(&[v(&[2, 1, 0])]).unwrap(), BigInt::from(2));
    }

    #[test]
    fn free_part() {
        let p = PresentedAbGroup::from_relation_vectors(labels(2), &[v(&[3, 0])]);
        assert_eq!(p.structure().free_rank(), 1);
        assert_eq!(p.element_order(&v(&[0, 1])).unwrap(), None);
        assert!(matches!(
            p.subgroup_order(&[v(&[0, 1])]),
            Err(Error::InfiniteSubgroup)
        ));
        assert_eq!(p.subgroup_order(&[v(&[1, 0])]).unwrap(), BigInt::from(3));
    }
}

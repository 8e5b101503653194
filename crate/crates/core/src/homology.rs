//! Presentations of `HC_1(Z_p[G])`, `H̃_2(G)` and `Ω/dI` as finite abelian groups.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::error::Result;
use crate::exactlin::{InvariantFactorGroup, PresentedAbGroup};
use crate::pgroups::{direct_sum, max_order, GroupElement, PGroupShape};

fn big(x: u64) -> BigInt {
    BigInt::from(x)
}

/// `HC_1 = (G ⊗ Z_p[G]) / ⟨g ⊗ λg⟩` on generators `(h, i)`: the `i`-th
/// coordinate of the copy of `G` sitting over the basis element `h`.
#[derive(Clone, Debug)]
pub struct Hc1Context {
    shape: PGroupShape,
    elements: Vec<GroupElement>,
    group: PresentedAbGroup,
}

impl Hc1Context {
    pub fn new(shape: &PGroupShape) -> Result<Self> {
        let elements = shape.enumerate_capped(max_order())?;
        let k = shape.rank();
        let n = elements.len();
        let labels = elements
            .iter()
            .flat_map(|h| (0..k).map(move |i| (h, i)))
            .map(|(h, i)| format!("g{i}@{}", shape.word(h)))
            .collect::<Vec<_>>();
        let mut rels = Vec::with_capacity(n * k + n);
        for h in 0..n {
            for (i, &m) in shape.moduli().iter().enumerate() {
                let mut v = vec![BigInt::zero(); n * k];
                v[h * k + i] = big(m);
                rels.push(v);
            }
        }
        // g ⊗ g
        for (idx, g) in elements.iter().enumerate() {
            let mut v = vec![BigInt::zero(); n * k];
            for (i, &a) in g.exponents().iter().enumerate() {
                v[idx * k + i] = big(a);
            }
            rels.push(v);
        }
        Ok(Hc1Context {
            shape: shape.clone(),
            group: PresentedAbGroup::from_relation_vectors(labels, &rels),
            elements,
        })
    }

    pub fn shape(&self) -> &PGroupShape {
        &self.shape
    }

    pub fn group(&self) -> &PresentedAbGroup {
        &self.group
    }

    pub fn structure(&self) -> &InvariantFactorGroup {
        self.group.structure()
    }

    pub fn dim(&self) -> usize {
        self.group.generator_count()
    }

    /// Coordinates of `g ⊗ λh`.
    pub fn tensor(&self, g: &GroupElement, h: &GroupElement, lambda: &BigInt) -> Vec<BigInt> {
        let k = self.shape.rank();
        let mut v = vec![BigInt::zero(); self.dim()];
        let hi = self.shape.index_of(h);
        for (i, &a) in g.exponents().iter().enumerate() {
            v[hi * k + i] = lambda * big(a);
        }
        v
    }

    /// Coordinates of `g ⊗ x` for `x = Σ x_h h` (coefficients in enumeration order).
    pub fn tensor_elem(&self, g: &GroupElement, x: &[BigInt]) -> Vec<BigInt> {
        let k = self.shape.rank();
        let mut v = vec![BigInt::zero(); self.dim()];
        for (hi, c) in x.iter().enumerate() {
            for (i, &a) in g.exponents().iter().enumerate() {
                v[hi * k + i] += c * big(a);
            }
        }
        v
    }

    /// Generator `(h, i)` as the pair `(h, i)`.
    pub fn basis(&self, j: usize) -> (&GroupElement, usize) {
        let k = self.shape.rank();
        (&self.elements[j / k], j % k)
    }
}

pub fn hc1_presentation(shape: &PGroupShape) -> Result<Hc1Context> {
    Hc1Context::new(shape)
}

/// `⊕_{g ∈ G} G/⟨g⟩`.
pub fn hc1_closed(shape: &PGroupShape) -> Result<InvariantFactorGroup> {
    let parts = shape
        .enumerate_capped(max_order())?
        .iter()
        .map(|g| shape.quotient_by_cyclic(g))
        .collect::<Vec<_>>();
    Ok(direct_sum(&parts))
}

/// `H̃_2(G) = G ⊗ G / ⟨g ⊗ h + h ⊗ g⟩` on generators `g_i ⊗ g_j`.
#[derive(Clone, Debug)]
pub struct H2Context {
    shape: PGroupShape,
    group: PresentedAbGroup,
}

impl H2Context {
    pub fn new(shape: &PGroupShape) -> Self {
        let k = shape.rank();
        let e = shape.exponents();
        let labels = (0..k * k)
            .map(|x| format!("g{}^g{}", x / k, x % k))
            .collect::<Vec<_>>();
        let mut rels = Vec::new();
        for i in 0..k {
            for j in 0..k {
                let mut v = vec![BigInt::zero(); k * k];
                v[i * k + j] = BigInt::from(shape.p()).pow(e[i].min(e[j]));
                rels.push(v);
            }
        }
        for i in 0..k {
            for j in i..k {
                let mut v = vec![BigInt::zero(); k * k];
                v[i * k + j] += 1;
                v[j * k + i] += 1;
                rels.push(v);
            }
        }
        H2Context {
            shape: shape.clone(),
            group: PresentedAbGroup::from_relation_vectors(labels, &rels),
        }
    }

    pub fn shape(&self) -> &PGroupShape {
        &self.shape
    }

    pub fn group(&self) -> &PresentedAbGroup {
        &self.group
    }

    pub fn structure(&self) -> &InvariantFactorGroup {
        self.group.structure()
    }

    pub fn dim(&self) -> usize {
        self.group.generator_count()
    }

    /// Coordinates of `g ∧̃ h`.
    pub fn wedge(&self, g: &GroupElement, h: &GroupElement) -> Vec<BigInt> {
        let k = self.shape.rank();
        let mut v = vec![BigInt::zero(); k * k];
        for (i, &a) in g.exponents().iter().enumerate() {
            for (j, &b) in h.exponents().iter().enumerate() {
                v[i * k + j] = big(a) * big(b);
            }
        }
        v
    }
}

pub fn h2_tilde(shape: &PGroupShape) -> H2Context {
    H2Context::new(shape)
}

/// `H̃_2` from the full relation set `{g⊗h + h⊗g : g, h ∈ G}` plus torsion.
pub fn h2_full_relations(shape: &PGroupShape) -> Result<InvariantFactorGroup> {
    let ctx = H2Context::new(shape);
    let els = shape.enumerate_capped(max_order())?;
    let k = shape.rank();
    let mut rels: Vec<Vec<BigInt>> = (0..k * k).map(|c| ctx.group.relation_vector(c)).collect();
    for g in &els {
        for h in &els {
            let a = ctx.wedge(g, h);
            let b = ctx.wedge(h, g);
            rels.push(a.iter().zip(&b).map(|(x, y)| x + y).collect());
        }
    }
    let full = PresentedAbGroup::from_relation_vectors(ctx.group.labels().to_vec(), &rels);
    Ok(full.structure().clone())
}

/// `Ω_{R/k} / dI` on generators `h·dg_i`, with `d(g)` expanded by the
/// product rule.
#[derive(Clone, Debug)]
pub struct KaehlerContext {
    shape: PGroupShape,
    group: PresentedAbGroup,
}

impl KaehlerContext {
    pub fn new(shape: &PGroupShape) -> Result<Self> {
        let elements = shape.enumerate_capped(max_order())?;
        let k = shape.rank();
        let n = elements.len();
        let labels = elements
            .iter()
            .flat_map(|h| (0..k).map(move |i| (h, i)))
            .map(|(h, i)| format!("{}*dg{i}", shape.word(h)))
            .collect::<Vec<_>>();
        let mut rels = Vec::with_capacity(n * k + n);
        for h in 0..n {
            for (i, &m) in shape.moduli().iter().enumerate() {
                let mut v = vec![BigInt::zero(); n * k];
                v[h * k + i] = big(m);
                rels.push(v);
            }
        }
        let gens = shape.generators();
        for g in &elements {
            // d(prod g_i^{a_i}) = Σ a_i (g g_i^{-1}) dg_i
            let mut v = vec![BigInt::zero(); n * k];
            for (i, &a) in g.exponents().iter().enumerate() {
                if a == 0 {
                    continue;
                }
                let h = shape.mul(g, &shape.inverse(&gens[i]));
                v[shape.index_of(&h) * k + i] += big(a);
            }
            rels.push(v);
        }
        Ok(KaehlerContext {
            shape: shape.clone(),
            group: PresentedAbGroup::from_relation_vectors(labels, &rels),
        })
    }

    pub fn shape(&self) -> &PGroupShape {
        &self.shape
    }

    pub fn group(&self) -> &PresentedAbGroup {
        &self.group
    }

    pub fn structure(&self) -> &InvariantFactorGroup {
        self.group.structure()
    }

    /// Image of an `HC_1` coordinate vector: `(h, i) ↦ (h g_i^{-1})·dg_i`,
    /// so that `g_i ⊗ g_i ↦ dg_i`.
    pub fn from_hc1(&self, v: &[BigInt]) -> Vec<BigInt> {
        let k = self.shape.rank();
        let mut out = vec![BigInt::zero(); v.len()];
        let gens = self.shape.generators();
        for (j, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (h, i) = (self.shape.element_at(j / k), j % k);
            let t = self.shape.mul(&h, &self.shape.inverse(&gens[i]));
            out[self.shape.index_of(&t) * k + i] += c;
        }
        out
    }
}

pub fn kaehler_mod_di(shape: &PGroupShape) -> Result<InvariantFactorGroup> {
    Ok(KaehlerContext::new(shape)?.structure().clone())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> PGroupShape {
        s.parse().unwrap()
    }

    fn chain(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| big(x)).collect()
    }

    #[test]
    fn hc1_examples() {
        assert_eq!(
            hc1_presentation(&shape("C2"))
                .unwrap()
                .structure()
                .factors(),
            chain(&[2])
        );
        assert_eq!(
            hc1_presentation(&shape("C4"))
                .unwrap()
                .structure()
                .factors(),
            chain(&[2, 4])
        );
        assert!(hc1_presentation(&shape("3:[]"))
            .unwrap()
            .structure()
            .is_trivial());
        assert_eq!(
            hc1_closed(&shape("C2xC2")).unwrap().factors(),
            chain(&[2, 2, 2, 2, 2])
        );
        assert_eq!(hc1_closed(&shape("C4")).unwrap().factors(), chain(&[2, 4]));
        assert_eq!(hc1_closed(&shape("C5")).unwrap().factors(), chain(&[5]));
    }

    #[test]
    fn h2_examples() {
        assert_eq!(h2_tilde(&shape("C2")).structure().factors(), chain(&[2]));
        assert!(h2_tilde(&shape("C3")).structure().is_trivial());
        assert_eq!(
            h2_tilde(&shape("C2xC2")).structure().factors(),
            chain(&[2, 2, 2])
        );
    }

    #[test]
    fn h2_full_relation_oracle() {
        for s in [
            "C2", "C4", "C2xC2", "C8", "C4xC2", "C2xC2xC2", "C3", "C9", "C3xC3", "C4xC4",
        ] {
            let g = shape(s);
            assert_eq!(
                &h2_full_relations(&g).unwrap(),
                h2_tilde(&g).structure(),
                "{s}"
            );
        }
    }

    #[test]
    fn kaehler_examples() {
        assert_eq!(kaehler_mod_di(&shape("C2")).unwrap().factors(), chain(&[2]));
        let g = shape("C4xC2");
        assert_eq!(kaehler_mod_di(&g).unwrap(), hc1_closed(&g).unwrap());
        assert!(kaehler_mod_di(&shape("2:[]")).unwrap().is_trivial());
    }

    #[test]
    fn hc1_relations_map_to_kaehler_relations() {
        let g = shape("C4xC2");
        let hc1 = Hc1Context::new(&g).unwrap();
        let kd = KaehlerContext::new(&g).unwrap();
        for j in 0..hc1.group().relation_count() {
            let img = kd.from_hc1(&hc1.group().relation_vector(j));
            assert!(kd.group().is_zero(&img).unwrap());
        }
    }

    #[test]
    fn expanded_diagonal_relation() {
        // (g1 g2) ⊗ λ g1 g2 = g1 ⊗ λ g1 g2 + g2 ⊗ λ g1 g2 vanishes
        let g = shape("C4xC2");
        let ctx = Hc1Context::new(&g).unwrap();
        let els = g.enumerate().unwrap();
        let lambda = big(5);
        for a in &els {
            for b in &els {
                let ab = g.mul(a, b);
                let x = ctx.tensor(a, &ab, &lambda);
                let y = ctx.tensor(b, &ab, &lambda);
                let s: Vec<BigInt> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
                assert!(ctx.group().is_zero(&s).unwrap());
            }
        }
    }

    #[test]
    fn swapped_cross_terms_do_not_vanish() {
        // g1 ⊗ g2 + g2 ⊗ g1 lives in the copies over g2 and g1 separately
        let g = shape("C2xC2");
        let ctx = Hc1Context::new(&g).unwrap();
        let (a, b) = (g.generator(0), g.generator(1));
        let one = big(1);
        let x = ctx.tensor(&a, &b, &one);
        let y = ctx.tensor(&b, &a, &one);
        let s: Vec<BigInt> = x.iter().zip(&y).map(|(p, q)| p + q).collect();
        assert!(!ctx.group().is_zero(&s).unwrap());
    }
}

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

/// Finitely generated abelian group in canonical form
/// `Z^free_rank + Z/d_1 + ... + Z/d_r` with `1 < d_1 | d_2 | ... | d_r`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InvariantFactorGroup {
    free_rank: usize,
    factors: Vec<BigInt>,
}

impl InvariantFactorGroup {
    pub fn trivial() -> Self {
        InvariantFactorGroup {
            free_rank: 0,
            factors: Vec::new(),
        }
    }

    /// Canonical form of `Z^free_rank + (+)_i Z/orders[i]`. Orders need not form
    /// a chain; entries equal to 1 vanish, a 0 entry counts as a free summand.
    pub fn from_cyclic_orders(orders: &[BigInt], free_rank: usize) -> Self {
        let mut free_rank = free_rank;
        // prime -> exponents of its primary summands
        let mut primary: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        let mut leftovers = Vec::new();
        for d in orders {
            let d = d.abs();
            if d.is_zero() {
                free_rank += 1;
                continue;
            }
            match d.to_u64() {
                Some(x) => {
                    let (parts, rest) = factor_u64(x);
                    for (q, e) in parts {
                        primary.entry(q).or_default().push(e);
                    }
                    if rest > 1 {
                        leftovers.push(BigInt::from(rest));
                    }
                }
                None => leftovers.push(d),
            }
        }
        let len = primary.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![BigInt::one(); len];
        for (q, mut exps) in primary {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            let q = BigInt::from(q);
            for (j, e) in exps.into_iter().enumerate() {
                factors[len - 1 - j] *= q.pow(e);
            }
        }
        let mut g = InvariantFactorGroup { free_rank, factors };
        for d in leftovers {
            g.push_cyclic(d);
        }
        g
    }

    /// Takes an already-canonical chain; returns `None` if it is not one.
    pub fn from_chain(factors: Vec<BigInt>, free_rank: usize) -> Option<Self> {
        let ok = factors.iter().all(|d| d > &BigInt::one())
            && factors.windows(2).all(|w| w[1].is_multiple_of(&w[0]));
        ok.then_some(InvariantFactorGroup { free_rank, factors })
    }

    /// Adds a cyclic summand `Z/d`, merging it into the chain via
    /// `Z/a + Z/b = Z/gcd(a,b) + Z/lcm(a,b)`.
    fn push_cyclic(&mut self, d: BigInt) {
        let mut carry = d.abs();
        if carry.is_zero() {
            self.free_rank += 1;
            return;
        }
        for slot in self.factors.iter_mut().rev() {
            if carry.is_one() {
                return;
            }
            let g = slot.gcd(&carry);
            let l = slot.lcm(&carry);
            *slot = l;
            carry = g;
        }
        if !carry.is_one() {
            self.factors.insert(0, carry);
        }
    }

    pub fn free_rank(&self) -> usize {
        self.free_rank
    }

    pub fn factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn is_finite(&self) -> bool {
        self.free_rank == 0
    }

    pub fn is_trivial(&self) -> bool {
        self.free_rank == 0 && self.factors.is_empty()
    }

    /// Order of the group, `None` when infinite.
    pub fn order(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.factors.iter().fold(BigInt::one(), |acc, d| acc * d))
    }

    /// Largest invariant factor (1 for the trivial group); `None` when infinite.
    pub fn exponent(&self) -> Option<BigInt> {
        self.is_finite()
            .then(|| self.factors.last().cloned().unwrap_or_else(BigInt::one))
    }

    pub fn direct_sum(&self, other: &Self) -> Self {
        Self::direct_sum_all([self, other])
    }

    pub fn direct_sum_all<'a, I>(parts: I) -> Self
    where
        I: IntoIterator<Item = &'a InvariantFactorGroup>,
    {
        let mut orders = Vec::new();
        let mut free = 0;
        for g in parts {
            orders.extend(g.factors.iter().cloned());
            free += g.free_rank;
        }
        Self::from_cyclic_orders(&orders, free)
    }

    /// Number of cyclic summands of order exactly `q` in the primary
    /// decomposition, for a prime power `q`.
    pub fn count_prime_power(&self, p: u64, q: &BigInt) -> usize {
        let p = BigInt::from(p);
        self.factors
            .iter()
            .filter(|d| {
                let mut part = BigInt::one();
                let mut rest = (*d).clone();
                while rest.is_multiple_of(&p) {
                    rest /= &p;
                    part *= &p;
                }
                &part == q
            })
            .count()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("serializable")
    }
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Prime-power parts of `n` found by trial division up to `TRIAL_LIMIT`, and
/// the unfactored cofactor (1 when fully factored).
fn factor_u64(mut n: u64) -> (Vec<(u64, u32)>, u64) {
    let mut out = Vec::new();
    let mut q = 2u64;
    while q <= TRIAL_LIMIT && q.saturating_mul(q) <= n {
        if n.is_multiple_of(q) {
            let mut e = 0;
            while n.is_multiple_of(q) {
                n /= q;
                e += 1;
            }
            out.push((q, e));
        }
        q += if q == 2 { 1 } else { 2 };
    }
    if n > 1 && q.saturating_mul(q) > n {
        out.push((n, 1));
        n = 1;
    }
    (out, n)
}

impl Default for InvariantFactorGroup {
    fn default() -> Self {
        Self::trivial()
    }
}

impl fmt::Display for InvariantFactorGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_trivial() {
            return write!(f, "0");
        }
        let mut parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{d}")).collect();
        match self.free_rank {
            0 => {}
            1 => parts.push("Z".to_string()),
            r => parts.push(format!("Z^{r}")),
        }
        write!(f, "{}", parts.join(" + "))
    }
}

impl Serialize for InvariantFactorGroup {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut st = serializer.serialize_struct("InvariantFactorGroup", 2)?;
        st.serialize_field("free_rank", &self.free_rank)?;
        let values: Vec<serde_json::Value> = self
            .factors
            .iter()
            .map(|d| match d.to_u64() {
                Some(x) => serde_json::Value::from(x),
                None => serde_json::Value::String(d.to_string()),
            })
            .collect();
        st.serialize_field("factors", &values)?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for InvariantFactorGroup {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            free_rank: usize,
            factors: Vec<serde_json::Value>,
        }
        let raw = Raw::deserialize(deserializer)?;
        let mut factors = Vec::with_capacity(raw.factors.len());
        for v in raw.factors {
            let d = match v {
                serde_json::Value::Number(n) => n
                    .as_u64()
                    .map(BigInt::from)
                    .ok_or_else(|| de::Error::custom("factor must be a positive integer"))?,
                serde_json::Value::String(s) => s
                    .parse::<BigInt>()
                    .map_err(|_| de::Error::custom("bad factor string"))?,
                _ => return Err(de::Error::custom("factor must be a number or string")),
            };
            factors.push(d);
        }
        InvariantFactorGroup::from_chain(factors, raw.free_rank)
            .ok_or_else(|| de::Error::custom("factors are not a divisibility chain"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(v: &[u64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn canonical_chain() {
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[2, 3]), 0);
        assert_eq!(g.factors(), big(&[6]).as_slice());
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[4, 2]), 0);
        assert_eq!(g.factors(), big(&[2, 4]).as_slice());
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[1, 1]), 0);
        assert!(g.is_trivial());
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[6, 4, 0, 9]), 1);
        assert_eq!(g.factors(), big(&[6, 36]).as_slice());
        assert_eq!(g.free_rank(), 2);
    }

    #[test]
    fn large_orders_use_gcd_merge() {
        let big_prime =
            BigInt::parse_bytes(b"340282366920938463463374607431768211507", 10).unwrap();
        let a = &big_prime * BigInt::from(2);
        let g = InvariantFactorGroup::from_cyclic_orders(&[a.clone(), BigInt::from(4)], 0);
        assert_eq!(
            g.factors(),
            &[BigInt::from(2), &big_prime * BigInt::from(4)]
        );
        assert_eq!(g.order(), Some(a * 4));
    }

    #[test]
    fn direct_sum_examples() {
        let two = InvariantFactorGroup::from_cyclic_orders(&big(&[2]), 0);
        let four = InvariantFactorGroup::from_cyclic_orders(&big(&[4]), 0);
        assert_eq!(two.direct_sum(&two).factors(), big(&[2, 2]).as_slice());
        assert_eq!(four.direct_sum(&two).factors(), big(&[2, 4]).as_slice());
        assert_eq!(four.direct_sum(&two).order(), Some(BigInt::from(8)));
    }

    #[test]
    fn json_form() {
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[4, 2]), 0);
        let s = serde_json::to_string(&g).unwrap();
        assert_eq!(s, r#"{"free_rank":0,"factors":[2,4]}"#);
        let back: InvariantFactorGroup = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        assert!(
            serde_json::from_str::<InvariantFactorGroup>(r#"{"free_rank":0,"factors":[4,2]}"#)
                .is_err()
        );
    }

    #[test]
    fn display() {
        assert_eq!(InvariantFactorGroup::trivial().to_string(), "0");
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[2, 4]), 1);
        assert_eq!(g.to_string(), "Z/2 + Z/4 + Z");
    }

    #[test]
    fn prime_power_counts() {
        let g = InvariantFactorGroup::from_cyclic_orders(&big(&[2, 2, 4, 3]), 0);
        assert_eq!(g.count_prime_power(2, &BigInt::from(2)), 2);
        assert_eq!(g.count_prime_power(2, &BigInt::from(4)), 1);
        assert_eq!(g.count_prime_power(3, &BigInt::from(3)), 1);
    }
}

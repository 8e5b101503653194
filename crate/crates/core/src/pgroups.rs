//! Finite abelian p-groups `C_{p^e1} x ... x C_{p^ek}` and their elements.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::One;

use crate::error::{Error, Result};
use crate::exactlin::{cokernel, InvariantFactorGroup, Matrix};

/// Enumeration cap used when `K2PADIC_MAX_ORDER` is not set.
pub const DEFAULT_MAX_ORDER: u64 = 4096;

/// Current enumeration cap: `K2PADIC_MAX_ORDER` if set to a positive integer,
/// otherwise [`DEFAULT_MAX_ORDER`].
pub fn max_order() -> u64 {
    std::env::var("K2PADIC_MAX_ORDER")
        .ok()
        .and_then(|s| s.trim().parse::<u64>().ok())
        .filter(|&n| n > 0)
        .unwrap_or(DEFAULT_MAX_ORDER)
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u64;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// `G = C_{p^e1} x ... x C_{p^ek}` with `e1 >= e2 >= ... >= ek >= 1`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PGroupShape {
    p: u64,
    exponents: Vec<u32>,
    moduli: Vec<u64>,
}

/// Element of a [`PGroupShape`] as its reduced exponent vector
/// `(a_1, ..., a_k)` with `0 <= a_i < p^{e_i}`, standing for `prod g_i^{a_i}`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct GroupElement(Vec<u64>);

impl GroupElement {
    pub fn exponents(&self) -> &[u64] {
        &self.0
    }
}

impl PGroupShape {
    /// Normalizes any list of cyclic exponents (order irrelevant, zeros dropped).
    pub fn new(p: u64, exponents: &[u32]) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        let mut exps: Vec<u32> = exponents.iter().copied().filter(|&e| e > 0).collect();
        exps.sort_unstable_by(|a, b| b.cmp(a));
        let moduli = exps
            .iter()
            .map(|&e| {
                p.checked_pow(e)
                    .ok_or_else(|| Error::Domain(format!("cyclic factor {p}^{e} too large")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(PGroupShape {
            p,
            exponents: exps,
            moduli,
        })
    }

    pub fn trivial(p: u64) -> Result<Self> {
        Self::new(p, &[])
    }

    pub fn cyclic(p: u64, e: u32) -> Result<Self> {
        Self::new(p, &[e])
    }

    /// `(C_{p^n})^k`
    pub fn homocyclic(p: u64, n: u32, k: usize) -> Result<Self> {
        Self::new(p, &vec![n; k])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn exponents(&self) -> &[u32] {
        &self.exponents
    }

    /// Number of cyclic factors `k`.
    pub fn rank(&self) -> usize {
        self.exponents.len()
    }

    /// Cyclic orders `p^{e_i}`.
    pub fn moduli(&self) -> &[u64] {
        &self.moduli
    }

    /// Largest cyclic exponent `e_1` (0 for the trivial group): `p^{e_1}` is
    /// the exponent of `G`.
    pub fn max_exponent(&self) -> u32 {
        self.exponents.first().copied().unwrap_or(0)
    }

    pub fn log_order(&self) -> u32 {
        self.exponents.iter().sum()
    }

    pub fn order_big(&self) -> BigInt {
        BigInt::from(self.p).pow(self.log_order())
    }

    /// `|G|`, or `None` if it does not fit in a `u64`.
    pub fn order(&self) -> Option<u64> {
        self.p.checked_pow(self.log_order())
    }

    /// Nilpotency index `1 + sum (p^{e_i} - 1)` of the augmentation ideal of
    /// `F_p[G]`.
    pub fn nilpotency_degree(&self) -> u64 {
        1 + self.moduli.iter().map(|m| m - 1).sum::<u64>()
    }

    pub fn invariants(&self) -> InvariantFactorGroup {
        let orders: Vec<BigInt> = self.moduli.iter().map(|&m| BigInt::from(m)).collect();
        InvariantFactorGroup::from_cyclic_orders(&orders, 0)
    }

    /// Fails with [`Error::CapExceeded`] when `|G| > cap`.
    pub fn check_cap(&self, cap: u64) -> Result<usize> {
        match self.order() {
            Some(n) if n <= cap => Ok(n as usize),
            _ => Err(Error::CapExceeded {
                order: self
                    .p
                    .checked_pow(self.log_order())
                    .map_or(u128::MAX, u128::from),
                cap: u128::from(cap),
            }),
        }
    }

    pub fn identity(&self) -> GroupElement {
        GroupElement(vec![0; self.rank()])
    }

    /// The `i`-th standard generator `g_i`.
    pub fn generator(&self, i: usize) -> GroupElement {
        let mut v = vec![0; self.rank()];
        v[i] = 1 % self.moduli[i];
        GroupElement(v)
    }

    pub fn generators(&self) -> Vec<GroupElement> {
        (0..self.rank()).map(|i| self.generator(i)).collect()
    }

    /// Element with the given (unreduced, possibly negative) exponents.
    pub fn element(&self, exps: &[i64]) -> Result<GroupElement> {
        if exps.len() != self.rank() {
            return Err(Error::LengthMismatch {
                expected: self.rank(),
                got: exps.len(),
            });
        }
        Ok(GroupElement(
            exps.iter()
                .zip(&self.moduli)
                .map(|(&a, &m)| a.rem_euclid(m as i64) as u64)
                .collect(),
        ))
    }

    pub fn contains(&self, g: &GroupElement) -> bool {
        g.0.len() == self.rank() && g.0.iter().zip(&self.moduli).all(|(a, m)| a < m)
    }

    pub fn is_identity(&self, g: &GroupElement) -> bool {
        g.0.iter().all(|&a| a == 0)
    }

    pub fn mul(&self, a: &GroupElement, b: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&b.0)
                .zip(&self.moduli)
                .map(|((x, y), m)| (x + y) % m)
                .collect(),
        )
    }

    pub fn inverse(&self, a: &GroupElement) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(x, m)| (m - x) % m)
                .collect(),
        )
    }

    pub fn pow(&self, a: &GroupElement, n: i64) -> GroupElement {
        GroupElement(
            a.0.iter()
                .zip(&self.moduli)
                .map(|(&x, &m)| {
                    let m = m as i128;
                    ((x as i128 * (n as i128 % m)).rem_euclid(m)) as u64
                })
                .collect(),
        )
    }

    /// Least `p^t` with `g^{p^t} = 1`.
    pub fn element_order(&self, g: &GroupElement) -> u64 {
        let mut order = 1u64;
        let mut h = g.clone();
        while !self.is_identity(&h) {
            h = self.pow(&h, self.p as i64);
            order *= self.p;
        }
        order
    }

    /// Position of `g` in [`enumerate`](Self::enumerate) order (mixed radix,
    /// first coordinate most significant).
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.0.iter()
            .zip(&self.moduli)
            .fold(0usize, |acc, (&a, &m)| acc * m as usize + a as usize)
    }

    pub fn element_at(&self, mut idx: usize) -> GroupElement {
        let mut v = vec![0; self.rank()];
        for i in (0..self.rank()).rev() {
            let m = self.moduli[i] as usize;
            v[i] = (idx % m) as u64;
            idx /= m;
        }
        GroupElement(v)
    }

    /// All elements in lexicographic order of exponent vectors, identity first.
    pub fn enumerate_capped(&self, cap: u64) -> Result<Vec<GroupElement>> {
        let n = self.check_cap(cap)?;
        Ok((0..n).map(|i| self.element_at(i)).collect())
    }

    /// [`enumerate_capped`](Self::enumerate_capped) with the configured cap.
    pub fn enumerate(&self) -> Result<Vec<GroupElement>> {
        self.enumerate_capped(max_order())
    }

    /// Invariants of `G / <g>`, from the cokernel of `[diag(p^{e_i}) | g]`.
    pub fn quotient_by_cyclic(&self, g: &GroupElement) -> InvariantFactorGroup {
        let k = self.rank();
        let mut m = Matrix::<BigInt>::zeros(k, k + 1);
        for i in 0..k {
            m[(i, i)] = BigInt::from(self.moduli[i]);
            m[(i, k)] = BigInt::from(g.0[i]);
        }
        cokernel(&m)
    }

    /// Formats `g` as a word in the generators, e.g. `g0^2*g1`; `1` for the identity.
    pub fn word(&self, g: &GroupElement) -> String {
        let parts: Vec<String> =
            g.0.iter()
                .enumerate()
                .filter(|(_, &a)| a != 0)
                .map(|(i, &a)| {
                    if a == 1 {
                        format!("g{i}")
                    } else {
                        format!("g{i}^{a}")
                    }
                })
                .collect();
        if parts.is_empty() {
            "1".to_string()
        } else {
            parts.join("*")
        }
    }

    /// Parses a word such as `g0^2*g1`, `g1^-1` or `1`.
    pub fn parse_word(&self, s: &str) -> Result<GroupElement> {
        let s = s.trim();
        let mut exps = vec![0i64; self.rank()];
        if s == "1" || s.is_empty() {
            return self.element(&exps);
        }
        for factor in s.split('*') {
            let factor = factor.trim();
            let (base, power) = match factor.split_once('^') {
                Some((b, e)) => (
                    b.trim(),
                    e.trim()
                        .parse::<i64>()
                        .map_err(|_| Error::Parse(format!("bad exponent in '{factor}'")))?,
                ),
                None => (factor, 1),
            };
            if base == "1" {
                continue;
            }
            let idx = base
                .strip_prefix('g')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i < self.rank())
                .ok_or_else(|| Error::Parse(format!("unknown generator '{base}'")))?;
            exps[idx] += power;
        }
        self.element(&exps)
    }
}

impl fmt::Display for PGroupShape {
    /// Canonical text form `p:[e1,e2,...]`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let exps: Vec<String> = self.exponents.iter().map(u32::to_string).collect();
        write!(f, "{}:[{}]", self.p, exps.join(","))
    }
}

impl PGroupShape {
    /// Alias form such as `C9xC3`; `C1` for the trivial group.
    pub fn alias(&self) -> String {
        if self.moduli.is_empty() {
            return "C1".to_string();
        }
        let parts: Vec<String> = self.moduli.iter().map(|m| format!("C{m}")).collect();
        parts.join("x")
    }
}

/// Writes `n = p^e` for prime `p`, if possible.
fn prime_power(n: u64) -> Option<(u64, u32)> {
    if n < 2 {
        return None;
    }
    let mut p = 2;
    while p * p <= n && !n.is_multiple_of(p) {
        p += 1;
    }
    if !n.is_multiple_of(p) {
        p = n;
    }
    let mut e = 0;
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
        e += 1;
    }
    (m == 1).then_some((p, e))
}

impl FromStr for PGroupShape {
    type Err = Error;

    /// Accepts `p:[e1,e2,...]` and aliases like `C9xC3` (all factors powers of
    /// one prime).
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        if let Some((p, rest)) = s.split_once(':') {
            let p: u64 = p
                .trim()
                .parse()
                .map_err(|_| Error::Parse(format!("bad prime in '{s}'")))?;
            let inner = rest
                .trim()
                .strip_prefix('[')
                .and_then(|r| r.strip_suffix(']'))
                .ok_or_else(|| Error::Parse(format!("expected [e1,...] in '{s}'")))?;
            let mut exps = Vec::new();
            for tok in inner.split(',').map(str::trim).filter(|t| !t.is_empty()) {
                let e: u32 = tok
                    .parse()
                    .map_err(|_| Error::Parse(format!("bad exponent '{tok}'")))?;
                if e == 0 {
                    return Err(Error::Parse("exponents must be positive".into()));
                }
                exps.push(e);
            }
            return PGroupShape::new(p, &exps);
        }
        let mut prime = None;
        let mut exps = Vec::new();
        for tok in s.split(['x', 'X', '*']) {
            let n: u64 = tok
                .trim()
                .strip_prefix('C')
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| Error::Parse(format!("bad cyclic factor '{tok}'")))?;
            if n == 1 {
                continue;
            }
            let (q, e) =
                prime_power(n).ok_or_else(|| Error::Parse(format!("C{n} is not a p-group")))?;
            if prime.is_some_and(|p| p != q) {
                return Err(Error::Parse(format!("mixed primes in '{s}'")));
            }
            prime = Some(q);
            exps.push(e);
        }
        let p = prime.ok_or_else(|| {
            Error::Parse("trivial group needs the p:[] form to fix p".to_string())
        })?;
        PGroupShape::new(p, &exps)
    }
}

/// Canonical invariants of a direct sum.
pub fn direct_sum(parts: &[InvariantFactorGroup]) -> InvariantFactorGroup {
    InvariantFactorGroup::direct_sum_all(parts)
}

/// Every abelian p-group of order `p^n`, one per partition of `n`.
pub fn groups_of_order(p: u64, n: u32) -> Result<Vec<PGroupShape>> {
    fn partitions(n: u32, max: u32, prefix: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if n == 0 {
            out.push(prefix.clone());
            return;
        }
        for part in (1..=max.min(n)).rev() {
            prefix.push(part);
            partitions(n - part, part, prefix, out);
            prefix.pop();
        }
    }
    let mut parts = Vec::new();
    partitions(n, n, &mut Vec::new(), &mut parts);
    parts.iter().map(|e| PGroupShape::new(p, e)).collect()
}

/// All nontrivial abelian p-groups of order at most `max_order`.
pub fn groups_up_to(p: u64, max_order: u64) -> Result<Vec<PGroupShape>> {
    let mut out = Vec::new();
    let mut n = 1;
    while p.checked_pow(n).is_some_and(|q| q <= max_order) {
        out.extend(groups_of_order(p, n)?);
        n += 1;
    }
    Ok(out)
}

/// `|G| = prod p^{e_i}` as a `BigInt` for an [`InvariantFactorGroup`] built from
/// a shape (used in Lagrange-style checks).
pub fn order_of(g: &InvariantFactorGroup) -> BigInt {
    g.order().unwrap_or_else(BigInt::one)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn shape(s: &str) -> PGroupShape {
        s.parse().unwrap()
    }

    #[test]
    fn enumerate_examples() {
        let c2 = shape("2:[1]");
        let els = c2.enumerate().unwrap();
        assert_eq!(
            els,
            vec![c2.element(&[0]).unwrap(), c2.element(&[1]).unwrap()]
        );
        let v4 = shape("C2xC2");
        let els = v4.enumerate().unwrap();
        assert_eq!(els.len(), 4);
        assert_eq!(els[0], v4.identity());
        assert_eq!(shape("C9xC3").enumerate().unwrap().len(), 27);
        for (i, g) in els.iter().enumerate() {
            assert_eq!(v4.index_of(g), i);
        }
    }

    #[test]
    fn cap_is_enforced() {
        let g = shape("2:[13]");
        assert!(matches!(
            g.enumerate_capped(4096),
            Err(Error::CapExceeded { .. })
        ));
        assert_eq!(g.enumerate_capped(8192).unwrap().len(), 8192);
    }

    #[test]
    fn element_orders() {
        let c8 = shape("C8");
        assert_eq!(c8.element_order(&c8.identity()), 1);
        assert_eq!(c8.element_order(&c8.generator(0)), 8);
        let g = shape("C4xC2");
        assert_eq!(g.element_order(&g.element(&[2, 0]).unwrap()), 2);
    }

    #[test]
    fn quotient_examples() {
        let c4 = shape("C4");
        assert!(c4.quotient_by_cyclic(&c4.generator(0)).is_trivial());
        let g = shape("C4xC2");
        let q = g.quotient_by_cyclic(&g.element(&[2, 0]).unwrap());
        assert_eq!(q.factors(), &[BigInt::from(2), BigInt::from(2)]);
        assert_eq!(g.quotient_by_cyclic(&g.identity()), g.invariants());
    }

    #[test]
    fn direct_sum_over_c4() {
        let c4 = shape("C4");
        let parts: Vec<_> = c4
            .enumerate()
            .unwrap()
            .iter()
            .map(|g| c4.quotient_by_cyclic(g))
            .collect();
        let sum = direct_sum(&parts);
        assert_eq!(sum.factors(), &[BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn text_forms() {
        let g = shape("3:[1,2]");
        assert_eq!(g.to_string(), "3:[2,1]");
        assert_eq!(g.alias(), "C9xC3");
        assert_eq!(shape("C9xC3"), g);
        assert_eq!(shape("C1xC4").to_string(), "2:[2]");
        assert_eq!(shape("5:[]").order(), Some(1));
        assert!("C6".parse::<PGroupShape>().is_err());
        assert!("C2xC3".parse::<PGroupShape>().is_err());
        assert!("4:[1]".parse::<PGroupShape>().is_err());
        assert!("C1".parse::<PGroupShape>().is_err());
    }

    #[test]
    fn words() {
        let g = shape("C4xC2");
        let x = g.parse_word("g0^2*g1").unwrap();
        assert_eq!(x.exponents(), &[2, 1]);
        assert_eq!(g.word(&x), "g0^2*g1");
        assert_eq!(g.parse_word("g0^-1").unwrap().exponents(), &[3, 0]);
        assert_eq!(g.word(&g.identity()), "1");
        assert!(g.parse_word("g2").is_err());
    }

    #[test]
    fn group_counts() {
        // partitions of 1..6
        let counts: Vec<usize> = (1..=6)
            .map(|n| groups_of_order(2, n).unwrap().len())
            .collect();
        assert_eq!(counts, vec![1, 2, 3, 5, 7, 11]);
        assert_eq!(groups_up_to(3, 81).unwrap().len(), 11);
    }
}

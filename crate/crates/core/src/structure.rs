//! Closed forms for `K̃_2` of truncated polynomial rings, cyclic group rings
//! and the continuous `K̃_2^c` of `Ẑ_p[G]`.

use num_bigint::BigInt;
use num_traits::One;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exactlin::InvariantFactorGroup;
use crate::homology::hc1_closed;
use crate::padic::{pow_p, valuation_u64};
use crate::pgroups::{is_prime, PGroupShape};

/// Refuses to materialize more cyclic factors than this.
pub const MAX_FACTORS: u128 = 1 << 22;

/// `Z/p^{s-1} ⊗ (⊕ Z/m)` for a list of orders `m`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TensorCyclicExpr {
    pub p: u64,
    /// The modulus is `p^{modulus_exp}`.
    pub modulus_exp: u32,
    pub orders: Vec<u64>,
}

impl TensorCyclicExpr {
    pub fn new(p: u64, s: u32, orders: Vec<u64>) -> Result<Self> {
        check_prime(p)?;
        if s < 2 {
            return Err(Error::Domain(format!("s = {s} must be at least 2")));
        }
        Ok(Self {
            p,
            modulus_exp: s - 1,
            orders,
        })
    }

    /// `⊕_{i=lo}^{hi} Z/i`.
    pub fn range(p: u64, s: u32, lo: u64, hi: u64) -> Result<Self> {
        Self::new(p, s, (lo..=hi).collect())
    }

    pub fn evaluate(&self) -> InvariantFactorGroup {
        let orders: Vec<BigInt> = self
            .orders
            .iter()
            .map(|&m| {
                let r = if m == 0 {
                    self.modulus_exp
                } else {
                    self.modulus_exp.min(valuation_u64(m, self.p))
                };
                pow_p(self.p, r)
            })
            .collect();
        InvariantFactorGroup::from_cyclic_orders(&orders, 0)
    }
}

fn check_prime(p: u64) -> Result<()> {
    if is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

fn checked_pow(p: u64, e: u32) -> Result<u64> {
    p.checked_pow(e)
        .ok_or_else(|| Error::Domain(format!("{p}^{e} overflows")))
}

pub fn totient_prime_power(p: u64, e: u32) -> Result<u64> {
    if e == 0 {
        return Ok(1);
    }
    Ok(checked_pow(p, e - 1)? * (p - 1))
}

/// Builds `⊕ (Z/p^i)^{m_i}` from `(i, m_i)` pairs.
fn from_multiplicities(p: u64, parts: &[(u32, u128)]) -> Result<InvariantFactorGroup> {
    let total: u128 = parts.iter().map(|&(_, m)| m).sum();
    if total > MAX_FACTORS {
        return Err(Error::Domain(format!(
            "{total} cyclic factors exceeds the limit {MAX_FACTORS}"
        )));
    }
    let mut orders = Vec::with_capacity(total as usize);
    for &(i, m) in parts {
        let q = pow_p(p, i);
        orders.extend(std::iter::repeat_n(q, m as usize));
    }
    Ok(InvariantFactorGroup::from_cyclic_orders(&orders, 0))
}

/// `K̃_2((Z/p^s)[x]/(x^n)) ≅ Z/p^{s-1} ⊗ (⊕_{i=2}^n Z/i)`.
pub fn k2_truncated_poly(p: u64, s: u32, n: u64) -> Result<InvariantFactorGroup> {
    if n < 2 {
        return Err(Error::Domain(format!("n = {n} must be at least 2")));
    }
    if n as u128 > MAX_FACTORS {
        return Err(Error::Domain(format!("n = {n} too large")));
    }
    Ok(TensorCyclicExpr::range(p, s, 2, n)?.evaluate())
}

/// `K̃_2((Z/p^s)[C_{p^n}])`, evaluated term by term over `i = 2..p^n`.
pub fn k2_cyclic_group_ring(p: u64, s: u32, n: u32) -> Result<InvariantFactorGroup> {
    check_prime(p)?;
    if n < 1 {
        return Err(Error::Domain("n must be at least 1".into()));
    }
    k2_truncated_poly(p, s, checked_pow(p, n)?)
}

/// Same group as [`k2_cyclic_group_ring`], counted with Euler's totient.
pub fn k2_cyclic_corollary(p: u64, s: u32, n: u32) -> Result<InvariantFactorGroup> {
    check_prime(p)?;
    if s < 2 || n < 1 {
        return Err(Error::Domain(format!(
            "need s >= 2 and n >= 1, got s = {s}, n = {n}"
        )));
    }
    let mut parts = Vec::new();
    if n < s {
        for i in 1..=n {
            parts.push((i, totient_prime_power(p, n - i)? as u128));
        }
    } else {
        for i in 1..=s - 2 {
            parts.push((i, totient_prime_power(p, n - i)? as u128));
        }
        parts.push((s - 1, checked_pow(p, n - s + 1)? as u128));
    }
    from_multiplicities(p, &parts)
}

/// `K̃_2^c(Ẑ_p[G]) ≅ ⊕_{g∈G} G/⟨g⟩`.
pub fn k2c_closed(shape: &PGroupShape) -> Result<InvariantFactorGroup> {
    hc1_closed(shape)
}

fn big_to_u128(x: &BigInt, what: &str) -> Result<u128> {
    u128::try_from(x).map_err(|_| Error::Domain(format!("{what} is too large")))
}

/// Closed form for `G = (C_{p^n})^k`.
pub fn example1(p: u64, k: u32, n: u32) -> Result<InvariantFactorGroup> {
    check_prime(p)?;
    if k < 1 || n < 1 {
        return Err(Error::Domain("k and n must be at least 1".into()));
    }
    let pk = pow_p(p, k);
    let mut parts = Vec::new();
    for i in 1..n {
        let m = (&pk - 1u32) * pow_p(p, k * (n - i - 1));
        parts.push((i, big_to_u128(&m, "multiplicity")?));
    }
    let top = BigInt::one() + BigInt::from(k - 1) * pow_p(p, k * n);
    parts.push((n, big_to_u128(&top, "multiplicity")?));
    from_multiplicities(p, &parts)
}

/// Closed form for `G = (C_p)^k × C_{p^n}`.
pub fn example2(p: u64, k: u32, n: u32) -> Result<InvariantFactorGroup> {
    check_prime(p)?;
    if k < 1 || n < 1 {
        return Err(Error::Domain("k and n must be at least 1".into()));
    }
    let r = pow_p(p, k + 1) - p + 1u32;
    let r = big_to_u128(&r, "r")?;
    let mut parts = Vec::new();
    let head = pow_p(p, n) * (BigInt::one() + BigInt::from(k - 1) * pow_p(p, k));
    parts.push((1, big_to_u128(&head, "multiplicity")?));
    for i in 1..n {
        parts.push((i, r * totient_prime_power(p, n - i)? as u128));
    }
    parts.push((n, r));
    from_multiplicities(p, &parts)
}

/// Order of `⟨x, x^{n-1}⟩` in `K̃_2((Z/p^s)[x]/(x^n))`: `p^{min(s-1, v_p(n))}`.
///
/// Only the prime `p` contributes. The relative group of a nilpotent ideal
/// over a `Z/p^s`-algebra is a `p`-group, so the prime-to-`p` part of `n` is
/// killed by the tensor with `Z/p^{s-1}`.
pub fn symbol_order(p: u64, s: u32, n: u64) -> Result<BigInt> {
    check_prime(p)?;
    if s < 2 || n < 2 {
        return Err(Error::Domain(format!(
            "need s >= 2 and n >= 2, got s = {s}, n = {n}"
        )));
    }
    Ok(pow_p(p, (s - 1).min(valuation_u64(n, p))))
}

/// Outcome of [`tensor_cyclic_identity_check`].
#[derive(Clone, Debug, Serialize)]
pub struct IdentityReport {
    pub p: u64,
    pub s: u32,
    pub n: u32,
    pub enumerated: InvariantFactorGroup,
    pub term_by_term: InvariantFactorGroup,
    pub pass: bool,
}

/// Compares `Z/p^{s-1} ⊗ ⊕_{g∈C_{p^n}} C_{p^n}/⟨g⟩` (walking the group) with
/// `Z/p^{s-1} ⊗ ⊕_{i=2}^{p^n} Z/i`.
pub fn tensor_cyclic_identity_check(p: u64, s: u32, n: u32) -> Result<IdentityReport> {
    let shape = PGroupShape::cyclic(p, n)?;
    let mut orders = Vec::new();
    for g in shape.enumerate()? {
        // a cyclic quotient of a cyclic group
        let q = shape.quotient_by_cyclic(&g);
        let m = q.order().expect("finite quotient");
        orders.push(u64::try_from(m).expect("fits"));
    }
    let enumerated = TensorCyclicExpr::new(p, s, orders)?.evaluate();
    let term_by_term = k2_cyclic_group_ring(p, s, n)?;
    let pass = enumerated == term_by_term;
    Ok(IdentityReport {
        p,
        s,
        n,
        enumerated,
        term_by_term,
        pass,
    })
}

/// Which closed form to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Theorem {
    TruncatedPoly,
    CyclicGroupRing,
    Continuous,
    Corollary,
    Example1,
    Example2,
}

impl std::str::FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "A" | "a" => Theorem::TruncatedPoly,
            "B" | "b" => Theorem::CyclicGroupRing,
            "C" | "c" => Theorem::Continuous,
            "corollary" => Theorem::Corollary,
            "ex1" => Theorem::Example1,
            "ex2" => Theorem::Example2,
            _ => return Err(Error::Parse(format!("unknown theorem '{s}'"))),
        })
    }
}

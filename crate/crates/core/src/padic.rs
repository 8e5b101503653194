//! Truncated p-adic numbers with an explicit power-of-p denominator.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::pgroups::is_prime;

/// Default absolute precision in p-adic digits.
pub const DEFAULT_PRECISION: i64 = 8;

pub fn pow_p(p: u64, e: u32) -> BigInt {
    BigInt::from(p).pow(e)
}

/// `v_p(x)`, or `None` for `x = 0`.
pub fn valuation(x: &BigInt, p: u64) -> Option<u32> {
    if x.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut v = 0;
    let mut x = x.clone();
    loop {
        let (q, r) = x.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        x = q;
        v += 1;
    }
}

pub fn valuation_u64(mut n: u64, p: u64) -> u32 {
    assert!(n != 0);
    let mut v = 0;
    while n.is_multiple_of(p) {
        n /= p;
        v += 1;
    }
    v
}

/// `v_p(n!) = (n - s_p(n)) / (p - 1)` with `s_p` the base-p digit sum.
pub fn valuation_factorial(n: u64, p: u64) -> u64 {
    let mut digits = 0;
    let mut m = n;
    while m > 0 {
        digits += m % p;
        m /= p;
    }
    (n - digits) / (p - 1)
}

/// Inverse of `x` modulo `m`, if it exists.
pub fn mod_inverse(x: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = x.mod_floor(m).extended_gcd(m);
    e.gcd.is_one().then(|| e.x.mod_floor(m))
}

/// Value `mantissa / p^scale`, known modulo `p^prec`.
///
/// The mantissa lives in `[0, p^(prec + scale))`. Precision is absolute and may
/// drop below zero only down to `-scale` (then nothing is known beyond the
/// denominator).
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawPadic", into = "RawPadic")]
pub struct PadicScaled {
    p: u64,
    prec: i64,
    scale: u32,
    mantissa: BigInt,
}

#[derive(Serialize, Deserialize)]
struct RawPadic {
    p: u64,
    #[serde(rename = "N")]
    n: i64,
    scale: u32,
    mantissa: String,
}

impl From<PadicScaled> for RawPadic {
    fn from(x: PadicScaled) -> Self {
        RawPadic {
            p: x.p,
            n: x.prec,
            scale: x.scale,
            mantissa: x.mantissa.to_string(),
        }
    }
}

impl TryFrom<RawPadic> for PadicScaled {
    type Error = Error;
    fn try_from(r: RawPadic) -> Result<Self> {
        let m: BigInt = r
            .mantissa
            .parse()
            .map_err(|_| Error::Parse(format!("bad mantissa '{}'", r.mantissa)))?;
        PadicScaled::from_parts(r.p, r.n, r.scale, m)
    }
}

impl PadicScaled {
    /// `value + O(p^prec)`.
    pub fn new(p: u64, prec: i64, value: impl Into<BigInt>) -> Result<Self> {
        Self::from_parts(p, prec, 0, value.into())
    }

    /// `mantissa * p^-scale + O(p^prec)`.
    pub fn from_parts(p: u64, prec: i64, scale: u32, mantissa: BigInt) -> Result<Self> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if prec < -i64::from(scale) {
            return Err(Error::Domain(format!(
                "precision {prec} below -scale {scale}"
            )));
        }
        Ok(Self::build(p, prec, scale, mantissa))
    }

    fn build(p: u64, prec: i64, scale: u32, mantissa: BigInt) -> Self {
        let prec = prec.max(-i64::from(scale));
        let modulus = pow_p(p, (prec + i64::from(scale)) as u32);
        PadicScaled {
            p,
            prec,
            scale,
            mantissa: mantissa.mod_floor(&modulus),
        }
    }

    pub fn zero(p: u64, prec: i64) -> Result<Self> {
        Self::new(p, prec, 0)
    }

    pub fn one(p: u64, prec: i64) -> Result<Self> {
        Self::new(p, prec, 1)
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    pub fn mantissa(&self) -> &BigInt {
        &self.mantissa
    }

    /// Modulus of the mantissa, `p^(prec + scale)`.
    pub fn modulus(&self) -> BigInt {
        pow_p(self.p, (self.prec + i64::from(self.scale)) as u32)
    }

    /// True if the value is zero modulo `p^prec`.
    pub fn is_zero(&self) -> bool {
        self.mantissa.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.normalized().scale == 0
    }

    /// Valuation of the value, or `None` if it is zero at this precision.
    pub fn valuation(&self) -> Option<i64> {
        valuation(&self.mantissa, self.p).map(|v| i64::from(v) - i64::from(self.scale))
    }

    /// Valuation capped at the precision: every value satisfies `x ∈ p^v Z_p`
    /// up to the known error.
    fn valuation_capped(&self) -> i64 {
        self.valuation().map_or(self.prec, |v| v.min(self.prec))
    }

    pub fn is_unit(&self) -> bool {
        self.valuation() == Some(0)
    }

    /// Minimal scale representation of the same value.
    pub fn normalized(&self) -> Self {
        let mut x = self.clone();
        let p = BigInt::from(self.p);
        while x.scale > 0 && x.mantissa.is_multiple_of(&p) {
            x.mantissa /= &p;
            x.scale -= 1;
        }
        if x.scale != self.scale {
            x = Self::build(x.p, x.prec, x.scale, x.mantissa);
        }
        x
    }

    /// Same value with scale raised to `scale` (a no-op if already larger).
    pub fn rescaled(&self, scale: u32) -> Self {
        if scale <= self.scale {
            return self.clone();
        }
        let shift = pow_p(self.p, scale - self.scale);
        Self::build(self.p, self.prec, scale, &self.mantissa * shift)
    }

    /// Drops precision to `prec` (no-op if already lower).
    pub fn truncated(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::build(self.p, prec, self.scale, self.mantissa.clone())
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let scale = self.scale.max(other.scale);
        let prec = self.prec.min(other.prec);
        let a = self.rescaled(scale);
        let b = other.rescaled(scale);
        Ok(Self::build(self.p, prec, scale, a.mantissa + b.mantissa).normalized())
    }

    pub fn neg(&self) -> Self {
        Self::build(self.p, self.prec, self.scale, -self.mantissa.clone())
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let prec = (self.prec + other.valuation_capped()).min(other.prec + self.valuation_capped());
        let scale = self.scale + other.scale;
        Ok(Self::build(self.p, prec, scale, &self.mantissa * &other.mantissa).normalized())
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        let v = valuation(c, self.p).map_or(0, i64::from);
        Self::build(self.p, self.prec + v, self.scale, &self.mantissa * c).normalized()
    }

    /// Division by `p`: raises the scale, certified precision drops by one.
    pub fn div_p(&self) -> Self {
        Self::build(self.p, self.prec - 1, self.scale + 1, self.mantissa.clone())
    }

    pub fn pow(&self, n: u32) -> Result<Self> {
        let mut acc = Self::one(self.p, self.prec)?;
        for _ in 0..n {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Multiplicative inverse of a unit.
    pub fn invert(&self) -> Result<Self> {
        let x = self.normalized();
        if !x.is_unit() {
            return Err(Error::NonUnit);
        }
        let m = x.modulus();
        let inv = mod_inverse(&x.mantissa, &m).ok_or(Error::NonUnit)?;
        Ok(Self::build(x.p, x.prec, 0, inv))
    }

    /// Same value at equal precision and normalized scale.
    pub fn eq_value(&self, other: &Self) -> bool {
        self.p == other.p && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// The root of unity `ω` with `ω ≡ λ mod p` (mod 4 for `p = 2`).
    pub fn teichmueller(&self) -> Result<Self> {
        let x = self.normalized();
        if !x.is_unit() {
            return Err(Error::NonUnit);
        }
        if x.p == 2 {
            let r = x.mantissa.mod_floor(&BigInt::from(4));
            if x.prec >= 2 || r.is_one() {
                let sign = if r.is_one() { 1 } else { -1 };
                return Ok(Self::build(2, x.prec, 0, BigInt::from(sign)));
            }
            return Ok(Self::build(2, x.prec, 0, BigInt::one()));
        }
        let m = x.modulus();
        let p = BigInt::from(x.p);
        let mut w = x.mantissa.clone();
        for _ in 0..x.prec + 2 {
            let next = w.modpow(&p, &m);
            if next == w {
                break;
            }
            w = next;
        }
        Ok(Self::build(x.p, x.prec, 0, w))
    }

    /// Signed representative of the mantissa in `(-M/2, M/2]`.
    pub fn centered_mantissa(&self) -> BigInt {
        let m = self.modulus();
        let half = &m / 2;
        if self.mantissa > half {
            &self.mantissa - m
        } else {
            self.mantissa.clone()
        }
    }
}

impl fmt::Display for PadicScaled {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.scale > 0 {
            write!(f, "{} * {}^-{}", self.mantissa, self.p, self.scale)?;
        } else {
            write!(f, "{}", self.mantissa)?;
        }
        write!(f, " + O({}^{})", self.p, self.prec)
    }
}

impl FromStr for PadicScaled {
    type Err = Error;

    /// Parses `m * p^-a + O(p^N)` or `m + O(p^N)`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("bad p-adic literal '{s}'"));
        let (head, tail) = s.rsplit_once("+ O(").ok_or_else(bad)?;
        let tail = tail.trim().strip_suffix(')').ok_or_else(bad)?;
        let (p, prec) = tail.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.trim().parse().map_err(|_| bad())?;
        let prec: i64 = prec.trim().parse().map_err(|_| bad())?;
        let head = head.trim();
        let (m, scale) = match head.split_once('*') {
            Some((m, den)) => {
                let (q, a) = den.trim().split_once("^-").ok_or_else(bad)?;
                if q.trim().parse::<u64>().ok() != Some(p) {
                    return Err(bad());
                }
                (m.trim(), a.trim().parse::<u32>().map_err(|_| bad())?)
            }
            None => (head, 0),
        };
        let m: BigInt = m.parse().map_err(|_| bad())?;
        PadicScaled::from_parts(p, prec, scale, m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pad(p: u64, n: i64, v: i64) -> PadicScaled {
        PadicScaled::new(p, n, v).unwrap()
    }

    #[test]
    fn add_examples() {
        assert_eq!(pad(3, 5, 1).add(&pad(3, 5, 2)).unwrap(), pad(3, 5, 3));
        let third = PadicScaled::from_parts(3, 4, 1, BigInt::from(1)).unwrap();
        let two_thirds = PadicScaled::from_parts(3, 4, 1, BigInt::from(2)).unwrap();
        let s = third.add(&two_thirds).unwrap();
        assert_eq!(s, pad(3, 4, 1));
        assert!(pad(3, 2, 1).add(&pad(5, 2, 1)).is_err());
    }

    #[test]
    fn mul_and_invert() {
        assert_eq!(pad(3, 3, 14).mul(&pad(3, 3, 2)).unwrap(), pad(3, 3, 1));
        // oracle: 2 * 14 = 28 = 1 + 27
        assert_eq!(pad(3, 3, 2).invert().unwrap(), pad(3, 3, 14));
        assert_eq!(pad(3, 3, 1).invert().unwrap(), pad(3, 3, 1));
        assert!(matches!(pad(3, 3, 3).invert(), Err(Error::NonUnit)));
    }

    #[test]
    fn product_precision_uses_valuations() {
        // 9 + O(3^4) times 3 + O(3^4): error terms 9*O(3^4) and 3*O(3^4)
        let x = pad(3, 4, 9).mul(&pad(3, 4, 3)).unwrap();
        assert_eq!(x.precision(), 5);
        assert_eq!(x.mantissa(), &BigInt::from(27));
    }

    #[test]
    fn div_p_tracks_precision() {
        let x = pad(3, 4, 6).div_p();
        assert_eq!((x.scale(), x.precision()), (1, 3));
        let n = x.normalized();
        assert_eq!(
            (n.scale(), n.precision(), n.mantissa().clone()),
            (0, 3, BigInt::from(2))
        );
        let y = pad(3, 4, 1).div_p();
        assert!(!y.is_integral());
        assert_eq!(y.valuation(), Some(-1));
    }

    #[test]
    fn teichmueller_examples() {
        assert_eq!(pad(3, 3, 2).teichmueller().unwrap(), pad(3, 3, 26));
        assert_eq!(pad(3, 3, 1).teichmueller().unwrap(), pad(3, 3, 1));
        assert_eq!(pad(2, 4, 3).teichmueller().unwrap(), pad(2, 4, 15));
        assert_eq!(pad(2, 4, 5).teichmueller().unwrap(), pad(2, 4, 1));
        assert!(pad(5, 3, 10).teichmueller().is_err());
        // p = 5: a primitive 4th root of unity mod 5^6
        let w = pad(5, 6, 2).teichmueller().unwrap();
        assert_eq!(w.pow(4).unwrap(), pad(5, 6, 1));
        assert_ne!(w.pow(2).unwrap(), pad(5, 6, 1));
    }

    #[test]
    fn text_and_json() {
        let x = PadicScaled::from_parts(3, 8, 2, BigInt::from(5)).unwrap();
        assert_eq!(x.to_string(), "5 * 3^-2 + O(3^8)");
        assert_eq!(x.to_string().parse::<PadicScaled>().unwrap(), x);
        let y = pad(3, 8, 7);
        assert_eq!(y.to_string(), "7 + O(3^8)");
        assert_eq!(y.to_string().parse::<PadicScaled>().unwrap(), y);
        let j = serde_json::to_string(&y).unwrap();
        assert_eq!(j, r#"{"p":3,"N":8,"scale":0,"mantissa":"7"}"#);
        assert_eq!(serde_json::from_str::<PadicScaled>(&j).unwrap(), y);
    }

    #[test]
    fn helpers() {
        assert_eq!(valuation_factorial(10, 2), 8);
        assert_eq!(valuation_factorial(9, 3), 4);
        assert_eq!(valuation(&BigInt::from(-24), 2), Some(3));
        assert_eq!(
            mod_inverse(&BigInt::from(2), &BigInt::from(27)),
            Some(BigInt::from(14))
        );
        assert_eq!(pad(3, 3, 26).centered_mantissa(), BigInt::from(-1));
    }
}

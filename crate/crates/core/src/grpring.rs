//! The group ring `Z_p[G]` truncated at `O(p^N)`, with power-of-p denominators.
//!
//! Series (`Log`, `Exp`) are summed on exact integer lifts with a cutoff taken
//! from a [`ConvergenceCertificate`]: for `z ∈ (p) + I` one has
//! `z^n ∈ p^{⌊n/d_G⌋} R`, because the augmentation ideal of `F_p[G]` is
//! nilpotent of index `d_G = 1 + Σ (p^{e_i} - 1)`.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde_json::json;

use crate::error::{Error, Result};
use crate::padic::{
    mod_inverse, pow_p, valuation, valuation_factorial, valuation_u64, PadicScaled,
};
use crate::pgroups::{max_order, GroupElement, PGroupShape};

/// Multiplication data of an enumerated group, shared by all its ring elements.
#[derive(Debug)]
pub struct GroupTable {
    shape: PGroupShape,
    elements: Vec<GroupElement>,
    pth_power: Vec<usize>,
    inverse: Vec<usize>,
}

impl GroupTable {
    pub fn new(shape: &PGroupShape) -> Result<Arc<Self>> {
        Self::with_cap(shape, max_order())
    }

    pub fn with_cap(shape: &PGroupShape, cap: u64) -> Result<Arc<Self>> {
        let elements = shape.enumerate_capped(cap)?;
        let p = shape.p() as i64;
        let pth_power = elements
            .iter()
            .map(|g| shape.index_of(&shape.pow(g, p)))
            .collect();
        let inverse = elements
            .iter()
            .map(|g| shape.index_of(&shape.inverse(g)))
            .collect();
        Ok(Arc::new(GroupTable {
            shape: shape.clone(),
            elements,
            pth_power,
            inverse,
        }))
    }

    pub fn shape(&self) -> &PGroupShape {
        &self.shape
    }

    pub fn p(&self) -> u64 {
        self.shape.p()
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &GroupElement {
        &self.elements[i]
    }

    pub fn index_of(&self, g: &GroupElement) -> usize {
        self.shape.index_of(g)
    }

    pub fn mul_index(&self, i: usize, j: usize) -> usize {
        // mixed-radix addition without materializing the product
        let moduli = self.shape.moduli();
        let (a, b) = (&self.elements[i], &self.elements[j]);
        let mut idx = 0usize;
        for ((x, y), &m) in a.exponents().iter().zip(b.exponents()).zip(moduli) {
            idx = idx * m as usize + ((x + y) % m) as usize;
        }
        idx
    }

    pub fn pth_power_index(&self, i: usize) -> usize {
        self.pth_power[i]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.inverse[i]
    }

    pub fn nilpotency_degree(&self) -> u64 {
        self.shape.nilpotency_degree()
    }
}

/// Exact integer vectors modulo `p^w`, indexed by group enumeration order.
fn conv_mod(t: &GroupTable, a: &[BigInt], b: &[BigInt], m: &BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); t.len()];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            if y.is_zero() {
                continue;
            }
            out[t.mul_index(i, j)] += x * y;
        }
    }
    for c in &mut out {
        *c = c.mod_floor(m);
    }
    out
}

fn frobenius_raw(t: &GroupTable, a: &[BigInt]) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); t.len()];
    for (i, x) in a.iter().enumerate() {
        out[t.pth_power_index(i)] += x;
    }
    out
}

/// Lower bounds for the valuation of series terms, and the resulting cutoff.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConvergenceCertificate {
    /// `d_G = 1 + Σ (p^{e_i} - 1)`
    pub nilpotency_degree: u64,
    /// Guaranteed valuation of the series argument.
    pub base_valuation: u32,
    /// Whether the argument divided by `p^base_valuation` lies in `(p) + I`.
    pub in_p_plus_i: bool,
    /// Terms `n <= n_max` are summed.
    pub n_max: u64,
    /// Every omitted term has valuation at least this.
    pub tail_valuation: i64,
}

const SCAN_LIMIT: u64 = 1 << 20;

fn floor_log(n: u64, p: u64) -> i64 {
    let mut k = 0;
    let mut q = p;
    while q <= n {
        k += 1;
        match q.checked_mul(p) {
            Some(x) => q = x,
            None => break,
        }
    }
    k
}

impl ConvergenceCertificate {
    /// Cutoff for `Σ ± z^n / n` with `v(z^n) >= c0 n + δ ⌊n/d⌋`.
    pub fn for_log(p: u64, d: u64, c0: u32, delta: bool, target: i64) -> Result<Self> {
        if c0 == 0 && !delta {
            return Err(Error::Certificate(
                "log argument is not in (p) + I".to_string(),
            ));
        }
        let g = |n: u64| -> i64 {
            i64::from(c0) * n as i64 + if delta { (n / d) as i64 } else { 0 } - floor_log(n, p)
        };
        // g is nondecreasing between consecutive powers of p, so its minimum
        // over [n*, ∞) is attained at n* or at some power of p above n*.
        let mut start = 1u64;
        'scan: loop {
            let mut n = start;
            while g(n) < target {
                n += 1;
                if n > SCAN_LIMIT {
                    return Err(Error::Certificate(format!(
                        "log tail does not reach p^{target} before n = {SCAN_LIMIT}"
                    )));
                }
            }
            let mut q = p;
            while q <= n {
                q *= p;
            }
            let mut tail = g(n);
            // past this power the values g(p^j) increase
            loop {
                tail = tail.min(g(q));
                if g(q) < target {
                    start = q + 1;
                    continue 'scan;
                }
                if q.saturating_mul(p - 1) >= 2 * d && q > n {
                    let next = q * p;
                    if g(next) >= g(q) {
                        break;
                    }
                }
                q *= p;
            }
            return Ok(ConvergenceCertificate {
                nilpotency_degree: d,
                base_valuation: c0,
                in_p_plus_i: delta,
                n_max: n - 1,
                tail_valuation: tail,
            });
        }
    }

    /// Cutoff for `Σ z^n / n!` using `v_p(n!) <= (n - 1)/(p - 1)`.
    pub fn for_exp(p: u64, d: u64, c0: u32, delta: bool, target: i64) -> Result<Self> {
        if c0 == 0 {
            return Err(Error::Certificate(
                "exp argument must have positive valuation".to_string(),
            ));
        }
        // nondecreasing in n since c0 >= 1
        let l = |n: u64| -> i64 {
            i64::from(c0) * n as i64 + if delta { (n / d) as i64 } else { 0 }
                - ((n - 1) / (p - 1)) as i64
        };
        let mut n = 1u64;
        while l(n) < target {
            n += 1;
            if n > SCAN_LIMIT || (n > 4 * d + 4 && l(n) == l(n / 2)) {
                return Err(Error::Certificate(format!(
                    "exp terms stall below p^{target}"
                )));
            }
        }
        Ok(ConvergenceCertificate {
            nilpotency_degree: d,
            base_valuation: c0,
            in_p_plus_i: delta,
            n_max: n - 1,
            tail_valuation: l(n),
        })
    }
}

/// `Σ_{n=1}^{n_max} (-1)^{n+1} y^n / n` on an exact integral `y`, returned as
/// mantissas modulo `p^{target + scale}` with the given scale.
fn log_series(
    t: &GroupTable,
    y: &[BigInt],
    cert: &ConvergenceCertificate,
    target: i64,
) -> (Vec<BigInt>, u32) {
    let p = t.p();
    let scale = (1..=cert.n_max)
        .map(|n| valuation_u64(n, p))
        .max()
        .unwrap_or(0);
    let m = pow_p(p, (target + i64::from(scale)) as u32);
    let y: Vec<BigInt> = y.iter().map(|c| c.mod_floor(&m)).collect();
    let mut acc = vec![BigInt::zero(); t.len()];
    let mut term = y.clone();
    for n in 1..=cert.n_max {
        if n > 1 {
            term = conv_mod(t, &term, &y, &m);
        }
        let vn = valuation_u64(n, p);
        let unit = BigInt::from(n / p.pow(vn));
        let mut c = mod_inverse(&unit, &m).expect("unit") * pow_p(p, scale - vn);
        if n % 2 == 0 {
            c = -c;
        }
        for (a, x) in acc.iter_mut().zip(&term) {
            *a += x * &c;
        }
    }
    for a in &mut acc {
        *a = a.mod_floor(&m);
    }
    (acc, scale)
}

/// `Σ_{n=0}^{n_max} x^n / n!` on an exact integral `x`.
fn exp_series(
    t: &GroupTable,
    x: &[BigInt],
    cert: &ConvergenceCertificate,
    target: i64,
) -> (Vec<BigInt>, u32) {
    let p = t.p();
    let scale = valuation_factorial(cert.n_max, p) as u32;
    let m = pow_p(p, (target + i64::from(scale)) as u32);
    let x: Vec<BigInt> = x.iter().map(|c| c.mod_floor(&m)).collect();
    let mut acc = vec![BigInt::zero(); t.len()];
    acc[0] = pow_p(p, scale);
    let mut term = vec![BigInt::zero(); t.len()];
    term[0] = BigInt::one();
    let mut unit_fact = BigInt::one();
    let mut v_fact = 0u32;
    for n in 1..=cert.n_max {
        term = conv_mod(t, &term, &x, &m);
        let vn = valuation_u64(n, p);
        v_fact += vn;
        unit_fact = (unit_fact * BigInt::from(n / p.pow(vn))).mod_floor(&m);
        let c = mod_inverse(&unit_fact, &m).expect("unit") * pow_p(p, scale - v_fact);
        for (a, y) in acc.iter_mut().zip(&term) {
            *a += y * &c;
        }
    }
    for a in &mut acc {
        *a = a.mod_floor(&m);
    }
    (acc, scale)
}

/// Element `Σ_g (c_g / p^scale) g` of `Q_p[G]`, known modulo `p^prec`.
///
/// Coefficients are mantissas in `[0, p^(prec + scale))`, indexed by the
/// enumeration order of `G`.
#[derive(Clone)]
pub struct GroupRingElem {
    table: Arc<GroupTable>,
    prec: i64,
    scale: u32,
    coeffs: Vec<BigInt>,
}

impl fmt::Debug for GroupRingElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GroupRingElem({self})")
    }
}

impl PartialEq for GroupRingElem {
    fn eq(&self, other: &Self) -> bool {
        self.table.shape == other.table.shape
            && self.prec == other.prec
            && self.scale == other.scale
            && self.coeffs == other.coeffs
    }
}

impl Eq for GroupRingElem {}

impl GroupRingElem {
    fn build(table: Arc<GroupTable>, prec: i64, scale: u32, coeffs: Vec<BigInt>) -> Self {
        let prec = prec.max(-i64::from(scale));
        let m = pow_p(table.p(), (prec + i64::from(scale)) as u32);
        let coeffs = coeffs.into_iter().map(|c| c.mod_floor(&m)).collect();
        GroupRingElem {
            table,
            prec,
            scale,
            coeffs,
        }
    }

    /// Integral element with the given coefficients (enumeration order).
    pub fn from_coeffs(table: &Arc<GroupTable>, prec: i64, coeffs: Vec<BigInt>) -> Result<Self> {
        Self::from_parts(table, prec, 0, coeffs)
    }

    pub fn from_parts(
        table: &Arc<GroupTable>,
        prec: i64,
        scale: u32,
        coeffs: Vec<BigInt>,
    ) -> Result<Self> {
        if coeffs.len() != table.len() {
            return Err(Error::LengthMismatch {
                expected: table.len(),
                got: coeffs.len(),
            });
        }
        if prec < 0 {
            return Err(Error::Domain(format!("negative precision {prec}")));
        }
        Ok(Self::build(table.clone(), prec, scale, coeffs))
    }

    /// `Σ c·g` over the given terms.
    pub fn from_terms(
        table: &Arc<GroupTable>,
        prec: i64,
        terms: &[(GroupElement, BigInt)],
    ) -> Result<Self> {
        let mut coeffs = vec![BigInt::zero(); table.len()];
        for (g, c) in terms {
            if !table.shape.contains(g) {
                return Err(Error::Domain("element outside the group".to_string()));
            }
            coeffs[table.index_of(g)] += c;
        }
        Self::from_coeffs(table, prec, coeffs)
    }

    pub fn scalar(table: &Arc<GroupTable>, prec: i64, c: impl Into<BigInt>) -> Result<Self> {
        let mut coeffs = vec![BigInt::zero(); table.len()];
        coeffs[0] = c.into();
        Self::from_coeffs(table, prec, coeffs)
    }

    pub fn zero(table: &Arc<GroupTable>, prec: i64) -> Result<Self> {
        Self::scalar(table, prec, 0)
    }

    pub fn one(table: &Arc<GroupTable>, prec: i64) -> Result<Self> {
        Self::scalar(table, prec, 1)
    }

    /// `c·g`
    pub fn monomial(
        table: &Arc<GroupTable>,
        prec: i64,
        g: &GroupElement,
        c: impl Into<BigInt>,
    ) -> Result<Self> {
        Self::from_terms(table, prec, &[(g.clone(), c.into())])
    }

    pub fn table(&self) -> &Arc<GroupTable> {
        &self.table
    }

    pub fn shape(&self) -> &PGroupShape {
        &self.table.shape
    }

    pub fn p(&self) -> u64 {
        self.table.p()
    }

    pub fn precision(&self) -> i64 {
        self.prec
    }

    pub fn scale(&self) -> u32 {
        self.scale
    }

    /// Mantissas in enumeration order.
    pub fn mantissas(&self) -> &[BigInt] {
        &self.coeffs
    }

    fn modulus(&self) -> BigInt {
        pow_p(self.p(), (self.prec + i64::from(self.scale)) as u32)
    }

    pub fn coefficient(&self, g: &GroupElement) -> PadicScaled {
        let c = self.coeffs[self.table.index_of(g)].clone();
        PadicScaled::from_parts(self.p(), self.prec, self.scale, c)
            .expect("valid parameters")
            .normalized()
    }

    /// Coefficients as integers in `[0, p^prec)`; fails unless integral.
    pub fn integral_coeffs(&self) -> Result<Vec<BigInt>> {
        let x = self.normalized();
        if x.scale > 0 {
            return Err(Error::NotIntegral { scale: x.scale });
        }
        Ok(x.coeffs)
    }

    /// Minimal valuation of the coefficients, capped at the precision.
    pub fn valuation(&self) -> i64 {
        let p = self.p();
        self.coeffs
            .iter()
            .filter_map(|c| valuation(c, p))
            .map(|v| i64::from(v) - i64::from(self.scale))
            .min()
            .map_or(self.prec, |v| v.min(self.prec))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn normalized(&self) -> Self {
        let p = BigInt::from(self.p());
        let mut shift = 0u32;
        while shift < self.scale
            && self
                .coeffs
                .iter()
                .all(|c| c.is_multiple_of(&pow_p(self.p(), shift + 1)))
        {
            shift += 1;
        }
        if shift == 0 {
            return self.clone();
        }
        let d = p.pow(shift);
        let coeffs = self.coeffs.iter().map(|c| c / &d).collect();
        Self::build(self.table.clone(), self.prec, self.scale - shift, coeffs)
    }

    pub fn rescaled(&self, scale: u32) -> Self {
        if scale <= self.scale {
            return self.clone();
        }
        let f = pow_p(self.p(), scale - self.scale);
        let coeffs = self.coeffs.iter().map(|c| c * &f).collect();
        Self::build(self.table.clone(), self.prec, scale, coeffs)
    }

    pub fn truncated(&self, prec: i64) -> Self {
        if prec >= self.prec {
            return self.clone();
        }
        Self::build(self.table.clone(), prec, self.scale, self.coeffs.clone())
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.table.shape != other.table.shape {
            return Err(Error::ShapeMismatch);
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let scale = self.scale.max(other.scale);
        let (a, b) = (self.rescaled(scale), other.rescaled(scale));
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| x + y).collect();
        Ok(Self::build(self.table.clone(), self.prec.min(other.prec), scale, coeffs).normalized())
    }

    pub fn neg(&self) -> Self {
        let coeffs = self.coeffs.iter().map(|c| -c).collect();
        Self::build(self.table.clone(), self.prec, self.scale, coeffs)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let prec = (self.prec + other.valuation()).min(other.prec + self.valuation());
        let scale = self.scale + other.scale;
        let prec = prec.max(-i64::from(scale));
        let m = pow_p(self.p(), (prec + i64::from(scale)) as u32);
        let coeffs = conv_mod(&self.table, &self.coeffs, &other.coeffs, &m);
        Ok(Self::build(self.table.clone(), prec, scale, coeffs).normalized())
    }

    pub fn mul_int(&self, c: &BigInt) -> Self {
        let v = valuation(c, self.p()).map_or(0, i64::from);
        let coeffs = self.coeffs.iter().map(|x| x * c).collect();
        Self::build(self.table.clone(), self.prec + v, self.scale, coeffs).normalized()
    }

    /// Product with a p-adic scalar.
    pub fn mul_scalar(&self, c: &PadicScaled) -> Result<Self> {
        let s = Self::from_parts(&self.table, c.precision().max(0), c.scale(), {
            let mut v = vec![BigInt::zero(); self.table.len()];
            v[0] = c.mantissa().clone();
            v
        })?;
        self.mul(&s)
    }

    pub fn pow(&self, n: u64) -> Result<Self> {
        let mut acc = Self::one(&self.table, self.prec.max(0))?;
        let mut base = self.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            n >>= 1;
            if n > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Division by `p`: scale up by one, precision down by one.
    pub fn div_p(&self) -> Self {
        Self::build(
            self.table.clone(),
            self.prec - 1,
            self.scale + 1,
            self.coeffs.clone(),
        )
    }

    /// Augmentation `ε(x) = Σ c_g`.
    pub fn augmentation(&self) -> PadicScaled {
        let s: BigInt = self.coeffs.iter().sum();
        PadicScaled::from_parts(self.p(), self.prec, self.scale, s)
            .expect("valid parameters")
            .normalized()
    }

    /// `Φ(Σ λ_g g) = Σ λ_g g^p`.
    pub fn frobenius(&self) -> Self {
        Self::build(
            self.table.clone(),
            self.prec,
            self.scale,
            frobenius_raw(&self.table, &self.coeffs),
        )
    }

    /// Involution `g -> g^{-1}`.
    pub fn conjugate(&self) -> Self {
        let mut out = vec![BigInt::zero(); self.table.len()];
        for (i, c) in self.coeffs.iter().enumerate() {
            out[self.table.inverse_index(i)] = c.clone();
        }
        Self::build(self.table.clone(), self.prec, self.scale, out)
    }

    /// `Δ(x) = x - Φ(x)/p`.
    pub fn delta(&self) -> Result<Self> {
        self.sub(&self.frobenius().div_p())
    }

    /// Same value at equal certified precision.
    pub fn eq_value(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    /// Whether `ε(x)` is a p-adic unit, i.e. `x` is invertible.
    pub fn is_unit(&self) -> bool {
        self.augmentation().is_unit()
    }

    /// Inverse of a unit by Newton iteration from `ε(u)^{-1}`.
    pub fn inverse(&self) -> Result<Self> {
        let u = self.normalized();
        if u.scale > 0 || !u.is_unit() {
            return Err(Error::NonUnit);
        }
        let n = u.prec;
        let m = u.modulus();
        let eps: BigInt = u.coeffs.iter().sum();
        let mut x = vec![BigInt::zero(); u.table.len()];
        x[0] = mod_inverse(&eps, &m).ok_or(Error::NonUnit)?;
        let two = {
            let mut v = vec![BigInt::zero(); u.table.len()];
            v[0] = BigInt::from(2);
            v
        };
        for _ in 0..64 {
            let ux = conv_mod(&u.table, &u.coeffs, &x, &m);
            if ux[0].is_one() && ux[1..].iter().all(Zero::is_zero) {
                return Ok(Self::build(u.table.clone(), n, 0, x));
            }
            let corr: Vec<BigInt> = two.iter().zip(&ux).map(|(a, b)| a - b).collect();
            x = conv_mod(&u.table, &x, &corr, &m);
        }
        Err(Error::Certificate(
            "Newton inversion did not converge".to_string(),
        ))
    }

    /// Integral coefficient vector with all but one entry zero, the
    /// remaining one `±1`: returns `(sign, g)` with `x = sign·g`.
    pub fn in_pm_g(&self) -> Option<(i8, GroupElement)> {
        let x = self.normalized();
        if x.scale > 0 {
            return None;
        }
        let m = x.modulus();
        let mut found = None;
        for (i, c) in x.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if found.is_some() {
                return None;
            }
            let sign = if c.is_one() {
                1
            } else if *c == &m - 1u32 {
                -1
            } else {
                return None;
            };
            found = Some((sign, x.table.element(i).clone()));
        }
        found
    }

    /// Guaranteed valuation and `(p)+I` membership of an integral vector.
    fn series_bounds(&self, raw: &[BigInt], cap: i64) -> (u32, bool) {
        let p = self.p();
        let c0 = raw
            .iter()
            .filter_map(|c| valuation(c, p))
            .map(i64::from)
            .min()
            .map_or(cap, |v| v.min(cap)) as u32;
        let q = pow_p(p, c0);
        let sum: BigInt = raw.iter().map(|c| c / &q).sum();
        (c0, sum.is_multiple_of(&BigInt::from(p)))
    }

    /// Log domain: `u - 1 ∈ (p) + I` for odd p, `u - 1 ∈ 4Z_2 + 2I + I^2` for p = 2.
    pub fn in_log_domain(&self) -> bool {
        let u = self.normalized();
        if u.scale > 0 {
            return false;
        }
        let p = self.p();
        let mut y = u.coeffs.clone();
        y[0] -= 1;
        let eps: BigInt = y.iter().sum();
        if p != 2 {
            return eps.is_multiple_of(&BigInt::from(p));
        }
        if !eps.is_multiple_of(&BigInt::from(4)) {
            return false;
        }
        // modulo 2I + I^2 + 4, an element of I is determined by Σ c_g a_i(g) mod 2
        let shape = self.shape();
        (0..shape.rank()).all(|i| {
            let s: BigInt = y
                .iter()
                .enumerate()
                .map(|(j, c)| c * BigInt::from(u.table.element(j).exponents()[i]))
                .sum();
            s.is_even()
        })
    }

    pub fn log_certificate(&self) -> Result<ConvergenceCertificate> {
        let u = self.normalized();
        let mut y = u.coeffs.clone();
        y[0] -= 1;
        let (c0, delta) = u.series_bounds(&y, u.prec);
        ConvergenceCertificate::for_log(u.p(), u.table.nilpotency_degree(), c0, delta, u.prec)
    }

    /// `Log(u) = Σ (-1)^{n+1} (u-1)^n / n` on the convergent domain.
    pub fn log(&self) -> Result<Self> {
        let u = self.normalized();
        if !u.in_log_domain() {
            return Err(Error::OutsideDomain("log"));
        }
        let n = u.prec;
        if u.p() == 2 && n < 2 {
            return Err(Error::PrecisionInsufficient { needed: 2, have: n });
        }
        let mut y = u.coeffs.clone();
        y[0] -= 1;
        let (c0, _) = u.series_bounds(&y, n);
        if i64::from(c0) >= n {
            return Self::zero(&u.table, n);
        }
        let cert = u.log_certificate()?;
        let (coeffs, scale) = log_series(&u.table, &y, &cert, n);
        Ok(Self::build(u.table.clone(), n, scale, coeffs).normalized())
    }

    pub fn exp_certificate(&self) -> Result<ConvergenceCertificate> {
        let x = self.normalized();
        if x.scale > 0 {
            return Err(Error::Certificate(
                "exp argument has negative valuation".to_string(),
            ));
        }
        let (c0, delta) = x.series_bounds(&x.coeffs, x.prec);
        ConvergenceCertificate::for_exp(x.p(), x.table.nilpotency_degree(), c0, delta, x.prec)
    }

    /// `Exp(x) = Σ x^n / n!` for `x` with certified convergent terms.
    pub fn exp(&self) -> Result<Self> {
        let x = self.normalized();
        let n = x.prec;
        let needed = if x.p() == 2 { 2 } else { 1 };
        if n < needed {
            return Err(Error::PrecisionInsufficient { needed, have: n });
        }
        if x.is_zero() {
            return Self::one(&x.table, n);
        }
        let cert = x.exp_certificate()?;
        let (coeffs, scale) = exp_series(&x.table, &x.coeffs, &cert, n);
        Ok(Self::build(x.table.clone(), n, scale, coeffs).normalized())
    }

    /// `Γ_G(u) = Δ(Log u)`, extended to all units through `u^k` with
    /// `k = (p-1)p^e` (p odd) or `2^{e+1}` (p = 2), `p^e` the exponent of G.
    ///
    /// The input is lifted exactly; since `Γ_G(u(1 + p^N z)) ≡ Γ_G(u)` modulo
    /// `p^{N-1}`, the result is certified to `N - 1` digits.
    pub fn gamma(&self) -> Result<Self> {
        let u = self.normalized();
        if u.scale > 0 || !u.is_unit() {
            return Err(Error::NonUnit);
        }
        let p = u.p();
        let n = u.prec;
        if n < 2 {
            return Err(Error::PrecisionInsufficient { needed: 2, have: n });
        }
        let e = u.shape().max_exponent();
        let (k, c0) = if p == 2 {
            (1u64 << (e + 1), 2)
        } else {
            ((p - 1) * p.pow(e), 1)
        };
        let vk = valuation_u64(k, p);
        let target = n + i64::from(vk);
        let cert =
            ConvergenceCertificate::for_log(p, u.table.nilpotency_degree(), c0, false, target)?;
        let log_scale = (1..=cert.n_max)
            .map(|j| valuation_u64(j, p))
            .max()
            .unwrap_or(0);
        let m = pow_p(p, (target + i64::from(log_scale)) as u32);
        // w = u^k on the exact lift
        let mut w = vec![BigInt::zero(); u.table.len()];
        w[0] = BigInt::one();
        let mut base = u.coeffs.clone();
        let mut kk = k;
        while kk > 0 {
            if kk & 1 == 1 {
                w = conv_mod(&u.table, &w, &base, &m);
            }
            kk >>= 1;
            if kk > 0 {
                base = conv_mod(&u.table, &base, &base, &m);
            }
        }
        let mut y = w;
        y[0] -= 1;
        let q = pow_p(p, c0);
        if !y.iter().all(|c| c.is_multiple_of(&q)) {
            return Err(Error::Certificate(
                "u^k is not in the convergent domain".to_string(),
            ));
        }
        let (log_w, scale) = log_series(&u.table, &y, &cert, target);
        // Log(w) - Φ(Log(w))/p at scale + 1, then divide by k
        let phi = frobenius_raw(&u.table, &log_w);
        let kp = BigInt::from(k / p.pow(vk));
        let inv = mod_inverse(&kp, &m).ok_or(Error::NonUnit)?;
        let pb = BigInt::from(p);
        let coeffs: Vec<BigInt> = log_w
            .iter()
            .zip(&phi)
            .map(|(a, b)| ((a * &pb - b) * &inv).mod_floor(&m))
            .collect();
        let g = Self::build(u.table.clone(), n - 1, scale + 1 + vk, coeffs).normalized();
        if g.scale > 0 {
            return Err(Error::NotIntegral { scale: g.scale });
        }
        Ok(g)
    }

    /// `Δ^{-1}(v) = (p/(p-1)) ε(v) + Σ_{n<e} Φ^n(v_0)/p^n` with `v_0 = v - ε(v)`.
    pub fn delta_inverse(&self) -> Result<Self> {
        let p = self.p();
        let e = self.shape().max_exponent();
        let eps = self.augmentation();
        let eps_elem = Self::from_parts(&self.table, eps.precision().max(0), eps.scale(), {
            let mut v = vec![BigInt::zero(); self.table.len()];
            v[0] = eps.mantissa().clone();
            v
        })?;
        let v0 = self.sub(&eps_elem)?;
        let inv = mod_inverse(
            &BigInt::from(p - 1),
            &pow_p(p, (self.prec + i64::from(self.scale) + 2) as u32),
        )
        .expect("p - 1 is a unit");
        let mut acc = eps_elem.mul_int(&(inv * BigInt::from(p)));
        let mut term = v0;
        for _ in 0..e {
            acc = acc.add(&term)?;
            term = term.frobenius().div_p();
        }
        Ok(acc)
    }

    /// `E_G(v) = Exp(Δ^{-1}(v))`, and `1` for `v = λg` with `g ≠ 1`.
    pub fn e_g(&self) -> Result<Self> {
        let v = self.normalized();
        let support: Vec<usize> = (0..v.coeffs.len())
            .filter(|&i| !v.coeffs[i].is_zero())
            .collect();
        if support.len() == 1 && support[0] != 0 {
            return Self::one(&v.table, v.prec);
        }
        v.delta_inverse()?.exp()
    }

    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "group": self.shape().to_string(),
            "p": self.p(),
            "N": self.prec,
            "scale": self.scale,
            "coeffs": self.coeffs.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for GroupRingElem {
    /// Polynomial in the generators with centered integer coefficients, e.g.
    /// `1 + 3*g0 - g0^2*g1 + O(3^8)`, divided by `p^scale` when scaled.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m = self.modulus();
        let half = &m / 2;
        let mut s = String::new();
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let c = if *c > half { c - &m } else { c.clone() };
            let word = self.shape().word(self.table.element(i));
            let neg = c.is_negative();
            let a = c.abs();
            let body = match (word.as_str(), a.is_one()) {
                ("1", _) => a.to_string(),
                (w, true) => w.to_string(),
                (w, false) => format!("{a}*{w}"),
            };
            if s.is_empty() {
                s = if neg { format!("-{body}") } else { body };
            } else {
                s += if neg { " - " } else { " + " };
                s += &body;
            }
        }
        if s.is_empty() {
            s = "0".to_string();
        }
        let p = self.p();
        if self.scale > 0 {
            write!(f, "({s}) * {p}^-{} + O({p}^{})", self.scale, self.prec)
        } else {
            write!(f, "{s} + O({p}^{})", self.prec)
        }
    }
}

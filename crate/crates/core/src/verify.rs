//! Batch verification suites with machine-readable reports.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;
use std::time::Instant;

use num_bigint::BigInt;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::grpring::{GroupRingElem, GroupTable};
use crate::homology::{hc1_closed, hc1_presentation, kaehler_mod_di};
use crate::ktmaps::{parse_symbol, KtContext};
use crate::padic::pow_p;
use crate::pgroups::{groups_up_to, is_prime, PGroupShape};
use crate::structure::{
    example1, example2, k2_cyclic_corollary, k2_cyclic_group_ring, k2c_closed,
    tensor_cyclic_identity_check,
};

pub const SCHEMA: &str = "k2padic/1";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Suite {
    Eq1,
    Kaehler,
    Gamma,
    Splitting,
    Section,
    Wh2,
    ThmB,
    Corollary,
    Examples,
    All,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Eq1,
        Suite::Kaehler,
        Suite::Gamma,
        Suite::Splitting,
        Suite::Section,
        Suite::Wh2,
        Suite::ThmB,
        Suite::Corollary,
        Suite::Examples,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Eq1 => "eq1",
            Suite::Kaehler => "kaehler",
            Suite::Gamma => "gamma",
            Suite::Splitting => "splitting",
            Suite::Section => "section",
            Suite::Wh2 => "wh2",
            Suite::ThmB => "thmB",
            Suite::Corollary => "corollary",
            Suite::Examples => "examples",
            Suite::All => "all",
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .iter()
            .chain(std::iter::once(&Suite::All))
            .find(|x| x.name() == s)
            .copied()
            .ok_or_else(|| Error::Parse(format!("unknown suite '{s}'")))
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct VerifyOptions {
    /// Replaces every suite's default order bound.
    pub max_order: Option<u64>,
    pub samples: Option<usize>,
    pub seed: u64,
    pub precision: Option<i64>,
    /// Run only the check with this name.
    pub only: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckRecord {
    pub name: String,
    pub inputs_digest: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reproducer: Option<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub suite: String,
    pub parameters: VerifyOptions,
    pub checks: Vec<CheckRecord>,
    pub summary: Summary,
    pub duration_ms: u128,
}

impl VerificationReport {
    pub fn all_passed(&self) -> bool {
        self.summary.failed == 0
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckRecord> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// Checks whose name starts with `prefix`.
    pub fn with_prefix<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a CheckRecord> {
        self.checks
            .iter()
            .filter(move |c| c.name.starts_with(prefix))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let tag = if c.pass { "PASS" } else { "FAIL" };
            out.push_str(&format!("{tag} {}\n", c.name));
            if let Some(w) = &c.witness {
                out.push_str(&format!("     witness: {w}\n"));
            }
            if let Some(r) = &c.reproducer {
                out.push_str(&format!("     reproduce: {r}\n"));
            }
        }
        out.push_str(&format!(
            "{}: {} passed, {} failed, {} total ({} ms)\n",
            self.suite,
            self.summary.passed,
            self.summary.failed,
            self.summary.total,
            self.duration_ms
        ));
        out
    }
}

type CheckFn = Box<dyn Fn() -> std::result::Result<(), String> + Send + Sync>;

struct Pending {
    name: String,
    inputs: String,
    run: CheckFn,
}

fn check(
    name: String,
    inputs: String,
    f: impl Fn() -> std::result::Result<(), String> + Send + Sync + 'static,
) -> Pending {
    Pending {
        name,
        inputs,
        run: Box::new(f),
    }
}

fn fnv1a(s: &str) -> u64 {
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in s.bytes() {
        h ^= u64::from(b);
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h
}

fn err(e: Error) -> String {
    e.to_string()
}

fn expect_eq<T: PartialEq + fmt::Display>(
    what: &str,
    a: &T,
    b: &T,
) -> std::result::Result<(), String> {
    if a == b {
        Ok(())
    } else {
        Err(format!("{what}: {a} != {b}"))
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    (2..=n).filter(|&p| is_prime(p)).collect()
}

/// Nontrivial abelian p-groups of order at most `bound`, over every prime.
fn groups_all_primes(bound: u64) -> Vec<PGroupShape> {
    primes_up_to(bound)
        .into_iter()
        .flat_map(|p| groups_up_to(p, bound).expect("prime"))
        .collect()
}

fn shapes(list: &[&str]) -> Vec<PGroupShape> {
    list.iter()
        .map(|s| s.parse().expect("valid group"))
        .collect()
}

const GAMMA_GROUPS: [&str; 6] = ["C2", "C4", "C3", "C9", "C2xC2", "C3xC3"];
const SPLITTING_GROUPS: [&str; 5] = ["C2", "C3", "C4", "C2xC2", "C9"];
const TILDE_GROUPS: [&str; 3] = ["C2", "C4", "C2xC2"];

pub const EXAMPLE2_TUPLES: [(u64, u32, u32); 4] = [(2, 1, 1), (2, 1, 2), (2, 2, 1), (3, 1, 1)];

/// `(p, k, n)` for the homocyclic examples: p = 2 with `|G| ≤ 256`, plus odd cases.
pub fn example1_tuples() -> Vec<(u64, u32, u32)> {
    let mut out = Vec::new();
    for k in 1..=8u32 {
        for n in 1..=8u32 {
            if k * n <= 8 {
                out.push((2, k, n));
            }
        }
    }
    out.extend([(3, 1, 1), (3, 1, 2), (3, 2, 1), (5, 1, 1)]);
    out
}

// ---------------------------------------------------------------------------
// sampling

fn sample_rng(seed: u64, name: &str) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed ^ fnv1a(name))
}

fn random_coeffs(rng: &mut ChaCha8Rng, len: usize, p: u64, prec: i64) -> Vec<BigInt> {
    let bound = u32::try_from(prec)
        .ok()
        .and_then(|e| p.checked_pow(e))
        .unwrap_or(u64::MAX);
    (0..len)
        .map(|_| BigInt::from(rng.gen_range(0..bound)))
        .collect()
}

fn random_elem(rng: &mut ChaCha8Rng, t: &Arc<GroupTable>, prec: i64) -> Result<GroupRingElem> {
    GroupRingElem::from_coeffs(t, prec, random_coeffs(rng, t.len(), t.p(), prec))
}

/// Random element of the augmentation ideal.
fn random_ideal_elem(
    rng: &mut ChaCha8Rng,
    t: &Arc<GroupTable>,
    prec: i64,
) -> Result<GroupRingElem> {
    let mut c = random_coeffs(rng, t.len(), t.p(), prec);
    let s: BigInt = c[1..].iter().sum();
    c[0] = -s;
    GroupRingElem::from_coeffs(t, prec, c)
}

fn random_sign_monomial(
    rng: &mut ChaCha8Rng,
    t: &Arc<GroupTable>,
    prec: i64,
) -> Result<GroupRingElem> {
    let h = t.element(rng.gen_range(0..t.len())).clone();
    let sign = if rng.gen_bool(0.5) { 1 } else { -1 };
    GroupRingElem::monomial(t, prec, &h, sign)
}

/// `±h (1 + p a + y)` with `y ∈ I`: a unit whose Teichmüller factor is `±1`.
pub fn sample_gamma_unit(
    rng: &mut ChaCha8Rng,
    t: &Arc<GroupTable>,
    prec: i64,
) -> Result<GroupRingElem> {
    let one = GroupRingElem::one(t, prec)?;
    let a = random_elem(rng, t, prec)?.mul_int(&BigInt::from(t.p()));
    let y = random_ideal_elem(rng, t, prec)?;
    one.add(&a)?
        .add(&y)?
        .mul(&random_sign_monomial(rng, t, prec)?)
}

/// `±h (1 + p r)` for odd p, `±h (1 + 4 r)` for p = 2.
pub fn sample_splitting_unit(
    rng: &mut ChaCha8Rng,
    t: &Arc<GroupTable>,
    prec: i64,
) -> Result<GroupRingElem> {
    let q = if t.p() == 2 { 4 } else { t.p() };
    let r = random_elem(rng, t, prec)?.mul_int(&BigInt::from(q));
    GroupRingElem::one(t, prec)?
        .add(&r)?
        .mul(&random_sign_monomial(rng, t, prec)?)
}

/// `1 + p r` for odd p, `(1 + 2 r)^2` for p = 2.
pub fn sample_log_unit(
    rng: &mut ChaCha8Rng,
    t: &Arc<GroupTable>,
    prec: i64,
) -> Result<GroupRingElem> {
    let r = random_elem(rng, t, prec)?.mul_int(&BigInt::from(t.p()));
    let u = GroupRingElem::one(t, prec)?.add(&r)?;
    if t.p() == 2 {
        u.mul(&u)
    } else {
        Ok(u)
    }
}

// ---------------------------------------------------------------------------
// suites

fn eq1_checks(opts: &VerifyOptions) -> Vec<Pending> {
    let mut groups = Vec::new();
    for (p, bound) in [(2, 81), (3, 81), (5, 125)] {
        groups.extend(groups_up_to(p, opts.max_order.unwrap_or(bound)).expect("prime"));
    }
    groups
        .into_iter()
        .map(|g| {
            check(format!("eq1/{}", g.alias()), g.to_string(), move || {
                let pres = hc1_presentation(&g).map_err(err)?;
                let closed = hc1_closed(&g).map_err(err)?;
                expect_eq("presentation vs closed form", pres.structure(), &closed)
            })
        })
        .collect()
}

fn kaehler_checks(opts: &VerifyOptions) -> Vec<Pending> {
    groups_all_primes(opts.max_order.unwrap_or(64))
        .into_iter()
        .map(|g| {
            check(format!("kaehler/{}", g.alias()), g.to_string(), move || {
                let k = kaehler_mod_di(&g).map_err(err)?;
                let closed = hc1_closed(&g).map_err(err)?;
                expect_eq("Omega/dI vs closed form", &k, &closed)
            })
        })
        .collect()
}

fn gamma_checks(opts: &VerifyOptions) -> Vec<Pending> {
    let prec = opts.precision.unwrap_or(8);
    let samples = opts.samples.unwrap_or(100);
    let seed = opts.seed;
    let mut out = Vec::new();
    for g in shapes(&GAMMA_GROUPS) {
        let alias = g.alias();
        let table = match GroupTable::new(&g) {
            Ok(t) => t,
            Err(e) => {
                let msg = e.to_string();
                out.push(check(
                    format!("gamma/{alias}/table"),
                    g.to_string(),
                    move || Err(msg.clone()),
                ));
                continue;
            }
        };
        let t = table.clone();
        out.push(check(
            format!("gamma/{alias}/kernel"),
            format!("{g} N={prec}"),
            move || {
                for h in t.elements() {
                    for sign in [1, -1] {
                        let u = GroupRingElem::monomial(&t, prec, h, sign).map_err(err)?;
                        let v = u.gamma().map_err(err)?;
                        if !v.is_zero() {
                            return Err(format!("Gamma({u}) = {v}"));
                        }
                    }
                }
                Ok(())
            },
        ));
        for i in 0..samples {
            let name = format!("gamma/{alias}/hom#{i:03}");
            let t = table.clone();
            let key = name.clone();
            out.push(check(
                name,
                format!("{g} N={prec} seed={seed} i={i}"),
                move || {
                    let mut rng = sample_rng(seed, &key);
                    let u = sample_gamma_unit(&mut rng, &t, prec).map_err(err)?;
                    let v = sample_gamma_unit(&mut rng, &t, prec).map_err(err)?;
                    let gu = u.gamma().map_err(|e| format!("Gamma({u}): {e}"))?;
                    let gv = v.gamma().map_err(|e| format!("Gamma({v}): {e}"))?;
                    let uv = u.mul(&v).map_err(err)?;
                    let guv = uv.gamma().map_err(|e| format!("Gamma({uv}): {e}"))?;
                    for x in [&gu, &gv, &guv] {
                        if x.scale() != 0 {
                            return Err(format!("non-integral output {x}"));
                        }
                    }
                    let sum = gu.add(&gv).map_err(err)?;
                    if !guv.eq_value(&sum) {
                        return Err(format!(
                            "u = {u}, v = {v}: Gamma(uv) = {guv}, Gamma(u)+Gamma(v) = {sum}"
                        ));
                    }
                    Ok(())
                },
            ));
        }
        for i in 0..samples {
            let name = format!("gamma/{alias}/explog#{i:03}");
            let t = table.clone();
            let key = name.clone();
            out.push(check(
                name,
                format!("{g} N={prec} seed={seed} i={i}"),
                move || {
                    let mut rng = sample_rng(seed, &key);
                    let u = sample_log_unit(&mut rng, &t, prec).map_err(err)?;
                    let l = u.log().map_err(|e| format!("Log({u}): {e}"))?;
                    let back = l.exp().map_err(|e| format!("Exp({l}): {e}"))?;
                    if !back.eq_value(&u.truncated(back.precision())) {
                        return Err(format!("u = {u}, Exp(Log u) = {back}"));
                    }
                    Ok(())
                },
            ));
        }
    }
    for g in shapes(&TILDE_GROUPS) {
        out.push(check(
            format!("gamma/{}/tilde-minus-one", g.alias()),
            g.to_string(),
            move || {
                let c = KtContext::new(&g).map_err(err)?;
                let t = c.table().clone();
                for i in 0..g.rank() {
                    let minus =
                        parse_symbol(&t, prec, &format!("g=g{i}; u=zeta:-1")).map_err(err)?;
                    let with_g =
                        parse_symbol(&t, prec, &format!("g=g{i}; u=h:g{i}")).map_err(err)?;
                    let a = c.gamma2_ext(&minus).map_err(err)?;
                    let b = c.gamma2_ext(&with_g).map_err(err)?;
                    if !c.hc1().group().equivalent(&a, &b).map_err(err)? {
                        return Err(format!("g{i}: {{g,-1}} and {{g,g}} differ"));
                    }
                }
                Ok(())
            },
        ));
    }
    out
}

fn splitting_checks(opts: &VerifyOptions) -> Vec<Pending> {
    let prec = opts.precision.unwrap_or(10);
    let samples = opts.samples.unwrap_or(50);
    let seed = opts.seed;
    let mut out = Vec::new();
    for g in shapes(&SPLITTING_GROUPS) {
        let table = GroupTable::new(&g).expect("small group");
        for i in 0..samples {
            let name = format!("splitting/{}/#{i:03}", g.alias());
            let t = table.clone();
            let key = name.clone();
            out.push(check(
                name,
                format!("{g} N={prec} seed={seed} i={i}"),
                move || {
                    let mut rng = sample_rng(seed, &key);
                    let u = sample_splitting_unit(&mut rng, &t, prec).map_err(err)?;
                    let back = u
                        .gamma()
                        .and_then(|x| x.e_g())
                        .map_err(|e| format!("u = {u}: {e}"))?;
                    let q = back.mul(&u.inverse().map_err(err)?).map_err(err)?;
                    if q.in_pm_g().is_none() {
                        return Err(format!("u = {u}: E_G(Gamma(u))/u = {q}"));
                    }
                    Ok(())
                },
            ));
        }
    }
    out
}

fn section_checks(opts: &VerifyOptions) -> Vec<Pending> {
    groups_all_primes(opts.max_order.unwrap_or(32))
        .into_iter()
        .map(|g| {
            check(format!("section/{}", g.alias()), g.to_string(), move || {
                let c = KtContext::new(&g).map_err(err)?;
                for i in 0..g.rank() {
                    for j in 0..g.rank() {
                        let w = c.h2().wedge(&g.generator(i), &g.generator(j));
                        let back = c.omega2(&c.epsilon2(&w));
                        if !c.h2().group().equivalent(&back, &w).map_err(err)? {
                            return Err(format!("omega2(epsilon2(g{i} ^ g{j})) != g{i} ^ g{j}"));
                        }
                    }
                }
                let img = c.section_image_order().map_err(err)?;
                let h2 = c
                    .h2()
                    .group()
                    .order()
                    .ok_or_else(|| err(Error::InfiniteSubgroup))?;
                expect_eq("|epsilon2 image| vs |H2|", &img, &h2)
            })
        })
        .collect()
}

fn wh2_checks(opts: &VerifyOptions) -> Vec<Pending> {
    let mut out: Vec<Pending> = groups_all_primes(opts.max_order.unwrap_or(81))
        .into_iter()
        .map(|g| {
            check(format!("wh2/{}", g.alias()), g.to_string(), move || {
                let c = KtContext::new(&g).map_err(err)?;
                c.wh2_order().map(|_| ()).map_err(err)
            })
        })
        .collect();
    out.push(check("wh2/C2xC2/orders".into(), "2:[1,1]".into(), || {
        let c = KtContext::new(&"C2xC2".parse().expect("valid")).map_err(err)?;
        let hc1 = c.hc1().group().order().unwrap_or_default();
        let h2 = c.h2().group().order().unwrap_or_default();
        let wh2 = c.wh2_order().map_err(err)?;
        let got = format!("({hc1}, {h2}, {wh2})");
        expect_eq("(|HC1|, |H2|, |Wh2|)", &got, &"(32, 8, 4)".to_string())
    }));
    out
}

fn thm_b_checks() -> Vec<Pending> {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        for s in 2..=5u32 {
            for n in 1..=4u32 {
                out.push(check(
                    format!("thmB/identity/p{p}s{s}n{n}"),
                    format!("p={p} s={s} n={n}"),
                    move || {
                        let r = tensor_cyclic_identity_check(p, s, n).map_err(err)?;
                        if r.pass {
                            Ok(())
                        } else {
                            Err(format!("{} vs {}", r.enumerated, r.term_by_term))
                        }
                    },
                ));
            }
        }
    }
    for p in [2u64, 3, 5] {
        for s in 2..=5u32 {
            for n in 1..=4u32 {
                out.push(check(
                    format!("thmB/exponent/p{p}s{s}n{n}"),
                    format!("p={p} s={s} n={n}"),
                    move || {
                        let g = k2_cyclic_group_ring(p, s, n).map_err(err)?;
                        let q = pow_p(p, s - 1);
                        match g.factors().iter().find(|f| !(&q % *f).is_zero()) {
                            None => Ok(()),
                            Some(f) => Err(format!("factor {f} does not divide {q}")),
                        }
                    },
                ));
            }
        }
    }
    out
}

fn corollary_checks() -> Vec<Pending> {
    let mut out = Vec::new();
    for p in [2u64, 3, 5] {
        for s in 2..=5u32 {
            for n in 1..=4u32 {
                out.push(check(
                    format!("corollary/p{p}s{s}n{n}"),
                    format!("p={p} s={s} n={n}"),
                    move || {
                        let a = k2_cyclic_corollary(p, s, n).map_err(err)?;
                        let b = k2_cyclic_group_ring(p, s, n).map_err(err)?;
                        expect_eq("corollary vs term-by-term", &a, &b)
                    },
                ));
            }
        }
    }
    out
}

fn examples_checks() -> Vec<Pending> {
    let mut out = Vec::new();
    for (p, k, n) in example1_tuples() {
        out.push(check(
            format!("examples/ex1/p{p}k{k}n{n}"),
            format!("p={p} k={k} n={n}"),
            move || {
                let g = PGroupShape::homocyclic(p, n, k as usize).map_err(err)?;
                expect_eq(
                    "formula vs enumeration",
                    &example1(p, k, n).map_err(err)?,
                    &k2c_closed(&g).map_err(err)?,
                )
            },
        ));
    }
    for (p, k, n) in EXAMPLE2_TUPLES {
        out.push(check(
            format!("examples/ex2/p{p}k{k}n{n}"),
            format!("p={p} k={k} n={n}"),
            move || {
                let mut e = vec![1; k as usize];
                e.push(n);
                let g = PGroupShape::new(p, &e).map_err(err)?;
                expect_eq(
                    "formula vs enumeration",
                    &example2(p, k, n).map_err(err)?,
                    &k2c_closed(&g).map_err(err)?,
                )
            },
        ));
    }
    out
}

fn pending_for(suite: Suite, opts: &VerifyOptions) -> Vec<Pending> {
    match suite {
        Suite::Eq1 => eq1_checks(opts),
        Suite::Kaehler => kaehler_checks(opts),
        Suite::Gamma => gamma_checks(opts),
        Suite::Splitting => splitting_checks(opts),
        Suite::Section => section_checks(opts),
        Suite::Wh2 => wh2_checks(opts),
        Suite::ThmB => thm_b_checks(),
        Suite::Corollary => corollary_checks(),
        Suite::Examples => examples_checks(),
        Suite::All => Suite::ALL
            .iter()
            .flat_map(|s| pending_for(*s, opts))
            .collect(),
    }
}

fn reproducer(name: &str, opts: &VerifyOptions) -> String {
    let suite = name.split('/').next().unwrap_or(name);
    let mut cmd = format!("k2padic verify --suite {suite} --seed {}", opts.seed);
    if let Some(m) = opts.max_order {
        cmd.push_str(&format!(" --max-order {m}"));
    }
    if let Some(s) = opts.samples {
        cmd.push_str(&format!(" --samples {s}"));
    }
    if let Some(n) = opts.precision {
        cmd.push_str(&format!(" --precision {n}"));
    }
    cmd.push_str(&format!(" --only '{name}'"));
    cmd
}

/// Runs a suite. Checks run in parallel; records are sorted by name.
pub fn run_suite(suite: Suite, opts: &VerifyOptions) -> VerificationReport {
    let start = Instant::now();
    let mut pending = pending_for(suite, opts);
    if let Some(only) = &opts.only {
        pending.retain(|c| &c.name == only);
    }
    let mut checks: Vec<CheckRecord> = pending
        .par_iter()
        .map(|c| {
            let outcome = (c.run)();
            let pass = outcome.is_ok();
            CheckRecord {
                name: c.name.clone(),
                inputs_digest: format!("{:016x}", fnv1a(&c.inputs)),
                pass,
                witness: outcome.err(),
                reproducer: (!pass).then(|| reproducer(&c.name, opts)),
            }
        })
        .collect();
    checks.sort_by(|a, b| a.name.cmp(&b.name));
    let passed = checks.iter().filter(|c| c.pass).count();
    VerificationReport {
        schema: SCHEMA,
        suite: suite.name().to_string(),
        parameters: opts.clone(),
        summary: Summary {
            total: checks.len(),
            passed,
            failed: checks.len() - passed,
        },
        checks,
        duration_ms: start.elapsed().as_millis(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_roundtrip() {
        for s in Suite::ALL {
            assert_eq!(s.name().parse::<Suite>().unwrap(), s);
        }
        assert_eq!("all".parse::<Suite>().unwrap(), Suite::All);
        assert!("bogus".parse::<Suite>().is_err());
    }

    #[test]
    fn deterministic_reports() {
        let opts = VerifyOptions {
            samples: Some(3),
            seed: 7,
            ..Default::default()
        };
        let a = run_suite(Suite::Splitting, &opts);
        let b = run_suite(Suite::Splitting, &opts);
        assert!(a.all_passed(), "{}", a.to_text());
        let strip = |r: &VerificationReport| {
            let mut v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
            v.as_object_mut().unwrap().remove("duration_ms");
            v
        };
        assert_eq!(strip(&a), strip(&b));
        assert_eq!(a.summary.total, 15);
    }

    #[test]
    fn only_filter_and_reproducer() {
        let opts = VerifyOptions {
            seed: 1,
            only: Some("corollary/p3s4n2".into()),
            ..Default::default()
        };
        let r = run_suite(Suite::Corollary, &opts);
        assert_eq!(r.checks.len(), 1);
        assert!(r.all_passed());
        assert_eq!(
            reproducer(
                "gamma/C3/hom#004",
                &VerifyOptions {
                    seed: 9,
                    samples: Some(5),
                    ..Default::default()
                }
            ),
            "k2padic verify --suite gamma --seed 9 --samples 5 --only 'gamma/C3/hom#004'"
        );
    }

    #[test]
    fn sampled_units_are_units() {
        let t = GroupTable::new(&"C3xC3".parse().unwrap()).unwrap();
        let mut rng = sample_rng(3, "x");
        for _ in 0..10 {
            assert!(sample_gamma_unit(&mut rng, &t, 6).unwrap().is_unit());
            assert!(sample_splitting_unit(&mut rng, &t, 6).unwrap().is_unit());
            assert!(sample_log_unit(&mut rng, &t, 6).unwrap().in_log_domain());
        }
    }
}

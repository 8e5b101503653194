//! Acceptance gate: one PASS/FAIL line per criterion.

use k2padic::homology::{hc1_closed, hc1_presentation, kaehler_mod_di};
use k2padic::ktmaps::KtContext;
use k2padic::pgroups::{groups_up_to, PGroupShape};
use k2padic::structure::{
    example1, example2, k2_cyclic_corollary, k2_cyclic_group_ring, k2c_closed,
};
use k2padic::verify::{run_suite, Suite, VerificationReport, VerifyOptions};
use k2padic::{BigInt, InvariantFactorGroup};

const SEED: u64 = 42;

struct Gate {
    lines: Vec<(usize, bool, String)>,
}

impl Gate {
    fn record(&mut self, n: usize, pass: bool, detail: String) {
        self.lines.push((n, pass, detail));
    }
}

fn report(suite: Suite) -> VerificationReport {
    run_suite(
        suite,
        &VerifyOptions {
            seed: SEED,
            ..Default::default()
        },
    )
}

/// Passes when exactly `expected` checks match `prefix` and none failed.
fn prefix_ok(r: &VerificationReport, prefix: &str, expected: usize) -> (bool, String) {
    let checks: Vec<_> = r.with_prefix(prefix).collect();
    let failed: Vec<&str> = checks
        .iter()
        .filter(|c| !c.pass)
        .map(|c| c.name.as_str())
        .collect();
    let ok = checks.len() == expected && failed.is_empty();
    let mut detail = format!(
        "{} checks under {prefix} (expected {expected})",
        checks.len()
    );
    if let Some(f) = failed.first() {
        detail.push_str(&format!(", first failure {f}"));
    }
    (ok, detail)
}

fn ifg(orders: &[u64]) -> InvariantFactorGroup {
    let v: Vec<BigInt> = orders.iter().map(|&x| BigInt::from(x)).collect();
    InvariantFactorGroup::from_cyclic_orders(&v, 0)
}

fn criterion1() -> (bool, String) {
    let mut groups = Vec::new();
    for (p, bound) in [(2, 81), (3, 81), (5, 125)] {
        groups.extend(groups_up_to(p, bound).unwrap());
    }
    let bad: Vec<String> = groups
        .iter()
        .filter(|g| hc1_presentation(g).unwrap().structure() != &hc1_closed(g).unwrap())
        .map(|g| g.alias())
        .collect();
    (
        bad.is_empty() && groups.len() == 46,
        format!("{} groups, mismatches {bad:?}", groups.len()),
    )
}

fn criterion2() -> (bool, String) {
    let mut n = 0;
    let mut bad = Vec::new();
    for p in [
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61,
    ] {
        for g in groups_up_to(p, 64).unwrap() {
            n += 1;
            if kaehler_mod_di(&g).unwrap() != hc1_closed(&g).unwrap() {
                bad.push(g.alias());
            }
        }
    }
    (bad.is_empty(), format!("{n} groups, mismatches {bad:?}"))
}

fn criterion3() -> (bool, String) {
    let mut n = 0;
    let mut bad = Vec::new();
    for p in [2u64, 3, 5] {
        for s in 2..=5 {
            for k in 1..=4 {
                n += 1;
                if k2_cyclic_corollary(p, s, k).unwrap() != k2_cyclic_group_ring(p, s, k).unwrap() {
                    bad.push((p, s, k));
                }
            }
        }
    }
    (
        bad.is_empty() && n == 48,
        format!("{n} tuples, mismatches {bad:?}"),
    )
}

fn criterion5() -> (bool, String) {
    let mut bad = Vec::new();
    let tuples = k2padic::verify::example1_tuples();
    for &(p, k, n) in &tuples {
        let g = PGroupShape::homocyclic(p, n, k as usize).unwrap();
        if example1(p, k, n).unwrap() != k2c_closed(&g).unwrap() {
            bad.push((p, k, n));
        }
    }
    let anchor = example1(2, 2, 1).unwrap() == ifg(&[2; 5]);
    (
        bad.is_empty() && anchor,
        format!(
            "{} tuples, anchor (Z/2)^5 {anchor}, mismatches {bad:?}",
            tuples.len()
        ),
    )
}

fn criterion6() -> (bool, String) {
    let mut bad = Vec::new();
    for (p, k, n) in k2padic::verify::EXAMPLE2_TUPLES {
        let mut e = vec![1; k as usize];
        e.push(n);
        let g = PGroupShape::new(p, &e).unwrap();
        if example2(p, k, n).unwrap() != k2c_closed(&g).unwrap() {
            bad.push((p, k, n));
        }
    }
    (bad.is_empty(), format!("4 tuples, mismatches {bad:?}"))
}

fn criterion11() -> (bool, String) {
    let mut n = 0;
    let mut bad = Vec::new();
    for p in [
        2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79,
    ] {
        for g in groups_up_to(p, 81).unwrap() {
            n += 1;
            if KtContext::new(&g).unwrap().wh2_order().is_err() {
                bad.push(g.alias());
            }
        }
    }
    let c = KtContext::new(&"C2xC2".parse().unwrap()).unwrap();
    let triple = (
        c.hc1().group().order().unwrap(),
        c.h2().group().order().unwrap(),
        c.wh2_order().unwrap(),
    );
    let want = (BigInt::from(32), BigInt::from(8), BigInt::from(4));
    (
        bad.is_empty() && triple == want,
        format!(
            "{n} groups, C2xC2 triple ({}, {}, {}), failures {bad:?}",
            triple.0, triple.1, triple.2
        ),
    )
}

fn criterion13() -> (bool, String) {
    for p in [2u64, 3, 5] {
        for s in 2..=5u32 {
            for n in 1..=4 {
                let q = BigInt::from(p).pow(s - 1);
                let g = k2_cyclic_group_ring(p, s, n).unwrap();
                if let Some(f) = g.factors().iter().find(|f| &q % *f != BigInt::from(0)) {
                    return (false, format!("p={p} s={s} n={n}: factor {f}"));
                }
            }
        }
    }
    (true, "48 tuples".into())
}

fn main() {
    let mut gate = Gate { lines: Vec::new() };

    let (ok, d) = criterion1();
    gate.record(1, ok, d);
    let (ok, d) = criterion2();
    gate.record(2, ok, d);
    let (ok, d) = criterion3();
    gate.record(3, ok, d);

    let thm_b = report(Suite::ThmB);
    let (ok, d) = prefix_ok(&thm_b, "thmB/identity/", 32);
    gate.record(4, ok, d);

    let (ok, d) = criterion5();
    gate.record(5, ok, d);
    let (ok, d) = criterion6();
    gate.record(6, ok, d);

    let gamma = report(Suite::Gamma);
    let mut ok7 = true;
    let mut d7 = Vec::new();
    let mut ok8 = true;
    let mut d8 = Vec::new();
    for g in ["C2", "C4", "C3", "C9", "C2xC2", "C3xC3"] {
        let (a, da) = prefix_ok(&gamma, &format!("gamma/{g}/hom#"), 100);
        let (b, db) = prefix_ok(&gamma, &format!("gamma/{g}/kernel"), 1);
        ok7 &= a && b;
        if !(a && b) {
            d7.push(format!("{da}; {db}"));
        }
        let (c, dc) = prefix_ok(&gamma, &format!("gamma/{g}/explog#"), 100);
        ok8 &= c;
        if !c {
            d8.push(dc);
        }
    }
    gate.record(
        7,
        ok7,
        if ok7 {
            "6 groups x 100 units, kernel, integrality".into()
        } else {
            d7.join(" | ")
        },
    );
    gate.record(
        8,
        ok8,
        if ok8 {
            "6 groups x 100 units".into()
        } else {
            d8.join(" | ")
        },
    );

    let split = report(Suite::Splitting);
    let (ok, d) = prefix_ok(&split, "splitting/", 250);
    gate.record(9, ok, d);

    let section = report(Suite::Section);
    let (ok, d) = prefix_ok(&section, "section/", 35);
    gate.record(10, ok, d);

    let (ok, d) = criterion11();
    gate.record(11, ok, d);

    let mut ok12 = true;
    for g in ["C2", "C4", "C2xC2"] {
        ok12 &= prefix_ok(&gamma, &format!("gamma/{g}/tilde-minus-one"), 1).0;
    }
    gate.record(12, ok12, "C2, C4, C2xC2".into());

    let (ok, d) = criterion13();
    gate.record(13, ok, d);

    for (n, pass, detail) in &gate.lines {
        let tag = if *pass { "PASS" } else { "FAIL" };
        println!("criterion {n:>2}: {tag}  {detail}");
    }
    let failed: Vec<usize> = gate.lines.iter().filter(|l| !l.1).map(|l| l.0).collect();
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}

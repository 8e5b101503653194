use std::collections::BTreeMap;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use k2padic::exactlin::InvariantFactorGroup;
use k2padic::grpring::GroupTable;
use k2padic::homology::{h2_tilde, hc1_closed, kaehler_mod_di};
use k2padic::ktmaps::{parse_symbol, KtContext};
use k2padic::parse::parse_element;
use k2padic::pgroups::PGroupShape;
use k2padic::structure::{
    example1, example2, k2_cyclic_corollary, k2_cyclic_group_ring, k2_truncated_poly, k2c_closed,
    symbol_order, Theorem,
};
use k2padic::verify::{run_suite, Suite, VerifyOptions, SCHEMA};
use k2padic::{BigInt, Error};
use serde_json::json;

#[derive(Parser)]
#[command(
    name = "k2padic",
    version,
    about = "K2 and cyclic homology of abelian p-group rings"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// HC_1(Z_p[G]) from the closed form.
    Hc1(GroupArgs),
    /// H̃_2(G).
    H2(GroupArgs),
    /// Ω/dI of Z_p[G].
    Kaehler(GroupArgs),
    /// Evaluate a structure formula.
    Structure {
        /// A, B, C, corollary, ex1 or ex2.
        #[arg(long)]
        theorem: String,
        /// Comma-separated `key=value` pairs, e.g. `p=2,s=2,n=1`.
        #[arg(long, default_value = "")]
        params: String,
        /// Group for theorem C.
        #[arg(long)]
        group: Option<String>,
        #[arg(long)]
        json: bool,
    },
    /// Order of the symbol ⟨x, x^{n-1}⟩ over Z/p^s.
    SymbolOrder { p: u64, s: u32, n: u64 },
    /// Γ_G(u) for a unit given as a polynomial in g0, g1, ...
    Gamma {
        #[arg(long)]
        group: String,
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
        #[arg(long, default_value_t = 8)]
        precision: i64,
        #[arg(long)]
        json: bool,
    },
    /// Γ̃_2 of a symbol such as `g=g0; u=zeta:-1,s:1,h:g1,v:1+2*(g0-1)`.
    Gamma2 {
        #[arg(long)]
        group: String,
        #[arg(long)]
        symbol: String,
        #[arg(long, default_value_t = 8)]
        precision: i64,
        #[arg(long)]
        json: bool,
    },
    /// Run a verification suite.
    Verify {
        #[arg(long)]
        suite: String,
        #[arg(long)]
        max_order: Option<u64>,
        #[arg(long)]
        samples: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        precision: Option<i64>,
        /// Write the JSON report here.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run a single named check.
        #[arg(long)]
        only: Option<String>,
    },
}

#[derive(clap::Args)]
struct GroupArgs {
    /// `p:[e1,e2,...]` or `C4xC2`.
    #[arg(long)]
    group: String,
    #[arg(long)]
    json: bool,
}

enum Failure {
    Usage(String),
    Checks,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Outcome = std::result::Result<(), Failure>;

fn tuple(g: &InvariantFactorGroup) -> String {
    let parts: Vec<String> = g.factors().iter().map(ToString::to_string).collect();
    format!("({})", parts.join(", "))
}

fn emit_group(kind: &str, shape: &PGroupShape, g: &InvariantFactorGroup, json: bool) {
    if json {
        let v = json!({"schema": SCHEMA, "kind": kind, "group": shape.to_string(), "invariants": g.to_json()});
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{}", g.to_json());
    }
}

fn parse_params(s: &str) -> Result<BTreeMap<String, u64>, Failure> {
    let mut out = BTreeMap::new();
    for part in s.split(',').map(str::trim).filter(|x| !x.is_empty()) {
        let (k, v) = part
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("expected key=value, got '{part}'")))?;
        let v: u64 = v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("'{v}' is not a non-negative integer")))?;
        out.insert(k.trim().to_string(), v);
    }
    Ok(out)
}

fn param(m: &BTreeMap<String, u64>, key: &str) -> Result<u64, Failure> {
    m.get(key)
        .copied()
        .ok_or_else(|| Failure::Usage(format!("missing parameter {key}")))
}

fn small(m: &BTreeMap<String, u64>, key: &str) -> Result<u32, Failure> {
    u32::try_from(param(m, key)?).map_err(|_| Failure::Usage(format!("{key} is too large")))
}

fn structure(theorem: &str, params: &str, group: Option<&str>, json: bool) -> Outcome {
    let t: Theorem = theorem.parse()?;
    let m = parse_params(params)?;
    let g = match t {
        Theorem::TruncatedPoly => {
            k2_truncated_poly(param(&m, "p")?, small(&m, "s")?, param(&m, "n")?)?
        }
        Theorem::CyclicGroupRing => {
            k2_cyclic_group_ring(param(&m, "p")?, small(&m, "s")?, small(&m, "n")?)?
        }
        Theorem::Corollary => {
            k2_cyclic_corollary(param(&m, "p")?, small(&m, "s")?, small(&m, "n")?)?
        }
        Theorem::Example1 => example1(param(&m, "p")?, small(&m, "k")?, small(&m, "n")?)?,
        Theorem::Example2 => example2(param(&m, "p")?, small(&m, "k")?, small(&m, "n")?)?,
        Theorem::Continuous => {
            let spec = group.ok_or_else(|| Failure::Usage("theorem C needs --group".into()))?;
            k2c_closed(&spec.parse()?)?
        }
    };
    if json {
        let v =
            json!({"schema": SCHEMA, "theorem": theorem, "params": m, "invariants": g.to_json()});
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{}", tuple(&g));
    }
    Ok(())
}

fn gamma(group: &str, unit: &str, precision: i64, json: bool) -> Outcome {
    let shape: PGroupShape = group.parse()?;
    let table = GroupTable::new(&shape)?;
    let u = parse_element(&table, precision, unit)?;
    let g = u.gamma()?;
    if json {
        let v = json!({"schema": SCHEMA, "unit": u.to_json(), "gamma": g.to_json()});
        println!("{}", serde_json::to_string_pretty(&v).expect("json"));
    } else {
        println!("{g}");
    }
    Ok(())
}

fn gamma2(group: &str, symbol: &str, precision: i64, json: bool) -> Outcome {
    let shape: PGroupShape = group.parse()?;
    let ctx = KtContext::new(&shape)?;
    let sym = parse_symbol(ctx.table(), precision, symbol)?;
    let v = ctx.gamma2_ext(&sym)?;
    let pres = ctx.hc1().group();
    let reduced = pres.reduce(&v)?;
    let terms: Vec<(String, String)> = pres
        .labels()
        .iter()
        .zip(&reduced)
        .filter(|(_, c)| **c != BigInt::default())
        .map(|(l, c)| (l.clone(), c.to_string()))
        .collect();
    if json {
        let out = json!({
            "schema": SCHEMA,
            "group": shape.to_string(),
            "coordinates": v.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "reduced": reduced.iter().map(ToString::to_string).collect::<Vec<_>>(),
            "labels": pres.labels(),
            "order": pres.element_order(&v)?.map(|o| o.to_string()),
        });
        println!("{}", serde_json::to_string_pretty(&out).expect("json"));
    } else if terms.is_empty() {
        println!("0");
    } else {
        let parts: Vec<String> = terms.iter().map(|(l, c)| format!("{c}*[{l}]")).collect();
        println!("{}", parts.join(" + "));
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn verify(
    suite: &str,
    max_order: Option<u64>,
    samples: Option<usize>,
    seed: u64,
    precision: Option<i64>,
    json: Option<PathBuf>,
    only: Option<String>,
) -> Outcome {
    let suite: Suite = suite.parse()?;
    let opts = VerifyOptions {
        max_order,
        samples,
        seed,
        precision,
        only,
    };
    let report = run_suite(suite, &opts);
    print!("{}", report.to_text());
    if let Some(path) = json {
        std::fs::write(&path, report.to_json())
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Checks)
    }
}

fn run(cli: Cli) -> Outcome {
    match cli.cmd {
        Cmd::Hc1(a) => {
            let shape: PGroupShape = a.group.parse()?;
            emit_group("hc1", &shape, &hc1_closed(&shape)?, a.json);
        }
        Cmd::H2(a) => {
            let shape: PGroupShape = a.group.parse()?;
            emit_group("h2", &shape, h2_tilde(&shape).structure(), a.json);
        }
        Cmd::Kaehler(a) => {
            let shape: PGroupShape = a.group.parse()?;
            emit_group("kaehler", &shape, &kaehler_mod_di(&shape)?, a.json);
        }
        Cmd::Structure {
            theorem,
            params,
            group,
            json,
        } => structure(&theorem, &params, group.as_deref(), json)?,
        Cmd::SymbolOrder { p, s, n } => println!("{}", symbol_order(p, s, n)?),
        Cmd::Gamma {
            group,
            unit,
            precision,
            json,
        } => gamma(&group, &unit, precision, json)?,
        Cmd::Gamma2 {
            group,
            symbol,
            precision,
            json,
        } => gamma2(&group, &symbol, precision, json)?,
        Cmd::Verify {
            suite,
            max_order,
            samples,
            seed,
            precision,
            json,
            only,
        } => verify(&suite, max_order, samples, seed, precision, json, only)?,
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(2)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Checks) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

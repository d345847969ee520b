//! `lattice-irr`: single-shot queries and verification sweeps.
//!
//! stdout carries exactly one JSON document per run; diagnostics are also
//! written to stderr as JSON lines. Exit codes: 0 ok, 1 domain error,
//! 2 internal failure (a falsified lemma or a panic).

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use lattice_irr::catalog::{self, Params};
use lattice_irr::construct::{
    embed_qad_a1, embed_qad_e8, embed_split, search_definite_embedding, ConstructedEmbedding, DEFAULT_SEARCH_BUDGET,
};
use lattice_irr::discform::{isometry_cap, FiniteQuadraticForm};
use lattice_irr::lattice::GramLattice;
use lattice_irr::moduli::{abelian_quadratic_report, bound_report, k3_bound_report, Family, K3Series, ModuliSpec};
use lattice_irr::verify::{run_suite, Ranges, Suite};
use lattice_irr::Error;

#[derive(Parser)]
#[command(name = "lattice-irr", version, about = "Exact lattice computations behind irrationality bounds")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(clap::Args, Clone, Copy, Default)]
struct ParamArgs {
    #[arg(long, allow_negative_numbers = true)]
    a: Option<i128>,
    #[arg(long, allow_negative_numbers = true)]
    b: Option<i128>,
    #[arg(long, allow_negative_numbers = true)]
    c: Option<i128>,
    #[arg(long)]
    d: Option<i128>,
    #[arg(long)]
    n: Option<i128>,
}

#[derive(Clone, Copy, ValueEnum)]
enum LemmaArg {
    QadE8,
    QadA1,
    Split,
    SplitSmall,
    Search,
}

#[derive(Subcommand)]
enum Cmd {
    /// Gram matrix, signature and discriminant form of a catalog lattice,
    /// a direct-sum expression such as `U^2+E8(-1)`, or a lattice JSON file.
    Lattice {
        name: String,
        #[command(flatten)]
        params: ParamArgs,
    },
    /// Run one of the rank-two embedding lemmas, or a bounded search.
    Embed {
        #[arg(value_enum)]
        lemma: LemmaArg,
        #[arg(long)]
        a: Option<i128>,
        #[arg(long)]
        d: Option<i128>,
        /// Source lattice expression for `search`.
        #[arg(long)]
        source: Option<String>,
        /// Target lattice expression for `search`.
        #[arg(long)]
        target: Option<String>,
        #[arg(long, default_value_t = DEFAULT_SEARCH_BUDGET)]
        budget: u64,
    },
    /// Bound reports for every component of a moduli space.
    Bound {
        #[arg(long)]
        family: Family,
        #[arg(long, default_value_t = 1)]
        n: i128,
        #[arg(long)]
        d: i128,
        #[arg(long, default_value_t = 1)]
        gamma: i128,
        /// K3 series (`e8`, `a1^4`, `a1^3`, `a2`, `a1^2`, `binary`) or
        /// `binary` for abelian surfaces; `binary` reads `--a --b --c`.
        #[arg(long)]
        series: Option<String>,
        #[arg(long)]
        a: Option<i128>,
        #[arg(long)]
        b: Option<i128>,
        #[arg(long)]
        c: Option<i128>,
    },
    /// Property sweeps; exits non-zero if any property fails.
    Verify {
        suite: String,
        #[arg(long)]
        max: Option<i128>,
        #[arg(long)]
        r_max: Option<i128>,
        #[arg(long)]
        n_max: Option<i128>,
        #[arg(long)]
        d_max: Option<i128>,
        #[arg(long)]
        disc_max: Option<i128>,
        /// Worker threads for sweep cells.
        #[arg(long, default_value_t = 1)]
        parallel: usize,
    },
}

#[derive(Serialize)]
struct Diagnostic {
    kind: &'static str,
    message: String,
}

#[derive(Serialize)]
struct CommandResult {
    status: &'static str,
    payload: Value,
    diagnostics: Vec<Diagnostic>,
}

/// Result of a command: payload, diagnostics, and whether a sweep failed.
struct Outcome {
    payload: Value,
    diagnostics: Vec<Diagnostic>,
    failed: bool,
}

impl Outcome {
    fn ok(payload: Value) -> Self {
        Outcome { payload, diagnostics: Vec::new(), failed: false }
    }
}

fn need(v: Option<i128>, flag: &str) -> Result<i128, Error> {
    v.ok_or_else(|| Error::BadParams(format!("missing --{flag}")))
}

fn load_lattice(name: &str, p: &ParamArgs) -> Result<GramLattice, Error> {
    if name.ends_with(".json") || Path::new(name).is_file() {
        let text = std::fs::read_to_string(name).map_err(|e| Error::Parse(format!("{name}: {e}")))?;
        return GramLattice::from_json_str(&text);
    }
    let params = Params { a: p.a, b: p.b, c: p.c, d: p.d, n: p.n };
    catalog::lookup(name, &params)
}

fn cmd_lattice(name: &str, p: &ParamArgs) -> Result<Outcome, Error> {
    let l = load_lattice(name, p)?;
    let sig = l.signature()?;
    let fqf = FiniteQuadraticForm::from_lattice(&l)?;
    Ok(Outcome::ok(json!({
        "name": l.name(),
        "rank": l.rank(),
        "gram": l.gram(),
        "signature": sig,
        "disc": l.det(),
        "even": l.is_even(),
        "discriminant_form": fqf.to_json(),
        "ell": fqf.ell(),
    })))
}

fn constructed(ce: ConstructedEmbedding) -> Result<Outcome, Error> {
    let report = ce.embedding.report()?;
    let mut payload = ce.to_json();
    payload["verification"] = serde_json::to_value(&report).expect("serialisable");
    payload["involution_ok"] = json!(ce.involution_ok()?);
    let mut out = Outcome::ok(payload);
    if ce.glue_coset == Some(lattice_irr::e8::GlueCoset::Alternate) {
        out.diagnostics.push(Diagnostic { kind: "note", message: "alternate E8 glue coset used".into() });
    }
    Ok(out)
}

fn cmd_embed(
    lemma: LemmaArg,
    a: Option<i128>,
    d: Option<i128>,
    source: Option<&str>,
    target: Option<&str>,
    budget: u64,
) -> Result<Outcome, Error> {
    match lemma {
        LemmaArg::QadE8 => constructed(embed_qad_e8(need(a, "a")?, need(d, "d")?)?),
        LemmaArg::QadA1 => constructed(embed_qad_a1(need(a, "a")?, need(d, "d")?)?),
        LemmaArg::Split => constructed(embed_split(need(a, "a")?, need(d, "d")?, false)?),
        LemmaArg::SplitSmall => constructed(embed_split(need(a, "a")?, need(d, "d")?, true)?),
        LemmaArg::Search => {
            let p = ParamArgs { a, d, ..Default::default() };
            let s = load_lattice(source.ok_or_else(|| Error::BadParams("missing --source".into()))?, &p)?;
            let t = load_lattice(target.ok_or_else(|| Error::BadParams("missing --target".into()))?, &p)?;
            let e = search_definite_embedding(&s, &t, budget)?;
            let mut payload = e.to_json();
            payload["verification"] = serde_json::to_value(e.report()?).expect("serialisable");
            Ok(Outcome::ok(payload))
        }
    }
}

#[allow(clippy::too_many_arguments)]
fn cmd_bound(
    family: Family,
    n: i128,
    d: i128,
    gamma: i128,
    series: Option<&str>,
    a: Option<i128>,
    b: Option<i128>,
    c: Option<i128>,
) -> Result<Outcome, Error> {
    let binary = || -> Result<(i128, i128, i128), Error> { Ok((need(a, "a")?, need(b, "b")?, need(c, "c")?)) };
    let reports = match (family, series) {
        (Family::K3, Some(s)) => {
            let series = if s == "binary" {
                let (a, b, c) = binary()?;
                K3Series::Binary { a, b, c }
            } else {
                K3Series::parse(s)?
            };
            vec![k3_bound_report(d, series)?]
        }
        (Family::AbelianSurface, Some("binary")) => {
            let (a, b, c) = binary()?;
            vec![abelian_quadratic_report(d, a, b, c)?]
        }
        (_, Some(s)) => return Err(Error::BadParams(format!("series {s} does not apply to {family}"))),
        (_, None) => {
            let spec = ModuliSpec::new(family, n, d, gamma)?;
            match bound_report(&spec) {
                Err(Error::EmptyModuli(msg)) => {
                    let mut out = Outcome::ok(json!([]));
                    out.diagnostics.push(Diagnostic { kind: "empty_moduli", message: msg });
                    return Ok(out);
                }
                r => r?,
            }
        }
    };
    let mut diagnostics = Vec::new();
    if reports.iter().any(|r| r.aut.exact.is_none()) {
        diagnostics.push(Diagnostic { kind: "note", message: format!("exact aut count capped at {}", isometry_cap()) });
    }
    let payload = Value::Array(reports.iter().map(|r| r.to_json()).collect());
    Ok(Outcome { payload, diagnostics, failed: false })
}

fn cmd_verify(suite: &str, ranges: Ranges) -> Result<Outcome, Error> {
    let suite: Suite = suite.parse()?;
    let report = run_suite(suite, &ranges)?;
    let diagnostics = report
        .properties
        .iter()
        .filter(|p| !p.passed)
        .map(|p| Diagnostic {
            kind: "property_failed",
            message: format!("{}: {}", p.name, p.counterexample.as_deref().unwrap_or("")),
        })
        .collect();
    Ok(Outcome { failed: !report.passed, payload: serde_json::to_value(&report).expect("serialisable"), diagnostics })
}

fn dispatch(cmd: Cmd) -> Result<Outcome, Error> {
    match cmd {
        Cmd::Lattice { name, params } => cmd_lattice(&name, &params),
        Cmd::Embed { lemma, a, d, source, target, budget } => {
            cmd_embed(lemma, a, d, source.as_deref(), target.as_deref(), budget)
        }
        Cmd::Bound { family, n, d, gamma, series, a, b, c } => cmd_bound(family, n, d, gamma, series.as_deref(), a, b, c),
        Cmd::Verify { suite, max, r_max, n_max, d_max, disc_max, parallel } => {
            let dflt = Ranges::default();
            let ranges = Ranges {
                max: max.unwrap_or(dflt.max),
                r_max: r_max.unwrap_or(dflt.r_max),
                n_max: n_max.unwrap_or(dflt.n_max),
                d_max: d_max.unwrap_or(dflt.d_max),
                disc_max: disc_max.unwrap_or(dflt.disc_max),
                threads: parallel.max(1),
            };
            cmd_verify(&suite, ranges)
        }
    }
}

fn emit(status: &'static str, payload: Value, diagnostics: Vec<Diagnostic>) {
    for d in &diagnostics {
        eprintln!("{}", serde_json::to_string(d).expect("serialisable"));
    }
    let doc = CommandResult { status, payload, diagnostics };
    println!("{}", serde_json::to_string_pretty(&doc).expect("serialisable"));
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    // keep panics off stderr as raw text; they are reported as JSON below
    std::panic::set_hook(Box::new(|_| {}));
    match catch_unwind(AssertUnwindSafe(|| dispatch(cli.cmd))) {
        Ok(Ok(out)) if !out.failed => {
            emit("ok", out.payload, out.diagnostics);
            ExitCode::SUCCESS
        }
        Ok(Ok(out)) => {
            emit("error", out.payload, out.diagnostics);
            ExitCode::from(2)
        }
        Ok(Err(e)) => {
            let code = if e.is_internal() { 2 } else { 1 };
            let diag = Diagnostic { kind: e.kind(), message: e.to_string() };
            emit("error", json!({ "error": e.kind(), "message": e.to_string() }), vec![diag]);
            ExitCode::from(code)
        }
        Err(panic) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "panic".into());
            emit("error", json!({ "error": "panic", "message": msg }), vec![Diagnostic { kind: "panic", message: msg.clone() }]);
            ExitCode::from(2)
        }
    }
}

//! Deterministic command-line front end for the heisenfield library.
//!
//! Every subcommand builds a Heisenberg group (or loads one from a group
//! file), runs one of the library's verification suites, and prints a
//! report as text or JSON. All randomness is derived from the `--seed`
//! flag, so identical invocations produce byte-identical output.
//!
//! Exit codes: `0` when the invoked suite reports zero violations, `1` when
//! it ran but found violations, `2` for usage, parse, bounds, or input
//! errors.

mod oracle;

use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use heisenfield::autos::{enumerate_automorphisms, rigidity_report, RigidityReport};
use heisenfield::bbox::{relabel, BlackBoxGroup, HeisBox, TableBox};
use heisenfield::fields::{is_prime, FieldSpec, PrimeField};
use heisenfield::heisenberg::{theta, GroupFile, GROUP_FILE_SCHEMA};
use heisenfield::interp::{biinterp_k, biinterp_k_rationals, in_domain, QuotientField, Triple};
use heisenfield::maltsev::{phi_with_budget, FieldTable};
use heisenfield::transfer::{check_functorial, FunctorReport};
use heisenfield::{Error, Result, DEFAULT_AUTOS_BOUND, DEFAULT_BUDGET, DEFAULT_MAX_ORDER};

#[derive(Parser)]
#[command(
    name = "heisenfield",
    version,
    about = "Build Heisenberg groups over exact fields and verify that the field can be recovered from them"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,

    /// Field to work over: `gf:p`, `gf:p^k:modulus` (e.g. gf:4:x^2+x+1), or `q`.
    #[arg(long, global = true)]
    field: Option<String>,

    /// Seed for relabellings and sampled sweeps.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Search budget for countable hosts.
    #[arg(long, global = true, default_value_t = DEFAULT_BUDGET)]
    budget: usize,

    /// Largest group order a command will materialize (default 4096;
    /// `autos` defaults to 729).
    #[arg(long, global = true)]
    max_order: Option<usize>,

    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Write the report to a file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Build H(F) and emit its multiplication table as a group file.
    Build,
    /// Relabel H(F), recover the field two ways, and compare both to F.
    Roundtrip {
        /// Verify a group loaded from a group file instead of building one.
        #[arg(long, conflicts_with = "field")]
        group: Option<PathBuf>,
    },
    /// Check the transfer maps across relabelled copies.
    Functor {
        /// Exactly three relabelling seeds.
        #[arg(long, value_delimiter = ',', default_value = "1,2,3")]
        seeds: Vec<u64>,
    },
    /// Enumerate the automorphisms and report what they pin.
    Autos,
    /// Evaluate every built-in formula against the hand-coded operation.
    Oracle,
    /// Embed the field into its own Heisenberg quotient and verify the
    /// round trip.
    Biinterp,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

/// A finished report in both renderings.
struct Output {
    text: String,
    json: String,
    violations: usize,
}

impl Output {
    fn new<R: Serialize>(report: &R, text: String, violations: usize) -> Result<Self> {
        let mut json = serde_json::to_string_pretty(report)?;
        json.push('\n');
        Ok(Output {
            text,
            json,
            violations,
        })
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            let body = match cli.format {
                Format::Text => &out.text,
                Format::Json => &out.json,
            };
            let emitted = match &cli.out {
                Some(path) => std::fs::write(path, body)
                    .map_err(|e| Error::Parse(format!("cannot write {}: {e}", path.display()))),
                None => {
                    print!("{body}");
                    Ok(())
                }
            };
            match emitted {
                Ok(()) if out.violations == 0 => ExitCode::SUCCESS,
                Ok(()) => ExitCode::from(1),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(2)
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Result<Output> {
    match &cli.cmd {
        Cmd::Build => cmd_build(cli),
        Cmd::Roundtrip { group } => cmd_roundtrip(cli, group.as_deref()),
        Cmd::Functor { seeds } => cmd_functor(cli, seeds),
        Cmd::Autos => cmd_autos(cli),
        Cmd::Oracle => cmd_oracle(cli),
        Cmd::Biinterp => cmd_biinterp(cli),
    }
}

/// The `--field` flag, parsed; errors if absent.
fn require_field(cli: &Cli) -> Result<FieldSpec> {
    match &cli.field {
        Some(s) => s.parse(),
        None => Err(Error::Parse("this command needs --field".into())),
    }
}

fn max_order(cli: &Cli, fallback: usize) -> usize {
    cli.max_order.unwrap_or(fallback)
}

/// Build the Heisenberg group over a finite field spec as a black box,
/// enforcing the order bound.
fn finite_host(spec: &FieldSpec, bound: usize) -> Result<Box<dyn BlackBoxGroup>> {
    let q = spec
        .size()
        .ok_or_else(|| Error::RequiresFinite("this command".into()))?;
    let order = q.checked_pow(3).ok_or_else(|| {
        Error::Parse(format!("group order overflows for a field of size {q}"))
    })?;
    if order > bound as u64 {
        return Err(Error::OrderBound {
            order: order as usize,
            bound,
            what: "Heisenberg group construction".into(),
        });
    }
    Ok(match spec {
        FieldSpec::Prime(_) => Box::new(HeisBox::new(theta(spec.build_prime()?))),
        FieldSpec::Ext { .. } => Box::new(HeisBox::new(theta(spec.build_ext()?))),
        FieldSpec::Rationals => unreachable!("rationals have no size"),
    })
}

/// Render a violations block identically for every text report.
fn violations_block(lines: &mut String, violations: &[String]) {
    if violations.is_empty() {
        let _ = writeln!(lines, "violations: none");
    } else {
        let _ = writeln!(lines, "violations: {}", violations.len());
        for v in violations {
            let _ = writeln!(lines, "  - {v}");
        }
    }
}

// ---------------------------------------------------------------------------
// build
// ---------------------------------------------------------------------------

fn cmd_build(cli: &Cli) -> Result<Output> {
    let spec = require_field(cli)?;
    let bound = max_order(cli, DEFAULT_MAX_ORDER);
    let file = match &spec {
        FieldSpec::Prime(_) => theta(spec.build_prime()?).to_group_file(bound)?,
        FieldSpec::Ext { .. } => theta(spec.build_ext()?).to_group_file(bound)?,
        FieldSpec::Rationals => {
            return Err(Error::RequiresFinite("group table export".into()))
        }
    };
    // The group file is itself the report; both formats emit it verbatim.
    let json = file.to_json()?;
    Ok(Output {
        text: json.clone(),
        json,
        violations: 0,
    })
}

// ---------------------------------------------------------------------------
// roundtrip
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct RoundtripReport {
    schema: u32,
    command: &'static str,
    source: String,
    field: Option<String>,
    seed: u64,
    order: usize,
    recovery_pair: (usize, usize),
    recovered_size: usize,
    recovered_matches_field: Option<bool>,
    quotient_pairs: usize,
    quotient_domain: usize,
    quotient_classes: usize,
    quotient_matches_field: Option<bool>,
    recoveries_agree: bool,
    violations: Vec<String>,
}

/// Check a recovered table against the declared field, pushing violations.
fn check_against_spec(
    table: &FieldTable,
    spec: &FieldSpec,
    label: &str,
    violations: &mut Vec<String>,
) -> Result<bool> {
    let ok = match spec {
        FieldSpec::Prime(p) => table.is_isomorphic_to(&PrimeField::new(*p)?)?,
        FieldSpec::Ext { .. } => table.is_isomorphic_to(&spec.build_ext()?)?,
        FieldSpec::Rationals => false,
    };
    if !ok {
        violations.push(format!("{label} is not isomorphic to {spec}"));
    }
    Ok(ok)
}

fn cmd_roundtrip(cli: &Cli, group: Option<&std::path::Path>) -> Result<Output> {
    let bound = max_order(cli, DEFAULT_MAX_ORDER);
    let (host, spec, source): (Box<dyn BlackBoxGroup>, Option<FieldSpec>, String) =
        match group {
            Some(path) => {
                let raw = std::fs::read_to_string(path)
                    .map_err(|e| Error::Parse(format!("cannot read {}: {e}", path.display())))?;
                let file = GroupFile::from_json(&raw)?;
                let table = TableBox::from_group_file(&file)?;
                if table.size() > bound {
                    return Err(Error::OrderBound {
                        order: table.size(),
                        bound,
                        what: "group file verification".into(),
                    });
                }
                let spec = file.field.as_deref().map(str::parse).transpose()?;
                (Box::new(table), spec, path.display().to_string())
            }
            None => {
                let spec = require_field(cli)?;
                let host = finite_host(&spec, bound)?;
                (host, Some(spec.clone()), spec.to_string())
            }
        };

    let (copy, _) = relabel(&*host, cli.seed)?;
    let recovered = phi_with_budget(&copy, cli.budget)?;
    let recovery_pair = recovered.pair();
    let rec_table = recovered.tabulate()?;
    let quotient = QuotientField::build(&copy)?;
    let quo_table = quotient.tabulate();

    let mut violations = Vec::new();
    for v in rec_table.check_field_axioms() {
        violations.push(format!("recovered field: {v}"));
    }
    for v in quo_table.check_field_axioms() {
        violations.push(format!("quotient field: {v}"));
    }

    // When the field is declared, both recoveries must reproduce it. A
    // group file may omit the field; a prime recovered order still pins a
    // unique comparison target, and any two same-order fields agree anyway.
    let effective_spec = spec.clone().or_else(|| {
        let s = rec_table.size() as u64;
        is_prime(s).then_some(FieldSpec::Prime(s))
    });
    let (rec_matches, quo_matches) = match &effective_spec {
        Some(s) => (
            Some(check_against_spec(&rec_table, s, "recovered field", &mut violations)?),
            Some(check_against_spec(&quo_table, s, "quotient field", &mut violations)?),
        ),
        None => (None, None),
    };
    let recoveries_agree = rec_table.size() == quo_table.size();
    if !recoveries_agree {
        violations.push(format!(
            "recovered field has {} elements but the quotient has {} classes",
            rec_table.size(),
            quo_table.size()
        ));
    }

    let report = RoundtripReport {
        schema: GROUP_FILE_SCHEMA,
        command: "roundtrip",
        source,
        field: effective_spec.as_ref().map(ToString::to_string),
        seed: cli.seed,
        order: host.order().expect("finite host"),
        recovery_pair,
        recovered_size: rec_table.size(),
        recovered_matches_field: rec_matches,
        quotient_pairs: quotient.pair_count(),
        quotient_domain: quotient.domain_size(),
        quotient_classes: quotient.class_count(),
        quotient_matches_field: quo_matches,
        recoveries_agree,
        violations,
    };

    let mut text = String::new();
    let _ = writeln!(text, "roundtrip over {} (seed {})", report.source, report.seed);
    let _ = writeln!(
        text,
        "order {}, recovery pair ({}, {})",
        report.order, report.recovery_pair.0, report.recovery_pair.1
    );
    let _ = writeln!(
        text,
        "recovered field: {} elements{}",
        report.recovered_size,
        match report.recovered_matches_field {
            Some(true) => format!(", isomorphic to {}", report.field.as_deref().unwrap_or("?")),
            Some(false) => ", NOT isomorphic to the declared field".into(),
            None => String::new(),
        }
    );
    let _ = writeln!(
        text,
        "quotient: {} pairs, {} triples, {} classes{}",
        report.quotient_pairs,
        report.quotient_domain,
        report.quotient_classes,
        match report.quotient_matches_field {
            Some(true) => format!(", isomorphic to {}", report.field.as_deref().unwrap_or("?")),
            Some(false) => ", NOT isomorphic to the declared field".into(),
            None => String::new(),
        }
    );
    violations_block(&mut text, &report.violations);
    let n = report.violations.len();
    Output::new(&report, text, n)
}

// ---------------------------------------------------------------------------
// functor
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct FunctorCliReport {
    schema: u32,
    command: &'static str,
    field: String,
    seeds: Vec<u64>,
    report: FunctorReport,
}

fn cmd_functor(cli: &Cli, seeds: &[u64]) -> Result<Output> {
    if seeds.len() != 3 {
        return Err(Error::Parse(format!(
            "--seeds takes exactly three comma-separated integers (got {})",
            seeds.len()
        )));
    }
    let spec = require_field(cli)?;
    let host = finite_host(&spec, max_order(cli, DEFAULT_MAX_ORDER))?;
    let report = check_functorial(&*host, seeds)?;

    let mut text = String::new();
    let _ = writeln!(text, "functor over {spec}, seeds {seeds:?}");
    let _ = writeln!(
        text,
        "order {}, base pair ({}, {})",
        report.order, report.base_pair.0, report.base_pair.1
    );
    for copy in &report.copies {
        let _ = writeln!(
            text,
            "copy (seed {}): pair ({}, {}), {} central elements, field recovered: {}",
            copy.seed,
            copy.pair.0,
            copy.pair.1,
            copy.domain_size,
            if copy.iso_ok { "yes" } else { "NO" }
        );
    }
    let _ = writeln!(
        text,
        "identity law: {}",
        if report.identity_ok { "ok" } else { "FAILED" }
    );
    let _ = writeln!(
        text,
        "composition law: {}",
        if report.composition_ok { "ok" } else { "FAILED" }
    );
    violations_block(&mut text, &report.violations);

    let n = report.violations.len();
    let wrapped = FunctorCliReport {
        schema: GROUP_FILE_SCHEMA,
        command: "functor",
        field: spec.to_string(),
        seeds: seeds.to_vec(),
        report,
    };
    Output::new(&wrapped, text, n)
}

// ---------------------------------------------------------------------------
// autos
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct AutosReport {
    schema: u32,
    command: &'static str,
    field: String,
    rigidity: RigidityReport,
    /// Every triple class is carried to itself by every automorphism.
    quotient_stable: bool,
    violations: Vec<String>,
}

fn cmd_autos(cli: &Cli) -> Result<Output> {
    let spec = require_field(cli)?;
    let bound = max_order(cli, DEFAULT_AUTOS_BOUND);
    let host = finite_host(&spec, bound)?;
    let autos = enumerate_automorphisms(&*host, bound)?;
    let rigidity = rigidity_report(&*host, bound)?;

    let mut violations = Vec::new();
    let quotient = QuotientField::build(&*host)?;
    let mut stable = true;
    'outer: for a in &autos {
        for t in quotient.triples() {
            let image = Triple::new(a.map[t.u], a.map[t.v], a.map[t.x]);
            if !in_domain(&*host, &image)?
                || quotient.class_of(&image)? != quotient.class_of(&t)?
            {
                stable = false;
                violations.push(format!(
                    "automorphism moves the class of ({}, {}, {})",
                    t.u, t.v, t.x
                ));
                break 'outer;
            }
        }
    }

    let mut text = String::new();
    let _ = writeln!(
        text,
        "automorphisms of the order-{} group over {spec}",
        rigidity.order
    );
    let _ = writeln!(text, "|Aut| = {}", rigidity.aut_count);
    let _ = writeln!(
        text,
        "fixed singletons: {} (ids {:?})",
        rigidity.fixed_by_all, rigidity.fixed_ids
    );
    let _ = writeln!(
        text,
        "fixed tuple counts (n = 1, 2, 3): {}, {}, {}",
        rigidity.fixed_tuple_counts[0],
        rigidity.fixed_tuple_counts[1],
        rigidity.fixed_tuple_counts[2]
    );
    let _ = writeln!(
        text,
        "only identity pinned: {}",
        if rigidity.only_identity_pinned { "yes" } else { "no" }
    );
    let _ = writeln!(
        text,
        "triple classes stable under every automorphism: {}",
        if stable { "yes" } else { "NO" }
    );
    violations_block(&mut text, &violations);

    let n = violations.len();
    let report = AutosReport {
        schema: GROUP_FILE_SCHEMA,
        command: "autos",
        field: spec.to_string(),
        rigidity,
        quotient_stable: stable,
        violations,
    };
    Output::new(&report, text, n)
}

// ---------------------------------------------------------------------------
// oracle
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct OracleReport {
    schema: u32,
    command: &'static str,
    field: String,
    order: usize,
    seed: u64,
    lines: Vec<oracle::OracleLine>,
    violations: Vec<String>,
}

fn cmd_oracle(cli: &Cli) -> Result<Output> {
    let spec = require_field(cli)?;
    let host = finite_host(&spec, max_order(cli, oracle::ORACLE_MAX_ORDER))?;
    let outcome = oracle::sweep(&*host, cli.seed)?;

    let mut text = String::new();
    let order = host.order().expect("finite host");
    let _ = writeln!(text, "formula oracle over {spec} (order {order}, seed {})", cli.seed);
    for line in &outcome.lines {
        let _ = writeln!(
            text,
            "{}: {} tuples checked, {}",
            line.name,
            line.checked,
            if line.disagreements == 0 {
                "agree".to_string()
            } else {
                format!("{} DISAGREE", line.disagreements)
            }
        );
    }
    violations_block(&mut text, &outcome.violations);

    let n = outcome.violations.len();
    let report = OracleReport {
        schema: GROUP_FILE_SCHEMA,
        command: "oracle",
        field: spec.to_string(),
        order,
        seed: cli.seed,
        lines: outcome.lines,
        violations: outcome.violations,
    };
    Output::new(&report, text, n)
}

// ---------------------------------------------------------------------------
// biinterp
// ---------------------------------------------------------------------------

#[derive(Serialize)]
#[serde(untagged)]
enum BiinterpBody {
    Finite(heisenfield::interp::KReport),
    Sampled(heisenfield::interp::KSampleReport),
}

#[derive(Serialize)]
struct BiinterpReport {
    schema: u32,
    command: &'static str,
    field: String,
    report: BiinterpBody,
    violations: Vec<String>,
}

/// Sample size for the countable-field leg.
const RATIONAL_SAMPLE: usize = 64;

fn cmd_biinterp(cli: &Cli) -> Result<Output> {
    let spec = require_field(cli)?;
    let mut text = String::new();
    let (body, violations) = match &spec {
        FieldSpec::Rationals => {
            let report = biinterp_k_rationals(RATIONAL_SAMPLE, cli.budget)?;
            let _ = writeln!(
                text,
                "embedding of q along pair ({}, {}): {} sums and {} products of the first {} rationals checked",
                report.pair.0,
                report.pair.1,
                report.checked_sums,
                report.checked_products,
                report.sample
            );
            let _ = writeln!(
                text,
                "k is a field isomorphism on the sample: {}",
                if report.passed() { "yes" } else { "NO" }
            );
            let violations = report.violations.clone();
            (BiinterpBody::Sampled(report), violations)
        }
        _ => {
            // The order bound caps the quotient construction implicitly:
            // the group has |F|^3 elements.
            let _ = finite_host(&spec, max_order(cli, DEFAULT_MAX_ORDER))?;
            let report = match &spec {
                FieldSpec::Prime(_) => biinterp_k(&spec.build_prime()?)?,
                FieldSpec::Ext { .. } => biinterp_k(&spec.build_ext()?)?,
                FieldSpec::Rationals => unreachable!(),
            };
            let _ = writeln!(
                text,
                "embedding of {} into its Heisenberg quotient: {} pairs, {} triples, {} classes",
                report.field, report.pair_count, report.domain_size, report.class_count
            );
            let _ = writeln!(
                text,
                "k is a field isomorphism: {}",
                if report.embedding_ok { "yes" } else { "NO" }
            );
            let _ = writeln!(
                text,
                "quotient matches the input field: {}",
                if report.round_trip_ok { "yes" } else { "NO" }
            );
            let violations = report.violations.clone();
            (BiinterpBody::Finite(report), violations)
        }
    };
    violations_block(&mut text, &violations);

    let n = violations.len();
    let report = BiinterpReport {
        schema: GROUP_FILE_SCHEMA,
        command: "biinterp",
        field: spec.to_string(),
        report: body,
        violations,
    };
    Output::new(&report, text, n)
}

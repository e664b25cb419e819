//! `semiforge`: check inclusion identities, decompose, enumerate, verify and
//! build finite semigroups given by Cayley tables.
//!
//! Exit codes: 0 success or property holds, 1 property checked false,
//! 2 usage error, 3 invalid input.

mod input;

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use semiforge::builders::{
    build_chain, build_strong_semilattice, build_theta_product, parse_chain_spec,
    StrongSemilatticeData, ThetaData,
};
use semiforge::enumverify::{
    enumerate_semigroups, verify_theorem_within, EnumError, EnumerationRequest, Mode, TheoremId,
    VerificationReport, DEFAULT_MAX_ORDER,
};
use semiforge::identities::{member_of_class, InclusionClassExpr};
use semiforge::rees::build_rees;
use semiforge::structure::DecompositionReport;
use semiforge::{parse_inclusion_class, predefined, FiniteSemigroup};

const ENVELOPE_VAR: &str = "SEMIFORGE_MAX_ORDER";

#[derive(Parser)]
#[command(
    name = "semiforge",
    version,
    about = "Finite semigroups from Cayley tables",
    long_about = "Finite semigroups from Cayley tables.\n\n\
        Elements are 0-based indices and row a, column b holds the product ab.\n\
        Table files: optional '#' comment lines, then the order n, then n rows of n indices;\n\
        or JSON {\"order\": n, \"table\": [[...], ...]}.\n\n\
        Exit codes: 0 success, 1 checked false, 2 usage error, 3 invalid input."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Iso,
    IsoAnti,
    Labeled,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Self {
        match m {
            ModeArg::Iso => Mode::UpToIso,
            ModeArg::IsoAnti => Mode::UpToIsoAnti,
            ModeArg::Labeled => Mode::Labeled,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum BuildKind {
    /// Rees matrix semigroup: text (group table, "|I| |L|", sandwich rows) or JSON.
    Rees,
    /// Chain of components bottom to top, e.g. "trivial;rz:2" (file or inline).
    Chain,
    /// Strong semilattice of semigroups (JSON).
    Strong,
    /// Product xy = (θ_x y)(θ_y x) from components and θ maps (JSON).
    Theta,
}

#[derive(Subcommand)]
enum Command {
    /// Test membership in an inclusion class.
    Check {
        table: PathBuf,
        /// THM1, THM2, COR3, THM4, THM5 or an expression such as "xyx in {x, y}; x = x^3".
        #[arg(long)]
        class: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Semilattice decomposition, component kinds and structural checks.
    Decompose {
        table: PathBuf,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// List all semigroups of one order.
    Enumerate {
        #[arg(long)]
        order: usize,
        #[arg(long, value_enum, default_value = "iso")]
        mode: ModeArg,
        /// Keep only members of this class (name or expression).
        #[arg(long)]
        class: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Compare a class with its structural description over all small semigroups.
    Verify {
        /// t1, t2, c3, t4 or t5.
        #[arg(long)]
        theorem: TheoremId,
        #[arg(long)]
        max_order: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Construct a semigroup from a structural description.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        /// Spec file; for chains an inline spec is accepted too.
        spec: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
}

enum Failure {
    Usage(String),
    Invalid(String),
}

type Outcome = Result<bool, Failure>;

fn envelope() -> Result<usize, Failure> {
    match std::env::var(ENVELOPE_VAR) {
        Err(_) => Ok(DEFAULT_MAX_ORDER),
        Ok(v) => v
            .trim()
            .parse()
            .map_err(|_| Failure::Usage(format!("{ENVELOPE_VAR} must be a non-negative integer, got {v:?}"))),
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn load_table(path: &Path) -> Result<FiniteSemigroup, Failure> {
    input::parse_table(&read(path)?).map_err(|e| Failure::Invalid(format!("{}: {e}", path.display())))
}

fn resolve_class(spec: &str) -> Result<InclusionClassExpr, Failure> {
    if let Some(e) = predefined(spec.trim()) {
        return Ok(e);
    }
    parse_inclusion_class(spec).map_err(|e| Failure::Usage(format!("bad class {spec:?}: {e}")))
}

fn enum_failure(e: EnumError) -> Failure {
    Failure::Usage(e.to_string())
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string_pretty(value).expect("reports serialize")
}

#[derive(Serialize)]
struct WitnessOut {
    inclusion: String,
    assignment: BTreeMap<char, usize>,
    word: String,
    value: usize,
}

#[derive(Serialize)]
struct CheckOut {
    member: bool,
    class: String,
    witness: Option<WitnessOut>,
}

fn check(table: &Path, class: &str, format: Format) -> Outcome {
    let expr = resolve_class(class)?;
    let s = load_table(table)?;
    let report = member_of_class(&s, &expr);
    let out = CheckOut {
        member: report.member,
        class: expr.to_string(),
        witness: report.witness.map(|w| WitnessOut {
            inclusion: expr.inclusions()[w.inclusion].to_string(),
            assignment: w.assignment,
            word: w.word.to_string(),
            value: w.value,
        }),
    };
    match format {
        Format::Json => println!("{}", json(&out)),
        Format::Text => {
            println!("member: {}", out.member);
            println!("class: {}", out.class);
            if let Some(w) = &out.witness {
                println!("inclusion: {}", w.inclusion);
                let vars: Vec<String> = w.assignment.iter().map(|(v, x)| format!("{v}={x}")).collect();
                println!("assignment: {}", vars.join(" "));
                println!("word: {}", w.word);
                println!("value: {}", w.value);
            }
        }
    }
    Ok(out.member)
}

fn decompose(table: &Path, format: Format) -> Outcome {
    let s = load_table(table)?;
    let report = DecompositionReport::new(&s);
    match format {
        Format::Json => println!("{}", json(&report)),
        Format::Text => print!("{}", report.to_text()),
    }
    Ok(true)
}

#[derive(Serialize)]
struct EnumerationOut {
    order: usize,
    mode: Mode,
    count: usize,
    semigroups: Vec<FiniteSemigroup>,
}

fn enumerate(order: usize, mode: ModeArg, class: Option<&str>, format: Format) -> Outcome {
    let mut req = EnumerationRequest::new(order, mode.into());
    req.max_order = envelope()?;
    req.filter = class.map(resolve_class).transpose()?;
    let found = enumerate_semigroups(&req).map_err(enum_failure)?;
    match format {
        Format::Json => println!(
            "{}",
            json(&EnumerationOut {
                order,
                mode: req.mode,
                count: found.len(),
                semigroups: found,
            })
        ),
        Format::Text => {
            for s in &found {
                println!("{s}");
            }
            println!("# count {}", found.len());
        }
    }
    Ok(true)
}

fn verification_text(r: &VerificationReport) -> String {
    let mut out = format!("theorem: {}\nclass: {}\n", r.theorem, r.class);
    for t in &r.per_order {
        out += &format!(
            "order {}: total={} in_class={} structural={} rebuilt={} mismatches={}\n",
            t.order,
            t.total,
            t.in_class,
            t.structural,
            t.rebuilt,
            t.mismatches.len()
        );
        for m in &t.mismatches {
            out += &format!(
                "  mismatch {:?} {:?}: {}\n",
                m.side,
                m.table,
                m.detail.as_deref().unwrap_or("-")
            );
        }
    }
    out += &format!("scanned: {}\nmismatches: {}\n", r.scanned(), r.mismatch_count());
    out
}

fn verify(theorem: TheoremId, max_order: usize, format: Format) -> Outcome {
    let r = verify_theorem_within(theorem, max_order, envelope()?).map_err(enum_failure)?;
    match format {
        Format::Json => println!("{}", json(&r)),
        Format::Text => print!("{}", verification_text(&r)),
    }
    Ok(r.is_clean())
}

fn build(kind: BuildKind, spec: &str, format: Format) -> Outcome {
    let invalid = |e: &dyn std::fmt::Display| Failure::Invalid(e.to_string());
    let path = Path::new(spec);
    let s = match kind {
        BuildKind::Chain => {
            let text = if path.is_file() { read(path)? } else { spec.to_owned() };
            let specs = parse_chain_spec(&text).map_err(|e| invalid(&e))?;
            build_chain(&specs).map_err(|e| invalid(&e))?
        }
        BuildKind::Rees => {
            let spec = input::parse_rees_spec(&read(path)?).map_err(|e| invalid(&e))?;
            build_rees(&spec).map_err(|e| invalid(&e))?
        }
        BuildKind::Strong => {
            let data: StrongSemilatticeData = serde_json::from_str(&read(path)?).map_err(|e| invalid(&e))?;
            build_strong_semilattice(&data).map_err(|e| invalid(&e))?
        }
        BuildKind::Theta => {
            let data: ThetaData = serde_json::from_str(&read(path)?).map_err(|e| invalid(&e))?;
            build_theta_product(&data).map_err(|e| invalid(&e))?
        }
    };
    match format {
        Format::Json => println!("{}", json(&s)),
        Format::Text => print!("{s}"),
    }
    Ok(true)
}

fn run(cli: Cli) -> Outcome {
    match cli.command {
        Command::Check { table, class, format } => check(&table, &class, format),
        Command::Decompose { table, format } => decompose(&table, format),
        Command::Enumerate {
            order,
            mode,
            class,
            format,
        } => enumerate(order, mode, class.as_deref(), format),
        Command::Verify {
            theorem,
            max_order,
            format,
        } => verify(theorem, max_order, format),
        Command::Build { kind, spec, format } => build(kind, &spec, format),
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(3)
        }
    }
}

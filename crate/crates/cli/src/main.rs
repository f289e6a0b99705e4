use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use spincalc_core::charoracle::{decompose_spin, tensor_with_schur, LaurentChar};
use spincalc_core::diagrams::{hom_dim, normalize, Diagram, DiagramMorphism, Flavor};
use spincalc_core::homology::{
    det_module_homology, euler_characteristic, ext_dim, injective_resolution_terms, kostant_homology,
    predicted_euler_characteristic,
};
use spincalc_core::modrule::{tau_j_border_trace, RuleRegistry};
use spincalc_core::opmodel::Model;
use spincalc_core::verify::{run_check, CheckConfig, CheckRegistry};
use spincalc_core::{Error, Partition};

#[derive(Parser, Debug)]
#[command(name = "spincalc", version, about = "Universal spinor and oscillator characters, exactly")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Output::Json, global = true)]
    output: Output,
    /// Write the result to this directory, or compare against the file already there.
    #[arg(long, global = true)]
    golden: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Output {
    Json,
    Pretty,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FlavorArg {
    Spin,
    Osc,
}

impl From<FlavorArg> for Flavor {
    fn from(f: FlavorArg) -> Flavor {
        match f {
            FlavorArg::Spin => Flavor::Spin,
            FlavorArg::Osc => Flavor::Osc,
        }
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// τ_N(λ) and j_N(λ).
    Modrule {
        #[arg(long)]
        partition: Partition,
        #[arg(long = "rank-N")]
        rank_n: u32,
        #[arg(long, default_value = "border")]
        algorithm: String,
        /// Include the removed border strips.
        #[arg(long)]
        trace: bool,
    },
    /// dim Ext^i(Δ_μ, Δ_λ).
    Ext {
        #[arg(long, allow_hyphen_values = true)]
        mu: Partition,
        #[arg(long)]
        lam: Partition,
        #[arg(long)]
        i: u32,
        #[arg(long, value_enum, default_value_t = FlavorArg::Spin)]
        flavor: FlavorArg,
    },
    /// Terms of the injective resolution of Δ_λ.
    Resolve {
        #[arg(long)]
        lam: Partition,
        #[arg(long, default_value_t = 20)]
        maxdeg: u32,
    },
    /// Euler characteristic of the derived specialization against the modification rule.
    EulerCheck {
        #[arg(long)]
        lam: Partition,
        #[arg(long = "N")]
        n: u32,
    },
    /// Number of normal-form diagrams between label sets of the given sizes.
    HomDim {
        #[arg(long)]
        source: u64,
        #[arg(long)]
        target: u64,
    },
    /// Normalized composite `second ∘ first`; arguments are JSON or @file.
    ComposeDiagrams {
        #[arg(long)]
        first: String,
        #[arg(long)]
        second: String,
    },
    /// Generator-pair sweep of the operator model.
    VerifyRep {
        #[arg(long, value_enum, default_value_t = FlavorArg::Spin)]
        flavor: FlavorArg,
        #[arg(long)]
        rank: usize,
        /// Truncation degree for the oscillator model.
        #[arg(long, default_value_t = 5)]
        trunc: u32,
    },
    /// Decompose s_{λ/μ}(V) ⊗ Δ, or a character given as JSON or @file.
    DecomposeChar {
        #[arg(long = "rank-N")]
        rank_n: u32,
        #[arg(long)]
        lam: Option<Partition>,
        #[arg(long)]
        mu: Option<Partition>,
        #[arg(long)]
        char: Option<String>,
    },
    /// H_i of the determinantal module, or the modification-rule preimages of λ.
    DetHomology {
        #[arg(long = "N")]
        n: u32,
        #[arg(long)]
        i: u32,
        #[arg(long)]
        lam: Option<Partition>,
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Run the verification suites.
    VerifyAll {
        #[arg(long)]
        quick: bool,
        #[arg(long, default_value_t = CheckConfig::default().seed)]
        seed: u64,
        /// Run only these suites, by name or number.
        #[arg(long)]
        only: Vec<String>,
    },
}

/// A result plus whether it counts as a failed check.
struct Report {
    value: Value,
    failed: bool,
}

impl Report {
    fn ok(value: Value) -> Report {
        Report { value, failed: false }
    }
}

enum Failure {
    Usage(String),
    Runtime(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        match e {
            Error::BadPartition(_)
            | Error::TooManyParts { .. }
            | Error::BadRank(_)
            | Error::BadDiagram(_)
            | Error::LabelMismatch(_)
            | Error::FlavorMismatch
            | Error::UnknownStrategy(_)
            | Error::Json(_)
            | Error::ZeroStrip => Failure::Usage(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Failure {
        Failure::Usage(format!("json: {e}"))
    }
}

fn read_json_arg(arg: &str) -> Result<String, Failure> {
    match arg.strip_prefix('@') {
        Some(path) => std::fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{path}: {e}"))),
        None => Ok(arg.to_string()),
    }
}

/// Accepts a single raw diagram or a morphism.
fn parse_morphism(arg: &str) -> Result<DiagramMorphism, Failure> {
    let text = read_json_arg(arg)?;
    if let Ok(d) = serde_json::from_str::<Diagram>(&text) {
        return Ok(normalize(&d)?);
    }
    Ok(serde_json::from_str::<DiagramMorphism>(&text)?)
}

fn mult_json(m: &BTreeMap<Partition, i64>) -> Value {
    Value::Array(m.iter().map(|(p, c)| json!({"partition": p, "coeff": c})).collect())
}

fn run(cmd: &Command) -> Result<Report, Failure> {
    Ok(match cmd {
        Command::Modrule { partition, rank_n, algorithm, trace } => {
            let registry = RuleRegistry::default();
            let rule = registry.get(algorithm)?;
            let result = rule.tau_j(partition, *rank_n);
            let mut value = serde_json::to_value(&result)?;
            if *trace {
                let (_, steps) = tau_j_border_trace(partition, *rank_n);
                value["strips"] = serde_json::to_value(steps)?;
            }
            Report::ok(value)
        }
        Command::Ext { mu, lam, i, flavor } => Report::ok(json!({"dim": ext_dim(mu, lam, *i, (*flavor).into())})),
        Command::Resolve { lam, maxdeg } => Report::ok(serde_json::to_value(injective_resolution_terms(lam, *maxdeg))?),
        Command::EulerCheck { lam, n } => {
            let got = euler_characteristic(lam, *n)?;
            let want = predicted_euler_characteristic(lam, *n);
            Report {
                value: json!({"passed": got == want, "euler": mult_json(&got), "predicted": mult_json(&want)}),
                failed: got != want,
            }
        }
        Command::HomDim { source, target } => Report::ok(json!({"dim": hom_dim(*source, *target)})),
        Command::ComposeDiagrams { first, second } => {
            let f = parse_morphism(first)?;
            let g = parse_morphism(second)?;
            Report::ok(serde_json::to_value(g.compose(&f)?)?)
        }
        Command::VerifyRep { flavor, rank, trunc } => {
            let model = match flavor {
                FlavorArg::Spin => Model::spin(*rank)?,
                FlavorArg::Osc => Model::osc(*rank, *trunc)?,
            };
            let report = model.verify_homomorphism();
            Report { failed: !report.passed(), value: json!({"passed": report.passed(), "pairs_checked": report.pairs_checked, "failure": report.failure}) }
        }
        Command::DecomposeChar { rank_n, lam, mu, char } => {
            let ch = match (char, lam) {
                (Some(text), _) => {
                    let ch: LaurentChar = serde_json::from_str(&read_json_arg(text)?)?;
                    if ch.rank != (*rank_n / 2) as usize && !ch.terms.is_empty() {
                        return Err(Failure::Usage(format!("character has rank {}, expected {}", ch.rank, rank_n / 2)));
                    }
                    ch
                }
                (None, Some(lam)) => tensor_with_schur(lam, &mu.clone().unwrap_or_default(), *rank_n)?,
                (None, None) => return Err(Failure::Usage("give --lam or --char".into())),
            };
            Report::ok(mult_json(&decompose_spin(&ch, *rank_n)?))
        }
        Command::DetHomology { n, i, lam, bound } => match lam {
            None => Report::ok(serde_json::to_value(det_module_homology(*n, *i))?),
            Some(lam) => {
                if lam.len() > (*n / 2) as usize {
                    return Err(Error::TooManyParts { partition: lam.to_string(), max: (*n / 2) as usize }.into());
                }
                let bound = bound.unwrap_or(lam.size() + 2 * n + 4);
                Report::ok(serde_json::to_value(kostant_homology(lam, *n, *i, Flavor::Spin, bound))?)
            }
        },
        Command::VerifyAll { quick, seed, only } => {
            let registry = CheckRegistry::default();
            let cfg = CheckConfig { quick: *quick, seed: *seed };
            let checks = if only.is_empty() {
                registry.iter().collect::<Vec<_>>()
            } else {
                only.iter()
                    .map(|k| registry.get(k).ok_or_else(|| Failure::Usage(format!("unknown suite `{k}`"))))
                    .collect::<Result<Vec<_>, _>>()?
            };
            let outcomes: Vec<_> = checks.into_iter().map(|c| run_check(c, &cfg)).collect();
            let failed = outcomes.iter().any(|o| !o.passed);
            Report { value: json!({"passed": !failed, "checks": outcomes}), failed }
        }
    })
}

/// File name for golden output, from the subcommand and its arguments.
fn golden_name(args: &[String]) -> String {
    let mut kept = Vec::new();
    let mut iter = args.iter().skip(1);
    while let Some(a) = iter.next() {
        if a == "--golden" || a == "--output" {
            iter.next();
        } else if !a.starts_with("--golden=") && !a.starts_with("--output=") {
            kept.push(a.trim_start_matches('-'));
        }
    }
    let mut name: String = kept
        .join("_")
        .chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '_' { c } else { '.' })
        .collect();
    name.truncate(120);
    format!("{name}.json")
}

fn check_golden(dir: &Path, name: &str, value: &Value) -> Result<bool, String> {
    let path = dir.join(name);
    if path.exists() {
        let text = std::fs::read_to_string(&path).map_err(|e| format!("{}: {e}", path.display()))?;
        let stored: Value = serde_json::from_str(&text).map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(&stored == value)
    } else {
        std::fs::create_dir_all(dir).map_err(|e| format!("{}: {e}", dir.display()))?;
        let text = serde_json::to_string_pretty(value).expect("values serialize");
        std::fs::write(&path, text + "\n").map_err(|e| format!("{}: {e}", path.display()))?;
        Ok(true)
    }
}

/// Timing fields vary between runs and stay out of golden files.
fn strip_timings(v: &Value) -> Value {
    match v {
        Value::Object(m) => Value::Object(m.iter().filter(|(k, _)| k.as_str() != "millis").map(|(k, x)| (k.clone(), strip_timings(x))).collect()),
        Value::Array(a) => Value::Array(a.iter().map(strip_timings).collect()),
        other => other.clone(),
    }
}

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    if let Some(n) = std::env::var("SPINCALC_THREADS").ok().and_then(|s| s.parse::<usize>().ok()) {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    let report = match run(&cli.command) {
        Ok(r) => r,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(1);
        }
    };
    let text = match cli.output {
        Output::Json => serde_json::to_string(&report.value),
        Output::Pretty => serde_json::to_string_pretty(&report.value),
    }
    .expect("values serialize");
    {
        use std::io::Write;
        // a closed pipe downstream is not an error here
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    if let Some(dir) = &cli.golden {
        match check_golden(dir, &golden_name(&args), &strip_timings(&report.value)) {
            Ok(true) => {}
            Ok(false) => {
                eprintln!("golden mismatch for {}", golden_name(&args));
                return ExitCode::from(1);
            }
            Err(msg) => {
                eprintln!("error: {msg}");
                return ExitCode::from(1);
            }
        }
    }
    if report.failed {
        ExitCode::from(1)
    } else {
        ExitCode::SUCCESS
    }
}

//! Command-line front end: evaluates Ĥ on weight vectors, decomposes
//! partition-tree files, runs the axiom matrix, recovers potentials, and
//! scans additive functions through the difference/Mercer diagnostics.
//!
//! Output is deterministic for a fixed argv + seed: rows are tab-separated
//! with 12 significant digits, reports are JSON. Exit codes: 0 success
//! (axioms: all pass), 1 axiom failure, 2 unparseable input, 3 domain or
//! bound violation.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num::rational::BigRational;

use cocycle_entropy::additive::{self, AdditiveFunction};
use cocycle_entropy::axioms::{self, AxiomReport, CandidateEntropy, SampleConfig};
use cocycle_entropy::entropy::{hat_entropy, u, WeightVector};
use cocycle_entropy::error::Error as CoreError;
use cocycle_entropy::mercer;
use cocycle_entropy::potential::recover_potential;
use cocycle_entropy::rational::{format_rational, parse_rational, reduced_fractions, to_f64};
use cocycle_entropy::tree;

const EXIT_PARSE: u8 = 2;
const EXIT_DOMAIN: u8 = 3;

#[derive(Parser)]
#[command(
    name = "cocycle-entropy",
    version,
    about = "Homogeneous entropy toolkit: Ĥ evaluation, partition trees, axiom matrix, potential recovery, additive-function diagnostics"
)]
struct Cli {
    /// Seed for sampled checks (argv beats the environment variable)
    #[arg(
        long,
        global = true,
        env = "COCYCLE_ENTROPY_SEED",
        default_value_t = axioms::DEFAULT_SEED
    )]
    seed: u64,

    /// Tolerance override `name=value`; names: homogeneous, symmetric,
    /// cocycle, continuous-proxy, normalized (repeatable)
    #[arg(long = "tol", global = true, value_name = "NAME=VALUE")]
    tol: Vec<String>,

    /// Output format for rows and reports
    #[arg(long, global = true, value_enum, default_value_t = Format::Tsv)]
    format: Format,

    /// Write output to a file instead of stdout
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Tsv,
}

#[derive(Subcommand)]
enum Command {
    /// Print Ĥ of the given rational weights, in bits
    Entropy {
        /// Weights as `p` or `p/q` literals
        #[arg(required = true)]
        weights: Vec<String>,
    },
    /// Per-node entropies, total, flat Ĥ, and residual of a tree file
    Tree {
        /// JSON file: {"w": "p/q"} leaves under {"children": [...]} nodes
        file: PathBuf,
    },
    /// Run the five-axiom matrix against a candidate entropy
    Axioms {
        #[command(flatten)]
        candidate: CandidateSpec,
    },
    /// Recover the potential g from a candidate's Ĥ on fractions p/q
    Potential {
        #[command(flatten)]
        candidate: CandidateSpec,
        /// Probe all reduced p/q with p, q up to this bound
        #[arg(value_parser = clap::value_parser!(u64).range(1..))]
        qmax: u64,
    },
    /// Scan a completely additive function up to N
    Additive {
        /// Built-in name (log2|zero|nu2) or JSON prime map {"2": 1.0, ...}
        spec: String,
        n: u64,
    },
    /// Mercer-transform the difference sequence of an additive function
    Mercer {
        /// Built-in name (log2|zero|nu2) or JSON prime map {"2": 1.0, ...}
        spec: String,
        n: u64,
    },
}

#[derive(Args)]
struct CandidateSpec {
    /// shannon | renyi | tsallis | scaled-shannon
    name: String,

    /// Rényi order (required with `renyi`)
    #[arg(long)]
    alpha: Option<f64>,

    /// Tsallis order
    #[arg(long, default_value_t = 2.0)]
    q: f64,

    /// Scale factor for scaled-shannon
    #[arg(long, default_value_t = 2.0)]
    factor: f64,
}

struct Failure {
    message: String,
    code: u8,
}

impl Failure {
    fn parse(message: impl Into<String>) -> Self {
        Failure {
            message: message.into(),
            code: EXIT_PARSE,
        }
    }
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        let code = if e.is_parse() { EXIT_PARSE } else { EXIT_DOMAIN };
        Failure {
            message: e.to_string(),
            code,
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => code,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> Result<ExitCode, Failure> {
    let (output, code) = match &cli.command {
        Command::Entropy { weights } => cmd_entropy(cli, weights)?,
        Command::Tree { file } => cmd_tree(cli, file)?,
        Command::Axioms { candidate } => cmd_axioms(cli, candidate)?,
        Command::Potential { candidate, qmax } => cmd_potential(cli, candidate, *qmax)?,
        Command::Additive { spec, n } => cmd_additive(cli, spec, *n)?,
        Command::Mercer { spec, n } => cmd_mercer(cli, spec, *n)?,
    };
    match &cli.out {
        Some(path) => fs::write(path, output)
            .map_err(|e| Failure::parse(format!("cannot write {}: {e}", path.display())))?,
        None => print!("{output}"),
    }
    Ok(ExitCode::from(code))
}

/// `x` to `sig` significant digits in plain decimal notation.
fn format_sig(x: f64, sig: i32) -> String {
    if x == 0.0 {
        return format!("{:.*}", (sig - 1) as usize, 0.0);
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let exponent = x.abs().log10().floor() as i32;
    let decimals = (sig - 1 - exponent).max(0) as usize;
    format!("{:.*}", decimals, x)
}

fn sig12(x: f64) -> String {
    format_sig(x, 12)
}

fn build_candidate(spec: &CandidateSpec) -> Result<CandidateEntropy, Failure> {
    match spec.name.as_str() {
        "shannon" => Ok(CandidateEntropy::shannon()),
        "renyi" => {
            let alpha = spec
                .alpha
                .ok_or_else(|| Failure::parse("renyi requires --alpha"))?;
            Ok(CandidateEntropy::renyi(alpha)?)
        }
        "tsallis" => Ok(CandidateEntropy::tsallis(spec.q)?),
        "scaled-shannon" => Ok(CandidateEntropy::scaled_shannon(spec.factor)),
        other => Err(Failure::parse(format!("unknown candidate `{other}`"))),
    }
}

fn sample_config(cli: &Cli) -> Result<SampleConfig, Failure> {
    let mut cfg = SampleConfig {
        seed: cli.seed,
        ..SampleConfig::default()
    };
    for item in &cli.tol {
        let (name, value) = item
            .split_once('=')
            .ok_or_else(|| Failure::parse(format!("bad --tol `{item}`, expected name=value")))?;
        let value: f64 = value
            .parse()
            .map_err(|_| Failure::parse(format!("bad --tol value in `{item}`")))?;
        cfg.thresholds
            .set(name, value)
            .map_err(|e| Failure::parse(e.to_string()))?;
    }
    Ok(cfg)
}

fn cmd_entropy(cli: &Cli, weights: &[String]) -> Result<(String, u8), Failure> {
    let entries: Result<Vec<BigRational>, CoreError> =
        weights.iter().map(|s| parse_rational(s)).collect();
    let w = WeightVector::new(entries?)?;
    let h = hat_entropy(&w)?.bits();
    let output = match cli.format {
        Format::Tsv => format!("{}\n", sig12(h)),
        Format::Json => {
            let v = serde_json::json!({
                "weights": weights,
                "entropy_bits": h,
            });
            format!("{v}\n")
        }
    };
    Ok((output, 0))
}

fn cmd_tree(cli: &Cli, file: &PathBuf) -> Result<(String, u8), Failure> {
    let text = fs::read_to_string(file)
        .map_err(|e| Failure::parse(format!("cannot read {}: {e}", file.display())))?;
    // the whole file is untrusted input: any rejection is a parse failure
    let t = tree::tree_from_json(&text).map_err(|e| Failure {
        message: e.to_string(),
        code: EXIT_PARSE,
    })?;
    let report = tree::tree_report(&t)?;
    let output = match cli.format {
        Format::Tsv => {
            let mut out = String::new();
            for (path, e) in &report.node_entropies {
                writeln!(out, "node\t{path}\t{}", sig12(*e)).unwrap();
            }
            writeln!(out, "total\t{}", sig12(report.total)).unwrap();
            writeln!(out, "flat\t{}", sig12(report.flat)).unwrap();
            writeln!(out, "residual\t{}", sig12(report.residual)).unwrap();
            out
        }
        Format::Json => {
            let nodes: Vec<serde_json::Value> = report
                .node_entropies
                .iter()
                .map(|(path, e)| serde_json::json!({"path": path, "entropy_bits": e}))
                .collect();
            let v = serde_json::json!({
                "nodes": nodes,
                "total_bits": report.total,
                "flat_bits": report.flat,
                "residual": report.residual,
            });
            format!("{v}\n")
        }
    };
    Ok((output, 0))
}

fn cmd_axioms(cli: &Cli, candidate: &CandidateSpec) -> Result<(String, u8), Failure> {
    let c = build_candidate(candidate)?;
    let cfg = sample_config(cli)?;
    let report = axioms::run_suite(&c, &cfg);
    let code = if report.all_pass() { 0 } else { 1 };
    let output = match cli.format {
        Format::Json => format!("{}\n", report_json(&report)),
        Format::Tsv => {
            let mut out = String::new();
            for a in &report.axioms {
                writeln!(out, "axiom\t{}\t{}\t{}", a.name, a.pass, sig12(a.max_residual)).unwrap();
            }
            writeln!(out, "conclusion\t{}", sig12(report.conclusion_distance)).unwrap();
            out
        }
    };
    Ok((output, code))
}

fn report_json(report: &AxiomReport) -> String {
    serde_json::to_string_pretty(report).expect("report serializes")
}

fn cmd_potential(cli: &Cli, candidate: &CandidateSpec, qmax: u64) -> Result<(String, u8), Failure> {
    let c = build_candidate(candidate)?;
    let hat = |w: &WeightVector| c.hat_value(w);
    let mut rows = Vec::new();
    for q in reduced_fractions(qmax) {
        let recovered = recover_potential(hat, &q)?;
        let exact = u(to_f64(&q))?;
        rows.push((format_rational(&q), recovered, exact, recovered - exact));
    }
    let output = match cli.format {
        Format::Tsv => {
            let mut out = String::from("# q\tg\tu\tdiff\n");
            for (q, g, exact, diff) in &rows {
                writeln!(out, "{q}\t{}\t{}\t{}", sig12(*g), sig12(*exact), sig12(*diff)).unwrap();
            }
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|(q, g, exact, diff)| {
                    serde_json::json!({"q": q, "g": g, "u": exact, "diff": diff})
                })
                .collect();
            format!("{}\n", serde_json::json!({ "rows": rows }))
        }
    };
    Ok((output, 0))
}

fn parse_additive_spec(spec: &str) -> Result<AdditiveFunction, Failure> {
    if let Ok(f) = AdditiveFunction::by_name(spec) {
        return Ok(f);
    }
    if spec.trim_start().starts_with('{') {
        let raw: BTreeMap<String, f64> = serde_json::from_str(spec)
            .map_err(|e| Failure::parse(format!("bad prime map: {e}")))?;
        let mut table = BTreeMap::new();
        for (key, value) in raw {
            let p: u64 = key
                .parse()
                .map_err(|_| Failure::parse(format!("bad prime key `{key}`")))?;
            table.insert(p, value);
        }
        return Ok(AdditiveFunction::from_prime_table("custom", table)?);
    }
    Err(Failure::parse(format!(
        "unknown additive function `{spec}` (expected log2, zero, nu2, or a JSON prime map)"
    )))
}

fn cmd_additive(cli: &Cli, spec: &str, n: u64) -> Result<(String, u8), Failure> {
    let l = parse_additive_spec(spec)?;
    let diagnostic = additive::erdos_diagnostic(&l, n)?;
    let values = additive::scan_values(&l, n)?;
    let diag_json = serde_json::to_string(&diagnostic).expect("diagnostic serializes");
    let output = match cli.format {
        Format::Tsv => {
            let mut out = String::from("# n\tl\tdelta\n");
            for k in 1..n {
                let i = (k - 1) as usize;
                writeln!(
                    out,
                    "{k}\t{}\t{}",
                    sig12(values[i]),
                    sig12(values[i + 1] - values[i])
                )
                .unwrap();
            }
            writeln!(out, "# diagnostic {diag_json}").unwrap();
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = (1..n)
                .map(|k| {
                    let i = (k - 1) as usize;
                    serde_json::json!([k, values[i], values[i + 1] - values[i]])
                })
                .collect();
            let v = serde_json::json!({
                "rows": rows,
                "diagnostic": serde_json::to_value(&diagnostic).unwrap(),
            });
            format!("{v}\n")
        }
    };
    Ok((output, 0))
}

fn cmd_mercer(cli: &Cli, spec: &str, n: u64) -> Result<(String, u8), Failure> {
    let l = parse_additive_spec(spec)?;
    let (rows, probe) = mercer::delta_mercer_scan(&l, n)?;
    let probe_json = serde_json::to_string(&probe).expect("probe serializes");
    let output = match cli.format {
        Format::Tsv => {
            let mut out = String::from("# n\ta\ts_over_n\ttransformed\n");
            for r in &rows {
                writeln!(
                    out,
                    "{}\t{}\t{}\t{}",
                    r.n,
                    sig12(r.term),
                    sig12(r.mean),
                    sig12(r.transformed)
                )
                .unwrap();
            }
            writeln!(out, "# probe {probe_json}").unwrap();
            out
        }
        Format::Json => {
            let rows: Vec<serde_json::Value> = rows
                .iter()
                .map(|r| serde_json::json!([r.n, r.term, r.mean, r.transformed]))
                .collect();
            let v = serde_json::json!({
                "rows": rows,
                "probe": serde_json::to_value(&probe).unwrap(),
            });
            format!("{v}\n")
        }
    };
    Ok((output, 0))
}

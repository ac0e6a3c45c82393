//! `gtrans` — Q-Q tables, tail-bound curves, and step-property checks for
//! the signed likelihood-root transform, emitted as CSV.
//!
//! Exit codes: 0 all checks pass; 1 usage or numeric (convergence/domain)
//! error; 2 violations found; 3 indeterminate-only findings.

use clap::{Args, Parser, Subcommand};
use gtrans::distributions::FamilySpec;
use gtrans::harness::{GridSpec, RefDist, StatKind};
use gtrans_cli::{
    bound_curve, bounds_csv, gamma_order_default_shapes, link_default_factors, qq_csv, qq_table,
    run_gamma_order, run_increasing, run_intersection, run_link, CheckRun, Csv, SCHEMA_VERSION,
    THRESHOLD,
};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(name = "gtrans", disable_version_flag = true)]
#[command(about = "Signed likelihood-root transform tables and step-property verification")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Emit a Q-Q step table of a statistic against a reference law.
    Qq {
        #[command(flatten)]
        family: FamilyArgs,
        /// Reference distribution: gaussian (signed-g) or chisq1 (g2/chi2).
        #[arg(long = "ref", value_name = "REF")]
        reference: String,
        /// Statistic: signed-g, g2, or chi2.
        #[arg(long)]
        stat: String,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Run a verification scan; the exit code encodes the outcome.
    Check {
        /// Which property: intersection, increasing, gamma-order, or link.
        which: String,
        #[command(flatten)]
        family: FamilyArgs,
        /// Poisson mean grid: "default" or a file with one mean per line.
        #[arg(long = "poisson-grid", value_name = "GRID")]
        poisson_grid: Option<String>,
        /// Binomial grid: "default" or a file with "n p" per line.
        #[arg(long = "binomial-grid", value_name = "GRID")]
        binomial_grid: Option<String>,
        /// Geometric mean grid: "default" or a file with one mean per line.
        #[arg(long = "geometric-grid", value_name = "GRID")]
        geometric_grid: Option<String>,
        /// gamma-order: shapes, "default" or comma-separated.
        #[arg(long)]
        shapes: Option<String>,
        /// link: outcome range "1..100" or comma-separated list.
        #[arg(long)]
        m: Option<String>,
        /// link: t grid as multipliers of m, "default" or comma-separated.
        #[arg(long)]
        t: Option<String>,
        #[command(flatten)]
        common: CommonArgs,
    },
    /// Emit the exp(−D) tail-bound curve over the scan window.
    Bounds {
        #[command(flatten)]
        family: FamilyArgs,
        #[command(flatten)]
        common: CommonArgs,
    },
}

#[derive(Args, Debug)]
struct FamilyArgs {
    /// Binomial family: N P.
    #[arg(long, num_args = 2, value_names = ["N", "P"])]
    binomial: Option<Vec<String>>,
    /// Poisson family with the given mean.
    #[arg(long, value_name = "LAMBDA")]
    poisson: Option<f64>,
    /// Gamma family with the given shape (scale 1).
    #[arg(long, value_name = "SHAPE")]
    gamma: Option<f64>,
    /// Geometric family with the given mean.
    #[arg(long, value_name = "MU")]
    geometric: Option<f64>,
    /// Bernoulli-sum family: comma-separated success probabilities.
    #[arg(long = "poisson-binomial", value_name = "P1,P2,...", value_delimiter = ',')]
    poisson_binomial: Option<Vec<f64>>,
}

#[derive(Args, Debug)]
struct CommonArgs {
    /// Scan-window pmf threshold.
    #[arg(long, default_value_t = THRESHOLD)]
    threshold: f64,
    /// Write the CSV here instead of stdout.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn usage_error(msg: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {msg}");
    ExitCode::from(1)
}

impl FamilyArgs {
    fn parse(&self) -> Result<Option<FamilySpec<f64>>, String> {
        let mut specs: Vec<FamilySpec<f64>> = Vec::new();
        if let Some(np) = &self.binomial {
            let n: u64 = np[0]
                .parse()
                .map_err(|_| format!("binomial N must be an integer, got {}", np[0]))?;
            let p: f64 = np[1]
                .parse()
                .map_err(|_| format!("binomial P must be a number, got {}", np[1]))?;
            specs.push(FamilySpec::binomial(n, p).map_err(|e| e.to_string())?);
        }
        if let Some(l) = self.poisson {
            specs.push(FamilySpec::poisson(l).map_err(|e| e.to_string())?);
        }
        if let Some(s) = self.gamma {
            specs.push(FamilySpec::gamma_shape(s).map_err(|e| e.to_string())?);
        }
        if let Some(mu) = self.geometric {
            specs.push(FamilySpec::geometric(mu).map_err(|e| e.to_string())?);
        }
        if let Some(ps) = &self.poisson_binomial {
            specs.push(FamilySpec::poisson_binomial(ps.clone()).map_err(|e| e.to_string())?);
        }
        match specs.len() {
            0 => Ok(None),
            1 => Ok(Some(specs.pop().unwrap())),
            _ => Err("give exactly one family".into()),
        }
    }
}

fn parse_stat(s: &str) -> Result<StatKind, String> {
    match s {
        "signed-g" => Ok(StatKind::SignedG),
        "g2" => Ok(StatKind::G2),
        "chi2" => Ok(StatKind::Chi2),
        other => Err(format!("unknown statistic {other} (signed-g|g2|chi2)")),
    }
}

fn parse_ref(s: &str) -> Result<RefDist, String> {
    match s {
        "gaussian" => Ok(RefDist::Gaussian),
        "chisq1" => Ok(RefDist::ChiSq1),
        other => Err(format!("unknown reference {other} (gaussian|chisq1)")),
    }
}

fn parse_means_grid(arg: &str, default: impl Fn() -> Vec<f64>) -> Result<Vec<f64>, String> {
    if arg == "default" {
        return Ok(default());
    }
    let text = std::fs::read_to_string(arg).map_err(|e| format!("reading grid {arg}: {e}"))?;
    let mut means = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        means.push(
            line.parse::<f64>()
                .map_err(|_| format!("bad grid value {line:?} in {arg}"))?,
        );
    }
    if means.is_empty() {
        return Err(format!("grid file {arg} has no values"));
    }
    Ok(means)
}

fn parse_range(arg: &str) -> Result<Vec<u64>, String> {
    if let Some((a, b)) = arg.split_once("..") {
        let lo: u64 = a.parse().map_err(|_| format!("bad range start {a:?}"))?;
        let hi: u64 = b.parse().map_err(|_| format!("bad range end {b:?}"))?;
        if lo == 0 || hi < lo {
            return Err(format!("range {arg} must be 1-based and nonempty"));
        }
        return Ok((lo..=hi).collect());
    }
    arg.split(',')
        .map(|s| s.trim().parse::<u64>().map_err(|_| format!("bad m value {s:?}")))
        .collect()
}

fn parse_f64_list(arg: &str) -> Result<Vec<f64>, String> {
    arg.split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad value {s:?}")))
        .collect()
}

fn emit(csv: &Csv, out: &Option<PathBuf>, summary: &[String]) -> Result<(), String> {
    match out {
        Some(path) => {
            std::fs::write(path, csv.render()).map_err(|e| format!("writing {path:?}: {e}"))?;
            for line in summary {
                println!("{line}");
            }
        }
        None => {
            for line in summary {
                eprintln!("{line}");
            }
            print!("{}", csv.render());
        }
    }
    Ok(())
}

fn run_check(run: CheckRun, out: &Option<PathBuf>) -> ExitCode {
    if let Err(msg) = emit(&run.csv, out, &run.summary) {
        return usage_error(msg);
    }
    ExitCode::from(run.outcome.exit_code())
}

fn main() -> ExitCode {
    // custom version line carrying library and schema versions
    if std::env::args().any(|a| a == "--version" || a == "-V") {
        println!(
            "gtrans {} (core {}, csv-schema {})",
            env!("CARGO_PKG_VERSION"),
            gtrans::VERSION,
            SCHEMA_VERSION
        );
        return ExitCode::from(0);
    }
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // help output is a success; anything else is a usage error
            if e.kind() == clap::error::ErrorKind::DisplayHelp {
                print!("{e}");
                return ExitCode::from(0);
            }
            eprint!("{e}");
            return ExitCode::from(1);
        }
    };

    match cli.command {
        Command::Qq {
            family,
            reference,
            stat,
            common,
        } => {
            let spec = match family.parse() {
                Ok(Some(spec)) => spec,
                Ok(None) => return usage_error("qq needs a family"),
                Err(msg) => return usage_error(msg),
            };
            let (kind, reference) = match (parse_stat(&stat), parse_ref(&reference)) {
                (Ok(k), Ok(r)) => (k, r),
                (Err(msg), _) | (_, Err(msg)) => return usage_error(msg),
            };
            let rows = match qq_table(&spec, kind, reference, common.threshold) {
                Ok(rows) => rows,
                Err(e) => return usage_error(e),
            };
            if let Err(msg) = emit(&qq_csv(&rows), &common.out, &[]) {
                return usage_error(msg);
            }
            ExitCode::from(0)
        }
        Command::Bounds { family, common } => {
            let spec = match family.parse() {
                Ok(Some(spec)) => spec,
                Ok(None) => return usage_error("bounds needs a family"),
                Err(msg) => return usage_error(msg),
            };
            let rows = match bound_curve(&spec, common.threshold) {
                Ok(rows) => rows,
                Err(e) => return usage_error(e),
            };
            if let Err(msg) = emit(&bounds_csv(&rows), &common.out, &[]) {
                return usage_error(msg);
            }
            ExitCode::from(0)
        }
        Command::Check {
            which,
            family,
            poisson_grid,
            binomial_grid,
            geometric_grid,
            shapes,
            m,
            t,
            common,
        } => {
            match which.as_str() {
                "intersection" | "increasing" => {
                    let mut families: Vec<FamilySpec<f64>> = Vec::new();
                    match family.parse() {
                        Ok(Some(spec)) => families.push(spec),
                        Ok(None) => {}
                        Err(msg) => return usage_error(msg),
                    }
                    if let Some(arg) = &poisson_grid {
                        if arg == "default" {
                            families
                                .extend(GridSpec::default_poisson(200, 0.01, 500.0).families);
                        } else {
                            match parse_means_grid(arg, Vec::new) {
                                Ok(ms) => {
                                    for mu in ms {
                                        match FamilySpec::poisson(mu) {
                                            Ok(s) => families.push(s),
                                            Err(e) => return usage_error(e),
                                        }
                                    }
                                }
                                Err(msg) => return usage_error(msg),
                            }
                        }
                    }
                    if let Some(arg) = &geometric_grid {
                        if arg == "default" {
                            families.extend(GridSpec::default_geometric().families);
                        } else {
                            match parse_means_grid(arg, Vec::new) {
                                Ok(ms) => {
                                    for mu in ms {
                                        match FamilySpec::geometric(mu) {
                                            Ok(s) => families.push(s),
                                            Err(e) => return usage_error(e),
                                        }
                                    }
                                }
                                Err(msg) => return usage_error(msg),
                            }
                        }
                    }
                    if let Some(arg) = &binomial_grid {
                        if arg == "default" {
                            families.extend(GridSpec::default_binomial(2000).families);
                        } else {
                            match read_binomial_grid(arg) {
                                Ok(specs) => families.extend(specs),
                                Err(msg) => return usage_error(msg),
                            }
                        }
                    }
                    if families.is_empty() {
                        return usage_error(format!("{which} needs a family or a grid"));
                    }
                    let grid = match GridSpec::new(families, common.threshold) {
                        Ok(g) => g,
                        Err(e) => return usage_error(e),
                    };
                    let run = if which == "intersection" {
                        run_intersection(&grid)
                    } else {
                        run_increasing(&grid)
                    };
                    match run {
                        Ok(run) => run_check(run, &common.out),
                        Err(e) => usage_error(e),
                    }
                }
                "gamma-order" => {
                    let shapes = match shapes.as_deref().unwrap_or("default") {
                        "default" => gamma_order_default_shapes(),
                        list => match parse_f64_list(list) {
                            Ok(v) => v,
                            Err(msg) => return usage_error(msg),
                        },
                    };
                    match run_gamma_order(&shapes, 500) {
                        Ok(run) => run_check(run, &common.out),
                        Err(e) => usage_error(e),
                    }
                }
                "link" => {
                    let ms = match m.as_deref() {
                        Some(arg) => match parse_range(arg) {
                            Ok(v) => v,
                            Err(msg) => return usage_error(msg),
                        },
                        None => (1..=100).collect(),
                    };
                    let factors = match t.as_deref().unwrap_or("default") {
                        "default" => link_default_factors(),
                        list => match parse_f64_list(list) {
                            Ok(v) => v,
                            Err(msg) => return usage_error(msg),
                        },
                    };
                    match run_link(&ms, &factors) {
                        Ok(run) => run_check(run, &common.out),
                        Err(e) => usage_error(e),
                    }
                }
                other => usage_error(format!(
                    "unknown check {other} (intersection|increasing|gamma-order|link)"
                )),
            }
        }
    }
}

fn read_binomial_grid(arg: &str) -> Result<Vec<FamilySpec<f64>>, String> {
    let text = std::fs::read_to_string(arg).map_err(|e| format!("reading grid {arg}: {e}"))?;
    let mut specs = Vec::new();
    for line in text.lines() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut it = line.split_whitespace();
        let (n, p) = (it.next(), it.next());
        match (n, p) {
            (Some(n), Some(p)) => {
                let n: u64 = n.parse().map_err(|_| format!("bad n {n:?} in {arg}"))?;
                let p: f64 = p.parse().map_err(|_| format!("bad p {p:?} in {arg}"))?;
                specs.push(FamilySpec::binomial(n, p).map_err(|e| e.to_string())?);
            }
            _ => return Err(format!("bad binomial grid line {line:?} in {arg}")),
        }
    }
    if specs.is_empty() {
        return Err(format!("grid file {arg} has no entries"));
    }
    Ok(specs)
}

//! Command-line front end: set ingestion, analysis, sphere tables, scans and
//! the verification suite.

pub mod document;
pub mod setfile;

use clap::{Args, Parser, Subcommand, ValueEnum};
use cube_mu::additive::{self, additive_energy, energy_ratio, hereditary_energy, m_bound};
use cube_mu::bounds::{self, conjecture_scan, PROP11_MAX_SIZE};
use cube_mu::cube::{synthesize, support_of, DenseCap, SupportSet};
use cube_mu::quartic::{mu_lower, mu_upper, OptimizerConfig};
use cube_mu::sphere::{self, SphereParams};
use cube_mu::verify::{run_suite, Suite, VerifyConfig};
use cube_mu::{asymptotics, rational};
use num_bigint::BigInt;
use std::path::PathBuf;

use document::{
    Analysis, ConfigEcho, FloatRow, Footer, Hereditary, Payload, ReportDocument, SphereTable,
    TableRows, Uncertainty,
};

#[derive(Debug, Parser)]
#[command(name = "cube-mu", version, about = "Fourth-moment bounds for Fourier-sparse functions on the Boolean cube")]
pub struct Cli {
    #[command(flatten)]
    pub flags: Flags,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Flags {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Seed for every randomized stage.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Random starts for the μ estimator.
    #[arg(long, global = true, default_value_t = 32)]
    pub starts: usize,
    /// Iteration cap per start.
    #[arg(long, global = true, default_value_t = 10_000)]
    pub iters: usize,
    /// Relative stopping tolerance of the ascent.
    #[arg(long, global = true, default_value_t = 1e-12)]
    pub tol: f64,
    /// Largest n for which dense 2^n arrays are allocated.
    #[arg(long, global = true, default_value_t = cube_mu::cube::DEFAULT_DENSE_CAP)]
    pub dense_cap: u32,
    /// Largest |A| searched exhaustively for the hereditary energy.
    #[arg(long, global = true, default_value_t = additive::DEFAULT_EXACT_LIMIT)]
    pub exact_limit: usize,
    /// Worker threads (default: all cores). Affects wall time only.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Values {
    Exact,
    Float,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Analyze the set in a set file.
    Analyze { path: PathBuf },
    /// Tabulate the summands s_t(n,k) of the sphere energy ratio.
    SphereTable {
        n: u32,
        k: u32,
        #[arg(long, value_enum, default_value_t = Values::Exact)]
        values: Values,
        /// First t to print.
        #[arg(long)]
        from: Option<u32>,
        /// Last t to print.
        #[arg(long)]
        to: Option<u32>,
    },
    /// Compare the μ estimator with the energy ratio on spheres up to n_max.
    Scan { n_max: u32 },
    /// Run a verification suite.
    Verify {
        #[arg(value_parser = parse_suite)]
        suite: Suite,
    },
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|_| format!("expected one of {}", Suite::NAMES.join(", ")))
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {source}")]
    Parse {
        path: String,
        source: setfile::ParseError,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{stage}: {source}")]
    Core {
        stage: &'static str,
        source: cube_mu::Error,
    },
    #[error("output: {0}")]
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core { source, .. } if source.is_resource_limit() => 3,
            CliError::Core {
                source: cube_mu::Error::CrossCheck(_),
                ..
            } => 1,
            CliError::Output(_) => 1,
            _ => 2,
        }
    }
}

fn stage(name: &'static str) -> impl FnOnce(cube_mu::Error) -> CliError {
    move |source| CliError::Core {
        stage: name,
        source,
    }
}

impl Flags {
    pub fn optimizer(&self) -> OptimizerConfig {
        OptimizerConfig {
            starts: self.starts,
            max_iters: self.iters,
            tol: self.tol,
            seed: self.seed,
            dense_cap: DenseCap(self.dense_cap),
            ..OptimizerConfig::default()
        }
    }

    fn echo(&self, args: Vec<(String, String)>) -> ConfigEcho {
        ConfigEcho {
            format: match self.format {
                Format::Json => "json",
                Format::Csv => "csv",
            }
            .into(),
            seed: self.seed,
            starts: self.starts,
            iters: self.iters,
            tol: self.tol,
            dense_cap: self.dense_cap,
            exact_limit: self.exact_limit,
            args,
        }
    }
}

/// Runs a parsed command and returns its document.
pub fn execute(cli: &Cli) -> Result<ReportDocument, CliError> {
    let flags = &cli.flags;
    if flags.starts == 0 && flags.iters == 0 {
        return Err(CliError::Usage("--starts and --iters cannot both be zero".into()));
    }
    if !(flags.tol.is_finite() && flags.tol >= 0.0) {
        return Err(CliError::Usage("--tol must be a nonnegative number".into()));
    }
    let arg = |k: &str, v: String| (k.to_string(), v);
    let doc = match &cli.command {
        Command::Analyze { path } => {
            let shown = path.display().to_string();
            let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
                path: shown.clone(),
                source,
            })?;
            let set = setfile::parse(&text).map_err(|source| CliError::Parse {
                path: shown.clone(),
                source,
            })?;
            let analysis = analyze(&set, flags)?;
            ReportDocument::new(
                "analyze",
                flags.echo(vec![arg("path", shown)]),
                Payload::Analysis(Box::new(analysis)),
            )
        }
        Command::SphereTable {
            n,
            k,
            values,
            from,
            to,
        } => {
            let table = sphere_table(*n, *k, *values, *from, *to)?;
            let mut args = vec![arg("n", n.to_string()), arg("k", k.to_string())];
            args.push(arg(
                "values",
                match values {
                    Values::Exact => "exact",
                    Values::Float => "float",
                }
                .into(),
            ));
            args.extend(from.map(|t| arg("from", t.to_string())));
            args.extend(to.map(|t| arg("to", t.to_string())));
            ReportDocument::new("sphere-table", flags.echo(args), Payload::SphereTable(table))
        }
        Command::Scan { n_max } => {
            let records = conjecture_scan(*n_max, &flags.optimizer()).map_err(stage("scan"))?;
            ReportDocument::new(
                "scan",
                flags.echo(vec![arg("n_max", n_max.to_string())]),
                Payload::Scan(records),
            )
        }
        Command::Verify { suite } => {
            let cfg = VerifyConfig {
                seed: flags.seed,
                optimizer: flags.optimizer(),
                exact_limit: flags.exact_limit,
            };
            let report = run_suite(*suite, &cfg).map_err(stage("verify"))?;
            ReportDocument::new(
                "verify",
                flags.echo(vec![arg("suite", suite.to_string())]),
                Payload::Verify(report),
            )
        }
    };
    Ok(doc)
}

pub fn render(doc: &ReportDocument, format: Format) -> Result<String, CliError> {
    match format {
        Format::Json => doc.to_json().map_err(|e| CliError::Output(e.to_string())),
        Format::Csv => doc.to_csv().map_err(|e| CliError::Output(e.to_string())),
    }
}

pub fn analyze(set: &SupportSet, flags: &Flags) -> Result<Analysis, CliError> {
    let cfg = flags.optimizer();
    let n = set.dim();
    let mut notes = Vec::new();
    let energy = additive_energy(set).map_err(stage("energy"))?;
    let ratio = energy_ratio(set).map_err(stage("energy"))?;
    let m = m_bound(set).map_err(stage("multiplicities"))?;
    let lower = mu_lower(set, &cfg).map_err(stage("mu_lower"))?;
    let upper = mu_upper(set).map_err(stage("mu_upper"))?;
    let her = hereditary_energy(set, flags.exact_limit).map_err(stage("hereditary"))?;
    if !her.exact {
        notes.push(format!(
            "hereditary energy is a heuristic lower estimate (|A| = {} > exact limit {})",
            set.len(),
            flags.exact_limit
        ));
    }

    let cap = DenseCap(flags.dense_cap);
    cap.check(n).map_err(stage("uncertainty"))?;
    let spectrum = lower.certificate.embed(cap).map_err(stage("uncertainty"))?;
    let f = synthesize(&spectrum).map_err(stage("uncertainty"))?;
    let uncertainty = Uncertainty {
        support: support_of(&f, bounds::FLOAT_SLACK).len(),
        spectrum_support: spectrum.support(bounds::FLOAT_SLACK).len(),
        product: support_of(&f, bounds::FLOAT_SLACK).len() as u128
            * spectrum.support(bounds::FLOAT_SLACK).len() as u128,
        cube_size: 1u128 << n,
    };
    let mut reports =
        vec![bounds::uncertainty_report(&f, flags.exact_limit).map_err(stage("uncertainty"))?];
    if set.len() <= PROP11_MAX_SIZE {
        reports.push(bounds::prop11_report(set, &cfg, flags.exact_limit).map_err(stage("prop11"))?);
    } else {
        notes.push(format!(
            "hereditary bracket report skipped (|A| = {} > {PROP11_MAX_SIZE})",
            set.len()
        ));
    }

    Ok(Analysis {
        n,
        size: set.len(),
        energy: BigInt::from(energy),
        energy_ratio: ratio,
        multiplicity_bound: m,
        mu_lower: lower,
        mu_upper: upper,
        hereditary: Hereditary {
            best: her.best.elements().iter().map(|&x| setfile::bitstring(n, x)).collect(),
            energy: BigInt::from(her.energy),
            ratio: her.ratio,
            exact: her.exact,
        },
        uncertainty: Some(uncertainty),
        reports,
        notes,
    })
}

pub fn sphere_table(
    n: u32,
    k: u32,
    values: Values,
    from: Option<u32>,
    to: Option<u32>,
) -> Result<SphereTable, CliError> {
    let p = SphereParams::new(n, k).map_err(|e| CliError::Usage(e.to_string()))?;
    let (lo, hi) = (from.unwrap_or(0), to.unwrap_or(k));
    if lo > hi {
        return Err(CliError::Usage(format!("empty range {lo}..={hi}")));
    }
    let exact = sphere::sphere_table(p, lo..=hi);
    let rows = match values {
        Values::Exact => TableRows::Exact(exact),
        Values::Float => TableRows::Float(
            exact
                .iter()
                .map(|r| FloatRow {
                    t: r.t,
                    s_t: rational::to_f64(&r.s_t),
                    ratio_to_prev: r.ratio_to_prev.as_ref().map(rational::to_f64),
                    cumulative: rational::to_f64(&r.cumulative),
                })
                .collect(),
        ),
    };
    let r = sphere::r_exact(p);
    let (psi, psi_bound) = if 2 * k <= n {
        let psi = asymptotics::psi_value(k as f64 / n as f64).map_err(stage("psi"))?;
        (Some(psi), Some((n as f64 * psi).exp2()))
    } else {
        (None, None)
    };
    Ok(SphereTable {
        n,
        k,
        rows,
        footer: Footer {
            r_float: rational::to_f64(&r),
            r,
            t1: sphere::t1(p),
            argmax: (k >= 1).then(|| sphere::argmax_st(p)).transpose().map_err(stage("argmax"))?,
            psi,
            psi_bound,
        },
    })
}

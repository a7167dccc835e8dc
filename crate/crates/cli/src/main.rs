//! Command line surface for the truncated Brown-Peterson THH calculator.
//!
//! Subcommands: `compute` (degreewise tables of the catalog models), `brun`
//! (run the spectral sequence engine), `verify` (the checking suites),
//! `series` (dimension series as CSV), `chart` (SVG charts).
//!
//! Exit codes: 0 ok, 1 verification failure, 2 usage error, 3 I/O error.
//! `THH_THREADS` caps the worker count (default: machine parallelism).

mod chart;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;
use thh_core::arith::{AbelianGroup, Prime};
use thh_core::brun::run_brun;
use thh_core::catalog;
use thh_core::graded::DegreeRecord;
use thh_core::verify::{self, VerifyConfig};

#[derive(Parser)]
#[command(
    name = "thh",
    version,
    about = "Exact THH calculator for truncated Brown-Peterson spectra"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Model {
    /// THH(BP<n>; F_p) dimensions (requires --n)
    ThhFp,
    /// THH(Z_(p))
    ThhZ,
    /// THH(ell) = THH(BP<1>)
    ThhEll,
    /// THH(ell; Z_(p))
    ThhEllZ,
    /// THH(BP<2>; Z_(p))
    ThhBp2Z,
    /// THH(BP<2>; BP<1>) closed form
    ThhBp2Bp1,
    /// THC(Z), p-localized
    ThcZ,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesModel {
    /// THH(BP<n>; F_p)
    ThhFp,
    /// THC(BP<n>; F_p)
    ThcFp,
    /// Rational THH(BP<n>; BP<m>)
    Rational,
    /// Relative cooperations of BP<m> over BP<n>
    Cooperations,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Main,
    Rational,
    Lemmas,
    Ku,
    All,
}

#[derive(Subcommand)]
enum Cmd {
    /// Tabulate the degreewise groups of a catalog model
    Compute {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 40)]
        max_degree: i64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        #[arg(long)]
        output: Option<PathBuf>,
        /// Height parameter for thh-fp
        #[arg(long)]
        n: Option<i32>,
    },
    /// Run the one-step spectral sequence and emit the abutment
    Brun {
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=2))]
        n: u32,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 60)]
        max_degree: i64,
        #[arg(long, value_enum, default_value = "json")]
        emit: Format,
        /// Print the hidden extension log to stderr
        #[arg(long)]
        log_extensions: bool,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Run a verification suite and print the JSON reports
    Verify {
        #[arg(long, value_enum, default_value = "all")]
        suite: Suite,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 400)]
        max_degree: i64,
        /// Index bound for the lemma scans
        #[arg(long, default_value_t = 200)]
        lemma_indices: u64,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Emit dimension series coefficients as CSV rows degree,dim
    Series {
        #[arg(long, value_enum)]
        model: SeriesModel,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 40)]
        max_degree: i64,
        #[arg(long)]
        n: Option<i32>,
        #[arg(long)]
        m: Option<i32>,
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Draw a deterministic SVG chart of a catalog model
    Chart {
        #[arg(long, value_enum)]
        model: Model,
        #[arg(long, default_value_t = 2)]
        prime: u64,
        #[arg(long, default_value_t = 40)]
        max_degree: i64,
        #[arg(long)]
        output: PathBuf,
        #[arg(long)]
        n: Option<i32>,
    },
}

fn main() -> ExitCode {
    let threads = std::env::var("THH_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok());
    thh_core::init_thread_cap(threads);
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            // distinguish I/O failures from usage-level failures
            if e.chain()
                .any(|c| c.downcast_ref::<std::io::Error>().is_some())
            {
                ExitCode::from(3)
            } else {
                ExitCode::from(2)
            }
        }
    }
}

fn parse_prime(v: u64) -> anyhow::Result<Prime> {
    Prime::new(v).map_err(|e| anyhow::anyhow!("{e}"))
}

/// A degreewise group table for one model.
fn model_table(
    model: Model,
    p: Prime,
    n: Option<i32>,
    max_degree: i64,
) -> anyhow::Result<Vec<DegreeRecord>> {
    use rayon::prelude::*;
    let records = |f: &(dyn Fn(i64) -> AbelianGroup + Sync)| -> Vec<DegreeRecord> {
        (0..=max_degree)
            .into_par_iter()
            .map(|d| DegreeRecord::new(d, &f(d)))
            .collect()
    };
    Ok(match model {
        Model::ThhFp => {
            let n = n.ok_or_else(|| anyhow::anyhow!("--model thh-fp requires --n"))?;
            anyhow::ensure!(n >= -1, "--n must be at least -1");
            let series = catalog::thh_bpn_fp(n, p);
            let dims = series.dims_up_to(max_degree);
            records(&|d| AbelianGroup::new(0, vec![1; dims[d as usize] as usize]))
        }
        Model::ThhZ => records(&|d| catalog::thh_z_p(d, p)),
        Model::ThhEll => {
            let pres = catalog::thh_ell(p);
            records(&|d| pres.realize(d))
        }
        Model::ThhEllZ => {
            let pres = catalog::thh_ell_zp(p);
            records(&|d| pres.realize(d))
        }
        Model::ThhBp2Z => {
            let pres = catalog::thh_bp2_zp(p);
            records(&|d| pres.realize(d))
        }
        Model::ThhBp2Bp1 => {
            let pres = catalog::thh_bp2_bp1_closed(p);
            records(&|d| pres.realize(d))
        }
        Model::ThcZ => records(&|d| catalog::thc_z(d).localize(p)),
    })
}

fn write_out(output: Option<&PathBuf>, content: &str) -> anyhow::Result<()> {
    match output {
        Some(path) => {
            std::fs::write(path, content).with_context(|| format!("writing {}", path.display()))?
        }
        None => {
            std::io::stdout()
                .write_all(content.as_bytes())
                .context("writing stdout")?;
        }
    }
    Ok(())
}

fn records_to_csv(records: &[DegreeRecord]) -> String {
    let mut out = String::from("degree,free_rank,torsion_exponents\n");
    for r in records {
        let torsion = r
            .torsion_exponents
            .iter()
            .map(|e| e.to_string())
            .collect::<Vec<_>>()
            .join(";");
        out.push_str(&format!("{},{},{}\n", r.degree, r.free_rank, torsion));
    }
    out
}

fn dispatch(cli: Cli) -> anyhow::Result<ExitCode> {
    match cli.cmd {
        Cmd::Compute {
            model,
            prime,
            max_degree,
            format,
            output,
            n,
        } => {
            let p = parse_prime(prime)?;
            anyhow::ensure!(max_degree >= 0, "--max-degree must be nonnegative");
            let records = model_table(model, p, n, max_degree)?;
            let content = match format {
                Format::Json => serde_json::to_string_pretty(&records)? + "\n",
                Format::Csv => records_to_csv(&records),
            };
            write_out(output.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Brun {
            n,
            prime,
            max_degree,
            emit,
            log_extensions,
            output,
        } => {
            let p = parse_prime(prime)?;
            let floor = 2 * (prime as i64).pow(n);
            anyhow::ensure!(
                max_degree >= floor,
                "--max-degree must be at least 2 p^n = {floor} for this run"
            );
            let run = run_brun(n, p, max_degree).map_err(|e| anyhow::anyhow!("{e}"))?;
            let records: Vec<DegreeRecord> = (0..=max_degree)
                .map(|d| DegreeRecord::new(d, &run.abutment(d).expect("in window")))
                .collect();
            if log_extensions {
                for e in &run.extensions {
                    eprintln!(
                        "extension at degree {}: p^{} * {} = {}{}",
                        e.degree,
                        e.p_power,
                        e.source,
                        e.target_display(run.case.sigma_index()),
                        if e.derived { " (derived)" } else { "" }
                    );
                }
            }
            let content = match emit {
                Format::Json => {
                    let extensions: Vec<serde_json::Value> = run
                        .extensions
                        .iter()
                        .map(|e| {
                            serde_json::json!({
                                "source": e.source.to_string(),
                                "target": e.target_display(run.case.sigma_index()).to_string(),
                                "p_power": e.p_power,
                            })
                        })
                        .collect();
                    let doc = serde_json::json!({
                        "prime": prime,
                        "height": n,
                        "max_degree": max_degree,
                        "degrees": records,
                        "extensions": extensions,
                    });
                    serde_json::to_string_pretty(&doc)? + "\n"
                }
                Format::Csv => records_to_csv(&records),
            };
            write_out(output.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Verify {
            suite,
            prime,
            max_degree,
            lemma_indices,
            output,
        } => {
            let cfg = VerifyConfig {
                prime,
                max_degree,
                lemma_i_max: lemma_indices,
            };
            parse_prime(prime)?;
            let reports = match suite {
                Suite::Main => verify::suite_main(&cfg),
                Suite::Rational => verify::suite_rational(&cfg),
                Suite::Lemmas => verify::suite_lemmas(&cfg),
                Suite::Ku => verify::suite_ku(&cfg),
                Suite::All => verify::suite_all(&cfg),
            };
            let content = serde_json::to_string_pretty(&reports)? + "\n";
            write_out(output.as_ref(), &content)?;
            let ok = reports.iter().all(|r| r.passed());
            for r in &reports {
                eprintln!(
                    "{}: {}",
                    r.name,
                    match r.status {
                        verify::Status::Pass => "pass",
                        verify::Status::Flagged => "pass (flagged)",
                        verify::Status::Fail => "FAIL",
                    }
                );
            }
            Ok(if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            })
        }
        Cmd::Series {
            model,
            prime,
            max_degree,
            n,
            m,
            output,
        } => {
            let p = parse_prime(prime)?;
            anyhow::ensure!(max_degree >= 0, "--max-degree must be nonnegative");
            let series = match model {
                SeriesModel::ThhFp => {
                    let n = n.ok_or_else(|| anyhow::anyhow!("--model thh-fp requires --n"))?;
                    catalog::thh_bpn_fp(n, p)
                }
                SeriesModel::ThcFp => {
                    let n = n.ok_or_else(|| anyhow::anyhow!("--model thc-fp requires --n"))?;
                    catalog::thc_bpn_fp(n, p)
                }
                SeriesModel::Rational => {
                    let n = n.ok_or_else(|| anyhow::anyhow!("--model rational requires --n"))?;
                    let m = m.ok_or_else(|| anyhow::anyhow!("--model rational requires --m"))?;
                    anyhow::ensure!(0 <= m && m <= n, "need 0 <= m <= n");
                    catalog::rational_thh(n as u32, m as u32, p)
                }
                SeriesModel::Cooperations => {
                    let n =
                        n.ok_or_else(|| anyhow::anyhow!("--model cooperations requires --n"))?;
                    let m =
                        m.ok_or_else(|| anyhow::anyhow!("--model cooperations requires --m"))?;
                    anyhow::ensure!(-1 <= m && m <= n, "need -1 <= m <= n");
                    catalog::cooperations(n, m, p)
                }
            };
            let dims = series.dims_up_to(max_degree);
            let mut content = String::from("degree,dim\n");
            for (d, v) in dims.iter().enumerate() {
                content.push_str(&format!("{d},{v}\n"));
            }
            write_out(output.as_ref(), &content)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Chart {
            model,
            prime,
            max_degree,
            output,
            n,
        } => {
            let p = parse_prime(prime)?;
            anyhow::ensure!(max_degree >= 0, "--max-degree must be nonnegative");
            let svg = chart::render_model(model, p, n, max_degree)?;
            std::fs::write(&output, svg)
                .with_context(|| format!("writing {}", output.display()))?;
            Ok(ExitCode::SUCCESS)
        }
    }
}

impl Model {
    /// The presentation behind a model, when it has one (label-carrying
    /// models get dots with generator names and v1-struts).
    fn presentation(self, p: Prime) -> Option<thh_core::graded::Presentation> {
        match self {
            Model::ThhEll => Some(catalog::thh_ell(p)),
            Model::ThhEllZ => Some(catalog::thh_ell_zp(p)),
            Model::ThhBp2Z => Some(catalog::thh_bp2_zp(p)),
            Model::ThhBp2Bp1 => Some(catalog::thh_bp2_bp1_closed(p)),
            _ => None,
        }
    }
}

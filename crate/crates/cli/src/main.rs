use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use zernike_core::experiments::{
    compare_with_reference, default_j_list, l2_rate_sweep, markov_sweep, rate_table, verify, TableOptions,
    TargetFunction,
};
use zernike_core::SeminormConvention;

#[derive(Parser)]
#[command(name = "zernike", version, about = "Projection-error experiments with generalized Zernike polynomials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Convention {
    Cartesian,
    Complex,
}

impl From<Convention> for SeminormConvention {
    fn from(c: Convention) -> Self {
        match c {
            Convention::Cartesian => SeminormConvention::Cartesian,
            Convention::Complex => SeminormConvention::ComplexPair,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum Function {
    /// exp(x1), expanded exactly in coefficient space
    #[value(name = "exp_x1", alias = "exp-x1")]
    ExpX1,
    /// The sharpness family t_j; degrees must be 2j + 2l - 1
    #[value(name = "t_family", alias = "t-family")]
    TFamily,
}

#[derive(Subcommand)]
enum Command {
    /// Seminorm ratios and growth rates of the sharpness residuals
    Table {
        #[arg(long, default_value_t = 9.9, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        l: usize,
        /// Comma-separated j values (each >= l, strictly increasing)
        #[arg(long, value_delimiter = ',', conflicts_with = "table1_defaults")]
        j_list: Option<Vec<usize>>,
        /// Use j = l + 2^i, i = 1..12, and compare against the published table
        #[arg(long)]
        table1_defaults: bool,
        #[arg(long, value_enum, default_value_t = Convention::Cartesian)]
        convention: Convention,
        /// Use full norms instead of seminorms
        #[arg(long)]
        use_norms: bool,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run every self-check; exits nonzero if any fails
    Verify {
        #[arg(long, default_value_t = 42)]
        seed: u64,
    },
    /// L² projection error ‖u - Π_N u‖ against N
    Rate {
        #[arg(long, value_enum, default_value_t = Function::ExpX1)]
        function: Function,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        /// Report error · (N+1)^k alongside the error
        #[arg(long, default_value_t = 2)]
        k: usize,
        #[arg(long, value_delimiter = ',', default_value = "4,8,12,16")]
        degrees: Vec<usize>,
        /// Order of the sharpness family (t-family only)
        #[arg(long, default_value_t = 2)]
        l: usize,
        #[arg(long)]
        json: bool,
    },
    /// Largest ‖∇p‖ / (N² ‖p‖) over random polynomials
    Markov {
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 40)]
        max_degree: usize,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long)]
        json: bool,
    },
    /// Log-log columns of the rate table with reference slopes, for plotting
    PlotData {
        #[arg(long, default_value_t = 9.9, allow_negative_numbers = true)]
        alpha: f64,
        #[arg(long, default_value_t = 3)]
        l: usize,
        #[arg(long, value_enum, default_value_t = Convention::Cartesian)]
        convention: Convention,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
        None => {
            std::io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn run_table(
    alpha: f64,
    l: usize,
    j_list: Option<Vec<usize>>,
    table1_defaults: bool,
    opts: TableOptions,
    format: Format,
    out: Option<PathBuf>,
) -> Result<()> {
    let js = j_list.unwrap_or_else(|| default_j_list(l));
    let table = rate_table(alpha, l, &js, opts)?;
    let text = match format {
        Format::Csv => table.to_csv(),
        Format::Json => serde_json::to_string_pretty(&table)? + "\n",
    };
    emit(&text, out.as_ref())?;
    eprintln!("convention: {}{}", opts.convention, if opts.use_norms { " (full norms)" } else { "" });
    if table1_defaults {
        if alpha != 9.9 || l != 3 {
            eprintln!("reference check skipped: the published table has alpha = 9.9, l = 3");
            return Ok(());
        }
        for conv in [SeminormConvention::Cartesian, SeminormConvention::ComplexPair] {
            let t = if conv == opts.convention {
                table.clone()
            } else {
                rate_table(alpha, l, &js, TableOptions { convention: conv, ..opts })?
            };
            let cmp = compare_with_reference(&t);
            eprintln!(
                "reference check [{conv}]: {} (max rat rel err after rounding {:.1e}, max egr err {:.1e})",
                if cmp.matches() { "MATCH" } else { "no match" },
                cmp.max_rat_rel_err,
                cmp.max_egr_abs_err
            );
        }
    }
    Ok(())
}

fn run_rate(function: Function, alpha: f64, k: usize, degrees: &[usize], l: usize, json: bool) -> Result<()> {
    let target = match function {
        Function::ExpX1 => TargetFunction::ExpX1,
        Function::TFamily => TargetFunction::SharpnessFamily { l },
    };
    let report = l2_rate_sweep(&target, alpha, k, degrees)?;
    if json {
        println!("{}", serde_json::to_string_pretty(&report)?);
        return Ok(());
    }
    println!("N,error,scaled_error,local_slope");
    for row in &report.rows {
        let slope = row.local_slope.map(|s| format!("{s:?}")).unwrap_or_default();
        println!("{},{:?},{:?},{}", row.n, row.error, row.scaled_error, slope);
    }
    if let Some(s) = report.fitted_slope {
        eprintln!("fitted slope: {s:.4}");
    }
    eprintln!("superalgebraic (local slopes strictly decreasing): {}", report.is_superalgebraic());
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Table { alpha, l, j_list, table1_defaults, convention, use_norms, format, out } => {
            let opts = TableOptions { convention: convention.into(), use_norms };
            run_table(alpha, l, j_list, table1_defaults, opts, format, out)
        }
        Command::Verify { seed } => {
            let checks = verify::run_all(seed);
            for c in &checks {
                println!("[{}] {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            let failed = checks.iter().filter(|c| !c.passed).count();
            if failed > 0 {
                eprintln!("{failed} of {} checks failed", checks.len());
                return ExitCode::FAILURE;
            }
            Ok(())
        }
        Command::Rate { function, alpha, k, degrees, l, json } => run_rate(function, alpha, k, &degrees, l, json),
        Command::Markov { alpha, max_degree, trials, seed, json } => {
            markov_sweep(alpha, max_degree, trials, seed).map_err(Into::into).and_then(|r| {
                if json {
                    println!("{}", serde_json::to_string_pretty(&r)?);
                } else {
                    println!(
                        "alpha={} max_degree={} trials={} seed={}: max ratio {:.6} (degree {}), mean {:.6}",
                        r.alpha, r.max_degree, r.trials, r.seed, r.max_ratio, r.argmax_degree, r.mean_ratio
                    );
                }
                Ok(())
            })
        }
        Command::PlotData { alpha, l, convention, out } => {
            let opts = TableOptions { convention: convention.into(), use_norms: false };
            rate_table(alpha, l, &default_j_list(l), opts)
                .map_err(Into::into)
                .and_then(|t| emit(&t.plot_csv(), out.as_ref()))
        }
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}


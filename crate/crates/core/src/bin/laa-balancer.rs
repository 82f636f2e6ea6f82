use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use laa_balancer::experiments::{self, Options, DEFAULT_ORDER};
use laa_balancer::scenario::{Axis, Scenario};
use laa_balancer::Result;

#[derive(Parser)]
#[command(
    version,
    about = "Licensed/unlicensed traffic balancing for LAA small cells"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Optimal (alpha, beta) with per-class analytic throughputs.
    Solve(Common),
    /// Re-solve (or re-simulate) while one parameter varies.
    Sweep {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        axis: Axis,
        #[arg(long, allow_negative_numbers = true)]
        from: f64,
        #[arg(long, allow_negative_numbers = true)]
        to: f64,
        #[arg(long, default_value_t = 8)]
        steps: usize,
    },
    /// Seeded slot-level runs of the scenario's policy.
    Simulate(Common),
    /// Holistic scheme against the five baselines.
    Compare {
        #[command(flatten)]
        common: Common,
        /// Fail unless Jain's index strictly decreases along this list.
        #[arg(long, num_args = 0..=1, default_missing_value = DEFAULT_ORDER)]
        assert_order: Option<String>,
    },
}

#[derive(Args)]
struct Common {
    scenario: PathBuf,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Cap LTE rates at the MAC-layer limit.
    #[arg(long)]
    paper_mode: bool,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            paper_mode: self.paper_mode,
            seed: self.seed,
            runs: self.runs,
        }
    }

    fn output(&self) -> Result<Box<dyn Write>> {
        Ok(match &self.out {
            Some(p) => Box::new(BufWriter::new(File::create(p)?)),
            None => Box::new(io::stdout().lock()),
        })
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.cmd {
        Cmd::Solve(c) => {
            let (row, cert) = experiments::cmd_solve(&Scenario::load(&c.scenario)?, &c.options())?;
            eprintln!(
                "candidate {}: lambdas {:?}, stationary {}, primal {}, dual {}",
                cert.candidate, cert.lambdas, cert.stationary, cert.primal_ok, cert.dual_ok
            );
            experiments::write_solve(&row, c.output()?)
        }
        Cmd::Sweep {
            common: c,
            axis,
            from,
            to,
            steps,
        } => {
            let points = experiments::sweep_points(from, to, steps)?;
            let rows =
                experiments::cmd_sweep(&Scenario::load(&c.scenario)?, axis, &points, &c.options())?;
            experiments::write_sweep(axis, &rows, c.output()?)
        }
        Cmd::Simulate(c) => {
            let runs = experiments::cmd_simulate(&Scenario::load(&c.scenario)?, &c.options())?;
            experiments::write_simulate(&runs, c.output()?)
        }
        Cmd::Compare {
            common: c,
            assert_order,
        } => {
            let rows = experiments::cmd_compare(&Scenario::load(&c.scenario)?, &c.options())?;
            experiments::write_compare(&rows, c.output()?)?;
            if let Some(order) = assert_order {
                if let Err(e) = experiments::check_order(&rows, &order) {
                    eprintln!("error: {e}");
                    std::process::exit(1);
                }
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    if let Some(n) = std::env::var("LAA_BALANCER_THREADS")
        .ok()
        .and_then(|v| v.parse().ok())
    {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(experiments::exit_code(&e) as u8)
        }
    }
}

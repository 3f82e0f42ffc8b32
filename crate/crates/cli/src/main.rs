use std::path::PathBuf;
use std::process::ExitCode;

use berryshift_cli::{execute, RunOptions, RunSummary};
use clap::{Parser, Subcommand};

#[derive(Parser)]
#[command(name = "berryshift", version, about = "Geometric-phase frequency drift scenarios")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run scenarios from config files and/or presets.
    Run {
        /// Scenario config files (TOML).
        configs: Vec<PathBuf>,
        /// Output directory; overrides BERRYSHIFT_OUT. Default ./out.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Built-in scenario: pioneer, static, octant-oracle, theta-sweep.
        #[arg(long = "preset", value_name = "NAME")]
        presets: Vec<String>,
        /// Override the step count of every scenario.
        #[arg(long)]
        steps: Option<usize>,
        /// Print nothing on success.
        #[arg(long)]
        quiet: bool,
    },
}

fn print_summary(s: &RunSummary) {
    println!("{} ({:.3} s)", s.name, s.elapsed.as_secs_f64());
    let r = &s.report;
    println!("  epsilon            {:e}", r.adiabaticity.epsilon.value);
    if let Some(p) = &r.phases {
        println!("  gamma numeric      {:.12e}", p.gamma_numeric.value);
        println!("  gamma analytic     {:.12e}", p.gamma_analytic.value);
        println!("  transport residual {:e}", p.transport_residual.value);
    }
    if let Some(a) = &r.anomaly {
        println!("  omega_dot/omega    {:e} 1/s", a.omega_dot_over_omega.value);
        println!("  acceleration       {:e} cm/s^2", a.pioneer.acceleration_cm_s2.value);
    }
    if let Some(a) = &r.appendix {
        println!("  dynamic fraction   {:e}", a.anomalous_fraction.value);
    }
    for f in &s.files {
        println!("  wrote {}", f.display());
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Command::Run { configs, out, presets, steps, quiet } = cli.command;
    let level = if quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    let opts = RunOptions { configs, presets, out, steps };
    match execute(&opts) {
        Ok(summaries) => {
            if !quiet {
                for s in &summaries {
                    print_summary(s);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}

use std::io::IsTerminal;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use tq_cli::build::Overrides;
use tq_cli::{run, Command, Options, Origin, Outcome};

/// Exact Toeplitz quantization over ℚ(i).
#[derive(Parser)]
#[command(name = "tq", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Confluence of the presentation and randomized axiom checks.
    Check(Common),
    /// Truncated Toeplitz matrix of an anti-Wick ordered symbol.
    Quantize {
        #[command(flatten)]
        common: Common,
        /// For example `z1 z2*` or `2 z z* - 1`.
        symbol: String,
    },
    /// Certified relations among the generator operators.
    Relations(Common),
    /// ℏ-deformations of the certified relations.
    Deform(Common),
    /// Hilbert table of the classical algebra.
    Dequantize(Common),
}

#[derive(Args)]
struct Common {
    /// Model file.
    #[arg(long)]
    model: PathBuf,
    /// Truncation degree (overrides the model file).
    #[arg(long)]
    degree: Option<usize>,
    /// Largest word degree searched for relations (default 2).
    #[arg(long)]
    dmax: Option<usize>,
    /// Random trials per axiom in `check`.
    #[arg(long, default_value_t = Options::default().trials)]
    trials: usize,
    #[arg(long, default_value_t = Options::default().seed)]
    seed: u64,
}

fn color_enabled() -> bool {
    match std::env::var("TQ_COLOR").as_deref() {
        Ok("1" | "always") => true,
        Ok("0" | "never") => false,
        _ => std::io::stderr().is_terminal(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (cmd, common) = match cli.cmd {
        Cmd::Check(c) => (Command::Check, c),
        Cmd::Quantize { common, symbol } => (Command::Quantize { symbol }, common),
        Cmd::Relations(c) => (Command::Relations, c),
        Cmd::Deform(c) => (Command::Deform, c),
        Cmd::Dequantize(c) => (Command::Dequantize, c),
    };
    let opts = Options {
        overrides: Overrides { degree: common.degree, dmax: common.dmax },
        trials: common.trials,
        seed: common.seed,
    };

    let path = common.model.display().to_string();
    let text = match std::fs::read_to_string(&common.model) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("tq: cannot read {path}: {e}");
            return ExitCode::from(2);
        }
    };
    let outcome = run(&cmd, &text, &opts);
    let code = outcome.exit_code();
    match outcome {
        Outcome::Report { report, .. } => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
        }
        Outcome::Invalid(diags) => {
            let color = color_enabled();
            for (origin, d) in diags {
                let name = match origin {
                    Origin::Model => path.as_str(),
                    Origin::Symbol => "<symbol>",
                };
                eprintln!("{}", d.render(name, color));
            }
        }
    }
    ExitCode::from(code)
}

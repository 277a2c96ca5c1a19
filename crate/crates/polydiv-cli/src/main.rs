//! The `polydiv` command-line tool: Nash/terminal/minimal valuation sets,
//! singularity and order queries, resolution witnesses and the trinomial
//! criterion, over JSON divisor documents.

use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use polydiv_cli::{
    cmd_minimal, cmd_nash, cmd_order, cmd_resolve, cmd_singular, cmd_terminal, cmd_trinomial,
    parse_blocks, parse_valuation, require_proper, CliError, CliResult, InputDocument, Report,
};

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Debug, Parser)]
#[command(name = "polydiv", version, about = "exact computations with polyhedral divisors")]
struct Cli {
    /// Level bound for enumerations (default: derived from the input).
    #[arg(long, global = true)]
    bound: Option<i64>,
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "text")]
    format: Format,
    /// Exit nonzero (code 4) when an enumeration is incomplete or a verdict
    /// stays unknown.
    #[arg(long, global = true)]
    strict: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Nash valuations of the divisor.
    Nash { input: String },
    /// Terminal valuations of the divisor.
    Terminal { input: String },
    /// Minimal valuations under the pointwise order (confirmed/candidates).
    Minimal { input: String },
    /// Whether a valuation has a singular center.
    Singular {
        input: String,
        #[arg(long)]
        valuation: String,
    },
    /// Compare two valuations under an order relation.
    Order {
        input: String,
        #[arg(long, value_parser = ["hyper", "pointwise"])]
        rel: String,
        #[arg(long)]
        lhs: String,
        #[arg(long)]
        rhs: String,
    },
    /// Produce a resolution witness avoiding a non-minimal valuation.
    Resolve {
        input: String,
        #[arg(long)]
        avoid: String,
    },
    /// The arithmetic Nash criterion for a trinomial hypersurface.
    Trinomial {
        /// Exponent blocks, e.g. "1,1;2;5".
        #[arg(long)]
        blocks: String,
    },
}

fn load_divisor(path: &str) -> CliResult<polydiv::pdivisor::PolyDivisor> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::schema(format!("cannot read {path}: {e}")))?;
    let d = InputDocument::parse(&text)?.to_divisor()?;
    require_proper(&d)?;
    Ok(d)
}

fn run(cli: &Cli) -> CliResult<Report> {
    match &cli.command {
        Command::Nash { input } => cmd_nash(&load_divisor(input)?, cli.bound),
        Command::Terminal { input } => cmd_terminal(&load_divisor(input)?),
        Command::Minimal { input } => cmd_minimal(&load_divisor(input)?),
        Command::Singular { input, valuation } => {
            cmd_singular(&load_divisor(input)?, &parse_valuation(valuation)?)
        }
        Command::Order { input, rel, lhs, rhs } => cmd_order(
            &load_divisor(input)?,
            rel,
            &parse_valuation(lhs)?,
            &parse_valuation(rhs)?,
        ),
        Command::Resolve { input, avoid } => {
            cmd_resolve(&load_divisor(input)?, &parse_valuation(avoid)?)
        }
        Command::Trinomial { blocks } => cmd_trinomial(&parse_blocks(blocks)?),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            let format = match cli.format {
                Format::Json => "json",
                Format::Text => "text",
            };
            println!("{}", report.render(format).trim_end());
            if cli.strict {
                if let Some(why) = &report.incomplete {
                    eprintln!("incomplete: {why}");
                    return ExitCode::from(4);
                }
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code as u8)
        }
    }
}

use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use thiserror::Error;

use claimtrade::hierarchy::build_hierarchy;
use claimtrade::io::{
    parse_network, parse_solution, serialize_clearing, serialize_hierarchy, serialize_network,
    serialize_solution, DocumentError,
};
use claimtrade::multi_in::optimal_multi_in;
use claimtrade::oracle::{random_network, RandomNetworkSpec};
use claimtrade::outgoing::{
    gen_set_packing_gadget, optimal_multi_donation, optimal_multi_out_excess,
    optimal_unbounded_returns, AssetWeights, ReturnCap, UnboundedOptions,
};
use claimtrade::rational::{parse, Rational};
use claimtrade::single::{optimal_single_donation, optimal_single_trade};
use claimtrade::solution::Outcome;
use claimtrade::{clearing_state, BankId, EdgeId, FinancialNetwork};

const EXIT_NOT_FOUND: u8 = 2;
const EXIT_FAILURE: u8 = 1;
const EXIT_USAGE: u8 = 64;

/// Clearing states and optimal claims trades for financial networks.
#[derive(Debug, Parser)]
#[command(name = "claimtrade", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Input {
    /// Network document; read from stdin when absent.
    input: Option<PathBuf>,
    /// Write the result here instead of stdout.
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct Output {
    #[arg(short, long)]
    output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Clearing state of a network.
    Clear {
        #[command(flatten)]
        io: Input,
    },
    /// Default hierarchy of a creditor with respect to a buyer.
    Hierarchy {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        creditor: String,
        #[arg(long)]
        buyer: String,
        /// Buyer asset target; defaults to the buyer's current assets.
        #[arg(long)]
        omega: Option<String>,
    },
    /// Optimal single trade of one incoming edge of the creditor.
    TradeSingle {
        #[command(flatten)]
        io: Input,
        /// Edge as `debtor,creditor`.
        #[arg(long)]
        edge: String,
        #[arg(long)]
        buyer: String,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Optimal multi-trade of the creditor's incoming edges.
    TradeMultiIn {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        creditor: String,
        #[arg(long)]
        buyer: String,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Pareto-positive multi-trade of the debtor's outgoing edges with
    /// excess returns.
    TradeOut {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        debtor: String,
        #[arg(long)]
        buyer: String,
    },
    /// Donations from the buyer. One recipient without `--objective`
    /// maximizes that recipient; otherwise the objective banks' total.
    Donate {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        buyer: String,
        /// Comma-separated recipients.
        #[arg(long, value_delimiter = ',', required = true)]
        recipients: Vec<String>,
        /// Comma-separated banks whose total assets are maximized.
        #[arg(long, value_delimiter = ',')]
        objective: Vec<String>,
        #[arg(long)]
        omega: Option<String>,
    },
    /// Complete trade of a claim set with returns paid out of the buyer's
    /// incoming payments.
    Unbounded {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        buyer: String,
        /// Claims as `debtor,creditor`, separated by `;`.
        #[arg(long)]
        claims: String,
        /// Comma-separated banks whose total assets are maximized.
        #[arg(long, value_delimiter = ',', required = true)]
        objective: Vec<String>,
        /// Drop the cap of returns at the traded liability.
        #[arg(long)]
        uncapped: bool,
        #[arg(long)]
        buyer_pareto: bool,
        #[arg(long)]
        creditor_pareto: bool,
        #[arg(long)]
        aggregate: bool,
    },
    /// Re-simulates a solution document against its network.
    Verify {
        #[command(flatten)]
        io: Input,
        #[arg(long)]
        solution: PathBuf,
    },
    /// Set-packing reduction network.
    GenGadget {
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        elements: usize,
        /// Sets of 1-based elements: `1,2;2,3`.
        #[arg(long)]
        sets: String,
        #[arg(long)]
        l: usize,
        #[arg(long = "big-m")]
        big_m: String,
        #[arg(long, default_value = "1/2")]
        delta: String,
        /// Leave out the debtor, as for multi-donations.
        #[arg(long)]
        no_debtor: bool,
    },
    /// Seeded random network.
    RandomNet {
        #[command(flatten)]
        out: Output,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.4)]
        density: f64,
        #[arg(long, default_value_t = 5)]
        max_liability: u32,
        #[arg(long, default_value_t = 3)]
        max_assets: u32,
        #[arg(long, default_value = "1")]
        delta: String,
    },
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{0}")]
    Io(#[from] io::Error),
    #[error("{0}")]
    Document(#[from] DocumentError),
    #[error("{0}")]
    Solver(#[from] claimtrade::Error),
    #[error("{0}")]
    Input(String),
    #[error("solution does not re-simulate:\n{0}")]
    Mismatch(String),
}

enum Done {
    Written(String),
    NotFound(&'static str),
}

fn read_network(input: &Input) -> Result<FinancialNetwork, CliError> {
    let text = match &input.input {
        Some(path) => fs::read_to_string(path)?,
        None => {
            let mut text = String::new();
            io::stdin().read_to_string(&mut text)?;
            text
        }
    };
    Ok(parse_network(&text)?)
}

fn bank(net: &FinancialNetwork, name: &str) -> Result<BankId, CliError> {
    Ok(net.bank_by_name(name.trim())?)
}

fn edge(net: &FinancialNetwork, spec: &str) -> Result<EdgeId, CliError> {
    let (d, c) = spec
        .split_once(',')
        .ok_or_else(|| CliError::Input(format!("edge {spec:?} is not `debtor,creditor`")))?;
    let (d, c) = (bank(net, d)?, bank(net, c)?);
    net.find_edge(d, c)
        .ok_or_else(|| CliError::Input(format!("no edge {spec:?}")))
}

fn rational(flag: &str, text: &str) -> Result<Rational, CliError> {
    parse(text).map_err(|_| CliError::Input(format!("--{flag}: bad rational {text:?}")))
}

fn omega(flag: &Option<String>) -> Result<Option<Rational>, CliError> {
    flag.as_deref().map(|t| rational("omega", t)).transpose()
}

fn solution(net: &FinancialNetwork, outcome: Outcome) -> Done {
    match outcome {
        Outcome::Found(sol) => Done::Written(serialize_solution(net, &sol)),
        Outcome::NotFound(reason) => Done::NotFound(reason.message()),
    }
}

fn parse_sets(text: &str) -> Result<Vec<Vec<usize>>, CliError> {
    text.split(';')
        .map(|set| {
            set.split(',')
                .map(|x| {
                    x.trim()
                        .parse()
                        .map_err(|_| CliError::Input(format!("--sets: bad element {x:?}")))
                })
                .collect()
        })
        .collect()
}

fn run(command: Command) -> Result<(Done, Option<PathBuf>), CliError> {
    let done = match command {
        Command::Clear { io } => {
            let net = read_network(&io)?;
            let text = serialize_clearing(&net, &clearing_state(&net));
            return Ok((Done::Written(text), io.output));
        }
        Command::Hierarchy {
            io,
            creditor,
            buyer,
            omega: target,
        } => {
            let net = read_network(&io)?;
            let (v, w) = (bank(&net, &creditor)?, bank(&net, &buyer)?);
            let target = match omega(&target)? {
                Some(x) => x,
                None => clearing_state(&net).gross_assets[w.0].clone(),
            };
            let h = build_hierarchy(&net, v, w, &target)?;
            (Done::Written(serialize_hierarchy(&h)), io.output)
        }
        Command::TradeSingle {
            io,
            edge: e,
            buyer,
            omega: target,
        } => {
            let net = read_network(&io)?;
            let e = edge(&net, &e)?;
            let outcome =
                optimal_single_trade(&net, e, bank(&net, &buyer)?, omega(&target)?.as_ref())?;
            (solution(&net, outcome), io.output)
        }
        Command::TradeMultiIn {
            io,
            creditor,
            buyer,
            omega: target,
        } => {
            let net = read_network(&io)?;
            let (v, w) = (bank(&net, &creditor)?, bank(&net, &buyer)?);
            let outcome = optimal_multi_in(&net, v, w, omega(&target)?.as_ref())?;
            (solution(&net, outcome), io.output)
        }
        Command::TradeOut { io, debtor, buyer } => {
            let net = read_network(&io)?;
            let outcome =
                optimal_multi_out_excess(&net, bank(&net, &debtor)?, bank(&net, &buyer)?)?;
            (solution(&net, outcome), io.output)
        }
        Command::Donate {
            io,
            buyer,
            recipients,
            objective,
            omega: target,
        } => {
            let net = read_network(&io)?;
            let w = bank(&net, &buyer)?;
            let recipients = recipients
                .iter()
                .map(|r| bank(&net, r))
                .collect::<Result<Vec<_>, _>>()?;
            let outcome = if recipients.len() == 1 && objective.is_empty() {
                optimal_single_donation(&net, recipients[0], w, omega(&target)?.as_ref())?
            } else {
                let objective = if objective.is_empty() {
                    recipients.clone()
                } else {
                    objective
                        .iter()
                        .map(|b| bank(&net, b))
                        .collect::<Result<Vec<_>, _>>()?
                };
                optimal_multi_donation(&net, w, &recipients, &objective)?
            };
            (solution(&net, outcome), io.output)
        }
        Command::Unbounded {
            io,
            buyer,
            claims,
            objective,
            uncapped,
            buyer_pareto,
            creditor_pareto,
            aggregate,
        } => {
            let net = read_network(&io)?;
            let w = bank(&net, &buyer)?;
            let claims = claims
                .split(';')
                .filter(|c| !c.trim().is_empty())
                .map(|c| edge(&net, c))
                .collect::<Result<Vec<_>, _>>()?;
            let objective = objective
                .iter()
                .map(|b| bank(&net, b))
                .collect::<Result<Vec<_>, _>>()?;
            let options = UnboundedOptions {
                cap: if uncapped {
                    ReturnCap::None
                } else {
                    ReturnCap::ClaimLiability
                },
                buyer_pareto,
                creditor_pareto,
                aggregate,
                objective: AssetWeights::sum_of(&objective),
            };
            let outcome = optimal_unbounded_returns(&net, &claims, w, &options)?;
            (solution(&net, outcome), io.output)
        }
        Command::Verify { io, solution } => {
            let net = read_network(&io)?;
            let doc = parse_solution(&fs::read_to_string(&solution)?)?;
            let mismatches = doc.verify(&net)?;
            if !mismatches.is_empty() {
                return Err(CliError::Mismatch(mismatches.join("\n")));
            }
            (Done::Written("verified\n".into()), io.output)
        }
        Command::GenGadget {
            out,
            elements,
            sets,
            l,
            big_m,
            delta,
            no_debtor,
        } => {
            let (net, _) = gen_set_packing_gadget(
                elements,
                &parse_sets(&sets)?,
                l,
                &rational("big-m", &big_m)?,
                rational("delta", &delta)?,
                !no_debtor,
            )?;
            (Done::Written(serialize_network(&net)), out.output)
        }
        Command::RandomNet {
            out,
            seed,
            n,
            density,
            max_liability,
            max_assets,
            delta,
        } => {
            if n < 2 {
                return Err(CliError::Input("--n must be at least 2".into()));
            }
            let spec = RandomNetworkSpec {
                n,
                edge_density: density,
                max_liability,
                max_assets,
                delta: rational("delta", &delta)?,
            };
            (
                Done::Written(serialize_network(&random_network(seed, &spec))),
                out.output,
            )
        }
    };
    Ok(done)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli.command) {
        Ok((Done::Written(text), path)) => {
            let written = match path {
                Some(path) => fs::write(path, text),
                None => io::stdout().write_all(text.as_bytes()),
            };
            match written {
                Ok(()) => ExitCode::SUCCESS,
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(EXIT_FAILURE)
                }
            }
        }
        Ok((Done::NotFound(reason), _)) => {
            eprintln!("{reason}");
            ExitCode::from(EXIT_NOT_FOUND)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_FAILURE)
        }
    }
}

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand, ValueEnum};
use matroid_auction::auction::{
    audit_trace, compare_with_vcg, emit_trace, parse_trace, run_auction, validate_trace, AuctionConfig,
    ResolutionOrder, StepMode, VcgComparison,
};
use matroid_auction::catalog::{BuyerId, Family, Instance};
use matroid_auction::greedy::sealed_bid_vcg;
use matroid_auction::io::{parse_bids, parse_instance, parse_script};
use matroid_auction::props::{run_property_suite, Mutation, SuiteConfig};
use matroid_auction::strategy::{appendix_b_scenarios, consistency_check, truthful_bidders, Strategy, Verdict};
use matroid_auction::Error;

/// Ascending auctions on matroids.
#[derive(Parser)]
#[command(name = "matroid-auction", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the ascending auction and print the outcome.
    Run {
        #[arg(long)]
        instance: PathBuf,
        /// Jump straight to the next critical price.
        #[arg(long)]
        long_step: bool,
        /// `BUYER=truthful` or `BUYER=script:PATH`; unlisted buyers are truthful.
        #[arg(long = "strategy", value_name = "BUYER=SPEC", value_parser = parse_strategy)]
        strategies: Vec<(u32, StrategyArg)>,
        /// Write the event trace here.
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Resolve simultaneous events in a seeded random order.
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Sealed-bid Vickrey prices.
    Vcg {
        #[arg(long)]
        instance: PathBuf,
        /// `{"item": bid, ...}`; defaults to the valuations.
        #[arg(long)]
        bids: Option<PathBuf>,
    },
    /// Check that a truthful run sells an optimal base at Vickrey prices.
    Verify {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        long_step: bool,
    },
    /// Replay a trace file against an instance.
    Validate {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        /// Also check the invariants of truthful bidding.
        #[arg(long)]
        audit: bool,
    },
    /// Decide whether a buyer's signals fit some valuation.
    Consistency {
        #[arg(long)]
        instance: PathBuf,
        #[arg(long)]
        trace: PathBuf,
        #[arg(long)]
        buyer: u32,
    },
    /// Run the brute-force property suite on random matroids.
    Props {
        #[arg(long = "family", value_delimiter = ',', required = true)]
        families: Vec<Family>,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 8)]
        max_items: usize,
        /// Corrupt every oracle first, to see the suite fail.
        #[arg(long, value_enum, default_value_t = MutationArg::None)]
        mutation: MutationArg,
    },
    /// Replay a fixed set of strategy profiles.
    Scenarios {
        #[arg(value_enum)]
        which: Scenario,
    },
}

#[derive(Clone, Debug)]
enum StrategyArg {
    Truthful,
    Script(PathBuf),
}

fn parse_strategy(s: &str) -> Result<(u32, StrategyArg), String> {
    let (buyer, spec) = s.split_once('=').ok_or("expected BUYER=SPEC")?;
    let buyer = buyer.parse().map_err(|_| format!("bad buyer id `{buyer}`"))?;
    let spec = match spec {
        "truthful" => StrategyArg::Truthful,
        _ => match spec.strip_prefix("script:") {
            Some(path) => StrategyArg::Script(path.into()),
            None => return Err(format!("expected `truthful` or `script:PATH`, got `{spec}`")),
        },
    };
    Ok((buyer, spec))
}

#[derive(Clone, Copy, ValueEnum)]
enum MutationArg {
    None,
    HideBase,
}

#[derive(Clone, Copy, ValueEnum)]
enum Scenario {
    AppendixB,
}

/// Failure kinds, mapped to exit codes.
#[derive(Debug)]
struct Failed(String);

impl std::fmt::Display for Failed {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Failed {}

fn read(path: &Path) -> anyhow::Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn load_instance(path: &Path) -> anyhow::Result<Instance> {
    parse_instance(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn print_json(value: &impl serde::Serialize) {
    println!("{}", serde_json::to_string_pretty(value).expect("reports serialize"));
}

fn execute(command: Command) -> anyhow::Result<()> {
    match command {
        Command::Run {
            instance,
            long_step,
            strategies,
            trace,
            seed,
        } => {
            let inst = load_instance(&instance)?;
            let mut bidders = truthful_bidders(&inst);
            for (buyer, spec) in strategies {
                let id = BuyerId(buyer);
                if !inst.has_buyer(id) {
                    bail!(Error::Input(format!("unknown buyer {buyer}")));
                }
                if let StrategyArg::Script(path) = spec {
                    let script = parse_script(&read(&path)?).with_context(|| format!("in {}", path.display()))?;
                    bidders.insert(id, Box::new(Strategy::scripted(&script, &inst, id)?));
                }
            }
            let config = AuctionConfig {
                mode: if long_step { StepMode::LongStep } else { StepMode::UnitStep },
                order: seed.map_or(ResolutionOrder::Ascending, |seed| ResolutionOrder::Shuffled { seed }),
                ..AuctionConfig::default()
            };
            let (outcome, events) = run_auction(&inst, &mut bidders, &config)?;
            if let Some(path) = trace {
                fs::write(&path, emit_trace(&events)).with_context(|| format!("writing {}", path.display()))?;
            }
            print_json(&outcome.report(&inst));
        }
        Command::Vcg { instance, bids } => {
            let inst = load_instance(&instance)?;
            let bids = match bids {
                Some(path) => parse_bids(&read(&path)?, &inst).with_context(|| format!("in {}", path.display()))?,
                None => inst.valuations().to_vec(),
            };
            print_json(&sealed_bid_vcg(&inst, &bids)?.report(&inst));
        }
        Command::Verify { instance, long_step } => {
            let inst = load_instance(&instance)?;
            let config = if long_step {
                AuctionConfig::long_step()
            } else {
                AuctionConfig::default()
            };
            let c = compare_with_vcg(&inst, &config)?;
            let auction = VcgComparison::payments_tuple(&c.outcome.buyer_payments);
            let vcg = VcgComparison::payments_tuple(&c.vcg_prices);
            let mut problems = Vec::new();
            if c.welfare_matches() {
                println!("welfare matches the optimum: {}", c.optimum);
            } else {
                problems.push(format!("welfare {} differs from the optimum {}", c.outcome.welfare, c.optimum));
            }
            if c.payments_match() {
                println!("payments match VCG: {vcg}");
            } else {
                problems.push(format!("payments {auction} differ from VCG {vcg}"));
            }
            let audit = audit_trace(&c.trace, &inst)?;
            problems.extend(audit.violations.iter().map(ToString::to_string));
            if !problems.is_empty() {
                bail!(Failed(problems.join("\n")));
            }
        }
        Command::Validate { instance, trace, audit } => {
            let inst = load_instance(&instance)?;
            let events = parse_trace(&read(&trace)?).with_context(|| format!("in {}", trace.display()))?;
            let report = if audit {
                audit_trace(&events, &inst)?
            } else {
                validate_trace(&events, &inst)
            };
            if !report.is_clean() {
                let lines: Vec<String> = report.violations.iter().map(ToString::to_string).collect();
                bail!(Failed(lines.join("\n")));
            }
            println!("trace is valid: {} events", events.len());
        }
        Command::Consistency { instance, trace, buyer } => {
            let inst = load_instance(&instance)?;
            let events = parse_trace(&read(&trace)?).with_context(|| format!("in {}", trace.display()))?;
            let report = consistency_check(&inst, &events, BuyerId(buyer))?;
            match &report.verdict {
                Verdict::Consistent { witness } => {
                    let values: Vec<String> = witness.iter().map(|(i, v)| format!("{i}={v}")).collect();
                    println!("buyer {buyer} is consistent, e.g. with {}", values.join(" "));
                }
                Verdict::Inconsistent { conflict } => {
                    let (a, b) = conflict.pair();
                    bail!(Failed(format!("buyer {buyer} is inconsistent: {a} contradicts {b}")));
                }
            }
        }
        Command::Props {
            families,
            trials,
            seed,
            max_items,
            mutation,
        } => {
            let mut config = SuiteConfig::new(families, trials, seed);
            config.max_items = max_items;
            config.mutation = match mutation {
                MutationArg::None => Mutation::None,
                MutationArg::HideBase => Mutation::HideBase,
            };
            let summary = run_property_suite(&config)?;
            print!("{}", summary.table());
            if !summary.is_clean() {
                bail!(Failed(format!("{} counterexamples", summary.failures.len())));
            }
        }
        Command::Scenarios { which: Scenario::AppendixB } => {
            print!("{}", appendix_b_scenarios()?.table());
        }
    }
    Ok(())
}

/// 1 for failed checks and auction errors, 2 for bad input.
fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<Failed>().is_some() {
        return 1;
    }
    if err.downcast_ref::<std::io::Error>().is_some() {
        return 2;
    }
    match err.downcast_ref::<Error>() {
        Some(
            Error::Schema { .. }
            | Error::Input(_)
            | Error::UnknownItem(_)
            | Error::InactiveItem(_)
            | Error::TraceParse { .. }
            | Error::TooLarge { .. },
        ) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match execute(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}

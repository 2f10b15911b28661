use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod select;
mod table;

use table::Format;

/// Critical numbers of finite abelian groups: closed forms, exhaustive checks
/// and extremal-set certificates.
#[derive(Debug, Parser)]
#[command(name = "critnum", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Quantity {
    ChiH,
    ChiInterval,
    ChiHatH,
    ChiHatInterval,
    /// `chi_hat_interval` with s = 3, always through the structure-dependent form.
    ChiHatInterval3,
    /// Both `cr*` and `cr`.
    Cr,
    CrStar,
}

#[derive(Debug, Args)]
pub struct Selection {
    /// Group type: `n` (cyclic) or a product `a,b,c`. Repeatable.
    #[arg(long)]
    group: Vec<String>,
    /// Every abelian type of these orders: `n`, `lo..hi` or `a,b,c`.
    #[arg(long, visible_alias = "orders")]
    order: Option<String>,
    /// Same as `--order 2..N`.
    #[arg(long)]
    max_order: Option<u64>,
}

impl Selection {
    fn orders(&self) -> Result<Vec<u64>> {
        let mut out = match &self.order {
            Some(text) => select::parse_range("order", text)?,
            None => Vec::new(),
        };
        if let Some(m) = self.max_order {
            out.extend(2..=m);
        }
        out.sort_unstable();
        out.dedup();
        Ok(out)
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    /// Worker threads for exhaustive search (default: all cores).
    #[arg(long)]
    workers: Option<usize>,
    /// Largest group order searched exhaustively. Defaults to 16 for sweeps
    /// and 20 for a single group, or to $CRITNUM_MAX_N when set.
    #[arg(long)]
    max_n: Option<u64>,
    /// Allow an order cap above the default.
    #[arg(long)]
    budget_ack: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form values with the branch that produced them.
    Formula {
        #[arg(long)]
        quantity: Quantity,
        #[command(flatten)]
        selection: Selection,
        /// Summand count(s) for `h`-fold quantities.
        #[arg(long)]
        h: Option<String>,
        /// Interval length(s) for `[0,s]` quantities.
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Closed form vs exhaustive search vs certificate, row by row.
    Verify {
        #[arg(long)]
        quantity: Quantity,
        #[command(flatten)]
        selection: Selection,
        #[arg(long)]
        h: Option<String>,
        #[arg(long)]
        s: Option<String>,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        oracle: OracleArgs,
    },
    /// A generating set of maximal size whose h-fold sumset (or, with --s,
    /// whose [0,s]-sumset) misses part of the group, as JSON.
    Witness {
        #[arg(long)]
        group: String,
        #[arg(long, conflicts_with = "s", required_unless_present = "s")]
        h: Option<u32>,
        #[arg(long)]
        s: Option<u32>,
    },
    /// A lower bound for the generating [0,s] critical number from a
    /// quotient construction, as JSON.
    Bound {
        #[arg(long)]
        group: String,
        #[arg(long)]
        s: u32,
        /// Quotient type `d_1,...,d_t`; searched over when omitted.
        #[arg(long, requires = "c")]
        quotient: Option<String>,
        /// Interval lengths `c_1,...,c_t`, one per quotient factor.
        #[arg(long, requires = "quotient")]
        c: Option<String>,
    },
    /// Largest sum-free set sizes in cyclic groups.
    Sumfree {
        #[command(flatten)]
        selection: Selection,
        /// Also search exhaustively.
        #[arg(long)]
        oracle: bool,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
        #[command(flatten)]
        oracle_args: OracleArgs,
    },
}

fn parse_list(flag: &str, text: &str) -> Result<Vec<u64>> {
    text.split(',')
        .map(|p| p.trim().parse::<u64>().with_context(|| format!("--{flag} {text:?}: bad entry {p:?}")))
        .collect()
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Formula { quantity, selection, h, s, format } => {
            let jobs = commands::jobs(quantity, &selection, h.as_deref(), s.as_deref())?;
            commands::formula(&jobs, format)
        }
        Command::Verify { quantity, selection, h, s, format, oracle } => {
            let jobs = commands::jobs(quantity, &selection, h.as_deref(), s.as_deref())?;
            let single = jobs.iter().map(|j| &j.group).collect::<std::collections::BTreeSet<_>>().len() == 1;
            let oracle = commands::build_oracle(&oracle, single)?;
            commands::verify(&jobs, &oracle, format)
        }
        Command::Witness { group, h, s } => {
            let ty = group.parse().with_context(|| format!("--group {group:?}"))?;
            commands::witness(&ty, h, s)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Bound { group, s, quotient, c } => {
            let ty = group.parse().with_context(|| format!("--group {group:?}"))?;
            let explicit = match (quotient, c) {
                (Some(q), Some(c)) => Some((parse_list("quotient", &q)?, parse_list("c", &c)?)),
                (None, None) => None,
                _ => bail!("--quotient and --c go together"),
            };
            commands::bound(&ty, s, explicit)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Sumfree { selection, oracle, format, oracle_args } => {
            let orders = selection.orders()?;
            if !selection.group.is_empty() || orders.is_empty() {
                bail!("sumfree takes --order or --max-order (cyclic groups only)");
            }
            let oracle = if oracle {
                Some(commands::build_oracle(&oracle_args, orders.len() == 1)?)
            } else {
                None
            };
            commands::sumfree(&orders, oracle.as_ref(), format)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            match e.downcast_ref::<critnum::Error>() {
                Some(critnum::Error::BudgetExceeded { .. }) => ExitCode::from(3),
                _ => ExitCode::FAILURE,
            }
        }
    }
}

//! `wres`: verify the residue computations and dump intermediate symbols.

use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wres_core::boundary::{boundary_section, BoundaryCase, ALL_CASES};
use wres_core::calculus::{build_q_symbols, compose_order, invert_symbol, sigma_d, sigma_d2};
use wres_core::interior::{forced_sigma6, term_table, theorem_check};
use wres_core::ledger::Ledger;
use wres_core::report::{InteriorSection, VerificationReport};
use wres_core::specialize::Specialization;
use wres_core::symbols::{PointContext, SymbolExpr};

#[derive(Parser, Debug)]
#[command(name = "wres", version, about = "Noncommutative residue of (fDh)^2 in dimension six")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Compare computed densities with the printed values.
    Verify {
        #[command(subcommand)]
        target: Target,
    },
    /// Print intermediate objects.
    Dump {
        #[command(subcommand)]
        what: DumpWhat,
    },
}

#[derive(clap::Args, Debug)]
struct Common {
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Ledger of known discrepancies (JSON); defaults to the bundled one.
    #[arg(long)]
    ledger: Option<PathBuf>,
    /// Write the output here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Subcommand, Debug)]
enum Target {
    Interior {
        /// `f=1,h=1`, `fh=1` or `f=u^p,h=u^q`.
        #[arg(long)]
        specialize: Option<Specialization>,
        #[command(flatten)]
        common: Common,
    },
    Boundary {
        #[arg(long)]
        specialize: Option<Specialization>,
        /// a1, a2, a3, b, c or all.
        #[arg(long = "case", default_value = "all", value_parser = parse_cases)]
        cases: CaseSel,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Subcommand, Debug)]
enum DumpWhat {
    Symbols {
        #[arg(long, value_enum)]
        operator: Operator,
        #[arg(long, allow_negative_numbers = true)]
        order: i32,
        #[arg(long)]
        specialize: Option<Specialization>,
        #[command(flatten)]
        common: Common,
    },
    TermTable {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Operator {
    #[value(name = "D")]
    D,
    #[value(name = "D2")]
    D2,
    #[value(name = "Q")]
    Q,
    #[value(name = "Qinv")]
    Qinv,
    #[value(name = "Qinv2")]
    Qinv2,
}

#[derive(Clone, Debug)]
struct CaseSel(Vec<BoundaryCase>);

fn parse_cases(s: &str) -> Result<CaseSel, String> {
    if s == "all" {
        return Ok(CaseSel(ALL_CASES.to_vec()));
    }
    BoundaryCase::parse(s)
        .map(|c| CaseSel(vec![c]))
        .map_err(|e| e.to_string())
}

/// Failure that maps to an exit status.
struct Failure {
    code: u8,
    message: String,
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure { code: 2, message: e.to_string() }
}

fn internal<E: std::fmt::Display>(e: E) -> Failure {
    Failure { code: 1, message: e.to_string() }
}

fn load_ledger(path: &Option<PathBuf>) -> Result<Ledger, Failure> {
    let Some(p) = path else {
        return Ok(Ledger::bundled());
    };
    let text = fs::read_to_string(p).map_err(|e| usage(format!("cannot read ledger {}: {e}", p.display())))?;
    Ledger::from_json(&text).map_err(|e| usage(format!("malformed ledger {}: {e}", p.display())))
}

fn emit(common: &Common, text: String) -> Result<(), Failure> {
    match &common.out {
        Some(p) => fs::write(p, text).map_err(|e| usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn emit_report(common: &Common, report: &VerificationReport) -> Result<u8, Failure> {
    let text = match common.format {
        Format::Json => report.to_json() + "\n",
        Format::Text => report.to_text(),
    };
    emit(common, text)?;
    Ok(if report.passes() { 0 } else { 1 })
}

fn dump_symbols(op: Operator, order: i32, spec: Option<Specialization>) -> Result<SymbolExpr, Failure> {
    let ctx = PointContext::interior();
    let q = || -> Result<_, Failure> {
        let mut q = build_q_symbols(&ctx).map_err(internal)?;
        if let Some(sp) = spec {
            q.symbol = sp.apply_symbol(&q.symbol).map_err(internal)?;
        }
        Ok(q)
    };
    let bad = |range: &str| usage(format!("order {order} not available for {op:?} (expected {range})"));
    let s = match op {
        Operator::D => {
            if !(0..=1).contains(&order) {
                return Err(bad("1 or 0"));
            }
            sigma_d(&ctx).map_err(internal)?.part(order)
        }
        Operator::D2 => {
            if !(0..=2).contains(&order) {
                return Err(bad("2..0"));
            }
            sigma_d2(&ctx).map_err(internal)?.part(order)
        }
        Operator::Q => {
            if !(0..=2).contains(&order) {
                return Err(bad("2..0"));
            }
            q()?.symbol.part(order)
        }
        Operator::Qinv => {
            if !(-6..=-2).contains(&order) {
                return Err(bad("-2..-6"));
            }
            invert_symbol(&q()?, (-2 - order) as usize).map_err(internal)?.part(order).clone()
        }
        Operator::Qinv2 => match order {
            -4 | -5 => {
                let b = invert_symbol(&q()?, 1).map_err(internal)?.total();
                compose_order(&b, &b, order, &ctx).map_err(internal)?
            }
            -6 => forced_sigma6(spec).map_err(internal)?.total(),
            _ => return Err(bad("-4..-6")),
        },
    };
    Ok(s)
}

fn run(cli: Cli) -> Result<u8, Failure> {
    match cli.command {
        Command::Verify { target: Target::Interior { specialize, common } } => {
            let ledger = load_ledger(&common.ledger)?;
            let terms = term_table(&ledger).map_err(internal)?;
            let theorem = theorem_check(specialize, &ledger).map_err(internal)?;
            let report = VerificationReport::new(
                "interior",
                specialize.map(|s| s.to_string()),
                Some(InteriorSection { terms, theorem }),
                None,
                ledger,
            );
            emit_report(&common, &report)
        }
        Command::Verify { target: Target::Boundary { specialize, cases, common } } => {
            let ledger = load_ledger(&common.ledger)?;
            let section = boundary_section(specialize, &cases.0, &ledger).map_err(internal)?;
            let report = VerificationReport::new(
                "boundary",
                specialize.map(|s| s.to_string()),
                None,
                Some(section),
                ledger,
            );
            emit_report(&common, &report)
        }
        Command::Dump { what: DumpWhat::Symbols { operator, order, specialize, common } } => {
            let s = dump_symbols(operator, order, specialize)?;
            let lines = s.dump_lines();
            let text = match common.format {
                Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
                Format::Json => {
                    let v = serde_json::json!({
                        "operator": format!("{operator:?}"),
                        "order": order,
                        "terms": lines,
                    });
                    serde_json::to_string_pretty(&v).expect("json") + "\n"
                }
            };
            emit(&common, text)?;
            Ok(0)
        }
        Command::Dump { what: DumpWhat::TermTable { common } } => {
            let ledger = load_ledger(&common.ledger)?;
            let terms = term_table(&ledger).map_err(internal)?;
            let text = match common.format {
                Format::Json => serde_json::to_string_pretty(&terms).expect("json") + "\n",
                Format::Text => terms
                    .iter()
                    .map(|t| {
                        format!(
                            "({}) {}\n    integrand {}\n    computed  {}\n    printed   {}\n",
                            t.index, t.verdict, t.integrand, t.computed, t.printed
                        )
                    })
                    .collect(),
            };
            emit(&common, text)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

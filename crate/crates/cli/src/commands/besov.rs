//! `oldb besov`: one norm of one snapshot field.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, ValueEnum};

use oldb_core::dyadic::{besov_norm, BesovSpec, DyadicPartition, Split};
use oldb_core::solver::gamma_of;
use oldb_core::spectral::snapshot;
use oldb_core::Result;

#[derive(Clone, Copy, ValueEnum)]
pub enum Field {
    U,
    Tau,
    /// The dissipative stress component `Lambda^-1 P div(tau)`.
    Gamma,
}

#[derive(Clone, Copy, ValueEnum)]
pub enum SplitArg {
    Low,
    High,
    Full,
}

#[derive(Parser)]
pub struct Args {
    #[arg(long)]
    pub snapshot: PathBuf,
    #[arg(long, value_enum, default_value_t = Field::U)]
    pub field: Field,
    /// Regularity index
    #[arg(long)]
    pub s: f64,
    /// Integrability exponent (use `inf` for the sup norm)
    #[arg(long, default_value = "2")]
    pub p: String,
    #[arg(long, value_enum, default_value_t = SplitArg::Full)]
    pub split: SplitArg,
    #[arg(long, default_value_t = 2)]
    pub j0: i32,
}

pub fn run(args: Args) -> Result<ExitCode> {
    let (u, tau) = snapshot::read_state_fields(&args.snapshot)?;
    let part = DyadicPartition::new(u.grid(), args.j0)?;
    let p = if args.p.eq_ignore_ascii_case("inf") {
        f64::INFINITY
    } else {
        args.p
            .parse()
            .map_err(|_| oldb_core::Error::Config(format!("bad integrability `{}`", args.p)))?
    };
    let field = match args.field {
        Field::U => u,
        Field::Tau => tau,
        Field::Gamma => gamma_of(&tau)?,
    };
    let split = match args.split {
        SplitArg::Low => Split::Low,
        SplitArg::High => Split::High,
        SplitArg::Full => Split::Full,
    };
    let value = besov_norm(&part, &field, BesovSpec::new(args.s, p)?, split);
    println!("{value}");
    Ok(ExitCode::SUCCESS)
}

use std::path::PathBuf;

use clap::{Args, Subcommand};
use cvc_core::gen::{gnp, layered, random_cnf, random_mcc, random_smc, sparse_with_fes};
use cvc_core::io::write_instance;
use cvc_core::Result;

use crate::write_out;

#[derive(Args)]
pub struct GenArgs {
    #[command(subcommand)]
    model: Model,
    /// stdout when absent.
    #[arg(long, global = true)]
    output: Option<PathBuf>,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Model {
    /// G(n, p) with capacities uniform in 1..=deg.
    Gnp {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: f64,
    },
    /// Connected graph whose feedback edge set has exactly `fes` edges.
    Sparse {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        fes: usize,
    },
    /// Parallel paths whose identity arrangement has cutwidth `width`.
    Layered {
        #[arg(long)]
        width: usize,
        #[arg(long)]
        layers: usize,
        /// Where to write the arrangement.
        #[arg(long)]
        arrangement: Option<PathBuf>,
    },
    /// Random exactly-one formula in DIMACS form.
    Cnf {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
    },
    /// Random multicolored clique instance.
    Mcc {
        #[arg(long)]
        classes: usize,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
    /// Random set multicover instance.
    Smc {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        sets: usize,
        #[arg(long)]
        b: usize,
        #[arg(long)]
        k: usize,
        #[arg(long, default_value_t = 0.5)]
        p: f64,
    },
}

pub fn run(a: GenArgs) -> Result<bool> {
    let seed = a.seed;
    let text = match a.model {
        Model::Gnp { n, p } => write_instance(&gnp(n, p, seed)?),
        Model::Sparse { n, fes } => write_instance(&sparse_with_fes(n, fes, seed)?),
        Model::Layered {
            width,
            layers,
            arrangement,
        } => {
            let (g, pi) = layered(width, layers, seed)?;
            if let Some(p) = &arrangement {
                write_out(Some(p), &pi.write())?;
            }
            write_instance(&g)
        }
        Model::Cnf { n, m } => random_cnf(n, m, seed)?.write(),
        Model::Mcc { classes, n, p } => random_mcc(classes, n, p, seed)?.write(),
        Model::Smc { m, sets, b, k, p } => random_smc(m, sets, b, k, p, seed)?.write(),
    };
    write_out(a.output.as_ref(), &text)?;
    Ok(true)
}

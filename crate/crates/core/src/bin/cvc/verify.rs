use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cvc_core::cutwidth::{cutwidth_of, LinearArrangement};
use cvc_core::detecting::{parse_families, DEFAULT_DETECTING_CAP};
use cvc_core::io::{parse_instance, parse_orientation};
use cvc_core::reductions::{verify_cw_expression, verify_td_witness, CliquewidthExpression, TreedepthWitness};
use cvc_core::{verify_orientation, CvcError, Result};
use serde_json::json;

use crate::read;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum What {
    /// Orientation certificate against an instance; --k bounds the size.
    Orientation,
    /// Cutwidth of an arrangement; --k bounds it.
    Cutwidth,
    /// Clique-width expression replay.
    Expression,
    /// Elimination forest; --k bounds the depth.
    Witness,
    /// Detecting families file, given as --input.
    Families,
}

#[derive(Args)]
pub struct VerifyArgs {
    #[arg(value_enum)]
    what: What,
    /// Instance file (families file for `families`).
    #[arg(long)]
    input: PathBuf,
    /// Certificate: orientation, expression or witness.
    #[arg(long)]
    cert: Option<PathBuf>,
    #[arg(long)]
    arrangement: Option<PathBuf>,
    #[arg(long)]
    k: Option<usize>,
    #[arg(long)]
    json: bool,
}

pub fn run(a: VerifyArgs) -> Result<bool> {
    let input = read(&a.input)?;
    let cert = || -> Result<String> {
        let p = a
            .cert
            .as_ref()
            .ok_or_else(|| CvcError::Config("this check needs --cert".into()))?;
        read(p)
    };
    let within = |x: usize| a.k.is_none_or(|k| x <= k);
    let (ok, value) = match a.what {
        What::Orientation => {
            let g = parse_instance(&input)?;
            let o = parse_orientation(&g, &cert()?)?;
            let rep = verify_orientation(&g, &o)?;
            for v in &rep.violations {
                println!(
                    "VIOLATION vertex {} indegree {} capacity {}",
                    v.vertex + 1,
                    v.indeg,
                    v.capacity
                );
            }
            println!("SIZE {}", rep.size);
            (rep.feasible && within(rep.size), Some(rep.size))
        }
        What::Cutwidth => {
            let g = parse_instance(&input)?;
            let p = a
                .arrangement
                .as_ref()
                .ok_or_else(|| CvcError::Config("cutwidth needs --arrangement".into()))?;
            let w = cutwidth_of(&g, &LinearArrangement::parse(&read(p)?, g.n())?);
            println!("CUTWIDTH {w}");
            (within(w), Some(w))
        }
        What::Expression => {
            let g = parse_instance(&input)?;
            let expr = CliquewidthExpression::parse(&cert()?)?;
            (verify_cw_expression(&expr, &g)?, Some(expr.labels_used()))
        }
        What::Witness => {
            let g = parse_instance(&input)?;
            let w = TreedepthWitness::parse(&cert()?, g.n())?;
            let (valid, depth) = verify_td_witness(&g, &w)?;
            println!("DEPTH {depth}");
            (valid && within(depth), Some(depth))
        }
        What::Families => {
            let fams = parse_families(&input)?;
            let mut ok = true;
            for f in &fams {
                ok &= f.is_detecting(DEFAULT_DETECTING_CAP)?;
            }
            (ok, Some(fams.len()))
        }
    };
    println!("{}", if ok { "VALID" } else { "INVALID" });
    if a.json {
        let report = json!({
            "command": "verify",
            "what": a.what.to_possible_value().map(|v| v.get_name().to_string()),
            "valid": ok,
            "value": value,
        });
        println!("{report}");
    }
    Ok(ok)
}

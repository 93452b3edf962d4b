use std::path::PathBuf;

use clap::{Args, ValueEnum};
use cvc_core::detecting::{write_families, FamilyMode};
use cvc_core::io::write_instance;
use cvc_core::reductions::{
    default_families, group_formula, reduce_mcc_td, reduce_sat_cw, reduce_sat_natural, reduce_smc,
    Cnf1in3, GroupingMode, MccInstance, SmcInstance,
};
use cvc_core::Result;
use serde_json::json;

use crate::{read, write_out};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Kind {
    Smc,
    SatNatural,
    SatCw,
    MccTd,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Trivial,
    Greedy,
}

#[derive(Args)]
pub struct ReduceArgs {
    #[arg(value_enum)]
    kind: Kind,
    /// Source instance: SMC, DIMACS CNF or MCC file.
    #[arg(long)]
    input: PathBuf,
    /// Reduced instance; stdout when absent.
    #[arg(long)]
    output: Option<PathBuf>,
    /// Where to write the choice-group metadata.
    #[arg(long)]
    meta: Option<PathBuf>,
    /// Where to write the side certificate: detecting families (sat-natural),
    /// clique-width expression (sat-cw) or elimination forest (mcc-td).
    #[arg(long)]
    cert_out: Option<PathBuf>,
    /// Variable and clause grouping for sat-natural.
    #[arg(long, value_enum, default_value = "greedy")]
    grouping: Mode,
    /// Detecting-family construction for sat-natural.
    #[arg(long, value_enum, default_value = "greedy")]
    families: Mode,
    #[arg(long)]
    json: bool,
}

pub fn run(a: ReduceArgs) -> Result<bool> {
    let text = read(&a.input)?;
    let mut extra = serde_json::Map::new();
    let (out, cert) = match a.kind {
        Kind::Smc => (reduce_smc(&SmcInstance::parse(&text)?)?, None),
        Kind::SatNatural => {
            let psi = Cnf1in3::parse(&text)?;
            let grouping = group_formula(
                &psi,
                match a.grouping {
                    Mode::Trivial => GroupingMode::Trivial,
                    Mode::Greedy => GroupingMode::Greedy,
                },
            );
            let mode = match a.families {
                Mode::Trivial => FamilyMode::Singleton,
                Mode::Greedy => FamilyMode::Greedy,
            };
            let families = default_families(&grouping, mode)?;
            let out = reduce_sat_natural(&psi, &grouping, &families)?;
            extra.insert("variable_groups".into(), grouping.var_groups.len().into());
            extra.insert("clause_groups".into(), grouping.clause_groups.len().into());
            let cert = write_families(&out.families);
            (out, Some(cert))
        }
        Kind::SatCw => {
            let out = reduce_sat_cw(&Cnf1in3::parse(&text)?)?;
            let cert = out.expression.as_ref().map(|e| e.write());
            (out, cert)
        }
        Kind::MccTd => {
            let (out, layout) = reduce_mcc_td(&MccInstance::parse(&text)?)?;
            extra.insert("choice_instances".into(), layout.gamma.into());
            extra.insert("marked".into(), layout.delta.into());
            let cert = out.witness.as_ref().map(|w| w.write());
            (out, cert)
        }
    };
    // the instance itself goes to stdout without --output
    let say = |line: String| {
        if a.output.is_some() {
            println!("{line}");
        } else {
            eprintln!("{line}");
        }
    };
    say(format!("BUDGET {}", out.budget));
    say(format!("VERTICES {}", out.graph.n()));
    say(format!("EDGES {}", out.graph.m()));
    if let Some(g) = extra.get("choice_instances") {
        say(format!("CHOICE_INSTANCES {g}"));
    }
    write_out(a.output.as_ref(), &write_instance(&out.graph))?;
    if let Some(p) = &a.meta {
        write_out(Some(p), &out.meta.write())?;
    }
    if let (Some(p), Some(c)) = (&a.cert_out, cert) {
        write_out(Some(p), &c)?;
    }
    if a.json {
        let mut report = json!({
            "command": "reduce",
            "kind": a.kind.to_possible_value().map(|v| v.get_name().to_string()),
            "budget": out.budget,
            "n": out.graph.n(),
            "m": out.graph.m(),
            "groups": out.meta.groups.len(),
            "forced": out.meta.forced.len(),
        });
        report.as_object_mut().unwrap().extend(extra);
        say(report.to_string());
    }
    Ok(true)
}

use clap::Args;
use cvc_core::bench::{layered_suite, WORK_CONSTANT};
use cvc_core::Result;
use serde_json::json;

#[derive(Args)]
pub struct BenchArgs {
    /// Arrangement cutwidths to run, comma separated.
    #[arg(long, value_delimiter = ',', default_values_t = [4usize, 6, 8, 10, 12, 14])]
    widths: Vec<usize>,
    #[arg(long, default_value_t = 4)]
    layers: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// The constant the work bound is checked against.
    #[arg(long, default_value_t = WORK_CONSTANT)]
    c: f64,
    /// Print one JSON object instead of the table.
    #[arg(long)]
    json: bool,
}

/// Exit 1 if a table size differs from `2^width` or the work bound fails.
pub fn run(a: BenchArgs) -> Result<bool> {
    let rows = layered_suite(&a.widths, a.layers, a.seed)?;
    let fitted = rows.iter().map(|r| r.c_fit).fold(0.0, f64::max);
    let ok = rows.iter().all(|r| r.tables_exact() && r.within_bound(a.c));
    if a.json {
        let report = json!({
            "command": "bench",
            "rows": rows,
            "fitted_c": fitted,
            "asserted_c": a.c,
            "ok": ok,
        });
        println!("{report}");
    } else {
        println!("name n m ctw max_table total_work wall_ms c_fit");
        for r in &rows {
            println!(
                "{} {} {} {} {} {} {:.3} {:.4}",
                r.name,
                r.n,
                r.m,
                r.ctw,
                r.tables.iter().max().unwrap_or(&1),
                r.work.iter().sum::<u64>(),
                r.wall_ms,
                r.c_fit
            );
        }
        println!("FITTED_C {fitted:.4}");
    }
    Ok(ok)
}

//! Instrumented cutwidth DP runs: per-layer table sizes and work, checked
//! against `W_i <= C * (2^|d_{i-1}| + 2^|d_i|) * n^2`.

use std::time::Instant;

use serde::Serialize;

use crate::cutwidth::{run_cutdp, LinearArrangement};
use crate::error::Result;
use crate::gen::layered;
use crate::graph::CapacitatedGraph;

/// The constant asserted by [`BenchRow::within_bound`].
pub const WORK_CONSTANT: f64 = 1.0;

#[derive(Clone, Debug, Serialize)]
pub struct BenchRow {
    pub name: String,
    pub n: usize,
    pub m: usize,
    /// Cutwidth of the arrangement used.
    pub ctw: usize,
    pub widths: Vec<usize>,
    pub tables: Vec<usize>,
    pub work: Vec<u64>,
    pub min_size: Option<usize>,
    pub wall_ms: f64,
    /// Smallest `C` for which the work bound holds on every layer.
    pub c_fit: f64,
}

impl BenchRow {
    pub fn within_bound(&self, c: f64) -> bool {
        self.c_fit <= c
    }

    /// Whether every table has exactly `2^width` entries.
    pub fn tables_exact(&self) -> bool {
        self.widths
            .iter()
            .zip(&self.tables)
            .all(|(&w, &t)| t == 1usize << w)
    }
}

/// Runs the DP along `pi` without a certificate and records the stats.
pub fn bench_cutdp(name: &str, g: &CapacitatedGraph, pi: &LinearArrangement) -> Result<BenchRow> {
    let start = Instant::now();
    let run = run_cutdp(g, pi, false)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let n2 = (g.n() * g.n()).max(1) as f64;
    let c_fit = run
        .stats
        .windows(2)
        .map(|w| {
            let bound = ((1u64 << w[0].width) + (1u64 << w[1].width)) as f64 * n2;
            w[1].work as f64 / bound
        })
        .fold(0.0, f64::max);
    Ok(BenchRow {
        name: name.to_string(),
        n: g.n(),
        m: g.m(),
        ctw: run.stats.iter().map(|s| s.width).max().unwrap_or(0),
        widths: run.stats.iter().map(|s| s.width).collect(),
        tables: run.stats.iter().map(|s| s.table_len).collect(),
        work: run.stats.iter().map(|s| s.work).collect(),
        min_size: run.value,
        wall_ms,
        c_fit,
    })
}

/// One row per width on the layered model with `layers` layers.
pub fn layered_suite(widths: &[usize], layers: usize, seed: u64) -> Result<Vec<BenchRow>> {
    widths
        .iter()
        .map(|&w| {
            let (g, pi) = layered(w, layers, seed.wrapping_add(w as u64))?;
            bench_cutdp(&format!("layered-w{w}"), &g, &pi)
        })
        .collect()
}

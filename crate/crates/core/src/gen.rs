//! Seeded random instance models. The same seed always yields the same
//! instance, byte for byte once written.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cutwidth::LinearArrangement;
use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, Vertex};
use crate::reductions::{Cnf1in3, Literal, MccInstance, SmcInstance};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Capacities uniform in `1..=deg(v)`, 0 for isolated vertices.
fn with_random_capacities(
    n: usize,
    edges: Vec<(Vertex, Vertex)>,
    rng: &mut impl Rng,
) -> Result<CapacitatedGraph> {
    let mut deg = vec![0usize; n];
    for &(u, v) in &edges {
        deg[u] += 1;
        deg[v] += 1;
    }
    let cap = deg
        .iter()
        .map(|&d| if d == 0 { 0 } else { rng.gen_range(1..=d) })
        .collect();
    CapacitatedGraph::new(cap, edges)
}

/// `G(n, p)` with random capacities.
pub fn gnp(n: usize, p: f64, seed: u64) -> Result<CapacitatedGraph> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CvcError::Config(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in u + 1..n {
            if rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    with_random_capacities(n, edges, &mut rng)
}

/// A random spanning tree plus `fes` extra edges, so the graph is connected
/// and its feedback edge set has exactly `fes` edges.
pub fn sparse_with_fes(n: usize, fes: usize, seed: u64) -> Result<CapacitatedGraph> {
    let room = (n * n.saturating_sub(1) / 2).saturating_sub(n.saturating_sub(1));
    if n == 0 && fes > 0 || fes > room {
        return Err(CvcError::Config(format!(
            "a connected graph on {n} vertices has at most {room} non-tree edges, asked for {fes}"
        )));
    }
    let mut rng = rng(seed);
    let mut edges: Vec<(Vertex, Vertex)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let mut present: std::collections::HashSet<_> =
        edges.iter().map(|&(u, v)| (u.min(v), u.max(v))).collect();
    let mut absent: Vec<_> = (0..n)
        .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
        .filter(|e| !present.contains(e))
        .collect();
    absent.shuffle(&mut rng);
    for e in absent.into_iter().take(fes) {
        present.insert(e);
        edges.push(e);
    }
    with_random_capacities(n, edges, &mut rng)
}

/// `width` parallel paths through `layers` layers of `width` vertices.
/// Vertex `L*width + j` is joined to `(L+1)*width + j`, so along the
/// identity arrangement cut `i` crosses `min(i, width, n - i)` edges and the
/// arrangement has cutwidth exactly `width`. Returns the graph and that
/// arrangement; its cutwidth bounds the cutwidth of the graph from above.
pub fn layered(width: usize, layers: usize, seed: u64) -> Result<(CapacitatedGraph, LinearArrangement)> {
    if width == 0 || layers < 2 {
        return Err(CvcError::Config("layered model needs width >= 1 and at least 2 layers".into()));
    }
    let n = width * layers;
    let edges = (0..n - width).map(|v| (v, v + width)).collect();
    let g = with_random_capacities(n, edges, &mut rng(seed))?;
    Ok((g, LinearArrangement::identity(n)))
}

/// A uniformly random formula with clauses over three distinct variables.
pub fn random_cnf(n: usize, m: usize, seed: u64) -> Result<Cnf1in3> {
    if n < 3 && m > 0 {
        return Err(CvcError::Config("clauses need three distinct variables".into()));
    }
    let mut rng = rng(seed);
    let vars: Vec<usize> = (0..n).collect();
    let clauses = (0..m)
        .map(|_| {
            let picked: Vec<_> = vars.choose_multiple(&mut rng, 3).copied().collect();
            [0, 1, 2].map(|t| Literal {
                var: picked[t],
                positive: rng.gen_bool(0.5),
            })
        })
        .collect();
    Cnf1in3::new(n, clauses)
}

/// `k` classes of `n` vertices with every cross-class pair an edge with
/// probability `p`.
pub fn random_mcc(k: usize, n: usize, p: f64, seed: u64) -> Result<MccInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CvcError::Config(format!("edge probability {p} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let classes: Vec<Vec<Vertex>> = (0..k).map(|i| (i * n..(i + 1) * n).collect()).collect();
    let mut edges = Vec::new();
    for u in 0..k * n {
        for v in u + 1..k * n {
            if u / n != v / n && rng.gen_bool(p) {
                edges.push((u, v));
            }
        }
    }
    MccInstance::new(k, n, classes, edges)
}

/// `sets` random subsets of `0..m`, each element joining each set with
/// probability `p`.
pub fn random_smc(m: usize, sets: usize, b: usize, k: usize, p: f64, seed: u64) -> Result<SmcInstance> {
    if !(0.0..=1.0).contains(&p) {
        return Err(CvcError::Config(format!("membership probability {p} outside [0, 1]")));
    }
    let mut rng = rng(seed);
    let sets = (0..sets)
        .map(|_| (0..m).filter(|_| rng.gen_bool(p)).collect())
        .collect();
    Ok(SmcInstance { m, sets, b, k })
}

//! Exactly-one SAT to CVC with budget linear in the number of groups.
//!
//! Each variable group gets one vertex per partial assignment, one of which
//! must be selected. Each set of a 4-detecting family over a clause group
//! gets a pair of forced vertices whose capacities admit exactly
//! `|C_ij|` selected neighbors on one side and the rest on the other, which
//! pins the number of true literals in every clause to one.

use super::builder::GraphBuilder;
use super::cnf::{verify_grouping, Cnf1in3, Grouping};
use super::ReductionOutput;
use crate::detecting::{build_family, DetectingFamily, FamilyMode, DEFAULT_DETECTING_CAP};
use crate::error::{CvcError, Result};
use crate::oracle::ChoiceGroups;

/// Largest variable group; a group needs `2^|V_p|` assignment vertices.
pub const MAX_VAR_GROUP: usize = 16;

/// A verified 4-detecting family for every clause group.
pub fn default_families(grouping: &Grouping, mode: FamilyMode) -> Result<Vec<DetectingFamily>> {
    grouping
        .clause_groups
        .iter()
        .map(|g| build_family(g.len(), 4, mode, DEFAULT_DETECTING_CAP))
        .collect()
}

/// Vertex order: per variable group, `u_p`, its assignment vertices (bit
/// `t` of the index is the value of the group's `t`-th variable) and the
/// leaves of `u_p`; then per clause group and family set, `a`, `a'` and
/// their leaves. Budget `2 n_V + 2 sum_i s_i`.
pub fn reduce_sat_natural(
    psi: &Cnf1in3,
    grouping: &Grouping,
    families: &[DetectingFamily],
) -> Result<ReductionOutput> {
    if !verify_grouping(psi, grouping) {
        return Err(CvcError::structural("grouping violates the one-occurrence property"));
    }
    if families.len() != grouping.clause_groups.len() {
        return Err(CvcError::structural("need one detecting family per clause group"));
    }
    for (f, g) in families.iter().zip(&grouping.clause_groups) {
        if f.universe != g.len() || f.d != 4 || !f.is_detecting(DEFAULT_DETECTING_CAP)? {
            return Err(CvcError::structural(
                "family is not a verified 4-detecting family for its clause group",
            ));
        }
    }
    if let Some(g) = grouping.var_groups.iter().find(|g| g.len() > MAX_VAR_GROUP) {
        return Err(CvcError::CapExceeded {
            what: "variable group size",
            value: g.len(),
            cap: MAX_VAR_GROUP,
        });
    }

    let n_v = grouping.var_groups.len();
    let total_sets: usize = families.iter().map(|f| f.sets.len()).sum();
    let budget = 2 * n_v + 2 * total_sets;

    let mut var_group = vec![(0, 0); psi.n];
    for (p, g) in grouping.var_groups.iter().enumerate() {
        for (t, &x) in g.iter().enumerate() {
            var_group[x] = (p, t);
        }
    }

    let mut b = GraphBuilder::default();
    let mut meta = ChoiceGroups::default();
    let mut assignment_vertices = Vec::with_capacity(n_v);
    for g in &grouping.var_groups {
        let u = b.vertex(1);
        let vs: Vec<_> = (0..1usize << g.len()).map(|_| b.vertex(0)).collect();
        for &v in &vs {
            b.edge(u, v);
        }
        b.leaves(u, budget + 1);
        meta.forced.push(u);
        meta.groups.push(vs.clone());
        assignment_vertices.push(vs);
    }

    for (clauses, family) in grouping.clause_groups.iter().zip(families) {
        for set in &family.sets {
            // assignment vertices that make a literal of the set true
            let mut satisfied = vec![Vec::new(); n_v];
            for &local in set {
                for lit in &psi.clauses[clauses[local]] {
                    let (p, t) = var_group[lit.var];
                    satisfied[p] = (0..assignment_vertices[p].len())
                        .map(|q| lit.holds(q >> t & 1 == 1))
                        .collect();
                }
            }
            let a = b.vertex(set.len());
            let a_bar = b.vertex(n_v - set.len());
            for (p, vs) in assignment_vertices.iter().enumerate() {
                for (q, &v) in vs.iter().enumerate() {
                    if satisfied[p].get(q).copied().unwrap_or(false) {
                        b.edge(a, v);
                    } else {
                        b.edge(a_bar, v);
                    }
                }
            }
            b.leaves(a, budget + 1);
            b.leaves(a_bar, budget + 1);
            meta.forced.push(a);
            meta.forced.push(a_bar);
        }
    }

    let (graph, demand) = b.finish(budget)?;
    Ok(ReductionOutput {
        graph,
        budget,
        meta,
        demand,
        expression: None,
        witness: None,
        families: families.to_vec(),
    })
}

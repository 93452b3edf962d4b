//! Line-oriented text formats shared by the CLI and the FFI layer.
//!
//! Every format ignores blank lines and everything after a `#`.

use std::fmt::Write as _;
use std::str::FromStr;

use crate::error::{CvcError, Result};
use crate::graph::{CapacitatedGraph, Orientation, Vertex};

/// A non-empty, comment-stripped line split on whitespace.
pub(crate) struct Line<'a> {
    pub no: usize,
    pub tokens: Vec<&'a str>,
}

impl<'a> Line<'a> {
    pub fn keyword(&self) -> &'a str {
        self.tokens[0]
    }

    pub fn expect_len(&self, len: usize) -> Result<()> {
        if self.tokens.len() != len {
            return Err(CvcError::parse(
                self.no,
                format!(
                    "`{}` expects {} fields, found {}",
                    self.keyword(),
                    len - 1,
                    self.tokens.len() - 1
                ),
            ));
        }
        Ok(())
    }

    pub fn num<T: FromStr>(&self, idx: usize) -> Result<T> {
        let tok = self.tokens.get(idx).ok_or_else(|| {
            CvcError::parse(self.no, format!("missing field {} of `{}`", idx, self.keyword()))
        })?;
        tok.parse()
            .map_err(|_| CvcError::parse(self.no, format!("`{tok}` is not a valid number")))
    }

    /// Parses the tokens from `from` on as numbers.
    pub fn nums<T: FromStr>(&self, from: usize) -> Result<Vec<T>> {
        (from..self.tokens.len()).map(|i| self.num(i)).collect()
    }

    /// A 1-based vertex id in `1..=n`, returned 0-based.
    pub fn vertex(&self, idx: usize, n: usize) -> Result<Vertex> {
        let id: usize = self.num(idx)?;
        if id == 0 || id > n {
            return Err(CvcError::parse(self.no, format!("unknown vertex id {id}")));
        }
        Ok(id - 1)
    }

    pub fn error(&self, msg: impl Into<String>) -> CvcError {
        CvcError::parse(self.no, msg)
    }
}

pub(crate) fn lines(text: &str) -> impl Iterator<Item = Line<'_>> {
    text.lines().enumerate().filter_map(|(i, raw)| {
        let content = raw.split('#').next().unwrap_or("");
        let tokens: Vec<&str> = content.split_whitespace().collect();
        (!tokens.is_empty()).then_some(Line { no: i + 1, tokens })
    })
}

/// Parses `cvc <n> <m> [<k>]`, then `v <id> <capacity>` lines, then
/// `e <u> <v>` lines.
pub fn parse_instance(text: &str) -> Result<CapacitatedGraph> {
    let mut it = lines(text);
    let header = it
        .next()
        .ok_or_else(|| CvcError::parse(1, "empty instance file"))?;
    if header.keyword() != "cvc" || !(3..=4).contains(&header.tokens.len()) {
        return Err(header.error("expected header `cvc <n> <m> [<k>]`"));
    }
    let n: usize = header.num(1)?;
    let m: usize = header.num(2)?;
    let budget: Option<usize> = if header.tokens.len() == 4 {
        Some(header.num(3)?)
    } else {
        None
    };

    let mut capacity: Vec<Option<usize>> = vec![None; n];
    let mut edges = Vec::with_capacity(m);
    let mut seen = std::collections::HashSet::with_capacity(m);
    let mut last_line = header.no;
    for line in it {
        last_line = line.no;
        match line.keyword() {
            "v" => {
                line.expect_len(3)?;
                if !edges.is_empty() {
                    return Err(line.error("vertex line after edge lines"));
                }
                let v = line.vertex(1, n)?;
                if capacity[v].is_some() {
                    return Err(line.error(format!("vertex {} declared twice", v + 1)));
                }
                capacity[v] = Some(line.num(2)?);
            }
            "e" => {
                line.expect_len(3)?;
                let u = line.vertex(1, n)?;
                let v = line.vertex(2, n)?;
                if u == v {
                    return Err(line.error(format!("loop at vertex {}", u + 1)));
                }
                if !seen.insert((u.min(v), u.max(v))) {
                    return Err(line.error(format!("duplicate edge {{{}, {}}}", u + 1, v + 1)));
                }
                edges.push((u, v));
            }
            other => return Err(line.error(format!("unknown line type `{other}`"))),
        }
    }
    if let Some(v) = capacity.iter().position(Option::is_none) {
        return Err(CvcError::parse(
            last_line,
            format!("vertex {} has no `v` line", v + 1),
        ));
    }
    if edges.len() != m {
        return Err(CvcError::parse(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let capacity = capacity.into_iter().map(Option::unwrap).collect();
    Ok(CapacitatedGraph::new(capacity, edges)?.with_budget(budget))
}

pub fn write_instance(g: &CapacitatedGraph) -> String {
    let mut out = String::new();
    match g.budget() {
        Some(k) => writeln!(out, "cvc {} {} {}", g.n(), g.m(), k),
        None => writeln!(out, "cvc {} {}", g.n(), g.m()),
    }
    .unwrap();
    for v in 0..g.n() {
        writeln!(out, "v {} {}", v + 1, g.capacity(v)).unwrap();
    }
    for &(a, b) in g.edges() {
        writeln!(out, "e {} {}", a + 1, b + 1).unwrap();
    }
    out
}

/// Parses an orientation certificate: one `a <tail> <head>` line per edge.
pub fn parse_orientation(g: &CapacitatedGraph, text: &str) -> Result<Orientation> {
    let mut arcs = Vec::with_capacity(g.m());
    for line in lines(text) {
        if line.keyword() != "a" {
            return Err(line.error(format!("unknown line type `{}`", line.keyword())));
        }
        line.expect_len(3)?;
        arcs.push((line.vertex(1, g.n())?, line.vertex(2, g.n())?));
    }
    Orientation::from_arcs(g, &arcs)
}

pub fn write_orientation(g: &CapacitatedGraph, o: &Orientation) -> String {
    let mut out = String::new();
    for (t, h) in o.arcs(g) {
        writeln!(out, "a {} {}", t + 1, h + 1).unwrap();
    }
    out
}

/// Writes a whitespace-separated list of 1-based ids.
pub(crate) fn join_ids(ids: impl IntoIterator<Item = Vertex>) -> String {
    ids.into_iter()
        .map(|v| (v + 1).to_string())
        .collect::<Vec<_>>()
        .join(" ")
}

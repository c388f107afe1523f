//! Whitespace-separated edge lists: `u v [w]` per line, `#` comments.
//!
//! Node names are arbitrary tokens interned to dense ids in first-seen
//! order. A line holding a single token declares a node without edges, which
//! lets isolated nodes and the node order survive a save/load round trip.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::Path;

use super::{Network, NetworkBuilder};
use crate::error::{Error, Result};

/// Interner from node names to dense ids.
#[derive(Debug, Clone, Default)]
pub struct NodeTable {
    names: Vec<String>,
    index: HashMap<String, usize>,
}

impl NodeTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// Table seeded with the labels of an existing network.
    pub fn from_network(g: &Network) -> Self {
        let mut t = Self::new();
        for u in 0..g.n() {
            t.intern(&g.label(u));
        }
        t
    }

    pub fn intern(&mut self, name: &str) -> usize {
        if let Some(&i) = self.index.get(name) {
            return i;
        }
        let i = self.names.len();
        self.names.push(name.to_string());
        self.index.insert(name.to_string(), i);
        i
    }

    pub fn get(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }
}

/// Reads an edge list using a fresh node table.
pub fn load_edge_list(path: impl AsRef<Path>) -> Result<Network> {
    let mut table = NodeTable::new();
    load_edge_list_with(path, &mut table)
}

/// Reads an edge list, resolving names through `table` so that several
/// files share one id space.
pub fn load_edge_list_with(path: impl AsRef<Path>, table: &mut NodeTable) -> Result<Network> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(file, path, table)
}

pub fn read_edge_list(reader: impl Read, path: &Path, table: &mut NodeTable) -> Result<Network> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut builder = NetworkBuilder::new(table.len());
    for (i, line) in BufReader::new(reader).lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| Error::io(path, e))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        match tokens.len() {
            1 => {
                let u = table.intern(tokens[0]);
                builder.ensure_node(u);
            }
            2 | 3 => {
                let w = match tokens.get(2) {
                    None => 1.0,
                    Some(t) => t
                        .parse::<f64>()
                        .map_err(|_| parse_err(lineno, format!("invalid weight `{t}`")))?,
                };
                if !(w > 0.0 && w.is_finite()) {
                    return Err(parse_err(lineno, format!("weight must be positive and finite, got {w}")));
                }
                let u = table.intern(tokens[0]);
                let v = table.intern(tokens[1]);
                builder.ensure_node(u.max(v));
                builder.add_edge(u, v, w).map_err(|e| match e {
                    Error::Consistency { first, second, .. } => Error::Consistency {
                        u: tokens[0].to_string(),
                        v: tokens[1].to_string(),
                        first,
                        second,
                    },
                    other => other,
                })?;
            }
            n => return Err(parse_err(lineno, format!("expected `u v [w]`, found {n} fields"))),
        }
    }
    builder.ensure_node(table.len().saturating_sub(1));
    let mut g = builder.build();
    let g_n = g.n();
    let names = &table.names()[..g_n];
    let identity = names.iter().enumerate().all(|(i, s)| *s == i.to_string());
    if !identity {
        g = g.with_labels(names.to_vec());
    }
    Ok(g)
}

/// Writes `g` as an edge list. Unit weights use the two-column form.
pub fn write_edge_list(g: &Network, mut out: impl Write) -> std::io::Result<()> {
    // Declare nodes up front only if the edge lines alone would not
    // reproduce the node order on reload.
    let mut seen = vec![false; g.n()];
    let mut order = Vec::with_capacity(g.n());
    for (u, v, _) in g.edges() {
        for x in [u, v] {
            if !seen[x] {
                seen[x] = true;
                order.push(x);
            }
        }
    }
    let natural = order.len() == g.n() && order.iter().enumerate().all(|(i, &x)| i == x);
    if !natural {
        for u in 0..g.n() {
            writeln!(out, "{}", g.label(u))?;
        }
    }
    for (u, v, w) in g.edges() {
        if w == 1.0 {
            writeln!(out, "{} {}", g.label(u), g.label(v))?;
        } else {
            writeln!(out, "{} {} {}", g.label(u), g.label(v), w)?;
        }
    }
    Ok(())
}

pub fn save_edge_list(g: &Network, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(path, e))?;
    let mut w = BufWriter::new(file);
    write_edge_list(g, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| Error::io(path, e))
}

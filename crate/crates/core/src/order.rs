//! Exhaustive exploration of the certifiable fragment of the LOCC order on
//! labeled `r`-uniform ensembles.
//!
//! The true order is not decidable here. The DAG built by [`build_dag`] holds
//! only relations that are certain: destruction of hyperedges (edge subsets)
//! and, for EPR graphs, restricted-LOCC plans. Nodes are labeled hypergraphs
//! rather than LU-equivalence classes.

use std::fmt::Write;

use serde::Serialize;

use crate::combinatorics::{binomial, Combinations};
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, VertexSet};
use crate::restricted::{decide_restricted, DEFAULT_EDGE_BUDGET};

/// Default cap on hypergraphs enumerated for [`max_antichain`].
pub const DEFAULT_FAMILY_BUDGET: u128 = 1 << 20;

/// Default cap on nodes for [`build_dag`], which compares all ordered pairs.
pub const DEFAULT_DAG_BUDGET: u128 = 4096;

/// Simple `r`-uniform hypergraphs on `n` parties, optionally with exactly `m`
/// hyperedges.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct FamilySpec {
    pub n: u32,
    pub r: u32,
    pub m: Option<usize>,
}

impl FamilySpec {
    pub fn new(n: u32, r: u32, m: Option<usize>) -> Result<Self> {
        if r < 2 || r > n || n > crate::hypergraph::MAX_VERTICES {
            return Err(Error::BadUniformity { n, r });
        }
        let spec = FamilySpec { n, r, m };
        if let Some(m) = m {
            let universe = spec.universe_size();
            if m as u128 > universe {
                return Err(Error::BudgetExceeded {
                    what: "edge count above C(n, r)",
                    needed: m as u128,
                    budget: universe,
                });
            }
        }
        Ok(spec)
    }

    /// `M = C(n, r)`.
    pub fn universe_size(&self) -> u128 {
        binomial(self.n as u64, self.r as u64).unwrap_or(u128::MAX)
    }

    /// Number of members: `C(M, m)`, or `2^M` when `m` is free.
    pub fn count(&self) -> u128 {
        let universe = self.universe_size();
        match self.m {
            Some(m) => u64::try_from(universe)
                .ok()
                .and_then(|mm| binomial(mm, m as u64))
                .unwrap_or(u128::MAX),
            None if universe < 128 => 1u128 << universe,
            None => u128::MAX,
        }
    }
}

/// Every possible `r`-hyperedge on `n` parties, in canonical order.
pub fn edge_universe(n: u32, r: u32) -> Vec<Hyperedge> {
    Combinations::new(n as usize, r as usize)
        .map(|c| {
            let set = c.iter().fold(VertexSet::EMPTY, |acc, &i| {
                acc.union(VertexSet::singleton(i as u32 + 1))
            });
            Hyperedge::new(set).expect("r >= 2")
        })
        .collect()
}

/// Streams every member of `spec` exactly once: by edge count, then in
/// canonical order within a count.
pub fn enumerate(spec: FamilySpec, budget: u128) -> Result<impl Iterator<Item = Hypergraph>> {
    let count = spec.count();
    if count > budget {
        return Err(Error::BudgetExceeded {
            what: "hypergraphs in family",
            needed: count,
            budget,
        });
    }
    let universe = edge_universe(spec.n, spec.r);
    let sizes = match spec.m {
        Some(m) => m..=m,
        None => 0..=universe.len(),
    };
    let n = spec.n;
    Ok(sizes.flat_map(move |m| {
        let universe = universe.clone();
        Combinations::new(universe.len(), m).map(move |combo| {
            Hypergraph::new(n, combo.into_iter().map(|i| universe[i]))
                .expect("universe edges are in range")
        })
    }))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum EdgeKind {
    /// `to` is `from` with some hyperedges discarded.
    EdgeSubset,
    /// Teleportation and destruction take `from` to `to` (EPR graphs only).
    RestrictedPlan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct OrderEdge {
    pub from: usize,
    pub to: usize,
    pub kind: EdgeKind,
}

/// Square boolean matrix with `u64` rows.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Reachability {
    size: usize,
    words: usize,
    bits: Vec<u64>,
}

impl Reachability {
    pub fn new(size: usize) -> Self {
        let words = size.div_ceil(64);
        Reachability {
            size,
            words,
            bits: vec![0; size * words],
        }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn set(&mut self, from: usize, to: usize) {
        self.bits[from * self.words + to / 64] |= 1u64 << (to % 64);
    }

    pub fn get(&self, from: usize, to: usize) -> bool {
        self.bits[from * self.words + to / 64] & (1u64 << (to % 64)) != 0
    }

    fn row(&self, i: usize) -> &[u64] {
        &self.bits[i * self.words..(i + 1) * self.words]
    }

    /// Warshall: row `i` absorbs row `k` whenever `i` reaches `k`.
    pub fn transitive_closure(&self) -> Reachability {
        let mut out = self.clone();
        for k in 0..self.size {
            let row_k = out.row(k).to_vec();
            for i in 0..self.size {
                if out.get(i, k) {
                    let start = i * self.words;
                    for (w, &bits) in row_k.iter().enumerate() {
                        out.bits[start + w] |= bits;
                    }
                }
            }
        }
        out
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.size).flat_map(move |i| {
            (0..self.size)
                .filter(move |&j| self.get(i, j))
                .map(move |j| (i, j))
        })
    }
}

/// Certified order relations among the members of a family.
#[derive(Clone, Debug)]
pub struct OrderDag {
    pub n: u32,
    pub r: u32,
    pub nodes: Vec<Hypergraph>,
    pub edges: Vec<OrderEdge>,
    reach: Reachability,
}

impl OrderDag {
    pub fn reaches(&self, from: usize, to: usize) -> bool {
        self.reach.get(from, to)
    }

    pub fn reachability(&self) -> &Reachability {
        &self.reach
    }

    pub fn node_id(&self, h: &Hypergraph) -> Option<usize> {
        self.nodes.iter().position(|x| x == h)
    }

    /// Edges not implied by two others through an intermediate node.
    pub fn hasse_edges(&self) -> Vec<OrderEdge> {
        self.edges
            .iter()
            .filter(|e| {
                !(0..self.nodes.len()).any(|k| {
                    k != e.from && k != e.to && self.reaches(e.from, k) && self.reaches(k, e.to)
                })
            })
            .copied()
            .collect()
    }

    /// Graphviz text of the Hasse diagram. Subset edges are solid, restricted
    /// plans dashed.
    pub fn to_dot(&self) -> String {
        let mut out = String::new();
        out.push_str("digraph locc {\n");
        writeln!(
            out,
            "  // certified fragment only (n={}, r={}): edge-subset destruction{}",
            self.n,
            self.r,
            if self.r == 2 {
                " and restricted-LOCC plans"
            } else {
                ""
            }
        )
        .expect("writing to a String");
        out.push_str("  node [shape=box];\n");
        for (i, h) in self.nodes.iter().enumerate() {
            let label: Vec<String> = h
                .edges()
                .iter()
                .map(|e| {
                    e.vertices()
                        .iter()
                        .map(|v| v.to_string())
                        .collect::<String>()
                })
                .collect();
            let label = if label.is_empty() {
                "∅".to_string()
            } else {
                label.join(" ")
            };
            writeln!(out, "  n{i} [label=\"{label}\"];").expect("writing to a String");
        }
        for e in self.hasse_edges() {
            let style = match e.kind {
                EdgeKind::EdgeSubset => "solid",
                EdgeKind::RestrictedPlan => "dashed",
            };
            writeln!(out, "  n{} -> n{} [style={style}];", e.from, e.to)
                .expect("writing to a String");
        }
        out.push_str("}\n");
        out
    }
}

fn strict_subset(small: &Hypergraph, big: &Hypergraph) -> bool {
    small != big && big.contains_all(small)
}

/// Enumerates every member of the family with at most `max_m` hyperedges (all
/// of them when `None`) and links each ordered pair the order certifies.
pub fn build_dag(n: u32, r: u32, max_m: Option<usize>, budget: u128) -> Result<OrderDag> {
    let spec = FamilySpec::new(n, r, None)?;
    let universe = spec.universe_size() as usize;
    let top = max_m.unwrap_or(universe).min(universe);
    let mut nodes = Vec::new();
    let mut total: u128 = 0;
    for m in 0..=top {
        total += FamilySpec::new(n, r, Some(m))?.count();
        if total > budget {
            return Err(Error::BudgetExceeded {
                what: "nodes in order DAG",
                needed: total,
                budget,
            });
        }
    }
    for m in 0..=top {
        nodes.extend(enumerate(FamilySpec::new(n, r, Some(m))?, budget)?);
    }

    let mut edges = Vec::new();
    let mut reach = Reachability::new(nodes.len());
    for (i, from) in nodes.iter().enumerate() {
        for (j, to) in nodes.iter().enumerate() {
            if i == j || to.edge_count() >= from.edge_count() {
                continue;
            }
            let kind = if strict_subset(to, from) {
                Some(EdgeKind::EdgeSubset)
            } else if r == 2 && decide_restricted(from, to, DEFAULT_EDGE_BUDGET)?.is_some() {
                Some(EdgeKind::RestrictedPlan)
            } else {
                None
            };
            if let Some(kind) = kind {
                edges.push(OrderEdge {
                    from: i,
                    to: j,
                    kind,
                });
                reach.set(i, j);
            }
        }
    }
    // Both certified relations compose: subsets of subsets, and concatenated
    // scripts. The relation is already its own transitive closure.
    debug_assert_eq!(reach.transitive_closure(), reach);
    debug_assert!(reach.pairs().all(|(i, j)| !reach.get(j, i)));
    Ok(OrderDag {
        n,
        r,
        nodes,
        edges,
        reach,
    })
}

/// A largest antichain of the edge-subset order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Antichain {
    pub size: u128,
    /// Edge count shared by every member.
    pub level: usize,
    pub members: Vec<Hypergraph>,
}

/// Enumerates the whole family and returns its largest edge-count level; in a
/// Boolean lattice a largest level is a maximum antichain.
pub fn max_antichain(n: u32, r: u32, budget: u128) -> Result<Antichain> {
    let spec = FamilySpec::new(n, r, None)?;
    let universe = spec.universe_size() as usize;
    let mut levels: Vec<Vec<Hypergraph>> = vec![Vec::new(); universe + 1];
    for h in enumerate(spec, budget)? {
        levels[h.edge_count()].push(h);
    }
    let (level, members) = levels
        .into_iter()
        .enumerate()
        .rev()
        .max_by_key(|(_, hs)| hs.len())
        .expect("at least the empty level");
    Ok(Antichain {
        size: members.len() as u128,
        level,
        members,
    })
}

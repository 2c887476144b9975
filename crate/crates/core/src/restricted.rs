//! LOCC restricted to two operations on (multi)EPR graphs: teleportation, which
//! replaces pairs `{x,y}` and `{y,z}` by one pair `{x,z}`, and destruction of a
//! pair.
//!
//! `G` reaches `H` in this model exactly when `G` holds pairwise edge-disjoint
//! paths joining the endpoints of every edge of `H`. Deciding that is
//! NP-complete, so [`edge_disjoint_paths`] is an exact exponential search with
//! an explicit edge budget. Parallel edges are separate resources throughout.

use std::collections::VecDeque;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::analysis::find_witness;
use crate::error::{Error, Result};
use crate::hypergraph::{Hyperedge, Hypergraph, VertexSet};

/// Default cap on the number of edges of `G` for the exact path search.
pub const DEFAULT_EDGE_BUDGET: usize = 24;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(into = "WireOp", from = "WireOp")]
pub enum Op {
    /// `y` teleports its half of `{y,z}` to `x` using `{x,y}`; leaves `{x,z}`.
    Teleport {
        x: u32,
        y: u32,
        z: u32,
    },
    Destroy {
        u: u32,
        v: u32,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
enum WireOp {
    Teleport([u32; 3]),
    Destroy([u32; 2]),
}

impl From<Op> for WireOp {
    fn from(op: Op) -> Self {
        match op {
            Op::Teleport { x, y, z } => WireOp::Teleport([x, y, z]),
            Op::Destroy { u, v } => WireOp::Destroy([u, v]),
        }
    }
}

impl From<WireOp> for Op {
    fn from(op: WireOp) -> Self {
        match op {
            WireOp::Teleport([x, y, z]) => Op::Teleport { x, y, z },
            WireOp::Destroy([u, v]) => Op::Destroy { u, v },
        }
    }
}

impl fmt::Display for Op {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Op::Teleport { x, y, z } => write!(f, "teleport {x} {y} {z}"),
            Op::Destroy { u, v } => write!(f, "destroy {u} {v}"),
        }
    }
}

/// Ops applied in order; see [`replay`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Script {
    pub ops: Vec<Op>,
}

impl Script {
    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// `{"ops":[{"teleport":[x,y,z]}|{"destroy":[u,v]},...]}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("script serializes")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| {
            crate::error::ParseError::new(e.line(), format!("invalid script: {e}")).into()
        })
    }
}

fn require_epr(g: &Hypergraph) -> Result<()> {
    if g.is_epr_graph() {
        Ok(())
    } else {
        Err(Error::NotEprGraph)
    }
}

fn remove_pair(g: &Hypergraph, a: u32, b: u32) -> Result<Hypergraph> {
    let edge = Hyperedge::pair(a, b)?;
    g.without_edge(edge)
        .ok_or(Error::MissingEdge(a.min(b), a.max(b)))
}

/// One op on an EPR graph. Every op removes exactly one edge in total.
pub fn apply(g: &Hypergraph, op: Op) -> Result<Hypergraph> {
    require_epr(g)?;
    match op {
        Op::Teleport { x, y, z } => {
            for v in [x, y, z] {
                g.check_vertex(v)?;
            }
            if x == y || y == z || x == z {
                return Err(Error::DegenerateTeleport(x, y, z));
            }
            let g = remove_pair(g, x, y)?;
            let g = remove_pair(&g, y, z)?;
            g.with_edge(Hyperedge::pair(x, z)?)
        }
        Op::Destroy { u, v } => {
            g.check_vertex(u)?;
            g.check_vertex(v)?;
            remove_pair(g, u, v)
        }
    }
}

/// Applies `script` from `g`, failing at the first op whose edges are missing.
pub fn replay(g: &Hypergraph, script: &Script) -> Result<Hypergraph> {
    script
        .ops
        .iter()
        .enumerate()
        .try_fold(g.clone(), |state, (index, &op)| {
            apply(&state, op).map_err(|e| Error::Replay {
                index,
                source: Box::new(e),
            })
        })
}

/// Multiset of vertex pairs that must each be joined by its own path.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Demand {
    n: u32,
    pairs: Vec<(u32, u32)>,
}

impl Demand {
    pub fn new<I: IntoIterator<Item = (u32, u32)>>(n: u32, pairs: I) -> Result<Self> {
        let mut out = Vec::new();
        for (u, v) in pairs {
            for w in [u, v] {
                if w == 0 || w > n {
                    return Err(Error::VertexOutOfRange {
                        vertex: w as u64,
                        n,
                    });
                }
            }
            if u == v {
                return Err(Error::RepeatedVertex(u));
            }
            out.push((u.min(v), u.max(v)));
        }
        out.sort_unstable();
        Ok(Demand { n, pairs: out })
    }

    /// One demand per edge (with multiplicity) of an EPR graph.
    pub fn from_graph(h: &Hypergraph) -> Result<Self> {
        require_epr(h)?;
        Ok(Demand {
            n: h.n(),
            pairs: h
                .edges()
                .iter()
                .map(|e| e.endpoints().expect("2-uniform"))
                .collect(),
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn pairs(&self) -> &[(u32, u32)] {
        &self.pairs
    }
}

/// A path serving one demanded pair; `path` runs from `pair.0` to `pair.1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RoutedPath {
    pub pair: (u32, u32),
    pub path: Vec<u32>,
}

impl RoutedPath {
    pub fn edges(&self) -> impl Iterator<Item = Hyperedge> + '_ {
        self.path
            .windows(2)
            .map(|w| Hyperedge::pair(w[0], w[1]).expect("paths are simple"))
    }
}

/// Pairwise edge-disjoint paths in `g`, one per demanded pair, in the demand's
/// canonical order; `None` when no such system exists. Exact.
pub fn edge_disjoint_paths(
    g: &Hypergraph,
    demand: &Demand,
    budget: usize,
) -> Result<Option<Vec<RoutedPath>>> {
    require_epr(g)?;
    if demand.n() != g.n() {
        return Err(Error::VertexCountMismatch(g.n(), demand.n()));
    }
    if g.edge_count() > budget {
        return Err(Error::BudgetExceeded {
            what: "edges in exact disjoint-path search",
            needed: g.edge_count() as u128,
            budget: budget as u128,
        });
    }
    Ok(PathSearch::new(g, demand).solve())
}

struct PathSearch<'a> {
    ends: Vec<(u32, u32)>,
    adjacency: Vec<Vec<(usize, u32)>>,
    used: Vec<bool>,
    demands: &'a [(u32, u32)],
    order: Vec<usize>,
    found: Vec<Option<Vec<u32>>>,
}

impl<'a> PathSearch<'a> {
    fn new(g: &Hypergraph, demand: &'a Demand) -> Self {
        let ends: Vec<(u32, u32)> = g
            .edges()
            .iter()
            .map(|e| e.endpoints().expect("2-uniform"))
            .collect();
        let mut adjacency = vec![Vec::new(); g.n() as usize + 1];
        for (i, &(a, b)) in ends.iter().enumerate() {
            adjacency[a as usize].push((i, b));
            adjacency[b as usize].push((i, a));
        }
        PathSearch {
            used: vec![false; ends.len()],
            ends,
            adjacency,
            demands: demand.pairs(),
            order: Vec::new(),
            found: vec![None; demand.pairs().len()],
        }
    }

    fn solve(mut self) -> Option<Vec<RoutedPath>> {
        if self.demands.len() > self.ends.len() {
            return None;
        }
        // Each path ending at v uses its own edge at v.
        let mut endings = vec![0usize; self.adjacency.len()];
        for &(u, v) in self.demands {
            endings[u as usize] += 1;
            endings[v as usize] += 1;
        }
        if endings
            .iter()
            .zip(&self.adjacency)
            .any(|(&need, adj)| need > adj.len())
        {
            return None;
        }

        // Routing a demand over a parallel edge never hurts: any solution using
        // that edge elsewhere can swap it for the demand's own path.
        for (d, &(u, v)) in self.demands.iter().enumerate() {
            let direct = self.adjacency[u as usize]
                .iter()
                .find(|&&(e, w)| w == v && !self.used[e])
                .map(|&(e, _)| e);
            if let Some(e) = direct {
                self.used[e] = true;
                self.found[d] = Some(vec![u, v]);
            }
        }

        let mut pending: Vec<(usize, usize)> = Vec::new();
        for (d, &(u, v)) in self.demands.iter().enumerate() {
            if self.found[d].is_some() {
                continue;
            }
            pending.push((self.distance(u, v)?, d));
        }
        // Hardest (longest) demands first.
        pending.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        self.order = pending.into_iter().map(|(_, d)| d).collect();

        if !self.search(0) {
            return None;
        }
        Some(
            self.demands
                .iter()
                .zip(self.found)
                .map(|(&pair, path)| RoutedPath {
                    pair,
                    path: path.expect("search assigned every demand"),
                })
                .collect(),
        )
    }

    fn distance(&self, from: u32, to: u32) -> Option<usize> {
        let mut dist = vec![usize::MAX; self.adjacency.len()];
        dist[from as usize] = 0;
        let mut queue = VecDeque::from([from]);
        while let Some(a) = queue.pop_front() {
            if a == to {
                return Some(dist[a as usize]);
            }
            for &(_, b) in &self.adjacency[a as usize] {
                if dist[b as usize] == usize::MAX {
                    dist[b as usize] = dist[a as usize] + 1;
                    queue.push_back(b);
                }
            }
        }
        None
    }

    /// Every remaining demand still has its endpoints connected by unused edges.
    fn residual_feasible(&self, from: usize) -> bool {
        let mut parent: Vec<usize> = (0..self.adjacency.len()).collect();
        fn root(parent: &mut [usize], mut x: usize) -> usize {
            while parent[x] != x {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            x
        }
        for (e, &(a, b)) in self.ends.iter().enumerate() {
            if !self.used[e] {
                let ra = root(&mut parent, a as usize);
                let rb = root(&mut parent, b as usize);
                parent[ra] = rb;
            }
        }
        self.order[from..].iter().all(|&d| {
            let (u, v) = self.demands[d];
            root(&mut parent, u as usize) == root(&mut parent, v as usize)
        })
    }

    fn search(&mut self, pos: usize) -> bool {
        if pos == self.order.len() {
            return true;
        }
        if !self.residual_feasible(pos) {
            return false;
        }
        let d = self.order[pos];
        let (u, v) = self.demands[d];
        let mut path = vec![u];
        self.extend(pos, v, VertexSet::singleton(u), &mut path)
    }

    fn extend(&mut self, pos: usize, target: u32, visited: VertexSet, path: &mut Vec<u32>) -> bool {
        let at = *path.last().expect("path starts at the source");
        if at == target {
            self.found[self.order[pos]] = Some(path.clone());
            if self.search(pos + 1) {
                return true;
            }
            self.found[self.order[pos]] = None;
            return false;
        }
        // Parallel copies are interchangeable: try one unused copy per neighbour.
        let mut tried = VertexSet::EMPTY;
        for i in 0..self.adjacency[at as usize].len() {
            let (e, w) = self.adjacency[at as usize][i];
            if self.used[e] || visited.contains(w) || tried.contains(w) {
                continue;
            }
            tried.insert(w);
            self.used[e] = true;
            path.push(w);
            let mut next = visited;
            next.insert(w);
            if self.extend(pos, target, next, path) {
                return true;
            }
            path.pop();
            self.used[e] = false;
        }
        false
    }
}

/// Whether `g` reaches `h` under teleportation and destruction, with the path
/// system proving it. `None` is an exact negative.
pub fn decide_restricted(
    g: &Hypergraph,
    h: &Hypergraph,
    budget: usize,
) -> Result<Option<Vec<RoutedPath>>> {
    require_epr(g)?;
    require_epr(h)?;
    g.check_same_parties(h)?;
    edge_disjoint_paths(g, &Demand::from_graph(h)?, budget)
}

/// Teleports along `path` from its first vertex, `u v1 v2 ... v -> u v2 ... v
/// -> ... -> u v`, consuming one path edge per step.
pub fn teleport_chain(path: &[u32]) -> Vec<Op> {
    if path.len() < 3 {
        return Vec::new();
    }
    let x = path[0];
    path[1..]
        .windows(2)
        .map(|w| Op::Teleport {
            x,
            y: w[0],
            z: w[1],
        })
        .collect()
}

/// Turns a path system in `g` into a script: the teleport chain of every path,
/// then destruction of the edges no path uses, in canonical order.
pub fn script_from_paths(g: &Hypergraph, paths: &[RoutedPath]) -> Result<Script> {
    let used = Hypergraph::new(g.n(), paths.iter().flat_map(|p| p.edges()))?;
    if !g.contains_all(&used) {
        return Err(Error::NotAGoodStep(
            "paths use edges absent from the source graph".into(),
        ));
    }
    let mut ops: Vec<Op> = paths.iter().flat_map(|p| teleport_chain(&p.path)).collect();
    ops.extend(g.edges_minus(&used).into_iter().map(|e| {
        let (u, v) = e.endpoints().expect("2-uniform");
        Op::Destroy { u, v }
    }));
    Ok(Script { ops })
}

/// A script from `g` to `h`, or `None` when `g` does not reach `h`. Its length
/// is always `|E(g)| - |E(h)|`.
pub fn plan_script(g: &Hypergraph, h: &Hypergraph, budget: usize) -> Result<Option<Script>> {
    let Some(paths) = decide_restricted(g, h, budget)? else {
        return Ok(None);
    };
    let script = script_from_paths(g, &paths)?;
    debug_assert_eq!(replay(g, &script).as_ref(), Ok(h));
    debug_assert_eq!(script.len(), g.edge_count() - h.edge_count());
    Ok(Some(script))
}

/// Result of growing a tree from `u` through edges of `g` absent from `h`
/// until it reaches `v`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GoodStep {
    /// `u ... v`, every edge in `E(g) ∖ E(h)`.
    pub path: Vec<u32>,
    /// Tree edges in the order they were added.
    pub tree: Vec<Hyperedge>,
}

impl GoodStep {
    /// Teleport along the path, then destroy what `h` does not keep.
    pub fn script(&self, g: &Hypergraph, h: &Hypergraph) -> Result<Script> {
        let mut ops = teleport_chain(&self.path);
        let state = replay(g, &Script { ops: ops.clone() })?;
        ops.extend(state.edges_minus(h).into_iter().map(|e| {
            let (u, v) = e.endpoints().expect("2-uniform");
            Op::Destroy { u, v }
        }));
        Ok(Script { ops })
    }
}

/// Builds a `u`–`v` path for the single edge `e = {u,v}` that `h` has and `g`
/// lacks, assuming no cut has smaller capacity in `g` than in `h`.
///
/// Starting from `C = {u}`, each round takes the lexicographically least edge
/// `{u', w}` of `E(g) ∖ E(h)` with `u' ∈ C` and `w ∉ C`, adds `w` to `C`, and
/// stops once `w = v`. Such an edge exists in every round: `e` crosses the cut
/// `(C, V ∖ C)`, so without one `h` would have the larger capacity there.
///
/// `budget` bounds the cut scan that checks the hypothesis.
pub fn good_step_path(
    g: &Hypergraph,
    h: &Hypergraph,
    e: Hyperedge,
    budget: u32,
) -> Result<GoodStep> {
    require_epr(g)?;
    require_epr(h)?;
    g.check_same_parties(h)?;
    let (u, v) = e
        .endpoints()
        .ok_or_else(|| Error::NotAGoodStep(format!("{e} is not a pair")))?;
    let new_edges = h.edges_minus(g);
    if !new_edges.contains(&e) {
        return Err(Error::NotAGoodStep(format!(
            "{e} is not among the target's new edges"
        )));
    }
    if new_edges.len() != 1 {
        return Err(Error::NotAGoodStep(format!(
            "target has {} new edges",
            new_edges.len()
        )));
    }
    if let Some(cut) = find_witness(g, h, budget)? {
        return Err(Error::CapacityDeficit(cut));
    }

    let spare: Vec<(u32, u32)> = g
        .edges_minus(h)
        .into_iter()
        .map(|e| e.endpoints().expect("2-uniform"))
        .collect();
    let mut taken = vec![false; spare.len()];
    let mut grown = VertexSet::singleton(u);
    let mut parent = vec![0u32; g.n() as usize + 1];
    let mut tree = Vec::new();
    loop {
        let step = spare
            .iter()
            .enumerate()
            .filter(|&(i, _)| !taken[i])
            .filter_map(
                |(i, &(a, b))| match (grown.contains(a), grown.contains(b)) {
                    (true, false) => Some(((a, b), i)),
                    (false, true) => Some(((b, a), i)),
                    _ => None,
                },
            )
            .min();
        let Some(((inside, outside), i)) = step else {
            // Unreachable after the cut scan; kept as a certificate.
            let cut = crate::hypergraph::Bipartition::new(g.n(), grown)?;
            return Err(Error::CapacityDeficit(cut));
        };
        taken[i] = true;
        grown.insert(outside);
        parent[outside as usize] = inside;
        tree.push(Hyperedge::pair(inside, outside)?);
        debug_assert_eq!(tree.len() + 1, grown.len());
        if outside == v {
            break;
        }
    }
    let mut path = vec![v];
    while *path.last().expect("nonempty") != u {
        let at = *path.last().expect("nonempty");
        path.push(parent[at as usize]);
    }
    path.reverse();
    Ok(GoodStep { path, tree })
}

/// A chain `g = G_0, G_1, ..., G_k = h` in which every step adds at most one
/// edge absent from its predecessor: one step per routed path longer than a
/// single edge, then a final destruction step. `None` when `g` does not reach
/// `h`.
pub fn good_sequence(
    g: &Hypergraph,
    h: &Hypergraph,
    budget: usize,
) -> Result<Option<Vec<Hypergraph>>> {
    let Some(paths) = decide_restricted(g, h, budget)? else {
        return Ok(None);
    };
    let mut stages = vec![g.clone()];
    let mut state = g.clone();
    for p in paths.iter().filter(|p| p.path.len() > 2) {
        state = replay(
            &state,
            &Script {
                ops: teleport_chain(&p.path),
            },
        )?;
        stages.push(state.clone());
    }
    if state != *h {
        stages.push(h.clone());
    }
    Ok(Some(stages))
}

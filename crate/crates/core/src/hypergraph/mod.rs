//! Value types for CAT-state ensembles and the exact combinatorial primitives
//! over them: degrees, subset degrees, cut capacities and connectivity.
//!
//! Vertices are 1-based party indices. An [`Hypergraph`] holds a *multiset* of
//! hyperedges, each hyperedge being one shared CAT state (an EPR pair when it has
//! two members). All values are immutable once built.

mod format;
mod vertex_set;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use vertex_set::{Subsets, VertexSet, Vertices, MAX_VERTICES};

/// Default cap on the side size enumerated by [`Hypergraph::cut_capacity_ie`].
pub const DEFAULT_IE_BUDGET: usize = 20;

/// One CAT state: at least two distinct parties.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Hyperedge(VertexSet);

impl Hyperedge {
    pub fn new(vertices: VertexSet) -> Result<Self> {
        if vertices.len() < 2 {
            return Err(Error::EdgeTooSmall(vertices.len()));
        }
        Ok(Hyperedge(vertices))
    }

    pub fn from_vertices<I: IntoIterator<Item = u32>>(n: u32, vertices: I) -> Result<Self> {
        Hyperedge::new(VertexSet::from_vertices(n, vertices)?)
    }

    /// The EPR pair `{u, v}`.
    pub fn pair(u: u32, v: u32) -> Result<Self> {
        if u == v {
            return Err(Error::RepeatedVertex(u));
        }
        let n = u.max(v);
        Hyperedge::from_vertices(n.min(MAX_VERTICES), [u, v])
    }

    pub fn vertices(self) -> VertexSet {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.len()
    }

    pub fn is_empty(self) -> bool {
        false
    }

    pub fn contains(self, v: u32) -> bool {
        self.0.contains(v)
    }

    /// True when the edge has members on both sides of `side`.
    pub fn crosses(self, side: VertexSet) -> bool {
        self.0.intersects(side) && !self.0.is_subset(side)
    }

    /// The two endpoints of a 2-vertex edge, smaller first.
    pub fn endpoints(self) -> Option<(u32, u32)> {
        let mut it = self.0.iter();
        match (it.next(), it.next(), it.next()) {
            (Some(a), Some(b), None) => Some((a, b)),
            _ => None,
        }
    }
}

impl fmt::Debug for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for Hyperedge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An ensemble of CAT states on `n` parties (an EC hypergraph).
///
/// Edges are kept sorted, so two hypergraphs are equal exactly when their edge
/// multisets are.
#[derive(Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "format::JsonHypergraph", into = "format::JsonHypergraph")]
pub struct Hypergraph {
    n: u32,
    edges: Vec<Hyperedge>,
}

impl Hypergraph {
    pub fn new<I>(n: u32, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = Hyperedge>,
    {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n as u64));
        }
        let full = VertexSet::full(n);
        let mut edges: Vec<Hyperedge> = edges.into_iter().collect();
        if let Some(bad) = edges.iter().find(|e| !e.vertices().is_subset(full)) {
            let vertex = bad.vertices().difference(full).first_vertex().unwrap_or(0);
            return Err(Error::VertexOutOfRange {
                vertex: vertex as u64,
                n,
            });
        }
        edges.sort_unstable();
        Ok(Hypergraph { n, edges })
    }

    /// No CAT states at all.
    pub fn empty(n: u32) -> Result<Self> {
        Hypergraph::new(n, [])
    }

    /// Convenience constructor from vertex lists.
    pub fn from_lists<E, L>(n: u32, lists: L) -> Result<Self>
    where
        E: AsRef<[u32]>,
        L: IntoIterator<Item = E>,
    {
        let edges = lists
            .into_iter()
            .map(|l| Hyperedge::from_vertices(n, l.as_ref().iter().copied()))
            .collect::<Result<Vec<_>>>()?;
        Hypergraph::new(n, edges)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn vertex_set(&self) -> VertexSet {
        VertexSet::full(self.n)
    }

    /// Sorted edge list, repeats adjacent.
    pub fn edges(&self) -> &[Hyperedge] {
        &self.edges
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn multiplicity(&self, edge: Hyperedge) -> usize {
        let lo = self.edges.partition_point(|e| *e < edge);
        let hi = self.edges.partition_point(|e| *e <= edge);
        hi - lo
    }

    /// Distinct edges with their multiplicities, in canonical order.
    pub fn edge_counts(&self) -> Vec<(Hyperedge, usize)> {
        let mut out: Vec<(Hyperedge, usize)> = Vec::new();
        for &e in &self.edges {
            match out.last_mut() {
                Some((last, count)) if *last == e => *count += 1,
                _ => out.push((e, 1)),
            }
        }
        out
    }

    pub fn is_simple(&self) -> bool {
        self.edges.windows(2).all(|w| w[0] != w[1])
    }

    /// Every hyperedge has exactly `r` members. Vacuously true without edges.
    pub fn is_uniform(&self, r: usize) -> bool {
        self.edges.iter().all(|e| e.len() == r)
    }

    /// The common hyperedge size, if there are edges and they all agree.
    pub fn uniformity(&self) -> Option<usize> {
        let r = self.edges.first()?.len();
        self.is_uniform(r).then_some(r)
    }

    /// 2-uniform, zero edges included.
    pub fn is_epr_graph(&self) -> bool {
        self.is_uniform(2)
    }

    pub(crate) fn check_vertex(&self, v: u32) -> Result<()> {
        if v == 0 || v > self.n {
            return Err(Error::VertexOutOfRange {
                vertex: v as u64,
                n: self.n,
            });
        }
        Ok(())
    }

    pub(crate) fn check_same_parties(&self, other: &Hypergraph) -> Result<()> {
        if self.n != other.n {
            return Err(Error::VertexCountMismatch(self.n, other.n));
        }
        Ok(())
    }

    /// Number of hyperedges containing `v`, counted with multiplicity.
    pub fn degree(&self, v: u32) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.edges.iter().filter(|e| e.contains(v)).count())
    }

    /// Number of hyperedges containing every vertex of `subset`.
    pub fn subset_degree(&self, subset: VertexSet) -> Result<usize> {
        if subset.is_empty() {
            return Err(Error::EmptySubset);
        }
        if !subset.is_subset(self.vertex_set()) {
            let vertex = subset
                .difference(self.vertex_set())
                .first_vertex()
                .unwrap_or(0);
            return Err(Error::VertexOutOfRange {
                vertex: vertex as u64,
                n: self.n,
            });
        }
        Ok(self.count_containing(subset))
    }

    fn count_containing(&self, subset: VertexSet) -> usize {
        self.edges
            .iter()
            .filter(|e| subset.is_subset(e.vertices()))
            .count()
    }

    /// Hyperedges with members on both sides of the cut. For an ensemble of CAT
    /// states this is the entanglement entropy across the bipartition.
    pub fn cut_capacity(&self, cut: &Bipartition) -> usize {
        debug_assert_eq!(cut.n(), self.n);
        let side = cut.side();
        self.edges.iter().filter(|e| e.crosses(side)).count()
    }

    /// Cut capacity by inclusion–exclusion over subset degrees:
    ///
    /// `sum_{F ⊆ S} (-1)^{|F|-1} deg(F) - sum_{F ⊆ S, |F| = r} deg(F)`
    ///
    /// where `S` is the smaller side of the cut. Requires an `r`-uniform
    /// hypergraph and enumerates all `2^|S|` subsets, so `|S|` must not exceed
    /// `budget`.
    pub fn cut_capacity_ie(&self, cut: &Bipartition, budget: usize) -> Result<usize> {
        debug_assert_eq!(cut.n(), self.n);
        let Some(r) = self.uniformity() else {
            if self.edges.is_empty() {
                return Ok(0);
            }
            return Err(Error::NotUniform);
        };
        let side = cut.side();
        let other = cut.complement_side();
        let s = if other.len() < side.len() {
            other
        } else {
            side
        };
        if s.len() > budget {
            return Err(Error::BudgetExceeded {
                what: "inclusion-exclusion side size",
                needed: s.len() as u128,
                budget: budget as u128,
            });
        }
        let mut alternating: i64 = 0;
        let mut internal: i64 = 0;
        for f in s.subsets().filter(|f| !f.is_empty()) {
            let deg = self.count_containing(f) as i64;
            if f.len() % 2 == 1 {
                alternating += deg;
            } else {
                alternating -= deg;
            }
            if f.len() == r {
                internal += deg;
            }
        }
        let total = alternating - internal;
        debug_assert!(total >= 0);
        Ok(total as usize)
    }

    /// Every pair of parties is joined by a hyperpath.
    pub fn is_connected(&self) -> bool {
        let full = self.vertex_set();
        let mut reached = VertexSet::singleton(1);
        loop {
            let grown = self
                .edges
                .iter()
                .filter(|e| e.vertices().intersects(reached))
                .fold(reached, |acc, e| acc.union(e.vertices()));
            if grown == reached {
                return reached == full;
            }
            reached = grown;
        }
    }

    /// Searches for a cycle: an alternating sequence
    /// `v_0, E_0, v_1, E_1, ..., v_{k-1}, E_{k-1}, v_0` with `k >= 2`, distinct
    /// vertices, distinct hyperedges and `v_i, v_{i+1} ∈ E_i`.
    ///
    /// Such cycles are exactly the cycles of the vertex/hyperedge incidence
    /// graph, which is what gets searched. Two copies of one hyperedge always
    /// form a cycle.
    pub fn find_cycle(&self) -> Option<HyperCycle> {
        let n = self.n as usize;
        let m = self.edges.len();
        // Incidence graph nodes: 0..n are vertices 1..=n, n..n+m are edge slots.
        let neighbours = |node: usize| -> Vec<usize> {
            if node < n {
                let v = node as u32 + 1;
                (0..m)
                    .filter(|&i| self.edges[i].contains(v))
                    .map(|i| n + i)
                    .collect()
            } else {
                self.edges[node - n]
                    .vertices()
                    .iter()
                    .map(|v| v as usize - 1)
                    .collect()
            }
        };

        let total = n + m;
        let mut parent: Vec<Option<usize>> = vec![None; total];
        let mut depth: Vec<usize> = vec![usize::MAX; total];
        for root in 0..total {
            if depth[root] != usize::MAX {
                continue;
            }
            depth[root] = 0;
            let mut stack = vec![root];
            while let Some(node) = stack.pop() {
                for next in neighbours(node) {
                    if Some(next) == parent[node] {
                        continue;
                    }
                    if depth[next] == usize::MAX {
                        depth[next] = depth[node] + 1;
                        parent[next] = Some(node);
                        stack.push(next);
                    } else {
                        return Some(self.close_cycle(node, next, &parent, &depth));
                    }
                }
            }
        }
        None
    }

    fn close_cycle(
        &self,
        a: usize,
        b: usize,
        parent: &[Option<usize>],
        depth: &[usize],
    ) -> HyperCycle {
        let (mut x, mut y) = (a, b);
        let mut left = vec![x];
        let mut right = vec![y];
        while depth[x] > depth[y] {
            x = parent[x].expect("non-root has a parent");
            left.push(x);
        }
        while depth[y] > depth[x] {
            y = parent[y].expect("non-root has a parent");
            right.push(y);
        }
        while x != y {
            x = parent[x].expect("non-root has a parent");
            y = parent[y].expect("non-root has a parent");
            left.push(x);
            right.push(y);
        }
        right.pop();
        right.reverse();
        left.extend(right);
        // Rotate so the sequence starts at a vertex node.
        let n = self.n as usize;
        let start = left.iter().position(|&node| node < n).unwrap_or(0);
        left.rotate_left(start);
        let mut cycle = HyperCycle {
            vertices: Vec::new(),
            edges: Vec::new(),
        };
        for node in left {
            if node < n {
                cycle.vertices.push(node as u32 + 1);
            } else {
                cycle.edges.push(self.edges[node - n]);
            }
        }
        cycle
    }

    /// Connected, no two hyperedges share more than one vertex, and no cycle.
    pub fn is_hypertree(&self) -> bool {
        if !self.is_simple() || !self.is_connected() {
            return false;
        }
        let pairwise_ok = self.edges.iter().enumerate().all(|(i, a)| {
            self.edges[i + 1..]
                .iter()
                .all(|b| a.vertices().intersection(b.vertices()).len() <= 1)
        });
        if !pairwise_ok {
            return false;
        }
        let acyclic = self.find_cycle().is_none();
        if acyclic {
            let excess: usize = self.edges.iter().map(|e| e.len() - 1).sum();
            debug_assert_eq!(excess, self.n as usize - 1);
        }
        acyclic
    }

    /// `other` is a sub-multiset of `self`.
    pub fn contains_all(&self, other: &Hypergraph) -> bool {
        if self.n != other.n || other.edges.len() > self.edges.len() {
            return false;
        }
        let mut it = self.edges.iter().peekable();
        'outer: for e in &other.edges {
            while let Some(&&candidate) = it.peek() {
                it.next();
                if candidate == *e {
                    continue 'outer;
                }
                if candidate > *e {
                    return false;
                }
            }
            return false;
        }
        true
    }

    /// Multiset difference `self ∖ other`.
    pub fn edges_minus(&self, other: &Hypergraph) -> Vec<Hyperedge> {
        let mut out = Vec::new();
        let mut j = 0;
        for &e in &self.edges {
            while j < other.edges.len() && other.edges[j] < e {
                j += 1;
            }
            if j < other.edges.len() && other.edges[j] == e {
                j += 1;
            } else {
                out.push(e);
            }
        }
        out
    }

    pub fn with_edge(&self, edge: Hyperedge) -> Result<Self> {
        let mut edges = self.edges.clone();
        edges.push(edge);
        Hypergraph::new(self.n, edges)
    }

    /// Removes one copy of `edge`, or `None` when absent.
    pub fn without_edge(&self, edge: Hyperedge) -> Option<Self> {
        let idx = self.edges.binary_search(&edge).ok()?;
        let mut edges = self.edges.clone();
        edges.remove(idx);
        Some(Hypergraph { n: self.n, edges })
    }

    /// Canonical text form: `n=<n>` then one hyperedge per line.
    pub fn to_text(&self) -> String {
        format::to_text(self)
    }

    /// Canonical compact JSON form: `{"n":..,"edges":[[..],..]}`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("hypergraph serializes")
    }

    /// Parses either the text format or, when the input starts with `{`, JSON.
    pub fn parse(text: &str) -> Result<Self> {
        if text.trim_start().starts_with('{') {
            Hypergraph::parse_json(text)
        } else {
            Hypergraph::parse_text(text)
        }
    }

    pub fn parse_text(text: &str) -> Result<Self> {
        format::parse_text(text)
    }

    pub fn parse_json(text: &str) -> Result<Self> {
        format::parse_json(text)
    }
}

impl fmt::Debug for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Hypergraph(n={}, {:?})", self.n, self.edges)
    }
}

impl fmt::Display for Hypergraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl std::str::FromStr for Hypergraph {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Hypergraph::parse(s)
    }
}

/// A witness cycle returned by [`Hypergraph::find_cycle`]. `edges[i]` joins
/// `vertices[i]` and `vertices[(i + 1) % k]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HyperCycle {
    pub vertices: Vec<u32>,
    pub edges: Vec<Hyperedge>,
}

/// The cut `(side, V ∖ side)`. Stored with vertex 1 on `side`, since a cut and
/// its mirror image are the same cut.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Bipartition {
    side: VertexSet,
    n: u32,
}

impl Bipartition {
    pub fn new(n: u32, side: VertexSet) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n as u64));
        }
        let full = VertexSet::full(n);
        if !side.is_subset(full) {
            let vertex = side.difference(full).first_vertex().unwrap_or(0);
            return Err(Error::VertexOutOfRange {
                vertex: vertex as u64,
                n,
            });
        }
        if side.is_empty() || side == full {
            return Err(Error::ImproperBipartition { n });
        }
        let side = if side.contains(1) {
            side
        } else {
            side.complement(n)
        };
        Ok(Bipartition { side, n })
    }

    pub fn from_vertices<I: IntoIterator<Item = u32>>(n: u32, vertices: I) -> Result<Self> {
        Bipartition::new(n, VertexSet::from_vertices(n, vertices)?)
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// The side holding vertex 1.
    pub fn side(&self) -> VertexSet {
        self.side
    }

    pub fn complement_side(&self) -> VertexSet {
        self.side.complement(self.n)
    }

    /// All `2^(n-1) - 1` proper cuts of `n` vertices, in increasing bitmask
    /// order of the canonical side.
    pub fn all(n: u32) -> impl Iterator<Item = Bipartition> + Clone {
        debug_assert!((1..=MAX_VERTICES).contains(&n));
        let count: u64 = if n <= 1 { 0 } else { 1u64 << (n - 1) };
        (0..count)
            .map(|k| (k << 1) | 1)
            .filter(move |&bits| bits != VertexSet::full(n).bits())
            .map(move |bits| Bipartition {
                side: VertexSet::from_bits(bits),
                n,
            })
    }

    /// Number of proper cuts of `n` vertices.
    pub fn count(n: u32) -> u64 {
        if n <= 1 {
            0
        } else {
            (1u64 << (n - 1)) - 1
        }
    }
}

impl fmt::Debug for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side, self.complement_side())
    }
}

impl fmt::Display for Bipartition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}|{}", self.side, self.complement_side())
    }
}

/// Disjoint nonempty blocks covering all `n` vertices, ordered by least member.
/// Block `i` becomes vertex `i + 1` after merging.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Partition {
    n: u32,
    blocks: Vec<VertexSet>,
}

impl Partition {
    pub fn new<I: IntoIterator<Item = VertexSet>>(n: u32, blocks: I) -> Result<Self> {
        if n == 0 || n > MAX_VERTICES {
            return Err(Error::BadVertexCount(n as u64));
        }
        let mut blocks: Vec<VertexSet> = blocks.into_iter().collect();
        let mut covered = VertexSet::EMPTY;
        for b in &blocks {
            if b.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            if b.intersects(covered) {
                return Err(Error::InvalidPartition(format!(
                    "vertex {} in two blocks",
                    b.intersection(covered).first_vertex().unwrap_or(0)
                )));
            }
            covered = covered.union(*b);
        }
        if covered != VertexSet::full(n) {
            let missing = VertexSet::full(n).difference(covered);
            let extra = covered.difference(VertexSet::full(n));
            return Err(Error::InvalidPartition(if !extra.is_empty() {
                format!("vertices {extra} out of range 1..={n}")
            } else {
                format!("vertices {missing} not covered")
            }));
        }
        blocks.sort_by_key(|b| b.first_vertex());
        Ok(Partition { n, blocks })
    }

    pub fn from_lists<B, L>(n: u32, lists: L) -> Result<Self>
    where
        B: AsRef<[u32]>,
        L: IntoIterator<Item = B>,
    {
        let blocks = lists
            .into_iter()
            .map(|b| {
                let b = b.as_ref();
                b.iter().try_fold(VertexSet::EMPTY, |mut acc, &v| {
                    if v == 0 || v > n {
                        return Err(Error::InvalidPartition(format!(
                            "vertex {v} out of range 1..={n}"
                        )));
                    }
                    if acc.contains(v) {
                        return Err(Error::InvalidPartition(format!("vertex {v} repeated")));
                    }
                    acc.insert(v);
                    Ok(acc)
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Partition::new(n, blocks)
    }

    /// The two-block partition of a cut: block 1 is the side holding vertex 1.
    pub fn from_cut(cut: &Bipartition) -> Self {
        Partition {
            n: cut.n(),
            blocks: vec![cut.side(), cut.complement_side()],
        }
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn blocks(&self) -> &[VertexSet] {
        &self.blocks
    }

    /// Block index (0-based) holding `v`.
    pub fn block_of(&self, v: u32) -> Option<usize> {
        self.blocks.iter().position(|b| b.contains(v))
    }

    /// Merged vertices (1-based block indices) touched by `set`.
    pub fn image(&self, set: VertexSet) -> VertexSet {
        let mut out = VertexSet::EMPTY;
        for (i, b) in self.blocks.iter().enumerate() {
            if b.intersects(set) {
                out.insert(i as u32 + 1);
            }
        }
        out
    }

    /// Union of the blocks named by `merged` (1-based block indices).
    pub fn preimage(&self, merged: VertexSet) -> VertexSet {
        merged
            .iter()
            .filter_map(|i| self.blocks.get(i as usize - 1))
            .fold(VertexSet::EMPTY, |acc, b| acc.union(*b))
    }
}

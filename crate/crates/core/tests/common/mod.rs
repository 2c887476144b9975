//! Independent oracles shared by the integration and acceptance tests. Nothing
//! here calls into the algorithms it is used to check.

#![allow(dead_code)]

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};

use locc::{Hyperedge, Hypergraph, VertexSet};
use rand::seq::SliceRandom;
use rand::Rng;

/// Every `r`-subset of `1..=n` as sorted vertex lists, lexicographic.
pub fn r_subsets(n: u32, r: u32) -> Vec<Vec<u32>> {
    fn go(start: u32, n: u32, r: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if cur.len() == r as usize {
            out.push(cur.clone());
            return;
        }
        for v in start..=n {
            cur.push(v);
            go(v + 1, n, r, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(1, n, r, &mut Vec::new(), &mut out);
    out
}

/// Index multisets of size `m` drawn from `0..len` (non-decreasing sequences).
pub fn multisets(len: usize, m: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, len: usize, m: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == m {
            out.push(cur.clone());
            return;
        }
        for i in start..len {
            cur.push(i);
            go(i, len, m, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, len, m, &mut Vec::new(), &mut out);
    out
}

/// Index sets of size `m` drawn from `0..len`.
pub fn subsets(len: usize, m: usize) -> Vec<Vec<usize>> {
    multisets(len, m)
        .into_iter()
        .filter(|s| s.windows(2).all(|w| w[0] < w[1]))
        .collect()
}

pub fn build(n: u32, universe: &[Vec<u32>], picks: &[usize]) -> Hypergraph {
    Hypergraph::from_lists(n, picks.iter().map(|&i| universe[i].clone())).unwrap()
}

/// Simple `r`-uniform hypergraphs on `n` vertices with exactly `m` edges.
pub fn simple_family(n: u32, r: u32, m: usize) -> Vec<Hypergraph> {
    let universe = r_subsets(n, r);
    subsets(universe.len(), m)
        .iter()
        .map(|p| build(n, &universe, p))
        .collect()
}

/// Crossing count by definition: an edge crosses when it has vertices on both
/// sides.
pub fn crossing(h: &Hypergraph, side: &[u32]) -> usize {
    h.edges()
        .iter()
        .filter(|e| {
            let vs = e.vertices().to_vec();
            let inside = vs.iter().filter(|v| side.contains(v)).count();
            inside > 0 && inside < vs.len()
        })
        .count()
}

pub fn degree(h: &Hypergraph, v: u32) -> usize {
    h.edges()
        .iter()
        .filter(|e| e.vertices().to_vec().contains(&v))
        .count()
}

/// Every proper side containing vertex 1, as vertex lists.
pub fn sides(n: u32) -> Vec<Vec<u32>> {
    (0u64..(1u64 << (n - 1)))
        .map(|mask| {
            let mut side = vec![1];
            side.extend((0..n - 1).filter(|i| mask >> i & 1 == 1).map(|i| i + 2));
            side
        })
        .filter(|s| s.len() < n as usize)
        .collect()
}

pub fn side_set(side: &[u32]) -> VertexSet {
    side.iter().fold(VertexSet::EMPTY, |acc, &v| {
        acc.union(VertexSet::singleton(v))
    })
}

/// Random `r`-uniform multiset hypergraph.
pub fn random_hypergraph<R: Rng>(rng: &mut R, n: u32, r: u32, m: usize) -> Hypergraph {
    let all: Vec<u32> = (1..=n).collect();
    let edges: Vec<Vec<u32>> = (0..m)
        .map(|_| all.choose_multiple(rng, r as usize).copied().collect())
        .collect();
    Hypergraph::from_lists(n, edges).unwrap()
}

/// Random multigraph (2-uniform, repeats allowed).
pub fn random_graph<R: Rng>(rng: &mut R, n: u32, m: usize) -> Hypergraph {
    random_hypergraph(rng, n, 2, m)
}

/// Random simple graph: each pair present with probability `p`.
pub fn random_simple_graph<R: Rng>(rng: &mut R, n: u32, p: f64) -> Hypergraph {
    let edges: Vec<Vec<u32>> = r_subsets(n, 2)
        .into_iter()
        .filter(|_| rng.gen_bool(p))
        .collect();
    Hypergraph::from_lists(n, edges).unwrap()
}

/// A multigraph as a sorted list of `(u, v)` with `u < v`.
pub type Pairs = Vec<(u32, u32)>;

pub fn pairs_of(h: &Hypergraph) -> Pairs {
    let mut out: Pairs = h
        .edges()
        .iter()
        .map(|e| {
            let v = e.vertices().to_vec();
            (v[0], v[1])
        })
        .collect();
    out.sort();
    out
}

pub fn graph_of(n: u32, pairs: &Pairs) -> Hypergraph {
    Hypergraph::from_lists(n, pairs.iter().map(|&(u, v)| [u, v])).unwrap()
}

fn norm(a: u32, b: u32) -> (u32, u32) {
    (a.min(b), a.max(b))
}

/// Every state one teleportation or one destruction away. Teleporting through
/// `y` consumes one `x-y` and one `y-z` (with `x != z`) and adds `x-z`.
pub fn successors(g: &Pairs) -> Vec<Pairs> {
    let mut out = BTreeSet::new();
    for i in 0..g.len() {
        let mut d = g.clone();
        d.remove(i);
        out.insert(d);
    }
    for i in 0..g.len() {
        for j in 0..g.len() {
            if i == j {
                continue;
            }
            let (a, b) = (g[i], g[j]);
            for y in [a.0, a.1] {
                if b.0 != y && b.1 != y {
                    continue;
                }
                let x = if a.0 == y { a.1 } else { a.0 };
                let z = if b.0 == y { b.1 } else { b.0 };
                if x == z {
                    continue;
                }
                let mut t: Pairs = g
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != i && k != j)
                    .map(|(_, &p)| p)
                    .collect();
                t.push(norm(x, z));
                t.sort();
                out.insert(t);
            }
        }
    }
    out.into_iter().collect()
}

/// All states reachable from `g` by any sequence of teleportations and
/// destructions, `g` included.
pub fn reachable(g: &Pairs) -> HashSet<Pairs> {
    let mut seen = HashSet::new();
    seen.insert(g.clone());
    let mut queue = VecDeque::from([g.clone()]);
    while let Some(s) = queue.pop_front() {
        for t in successors(&s) {
            if seen.insert(t.clone()) {
                queue.push_back(t);
            }
        }
    }
    seen
}

/// Memoized [`reachable`].
#[derive(Default)]
pub struct ReachCache(HashMap<Pairs, HashSet<Pairs>>);

impl ReachCache {
    pub fn reaches(&mut self, g: &Hypergraph, h: &Hypergraph) -> bool {
        let key = pairs_of(g);
        self.0
            .entry(key.clone())
            .or_insert_with(|| reachable(&key))
            .contains(&pairs_of(h))
    }
}

/// Width of a finite poset given by a strict order: `N` minus a maximum
/// matching between "lower" and "upper" copies (Dilworth via Kőnig).
pub fn poset_width(size: usize, less: impl Fn(usize, usize) -> bool) -> usize {
    let adj: Vec<Vec<usize>> = (0..size)
        .map(|i| (0..size).filter(|&j| less(i, j)).collect())
        .collect();
    let mut mate: Vec<Option<usize>> = vec![None; size];
    fn augment(
        i: usize,
        adj: &[Vec<usize>],
        seen: &mut [bool],
        mate: &mut [Option<usize>],
    ) -> bool {
        for &j in &adj[i] {
            if seen[j] {
                continue;
            }
            seen[j] = true;
            if mate[j].is_none_or(|k| augment(k, adj, seen, mate)) {
                mate[j] = Some(i);
                return true;
            }
        }
        false
    }
    let mut matched = 0;
    for i in 0..size {
        let mut seen = vec![false; size];
        if augment(i, &adj, &mut seen, &mut mate) {
            matched += 1;
        }
    }
    size - matched
}

/// Largest antichain by trying every subfamily. Only for tiny posets.
pub fn brute_width(size: usize, less: impl Fn(usize, usize) -> bool) -> usize {
    assert!(size <= 20);
    (0u32..(1 << size))
        .filter(|&set| {
            (0..size)
                .all(|i| set >> i & 1 == 0 || (0..size).all(|j| set >> j & 1 == 0 || !less(i, j)))
        })
        .map(|set| set.count_ones() as usize)
        .max()
        .unwrap_or(0)
}

/// The edge multiset difference `a - b`, by counting.
pub fn minus(a: &Hypergraph, b: &Hypergraph) -> Vec<Hyperedge> {
    let mut left: HashMap<Hyperedge, usize> = HashMap::new();
    for e in a.edges() {
        *left.entry(*e).or_default() += 1;
    }
    for e in b.edges() {
        if let Some(c) = left.get_mut(e) {
            *c = c.saturating_sub(1);
        }
    }
    let mut out: Vec<Hyperedge> = left
        .into_iter()
        .flat_map(|(e, c)| std::iter::repeat_n(e, c))
        .collect();
    out.sort();
    out
}

//! Entropic LOCC incomparability certificates.
//!
//! The partial entropy of a CAT-state ensemble across a bipartition equals the
//! number of hyperedges crossing it, and no LOCC protocol can raise it. A cut
//! where the source has strictly smaller capacity than the target therefore
//! certifies that the source cannot be turned into the target. When no such cut
//! exists in either direction the pair is isentropic and the criterion is
//! silent: such pairs are reported as [`Relation::Inconclusive`], never as
//! comparable.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::combinatorics::{binomial, binomial_big};
use crate::error::{Error, Result};
use crate::hypergraph::{Bipartition, Hyperedge, Hypergraph, Partition, VertexSet};

/// Default largest `n` for exhaustive cut scans (`2^(n-1) - 1` cuts).
pub const DEFAULT_WITNESS_BUDGET: u32 = 22;

/// Default cap on `C(n, k)` for [`degree_profile`].
pub const DEFAULT_PROFILE_BUDGET: u128 = 1 << 24;

/// Largest `M = C(n, r)` for which [`sperner_width`] evaluates `C(M, ⌊M/2⌋)`.
pub const MAX_WIDTH_UNIVERSE: u128 = 100_000;

// Below this many cuts the scan runs on the calling thread.
const PARALLEL_CUTS: u64 = 1 << 12;

/// Number of hypothetical EPR pairs left after merging each side of `cut` into
/// a single party. Equal to [`Hypergraph::cut_capacity`].
pub fn bicolor_merge(h: &Hypergraph, cut: &Bipartition) -> usize {
    let merged = multicolor_merge(h, &Partition::from_cut(cut))
        .expect("a proper cut yields a valid two-block partition");
    let pairs = merged.edge_count();
    debug_assert_eq!(pairs, h.cut_capacity(cut));
    pairs
}

/// Merges every block of `partition` into one party. Block `i` becomes vertex
/// `i + 1`; each hyperedge maps to the blocks it touches, and images with a
/// single block (edges internal to a block) are dropped.
pub fn multicolor_merge(h: &Hypergraph, partition: &Partition) -> Result<Hypergraph> {
    if partition.n() != h.n() {
        return Err(Error::VertexCountMismatch(h.n(), partition.n()));
    }
    let blocks = partition.blocks().len();
    if blocks < 2 {
        return Err(Error::InvalidPartition(
            "merging needs at least two blocks".into(),
        ));
    }
    let images = h
        .edges()
        .iter()
        .map(|e| partition.image(e.vertices()))
        .filter(|img| img.len() >= 2)
        .map(Hyperedge::new)
        .collect::<Result<Vec<_>>>()?;
    Hypergraph::new(blocks as u32, images)
}

fn check_scan(h1: &Hypergraph, h2: &Hypergraph, budget: u32) -> Result<()> {
    h1.check_same_parties(h2)?;
    if h1.n() > budget {
        return Err(Error::BudgetExceeded {
            what: "exhaustive cut scan over n parties",
            needed: h1.n() as u128,
            budget: budget as u128,
        });
    }
    Ok(())
}

fn least_cut<F>(n: u32, pred: F) -> Option<Bipartition>
where
    F: Fn(&Bipartition) -> bool + Sync,
{
    if Bipartition::count(n) < PARALLEL_CUTS {
        return Bipartition::all(n).filter(|b| pred(b)).min();
    }
    let full = VertexSet::full(n).bits();
    (0..1u64 << (n - 1))
        .into_par_iter()
        .map(|k| (k << 1) | 1)
        .filter(|&bits| bits != full)
        .filter_map(|bits| {
            let cut = Bipartition::new(n, VertexSet::from_bits(bits)).ok()?;
            pred(&cut).then_some(cut)
        })
        .min()
}

/// The lexicographically least canonical cut where `h1` has strictly smaller
/// capacity than `h2`, certifying that `h1` cannot be transformed into `h2` by
/// LOCC. `None` means no cut separates them in that direction.
///
/// Scans all cuts; fails up front when `n` exceeds `budget`.
pub fn find_witness(h1: &Hypergraph, h2: &Hypergraph, budget: u32) -> Result<Option<Bipartition>> {
    check_scan(h1, h2, budget)?;
    Ok(least_cut(h1.n(), |cut| {
        h1.cut_capacity(cut) < h2.cut_capacity(cut)
    }))
}

/// Equal capacity across every cut.
pub fn is_isentropic(h1: &Hypergraph, h2: &Hypergraph, budget: u32) -> Result<bool> {
    check_scan(h1, h2, budget)?;
    Ok(least_cut(h1.n(), |cut| h1.cut_capacity(cut) != h2.cut_capacity(cut)).is_none())
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Relation {
    /// Witnesses in both directions.
    Incomparable,
    /// The first ensemble cannot reach the second; the reverse is not excluded.
    BlockedForward,
    /// The second ensemble cannot reach the first; the reverse is not excluded.
    BlockedBackward,
    /// Isentropic and distinct: cut capacities cannot decide.
    Inconclusive,
    Identical,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Relation::Incomparable => "Incomparable",
            Relation::BlockedForward => "BlockedForward",
            Relation::BlockedBackward => "BlockedBackward",
            Relation::Inconclusive => "Inconclusive",
            Relation::Identical => "Identical",
        };
        f.write_str(s)
    }
}

/// Outcome of [`compare`]. `witness_fwd` satisfies
/// `cut_capacity(h1) < cut_capacity(h2)`, `witness_bwd` the reverse.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Verdict {
    pub relation: Relation,
    #[serde(serialize_with = "serialize_cut")]
    pub witness_fwd: Option<Bipartition>,
    #[serde(serialize_with = "serialize_cut")]
    pub witness_bwd: Option<Bipartition>,
    pub isentropic: bool,
}

fn serialize_cut<S: Serializer>(cut: &Option<Bipartition>, s: S) -> Result<S::Ok, S::Error> {
    match cut {
        Some(c) => s.collect_seq(c.side().iter()),
        None => s.serialize_none(),
    }
}

impl Verdict {
    /// `{"relation":..,"witness_fwd":[..]|null,"witness_bwd":..,"isentropic":..}`
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("verdict serializes")
    }
}

/// Runs the witness search in both directions.
pub fn compare(h1: &Hypergraph, h2: &Hypergraph, budget: u32) -> Result<Verdict> {
    check_scan(h1, h2, budget)?;
    if h1 == h2 {
        return Ok(Verdict {
            relation: Relation::Identical,
            witness_fwd: None,
            witness_bwd: None,
            isentropic: true,
        });
    }
    let fwd = find_witness(h1, h2, budget)?;
    let bwd = find_witness(h2, h1, budget)?;
    let relation = match (fwd.is_some(), bwd.is_some()) {
        (true, true) => Relation::Incomparable,
        (true, false) => Relation::BlockedForward,
        (false, true) => Relation::BlockedBackward,
        (false, false) => Relation::Inconclusive,
    };
    let isentropic = fwd.is_none() && bwd.is_none();
    debug_assert_eq!(isentropic, is_isentropic(h1, h2, budget)?);
    Ok(Verdict {
        relation,
        witness_fwd: fwd,
        witness_bwd: bwd,
        isentropic,
    })
}

/// Which ensemble can be obtained from the other by discarding CAT states, if
/// either. This is the one comparability the tool can certify in the general
/// LOCC model; it is reported alongside a [`Verdict`], not as one.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Destruction {
    /// The second ensemble's edges are a sub-multiset of the first's.
    ForwardBySubset,
    BackwardBySubset,
}

pub fn destruction_relation(h1: &Hypergraph, h2: &Hypergraph) -> Option<Destruction> {
    if h1 == h2 {
        None
    } else if h1.contains_all(h2) {
        Some(Destruction::ForwardBySubset)
    } else if h2.contains_all(h1) {
        Some(Destruction::BackwardBySubset)
    } else {
        None
    }
}

/// Subset degrees of every `k`-subset with nonzero degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeProfile {
    pub k: usize,
    pub entries: BTreeMap<VertexSet, usize>,
}

impl DegreeProfile {
    pub fn get(&self, subset: VertexSet) -> usize {
        self.entries.get(&subset).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.entries.values().sum()
    }
}

pub fn degree_profile(h: &Hypergraph, k: usize, budget: u128) -> Result<DegreeProfile> {
    if k == 0 || k > h.n() as usize {
        return Err(Error::BadSubsetSize { k, n: h.n() });
    }
    let subsets = binomial(h.n() as u64, k as u64).unwrap_or(u128::MAX);
    if subsets > budget {
        return Err(Error::BudgetExceeded {
            what: "k-subsets in degree profile",
            needed: subsets,
            budget,
        });
    }
    let mut entries = BTreeMap::new();
    for e in h.edges() {
        for s in e.vertices().subsets().filter(|s| s.len() == k) {
            *entries.entry(s).or_insert(0) += 1;
        }
    }
    let profile = DegreeProfile { k, entries };
    if let Some(r) = h.uniformity() {
        if k <= r {
            debug_assert_eq!(
                profile.total() as u128,
                binomial(r as u64, k as u64).unwrap() * h.edge_count() as u128
            );
        }
    }
    Ok(profile)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Width {
    /// `C(M, ⌊M/2⌋)`.
    pub value: BigUint,
    /// `M = C(n, r)`, the number of possible hyperedges.
    pub universe: u128,
    /// Odd `r`: the incomparability of equal-size families is conjectured, not
    /// established, so the value is only a conjectured width.
    pub conjectural: bool,
}

/// Maximum number of mutually LOCC incomparable `r`-uniform ensembles on `n`
/// parties: the middle binomial `C(M, ⌊M/2⌋)` with `M = C(n, r)`.
pub fn sperner_width(n: u32, r: u32) -> Result<Width> {
    if r < 2 || r > n {
        return Err(Error::BadUniformity { n, r });
    }
    let universe = binomial(n as u64, r as u64).unwrap_or(u128::MAX);
    if universe > MAX_WIDTH_UNIVERSE {
        return Err(Error::BudgetExceeded {
            what: "hyperedge universe C(n, r) for width evaluation",
            needed: universe,
            budget: MAX_WIDTH_UNIVERSE,
        });
    }
    let m = universe as u64;
    Ok(Width {
        value: binomial_big(m, m / 2),
        universe,
        conjectural: r % 2 == 1,
    })
}

//! Connectedness of `FS(Lollipop_{n-k,k}, Y)` without building the FS graph.
//!
//! `FS(Lollipop_{n-k,k}, Y)` is connected exactly when every `k`-vertex
//! induced subgraph of `Y` is connected. When some `k`-subset `S` is not, `S`
//! splits into parts `A`, `B` with no `Y`-edge between them, and the
//! configurations are separated into two classes that no friendly swap can
//! cross:
//!
//! * *special*: walking the path positions `1, 2, ..., n-k+1` in order, an
//!   `A`-person is met before any `B`-person;
//! * *non-special*: everything else.
//!
//! [`build_certificate`] returns one configuration from each class and
//! [`check_no_crossing_edges`] confirms the separation exhaustively.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::fs::{unrank, Bijection, FsError, FsSpace, DEFAULT_COMPONENT_CAP};
use crate::graph::{k_subsets, make_complete, make_path, Graph, GraphError, VertexSet};

/// Largest order accepted by [`verify_lemma_any`].
pub const LEMMA_MAX_ORDER: usize = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TheoryError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Fs(#[from] FsError),
    #[error("k = {k} out of range for order {n} (need 2 <= k <= n)")]
    InvalidK { k: usize, n: usize },
    #[error("invalid disconnection witness: {0}")]
    InvalidWitness(String),
    #[error("corollary hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("order {n} exceeds the limit {limit} for this check")]
    OrderTooLarge { n: usize, limit: usize },
}

fn check_k(y: &Graph, k: usize) -> Result<(), TheoryError> {
    let n = y.order();
    if k < 2 || k > n {
        Err(TheoryError::InvalidK { k, n })
    } else {
        Ok(())
    }
}

/// A `k`-subset of `V(Y)` split into non-empty parts with no edges between them.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DisconnectionWitness {
    pub n: usize,
    pub k: usize,
    pub subset: VertexSet,
    pub part_a: VertexSet,
    pub part_b: VertexSet,
}

impl DisconnectionWitness {
    /// Split `subset` into the component of its smallest vertex and the rest.
    /// Returns `None` when `Y|_subset` is connected.
    pub fn from_subset(y: &Graph, subset: VertexSet) -> Option<Self> {
        let start = subset.smallest()?;
        let part_a = y.component_within(start, subset);
        (part_a != subset).then(|| DisconnectionWitness {
            n: y.order(),
            k: subset.len(),
            subset,
            part_a,
            part_b: subset.difference(part_a),
        })
    }

    pub fn validate(&self, y: &Graph) -> Result<(), TheoryError> {
        let bad = |m: String| Err(TheoryError::InvalidWitness(m));
        if self.n != y.order() {
            return bad(format!("witness order {} but Y has order {}", self.n, y.order()));
        }
        if self.k < 2 || self.k > self.n || self.subset.len() != self.k {
            return bad(format!("subset {:?} does not have size k = {}", self.subset, self.k));
        }
        if !self.subset.is_subset(y.vertices()) {
            return bad(format!("subset {:?} not within V(Y)", self.subset));
        }
        if self.part_a.is_empty() || self.part_b.is_empty() {
            return bad("both parts must be non-empty".into());
        }
        if !self.part_a.is_disjoint(self.part_b) || self.part_a.union(self.part_b) != self.subset {
            return bad("parts must partition the subset".into());
        }
        for a in self.part_a.iter() {
            if !y.neighbors(a).is_disjoint(self.part_b) {
                return bad(format!("Y-edge joins part A vertex {a} to part B"));
            }
        }
        Ok(())
    }
}

/// One special and one non-special configuration for a witness.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificatePair {
    pub n: usize,
    pub k: usize,
    pub special: Bijection,
    pub nonspecial: Bijection,
    pub witness: DisconnectionWitness,
}

pub fn every_k_subset_connected(y: &Graph, k: usize) -> Result<bool, TheoryError> {
    Ok(find_disconnected_k_subset(y, k)?.is_none())
}

/// Whether `FS(Lollipop_{n-k,k}, Y)` is connected, decided from `Y` alone.
pub fn decide_lollipop_fs_connected(y: &Graph, k: usize) -> Result<bool, TheoryError> {
    every_k_subset_connected(y, k)
}

/// Colex-first disconnected `k`-subset, with `part_a` the component of its
/// smallest vertex.
pub fn find_disconnected_k_subset(y: &Graph, k: usize) -> Result<Option<DisconnectionWitness>, TheoryError> {
    check_k(y, k)?;
    Ok(k_subsets(y.order(), k).find_map(|s| DisconnectionWitness::from_subset(y, s)))
}

/// Every disconnected `k`-subset in colex order, each split as in
/// [`find_disconnected_k_subset`].
pub fn disconnected_k_subsets(y: &Graph, k: usize) -> Result<Vec<DisconnectionWitness>, TheoryError> {
    check_k(y, k)?;
    Ok(k_subsets(y.order(), k)
        .filter_map(|s| DisconnectionWitness::from_subset(y, s))
        .collect())
}

/// Core of [`is_special`] on a raw `position -> person` slice.
#[inline]
fn special_slice(perm: &[u8], path_len: usize, part_a: VertexSet, part_b: VertexSet) -> bool {
    for &person in &perm[..path_len] {
        if part_b.contains(person as usize) {
            return false;
        }
        if part_a.contains(person as usize) {
            return true;
        }
    }
    false
}

/// `s` is special iff some position `p` on the path part (`p <= n-k+1` in
/// 1-based labels) holds an `A`-person and no position `1..=p` holds a
/// `B`-person.
pub fn is_special(s: &Bijection, n: usize, k: usize, w: &DisconnectionWitness) -> Result<bool, TheoryError> {
    if k < 2 || k > n {
        return Err(TheoryError::InvalidK { k, n });
    }
    if s.len() != n {
        return Err(FsError::InvalidBijection(format!("length {} does not match order {n}", s.len())).into());
    }
    Ok(special_slice(s.as_slice(), n - k + 1, w.part_a, w.part_b))
}

fn place_first(n: usize, first: usize) -> Bijection {
    let map: Vec<usize> = std::iter::once(first).chain((0..n).filter(|&p| p != first)).collect();
    Bijection::new(map).expect("valid permutation")
}

/// Special: smallest `A`-person on position 1. Non-special: smallest
/// `B`-person on position 1. Everyone else fills the remaining positions in
/// ascending order.
pub fn build_certificate(y: &Graph, k: usize, w: &DisconnectionWitness) -> Result<CertificatePair, TheoryError> {
    check_k(y, k)?;
    w.validate(y)?;
    if w.k != k {
        return Err(TheoryError::InvalidWitness(format!("witness has k = {}, expected {k}", w.k)));
    }
    let n = y.order();
    let special = place_first(n, w.part_a.smallest().unwrap());
    let nonspecial = place_first(n, w.part_b.smallest().unwrap());
    debug_assert!(is_special(&special, n, k, w)?);
    debug_assert!(!is_special(&nonspecial, n, k, w)?);
    Ok(CertificatePair {
        n,
        k,
        special,
        nonspecial,
        witness: w.clone(),
    })
}

/// Exhaustive check that no FS-edge of `FS(X, Y)` joins a special and a
/// non-special configuration. `X` is normally `make_lollipop(n - k, k)`.
pub fn check_no_crossing_edges(x: &Graph, y: &Graph, w: &DisconnectionWitness) -> Result<bool, TheoryError> {
    let space = FsSpace::new(x, DEFAULT_COMPONENT_CAP)?;
    check_no_crossing_edges_in(&space, y, w)
}

/// [`check_no_crossing_edges`] over a prebuilt state space.
pub fn check_no_crossing_edges_in(space: &FsSpace, y: &Graph, w: &DisconnectionWitness) -> Result<bool, TheoryError> {
    w.validate(y)?;
    if space.order() != y.order() {
        return Err(FsError::OrderMismatch {
            x: space.order(),
            y: y.order(),
        }
        .into());
    }
    let path_len = w.n - w.k + 1;
    let special: Vec<bool> = (0..space.state_count())
        .map(|r| special_slice(space.perm(r), path_len, w.part_a, w.part_b))
        .collect();
    Ok((0..space.state_count()).all(|r| space.neighbors_of(y, r).all(|(_, nb)| special[nb] == special[r])))
}

/// The two forbidden induced five-vertex patterns at `δ(Y) = n - 4`, `k = 5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Pattern {
    /// Triangle plus a disjoint edge.
    K3P2,
    /// Path on three vertices plus a disjoint edge.
    P3P2,
}

impl Pattern {
    pub const ALL: [Pattern; 2] = [Pattern::K3P2, Pattern::P3P2];

    pub fn graph(self) -> Graph {
        let head = match self {
            Pattern::K3P2 => make_complete(3),
            Pattern::P3P2 => make_path(3),
        }
        .expect("order 3");
        head.disjoint_union(&make_path(2).expect("order 2")).expect("order 5")
    }
}

fn isomorphic_5(g: &Graph, pattern: &Graph, relabelings: &[Bijection]) -> bool {
    if g.edge_count() != pattern.edge_count() {
        return false;
    }
    relabelings.iter().any(|pi| {
        (0..5).all(|u| (u + 1..5).all(|v| pattern.adjacent(u, v) == g.adjacent(pi.person_at(u), pi.person_at(v))))
    })
}

/// Whether some 5-subset of `V(Y)` induces a copy of `pattern`.
pub fn has_induced_pattern(y: &Graph, pattern: Pattern) -> Result<bool, TheoryError> {
    if y.order() < 5 {
        return Err(TheoryError::HypothesisViolated(format!(
            "pattern search needs order >= 5, got {}",
            y.order()
        )));
    }
    let target = pattern.graph();
    let relabelings: Vec<Bijection> = (0..120).map(|r| unrank(r, 5).expect("rank < 5!")).collect();
    for s in k_subsets(y.order(), 5) {
        if isomorphic_5(&y.induced_subgraph(s)?, &target, &relabelings) {
            return Ok(true);
        }
    }
    Ok(false)
}

/// For `δ(Y) = n - 4`: `FS(Lollipop_{n-5,5}, Y)` is connected iff `Y` avoids
/// both induced patterns. Any other minimum degree is an error.
pub fn corollary_k5_predicate(y: &Graph) -> Result<bool, TheoryError> {
    let n = y.order();
    if n < 5 || y.min_degree() + 4 != n {
        return Err(TheoryError::HypothesisViolated(format!(
            "need n >= 5 and min degree n-4 = {}, got n = {n}, min degree {}",
            n as isize - 4,
            y.min_degree()
        )));
    }
    for p in Pattern::ALL {
        if has_induced_pattern(y, p)? {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `δ(Y) >= n - k + 1`, necessary for `FS(Lollipop_{n-k,k}, Y)` to be connected.
pub fn check_necessary_degree(y: &Graph, k: usize) -> Result<bool, TheoryError> {
    check_k(y, k)?;
    Ok(y.min_degree() + k > y.order())
}

/// Outcome of [`verify_lemma_any`].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "outcome", rename_all = "snake_case")]
pub enum LemmaOutcome {
    /// Every component sends every position to every person.
    Holds,
    /// Component of `sigma` never places person `y` on position `x`.
    Fails { sigma: Bijection, x: usize, y: usize },
    HypothesisNotMet { reason: String },
}

/// Checks, by full component scan, that whenever `X` and `Y` are connected,
/// `Δ(X) = k >= 2`, and every `k`-subset of `Y` induces a connected graph,
/// each configuration can reach one with any prescribed person on any
/// prescribed position.
pub fn verify_lemma_any(x: &Graph, y: &Graph) -> Result<LemmaOutcome, TheoryError> {
    let n = x.order();
    if n > LEMMA_MAX_ORDER {
        return Err(TheoryError::OrderTooLarge {
            n,
            limit: LEMMA_MAX_ORDER,
        });
    }
    let space = FsSpace::new(x, DEFAULT_COMPONENT_CAP)?;
    verify_lemma_any_in(&space, y)
}

/// Hypothesis check for [`verify_lemma_any`]; `None` when all hold.
pub fn lemma_hypothesis_failure(x: &Graph, y: &Graph) -> Option<String> {
    let k = x.max_degree();
    if x.order() != y.order() {
        Some(format!("orders differ: {} vs {}", x.order(), y.order()))
    } else if !x.is_connected() {
        Some("X is not connected".into())
    } else if !y.is_connected() {
        Some("Y is not connected".into())
    } else if k < 2 {
        Some(format!("max degree of X is {k}, need at least 2"))
    } else { k_subsets(y.order(), k).find_map(|s| DisconnectionWitness::from_subset(y, s)).map(|w| format!("Y has a disconnected {k}-subset {:?}", w.subset)) }
}

pub fn verify_lemma_any_in(space: &FsSpace, y: &Graph) -> Result<LemmaOutcome, TheoryError> {
    if let Some(reason) = lemma_hypothesis_failure(space.x(), y) {
        return Ok(LemmaOutcome::HypothesisNotMet { reason });
    }
    let n = space.order();
    let comps = space.components(y)?;
    // coverage[root * n + position] = people seen on that position in the class
    let mut coverage = vec![0u16; space.state_count() * n];
    for r in 0..space.state_count() {
        let root = comps.root(r);
        for (pos, &person) in space.perm(r).iter().enumerate() {
            coverage[root * n + pos] |= 1 << person;
        }
    }
    let everyone = VertexSet::full(n).bits();
    for root in comps.roots() {
        for pos in 0..n {
            let seen = coverage[root * n + pos];
            if seen != everyone {
                let missing = (!seen & everyone).trailing_zeros() as usize;
                return Ok(LemmaOutcome::Fails {
                    sigma: unrank(root as u64, n)?,
                    x: pos,
                    y: missing,
                });
            }
        }
    }
    Ok(LemmaOutcome::Holds)
}

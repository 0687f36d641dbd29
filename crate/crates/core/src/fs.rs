//! Explicit friends-and-strangers graphs.
//!
//! A configuration is a [`Bijection`] from positions `V(X)` to people `V(Y)`.
//! Two configurations are adjacent when they differ by swapping the people on
//! an `X`-edge `{a, b}` who are themselves adjacent in `Y`. The vertex set of
//! `FS(X, Y)` is indexed densely by Lehmer rank, which lets components live in
//! a flat union-find array.

use std::collections::VecDeque;
use std::sync::atomic::{AtomicU32, Ordering};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

/// Default largest order for which `FS(X, Y)` is built explicitly (9! states).
pub const DEFAULT_COMPONENT_CAP: usize = 9;
/// Hard ceiling for the component cap (10! states).
pub const MAX_COMPONENT_CAP: usize = 10;

/// Neighbour tables are kept only below this many entries; above it neighbour
/// ranks are recomputed on the fly.
const NEIGHBOR_TABLE_LIMIT: usize = 1 << 22;
/// State counts at or above this use the parallel sweep.
const PARALLEL_THRESHOLD: usize = 40_320;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FsError {
    #[error("order mismatch: X has {x} vertices, Y has {y}")]
    OrderMismatch { x: usize, y: usize },
    #[error("order {n} exceeds the component cap {cap}")]
    ExceedsCap { n: usize, cap: usize },
    #[error("component cap {0} exceeds the hard maximum {MAX_COMPONENT_CAP}")]
    CapTooLarge(usize),
    #[error("invalid bijection: {0}")]
    InvalidBijection(String),
    #[error("rank {rank} out of range for order {n}")]
    RankOutOfRange { rank: u64, n: usize },
    #[error("order {0} too large to count bijections in 64 bits")]
    CountOverflow(usize),
    #[error("invalid swap at step {step}: {reason}")]
    InvalidMove { step: usize, reason: String },
}

/// `n!` for `n <= 20`.
pub fn fs_vertex_count(n: usize) -> Result<u64, FsError> {
    if n > 20 {
        return Err(FsError::CountOverflow(n));
    }
    Ok((1..=n as u64).product())
}

/// `map[position] = person`.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
#[serde(try_from = "Vec<usize>", into = "Vec<usize>")]
pub struct Bijection(Vec<u8>);

impl Bijection {
    pub fn new(map: Vec<usize>) -> Result<Self, FsError> {
        let n = map.len();
        if n == 0 || n > 16 {
            return Err(FsError::InvalidBijection(format!("length {n} unsupported")));
        }
        let mut seen = 0u32;
        for &p in &map {
            if p >= n || seen >> p & 1 == 1 {
                return Err(FsError::InvalidBijection(format!(
                    "{map:?} is not a permutation of 0..{n}"
                )));
            }
            seen |= 1 << p;
        }
        Ok(Bijection(map.into_iter().map(|p| p as u8).collect()))
    }

    pub fn identity(n: usize) -> Self {
        Bijection((0..n as u8).collect())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Person standing on `position`.
    pub fn person_at(&self, position: usize) -> usize {
        self.0[position] as usize
    }

    pub fn position_of(&self, person: usize) -> usize {
        self.0.iter().position(|&p| p as usize == person).expect("person in range")
    }

    pub fn as_slice(&self) -> &[u8] {
        &self.0
    }

    pub fn to_vec(&self) -> Vec<usize> {
        self.0.iter().map(|&p| p as usize).collect()
    }

    pub fn inverse(&self) -> Bijection {
        let mut inv = vec![0u8; self.len()];
        for (pos, &person) in self.0.iter().enumerate() {
            inv[person as usize] = pos as u8;
        }
        Bijection(inv)
    }

    /// `self ∘ (a b)`: the people on positions `a` and `b` trade places.
    pub fn swapped(&self, a: usize, b: usize) -> Bijection {
        let mut out = self.clone();
        out.0.swap(a, b);
        out
    }
}

impl TryFrom<Vec<usize>> for Bijection {
    type Error = FsError;

    fn try_from(value: Vec<usize>) -> Result<Self, Self::Error> {
        Bijection::new(value)
    }
}

impl From<Bijection> for Vec<usize> {
    fn from(value: Bijection) -> Self {
        value.to_vec()
    }
}

/// One friendly swap across the `X`-edge `{a, b}`.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize, Deserialize)]
pub struct SwapMove {
    pub a: usize,
    pub b: usize,
    /// `(σ(a), σ(b))` before the swap.
    pub persons: (usize, usize),
}

static FACTORIALS: [u64; 21] = {
    let mut f = [1u64; 21];
    let mut i = 1;
    while i <= 20 {
        f[i] = f[i - 1] * i as u64;
        i += 1;
    }
    f
};

fn rank_slice(perm: &[u8]) -> u64 {
    let n = perm.len();
    let mut remaining: u32 = (1 << n) - 1;
    let mut rank = 0u64;
    for (i, &p) in perm.iter().enumerate() {
        let smaller = (remaining & ((1u32 << p) - 1)).count_ones() as u64;
        rank += smaller * FACTORIALS[n - 1 - i];
        remaining &= !(1 << p);
    }
    rank
}

fn unrank_into(mut rank: u64, out: &mut [u8]) {
    let n = out.len();
    let mut remaining: u32 = (1 << n) - 1;
    for (i, slot) in out.iter_mut().enumerate() {
        let f = FACTORIALS[n - 1 - i];
        let mut digit = rank / f;
        rank %= f;
        let mut bits = remaining;
        while digit > 0 {
            bits &= bits - 1;
            digit -= 1;
        }
        let v = bits.trailing_zeros();
        *slot = v as u8;
        remaining &= !(1 << v);
    }
}

/// Lehmer rank in `[0, n!)`; the identity ranks 0, the reversal `n! - 1`.
pub fn rank(b: &Bijection) -> u64 {
    rank_slice(&b.0)
}

pub fn unrank(index: u64, n: usize) -> Result<Bijection, FsError> {
    let count = fs_vertex_count(n)?;
    if n == 0 || index >= count {
        return Err(FsError::RankOutOfRange { rank: index, n });
    }
    let mut out = vec![0u8; n];
    unrank_into(index, &mut out);
    Ok(Bijection(out))
}

fn check_orders(x: &Graph, y: &Graph) -> Result<usize, FsError> {
    if x.order() != y.order() {
        return Err(FsError::OrderMismatch {
            x: x.order(),
            y: y.order(),
        });
    }
    Ok(x.order())
}

fn check_cap(n: usize, cap: usize) -> Result<(), FsError> {
    if cap > MAX_COMPONENT_CAP {
        return Err(FsError::CapTooLarge(cap));
    }
    if n > cap {
        return Err(FsError::ExceedsCap { n, cap });
    }
    Ok(())
}

fn check_bijection(b: &Bijection, n: usize) -> Result<(), FsError> {
    if b.len() != n {
        return Err(FsError::InvalidBijection(format!(
            "length {} does not match order {n}",
            b.len()
        )));
    }
    Ok(())
}

/// All FS-neighbours of `s`, in ascending order of the `X`-edge swapped.
pub fn fs_neighbors(x: &Graph, y: &Graph, s: &Bijection) -> Result<Vec<(SwapMove, Bijection)>, FsError> {
    let n = check_orders(x, y)?;
    check_bijection(s, n)?;
    Ok(x.edges()
        .into_iter()
        .filter(|&(a, b)| y.adjacent(s.person_at(a), s.person_at(b)))
        .map(|(a, b)| {
            let mv = SwapMove {
                a,
                b,
                persons: (s.person_at(a), s.person_at(b)),
            };
            (mv, s.swapped(a, b))
        })
        .collect())
}

/// Replay `moves` from `src`, checking each against the FS adjacency rule.
pub fn apply_moves(x: &Graph, y: &Graph, src: &Bijection, moves: &[SwapMove]) -> Result<Bijection, FsError> {
    let n = check_orders(x, y)?;
    check_bijection(src, n)?;
    let mut cur = src.clone();
    for (step, mv) in moves.iter().enumerate() {
        let bad = |reason: String| FsError::InvalidMove { step, reason };
        if mv.a >= n || mv.b >= n {
            return Err(bad(format!("position out of range in {mv:?}")));
        }
        if !x.adjacent(mv.a, mv.b) {
            return Err(bad(format!("positions {} and {} not adjacent in X", mv.a, mv.b)));
        }
        let (pa, pb) = (cur.person_at(mv.a), cur.person_at(mv.b));
        if (pa, pb) != mv.persons {
            return Err(bad(format!("recorded persons {:?}, found ({pa}, {pb})", mv.persons)));
        }
        if !y.adjacent(pa, pb) {
            return Err(bad(format!("persons {pa} and {pb} not adjacent in Y")));
        }
        cur = cur.swapped(mv.a, mv.b);
    }
    Ok(cur)
}

/// Sequential union-find with path halving and union by size.
#[derive(Debug, Clone)]
struct UnionFind {
    parent: Vec<u32>,
    size: Vec<u32>,
}

impl UnionFind {
    fn new(len: usize) -> Self {
        UnionFind {
            parent: (0..len as u32).collect(),
            size: vec![1; len],
        }
    }

    fn find(&mut self, mut x: u32) -> u32 {
        while self.parent[x as usize] != x {
            let grand = self.parent[self.parent[x as usize] as usize];
            self.parent[x as usize] = grand;
            x = grand;
        }
        x
    }

    fn union(&mut self, a: u32, b: u32) {
        let (mut ra, mut rb) = (self.find(a), self.find(b));
        if ra == rb {
            return;
        }
        if self.size[ra as usize] < self.size[rb as usize] {
            std::mem::swap(&mut ra, &mut rb);
        }
        self.parent[rb as usize] = ra;
        self.size[ra as usize] += self.size[rb as usize];
    }
}

/// Lock-free union-find used by the parallel sweep. Roots are always linked
/// from the larger index to the smaller, so concurrent unions commute.
struct AtomicUnionFind {
    parent: Vec<AtomicU32>,
}

impl AtomicUnionFind {
    fn new(len: usize) -> Self {
        AtomicUnionFind {
            parent: (0..len as u32).map(AtomicU32::new).collect(),
        }
    }

    fn find(&self, mut x: u32) -> u32 {
        loop {
            let p = self.parent[x as usize].load(Ordering::Acquire);
            if p == x {
                return x;
            }
            let gp = self.parent[p as usize].load(Ordering::Acquire);
            if gp != p {
                let _ = self.parent[x as usize].compare_exchange_weak(p, gp, Ordering::AcqRel, Ordering::Relaxed);
            }
            x = gp;
        }
    }

    fn union(&self, a: u32, b: u32) {
        let (mut a, mut b) = (a, b);
        loop {
            a = self.find(a);
            b = self.find(b);
            if a == b {
                return;
            }
            let (hi, lo) = if a > b { (a, b) } else { (b, a) };
            if self.parent[hi as usize]
                .compare_exchange(hi, lo, Ordering::AcqRel, Ordering::Acquire)
                .is_ok()
            {
                return;
            }
        }
    }

    fn into_parents(self) -> Vec<u32> {
        self.parent.into_iter().map(AtomicU32::into_inner).collect()
    }
}

/// Connected components of `FS(X, Y)` indexed by Lehmer rank. Each class is
/// labelled by its smallest rank, so the result does not depend on how the
/// sweep was scheduled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FsComponents {
    n: usize,
    root: Vec<u32>,
    component_count: usize,
}

impl FsComponents {
    fn from_parents(n: usize, mut parent: Vec<u32>) -> Self {
        // After this pass root[i] is the canonical (smallest) member; the
        // smallest member of a class is visited first, so it labels itself.
        let len = parent.len();
        let mut label = vec![u32::MAX; len];
        let mut component_count = 0;
        for i in 0..len {
            let mut r = i as u32;
            while parent[r as usize] != r {
                r = parent[r as usize];
            }
            let mut c = i as u32;
            while parent[c as usize] != r {
                let next = parent[c as usize];
                parent[c as usize] = r;
                c = next;
            }
            if label[r as usize] == u32::MAX {
                label[r as usize] = i as u32;
                component_count += 1;
            }
            label[i] = label[r as usize];
        }
        FsComponents {
            n,
            root: label,
            component_count,
        }
    }

    pub fn order(&self) -> usize {
        self.n
    }

    /// Number of FS vertices (`n!`).
    pub fn len(&self) -> usize {
        self.root.len()
    }

    pub fn is_empty(&self) -> bool {
        self.root.is_empty()
    }

    pub fn component_count(&self) -> usize {
        self.component_count
    }

    pub fn is_connected(&self) -> bool {
        self.component_count == 1
    }

    /// Canonical root (smallest rank in the class) of `index`.
    pub fn root(&self, index: usize) -> usize {
        self.root[index] as usize
    }

    pub fn root_of(&self, b: &Bijection) -> usize {
        self.root(rank(b) as usize)
    }

    pub fn same_component(&self, i: usize, j: usize) -> bool {
        self.root[i] == self.root[j]
    }

    /// Canonical roots in ascending order.
    pub fn roots(&self) -> Vec<usize> {
        (0..self.len()).filter(|&i| self.root(i) == i).collect()
    }

    pub fn members(&self, root: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.len()).filter(move |&i| self.root(i) == root)
    }

    /// Component sizes keyed by canonical root, ascending by root.
    pub fn component_sizes(&self) -> Vec<(usize, usize)> {
        let mut sizes = vec![0usize; self.len()];
        for &r in &self.root {
            sizes[r as usize] += 1;
        }
        sizes
            .into_iter()
            .enumerate()
            .filter(|&(_, s)| s > 0)
            .collect()
    }
}

/// Precomputed state space for a fixed position graph `X`: every bijection of
/// order `n` unranked once, plus (when small enough) the rank reached by each
/// `X`-edge swap. Reused across many `Y` by the campaigns.
#[derive(Debug, Clone)]
pub struct FsSpace {
    x: Graph,
    n: usize,
    count: usize,
    perms: Vec<u8>,
    edges: Vec<(usize, usize)>,
    /// Edge-major: `neighbor[e * count + r]`.
    neighbor: Option<Vec<u32>>,
}

impl FsSpace {
    pub fn new(x: &Graph, cap: usize) -> Result<Self, FsError> {
        let n = x.order();
        check_cap(n, cap)?;
        let count = fs_vertex_count(n)? as usize;
        let mut perms = vec![0u8; count * n];
        perms
            .par_chunks_mut(n)
            .enumerate()
            .for_each(|(r, slot)| unrank_into(r as u64, slot));
        let edges = x.edges();
        let neighbor = (count * edges.len() <= NEIGHBOR_TABLE_LIMIT).then(|| {
            let mut table = vec![0u32; count * edges.len()];
            for (e, &(a, b)) in edges.iter().enumerate() {
                table[e * count..(e + 1) * count]
                    .par_iter_mut()
                    .enumerate()
                    .for_each(|(r, slot)| {
                        let mut p = [0u8; 16];
                        p[..n].copy_from_slice(&perms[r * n..(r + 1) * n]);
                        p.swap(a, b);
                        *slot = rank_slice(&p[..n]) as u32;
                    });
            }
            table
        });
        Ok(FsSpace {
            x: *x,
            n,
            count,
            perms,
            edges,
            neighbor,
        })
    }

    pub fn x(&self) -> &Graph {
        &self.x
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn state_count(&self) -> usize {
        self.count
    }

    /// Sorted `X`-edges; the order in which neighbours are generated.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    #[inline]
    pub fn perm(&self, r: usize) -> &[u8] {
        &self.perms[r * self.n..(r + 1) * self.n]
    }

    #[inline]
    fn neighbor_rank(&self, e: usize, r: usize) -> usize {
        match &self.neighbor {
            Some(table) => table[e * self.count + r] as usize,
            None => {
                let (a, b) = self.edges[e];
                let mut p = [0u8; 16];
                p[..self.n].copy_from_slice(self.perm(r));
                p.swap(a, b);
                rank_slice(&p[..self.n]) as usize
            }
        }
    }

    /// FS-neighbours of rank `r` as `(edge index, rank)`, ascending edge order.
    pub fn neighbors_of(&self, y: &Graph, r: usize) -> impl Iterator<Item = (usize, usize)> + '_ {
        let p = self.perm(r);
        let y = *y;
        self.edges
            .iter()
            .enumerate()
            .filter(move |&(_, &(a, b))| y.adjacent(p[a] as usize, p[b] as usize))
            .map(move |(e, _)| (e, self.neighbor_rank(e, r)))
    }

    pub fn components(&self, y: &Graph) -> Result<FsComponents, FsError> {
        check_orders(&self.x, y)?;
        if self.count >= PARALLEL_THRESHOLD && rayon::current_num_threads() > 1 {
            Ok(self.components_parallel(y))
        } else {
            Ok(self.components_sequential(y))
        }
    }

    pub fn components_sequential(&self, y: &Graph) -> FsComponents {
        let mut uf = UnionFind::new(self.count);
        for r in 0..self.count {
            for (_, nb) in self.neighbors_of(y, r) {
                if nb > r {
                    uf.union(r as u32, nb as u32);
                }
            }
        }
        FsComponents::from_parents(self.n, uf.parent)
    }

    pub fn components_parallel(&self, y: &Graph) -> FsComponents {
        let uf = AtomicUnionFind::new(self.count);
        let block = (self.count / (4 * rayon::current_num_threads())).max(1024);
        (0..self.count).into_par_iter().with_min_len(block).for_each(|r| {
            for (_, nb) in self.neighbors_of(y, r) {
                if nb > r {
                    uf.union(r as u32, nb as u32);
                }
            }
        });
        FsComponents::from_parents(self.n, uf.into_parents())
    }

    /// Shortest swap sequence from `src` to `dst`, or `None` if unreachable.
    pub fn reach(&self, y: &Graph, src: &Bijection, dst: &Bijection) -> Result<Option<Vec<SwapMove>>, FsError> {
        check_orders(&self.x, y)?;
        check_bijection(src, self.n)?;
        check_bijection(dst, self.n)?;
        let (start, goal) = (rank(src) as usize, rank(dst) as usize);
        if start == goal {
            return Ok(Some(Vec::new()));
        }
        const UNSEEN: u32 = u32::MAX;
        let mut pred = vec![UNSEEN; self.count];
        let mut via = vec![0u8; self.count];
        pred[start] = start as u32;
        let mut queue = VecDeque::from([start]);
        while let Some(r) = queue.pop_front() {
            for (e, nb) in self.neighbors_of(y, r) {
                if pred[nb] != UNSEEN {
                    continue;
                }
                pred[nb] = r as u32;
                via[nb] = e as u8;
                if nb == goal {
                    return Ok(Some(self.trace(start, goal, &pred, &via)));
                }
                queue.push_back(nb);
            }
        }
        Ok(None)
    }

    fn trace(&self, start: usize, goal: usize, pred: &[u32], via: &[u8]) -> Vec<SwapMove> {
        let mut moves = Vec::new();
        let mut cur = goal;
        while cur != start {
            let prev = pred[cur] as usize;
            let (a, b) = self.edges[via[cur] as usize];
            let p = self.perm(prev);
            moves.push(SwapMove {
                a,
                b,
                persons: (p[a] as usize, p[b] as usize),
            });
            cur = prev;
        }
        moves.reverse();
        moves
    }
}

pub fn fs_components(x: &Graph, y: &Graph) -> Result<FsComponents, FsError> {
    fs_components_capped(x, y, DEFAULT_COMPONENT_CAP)
}

pub fn fs_components_capped(x: &Graph, y: &Graph, cap: usize) -> Result<FsComponents, FsError> {
    check_orders(x, y)?;
    FsSpace::new(x, cap)?.components(y)
}

pub fn fs_is_connected(x: &Graph, y: &Graph) -> Result<bool, FsError> {
    Ok(fs_components(x, y)?.is_connected())
}

/// BFS shortest path in `FS(X, Y)`; neighbours explored in ascending
/// `X`-edge order so the returned path is reproducible.
pub fn fs_reach(x: &Graph, y: &Graph, src: &Bijection, dst: &Bijection) -> Result<Option<Vec<SwapMove>>, FsError> {
    fs_reach_capped(x, y, src, dst, DEFAULT_COMPONENT_CAP)
}

pub fn fs_reach_capped(
    x: &Graph,
    y: &Graph,
    src: &Bijection,
    dst: &Bijection,
    cap: usize,
) -> Result<Option<Vec<SwapMove>>, FsError> {
    let n = check_orders(x, y)?;
    check_bijection(src, n)?;
    check_bijection(dst, n)?;
    FsSpace::new(x, cap)?.reach(y, src, dst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{make_complete, make_cycle, make_path, make_star};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn lehmer_extremes() {
        assert_eq!(rank(&Bijection::identity(4)), 0);
        let rev = Bijection::new(vec![3, 2, 1, 0]).unwrap();
        assert_eq!(rank(&rev), 23);
        assert_eq!(unrank(23, 4).unwrap(), rev);
        assert!(unrank(24, 4).is_err());
    }

    #[test]
    fn lehmer_round_trip_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..1000 {
            let mut map: Vec<usize> = (0..8).collect();
            for i in (1..8).rev() {
                map.swap(i, rng.gen_range(0..=i));
            }
            let b = Bijection::new(map).unwrap();
            assert_eq!(unrank(rank(&b), 8).unwrap(), b);
        }
    }

    #[test]
    fn rank_is_lexicographic() {
        let all: Vec<Bijection> = (0..120).map(|r| unrank(r, 5).unwrap()).collect();
        assert!(all.windows(2).all(|w| w[0] < w[1]));
    }

    #[test]
    fn vertex_counts() {
        assert_eq!(fs_vertex_count(1).unwrap(), 1);
        assert_eq!(fs_vertex_count(5).unwrap(), 120);
        assert_eq!(fs_vertex_count(9).unwrap(), 362_880);
        assert!(fs_vertex_count(21).is_err());
    }

    #[test]
    fn bijection_validation() {
        assert!(Bijection::new(vec![0, 0, 1]).is_err());
        assert!(Bijection::new(vec![0, 3, 1]).is_err());
        assert!(Bijection::new(vec![]).is_err());
        let b = Bijection::new(vec![2, 0, 1]).unwrap();
        assert_eq!(b.inverse().to_vec(), vec![1, 2, 0]);
        assert_eq!(b.position_of(2), 0);
        let json = serde_json::to_string(&b).unwrap();
        assert_eq!(json, "[2,0,1]");
        assert!(serde_json::from_str::<Bijection>("[1,1,0]").is_err());
    }

    #[test]
    fn neighbors_single_edge() {
        let x = make_path(2).unwrap();
        let y = make_complete(2).unwrap();
        let nbrs = fs_neighbors(&x, &y, &Bijection::identity(2)).unwrap();
        assert_eq!(nbrs.len(), 1);
        assert_eq!(nbrs[0].1.to_vec(), vec![1, 0]);
        assert_eq!(nbrs[0].0, SwapMove { a: 0, b: 1, persons: (0, 1) });
    }

    #[test]
    fn neighbors_complete_y() {
        let x = make_cycle(5).unwrap();
        let y = make_complete(5).unwrap();
        for r in 0..120 {
            let s = unrank(r, 5).unwrap();
            assert_eq!(fs_neighbors(&x, &y, &s).unwrap().len(), x.edge_count());
        }
    }

    #[test]
    fn neighbors_match_transposition_filter() {
        let x = make_path(3).unwrap();
        let y = make_path(3).unwrap();
        for r in 0..6 {
            let s = unrank(r, 3).unwrap();
            let mut expected = Vec::new();
            for a in 0..3 {
                for b in a + 1..3 {
                    if x.adjacent(a, b) && y.adjacent(s.person_at(a), s.person_at(b)) {
                        expected.push(s.swapped(a, b));
                    }
                }
            }
            let got: Vec<Bijection> = fs_neighbors(&x, &y, &s).unwrap().into_iter().map(|(_, b)| b).collect();
            assert_eq!(got, expected);
        }
        assert!(fs_neighbors(&x, &make_path(4).unwrap(), &Bijection::identity(3)).is_err());
    }

    #[test]
    fn classic_connectivity() {
        let p4 = make_path(4).unwrap();
        let k4 = make_complete(4).unwrap();
        assert_eq!(fs_components(&p4, &k4).unwrap().component_count(), 1);
        assert_eq!(fs_components(&k4, &p4).unwrap().component_count(), 1);
        assert!(!fs_is_connected(&p4, &p4).unwrap());
        assert!(fs_is_connected(&k4, &make_cycle(4).unwrap()).unwrap());
    }

    #[test]
    fn path3_path3_components() {
        // Person 1 is friends with both others and can walk anywhere; persons
        // 0 and 2 never swap, so their relative order splits the 6 states 3/3.
        let p3 = make_path(3).unwrap();
        let comps = fs_components(&p3, &p3).unwrap();
        assert_eq!(comps.component_count(), 2);
        assert!(comps.component_sizes().iter().all(|&(_, s)| s == 3));
    }

    #[test]
    fn cap_is_enforced() {
        let x = make_path(10).unwrap();
        assert_eq!(
            fs_components(&x, &x).unwrap_err(),
            FsError::ExceedsCap { n: 10, cap: 9 }
        );
        assert_eq!(fs_components_capped(&x, &x, 11).unwrap_err(), FsError::CapTooLarge(11));
    }

    #[test]
    fn reach_basics() {
        let x = make_path(2).unwrap();
        let y = make_complete(2).unwrap();
        let id = Bijection::identity(2);
        assert_eq!(fs_reach(&x, &y, &id, &id).unwrap(), Some(vec![]));
        let sw = Bijection::new(vec![1, 0]).unwrap();
        let path = fs_reach(&x, &y, &id, &sw).unwrap().unwrap();
        assert_eq!(path.len(), 1);
        assert_eq!(apply_moves(&x, &y, &id, &path).unwrap(), sw);
    }

    #[test]
    fn reach_agrees_with_components() {
        let p3 = make_path(3).unwrap();
        let comps = fs_components(&p3, &p3).unwrap();
        let id = Bijection::identity(3);
        let rev = Bijection::new(vec![2, 1, 0]).unwrap();
        let got = fs_reach(&p3, &p3, &id, &rev).unwrap();
        assert_eq!(got.is_some(), comps.root_of(&id) == comps.root_of(&rev));
        for r in 0..6 {
            let dst = unrank(r, 3).unwrap();
            let got = fs_reach(&p3, &p3, &id, &dst).unwrap();
            assert_eq!(got.is_some(), comps.same_component(0, r as usize));
            if let Some(moves) = got {
                assert_eq!(apply_moves(&p3, &p3, &id, &moves).unwrap(), dst);
            }
        }
    }

    #[test]
    fn reach_is_shortest_on_star() {
        // FS(K4, Star4) is connected; BFS distance from identity to any state
        // is at most the BFS eccentricity, and every replay must land on dst.
        let x = make_complete(4).unwrap();
        let y = make_star(4).unwrap();
        let id = Bijection::identity(4);
        for r in 0..24 {
            let dst = unrank(r, 4).unwrap();
            let moves = fs_reach(&x, &y, &id, &dst).unwrap().unwrap();
            assert_eq!(apply_moves(&x, &y, &id, &moves).unwrap(), dst);
        }
    }

    #[test]
    fn apply_moves_rejects_bad_steps() {
        let x = make_path(3).unwrap();
        let y = make_path(3).unwrap();
        let id = Bijection::identity(3);
        let not_x_edge = SwapMove { a: 0, b: 2, persons: (0, 2) };
        assert!(matches!(apply_moves(&x, &y, &id, &[not_x_edge]), Err(FsError::InvalidMove { step: 0, .. })));
        let wrong_persons = SwapMove { a: 0, b: 1, persons: (1, 0) };
        assert!(apply_moves(&x, &y, &id, &[wrong_persons]).is_err());
    }

    #[test]
    fn parallel_matches_sequential() {
        let x = make_path(8).unwrap();
        let y = make_cycle(8).unwrap().complement();
        let space = FsSpace::new(&x, 9).unwrap();
        let pool = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let par = pool.install(|| space.components_parallel(&y));
        assert_eq!(par, space.components_sequential(&y));
    }

    #[test]
    fn on_the_fly_neighbors_match_table() {
        let x = make_complete(7).unwrap();
        let y = make_star(7).unwrap();
        let mut space = FsSpace::new(&x, 9).unwrap();
        assert!(space.neighbor.is_some());
        let with_table = space.components_sequential(&y);
        space.neighbor = None;
        assert_eq!(space.components_sequential(&y), with_table);
    }
}

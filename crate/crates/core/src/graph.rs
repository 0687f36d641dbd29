//! Small simple graphs stored as per-vertex neighbour bitsets.
//!
//! Vertices are labelled `0..order`. Where the lollipop literature numbers
//! positions `1..=n`, position `p` is stored as vertex `p - 1`; this offset is
//! applied in the family constructors and nowhere else.

use std::fmt;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported order. Theory predicates are instant at this size; the
/// explicit friends-and-strangers oracle has its own, smaller cap.
pub const MAX_ORDER: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph order must be at least 1")]
    ZeroOrder,
    #[error("graph order {0} exceeds the supported maximum of {MAX_ORDER}")]
    OrderTooLarge(usize),
    #[error("vertex {vertex} out of range for order {order}")]
    VertexOutOfRange { vertex: usize, order: usize },
    #[error("self-loop on vertex {0}")]
    SelfLoop(usize),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("vertex subset must be non-empty")]
    EmptySubset,
    #[error("removal level {level} invalid for order {order} (need 1 <= level <= order)")]
    InvalidLevel { level: usize, order: usize },
    #[error("graph6 parse error at byte {offset}: {reason}")]
    Graph6 { offset: usize, reason: String },
}

/// A subset of `{0, .., MAX_ORDER-1}`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct VertexSet(u16);

impl VertexSet {
    pub const EMPTY: VertexSet = VertexSet(0);

    pub fn from_bits(bits: u16) -> Self {
        VertexSet(bits)
    }

    /// `{0, .., n-1}`.
    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_ORDER);
        VertexSet(((1u32 << n) - 1) as u16)
    }

    pub fn singleton(v: usize) -> Self {
        VertexSet(1 << v)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, v: usize) -> bool {
        v < 16 && self.0 & (1 << v) != 0
    }

    pub fn insert(&mut self, v: usize) {
        self.0 |= 1 << v;
    }

    pub fn remove(&mut self, v: usize) {
        self.0 &= !(1 << v);
    }

    pub fn smallest(self) -> Option<usize> {
        (self.0 != 0).then(|| self.0.trailing_zeros() as usize)
    }

    pub fn union(self, other: Self) -> Self {
        VertexSet(self.0 | other.0)
    }

    pub fn intersection(self, other: Self) -> Self {
        VertexSet(self.0 & other.0)
    }

    pub fn difference(self, other: Self) -> Self {
        VertexSet(self.0 & !other.0)
    }

    pub fn is_disjoint(self, other: Self) -> bool {
        self.0 & other.0 == 0
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    /// Members in ascending order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let v = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(v)
            }
        })
    }

    pub fn to_vec(self) -> Vec<usize> {
        self.iter().collect()
    }
}

impl FromIterator<usize> for VertexSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        let mut set = VertexSet::EMPTY;
        for v in iter {
            set.insert(v);
        }
        set
    }
}

/// Serialised as the ascending list of members.
impl Serialize for VertexSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.iter())
    }
}

impl<'de> Deserialize<'de> for VertexSet {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let members = Vec::<usize>::deserialize(deserializer)?;
        if let Some(&v) = members.iter().find(|&&v| v >= MAX_ORDER) {
            return Err(serde::de::Error::custom(format!("vertex {v} out of range")));
        }
        Ok(members.into_iter().collect())
    }
}

impl fmt::Debug for VertexSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// All `k`-subsets of `{0, .., n-1}` in colex order (ascending bitmask).
pub fn k_subsets(n: usize, k: usize) -> impl Iterator<Item = VertexSet> {
    assert!(n <= MAX_ORDER && k <= n);
    let limit: u32 = 1 << n;
    let mut next: Option<u32> = Some((1u32 << k) - 1);
    std::iter::from_fn(move || {
        let cur = next?;
        if cur >= limit {
            next = None;
            return None;
        }
        next = if cur == 0 {
            None
        } else {
            // Gosper's hack: next integer with the same popcount.
            let c = cur & cur.wrapping_neg();
            let r = cur + c;
            Some((((r ^ cur) >> 2) / c) | r)
        };
        Some(VertexSet(cur as u16))
    })
}

/// Simple undirected graph of order `1..=MAX_ORDER`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Graph {
    order: u8,
    adj: [u16; MAX_ORDER],
}

fn check_order(n: usize) -> Result<(), GraphError> {
    if n == 0 {
        Err(GraphError::ZeroOrder)
    } else if n > MAX_ORDER {
        Err(GraphError::OrderTooLarge(n))
    } else {
        Ok(())
    }
}

/// Position of edge `{i, j}` (`i < j`) in the graph6 upper-triangle order.
pub fn edge_index(i: usize, j: usize) -> usize {
    debug_assert!(i < j);
    j * (j - 1) / 2 + i
}

impl Graph {
    /// Edgeless graph on `n` vertices.
    pub fn empty(n: usize) -> Result<Self, GraphError> {
        check_order(n)?;
        Ok(Graph {
            order: n as u8,
            adj: [0; MAX_ORDER],
        })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for &(u, v) in edges {
            g.add_edge(u, v)?;
        }
        Ok(g)
    }

    /// Build from a bitmask over the `C(n,2)` vertex pairs, bit `edge_index(i, j)`
    /// set iff `{i, j}` is an edge.
    pub fn from_edge_mask(n: usize, mask: u128) -> Result<Self, GraphError> {
        let mut g = Graph::empty(n)?;
        for j in 1..n {
            for i in 0..j {
                if mask >> edge_index(i, j) & 1 == 1 {
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            }
        }
        Ok(g)
    }

    pub fn edge_mask(&self) -> u128 {
        let mut mask = 0u128;
        for (i, j) in self.edges() {
            mask |= 1 << edge_index(i, j);
        }
        mask
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<(), GraphError> {
        let n = self.order();
        for w in [u, v] {
            if w >= n {
                return Err(GraphError::VertexOutOfRange { vertex: w, order: n });
            }
        }
        if u == v {
            return Err(GraphError::SelfLoop(u));
        }
        self.adj[u] |= 1 << v;
        self.adj[v] |= 1 << u;
        Ok(())
    }

    pub fn order(&self) -> usize {
        self.order as usize
    }

    pub fn vertices(&self) -> VertexSet {
        VertexSet::full(self.order())
    }

    #[inline]
    pub fn adjacent(&self, u: usize, v: usize) -> bool {
        self.adj[u] >> v & 1 == 1
    }

    #[inline]
    pub fn neighbors(&self, v: usize) -> VertexSet {
        VertexSet(self.adj[v])
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].count_ones() as usize
    }

    pub fn degrees(&self) -> Vec<usize> {
        (0..self.order()).map(|v| self.degree(v)).collect()
    }

    pub fn min_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).min().unwrap_or(0)
    }

    pub fn max_degree(&self) -> usize {
        (0..self.order()).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn edge_count(&self) -> usize {
        self.adj[..self.order()]
            .iter()
            .map(|a| a.count_ones() as usize)
            .sum::<usize>()
            / 2
    }

    /// Edges `(a, b)` with `a < b`, sorted lexicographically.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for a in 0..self.order() {
            for b in VertexSet(self.adj[a]).iter().filter(|&b| b > a) {
                out.push((a, b));
            }
        }
        out
    }

    pub fn is_complete(&self) -> bool {
        let n = self.order();
        self.edge_count() == n * (n - 1) / 2
    }

    pub fn complement(&self) -> Graph {
        let full = VertexSet::full(self.order()).bits();
        let mut g = *self;
        for v in 0..self.order() {
            g.adj[v] = !self.adj[v] & full & !(1 << v);
        }
        g
    }

    /// `self ∪ other` with `other`'s vertices shifted up by `self.order()`.
    pub fn disjoint_union(&self, other: &Graph) -> Result<Graph, GraphError> {
        let shift = self.order();
        let mut g = Graph::empty(shift + other.order())?;
        g.adj[..shift].copy_from_slice(&self.adj[..shift]);
        for v in 0..other.order() {
            g.adj[shift + v] = other.adj[v] << shift;
        }
        Ok(g)
    }

    /// Whether every edge of `self` is an edge of `other` (same order required).
    pub fn is_edge_subgraph_of(&self, other: &Graph) -> bool {
        self.order == other.order
            && (0..self.order()).all(|v| self.adj[v] & !other.adj[v] == 0)
    }

    /// `G|_S`, relabelled to `0..|S|` preserving the order of `S`.
    pub fn induced_subgraph(&self, subset: VertexSet) -> Result<Graph, GraphError> {
        if subset.is_empty() {
            return Err(GraphError::EmptySubset);
        }
        if !subset.is_subset(self.vertices()) {
            let vertex = subset.difference(self.vertices()).smallest().unwrap();
            return Err(GraphError::VertexOutOfRange {
                vertex,
                order: self.order(),
            });
        }
        let members = subset.to_vec();
        let mut g = Graph::empty(members.len())?;
        for (new_u, &u) in members.iter().enumerate() {
            let mut row = 0u16;
            for (new_v, &v) in members.iter().enumerate() {
                if self.adjacent(u, v) {
                    row |= 1 << new_v;
                }
            }
            g.adj[new_u] = row;
        }
        Ok(g)
    }

    /// Vertices reachable from `start` using only vertices of `within`.
    pub fn component_within(&self, start: usize, within: VertexSet) -> VertexSet {
        let mut seen = VertexSet::singleton(start).intersection(within);
        let mut frontier = seen;
        while !frontier.is_empty() {
            let mut next = 0u16;
            for v in frontier.iter() {
                next |= self.adj[v];
            }
            frontier = VertexSet(next).intersection(within).difference(seen);
            seen = seen.union(frontier);
        }
        seen
    }

    /// Whether `G|_S` is connected, without materialising the subgraph.
    /// The empty set counts as not connected.
    pub fn is_connected_within(&self, within: VertexSet) -> bool {
        match within.smallest() {
            None => false,
            Some(start) => self.component_within(start, within) == within,
        }
    }

    /// Single-vertex graphs are connected.
    pub fn is_connected(&self) -> bool {
        self.is_connected_within(self.vertices())
    }

    /// Connected components as vertex sets, ordered by smallest member.
    pub fn components(&self) -> Vec<VertexSet> {
        let mut rest = self.vertices();
        let mut out = Vec::new();
        while let Some(v) = rest.smallest() {
            let comp = self.component_within(v, rest);
            rest = rest.difference(comp);
            out.push(comp);
        }
        out
    }

    /// True iff deleting any `level - 1` vertices leaves a connected graph.
    pub fn is_l_removal_robust(&self, level: usize) -> Result<bool, GraphError> {
        let n = self.order();
        if level == 0 || level > n {
            return Err(GraphError::InvalidLevel { level, order: n });
        }
        let all = self.vertices();
        Ok(k_subsets(n, level - 1).all(|removed| self.is_connected_within(all.difference(removed))))
    }
}

impl fmt::Debug for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Graph({}, {:?})", self.order(), self.edges())
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&write_graph6(self))
    }
}

pub fn make_path(n: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    for i in 1..n {
        g.add_edge(i - 1, i)?;
    }
    Ok(g)
}

pub fn make_complete(n: usize) -> Result<Graph, GraphError> {
    Ok(Graph::empty(n)?.complement())
}

pub fn make_cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::InvalidParameter(format!(
            "cycle needs at least 3 vertices, got {n}"
        )));
    }
    let mut g = make_path(n)?;
    g.add_edge(n - 1, 0)?;
    Ok(g)
}

/// Star with centre 0.
pub fn make_star(n: usize) -> Result<Graph, GraphError> {
    let mut g = Graph::empty(n)?;
    for leaf in 1..n {
        g.add_edge(0, leaf)?;
    }
    Ok(g)
}

/// Lollipop of order `path_part + clique_part`: a path on positions
/// `1..=path_part+1` whose last vertex also belongs to a clique on positions
/// `path_part+1..=n`. Internally the shared vertex is `path_part`.
pub fn make_lollipop(path_part: usize, clique_part: usize) -> Result<Graph, GraphError> {
    if clique_part < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "lollipop clique part must be at least 2, got {clique_part}"
        )));
    }
    let n = path_part + clique_part;
    let mut g = widen(&make_path(path_part + 1)?, n)?;
    for u in path_part..n {
        for v in u + 1..n {
            g.add_edge(u, v)?;
        }
    }
    Ok(g)
}

/// Dandelion of order `path_part + star_part`, labelled like the lollipop:
/// path on internal vertices `0..=path_part`, leaves `path_part+1..n`
/// hanging off vertex `path_part`.
pub fn make_dandelion(path_part: usize, star_part: usize) -> Result<Graph, GraphError> {
    if star_part < 2 {
        return Err(GraphError::InvalidParameter(format!(
            "dandelion star part must be at least 2, got {star_part}"
        )));
    }
    let n = path_part + star_part;
    let mut g = widen(&make_path(path_part + 1)?, n)?;
    for leaf in path_part + 1..n {
        g.add_edge(path_part, leaf)?;
    }
    Ok(g)
}

/// Spider with centre 0 and legs laid out consecutively: leg `i` occupies the
/// next `lambdas[i]` labels, its first vertex adjacent to the centre.
pub fn make_spider(lambdas: &[usize]) -> Result<Graph, GraphError> {
    if lambdas.is_empty() {
        return Err(GraphError::InvalidParameter("spider needs at least one leg".into()));
    }
    if lambdas.contains(&0) {
        return Err(GraphError::InvalidParameter("spider legs must have length >= 1".into()));
    }
    if lambdas.windows(2).any(|w| w[0] < w[1]) {
        return Err(GraphError::InvalidParameter(format!(
            "spider legs must be sorted non-increasing, got {lambdas:?}"
        )));
    }
    let n = 1 + lambdas.iter().sum::<usize>();
    let mut g = Graph::empty(n)?;
    let mut next = 1;
    for &len in lambdas {
        let mut prev = 0;
        for v in next..next + len {
            g.add_edge(prev, v)?;
            prev = v;
        }
        next += len;
    }
    Ok(g)
}

fn widen(g: &Graph, n: usize) -> Result<Graph, GraphError> {
    check_order(n)?;
    let mut out = *g;
    out.order = n as u8;
    Ok(out)
}

/// Encode in graph6 short form (order <= 62).
pub fn write_graph6(g: &Graph) -> String {
    let n = g.order();
    let mut out = String::with_capacity(1 + (n * (n - 1) / 2).div_ceil(6));
    out.push((n as u8 + 63) as char);
    let mut chunk = 0u8;
    let mut filled = 0;
    for j in 1..n {
        for i in 0..j {
            chunk = chunk << 1 | g.adjacent(i, j) as u8;
            filled += 1;
            if filled == 6 {
                out.push((chunk + 63) as char);
                chunk = 0;
                filled = 0;
            }
        }
    }
    if filled > 0 {
        out.push(((chunk << (6 - filled)) + 63) as char);
    }
    out
}

/// Decode a graph6 short-form string. Surrounding whitespace is ignored.
pub fn parse_graph6(text: &str) -> Result<Graph, GraphError> {
    let lead = text.len() - text.trim_start().len();
    let body = text.trim().as_bytes();
    let err = |offset: usize, reason: String| GraphError::Graph6 {
        offset: lead + offset,
        reason,
    };
    let Some(&head) = body.first() else {
        return Err(err(0, "empty input".into()));
    };
    if head == b'~' {
        return Err(err(0, "long-form header (order > 62) is not supported".into()));
    }
    if !(63..=125).contains(&head) {
        return Err(err(0, format!("invalid order byte 0x{head:02x}")));
    }
    let n = (head - 63) as usize;
    if n == 0 {
        return Err(err(0, "order-0 graphs are not representable".into()));
    }
    if n > MAX_ORDER {
        return Err(err(0, format!("order {n} exceeds supported maximum {MAX_ORDER}")));
    }
    let pairs = n * (n - 1) / 2;
    let expected = pairs.div_ceil(6);
    let data = &body[1..];
    if data.len() != expected {
        let offset = 1 + data.len().min(expected);
        return Err(err(
            offset,
            format!("expected {expected} data bytes for order {n}, found {}", data.len()),
        ));
    }
    let mut g = Graph::empty(n)?;
    let mut bit = 0;
    for (idx, &byte) in data.iter().enumerate() {
        if !(63..=126).contains(&byte) {
            return Err(err(1 + idx, format!("invalid data byte 0x{byte:02x}")));
        }
        let value = byte - 63;
        for shift in (0..6).rev() {
            let set = value >> shift & 1 == 1;
            if bit < pairs {
                if set {
                    // Column-major upper triangle: bit index -> (i, j).
                    let mut j = 1;
                    while j * (j + 1) / 2 <= bit {
                        j += 1;
                    }
                    let i = bit - j * (j - 1) / 2;
                    g.adj[i] |= 1 << j;
                    g.adj[j] |= 1 << i;
                }
            } else if set {
                return Err(err(1 + idx, "non-zero padding bits".into()));
            }
            bit += 1;
        }
    }
    Ok(g)
}

//! Undirected simple connected graphs, node identifiers, distance balls,
//! and the generators used to build test corpora.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::Rng;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum GraphError {
    #[error("graph must have at least one node")]
    Empty,
    #[error("edge ({0}, {1}) out of range for {2} nodes")]
    EdgeOutOfRange(usize, usize, usize),
    #[error("self-loop at node {0}")]
    SelfLoop(usize),
    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),
    #[error("graph is not connected")]
    Disconnected,
    #[error("node identifiers are not pairwise distinct")]
    DuplicateId,
    #[error("expected {expected} identifiers, got {got}")]
    IdCountMismatch { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("malformed graph text: {0}")]
    Parse(String),
}

/// Immutable undirected simple connected graph. Nodes are dense indices
/// `0..n`; the identifier map is only consulted by certification protocols.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    edges: Vec<(usize, usize)>,
    adj: Vec<Vec<usize>>,
    ids: Vec<u64>,
}

impl Graph {
    /// Builds a graph from an edge list, rejecting loops, duplicates,
    /// out-of-range endpoints, and disconnected inputs.
    pub fn new(n: usize, edge_list: &[(usize, usize)]) -> Result<Self, GraphError> {
        if n == 0 {
            return Err(GraphError::Empty);
        }
        let mut seen: BTreeSet<(usize, usize)> = BTreeSet::new();
        for &(u, v) in edge_list {
            if u >= n || v >= n {
                return Err(GraphError::EdgeOutOfRange(u, v, n));
            }
            if u == v {
                return Err(GraphError::SelfLoop(u));
            }
            let key = (u.min(v), u.max(v));
            if !seen.insert(key) {
                return Err(GraphError::DuplicateEdge(key.0, key.1));
            }
        }
        let edges: Vec<(usize, usize)> = seen.into_iter().collect();
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in &edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        for list in &mut adj {
            list.sort_unstable();
        }
        let g = Self {
            n,
            edges,
            adj,
            ids: (1..=n as u64).collect(),
        };
        if !g.is_connected() {
            return Err(GraphError::Disconnected);
        }
        Ok(g)
    }

    /// Replaces the identifier map; identifiers must be pairwise distinct.
    pub fn with_ids(mut self, ids: Vec<u64>) -> Result<Self, GraphError> {
        if ids.len() != self.n {
            return Err(GraphError::IdCountMismatch {
                expected: self.n,
                got: ids.len(),
            });
        }
        let mut sorted = ids.clone();
        sorted.sort_unstable();
        sorted.dedup();
        if sorted.len() != ids.len() {
            return Err(GraphError::DuplicateId);
        }
        self.ids = ids;
        Ok(self)
    }

    /// Assigns fresh distinct identifiers drawn uniformly from `[1, n^c]`.
    pub fn with_random_ids<R: Rng>(self, c: u32, rng: &mut R) -> Result<Self, GraphError> {
        if c == 0 {
            return Err(GraphError::BadParameter("id exponent must be >= 1".into()));
        }
        let bound = (self.n as u64)
            .checked_pow(c)
            .ok_or_else(|| GraphError::BadParameter("id range overflows u64".into()))?;
        if bound < self.n as u64 {
            return Err(GraphError::BadParameter("id range smaller than n".into()));
        }
        let mut taken = HashSet::with_capacity(self.n);
        let mut ids = Vec::with_capacity(self.n);
        while ids.len() < self.n {
            let cand = rng.gen_range(1..=bound);
            if taken.insert(cand) {
                ids.push(cand);
            }
        }
        self.with_ids(ids)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Edges as normalized `(min, max)` pairs in ascending order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        (0..self.n).map(|v| self.degree(v)).max().unwrap_or(0)
    }

    pub fn ids(&self) -> &[u64] {
        &self.ids
    }

    pub fn id_of(&self, v: usize) -> u64 {
        self.ids[v]
    }

    /// Node index holding a given identifier, if any.
    pub fn node_with_id(&self, id: u64) -> Option<usize> {
        self.ids.iter().position(|&x| x == id)
    }

    fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.n];
        let mut queue = VecDeque::new();
        seen[0] = true;
        queue.push_back(0);
        let mut count = 1;
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if !seen[w] {
                    seen[w] = true;
                    count += 1;
                    queue.push_back(w);
                }
            }
        }
        count == self.n
    }

    /// BFS distances from `src` to every node.
    pub fn bfs_distances(&self, src: usize) -> Vec<usize> {
        assert!(src < self.n, "node out of range");
        let mut dist = vec![usize::MAX; self.n];
        let mut queue = VecDeque::new();
        dist[src] = 0;
        queue.push_back(src);
        while let Some(u) = queue.pop_front() {
            for &w in &self.adj[u] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[u] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn eccentricity(&self, v: usize) -> usize {
        self.bfs_distances(v).into_iter().max().unwrap_or(0)
    }

    /// Sizes of the distance shells around `v` for radii `0..=radius`.
    pub fn growth_profile(&self, v: usize, radius: usize) -> BallProfile {
        assert!(v < self.n, "node out of range");
        let dist = self.bfs_distances(v);
        let mut boundary_sizes = vec![0usize; radius + 1];
        for &d in &dist {
            if d <= radius {
                boundary_sizes[d] += 1;
            }
        }
        BallProfile {
            center: v,
            boundary_sizes,
        }
    }

    /// Text form: header `n m`, then one `u v` line per edge.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{} {}", self.n, self.edges.len());
        for &(u, v) in &self.edges {
            let _ = writeln!(out, "{} {}", u, v);
        }
        out
    }
}

/// Shell sizes `|∂B(v, k)|` around a center node.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BallProfile {
    pub center: usize,
    pub boundary_sizes: Vec<usize>,
}

impl BallProfile {
    /// Total nodes within the profiled radius.
    pub fn ball_size(&self) -> usize {
        self.boundary_sizes.iter().sum()
    }
}

/// Parses the `n m` / `u v` text format. Lines starting with `#` are
/// comments; blank lines are ignored.
pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| GraphError::Parse("missing header line".into()))?;
    let mut parts = header.split_whitespace();
    let n: usize = parts
        .next()
        .ok_or_else(|| GraphError::Parse("missing node count".into()))?
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad node count in {header:?}")))?;
    let m: usize = parts
        .next()
        .ok_or_else(|| GraphError::Parse("missing edge count".into()))?
        .parse()
        .map_err(|_| GraphError::Parse(format!("bad edge count in {header:?}")))?;
    if parts.next().is_some() {
        return Err(GraphError::Parse(format!("trailing tokens in {header:?}")));
    }
    let mut edges = Vec::with_capacity(m);
    for line in lines {
        let mut parts = line.split_whitespace();
        let u: usize = parts
            .next()
            .ok_or_else(|| GraphError::Parse(format!("empty edge line {line:?}")))?
            .parse()
            .map_err(|_| GraphError::Parse(format!("bad endpoint in {line:?}")))?;
        let v: usize = parts
            .next()
            .ok_or_else(|| GraphError::Parse(format!("missing endpoint in {line:?}")))?
            .parse()
            .map_err(|_| GraphError::Parse(format!("bad endpoint in {line:?}")))?;
        if parts.next().is_some() {
            return Err(GraphError::Parse(format!("trailing tokens in {line:?}")));
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(GraphError::Parse(format!(
            "header promises {m} edges, found {}",
            edges.len()
        )));
    }
    Graph::new(n, &edges)
}

/// Path on `n` nodes, `0 - 1 - ... - n-1`.
pub fn path(n: usize) -> Result<Graph, GraphError> {
    let edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    Graph::new(n, &edges)
}

/// Cycle on `n >= 3` nodes.
pub fn cycle(n: usize) -> Result<Graph, GraphError> {
    if n < 3 {
        return Err(GraphError::BadParameter("cycle needs at least 3 nodes".into()));
    }
    let mut edges: Vec<_> = (1..n).map(|i| (i - 1, i)).collect();
    edges.push((n - 1, 0));
    Graph::new(n, &edges)
}

fn lattice(dims: &[usize], wrap: bool) -> Result<Graph, GraphError> {
    if dims.is_empty() || dims.iter().any(|&d| d == 0) {
        return Err(GraphError::BadParameter("grid extents must be positive".into()));
    }
    let n: usize = dims.iter().product();
    let strides: Vec<usize> = {
        let mut s = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            s[i] = s[i + 1] * dims[i + 1];
        }
        s
    };
    let coords_of = |mut idx: usize| -> Vec<usize> {
        strides
            .iter()
            .map(|&s| {
                let c = idx / s;
                idx %= s;
                c
            })
            .collect()
    };
    let index_of = |coords: &[usize]| -> usize {
        coords.iter().zip(&strides).map(|(c, s)| c * s).sum()
    };
    let mut edges = Vec::new();
    for idx in 0..n {
        let coords = coords_of(idx);
        for (axis, &extent) in dims.iter().enumerate() {
            if coords[axis] + 1 < extent {
                let mut next = coords.clone();
                next[axis] += 1;
                edges.push((idx, index_of(&next)));
            } else if wrap && extent >= 3 {
                let mut next = coords.clone();
                next[axis] = 0;
                edges.push((idx, index_of(&next)));
            }
        }
    }
    Graph::new(n, &edges)
}

/// Axis-aligned grid with the given extents.
pub fn grid(dims: &[usize]) -> Result<Graph, GraphError> {
    lattice(dims, false)
}

/// Grid with wraparound on every axis of extent at least 3.
pub fn torus(dims: &[usize]) -> Result<Graph, GraphError> {
    lattice(dims, true)
}

/// Connected random graph with every degree at most `max_degree`.
/// A random spanning tree is grown first, then extra edges are added
/// while the degree cap allows.
pub fn random_max_degree<R: Rng>(
    n: usize,
    max_degree: usize,
    rng: &mut R,
) -> Result<Graph, GraphError> {
    if n == 0 {
        return Err(GraphError::Empty);
    }
    if n > 1 && max_degree < 2 {
        return Err(GraphError::BadParameter(
            "max degree below 2 cannot stay connected".into(),
        ));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut degree = vec![0usize; n];
    let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
    for i in 1..n {
        // Attach to an earlier node with spare capacity; a path is the
        // worst case, so capacity always exists for max_degree >= 2.
        let v = order[i];
        let u = loop {
            let cand = order[rng.gen_range(0..i)];
            if degree[cand] < max_degree {
                break cand;
            }
        };
        edges.insert((u.min(v), u.max(v)));
        degree[u] += 1;
        degree[v] += 1;
    }
    let attempts = n * max_degree;
    for _ in 0..attempts {
        let u = rng.gen_range(0..n);
        let v = rng.gen_range(0..n);
        if u == v || degree[u] >= max_degree || degree[v] >= max_degree {
            continue;
        }
        let key = (u.min(v), u.max(v));
        if edges.insert(key) {
            degree[u] += 1;
            degree[v] += 1;
        }
    }
    let list: Vec<_> = edges.into_iter().collect();
    Graph::new(n, &list)
}

/// Random connected 3-regular graph via the pairing model, retrying until
/// the pairing is simple and connected. Requires even `n >= 4`.
pub fn random_cubic<R: Rng>(n: usize, rng: &mut R) -> Result<Graph, GraphError> {
    if n < 4 || n % 2 != 0 {
        return Err(GraphError::BadParameter(
            "cubic graphs need even n >= 4".into(),
        ));
    }
    for _ in 0..10_000 {
        let mut stubs: Vec<usize> = (0..n).flat_map(|v| [v, v, v]).collect();
        stubs.shuffle(rng);
        let mut edges: BTreeSet<(usize, usize)> = BTreeSet::new();
        let mut ok = true;
        for pair in stubs.chunks(2) {
            let (u, v) = (pair[0], pair[1]);
            if u == v || !edges.insert((u.min(v), u.max(v))) {
                ok = false;
                break;
            }
        }
        if !ok {
            continue;
        }
        let list: Vec<_> = edges.into_iter().collect();
        match Graph::new(n, &list) {
            Ok(g) => return Ok(g),
            Err(GraphError::Disconnected) => continue,
            Err(e) => return Err(e),
        }
    }
    Err(GraphError::BadParameter(
        "pairing model failed to produce a simple connected cubic graph".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge_graph() {
        let g = Graph::new(2, &[(0, 1)]).unwrap();
        assert_eq!(g.node_count(), 2);
        assert_eq!(g.edge_count(), 1);
        assert_eq!(g.degree(0), 1);
    }

    #[test]
    fn c4_all_degrees_two() {
        let g = Graph::new(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!((0..4).all(|v| g.degree(v) == 2));
        assert_eq!(g.max_degree(), 2);
    }

    #[test]
    fn rejects_disconnected() {
        assert_eq!(Graph::new(3, &[(0, 1)]), Err(GraphError::Disconnected));
    }

    #[test]
    fn rejects_loops_duplicates_range() {
        assert!(matches!(Graph::new(2, &[(0, 0)]), Err(GraphError::SelfLoop(0))));
        assert!(matches!(
            Graph::new(2, &[(0, 1), (1, 0)]),
            Err(GraphError::DuplicateEdge(0, 1))
        ));
        assert!(matches!(
            Graph::new(2, &[(0, 2)]),
            Err(GraphError::EdgeOutOfRange(0, 2, 2))
        ));
    }

    #[test]
    fn growth_profile_c8() {
        let g = cycle(8).unwrap();
        let p = g.growth_profile(0, 4);
        assert_eq!(p.boundary_sizes, vec![1, 2, 2, 2, 1]);
        assert_eq!(p.ball_size(), 8);
    }

    #[test]
    fn growth_profile_p5_middle() {
        let g = path(5).unwrap();
        let p = g.growth_profile(2, 2);
        assert_eq!(p.boundary_sizes, vec![1, 2, 2]);
    }

    #[test]
    fn growth_profile_single_edge() {
        let g = path(2).unwrap();
        let p = g.growth_profile(0, 1);
        assert_eq!(p.boundary_sizes, vec![1, 1]);
    }

    #[test]
    fn boundary_at_one_is_degree() {
        let g = torus(&[3, 4]).unwrap();
        for v in 0..g.node_count() {
            assert_eq!(g.growth_profile(v, 1).boundary_sizes[1], g.degree(v));
        }
    }

    #[test]
    fn shells_sum_to_n_at_eccentricity() {
        let g = grid(&[3, 5]).unwrap();
        for v in 0..g.node_count() {
            let ecc = g.eccentricity(v);
            assert_eq!(g.growth_profile(v, ecc).ball_size(), g.node_count());
        }
    }

    #[test]
    fn text_round_trip() {
        let g = torus(&[3, 3]).unwrap();
        let h = parse_graph(&g.to_text()).unwrap();
        assert_eq!(g, h);
    }

    #[test]
    fn parse_with_comments() {
        let g = parse_graph("# tiny\n2 1\n0 1\n").unwrap();
        assert_eq!(g.edge_count(), 1);
        assert!(parse_graph("2 2\n0 1\n").is_err());
        assert!(parse_graph("").is_err());
    }

    #[test]
    fn torus_degrees() {
        let g = torus(&[4, 4]).unwrap();
        assert!((0..16).all(|v| g.degree(v) == 4));
        // Extent-2 axes must not create duplicate edges.
        let g2 = torus(&[2, 5]).unwrap();
        assert!(g2.node_count() == 10);
    }

    #[test]
    fn random_generators_respect_caps() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let g = random_max_degree(40, 4, &mut rng).unwrap();
        assert!((0..40).all(|v| g.degree(v) <= 4));
        let c = random_cubic(20, &mut rng).unwrap();
        assert!((0..20).all(|v| c.degree(v) == 3));
    }

    #[test]
    fn random_ids_distinct_in_range() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = cycle(6).unwrap().with_random_ids(2, &mut rng).unwrap();
        let mut ids = g.ids().to_vec();
        ids.sort_unstable();
        ids.dedup();
        assert_eq!(ids.len(), 6);
        assert!(g.ids().iter().all(|&i| (1..=36).contains(&i)));
    }

    #[test]
    fn duplicate_ids_rejected() {
        let g = path(3).unwrap();
        assert!(matches!(
            g.with_ids(vec![1, 1, 2]),
            Err(GraphError::DuplicateId)
        ));
    }
}

//! Immutable sparse simple graphs and rooted balls.
//!
//! Vertices are dense ids `0..n`. Adjacency is CSR with each row sorted, so
//! membership tests are binary searches and iteration order is deterministic.

use std::collections::HashMap;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};

pub type Vertex = u32;

/// Undirected simple graph: no self-loops, no parallel edges, symmetric
/// adjacency. Immutable after construction.
#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    offsets: Vec<usize>,
    neighbors: Vec<Vertex>,
}

impl Graph {
    /// Graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Self {
        Graph {
            n,
            offsets: vec![0; n + 1],
            neighbors: Vec::new(),
        }
    }

    /// Complete graph K_n. Quadratic size; intended for small n.
    pub fn complete(n: usize) -> Self {
        let mut offsets = Vec::with_capacity(n + 1);
        let mut neighbors = Vec::with_capacity(n.saturating_mul(n.saturating_sub(1)));
        offsets.push(0);
        for u in 0..n {
            for v in 0..n {
                if v != u {
                    neighbors.push(v as Vertex);
                }
            }
            offsets.push(neighbors.len());
        }
        Graph { n, offsets, neighbors }
    }

    /// Builds a graph from an edge list, validating simplicity.
    pub fn from_edges<I>(n: usize, edges: I) -> Result<Self>
    where
        I: IntoIterator<Item = (Vertex, Vertex)>,
    {
        if n > u32::MAX as usize {
            return Err(Error::InvalidParameter(format!(
                "vertex count {n} exceeds u32 range"
            )));
        }
        let mut deg = vec![0usize; n];
        let mut list: Vec<(Vertex, Vertex)> = Vec::new();
        for (u, v) in edges {
            if u == v {
                return Err(Error::InvalidParameter(format!("self-loop at {u}")));
            }
            if u as usize >= n || v as usize >= n {
                return Err(Error::InvalidParameter(format!(
                    "edge ({u},{v}) out of range for n={n}"
                )));
            }
            deg[u as usize] += 1;
            deg[v as usize] += 1;
            list.push((u, v));
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &deg {
            acc += d;
            offsets.push(acc);
        }
        let mut neighbors = vec![0 as Vertex; acc];
        let mut fill = offsets.clone();
        for &(u, v) in &list {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        for u in 0..n {
            let row = &mut neighbors[offsets[u]..offsets[u + 1]];
            row.sort_unstable();
            if row.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidParameter(format!(
                    "duplicate edge incident to {u}"
                )));
            }
        }
        Ok(Graph { n, offsets, neighbors })
    }

    /// CSR constructor for edges already produced in lexicographic order
    /// (u < v, strictly increasing). Rows come out sorted without a sort pass.
    pub(crate) fn from_lex_edges(n: usize, edges: &[(Vertex, Vertex)]) -> Self {
        let mut deg = vec![0usize; n];
        for &(u, v) in edges {
            deg[u as usize] += 1;
            deg[v as usize] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        let mut acc = 0usize;
        offsets.push(0);
        for d in &deg {
            acc += d;
            offsets.push(acc);
        }
        let mut neighbors = vec![0 as Vertex; acc];
        let mut fill = offsets.clone();
        for &(u, v) in edges {
            neighbors[fill[u as usize]] = v;
            fill[u as usize] += 1;
            neighbors[fill[v as usize]] = u;
            fill[v as usize] += 1;
        }
        debug_assert!((0..n).all(|u| neighbors[offsets[u]..offsets[u + 1]].windows(2).all(|w| w[0] < w[1])));
        Graph { n, offsets, neighbors }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Edge count m = half the sum of adjacency-list lengths.
    pub fn m(&self) -> usize {
        self.neighbors.len() / 2
    }

    pub fn degree(&self, v: Vertex) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }

    /// Sorted neighbour list of `v`.
    pub fn adj(&self, v: Vertex) -> &[Vertex] {
        &self.neighbors[self.offsets[v as usize]..self.offsets[v as usize + 1]]
    }

    pub fn has_edge(&self, u: Vertex, v: Vertex) -> bool {
        self.adj(u).binary_search(&v).is_ok()
    }

    /// Edges as (u, v) with u < v, in lexicographic order.
    pub fn edges(&self) -> impl Iterator<Item = (Vertex, Vertex)> + '_ {
        (0..self.n as Vertex)
            .flat_map(move |u| self.adj(u).iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }

    /// Copy of the graph with edge {u, v} added. The edge must be absent.
    pub fn with_edge(&self, u: Vertex, v: Vertex) -> Result<Self> {
        if u == v || u as usize >= self.n || v as usize >= self.n {
            return Err(Error::InvalidParameter(format!("bad edge ({u},{v})")));
        }
        if self.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!("edge ({u},{v}) already present")));
        }
        Ok(self.splice(u, v, true))
    }

    /// Copy of the graph with edge {u, v} removed. The edge must be present.
    pub fn without_edge(&self, u: Vertex, v: Vertex) -> Result<Self> {
        if !self.has_edge(u, v) {
            return Err(Error::InvalidParameter(format!("edge ({u},{v}) not present")));
        }
        Ok(self.splice(u, v, false))
    }

    fn splice(&self, u: Vertex, v: Vertex, insert: bool) -> Self {
        let delta: isize = if insert { 1 } else { -1 };
        let mut offsets = Vec::with_capacity(self.n + 1);
        let mut neighbors =
            Vec::with_capacity((self.neighbors.len() as isize + 2 * delta) as usize);
        offsets.push(0);
        for w in 0..self.n as Vertex {
            let row = self.adj(w);
            if w == u || w == v {
                let other = if w == u { v } else { u };
                if insert {
                    let pos = row.binary_search(&other).unwrap_err();
                    neighbors.extend_from_slice(&row[..pos]);
                    neighbors.push(other);
                    neighbors.extend_from_slice(&row[pos..]);
                } else {
                    neighbors.extend(row.iter().copied().filter(|&x| x != other));
                }
            } else {
                neighbors.extend_from_slice(row);
            }
            offsets.push(neighbors.len());
        }
        Graph { n: self.n, offsets, neighbors }
    }

    /// Induced subgraph on `keep`, relabelled to 0..keep.len() in slice order.
    pub fn induced(&self, keep: &[Vertex]) -> Graph {
        let mut local = HashMap::with_capacity(keep.len());
        for (i, &v) in keep.iter().enumerate() {
            local.insert(v, i as Vertex);
        }
        let mut edges = Vec::new();
        for (i, &v) in keep.iter().enumerate() {
            for &w in self.adj(v) {
                if let Some(&j) = local.get(&w) {
                    if (i as Vertex) < j {
                        edges.push((i as Vertex, j));
                    }
                }
            }
        }
        Graph::from_edges(keep.len(), edges).expect("induced subgraph of a simple graph is simple")
    }

    /// Relabelled copy: vertex v becomes perm[v]. `perm` must be a permutation.
    pub fn relabeled(&self, perm: &[Vertex]) -> Graph {
        assert_eq!(perm.len(), self.n);
        let edges: Vec<_> = self.edges().map(|(u, v)| (perm[u as usize], perm[v as usize])).collect();
        Graph::from_edges(self.n, edges).expect("relabelling preserves simplicity")
    }

    /// Writes the edge-list text format: header `n m`, then one `u v` line per
    /// edge, 0-indexed, u < v.
    pub fn write_edge_list<W: Write>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "{} {}", self.n, self.m())?;
        for (u, v) in self.edges() {
            writeln!(w, "{u} {v}")?;
        }
        Ok(())
    }

    /// Reads the edge-list text format. Lines starting with `#` are skipped.
    pub fn read_edge_list<R: BufRead>(r: &mut R) -> Result<Graph> {
        let mut lines = r.lines();
        let header = loop {
            match lines.next() {
                Some(Ok(line)) => {
                    let t = line.trim();
                    if t.is_empty() || t.starts_with('#') {
                        continue;
                    }
                    break t.to_string();
                }
                Some(Err(e)) => return Err(Error::Format(e.to_string())),
                None => return Err(Error::Format("missing `n m` header".into())),
            }
        };
        let mut it = header.split_whitespace();
        let n: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("bad vertex count in header".into()))?;
        let m: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::Format("bad edge count in header".into()))?;
        let mut edges = Vec::with_capacity(m);
        for line in lines {
            let line = line.map_err(|e| Error::Format(e.to_string()))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let mut it = t.split_whitespace();
            let u: Vertex = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad edge line: {t}")))?;
            let v: Vertex = it
                .next()
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| Error::Format(format!("bad edge line: {t}")))?;
            edges.push((u, v));
        }
        if edges.len() != m {
            return Err(Error::Format(format!(
                "header promises {m} edges, found {}",
                edges.len()
            )));
        }
        Graph::from_edges(n, edges)
    }

    /// Checks the structural invariants; used by tests on every sampled graph.
    pub fn check_invariants(&self) -> Result<()> {
        for u in 0..self.n as Vertex {
            let row = self.adj(u);
            if !row.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Format(format!("row {u} unsorted or duplicated")));
            }
            for &v in row {
                if v == u {
                    return Err(Error::Format(format!("self-loop at {u}")));
                }
                if !self.has_edge(v, u) {
                    return Err(Error::Format(format!("asymmetric edge ({u},{v})")));
                }
            }
        }
        Ok(())
    }
}

/// Rooted ball: the induced subgraph on B_G(v, r) with exact BFS distances.
///
/// Members are listed in BFS discovery order with the root first; `boundary`
/// is the set of members at distance exactly `radius`.
#[derive(Clone, Debug)]
pub struct LocalBall {
    root: Vertex,
    radius: usize,
    members: Vec<Vertex>,
    dist: Vec<u16>,
    offsets: Vec<usize>,
    adj: Vec<u32>,
}

impl LocalBall {
    pub fn root(&self) -> Vertex {
        self.root
    }

    pub fn radius(&self) -> usize {
        self.radius
    }

    pub fn size(&self) -> usize {
        self.members.len()
    }

    /// Members in BFS order; index 0 is the root.
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn member(&self, i: u32) -> Vertex {
        self.members[i as usize]
    }

    pub fn dist_of(&self, i: u32) -> usize {
        self.dist[i as usize] as usize
    }

    /// Local adjacency of member `i` (indices into `members`).
    pub fn adj_local(&self, i: u32) -> &[u32] {
        &self.adj[self.offsets[i as usize]..self.offsets[i as usize + 1]]
    }

    pub fn edge_count(&self) -> usize {
        self.adj.len() / 2
    }

    pub fn boundary_size(&self) -> usize {
        let r = self.radius as u16;
        self.dist.iter().filter(|&&d| d == r).count()
    }

    pub fn boundary(&self) -> impl Iterator<Item = Vertex> + '_ {
        let r = self.radius as u16;
        self.members
            .iter()
            .zip(&self.dist)
            .filter(move |(_, &d)| d == r)
            .map(|(&v, _)| v)
    }

    pub fn is_boundary_index(&self, i: u32) -> bool {
        self.dist[i as usize] as usize == self.radius
    }

    /// A ball is connected by construction, so the tree test reduces to the
    /// edge count.
    pub fn is_tree(&self) -> bool {
        self.edge_count() + 1 == self.size()
    }

    pub fn local_index(&self, v: Vertex) -> Option<u32> {
        self.members.iter().position(|&m| m == v).map(|i| i as u32)
    }
}

/// Extracts the rooted ball of the given radius around `v` by BFS.
pub fn ball(g: &Graph, v: Vertex, radius: usize) -> LocalBall {
    assert!((v as usize) < g.n(), "root {v} out of range");
    let mut local: HashMap<Vertex, u32> = HashMap::new();
    let mut members = vec![v];
    let mut dist: Vec<u16> = vec![0];
    local.insert(v, 0);
    let mut head = 0usize;
    while head < members.len() {
        let x = members[head];
        let d = dist[head];
        head += 1;
        if (d as usize) < radius {
            for &y in g.adj(x) {
                if !local.contains_key(&y) {
                    local.insert(y, members.len() as u32);
                    members.push(y);
                    dist.push(d + 1);
                }
            }
        }
    }
    // Induced adjacency, including edges between boundary vertices.
    let mut offsets = Vec::with_capacity(members.len() + 1);
    let mut adj = Vec::new();
    offsets.push(0);
    for &x in &members {
        for &y in g.adj(x) {
            if let Some(&j) = local.get(&y) {
                adj.push(j);
            }
        }
        offsets.push(adj.len());
    }
    LocalBall { root: v, radius, members, dist, offsets, adj }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n as Vertex - 1).map(|i| (i, i + 1))).unwrap()
    }

    #[test]
    fn k4_basics() {
        let g = Graph::complete(4);
        assert_eq!(g.n(), 4);
        assert_eq!(g.m(), 6);
        assert!(g.has_edge(0, 3));
        g.check_invariants().unwrap();
    }

    #[test]
    fn from_edges_rejects_bad_input() {
        assert!(Graph::from_edges(3, vec![(0, 0)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 5)]).is_err());
        assert!(Graph::from_edges(3, vec![(0, 1), (1, 0)]).is_err());
    }

    #[test]
    fn edge_toggle() {
        let g = Graph::complete(4);
        let h = g.without_edge(0, 1).unwrap();
        assert_eq!(h.m(), 5);
        assert!(!h.has_edge(0, 1));
        let back = h.with_edge(0, 1).unwrap();
        assert_eq!(back.m(), 6);
        assert!(back.has_edge(1, 0));
        back.check_invariants().unwrap();
        assert!(h.with_edge(0, 2).is_err());
        assert!(h.without_edge(0, 1).is_err());
    }

    #[test]
    fn ball_radius_zero() {
        let g = path(5);
        let b = ball(&g, 2, 0);
        assert_eq!(b.members(), &[2]);
        assert_eq!(b.boundary_size(), 1);
        assert!(b.is_tree());
    }

    #[test]
    fn ball_isolated_vertex() {
        let g = Graph::empty(4);
        let b = ball(&g, 1, 3);
        assert_eq!(b.size(), 1);
        assert_eq!(b.boundary_size(), 0);
    }

    #[test]
    fn ball_on_path() {
        // Brute-forced by hand: distances from 2 on 0-1-2-3-4.
        let g = path(5);
        let b = ball(&g, 2, 2);
        assert_eq!(b.size(), 5);
        let mut boundary: Vec<_> = b.boundary().collect();
        boundary.sort_unstable();
        assert_eq!(boundary, vec![0, 4]);
        assert_eq!(b.edge_count(), 4);
        assert!(b.is_tree());
    }

    #[test]
    fn ball_agrees_with_all_pairs_bfs() {
        // Brute-force oracle: full BFS distances on small random graphs.
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(42);
        for _ in 0..200 {
            let n = rng.random_range(1..=10usize);
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    if rng.random::<f64>() < 0.35 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let dist = oracle_distances(&g);
            for v in 0..n as Vertex {
                for ell in 0..=n {
                    let b = ball(&g, v, ell);
                    let expect: Vec<Vertex> = (0..n as Vertex)
                        .filter(|&w| dist[v as usize][w as usize] <= ell as i64)
                        .collect();
                    let mut got: Vec<Vertex> = b.members().to_vec();
                    got.sort_unstable();
                    assert_eq!(got, expect);
                    for (i, &w) in b.members().iter().enumerate() {
                        assert_eq!(b.dist_of(i as u32) as i64, dist[v as usize][w as usize]);
                    }
                    // Induced edge count must match the subgraph.
                    let mut cnt = 0;
                    for (u, w) in g.edges() {
                        if dist[v as usize][u as usize] <= ell as i64
                            && dist[v as usize][w as usize] <= ell as i64
                        {
                            cnt += 1;
                        }
                    }
                    assert_eq!(b.edge_count(), cnt);
                }
            }
        }
    }

    fn oracle_distances(g: &Graph) -> Vec<Vec<i64>> {
        let n = g.n();
        let mut all = vec![vec![i64::MAX / 2; n]; n];
        for s in 0..n {
            let d = &mut all[s];
            d[s] = 0;
            let mut queue = vec![s as Vertex];
            let mut head = 0;
            while head < queue.len() {
                let x = queue[head];
                head += 1;
                for &y in g.adj(x) {
                    if d[y as usize] > d[x as usize] + 1 {
                        d[y as usize] = d[x as usize] + 1;
                        queue.push(y);
                    }
                }
            }
        }
        all
    }

    #[test]
    fn edge_list_round_trip() {
        let g = Graph::from_edges(6, vec![(0, 1), (1, 2), (4, 5)]).unwrap();
        let mut buf = Vec::new();
        g.write_edge_list(&mut buf).unwrap();
        let h = Graph::read_edge_list(&mut &buf[..]).unwrap();
        assert_eq!(g.n(), h.n());
        assert_eq!(g.edges().collect::<Vec<_>>(), h.edges().collect::<Vec<_>>());
    }

    #[test]
    fn edge_list_skips_comments() {
        let text = "# meta {\"seed\":1}\n3 1\n0 2\n";
        let g = Graph::read_edge_list(&mut text.as_bytes()).unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(0, 2));
    }

    #[test]
    fn edge_list_bad_header() {
        assert!(Graph::read_edge_list(&mut "".as_bytes()).is_err());
        assert!(Graph::read_edge_list(&mut "3 2\n0 1\n".as_bytes()).is_err());
    }
}

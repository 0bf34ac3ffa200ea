//! Connected components, the k-core peeling process, the local k-core, and
//! the small-component event used by the resampling analysis.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::{Graph, LocalBall, Vertex};

pub const NO_COMP: u32 = u32::MAX;

/// Size threshold separating "small" components from a linear-order one:
/// ceil((ln n)^4), natural log.
pub fn log4_threshold(n: usize) -> usize {
    if n <= 1 {
        return 0;
    }
    (n as f64).ln().powi(4).ceil() as usize
}

/// Partition of a vertex set into connected components.
///
/// Component ids are assigned in order of each component's smallest vertex,
/// so `largest` (maximum size, ties to the smallest id) breaks ties by
/// smallest minimum vertex id. Vertices excluded from the labelling carry
/// `NO_COMP` and have C_v = empty by convention.
#[derive(Clone, Debug)]
pub struct ComponentLabeling {
    n: usize,
    comp_of: Vec<u32>,
    sizes: Vec<u32>,
    largest: Option<u32>,
    member_offsets: Vec<usize>,
    members: Vec<Vertex>,
}

impl ComponentLabeling {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn num_components(&self) -> usize {
        self.sizes.len()
    }

    /// Component id of `v`, or None if `v` was excluded.
    pub fn comp_id(&self, v: Vertex) -> Option<u32> {
        let c = self.comp_of[v as usize];
        if c == NO_COMP {
            None
        } else {
            Some(c)
        }
    }

    pub fn size_of(&self, comp: u32) -> usize {
        self.sizes[comp as usize] as usize
    }

    /// Size of v's component; 0 for excluded vertices.
    pub fn comp_size_of_vertex(&self, v: Vertex) -> usize {
        match self.comp_id(v) {
            Some(c) => self.size_of(c),
            None => 0,
        }
    }

    pub fn members(&self, comp: u32) -> &[Vertex] {
        let c = comp as usize;
        &self.members[self.member_offsets[c]..self.member_offsets[c + 1]]
    }

    /// The designated largest component, if any vertex is labelled.
    pub fn largest(&self) -> Option<u32> {
        self.largest
    }

    pub fn largest_size(&self) -> usize {
        self.largest.map_or(0, |c| self.size_of(c))
    }

    pub fn in_largest(&self, v: Vertex) -> bool {
        match (self.comp_id(v), self.largest) {
            (Some(c), Some(l)) => c == l,
            _ => false,
        }
    }

    pub fn max_size(&self) -> usize {
        self.sizes.iter().copied().max().unwrap_or(0) as usize
    }

    /// Number of components with size strictly above `threshold`.
    pub fn count_above(&self, threshold: usize) -> usize {
        self.sizes.iter().filter(|&&s| s as usize > threshold).count()
    }

    /// (size, multiplicity) pairs, ascending in size.
    pub fn size_histogram(&self) -> Vec<(usize, u64)> {
        let mut hist: std::collections::BTreeMap<usize, u64> = Default::default();
        for &s in &self.sizes {
            *hist.entry(s as usize).or_insert(0) += 1;
        }
        hist.into_iter().collect()
    }

    /// Rebuilds a labelling from per-vertex assignments (None = excluded).
    /// Ids are renumbered canonically; sizes and the largest designation are
    /// recomputed.
    pub fn from_assignments(assign: &[Option<u32>]) -> Result<Self> {
        let n = assign.len();
        let mut remap: std::collections::HashMap<u32, u32> = Default::default();
        let mut comp_of = vec![NO_COMP; n];
        let mut sizes: Vec<u32> = Vec::new();
        for (v, a) in assign.iter().enumerate() {
            if let Some(raw) = a {
                let next = sizes.len() as u32;
                let id = *remap.entry(*raw).or_insert_with(|| {
                    sizes.push(0);
                    next
                });
                comp_of[v] = id;
                sizes[id as usize] += 1;
            }
        }
        let mut member_offsets = vec![0usize; sizes.len() + 1];
        for c in 0..sizes.len() {
            member_offsets[c + 1] = member_offsets[c] + sizes[c] as usize;
        }
        let mut fill = member_offsets.clone();
        let mut members = vec![0 as Vertex; member_offsets[sizes.len()]];
        for (v, &c) in comp_of.iter().enumerate() {
            if c != NO_COMP {
                members[fill[c as usize]] = v as Vertex;
                fill[c as usize] += 1;
            }
        }
        let largest = designate_largest(&sizes);
        Ok(ComponentLabeling { n, comp_of, sizes, largest, member_offsets, members })
    }

    pub fn summary(&self) -> LabelingSummary {
        LabelingSummary {
            n: self.n,
            num_components: self.num_components(),
            largest_size: self.largest_size(),
            max_size: self.max_size(),
            histogram: self.size_histogram(),
        }
    }
}

/// JSON-facing digest of a labelling.
#[derive(Clone, Debug, Serialize)]
pub struct LabelingSummary {
    pub n: usize,
    pub num_components: usize,
    pub largest_size: usize,
    pub max_size: usize,
    pub histogram: Vec<(usize, u64)>,
}

fn designate_largest(sizes: &[u32]) -> Option<u32> {
    let mut best: Option<u32> = None;
    for (c, &s) in sizes.iter().enumerate() {
        match best {
            None => best = Some(c as u32),
            Some(b) if s > sizes[b as usize] => best = Some(c as u32),
            _ => {}
        }
    }
    best
}

fn label(g: &Graph, excluded: Option<&[bool]>) -> ComponentLabeling {
    let n = g.n();
    let mut comp_of = vec![NO_COMP; n];
    let mut sizes: Vec<u32> = Vec::new();
    let mut members: Vec<Vertex> = Vec::with_capacity(n);
    let mut member_offsets = vec![0usize];
    let mut queue: Vec<Vertex> = Vec::new();
    let skip = |v: usize| excluded.is_some_and(|m| m[v]);
    for s in 0..n {
        if comp_of[s] != NO_COMP || skip(s) {
            continue;
        }
        let id = sizes.len() as u32;
        comp_of[s] = id;
        queue.clear();
        queue.push(s as Vertex);
        members.push(s as Vertex);
        let mut head = 0usize;
        let mut count = 1u32;
        while head < queue.len() {
            let x = queue[head];
            head += 1;
            for &y in g.adj(x) {
                if comp_of[y as usize] == NO_COMP && !skip(y as usize) {
                    comp_of[y as usize] = id;
                    queue.push(y);
                    members.push(y);
                    count += 1;
                }
            }
        }
        sizes.push(count);
        member_offsets.push(members.len());
    }
    let largest = designate_largest(&sizes);
    ComponentLabeling { n, comp_of, sizes, largest, member_offsets, members }
}

/// Exact component partition of the whole graph.
pub fn components(g: &Graph) -> ComponentLabeling {
    label(g, None)
}

/// Components of the induced subgraph on V(g) minus `excluded`. Excluded
/// vertices are labelled `NO_COMP` (their component is empty by convention).
pub fn remainder(g: &Graph, excluded: &[Vertex]) -> ComponentLabeling {
    let mut mask = vec![false; g.n()];
    for &v in excluded {
        mask[v as usize] = true;
    }
    label(g, Some(&mask))
}

/// Output of the k-core peeling process.
#[derive(Clone, Debug)]
pub struct CoreResult {
    pub k: usize,
    in_core: Vec<bool>,
    core_vertices: Vec<Vertex>,
    /// Deletion sequence: at each step the lowest-id vertex of current degree
    /// < k. Replayed in reverse it is a k-degenerate ordering certificate.
    pub peel_order: Vec<Vertex>,
    /// Component labelling of the mantle G - V(K).
    pub mantle: ComponentLabeling,
}

impl CoreResult {
    pub fn in_core(&self, v: Vertex) -> bool {
        self.in_core[v as usize]
    }

    pub fn core_vertices(&self) -> &[Vertex] {
        &self.core_vertices
    }

    pub fn core_size(&self) -> usize {
        self.core_vertices.len()
    }

    pub fn summary(&self) -> CoreSummary {
        CoreSummary {
            k: self.k,
            core_size: self.core_size(),
            mantle_max_component: self.mantle.max_size(),
            mantle_histogram: self.mantle.size_histogram(),
        }
    }
}

/// JSON-facing digest of a core decomposition.
#[derive(Clone, Debug, Serialize)]
pub struct CoreSummary {
    pub k: usize,
    pub core_size: usize,
    pub mantle_max_component: usize,
    pub mantle_histogram: Vec<(usize, u64)>,
}

/// k-core via peeling: recursively delete a vertex of degree less than k,
/// always choosing the lowest id among candidates. The surviving set is the
/// unique maximal subgraph of minimum degree >= k; only the certificate
/// depends on the tie rule.
pub fn kcore(g: &Graph, k: usize) -> CoreResult {
    let n = g.n();
    let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v as Vertex)).collect();
    let mut removed = vec![false; n];
    let mut pending: BTreeSet<Vertex> = (0..n)
        .filter(|&v| deg[v] < k)
        .map(|v| v as Vertex)
        .collect();
    let mut peel_order = Vec::new();
    while let Some(&v) = pending.iter().next() {
        pending.remove(&v);
        removed[v as usize] = true;
        peel_order.push(v);
        for &w in g.adj(v) {
            if !removed[w as usize] {
                deg[w as usize] -= 1;
                if deg[w as usize] + 1 == k {
                    pending.insert(w);
                }
            }
        }
    }
    let core_vertices: Vec<Vertex> = (0..n as Vertex).filter(|&v| !removed[v as usize]).collect();
    let in_core: Vec<bool> = removed.iter().map(|&r| !r).collect();
    let mantle = remainder(g, &core_vertices);
    CoreResult { k, in_core, core_vertices, peel_order, mantle }
}

/// Checks a k-degenerate ordering in the paper's orientation: every vertex of
/// `order` must have fewer than k neighbours among the vertices appearing
/// before it in `order` or inside `core`.
///
/// A peel sequence certifies the core when replayed in reverse-deletion
/// order.
pub fn verify_degenerate_ordering(
    g: &Graph,
    core: &[Vertex],
    order: &[Vertex],
    k: usize,
) -> Result<bool> {
    let n = g.n();
    let mut in_core = vec![false; n];
    for &v in core {
        if v as usize >= n {
            return Err(Error::InvalidParameter(format!("core vertex {v} out of range")));
        }
        in_core[v as usize] = true;
    }
    let mut seen = vec![false; n];
    for &v in order {
        if v as usize >= n {
            return Err(Error::InvalidParameter(format!("order vertex {v} out of range")));
        }
        if in_core[v as usize] {
            return Err(Error::InvalidParameter(format!(
                "vertex {v} appears in both order and core"
            )));
        }
        if seen[v as usize] {
            return Err(Error::InvalidParameter(format!("vertex {v} repeated in order")));
        }
        seen[v as usize] = true;
    }
    for s in &mut seen {
        *s = false;
    }
    for &v in order {
        let prior = g
            .adj(v)
            .iter()
            .filter(|&&w| seen[w as usize] || in_core[w as usize])
            .count();
        if prior >= k {
            return Ok(false);
        }
        seen[v as usize] = true;
    }
    Ok(true)
}

/// The l-local k-core of a ball: the maximal subset of the ball that contains
/// the whole boundary and in which every non-boundary member keeps at least k
/// neighbours.
#[derive(Clone, Debug)]
pub struct LocalCore {
    pub root: Vertex,
    pub radius: usize,
    pub k: usize,
    members: Vec<Vertex>,
    root_in: bool,
}

impl LocalCore {
    /// Surviving vertices (original ids, sorted).
    pub fn members(&self) -> &[Vertex] {
        &self.members
    }

    pub fn contains(&self, v: Vertex) -> bool {
        self.members.binary_search(&v).is_ok()
    }

    pub fn contains_root(&self) -> bool {
        self.root_in
    }
}

/// Computes the l-local k-core by peeling. Only vertices at original distance
/// <= l-1 from the root are ever deleted (the peelable set is frozen up
/// front, not recomputed as the ball shrinks); a non-boundary vertex is
/// deleted while its degree within the surviving set is below k.
pub fn local_kcore(ball: &LocalBall, k: usize) -> LocalCore {
    let sz = ball.size();
    let mut live_deg: Vec<usize> = (0..sz as u32).map(|i| ball.adj_local(i).len()).collect();
    let mut removed = vec![false; sz];
    let mut pending: BTreeSet<u32> = (0..sz as u32)
        .filter(|&i| !ball.is_boundary_index(i) && live_deg[i as usize] < k)
        .collect();
    while let Some(&i) = pending.iter().next() {
        pending.remove(&i);
        removed[i as usize] = true;
        for &j in ball.adj_local(i) {
            if !removed[j as usize] {
                live_deg[j as usize] -= 1;
                if !ball.is_boundary_index(j) && live_deg[j as usize] + 1 == k {
                    pending.insert(j);
                }
            }
        }
    }
    let mut members: Vec<Vertex> = (0..sz as u32)
        .filter(|&i| !removed[i as usize])
        .map(|i| ball.member(i))
        .collect();
    members.sort_unstable();
    LocalCore {
        root: ball.root(),
        radius: ball.radius(),
        k,
        members,
        root_in: !removed[0],
    }
}

/// Giant variant of event E: every supplied labelling has exactly one
/// component larger than ceil((ln n)^4).
pub fn event_e_giant(labelings: &[&ComponentLabeling], n: usize) -> bool {
    let thr = log4_threshold(n);
    labelings.iter().all(|l| l.count_above(thr) == 1)
}

/// Mantle variant of event E: no component of any supplied labelling exceeds
/// ceil((ln n)^4). An empty mantle passes.
pub fn event_e_mantle(labelings: &[&ComponentLabeling], n: usize) -> bool {
    let thr = log4_threshold(n);
    labelings.iter().all(|l| l.count_above(thr) == 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (0..n as Vertex - 1).map(|i| (i, i + 1))).unwrap()
    }

    fn cycle(n: usize) -> Graph {
        Graph::from_edges(
            n,
            (0..n as Vertex).map(|i| (i, ((i + 1) as usize % n) as Vertex)),
        )
        .unwrap()
    }

    #[test]
    fn empty_graph_components() {
        let l = components(&Graph::empty(5));
        assert_eq!(l.num_components(), 5);
        assert_eq!(l.largest_size(), 1);
        assert!(l.in_largest(0)); // tie broken toward the smallest vertex
        assert!(!l.in_largest(1));
    }

    #[test]
    fn cycle_is_one_component() {
        let l = components(&cycle(5));
        assert_eq!(l.num_components(), 1);
        assert_eq!(l.largest_size(), 5);
    }

    #[test]
    fn two_triangles_tie_break() {
        let g = Graph::from_edges(6, vec![(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5)]).unwrap();
        let l = components(&g);
        assert_eq!(l.num_components(), 2);
        assert_eq!(l.largest_size(), 3);
        assert!(l.in_largest(0));
        assert!(!l.in_largest(3));
    }

    #[test]
    fn components_agree_with_oracle() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for _ in 0..200 {
            let n = rng.random_range(1..=10usize);
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    if rng.random::<f64>() < 0.3 {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            let l = components(&g);
            // comp_id(u) == comp_id(v) iff connected (pairwise BFS oracle).
            for u in 0..n as Vertex {
                for v in 0..n as Vertex {
                    let conn = oracle_connected(&g, u, v);
                    assert_eq!(l.comp_id(u) == l.comp_id(v), conn);
                }
            }
            let total: usize = (0..l.num_components() as u32).map(|c| l.size_of(c)).sum();
            assert_eq!(total, n);
        }
    }

    fn oracle_connected(g: &Graph, u: Vertex, v: Vertex) -> bool {
        let mut seen = vec![false; g.n()];
        let mut stack = vec![u];
        seen[u as usize] = true;
        while let Some(x) = stack.pop() {
            if x == v {
                return true;
            }
            for &y in g.adj(x) {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        u == v
    }

    #[test]
    fn remainder_conventions() {
        let g = path(5);
        let all: Vec<Vertex> = (0..5).collect();
        let r = remainder(&g, &all);
        assert_eq!(r.num_components(), 0);
        assert_eq!(r.comp_id(3), None);
        assert_eq!(r.largest(), None);

        let r = remainder(&g, &[2]);
        assert_eq!(r.num_components(), 2);
        assert_eq!(r.comp_size_of_vertex(0), 2);
        assert_eq!(r.comp_size_of_vertex(4), 2);
        assert_eq!(r.comp_id(2), None);

        let r = remainder(&g, &[]);
        let c = components(&g);
        assert_eq!(r.num_components(), c.num_components());
        assert_eq!(r.largest_size(), c.largest_size());
    }

    #[test]
    fn kcore_k4() {
        let out = kcore(&Graph::complete(4), 3);
        assert_eq!(out.core_size(), 4);
        assert!(out.peel_order.is_empty());
        assert_eq!(out.mantle.num_components(), 0);
    }

    #[test]
    fn kcore_tree_is_empty_for_k2() {
        let out = kcore(&path(7), 2);
        assert_eq!(out.core_size(), 0);
        assert_eq!(out.peel_order.len(), 7);
    }

    #[test]
    fn kcore_cycle_plus_pendant() {
        // Brute force over all vertex subsets confirms the 2-core of C5 plus a
        // pendant is exactly the cycle.
        let mut edges: Vec<(Vertex, Vertex)> =
            (0..5).map(|i| (i, ((i + 1) % 5) as Vertex)).collect();
        edges.push((0, 5));
        let g = Graph::from_edges(6, edges).unwrap();
        let out = kcore(&g, 2);
        assert_eq!(out.core_vertices(), &[0, 1, 2, 3, 4]);
        assert_eq!(out.peel_order, vec![5]);
        assert_eq!(out.core_vertices(), oracle_kcore(&g, 2).as_slice());
    }

    /// Brute-force maximal min-degree->=k vertex subset (union of all valid
    /// subsets; valid sets are closed under union).
    fn oracle_kcore(g: &Graph, k: usize) -> Vec<Vertex> {
        let n = g.n();
        assert!(n <= 16);
        let adj: Vec<u32> = (0..n)
            .map(|v| g.adj(v as Vertex).iter().fold(0u32, |m, &w| m | (1 << w)))
            .collect();
        let mut best = 0u32;
        for mask in 0u32..(1 << n) {
            let ok = (0..n).all(|v| {
                mask & (1 << v) == 0 || ((adj[v] & mask).count_ones() as usize) >= k
            });
            if ok {
                best |= mask;
            }
        }
        (0..n as Vertex).filter(|&v| best & (1 << v) != 0).collect()
    }

    #[test]
    fn kcore_matches_brute_force_small() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(2024);
        for trial in 0..500 {
            let n = rng.random_range(1..=12usize);
            let p = rng.random::<f64>();
            let mut edges = Vec::new();
            for u in 0..n as Vertex {
                for v in u + 1..n as Vertex {
                    if rng.random::<f64>() < p {
                        edges.push((u, v));
                    }
                }
            }
            let g = Graph::from_edges(n, edges).unwrap();
            for k in 2..=4 {
                let got = kcore(&g, k);
                let expect = oracle_kcore(&g, k);
                assert_eq!(got.core_vertices(), expect.as_slice(), "trial {trial} k={k}");
                // Certificate: reverse deletion order is k-degenerate.
                let rev: Vec<Vertex> = got.peel_order.iter().rev().copied().collect();
                assert!(verify_degenerate_ordering(&g, got.core_vertices(), &rev, k).unwrap());
                // Core plus peel order partitions V.
                assert_eq!(got.core_size() + got.peel_order.len(), n);
                for &v in got.core_vertices() {
                    let inside = g.adj(v).iter().filter(|&&w| got.in_core(w)).count();
                    assert!(inside >= k);
                }
            }
        }
    }

    #[test]
    fn peeling_order_independence() {
        // Random tie-breaking must produce the same core set as lowest-id.
        use rand::seq::IndexedRandom;
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(31);
        for _ in 0..100 {
            let n = rng.random_range(2..=50usize);
            let c: f64 = rng.random_range(0.5..6.0);
            let g = crate::sample::sample_gnp_with(n, (c / n as f64).min(1.0), &mut rng).unwrap();
            let k = rng.random_range(2..=4usize);
            let out = kcore(&g, k);
            let random_core = kcore_random_ties(&g, k, &mut rng, |cands, r| {
                *cands.choose(r).unwrap()
            });
            assert_eq!(out.core_vertices(), random_core.as_slice());
        }
    }

    fn kcore_random_ties<R: rand::Rng>(
        g: &Graph,
        k: usize,
        rng: &mut R,
        pick: impl Fn(&[Vertex], &mut R) -> Vertex,
    ) -> Vec<Vertex> {
        let n = g.n();
        let mut deg: Vec<usize> = (0..n).map(|v| g.degree(v as Vertex)).collect();
        let mut removed = vec![false; n];
        loop {
            let cands: Vec<Vertex> = (0..n as Vertex)
                .filter(|&v| !removed[v as usize] && deg[v as usize] < k)
                .collect();
            if cands.is_empty() {
                break;
            }
            let v = pick(&cands, rng);
            removed[v as usize] = true;
            for &w in g.adj(v) {
                if !removed[w as usize] {
                    deg[w as usize] -= 1;
                }
            }
        }
        (0..n as Vertex).filter(|&v| !removed[v as usize]).collect()
    }

    #[test]
    fn degenerate_ordering_examples() {
        let k4 = Graph::complete(4);
        assert!(verify_degenerate_ordering(&k4, &[0, 1, 2, 3], &[], 3).unwrap());

        // Triangle, empty core, k=3: every permutation works (max 2 prior).
        let tri = cycle(3);
        assert!(verify_degenerate_ordering(&tri, &[], &[0, 1, 2], 3).unwrap());
        assert!(verify_degenerate_ordering(&tri, &[], &[2, 0, 1], 3).unwrap());

        // C5, empty core, k=2: checked over all 120 permutations, always
        // false (the last vertex has both neighbours earlier).
        let c5 = cycle(5);
        let mut order = [0u32, 1, 2, 3, 4];
        permute_all(&mut order, &mut |perm| {
            assert!(!verify_degenerate_ordering(&c5, &[], perm, 2).unwrap());
        });

        // Disjointness violation.
        assert!(verify_degenerate_ordering(&k4, &[0], &[0, 1], 3).is_err());
    }

    fn permute_all(items: &mut [Vertex], f: &mut impl FnMut(&[Vertex])) {
        let n = items.len();
        if n <= 1 {
            f(items);
            return;
        }
        for i in 0..n {
            items.swap(i, n - 1);
            permute_all_rec(items, n - 1, f);
            items.swap(i, n - 1);
        }
    }

    fn permute_all_rec(items: &mut [Vertex], len: usize, f: &mut impl FnMut(&[Vertex])) {
        if len <= 1 {
            f(items);
            return;
        }
        for i in 0..len {
            items.swap(i, len - 1);
            permute_all_rec(items, len - 1, f);
            items.swap(i, len - 1);
        }
    }

    #[test]
    fn local_kcore_isolated_root() {
        let g = Graph::empty(1);
        let b = crate::graph::ball(&g, 0, 2);
        let lc = local_kcore(&b, 1);
        assert!(lc.members().is_empty());
        assert!(!lc.contains_root());
    }

    #[test]
    fn local_kcore_k4_interior() {
        // K4 entirely strictly inside the ball (boundary empty): nothing
        // peels at k=3. Confirmed against the exhaustive maximal-subset
        // search below.
        let g = Graph::complete(4);
        let b = crate::graph::ball(&g, 0, 3);
        assert_eq!(b.boundary_size(), 0);
        let lc = local_kcore(&b, 3);
        assert_eq!(lc.members(), &[0, 1, 2, 3]);
        assert_eq!(oracle_local_core(&b, 3), vec![0, 1, 2, 3]);
    }

    #[test]
    fn local_kcore_star() {
        // Star with centre root at radius 1: leaves are boundary, so the
        // centre survives at k=2 iff it keeps >= 2 leaf neighbours.
        let star3 = Graph::from_edges(4, vec![(0, 1), (0, 2), (0, 3)]).unwrap();
        let b = crate::graph::ball(&star3, 0, 1);
        let lc = local_kcore(&b, 2);
        assert!(lc.contains_root());
        assert_eq!(lc.members(), &[0, 1, 2, 3]);

        let star1 = Graph::from_edges(2, vec![(0, 1)]).unwrap();
        let b = crate::graph::ball(&star1, 0, 1);
        let lc = local_kcore(&b, 2);
        assert!(!lc.contains_root());
        assert_eq!(lc.members(), &[1]);
    }

    /// Exhaustive maximal subset containing the boundary with every
    /// non-boundary member keeping >= k in-set neighbours.
    fn oracle_local_core(b: &LocalBall, k: usize) -> Vec<Vertex> {
        let sz = b.size();
        assert!(sz <= 16);
        let boundary: u32 = (0..sz as u32)
            .filter(|&i| b.is_boundary_index(i))
            .fold(0, |m, i| m | (1 << i));
        let adj: Vec<u32> = (0..sz as u32)
            .map(|i| b.adj_local(i).iter().fold(0u32, |m, &j| m | (1 << j)))
            .collect();
        let mut best = 0u32;
        for mask in 0u32..(1 << sz) {
            if mask & boundary != boundary {
                continue;
            }
            let ok = (0..sz).all(|i| {
                mask & (1 << i) == 0
                    || boundary & (1 << i) != 0
                    || (adj[i] & mask).count_ones() as usize >= k
            });
            if ok {
                best |= mask;
            }
        }
        let mut out: Vec<Vertex> = (0..sz as u32)
            .filter(|&i| best & (1 << i) != 0)
            .map(|i| b.member(i))
            .collect();
        out.sort_unstable();
        out
    }

    #[test]
    fn local_kcore_matches_brute_force() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut tested = 0;
        while tested < 300 {
            let n = rng.random_range(2..=24usize);
            let c: f64 = rng.random_range(0.5..6.0);
            let g = crate::sample::sample_gnp_with(n, (c / n as f64).min(1.0), &mut rng).unwrap();
            let v = rng.random_range(0..n as u32);
            let ell = rng.random_range(0..=3usize);
            let b = crate::graph::ball(&g, v, ell);
            if b.size() > 14 {
                continue;
            }
            for k in 1..=4 {
                let got = local_kcore(&b, k);
                assert_eq!(got.members(), oracle_local_core(&b, k).as_slice());
            }
            tested += 1;
        }
    }

    #[test]
    fn event_e_numeric_example() {
        // ceil((ln 1e5)^4) = 17569; a single component of 2e4 with the rest
        // tiny is a giant, all-small components is not.
        let n = 100_000;
        assert_eq!(log4_threshold(n), 17_569);
        let mut assign: Vec<Option<u32>> = vec![Some(0); 20_000];
        for i in 0..1000u32 {
            for _ in 0..50 {
                assign.push(Some(1 + i));
            }
        }
        assign.resize(n, None);
        let big = ComponentLabeling::from_assignments(&assign).unwrap();
        assert!(event_e_giant(&[&big], n));
        assert!(!event_e_mantle(&[&big], n));

        let small: Vec<Option<u32>> = (0..n as u32).map(|v| Some(v / 10)).collect();
        let small = ComponentLabeling::from_assignments(&small).unwrap();
        assert!(!event_e_giant(&[&small], n));
        assert!(event_e_mantle(&[&small], n));

        // Empty mantle passes the mantle variant.
        let empty = ComponentLabeling::from_assignments(&vec![None; n]).unwrap();
        assert!(event_e_mantle(&[&empty], n));
    }
}

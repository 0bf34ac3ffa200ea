//! Membership indicators phi and their ball-local versions phi_l, plus
//! weighted neighbourhood counts and truncations.
//!
//! Two evaluation routes exist for every local indicator. The reference route
//! goes through an extracted [`LocalBall`] and is the definitional one; the
//! fast route works in place on the graph with early exits and exact
//! structural shortcuts (a vertex of the global core is always in its local
//! core; a vertex whose remainder component fits strictly inside the ball
//! radius never is). The two routes are checked against each other in tests
//! and must agree exactly.

use crate::decomp::{self, ComponentLabeling, CoreResult};
use crate::graph::{ball, Graph, LocalBall, Vertex};

/// Weight rule on rooted balls: a pure function of the isomorphism class of
/// the ball, valued in [0,1].
pub trait WeightScheme {
    fn radius(&self) -> usize;
    fn evaluate(&self, ball: &LocalBall) -> f64;
}

/// Giant-membership localization: 1 if the ball has nonempty boundary or more
/// than ceil((ln n)^4) vertices.
#[derive(Clone, Copy, Debug)]
pub struct GiantLocalScheme {
    pub ell: usize,
    pub size_threshold: usize,
}

impl GiantLocalScheme {
    pub fn new(ell: usize, n: usize) -> Self {
        GiantLocalScheme { ell, size_threshold: decomp::log4_threshold(n) }
    }
}

impl WeightScheme for GiantLocalScheme {
    fn radius(&self) -> usize {
        self.ell
    }

    fn evaluate(&self, b: &LocalBall) -> f64 {
        if b.boundary_size() > 0 || b.size() > self.size_threshold {
            1.0
        } else {
            0.0
        }
    }
}

/// Core-membership localization: 1 if the root survives in the l-local
/// k-core of its ball.
#[derive(Clone, Copy, Debug)]
pub struct CoreLocalScheme {
    pub ell: usize,
    pub k: usize,
}

impl WeightScheme for CoreLocalScheme {
    fn radius(&self) -> usize {
        self.ell
    }

    fn evaluate(&self, b: &LocalBall) -> f64 {
        if decomp::local_kcore(b, self.k).contains_root() {
            1.0
        } else {
            0.0
        }
    }
}

/// Constant weight 1 on every ball.
#[derive(Clone, Copy, Debug)]
pub struct ConstOneScheme {
    pub ell: usize,
}

impl WeightScheme for ConstOneScheme {
    fn radius(&self) -> usize {
        self.ell
    }

    fn evaluate(&self, _: &LocalBall) -> f64 {
        1.0
    }
}

/// Indicator of membership in the designated largest component.
pub fn phi_giant(labeling: &ComponentLabeling, v: Vertex) -> bool {
    labeling.in_largest(v)
}

/// Ball-local giant indicator: nonempty boundary or ball bigger than
/// ceil((ln n)^4).
pub fn phi_giant_local(b: &LocalBall, n: usize) -> bool {
    b.boundary_size() > 0 || b.size() > decomp::log4_threshold(n)
}

/// Ball-local core indicator: root contained in the l-local k-core.
pub fn phi_core_local(b: &LocalBall, k: usize) -> bool {
    decomp::local_kcore(b, k).contains_root()
}

/// A weighted neighbourhood count X and its truncation Y (tree-shaped balls
/// with between 2 and t vertices only).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CountPair {
    pub x: f64,
    pub y: f64,
    pub t: usize,
}

/// Default truncation bound t(c, l): ceil((4c)^l), capped at
/// ceil((ln n)^4). Any bound growing with l and dominating typical tree-ball
/// sizes works; this one is exposed as a CLI flag.
pub fn default_truncation_bound(c: f64, ell: usize, n: usize) -> usize {
    let raw = (4.0 * c).powi(ell as i32);
    let cap = decomp::log4_threshold(n).max(2);
    if !raw.is_finite() || raw >= cap as f64 {
        cap
    } else {
        (raw.ceil() as usize).max(2)
    }
}

/// Reference evaluation: extracts every ball and applies the scheme.
/// x sums the weights; y sums weights of tree balls with 2 <= size <= t.
/// Summation runs in vertex order, so results are bit-reproducible.
pub fn weighted_count<S: WeightScheme + ?Sized>(g: &Graph, scheme: &S, t: usize) -> CountPair {
    let ell = scheme.radius();
    let mut x = 0.0;
    let mut y = 0.0;
    for v in 0..g.n() as Vertex {
        let b = ball(g, v, ell);
        let w = scheme.evaluate(&b);
        x += w;
        if b.is_tree() && b.size() >= 2 && b.size() <= t {
            y += w;
        }
    }
    CountPair { x, y, t }
}

/// (Z_tilde_l, Z_hat_l) for the giant scheme, computed with the fast census.
pub fn truncated_giant(g: &Graph, ell: usize, t: usize) -> CountPair {
    let labeling = decomp::components(g);
    let mut scratch = Scratch::new(g.n());
    let (z_tilde, z_hat, _) = giant_counts(g, &labeling, ell, t, &mut scratch);
    CountPair { x: z_tilde as f64, y: z_hat as f64, t }
}

/// (Y_tilde_l, Y_hat_l) for the core scheme, computed with the fast census.
pub fn truncated_core(g: &Graph, ell: usize, t: usize, k: usize) -> CountPair {
    let core = decomp::kcore(g, k);
    let mut scratch = Scratch::new(g.n());
    let (y_tilde, y_hat, _) = core_counts(g, &core, ell, t, &mut scratch);
    CountPair { x: y_tilde as f64, y: y_hat as f64, t }
}

// ---------------------------------------------------------------------------
// Fast in-place evaluation machinery.
// ---------------------------------------------------------------------------

/// Reusable per-thread BFS/peel buffers with epoch-stamped membership, so a
/// full clear costs O(1) between vertices.
pub(crate) struct Scratch {
    epoch: u32,
    mark: Vec<u32>,
    loc: Vec<u32>,
    dist: Vec<u16>,
    queue: Vec<Vertex>,
    removed: Vec<u32>,
    live: Vec<u32>,
}

impl Scratch {
    pub(crate) fn new(n: usize) -> Self {
        Scratch {
            epoch: 0,
            mark: vec![0; n],
            loc: vec![0; n],
            dist: vec![0; n],
            queue: Vec::with_capacity(1024),
            removed: vec![0; n],
            live: vec![0; n],
        }
    }

    fn begin(&mut self) -> u32 {
        if self.epoch == u32::MAX {
            self.mark.fill(0);
            self.removed.fill(0);
            self.epoch = 0;
        }
        self.epoch += 1;
        self.queue.clear();
        self.epoch
    }
}

/// Fast phi_l for the giant scheme: BFS from `v`, returning true as soon as a
/// vertex at distance exactly `ell` is discovered or the ball exceeds `thr`
/// vertices.
pub(crate) fn phi_giant_local_fast(
    g: &Graph,
    v: Vertex,
    ell: usize,
    thr: usize,
    s: &mut Scratch,
) -> bool {
    if ell == 0 {
        return true; // the root itself is the distance-0 boundary
    }
    let epoch = s.begin();
    s.mark[v as usize] = epoch;
    s.dist[v as usize] = 0;
    s.queue.push(v);
    let mut size = 1usize;
    if size > thr {
        return true;
    }
    let mut head = 0;
    while head < s.queue.len() {
        let x = s.queue[head];
        head += 1;
        let d = s.dist[x as usize] as usize;
        if d >= ell {
            continue;
        }
        for &y in g.adj(x) {
            if s.mark[y as usize] != epoch {
                s.mark[y as usize] = epoch;
                s.dist[y as usize] = (d + 1) as u16;
                if d + 1 == ell {
                    return true;
                }
                size += 1;
                if size > thr {
                    return true;
                }
                s.queue.push(y);
            }
        }
    }
    false
}

/// Per-vertex census for the giant scheme: returns (phi_l, truncation term).
/// The truncation term is phi_l AND the ball is a tree with 2 <= size <= t.
/// Exits early once both outputs are decided.
pub(crate) fn giant_vertex_census(
    g: &Graph,
    v: Vertex,
    ell: usize,
    thr: usize,
    t: usize,
    s: &mut Scratch,
) -> (bool, bool) {
    let epoch = s.begin();
    s.mark[v as usize] = epoch;
    s.dist[v as usize] = 0;
    s.loc[v as usize] = 0;
    s.queue.push(v);
    let mut size = 1usize;
    let mut edges = 0usize;
    let mut scanned = 0usize;
    let mut boundary = ell == 0;
    let mut tree_dead = false;
    let cap = thr.max(t);
    let mut head = 0;
    while head < s.queue.len() {
        let x = s.queue[head];
        let x_loc = head as u32;
        head += 1;
        scanned += 1;
        let d = s.dist[x as usize] as usize;
        for &y in g.adj(x) {
            if s.mark[y as usize] == epoch {
                if s.loc[y as usize] < x_loc {
                    edges += 1;
                    if edges > scanned - 1 {
                        tree_dead = true;
                    }
                }
            } else if d < ell {
                s.mark[y as usize] = epoch;
                s.dist[y as usize] = (d + 1) as u16;
                s.loc[y as usize] = s.queue.len() as u32;
                s.queue.push(y);
                size += 1;
                if d + 1 == ell {
                    boundary = true;
                }
                if size > t {
                    tree_dead = true;
                }
            }
        }
        if tree_dead && (boundary || size > thr) {
            return (true, false);
        }
        if size > cap {
            return (true, false); // bigger than both thr and t
        }
    }
    let phi = boundary || size > thr;
    let y = phi && !tree_dead && edges + 1 == size && size >= 2 && size <= t;
    (phi, y)
}

/// Tree-ball probe used by the core truncation: Some(size) when the ball of
/// radius `ell` is a tree with at most `t` vertices, None otherwise.
pub(crate) fn tree_ball_census(
    g: &Graph,
    v: Vertex,
    ell: usize,
    t: usize,
    s: &mut Scratch,
) -> Option<usize> {
    let epoch = s.begin();
    s.mark[v as usize] = epoch;
    s.dist[v as usize] = 0;
    s.loc[v as usize] = 0;
    s.queue.push(v);
    let mut size = 1usize;
    let mut edges = 0usize;
    let mut scanned = 0usize;
    let mut head = 0;
    while head < s.queue.len() {
        let x = s.queue[head];
        let x_loc = head as u32;
        head += 1;
        scanned += 1;
        let d = s.dist[x as usize] as usize;
        for &y in g.adj(x) {
            if s.mark[y as usize] == epoch {
                if s.loc[y as usize] < x_loc {
                    edges += 1;
                    // In a tree, each scanned non-root vertex sees exactly one
                    // earlier-discovered neighbour (its parent).
                    if edges > scanned - 1 {
                        return None;
                    }
                }
            } else if d < ell {
                s.mark[y as usize] = epoch;
                s.dist[y as usize] = (d + 1) as u16;
                s.loc[y as usize] = s.queue.len() as u32;
                s.queue.push(y);
                size += 1;
                if size > t {
                    return None;
                }
            }
        }
    }
    if edges + 1 == size {
        Some(size)
    } else {
        None
    }
}

/// Fast phi_l for the core scheme.
///
/// Exact shortcuts, both proved by exhibiting the surviving set and both
/// cross-checked against the definitional route in tests:
/// - a global core vertex always lies in its local core ((K within the ball)
///   plus the boundary sustains itself);
/// - a mantle vertex whose mantle component has at most `ell` vertices peels
///   locally exactly as it does globally, since its whole component sits
///   strictly inside the ball with no protected vertex.
///
/// Otherwise the ball is walked and only mantle vertices are peeled: interior
/// mantle vertices start at their full graph degree (all their neighbours are
/// in the ball) and lose support only when interior mantle neighbours are
/// removed.
pub(crate) fn core_phi_local_fast(
    g: &Graph,
    v: Vertex,
    ell: usize,
    k: usize,
    core: &CoreResult,
    s: &mut Scratch,
) -> bool {
    if core.in_core(v) || ell == 0 {
        return true;
    }
    let comp_size = core.mantle.comp_size_of_vertex(v);
    if comp_size <= ell {
        return false;
    }
    // Full-ball BFS.
    let epoch = s.begin();
    s.mark[v as usize] = epoch;
    s.dist[v as usize] = 0;
    s.queue.push(v);
    let mut head = 0;
    while head < s.queue.len() {
        let x = s.queue[head];
        head += 1;
        let d = s.dist[x as usize] as usize;
        if d >= ell {
            continue;
        }
        for &y in g.adj(x) {
            if s.mark[y as usize] != epoch {
                s.mark[y as usize] = epoch;
                s.dist[y as usize] = (d + 1) as u16;
                s.queue.push(y);
            }
        }
    }
    // Peel interior mantle vertices below k live neighbours.
    let ball_len = s.queue.len();
    let mut pending: Vec<Vertex> = Vec::new();
    for i in 0..ball_len {
        let x = s.queue[i];
        if !core.in_core(x) && (s.dist[x as usize] as usize) < ell {
            let deg = g.degree(x) as u32;
            s.live[x as usize] = deg;
            if (deg as usize) < k {
                pending.push(x);
                s.removed[x as usize] = epoch;
            }
        }
    }
    while let Some(x) = pending.pop() {
        for &y in g.adj(x) {
            if s.mark[y as usize] == epoch
                && !core.in_core(y)
                && (s.dist[y as usize] as usize) < ell
                && s.removed[y as usize] != epoch
            {
                s.live[y as usize] -= 1;
                if (s.live[y as usize] as usize) < k {
                    s.removed[y as usize] = epoch;
                    pending.push(y);
                }
            }
        }
    }
    s.removed[v as usize] != epoch
}

/// Full-graph giant census: (Z_tilde, Z_hat, #{v: phi(v) != phi_l(v)}).
pub(crate) fn giant_counts(
    g: &Graph,
    labeling: &ComponentLabeling,
    ell: usize,
    t: usize,
    s: &mut Scratch,
) -> (u64, u64, u64) {
    let n = g.n();
    let thr = decomp::log4_threshold(n);
    let mut z_tilde = 0u64;
    let mut z_hat = 0u64;
    let mut diff = 0u64;
    for v in 0..n as Vertex {
        let phi = labeling.in_largest(v);
        let comp = labeling.comp_size_of_vertex(v);
        let (phi_l, y) = if comp <= ell.min(thr) {
            (false, false) // component exhausted strictly inside the ball
        } else {
            giant_vertex_census(g, v, ell, thr, t, s)
        };
        z_tilde += phi_l as u64;
        z_hat += y as u64;
        diff += (phi != phi_l) as u64;
    }
    (z_tilde, z_hat, diff)
}

/// Full-graph core census: (Y_tilde, Y_hat, #{v: phi(v) != phi_l(v)}).
pub(crate) fn core_counts(
    g: &Graph,
    core: &CoreResult,
    ell: usize,
    t: usize,
    s: &mut Scratch,
) -> (u64, u64, u64) {
    let n = g.n();
    let mut y_tilde = 0u64;
    let mut y_hat = 0u64;
    let mut diff = 0u64;
    for v in 0..n as Vertex {
        let phi = core.in_core(v);
        let phi_l = core_phi_local_fast(g, v, ell, core.k, core, s);
        y_tilde += phi_l as u64;
        if phi_l && tree_ball_census(g, v, ell, t, s).is_some_and(|sz| sz >= 2) {
            y_hat += 1;
        }
        diff += (phi != phi_l) as u64;
    }
    (y_tilde, y_hat, diff)
}

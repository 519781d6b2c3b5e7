use std::collections::{HashMap, HashSet, VecDeque};

use serde::{Deserialize, Serialize};

use crate::graph::{Parameters, RegularGraph, SimpleGraph};

/// Radius-`r` neighborhood of a vertex set, with its induced edges.
#[derive(Clone, Debug)]
pub struct Ball {
    pub centers: Vec<usize>,
    pub radius: usize,
    /// BFS order; centers first.
    pub vertices: Vec<usize>,
    dist: HashMap<usize, usize>,
    /// Induced edges `(u, v)`, `u < v`, sorted.
    pub edges: Vec<(usize, usize)>,
}

impl Ball {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }

    pub fn contains(&self, v: usize) -> bool {
        self.dist.contains_key(&v)
    }

    /// Distance from the center set, if `v` is in the ball.
    pub fn dist(&self, v: usize) -> Option<usize> {
        self.dist.get(&v).copied()
    }

    pub fn vertex_set(&self) -> HashSet<usize> {
        self.vertices.iter().copied().collect()
    }

    /// Induced subgraph with vertex `k` standing for `self.vertices[k]`.
    pub fn subgraph(&self) -> SimpleGraph {
        let index = self.local_index();
        let local: Vec<(usize, usize)> =
            self.edges.iter().map(|(u, v)| (index[u], index[v])).collect();
        SimpleGraph::from_edges(self.vertices.len(), &local).expect("induced edges are simple")
    }

    pub fn local_index(&self) -> HashMap<usize, usize> {
        self.vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect()
    }

    pub fn is_tree(&self) -> bool {
        excess(self) == 0
    }
}

/// BFS ball `B_r(centers)` in `g`.
pub fn ball(g: &SimpleGraph, centers: &[usize], r: usize) -> Ball {
    ball_avoiding(g, centers, r, &HashSet::new())
}

/// BFS ball in the graph `g` with the vertices `avoid` deleted.
pub fn ball_avoiding(g: &SimpleGraph, centers: &[usize], r: usize, avoid: &HashSet<usize>) -> Ball {
    let mut dist = HashMap::new();
    let mut vertices = Vec::new();
    let mut queue = VecDeque::new();
    for &c in centers {
        if !avoid.contains(&c) && !dist.contains_key(&c) {
            dist.insert(c, 0);
            vertices.push(c);
            queue.push_back(c);
        }
    }
    while let Some(u) = queue.pop_front() {
        let du = dist[&u];
        if du == r {
            continue;
        }
        for &v in g.neighbors(u) {
            if avoid.contains(&v) || dist.contains_key(&v) {
                continue;
            }
            dist.insert(v, du + 1);
            vertices.push(v);
            queue.push_back(v);
        }
    }
    let mut edges = Vec::new();
    for &u in &vertices {
        for &v in g.neighbors(u) {
            if v > u && dist.contains_key(&v) {
                edges.push((u, v));
            }
        }
    }
    edges.sort_unstable();
    Ball {
        centers: centers.to_vec(),
        radius: r,
        vertices,
        dist,
        edges,
    }
}

/// Graph distance capped at `cap`; `None` if farther (or disconnected).
pub fn distance(g: &SimpleGraph, u: usize, v: usize, cap: usize) -> Option<usize> {
    distance_avoiding(g, &[u], &[v], cap, &HashSet::new())
}

/// Distance between two vertex sets in `g` with `avoid` deleted, capped at `cap`.
pub fn distance_avoiding(
    g: &SimpleGraph,
    from: &[usize],
    to: &[usize],
    cap: usize,
    avoid: &HashSet<usize>,
) -> Option<usize> {
    let targets: HashSet<usize> = to.iter().copied().filter(|v| !avoid.contains(v)).collect();
    if targets.is_empty() {
        return None;
    }
    let mut seen: HashSet<usize> = HashSet::new();
    let mut frontier: Vec<usize> = Vec::new();
    for &s in from {
        if !avoid.contains(&s) && seen.insert(s) {
            if targets.contains(&s) {
                return Some(0);
            }
            frontier.push(s);
        }
    }
    for step in 1..=cap {
        let mut next = Vec::new();
        for &u in &frontier {
            for &v in g.neighbors(u) {
                if avoid.contains(&v) || !seen.insert(v) {
                    continue;
                }
                if targets.contains(&v) {
                    return Some(step);
                }
                next.push(v);
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }
    None
}

/// Largest excess `edges - vertices + 1` over the connected components of the
/// ball's induced subgraph; 0 iff the ball is a forest.
pub fn excess(b: &Ball) -> usize {
    component_excesses(&b.subgraph()).into_iter().max().unwrap_or(0)
}

fn component_excesses(g: &SimpleGraph) -> Vec<usize> {
    let n = g.n();
    let mut comp = vec![usize::MAX; n];
    let mut out = Vec::new();
    for s in 0..n {
        if comp[s] != usize::MAX {
            continue;
        }
        let id = out.len();
        let mut stack = vec![s];
        comp[s] = id;
        let (mut nv, mut deg_sum) = (0usize, 0usize);
        while let Some(u) = stack.pop() {
            nv += 1;
            deg_sum += g.degree(u);
            for &v in g.neighbors(u) {
                if comp[v] == usize::MAX {
                    comp[v] = id;
                    stack.push(v);
                }
            }
        }
        out.push(deg_sum / 2 + 1 - nv);
    }
    out
}

pub fn is_forest(g: &SimpleGraph) -> bool {
    component_excesses(g).into_iter().all(|e| e == 0)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NeighborhoodReport {
    pub radius: usize,
    pub bad_vertex_count: usize,
    pub max_excess: usize,
    /// `N^c`, the allowed number of vertices without a tree neighborhood.
    pub threshold: f64,
    pub pass: bool,
}

/// Checks the typical-geometry event: at most `N^c` vertices whose radius-`R`
/// ball is not a tree, and every radius-`R` ball has excess at most 1.
pub fn neighborhood_check(g: &RegularGraph, params: &Parameters) -> NeighborhoodReport {
    let r = params.radius;
    let mut bad = 0;
    let mut max_excess = 0;
    for v in 0..g.n() {
        let e = excess(&ball(g.as_graph(), &[v], r));
        if e > 0 {
            bad += 1;
        }
        max_excess = max_excess.max(e);
    }
    let threshold = (g.n() as f64).powf(params.radius_exponent);
    NeighborhoodReport {
        radius: r,
        bad_vertex_count: bad,
        max_excess,
        threshold,
        pass: (bad as f64) <= threshold && max_excess <= 1,
    }
}

/// Edges leaving the ball, oriented inside to outside, sorted by `(l, a)`.
pub fn boundary_edges(g: &SimpleGraph, t: &Ball) -> Vec<(usize, usize)> {
    let mut out: Vec<(usize, usize)> = t
        .vertices
        .iter()
        .flat_map(|&l| {
            g.neighbors(l)
                .iter()
                .filter(|&&a| !t.contains(a))
                .map(move |&a| (l, a))
        })
        .collect();
    out.sort_unstable();
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cycle(k: usize) -> SimpleGraph {
        let edges: Vec<_> = (0..k).map(|i| (i, (i + 1) % k)).collect();
        SimpleGraph::from_edges(k, &edges).unwrap()
    }

    /// Infinite-tree stand-in: the radius-`depth` ball of the d-regular tree.
    fn regular_tree(d: usize, depth: usize) -> SimpleGraph {
        let mut g = SimpleGraph::empty(1);
        let mut frontier = vec![0];
        for level in 0..depth {
            let mut next = Vec::new();
            for &u in &frontier {
                let kids = if level == 0 { d } else { d - 1 };
                for _ in 0..kids {
                    let v = g.add_vertex();
                    g.add_edge(u, v).unwrap();
                    next.push(v);
                }
            }
            frontier = next;
        }
        g
    }

    #[test]
    fn radius_zero_ball_is_the_centers() {
        let k4 = RegularGraph::complete(4).unwrap();
        let b = ball(k4.as_graph(), &[2], 0);
        assert_eq!(b.vertices, vec![2]);
        assert!(b.edges.is_empty());
        assert_eq!(boundary_edges(k4.as_graph(), &b).len(), 3);
    }

    #[test]
    fn k4_radius_one_ball_covers_everything() {
        let k4 = RegularGraph::complete(4).unwrap();
        for v in 0..4 {
            let b = ball(k4.as_graph(), &[v], 1);
            assert_eq!(b.len(), 4);
            assert_eq!(excess(&b), 3);
        }
    }

    #[test]
    fn excess_of_trees_and_cycles() {
        let t = regular_tree(3, 3);
        assert_eq!(excess(&ball(&t, &[0], 10)), 0);
        for k in 3..8 {
            assert_eq!(excess(&ball(&cycle(k), &[0], k)), 1);
        }
    }

    #[test]
    fn tree_boundary_count_matches_branching() {
        let t = regular_tree(3, 4);
        for ell in 0..3 {
            let b = ball(&t, &[0], ell);
            let bd = boundary_edges(&t, &b);
            assert_eq!(bd.len(), 3 * 2usize.pow(ell as u32));
            assert!(bd.iter().all(|&(l, a)| b.contains(l) && !b.contains(a)));
        }
    }

    #[test]
    fn distances_respect_avoided_vertices() {
        let c = cycle(8);
        assert_eq!(distance(&c, 0, 4, 10), Some(4));
        assert_eq!(distance(&c, 0, 3, 2), None);
        let avoid: HashSet<usize> = [1].into_iter().collect();
        assert_eq!(distance_avoiding(&c, &[0], &[2], 10, &avoid), Some(6));
    }

    #[test]
    fn k4_fails_neighborhood_check() {
        let k4 = RegularGraph::complete(4).unwrap();
        let params = Parameters::new(4, 3).with_radius(1);
        let rep = neighborhood_check(&k4, &params);
        assert!(!rep.pass);
        assert_eq!(rep.max_excess, 3);
        assert_eq!(rep.bad_vertex_count, 4);
    }
}

use std::collections::HashSet;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{ball, ball_avoiding, boundary_edges, distance_avoiding, is_forest, Parameters, RegularGraph};

/// One resampling draw around `center`: boundary edges `(l_α, a_α)` of
/// `B_ell(center)` paired with oriented edges `(b_α, c_α)` drawn uniformly
/// (with repetition) from the graph with the ball deleted.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResamplingData {
    pub center: usize,
    pub companion: Option<usize>,
    pub ell: usize,
    pub isolation_radius: usize,
    pub ball: Vec<usize>,
    pub boundary: Vec<(usize, usize)>,
    pub sampled: Vec<(usize, usize)>,
    pub admissible: Vec<bool>,
}

impl ResamplingData {
    pub fn mu(&self) -> usize {
        self.boundary.len()
    }

    /// Indices of the admissible switchings.
    pub fn admissible_set(&self) -> Vec<usize> {
        (0..self.mu()).filter(|&a| self.admissible[a]).collect()
    }

    /// `(l, a, b, c)` for switching `alpha`.
    pub fn quad(&self, alpha: usize) -> [usize; 4] {
        let (l, a) = self.boundary[alpha];
        let (b, c) = self.sampled[alpha];
        [l, a, b, c]
    }
}

pub fn propose<R: Rng + ?Sized>(
    g: &RegularGraph,
    center: usize,
    params: &Parameters,
    rng: &mut R,
) -> Result<ResamplingData> {
    let ell = params.ell;
    let t = ball(g.as_graph(), &[center], ell);
    let boundary = boundary_edges(g.as_graph(), &t);
    let inside = t.vertex_set();
    let outer: Vec<(usize, usize)> = g
        .directed_edges()
        .into_iter()
        .filter(|(u, v)| !inside.contains(u) && !inside.contains(v))
        .collect();
    if outer.is_empty() {
        return Err(Error::Graph("no edges outside the resampling ball".into()));
    }
    let sampled: Vec<(usize, usize)> = (0..boundary.len())
        .map(|_| outer[rng.random_range(0..outer.len())])
        .collect();
    let mut data = ResamplingData {
        center,
        companion: None,
        ell,
        isolation_radius: params.isolation_radius,
        ball: t.vertices.clone(),
        boundary,
        sampled,
        admissible: Vec::new(),
    };
    data.admissible = admissibility(g, &data, &inside);
    Ok(data)
}

/// `I_α`: (1) the radius-r ball around `{a, b, c}` in the graph without the
/// ball, plus the edge `{a, b}`, is a tree; (2) the triple is at distance > r
/// from every other triple.
fn admissibility(g: &RegularGraph, s: &ResamplingData, inside: &HashSet<usize>) -> Vec<bool> {
    let r = s.isolation_radius;
    let triples: Vec<[usize; 3]> = (0..s.mu())
        .map(|al| {
            let [_, a, b, c] = s.quad(al);
            [a, b, c]
        })
        .collect();
    (0..s.mu())
        .map(|al| {
            let [a, b, c] = triples[al];
            if a == b || a == c || g.has_edge(a, b) {
                return false;
            }
            let nb = ball_avoiding(g.as_graph(), &[a, b, c], r, inside);
            let mut local = nb.subgraph();
            let idx = nb.local_index();
            if local.add_edge(idx[&a], idx[&b]).is_err() || !is_forest(&local) {
                return false;
            }
            // with {a, b} added the neighborhood is connected, so forest = tree
            (0..s.mu()).filter(|&be| be != al).all(|be| {
                distance_avoiding(g.as_graph(), &triples[al], &triples[be], r, inside).is_none()
            })
        })
        .collect()
}

/// Result of applying the admissible switchings.
#[derive(Clone, Debug)]
pub struct Switched {
    pub graph: RegularGraph,
    pub applied: Vec<usize>,
    /// Admissible indices whose defensive re-check failed; left in place.
    pub conflicts: Vec<usize>,
}

/// Simple switching: `{l,a},{b,c}` → `{l,c},{a,b}`.
pub fn switch(g: &RegularGraph, quad: [usize; 4]) -> Result<RegularGraph> {
    let mut work = g.as_graph().clone();
    switch_in_place(&mut work, quad)?;
    RegularGraph::new(work, g.d())
}

fn switch_in_place(g: &mut crate::graph::SimpleGraph, [l, a, b, c]: [usize; 4]) -> Result<()> {
    let distinct = l != a && l != b && l != c && a != b && a != c && b != c;
    if !distinct {
        return Err(Error::Conflict(format!("vertices {l},{a},{b},{c} not distinct")));
    }
    if !g.has_edge(l, a) || !g.has_edge(b, c) {
        return Err(Error::Conflict(format!("{{{l},{a}}} or {{{b},{c}}} is not an edge")));
    }
    if g.has_edge(l, c) || g.has_edge(a, b) {
        return Err(Error::Conflict(format!("{{{l},{c}}} or {{{a},{b}}} already present")));
    }
    g.remove_edge(l, a)?;
    g.remove_edge(b, c)?;
    g.add_edge(l, c)?;
    g.add_edge(a, b)?;
    Ok(())
}

/// Data undoing [`switch`]: switching `(l, c), (b, a)` restores the edges.
pub fn reverse([l, a, b, c]: [usize; 4]) -> [usize; 4] {
    [l, c, b, a]
}

/// Performs the admissible switchings in index order; inadmissible ones are
/// left in place.
pub fn apply(g: &RegularGraph, s: &ResamplingData) -> Result<Switched> {
    let mut work = g.as_graph().clone();
    let mut applied = Vec::new();
    let mut conflicts = Vec::new();
    for al in s.admissible_set() {
        match switch_in_place(&mut work, s.quad(al)) {
            Ok(()) => applied.push(al),
            Err(Error::Conflict(_)) => conflicts.push(al),
            Err(e) => return Err(e),
        }
    }
    Ok(Switched {
        graph: RegularGraph::new(work, g.d())?,
        applied,
        conflicts,
    })
}

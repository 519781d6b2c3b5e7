use std::collections::VecDeque;

use crate::analytic::{check_degree, m_d, m_sc, SpectralPoint};
use crate::error::{Error, Result};
use crate::graph::SimpleGraph;
use crate::linalg::{inverse_with_condition, Matrix};
use crate::scalar::{cplx, Cplx, Real};

/// Condition numbers above this mark `(z, Δ)` as numerically resonant.
pub const MAX_CONDITION: f64 = 1e12;
/// Largest graph the dense operator will invert.
pub const DENSE_TREE_LIMIT: usize = 4096;

/// Decay factor `-m_sc / √(d-1)` per step along a tree path.
fn hop<T: Real>(p: SpectralPoint<T>, d: usize) -> Cplx<T> {
    -m_sc(p) / T::count(d - 1).sqrt()
}

/// Green's function of the infinite d-regular tree between vertices at
/// distance `dist`.
pub fn tree_green_regular<T: Real>(dist: usize, p: SpectralPoint<T>, d: usize) -> Result<Cplx<T>> {
    Ok(m_d(p, d)? * hop(p, d).powu(dist as u32))
}

/// Green's function of the infinite rooted (d-1)-ary tree; `anc` is the depth
/// of the deepest common ancestor of the two vertices.
pub fn tree_green_ary<T: Real>(
    dist: usize,
    anc: usize,
    p: SpectralPoint<T>,
    d: usize,
) -> Result<Cplx<T>> {
    let q = hop(p, d);
    let one = cplx(T::one(), T::zero());
    Ok(m_d(p, d)? * (one - q.powu(2 * anc as u32 + 2)) * q.powu(dist as u32))
}

/// Finite rooted tree with vertices numbered in BFS order (parents first).
#[derive(Clone, Debug)]
pub struct RootedTree {
    pub graph: SimpleGraph,
    pub root: usize,
    pub parent: Vec<Option<usize>>,
    pub depth: Vec<usize>,
}

impl RootedTree {
    fn grow(root_children: usize, children: usize, depth: usize) -> Self {
        let mut graph = SimpleGraph::empty(1);
        let mut parent = vec![None];
        let mut level = vec![0];
        let mut frontier = vec![0];
        for k in 0..depth {
            let mut next = Vec::new();
            for &u in &frontier {
                let kids = if k == 0 { root_children } else { children };
                for _ in 0..kids {
                    let v = graph.add_vertex();
                    graph.add_edge(u, v).expect("fresh vertex");
                    parent.push(Some(u));
                    level.push(k + 1);
                    next.push(v);
                }
            }
            frontier = next;
        }
        Self {
            graph,
            root: 0,
            parent,
            depth: level,
        }
    }

    pub fn len(&self) -> usize {
        self.graph.n()
    }

    pub fn is_empty(&self) -> bool {
        self.graph.n() == 0
    }

    /// Depth of the deepest common ancestor.
    pub fn ancestor_depth(&self, mut i: usize, mut j: usize) -> usize {
        while i != j {
            if self.depth[i] >= self.depth[j] {
                i = self.parent[i].expect("non-root");
            } else {
                j = self.parent[j].expect("non-root");
            }
        }
        self.depth[i]
    }

    pub fn dist(&self, i: usize, j: usize) -> usize {
        self.depth[i] + self.depth[j] - 2 * self.ancestor_depth(i, j)
    }

    /// The tree with one extra leaf hung on the root; returns the new vertex.
    /// Removing it again leaves the root with a full-degree weight profile.
    pub fn with_stub(&self) -> (SimpleGraph, usize) {
        let mut g = self.graph.clone();
        let s = g.add_vertex();
        g.add_edge(self.root, s).expect("fresh vertex");
        (g, s)
    }
}

/// Ball of radius `depth` in the d-regular tree.
pub fn regular_tree(d: usize, depth: usize) -> RootedTree {
    RootedTree::grow(d, d - 1, depth)
}

/// Rooted (d-1)-ary tree of height `depth`.
pub fn ary_tree(d: usize, depth: usize) -> RootedTree {
    RootedTree::grow(d - 1, d - 1, depth)
}

/// Diagonal of the weighted operator with degrees taken in the full graph,
/// restricted to the kept vertices.
struct Reduced<T: Real> {
    kept: Vec<usize>,
    local: Vec<usize>,
    diag: Vec<Cplx<T>>,
    scale: T,
}

fn reduce<T: Real>(
    graph: &SimpleGraph,
    d: usize,
    p: SpectralPoint<T>,
    delta: Cplx<T>,
    removed: &[usize],
) -> Result<Reduced<T>> {
    check_degree(d)?;
    let n = graph.n();
    if graph.max_degree() > d {
        return Err(Error::Graph(format!(
            "max degree {} exceeds d = {d}",
            graph.max_degree()
        )));
    }
    let mut local = vec![0usize; n];
    for &x in removed {
        if x >= n {
            return Err(Error::Graph(format!("removed vertex {x} out of range")));
        }
        local[x] = usize::MAX;
    }
    let mut kept = Vec::with_capacity(n);
    for (v, slot) in local.iter_mut().enumerate() {
        if *slot != usize::MAX {
            *slot = kept.len();
            kept.push(v);
        }
    }
    let d1 = T::count(d - 1);
    let diag = kept
        .iter()
        .map(|&v| -p.z() - delta * (T::count(d - graph.degree(v)) / d1))
        .collect();
    Ok(Reduced {
        kept,
        local,
        diag,
        scale: d1.sqrt().recip(),
    })
}

/// Dense realization of `P^{(X)}(T, z, Δ)`: the inverse of
/// `-z + A/√(d-1) - (d - D) Δ/(d-1)`, degrees `D` taken before deleting `X`.
#[derive(Clone, Debug)]
pub struct WeightedTreeOperator<T: Real> {
    point: SpectralPoint<T>,
    d: usize,
    delta: Cplx<T>,
    kept: Vec<usize>,
    local: Vec<usize>,
    matrix: Matrix<Cplx<T>>,
    condition: T,
}

impl<T: Real> WeightedTreeOperator<T> {
    pub fn new(
        graph: &SimpleGraph,
        d: usize,
        point: SpectralPoint<T>,
        delta: Cplx<T>,
        removed: &[usize],
    ) -> Result<Self> {
        let sys = reduce(graph, d, point, delta, removed)?;
        let m = sys.kept.len();
        if m > DENSE_TREE_LIMIT {
            return Err(Error::SizeLimit {
                size: m,
                limit: DENSE_TREE_LIMIT,
            });
        }
        let mut a = Matrix::zeros(m, m);
        for (k, &v) in sys.kept.iter().enumerate() {
            a[(k, k)] = sys.diag[k];
            for &u in graph.neighbors(v) {
                if sys.local[u] != usize::MAX {
                    a[(k, sys.local[u])] = cplx(sys.scale, T::zero());
                }
            }
        }
        let (matrix, condition) = if m == 0 {
            (a, T::one())
        } else {
            inverse_with_condition(&a)?
        };
        if !condition.is_finite() || condition.to_f64_lossy() > MAX_CONDITION {
            return Err(Error::Singular {
                cond: condition.to_f64_lossy(),
            });
        }
        Ok(Self {
            point,
            d,
            delta,
            kept: sys.kept,
            local: sys.local,
            matrix,
            condition,
        })
    }

    /// Entry `P_ij` by graph labels; `None` if either vertex was removed.
    pub fn get(&self, i: usize, j: usize) -> Option<Cplx<T>> {
        let (a, b) = (*self.local.get(i)?, *self.local.get(j)?);
        (a != usize::MAX && b != usize::MAX).then(|| self.matrix[(a, b)])
    }

    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        self.get(i, j).expect("vertex present in operator")
    }

    /// Matrix index of graph vertex `v`, if kept.
    pub fn index_of(&self, v: usize) -> Option<usize> {
        self.local.get(v).copied().filter(|&k| k != usize::MAX)
    }

    pub fn matrix(&self) -> &Matrix<Cplx<T>> {
        &self.matrix
    }

    pub fn kept(&self) -> &[usize] {
        &self.kept
    }

    pub fn condition(&self) -> T {
        self.condition
    }

    pub fn point(&self) -> SpectralPoint<T> {
        self.point
    }

    pub fn delta(&self) -> Cplx<T> {
        self.delta
    }

    pub fn d(&self) -> usize {
        self.d
    }
}

pub fn weighted_tree_operator<T: Real>(
    graph: &SimpleGraph,
    d: usize,
    point: SpectralPoint<T>,
    delta: Cplx<T>,
    removed: &[usize],
) -> Result<WeightedTreeOperator<T>> {
    WeightedTreeOperator::new(graph, d, point, delta, removed)
}

/// Column `source` of `P^{(X)}(T, z, Δ)` for a forest `T - X`, by leaf-to-root
/// elimination in linear time. Removed vertices get zero entries.
pub fn forest_column<T: Real>(
    graph: &SimpleGraph,
    d: usize,
    point: SpectralPoint<T>,
    delta: Cplx<T>,
    removed: &[usize],
    source: usize,
) -> Result<Vec<Cplx<T>>> {
    let sys = reduce(graph, d, point, delta, removed)?;
    if sys.local.get(source).is_none_or(|&k| k == usize::MAX) {
        return Err(Error::Graph(format!("source {source} not in the operator")));
    }
    let n = graph.n();
    let zero = Cplx::<T>::new(T::zero(), T::zero());
    let mut parent = vec![usize::MAX; n];
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(sys.kept.len());
    for &root in &sys.kept {
        if seen[root] {
            continue;
        }
        seen[root] = true;
        let mut queue = VecDeque::from([root]);
        while let Some(u) = queue.pop_front() {
            order.push(u);
            for &v in graph.neighbors(u) {
                if sys.local[v] == usize::MAX || v == parent[u] {
                    continue;
                }
                if seen[v] {
                    return Err(Error::Graph("operator graph is not a forest".into()));
                }
                seen[v] = true;
                parent[v] = u;
                queue.push_back(v);
            }
        }
    }
    let s = sys.scale;
    let mut piv = vec![zero; n];
    let mut rhs = vec![zero; n];
    for &v in &sys.kept {
        piv[v] = sys.diag[sys.local[v]];
    }
    rhs[source] = cplx(T::one(), T::zero());
    for &v in order.iter().rev() {
        if piv[v].norm() <= T::tiny() {
            return Err(Error::Singular {
                cond: f64::INFINITY,
            });
        }
        let p = parent[v];
        if p != usize::MAX {
            let r = piv[v].inv() * s;
            piv[p] = piv[p] - r * s;
            rhs[p] = rhs[p] - rhs[v] * r;
        }
    }
    let mut x = vec![zero; n];
    for &v in &order {
        let p = parent[v];
        let up = if p == usize::MAX { zero } else { x[p] * s };
        x[v] = (rhs[v] - up) / piv[v];
    }
    Ok(x)
}

fn finite<T: Real>(v: Cplx<T>) -> Result<Cplx<T>> {
    if v.re.is_finite() && v.im.is_finite() {
        Ok(v)
    } else {
        Err(Error::Singular {
            cond: f64::INFINITY,
        })
    }
}

/// Root entry of the height-`ell` (d-1)-ary tree with boundary weight `delta`,
/// via the depth recursion `g ↦ 1/(-z - g)` applied `ell + 1` times.
pub fn y_ell<T: Real>(delta: Cplx<T>, p: SpectralPoint<T>, ell: usize, d: usize) -> Result<Cplx<T>> {
    check_degree(d)?;
    let mut g = delta;
    for _ in 0..=ell {
        g = finite((-p.z() - g).inv())?;
    }
    Ok(g)
}

/// Root entry of the radius-`ell` d-regular tree with boundary weight `delta`.
pub fn x_ell<T: Real>(delta: Cplx<T>, p: SpectralPoint<T>, ell: usize, d: usize) -> Result<Cplx<T>> {
    check_degree(d)?;
    let mut g = delta;
    for _ in 0..ell {
        g = finite((-p.z() - g).inv())?;
    }
    finite((-p.z() - g * (T::count(d) / T::count(d - 1))).inv())
}

/// `y_ell` by explicit inversion. The root of a bare (d-1)-ary tree has one
/// missing edge; it is realized as a removed stub so that only the leaves
/// carry boundary weight.
pub fn y_ell_matrix<T: Real>(
    delta: Cplx<T>,
    p: SpectralPoint<T>,
    ell: usize,
    d: usize,
) -> Result<Cplx<T>> {
    check_degree(d)?;
    let tree = ary_tree(d, ell);
    let (g, stub) = tree.with_stub();
    Ok(WeightedTreeOperator::new(&g, d, p, delta, &[stub])?.entry(tree.root, tree.root))
}

/// `x_ell` by explicit inversion.
pub fn x_ell_matrix<T: Real>(
    delta: Cplx<T>,
    p: SpectralPoint<T>,
    ell: usize,
    d: usize,
) -> Result<Cplx<T>> {
    check_degree(d)?;
    let tree = regular_tree(d, ell);
    Ok(WeightedTreeOperator::new(&tree.graph, d, p, delta, &[])?.entry(tree.root, tree.root))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(re: f64, im: f64) -> SpectralPoint<f64> {
        SpectralPoint::from_parts(re, im).unwrap()
    }

    #[test]
    fn single_vertex_operator() {
        let g = SimpleGraph::empty(1);
        let p = pt(0.3, 0.7);
        let delta = cplx(0.1, 0.4);
        let op = weighted_tree_operator(&g, 3, p, delta, &[]).unwrap();
        let expect = (-p.z() - delta * 1.5).inv();
        assert!((op.entry(0, 0) - expect).norm() < 1e-14);
    }

    #[test]
    fn removal_disconnects_blocks() {
        let t = ary_tree(3, 3);
        let p = pt(0.5, 0.5);
        let i = t.graph.neighbors(t.root)[0];
        let op = weighted_tree_operator(&t.graph, 3, p, m_sc(p), &[i]).unwrap();
        for j in 0..t.len() {
            if j != i && t.ancestor_depth(i, j) >= 1 && t.depth[j] > 1 {
                // j lies below i
                assert_eq!(op.entry(t.root, j), cplx(0.0, 0.0));
            }
        }
        assert!(op.get(i, i).is_none());
    }

    #[test]
    fn forest_column_matches_dense() {
        let t = regular_tree(3, 4);
        let p = pt(-0.4, 0.3);
        let delta = cplx(0.2, 0.5);
        let removed = [2];
        let op = weighted_tree_operator(&t.graph, 3, p, delta, &removed).unwrap();
        let col = forest_column(&t.graph, 3, p, delta, &removed, 5).unwrap();
        for v in 0..t.len() {
            let dense = op.get(v, 5).unwrap_or(cplx(0.0, 0.0));
            assert!((col[v] - dense).norm() < 1e-13);
        }
    }

    #[test]
    fn recursion_matches_matrix() {
        let p = pt(1.2, 0.2);
        let delta = cplx(-0.3, 0.6);
        for d in 3..=5 {
            for ell in 0..4 {
                let a = y_ell(delta, p, ell, d).unwrap();
                let b = y_ell_matrix(delta, p, ell, d).unwrap();
                assert!((a - b).norm() < 1e-12, "Y d={d} ell={ell}");
                let a = x_ell(delta, p, ell, d).unwrap();
                let b = x_ell_matrix(delta, p, ell, d).unwrap();
                assert!((a - b).norm() < 1e-12, "X d={d} ell={ell}");
            }
        }
    }

    #[test]
    fn oversized_dense_tree_is_refused() {
        let p = pt(0.0, 1.0);
        let err = x_ell_matrix(m_sc(p), p, 8, 5).unwrap_err();
        assert!(matches!(err, Error::SizeLimit { .. }));
    }
}

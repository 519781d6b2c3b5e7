use crate::error::{Error, Result};

/// Finite simple undirected graph with sorted adjacency lists.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct SimpleGraph {
    adj: Vec<Vec<usize>>,
}

impl SimpleGraph {
    pub fn empty(n: usize) -> Self {
        Self { adj: vec![Vec::new(); n] }
    }

    /// Builds a graph from an undirected edge list; rejects loops and repeated edges.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for &(u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::Graph(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u == v {
                return Err(Error::Graph(format!("self-loop at {u}")));
            }
            adj[u].push(v);
            adj[v].push(u);
        }
        for (u, list) in adj.iter_mut().enumerate() {
            list.sort_unstable();
            if list.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::Graph(format!("multi-edge at vertex {u}")));
            }
        }
        Ok(Self { adj })
    }

    pub fn n(&self) -> usize {
        self.adj.len()
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.adj[v].len()
    }

    pub fn max_degree(&self) -> usize {
        self.adj.iter().map(Vec::len).max().unwrap_or(0)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.adj[u].binary_search(&v).is_ok()
    }

    pub fn edge_count(&self) -> usize {
        self.adj.iter().map(Vec::len).sum::<usize>() / 2
    }

    /// Undirected edges `(u, v)` with `u < v`, lexicographically sorted.
    pub fn edges(&self) -> Vec<(usize, usize)> {
        let mut out = Vec::with_capacity(self.edge_count());
        for (u, list) in self.adj.iter().enumerate() {
            out.extend(list.iter().filter(|&&v| v > u).map(|&v| (u, v)));
        }
        out
    }

    pub fn add_vertex(&mut self) -> usize {
        self.adj.push(Vec::new());
        self.adj.len() - 1
    }

    pub fn add_edge(&mut self, u: usize, v: usize) -> Result<()> {
        if u == v || self.has_edge(u, v) {
            return Err(Error::Graph(format!("cannot add edge ({u}, {v})")));
        }
        let pos = self.adj[u].binary_search(&v).unwrap_err();
        self.adj[u].insert(pos, v);
        let pos = self.adj[v].binary_search(&u).unwrap_err();
        self.adj[v].insert(pos, u);
        Ok(())
    }

    pub fn remove_edge(&mut self, u: usize, v: usize) -> Result<()> {
        let (Ok(pu), Ok(pv)) = (self.adj[u].binary_search(&v), self.adj[v].binary_search(&u)) else {
            return Err(Error::Graph(format!("edge ({u}, {v}) not present")));
        };
        self.adj[u].remove(pu);
        self.adj[v].remove(pv);
        Ok(())
    }

    /// Induced subgraph on `vertices`; vertex `k` of the result is `vertices[k]`.
    pub fn induced(&self, vertices: &[usize]) -> SimpleGraph {
        let index: std::collections::HashMap<usize, usize> =
            vertices.iter().enumerate().map(|(k, &v)| (v, k)).collect();
        let adj = vertices
            .iter()
            .map(|&v| {
                let mut list: Vec<usize> =
                    self.adj[v].iter().filter_map(|u| index.get(u).copied()).collect();
                list.sort_unstable();
                list
            })
            .collect();
        SimpleGraph { adj }
    }
}

/// Simple `d`-regular graph on `n` vertices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct RegularGraph {
    d: usize,
    graph: SimpleGraph,
}

impl RegularGraph {
    pub fn new(graph: SimpleGraph, d: usize) -> Result<Self> {
        let n = graph.n();
        if d < 3 {
            return Err(Error::Degree(d));
        }
        if d + 1 > n {
            return Err(Error::Graph(format!("d = {d} needs at least {} vertices, got {n}", d + 1)));
        }
        if (n * d) % 2 != 0 {
            return Err(Error::Parity(format!("n*d = {} is odd", n * d)));
        }
        if let Some(v) = (0..n).find(|&v| graph.degree(v) != d) {
            return Err(Error::Graph(format!(
                "vertex {v} has degree {} instead of {d}",
                graph.degree(v)
            )));
        }
        Ok(Self { d, graph })
    }

    pub fn from_edges(n: usize, d: usize, edges: &[(usize, usize)]) -> Result<Self> {
        Self::new(SimpleGraph::from_edges(n, edges)?, d)
    }

    /// Complete graph `K_n`, which is `(n-1)`-regular.
    pub fn complete(n: usize) -> Result<Self> {
        let edges: Vec<_> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
        Self::from_edges(n, n.saturating_sub(1), &edges)
    }

    pub fn n(&self) -> usize {
        self.graph.n()
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn as_graph(&self) -> &SimpleGraph {
        &self.graph
    }

    pub fn into_graph(self) -> SimpleGraph {
        self.graph
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.graph.has_edge(u, v)
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        self.graph.edges()
    }

    /// All `N d` oriented edges `(u, v)`, sorted.
    pub fn directed_edges(&self) -> Vec<(usize, usize)> {
        (0..self.n())
            .flat_map(|u| self.neighbors(u).iter().map(move |&v| (u, v)))
            .collect()
    }

    pub fn triangle_count(&self) -> usize {
        let mut count = 0;
        for (u, v) in self.edges() {
            count += self
                .neighbors(u)
                .iter()
                .filter(|&&w| w > v && self.has_edge(v, w))
                .count();
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_graph_k4_is_3_regular() {
        let g = RegularGraph::complete(4).unwrap();
        assert_eq!(g.d(), 3);
        assert_eq!(g.edges().len(), 6);
        assert_eq!(g.directed_edges().len(), 12);
        assert_eq!(g.triangle_count(), 4);
    }

    #[test]
    fn rejects_invalid_inputs() {
        assert!(matches!(
            SimpleGraph::from_edges(3, &[(0, 0)]),
            Err(Error::Graph(_))
        ));
        assert!(SimpleGraph::from_edges(3, &[(0, 1), (1, 0)]).is_err());
        let cycle = SimpleGraph::from_edges(4, &[(0, 1), (1, 2), (2, 3), (3, 0)]).unwrap();
        assert!(matches!(RegularGraph::new(cycle, 2), Err(Error::Degree(2))));
        let k4 = RegularGraph::complete(4).unwrap().into_graph();
        assert!(RegularGraph::new(k4, 4).is_err());
    }

    #[test]
    fn add_and_remove_edges_keep_lists_sorted() {
        let mut g = SimpleGraph::empty(4);
        g.add_edge(2, 0).unwrap();
        g.add_edge(0, 1).unwrap();
        g.add_edge(0, 3).unwrap();
        assert_eq!(g.neighbors(0), &[1, 2, 3]);
        assert!(g.add_edge(1, 0).is_err());
        g.remove_edge(0, 2).unwrap();
        assert_eq!(g.neighbors(0), &[1, 3]);
        assert!(g.remove_edge(0, 2).is_err());
    }
}

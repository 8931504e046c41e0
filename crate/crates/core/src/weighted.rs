//! Realization witnesses: weighted graphs and weighted trees with labeled
//! vertices.

use std::collections::{BTreeMap, BTreeSet};

use num_traits::{Signed, Zero};

use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::rational::Rational;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: Rational,
}

impl Edge {
    pub fn new(u: usize, v: usize, weight: Rational) -> Self {
        Self { u, v, weight }
    }

    fn other(&self, x: usize) -> usize {
        if self.u == x {
            self.v
        } else {
            self.u
        }
    }
}

fn check_simple(vertex_count: usize, edges: &[Edge]) -> Result<()> {
    let mut seen = BTreeSet::new();
    for e in edges {
        if e.u >= vertex_count || e.v >= vertex_count {
            return Err(Error::Structure(format!(
                "edge ({}, {}) references a vertex outside 0..{vertex_count}",
                e.u, e.v
            )));
        }
        if e.u == e.v {
            return Err(Error::Structure(format!("loop at vertex {}", e.u)));
        }
        if !seen.insert((e.u.min(e.v), e.u.max(e.v))) {
            return Err(Error::Structure(format!("parallel edges between {} and {}", e.u, e.v)));
        }
    }
    Ok(())
}

fn adjacency(vertex_count: usize, edges: &[Edge]) -> Vec<Vec<usize>> {
    let mut adj = vec![Vec::new(); vertex_count];
    for (k, e) in edges.iter().enumerate() {
        adj[e.u].push(k);
        adj[e.v].push(k);
    }
    adj
}

fn is_connected(vertex_count: usize, edges: &[Edge], adj: &[Vec<usize>]) -> bool {
    if vertex_count == 0 {
        return false;
    }
    let mut seen = vec![false; vertex_count];
    let mut stack = vec![0];
    seen[0] = true;
    while let Some(x) = stack.pop() {
        for &k in &adj[x] {
            let y = edges[k].other(x);
            if !seen[y] {
                seen[y] = true;
                stack.push(y);
            }
        }
    }
    seen.into_iter().all(|s| s)
}

fn check_labels(vertex_count: usize, labeled: &[usize]) -> Result<()> {
    if labeled.len() < 2 {
        return Err(Error::Structure("need at least two labeled vertices".into()));
    }
    let mut seen = BTreeSet::new();
    for (k, &v) in labeled.iter().enumerate() {
        if v >= vertex_count {
            return Err(Error::Structure(format!("label {} maps to missing vertex {v}", k + 1)));
        }
        if !seen.insert(v) {
            return Err(Error::Structure(format!("vertex {v} carries two labels")));
        }
    }
    Ok(())
}

/// A simple connected graph with real edge weights; `labeled[k - 1]` is the
/// vertex carrying label `k`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
    labeled: Vec<usize>,
}

impl WeightedGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>, labeled: Vec<usize>) -> Result<Self> {
        check_simple(vertex_count, &edges)?;
        check_labels(vertex_count, &labeled)?;
        if !is_connected(vertex_count, &edges, &adjacency(vertex_count, &edges)) {
            return Err(Error::Structure("graph is disconnected".into()));
        }
        Ok(Self { vertex_count, edges, labeled })
    }

    /// Complete graph on `[n]` (vertex `k - 1` carries label `k`) with
    /// `w({i, j}) = weights_{i,j}`.
    pub fn complete(weights: &DissimilarityVector) -> Self {
        let n = weights.n();
        let edges = weights.iter().map(|(p, w)| Edge::new(p.i() - 1, p.j() - 1, w.clone())).collect();
        Self::new(n, edges, (0..n).collect()).expect("complete graph is simple and connected")
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn labeled(&self) -> &[usize] {
        &self.labeled
    }

    pub fn n(&self) -> usize {
        self.labeled.len()
    }

    pub fn is_positive(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_positive())
    }

    /// Shortest-path distances between labeled vertices. Only defined for
    /// positive weights.
    pub fn two_weights(&self) -> Result<DissimilarityVector> {
        if let Some(e) = self.edges.iter().find(|e| !e.weight.is_positive()) {
            return Err(Error::Structure(format!(
                "shortest 2-weights need positive weights; edge ({}, {}) has weight {}",
                e.u, e.v, e.weight
            )));
        }
        let v = self.vertex_count;
        let mut dist: Vec<Vec<Option<Rational>>> = vec![vec![None; v]; v];
        for (x, row) in dist.iter_mut().enumerate() {
            row[x] = Some(Rational::zero());
        }
        for e in &self.edges {
            dist[e.u][e.v] = Some(e.weight.clone());
            dist[e.v][e.u] = Some(e.weight.clone());
        }
        for k in 0..v {
            for i in 0..v {
                let Some(ik) = dist[i][k].clone() else { continue };
                for j in 0..v {
                    if let Some(kj) = &dist[k][j] {
                        let through = &ik + kj;
                        if dist[i][j].as_ref().is_none_or(|cur| through < *cur) {
                            dist[i][j] = Some(through);
                        }
                    }
                }
            }
        }
        Ok(DissimilarityVector::from_fn(self.n(), |p| {
            dist[self.labeled[p.i() - 1]][self.labeled[p.j() - 1]].clone().expect("graph is connected")
        }))
    }
}

/// A weighted tree whose leaves are exactly the labeled vertices `1..=n`;
/// `leaf_vertex[k - 1]` is the vertex of label `k`. Internal vertices have
/// degree at least 3.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightedTree {
    vertex_count: usize,
    edges: Vec<Edge>,
    leaf_vertex: Vec<usize>,
}

impl WeightedTree {
    /// Validates every structural invariant, including the absence of
    /// degree-2 vertices.
    pub fn new(vertex_count: usize, edges: Vec<Edge>, leaf_vertex: Vec<usize>) -> Result<Self> {
        check_simple(vertex_count, &edges)?;
        check_labels(vertex_count, &leaf_vertex)?;
        if edges.len() + 1 != vertex_count {
            return Err(Error::Structure(format!(
                "a tree on {vertex_count} vertices has {} edges, found {}",
                vertex_count.saturating_sub(1),
                edges.len()
            )));
        }
        let adj = adjacency(vertex_count, &edges);
        if !is_connected(vertex_count, &edges, &adj) {
            return Err(Error::Structure("tree is disconnected (contains a cycle)".into()));
        }
        let labeled: BTreeSet<usize> = leaf_vertex.iter().copied().collect();
        for (x, inc) in adj.iter().enumerate() {
            match (inc.len(), labeled.contains(&x)) {
                (1, true) => {}
                (1, false) => return Err(Error::Structure(format!("leaf vertex {x} carries no label"))),
                (_, true) => {
                    return Err(Error::Structure(format!("labeled vertex {x} is not a leaf (degree {})", inc.len())))
                }
                (2, false) => return Err(Error::Structure(format!("internal vertex {x} has degree 2"))),
                _ => {}
            }
        }
        Ok(Self { vertex_count, edges, leaf_vertex })
    }

    /// Suppresses degree-2 unlabeled vertices (merging their two edges and
    /// summing weights), renumbers vertices densely, then validates.
    pub fn normalized(vertex_count: usize, edges: Vec<Edge>, leaf_vertex: Vec<usize>) -> Result<Self> {
        check_simple(vertex_count, &edges)?;
        check_labels(vertex_count, &leaf_vertex)?;
        let labeled: BTreeSet<usize> = leaf_vertex.iter().copied().collect();
        let mut edges: Vec<Option<Edge>> = edges.into_iter().map(Some).collect();
        let mut alive = vec![true; vertex_count];
        loop {
            let live: Vec<Edge> = edges.iter().flatten().cloned().collect();
            let adj = adjacency(vertex_count, &live);
            let Some(x) = (0..vertex_count).find(|&x| alive[x] && adj[x].len() == 2 && !labeled.contains(&x)) else {
                break;
            };
            let (e1, e2) = (&live[adj[x][0]], &live[adj[x][1]]);
            let (a, b) = (e1.other(x), e2.other(x));
            let weight = &e1.weight + &e2.weight;
            if a == b || live.iter().any(|e| (e.u == a && e.v == b) || (e.u == b && e.v == a)) {
                return Err(Error::Structure("suppressing a degree-2 vertex creates a cycle".into()));
            }
            edges.retain(|e| e.as_ref().is_some_and(|e| e.u != x && e.v != x));
            edges.push(Some(Edge::new(a, b, weight)));
            alive[x] = false;
        }
        let mut remap = vec![usize::MAX; vertex_count];
        let mut next = 0;
        for (x, &live) in alive.iter().enumerate() {
            if live {
                remap[x] = next;
                next += 1;
            }
        }
        let edges = edges.into_iter().flatten().map(|e| Edge::new(remap[e.u], remap[e.v], e.weight)).collect();
        let leaves = leaf_vertex.iter().map(|&v| remap[v]).collect();
        Self::new(next, edges, leaves)
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn leaf_vertices(&self) -> &[usize] {
        &self.leaf_vertex
    }

    pub fn n(&self) -> usize {
        self.leaf_vertex.len()
    }

    pub fn leaf_vertex(&self, label: usize) -> usize {
        self.leaf_vertex[label - 1]
    }

    pub fn is_positive(&self) -> bool {
        self.edges.iter().all(|e| e.weight.is_positive())
    }

    pub(crate) fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (k, e) in self.edges.iter().enumerate() {
            adj[e.u].push((e.v, k));
            adj[e.v].push((e.u, k));
        }
        adj
    }

    /// Weighted distance from `root` to every vertex.
    fn distances_from(&self, adj: &[Vec<(usize, usize)>], root: usize) -> Vec<Rational> {
        let mut dist = vec![Rational::zero(); self.vertex_count];
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            for &(y, k) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    dist[y] = &dist[x] + &self.edges[k].weight;
                    stack.push(y);
                }
            }
        }
        dist
    }

    /// Path weights between labeled leaves.
    pub fn two_weights(&self) -> DissimilarityVector {
        let adj = self.adjacency();
        let n = self.n();
        let rows: Vec<Vec<Rational>> = (1..n).map(|i| self.distances_from(&adj, self.leaf_vertex(i))).collect();
        DissimilarityVector::from_fn(n, |p| rows[p.i() - 1][self.leaf_vertex(p.j())].clone())
    }

    /// For each edge, the labels on the side away from leaf 1, and the edge
    /// weight. Two trees with equal maps are isomorphic as labeled weighted
    /// trees.
    pub fn split_weights(&self) -> BTreeMap<Vec<usize>, Rational> {
        let adj = self.adjacency();
        let mut label_of = vec![0; self.vertex_count];
        for (k, &v) in self.leaf_vertex.iter().enumerate() {
            label_of[v] = k + 1;
        }
        let root = self.leaf_vertex(1);
        let mut parent_edge = vec![usize::MAX; self.vertex_count];
        let mut order = Vec::with_capacity(self.vertex_count);
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![root];
        seen[root] = true;
        while let Some(x) = stack.pop() {
            order.push(x);
            for &(y, k) in &adj[x] {
                if !seen[y] {
                    seen[y] = true;
                    parent_edge[y] = k;
                    stack.push(y);
                }
            }
        }
        let mut below: Vec<Vec<usize>> = vec![Vec::new(); self.vertex_count];
        let mut out = BTreeMap::new();
        for &x in order.iter().rev() {
            if label_of[x] != 0 && x != root {
                below[x].push(label_of[x]);
            }
            if x == root {
                continue;
            }
            let k = parent_edge[x];
            let mut side = std::mem::take(&mut below[x]);
            side.sort_unstable();
            let parent = self.edges[k].other(x);
            below[parent].extend(side.iter().copied());
            out.insert(side, self.edges[k].weight.clone());
        }
        out
    }

    /// Contracts internal edges of weight zero. 2-weights are unchanged.
    pub fn contract_zero_internal_edges(&self) -> Self {
        let leaves: BTreeSet<usize> = self.leaf_vertex.iter().copied().collect();
        let mut rep: Vec<usize> = (0..self.vertex_count).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while rep[r] != r {
                r = rep[r];
            }
            rep[x] = r;
            r
        }
        let mut kept = Vec::new();
        for e in &self.edges {
            let internal = !leaves.contains(&e.u) && !leaves.contains(&e.v);
            if internal && e.weight.is_zero() {
                let (a, b) = (find(&mut rep, e.u), find(&mut rep, e.v));
                rep[a.max(b)] = a.min(b);
            } else {
                kept.push(e);
            }
        }
        let mut remap = vec![usize::MAX; self.vertex_count];
        let mut next = 0;
        for x in 0..self.vertex_count {
            if find(&mut rep, x) == x {
                remap[x] = next;
                next += 1;
            }
        }
        let edges = kept
            .into_iter()
            .map(|e| Edge::new(remap[find(&mut rep, e.u)], remap[find(&mut rep, e.v)], e.weight.clone()))
            .collect();
        let leaves = self.leaf_vertex.iter().map(|&v| remap[find(&mut rep, v)]).collect();
        Self::new(next, edges, leaves).expect("contracting zero internal edges keeps a valid tree")
    }
}

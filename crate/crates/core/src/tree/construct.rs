use std::collections::VecDeque;

use num_traits::Signed;

use crate::dissimilarity::DissimilarityVector;
use crate::error::{Error, Result};
use crate::rational::{format_rational, half, Rational};
use crate::weighted::{Edge, WeightedTree};

/// Which pairing of `[a, b, c, d]` is the only split: 0 for `ab|cd`,
/// 1 for `ac|bd`, 2 for `ad|bc`; `None` when all three pair-sums agree.
fn resolved(d: &DissimilarityVector, q: [usize; 4]) -> Option<usize> {
    let [x, y, z] = d.quartet_sums(q);
    if x == y && y == z {
        None
    } else if y == z {
        Some(0)
    } else if x == z {
        Some(1)
    } else {
        Some(2)
    }
}

/// Binary tree under construction. Vertex `k < n` is the leaf labeled
/// `k + 1`; internal vertices follow.
#[derive(Clone)]
struct Draft {
    n: usize,
    vertices: usize,
    edges: Vec<(usize, usize)>,
}

impl Draft {
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let mut adj = vec![Vec::new(); self.vertices];
        for &(u, v) in &self.edges {
            adj[u].push(v);
            adj[v].push(u);
        }
        adj
    }

    /// Subdivide edge `e` and hang leaf `leaf` from the new vertex.
    fn attach(&self, e: usize, leaf: usize) -> Draft {
        let mut next = self.clone();
        let (u, v) = next.edges[e];
        let w = next.vertices;
        next.vertices += 1;
        next.edges[e] = (u, w);
        next.edges.push((w, v));
        next.edges.push((w, leaf));
        next
    }

    fn hops(adj: &[Vec<usize>], from: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; adj.len()];
        let mut queue = VecDeque::from([from]);
        dist[from] = 0;
        while let Some(x) = queue.pop_front() {
            for &y in &adj[x] {
                if dist[y] == usize::MAX {
                    dist[y] = dist[x] + 1;
                    queue.push_back(y);
                }
            }
        }
        dist
    }

    /// Every resolved quartet containing `leaf` among leaves `0..=leaf`
    /// is displayed.
    fn consistent(&self, leaf: usize, d: &DissimilarityVector) -> bool {
        let adj = self.adjacency();
        let hops: Vec<Vec<usize>> = (0..=leaf).map(|l| Self::hops(&adj, l)).collect();
        for a in 0..leaf {
            for b in a + 1..leaf {
                for c in b + 1..leaf {
                    let q = [a + 1, b + 1, c + 1, leaf + 1];
                    let Some(want) = resolved(d, q) else { continue };
                    let h = |p: usize, r: usize| hops[p][r];
                    let sums = [h(a, b) + h(c, leaf), h(a, c) + h(b, leaf), h(a, leaf) + h(b, c)];
                    let others = (0..3).filter(|&k| k != want);
                    if !others.into_iter().all(|k| sums[want] < sums[k]) {
                        return false;
                    }
                }
            }
        }
        true
    }

    fn grow(self, leaf: usize, d: &DissimilarityVector) -> Option<Draft> {
        if leaf == self.n {
            return Some(self);
        }
        (0..self.edges.len())
            .map(|e| self.attach(e, leaf))
            .filter(|t| t.consistent(leaf, d))
            .find_map(|t| t.grow(leaf + 1, d))
    }

    /// Smallest leaf on `to`'s side of the edge `from`-`to`.
    fn side_leaf(&self, adj: &[Vec<usize>], from: usize, to: usize) -> usize {
        let mut best = usize::MAX;
        let mut stack = vec![(from, to)];
        while let Some((prev, x)) = stack.pop() {
            if x < self.n {
                best = best.min(x);
            }
            stack.extend(adj[x].iter().filter(|&&y| y != prev).map(|&y| (x, y)));
        }
        best
    }
}

/// A weighted tree with 2-weights exactly `d`, which must satisfy the
/// four-point condition. Zero internal edges are contracted. With
/// `positive`, any nonpositive edge is an error.
///
/// Leaves are inserted one at a time into a binary tree so that every
/// quartet with a unique split displays that split; edge weights then
/// follow from pair-sum differences across each edge.
pub fn construct_tree_from_d(d: &DissimilarityVector, positive: bool) -> Result<WeightedTree> {
    let n = d.n();
    if n < 2 {
        return Err(Error::Size("a tree needs at least two labels".into()));
    }
    if let Some(quartet) = d.four_point_violation() {
        return Err(Error::FourPoint { quartet });
    }
    let start = Draft { n, vertices: n, edges: vec![(0, 1)] };
    let draft =
        start.grow(2, d).ok_or_else(|| Error::Structure("no binary tree displays the resolved quartets".into()))?;
    let adj = draft.adjacency();
    let at = |p: usize, q: usize| d.at(p + 1, q + 1).clone();
    let others = |x: usize, not: usize| -> Vec<usize> { adj[x].iter().copied().filter(|&y| y != not).collect() };
    let edges: Vec<Edge> = draft
        .edges
        .iter()
        .map(|&(u, v)| {
            let weight: Rational = match (u < n, v < n) {
                (true, true) => at(u, v),
                (leaf_u, _) => {
                    let (x, w) = if leaf_u { (u, v) } else { (v, u) };
                    let [w1, w2] = others(w, x)[..] else { unreachable!("binary draft") };
                    let (j, k) = (draft.side_leaf(&adj, w, w1), draft.side_leaf(&adj, w, w2));
                    if x < n {
                        half(&(at(x, j) + at(x, k) - at(j, k)))
                    } else {
                        let [v1, v2] = others(x, w)[..] else { unreachable!("binary draft") };
                        let (a, b) = (j, k);
                        let (c, e) = (draft.side_leaf(&adj, x, v1), draft.side_leaf(&adj, x, v2));
                        half(&(at(a, c) + at(b, e) - at(a, b) - at(c, e)))
                    }
                }
            };
            Edge::new(u, v, weight)
        })
        .collect();
    let tree = WeightedTree::normalized(draft.vertices, edges, (0..n).collect())?.contract_zero_internal_edges();
    if positive {
        if let Some(e) = tree.edges().iter().find(|e| !e.weight.is_positive()) {
            return Err(Error::NonPositiveEdge { weight: format_rational(&e.weight) });
        }
    }
    if tree.two_weights() != *d {
        return Err(Error::Structure("reconstructed tree does not reproduce the distances".into()));
    }
    Ok(tree)
}

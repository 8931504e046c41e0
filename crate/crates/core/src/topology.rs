//! Leaf-labeled tree topologies (unweighted, internal degree >= 3).
//!
//! Leaves are vertices `0..n` with vertex `k - 1` carrying label `k`;
//! internal vertices are numbered from `n`. Each topology also records its
//! nontrivial splits as bitmasks of the side not containing label 1.

use std::collections::BTreeSet;

use rand::Rng;

use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::splits::{quartets, QuartetSplit, SplitSystem};
use crate::weighted::{Edge, WeightedTree};

pub const MAX_TOPOLOGY_LEAVES: usize = 8;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Topology {
    n: usize,
    vertex_count: usize,
    edges: Vec<(usize, usize)>,
    splits: Vec<u64>,
}

impl Topology {
    fn from_edges(n: usize, vertex_count: usize, edges: Vec<(usize, usize)>) -> Self {
        let mut t = Self { n, vertex_count, edges, splits: Vec::new() };
        t.splits =
            t.edge_masks().into_iter().filter(|&m| m.count_ones() >= 2 && m.count_ones() as usize <= n - 2).collect();
        t.splits.sort_unstable();
        t
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Nontrivial splits (internal edges), sorted.
    pub fn splits(&self) -> &[u64] {
        &self.splits
    }

    pub fn internal_edge_count(&self) -> usize {
        self.splits.len()
    }

    fn adjacency(&self) -> Vec<Vec<(usize, usize)>> {
        let mut adj = vec![Vec::new(); self.vertex_count];
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            adj[u].push((v, k));
            adj[v].push((u, k));
        }
        adj
    }

    /// For each edge, the leaf mask on the side away from leaf vertex 0.
    fn edge_masks(&self) -> Vec<u64> {
        let adj = self.adjacency();
        let mut parent_edge = vec![usize::MAX; self.vertex_count];
        let mut order = Vec::new();
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
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
        let mut below = vec![0u64; self.vertex_count];
        let mut masks = vec![0u64; self.edges.len()];
        for &x in order.iter().rev() {
            if x < self.n && x != 0 {
                below[x] |= 1 << x;
            }
            if x == 0 {
                continue;
            }
            let k = parent_edge[x];
            masks[k] = below[x];
            let (u, v) = self.edges[k];
            let parent = if u == x { v } else { u };
            below[parent] |= below[x];
        }
        masks
    }

    /// Edge indices on the path between each pair of labels, indexed by pair
    /// rank.
    pub fn leaf_paths(&self) -> Vec<Vec<usize>> {
        let masks = self.edge_masks();
        crate::pair::all_pairs(self.n)
            .map(|p| {
                let (a, b) = (p.i() - 1, p.j() - 1);
                (0..self.edges.len()).filter(|&k| ((masks[k] >> a) & 1) != ((masks[k] >> b) & 1)).collect()
            })
            .collect()
    }

    /// The quartet system induced by this topology, read off the splits.
    pub fn induced_splits(&self) -> SplitSystem {
        let mut out = Vec::new();
        for q in quartets(self.n) {
            let side = |m: u64, label: usize| (m >> (label - 1)) & 1;
            let resolved: Vec<QuartetSplit> = QuartetSplit::all_of(q)
                .into_iter()
                .filter(|s| {
                    let ([a, b], [c, d]) = s.pairs();
                    self.splits
                        .iter()
                        .any(|&m| side(m, a) == side(m, b) && side(m, c) == side(m, d) && side(m, a) != side(m, c))
                })
                .collect();
            if resolved.is_empty() {
                out.extend(QuartetSplit::all_of(q));
            } else {
                out.extend(resolved);
            }
        }
        SplitSystem::from_splits(self.n, out).expect("labels within range")
    }

    /// Weighted tree with `weights[k]` on edge `k`.
    pub fn to_tree(&self, weights: &[Rational]) -> Result<WeightedTree> {
        if weights.len() != self.edges.len() {
            return Err(Error::Structure(format!(
                "topology has {} edges, got {} weights",
                self.edges.len(),
                weights.len()
            )));
        }
        let edges = self.edges.iter().zip(weights).map(|(&(u, v), w)| Edge::new(u, v, w.clone())).collect();
        WeightedTree::new(self.vertex_count, edges, (0..self.n).collect())
    }

    /// Contract the internal edges whose index is not in `keep`.
    fn contract(&self, keep: &BTreeSet<usize>) -> Self {
        let mut rep: Vec<usize> = (0..self.vertex_count).collect();
        fn find(rep: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while rep[r] != r {
                r = rep[r];
            }
            rep[x] = r;
            r
        }
        for (k, &(u, v)) in self.edges.iter().enumerate() {
            if u >= self.n && v >= self.n && !keep.contains(&k) {
                let (a, b) = (find(&mut rep, u), find(&mut rep, v));
                rep[a.max(b)] = a.min(b);
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
        let edges = self
            .edges
            .iter()
            .enumerate()
            .filter(|(k, &(u, v))| u < self.n || v < self.n || keep.contains(k))
            .map(|(_, &(u, v))| (remap[find(&mut rep, u)], remap[find(&mut rep, v)]))
            .collect();
        Self::from_edges(self.n, next, edges)
    }
}

fn base(n: usize) -> Topology {
    match n {
        2 => Topology::from_edges(2, 2, vec![(0, 1)]),
        _ => Topology::from_edges(n, n + 1, vec![(0, n), (1, n), (2, n)]),
    }
}

/// Subdivide edge `k` with a fresh internal vertex and hang the next leaf
/// from it.
fn insert_leaf(t: &Topology, n: usize, leaf: usize, k: usize) -> Topology {
    let w = n + leaf - 2;
    let (u, v) = t.edges[k];
    let mut edges = t.edges.clone();
    edges[k] = (u, w);
    edges.push((w, v));
    edges.push((leaf, w));
    Topology { n, vertex_count: t.vertex_count + 1, edges, splits: Vec::new() }
}

/// All binary topologies on `[n]` by stepwise leaf addition.
pub fn binary_topologies(n: usize) -> Vec<Topology> {
    assert!(n >= 2, "topologies need at least two leaves");
    let mut level = vec![base(n)];
    for leaf in 3..n {
        level = level.iter().flat_map(|t| (0..t.edges.len()).map(move |k| insert_leaf(t, n, leaf, k))).collect();
    }
    level.into_iter().map(|t| Topology::from_edges(n, t.vertex_count, t.edges)).collect()
}

/// Every topology on `[n]` (binary or not), ordered by internal-edge count
/// and then by split list.
pub fn all_topologies(n: usize) -> Vec<Topology> {
    assert!(n <= MAX_TOPOLOGY_LEAVES, "topology enumeration is limited to n <= {MAX_TOPOLOGY_LEAVES}");
    let mut found: std::collections::BTreeMap<(usize, Vec<u64>), Topology> = Default::default();
    for b in binary_topologies(n) {
        let masks = b.edge_masks();
        let internal: Vec<usize> = (0..b.edges.len()).filter(|&k| b.edges[k].0 >= n && b.edges[k].1 >= n).collect();
        for subset in 0u32..(1 << internal.len()) {
            let keep: BTreeSet<usize> =
                (0..internal.len()).filter(|i| subset & (1 << i) != 0).map(|i| internal[i]).collect();
            let mut key: Vec<u64> = keep.iter().map(|&k| masks[k]).collect();
            key.sort_unstable();
            found.entry((key.len(), key)).or_insert_with(|| b.contract(&keep));
        }
    }
    found.into_values().collect()
}

/// Random binary topology by stepwise addition, then each internal edge is
/// contracted with probability `contract`.
pub fn random_topology<R: Rng>(n: usize, contract: f64, rng: &mut R) -> Topology {
    let mut t = base(n);
    for leaf in 3..n {
        let k = rng.gen_range(0..t.edges.len());
        t = insert_leaf(&t, n, leaf, k);
    }
    let t = Topology::from_edges(n, t.vertex_count, t.edges);
    let keep: BTreeSet<usize> =
        (0..t.edges.len()).filter(|&k| !(t.edges[k].0 >= n && t.edges[k].1 >= n && rng.gen_bool(contract))).collect();
    t.contract(&keep)
}

//! Small trees shared by unit tests.

use crate::rational::int;
use crate::weighted::{Edge, WeightedTree};

/// Cherries {1,2} and {3,4}, five unit edges.
pub fn unit_quartet() -> WeightedTree {
    let edges = vec![
        Edge::new(0, 4, int(1)),
        Edge::new(1, 4, int(1)),
        Edge::new(2, 5, int(1)),
        Edge::new(3, 5, int(1)),
        Edge::new(4, 5, int(1)),
    ];
    WeightedTree::new(6, edges, vec![0, 1, 2, 3]).unwrap()
}

/// Caterpillar ((1,2),3,(4,5)) with unit weights.
pub fn caterpillar5() -> WeightedTree {
    let edges = vec![
        Edge::new(0, 5, int(1)),
        Edge::new(1, 5, int(1)),
        Edge::new(5, 6, int(1)),
        Edge::new(2, 6, int(1)),
        Edge::new(6, 7, int(1)),
        Edge::new(3, 7, int(1)),
        Edge::new(4, 7, int(1)),
    ];
    WeightedTree::new(8, edges, vec![0, 1, 2, 3, 4]).unwrap()
}

pub fn star(pendants: &[i64]) -> WeightedTree {
    let n = pendants.len();
    let edges = pendants.iter().enumerate().map(|(k, &w)| Edge::new(k, n, int(w))).collect();
    WeightedTree::new(n + 1, edges, (0..n).collect()).unwrap()
}

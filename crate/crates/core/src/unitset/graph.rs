//! Simple graphs on `{1..n}` stored as a bit mask over flat pair indices.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::lattice::{pair_count, pair_flat};

/// Largest vertex count a [`PairGraph`] can hold (`C(11, 2) = 55` edge bits).
pub const MAX_GRAPH_N: usize = 11;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct PairGraph {
    n: usize,
    edges: u64,
}

impl PairGraph {
    pub fn empty(n: usize) -> Result<Self> {
        Self::from_mask(n, 0)
    }

    pub fn from_mask(n: usize, edges: u64) -> Result<Self> {
        if !(2..=MAX_GRAPH_N).contains(&n) {
            return Err(Error::CapExceeded {
                what: "graph vertex count",
                limit: MAX_GRAPH_N as u64,
                got: n as u64,
            });
        }
        let d = pair_count(n);
        if d < 64 && edges >> d != 0 {
            return Err(Error::BadInput(format!("edge mask has bits beyond {d} pairs")));
        }
        Ok(Self { n, edges })
    }

    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut g = Self::empty(n)?;
        for &(a, b) in edges {
            let (a, b) = if a < b { (a, b) } else { (b, a) };
            if a == 0 || a == b || b > n {
                return Err(Error::BadInput(format!("edge ({a}, {b}) invalid for n = {n}")));
            }
            g.edges ^= 1 << pair_flat(n, a, b);
        }
        Ok(g)
    }

    /// The triangle `T_{a,b,c}`.
    pub fn triangle(n: usize, a: usize, b: usize, c: usize) -> Result<Self> {
        Self::from_edges(n, &[(a, b), (b, c), (a, c)])
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn mask(&self) -> u64 {
        self.edges
    }

    #[inline]
    pub fn edge_count(&self) -> u32 {
        self.edges.count_ones()
    }

    #[inline]
    pub fn has_edge(&self, a: usize, b: usize) -> bool {
        let (a, b) = if a < b { (a, b) } else { (b, a) };
        self.edges >> pair_flat(self.n, a, b) & 1 == 1
    }

    pub fn degree(&self, v: usize) -> usize {
        (1..=self.n).filter(|&u| u != v && self.has_edge(u, v)).count()
    }

    /// First vertex of odd degree, if any.
    pub fn odd_vertex(&self) -> Option<usize> {
        (1..=self.n).find(|&v| self.degree(v) % 2 == 1)
    }

    pub fn is_even_degree(&self) -> bool {
        self.odd_vertex().is_none()
    }

    /// Symmetric difference of edge sets.
    pub fn xor(&self, other: &Self) -> Self {
        debug_assert_eq!(self.n, other.n);
        Self {
            n: self.n,
            edges: self.edges ^ other.edges,
        }
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        let n = self.n;
        let mut out = Vec::new();
        for a in 1..n {
            for b in a + 1..=n {
                if self.has_edge(a, b) {
                    out.push((a, b));
                }
            }
        }
        out
    }

    fn neighbours(&self, v: usize) -> impl Iterator<Item = usize> + '_ {
        (1..=self.n).filter(move |&u| u != v && self.has_edge(u, v))
    }
}

/// Writes an even-degree graph as a symmetric difference of triangles.
///
/// Greedy: take the smallest vertex of nonzero degree and its two smallest
/// neighbours `b < c`, XOR `T_{a,b,c}` into the graph, repeat. Each step
/// removes at least one edge and keeps all degrees even.
pub fn triangle_decompose(g: &PairGraph) -> Result<Vec<[usize; 3]>> {
    if let Some(vertex) = g.odd_vertex() {
        return Err(Error::NotEvenDegree { vertex });
    }
    let n = g.n();
    let mut rest = *g;
    let mut triples = Vec::new();
    while rest.mask() != 0 {
        let a = (1..=n)
            .find(|&v| rest.degree(v) >= 2)
            .expect("nonempty even-degree graph has a vertex of degree >= 2");
        let (b, c) = {
            let mut nb = rest.neighbours(a);
            (nb.next().unwrap(), nb.next().unwrap())
        };
        rest = rest.xor(&PairGraph::triangle(n, a, b, c)?);
        triples.push([a, b, c]);
    }
    Ok(triples)
}

/// XOR of the triangle graphs of `triples`.
pub fn compose_triangles(n: usize, triples: &[[usize; 3]]) -> Result<PairGraph> {
    triples.iter().try_fold(PairGraph::empty(n)?, |g, &[a, b, c]| {
        Ok(g.xor(&PairGraph::triangle(n, a, b, c)?))
    })
}

/// Every even-degree graph on `n` vertices, built from an arbitrary graph on
/// the first `n - 1` vertices by joining vertex `n` to its odd vertices.
/// Yields exactly `2^{C(n-1, 2)}` distinct masks.
pub fn even_graphs(n: usize) -> Result<impl Iterator<Item = u64>> {
    PairGraph::empty(n)?;
    let m = n - 1;
    let sub_d = pair_count(m);
    let embed: Vec<(usize, usize, u64)> = (1..m)
        .flat_map(|i| (i + 1..=m).map(move |j| (i, j)))
        .map(|(i, j)| (i, j, 1u64 << pair_flat(n, i, j)))
        .collect();
    Ok((0u64..(1u64 << sub_d)).map(move |sub| {
        let mut mask = 0u64;
        let mut parity = 0u64;
        for (bit, &(i, j, e)) in embed.iter().enumerate() {
            if sub >> bit & 1 == 1 {
                mask |= e;
                parity ^= (1 << i) | (1 << j);
            }
        }
        for v in 1..=m {
            if parity >> v & 1 == 1 {
                mask |= 1 << pair_flat(n, v, n);
            }
        }
        mask
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn empty_graph_has_no_triangles() {
        assert!(triangle_decompose(&PairGraph::empty(5).unwrap()).unwrap().is_empty());
    }

    #[test]
    fn single_triangle() {
        let g = PairGraph::triangle(3, 1, 2, 3).unwrap();
        assert_eq!(triangle_decompose(&g).unwrap(), vec![[1, 2, 3]]);
    }

    #[test]
    fn four_cycle_golden() {
        let g = PairGraph::from_edges(5, &[(1, 2), (2, 3), (3, 4), (1, 4)]).unwrap();
        let t = triangle_decompose(&g).unwrap();
        assert_eq!(t, vec![[1, 2, 4], [2, 3, 4]]);
        assert_eq!(compose_triangles(5, &t).unwrap(), g);
    }

    #[test]
    fn odd_graph_is_rejected() {
        let g = PairGraph::from_edges(3, &[(1, 2)]).unwrap();
        assert_eq!(triangle_decompose(&g), Err(Error::NotEvenDegree { vertex: 1 }));
    }

    #[test]
    fn even_graph_construction_matches_exhaustive_scan() {
        for n in 3..=7 {
            let mut built: Vec<u64> = even_graphs(n).unwrap().collect();
            built.sort_unstable();
            built.dedup();
            assert_eq!(built.len(), 1 << pair_count(n - 1));
            let scanned: Vec<u64> = (0u64..(1 << pair_count(n)))
                .filter(|&m| PairGraph::from_mask(n, m).unwrap().is_even_degree())
                .collect();
            assert_eq!(built, scanned, "n = {n}");
        }
    }

    #[test]
    fn decompose_then_compose_is_identity() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for n in 4..=8 {
            let evens: Vec<u64> = even_graphs(n).unwrap().collect();
            for _ in 0..1000 {
                let g = PairGraph::from_mask(n, evens[rng.random_range(0..evens.len())]).unwrap();
                let t = triangle_decompose(&g).unwrap();
                assert_eq!(compose_triangles(n, &t).unwrap(), g);
            }
        }
    }
}

//! Vertex-oriented Wilson graphs.
//!
//! A graph has `n` external vertices, labelled `0..n` in the order they are met
//! when walking the Wilson line along its orientation, followed by `t` internal
//! vertices labelled `n..n+t`. The Wilson edges are implicit: edge `i` runs from
//! external vertex `i` to `(i + 1) % n`.
//!
//! Every non-Wilson edge `k` is stored as an ordered pair `(tail, head)`; its two
//! half-edges ("darts") are `2k` (at the tail) and `2k + 1` (at the head). The
//! vertex orientation is an ordering of the darts at each vertex together with a
//! global sign. Two orientations are equal when the product of the permutation
//! signs relating them, times the ratio of global signs, is `+1`.

mod canon;
mod enumerate;
mod ops;
mod serial;

pub use canon::{CanonicalForm, GraphIso, GraphKey, Symmetry};
pub use enumerate::{enumerate, enumerate_chord_diagrams, EnumerationCaps};
pub use ops::{Classification, EdgeRef};
pub use serial::GraphJson;

use crate::error::{Error, Result};

/// Vertex-oriented Wilson graph with a distinguished oriented Wilson cycle.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WilsonGraph {
    n_ext: usize,
    n_int: usize,
    edges: Vec<(usize, usize)>,
    orders: Vec<Vec<usize>>,
    sign: i8,
}

impl WilsonGraph {
    /// Builds a graph from explicit vertex orders. `orders[v]` lists the darts
    /// incident to `v`; each dart must appear exactly once and at the vertex
    /// recorded for it in `edges`.
    pub fn new(
        n_ext: usize,
        n_int: usize,
        edges: Vec<(usize, usize)>,
        orders: Vec<Vec<usize>>,
        sign: i8,
    ) -> Result<Self> {
        let nv = n_ext + n_int;
        if n_ext == 0 {
            return Err(Error::InvalidGraph("a Wilson graph needs at least one external vertex".into()));
        }
        if orders.len() != nv {
            return Err(Error::InvalidGraph(format!("expected {nv} vertex orders, got {}", orders.len())));
        }
        if sign != 1 && sign != -1 {
            return Err(Error::InvalidGraph("orientation sign must be +1 or -1".into()));
        }
        let mut seen = vec![false; 2 * edges.len()];
        for (v, darts) in orders.iter().enumerate() {
            for &d in darts {
                if d >= seen.len() || seen[d] {
                    return Err(Error::InvalidGraph(format!("dart {d} missing or repeated")));
                }
                seen[d] = true;
                let (a, b) = edges[d / 2];
                let at = if d % 2 == 0 { a } else { b };
                if at != v {
                    return Err(Error::InvalidGraph(format!("dart {d} listed at {v} but attached to {at}")));
                }
            }
        }
        if let Some(d) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidGraph(format!("dart {d} is not listed at its vertex")));
        }
        let g = WilsonGraph { n_ext, n_int, edges, orders, sign };
        for v in 0..nv {
            if g.valence(v) < 3 {
                return Err(Error::InvalidGraph(format!("vertex {v} has valence {} < 3", g.valence(v))));
            }
        }
        if !g.is_connected() {
            return Err(Error::InvalidGraph("graph is not connected".into()));
        }
        Ok(g)
    }

    /// Builds a graph whose vertex orders list darts in increasing order.
    pub fn from_edges(n_ext: usize, n_int: usize, edges: Vec<(usize, usize)>) -> Result<Self> {
        let mut orders = vec![Vec::new(); n_ext + n_int];
        for (k, &(a, b)) in edges.iter().enumerate() {
            if a >= n_ext + n_int || b >= n_ext + n_int {
                return Err(Error::InvalidGraph(format!("edge {k} has an endpoint out of range")));
            }
            orders[a].push(2 * k);
            orders[b].push(2 * k + 1);
        }
        Self::new(n_ext, n_int, edges, orders, 1)
    }

    /// The degree-one graph: two external vertices joined by one chord.
    pub fn theta() -> Self {
        Self::chord_diagram(&[(0, 1)]).expect("theta is valid")
    }

    /// Chord diagram on `2 * chords.len()` Wilson points.
    pub fn chord_diagram(chords: &[(usize, usize)]) -> Result<Self> {
        Self::from_edges(2 * chords.len(), 0, chords.to_vec())
    }

    /// Three Wilson legs meeting at one internal vertex (degree two).
    pub fn y_graph() -> Self {
        Self::from_edges(3, 1, vec![(0, 3), (1, 3), (2, 3)]).expect("Y graph is valid")
    }

    /// Internal cycle of `k` trivalent vertices, each with one leg to the Wilson line.
    pub fn wheel(k: usize) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidGraph("a wheel needs at least two spokes".into()));
        }
        let mut edges: Vec<(usize, usize)> = (0..k).map(|i| (i, k + i)).collect();
        edges.extend((0..k).map(|i| (k + i, k + (i + 1) % k)));
        Self::from_edges(k, k, edges)
    }

    /// Two internal vertices joined by an edge, each carrying two Wilson legs (degree three).
    pub fn double_y() -> Self {
        Self::from_edges(4, 2, vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).expect("double Y is valid")
    }

    pub fn n_ext(&self) -> usize {
        self.n_ext
    }

    pub fn n_int(&self) -> usize {
        self.n_int
    }

    pub fn n_vertices(&self) -> usize {
        self.n_ext + self.n_int
    }

    /// Non-Wilson edges as `(tail, head)`.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    /// Darts at `v` in orientation order.
    pub fn order(&self, v: usize) -> &[usize] {
        &self.orders[v]
    }

    pub fn orders(&self) -> &[Vec<usize>] {
        &self.orders
    }

    pub fn sign(&self) -> i8 {
        self.sign
    }

    pub fn is_external(&self, v: usize) -> bool {
        v < self.n_ext
    }

    /// Vertex carrying dart `d`.
    pub fn dart_vertex(&self, d: usize) -> usize {
        let (a, b) = self.edges[d / 2];
        if d % 2 == 0 {
            a
        } else {
            b
        }
    }

    /// Vertex at the other end of dart `d`'s edge.
    pub fn dart_partner(&self, d: usize) -> usize {
        self.dart_vertex(d ^ 1)
    }

    pub fn valence(&self, v: usize) -> usize {
        let wilson = if self.is_external(v) { 2 } else { 0 };
        self.orders[v].len() + wilson
    }

    /// True when every vertex has valence three.
    pub fn is_trivalent(&self) -> bool {
        (0..self.n_vertices()).all(|v| self.valence(v) == 3)
    }

    /// The unique vertex of valence four, if the graph has exactly one and all
    /// others are trivalent.
    pub fn tetravalent_vertex(&self) -> Option<usize> {
        let mut found = None;
        for v in 0..self.n_vertices() {
            match self.valence(v) {
                3 => {}
                4 if found.is_none() => found = Some(v),
                _ => return None,
            }
        }
        found
    }

    pub fn has_self_loop(&self) -> bool {
        self.edges.iter().any(|&(a, b)| a == b)
    }

    /// True when two non-Wilson edges share both endpoints.
    pub fn has_multi_edge(&self) -> bool {
        let mut pairs: Vec<(usize, usize)> = self.edges.iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
        pairs.sort_unstable();
        pairs.windows(2).any(|w| w[0] == w[1])
    }

    /// `(n + t) / 2` for trivalent graphs.
    pub fn degree(&self) -> Result<usize> {
        if !self.is_trivalent() {
            return Err(Error::Contract("degree is defined for trivalent graphs only".into()));
        }
        Ok((self.n_ext + self.n_int) / 2)
    }

    /// Same graph with the opposite V-orientation.
    pub fn negated(&self) -> Self {
        let mut g = self.clone();
        g.sign = -g.sign;
        g
    }

    fn is_connected(&self) -> bool {
        let nv = self.n_vertices();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if seen[v] {
                continue;
            }
            seen[v] = true;
            if self.is_external(v) {
                stack.push((v + 1) % self.n_ext);
                stack.push((v + self.n_ext - 1) % self.n_ext);
            }
            for &d in &self.orders[v] {
                stack.push(self.dart_partner(d));
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Compact text label: `n.t:a-b,c-d,...` with the canonical-looking edge list.
    pub fn code(&self) -> String {
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        format!("{}.{}:{}", self.n_ext, self.n_int, edges.join(","))
    }
}

/// Mutable working form used by graph surgery. Vertex ids are arbitrary; the
/// Wilson order and the internal list fix the final numbering.
#[derive(Clone, Debug)]
pub(crate) struct Builder {
    pub wilson: Vec<usize>,
    pub internal: Vec<usize>,
    /// `None` marks a deleted edge.
    pub edges: Vec<Option<(usize, usize)>>,
    /// Indexed by vertex id.
    pub orders: Vec<Vec<usize>>,
    pub sign: i8,
}

impl Builder {
    pub fn from_graph(g: &WilsonGraph) -> Self {
        Builder {
            wilson: (0..g.n_ext).collect(),
            internal: (g.n_ext..g.n_vertices()).collect(),
            edges: g.edges.iter().copied().map(Some).collect(),
            orders: g.orders.clone(),
            sign: g.sign,
        }
    }

    pub fn new_vertex(&mut self) -> usize {
        self.orders.push(Vec::new());
        self.orders.len() - 1
    }

    /// Adds an edge and returns its index; darts are `2k` and `2k + 1`.
    pub fn add_edge(&mut self, a: usize, b: usize) -> usize {
        self.edges.push(Some((a, b)));
        self.edges.len() - 1
    }

    /// Re-attaches dart `d` to vertex `v` (the caller fixes `orders`).
    pub fn move_dart(&mut self, d: usize, v: usize) {
        let e = self.edges[d / 2].as_mut().expect("live edge");
        if d % 2 == 0 {
            e.0 = v;
        } else {
            e.1 = v;
        }
    }

    pub fn finish(self) -> Result<WilsonGraph> {
        let mut vmap = vec![usize::MAX; self.orders.len()];
        for (i, &v) in self.wilson.iter().chain(self.internal.iter()).enumerate() {
            vmap[v] = i;
        }
        let mut dmap = vec![usize::MAX; 2 * self.edges.len()];
        let mut edges = Vec::new();
        for (k, e) in self.edges.iter().enumerate() {
            if let Some((a, b)) = *e {
                let nk = edges.len();
                dmap[2 * k] = 2 * nk;
                dmap[2 * k + 1] = 2 * nk + 1;
                edges.push((vmap[a], vmap[b]));
            }
        }
        let nv = self.wilson.len() + self.internal.len();
        let mut orders = vec![Vec::new(); nv];
        for &v in self.wilson.iter().chain(self.internal.iter()) {
            orders[vmap[v]] = self.orders[v].iter().map(|&d| dmap[d]).collect();
        }
        WilsonGraph::new(self.wilson.len(), self.internal.len(), edges, orders, self.sign)
    }
}

/// Sign of the permutation taking `from` to `to` (both list the same items).
pub(crate) fn relative_parity(from: &[usize], to: &[usize]) -> i8 {
    debug_assert_eq!(from.len(), to.len());
    let perm: Vec<usize> = from
        .iter()
        .map(|x| to.iter().position(|y| y == x).expect("same items"))
        .collect();
    permutation_sign(&perm)
}

pub(crate) fn permutation_sign(perm: &[usize]) -> i8 {
    let mut seen = vec![false; perm.len()];
    let mut sign = 1i8;
    for start in 0..perm.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut j = start;
        while !seen[j] {
            seen[j] = true;
            j = perm[j];
            len += 1;
        }
        if len % 2 == 0 {
            sign = -sign;
        }
    }
    sign
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_examples() {
        assert_eq!(WilsonGraph::theta().degree().unwrap(), 1);
        assert_eq!(WilsonGraph::y_graph().degree().unwrap(), 2);
        let g = WilsonGraph::double_y();
        assert_eq!((g.n_ext(), g.n_int()), (4, 2));
        assert_eq!(g.degree().unwrap(), 3);
    }

    #[test]
    fn degree_rejects_tetravalent() {
        let gx = WilsonGraph::theta().contract(EdgeRef::Wilson(0)).unwrap();
        assert!(matches!(gx.degree(), Err(Error::Contract(_))));
    }

    #[test]
    fn rejects_low_valence_and_bad_darts() {
        // internal vertex with two darts only
        assert!(WilsonGraph::from_edges(2, 1, vec![(0, 2), (1, 2)]).is_err());
        assert!(WilsonGraph::new(2, 0, vec![(0, 1)], vec![vec![1], vec![0]], 1).is_err());
        assert!(WilsonGraph::new(2, 0, vec![(0, 1)], vec![vec![0], vec![1]], 2).is_err());
    }

    #[test]
    fn parity() {
        assert_eq!(permutation_sign(&[0, 1, 2]), 1);
        assert_eq!(permutation_sign(&[1, 0, 2]), -1);
        assert_eq!(permutation_sign(&[1, 2, 0]), 1);
        assert_eq!(permutation_sign(&[1, 2, 3, 0]), -1);
        assert_eq!(relative_parity(&[4, 6, 8], &[6, 8, 4]), 1);
        assert_eq!(relative_parity(&[4, 6, 8], &[6, 4, 8]), -1);
    }

    #[test]
    fn trivalent_parity_of_vertex_count() {
        for g in [WilsonGraph::theta(), WilsonGraph::y_graph(), WilsonGraph::wheel(3).unwrap(), WilsonGraph::double_y()] {
            assert_eq!((g.n_ext() + g.n_int()) % 2, 0);
        }
    }
}

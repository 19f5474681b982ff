//! Canonical labelling, isomorphism and automorphism counts.
//!
//! External vertices may only be rotated along the Wilson cycle. For each
//! allowed rotation the internal vertices are labelled by a breadth-first
//! search from the externals, branching over every ordering of the freshly
//! reached neighbours. The labelling with the smallest sorted edge list wins.
//! Every labelling achieving the minimum differs from the winner by a vertex
//! automorphism, so the same search also yields `Aut(Γ)`.

use super::{relative_parity, WilsonGraph};

/// Isomorphism-invariant key of an underlying Wilson graph.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct GraphKey {
    pub n_ext: usize,
    pub n_int: usize,
    pub edges: Vec<(usize, usize)>,
}

impl std::fmt::Display for GraphKey {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let edges: Vec<String> = self.edges.iter().map(|(a, b)| format!("{a}-{b}")).collect();
        write!(f, "{}.{}:{}", self.n_ext, self.n_int, edges.join(","))
    }
}

/// A graph brought to canonical form. `graph` carries sorted vertex orders and
/// sign `+1`; the input equals `sign * graph`.
#[derive(Clone, Debug)]
pub struct CanonicalForm {
    pub key: GraphKey,
    pub graph: WilsonGraph,
    pub sign: i8,
    /// Input vertex -> canonical vertex.
    pub vertex_map: Vec<usize>,
    /// Input dart -> canonical dart.
    pub dart_map: Vec<usize>,
}

/// Orders of the automorphism group and of its orientation-preserving part.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Symmetry {
    pub aut: u64,
    pub aut_plus: u64,
}

impl Symmetry {
    /// True when some automorphism reverses the V-orientation, i.e. Γ ≅ −Γ.
    pub fn self_negating(&self) -> bool {
        self.aut_plus < self.aut
    }
}

/// An isomorphism between two Wilson graphs.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GraphIso {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub dart_map: Vec<usize>,
    /// `+1` when the V-orientations correspond, `-1` when they are opposite.
    pub orientation_sign: i8,
}

struct Search<'a> {
    g: &'a WilsonGraph,
    best: Option<Vec<(usize, usize)>>,
    winners: Vec<Vec<usize>>,
}

impl<'a> Search<'a> {
    fn run(g: &'a WilsonGraph, rotations: &[usize]) -> (Vec<(usize, usize)>, Vec<Vec<usize>>) {
        let mut s = Search { g, best: None, winners: Vec::new() };
        let n = g.n_ext();
        for &r in rotations {
            let mut label = vec![usize::MAX; g.n_vertices()];
            let mut seq = Vec::with_capacity(g.n_vertices());
            for i in 0..n {
                let v = (r + i) % n;
                label[v] = i;
                seq.push(v);
            }
            s.extend(&mut label, &mut seq, 0);
        }
        (s.best.expect("at least one rotation"), s.winners)
    }

    fn extend(&mut self, label: &mut Vec<usize>, seq: &mut Vec<usize>, pos: usize) {
        if seq.len() == label.len() {
            self.finish(label);
            return;
        }
        if pos == seq.len() {
            // unreachable for connected graphs
            return;
        }
        let v = seq[pos];
        let mut fresh: Vec<usize> = Vec::new();
        for &d in self.g.order(v) {
            let w = self.g.dart_partner(d);
            if label[w] == usize::MAX && !fresh.contains(&w) {
                fresh.push(w);
            }
        }
        if fresh.is_empty() {
            self.extend(label, seq, pos + 1);
            return;
        }
        fresh.sort_unstable();
        for perm in permutations(&fresh) {
            for &w in &perm {
                label[w] = seq.len();
                seq.push(w);
            }
            self.extend(label, seq, pos + 1);
            for &w in &perm {
                label[w] = usize::MAX;
                seq.pop();
            }
        }
    }

    fn finish(&mut self, label: &[usize]) {
        let edges = relabelled_edges(self.g, label);
        match &self.best {
            Some(b) if edges > *b => {}
            Some(b) if edges == *b => self.winners.push(label.to_vec()),
            _ => {
                self.best = Some(edges);
                self.winners.clear();
                self.winners.push(label.to_vec());
            }
        }
    }
}

fn relabelled_edges(g: &WilsonGraph, label: &[usize]) -> Vec<(usize, usize)> {
    let mut e: Vec<(usize, usize)> = g
        .edges()
        .iter()
        .map(|&(a, b)| {
            let (x, y) = (label[a], label[b]);
            (x.min(y), x.max(y))
        })
        .collect();
    e.sort_unstable();
    e
}

fn permutations(items: &[usize]) -> Vec<Vec<usize>> {
    if items.len() <= 1 {
        return vec![items.to_vec()];
    }
    let mut out = Vec::new();
    for i in 0..items.len() {
        let mut rest = items.to_vec();
        let head = rest.remove(i);
        for mut tail in permutations(&rest) {
            tail.insert(0, head);
            out.push(tail);
        }
    }
    out
}

/// Dart map induced by a vertex labelling; parallel edges are matched in
/// their original order.
fn dart_map_for(g: &WilsonGraph, label: &[usize]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..g.edges().len()).collect();
    let rel = |k: usize| {
        let (a, b) = g.edges()[k];
        let (x, y) = (label[a], label[b]);
        (x.min(y), x.max(y))
    };
    idx.sort_by_key(|&k| (rel(k), k));
    let mut map = vec![0; 2 * g.edges().len()];
    for (pos, &k) in idx.iter().enumerate() {
        let (a, b) = g.edges()[k];
        if label[a] <= label[b] {
            map[2 * k] = 2 * pos;
            map[2 * k + 1] = 2 * pos + 1;
        } else {
            map[2 * k] = 2 * pos + 1;
            map[2 * k + 1] = 2 * pos;
        }
    }
    map
}

/// Sign of `g` relative to the sorted-order canonical orientation under a labelling.
fn orientation_sign(g: &WilsonGraph, dmap: &[usize]) -> i8 {
    let mut s = g.sign();
    for v in 0..g.n_vertices() {
        let image: Vec<usize> = g.order(v).iter().map(|&d| dmap[d]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        s *= relative_parity(&image, &sorted);
    }
    s
}

fn build_form(g: &WilsonGraph, edges: Vec<(usize, usize)>, label: &[usize]) -> CanonicalForm {
    let dmap = dart_map_for(g, label);
    let sign = orientation_sign(g, &dmap);
    let nv = g.n_vertices();
    let mut orders = vec![Vec::new(); nv];
    for (k, &(a, b)) in edges.iter().enumerate() {
        orders[a].push(2 * k);
        orders[b].push(2 * k + 1);
    }
    for o in &mut orders {
        o.sort_unstable();
    }
    let graph = WilsonGraph { n_ext: g.n_ext(), n_int: g.n_int(), edges: edges.clone(), orders, sign: 1 };
    CanonicalForm {
        key: GraphKey { n_ext: g.n_ext(), n_int: g.n_int(), edges },
        graph,
        sign,
        vertex_map: label.to_vec(),
        dart_map: dmap,
    }
}

fn symmetry_from(g: &WilsonGraph, winners: &[Vec<usize>], base_sign: i8) -> Symmetry {
    let mut groups: Vec<(usize, usize)> = g.edges().iter().map(|&(a, b)| (a.min(b), a.max(b))).collect();
    groups.sort_unstable();
    let mut parallel: u64 = 1;
    let mut i = 0;
    while i < groups.len() {
        let mut j = i;
        while j < groups.len() && groups[j] == groups[i] {
            j += 1;
        }
        parallel *= (1..=(j - i) as u64).product::<u64>();
        i = j;
    }
    let loops = g.edges().iter().filter(|(a, b)| a == b).count() as u32;
    let vertex_auts = winners.len() as u64;
    let aut = vertex_auts * parallel * 2u64.pow(loops);
    let aut_plus = if loops > 0 {
        aut / 2
    } else {
        let same = winners
            .iter()
            .filter(|lab| orientation_sign(g, &dart_map_for(g, lab)) == base_sign)
            .count() as u64;
        same * parallel
    };
    Symmetry { aut, aut_plus }
}

impl WilsonGraph {
    /// Canonical form over all Wilson rotations.
    pub fn canonical(&self) -> CanonicalForm {
        let rots: Vec<usize> = (0..self.n_ext()).collect();
        let (best, winners) = Search::run(self, &rots);
        build_form(self, best, &winners[0])
    }

    /// Canonical form with the rotation pinned so that external vertex `first`
    /// receives label 0. Used for graphs whose Wilson line is cut open.
    pub fn canonical_pinned(&self, first: usize) -> CanonicalForm {
        let (best, winners) = Search::run(self, &[first]);
        build_form(self, best, &winners[0])
    }

    pub fn key(&self) -> GraphKey {
        self.canonical().key
    }

    /// Automorphism group orders.
    pub fn symmetry(&self) -> Symmetry {
        let rots: Vec<usize> = (0..self.n_ext()).collect();
        let (best, winners) = Search::run(self, &rots);
        let base = build_form(self, best, &winners[0]).sign;
        symmetry_from(self, &winners, base)
    }

    /// Automorphisms fixing external vertex `first` (hence the whole Wilson line).
    pub fn symmetry_pinned(&self, first: usize) -> Symmetry {
        let (best, winners) = Search::run(self, &[first]);
        let base = build_form(self, best, &winners[0]).sign;
        symmetry_from(self, &winners, base)
    }

    /// `(|Aut(Γ)|, |Aut₊(Γ)|)`.
    pub fn automorphisms(&self) -> (u64, u64) {
        let s = self.symmetry();
        (s.aut, s.aut_plus)
    }

    /// An isomorphism `self -> other` if the underlying graphs agree.
    pub fn isomorphic(&self, other: &WilsonGraph) -> Option<GraphIso> {
        let a = self.canonical();
        let b = other.canonical();
        if a.key != b.key {
            return None;
        }
        let mut vinv = vec![0; b.vertex_map.len()];
        for (v, &c) in b.vertex_map.iter().enumerate() {
            vinv[c] = v;
        }
        let mut dinv = vec![0; b.dart_map.len()];
        for (d, &c) in b.dart_map.iter().enumerate() {
            dinv[c] = d;
        }
        let vertex_map: Vec<usize> = a.vertex_map.iter().map(|&c| vinv[c]).collect();
        let dart_map: Vec<usize> = a.dart_map.iter().map(|&c| dinv[c]).collect();
        let edge_map = (0..self.edges().len()).map(|k| dart_map[2 * k] / 2).collect();
        Some(GraphIso { vertex_map, edge_map, dart_map, orientation_sign: a.sign * b.sign })
    }
}

impl GraphIso {
    /// Checks `ρ∂ = ∂'σ`, rotation of the Wilson line, and recomputes the sign.
    pub fn verify(&self, a: &WilsonGraph, b: &WilsonGraph) -> bool {
        let n = a.n_ext();
        if n != b.n_ext() || a.n_int() != b.n_int() || a.edges().len() != b.edges().len() {
            return false;
        }
        let shift = (self.vertex_map[0] + n) % n;
        if (0..n).any(|i| self.vertex_map[i] != (i + shift) % n) {
            return false;
        }
        for d in 0..self.dart_map.len() {
            if self.vertex_map[a.dart_vertex(d)] != b.dart_vertex(self.dart_map[d]) {
                return false;
            }
            if self.dart_map[d ^ 1] != self.dart_map[d] ^ 1 {
                return false;
            }
        }
        let mut s = a.sign() * b.sign();
        for v in 0..a.n_vertices() {
            let image: Vec<usize> = a.order(v).iter().map(|&d| self.dart_map[d]).collect();
            s *= relative_parity(&image, b.order(self.vertex_map[v]));
        }
        s == self.orientation_sign
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_self_iso() {
        let t = WilsonGraph::theta();
        let iso = t.isomorphic(&t).unwrap();
        assert_eq!(iso.orientation_sign, 1);
        assert!(iso.verify(&t, &t));
        let iso = t.isomorphic(&t.negated()).unwrap();
        assert_eq!(iso.orientation_sign, -1);
        assert!(iso.verify(&t, &t.negated()));
    }

    #[test]
    fn crossing_vs_parallel_chords() {
        let x = WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap();
        let p = WilsonGraph::chord_diagram(&[(0, 1), (2, 3)]).unwrap();
        assert!(x.isomorphic(&p).is_none());
        let p2 = WilsonGraph::chord_diagram(&[(1, 2), (3, 0)]).unwrap();
        let iso = p.isomorphic(&p2).unwrap();
        assert!(iso.verify(&p, &p2));
    }

    #[test]
    fn theta_symmetry() {
        assert_eq!(WilsonGraph::theta().automorphisms(), (2, 2));
    }

    #[test]
    fn wilson_pairing_matters() {
        let a = WilsonGraph::from_edges(4, 2, vec![(0, 4), (1, 4), (2, 5), (3, 5), (4, 5)]).unwrap();
        let b = WilsonGraph::from_edges(4, 2, vec![(0, 4), (3, 4), (1, 5), (2, 5), (4, 5)]).unwrap();
        assert!(a.isomorphic(&b).is_some());
        let c = WilsonGraph::from_edges(4, 2, vec![(0, 4), (2, 4), (1, 5), (3, 5), (4, 5)]).unwrap();
        assert!(a.isomorphic(&c).is_none());
    }

    #[test]
    fn canonical_is_label_independent() {
        let w = WilsonGraph::wheel(3).unwrap();
        let shuffled = WilsonGraph::from_edges(3, 3, vec![(4, 5), (0, 5), (1, 3), (2, 4), (3, 4), (5, 3)]).unwrap();
        assert_eq!(w.key(), shuffled.key());
    }
}

//! Contraction, lifts, connected sum and the primitive/prime classification.

use super::{Builder, WilsonGraph};
use crate::error::{Error, Result};

/// An edge of a Wilson graph: Wilson edge `i` joins external `i` to `i + 1 (mod n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum EdgeRef {
    Wilson(usize),
    NonWilson(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Classification {
    Primitive,
    PrimeNotPrimitive,
    NotPrime,
}

impl std::fmt::Display for Classification {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Classification::Primitive => "primitive",
            Classification::PrimeNotPrimitive => "prime-not-primitive",
            Classification::NotPrime => "not-prime",
        })
    }
}

fn rotate_to_front(order: &mut [usize], d: usize) {
    let i = order.iter().position(|&x| x == d).expect("dart present");
    order.rotate_left(i);
}

fn rotate_to_back(order: &mut [usize], d: usize) {
    let i = order.iter().position(|&x| x == d).expect("dart present");
    order.rotate_left((i + 1) % order.len());
}

impl WilsonGraph {
    /// Chords with both ends on the Wilson line (the set `E^o`).
    pub fn is_chord(&self, k: usize) -> bool {
        let (a, b) = self.edges()[k];
        self.is_external(a) && self.is_external(b)
    }

    /// Edges that may be contracted: Wilson edges (when `n >= 2`) and non-Wilson
    /// edges with an internal endpoint.
    pub fn admissible_edges(&self) -> Vec<EdgeRef> {
        let mut out = Vec::new();
        if self.n_ext() >= 2 {
            out.extend((0..self.n_ext()).map(EdgeRef::Wilson));
        }
        for k in 0..self.edges().len() {
            let (a, b) = self.edges()[k];
            if !self.is_chord(k) && a != b {
                out.push(EdgeRef::NonWilson(k));
            }
        }
        out
    }

    /// Collapses an admissible edge of a trivalent graph to a tetravalent vertex.
    pub fn contract(&self, e: EdgeRef) -> Result<WilsonGraph> {
        if !self.is_trivalent() {
            return Err(Error::Contract("contraction needs a trivalent graph".into()));
        }
        if !self.admissible_edges().contains(&e) {
            return Err(Error::Contract(format!("edge {e:?} is not admissible")));
        }
        let mut b = Builder::from_graph(self);
        match e {
            EdgeRef::Wilson(i) => {
                let n = self.n_ext();
                let (x1, x2) = (i, (i + 1) % n);
                let d1 = b.orders[x1][0];
                let d2 = b.orders[x2][0];
                b.orders[x1] = vec![d1, d2];
                b.orders[x2].clear();
                b.move_dart(d2, x1);
                b.wilson.retain(|&v| v != x2);
            }
            EdgeRef::NonWilson(k) => {
                let (u, v) = self.edges()[k];
                let (du, dv) = (2 * k, 2 * k + 1);
                if self.is_external(u) || self.is_external(v) {
                    let (x, y, f) = if self.is_external(u) { (u, v, dv) } else { (v, u, du) };
                    let mut oy = b.orders[y].clone();
                    rotate_to_back(&mut oy, f);
                    let (p, q) = (oy[0], oy[1]);
                    b.orders[x] = vec![q, p];
                    b.move_dart(p, x);
                    b.move_dart(q, x);
                    b.orders[y].clear();
                    b.internal.retain(|&w| w != y);
                } else {
                    let mut ou = b.orders[u].clone();
                    let mut ov = b.orders[v].clone();
                    rotate_to_back(&mut ou, du);
                    rotate_to_front(&mut ov, dv);
                    let (p, q, r, s) = (ou[0], ou[1], ov[1], ov[2]);
                    b.orders[u] = vec![p, q, r, s];
                    b.move_dart(r, u);
                    b.move_dart(s, u);
                    b.orders[v].clear();
                    b.internal.retain(|&w| w != v);
                }
                b.edges[k] = None;
            }
        }
        b.finish()
    }

    /// The trivalent graphs `Γ_x^i` with `δ_{e_i} Γ_x^i = Γ_x`, together with the
    /// new edge. For an internal tetravalent vertex these are the three pairings
    /// of its darts; for a Wilson vertex the two splittings along the line and
    /// the one pulling the pair off the line.
    pub fn lifts(&self) -> Result<Vec<(WilsonGraph, EdgeRef)>> {
        let x = self
            .tetravalent_vertex()
            .ok_or_else(|| Error::Contract("lifts need exactly one tetravalent vertex".into()))?;
        let o = self.order(x).to_vec();
        let mut out = Vec::with_capacity(3);
        if self.is_external(x) {
            let (d1, d2) = (o[0], o[1]);
            for (first, second, flip) in [(d1, d2, false), (d2, d1, true)] {
                let mut b = Builder::from_graph(self);
                let x2 = b.new_vertex();
                b.orders[x] = vec![first];
                b.orders[x2] = vec![second];
                b.move_dart(second, x2);
                let pos = b.wilson.iter().position(|&w| w == x).expect("on line");
                b.wilson.insert(pos + 1, x2);
                if flip {
                    b.sign = -b.sign;
                }
                out.push((b.finish()?, EdgeRef::Wilson(pos)));
            }
            let mut b = Builder::from_graph(self);
            let y = b.new_vertex();
            let k = b.add_edge(x, y);
            b.orders[x] = vec![2 * k];
            b.orders[y] = vec![d2, d1, 2 * k + 1];
            b.move_dart(d1, y);
            b.move_dart(d2, y);
            b.internal.push(y);
            let g = b.finish()?;
            let nk = g.edges().len() - 1;
            out.push((g, EdgeRef::NonWilson(nk)));
        } else {
            let pairings = [(o[0], o[1], o[2], o[3]), (o[0], o[2], o[3], o[1]), (o[0], o[3], o[1], o[2])];
            for (p, q, r, s) in pairings {
                let mut b = Builder::from_graph(self);
                let z = b.new_vertex();
                let k = b.add_edge(x, z);
                b.orders[x] = vec![p, q, 2 * k];
                b.orders[z] = vec![2 * k + 1, r, s];
                b.move_dart(r, z);
                b.move_dart(s, z);
                b.internal.push(z);
                let g = b.finish()?;
                let nk = g.edges().len() - 1;
                out.push((g, EdgeRef::NonWilson(nk)));
            }
        }
        Ok(out)
    }

    /// Connected sum along the Wilson lines: `self`'s line followed by `other`'s.
    pub fn connected_sum(&self, other: &WilsonGraph) -> WilsonGraph {
        let (na, ta) = (self.n_ext(), self.n_int());
        let (nb, tb) = (other.n_ext(), other.n_int());
        let ea = self.edges().len();
        let map_a = |v: usize| if v < na { v } else { v + nb };
        let map_b = |v: usize| if v < nb { v + na } else { v + na + ta };
        let mut edges: Vec<(usize, usize)> = self.edges().iter().map(|&(a, b)| (map_a(a), map_a(b))).collect();
        edges.extend(other.edges().iter().map(|&(a, b)| (map_b(a), map_b(b))));
        let mut orders = vec![Vec::new(); na + nb + ta + tb];
        for v in 0..self.n_vertices() {
            orders[map_a(v)] = self.order(v).to_vec();
        }
        for v in 0..other.n_vertices() {
            orders[map_b(v)] = other.order(v).iter().map(|&d| d + 2 * ea).collect();
        }
        WilsonGraph::new(na + nb, ta + tb, edges, orders, self.sign() * other.sign())
            .expect("connected sum of valid graphs is valid")
    }

    /// Rotates the Wilson labels so that external `r` becomes external 0.
    pub fn rotated(&self, r: usize) -> WilsonGraph {
        let mut b = Builder::from_graph(self);
        b.wilson.rotate_left(r % self.n_ext());
        b.finish().expect("rotation preserves validity")
    }

    /// True when the graph minus its Wilson edges is connected.
    pub fn is_primitive(&self) -> bool {
        let nv = self.n_vertices();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            for &d in self.order(v) {
                stack.push(self.dart_partner(d));
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// True when cutting any two Wilson edges leaves the graph connected.
    pub fn is_prime(&self) -> bool {
        let n = self.n_ext();
        for i in 0..n {
            for j in (i + 1)..n {
                if !self.connected_without(i, j) {
                    return false;
                }
            }
        }
        true
    }

    fn connected_without(&self, i: usize, j: usize) -> bool {
        let n = self.n_ext();
        let nv = self.n_vertices();
        let mut seen = vec![false; nv];
        let mut stack = vec![0];
        while let Some(v) = stack.pop() {
            if std::mem::replace(&mut seen[v], true) {
                continue;
            }
            if v < n {
                if v != i && v != j {
                    stack.push((v + 1) % n);
                }
                let prev = (v + n - 1) % n;
                if prev != i && prev != j {
                    stack.push(prev);
                }
            }
            for &d in self.order(v) {
                stack.push(self.dart_partner(d));
            }
        }
        seen.into_iter().all(|s| s)
    }

    pub fn classify(&self) -> Classification {
        if self.is_primitive() {
            Classification::Primitive
        } else if self.is_prime() {
            Classification::PrimeNotPrimitive
        } else {
            Classification::NotPrime
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn lifted_back(g: &WilsonGraph) {
        for e in g.admissible_edges() {
            let gx = g.contract(e).unwrap();
            assert!(gx.tetravalent_vertex().is_some(), "{e:?}");
            let lifts = gx.lifts().unwrap();
            let hit = lifts.iter().any(|(h, _)| h.isomorphic(g).map(|i| i.orientation_sign) == Some(1));
            assert!(hit, "contracting {e:?} of {} is not undone by a positive lift", g.code());
        }
    }

    #[test]
    fn theta_wilson_contraction_is_a_loop() {
        let gx = WilsonGraph::theta().contract(EdgeRef::Wilson(0)).unwrap();
        assert_eq!(gx.n_ext(), 1);
        assert!(gx.has_self_loop());
        assert!(WilsonGraph::theta().contract(EdgeRef::NonWilson(0)).is_err());
    }

    #[test]
    fn y_leg_contraction_gives_wilson_vertex() {
        let gx = WilsonGraph::y_graph().contract(EdgeRef::NonWilson(0)).unwrap();
        assert_eq!((gx.n_ext(), gx.n_int()), (3, 0));
        let x = gx.tetravalent_vertex().unwrap();
        assert!(gx.is_external(x));
        assert_eq!(gx.lifts().unwrap().len(), 3);
    }

    #[test]
    fn wheel_internal_contraction() {
        let w = WilsonGraph::wheel(3).unwrap();
        let gx = w.contract(EdgeRef::NonWilson(3)).unwrap();
        let x = gx.tetravalent_vertex().unwrap();
        assert!(!gx.is_external(x));
        assert_eq!(gx.lifts().unwrap().len(), 3);
    }

    #[test]
    fn contraction_round_trips() {
        for g in [WilsonGraph::theta(), WilsonGraph::y_graph(), WilsonGraph::wheel(3).unwrap(), WilsonGraph::double_y()] {
            lifted_back(&g);
        }
        lifted_back(&WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap());
    }

    #[test]
    fn classification() {
        let t = WilsonGraph::theta();
        assert_eq!(t.classify(), Classification::Primitive);
        assert_eq!(t.connected_sum(&t).classify(), Classification::NotPrime);
        let x = WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap();
        assert_eq!(x.classify(), Classification::PrimeNotPrimitive);
        assert_eq!(WilsonGraph::y_graph().classify(), Classification::Primitive);
    }
}

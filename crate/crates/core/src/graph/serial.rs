//! JSON form of a Wilson graph.
//!
//! Edges are numbered with the chords first and the remaining edges after them;
//! `vertex_orders` lists edge numbers. A self-loop appears twice at its vertex,
//! tail end first.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::WilsonGraph;
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub n: usize,
    pub t: usize,
    pub wilson_order: Vec<usize>,
    pub chords: Vec<[usize; 2]>,
    pub internal_edges: Vec<[usize; 2]>,
    pub vertex_orders: BTreeMap<usize, Vec<usize>>,
    #[serde(default = "plus")]
    pub sign: i8,
}

fn plus() -> i8 {
    1
}

impl WilsonGraph {
    pub fn to_json(&self) -> GraphJson {
        let mut perm: Vec<usize> = (0..self.edges().len()).filter(|&k| self.is_chord(k)).collect();
        perm.extend((0..self.edges().len()).filter(|&k| !self.is_chord(k)));
        let mut new_index = vec![0; perm.len()];
        for (i, &k) in perm.iter().enumerate() {
            new_index[k] = i;
        }
        let mut chords = Vec::new();
        let mut internal_edges = Vec::new();
        for &k in &perm {
            let (a, b) = self.edges()[k];
            if self.is_chord(k) {
                chords.push([a, b]);
            } else {
                internal_edges.push([a, b]);
            }
        }
        let vertex_orders = (0..self.n_vertices())
            .map(|v| (v, self.order(v).iter().map(|&d| new_index[d / 2]).collect()))
            .collect();
        GraphJson {
            n: self.n_ext(),
            t: self.n_int(),
            wilson_order: (0..self.n_ext()).collect(),
            chords,
            internal_edges,
            vertex_orders,
            sign: self.sign(),
        }
    }

    pub fn from_json(j: &GraphJson) -> Result<WilsonGraph> {
        let nv = j.n + j.t;
        if j.wilson_order.len() != j.n {
            return Err(Error::InvalidGraph("wilson_order must list the n external vertices".into()));
        }
        let mut relabel = vec![usize::MAX; nv];
        for (i, &v) in j.wilson_order.iter().enumerate() {
            if v >= nv || relabel[v] != usize::MAX {
                return Err(Error::InvalidGraph(format!("bad wilson_order entry {v}")));
            }
            relabel[v] = i;
        }
        let mut next = j.n;
        for r in relabel.iter_mut() {
            if *r == usize::MAX {
                *r = next;
                next += 1;
            }
        }
        let mut edges = Vec::new();
        for [a, b] in j.chords.iter().chain(j.internal_edges.iter()).copied() {
            if a >= nv || b >= nv {
                return Err(Error::InvalidGraph(format!("edge [{a},{b}] out of range")));
            }
            edges.push((relabel[a], relabel[b]));
        }
        let mut orders = vec![Vec::new(); nv];
        for (&v, list) in &j.vertex_orders {
            if v >= nv {
                return Err(Error::InvalidGraph(format!("vertex {v} out of range")));
            }
            let w = relabel[v];
            for &k in list {
                let &(a, b) = edges
                    .get(k)
                    .ok_or_else(|| Error::InvalidGraph(format!("edge {k} out of range")))?;
                let tail_used = orders[w].contains(&(2 * k));
                let d = if a == w && !tail_used {
                    2 * k
                } else if b == w {
                    2 * k + 1
                } else {
                    return Err(Error::InvalidGraph(format!("edge {k} is not incident to vertex {v}")));
                };
                orders[w].push(d);
            }
        }
        WilsonGraph::new(j.n, j.t, edges, orders, j.sign)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip() {
        for g in [WilsonGraph::theta(), WilsonGraph::y_graph(), WilsonGraph::wheel(3).unwrap(), WilsonGraph::double_y()] {
            let s = serde_json::to_string(&g.to_json()).unwrap();
            let back = WilsonGraph::from_json(&serde_json::from_str(&s).unwrap()).unwrap();
            assert_eq!(back, g);
            assert_eq!(serde_json::to_string(&back.to_json()).unwrap(), s);
        }
    }

    #[test]
    fn rejects_non_incident_order() {
        let mut j = WilsonGraph::theta().to_json();
        j.vertex_orders.insert(0, vec![0, 0]);
        assert!(WilsonGraph::from_json(&j).is_err());
    }
}

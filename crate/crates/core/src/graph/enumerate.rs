use std::collections::BTreeMap;

use super::{EdgeRef, GraphKey, WilsonGraph};
use crate::error::{Error, Result};

/// Limits on enumeration.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub struct EnumerationCaps {
    pub max_degree: usize,
}

impl Default for EnumerationCaps {
    fn default() -> Self {
        EnumerationCaps { max_degree: 4 }
    }
}

fn matchings(points: &mut Vec<usize>, acc: &mut Vec<(usize, usize)>, out: &mut Vec<Vec<(usize, usize)>>) {
    if points.is_empty() {
        out.push(acc.clone());
        return;
    }
    let a = points.remove(0);
    for i in 0..points.len() {
        let b = points.remove(i);
        acc.push((a, b));
        matchings(points, acc, out);
        acc.pop();
        points.insert(i, b);
    }
    points.insert(0, a);
}

/// Chord diagrams of the given degree, one canonical representative each.
pub fn enumerate_chord_diagrams(degree: usize) -> Vec<WilsonGraph> {
    if degree == 0 {
        return Vec::new();
    }
    let mut all = Vec::new();
    matchings(&mut (0..2 * degree).collect(), &mut Vec::new(), &mut all);
    let mut classes: BTreeMap<GraphKey, WilsonGraph> = BTreeMap::new();
    for m in all {
        let c = WilsonGraph::chord_diagram(&m).expect("matching is valid").canonical();
        classes.entry(c.key).or_insert(c.graph);
    }
    classes.into_values().collect()
}

/// Representatives of the trivalent Wilson graphs of degree `degree` without
/// self-loops, ordered by internal-vertex count and then by key. Each
/// representative is in canonical form with sign `+1`.
pub fn enumerate(degree: usize, caps: &EnumerationCaps) -> Result<Vec<WilsonGraph>> {
    if degree > caps.max_degree {
        return Err(Error::Cap(format!("degree {degree} exceeds the enumeration cap {}", caps.max_degree)));
    }
    let mut level = enumerate_chord_diagrams(degree);
    let mut out = level.clone();
    // Every graph with an internal vertex arises from one with fewer internal
    // vertices by collapsing a Wilson edge and pulling the pair off the line.
    while !level.is_empty() {
        let mut next: BTreeMap<GraphKey, WilsonGraph> = BTreeMap::new();
        for g in &level {
            if g.n_ext() < 2 {
                continue;
            }
            for i in 0..g.n_ext() {
                let gx = g.contract(EdgeRef::Wilson(i))?;
                let (h, _) = gx.lifts()?.pop().expect("three lifts");
                if h.has_self_loop() {
                    continue;
                }
                let c = h.canonical();
                next.entry(c.key).or_insert(c.graph);
            }
        }
        level = next.into_values().collect();
        out.extend(level.iter().cloned());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one_is_theta() {
        let g = enumerate(1, &EnumerationCaps::default()).unwrap();
        assert_eq!(g.len(), 1);
        assert!(g[0].isomorphic(&WilsonGraph::theta()).is_some());
    }

    #[test]
    fn chord_diagram_counts() {
        // rotation classes of perfect matchings on 2n cyclic points
        assert_eq!(enumerate_chord_diagrams(1).len(), 1);
        assert_eq!(enumerate_chord_diagrams(2).len(), 2);
        assert_eq!(enumerate_chord_diagrams(3).len(), 5);
    }

    #[test]
    fn cap() {
        assert!(matches!(enumerate(5, &EnumerationCaps::default()), Err(Error::Cap(_))));
        assert!(enumerate(0, &EnumerationCaps::default()).unwrap().is_empty());
    }
}

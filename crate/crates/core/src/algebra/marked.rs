//! Marked graphs, shuffle products and partition counts.
//!
//! A marked graph is a Wilson graph with one distinguished Wilson edge. Cutting
//! the Wilson line at the marking turns the cyclic order of the external
//! vertices into a linear one; shuffles interleave two such linear orders.

use std::collections::{BTreeMap, HashMap};

use num_traits::Zero;

use super::linalg::{q, Q};
use crate::error::{Error, Result};
use crate::graph::{GraphKey, WilsonGraph};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkedGraph {
    pub graph: WilsonGraph,
    /// Wilson edge from external `edge` to `edge + 1 (mod n)`.
    pub edge: usize,
}

impl MarkedGraph {
    pub fn new(graph: WilsonGraph, edge: usize) -> Result<Self> {
        if edge >= graph.n_ext() {
            return Err(Error::Contract(format!("marking {edge} is not a Wilson edge")));
        }
        Ok(MarkedGraph { graph, edge })
    }

    /// Relabelled so that the marking runs from the last external vertex to the first.
    pub fn linearized(&self) -> WilsonGraph {
        self.graph.rotated((self.edge + 1) % self.graph.n_ext())
    }

    /// Key of the marked class and the sign of `self` relative to its representative.
    pub fn class(&self) -> (GraphKey, i8) {
        let c = self.graph.canonical_pinned((self.edge + 1) % self.graph.n_ext());
        (c.key, c.sign)
    }

    /// True when an automorphism fixing the marking reverses the orientation.
    pub fn self_negating(&self) -> bool {
        self.graph.symmetry_pinned((self.edge + 1) % self.graph.n_ext()).self_negating()
    }
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(k);
    fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            rec(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    rec(0, n, k, &mut cur, &mut out);
    out
}

/// All `(n1, n2)`-shuffles as 0-based maps `σ[k]` = position of item `k`.
pub fn shuffles(n1: usize, n2: usize) -> Vec<Vec<usize>> {
    multishuffles(&[n1, n2])
}

/// Permutations increasing on each consecutive block of the given sizes.
pub fn multishuffles(sizes: &[usize]) -> Vec<Vec<usize>> {
    let total: usize = sizes.iter().sum();
    let mut out = vec![(Vec::new(), (0..total).collect::<Vec<usize>>())];
    for &s in sizes {
        let mut next = Vec::new();
        for (sigma, free) in &out {
            for pick in combinations(free.len(), s) {
                let mut sg: Vec<usize> = sigma.clone();
                sg.extend(pick.iter().map(|&i| free[i]));
                let rest: Vec<usize> = free.iter().enumerate().filter(|(i, _)| !pick.contains(i)).map(|(_, &v)| v).collect();
                next.push((sg, rest));
            }
        }
        out = next;
    }
    out.into_iter().map(|(s, _)| s).collect()
}

fn is_shuffle(sigma: &[usize], n1: usize, n: usize) -> bool {
    if sigma.len() != n {
        return false;
    }
    let mut seen = vec![false; n];
    for &p in sigma {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return false;
        }
    }
    sigma[..n1].windows(2).all(|w| w[0] < w[1]) && sigma[n1..].windows(2).all(|w| w[0] < w[1])
}

/// `(Γ₁,e₁) ×_σ (Γ₂,e₂)`: the external vertex `k` of the combined line
/// (first graph's vertices, then the second's, each listed from the marking)
/// goes to position `σ[k]`; the new marking runs from the last position to the first.
pub fn shuffle_product(a: &MarkedGraph, b: &MarkedGraph, sigma: &[usize]) -> Result<MarkedGraph> {
    let la = a.linearized();
    let lb = b.linearized();
    let (n1, t1) = (la.n_ext(), la.n_int());
    let (n2, t2) = (lb.n_ext(), lb.n_int());
    let n = n1 + n2;
    if !is_shuffle(sigma, n1, n) {
        return Err(Error::Contract(format!("{sigma:?} is not a ({n1},{n2})-shuffle")));
    }
    let map_a = |v: usize| if v < n1 { sigma[v] } else { n + (v - n1) };
    let map_b = |v: usize| if v < n2 { sigma[n1 + v] } else { n + t1 + (v - n2) };
    let ea = la.edges().len();
    let mut edges: Vec<(usize, usize)> = la.edges().iter().map(|&(x, y)| (map_a(x), map_a(y))).collect();
    edges.extend(lb.edges().iter().map(|&(x, y)| (map_b(x), map_b(y))));
    let mut orders = vec![Vec::new(); n + t1 + t2];
    for v in 0..la.n_vertices() {
        orders[map_a(v)] = la.order(v).to_vec();
    }
    for v in 0..lb.n_vertices() {
        orders[map_b(v)] = lb.order(v).iter().map(|&d| d + 2 * ea).collect();
    }
    let g = WilsonGraph::new(n, t1 + t2, edges, orders, la.sign() * lb.sign())?;
    Ok(MarkedGraph { graph: g, edge: n - 1 })
}

/// One representative Wilson edge per marking class (orbit of `Aut(Γ)` on `E^W`).
pub fn marking_classes(g: &WilsonGraph) -> Vec<usize> {
    let mut seen: Vec<GraphKey> = Vec::new();
    let mut reps = Vec::new();
    for e in 0..g.n_ext() {
        let (k, _) = MarkedGraph { graph: g.clone(), edge: e }.class();
        if !seen.contains(&k) {
            seen.push(k);
            reps.push(e);
        }
    }
    reps
}

/// Signed number of shuffle products landing in each marked class.
pub type ShuffleTally = HashMap<GraphKey, i64>;

/// Tally of `s(t)` over `t` in `M(Γ₁) × … × M(Γ_m) × multishuffles`, or over all
/// Wilson edges of each part when `all_markings` is set.
pub fn shuffle_tally(parts: &[WilsonGraph], all_markings: bool) -> Result<ShuffleTally> {
    let mut acc: Vec<MarkedGraph> = Vec::new();
    for (i, p) in parts.iter().enumerate() {
        let marks: Vec<usize> = if all_markings { (0..p.n_ext()).collect() } else { marking_classes(p) };
        let marked: Vec<MarkedGraph> = marks.into_iter().map(|e| MarkedGraph { graph: p.clone(), edge: e }).collect();
        if i == 0 {
            acc = marked;
            continue;
        }
        let mut next = Vec::new();
        for a in &acc {
            for b in &marked {
                for s in shuffles(a.graph.n_ext(), b.graph.n_ext()) {
                    next.push(shuffle_product(a, b, &s)?);
                }
            }
        }
        acc = next;
    }
    let mut tally = ShuffleTally::new();
    for m in acc {
        let (k, s) = m.class();
        *tally.entry(k).or_insert(0) += s as i64;
    }
    Ok(tally)
}

/// Reads `n(Γ|Γ₁,…,Γ_m)` off a tally over marking classes: the signed number of
/// partitions landing in one fixed marking class of `Γ`. Errors if the count
/// differs between marking classes.
pub fn count_from_tally(g: &WilsonGraph, tally: &ShuffleTally) -> Result<i64> {
    let mut value = None;
    for e in marking_classes(g) {
        let (k, s) = MarkedGraph { graph: g.clone(), edge: e }.class();
        let c = tally.get(&k).copied().unwrap_or(0) * s as i64;
        match value {
            None => value = Some(c),
            Some(v) if v != c => {
                return Err(Error::Contract(format!("partition count of {} depends on the marking", g.code())))
            }
            _ => {}
        }
    }
    Ok(value.unwrap_or(0))
}

/// `n(Γ|Γ₁,…,Γ_m)` by exhaustive search over marking classes and shuffles.
pub fn partition_count(g: &WilsonGraph, parts: &[WilsonGraph]) -> Result<i64> {
    let total: usize = parts.iter().map(|p| p.degree()).sum::<Result<usize>>()?;
    if total != g.degree()? {
        return Err(Error::Contract("part degrees do not add up to the graph degree".into()));
    }
    count_from_tally(g, &shuffle_tally(parts, false)?)
}

/// Both sides of the product identity for integrals, expanded over formal marked
/// symbols `y(Γ,e)` (one per marked class, zero for self-negating classes):
/// left `Σ_{e₁,e₂,σ} y((Γ₁,e₁)×_σ(Γ₂,e₂)) / (|Γ₁||Γ₂|)` with `I(Γ) = Σ_e y(Γ,e)`,
/// right `Σ_Γ n(Γ|Γ₁,Γ₂)/|Γ| · Σ_e y(Γ,e)` over the enumerated `Γ`.
pub fn product_identity_sides(
    g1: &WilsonGraph,
    g2: &WilsonGraph,
    candidates: &[WilsonGraph],
) -> Result<(BTreeMap<GraphKey, Q>, BTreeMap<GraphKey, Q>)> {
    let mut zero_class: HashMap<GraphKey, bool> = HashMap::new();
    let mut is_zero = |m: &MarkedGraph, k: &GraphKey| *zero_class.entry(k.clone()).or_insert_with(|| m.self_negating());

    let mut lhs: BTreeMap<GraphKey, Q> = BTreeMap::new();
    let norm = q((g1.symmetry().aut * g2.symmetry().aut) as i64);
    for e1 in 0..g1.n_ext() {
        for e2 in 0..g2.n_ext() {
            let a = MarkedGraph { graph: g1.clone(), edge: e1 };
            let b = MarkedGraph { graph: g2.clone(), edge: e2 };
            for s in shuffles(g1.n_ext(), g2.n_ext()) {
                let r = shuffle_product(&a, &b, &s)?;
                let (k, sign) = r.class();
                if is_zero(&r, &k) {
                    continue;
                }
                *lhs.entry(k).or_insert_with(Q::zero) += q(sign as i64) / &norm;
            }
        }
    }

    let tally = shuffle_tally(&[g1.clone(), g2.clone()], false)?;
    let mut rhs: BTreeMap<GraphKey, Q> = BTreeMap::new();
    for g in candidates {
        let n = count_from_tally(g, &tally)?;
        if n == 0 {
            continue;
        }
        let w = q(n) / q(g.symmetry().aut as i64);
        for e in 0..g.n_ext() {
            let m = MarkedGraph { graph: g.clone(), edge: e };
            let (k, sign) = m.class();
            if is_zero(&m, &k) {
                continue;
            }
            *rhs.entry(k).or_insert_with(Q::zero) += &w * q(sign as i64);
        }
    }
    lhs.retain(|_, v| !v.is_zero());
    rhs.retain(|_, v| !v.is_zero());
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn marked_theta() -> MarkedGraph {
        MarkedGraph::new(WilsonGraph::theta(), 1).unwrap()
    }

    #[test]
    fn shuffle_counts() {
        assert_eq!(shuffles(1, 1).len(), 2);
        assert_eq!(shuffles(2, 2).len(), 6);
        let s43 = shuffles(4, 3);
        assert_eq!(s43.len(), 35);
        assert!(s43.contains(&vec![0, 3, 4, 6, 1, 2, 5]));
        assert_eq!(multishuffles(&[2, 2, 2]).len(), 90);
    }

    #[test]
    fn theta_products() {
        let t = marked_theta();
        let par = shuffle_product(&t, &t, &[0, 1, 2, 3]).unwrap();
        let p = WilsonGraph::chord_diagram(&[(0, 1), (2, 3)]).unwrap();
        assert!(par.graph.isomorphic(&p).is_some());
        assert_eq!(par.edge, 3);
        let cr = shuffle_product(&t, &t, &[0, 2, 1, 3]).unwrap();
        let x = WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap();
        assert!(cr.graph.isomorphic(&x).is_some());
        assert!(shuffle_product(&t, &t, &[1, 0, 2, 3]).is_err());
    }

    #[test]
    fn theta_partitions() {
        let th = WilsonGraph::theta();
        assert_eq!(partition_count(&th, &[th.clone()]).unwrap(), 1);
        let p = WilsonGraph::chord_diagram(&[(0, 1), (2, 3)]).unwrap();
        let x = WilsonGraph::chord_diagram(&[(0, 2), (1, 3)]).unwrap();
        assert_eq!(partition_count(&p, &[th.clone(), th.clone()]).unwrap(), 2);
        assert_eq!(partition_count(&x, &[th.clone(), th.clone()]).unwrap(), 2);
    }

    #[test]
    fn cyclic_symmetry_of_counts() {
        let th = WilsonGraph::theta();
        let y = WilsonGraph::y_graph();
        let caps = crate::graph::EnumerationCaps::default();
        for g in crate::graph::enumerate(3, &caps).unwrap() {
            if g.symmetry().self_negating() {
                continue;
            }
            let a = partition_count(&g, &[th.clone(), y.clone()]).unwrap();
            let b = partition_count(&g, &[y.clone(), th.clone()]).unwrap();
            assert_eq!(a, b, "{}", g.code());
        }
    }
}

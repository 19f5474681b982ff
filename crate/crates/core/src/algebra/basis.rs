//! The quotient `𝒜_n` of the span of `G³_n` by the STU/IHX and orientation relations.

use std::collections::HashMap;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::linalg::{q, Echelon, SparseRow, Q};
use crate::error::{Error, Result};
use crate::graph::{enumerate, EnumerationCaps, GraphKey, Symmetry, WilsonGraph};

/// Column ordering used during elimination. Pivots fall on the earliest columns.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ColumnOrder {
    /// Graphs with more internal vertices first, so chord diagrams end up in the basis.
    InternalFirst,
    /// Chord diagrams first.
    ChordFirst,
}

/// Order in which relation rows are fed to the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum RowOrder {
    Natural,
    Reversed,
    Shuffled(u64),
}

/// A signed combination of enumerated graphs, as indices into `Basis::graphs`.
pub type Relation = Vec<(usize, i64)>;

#[derive(Clone, Debug)]
pub struct Basis {
    degree: usize,
    graphs: Vec<WilsonGraph>,
    symmetry: Vec<Symmetry>,
    index: HashMap<GraphKey, usize>,
    relations: Vec<Relation>,
    rank: usize,
    /// Graph indices of the basis elements.
    elements: Vec<usize>,
    /// Coordinates of `D(Γ)` for every enumerated `Γ`.
    table: Vec<Vec<Q>>,
}

fn relation_rows(graphs: &[WilsonGraph], symmetry: &[Symmetry], index: &HashMap<GraphKey, usize>) -> Result<Vec<Relation>> {
    let mut rows = Vec::new();
    for (i, s) in symmetry.iter().enumerate() {
        if s.self_negating() {
            rows.push(vec![(i, 1)]);
        }
    }
    for g in graphs {
        for e in g.admissible_edges() {
            let gx = g.contract(e)?;
            let mut acc: Vec<(usize, i64)> = Vec::new();
            for (h, _) in gx.lifts()? {
                if h.has_self_loop() {
                    continue;
                }
                let c = h.canonical();
                let j = *index
                    .get(&c.key)
                    .ok_or_else(|| Error::Contract(format!("lift {} is not enumerated", c.key)))?;
                match acc.iter_mut().find(|(k, _)| *k == j) {
                    Some(entry) => entry.1 += c.sign as i64,
                    None => acc.push((j, c.sign as i64)),
                }
            }
            acc.retain(|&(_, v)| v != 0);
            acc.sort_unstable();
            if !acc.is_empty() {
                rows.push(acc);
            }
        }
    }
    rows.sort();
    rows.dedup();
    Ok(rows)
}

impl Basis {
    pub fn build(degree: usize, caps: &EnumerationCaps) -> Result<Basis> {
        Self::build_with(degree, caps, ColumnOrder::InternalFirst, RowOrder::Natural)
    }

    pub fn build_with(degree: usize, caps: &EnumerationCaps, cols: ColumnOrder, rows: RowOrder) -> Result<Basis> {
        let graphs = enumerate(degree, caps)?;
        let symmetry: Vec<Symmetry> = graphs.iter().map(|g| g.symmetry()).collect();
        let index: HashMap<GraphKey, usize> = graphs.iter().enumerate().map(|(i, g)| (g.key(), i)).collect();
        let relations = relation_rows(&graphs, &symmetry, &index)?;

        let mut col_of: Vec<usize> = (0..graphs.len()).collect();
        let mut by_col: Vec<usize> = (0..graphs.len()).collect();
        by_col.sort_by(|&a, &b| {
            let ka = (graphs[a].n_int(), graphs[a].key());
            let kb = (graphs[b].n_int(), graphs[b].key());
            match cols {
                ColumnOrder::InternalFirst => kb.0.cmp(&ka.0).then(ka.1.cmp(&kb.1)),
                ColumnOrder::ChordFirst => ka.cmp(&kb),
            }
        });
        for (c, &g) in by_col.iter().enumerate() {
            col_of[g] = c;
        }

        let mut order: Vec<usize> = (0..relations.len()).collect();
        match rows {
            RowOrder::Natural => {}
            RowOrder::Reversed => order.reverse(),
            RowOrder::Shuffled(seed) => order.shuffle(&mut ChaCha8Rng::seed_from_u64(seed)),
        }
        let mut ech = Echelon::new();
        for &r in &order {
            let mut row: SparseRow = relations[r].iter().map(|&(g, v)| (col_of[g], q(v))).collect();
            row.sort_by_key(|(c, _)| *c);
            ech.insert(row);
        }
        let reduced = ech.reduced();
        let free_cols: Vec<usize> = (0..graphs.len()).filter(|c| !reduced.contains_key(c)).collect();
        let coord_of_col: HashMap<usize, usize> = free_cols.iter().enumerate().map(|(i, &c)| (c, i)).collect();
        let dim = free_cols.len();
        let table = (0..graphs.len())
            .map(|g| {
                let c = col_of[g];
                let mut v = vec![Q::zero(); dim];
                if let Some(&i) = coord_of_col.get(&c) {
                    v[i] = q(1);
                } else {
                    for (col, val) in &reduced[&c][1..] {
                        v[coord_of_col[col]] = -val.clone();
                    }
                }
                v
            })
            .collect();
        Ok(Basis {
            degree,
            elements: free_cols.iter().map(|&c| by_col[c]).collect(),
            rank: ech.rank(),
            graphs,
            symmetry,
            index,
            relations,
            table,
        })
    }

    /// Degree zero: the scalars.
    pub fn unit() -> Basis {
        Basis {
            degree: 0,
            graphs: Vec::new(),
            symmetry: Vec::new(),
            index: HashMap::new(),
            relations: Vec::new(),
            rank: 0,
            elements: Vec::new(),
            table: Vec::new(),
        }
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        if self.degree == 0 {
            1
        } else {
            self.elements.len()
        }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Enumerated `G³_n` representatives.
    pub fn graphs(&self) -> &[WilsonGraph] {
        &self.graphs
    }

    pub fn symmetry(&self, i: usize) -> Symmetry {
        self.symmetry[i]
    }

    /// STU/IHX rows (plus `Γ = 0` for self-negating `Γ`) over graph indices.
    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    /// The basis representatives.
    pub fn elements(&self) -> Vec<&WilsonGraph> {
        self.elements.iter().map(|&i| &self.graphs[i]).collect()
    }

    pub fn element_indices(&self) -> &[usize] {
        &self.elements
    }

    pub fn labels(&self) -> Vec<String> {
        self.elements().iter().map(|g| g.code()).collect()
    }

    pub fn index_of(&self, key: &GraphKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Coordinates of `D(graphs[i])`.
    pub fn coords_of(&self, i: usize) -> &[Q] {
        &self.table[i]
    }

    /// Coordinates of `D(g)` for an arbitrary trivalent graph of this degree.
    pub fn project_coords(&self, g: &WilsonGraph) -> Result<Vec<Q>> {
        let deg = g.degree()?;
        if deg != self.degree {
            return Err(Error::Cap(format!("graph of degree {deg} projected into degree {}", self.degree)));
        }
        if g.has_self_loop() {
            return Ok(vec![Q::zero(); self.dim()]);
        }
        let c = g.canonical();
        let i = self
            .index_of(&c.key)
            .ok_or_else(|| Error::Contract(format!("graph {} not enumerated", c.key)))?;
        let s = q(c.sign as i64);
        Ok(self.table[i].iter().map(|x| x * &s).collect())
    }

    /// Coordinates of a signed combination of enumerated graphs.
    pub fn combine(&self, combo: &[(usize, i64)]) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.dim()];
        for &(g, c) in combo {
            let s = q(c);
            for (a, b) in v.iter_mut().zip(&self.table[g]) {
                *a += b * &s;
            }
        }
        v
    }
}

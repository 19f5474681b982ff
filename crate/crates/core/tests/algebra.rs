use csknot::algebra::{product_identity_sides, Algebra, Basis, ColumnOrder, Diagram, RowOrder, Q};
use csknot::graph::{enumerate, EnumerationCaps, WilsonGraph};
use num_traits::Zero;

fn caps() -> EnumerationCaps {
    EnumerationCaps::default()
}

#[test]
fn dimensions_through_degree_four() {
    let dims: Vec<usize> = (1..=4).map(|n| Basis::build(n, &caps()).unwrap().dim()).collect();
    assert_eq!(dims, vec![1, 2, 3, 6]);
}

#[test]
fn dimension_independent_of_elimination_order() {
    for n in 1..=3 {
        let a = Basis::build_with(n, &caps(), ColumnOrder::InternalFirst, RowOrder::Natural).unwrap();
        let b = Basis::build_with(n, &caps(), ColumnOrder::ChordFirst, RowOrder::Reversed).unwrap();
        let c = Basis::build_with(n, &caps(), ColumnOrder::InternalFirst, RowOrder::Shuffled(7)).unwrap();
        assert_eq!(a.dim(), b.dim());
        assert_eq!(a.dim(), c.dim());
        // same pivot structure under a shuffled row order, so identical projections
        for i in 0..a.graphs().len() {
            assert_eq!(a.coords_of(i), c.coords_of(i));
        }
    }
}

#[test]
fn negation_and_self_negating_graphs() {
    let alg = Algebra::new(3).unwrap();
    for n in 1..=3 {
        for (i, g) in alg.basis(n).unwrap().graphs().iter().enumerate() {
            let d = alg.project(g).unwrap();
            let m = alg.project(&g.negated()).unwrap();
            assert!(d.add(&m).is_zero());
            if alg.basis(n).unwrap().symmetry(i).self_negating() {
                assert!(d.is_zero(), "{}", g.code());
            }
        }
    }
}

#[test]
fn product_commutes_and_is_well_defined() {
    let alg = Algebra::new(3).unwrap();
    let b1 = alg.basis(1).unwrap();
    let b2 = alg.basis(2).unwrap();
    for g in b1.graphs() {
        for h in b2.graphs() {
            let direct = alg.project(&g.connected_sum(h)).unwrap();
            let other = alg.project(&h.connected_sum(g)).unwrap();
            assert_eq!(direct, other);
            let via = alg.product(&alg.project(g).unwrap(), &alg.project(h).unwrap()).unwrap();
            assert_eq!(direct, via, "{} # {}", g.code(), h.code());
        }
    }
    // every relation of degree 2 times Θ is a relation of degree 3
    let theta = WilsonGraph::theta();
    let b3 = alg.basis(3).unwrap();
    for r in b2.relations() {
        let mut acc = Diagram::<Q>::zero(3, b3.dim());
        for &(i, c) in r {
            let d = alg.project(&b2.graphs()[i].connected_sum(&theta)).unwrap();
            acc = acc.add(&d.scale(&Q::from_integer(c.into())));
        }
        assert!(acc.is_zero());
    }
}

#[test]
fn projector_properties() {
    let alg = Algebra::new(3).unwrap();
    for n in 1..=3 {
        for k in 0..alg.dim(n).unwrap() {
            let e = alg.basis_vector::<Q>(n, k).unwrap();
            let c = alg.projector_c(&e).unwrap();
            assert_eq!(alg.projector_c(&c).unwrap(), c);
        }
        for p in 1..n {
            for i in 0..alg.dim(p).unwrap() {
                for j in 0..alg.dim(n - p).unwrap() {
                    let x = alg.product(&alg.basis_vector::<Q>(p, i).unwrap(), &alg.basis_vector(n - p, j).unwrap()).unwrap();
                    assert!(alg.projector_c(&x).unwrap().is_zero());
                }
            }
        }
        for g in alg.basis(n).unwrap().graphs() {
            if g.is_primitive() {
                let d = alg.project(g).unwrap();
                assert_eq!(alg.projector_c(&d).unwrap(), d);
            }
        }
    }
}

#[test]
fn partition_expansion_matches_projector() {
    let alg = Algebra::new(3).unwrap();
    for n in 1..=3 {
        let cs = alg.partition_c_all(n).unwrap();
        for (g, c) in alg.basis(n).unwrap().graphs().iter().zip(&cs) {
            let d = alg.project(g).unwrap();
            assert_eq!(&alg.projector_c(&d).unwrap(), c, "{}", g.code());
        }
    }
}

#[test]
fn product_identity_for_integrals() {
    let g1s = enumerate(1, &caps()).unwrap();
    let g2s = enumerate(2, &caps()).unwrap();
    let d2 = enumerate(2, &caps()).unwrap();
    let d3 = enumerate(3, &caps()).unwrap();
    for a in &g1s {
        for b in &g1s {
            let (l, r) = product_identity_sides(a, b, &d2).unwrap();
            assert_eq!(l, r);
            assert!(!l.is_empty());
        }
        for b in &g2s {
            let (l, r) = product_identity_sides(a, b, &d3).unwrap();
            assert_eq!(l, r, "{} x {}", a.code(), b.code());
            let (l2, r2) = product_identity_sides(b, a, &d3).unwrap();
            assert_eq!(l2, r2);
            assert!(l.values().all(|v| !v.is_zero()));
        }
    }
}

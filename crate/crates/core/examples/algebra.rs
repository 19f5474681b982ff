//! Builds the diagram spaces through degree 3, multiplies two diagrams and
//! applies the primitive projector.

use csknot::algebra::{format_q, Algebra};
use csknot::graph::WilsonGraph;

fn main() -> csknot::error::Result<()> {
    let alg = Algebra::new(3)?;
    for n in 1..=3 {
        println!("degree {n}: dim {} basis {:?}", alg.dim(n)?, alg.basis(n)?.labels());
    }
    let theta = alg.project(&WilsonGraph::theta())?;
    let sq = alg.product(&theta, &theta)?;
    let show = |c: &[csknot::algebra::Q]| c.iter().map(format_q).collect::<Vec<_>>().join(", ");
    println!("D(Θ)·D(Θ) = [{}]", show(&sq.coords));
    println!("C(D(Θ)·D(Θ)) = [{}]", show(&alg.projector_c(&sq)?.coords));
    let y = alg.project(&WilsonGraph::y_graph())?;
    println!("D(Y) = [{}], primitive part [{}]", show(&y.coords), show(&alg.projector_c(&y)?.coords));
    Ok(())
}

//! Alternating sums over the resolutions of singular trefoils.

use csknot::algebra::Algebra;
use csknot::engine::{vassiliev_eval, AnomalyTable, EngineOptions};
use csknot::knot::SingularKnot;

fn main() -> csknot::error::Result<()> {
    let alg = Algebra::new(2)?;
    let table = AnomalyTable::builtin(&alg, 2)?;
    let opts = EngineOptions::new(100_000, 1);
    for (j, order) in [(1, 1), (2, 1), (2, 2)] {
        let sk = SingularKnot::trefoil(j)?;
        let r = vassiliev_eval(&alg, &sk, order, &opts, &table)?;
        println!("{j} double points, degree {order}: {:?} ± {:?}", r.values, r.std_errors);
        if let Some((c, sc, res, sres)) = r.proportionality() {
            println!("  multiple of the chord diagram {c:.4} ± {sc:.4}, residual {res:?} ± {sres:?}");
        }
    }
    Ok(())
}

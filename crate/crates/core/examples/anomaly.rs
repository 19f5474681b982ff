//! Monte-Carlo anomaly coefficients for the primitive graphs of degrees 1 and 2.

use csknot::algebra::Algebra;
use csknot::engine::AnomalyTable;
use csknot::integrator::McOptions;

fn main() -> csknot::error::Result<()> {
    let alg = Algebra::new(2)?;
    let opts = McOptions::new(200_000, 1);
    for d in 1..=2 {
        for e in AnomalyTable::measure(&alg, d, &opts)?.entries {
            println!("degree {d} {}: f = {:+.6} ± {:.2e} ({:?})", e.graph, e.value, e.std_error, e.method);
        }
    }
    Ok(())
}

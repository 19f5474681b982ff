//! Second-order framed invariant of the trefoil, printed as JSON.
//!
//! ```bash
//! cargo run --release --example invariant -- 200000
//! ```

use csknot::algebra::Algebra;
use csknot::engine::{compute_zhat, AnomalyTable, EngineOptions};
use csknot::knot::{Framing, KnotEmbedding};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let samples = std::env::args().nth(1).map(|s| s.parse()).transpose()?.unwrap_or(50_000);
    let alg = Algebra::new(2)?;
    let table = AnomalyTable::builtin(&alg, 2)?;
    let k = KnotEmbedding::preset("trefoil")?.with_framing(Framing::Default);
    let r = compute_zhat(&alg, &k, 2, &EngineOptions::new(samples, 1), &table)?;
    println!("{}", serde_json::to_string_pretty(&r)?);
    Ok(())
}

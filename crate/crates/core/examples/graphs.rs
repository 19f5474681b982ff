//! Lists the trivalent Wilson graphs of degrees 1 to 3 with their symmetry data.
//!
//! ```bash
//! cargo run --example graphs
//! ```

use csknot::graph::{enumerate, EnumerationCaps};

fn main() -> csknot::error::Result<()> {
    let caps = EnumerationCaps::default();
    for n in 1..=3 {
        let list = enumerate(n, &caps)?;
        println!("degree {n}: {} graphs", list.len());
        for g in &list {
            let (aut, plus) = g.automorphisms();
            println!("  {:<28} |Aut| {aut:<3} |Aut+| {plus:<3} {}", g.code(), g.classify());
        }
    }
    Ok(())
}

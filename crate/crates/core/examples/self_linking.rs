//! Self-linking, total torsion and their integer sum for a few framed knots.

use csknot::integrator::{self_linking, torsion};
use csknot::knot::{Framing, KnotEmbedding};

fn main() -> csknot::error::Result<()> {
    for name in ["circle", "trefoil", "mirror-trefoil", "cinquefoil"] {
        for framing in [Framing::Default, Framing::Twist { k: 1 }] {
            let k = KnotEmbedding::preset(name)?.with_framing(framing);
            let i = self_linking(&k)?.value;
            let t = torsion(&k)?;
            println!("{name:<15} {framing:?}: I = {i:+.8}  τ = {t:+.8}  I + τ = {:+.8}", i + t);
        }
    }
    Ok(())
}

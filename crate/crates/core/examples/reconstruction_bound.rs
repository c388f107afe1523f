//! The limiting reconstruction error is controlled by the mesoscale
//! approximation error.

use netdict::factorization::Dictionary;
use netdict::graph::{generate, ModelSpec};
use netdict::ndr::{bound_report, NdrParams};
use netdict::rng::stream;

fn main() -> netdict::Result<()> {
    let g = generate(&ModelSpec::Er { n: 8, p: 0.5 }, 4)?;
    println!("{} nodes, {} edges", g.n(), g.edge_count());
    let mut rng = stream(4, 0);
    for r in [1, 2, 4] {
        let dict = Dictionary::random(3, r, &mut rng)?;
        let params = NdrParams { k: 3, ..NdrParams::default() };
        let b = bound_report(&g, &dict, &params)?;
        println!("r={r}: JD {:.4} <= {:.4}? {} (exact: {})", b.lhs, b.rhs, b.holds, b.exact);
    }
    Ok(())
}

//! Mesoscale approximation error of a sparse random network by a dictionary
//! holding only the path motif.

use ndarray::Array2;
use netdict::factorization::Dictionary;
use netdict::graph::{generate, ModelSpec};
use netdict::ndr::{mesoscale_error, NdrParams};
use netdict::patches::vectorize;

fn main() -> netdict::Result<()> {
    let (n, p, k) = (300, 0.05, 10);
    let g = generate(&ModelSpec::Er { n, p }, 11)?;
    let mut chain = Array2::zeros((k, k));
    for i in 0..k - 1 {
        chain[[i, i + 1]] = 1.0;
        chain[[i + 1, i]] = 1.0;
    }
    // Columns live in the unit ball; without a sparsity penalty the code
    // absorbs the scale.
    let v = vectorize(chain.view());
    let norm = v.dot(&v).sqrt();
    let w = (v / norm).insert_axis(ndarray::Axis(1));
    let dict = Dictionary::from_matrix(k, w)?;
    let params = NdrParams { k, injective: true, seed: 11, ..NdrParams::default() };
    let e = mesoscale_error(&g, &dict, 20_000, &params)?;
    println!("mean l1 patch error {:.3} +- {:.3}", e.mean, e.std_error);
    println!("per off-chain pair normalization (2(k-1)): {:.4}", e.mean / (2.0 * (k - 1) as f64));
    println!("closed form (k-2)p/2: {:.4}", (k - 2) as f64 * p / 2.0);
    Ok(())
}

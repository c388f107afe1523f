//! Learning latent motifs from a small-world network and printing the
//! most dominant one as a grid.

use netdict::graph::{generate, ModelSpec};
use netdict::ndl::{learn_dictionary, NdlParams};

fn main() -> netdict::Result<()> {
    let g = generate(&ModelSpec::Ws { n: 300, k: 6, p: 0.05 }, 5)?;
    let params = NdlParams { k: 8, r: 9, iterations: 100, batch: 100, seed: 5, ..NdlParams::default() };
    let out = learn_dictionary(&g, &params)?;
    let first = out.diagnostics.first().map_or(f64::NAN, |d| d.fit_error);
    let last = out.diagnostics.last().map_or(f64::NAN, |d| d.fit_error);
    println!("fit error {first:.4} -> {last:.4}");

    let (scores, order) = out.dominance();
    for &j in &order {
        println!("motif {j}: dominance {:.4}", scores[j]);
    }
    let top = out.dictionary.motif(order[0]);
    let max = top.iter().cloned().fold(0.0, f64::max).max(f64::MIN_POSITIVE);
    println!("most dominant motif:");
    for row in top.rows() {
        let line: String = row.iter().map(|&w| if w / max > 0.5 { '#' } else if w / max > 0.1 { '+' } else { '.' }).collect();
        println!("  {line}");
    }
    Ok(())
}

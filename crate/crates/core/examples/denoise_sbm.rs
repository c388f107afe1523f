//! Denoising a block model corrupted by random extra edges.
//!
//! Learns latent motifs from the corrupted network, reconstructs it with
//! on-chain thinning, and compares the AUC with a baseline.

use netdict::denoise::{baseline_scores, denoise_pipeline, roc_auc, BaselineMethod, NoiseKind};
use netdict::graph::{corrupt, generate, ModelSpec, NoiseSpec};
use netdict::ndl::NdlParams;
use netdict::ndr::NdrParams;

fn main() -> netdict::Result<()> {
    let g = generate(&ModelSpec::sbm_uniform(vec![60; 3], 0.5, 0.02), 7)?;
    let c = corrupt(&g, &NoiseSpec::AdditiveEr { fraction: 0.5 }, 7)?;
    println!("{} true edges, {} added", g.edge_count(), c.changed.len());
    let ndl = NdlParams { k: 6, r: 4, iterations: 100, batch: 50, seed: 7, ..NdlParams::default() };
    for xi in [0.0, 1.0] {
        let ndr = NdrParams { k: 6, xi, iterations: Some(50_000), seed: 7, ..NdrParams::default() };
        let out = denoise_pipeline(&c.network, NoiseKind::Additive, &c.labels, &ndl, &ndr, false)?;
        println!("xi = {xi}: AUC {:.4}", roc_auc(&out.scored)?.auc);
        if xi == 0.0 {
            let pa = baseline_scores(&c.network, &out.scored, BaselineMethod::PreferentialAttachment)?;
            println!("preferential attachment: AUC {:.4}", roc_auc(&pa)?.auc);
        }
    }
    Ok(())
}

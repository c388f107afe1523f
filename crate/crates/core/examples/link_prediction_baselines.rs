//! Classical link-prediction scores on a corrupted network.

use netdict::denoise::{
    baseline_scores, candidate_pairs, classify_with_split, label_candidates, roc_auc, BaselineMethod, NoiseKind,
    ScoredPairs,
};
use netdict::graph::{corrupt, generate, ModelSpec, NoiseSpec};

fn main() -> netdict::Result<()> {
    let g = generate(&ModelSpec::sbm_uniform(vec![50; 3], 0.4, 0.02), 13)?;
    for (kind, spec) in [
        (NoiseKind::Additive, NoiseSpec::AdditiveEr { fraction: 0.5 }),
        (NoiseKind::Subtractive, NoiseSpec::SubtractiveEr { fraction: 0.2 }),
    ] {
        let c = corrupt(&g, &spec, 13)?;
        let cands = candidate_pairs(&c.network, kind, 2, false);
        let template: ScoredPairs = label_candidates(&cands, kind, &c.labels);
        println!("{kind:?}: {} candidates, {} positive", template.len(), template.positives());
        for m in BaselineMethod::ALL {
            match baseline_scores(&c.network, &template, m) {
                Ok(s) => {
                    let cls = classify_with_split(&s, 13, 0.25, 0.25)?;
                    println!("  {m:>12}: AUC {:.4}, accuracy {:.4}", roc_auc(&s)?.auc, cls.accuracy);
                }
                Err(e) => println!("  {m:>12}: {e}"),
            }
        }
    }
    Ok(())
}

//! Reconstructing a network from its own latent motifs and from motifs
//! learned on a different network.

use netdict::graph::{generate, ModelSpec};
use netdict::ndl::{learn_dictionary, NdlParams};
use netdict::ndr::{jaccard_metrics, reconstruct, threshold, NdrParams};

fn main() -> netdict::Result<()> {
    let ws = generate(&ModelSpec::Ws { n: 300, k: 6, p: 0.05 }, 9)?;
    let er = generate(&ModelSpec::Er { n: 300, p: 0.02 }, 9)?;
    let learn = |g| {
        let params = NdlParams { k: 10, r: 4, iterations: 100, batch: 100, seed: 9, ..NdlParams::default() };
        learn_dictionary(g, &params).map(|o| o.dictionary)
    };
    let dicts = [("ws", learn(&ws)?), ("er", learn(&er)?)];
    let ndr = NdrParams { k: 10, iterations: Some(100_000), seed: 9, ..NdrParams::default() };
    for (target_name, target) in [("ws", &ws), ("er", &er)] {
        for (dict_name, dict) in &dicts {
            let rec = reconstruct(target, dict, &ndr)?;
            let jm = jaccard_metrics(target, &threshold(&rec.network, ndr.theta)?)?;
            println!("{target_name} from {dict_name} motifs: Jaccard index {:.4}", jm.index);
        }
    }
    Ok(())
}

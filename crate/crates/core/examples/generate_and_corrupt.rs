//! Random network models and the three corruption operators.

use netdict::graph::{corrupt, generate, structural_stats, ModelSpec, NoiseSpec};

fn main() -> netdict::Result<()> {
    let models = [
        ("er", ModelSpec::Er { n: 200, p: 0.05 }),
        ("ws", ModelSpec::Ws { n: 200, k: 6, p: 0.1 }),
        ("ba", ModelSpec::Ba { n: 200, n0: 3 }),
        ("sbm", ModelSpec::sbm_uniform(vec![70; 3], 0.3, 0.01)),
    ];
    for (name, spec) in &models {
        let g = generate(spec, 1)?;
        let s = structural_stats(&g);
        println!(
            "{name:>4}: {} nodes, {} edges, mean clustering {:.3}, diameter {:?}",
            g.n(),
            g.edge_count(),
            s.mean_clustering,
            s.diameter
        );
    }

    let g = generate(&ModelSpec::Ws { n: 200, k: 6, p: 0.1 }, 1)?;
    let noises = [
        ("-ER 30%", NoiseSpec::SubtractiveEr { fraction: 0.3 }),
        ("+ER 30%", NoiseSpec::AdditiveEr { fraction: 0.3 }),
        ("+WS", NoiseSpec::AdditiveWs { n0: 200, k0: 2, p: 0.5 }),
    ];
    for (name, spec) in &noises {
        let c = corrupt(&g, spec, 2)?;
        println!("{name:>8}: {} -> {} edges, {} pairs changed", g.edge_count(), c.network.edge_count(), c.changed.len());
    }
    Ok(())
}

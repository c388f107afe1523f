//! Sampling k-walks and k-paths by MCMC and comparing the empirical law
//! with the exact target on a small network.

use netdict::graph::Network;
use netdict::rng::stream;
use netdict::sampling::{occupation, target_distribution, total_variation, McmcMode, MotifChain, SamplerConfig, Target};

fn main() -> netdict::Result<()> {
    // Two triangles sharing node 0.
    let g = Network::from_pairs(5, [(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])?;
    let k = 3;
    let steps = 200_000;
    for mode in [McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber] {
        for injective in [false, true] {
            let config = SamplerConfig::new(mode).injective(injective);
            let mut chain = MotifChain::new(&g, k, config, stream(3, 0))?;
            let counts = occupation(&mut chain, steps)?;
            let target = target_distribution(&g, k, Target::for_config(&config))?;
            println!(
                "{mode:>12} injective={injective:<5} states {:>3}  TV {:.4}  acceptance {:.3}",
                target.len(),
                total_variation(&counts, &target),
                chain.acceptance_rate()
            );
        }
    }
    Ok(())
}

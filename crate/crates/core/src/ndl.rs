//! Network dictionary learning: online NMF over mesoscale patches sampled
//! by an injective motif chain.

use std::fs;
use std::io::Write as _;
use std::path::Path;

use crate::error::{Error, Result};
use crate::factorization::{onmf_step, AggregateState, Dictionary, SolverOptions};
use crate::graph::Network;
use crate::patches::patch_matrix;
use crate::rng::{self, ids};
use crate::sampling::{McmcMode, MotifChain, SamplerConfig};

#[derive(Debug, Clone, PartialEq)]
pub struct NdlParams {
    pub k: usize,
    /// Number of latent motifs.
    pub r: usize,
    /// Number of online iterations.
    pub iterations: usize,
    /// Homomorphisms per iteration.
    pub batch: usize,
    pub lambda: f64,
    pub mode: McmcMode,
    pub seed: u64,
    pub max_rejections: usize,
    pub solver: SolverOptions,
}

impl Default for NdlParams {
    fn default() -> Self {
        NdlParams {
            k: 21,
            r: 25,
            iterations: 100,
            batch: 100,
            lambda: 1.0,
            mode: McmcMode::PivotApprox,
            seed: 0,
            max_rejections: 100_000,
            solver: SolverOptions::default(),
        }
    }
}

impl NdlParams {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::param("k", format!("must be at least 2, got {}", self.k)));
        }
        if self.r == 0 {
            return Err(Error::param("r", "must be at least 1"));
        }
        if self.iterations == 0 {
            return Err(Error::param("T", "must be at least 1"));
        }
        if self.batch == 0 {
            return Err(Error::param("N", "must be at least 1"));
        }
        if !(self.lambda >= 0.0 && self.lambda.is_finite()) {
            return Err(Error::param("lambda", format!("{} must be a nonnegative number", self.lambda)));
        }
        if self.max_rejections == 0 {
            return Err(Error::param("max_rejections", "must be at least 1"));
        }
        Ok(())
    }
}

/// Per-iteration diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationDiag {
    pub t: usize,
    /// `‖X_t - W_{t-1} H_t‖_F / ‖X_t‖_F`.
    pub fit_error: f64,
    /// Non-injective states discarded while drawing the batch.
    pub rejections: u64,
}

#[derive(Debug, Clone)]
pub struct NdlOutput {
    pub dictionary: Dictionary,
    pub state: AggregateState,
    pub diagnostics: Vec<IterationDiag>,
}

impl NdlOutput {
    pub fn dominance(&self) -> (Vec<f64>, Vec<usize>) {
        dominance_scores(&self.state)
    }
}

/// Learns `r` latent motifs at scale `k` from `g`.
pub fn learn_dictionary(g: &Network, params: &NdlParams) -> Result<NdlOutput> {
    params.validate()?;
    let config = SamplerConfig {
        mode: params.mode,
        injective: true,
        max_rejections: params.max_rejections,
    };
    let mut chain = MotifChain::new(g, params.k, config, rng::stream(params.seed, ids::LEARN_CHAIN)).map_err(|e| match e {
        Error::Mixing { rejections, .. } => Error::Structure(format!(
            "no {}-path found after {rejections} attempts; the network may have no path on {} nodes",
            params.k, params.k
        )),
        other => other,
    })?;
    let mut init_rng = rng::stream(params.seed, ids::LEARN_INIT);
    let mut dictionary = Dictionary::random(params.k, params.r, &mut init_rng)?;
    let mut state = AggregateState::new(params.r, params.k * params.k);
    let mut diagnostics = Vec::with_capacity(params.iterations);
    let mut batch = Vec::with_capacity(params.batch);
    for t in 1..=params.iterations {
        batch.clear();
        let before = chain.total_rejections();
        for _ in 0..params.batch {
            let x = chain.step().map_err(|e| match e {
                Error::Mixing { rejections, .. } => Error::Mixing {
                    rejections,
                    context: format!(" (iteration {t})"),
                },
                other => other,
            })?;
            batch.push(x.clone());
        }
        let x = patch_matrix(g, &batch);
        let report = onmf_step(&mut state, &mut dictionary, x.view(), params.lambda, &params.solver)?;
        diagnostics.push(IterationDiag {
            t,
            fit_error: report.fit_error,
            rejections: chain.total_rejections() - before,
        });
    }
    Ok(NdlOutput {
        dictionary,
        state,
        diagnostics,
    })
}

/// `sqrt(P(i, i))` per motif, and the motif indices by descending score
/// (ties keep the lower index first).
pub fn dominance_scores(state: &AggregateState) -> (Vec<f64>, Vec<usize>) {
    let scores: Vec<f64> = state.p.diag().iter().map(|&v| v.max(0.0).sqrt()).collect();
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
    (scores, order)
}

/// The diagnostics as a TSV table.
pub fn trace_tsv(diags: &[IterationDiag]) -> String {
    let mut out = String::from("iteration\tfit_error\trejections\n");
    for d in diags {
        out.push_str(&format!("{}\t{}\t{}\n", d.t, d.fit_error, d.rejections));
    }
    out
}

pub fn write_trace(diags: &[IterationDiag], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(trace_tsv(diags).as_bytes()).map_err(|e| Error::io(path, e))
}

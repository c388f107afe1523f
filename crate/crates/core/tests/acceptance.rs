//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any gating criterion fails.
//!
//! Criterion 10 runs only when `NDL_CALTECH_EDGES` names an edge list.

use std::time::{Duration, Instant};

use ndarray::{Array1, Array2, Axis};
use rand::Rng as _;

use netdict::denoise::{baseline_score, baseline_scores, denoise_pipeline, roc_auc, BaselineMethod, NoiseKind};
use netdict::factorization::{
    coding_objective, onmf_step, sparse_code, surrogate, AggregateState, Dictionary, SolverOptions,
};
use netdict::graph::{corrupt, generate, load_edge_list, ModelSpec, Network, NoiseSpec};
use netdict::ndl::{learn_dictionary, NdlParams};
use netdict::ndr::{bound_report, jaccard_metrics, mesoscale_error, reconstruct, threshold, NdrParams};
use netdict::patches::{patch_matrix, vectorize};
use netdict::rng::stream;
use netdict::sampling::{
    enumerate_homomorphisms, occupation, target_distribution, total_variation, McmcMode, MotifChain, SamplerConfig,
    Target,
};

struct Outcome {
    pass: bool,
    detail: String,
}

fn check(id: &str, title: &str, limit: Duration, f: impl FnOnce() -> netdict::Result<Outcome>) -> bool {
    let start = Instant::now();
    let res = f();
    let elapsed = start.elapsed();
    let (pass, detail) = match res {
        Ok(o) => (o.pass && elapsed <= limit, o.detail),
        Err(e) => (false, format!("error: {e}")),
    };
    println!(
        "[{}] {id} {title}: {detail}; {:.1} s (limit {} s)",
        if pass { "PASS" } else { "FAIL" },
        elapsed.as_secs_f64(),
        limit.as_secs()
    );
    pass
}

fn pairs(n: usize, edges: &[(usize, usize)]) -> Network {
    Network::from_pairs(n, edges.iter().copied()).unwrap()
}

fn complete(n: usize) -> Network {
    Network::from_pairs(n, (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v)))).unwrap()
}

fn cycle(n: usize) -> Network {
    Network::from_pairs(n, (0..n).map(|u| (u, (u + 1) % n))).unwrap()
}

fn bowtie() -> Network {
    pairs(5, &[(0, 1), (1, 2), (0, 2), (0, 3), (3, 4), (0, 4)])
}

fn c1_stationarity() -> netdict::Result<Outcome> {
    let graphs = [("K4", complete(4)), ("C5", cycle(5)), ("bowtie", bowtie())];
    let mut worst = (0.0, String::new());
    let mut runs = 0;
    for (name, g) in &graphs {
        for k in [2, 3] {
            for mode in [McmcMode::PivotExact, McmcMode::PivotApprox, McmcMode::Glauber] {
                for injective in [false, true] {
                    let config = SamplerConfig::new(mode).injective(injective);
                    let mut chain = MotifChain::new(g, k, config, stream(runs, 0))?;
                    let counts = occupation(&mut chain, 1_000_000)?;
                    let target = target_distribution(g, k, Target::for_config(&config))?;
                    let tv = total_variation(&counts, &target);
                    if tv >= worst.0 {
                        worst = (tv, format!("{name} k={k} {mode} injective={injective}"));
                    }
                    runs += 1;
                }
            }
        }
    }
    Ok(Outcome {
        pass: worst.0 <= 0.02,
        detail: format!("{runs} chains, max TV {:.4} at {} (tol 0.02)", worst.0, worst.1),
    })
}

fn c2_injective_coverage() -> netdict::Result<Outcome> {
    let g = cycle(10);
    let homs = enumerate_homomorphisms(&g, 3, true)?;
    let mut seen = vec![false; g.n()];
    for h in &homs {
        for &v in h.nodes() {
            seen[v] = true;
        }
    }
    let covered = seen.iter().filter(|&&s| s).count();
    Ok(Outcome {
        pass: covered == g.n(),
        detail: format!("{} 3-paths cover {covered}/{} nodes", homs.len(), g.n()),
    })
}

fn c3_planted_recovery() -> netdict::Result<Outcome> {
    let (k, batch) = (6, 20);
    let g = cycle(50);
    let config = SamplerConfig::new(McmcMode::PivotApprox).injective(true);
    let mut chain = MotifChain::new(&g, k, config, stream(3, 0))?;
    let mut dict = Dictionary::random(k, 1, &mut stream(3, 1))?;
    let mut state = AggregateState::new(1, k * k);
    let opts = SolverOptions::default();
    let mut reached = None;
    let mut identical = true;
    let mut worst_rise = f64::NEG_INFINITY;
    let mut first: Option<Array2<f64>> = None;
    for t in 1..=200 {
        let xs: Vec<_> = (0..batch).map(|_| chain.step().cloned()).collect::<netdict::Result<_>>()?;
        let x = patch_matrix(&g, &xs);
        let f = first.get_or_insert_with(|| x.column(0).to_owned().insert_axis(Axis(1)));
        identical &= x.columns().into_iter().all(|c| c == f.column(0));
        let before = dict.matrix().clone();
        let report = onmf_step(&mut state, &mut dict, x.view(), 0.0, &opts)?;
        let g_before = surrogate(before.view(), state.p.view(), state.q.view());
        let g_after = surrogate(dict.matrix().view(), state.p.view(), state.q.view());
        worst_rise = worst_rise.max(g_after - g_before);
        if reached.is_none() && report.fit_error <= 1e-3 {
            reached = Some(t);
        }
    }
    // The last step's fit error uses the dictionary before its update, so
    // measure the final dictionary on one more batch as well.
    let xs: Vec<_> = (0..batch).map(|_| chain.step().cloned()).collect::<netdict::Result<_>>()?;
    let x = patch_matrix(&g, &xs);
    let h = sparse_code(x.view(), dict.matrix().view(), 0.0, 1000, 1e-14)?;
    let final_fit = (coding_objective(x.view(), dict.matrix().view(), h.view(), 0.0)
        / x.iter().map(|v| v * v).sum::<f64>())
    .sqrt();
    Ok(Outcome {
        pass: identical && reached.is_some() && final_fit <= 1e-3 && worst_rise <= 1e-12,
        detail: format!(
            "identical patches {identical}, fit <= 1e-3 first at iteration {}, final fit {final_fit:.2e}, max surrogate rise {worst_rise:.1e}",
            reached.map_or("never".to_string(), |t| t.to_string())
        ),
    })
}

/// Exact minimizer of `‖x - W h‖² + λ‖h‖₁` over `h >= 0` with two atoms, by
/// enumerating supports and solving the stationarity conditions on each.
fn two_atom_oracle(x: &Array1<f64>, w: &Array2<f64>, lambda: f64) -> f64 {
    let obj = |h: [f64; 2]| {
        let r = x - &w.dot(&Array1::from(h.to_vec()));
        r.dot(&r) + lambda * (h[0] + h[1])
    };
    let (a, b) = (w.column(0), w.column(1));
    let (g00, g01, g11) = (a.dot(&a), a.dot(&b), b.dot(&b));
    let (c0, c1) = (a.dot(x) - lambda / 2.0, b.dot(x) - lambda / 2.0);
    let mut best = obj([0.0, 0.0]);
    if g00 > 0.0 && c0 > 0.0 {
        best = best.min(obj([c0 / g00, 0.0]));
    }
    if g11 > 0.0 && c1 > 0.0 {
        best = best.min(obj([0.0, c1 / g11]));
    }
    let det = g00 * g11 - g01 * g01;
    if det.abs() > 1e-12 {
        let h0 = (g11 * c0 - g01 * c1) / det;
        let h1 = (g00 * c1 - g01 * c0) / det;
        if h0 >= 0.0 && h1 >= 0.0 {
            best = best.min(obj([h0, h1]));
        }
    }
    best
}

fn c4_coding_oracle() -> netdict::Result<Outcome> {
    let mut rng = stream(4, 0);
    let opts = SolverOptions::default();
    let mut worst = 0.0f64;
    let mut worst_default = 0.0f64;
    for i in 0..100 {
        let lambda = if i % 2 == 0 { 0.0 } else { 0.5 };
        let dict = Dictionary::random(2, 2, &mut rng)?;
        let w = dict.matrix().clone();
        let x = Array2::from_shape_simple_fn((4, 3), || rng.random::<f64>());
        // Run to the stopping tolerance; the default budget is reported too.
        let h = sparse_code(x.view(), w.view(), lambda, 100_000, 1e-12)?;
        let h_default = sparse_code(x.view(), w.view(), lambda, opts.code_iters, opts.code_tol)?;
        for (j, col) in x.columns().into_iter().enumerate() {
            let xj = col.to_owned().insert_axis(Axis(1));
            let oracle = two_atom_oracle(&col.to_owned(), &w, lambda);
            let gap = |h: &Array2<f64>| {
                let hj = h.column(j).to_owned().insert_axis(Axis(1));
                coding_objective(xj.view(), w.view(), hj.view(), lambda) - oracle
            };
            worst = worst.max(gap(&h));
            worst_default = worst_default.max(gap(&h_default));
        }
    }
    Ok(Outcome {
        pass: worst <= 1e-4,
        detail: format!(
            "100 instances, max objective gap {worst:.2e} at convergence (tol 1e-4); {worst_default:.2e} with the default {} iterations",
            opts.code_iters
        ),
    })
}

fn c5_self_reconstruction() -> netdict::Result<Outcome> {
    let g = cycle(30);
    let ndl = NdlParams { k: 5, r: 1, iterations: 100, batch: 50, lambda: 0.0, seed: 5, ..NdlParams::default() };
    let dict = learn_dictionary(&g, &ndl)?.dictionary;
    let ndr = NdrParams {
        k: 5,
        lambda: 0.0,
        theta: 0.5,
        injective: true,
        iterations: Some(10_000),
        seed: 5,
        ..NdrParams::default()
    };
    let rec = reconstruct(&g, &dict, &ndr)?;
    let jm = jaccard_metrics(&g, &threshold(&rec.network, ndr.theta)?)?;
    Ok(Outcome {
        pass: jm.index == 1.0,
        detail: format!("Jaccard index {} over {} passes of {} steps", jm.index, rec.passes, rec.steps),
    })
}

fn c6_bound() -> netdict::Result<Outcome> {
    let mut rng = stream(6, 0);
    let mut found = 0;
    let mut min_margin = f64::INFINITY;
    let mut all_hold = true;
    let mut all_exact = true;
    while found < 20 {
        let n = rng.random_range(4..=8);
        let g = generate(&ModelSpec::Er { n, p: 0.5 }, rng.random())?;
        if !g.is_connected() || g.bipartition().is_some() {
            continue;
        }
        let r = 1 + found % 2;
        let dict = Dictionary::random(3, r, &mut rng)?;
        let params = NdrParams { k: 3, ..NdrParams::default() };
        let b = bound_report(&g, &dict, &params)?;
        all_hold &= b.holds;
        all_exact &= b.exact;
        min_margin = min_margin.min(b.margin);
        found += 1;
    }
    Ok(Outcome {
        pass: all_hold && all_exact,
        detail: format!("20 graphs, all hold {all_hold}, all exact {all_exact}, min margin {min_margin:.4}"),
    })
}

fn c7_er_baseline() -> netdict::Result<Outcome> {
    let (n, p, k) = (300, 0.05, 10);
    let g = generate(&ModelSpec::Er { n, p }, 7)?;
    let mut chain = Array2::zeros((k, k));
    for i in 0..k - 1 {
        chain[[i, i + 1]] = 1.0;
        chain[[i + 1, i]] = 1.0;
    }
    let v = vectorize(chain.view());
    let w = (&v / v.dot(&v).sqrt()).insert_axis(Axis(1));
    let dict = Dictionary::from_matrix(k, w)?;
    let params = NdrParams { k, injective: true, seed: 7, ..NdrParams::default() };
    let e = mesoscale_error(&g, &dict, 20_000, &params)?;
    let closed = (k - 2) as f64 * p / 2.0;
    let per_bound = e.mean / (2.0 * (k - 1) as f64);
    let per_k1 = e.mean / (k - 1) as f64;
    let rel = (per_bound - closed).abs() / closed;
    Ok(Outcome {
        pass: rel <= 0.15,
        detail: format!(
            "error/(2(k-1)) = {per_bound:.4} vs (k-2)p/2 = {closed:.2} (rel {rel:.3}, tol 0.15); error/(k-1) = {per_k1:.4}; kp/2 = {:.2}",
            k as f64 * p / 2.0
        ),
    })
}

fn c8_denoising() -> netdict::Result<Outcome> {
    let g = generate(&ModelSpec::sbm_uniform(vec![60; 3], 0.5, 0.02), 8)?;
    let c = corrupt(&g, &NoiseSpec::AdditiveEr { fraction: 0.5 }, 8)?;
    let ndl = NdlParams { k: 6, r: 4, iterations: 100, batch: 50, seed: 8, ..NdlParams::default() };
    let run = |xi: f64| {
        let ndr = NdrParams { k: 6, xi, iterations: Some(50_000), seed: 8, ..NdrParams::default() };
        denoise_pipeline(&c.network, NoiseKind::Additive, &c.labels, &ndl, &ndr, false)
    };
    let thin = run(0.0)?;
    let auc0 = roc_auc(&thin.scored)?.auc;
    let auc1 = roc_auc(&run(1.0)?.scored)?.auc;
    let pa = roc_auc(&baseline_scores(&c.network, &thin.scored, BaselineMethod::PreferentialAttachment)?)?.auc;
    Ok(Outcome {
        pass: auc0 >= 0.70 && auc0 >= auc1 - 0.02,
        detail: format!("AUC(xi=0) {auc0:.4} (tol >= 0.70), AUC(xi=1) {auc1:.4}, preferential attachment {pa:.4}"),
    })
}

fn c9_baselines() -> netdict::Result<Outcome> {
    let star = Network::from_pairs(6, (1..=5).map(|v| (0, v)))?;
    let pa_center = baseline_score(&star, 0, 1, BaselineMethod::PreferentialAttachment)?;
    let pa_leaves = baseline_score(&star, 1, 2, BaselineMethod::PreferentialAttachment)?;
    let path = pairs(3, &[(0, 1), (1, 2)]);
    let aa = baseline_score(&path, 0, 2, BaselineMethod::AdamicAdar)?;
    let gap = (aa - 1.0 / 2f64.ln()).abs();
    Ok(Outcome {
        pass: pa_center == 5.0 && pa_leaves == 1.0 && gap <= 1e-12,
        detail: format!("PA center-leaf {pa_center}, leaf-leaf {pa_leaves}; Adamic-Adar {aa} (gap {gap:.1e}, tol 1e-12)"),
    })
}

fn c10_caltech(path: &str) -> netdict::Result<Outcome> {
    let g = load_edge_list(path)?;
    let ndl = NdlParams { k: 21, r: 25, iterations: 100, batch: 100, lambda: 1.0, seed: 10, ..NdlParams::default() };
    let dict = learn_dictionary(&g, &ndl)?.dictionary;
    let ndr = NdrParams { k: 21, seed: 10, threads: 4, ..NdrParams::default() };
    let rec = reconstruct(&g, &dict, &ndr)?;
    let jm = jaccard_metrics(&g, &threshold(&rec.network, ndr.theta)?)?;
    Ok(Outcome {
        pass: jm.index >= 0.80,
        detail: format!("Jaccard index {:.4} (tol >= 0.80) after {} steps", jm.index, rec.steps),
    })
}

fn main() {
    let secs = Duration::from_secs;
    let results = [
        check("C1", "MCMC stationarity", secs(60), c1_stationarity),
        check("C2", "injective coverage", secs(1), c2_injective_coverage),
        check("C3", "online NMF planted recovery", secs(10), c3_planted_recovery),
        check("C4", "sparse coding oracle", secs(10), c4_coding_oracle),
        check("C5", "exact self-reconstruction", secs(30), c5_self_reconstruction),
        check("C6", "reconstruction error bound", secs(60), c6_bound),
        check("C7", "ER mesoscale error", secs(60), c7_er_baseline),
        check("C8", "denoising", secs(180), c8_denoising),
        check("C9", "baseline exactness", secs(1), c9_baselines),
    ];
    match std::env::var("NDL_CALTECH_EDGES") {
        Ok(path) => {
            check("C10", "full-data self-reconstruction (optional)", secs(3600), || c10_caltech(&path));
        }
        Err(_) => println!("[SKIP] C10 full-data self-reconstruction (optional): NDL_CALTECH_EDGES not set"),
    }
    let failed = results.iter().filter(|&&p| !p).count();
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}

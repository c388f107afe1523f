//! The `ndl` command line.
//!
//! Exit codes: 0 on success, 1 for user errors (bad flags, unreadable or
//! malformed inputs, unsuitable networks), 2 for internal failures. Every
//! output file is written to a temporary sibling and renamed into place.

use std::collections::BTreeMap;
use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};

use crate::denoise::{
    baseline_scores, classify_with_split, denoise_pipeline, roc_auc, BaselineMethod, NoiseKind, ScoredPairs,
};
use crate::error::{Error, Result};
use crate::factorization::{Dictionary, SolverOptions};
use crate::graph::{
    corrupt, generate, read_edge_list, structural_stats, write_edge_list, EdgeClass, ModelSpec, Network, NodeTable,
    NoiseSpec,
};
use crate::ndl::{learn_dictionary, trace_tsv, NdlParams};
use crate::ndr::{bound_from_run, jaccard_metrics, mesoscale_error, reconstruct, threshold, NdrParams};
use crate::patches::MaskMode;
use crate::sampling::{occupation, target_distribution, total_variation, McmcMode, MotifChain, SamplerConfig, Target};

#[derive(Debug, Parser)]
#[command(name = "ndl", version, about = "Network dictionary learning and network denoising/reconstruction")]
struct Cli {
    /// Base seed for every random stream.
    #[arg(long, global = true, env = "NDL_SEED", default_value_t = 0)]
    seed: u64,
    /// Worker threads for chain ensembles.
    #[arg(long, global = true, default_value_t = 1)]
    threads: usize,
    /// Progress messages on stderr.
    #[arg(short, long, global = true)]
    verbose: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Draw a random network.
    Generate(GenerateArgs),
    /// Corrupt a network with additive or subtractive noise.
    Corrupt(CorruptArgs),
    /// Learn latent motifs from a network.
    Learn(LearnArgs),
    /// Write latent motifs as PGM images.
    Motifs(MotifsArgs),
    /// Reconstruct a network from a dictionary.
    Reconstruct(ReconstructArgs),
    /// Run a denoising experiment and report classification metrics.
    Denoise(DenoiseArgs),
    /// Diagnose a motif-sampling chain.
    McmcDiag(McmcDiagArgs),
    /// Compare two networks.
    Eval(EvalArgs),
    /// Print the version.
    Version,
}

#[derive(Debug, Args)]
struct GenerateArgs {
    /// er, ws, ba or sbm.
    #[arg(long)]
    model: String,
    /// Number of nodes (er, ws, ba).
    #[arg(long)]
    n: Option<usize>,
    /// Edge probability (er) or rewiring probability (ws).
    #[arg(long)]
    p: Option<f64>,
    /// Ring degree (ws).
    #[arg(long)]
    k: Option<usize>,
    /// Edges per new node (ba).
    #[arg(long)]
    n0: Option<usize>,
    /// Comma-separated block sizes (sbm).
    #[arg(long)]
    sizes: Option<String>,
    /// Within-block probability (sbm).
    #[arg(long)]
    p_in: Option<f64>,
    /// Between-block probability (sbm).
    #[arg(long)]
    p_out: Option<f64>,
    #[arg(short, long)]
    output: PathBuf,
}

#[derive(Debug, Args)]
struct CorruptArgs {
    #[arg(long)]
    graph: PathBuf,
    /// sub-er, add-er or add-ws.
    #[arg(long)]
    noise: String,
    #[arg(long, default_value_t = 0.5)]
    fraction: f64,
    /// Nodes of the overlaid ring (add-ws).
    #[arg(long)]
    n0: Option<usize>,
    /// Ring degree of the overlay (add-ws).
    #[arg(long, default_value_t = 2)]
    k0: usize,
    /// Rewiring probability of the overlay (add-ws).
    #[arg(long, default_value_t = 0.1)]
    p: f64,
    #[arg(short, long)]
    output: PathBuf,
    /// Changed pairs with their class.
    #[arg(long)]
    labels: PathBuf,
}

#[derive(Debug, Args)]
struct LearnArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 21)]
    k: usize,
    #[arg(long, default_value_t = 25)]
    r: usize,
    /// Online iterations.
    #[arg(long = "T", default_value_t = 100)]
    iterations: usize,
    /// Homomorphisms per iteration.
    #[arg(long = "N", default_value_t = 100)]
    batch: usize,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    #[arg(long, default_value = "pivotapprox")]
    mcmc: String,
    #[arg(long, default_value_t = 100_000)]
    max_rejections: usize,
    /// Dictionary file; dominance scores go to `<output>.scores`.
    #[arg(short, long)]
    output: PathBuf,
    /// Per-iteration diagnostics.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct MotifsArgs {
    #[arg(long)]
    dict: PathBuf,
    #[arg(long)]
    out_dir: PathBuf,
    /// Dominance scores; defaults to `<dict>.scores` when present.
    #[arg(long)]
    scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct ReconstructArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    dict: PathBuf,
    /// Chain steps, or `auto` for ⌊n ln n⌋.
    #[arg(long = "T", default_value = "auto")]
    iterations: String,
    #[arg(long, default_value_t = 0.0)]
    lambda: f64,
    #[arg(long, default_value_t = 0.4)]
    theta: f64,
    #[arg(long, default_value_t = 1.0)]
    xi: f64,
    #[arg(long)]
    denoising: bool,
    #[arg(long)]
    injective: bool,
    #[arg(long, default_value = "pivotapprox")]
    mcmc: String,
    /// Independent chains, merged.
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Mask only `(i, i+1)` instead of both orientations.
    #[arg(long)]
    literal_mask: bool,
    #[arg(long, default_value_t = 100_000)]
    max_rejections: usize,
    /// Samples for the mesoscale error.
    #[arg(long, default_value_t = 2000)]
    samples: usize,
    /// Weighted reconstruction.
    #[arg(short, long)]
    output: PathBuf,
    /// Thresholded reconstruction.
    #[arg(long)]
    thresholded: Option<PathBuf>,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct DenoiseArgs {
    /// Corrupted network.
    #[arg(long)]
    graph: PathBuf,
    /// Changed pairs written by `corrupt`.
    #[arg(long)]
    labels: PathBuf,
    /// additive or subtractive; inferred from the labels when omitted.
    #[arg(long)]
    noise: Option<String>,
    #[arg(long, default_value_t = 21)]
    k: usize,
    #[arg(long, default_value_t = 25)]
    r: usize,
    /// Dictionary-learning iterations.
    #[arg(long = "T", default_value_t = 100)]
    iterations: usize,
    #[arg(long = "N", default_value_t = 100)]
    batch: usize,
    #[arg(long, default_value_t = 1.0)]
    lambda: f64,
    /// Reconstruction steps, or `auto`.
    #[arg(long = "ndr-T", default_value = "auto")]
    ndr_iterations: String,
    #[arg(long, default_value_t = 0.0)]
    ndr_lambda: f64,
    #[arg(long, default_value_t = 0.0)]
    xi: f64,
    #[arg(long)]
    denoising: bool,
    #[arg(long)]
    injective: bool,
    #[arg(long, default_value = "pivotapprox")]
    mcmc: String,
    #[arg(long, default_value_t = 1)]
    chains: usize,
    /// Score every non-edge under subtractive noise.
    #[arg(long)]
    all_nonedges: bool,
    #[arg(long, default_value_t = 0.25)]
    train: f64,
    #[arg(long, default_value_t = 0.25)]
    val: f64,
    /// Comma-separated baselines (jaccard, pa, adamic_adar), or `none`.
    #[arg(long, default_value = "jaccard,pa,adamic_adar")]
    baselines: String,
    #[arg(long, default_value_t = 100_000)]
    max_rejections: usize,
    #[arg(long)]
    report: PathBuf,
    /// Per-pair scores and labels.
    #[arg(long)]
    scores: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct McmcDiagArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long, default_value_t = 3)]
    k: usize,
    #[arg(long, default_value = "pivotapprox")]
    mcmc: String,
    #[arg(long)]
    injective: bool,
    #[arg(long, default_value_t = 100_000)]
    steps: u64,
    #[arg(long, default_value_t = 100_000)]
    max_rejections: usize,
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvalArgs {
    first: PathBuf,
    second: PathBuf,
    #[arg(long)]
    report: Option<PathBuf>,
    /// Writes `<prefix>.a.degree.tsv` and `<prefix>.b.degree.tsv`.
    #[arg(long)]
    hist_prefix: Option<String>,
}

/// Runs the command line and returns the process exit code.
pub fn dispatch<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("error: {e}");
            if e.is_user_error() {
                1
            } else {
                2
            }
        }
    }
}

struct Ctx {
    seed: u64,
    threads: usize,
    verbose: bool,
}

impl Ctx {
    fn log(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("[ndl] {}", msg.as_ref());
        }
    }
}

fn run(cli: &Cli) -> Result<()> {
    if cli.threads == 0 {
        return Err(Error::param("threads", "must be at least 1"));
    }
    let ctx = Ctx {
        seed: cli.seed,
        threads: cli.threads,
        verbose: cli.verbose,
    };
    match &cli.command {
        Command::Generate(a) => cmd_generate(&ctx, a),
        Command::Corrupt(a) => cmd_corrupt(&ctx, a),
        Command::Learn(a) => cmd_learn(&ctx, a),
        Command::Motifs(a) => cmd_motifs(&ctx, a),
        Command::Reconstruct(a) => cmd_reconstruct(&ctx, a),
        Command::Denoise(a) => cmd_denoise(&ctx, a),
        Command::McmcDiag(a) => cmd_mcmc_diag(&ctx, a),
        Command::Eval(a) => cmd_eval(&ctx, a),
        Command::Version => {
            println!("ndl {}", env!("CARGO_PKG_VERSION"));
            Ok(())
        }
    }
}

/// Writes `bytes` to a temporary file next to `path`, then renames it.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> Result<()> {
    let name = path
        .file_name()
        .ok_or_else(|| Error::param("output", format!("`{}` is not a file path", path.display())))?;
    let mut tmp_name = OsString::from(".");
    tmp_name.push(name);
    tmp_name.push(format!(".tmp{}", std::process::id()));
    let tmp = path.with_file_name(tmp_name);
    let result = (|| {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(bytes)?;
        f.sync_all()?;
        fs::rename(&tmp, path)
    })();
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

fn save_network(g: &Network, path: &Path) -> Result<()> {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).map_err(|e| Error::io(path, e))?;
    write_atomic(path, &buf)
}

fn load_network(path: &Path, table: &mut NodeTable) -> Result<Network> {
    let f = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_edge_list(f, path, table)
}

fn parse_mode(s: &str) -> Result<McmcMode> {
    s.parse().map_err(|_| {
        Error::param("mcmc", format!("unknown sampler `{s}` (pivot, pivotapprox, glauber)"))
    })
}

fn parse_steps(s: &str, flag: &'static str) -> Result<Option<usize>> {
    if s == "auto" {
        return Ok(None);
    }
    match s.parse::<usize>() {
        Ok(0) | Err(_) => Err(Error::param(flag, format!("`{s}` is neither `auto` nor a positive integer"))),
        Ok(t) => Ok(Some(t)),
    }
}

fn tsv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut s = header.join("\t");
    s.push('\n');
    for r in rows {
        s.push_str(&r.join("\t"));
        s.push('\n');
    }
    s
}

fn metric_rows(rows: &[(&str, String)]) -> String {
    let rows: Vec<Vec<String>> = rows.iter().map(|(k, v)| vec![k.to_string(), v.clone()]).collect();
    tsv_table(&["metric", "value"], &rows)
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_atomic(p, text.as_bytes()),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn na_or<T: ToString>(r: Result<T>) -> String {
    r.map_or_else(|_| "NA".to_string(), |v| v.to_string())
}

fn cmd_generate(ctx: &Ctx, a: &GenerateArgs) -> Result<()> {
    let need = |v: Option<usize>, name: &'static str| v.ok_or_else(|| Error::param(name, format!("required for model `{}`", a.model)));
    let needf = |v: Option<f64>, name: &'static str| v.ok_or_else(|| Error::param(name, format!("required for model `{}`", a.model)));
    let spec = match a.model.as_str() {
        "er" => ModelSpec::Er {
            n: need(a.n, "n")?,
            p: needf(a.p, "p")?,
        },
        "ws" => ModelSpec::Ws {
            n: need(a.n, "n")?,
            k: need(a.k, "k")?,
            p: needf(a.p, "p")?,
        },
        "ba" => ModelSpec::Ba {
            n: need(a.n, "n")?,
            n0: need(a.n0, "n0")?,
        },
        "sbm" => {
            let sizes = a
                .sizes
                .as_deref()
                .ok_or_else(|| Error::param("sizes", "required for model `sbm`"))?
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| Error::param("sizes", format!("bad block size `{t}`"))))
                .collect::<Result<Vec<_>>>()?;
            ModelSpec::sbm_uniform(sizes, needf(a.p_in, "p-in")?, needf(a.p_out, "p-out")?)
        }
        m => return Err(Error::param("model", format!("unknown model `{m}` (er, ws, ba, sbm)"))),
    };
    spec.validate()?;
    let g = generate(&spec, ctx.seed)?;
    ctx.log(format!("generated {} nodes, {} edges", g.n(), g.edge_count()));
    save_network(&g, &a.output)
}

fn cmd_corrupt(ctx: &Ctx, a: &CorruptArgs) -> Result<()> {
    let spec = match a.noise.as_str() {
        "sub-er" => NoiseSpec::SubtractiveEr { fraction: a.fraction },
        "add-er" => NoiseSpec::AdditiveEr { fraction: a.fraction },
        "add-ws" => NoiseSpec::AdditiveWs {
            n0: a.n0.ok_or_else(|| Error::param("n0", "required for add-ws"))?,
            k0: a.k0,
            p: a.p,
        },
        s => return Err(Error::param("noise", format!("unknown noise `{s}` (sub-er, add-er, add-ws)"))),
    };
    spec.validate()?;
    let mut table = NodeTable::new();
    let g = load_network(&a.graph, &mut table)?;
    let c = corrupt(&g, &spec, ctx.seed)?;
    ctx.log(format!("changed {} pairs", c.changed.len()));
    let rows: Vec<Vec<String>> = c
        .changed
        .iter()
        .map(|&(u, v)| vec![g.label(u), g.label(v), c.labels[&(u, v)].as_str().to_string()])
        .collect();
    save_network(&c.network, &a.output)?;
    write_atomic(&a.labels, tsv_table(&["u", "v", "class"], &rows).as_bytes())
}

fn scores_path(dict: &Path) -> PathBuf {
    let mut s = dict.as_os_str().to_owned();
    s.push(".scores");
    PathBuf::from(s)
}

fn cmd_learn(ctx: &Ctx, a: &LearnArgs) -> Result<()> {
    let params = NdlParams {
        k: a.k,
        r: a.r,
        iterations: a.iterations,
        batch: a.batch,
        lambda: a.lambda,
        mode: parse_mode(&a.mcmc)?,
        seed: ctx.seed,
        max_rejections: a.max_rejections,
        solver: SolverOptions::default(),
    };
    params.validate()?;
    let g = load_network(&a.graph, &mut NodeTable::new())?;
    ctx.log(format!("learning {} motifs at k = {} from {} nodes", a.r, a.k, g.n()));
    let out = learn_dictionary(&g, &params)?;
    if let Some(last) = out.diagnostics.last() {
        ctx.log(format!("final fit error {}", last.fit_error));
    }
    write_atomic(&a.output, out.dictionary.to_text().as_bytes())?;
    let (scores, _) = out.dominance();
    let rows: Vec<Vec<String>> = scores.iter().enumerate().map(|(j, s)| vec![j.to_string(), s.to_string()]).collect();
    write_atomic(&scores_path(&a.output), tsv_table(&["motif", "score"], &rows).as_bytes())?;
    if let Some(t) = &a.trace {
        write_atomic(t, trace_tsv(&out.diagnostics).as_bytes())?;
    }
    Ok(())
}

fn read_scores(path: &Path, r: usize) -> Result<Vec<f64>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut scores = vec![0.0; r];
    for (i, line) in text.lines().enumerate().skip(1) {
        if line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let (j, s) = match f.as_slice() {
            [j, s] => (
                j.parse::<usize>().map_err(|_| err(i + 1, format!("bad motif index `{j}`")))?,
                s.parse::<f64>().map_err(|_| err(i + 1, format!("bad score `{s}`")))?,
            ),
            _ => return Err(err(i + 1, "expected `motif<TAB>score`".into())),
        };
        if j >= r {
            return Err(err(i + 1, format!("motif {j} out of range for r = {r}")));
        }
        scores[j] = s;
    }
    Ok(scores)
}

/// Plain-text grayscale image of a k×k motif, brightest at its largest entry.
pub fn motif_pgm(dict: &Dictionary, j: usize) -> String {
    let m = dict.motif(j);
    let k = dict.k();
    let max = m.iter().copied().fold(0.0, f64::max);
    let mut s = format!("P2\n{k} {k}\n255\n");
    for a in 0..k {
        let row: Vec<String> = (0..k)
            .map(|b| {
                let v = if max > 0.0 { (255.0 * m[(a, b)] / max).round() } else { 0.0 };
                (v as u32).to_string()
            })
            .collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

fn cmd_motifs(ctx: &Ctx, a: &MotifsArgs) -> Result<()> {
    let dict = Dictionary::load(&a.dict)?;
    let default_scores = scores_path(&a.dict);
    let scores_file = match &a.scores {
        Some(p) => Some(p.clone()),
        None => default_scores.exists().then_some(default_scores),
    };
    let scores = match &scores_file {
        Some(p) => read_scores(p, dict.r())?,
        None => vec![0.0; dict.r()],
    };
    let mut order: Vec<usize> = (0..dict.r()).collect();
    order.sort_by(|&x, &y| scores[y].total_cmp(&scores[x]));
    fs::create_dir_all(&a.out_dir).map_err(|e| Error::io(&a.out_dir, e))?;
    let mut rows = Vec::new();
    for (rank, &j) in order.iter().enumerate() {
        let file = format!("motif_{rank:03}.pgm");
        write_atomic(&a.out_dir.join(&file), motif_pgm(&dict, j).as_bytes())?;
        rows.push(vec![rank.to_string(), j.to_string(), scores[j].to_string(), file]);
    }
    ctx.log(format!("wrote {} motif images", rows.len()));
    write_atomic(
        &a.out_dir.join("motifs.tsv"),
        tsv_table(&["rank", "motif", "score", "file"], &rows).as_bytes(),
    )
}

fn cmd_reconstruct(ctx: &Ctx, a: &ReconstructArgs) -> Result<()> {
    let mut params = NdrParams {
        k: 2,
        iterations: parse_steps(&a.iterations, "T")?,
        lambda: a.lambda,
        theta: a.theta,
        xi: a.xi,
        denoising: a.denoising,
        injective: a.injective,
        mode: parse_mode(&a.mcmc)?,
        seed: ctx.seed,
        max_rejections: a.max_rejections,
        mask_mode: if a.literal_mask { MaskMode::Literal } else { MaskMode::Symmetric },
        chains: a.chains,
        threads: ctx.threads,
        ..NdrParams::default()
    };
    params.validate()?;
    if a.samples == 0 {
        return Err(Error::param("samples", "must be at least 1"));
    }
    let dict = Dictionary::load(&a.dict)?;
    params.k = dict.k();
    let g = load_network(&a.graph, &mut NodeTable::new())?;
    ctx.log(format!("reconstructing {} nodes for {} steps", g.n(), params.steps_for(g.n())));
    let rec = reconstruct(&g, &dict, &params)?;
    save_network(&rec.network, &a.output)?;
    let binary = threshold(&rec.network, params.theta)?;
    if let Some(p) = &a.thresholded {
        save_network(&binary, p)?;
    }
    if let Some(p) = &a.report {
        let jm = jaccard_metrics(&g, &binary);
        let meso = mesoscale_error(&g, &dict, a.samples, &params);
        let bound = bound_from_run(&g, &dict, &params, &rec, a.samples);
        let rows = [
            ("steps", rec.steps.to_string()),
            ("passes", rec.passes.to_string()),
            ("theta", params.theta.to_string()),
            ("jaccard_index", na_or(jm.as_ref().map(|m| m.index).map_err(clone_err))),
            ("jaccard_distance", na_or(jm.as_ref().map(|m| m.distance).map_err(clone_err))),
            ("weighted_jaccard_distance", na_or(jaccard_metrics(&g, &rec.network).map(|m| m.distance))),
            ("mesoscale_error", na_or(meso.as_ref().map(|m| m.mean).map_err(clone_err))),
            ("mesoscale_std_error", na_or(meso.as_ref().map(|m| m.std_error).map_err(clone_err))),
            ("bound_lhs", na_or(bound.as_ref().map(|b| b.lhs).map_err(clone_err))),
            ("bound_rhs", na_or(bound.as_ref().map(|b| b.rhs).map_err(clone_err))),
            ("bound_holds", na_or(bound.as_ref().map(|b| b.holds).map_err(clone_err))),
            ("bound_exact", na_or(bound.as_ref().map(|b| b.exact).map_err(clone_err))),
        ];
        write_atomic(p, metric_rows(&rows).as_bytes())?;
    }
    Ok(())
}

fn clone_err(e: &Error) -> Error {
    Error::Metric(e.to_string())
}

fn read_labels(path: &Path, table: &NodeTable) -> Result<BTreeMap<(usize, usize), EdgeClass>> {
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    let err = |line: usize, reason: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        reason,
    };
    let mut out = BTreeMap::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let f: Vec<&str> = line.split('\t').collect();
        let [u, v, c] = f.as_slice() else {
            return Err(err(i + 1, "expected `u<TAB>v<TAB>class`".into()));
        };
        let id = |name: &str| table.get(name).ok_or_else(|| err(i + 1, format!("unknown node `{name}`")));
        let (u, v) = (id(u)?, id(v)?);
        let class = EdgeClass::parse(c).ok_or_else(|| err(i + 1, format!("unknown class `{c}`")))?;
        out.insert((u.min(v), u.max(v)), class);
    }
    Ok(out)
}

fn cmd_denoise(ctx: &Ctx, a: &DenoiseArgs) -> Result<()> {
    let mode = parse_mode(&a.mcmc)?;
    let ndl = NdlParams {
        k: a.k,
        r: a.r,
        iterations: a.iterations,
        batch: a.batch,
        lambda: a.lambda,
        mode,
        seed: ctx.seed,
        max_rejections: a.max_rejections,
        solver: SolverOptions::default(),
    };
    ndl.validate()?;
    let ndr = NdrParams {
        k: a.k,
        iterations: parse_steps(&a.ndr_iterations, "ndr-T")?,
        lambda: a.ndr_lambda,
        xi: a.xi,
        denoising: a.denoising,
        injective: a.injective,
        mode,
        seed: ctx.seed,
        max_rejections: a.max_rejections,
        chains: a.chains,
        threads: ctx.threads,
        ..NdrParams::default()
    };
    ndr.validate()?;
    let baselines: Vec<BaselineMethod> = if a.baselines == "none" {
        Vec::new()
    } else {
        a.baselines.split(',').map(|s| s.trim().parse()).collect::<Result<_>>()?
    };
    if !(a.train > 0.0 && a.train < 1.0) {
        return Err(Error::param("train", format!("{} outside (0, 1)", a.train)));
    }
    if !(a.val > 0.0 && a.train + a.val < 1.0) {
        return Err(Error::param("val", format!("{} must be positive with train + val < 1", a.val)));
    }
    let mut table = NodeTable::new();
    let g = load_network(&a.graph, &mut table)?;
    let labels = read_labels(&a.labels, &table)?;
    let kind = match &a.noise {
        Some(s) => s.parse()?,
        None => {
            if labels.values().all(|&c| c == EdgeClass::FalseEdge) && !labels.is_empty() {
                NoiseKind::Additive
            } else if labels.values().all(|&c| c == EdgeClass::TrueEdge) && !labels.is_empty() {
                NoiseKind::Subtractive
            } else {
                return Err(Error::param("noise", "cannot infer the noise kind from the labels; pass --noise"));
            }
        }
    };
    ctx.log(format!("{} noise, {} labelled pairs", kind.as_str(), labels.len()));
    let out = denoise_pipeline(&g, kind, &labels, &ndl, &ndr, a.all_nonedges)?;
    let mut rows = vec![report_row("ndr", &out.scored, ctx.seed, a.train, a.val)?];
    for m in baselines {
        match baseline_scores(&g, &out.scored, m) {
            Ok(s) => rows.push(report_row(m.as_str(), &s, ctx.seed, a.train, a.val)?),
            Err(Error::MethodUnavailable(why)) => {
                ctx.log(format!("{m} skipped: {why}"));
                rows.push(vec![m.as_str().to_string(), "NA".into(), "NA".into(), "NA".into(), "NA".into(), "NA".into()]);
            }
            Err(e) => return Err(e),
        }
    }
    write_atomic(
        &a.report,
        tsv_table(&["method", "auc", "accuracy", "precision", "recall", "theta"], &rows).as_bytes(),
    )?;
    if let Some(p) = &a.scores {
        let rows: Vec<Vec<String>> = out
            .scored
            .pairs
            .iter()
            .map(|s| vec![g.label(s.u), g.label(s.v), s.score.to_string(), u8::from(s.positive).to_string()])
            .collect();
        write_atomic(p, tsv_table(&["u", "v", "score", "positive"], &rows).as_bytes())?;
    }
    Ok(())
}

fn report_row(method: &str, scored: &ScoredPairs, seed: u64, train: f64, val: f64) -> Result<Vec<String>> {
    let auc = roc_auc(scored)?.auc;
    let c = classify_with_split(scored, seed, train, val)?;
    Ok(vec![
        method.to_string(),
        auc.to_string(),
        c.accuracy.to_string(),
        c.precision.to_string(),
        c.recall.to_string(),
        c.theta.to_string(),
    ])
}

fn cmd_mcmc_diag(ctx: &Ctx, a: &McmcDiagArgs) -> Result<()> {
    let config = SamplerConfig {
        mode: parse_mode(&a.mcmc)?,
        injective: a.injective,
        max_rejections: a.max_rejections,
    };
    config.validate()?;
    if a.k < 2 {
        return Err(Error::param("k", format!("must be at least 2, got {}", a.k)));
    }
    if a.steps == 0 {
        return Err(Error::param("steps", "must be at least 1"));
    }
    let g = load_network(&a.graph, &mut NodeTable::new())?;
    let mut chain = MotifChain::new(&g, a.k, config, crate::rng::stream(ctx.seed, 0))?;
    let counts = occupation(&mut chain, a.steps)?;
    let tv = target_distribution(&g, a.k, Target::for_config(&config)).map(|t| total_variation(&counts, &t));
    let rows = [
        ("mode", config.mode.to_string()),
        ("injective", config.injective.to_string()),
        ("steps", a.steps.to_string()),
        ("acceptance_rate", chain.acceptance_rate().to_string()),
        ("mean_rejections", chain.mean_rejections().to_string()),
        ("distinct_states", counts.len().to_string()),
        ("total_variation", na_or(tv)),
    ];
    emit(a.report.as_deref(), &metric_rows(&rows))
}

fn cmd_eval(ctx: &Ctx, a: &EvalArgs) -> Result<()> {
    let mut table = NodeTable::new();
    let g1 = load_network(&a.first, &mut table)?;
    let g2 = load_network(&a.second, &mut table)?;
    let n = table.len();
    let names = table.names().to_vec();
    let g1 = g1.resized(n).with_labels(names.clone());
    let g2 = g2.resized(n).with_labels(names);
    let jm = jaccard_metrics(&g1, &g2);
    let (s1, s2) = (structural_stats(&g1), structural_stats(&g2));
    ctx.log(format!("compared {n} nodes"));
    let rows = [
        ("nodes", n.to_string()),
        ("edges_a", g1.edge_count().to_string()),
        ("edges_b", g2.edge_count().to_string()),
        ("jaccard_index", na_or(jm.as_ref().map(|m| m.index).map_err(clone_err))),
        ("jaccard_distance", na_or(jm.as_ref().map(|m| m.distance).map_err(clone_err))),
        ("mean_clustering_a", s1.mean_clustering.to_string()),
        ("mean_clustering_b", s2.mean_clustering.to_string()),
        ("diameter_a", s1.diameter.to_string()),
        ("diameter_b", s2.diameter.to_string()),
    ];
    emit(a.report.as_deref(), &metric_rows(&rows))?;
    if let Some(prefix) = &a.hist_prefix {
        for (tag, s) in [("a", &s1), ("b", &s2)] {
            let rows: Vec<Vec<String>> = s
                .degree_histogram
                .iter()
                .enumerate()
                .map(|(d, c)| vec![d.to_string(), c.to_string()])
                .collect();
            let path = PathBuf::from(format!("{prefix}.{tag}.degree.tsv"));
            write_atomic(&path, tsv_table(&["degree", "count"], &rows).as_bytes())?;
        }
    }
    Ok(())
}

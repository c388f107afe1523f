//! Online nonnegative matrix factorization.
//!
//! Data arrive as k²×N batches `X_t`. Each step codes the batch against the
//! current dictionary, folds the codes into the running aggregates
//! `P_t = mean(H Hᵀ)` and `Q_t = mean(H Xᵀ)`, and improves the dictionary on
//! the surrogate `tr(W P Wᵀ) - 2 tr(W Q)`.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;

use ndarray::{Array1, Array2, ArrayView2, ArrayViewMut1, Axis, Zip};
use rand::Rng as _;

use crate::error::{Error, Result};
use crate::patches::reshape;
use crate::rng::Rng;

const NORM_SLACK: f64 = 1e-9;

/// A k²×r nonnegative matrix whose columns (latent motifs) have norm at most one.
#[derive(Debug, Clone, PartialEq)]
pub struct Dictionary {
    k: usize,
    w: Array2<f64>,
}

impl Dictionary {
    /// i.i.d. uniform [0, 1] entries, each column then scaled to unit norm.
    pub fn random(k: usize, r: usize, rng: &mut Rng) -> Result<Self> {
        if k < 2 || r == 0 {
            return Err(Error::param("r", format!("need k >= 2 and r >= 1, got k = {k}, r = {r}")));
        }
        let mut w = Array2::from_shape_simple_fn((k * k, r), || rng.random::<f64>());
        for col in w.axis_iter_mut(Axis(1)) {
            project_column(col);
        }
        // Uniform entries are positive with overwhelming probability, but
        // make the columns exactly unit length regardless.
        for mut col in w.axis_iter_mut(Axis(1)) {
            let n = col.dot(&col).sqrt();
            if n > 0.0 {
                col /= n;
            }
        }
        Ok(Dictionary { k, w })
    }

    /// Wraps an existing k²×r matrix, checking the constraint set.
    pub fn from_matrix(k: usize, w: Array2<f64>) -> Result<Self> {
        if w.nrows() != k * k || w.ncols() == 0 {
            return Err(Error::Shape(format!(
                "dictionary for k = {k} needs {} rows and at least one column, got {:?}",
                k * k,
                w.dim()
            )));
        }
        if w.iter().any(|&v| !v.is_finite() || v < 0.0) {
            return Err(Error::Numeric("dictionary entries must be finite and nonnegative".into()));
        }
        for (j, col) in w.axis_iter(Axis(1)).enumerate() {
            let n = col.dot(&col).sqrt();
            if n > 1.0 + NORM_SLACK {
                return Err(Error::Numeric(format!("column {j} has norm {n} > 1")));
            }
        }
        Ok(Dictionary { k, w })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn r(&self) -> usize {
        self.w.ncols()
    }

    pub fn matrix(&self) -> &Array2<f64> {
        &self.w
    }

    /// Latent motif `j` as a k×k matrix.
    pub fn motif(&self, j: usize) -> Array2<f64> {
        reshape(self.w.column(j), self.k, self.k).expect("column length is k^2")
    }

    /// Text form: a header line then one line per column.
    pub fn to_text(&self) -> String {
        let mut s = format!("NDL-DICT 1 k={} r={}\n", self.k, self.r());
        for col in self.w.axis_iter(Axis(1)) {
            let mut first = true;
            for v in col {
                if !first {
                    s.push(' ');
                }
                first = false;
                write!(s, "{v}").unwrap();
            }
            s.push('\n');
        }
        s
    }

    pub fn from_text(text: &str, path: &Path) -> Result<Self> {
        let err = |line: usize, reason: String| Error::Parse {
            path: path.to_path_buf(),
            line,
            reason,
        };
        let mut lines = text.lines().enumerate();
        let (_, header) = lines.next().ok_or_else(|| err(1, "empty dictionary file".into()))?;
        let parts: Vec<&str> = header.split_whitespace().collect();
        let field = |p: Option<&&str>, key: &str| -> Option<usize> { p?.strip_prefix(key)?.parse().ok() };
        let (k, r) = match (parts.first(), parts.get(1), field(parts.get(2), "k="), field(parts.get(3), "r=")) {
            (Some(&"NDL-DICT"), Some(&"1"), Some(k), Some(r)) if parts.len() == 4 => (k, r),
            _ => return Err(err(1, format!("bad header `{header}`, expected `NDL-DICT 1 k=<k> r=<r>`"))),
        };
        let mut w = Array2::zeros((k * k, r));
        let mut j = 0;
        for (i, line) in lines {
            if line.trim().is_empty() {
                continue;
            }
            if j == r {
                return Err(err(i + 1, format!("more than r = {r} motif lines")));
            }
            let vals: Vec<f64> = line
                .split_whitespace()
                .map(|t| t.parse::<f64>().map_err(|_| err(i + 1, format!("invalid number `{t}`"))))
                .collect::<Result<_>>()?;
            if vals.len() != k * k {
                return Err(err(i + 1, format!("expected {} entries, found {}", k * k, vals.len())));
            }
            w.column_mut(j).assign(&Array1::from(vals));
            j += 1;
        }
        if j != r {
            return Err(err(text.lines().count(), format!("expected {r} motif lines, found {j}")));
        }
        Self::from_matrix(k, w)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = fs::File::create(path).map_err(|e| Error::io(path, e))?;
        f.write_all(self.to_text().as_bytes()).map_err(|e| Error::io(path, e))
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text, path)
    }
}

/// Running aggregates of the online factorization.
#[derive(Debug, Clone, PartialEq)]
pub struct AggregateState {
    pub t: usize,
    /// r×r, the running mean of `H Hᵀ`.
    pub p: Array2<f64>,
    /// r×k², the running mean of `H Xᵀ`.
    pub q: Array2<f64>,
}

impl AggregateState {
    pub fn new(r: usize, d: usize) -> Self {
        AggregateState {
            t: 0,
            p: Array2::zeros((r, r)),
            q: Array2::zeros((r, d)),
        }
    }
}

/// Iteration budgets for the two inner solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    pub code_iters: usize,
    pub code_tol: f64,
    pub dict_iters: usize,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            code_iters: 100,
            code_tol: 1e-8,
            dict_iters: 5,
        }
    }
}

fn check_finite(m: &ArrayView2<'_, f64>, what: &str) -> Result<()> {
    if m.iter().all(|v| v.is_finite()) {
        Ok(())
    } else {
        Err(Error::Numeric(format!("{what} contains non-finite entries")))
    }
}

/// `‖X - W H‖²_F + λ ‖H‖₁`.
pub fn coding_objective(x: ArrayView2<'_, f64>, w: ArrayView2<'_, f64>, h: ArrayView2<'_, f64>, lambda: f64) -> f64 {
    let resid = &x - &w.dot(&h);
    resid.iter().map(|v| v * v).sum::<f64>() + lambda * h.iter().map(|v| v.abs()).sum::<f64>()
}

/// Nonnegative sparse coding of the columns of `x` against `w` by projected
/// gradient descent with step `1 / tr(WᵀW)`.
pub fn sparse_code(
    x: ArrayView2<'_, f64>,
    w: ArrayView2<'_, f64>,
    lambda: f64,
    iters: usize,
    tol: f64,
) -> Result<Array2<f64>> {
    SparseCoder::new(w, lambda, iters, tol)?.code(x)
}

/// A sparse coder bound to one dictionary, with `WᵀW` precomputed.
#[derive(Debug, Clone)]
pub struct SparseCoder {
    w: Array2<f64>,
    gram: Array2<f64>,
    step: f64,
    lambda: f64,
    iters: usize,
    tol: f64,
}

impl SparseCoder {
    pub fn new(w: ArrayView2<'_, f64>, lambda: f64, iters: usize, tol: f64) -> Result<Self> {
        if !(lambda >= 0.0) {
            return Err(Error::param("lambda", format!("{lambda} must be nonnegative")));
        }
        check_finite(&w, "dictionary")?;
        let gram = w.t().dot(&w);
        let step = gram.diag().sum();
        Ok(SparseCoder {
            w: w.to_owned(),
            gram,
            step,
            lambda,
            iters: iters.max(1),
            tol,
        })
    }

    pub fn dictionary(&self) -> &Array2<f64> {
        &self.w
    }

    pub fn code(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        if x.nrows() != self.w.nrows() {
            return Err(Error::Shape(format!("data has {} rows, dictionary {}", x.nrows(), self.w.nrows())));
        }
        check_finite(&x, "data matrix")?;
        let mut h = Array2::zeros((self.w.ncols(), x.ncols()));
        if !(self.step > 0.0) {
            return Ok(h);
        }
        let wtx = self.w.t().dot(&x);
        // The objective uses the full squared norm, so the half-gradient carries λ/2.
        let shift = self.lambda / 2.0;
        let step = self.step;
        for _ in 0..self.iters {
            let grad = self.gram.dot(&h) - &wtx;
            let mut moved = 0.0f64;
            Zip::from(&mut h).and(&grad).for_each(|hv, &g| {
                let new = (*hv - (g + shift) / step).max(0.0);
                moved = moved.max((new - *hv).abs());
                *hv = new;
            });
            if moved < self.tol {
                break;
            }
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("sparse coding diverged".into()));
        }
        Ok(h)
    }

    /// `W H` for the code of `x`.
    pub fn approximate(&self, x: ArrayView2<'_, f64>) -> Result<Array2<f64>> {
        Ok(self.w.dot(&self.code(x)?))
    }

    /// Codes one vectorized patch into `h` without going through matrices.
    /// Same iteration as [`SparseCoder::code`] on a single column.
    pub fn code_column(&self, x: &[f64], h: &mut [f64]) -> Result<()> {
        let (d, r) = self.w.dim();
        if x.len() != d || h.len() != r {
            return Err(Error::Shape(format!("column of length {} against a {d}x{r} dictionary", x.len())));
        }
        h.fill(0.0);
        if !(self.step > 0.0) {
            return Ok(());
        }
        let mut wtx = vec![0.0; r];
        for (row, &xi) in self.w.rows().into_iter().zip(x) {
            if xi != 0.0 {
                for (acc, &wv) in wtx.iter_mut().zip(row) {
                    *acc += wv * xi;
                }
            }
        }
        if wtx.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("data column contains non-finite entries".into()));
        }
        let shift = self.lambda / 2.0;
        let mut grad = vec![0.0; r];
        for _ in 0..self.iters {
            for (j, g) in grad.iter_mut().enumerate() {
                *g = self.gram.row(j).iter().zip(h.iter()).map(|(a, b)| a * b).sum::<f64>() - wtx[j];
            }
            let mut moved = 0.0f64;
            for (hv, &g) in h.iter_mut().zip(&grad) {
                let new = (*hv - (g + shift) / self.step).max(0.0);
                moved = moved.max((new - *hv).abs());
                *hv = new;
            }
            if moved < self.tol {
                break;
            }
        }
        if h.iter().any(|v| !v.is_finite()) {
            return Err(Error::Numeric("sparse coding diverged".into()));
        }
        Ok(())
    }

    /// `W h` for the code `h` of one column, written into `out`.
    pub fn approximate_column(&self, x: &[f64], h: &mut [f64], out: &mut [f64]) -> Result<()> {
        self.code_column(x, h)?;
        for (o, row) in out.iter_mut().zip(self.w.rows()) {
            *o = row.iter().zip(h.iter()).map(|(a, b)| a * b).sum();
        }
        Ok(())
    }

    pub fn r(&self) -> usize {
        self.w.ncols()
    }
}

/// Largest movement of one more projected-gradient step; zero exactly at
/// a minimizer.
pub fn coding_residual(x: ArrayView2<'_, f64>, w: ArrayView2<'_, f64>, h: ArrayView2<'_, f64>, lambda: f64) -> f64 {
    let gram = w.t().dot(&w);
    let step = gram.diag().sum();
    if !(step > 0.0) {
        return 0.0;
    }
    let grad = gram.dot(&h) - w.t().dot(&x);
    let mut res = 0.0f64;
    Zip::from(&h).and(&grad).for_each(|&hv, &g| {
        res = res.max(((hv - (g + lambda / 2.0) / step).max(0.0) - hv).abs());
    });
    res
}

/// Projection onto `{w >= 0, ‖w‖ <= 1}`: clip, then shrink into the ball.
/// For this intersection the composition is the exact Euclidean projection.
fn project_column(mut col: ArrayViewMut1<'_, f64>) {
    col.mapv_inplace(|v| v.max(0.0));
    let n = col.dot(&col).sqrt();
    if n > 1.0 {
        col /= n;
    }
}

/// `tr(W P Wᵀ) - 2 tr(W Q)`.
pub fn surrogate(w: ArrayView2<'_, f64>, p: ArrayView2<'_, f64>, q: ArrayView2<'_, f64>) -> f64 {
    let wp = w.dot(&p);
    let quad: f64 = Zip::from(&wp).and(&w).fold(0.0, |acc, &a, &b| acc + a * b);
    let lin: f64 = Zip::from(&w).and(&q.t()).fold(0.0, |acc, &a, &b| acc + a * b);
    quad - 2.0 * lin
}

/// Block-coordinate projected gradient on the surrogate, one column at a
/// time with step `1 / (P(j, j) + 1)`, repeated for `iters` sweeps.
pub fn dictionary_update(w: &mut Array2<f64>, p: ArrayView2<'_, f64>, q: ArrayView2<'_, f64>, iters: usize) -> Result<()> {
    let r = w.ncols();
    if p.dim() != (r, r) || q.dim() != (r, w.nrows()) {
        return Err(Error::Shape(format!(
            "aggregates {:?} and {:?} do not match a dictionary of shape {:?}",
            p.dim(),
            q.dim(),
            w.dim()
        )));
    }
    for _ in 0..iters {
        #[cfg(debug_assertions)]
        let before = surrogate(w.view(), p, q);
        for j in 0..r {
            let grad = w.dot(&p.column(j)) - q.row(j);
            let step = 1.0 / (p[(j, j)] + 1.0);
            let mut col = w.column_mut(j);
            col.scaled_add(-step, &grad);
            project_column(col);
        }
        #[cfg(debug_assertions)]
        {
            let after = surrogate(w.view(), p, q);
            debug_assert!(after <= before + 1e-9 * before.abs().max(1.0), "surrogate rose {before} -> {after}");
        }
    }
    Ok(())
}

/// Outcome of one online step.
#[derive(Debug, Clone)]
pub struct StepReport {
    pub h: Array2<f64>,
    /// `‖X - W_{t-1} H‖_F / ‖X‖_F` (0 for an all-zero batch).
    pub fit_error: f64,
}

/// One online NMF iteration: code `x` against the current dictionary,
/// update the aggregates, then update the dictionary in place.
pub fn onmf_step(
    state: &mut AggregateState,
    dict: &mut Dictionary,
    x: ArrayView2<'_, f64>,
    lambda: f64,
    opts: &SolverOptions,
) -> Result<StepReport> {
    if x.nrows() != dict.k * dict.k {
        return Err(Error::Shape(format!("batch has {} rows, expected {}", x.nrows(), dict.k * dict.k)));
    }
    let h = sparse_code(x, dict.w.view(), lambda, opts.code_iters, opts.code_tol)?;
    let xnorm = x.iter().map(|v| v * v).sum::<f64>().sqrt();
    let resid = &x - &dict.w.dot(&h);
    let fit_error = if xnorm > 0.0 {
        resid.iter().map(|v| v * v).sum::<f64>().sqrt() / xnorm
    } else {
        0.0
    };
    state.t += 1;
    let t = state.t as f64;
    let keep = 1.0 - 1.0 / t;
    state.p *= keep;
    state.p.scaled_add(1.0 / t, &h.dot(&h.t()));
    state.q *= keep;
    state.q.scaled_add(1.0 / t, &h.dot(&x.t()));
    dictionary_update(&mut dict.w, state.p.view(), state.q.view(), opts.dict_iters)?;
    if dict.w.iter().any(|v| !v.is_finite()) {
        return Err(Error::Numeric("dictionary update produced non-finite entries".into()));
    }
    Ok(StepReport { h, fit_error })
}

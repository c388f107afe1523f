//! Mesoscale patches and the on-chain mask.
//!
//! The patch of a homomorphism `x` is the k×k matrix `A_x(a, b) = A(x(a), x(b))`.
//! Patches are flattened column by column into vectors of length k².

use ndarray::{Array1, Array2, ArrayView1, ArrayView2, Axis};

use crate::error::{Error, Result};
use crate::graph::Network;
use crate::sampling::Homomorphism;

/// How the chain positions of a k×k matrix are selected.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MaskMode {
    /// Both `(i, i+1)` and `(i+1, i)`.
    #[default]
    Symmetric,
    /// Only `(i, i+1)`, the literal support of the chain adjacency.
    Literal,
}

pub fn extract_patch(g: &Network, x: &Homomorphism) -> Array2<f64> {
    let v = x.nodes();
    let k = v.len();
    Array2::from_shape_fn((k, k), |(a, b)| g.weight(v[a], v[b]))
}

/// Vectorized patches of `xs` as the columns of a k²×N matrix.
pub fn patch_matrix(g: &Network, xs: &[Homomorphism]) -> Array2<f64> {
    let k = xs.first().map_or(0, Homomorphism::k);
    let mut out = Array2::zeros((k * k, xs.len()));
    for (j, x) in xs.iter().enumerate() {
        let v = x.nodes();
        let mut col = out.column_mut(j);
        for b in 0..k {
            for a in 0..k {
                col[a + k * b] = g.weight(v[a], v[b]);
            }
        }
    }
    out
}

/// Column-stacking flattening: entry `(i, j)` goes to position `i + rows * j`.
pub fn vectorize(m: ArrayView2<'_, f64>) -> Array1<f64> {
    m.t().iter().copied().collect()
}

/// Inverse of [`vectorize`].
pub fn reshape(v: ArrayView1<'_, f64>, rows: usize, cols: usize) -> Result<Array2<f64>> {
    if v.len() != rows * cols {
        return Err(Error::Shape(format!(
            "vector of length {} cannot be reshaped to {rows}x{cols}",
            v.len()
        )));
    }
    Ok(Array2::from_shape_fn((rows, cols), |(i, j)| v[i + rows * j]))
}

/// Boolean k×k mask of the chain positions.
pub fn on_chain_mask(k: usize, mode: MaskMode) -> Array2<bool> {
    Array2::from_shape_fn((k, k), |(a, b)| match mode {
        MaskMode::Symmetric => a + 1 == b || b + 1 == a,
        MaskMode::Literal => a + 1 == b,
    })
}

fn check_square(m: &ArrayView2<'_, f64>) -> Result<usize> {
    let (r, c) = m.dim();
    if r != c {
        return Err(Error::Shape(format!("expected a square patch, got {r}x{c}")));
    }
    Ok(r)
}

fn scale_on_chain(m: ArrayView2<'_, f64>, factor: f64, mode: MaskMode) -> Result<Array2<f64>> {
    let k = check_square(&m)?;
    let mask = on_chain_mask(k, mode);
    let mut out = m.to_owned();
    out.zip_mut_with(&mask, |x, &on| {
        if on {
            *x *= factor;
        }
    });
    Ok(out)
}

fn scale_columns(w: ArrayView2<'_, f64>, k: usize, factor: f64, mode: MaskMode) -> Result<Array2<f64>> {
    if w.nrows() != k * k {
        return Err(Error::Shape(format!("expected {} rows for k = {k}, got {}", k * k, w.nrows())));
    }
    let mask = on_chain_mask(k, mode);
    let mut out = w.to_owned();
    for mut col in out.axis_iter_mut(Axis(1)) {
        for b in 0..k {
            for a in 0..k {
                if mask[(a, b)] {
                    col[a + k * b] *= factor;
                }
            }
        }
    }
    Ok(out)
}

/// Zeroes the chain positions of a k×k matrix.
pub fn off_chain_project(m: ArrayView2<'_, f64>, mode: MaskMode) -> Result<Array2<f64>> {
    scale_on_chain(m, 0.0, mode)
}

/// Zeroes the chain positions of every vectorized column of a k²×m matrix.
pub fn off_chain_project_columns(w: ArrayView2<'_, f64>, k: usize, mode: MaskMode) -> Result<Array2<f64>> {
    scale_columns(w, k, 0.0, mode)
}

fn check_xi(xi: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&xi) {
        return Err(Error::param("xi", format!("{xi} outside [0, 1]")));
    }
    Ok(())
}

/// Multiplies the chain positions of a k×k matrix by `xi`.
pub fn thin_on_chain(m: ArrayView2<'_, f64>, xi: f64, mode: MaskMode) -> Result<Array2<f64>> {
    check_xi(xi)?;
    scale_on_chain(m, xi, mode)
}

/// Multiplies the chain positions of every vectorized column by `xi`.
pub fn thin_on_chain_columns(w: ArrayView2<'_, f64>, k: usize, xi: f64, mode: MaskMode) -> Result<Array2<f64>> {
    check_xi(xi)?;
    scale_columns(w, k, xi, mode)
}

#[cfg(test)]
mod tests {
    use ndarray::array;
    use proptest::prelude::*;

    use super::*;
    use crate::graph::fixtures::*;

    fn k3_patch() -> Array2<f64> {
        extract_patch(&complete(3), &Homomorphism(vec![0, 1, 2]))
    }

    #[test]
    fn patch_examples() {
        assert_eq!(k3_patch(), array![[0., 1., 1.], [1., 0., 1.], [1., 1., 0.]]);
        let p = extract_patch(&path(4), &Homomorphism(vec![0, 1, 2]));
        assert_eq!(p, array![[0., 1., 0.], [1., 0., 1.], [0., 1., 0.]]);
    }

    #[test]
    fn chain_patch_has_unit_off_diagonals() {
        let g = crate::graph::generate(&crate::graph::ModelSpec::Er { n: 30, p: 0.3 }, 1).unwrap();
        let mut r = crate::rng::stream(1, 0);
        let x = crate::sampling::rejection_init(&g, 6, &mut r).unwrap();
        let p = extract_patch(&g, &x);
        for i in 0..5 {
            assert_eq!(p[(i, i + 1)], 1.0);
            assert_eq!(p[(i + 1, i)], 1.0);
        }
        assert!(p.iter().all(|&v| v == 0.0 || v == 1.0));
        assert_eq!(p, p.t());
    }

    #[test]
    fn patch_matrix_columns_are_vectorized_patches() {
        let g = bowtie();
        let xs = vec![Homomorphism(vec![1, 0, 3]), Homomorphism(vec![0, 2, 1])];
        let m = patch_matrix(&g, &xs);
        for (j, x) in xs.iter().enumerate() {
            assert_eq!(m.column(j), vectorize(extract_patch(&g, x).view()));
        }
    }

    #[test]
    fn vectorize_examples() {
        assert_eq!(vectorize(array![[1., 2.], [3., 4.]].view()), array![1., 3., 2., 4.]);
        assert_eq!(vectorize(array![[7.]].view()), array![7.]);
        assert!(matches!(reshape(array![1., 2., 3.].view(), 2, 2), Err(Error::Shape(_))));
    }

    #[test]
    fn mask_examples() {
        assert_eq!(on_chain_mask(2, MaskMode::Symmetric), array![[false, true], [true, false]]);
        let m3 = on_chain_mask(3, MaskMode::Symmetric);
        let on: Vec<_> = m3.indexed_iter().filter(|(_, &v)| v).map(|(i, _)| i).collect();
        assert_eq!(on, vec![(0, 1), (1, 0), (1, 2), (2, 1)]);
        assert_eq!(on_chain_mask(21, MaskMode::Symmetric).iter().filter(|&&v| v).count(), 40);
        assert_eq!(on_chain_mask(21, MaskMode::Literal).iter().filter(|&&v| v).count(), 20);
    }

    #[test]
    fn projection_and_thinning_examples() {
        let p = k3_patch();
        let proj = off_chain_project(p.view(), MaskMode::Symmetric).unwrap();
        assert_eq!(proj, array![[0., 0., 1.], [0., 0., 0.], [1., 0., 0.]]);
        assert_eq!(off_chain_project(proj.view(), MaskMode::Symmetric).unwrap(), proj);
        let z = Array2::<f64>::zeros((4, 4));
        assert_eq!(off_chain_project(z.view(), MaskMode::Symmetric).unwrap(), z);
        assert_eq!(thin_on_chain(p.view(), 1.0, MaskMode::Symmetric).unwrap(), p);
        assert_eq!(thin_on_chain(p.view(), 0.0, MaskMode::Symmetric).unwrap(), proj);
        let half = thin_on_chain(p.view(), 0.5, MaskMode::Symmetric).unwrap();
        assert_eq!(half, array![[0., 0.5, 1.], [0.5, 0., 0.5], [1., 0.5, 0.]]);
        assert!(thin_on_chain(p.view(), 1.5, MaskMode::Symmetric).is_err());
        let lit = off_chain_project(p.view(), MaskMode::Literal).unwrap();
        assert_eq!(lit, array![[0., 0., 1.], [1., 0., 0.], [1., 1., 0.]]);
        assert!(off_chain_project(Array2::<f64>::zeros((2, 3)).view(), MaskMode::Symmetric).is_err());
    }

    #[test]
    fn column_operations_match_matrix_operations() {
        let p = k3_patch();
        let w = vectorize(p.view()).insert_axis(Axis(1));
        let wc = off_chain_project_columns(w.view(), 3, MaskMode::Symmetric).unwrap();
        let back = reshape(wc.column(0), 3, 3).unwrap();
        assert_eq!(back, off_chain_project(p.view(), MaskMode::Symmetric).unwrap());
        let wt = thin_on_chain_columns(w.view(), 3, 0.25, MaskMode::Symmetric).unwrap();
        assert_eq!(
            reshape(wt.column(0), 3, 3).unwrap(),
            thin_on_chain(p.view(), 0.25, MaskMode::Symmetric).unwrap()
        );
        assert!(off_chain_project_columns(w.view(), 2, MaskMode::Symmetric).is_err());
    }

    proptest! {
        #[test]
        fn reshape_inverts_vectorize(rows in 1usize..6, cols in 1usize..6, seed in any::<u64>()) {
            let m = Array2::from_shape_fn((rows, cols), |(i, j)| ((seed >> ((i * 7 + j) % 60)) & 0xff) as f64 / 3.0);
            let v = vectorize(m.view());
            prop_assert_eq!(reshape(v.view(), rows, cols).unwrap(), m);
        }

        #[test]
        fn projection_ignores_thinning(k in 2usize..7, xi in 0.0f64..=1.0, vals in proptest::collection::vec(0.0f64..5.0, 49)) {
            let m = Array2::from_shape_fn((k, k), |(a, b)| vals[a * 7 + b]);
            for mode in [MaskMode::Symmetric, MaskMode::Literal] {
                let thinned = thin_on_chain(m.view(), xi, mode).unwrap();
                prop_assert_eq!(
                    off_chain_project(thinned.view(), mode).unwrap(),
                    off_chain_project(m.view(), mode).unwrap()
                );
            }
        }
    }
}

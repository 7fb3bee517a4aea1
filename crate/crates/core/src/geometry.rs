//! Gram matrices, face volumes and isometry recovery for finite vector families.
//!
//! A family `v_1, ..., v_k` in `R^d` spans parallelepipeds whose face volumes
//! are `V(B)^2 = det [<v_i, v_j>]_{i, j in B}`. Two families with equal face
//! volumes differ by an orthogonal map and a sign per vector; the signs come
//! from the `+-1` decision on the Gram matrices.

use std::collections::HashSet;

use nalgebra::{DMatrix, DVector, SymmetricEigen};

use crate::bifunction::BiFunction;
use crate::det::det_float;
use crate::error::{Error, Result};
use crate::rescaling::{decide_pm1_via_minors, Counterexample, Verdict};
use crate::scalar::{Scalar, Tolerance};

/// Residual bound for an accepted isometry witness.
pub const ISOMETRY_RESIDUAL_TOL: f64 = 1e-8;
/// Bound on `max |T^T T - I|` for an accepted witness.
pub const ORTHOGONALITY_TOL: f64 = 1e-10;
/// Eigenvalue clip for PSD factorization, relative to `max |K|`.
pub const PSD_CLIP: f64 = 1e-10;
/// Relative threshold below which a Gram-Schmidt remainder counts as dependent.
const RANK_TOL: f64 = 1e-8;

#[derive(Clone, Debug, PartialEq)]
pub struct VectorSet {
    dimension: usize,
    labels: Vec<String>,
    columns: Vec<Vec<f64>>,
}

impl VectorSet {
    pub fn new(dimension: usize, labels: Vec<String>, columns: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != columns.len() {
            return Err(Error::LabelCount { labels: labels.len(), size: columns.len() });
        }
        let mut seen = HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (i, c) in columns.iter().enumerate() {
            if c.len() != dimension {
                return Err(Error::Dimension { expected: dimension, got: c.len() });
            }
            if c.iter().any(|v| !v.is_finite()) {
                return Err(Error::NonFinite { row: i, col: 0 });
            }
        }
        Ok(VectorSet { dimension, labels, columns })
    }

    /// Labels `"1"`, ..., `"k"`.
    pub fn unlabeled(dimension: usize, columns: Vec<Vec<f64>>) -> Result<Self> {
        Self::new(dimension, crate::bifunction::default_labels(columns.len()), columns)
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn len(&self) -> usize {
        self.columns.len()
    }

    pub fn is_empty(&self) -> bool {
        self.columns.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn columns(&self) -> &[Vec<f64>] {
        &self.columns
    }

    pub fn column(&self, i: usize) -> &[f64] {
        &self.columns[i]
    }

    /// Columns as a `d x k` matrix, zero-padded to `rows >= d`.
    pub fn to_matrix(&self, rows: usize) -> DMatrix<f64> {
        let mut m = DMatrix::zeros(rows.max(self.dimension), self.len());
        for (j, c) in self.columns.iter().enumerate() {
            for (i, &v) in c.iter().enumerate() {
                m[(i, j)] = v;
            }
        }
        m
    }
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// `G(i, j) = <v_i, v_j>`.
pub fn gram(v: &VectorSet) -> BiFunction {
    let k = v.len();
    let entries = (0..k * k)
        .map(|t| Scalar::from_f64(dot(&v.columns[t / k], &v.columns[t % k])))
        .collect();
    BiFunction::from_entries(v.labels.clone(), k, entries).expect("labels validated by VectorSet")
}

fn real_symmetric(k: &BiFunction, tol: Tolerance) -> Result<DMatrix<f64>> {
    let n = k.size();
    let s = k.scale();
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            let c = k.get(i, j).to_complex();
            if c.im.abs() > tol.tau * s || !tol.approx_eq(k.get(i, j), k.get(j, i), s) {
                return Err(Error::NotRealSymmetric);
            }
            m[(i, j)] = c.re;
        }
    }
    Ok(m)
}

/// Columns `kappa(x)` with `<kappa(x), kappa(y)> = K(x, y)`, by symmetric
/// eigendecomposition. Eigenvalues at or below `PSD_CLIP * max |K|` are
/// dropped, so the dimension is the numerical rank.
pub fn factor_psd(k: &BiFunction, tol: Tolerance) -> Result<VectorSet> {
    let m = real_symmetric(k, tol)?;
    let n = k.size();
    let clip = PSD_CLIP * k.scale();
    let eig = SymmetricEigen::new(m);
    if let Some(&low) = eig.eigenvalues.iter().find(|&&l| l < -clip) {
        return Err(Error::NotPositiveSemidefinite(low));
    }
    let kept: Vec<usize> = (0..n).filter(|&j| eig.eigenvalues[j] > clip).collect();
    let columns = (0..n)
        .map(|x| kept.iter().map(|&j| eig.eigenvalues[j].sqrt() * eig.eigenvectors[(x, j)]).collect())
        .collect();
    VectorSet::new(kept.len(), k.labels().to_vec(), columns)
}

/// `V(B) = sqrt(det Gram(B))`, with `V(empty) = 0` and negative round-off clamped.
pub fn volume(v: &VectorSet, subset: &[usize]) -> Result<f64> {
    if let Some(&index) = subset.iter().find(|&&i| i >= v.len()) {
        return Err(Error::IndexOutOfRange { index, size: v.len() });
    }
    if subset.is_empty() {
        return Ok(0.0);
    }
    let k = subset.len();
    let g: Vec<num_complex::Complex64> = (0..k * k)
        .map(|t| num_complex::Complex64::new(dot(&v.columns[subset[t / k]], &v.columns[subset[t % k]]), 0.0))
        .collect();
    Ok(det_float(k, &g).re.max(0.0).sqrt())
}

/// `||u - u_B||`, the distance from `u` to the span of `basis`.
pub fn distance_to_span(u: &[f64], basis: &[&[f64]]) -> f64 {
    if basis.is_empty() {
        return norm(u);
    }
    let d = u.len();
    let b = DMatrix::from_fn(d, basis.len(), |i, j| basis[j][i]);
    let target = DVector::from_column_slice(u);
    let svd = b.clone().svd(true, true);
    let eps = RANK_TOL * svd.singular_values.max();
    match svd.solve(&target, eps) {
        Ok(x) => (target - b * x).norm(),
        Err(_) => norm(u),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct IsometryWitness {
    /// Orthogonal `d x d` map with `T w_i = s_i v_i`.
    pub t: DMatrix<f64>,
    pub signs: Vec<i8>,
    /// `max_i ||T w_i - s_i v_i|| / max(||v_i||, 1)`.
    pub residual: f64,
}

impl IsometryWitness {
    /// `max |T^T T - I|`.
    pub fn orthogonality_defect(&self) -> f64 {
        let d = self.t.nrows();
        (self.t.transpose() * &self.t - DMatrix::<f64>::identity(d, d)).amax()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum FaceCounterexample {
    /// The face on `subset` has different volumes in the two families.
    /// For the scaled test these are volumes of the normalized families.
    FaceVolumeMismatch { subset: Vec<usize>, volume_v: f64, volume_w: f64 },
    /// The sign reconstruction failed for a reason other than a minor.
    Signs(Counterexample),
}

#[derive(Clone, Debug, PartialEq)]
pub enum IsometryVerdict {
    Accepted(IsometryWitness),
    Rejected(FaceCounterexample),
}

#[derive(Clone, Debug, PartialEq)]
pub enum ScaledVerdict {
    Accepted { g: Vec<f64>, witness: IsometryWitness },
    Rejected(FaceCounterexample),
}

fn face_rejection(cx: Counterexample) -> FaceCounterexample {
    match cx {
        Counterexample::DifferingMinor { subset, in_l, in_m } => FaceCounterexample::FaceVolumeMismatch {
            subset,
            volume_v: in_l.re_f64().max(0.0).sqrt(),
            volume_w: in_m.re_f64().max(0.0).sqrt(),
        },
        other => FaceCounterexample::Signs(other),
    }
}

/// Signs `s` with `Gram(W) = s (x) s Gram(V)`, or the reason there are none.
fn gram_signs(gv: &BiFunction, gw: &BiFunction, max_card: Option<usize>, tol: Tolerance) -> Result<std::result::Result<Vec<i8>, FaceCounterexample>> {
    let gw = gw.with_labels(gv.labels().to_vec())?;
    let verdict = match max_card {
        None => decide_pm1_via_minors(gv, &gw, true, tol)?,
        Some(k) => {
            let cmp = crate::minors::compare_minors(gv, &gw, k.min(gv.size()), tol)?;
            match cmp.first_diff {
                Some(d) => Verdict::Rejected(Counterexample::DifferingMinor { subset: d.subset, in_l: d.in_l, in_m: d.in_m }),
                None => crate::rescaling::decide_rescaling(gv, &gw, crate::rescaling::RescalingKind::Pm1, tol)?,
            }
        }
    };
    Ok(match verdict {
        Verdict::Accepted(c) => Ok(c.f.iter().map(|s| if s.real_sign() < 0 { -1 } else { 1 }).collect()),
        Verdict::Rejected(cx) => Err(face_rejection(cx)),
    })
}

/// Indices of a maximal independent prefix-greedy subfamily.
fn independent_columns(a: &DMatrix<f64>) -> Vec<usize> {
    let scale = (0..a.ncols()).map(|j| a.column(j).norm()).fold(1.0, f64::max);
    let mut basis: Vec<DVector<f64>> = Vec::new();
    let mut picked = Vec::new();
    for j in 0..a.ncols() {
        let mut r = a.column(j).clone_owned();
        for _ in 0..2 {
            for q in &basis {
                let c = q.dot(&r);
                r -= q * c;
            }
        }
        let nr = r.norm();
        if nr > RANK_TOL * scale {
            basis.push(r / nr);
            picked.push(j);
        }
    }
    picked
}

/// Full orthonormal basis of `R^d` whose first `r` columns span the given
/// independent columns, with a positive triangular factor on them.
fn completed_basis(cols: &DMatrix<f64>) -> DMatrix<f64> {
    let (d, r) = cols.shape();
    let mut aug = DMatrix::zeros(d, r + d);
    aug.view_mut((0, 0), (d, r)).copy_from(cols);
    aug.view_mut((0, r), (d, d)).copy_from(&DMatrix::<f64>::identity(d, d));
    let qr = aug.qr();
    let mut q = qr.q();
    let rr = qr.r();
    for j in 0..r {
        if rr[(j, j)] < 0.0 {
            let flipped = -q.column(j);
            q.set_column(j, &flipped);
        }
    }
    q
}

fn align(v: &VectorSet, w: &VectorSet, signs: &[i8]) -> Result<IsometryWitness> {
    let d = v.dimension().max(w.dimension());
    let a = v.to_matrix(d);
    let mut b = w.to_matrix(d);
    for (j, &s) in signs.iter().enumerate() {
        if s < 0 {
            let c = -b.column(j);
            b.set_column(j, &c);
        }
    }
    let ja = independent_columns(&a);
    let jb = independent_columns(&b);
    if ja.len() != jb.len() {
        return Err(Error::RankMismatch { left: ja.len(), right: jb.len() });
    }
    let pick = |m: &DMatrix<f64>| DMatrix::from_fn(d, ja.len(), |i, t| m[(i, ja[t])]);
    let t = if d == 0 {
        DMatrix::zeros(0, 0)
    } else {
        completed_basis(&pick(&a)) * completed_basis(&pick(&b)).transpose()
    };
    let residual = (0..a.ncols())
        .map(|j| (&t * b.column(j) - a.column(j)).norm() / a.column(j).norm().max(1.0))
        .fold(0.0, f64::max);
    let witness = IsometryWitness { t, signs: signs.to_vec(), residual };
    if residual > ISOMETRY_RESIDUAL_TOL || witness.orthogonality_defect() > ORTHOGONALITY_TOL {
        return Err(Error::AlignmentFailed(residual));
    }
    Ok(witness)
}

/// Finds an orthogonal `T` and signs `s` with `T w_i = s_i v_i`, or the face
/// whose volumes differ. `max_card` caps the compared face size; by default
/// the radius bound of the Gram pattern is used.
pub fn recover_isometry(v: &VectorSet, w: &VectorSet, max_card: Option<usize>, tol: Tolerance) -> Result<IsometryVerdict> {
    if v.len() != w.len() {
        return Err(Error::VectorCount { left: v.len(), right: w.len() });
    }
    match gram_signs(&gram(v), &gram(w), max_card, tol)? {
        Err(cx) => Ok(IsometryVerdict::Rejected(cx)),
        Ok(signs) => Ok(IsometryVerdict::Accepted(align(v, w, &signs)?)),
    }
}

fn normalized(v: &VectorSet) -> Result<VectorSet> {
    let columns = v
        .columns
        .iter()
        .enumerate()
        .map(|(i, c)| {
            let n = norm(c);
            if n == 0.0 {
                Err(Error::ZeroVector(i))
            } else {
                Ok(c.iter().map(|x| x / n).collect())
            }
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    VectorSet::new(v.dimension, v.labels.clone(), columns)
}

/// Tests whether `T w_x = g(x) v_x` for an orthogonal `T` and nonzero real `g`,
/// comparing face volumes of the normalized families.
pub fn scaled_isometry_test(v: &VectorSet, w: &VectorSet, tol: Tolerance) -> Result<ScaledVerdict> {
    if v.len() != w.len() {
        return Err(Error::VectorCount { left: v.len(), right: w.len() });
    }
    let (nv, nw) = (normalized(v)?, normalized(w)?);
    let signs = match gram_signs(&gram(&nv), &gram(&nw), None, tol)? {
        Err(cx) => return Ok(ScaledVerdict::Rejected(cx)),
        Ok(s) => s,
    };
    let g: Vec<f64> = (0..v.len())
        .map(|i| f64::from(signs[i]) * norm(w.column(i)) / norm(v.column(i)))
        .collect();
    // w_i ||v_i|| / ||w_i|| has the length of v_i; align it with the signs.
    let columns = (0..w.len())
        .map(|i| {
            let r = norm(v.column(i)) / norm(w.column(i));
            w.column(i).iter().map(|x| x * r).collect()
        })
        .collect();
    let rescaled = VectorSet::new(w.dimension, w.labels.clone(), columns)?;
    let witness = align(v, &rescaled, &signs)?;
    Ok(ScaledVerdict::Accepted { g, witness })
}

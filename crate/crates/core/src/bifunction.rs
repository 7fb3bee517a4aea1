//! Labeled square matrices `L: X x X -> C` on a finite ordered point set.

use std::collections::HashSet;

use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

/// A bi-function on `n` labeled points, stored row-major.
///
/// All entries share one arithmetic mode: if any entry is float on
/// construction, every entry is converted to float.
#[derive(Clone, Debug, PartialEq)]
pub struct BiFunction {
    labels: Vec<String>,
    n: usize,
    entries: Vec<Scalar>,
    exact: bool,
    scale: f64,
    flags: Flags,
}

/// Structural flags, computed with a given tolerance.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Flags {
    pub symmetric: bool,
    pub hermitean: bool,
    /// No vanishing diagonal entry.
    pub non_degenerate: bool,
}

/// The diagonal function together with freshly computed flags.
#[derive(Clone, Debug, PartialEq)]
pub struct Diagnosis {
    pub diagonal: Vec<Scalar>,
    pub flags: Flags,
}

pub fn default_labels(n: usize) -> Vec<String> {
    (1..=n).map(|i| i.to_string()).collect()
}

impl BiFunction {
    pub fn new(labels: Vec<String>, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let n = rows.len();
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(Error::NotSquare { row, len: r.len(), expected: n });
            }
        }
        Self::from_entries(labels, n, rows.into_iter().flatten().collect())
    }

    /// Labels `"1"`, ..., `"n"`.
    pub fn unlabeled(rows: Vec<Vec<Scalar>>) -> Result<Self> {
        Self::new(default_labels(rows.len()), rows)
    }

    pub fn from_entries(labels: Vec<String>, n: usize, mut entries: Vec<Scalar>) -> Result<Self> {
        if labels.len() != n {
            return Err(Error::LabelCount { labels: labels.len(), size: n });
        }
        if entries.len() != n * n {
            return Err(Error::NotSquare { row: 0, len: entries.len(), expected: n * n });
        }
        let mut seen = HashSet::with_capacity(n);
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::DuplicateLabel(l.clone()));
            }
        }
        for (k, e) in entries.iter().enumerate() {
            if let Scalar::Float(c) = e {
                if !c.re.is_finite() || !c.im.is_finite() {
                    return Err(Error::NonFinite { row: k / n, col: k % n });
                }
            }
        }
        let exact = entries.iter().all(Scalar::is_exact);
        if !exact {
            for e in entries.iter_mut() {
                if e.is_exact() {
                    *e = e.to_float();
                }
            }
        }
        let mut b = BiFunction {
            labels,
            n,
            entries,
            exact,
            scale: 0.0,
            flags: Flags { symmetric: false, hermitean: false, non_degenerate: false },
        };
        b.scale = b.entries.iter().map(Scalar::abs).fold(0.0, f64::max);
        b.flags = b.diagnose(Tolerance::default()).flags;
        Ok(b)
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    pub fn get(&self, i: usize, j: usize) -> &Scalar {
        &self.entries[i * self.n + j]
    }

    pub fn entries(&self) -> &[Scalar] {
        &self.entries
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.entries[i * self.n..(i + 1) * self.n]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[Scalar]> {
        self.entries.chunks(self.n.max(1)).take(self.n)
    }

    /// `max |L(x, y)|`, the scale for tolerance tests.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Flags computed with the default tolerance at construction.
    pub fn flags(&self) -> Flags {
        self.flags
    }

    pub fn is_symmetric(&self) -> bool {
        self.flags.symmetric
    }

    pub fn is_hermitean(&self) -> bool {
        self.flags.hermitean
    }

    pub fn is_non_degenerate(&self) -> bool {
        self.flags.non_degenerate
    }

    /// Whether `L(i, j)` vanishes under `tol` at the scale of this matrix.
    pub fn is_zero_at(&self, i: usize, j: usize, tol: Tolerance) -> bool {
        tol.is_zero(self.get(i, j), self.scale())
    }

    /// The diagonal function `x -> L(x, x)`.
    pub fn diagonal(&self) -> Vec<Scalar> {
        (0..self.n).map(|i| self.get(i, i).clone()).collect()
    }

    pub fn diagnose(&self, tol: Tolerance) -> Diagnosis {
        let s = self.scale();
        let n = self.n;
        let mut symmetric = true;
        let mut hermitean = true;
        for i in 0..n {
            for j in i..n {
                let a = self.get(i, j);
                let b = self.get(j, i);
                if symmetric && !tol.approx_eq(a, b, s) {
                    symmetric = false;
                }
                if hermitean && !tol.approx_eq(a, &b.conj(), s) {
                    hermitean = false;
                }
            }
        }
        let non_degenerate = (0..n).all(|i| !tol.is_zero(self.get(i, i), s));
        Diagnosis {
            diagonal: self.diagonal(),
            flags: Flags { symmetric, hermitean, non_degenerate },
        }
    }

    fn map_entries(&self, f: impl Fn(usize, usize, &Scalar) -> Scalar) -> BiFunction {
        let n = self.n;
        let entries = (0..n * n).map(|k| f(k / n, k % n, &self.entries[k])).collect();
        BiFunction::from_entries(self.labels.clone(), n, entries)
            .expect("entry map preserves shape and labels")
    }

    pub fn transpose(&self) -> BiFunction {
        self.map_entries(|i, j, _| self.get(j, i).clone())
    }

    pub fn conj(&self) -> BiFunction {
        self.map_entries(|_, _, e| e.conj())
    }

    pub fn adjoint(&self) -> BiFunction {
        self.map_entries(|i, j, _| self.get(j, i).conj())
    }

    pub fn to_float(&self) -> BiFunction {
        self.map_entries(|_, _, e| e.to_float())
    }

    pub fn scale_by(&self, c: &Scalar) -> BiFunction {
        self.map_entries(|_, _, e| c * e)
    }

    pub fn with_labels(&self, labels: Vec<String>) -> Result<BiFunction> {
        BiFunction::from_entries(labels, self.n, self.entries.clone())
    }

    /// `L + diag(h)`.
    pub fn add_diag(&self, h: &[Scalar]) -> Result<BiFunction> {
        if h.len() != self.n {
            return Err(Error::ScaleLength { expected: self.n, got: h.len() });
        }
        Ok(self.map_entries(|i, j, e| if i == j { e + &h[i] } else { e.clone() }))
    }

    /// The restriction `L|_S`, keeping the order of `subset`.
    pub fn restrict(&self, subset: &[usize]) -> Result<BiFunction> {
        for &i in subset {
            if i >= self.n {
                return Err(Error::IndexOutOfRange { index: i, size: self.n });
            }
        }
        let labels = subset.iter().map(|&i| self.labels[i].clone()).collect();
        let entries = subset
            .iter()
            .flat_map(|&i| subset.iter().map(move |&j| self.get(i, j).clone()))
            .collect();
        BiFunction::from_entries(labels, subset.len(), entries)
    }

    /// `M(x, y) = f(x) g(y) L(x, y)`. Vanishing factors are rejected.
    pub fn apply_rescaling(&self, f: &[Scalar], g: &[Scalar]) -> Result<BiFunction> {
        for v in [f, g] {
            if v.len() != self.n {
                return Err(Error::ScaleLength { expected: self.n, got: v.len() });
            }
            let s = v.iter().map(Scalar::abs).fold(0.0, f64::max);
            if let Some(index) = v.iter().position(|z| Tolerance::default().is_zero(z, s) || z.abs() == 0.0) {
                return Err(Error::VanishingScale { index });
            }
        }
        Ok(self.map_entries(|i, j, e| &(&f[i] * &g[j]) * e))
    }

    /// Checks that `other` is defined on the same labeled points.
    pub fn check_compatible(&self, other: &BiFunction) -> Result<()> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { left: self.n, right: other.n });
        }
        for (index, (a, b)) in self.labels.iter().zip(&other.labels).enumerate() {
            if a != b {
                return Err(Error::LabelMismatch { index, left: a.clone(), right: b.clone() });
            }
        }
        Ok(())
    }
}

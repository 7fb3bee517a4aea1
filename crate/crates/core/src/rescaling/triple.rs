//! Necessary conditions on triples of points.

use rayon::prelude::*;

use crate::bifunction::BiFunction;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum TripleVariant {
    /// `M(x,y) M(y,z) L(x,z) L(y,y) = L(x,y) L(y,z) M(x,z) M(y,y)`.
    Star,
    /// As `Star` with the middle factors read at `(z, y)`.
    StarPrime,
    /// As `StarPrime` with the middle factors conjugated.
    StarDoublePrime,
    /// `L(x,y) L(y,z) L(z,x) = M(x,y) M(y,z) M(z,x)` and `M(x,x)/L(x,x) > 0`.
    Nv,
}

impl TripleVariant {
    pub fn name(self) -> &'static str {
        match self {
            TripleVariant::Star => "star",
            TripleVariant::StarPrime => "starPrime",
            TripleVariant::StarDoublePrime => "starDoublePrime",
            TripleVariant::Nv => "nv",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TripleResult {
    pub holds: bool,
    pub witness: Option<(usize, usize, usize)>,
}

fn sides(l: &BiFunction, m: &BiFunction, v: TripleVariant, x: usize, y: usize, z: usize) -> (Scalar, Scalar) {
    let prod = |a: &Scalar, b: &Scalar, c: &Scalar, d: &Scalar| &(&(a * b) * c) * d;
    match v {
        TripleVariant::Star => (
            prod(m.get(x, y), m.get(y, z), l.get(x, z), l.get(y, y)),
            prod(l.get(x, y), l.get(y, z), m.get(x, z), m.get(y, y)),
        ),
        TripleVariant::StarPrime => (
            prod(m.get(x, y), m.get(z, y), l.get(x, z), l.get(y, y)),
            prod(l.get(x, y), l.get(z, y), m.get(x, z), m.get(y, y)),
        ),
        TripleVariant::StarDoublePrime => (
            prod(m.get(x, y), &m.get(z, y).conj(), l.get(x, z), l.get(y, y)),
            prod(l.get(x, y), &l.get(z, y).conj(), m.get(x, z), m.get(y, y)),
        ),
        TripleVariant::Nv => (
            &(l.get(x, y) * l.get(y, z)) * l.get(z, x),
            &(m.get(x, y) * m.get(y, z)) * m.get(z, x),
        ),
    }
}

fn positive_ratio(l: &BiFunction, m: &BiFunction, x: usize, tol: Tolerance) -> bool {
    let q = m.get(x, x) / l.get(x, x);
    match q.as_exact() {
        Some(e) => num_traits::Zero::is_zero(&e.im) && q.real_sign() > 0,
        None => {
            let c = q.to_complex();
            c.re > 0.0 && c.im.abs() <= tol.tau * c.norm()
        }
    }
}

/// Scans all ordered triples and reports the first violation in
/// lexicographic order.
pub fn triple_condition(l: &BiFunction, m: &BiFunction, variant: TripleVariant, tol: Tolerance) -> Result<TripleResult> {
    l.check_compatible(m)?;
    let n = l.size();
    if variant == TripleVariant::Nv {
        for b in [l, m] {
            if let Some(x) = (0..n).find(|&x| b.is_zero_at(x, x, tol)) {
                return Err(Error::Degenerate(x));
            }
            if !b.diagnose(tol).flags.symmetric {
                return Err(Error::NotSymmetric);
            }
        }
        if let Some(x) = (0..n).find(|&x| !positive_ratio(l, m, x, tol)) {
            return Ok(TripleResult { holds: false, witness: Some((x, x, x)) });
        }
    }
    let (sl, sm) = (l.scale(), m.scale());
    let scale = match variant {
        TripleVariant::Nv => sl.max(sm).powi(3),
        _ => (sl * sm).powi(2),
    };
    let witness = (0..n).into_par_iter().find_map_first(|x| {
        for y in 0..n {
            for z in 0..n {
                let (a, b) = sides(l, m, variant, x, y, z);
                let s = scale.max(a.abs()).max(b.abs());
                if !tol.approx_eq(&a, &b, s) {
                    return Some((x, y, z));
                }
            }
        }
        None
    });
    Ok(TripleResult { holds: witness.is_none(), witness })
}

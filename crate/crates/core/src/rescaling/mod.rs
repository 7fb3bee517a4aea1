//! Rescaling decisions with certificates and counterexamples.
//!
//! `decide_rescaling` answers whether `M = f (x) g L` for one of five kinds
//! of `(f, g)`:
//!
//! | kind         | constraint           |
//! |--------------|----------------------|
//! | `General`    | `f`, `g` independent |
//! | `Symmetric`  | `g = f`              |
//! | `Hermitean`  | `g = conj(f)`        |
//! | `Reciprocal` | `g = 1 / f`          |
//! | `Pm1`        | `g = f` with `f(x) in {-1, 1}` |
//!
//! Acceptance comes with `(f, g)` normalized at one anchor per component.
//! Rejection comes with a [`Counterexample`] that can be re-verified with
//! [`Counterexample::recheck`].

mod engine;
mod triple;
mod via_minors;

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::bifunction::BiFunction;
use crate::error::Result;
use crate::scalar::{Scalar, Tolerance};

use engine::Constraints;
pub use triple::{triple_condition, TripleResult, TripleVariant};
pub use via_minors::{decide_pm1_via_minors, radius_bound};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum RescalingKind {
    General,
    Symmetric,
    Hermitean,
    Reciprocal,
    Pm1,
}

impl RescalingKind {
    pub const ALL: [RescalingKind; 5] = [
        RescalingKind::General,
        RescalingKind::Symmetric,
        RescalingKind::Hermitean,
        RescalingKind::Reciprocal,
        RescalingKind::Pm1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            RescalingKind::General => "general",
            RescalingKind::Symmetric => "symmetric",
            RescalingKind::Hermitean => "hermitean",
            RescalingKind::Reciprocal => "reciprocal",
            RescalingKind::Pm1 => "pm1",
        }
    }

    /// `g` as a function of `f` for the kinds that tie them.
    pub fn partner(self, f: &Scalar) -> Option<Scalar> {
        match self {
            RescalingKind::General => None,
            RescalingKind::Symmetric | RescalingKind::Pm1 => Some(f.clone()),
            RescalingKind::Hermitean => Some(f.conj()),
            RescalingKind::Reciprocal => f.recip(),
        }
    }
}

impl fmt::Display for RescalingKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for RescalingKind {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        RescalingKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| format!("unknown rescaling kind `{s}`"))
    }
}

/// The smallest of the listed multiplicative groups containing every value
/// of `f` and `g`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum GroupTag {
    PlusMinusOne,
    PositiveReal,
    UnitCircle,
    RealNonzero,
}

impl GroupTag {
    pub fn name(self) -> &'static str {
        match self {
            GroupTag::PlusMinusOne => "plusMinusOne",
            GroupTag::PositiveReal => "positiveReal",
            GroupTag::UnitCircle => "unitCircle",
            GroupTag::RealNonzero => "realNonzero",
        }
    }

    pub fn contains(self, z: &Scalar, tol: Tolerance) -> bool {
        let c = z.to_complex();
        let m = c.norm();
        let (real, unit) = match z {
            Scalar::Exact(e) => (e.im.is_zero(), (&e.re * &e.re + &e.im * &e.im).is_one()),
            Scalar::Float(_) => (c.im.abs() <= tol.tau * m, (m - 1.0).abs() <= tol.tau),
        };
        match self {
            GroupTag::PlusMinusOne => real && unit,
            GroupTag::PositiveReal => real && c.re > 0.0,
            GroupTag::UnitCircle => unit,
            GroupTag::RealNonzero => real && m > 0.0,
        }
    }

    /// Checks the groups from smallest to largest.
    pub fn classify<'a>(values: impl Iterator<Item = &'a Scalar> + Clone, tol: Tolerance) -> Option<GroupTag> {
        [GroupTag::PlusMinusOne, GroupTag::PositiveReal, GroupTag::UnitCircle, GroupTag::RealNonzero]
            .into_iter()
            .find(|g| values.clone().all(|z| g.contains(z, tol)))
    }
}

/// A node of a cycle witness: rows and columns for the general kind, points
/// otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum CycleNode {
    Row(usize),
    Column(usize),
    Point(usize),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Anchor {
    pub component: usize,
    pub node: CycleNode,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RescalingCertificate {
    pub kind: RescalingKind,
    pub f: Vec<Scalar>,
    pub g: Vec<Scalar>,
    pub group: Option<GroupTag>,
    /// `max |M - f (x) g L| / max |M|`.
    pub residual: f64,
    pub anchors: Vec<Anchor>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagonalReason {
    /// `L(x, x) = 0` for a kind that needs a nonvanishing diagonal.
    Degenerate,
    /// `M(x, x) / L(x, x)` is not a positive real (hermitean).
    NonPositiveRatio,
    /// `M(x, x) != L(x, x)` (pm1).
    RatioNotOne,
}

impl DiagonalReason {
    pub fn name(self) -> &'static str {
        match self {
            DiagonalReason::Degenerate => "degenerate",
            DiagonalReason::NonPositiveRatio => "nonPositiveRatio",
            DiagonalReason::RatioNotOne => "ratioNotOne",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Counterexample {
    /// Exactly one of `L(row, col)` and `M(row, col)` vanishes.
    ZeroPatternMismatch { row: usize, col: usize },
    /// A closed walk `vertices[0] -> ... -> vertices[k] = vertices[0]` along
    /// `entries`, whose accumulated ratio `f_end / f_start` differs from 1.
    InconsistentCycle { vertices: Vec<CycleNode>, entries: Vec<(usize, usize)>, ratio: Scalar },
    DifferingMinor { subset: Vec<usize>, in_l: Scalar, in_m: Scalar },
    DiagonalObstruction { index: usize, reason: DiagonalReason },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Verdict {
    Accepted(RescalingCertificate),
    Rejected(Counterexample),
}

impl Verdict {
    pub fn is_accepted(&self) -> bool {
        matches!(self, Verdict::Accepted(_))
    }

    pub fn certificate(&self) -> Option<&RescalingCertificate> {
        match self {
            Verdict::Accepted(c) => Some(c),
            Verdict::Rejected(_) => None,
        }
    }

    pub fn counterexample(&self) -> Option<&Counterexample> {
        match self {
            Verdict::Accepted(_) => None,
            Verdict::Rejected(c) => Some(c),
        }
    }
}

fn zero_pattern_mismatch(l: &BiFunction, m: &BiFunction, tol: Tolerance) -> Option<(usize, usize)> {
    let n = l.size();
    (0..n * n)
        .map(|k| (k / n, k % n))
        .find(|&(x, y)| l.is_zero_at(x, y, tol) != m.is_zero_at(x, y, tol))
}

fn diagonal_reason_at(l: &BiFunction, m: &BiFunction, x: usize, kind: RescalingKind, tol: Tolerance) -> Option<DiagonalReason> {
    let (lx, mx) = (l.get(x, x), m.get(x, x));
    match kind {
        RescalingKind::General => None,
        // f(x)^2 = 1 forces M(x, x) = L(x, x); no nonvanishing diagonal needed.
        RescalingKind::Pm1 => (!tol.approx_eq(lx, mx, m.scale())).then_some(DiagonalReason::RatioNotOne),
        _ if l.is_zero_at(x, x, tol) => Some(DiagonalReason::Degenerate),
        RescalingKind::Hermitean => {
            let q = mx / lx;
            let positive = match q.as_exact() {
                Some(e) => e.im.is_zero() && q.real_sign() > 0,
                None => {
                    let r = q.to_complex();
                    r.re > 0.0 && r.im.abs() <= tol.tau * r.norm()
                }
            };
            (!positive).then_some(DiagonalReason::NonPositiveRatio)
        }
        _ => None,
    }
}

fn diagonal_obstruction(l: &BiFunction, m: &BiFunction, kind: RescalingKind, tol: Tolerance) -> Option<(usize, DiagonalReason)> {
    (0..l.size()).find_map(|x| diagonal_reason_at(l, m, x, kind, tol).map(|r| (x, r)))
}

/// `max |M - f (x) g L| / max |M|`, exactly 0 when the identity holds exactly.
pub fn residual(l: &BiFunction, m: &BiFunction, f: &[Scalar], g: &[Scalar]) -> f64 {
    let n = l.size();
    let scale = match m.scale() {
        s if s > 0.0 => s,
        _ => 1.0,
    };
    let mut worst = 0.0f64;
    for x in 0..n {
        for y in 0..n {
            let d = m.get(x, y) - &(&(&f[x] * &g[y]) * l.get(x, y));
            if !d.is_exact_zero() {
                worst = worst.max(d.abs());
            }
        }
    }
    worst / scale
}

fn worst_entry(l: &BiFunction, m: &BiFunction, f: &[Scalar], g: &[Scalar]) -> (usize, usize) {
    let n = l.size();
    let mut best = (0, 0);
    let mut worst = -1.0;
    for x in 0..n {
        for y in 0..n {
            let d = (m.get(x, y) - &(&(&f[x] * &g[y]) * l.get(x, y))).abs();
            if d > worst {
                worst = d;
                best = (x, y);
            }
        }
    }
    best
}

/// Decides whether `M` is a rescaling of `L` of the given kind.
///
/// Errors only on incompatible inputs (different sizes or labels).
pub fn decide_rescaling(l: &BiFunction, m: &BiFunction, kind: RescalingKind, tol: Tolerance) -> Result<Verdict> {
    l.check_compatible(m)?;
    if let Some((row, col)) = zero_pattern_mismatch(l, m, tol) {
        return Ok(Verdict::Rejected(Counterexample::ZeroPatternMismatch { row, col }));
    }
    if let Some((index, reason)) = diagonal_obstruction(l, m, kind, tol) {
        return Ok(Verdict::Rejected(Counterexample::DiagonalObstruction { index, reason }));
    }
    let c = Constraints::new(l, m, kind, tol);
    let sol = match c.solve() {
        Ok(sol) => sol,
        Err(fail) => {
            return Ok(Verdict::Rejected(Counterexample::InconsistentCycle {
                vertices: fail.nodes.iter().map(|&v| c.node(v)).collect(),
                entries: fail.entries,
                ratio: fail.ratio,
            }))
        }
    };
    let n = l.size();
    let (f, g): (Vec<Scalar>, Vec<Scalar>) = match kind {
        RescalingKind::General => (sol.potentials[..n].to_vec(), sol.potentials[n..].to_vec()),
        RescalingKind::Pm1 => {
            let f: Vec<Scalar> = sol
                .potentials
                .iter()
                .map(|p| Scalar::from_i64(if p.real_sign() < 0 { -1 } else { 1 }))
                .collect();
            (f.clone(), f)
        }
        _ => {
            let f = sol.potentials.clone();
            let g = f.iter().map(|v| kind.partner(v).expect("potentials never vanish")).collect();
            (f, g)
        }
    };
    let res = residual(l, m, &f, &g);
    if res > tol.tau {
        // Only entries inside the zero tolerance are unchecked by the engine;
        // a large residual there means the patterns disagree after scaling.
        let (row, col) = worst_entry(l, m, &f, &g);
        return Ok(Verdict::Rejected(Counterexample::ZeroPatternMismatch { row, col }));
    }
    let group = GroupTag::classify(f.iter().chain(g.iter()), tol);
    let anchors = sol
        .anchors
        .iter()
        .map(|&(component, v)| Anchor { component, node: c.node(v) })
        .collect();
    Ok(Verdict::Accepted(RescalingCertificate { kind, f, g, group, residual: res, anchors }))
}

impl RescalingCertificate {
    /// Recomputes the residual against the given pair.
    pub fn verify(&self, l: &BiFunction, m: &BiFunction, tol: Tolerance) -> bool {
        self.f.len() == l.size()
            && self.g.len() == l.size()
            && residual(l, m, &self.f, &self.g) <= tol.tau
    }
}

impl Counterexample {
    /// Independently re-verifies the witness against `(L, M)`.
    pub fn recheck(&self, l: &BiFunction, m: &BiFunction, kind: RescalingKind, tol: Tolerance) -> bool {
        let n = l.size();
        match self {
            Counterexample::ZeroPatternMismatch { row, col } => {
                *row < n && *col < n && l.is_zero_at(*row, *col, tol) != m.is_zero_at(*row, *col, tol)
            }
            Counterexample::DiagonalObstruction { index, reason } => {
                *index < n && diagonal_reason_at(l, m, *index, kind, tol) == Some(*reason)
            }
            Counterexample::DifferingMinor { subset, .. } => {
                let s = l.scale().max(m.scale());
                match (crate::minors::principal_minor(l, subset), crate::minors::principal_minor(m, subset)) {
                    (Ok(a), Ok(b)) => !crate::minors::minors_agree(&a, &b, subset.len(), s, tol),
                    _ => false,
                }
            }
            Counterexample::InconsistentCycle { vertices, entries, .. } => {
                let c = Constraints::new(l, m, kind, tol);
                let Some(nodes) = vertices.iter().map(|&v| c.node_index(v)).collect::<Option<Vec<_>>>() else {
                    return false;
                };
                if entries.iter().any(|&(x, y)| x >= n || y >= n || (l.is_zero_at(x, y, tol) && !(kind == RescalingKind::Pm1 && x == y))) {
                    return false;
                }
                match c.walk_ratio(&nodes, entries) {
                    Some(r) => !tol.approx_eq(&r, &Scalar::one(), 1.0),
                    None => false,
                }
            }
        }
    }
}

#[cfg(test)]
mod tests;

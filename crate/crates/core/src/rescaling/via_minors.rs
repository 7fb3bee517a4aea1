//! The `+-1` decision through principal minors.

use crate::bifunction::BiFunction;
use crate::error::{Error, Result};
use crate::graph::graph_view;
use crate::minors::compare_minors;
use crate::scalar::Tolerance;

use super::{decide_rescaling, Counterexample, RescalingKind, Verdict};

/// Largest subset size that must be compared: `min(n, 2l + 1)` where `l` is
/// the largest component radius of `X_L`, at least 1.
///
/// Cycles through a component center have length at most `2l + 1`, and equal
/// minors up to that size make every such cycle product equal to 1.
pub fn radius_bound(l: &BiFunction, tol: Tolerance) -> usize {
    let radius = graph_view(l, tol).max_radius().max(1);
    l.size().min(2 * radius + 1)
}

/// Compares minors (up to the radius bound when `use_radius_bound`, otherwise
/// all of them) and, on equality, reconstructs the sign certificate.
pub fn decide_pm1_via_minors(l: &BiFunction, m: &BiFunction, use_radius_bound: bool, tol: Tolerance) -> Result<Verdict> {
    l.check_compatible(m)?;
    if !l.diagnose(tol).flags.symmetric || !m.diagnose(tol).flags.symmetric {
        return Err(Error::NotSymmetric);
    }
    let max_card = if use_radius_bound { radius_bound(l, tol) } else { l.size() };
    let cmp = compare_minors(l, m, max_card, tol)?;
    if let Some(d) = cmp.first_diff {
        return Ok(Verdict::Rejected(Counterexample::DifferingMinor {
            subset: d.subset,
            in_l: d.in_l,
            in_m: d.in_m,
        }));
    }
    decide_rescaling(l, m, RescalingKind::Pm1, tol)
}

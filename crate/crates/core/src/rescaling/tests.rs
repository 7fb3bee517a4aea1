use proptest::prelude::*;

use super::*;
use crate::generators::{self, Sign};
use crate::minors::compare_minors;

fn ints(rows: &[&[i64]]) -> BiFunction {
    BiFunction::unlabeled(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect()).collect()).unwrap()
}

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn pm1_recovers_signs() {
    let l = ints(&[&[1, 2], &[2, 1]]);
    let m = ints(&[&[1, -2], &[-2, 1]]);
    let v = decide_rescaling(&l, &m, RescalingKind::Pm1, tol()).unwrap();
    let c = v.certificate().unwrap();
    assert_eq!(c.f, vec![Scalar::one(), Scalar::from_i64(-1)]);
    assert_eq!(c.group, Some(GroupTag::PlusMinusOne));
    assert_eq!(c.residual, 0.0);
    assert_eq!(c.anchors, vec![Anchor { component: 0, node: CycleNode::Point(0) }]);
}

#[test]
fn pm1_without_diagonal() {
    let l = ints(&[&[0, 1], &[1, 0]]);
    let m = ints(&[&[0, -1], &[-1, 0]]);
    assert!(decide_rescaling(&l, &m, RescalingKind::Pm1, tol()).unwrap().is_accepted());
    // An off-diagonal ratio of 2 cannot come from signs.
    let m2 = ints(&[&[0, 2], &[2, 0]]);
    let v = decide_rescaling(&l, &m2, RescalingKind::Pm1, tol()).unwrap();
    let cx = v.counterexample().unwrap();
    assert!(matches!(cx, Counterexample::InconsistentCycle { .. }));
    assert!(cx.recheck(&l, &m2, RescalingKind::Pm1, tol()));
    // The same pair is a symmetric rescaling with f = sqrt(2).
    assert!(decide_rescaling(&l, &m2, RescalingKind::General, tol()).unwrap().is_accepted());
}

#[test]
fn zero_pattern_and_diagonal_obstructions() {
    let l = ints(&[&[1, 1], &[1, 1]]);
    let m = ints(&[&[1, 0], &[1, 1]]);
    assert_eq!(
        decide_rescaling(&l, &m, RescalingKind::General, tol()).unwrap(),
        Verdict::Rejected(Counterexample::ZeroPatternMismatch { row: 0, col: 1 })
    );
    let deg = ints(&[&[0, 1], &[1, 2]]);
    let v = decide_rescaling(&deg, &deg, RescalingKind::Symmetric, tol()).unwrap();
    assert_eq!(
        v,
        Verdict::Rejected(Counterexample::DiagonalObstruction { index: 0, reason: DiagonalReason::Degenerate })
    );
    let neg = ints(&[&[-1, 1], &[1, 2]]);
    let v = decide_rescaling(&l, &neg, RescalingKind::Hermitean, tol()).unwrap();
    let cx = v.counterexample().unwrap().clone();
    assert_eq!(cx, Counterexample::DiagonalObstruction { index: 0, reason: DiagonalReason::NonPositiveRatio });
    assert!(cx.recheck(&l, &neg, RescalingKind::Hermitean, tol()));
    let v = decide_rescaling(&l, &neg, RescalingKind::Pm1, tol()).unwrap();
    assert!(matches!(v, Verdict::Rejected(Counterexample::DiagonalObstruction { reason: DiagonalReason::RatioNotOne, .. })));
}

#[test]
fn symmetric_exact_square_roots() {
    let l = ints(&[&[1, 1], &[1, 1]]);
    let f = [Scalar::from_i64(3), Scalar::from_ratio(-1, 2)];
    let m = l.apply_rescaling(&f, &f).unwrap();
    let c = decide_rescaling(&l, &m, RescalingKind::Symmetric, tol()).unwrap().certificate().cloned().unwrap();
    assert_eq!(c.f, f.to_vec());
    assert_eq!(c.group, Some(GroupTag::RealNonzero));
}

#[test]
fn hermitean_anchor_is_positive() {
    let l = ints(&[&[2, 1], &[1, 3]]);
    let f = [Scalar::exact(BigRationalExt::int(0), BigRationalExt::int(2)), Scalar::from_i64(1)];
    let g: Vec<Scalar> = f.iter().map(Scalar::conj).collect();
    let m = l.apply_rescaling(&f, &g).unwrap();
    let c = decide_rescaling(&l, &m, RescalingKind::Hermitean, tol()).unwrap().certificate().cloned().unwrap();
    assert_eq!(c.f[0], Scalar::from_i64(2));
    for x in 0..2 {
        let lhs = &c.f[x] * &c.f[x].conj();
        assert_eq!(lhs, m.get(x, x) / l.get(x, x));
    }
}

struct BigRationalExt;
impl BigRationalExt {
    fn int(v: i64) -> num_rational::BigRational {
        num_rational::BigRational::from_integer(v.into())
    }
}

#[test]
fn reciprocal_needs_equal_diagonal() {
    let l = ints(&[&[1, 2], &[3, 1]]);
    let f = [Scalar::from_i64(2), Scalar::from_i64(5)];
    let g: Vec<Scalar> = f.iter().map(|v| v.recip().unwrap()).collect();
    let m = l.apply_rescaling(&f, &g).unwrap();
    let c = decide_rescaling(&l, &m, RescalingKind::Reciprocal, tol()).unwrap().certificate().cloned().unwrap();
    assert_eq!(c.f, vec![Scalar::one(), Scalar::from_ratio(5, 2)]);
    let other = ints(&[&[2, 2], &[3, 1]]);
    let v = decide_rescaling(&l, &other, RescalingKind::Reciprocal, tol()).unwrap();
    let cx = v.counterexample().unwrap();
    assert!(matches!(cx, Counterexample::InconsistentCycle { .. }));
    assert!(cx.recheck(&l, &other, RescalingKind::Reciprocal, tol()));
}

#[test]
fn general_handles_missing_diagonal() {
    // Permutation pattern: rows and columns pair up in two components.
    let l = ints(&[&[0, 2], &[3, 0]]);
    let m = ints(&[&[0, 6], &[-3, 0]]);
    let c = decide_rescaling(&l, &m, RescalingKind::General, tol()).unwrap().certificate().cloned().unwrap();
    assert_eq!(c.anchors.len(), 2);
    assert_eq!(c.anchors[0].node, CycleNode::Row(0));
    assert!(c.verify(&l, &m, tol()));
}

#[test]
fn ln_pairs_are_rejected_by_every_kind() {
    for n in 3..=8 {
        let p = generators::ln(n, Sign::Plus).unwrap();
        let m = generators::ln(n, Sign::Minus).unwrap();
        assert!(compare_minors(&p, &m, n - 1, tol()).unwrap().equal);
        for kind in RescalingKind::ALL {
            let v = decide_rescaling(&p, &m, kind, tol()).unwrap();
            let cx = v.counterexample().unwrap_or_else(|| panic!("n = {n}, {kind} accepted"));
            assert!(cx.recheck(&p, &m, kind, tol()), "n = {n}, {kind}: {cx:?}");
        }
        let v = decide_pm1_via_minors(&p, &m, true, tol()).unwrap();
        assert!(matches!(v, Verdict::Rejected(Counterexample::DifferingMinor { ref subset, .. }) if subset.len() == n));
    }
}

#[test]
fn l4_pair_satisfies_nv_triples() {
    let p = generators::ln(4, Sign::Plus).unwrap();
    let m = generators::ln(4, Sign::Minus).unwrap();
    assert!(triple_condition(&p, &m, TripleVariant::Nv, tol()).unwrap().holds);
    // (*) holds as well, so it is necessary but not sufficient.
    assert!(triple_condition(&p, &m, TripleVariant::Star, tol()).unwrap().holds);
    let p3 = generators::ln(3, Sign::Plus).unwrap();
    let m3 = generators::ln(3, Sign::Minus).unwrap();
    let r = triple_condition(&p3, &m3, TripleVariant::Star, tol()).unwrap();
    assert!(!r.holds);
    assert!(r.witness.is_some());
}

#[test]
fn nv_rejects_bad_input() {
    let deg = ints(&[&[0, 1], &[1, 1]]);
    assert!(triple_condition(&deg, &deg, TripleVariant::Nv, tol()).is_err());
    let asym = ints(&[&[1, 2], &[1, 1]]);
    assert_eq!(triple_condition(&asym, &asym, TripleVariant::Nv, tol()), Err(crate::Error::NotSymmetric));
}

#[test]
fn la_pairs_differ_on_chord_blocks() {
    let a = generators::la(10, &[2, 4]).unwrap();
    let b = generators::la(10, &[2]).unwrap();
    assert!(decide_pm1_via_minors(&a, &a, true, tol()).unwrap().is_accepted());
    match decide_pm1_via_minors(&a, &b, false, tol()).unwrap() {
        Verdict::Rejected(Counterexample::DifferingMinor { subset, .. }) => {
            let block: Vec<usize> = generators::la_block(4).map(|i| i - 1).collect();
            assert_eq!(subset, block);
        }
        v => panic!("{v:?}"),
    }
}

#[test]
fn radius_bound_values() {
    // Full first row and column: radius 1, bound 3.
    let star = ints(&[&[1, 1, 1, 1], &[1, 1, 0, 0], &[1, 0, 1, 0], &[1, 0, 0, 1]]);
    assert_eq!(radius_bound(&star, tol()), 3);
    let diag = ints(&[&[1, 0], &[0, 1]]);
    assert_eq!(radius_bound(&diag, tol()), 2);
    let path = generators::la(8, &[]).unwrap().restrict(&[3, 4, 5, 6, 7]).unwrap();
    assert_eq!(radius_bound(&path, tol()), 5);
}

#[test]
fn first_found_cycle_is_rechecked() {
    let (p, m) = generators::exa_sampled(&generators::default_exa_grid(), generators::Ladder::Polynomial).unwrap();
    assert!(triple_condition(&p, &m, TripleVariant::Nv, tol()).unwrap().holds);
    let v = decide_rescaling(&p, &m, RescalingKind::Symmetric, tol()).unwrap();
    match v.counterexample().unwrap() {
        cx @ Counterexample::InconsistentCycle { vertices, entries, ratio } => {
            assert_eq!(vertices.first(), vertices.last());
            assert_eq!(vertices.len(), entries.len() + 1);
            assert_eq!(ratio, &Scalar::from_i64(-1));
            assert!(cx.recheck(&p, &m, RescalingKind::Symmetric, tol()));
            assert!(!cx.recheck(&p, &p, RescalingKind::Symmetric, tol()));
        }
        other => panic!("{other:?}"),
    }
}

fn kind_strategy() -> impl Strategy<Value = RescalingKind> {
    prop::sample::select(RescalingKind::ALL.to_vec())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn rescaled_pairs_are_accepted(n in 1usize..7, density in 0.1f64..1.0, seed in any::<u64>(), kind in kind_strategy()) {
        let p = generators::random_rescaled_pair(n, density, seed, kind).unwrap();
        let v = decide_rescaling(&p.l, &p.m, kind, tol()).unwrap();
        let c = v.certificate().unwrap_or_else(|| panic!("{:?}", v));
        prop_assert!(c.verify(&p.l, &p.m, tol()));
        prop_assert!(c.residual <= tol().tau);
        if kind == RescalingKind::Pm1 {
            prop_assert_eq!(c.group, Some(GroupTag::PlusMinusOne));
        }
        for (x, fx) in c.f.iter().enumerate() {
            if let Some(gx) = kind.partner(fx) {
                prop_assert!(tol().approx_eq(&gx, &c.g[x], gx.abs()));
            }
        }
        // Accepted pairs satisfy the triple condition.
        prop_assert!(triple_condition(&p.l, &p.m, TripleVariant::Star, tol()).unwrap().holds);
    }

    #[test]
    fn scaling_gauge_is_invisible(n in 1usize..6, seed in any::<u64>(), lambda in 1i64..5) {
        let p = generators::random_rescaled_pair(n, 0.6, seed, RescalingKind::General).unwrap();
        let lam = Scalar::from_i64(lambda);
        let f2: Vec<Scalar> = p.f.iter().map(|v| v * &lam).collect();
        let g2: Vec<Scalar> = p.g.iter().map(|v| v / &lam).collect();
        prop_assert_eq!(p.l.apply_rescaling(&f2, &g2).unwrap(), p.m);
    }

    #[test]
    fn perturbed_pairs_are_rejected_with_valid_witness(n in 2usize..7, seed in any::<u64>(), kind in kind_strategy(), at in 0usize..49) {
        let p = generators::random_rescaled_pair(n, 0.7, seed, kind).unwrap();
        let k = at % (n * n);
        let mut entries = p.m.entries().to_vec();
        entries[k] = &entries[k] + &Scalar::from_ratio(1, 7);
        let m2 = BiFunction::from_entries(p.m.labels().to_vec(), n, entries).unwrap();
        let v = decide_rescaling(&p.l, &m2, kind, tol()).unwrap();
        if let Some(cx) = v.counterexample() {
            prop_assert!(cx.recheck(&p.l, &m2, kind, tol()), "{:?}", cx);
        } else {
            // Entries outside every cycle can absorb the change.
            prop_assert!(v.certificate().unwrap().verify(&p.l, &m2, tol()));
        }
    }

    #[test]
    fn unit_modulus_ratios_give_unit_certificates(n in 1usize..6, seed in any::<u64>()) {
        let p = generators::random_rescaled_pair(n, 0.6, seed, RescalingKind::General).unwrap();
        let f: Vec<Scalar> = p.f.iter().map(|v| v.to_float()).map(|v| Scalar::from_complex(v.to_complex() / v.abs())).collect();
        let g: Vec<Scalar> = p.g.iter().map(|v| Scalar::from_complex(v.to_complex() / v.abs())).collect();
        let m = p.l.apply_rescaling(&f, &g).unwrap();
        let c = decide_rescaling(&p.l, &m, RescalingKind::General, tol()).unwrap().certificate().cloned().unwrap();
        prop_assert!(matches!(c.group, Some(GroupTag::UnitCircle) | Some(GroupTag::PlusMinusOne)));
    }

    #[test]
    fn pm1_pairs_roundtrip(n in 1usize..9, density in 0.0f64..1.0, seed in any::<u64>()) {
        let p = generators::random_pm1_pair(n, density, seed, false).unwrap();
        let v = decide_rescaling(&p.l, &p.m, RescalingKind::Pm1, tol()).unwrap();
        let c = v.certificate().unwrap();
        let g = crate::graph::graph_view(&p.l, tol());
        for comp in &g.components {
            let s = comp[0];
            let flip = c.f[s] != Scalar::from_i64(p.signs[s]);
            for &x in comp {
                let expect = Scalar::from_i64(if flip { -p.signs[x] } else { p.signs[x] });
                prop_assert_eq!(&c.f[x], &expect);
            }
        }
        // Squares agree, the diagonal ratio is 1: pm1 acceptance follows.
        let gc = decide_rescaling(&p.l, &p.m, RescalingKind::General, tol()).unwrap();
        prop_assert!(gc.is_accepted());
    }
}

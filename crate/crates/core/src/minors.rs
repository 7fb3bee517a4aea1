//! Principal minors `det_L(S)` and their comparison between two bi-functions.

use itertools::Itertools;
use rayon::prelude::*;

use crate::bifunction::BiFunction;
use crate::det;
use crate::error::{Error, Result};
use crate::scalar::{Scalar, Tolerance};

/// A subset (as indices in increasing order) together with the minors of both
/// matrices on it.
#[derive(Clone, Debug, PartialEq)]
pub struct MinorDifference {
    pub subset: Vec<usize>,
    pub in_l: Scalar,
    pub in_m: Scalar,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MinorComparison {
    pub equal: bool,
    pub first_diff: Option<MinorDifference>,
    pub max_cardinality_checked: usize,
}

/// `det_L(x_1, ..., x_k)`. A repeated index gives 0, the empty subset gives 1.
pub fn principal_minor(l: &BiFunction, subset: &[usize]) -> Result<Scalar> {
    let n = l.size();
    if let Some(&index) = subset.iter().find(|&&i| i >= n) {
        return Err(Error::IndexOutOfRange { index, size: n });
    }
    if subset.iter().duplicates().next().is_some() {
        return Ok(if l.is_exact() { Scalar::zero() } else { Scalar::from_f64(0.0) });
    }
    let k = subset.len();
    let entries: Vec<Scalar> = subset
        .iter()
        .flat_map(|&i| subset.iter().map(move |&j| l.get(i, j).clone()))
        .collect();
    Ok(det::det(k, &entries))
}

/// Nonempty subsets of `0..n` with at most `max_card` elements, ordered by
/// cardinality and then lexicographically.
pub fn subsets_up_to(n: usize, max_card: usize) -> impl Iterator<Item = Vec<usize>> {
    (1..=max_card.min(n)).flat_map(move |k| (0..n).combinations(k))
}

/// The equality rule for minors of cardinality `k`: exact comparison when both
/// are exact, otherwise `|a - b| <= tau * max(|a|, |b|, s^k)`.
pub fn minors_agree(a: &Scalar, b: &Scalar, k: usize, entry_scale: f64, tol: Tolerance) -> bool {
    let scale = a.abs().max(b.abs()).max(entry_scale.powi(k as i32));
    tol.approx_eq(a, b, scale)
}

fn check_pair(l: &BiFunction, m: &BiFunction, max_card: usize) -> Result<()> {
    l.check_compatible(m)?;
    if max_card > l.size() {
        return Err(Error::InvalidCardinality { max: max_card, size: l.size() });
    }
    Ok(())
}

fn diff_on(l: &BiFunction, m: &BiFunction, subset: &[usize], s: f64, tol: Tolerance) -> Option<MinorDifference> {
    let a = principal_minor(l, subset).expect("subset in range");
    let b = principal_minor(m, subset).expect("subset in range");
    (!minors_agree(&a, &b, subset.len(), s, tol)).then(|| MinorDifference {
        subset: subset.to_vec(),
        in_l: a,
        in_m: b,
    })
}

/// Compares `det_L` and `det_M` on every subset of cardinality `1..=max_card`
/// and reports the first difference in enumeration order.
pub fn compare_minors(l: &BiFunction, m: &BiFunction, max_card: usize, tol: Tolerance) -> Result<MinorComparison> {
    check_pair(l, m, max_card)?;
    let n = l.size();
    let s = l.scale().max(m.scale());
    for k in 1..=max_card {
        let layer: Vec<Vec<usize>> = (0..n).combinations(k).collect();
        let found = layer.par_iter().find_map_first(|sub| diff_on(l, m, sub, s, tol));
        if let Some(d) = found {
            return Ok(MinorComparison { equal: false, first_diff: Some(d), max_cardinality_checked: k });
        }
    }
    Ok(MinorComparison { equal: true, first_diff: None, max_cardinality_checked: max_card })
}

/// Every differing subset up to `max_card`, in enumeration order.
pub fn differing_minors(l: &BiFunction, m: &BiFunction, max_card: usize, tol: Tolerance) -> Result<Vec<MinorDifference>> {
    check_pair(l, m, max_card)?;
    let s = l.scale().max(m.scale());
    let all: Vec<Vec<usize>> = subsets_up_to(l.size(), max_card).collect();
    Ok(all.par_iter().filter_map(|sub| diff_on(l, m, sub, s, tol)).collect())
}

/// Continuant of the open path: `p_0 = 1`, `p_1 = a_1`,
/// `p_k = a_k p_{k-1} - b_{k-1}^2 p_{k-2}`.
fn open_path(a: &[Scalar], b: &[Scalar]) -> Scalar {
    let mut prev = Scalar::one();
    let Some(first) = a.first() else { return prev };
    let mut cur = first.clone();
    for k in 1..a.len() {
        let next = &a[k] * &cur - &(&b[k - 1] * &b[k - 1]) * &prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Determinant of the symmetric matrix with diagonal `a`, off-diagonal
/// `b_1..b_{n-1}` along the path and `b_n` in both corners.
///
/// Expanding along the first row gives
/// `d_n = a_1 p(a_2..a_n) - b_1^2 p(a_3..a_n) - b_n^2 p(a_2..a_{n-1}) - 2(-1)^n b_1...b_n`
/// where `p` is the open-path continuant. For `n = 2` the two off-diagonal
/// contributions add, giving `a_1 a_2 - (b_1 + b_2)^2`.
pub fn corner_tridiag_det(a: &[Scalar], b: &[Scalar]) -> Result<Scalar> {
    let n = a.len();
    if n < 2 || b.len() != n {
        return Err(Error::TridiagonalShape { diag: n, off: b.len() });
    }
    let head = &a[0] * &open_path(&a[1..], &b[1..n - 1]);
    let skip_two = &(&b[0] * &b[0]) * &open_path(&a[2..], if n > 2 { &b[2..n - 1] } else { &[] });
    let corner = &(&b[n - 1] * &b[n - 1]) * &open_path(&a[1..n - 1], if n > 2 { &b[1..n - 2] } else { &[] });
    let prod = b.iter().fold(Scalar::one(), |acc, x| &acc * x);
    let cyc = &Scalar::from_i64(if n % 2 == 0 { 2 } else { -2 }) * &prod;
    Ok(head - skip_two - corner - cyc)
}

#[derive(Clone, Debug, PartialEq)]
pub enum Multiplicativity {
    /// `det_M(S) = prod_{x in S} w(x) det_L(S)` for every `S`.
    Multiplicative { weights: Vec<Scalar> },
    Violated { subset: Vec<usize>, det_l: Scalar, det_m: Scalar, predicted: Scalar },
}

/// Tests whether `det_M / det_L` is multiplicative on all subsets.
pub fn multiplicativity_test(l: &BiFunction, m: &BiFunction, tol: Tolerance) -> Result<Multiplicativity> {
    check_pair(l, m, l.size())?;
    let n = l.size();
    let sl = l.scale();
    if let Some(x) = (0..n).find(|&x| m.is_zero_at(x, x, tol)) {
        return Err(Error::Degenerate(x));
    }
    let subsets: Vec<Vec<usize>> = subsets_up_to(n, n).collect();
    let minors_l: Vec<Scalar> = subsets
        .par_iter()
        .map(|s| principal_minor(l, s).expect("subset in range"))
        .collect();
    if let Some(i) = minors_l
        .iter()
        .zip(&subsets)
        .position(|(d, s)| tol.is_zero(d, sl.powi(s.len() as i32)))
    {
        return Err(Error::VanishingMinor(subsets[i].clone()));
    }
    let weights: Vec<Scalar> = (0..n).map(|x| m.get(x, x) / &minors_l[x]).collect();
    let s = sl.max(m.scale());
    let violation = subsets.par_iter().zip(&minors_l).find_map_first(|(sub, dl)| {
        let dm = principal_minor(m, sub).expect("subset in range");
        let predicted = sub.iter().fold(dl.clone(), |acc, &x| &acc * &weights[x]);
        (!minors_agree(&dm, &predicted, sub.len(), s, tol)).then(|| Multiplicativity::Violated {
            subset: sub.clone(),
            det_l: dl.clone(),
            det_m: dm,
            predicted,
        })
    });
    Ok(violation.unwrap_or(Multiplicativity::Multiplicative { weights }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ints(rows: &[&[i64]]) -> BiFunction {
        BiFunction::unlabeled(rows.iter().map(|r| r.iter().map(|&v| Scalar::from_i64(v)).collect()).collect())
            .unwrap()
    }

    fn l3(sign: i64) -> BiFunction {
        ints(&[&[4, 1, sign], &[1, 4, 1], &[sign, 1, 4]])
    }

    #[test]
    fn minor_conventions() {
        let l = l3(1);
        assert_eq!(principal_minor(&l, &[]).unwrap(), Scalar::one());
        assert_eq!(principal_minor(&l, &[0, 2, 0]).unwrap(), Scalar::zero());
        assert_eq!(principal_minor(&l, &[0, 1, 2]).unwrap(), Scalar::from_i64(54));
        assert_eq!(principal_minor(&l, &[2, 0, 1]).unwrap(), Scalar::from_i64(54));
        assert!(principal_minor(&l, &[3]).is_err());
    }

    #[test]
    fn l3_pair_differs_only_in_full_determinant() {
        let tol = Tolerance::default();
        let (p, m) = (l3(1), l3(-1));
        assert!(compare_minors(&p, &m, 2, tol).unwrap().equal);
        let c = compare_minors(&p, &m, 3, tol).unwrap();
        let d = c.first_diff.unwrap();
        assert_eq!(d.subset, vec![0, 1, 2]);
        assert_eq!((d.in_l, d.in_m), (Scalar::from_i64(54), Scalar::from_i64(50)));
        assert_eq!(c.max_cardinality_checked, 3);
        assert!(compare_minors(&p, &m, 4, tol).is_err());
    }

    #[test]
    fn enumeration_is_cardinality_major() {
        let subs: Vec<Vec<usize>> = subsets_up_to(3, 3).collect();
        assert_eq!(subs, vec![vec![0], vec![1], vec![2], vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]]);
        let short: Vec<Vec<usize>> = subsets_up_to(3, 2).collect();
        assert_eq!(short[..], subs[..short.len()]);
    }

    #[test]
    fn corner_recursion_small_cases() {
        let s = |v: &[i64]| v.iter().map(|&x| Scalar::from_i64(x)).collect::<Vec<_>>();
        assert_eq!(corner_tridiag_det(&s(&[4, 4, 4]), &s(&[1, 1, 1])).unwrap(), Scalar::from_i64(54));
        assert_eq!(corner_tridiag_det(&s(&[4, 4, 4]), &s(&[1, 1, -1])).unwrap(), Scalar::from_i64(50));
        assert_eq!(corner_tridiag_det(&s(&[3, 5]), &s(&[2, 0])).unwrap(), Scalar::from_i64(11));
        assert_eq!(corner_tridiag_det(&s(&[3, 5]), &s(&[2, 1])).unwrap(), Scalar::from_i64(6));
        // Sign flips that keep the product of b unchanged keep the determinant.
        assert_eq!(
            corner_tridiag_det(&s(&[4, 3, 2, 5]), &s(&[1, -2, -1, 3])).unwrap(),
            corner_tridiag_det(&s(&[4, 3, 2, 5]), &s(&[1, 2, 1, 3])).unwrap()
        );
        assert!(corner_tridiag_det(&s(&[1]), &s(&[1])).is_err());
        assert!(corner_tridiag_det(&s(&[1, 2, 3]), &s(&[1, 1])).is_err());
    }

    #[test]
    fn multiplicativity_examples() {
        let tol = Tolerance::default();
        let l = l3(1);
        let f = [Scalar::from_i64(2), Scalar::from_i64(-1), Scalar::from_ratio(1, 3)];
        let m = l.apply_rescaling(&f, &f).unwrap();
        match multiplicativity_test(&l, &m, tol).unwrap() {
            Multiplicativity::Multiplicative { weights } => {
                let sq: Vec<Scalar> = f.iter().map(|x| x * x).collect();
                assert_eq!(weights, sq);
            }
            v => panic!("{v:?}"),
        }
        match multiplicativity_test(&l, &l3(-1), tol).unwrap() {
            Multiplicativity::Violated { subset, .. } => assert_eq!(subset, vec![0, 1, 2]),
            v => panic!("{v:?}"),
        }
        let sing = ints(&[&[1, 1], &[1, 1]]);
        assert_eq!(multiplicativity_test(&sing, &sing, tol), Err(Error::VanishingMinor(vec![0, 1])));
    }

    fn dense(a: &[i64], b: &[i64]) -> BiFunction {
        let n = a.len();
        let mut rows = vec![vec![Scalar::zero(); n]; n];
        for i in 0..n {
            rows[i][i] = Scalar::from_i64(a[i]);
            let j = (i + 1) % n;
            let v = Scalar::from_i64(b[i]);
            rows[i][j] = &rows[i][j] + &v;
            rows[j][i] = &rows[j][i] + &v;
        }
        BiFunction::unlabeled(rows).unwrap()
    }

    proptest! {
        #[test]
        fn corner_recursion_matches_dense(
            n in 2usize..=12,
            a in proptest::collection::vec(-9i64..=9, 12),
            b in proptest::collection::vec(-9i64..=9, 12),
        ) {
            let (a, b) = (&a[..n], &b[..n]);
            let sa: Vec<Scalar> = a.iter().map(|&x| Scalar::from_i64(x)).collect();
            let sb: Vec<Scalar> = b.iter().map(|&x| Scalar::from_i64(x)).collect();
            let m = dense(a, b);
            let all: Vec<usize> = (0..n).collect();
            prop_assert_eq!(corner_tridiag_det(&sa, &sb).unwrap(), principal_minor(&m, &all).unwrap());
        }

        #[test]
        fn corner_recursion_float(
            n in 2usize..=12,
            a in proptest::collection::vec(-3.0f64..3.0, 12),
            b in proptest::collection::vec(-3.0f64..3.0, 12),
        ) {
            let sa: Vec<Scalar> = a[..n].iter().map(|&x| Scalar::from_f64(x + 8.0)).collect();
            let sb: Vec<Scalar> = b[..n].iter().map(|&x| Scalar::from_f64(x)).collect();
            let mut rows = vec![vec![Scalar::from_f64(0.0); n]; n];
            for i in 0..n {
                rows[i][i] = sa[i].clone();
                let j = (i + 1) % n;
                rows[i][j] = &rows[i][j] + &sb[i];
                rows[j][i] = &rows[j][i] + &sb[i];
            }
            let m = BiFunction::unlabeled(rows).unwrap();
            let all: Vec<usize> = (0..n).collect();
            let d = principal_minor(&m, &all).unwrap();
            let r = corner_tridiag_det(&sa, &sb).unwrap();
            prop_assert!((d.to_complex() - r.to_complex()).norm() <= 1e-10 * d.abs());
        }

        #[test]
        fn minors_ignore_subset_order(perm in Just(vec![2usize, 0, 3, 1]).prop_shuffle()) {
            let l = ints(&[&[3, 1, 0, 2], &[1, 5, 1, 0], &[0, 1, 4, -1], &[2, 0, -1, 6]]);
            prop_assert_eq!(principal_minor(&l, &perm).unwrap(), principal_minor(&l, &[0, 1, 2, 3]).unwrap());
        }
    }
}

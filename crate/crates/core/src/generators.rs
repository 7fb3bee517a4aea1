//! Matrix and kernel families used as fixtures, plus seeded random pairs.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::bifunction::{default_labels, BiFunction};
use crate::error::{Error, Result};
use crate::rescaling::RescalingKind;
use crate::scalar::{format_rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn value(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

/// Which `K_0` generates the ladder kernel `K = sum_n K_0(x - n, y - n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Ladder {
    /// `(1 - x^2)(1 - y^2)`, exact on rational grids.
    Polynomial,
    /// `Re (1 - x^2)(1 - y^2) / (4 - e^{i pi (x - y)})`, positive definite.
    Szego,
}

#[derive(Clone, Debug, PartialEq)]
pub enum FamilySpec {
    /// Cyclic tridiagonal: 4 on the diagonal, 1 next to it, `+-1` in the corners.
    Ln { n: usize, sign: Sign },
    /// Path matrix on `1..=size` with chords `((k^2-k)/2, (k^2+k)/2)`, `+1`
    /// for `k` in `chords` and `-1` otherwise.
    La { size: usize, chords: Vec<usize> },
    /// Hermitean pair with equal principal minors that are not rescalings.
    /// `as_printed` uses `M(1, 3) = e^{i pi/12}` instead of `e^{i pi/4}`,
    /// which breaks the minor equality on `{1, 3, 4}`.
    Hermitean4 { as_printed: bool },
    Sobolev { points: Vec<f64> },
    Szego0 { points: Vec<f64> },
    /// The ladder pair `M^+-` sampled on a grid in `[0, 4]`.
    ExaSampled { grid: Vec<BigRational>, ladder: Ladder },
    RandomPm1Pair { n: usize, density: f64, seed: u64, connected: bool },
    RandomRescaledPair { n: usize, density: f64, seed: u64, kind: RescalingKind },
}

#[derive(Clone, Debug, PartialEq)]
pub enum Generated {
    Single(BiFunction),
    Pair(BiFunction, BiFunction),
}

pub fn generate(spec: &FamilySpec) -> Result<Generated> {
    Ok(match spec {
        FamilySpec::Ln { n, sign } => Generated::Single(ln(*n, *sign)?),
        FamilySpec::La { size, chords } => Generated::Single(la(*size, chords)?),
        FamilySpec::Hermitean4 { as_printed } => {
            let (l, m) = hermitean4(*as_printed);
            Generated::Pair(l, m)
        }
        FamilySpec::Sobolev { points } => Generated::Single(sampled(points, sobolev_kernel)?),
        FamilySpec::Szego0 { points } => Generated::Single(sampled(points, szego0_kernel)?),
        FamilySpec::ExaSampled { grid, ladder } => {
            let (p, m) = exa_sampled(grid, *ladder)?;
            Generated::Pair(p, m)
        }
        FamilySpec::RandomPm1Pair { n, density, seed, connected } => {
            let p = random_pm1_pair(*n, *density, *seed, *connected)?;
            Generated::Pair(p.l, p.m)
        }
        FamilySpec::RandomRescaledPair { n, density, seed, kind } => {
            let p = random_rescaled_pair(*n, *density, *seed, *kind)?;
            Generated::Pair(p.l, p.m)
        }
    })
}

fn int_matrix(n: usize, entry: impl Fn(usize, usize) -> i64) -> BiFunction {
    let rows = (0..n).map(|i| (0..n).map(|j| Scalar::from_i64(entry(i, j))).collect()).collect();
    BiFunction::new(default_labels(n), rows).expect("square by construction")
}

pub fn ln(n: usize, sign: Sign) -> Result<BiFunction> {
    if n < 3 {
        return Err(Error::Generator(format!("Ln needs n >= 3, got {n}")));
    }
    Ok(int_matrix(n, |i, j| match i.abs_diff(j) {
        0 => 4,
        1 => 1,
        d if d == n - 1 => sign.value(),
        _ => 0,
    }))
}

pub fn la(size: usize, chords: &[usize]) -> Result<BiFunction> {
    if let Some(k) = chords.iter().find(|&&k| k < 2) {
        return Err(Error::Generator(format!("chord index {k} is not in {{2, 3, ...}}")));
    }
    Ok(int_matrix(size, |i, j| {
        let (m, n) = (i + 1, j + 1);
        let d = m.abs_diff(n);
        let base = match d {
            0 => 4,
            1 => 1,
            _ => 0,
        };
        if d >= 2 && m + n == d * d {
            base + if chords.contains(&d) { 1 } else { -1 }
        } else {
            base
        }
    }))
}

/// Index range `[(k^2-k)/2, (k^2+k)/2]` (one-based) of the block closed by chord `k`.
pub fn la_block(k: usize) -> std::ops::RangeInclusive<usize> {
    (k * k - k) / 2..=(k * k + k) / 2
}

pub fn hermitean4(as_printed: bool) -> (BiFunction, BiFunction) {
    let e = |num: f64| Scalar::unit(num * PI / 12.0);
    let one = || Scalar::from_f64(1.0);
    let four = || Scalar::from_f64(4.0);
    let herm = |upper: [[Option<Scalar>; 4]; 4]| {
        let mut rows = vec![vec![Scalar::from_f64(0.0); 4]; 4];
        for i in 0..4 {
            rows[i][i] = four();
            for j in i + 1..4 {
                let v = upper[i][j].clone().expect("upper triangle given");
                rows[j][i] = v.conj();
                rows[i][j] = v;
            }
        }
        BiFunction::unlabeled(rows).expect("4 x 4")
    };
    let l = herm([
        [None, Some(e(1.0)), Some(one()), Some(one())],
        [None, None, Some(one()), Some(e(3.0))],
        [None, None, None, Some(e(4.0))],
        [None, None, None, None],
    ]);
    let m13 = if as_printed { e(1.0) } else { e(3.0) };
    let m = herm([
        [None, Some(e(2.0)), Some(m13), Some(one())],
        [None, None, Some(one()), Some(e(2.0))],
        [None, None, None, Some(e(1.0))],
        [None, None, None, None],
    ]);
    (l, m)
}

pub fn sobolev_kernel(x: f64, y: f64) -> f64 {
    (-(x - y).abs()).exp()
}

/// `K_0` on `(-1, 1)^2`, zero outside.
pub fn szego0_kernel(x: f64, y: f64) -> f64 {
    if x.abs() >= 1.0 || y.abs() >= 1.0 {
        return 0.0;
    }
    let num = (1.0 - x * x) * (1.0 - y * y);
    (Complex64::new(num, 0.0) / (Complex64::new(4.0, 0.0) - Complex64::from_polar(1.0, PI * (x - y)))).re
}

fn sampled(points: &[f64], k: fn(f64, f64) -> f64) -> Result<BiFunction> {
    if points.iter().any(|p| !p.is_finite()) {
        return Err(Error::Generator("sample points must be finite".into()));
    }
    let labels = points.iter().map(|p| p.to_string()).collect();
    let rows = points
        .iter()
        .map(|&x| points.iter().map(|&y| Scalar::from_f64(k(x, y))).collect())
        .collect();
    BiFunction::new(labels, rows).map_err(|e| match e {
        Error::DuplicateLabel(p) => Error::Generator(format!("duplicate sample point {p}")),
        other => other,
    })
}

/// `prod_i (1 - e^{-2 |x_{i+1} - x_i|})` for strictly increasing points.
pub fn closed_form_det(points: &[f64]) -> Result<f64> {
    if points.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::Generator("points must be strictly increasing".into()));
    }
    Ok(points.windows(2).map(|w| 1.0 - (-2.0 * (w[1] - w[0])).exp()).product())
}

/// `0, 1/4, ..., 4`.
pub fn default_exa_grid() -> Vec<BigRational> {
    (0..=16).map(|k| BigRational::new(k.into(), 4.into())).collect()
}

fn q(n: i64) -> BigRational {
    BigRational::from_integer(n.into())
}

/// `f_4^+`: `1 - 2x` on `[0, 1/2]`, 0 on `[1/2, 7/2]`, `2x - 7` on `[7/2, 4]`.
pub fn f4_plus(x: &BigRational) -> BigRational {
    let half = BigRational::new(1.into(), 2.into());
    let seven_halves = BigRational::new(7.into(), 2.into());
    if *x <= half {
        q(1) - q(2) * x
    } else if *x >= seven_halves {
        q(2) * x - q(7)
    } else {
        BigRational::zero()
    }
}

fn ladder_exact(x: &BigRational, y: &BigRational) -> BigRational {
    // K_0(x - n, y - n) is nonzero only for n within distance 1 of both points.
    let lo: BigInt = x.floor().to_integer() - BigInt::one();
    let hi: BigInt = x.ceil().to_integer() + BigInt::one();
    let mut total = BigRational::zero();
    let mut n = lo;
    while n <= hi {
        let nn = BigRational::from_integer(n.clone());
        let (u, v) = (x - &nn, y - &nn);
        if u.abs() < BigRational::one() && v.abs() < BigRational::one() {
            total += (BigRational::one() - &u * &u) * (BigRational::one() - &v * &v);
        }
        n += BigInt::one();
    }
    total
}

fn ladder_float(x: f64, y: f64) -> f64 {
    let lo = x.floor() as i64 - 1;
    let hi = x.ceil() as i64 + 1;
    (lo..=hi).map(|n| szego0_kernel(x - n as f64, y - n as f64)).sum()
}

/// `(M^+, M^-)` with `M^+- = K + f_4^+- (x) f_4^+-` on the grid.
pub fn exa_sampled(grid: &[BigRational], ladder: Ladder) -> Result<(BiFunction, BiFunction)> {
    if grid.iter().any(|x| x.is_negative() || *x > q(4)) {
        return Err(Error::Generator("grid points must lie in [0, 4]".into()));
    }
    let labels: Vec<String> = grid.iter().map(format_rational).collect();
    let half = BigRational::new(1.into(), 2.into());
    let build = |sign: i64| -> Result<BiFunction> {
        // f_4^- differs from f_4^+ only on [0, 1/2].
        let f = |x: &BigRational| if *x <= half { q(sign) * f4_plus(x) } else { f4_plus(x) };
        let rows = grid
            .iter()
            .map(|x| {
                grid.iter()
                    .map(|y| {
                        let bump = f(x) * f(y);
                        match ladder {
                            Ladder::Polynomial => Scalar::from_rational(ladder_exact(x, y) + bump),
                            Ladder::Szego => {
                                let (xf, yf) = (Scalar::from_rational(x.clone()).re_f64(), Scalar::from_rational(y.clone()).re_f64());
                                Scalar::from_f64(ladder_float(xf, yf) + Scalar::from_rational(bump).re_f64())
                            }
                        }
                    })
                    .collect()
            })
            .collect();
        BiFunction::new(labels.clone(), rows)
    };
    Ok((build(1)?, build(-1)?))
}

fn check_random(n: usize, density: f64) -> Result<()> {
    if n == 0 {
        return Err(Error::Generator("random pairs need n >= 1".into()));
    }
    if !(0.0..=1.0).contains(&density) {
        return Err(Error::Generator(format!("density {density} is not in [0, 1]")));
    }
    Ok(())
}

fn nonzero_int(rng: &mut ChaCha8Rng, max: i64) -> i64 {
    let v = rng.random_range(1..=max);
    if rng.random_bool(0.5) {
        v
    } else {
        -v
    }
}

pub struct Pm1Pair {
    pub l: BiFunction,
    pub m: BiFunction,
    /// The sign diagonal `D` with `M = D L D`.
    pub signs: Vec<i64>,
}

/// Random symmetric integer `L` with nonvanishing diagonal and `M = D L D`.
///
/// With `connected`, a random spanning tree is laid down before the density
/// fill so that `X_L` is connected.
pub fn random_pm1_pair(n: usize, density: f64, seed: u64, connected: bool) -> Result<Pm1Pair> {
    check_random(n, density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut a = vec![vec![0i64; n]; n];
    for (i, row) in a.iter_mut().enumerate() {
        row[i] = nonzero_int(&mut rng, 5);
    }
    if connected {
        let mut order: Vec<usize> = (0..n).collect();
        for k in (1..n).rev() {
            order.swap(k, rng.random_range(0..=k));
        }
        for k in 1..n {
            let (i, j) = (order[k], order[rng.random_range(0..k)]);
            let v = nonzero_int(&mut rng, 3);
            a[i][j] = v;
            a[j][i] = v;
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            if a[i][j] == 0 && rng.random_bool(density) {
                let v = nonzero_int(&mut rng, 3);
                a[i][j] = v;
                a[j][i] = v;
            }
        }
    }
    let signs: Vec<i64> = (0..n).map(|_| if rng.random_bool(0.5) { 1 } else { -1 }).collect();
    let l = int_matrix(n, |i, j| a[i][j]);
    let m = int_matrix(n, |i, j| signs[i] * a[i][j] * signs[j]);
    Ok(Pm1Pair { l, m, signs })
}

pub struct RescaledPair {
    pub l: BiFunction,
    pub m: BiFunction,
    pub f: Vec<Scalar>,
    pub g: Vec<Scalar>,
}

fn gauss_rational(rng: &mut ChaCha8Rng) -> Scalar {
    loop {
        let re = rng.random_range(-4i64..=4);
        let im = rng.random_range(-4i64..=4);
        if re != 0 || im != 0 {
            let d = rng.random_range(1i64..=3);
            return Scalar::exact(BigRational::new(re.into(), d.into()), BigRational::new(im.into(), d.into()));
        }
    }
}

/// Random exact `L` (Gaussian integer entries, zero pattern of the given
/// density) and `M = f (x) g L` with random nonvanishing `f` respecting `kind`.
///
/// Diagonals are always nonvanishing except for the general kind, where they
/// follow the density like every other entry.
pub fn random_rescaled_pair(n: usize, density: f64, seed: u64, kind: RescalingKind) -> Result<RescaledPair> {
    check_random(n, density)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut rows = vec![vec![Scalar::zero(); n]; n];
    for (i, row) in rows.iter_mut().enumerate() {
        for (j, e) in row.iter_mut().enumerate() {
            let forced = i == j && kind != RescalingKind::General;
            if forced || rng.random_bool(density) {
                let re = rng.random_range(-3i64..=3);
                let im = rng.random_range(-3i64..=3);
                *e = if re == 0 && im == 0 { Scalar::one() } else { Scalar::exact(q(re), q(im)) };
            }
        }
    }
    let l = BiFunction::unlabeled(rows)?;
    let f: Vec<Scalar> = (0..n)
        .map(|_| match kind {
            RescalingKind::Pm1 => Scalar::from_i64(if rng.random_bool(0.5) { 1 } else { -1 }),
            _ => gauss_rational(&mut rng),
        })
        .collect();
    let g: Vec<Scalar> = match kind {
        RescalingKind::General => (0..n).map(|_| gauss_rational(&mut rng)).collect(),
        _ => f.iter().map(|v| kind.partner(v).expect("nonzero by construction")).collect(),
    };
    let m = l.apply_rescaling(&f, &g)?;
    Ok(RescaledPair { l, m, f, g })
}

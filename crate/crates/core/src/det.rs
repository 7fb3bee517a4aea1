//! Determinants: fraction-free elimination for exact input, pivoted LU for floats.

use num_bigint::BigInt;
use num_complex::{Complex, Complex64};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::scalar::{GaussRational, Scalar};

/// Gaussian integer with exact division when the quotient is known to be integral.
#[derive(Clone, Debug, PartialEq)]
struct GaussInt {
    re: BigInt,
    im: BigInt,
}

impl GaussInt {
    fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    fn mul(&self, o: &GaussInt) -> GaussInt {
        GaussInt {
            re: &self.re * &o.re - &self.im * &o.im,
            im: &self.re * &o.im + &self.im * &o.re,
        }
    }

    fn sub(&self, o: &GaussInt) -> GaussInt {
        GaussInt { re: &self.re - &o.re, im: &self.im - &o.im }
    }

    fn div_exact(&self, d: &GaussInt) -> GaussInt {
        if d.im.is_zero() {
            return GaussInt { re: &self.re / &d.re, im: &self.im / &d.re };
        }
        let norm = &d.re * &d.re + &d.im * &d.im;
        GaussInt {
            re: (&self.re * &d.re + &self.im * &d.im) / &norm,
            im: (&self.im * &d.re - &self.re * &d.im) / &norm,
        }
    }
}

/// Determinant of an exact `n x n` matrix given row-major.
///
/// Each row is scaled by the lcm of its denominators so that Bareiss
/// elimination runs over Gaussian integers; the row scales are divided out at
/// the end.
pub fn det_exact(n: usize, entries: &[GaussRational]) -> GaussRational {
    if n == 0 {
        return GaussRational::one();
    }
    let mut scale = BigInt::one();
    let mut a: Vec<GaussInt> = Vec::with_capacity(n * n);
    for row in entries.chunks(n) {
        let lcm = row
            .iter()
            .fold(BigInt::one(), |acc, c| acc.lcm(c.re.denom()).lcm(c.im.denom()));
        for c in row {
            a.push(GaussInt {
                re: c.re.numer() * (&lcm / c.re.denom()),
                im: c.im.numer() * (&lcm / c.im.denom()),
            });
        }
        scale *= lcm;
    }
    let mut negate = false;
    let mut prev = GaussInt { re: BigInt::one(), im: BigInt::zero() };
    for k in 0..n.saturating_sub(1) {
        if a[k * n + k].is_zero() {
            let Some(p) = (k + 1..n).find(|&i| !a[i * n + k].is_zero()) else {
                return GaussRational::zero();
            };
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            negate = !negate;
        }
        let pivot = a[k * n + k].clone();
        for i in k + 1..n {
            let aik = a[i * n + k].clone();
            for j in k + 1..n {
                let v = a[i * n + j].mul(&pivot).sub(&aik.mul(&a[k * n + j]));
                a[i * n + j] = v.div_exact(&prev);
            }
        }
        prev = pivot;
    }
    let last = &a[n * n - 1];
    let mut d = Complex::new(
        BigRational::new(last.re.clone(), scale.clone()),
        BigRational::new(last.im.clone(), scale),
    );
    if negate {
        d = -d;
    }
    d
}

/// Determinant by LU with partial pivoting.
pub fn det_float(n: usize, entries: &[Complex64]) -> Complex64 {
    let mut a = entries.to_vec();
    let mut det = Complex64::new(1.0, 0.0);
    for k in 0..n {
        let (p, best) = (k..n)
            .map(|i| (i, a[i * n + k].norm()))
            .fold((k, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
        if best == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        if p != k {
            for j in 0..n {
                a.swap(k * n + j, p * n + j);
            }
            det = -det;
        }
        let pivot = a[k * n + k];
        det *= pivot;
        for i in k + 1..n {
            let factor = a[i * n + k] / pivot;
            if factor == Complex64::new(0.0, 0.0) {
                continue;
            }
            for j in k + 1..n {
                let v = a[k * n + j];
                a[i * n + j] -= factor * v;
            }
        }
    }
    det
}

/// Determinant of a row-major matrix of scalars, exact when every entry is.
pub fn det(n: usize, entries: &[Scalar]) -> Scalar {
    let exact: Option<Vec<GaussRational>> =
        entries.iter().map(|e| e.as_exact().cloned()).collect();
    match exact {
        Some(ex) => Scalar::Exact(det_exact(n, &ex)),
        None => Scalar::Float(det_float(n, &entries.iter().map(Scalar::to_complex).collect::<Vec<_>>())),
    }
}

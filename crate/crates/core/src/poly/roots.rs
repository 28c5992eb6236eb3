//! Complex roots of integer polynomials with per-root inclusion radii.
//!
//! Exact zeros at the integers are split off first (chromatic polynomials
//! have many, often repeated). The remaining factor is solved by
//! Aberth–Ehrlich iteration, falling back to companion-matrix eigenvalues
//! when the iteration stalls. Every approximation `z` is reported with a
//! radius `r` such that the closed disk `|w - z| <= r` contains a root.

use std::cmp::Ordering;

use nalgebra::DMatrix;
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::{horner_with_bound, IntPolynomial, PolyError, UNIT_ROUNDOFF};

const MAX_ITERATIONS: usize = 500;
const POLISH_ITERATIONS: usize = 100;
const RESIDUAL_TOLERANCE: f64 = 1e-10;
/// Largest |r| tried when splitting off integer roots.
const INTEGER_ROOT_SEARCH: i64 = 64;
/// Coefficients are rescaled by a power of two above this many bits.
const MAX_COEFF_BITS: u64 = 1000;

/// A disk in the complex plane known to contain a root.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexInterval {
    pub re: f64,
    pub im: f64,
    pub radius: f64,
}

impl ComplexInterval {
    pub fn exact(re: f64) -> Self {
        ComplexInterval {
            re,
            im: 0.0,
            radius: 0.0,
        }
    }

    pub fn center(&self) -> Complex64 {
        Complex64::new(self.re, self.im)
    }

    pub fn modulus(&self) -> f64 {
        self.center().norm()
    }

    /// Largest modulus of any point in the disk.
    pub fn max_modulus(&self) -> f64 {
        self.modulus() + self.radius
    }

    pub fn contains(&self, z: Complex64) -> bool {
        (z - self.center()).norm() <= self.radius
    }
}

/// All `degree(p)` roots with multiplicity, sorted by modulus then argument.
pub fn complex_roots(p: &IntPolynomial) -> Result<Vec<ComplexInterval>, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let mut roots = Vec::with_capacity(p.degree());
    let lowest = p.coeffs().iter().position(|c| !c.is_zero()).expect("nonzero");
    roots.extend(std::iter::repeat_n(ComplexInterval::exact(0.0), lowest));
    let mut rest = IntPolynomial::new(p.coeffs()[lowest..].to_vec());

    for r in integer_root_candidates(&rest) {
        let r_big = BigInt::from(r);
        loop {
            if rest.degree() == 0 {
                break;
            }
            let (q, rem) = rest.div_linear(&r_big);
            if !rem.is_zero() {
                break;
            }
            roots.push(ComplexInterval::exact(r as f64));
            rest = q;
        }
    }

    if rest.degree() > 0 {
        roots.extend(numeric_roots(&rest)?);
    }
    // moduli agreeing to 1e-9 count as ties so conjugate pairs order by argument
    roots.sort_by(|a, b| {
        let key = |r: &ComplexInterval| (r.modulus() * 1e9).round();
        key(a)
            .total_cmp(&key(b))
            .then(a.im.atan2(a.re).total_cmp(&b.im.atan2(b.re)))
    });
    Ok(roots)
}

/// Nonzero integers up to the Cauchy bound (capped) dividing the constant term.
fn integer_root_candidates(p: &IntPolynomial) -> Vec<i64> {
    let lead = p.leading().expect("nonzero").abs();
    let max_ratio = p
        .coeffs()
        .iter()
        .map(|c| (c.abs() / &lead).to_f64().unwrap_or(f64::INFINITY))
        .fold(0.0, f64::max);
    let bound = (1.0 + max_ratio + 1.0).min(INTEGER_ROOT_SEARCH as f64) as i64;
    let c0 = p.coeff(0);
    let mut out = Vec::new();
    for r in 1..=bound {
        if (&c0 % BigInt::from(r)).is_zero() {
            out.push(r);
            out.push(-r);
        }
    }
    out
}

/// Coefficients as `f64`, all scaled by the same power of two when the
/// largest one would not fit comfortably.
fn scaled_coefficients(p: &IntPolynomial) -> Vec<f64> {
    let max_bits = p.coeffs().iter().map(BigInt::bits).max().unwrap_or(0);
    let shift = max_bits.saturating_sub(MAX_COEFF_BITS) as i32;
    p.coeffs()
        .iter()
        .map(|c| {
            let bits = c.bits();
            if bits <= 1000 {
                c.to_f64().expect("fits") * 2f64.powi(-shift)
            } else {
                let drop = bits - 60;
                let top: BigInt = c >> drop;
                top.to_f64().expect("fits") * 2f64.powi(drop as i32 - shift)
            }
        })
        .collect()
}

fn derivative(c: &[f64]) -> Vec<f64> {
    c.iter().enumerate().skip(1).map(|(k, &a)| a * k as f64).collect()
}

fn residual_ok(c: &[f64], z: Complex64) -> bool {
    let (v, err) = horner_with_bound(c, z);
    let scale = err / (8.0 * (c.len() as f64 + 1.0) * UNIT_ROUNDOFF);
    v.norm() <= RESIDUAL_TOLERANCE * scale.max(f64::MIN_POSITIVE) || v.norm() <= err
}

fn numeric_roots(p: &IntPolynomial) -> Result<Vec<ComplexInterval>, PolyError> {
    let c = scaled_coefficients(p);
    let dc = derivative(&c);
    let d = c.len() - 1;

    let mut z = initial_guesses(&c);
    let converged = aberth(&c, &dc, &mut z, MAX_ITERATIONS);
    if !converged || !z.iter().all(|&zk| residual_ok(&c, zk)) {
        z = companion_eigenvalues(&c);
        aberth(&c, &dc, &mut z, POLISH_ITERATIONS);
    }

    let mut worst = 0.0f64;
    let mut worst_tol = 0.0;
    for &zk in &z {
        if !zk.re.is_finite() || !zk.im.is_finite() || !residual_ok(&c, zk) {
            let (v, err) = horner_with_bound(&c, zk);
            let scale = err / (8.0 * (d as f64 + 2.0) * UNIT_ROUNDOFF);
            // NaN residuals count as worst
            if !matches!(v.norm().partial_cmp(&worst), Some(Ordering::Less | Ordering::Equal)) {
                worst = v.norm();
                worst_tol = RESIDUAL_TOLERANCE * scale;
            }
        }
    }
    if worst > 0.0 || worst.is_nan() {
        return Err(PolyError::NoConvergence {
            residual: worst,
            tolerance: worst_tol,
        });
    }

    Ok(z.into_iter()
        .map(|zk| ComplexInterval {
            re: zk.re,
            im: zk.im,
            radius: inclusion_radius(&c, &dc, zk),
        })
        .collect())
}

/// Points on a circle whose radius is the geometric mean of the root moduli,
/// rotated off the real axis.
fn initial_guesses(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let rho = (c[0].abs() / c[d].abs()).powf(1.0 / d as f64);
    let rho = if rho.is_finite() && rho > 0.0 { rho } else { 1.0 };
    (0..d)
        .map(|k| {
            let theta = std::f64::consts::TAU * k as f64 / d as f64 + 0.7;
            let r = rho * (1.0 + 0.01 * k as f64 / d as f64);
            Complex64::from_polar(r, theta)
        })
        .collect()
}

/// Gauss–Seidel Aberth–Ehrlich sweeps. Returns whether every root settled.
fn aberth(c: &[f64], dc: &[f64], z: &mut [Complex64], max_iter: usize) -> bool {
    let d = z.len();
    let mut done = vec![false; d];
    for _ in 0..max_iter {
        for k in 0..d {
            if done[k] {
                continue;
            }
            let (pv, err) = horner_with_bound(c, z[k]);
            if pv.norm() <= err {
                done[k] = true;
                continue;
            }
            let (dv, _) = horner_with_bound(dc, z[k]);
            if dv.norm() == 0.0 {
                z[k] *= Complex64::new(1.0 + 1e-7, 1e-7);
                continue;
            }
            let ratio = pv / dv;
            let repulsion: Complex64 = (0..d)
                .filter(|&j| j != k)
                .map(|j| {
                    let diff = z[k] - z[j];
                    if diff.norm() == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        diff.inv()
                    }
                })
                .sum();
            let step = ratio / (Complex64::new(1.0, 0.0) - ratio * repulsion);
            if !step.re.is_finite() || !step.im.is_finite() {
                continue;
            }
            z[k] -= step;
            if step.norm() <= 2.0 * UNIT_ROUNDOFF * z[k].norm() {
                done[k] = true;
            }
        }
        if done.iter().all(|&x| x) {
            return true;
        }
    }
    false
}

fn companion_eigenvalues(c: &[f64]) -> Vec<Complex64> {
    let d = c.len() - 1;
    let lead = c[d];
    let m = DMatrix::from_fn(d, d, |i, j| {
        if i == 0 {
            -c[d - 1 - j] / lead
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    m.complex_eigenvalues().iter().copied().collect()
}

/// Radius of a disk around `z` guaranteed to contain a root: the smaller of
/// the Newton disk `d |p/p'|` and `(|p| / |lead|)^(1/d)`, both inflated by the
/// evaluation error bounds.
fn inclusion_radius(c: &[f64], dc: &[f64], z: Complex64) -> f64 {
    let d = (c.len() - 1) as f64;
    let (pv, err) = horner_with_bound(c, z);
    let upper = pv.norm() + err;
    let product = (upper / c[c.len() - 1].abs()).powf(1.0 / d);
    let (dv, derr) = horner_with_bound(dc, z);
    let lower_derivative = dv.norm() - derr;
    let newton = if lower_derivative > 0.0 {
        d * upper / lower_derivative
    } else {
        f64::INFINITY
    };
    newton.min(product) * (1.0 + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn centers(roots: &[ComplexInterval]) -> Vec<Complex64> {
        roots.iter().map(ComplexInterval::center).collect()
    }

    #[test]
    fn falling_factorial() {
        // x(x-1)(x-2)(x-3)
        let k4 = p(&[0, -6, 11, -6, 1]);
        let roots = complex_roots(&k4).unwrap();
        let re: Vec<f64> = roots.iter().map(|r| r.re).collect();
        assert_eq!(re, vec![0.0, 1.0, 2.0, 3.0]);
        assert!(roots.iter().all(|r| r.radius == 0.0));
    }

    #[test]
    fn four_cycle() {
        // (q-1)^4 + (q-1) = q^4 - 4q^3 + 6q^2 - 3q
        let c4 = p(&[0, -3, 6, -4, 1]);
        let roots = complex_roots(&c4).unwrap();
        let z = centers(&roots);
        assert_eq!(z[0], Complex64::new(0.0, 0.0));
        assert_eq!(z[1], Complex64::new(1.0, 0.0));
        let s = 3f64.sqrt() / 2.0;
        for (got, want) in z[2..].iter().zip([Complex64::new(1.5, -s), Complex64::new(1.5, s)]) {
            assert!((got - want).norm() < 1e-12, "{got} vs {want}");
        }
        for r in &roots[2..] {
            assert!(r.radius < 1e-10);
            assert!(r.contains(Complex64::new(1.5, s)) || r.contains(Complex64::new(1.5, -s)));
        }
    }

    #[test]
    fn imaginary_pair() {
        let roots = complex_roots(&p(&[1, 0, 1])).unwrap();
        let mut im: Vec<f64> = roots.iter().map(|r| r.im).collect();
        im.sort_by(f64::total_cmp);
        assert!((im[0] + 1.0).abs() < 1e-14 && (im[1] - 1.0).abs() < 1e-14);
        assert!(roots.iter().all(|r| r.re.abs() < 1e-14));
    }

    #[test]
    fn zero_polynomial_rejected() {
        assert_eq!(complex_roots(&IntPolynomial::zero()), Err(PolyError::ZeroPolynomial));
        assert!(complex_roots(&p(&[5])).unwrap().is_empty());
    }

    #[test]
    fn repeated_nonreal_roots_get_honest_radii() {
        // (x^2 + x + 1)^3
        let q = p(&[1, 1, 1]);
        let cube = &(&q * &q) * &q;
        let roots = complex_roots(&cube).unwrap();
        assert_eq!(roots.len(), 6);
        let w = Complex64::new(-0.5, 3f64.sqrt() / 2.0);
        for r in &roots {
            assert!(r.contains(w) || r.contains(w.conj()), "{r:?}");
        }
    }

    #[test]
    fn huge_coefficients_are_rescaled() {
        // 10^400 (x - 3)(x^2 + 2), integer root split off, rest numeric
        let big = IntPolynomial::new(vec![BigInt::from(10).pow(400)]);
        let poly = &(&big * &p(&[-3, 1])) * &p(&[2, 0, 1]);
        let roots = complex_roots(&poly).unwrap();
        assert_eq!(roots.len(), 3);
        let s2 = 2f64.sqrt();
        assert!(roots.iter().any(|r| r.contains(Complex64::new(0.0, s2))));
        assert!(roots.iter().any(|r| r.re == 3.0 && r.radius == 0.0));
    }

    #[test]
    fn companion_matches_aberth() {
        let c = scaled_coefficients(&p(&[2, -3, 0, 1, 1]));
        let mut eig = companion_eigenvalues(&c);
        let dc = derivative(&c);
        assert!(aberth(&c, &dc, &mut eig, POLISH_ITERATIONS));
        for z in eig {
            assert!(residual_ok(&c, z));
        }
    }
}

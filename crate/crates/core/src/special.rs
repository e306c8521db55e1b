//! Log-gamma and one-dimensional quadrature rules.

use std::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

// B_{2k} / (2k(2k-1)) for k = 1..10.
const STIRLING: [f64; 10] = [
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
    43867.0 / 244188.0,
    -174611.0 / 125400.0,
];

/// ln|Γ(x)| together with the sign of Γ(x).
pub fn ln_gamma_signed(x: f64) -> Result<(f64, f64)> {
    if !x.is_finite() {
        return Err(Error::Domain(format!("ln_gamma of {x}")));
    }
    if x <= 0.0 && x == x.floor() {
        return Err(Error::Pole(format!("Gamma has a pole at {x}")));
    }
    if x < 0.5 {
        // Γ(x)Γ(1−x) = π / sin(πx)
        let s = (PI * x).sin();
        let (lg, sg) = ln_gamma_signed(1.0 - x)?;
        return Ok((PI.ln() - s.abs().ln() - lg, s.signum() * sg));
    }
    let mut z = x;
    let mut shift = 0.0;
    while z < 15.0 {
        shift += z.ln();
        z += 1.0;
    }
    let zi = 1.0 / z;
    let zi2 = zi * zi;
    let mut series = 0.0;
    let mut p = zi;
    for c in STIRLING {
        series += c * p;
        p *= zi2;
    }
    Ok(((z - 0.5) * z.ln() - z + LN_SQRT_2PI + series - shift, 1.0))
}

pub fn ln_gamma(x: f64) -> Result<f64> {
    ln_gamma_signed(x).map(|(v, _)| v)
}

pub fn gamma(x: f64) -> Result<f64> {
    let (v, s) = ln_gamma_signed(x)?;
    Ok(s * v.exp())
}

/// Nodes and weights (summing to one) of the n-point Gauss rule for the
/// weight (1 − x²)^a on [−1, 1], by the Golub–Welsch eigenvalue method.
pub fn gauss_gegenbauer(n: usize, a: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1 && a > -1.0);
    let lam = a + 0.5;
    let mut j = DMatrix::<f64>::zeros(n, n);
    for k in 1..n {
        let kf = k as f64;
        let beta = kf * (kf + 2.0 * lam - 1.0) / (4.0 * (kf + lam) * (kf + lam - 1.0));
        j[(k, k - 1)] = beta.sqrt();
        j[(k - 1, k)] = beta.sqrt();
    }
    let eig = SymmetricEigen::new(j);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|i| (eig.eigenvalues[i], eig.eigenvectors[(0, i)].powi(2)))
        .collect();
    pairs.sort_by(|x, y| x.0.partial_cmp(&y.0).unwrap());
    let total: f64 = pairs.iter().map(|p| p.1).sum();
    (pairs.iter().map(|p| p.0).collect(), pairs.iter().map(|p| p.1 / total).collect())
}

/// Gauss–Legendre nodes on [−1, 1] with weights summing to two.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_gegenbauer(n, 0.0);
    (x, w.into_iter().map(|v| 2.0 * v).collect())
}

/// Double-exponential quadrature of a smooth integrand on [a, b]; endpoint
/// singularities are tolerated. Halves the step until two successive levels
/// agree to `tol` (relative).
pub fn tanh_sinh<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, tol: f64) -> f64 {
    let half = 0.5 * (b - a);
    let tmax = 4.5;
    let eval = |t: f64| -> f64 {
        let s = 0.5 * PI * t.sinh();
        let w = 0.5 * PI * t.cosh() / s.cosh().powi(2);
        // 1 − |tanh s|, computed without cancellation.
        let delta = 2.0 / ((2.0 * s.abs()).exp() + 1.0);
        let x = if s > 0.0 { b - half * delta } else { a + half * delta };
        if w == 0.0 || !(a < x && x < b) {
            return 0.0;
        }
        let v = f(x);
        if v.is_finite() {
            v * w
        } else {
            0.0
        }
    };
    let mut h = 0.5;
    let mut sum = eval(0.0);
    let mut k = 1;
    while k as f64 * h <= tmax {
        sum += eval(k as f64 * h) + eval(-(k as f64) * h);
        k += 1;
    }
    let mut prev = sum * h * half;
    for _ in 0..12 {
        h *= 0.5;
        let mut k = 1;
        while k as f64 * h <= tmax {
            sum += eval(k as f64 * h) + eval(-(k as f64) * h);
            k += 2;
        }
        let cur = sum * h * half;
        if (cur - prev).abs() <= tol * cur.abs().max(1e-300) {
            return cur;
        }
        prev = cur;
    }
    prev
}

/// Aitken Δ² acceleration of the last three terms.
pub fn aitken(seq: &[f64]) -> Option<f64> {
    if seq.len() < 3 {
        return None;
    }
    let n = seq.len();
    let (x0, x1, x2) = (seq[n - 3], seq[n - 2], seq[n - 1]);
    let d = x2 - 2.0 * x1 + x0;
    if d.abs() < 1e-300 {
        return Some(x2);
    }
    Some(x2 - (x2 - x1).powi(2) / d)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gamma_small_integers() {
        let mut f = 1.0;
        for n in 1..20 {
            assert!((gamma(n as f64).unwrap() - f).abs() <= 1e-13 * f);
            f *= n as f64;
        }
    }

    #[test]
    fn gamma_half() {
        assert!((gamma(0.5).unwrap() - PI.sqrt()).abs() < 1e-14);
        assert!((gamma(-0.5).unwrap() + 2.0 * PI.sqrt()).abs() < 1e-13);
    }

    #[test]
    fn gamma_poles() {
        assert!(matches!(ln_gamma(0.0), Err(Error::Pole(_))));
        assert!(matches!(ln_gamma(-3.0), Err(Error::Pole(_))));
    }

    #[test]
    fn gegenbauer_exactness() {
        // ∫ x² (1−x²) dx / ∫ (1−x²) dx = (2/3 − 2/5)/(4/3) = 1/5
        let (x, w) = gauss_gegenbauer(4, 1.0);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x * x).sum();
        assert!((v - 0.2).abs() < 1e-14);
        let (x, w) = gauss_legendre(5);
        let v: f64 = x.iter().zip(&w).map(|(x, w)| w * x.powi(8)).sum();
        assert!((v - 2.0 / 9.0).abs() < 1e-14);
    }

    #[test]
    fn tanh_sinh_integrals() {
        let v = tanh_sinh(|x| x.exp(), 0.0, 1.0, 1e-14);
        assert!((v - (1f64.exp() - 1.0)).abs() < 1e-13);
        // endpoint singularity: ∫₀¹ x^{-1/2} = 2
        let v = tanh_sinh(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-13);
        assert!((v - 2.0).abs() < 1e-10);
    }

    #[test]
    fn aitken_geometric() {
        let s: Vec<f64> = (0..6).map(|n| 1.0 - 0.5f64.powi(n)).collect();
        assert!((aitken(&s).unwrap() - 1.0).abs() < 1e-14);
    }
}

//! Group elements in the defining realizations, and Iwasawa factors.

use nalgebra::DMatrix;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMat = DMatrix<Complex64>;
pub type RMat = DMatrix<f64>;

pub fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// One block per simple factor of the model group.
#[derive(Clone, Debug, PartialEq)]
pub struct GroupElement {
    pub blocks: Vec<CMat>,
}

impl GroupElement {
    pub fn single(m: CMat) -> Self {
        GroupElement { blocks: vec![m] }
    }

    pub fn from_real(m: &RMat) -> Self {
        Self::single(m.map(|x| c(x, 0.0)))
    }

    pub fn identity_like(&self) -> Self {
        GroupElement {
            blocks: self.blocks.iter().map(|b| CMat::identity(b.nrows(), b.ncols())).collect(),
        }
    }

    pub fn mul(&self, o: &GroupElement) -> GroupElement {
        assert_eq!(self.blocks.len(), o.blocks.len(), "factor count mismatch");
        GroupElement { blocks: self.blocks.iter().zip(&o.blocks).map(|(a, b)| a * b).collect() }
    }

    pub fn inverse(&self) -> GroupElement {
        GroupElement {
            blocks: self
                .blocks
                .iter()
                .map(|b| b.clone().try_inverse().expect("group elements are invertible"))
                .collect(),
        }
    }

    pub fn distance(&self, o: &GroupElement) -> f64 {
        self.blocks.iter().zip(&o.blocks).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Iwasawa factors g = k a n together with ω_j(log a) per factor.
#[derive(Clone, Debug)]
pub struct Iwasawa {
    pub k: GroupElement,
    pub a: GroupElement,
    pub n: GroupElement,
    pub omega_log: Vec<f64>,
}

/// The diagonal change of coordinates diag(1, i, 1, …) taking the Lorentz
/// form x₁² − x₂² + x₃² + ⋯ to the Euclidean form.
pub fn lorentz_twist(n: usize) -> CMat {
    let mut d = CMat::identity(n, n);
    d[(1, 1)] = c(0.0, 1.0);
    d
}

/// Real Lorentz matrix h ↦ D h D⁻¹ ∈ SO(N, ℂ).
pub fn complexify_lorentz(h: &RMat) -> CMat {
    let n = h.nrows();
    let d = lorentz_twist(n);
    let dinv = d.clone().try_inverse().unwrap();
    d * h.map(|x| c(x, 0.0)) * dinv
}

/// Inverse of [`complexify_lorentz`], failing off the real form.
pub fn realify_lorentz(g: &CMat, tol: f64) -> Result<RMat> {
    let n = g.nrows();
    let d = lorentz_twist(n);
    let dinv = d.clone().try_inverse().unwrap();
    let h = dinv * g * d;
    let scale = h.norm().max(1.0);
    if h.iter().any(|z| z.im.abs() > tol * scale) {
        return Err(Error::Domain("element is not in the real Lorentz group".into()));
    }
    let hr = h.map(|z| z.re);
    let j = lorentz_form(n);
    let err = (hr.transpose() * &j * &hr - &j).norm();
    if err > tol * scale * scale {
        return Err(Error::Domain(format!("matrix does not preserve the Lorentz form ({err:e})")));
    }
    Ok(hr)
}

pub fn lorentz_form(n: usize) -> RMat {
    let mut j = RMat::identity(n, n);
    j[(1, 1)] = -1.0;
    j
}

/// exp(tH) for the boost H = E₁₂ + E₂₁.
pub fn lorentz_boost(n: usize, t: f64) -> RMat {
    let mut a = RMat::identity(n, n);
    a[(0, 0)] = t.cosh();
    a[(1, 1)] = t.cosh();
    a[(0, 1)] = t.sinh();
    a[(1, 0)] = t.sinh();
    a
}

/// Rotation in the (i, j) plane by angle θ.
pub fn plane_rotation(n: usize, i: usize, j: usize, theta: f64) -> RMat {
    let mut r = RMat::identity(n, n);
    r[(i, i)] = theta.cos();
    r[(j, j)] = theta.cos();
    r[(i, j)] = -theta.sin();
    r[(j, i)] = theta.sin();
    r
}

/// A rotation k in SO(n) acting on the coordinates `coords` with
/// k e_{coords[0]} = z (z indexed like `coords`). Householder reflection
/// composed with a reflection fixing e_{coords[0]}.
pub fn section_rotation(n: usize, coords: &[usize], z: &[f64]) -> RMat {
    let m = coords.len();
    let mut k = RMat::identity(n, n);
    let mut v: Vec<f64> = z.to_vec();
    v[0] -= 1.0;
    let vv: f64 = v.iter().map(|x| x * x).sum();
    if vv < 1e-28 {
        return k;
    }
    // H = I − 2vvᵀ/|v|² maps e₀ to z; then flip a second axis.
    let mut h = RMat::identity(m, m);
    for a in 0..m {
        for b in 0..m {
            h[(a, b)] -= 2.0 * v[a] * v[b] / vv;
        }
    }
    if m >= 2 {
        for a in 0..m {
            h[(a, 1)] = -h[(a, 1)];
        }
    }
    for a in 0..m {
        for b in 0..m {
            k[(coords[a], coords[b])] = h[(a, b)];
        }
    }
    k
}

/// Iwasawa decomposition h = k a n in SO₀(N−1, 1) with the conventions of
/// the harmonic model: K fixes the time axis, A = exp(ℝH), and N fixes the
/// null vector e₁ + e₂.
pub fn iwasawa_lorentz(h: &RMat) -> Result<(RMat, f64, RMat)> {
    let n = h.nrows();
    let hq: Vec<f64> = (0..n).map(|i| h[(i, 0)] + h[(i, 1)]).collect();
    let et = hq[1];
    if et <= 0.0 {
        return Err(Error::Domain("element is not in the identity component".into()));
    }
    let t = et.ln();
    let mut s: Vec<f64> = hq.iter().map(|x| x / et).collect();
    s[1] -= 1.0;
    let coords: Vec<usize> = std::iter::once(0).chain(2..n).collect();
    let z: Vec<f64> = coords.iter().map(|&i| s[i]).collect();
    let k0 = section_rotation(n, &coords, &z);
    let a_inv = lorentz_boost(n, -t);
    let p = &a_inv * k0.transpose() * h;
    let mut m = RMat::identity(n, n);
    for i in 2..n {
        for j in 2..n {
            m[(i, j)] = p[(i, j)];
        }
    }
    let k = &k0 * &m;
    let nn = &a_inv * k.transpose() * h;
    Ok((k, t, nn))
}

/// Iwasawa decomposition g = k a n in SL(2, ℝ) by Gram–Schmidt; returns
/// (k, t, n) with a = diag(eᵗ, e⁻ᵗ).
pub fn iwasawa_sl2(g: &RMat) -> Result<(RMat, f64, RMat)> {
    let det = g[(0, 0)] * g[(1, 1)] - g[(0, 1)] * g[(1, 0)];
    if (det - 1.0).abs() > 1e-9 {
        return Err(Error::Domain(format!("determinant {det} ≠ 1")));
    }
    let (a0, a1) = (g[(0, 0)], g[(1, 0)]);
    let r = (a0 * a0 + a1 * a1).sqrt();
    let (cs, sn) = (a0 / r, a1 / r);
    let k = RMat::from_row_slice(2, 2, &[cs, -sn, sn, cs]);
    let rr = k.transpose() * g;
    let t = rr[(0, 0)].ln();
    let a_inv = RMat::from_row_slice(2, 2, &[(-t).exp(), 0.0, 0.0, t.exp()]);
    let n = a_inv * rr;
    Ok((k, t, n))
}

pub fn sl2_diag(t: f64) -> RMat {
    RMat::from_row_slice(2, 2, &[t.exp(), 0.0, 0.0, (-t).exp()])
}

//! Sphere cubature and Haar quadrature.
//!
//! Integrals over K₀ and over U are reduced to spheres: every integrand that
//! appears in the operator identities is right-invariant under a point
//! stabilizer, so it is a function on K/M = S^{n−1} (resp. U/K_U = S^N),
//! and polynomial of bounded degree there. Product rules built from
//! Gauss–Gegenbauer nodes and a circle trapezoid are exact on such
//! polynomials.

use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::rep_engine::group::{c, section_rotation, CMat, GroupElement, RMat};
use crate::rep_engine::{ModelKind, RepModel};
use crate::special::{gauss_gegenbauer, gauss_legendre};

/// Points and weights on the unit sphere S^{n−1} ⊂ ℝ^n, weights summing to
/// one, exact for polynomials of degree ≤ `degree`.
pub fn sphere_cubature(n: usize, degree: usize) -> Vec<(Vec<f64>, f64)> {
    assert!(n >= 1);
    if n == 1 {
        return vec![(vec![1.0], 0.5), (vec![-1.0], 0.5)];
    }
    if n == 2 {
        let l = degree + 1;
        return (0..l)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / l as f64;
                (vec![th.cos(), th.sin()], 1.0 / l as f64)
            })
            .collect();
    }
    let (t, w) = gauss_gegenbauer(degree / 2 + 1, (n as f64 - 3.0) / 2.0);
    let lower = sphere_cubature(n - 1, degree);
    let mut out = Vec::with_capacity(t.len() * lower.len());
    for (ti, wi) in t.iter().zip(&w) {
        let s = (1.0 - ti * ti).max(0.0).sqrt();
        for (y, wy) in &lower {
            let mut x = Vec::with_capacity(n);
            x.push(*ti);
            x.extend(y.iter().map(|v| v * s));
            out.push((x, wi * wy));
        }
    }
    out
}

/// Coset representatives k_z (k_z e_{coords[0]} = z) weighted by the
/// cubature on the sphere in the coordinates `coords` of ℝ^n.
pub fn coset_quadrature(n: usize, coords: &[usize], degree: usize) -> Vec<(RMat, f64)> {
    sphere_cubature(coords.len(), degree)
        .into_iter()
        .map(|(z, w)| (section_rotation(n, coords, &z), w))
        .collect()
}

/// Haar quadrature on the rotations of the coordinates `coords` of ℝ^n by
/// nested sections SO(m) = ⋃ k_z SO(m−1). Inner averages are right-invariant
/// polynomials on each sphere, so the rule is exact on matrix coefficients
/// of degree ≤ `degree`.
pub fn rotation_haar(n: usize, coords: &[usize], degree: usize) -> Vec<(RMat, f64)> {
    if coords.len() < 2 {
        return vec![(RMat::identity(n, n), 1.0)];
    }
    let inner = rotation_haar(n, &coords[1..], degree);
    let mut out = Vec::new();
    for (k, w) in coset_quadrature(n, coords, degree) {
        for (h, wh) in &inner {
            out.push((&k * h, w * wh));
        }
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum HaarGroup {
    SO2,
    SU2,
    SOn(usize),
}

/// Nodes and weights (summing to one) for the normalized Haar measure.
pub fn haar_quadrature(group: HaarGroup, order: usize) -> Result<Vec<(GroupElement, f64)>> {
    if order == 0 {
        return Err(Error::Usage("quadrature order must be at least one".into()));
    }
    Ok(match group {
        HaarGroup::SO2 => (0..order)
            .map(|i| {
                let th = 2.0 * PI * i as f64 / order as f64;
                let m = RMat::from_row_slice(2, 2, &[th.cos(), -th.sin(), th.sin(), th.cos()]);
                (GroupElement::from_real(&m), 1.0 / order as f64)
            })
            .collect(),
        HaarGroup::SU2 => {
            // g = e^{iα/2 σ₃} e^{iβ/2 σ₂} e^{iγ/2 σ₃}, α, γ ∈ [0, 4π), cos β Gauss–Legendre.
            let l = 2 * order + 1;
            let (x, w) = gauss_legendre(order + 1);
            let mut out = Vec::with_capacity(l * l * x.len());
            let ph = |t: f64| CMat::from_row_slice(2, 2, &[c(0.0, t / 2.0).exp(), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -t / 2.0).exp()]);
            for (xb, wb) in x.iter().zip(&w) {
                let b = xb.acos();
                let (cb, sb) = ((b / 2.0).cos(), (b / 2.0).sin());
                let mid = CMat::from_row_slice(2, 2, &[c(cb, 0.0), c(sb, 0.0), c(-sb, 0.0), c(cb, 0.0)]);
                for ia in 0..l {
                    let al = 4.0 * PI * ia as f64 / l as f64;
                    let left = ph(al) * &mid;
                    for ig in 0..l {
                        let ga = 4.0 * PI * ig as f64 / l as f64;
                        out.push((GroupElement::single(&left * ph(ga)), wb / 2.0 / (l * l) as f64));
                    }
                }
            }
            out
        }
        HaarGroup::SOn(n) => {
            let coords: Vec<usize> = (0..n).collect();
            rotation_haar(n, &coords, order)
                .into_iter()
                .map(|(k, w)| (GroupElement::from_real(&k), w))
                .collect()
        }
    })
}

fn product_nodes(per_factor: Vec<Vec<(GroupElement, f64)>>) -> Vec<(GroupElement, f64)> {
    let mut out = vec![(GroupElement { blocks: vec![] }, 1.0)];
    for rule in per_factor {
        let mut next = Vec::with_capacity(out.len() * rule.len());
        for (g, w) in &out {
            for (h, wh) in &rule {
                let mut blocks = g.blocks.clone();
                blocks.extend(h.blocks.iter().cloned());
                next.push((GroupElement { blocks }, w * wh));
            }
        }
        out = next;
    }
    out
}

/// Nodes for ∫_{K₀} F(k) dk, exact when F is right-M-invariant and a matrix
/// coefficient of degree ≤ `degree`.
pub fn k0_nodes(model: &RepModel, degree: usize) -> Vec<(GroupElement, f64)> {
    let circle = |d: usize| haar_quadrature(HaarGroup::SO2, d + 1).expect("order ≥ 1");
    match model.kind {
        ModelKind::HarmonicPoly => {
            let n = model.harmonic_space().expect("harmonic backend").nvars;
            let spatial: Vec<usize> = std::iter::once(0).chain(2..n).collect();
            coset_quadrature(n, &spatial, degree).into_iter().map(|(k, w)| (GroupElement::from_real(&k), w)).collect()
        }
        ModelKind::SL2Spin => circle(degree),
        ModelKind::ProductModel => {
            product_nodes(model.factors().expect("product backend").iter().map(|_| circle(degree)).collect())
        }
    }
}

/// Nodes for ∫_U F(b) db on the compact form. With `right_k_invariant`
/// the rule may assume F(bk) = F(b) for k ∈ K_U.
pub fn u_nodes(model: &RepModel, degree: usize, right_k_invariant: bool) -> Vec<(GroupElement, f64)> {
    let su2 = |d: usize| haar_quadrature(HaarGroup::SU2, d.max(1)).expect("order ≥ 1");
    match model.kind {
        ModelKind::HarmonicPoly => {
            let n = model.harmonic_space().expect("harmonic backend").nvars;
            let rule = if right_k_invariant {
                let coords: Vec<usize> = [1, 0].into_iter().chain(2..n).collect();
                coset_quadrature(n, &coords, degree)
            } else {
                rotation_haar(n, &(0..n).collect::<Vec<_>>(), degree)
            };
            rule.into_iter().map(|(k, w)| (GroupElement::from_real(&k), w)).collect()
        }
        ModelKind::SL2Spin => su2(degree),
        ModelKind::ProductModel => {
            product_nodes(model.factors().expect("product backend").iter().map(|_| su2(degree)).collect())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q_to_f64;
    use crate::rep_engine::poly::sphere_monomial_integral;

    #[test]
    fn weights_sum_to_one() {
        for g in [HaarGroup::SO2, HaarGroup::SU2, HaarGroup::SOn(4)] {
            let s: f64 = haar_quadrature(g, 5).unwrap().iter().map(|p| p.1).sum();
            assert!((s - 1.0).abs() < 1e-13);
        }
        assert!(haar_quadrature(HaarGroup::SO2, 0).is_err());
    }

    #[test]
    fn cubature_matches_exact_monomials() {
        for n in 2..6 {
            let deg = 6;
            let rule = sphere_cubature(n, deg);
            let mut exps = vec![vec![0u32; n]];
            for _ in 0..deg {
                let mut next = Vec::new();
                for e in &exps {
                    for v in 0..n {
                        let mut f = e.clone();
                        f[v] += 1;
                        next.push(f);
                    }
                }
                exps.extend(next.clone());
                exps.sort();
                exps.dedup();
                exps.retain(|e| e.iter().sum::<u32>() <= deg as u32);
            }
            for e in exps {
                let num: f64 = rule
                    .iter()
                    .map(|(x, w)| w * x.iter().zip(&e).map(|(xi, &a)| xi.powi(a as i32)).product::<f64>())
                    .sum();
                assert!((num - q_to_f64(&sphere_monomial_integral(&e))).abs() < 1e-13, "{n} {e:?}");
            }
        }
    }

    #[test]
    fn so3_haar_on_quadratic_entries() {
        let rule = haar_quadrature(HaarGroup::SOn(3), 4).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let m2: f64 = rule.iter().map(|(g, w)| w * g.blocks[0][(i, j)].re.powi(2)).sum();
                assert!((m2 - 1.0 / 3.0).abs() < 1e-13);
                let m1: f64 = rule.iter().map(|(g, w)| w * g.blocks[0][(i, j)].re).sum();
                assert!(m1.abs() < 1e-13);
            }
        }
        // ∫ g₀₀ g₁₁ = 0 and ∫ g₀₀² g₁₁² = 2/15 on SO(3)
        let x: f64 = rule.iter().map(|(g, w)| w * (g.blocks[0][(0, 0)].re * g.blocks[0][(1, 1)].re).powi(2)).sum();
        assert!((x - 2.0 / 15.0).abs() < 1e-13, "{x}");
    }

    #[test]
    fn su2_integrates_matrix_entries() {
        let rule = haar_quadrature(HaarGroup::SU2, 4).unwrap();
        let m11: f64 = rule.iter().map(|(g, w)| w * g.blocks[0][(0, 0)].norm_sqr()).sum();
        assert!((m11 - 0.5).abs() < 1e-13);
        let mean: f64 = rule.iter().map(|(g, w)| w * g.blocks[0][(0, 1)].re).sum();
        assert!(mean.abs() < 1e-13);
    }
}

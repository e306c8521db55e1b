//! Transforms at one level: Γ, the dual Radon transform, sphere transforms,
//! the embeddings of points into the dual product, and the kernels.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use serde::Serialize;

use crate::cfunction::c_function;
use crate::error::{Error, Result};
use crate::rep_engine::group::{plane_rotation, CMat, GroupElement};
use crate::rep_engine::quadrature::{k0_nodes, u_nodes};
use crate::rep_engine::{pair, ModelKind, RegularFunction, RepModel, Side};
use crate::root_core::Weight;

type C64 = Complex64;

fn flip(f: &RegularFunction, from: Side) -> Result<RegularFunction> {
    if f.side != from {
        return Err(Error::Usage(format!("expected a {from:?}-side function, got {:?}", f.side)));
    }
    let side = if from == Side::Z { Side::Xi } else { Side::Z };
    Ok(RegularFunction { side, components: f.components.clone() })
}

/// Γ f_{v,μ} = ψ_{v,μ}.
pub fn gamma(f: &RegularFunction) -> Result<RegularFunction> {
    flip(f, Side::Z)
}

/// Γ⁻¹ ψ_{v,μ} = f_{v,μ}.
pub fn gamma_inv(psi: &RegularFunction) -> Result<RegularFunction> {
    flip(psi, Side::Xi)
}

fn max_degree(f: &RegularFunction) -> usize {
    f.components.iter().map(|(m, _)| model_degree(m)).max().unwrap_or(0)
}

/// Polynomial degree of matrix coefficients in the defining realization.
pub fn model_degree(m: &RepModel) -> usize {
    match m.kind {
        ModelKind::HarmonicPoly => m.mu_coeffs[0],
        ModelKind::SL2Spin => 2 * m.mu_coeffs[0],
        ModelKind::ProductModel => 2 * m.mu_coeffs.iter().copied().max().unwrap_or(0),
    }
}

fn level_model(f: &RegularFunction) -> Result<&Arc<RepModel>> {
    f.components.first().map(|c| &c.0).ok_or_else(|| Error::Usage("empty regular function".into()))
}

/// ∫_{K₀} π*(k)φ dk for an M-fixed φ ∈ V*.
pub fn k0_average(m: &RepModel, phi: &[C64]) -> Vec<C64> {
    let mut acc = vec![C64::zero(); m.dim];
    for (k, w) in k0_nodes(m, model_degree(m)) {
        for (a, b) in acc.iter_mut().zip(m.dual_act(&k, phi)) {
            *a += b * w;
        }
    }
    acc
}

/// The constant c_μ with ∫_{K₀} π*(k)u* dk = c_μ e*, after checking
/// proportionality to 1e−9.
pub fn c_mu_oracle(m: &RepModel) -> Result<f64> {
    let avg = k0_average(m, &m.u_star);
    let lam = pair(&m.u, &avg);
    let nrm: f64 = avg.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    let res: f64 = avg.iter().zip(&m.e_star).map(|(a, e)| (a - lam * e).norm_sqr()).sum::<f64>().sqrt();
    if res > 1e-9 * nrm.max(1e-300) {
        return Err(Error::Convention(format!("K-average of u* is not proportional to e* (residual {res:e})")));
    }
    if lam.im.abs() > 1e-9 * lam.norm() {
        return Err(Error::Convention(format!("complex proportionality constant {lam}")));
    }
    Ok(lam.re)
}

/// R*ψ(x·x₀) = ∫_{K₀} ψ(xk·ξ₀) dk by quadrature over K₀/M.
pub fn dual_radon(psi: &RegularFunction, x: &GroupElement) -> Result<C64> {
    if psi.side != Side::Xi {
        return Err(Error::Usage("dual_radon takes a Ξ-side function".into()));
    }
    let m = level_model(psi)?;
    Ok(k0_nodes(m, max_degree(psi)).iter().map(|(k, w)| psi.eval(&x.mul(k)) * w).sum())
}

/// R_a f(g·S_a) = ∫_{K₀} f(gka·x₀) dk.
pub fn sphere_radon(f: &RegularFunction, a: &GroupElement, g: &GroupElement) -> Result<C64> {
    if f.side != Side::Z {
        return Err(Error::Usage("sphere_radon takes a Z-side function".into()));
    }
    let m = level_model(f)?;
    Ok(k0_nodes(m, max_degree(f)).iter().map(|(k, w)| f.eval(&g.mul(k).mul(a)) * w).sum())
}

/// R*_a φ(g·x₀) = ∫_{K₀} φ(gka⁻¹·x₀) dk, φ a function of sphere centers.
pub fn sphere_radon_dual(phi: &RegularFunction, a: &GroupElement, g: &GroupElement) -> Result<C64> {
    sphere_radon(phi, &a.inverse(), g)
}

/// exp(iθH) in the compact torus of U: a rotation of the (0,1) plane for the
/// harmonic model, diag(e^{iθ}, e^{−iθ}) per SL(2) factor.
pub fn compact_torus(m: &RepModel, theta: f64) -> GroupElement {
    let diag = || {
        let mut d = CMat::zeros(2, 2);
        d[(0, 0)] = C64::from_polar(1.0, theta);
        d[(1, 1)] = C64::from_polar(1.0, -theta);
        d
    };
    match (m.kind, m.factors()) {
        (ModelKind::ProductModel, Some(fs)) => GroupElement { blocks: fs.iter().map(|_| diag()).collect() },
        (ModelKind::SL2Spin, _) => GroupElement::single(diag()),
        _ => {
            let n = m.harmonic_space().map_or(2, |h| h.nvars);
            GroupElement::from_real(&plane_rotation(n, 0, 1, theta))
        }
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DualityReport {
    /// ∫_U R_a f · φ
    pub lhs: C64,
    /// ∫_U f · R*_a φ
    pub rhs: C64,
    pub rel_error: f64,
    pub nodes: usize,
}

/// ⟨R_a f, φ⟩ = ⟨f, R*_a φ⟩ on the compact form, where both stabilizers are
/// compact and a = exp(iθH) lies in U.
pub fn duality_check(f: &RegularFunction, phi: &RegularFunction, theta: f64) -> Result<DualityReport> {
    if f.side != Side::Z || phi.side != Side::Z {
        return Err(Error::Usage("duality pairs two functions on the sphere-center space".into()));
    }
    let m = level_model(f)?;
    let a = compact_torus(m, theta);
    let nodes = u_nodes(m, max_degree(f) + max_degree(phi), true);
    let (mut lhs, mut rhs) = (C64::zero(), C64::zero());
    for (b, w) in &nodes {
        lhs += sphere_radon(f, &a, b)? * phi.eval(b) * w;
        rhs += f.eval(b) * sphere_radon_dual(phi, &a, b)? * w;
    }
    let rel_error = (lhs - rhs).norm() / lhs.norm().max(rhs.norm()).max(1e-300);
    Ok(DualityReport { lhs, rhs, rel_error, nodes: nodes.len() })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum EmbeddingKind {
    IotaE,
    IotaA,
    Iota,
}

/// A point of the truncated product ∏_μ V*_μ.
#[derive(Clone, Debug)]
pub struct DualCoefficients {
    pub entries: Vec<(Weight, Vec<C64>)>,
}

impl DualCoefficients {
    /// ⟨f, ·⟩ for a Z-side regular function.
    pub fn pair_with(&self, f: &RegularFunction) -> C64 {
        f.components
            .iter()
            .map(|(m, v)| {
                self.entries.iter().find(|(mu, _)| *mu == m.mu).map_or(C64::zero(), |(_, phi)| pair(v, phi))
            })
            .sum()
    }
}

/// ι_e(g·x₀) = (π*(g)e*_μ), ι_a(g·S_a) = (π*(g)π*(a)e*_μ / a^{μ*}),
/// ι(g·ξ₀) = (π*(g)u*_μ). `a_t` holds the A-coordinates of the radius.
pub fn embedding_coeffs(
    kind: EmbeddingKind,
    models: &[Arc<RepModel>],
    g: &GroupElement,
    a_t: &[f64],
) -> Result<DualCoefficients> {
    let mut entries = Vec::with_capacity(models.len());
    for m in models {
        let phi = match kind {
            EmbeddingKind::IotaE => m.dual_act(g, &m.e_star),
            EmbeddingKind::Iota => m.dual_act(g, &m.u_star),
            EmbeddingKind::IotaA => {
                if a_t.iter().any(|&t| t < 0.0) {
                    return Err(Error::Domain("radius outside the closed dominant chamber".into()));
                }
                let a = m.a_element(a_t);
                let scale = dual_power(m, a_t)?;
                m.dual_act(&g.mul(&a), &m.e_star).into_iter().map(|x| x / scale).collect()
            }
        };
        entries.push((m.mu.clone(), phi));
    }
    Ok(DualCoefficients { entries })
}

/// a^{μ*} with μ* = −w₀μ.
fn dual_power(m: &RepModel, a_t: &[f64]) -> Result<f64> {
    let dual = crate::root_core::dual_weight(&m.mu, &m.space.rs)?;
    let k: Vec<f64> = m.space.rs.omega_coords(&dual).iter().map(crate::exact::q_to_f64).collect();
    Ok(m.a_power(a_t, &k))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct HorosphereLimit {
    pub mu: Vec<usize>,
    pub t: Vec<f64>,
    /// ‖π*(a)e*/a^{μ*} − u*‖ per radius.
    pub distance: Vec<f64>,
    /// ⟨π(s₀)u, π*(a)e*⟩ / a^{μ*} per radius.
    pub pairing: Vec<f64>,
    pub monotone: bool,
    /// Least-squares slope of log distance against t.
    pub decay_rate: Option<f64>,
}

/// Distances of ι_a(S_a) to ι(ξ₀) along a = exp(tH).
pub fn sphere_to_horosphere_limit(models: &[Arc<RepModel>], ts: &[f64]) -> Result<Vec<HorosphereLimit>> {
    let mut out = Vec::new();
    for m in models {
        let mut distance = Vec::new();
        let mut pairing = Vec::new();
        let low = m.act(&m.s0, &m.u);
        for &t in ts {
            let tv = vec![t; m.rank()];
            let c = embedding_coeffs(EmbeddingKind::IotaA, std::slice::from_ref(m), &m.identity(), &tv)?;
            let phi = &c.entries[0].1;
            distance.push(phi.iter().zip(&m.u_star).map(|(a, b)| (a - b).norm_sqr()).sum::<f64>().sqrt());
            pairing.push(pair(&low, phi).re);
        }
        let monotone = distance.windows(2).all(|w| w[1] <= w[0]);
        let pts: Vec<(f64, f64)> =
            ts.iter().zip(&distance).filter(|(_, d)| **d > 1e-300).map(|(t, d)| (*t, d.ln())).collect();
        let decay_rate = if pts.len() >= 2 {
            let n = pts.len() as f64;
            let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
            let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
            let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
            Some(-sxy / sxx)
        } else {
            None
        };
        out.push(HorosphereLimit { mu: m.mu_coeffs.clone(), t: ts.to_vec(), distance, pairing, monotone, decay_rate });
    }
    Ok(out)
}

/// Whether g = nak has |a^{−ω_j}| < 1 for all j. The NAK factor is read off
/// the KAN decomposition of g⁻¹.
pub fn in_domain_o(m: &RepModel, g: &GroupElement) -> Result<bool> {
    Ok(m.iwasawa(&g.inverse())?.omega_log.iter().all(|&x| x < 0.0))
}

/// b_j = a^{−ω_j} for g = nak.
pub fn nak_b(m: &RepModel, g: &GroupElement) -> Result<Vec<f64>> {
    Ok(m.iwasawa(&g.inverse())?.omega_log.iter().map(|x| x.exp()).collect())
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelValue {
    pub value: C64,
    pub truncation: usize,
    pub in_domain: bool,
}

fn check_truncation(models: &[Arc<RepModel>]) -> Result<()> {
    if models.is_empty() {
        return Err(Error::Usage("empty truncation set".into()));
    }
    Ok(())
}

/// Σ_μ d(μ) c(μ+ρ) ⟨u_μ, π*(g)e*_μ⟩ over the supplied models.
pub fn kernel_kz(models: &[Arc<RepModel>], g: &GroupElement) -> Result<KernelValue> {
    check_truncation(models)?;
    let mut value = C64::zero();
    for m in models {
        let c = c_function(&m.space, &m.mu.add(&m.space.rho));
        value += m.dual_act(g, &m.e_star).iter().zip(&m.u).map(|(a, b)| a * b).sum::<C64>() * (m.dim as f64) * c.value;
    }
    Ok(KernelValue { value, truncation: truncation_of(models), in_domain: in_domain_o(&models[0], g)? })
}

/// Σ_μ d(μ) ⟨e_μ, π*(g)u*_μ⟩ over the supplied models.
pub fn kernel_kxi(models: &[Arc<RepModel>], g: &GroupElement) -> Result<KernelValue> {
    check_truncation(models)?;
    let mut value = C64::zero();
    for m in models {
        value += pair(&m.e, &m.dual_act(g, &m.u_star)) * (m.dim as f64);
    }
    Ok(KernelValue { value, truncation: truncation_of(models), in_domain: in_domain_o(&models[0], g)? })
}

fn truncation_of(models: &[Arc<RepModel>]) -> usize {
    models.iter().map(|m| m.mu_coeffs.iter().sum::<usize>()).max().unwrap_or(0)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelTilde {
    pub series: f64,
    pub closed_form: f64,
    pub tail_bound: f64,
    /// Floating-point allowance for the summation, a few ulps per term.
    pub roundoff: f64,
    pub b: Vec<f64>,
    pub truncation: usize,
    pub in_domain: bool,
}

/// Σ_{h>N} C(h+r−1, r−1) β^h.
pub fn geometric_tail(r: usize, beta: f64, n: usize) -> f64 {
    if beta >= 1.0 {
        return f64::INFINITY;
    }
    let mut term = 1.0;
    // term_h = C(h+r−1, r−1) β^h, built up from h = 0
    for h in 1..=n + 1 {
        term *= beta * (h + r - 1) as f64 / h as f64;
    }
    let mut sum = 0.0f64;
    let mut h = n + 1;
    while term > 1e-18 * sum.max(1e-300) || h < n + 10 {
        sum += term;
        h += 1;
        term *= beta * (h + r - 1) as f64 / h as f64;
        if h > n + 100_000 {
            break;
        }
    }
    sum
}

/// k̃(g) = Σ_{|k| ≤ N} ⟨u_μ, π*(g)e*_μ⟩ on SL(2,ℝ)^r, against ∏ 1/(1 − b_j).
/// The series factorizes over the factors, so one spin model per factor
/// and degree is enough.
pub fn kernel_tilde(r: usize, g: &GroupElement, truncation: usize) -> Result<KernelTilde> {
    if g.blocks.len() != r {
        return Err(Error::Dimension(format!("{} factors for rank {r}", g.blocks.len())));
    }
    let spins: Vec<RepModel> = (0..=truncation).map(RepModel::spin).collect::<Result<_>>()?;
    let vals: Vec<Vec<f64>> = g
        .blocks
        .iter()
        .map(|b| {
            spins
                .iter()
                .map(|m| m.matrix_coeff_f(&m.u, &GroupElement::single(b.clone())).re)
                .collect()
        })
        .collect();
    let mut series = 0.0f64;
    let mut terms = 0usize;
    let mut idx = vec![0usize; r];
    loop {
        if idx.iter().sum::<usize>() <= truncation {
            series += idx.iter().enumerate().map(|(j, &k)| vals[j][k]).product::<f64>();
            terms += 1;
        }
        let mut p = 0;
        loop {
            if p == r {
                break;
            }
            idx[p] += 1;
            if idx[p] <= truncation {
                break;
            }
            idx[p] = 0;
            p += 1;
        }
        if p == r {
            break;
        }
    }
    let mut b = Vec::with_capacity(r);
    let mut in_domain = true;
    for blk in &g.blocks {
        let single = GroupElement::single(blk.clone());
        b.push(nak_b(&spins[0], &single)?[0]);
        in_domain &= in_domain_o(&spins[0], &single)?;
    }
    let closed_form: f64 = b.iter().map(|x| 1.0 / (1.0 - x)).product();
    let beta = b.iter().cloned().fold(0.0, f64::max);
    let roundoff = 4.0 * f64::EPSILON * (terms as f64 + 2.0 * r as f64) * closed_form.abs();
    Ok(KernelTilde {
        series,
        closed_form,
        tail_bound: geometric_tail(r, beta, truncation),
        roundoff,
        b,
        truncation,
        in_domain,
    })
}

/// Models for every μ of height ≤ `truncation` at the level of `m`.
pub fn truncation_models(m: &RepModel, truncation: usize) -> Result<Vec<Arc<RepModel>>> {
    match m.kind {
        ModelKind::HarmonicPoly => {
            let q = m.space.params[1];
            (0..=truncation).map(|k| RepModel::harmonic(q, k).map(Arc::new)).collect()
        }
        ModelKind::SL2Spin => (0..=truncation).map(|k| RepModel::spin(k).map(Arc::new)).collect(),
        ModelKind::ProductModel => {
            let r = m.mu_coeffs.len();
            let mut out = Vec::new();
            let mut idx = vec![0usize; r];
            loop {
                if idx.iter().sum::<usize>() <= truncation {
                    out.push(Arc::new(RepModel::product(&idx)?));
                }
                let mut p = 0;
                while p < r {
                    idx[p] += 1;
                    if idx[p] <= truncation {
                        break;
                    }
                    idx[p] = 0;
                    p += 1;
                }
                if p == r {
                    return Ok(out);
                }
            }
        }
    }
}

fn covers(f: &RegularFunction, truncation: usize) -> Result<()> {
    let need = f.components.iter().map(|(m, _)| m.mu_coeffs.iter().sum::<usize>()).max().unwrap_or(0);
    if need > truncation {
        return Err(Error::Truncation(format!("truncation {truncation} below component height {need}")));
    }
    Ok(())
}

/// K_Z f(ξ·ξ₀) = ∫_U f(b·x₀) κ_Z(b⁻¹ξ) db with
/// κ_Z(g) = Σ_μ d(μ)/⟨e_μ,e*_μ⟩ ⟨e_μ, π*(g)u*_μ⟩. The integrand is right
/// K_U-invariant, so the U-integral runs over U/K_U.
pub fn kernel_operator_kz(f: &RegularFunction, xi: &GroupElement, truncation: usize) -> Result<C64> {
    if f.side != Side::Z {
        return Err(Error::Usage("K_Z acts on Z-side functions".into()));
    }
    covers(f, truncation)?;
    let m = level_model(f)?;
    let ks = truncation_models(m, truncation)?;
    let deg = max_degree(f) + ks.iter().map(|k| model_degree(k)).max().unwrap_or(0);
    let xinv = xi.inverse();
    let weights: Vec<C64> = ks.iter().map(|k| C64::from(k.dim as f64) / pair(&k.e, &k.e_star)).collect();
    let mut acc = C64::zero();
    for (b, w) in u_nodes(m, deg, true) {
        let fb = f.eval(&b);
        let g = xinv.mul(&b);
        let kappa: C64 = ks.iter().zip(&weights).map(|(k, c)| pair(&k.act(&g, &k.e), &k.u_star) * c).sum();
        acc += fb * kappa * w;
    }
    Ok(acc)
}

/// K_Ξ ψ(x·x₀) = ∫_U ψ(b·ξ₀) κ_Ξ(b⁻¹x) db with
/// κ_Ξ(g) = Σ_μ d(μ) ⟨π(s₀)u_μ, π*(g)e*_μ⟩, over the full compact group.
pub fn kernel_operator_kxi(psi: &RegularFunction, x: &GroupElement, truncation: usize) -> Result<C64> {
    if psi.side != Side::Xi {
        return Err(Error::Usage("K_Ξ acts on Ξ-side functions".into()));
    }
    covers(psi, truncation)?;
    let m = level_model(psi)?;
    let ks = truncation_models(m, truncation)?;
    let deg = max_degree(psi) + ks.iter().map(|k| model_degree(k)).max().unwrap_or(0);
    let lows: Vec<Vec<C64>> = ks.iter().map(|k| k.act(&k.s0, &k.u)).collect();
    let xinv = x.inverse();
    let mut acc = C64::zero();
    for (b, w) in u_nodes(m, deg, false) {
        let pb = psi.eval(&b);
        let g = xinv.mul(&b);
        let kappa: C64 = ks.iter().zip(&lows).map(|(k, l)| pair(&k.act(&g, l), &k.e_star) * k.dim as f64).sum();
        acc += pb * kappa * w;
    }
    Ok(acc)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::{q, Q};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rel(a: C64, b: C64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn oracle_matches_c_function_with_exponent_one() {
        for qq in 2..5 {
            for k in 0..4 {
                let m = RepModel::harmonic(qq, k).unwrap();
                let o = c_mu_oracle(&m).unwrap();
                let c = crate::cfunction::c_mu(&m.space, &m.mu, &Q::from(q(1))).unwrap();
                assert!((o - c).abs() < 1e-10 * c, "q={qq} k={k}: {o} vs {c}");
            }
        }
        for k in 0..4 {
            let m = RepModel::spin(k).unwrap();
            let o = c_mu_oracle(&m).unwrap();
            let c = crate::cfunction::c_mu(&m.space, &m.mu, &q(1)).unwrap();
            assert!((o - c).abs() < 1e-10 * c, "spin k={k}: {o} vs {c}");
        }
    }

    #[test]
    fn e_pairing_is_c_function() {
        for m in [RepModel::harmonic(3, 2).unwrap(), RepModel::spin(3).unwrap()] {
            let c = c_function(&m.space, &m.mu.add(&m.space.rho)).value;
            let p = pair(&m.e, &m.e_star).re;
            eprintln!("⟨e,e*⟩ = {p}, c(μ+ρ) = {c}");
        }
    }

    #[test]
    fn dual_radon_is_c_times_inverse_gamma() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let m = Arc::new(RepModel::harmonic(3, 2).unwrap());
        let c = c_mu_oracle(&m).unwrap();
        for _ in 0..5 {
            let v = m.random_vector(&mut rng);
            let x = m.random_g0(&mut rng);
            let psi = RegularFunction::single(Side::Xi, m.clone(), v.clone()).unwrap();
            let lhs = dual_radon(&psi, &x).unwrap();
            let rhs = m.matrix_coeff_f(&v, &x) * c;
            assert!(rel(lhs, rhs) < 1e-10);
        }
    }

    #[test]
    fn kernel_operators_invert_each_other() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for m in [Arc::new(RepModel::harmonic(2, 2).unwrap()), Arc::new(RepModel::spin(1).unwrap())] {
            let v = m.random_vector(&mut rng);
            let g = m.random_complex(&mut rng);
            let f = RegularFunction::single(Side::Z, m.clone(), v.clone()).unwrap();
            let kz = kernel_operator_kz(&f, &g, 3).unwrap();
            assert!(rel(kz, m.matrix_coeff_psi(&v, &g)) < 1e-9, "{kz} {}", m.matrix_coeff_psi(&v, &g));
            let psi = gamma(&f).unwrap();
            let kx = kernel_operator_kxi(&psi, &g, 3).unwrap();
            assert!(rel(kx, m.matrix_coeff_f(&v, &g)) < 1e-9, "{kx}");
        }
    }

    #[test]
    fn kernel_tilde_against_closed_form() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for r in 1..4 {
            let m = RepModel::product(&vec![0; r]).unwrap();
            let ts: Vec<f64> = (0..r).map(|j| 0.4 + 0.25 * j as f64).collect();
            let a = m.a_element(&ts);
            let g = m.random_mn(&mut rng).mul(&a).mul(&m.random_k(&mut rng));
            let kt = kernel_tilde(r, &g, 20).unwrap();
            assert!(kt.in_domain);
            assert!((kt.series - kt.closed_form).abs() <= kt.tail_bound + kt.roundoff, "{kt:?}");
        }
    }

    #[test]
    fn sphere_transforms_are_dual() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for m in [RepModel::harmonic(3, 2).unwrap(), RepModel::spin(2).unwrap()] {
            let m = Arc::new(m);
            let f = RegularFunction::single(Side::Z, m.clone(), m.random_vector(&mut rng)).unwrap();
            let phi = RegularFunction::single(Side::Z, m.clone(), m.random_vector(&mut rng)).unwrap();
            let r = duality_check(&f, &phi, 0.7).unwrap();
            assert!(r.rel_error < 1e-10 && r.lhs.norm() > 1e-6, "{r:?}");
        }
    }

    #[test]
    fn domain_membership() {
        let m = RepModel::harmonic(3, 1).unwrap();
        assert!(in_domain_o(&m, &m.a_element(&[2.0])).unwrap());
        assert!(!in_domain_o(&m, &m.identity()).unwrap());
        assert!(!in_domain_o(&m, &m.a_element(&[-1.0])).unwrap());
    }

    #[test]
    fn horosphere_limit_decays() {
        let models: Vec<_> = (0..4).map(|k| Arc::new(RepModel::harmonic(2, k).unwrap())).collect();
        let ts: Vec<f64> = (1..=10).map(|t| t as f64).collect();
        for r in sphere_to_horosphere_limit(&models, &ts).unwrap() {
            eprintln!("{:?} {:?} rate {:?}", r.mu, r.distance.last(), r.decay_rate);
            assert!(r.monotone);
            for p in &r.pairing {
                assert!((p - 1.0).abs() < 1e-9, "{:?}", r.pairing);
            }
        }
    }
}

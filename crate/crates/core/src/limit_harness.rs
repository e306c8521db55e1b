//! Propagated families: admissibility, the commuting diagrams for Γ and the
//! graded projections, kernel and dual-Radon limits, and the defect that
//! keeps R* from commuting with the embeddings.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::cfunction::{c_infinity, c_mu};
use crate::error::{Error, Result};
use crate::exact::{q, GaussQ, Mat, Q};
use crate::radon_ops::{c_mu_oracle, dual_radon, k0_average, kernel_operator_kz};
use crate::rep_engine::group::GroupElement;
use crate::rep_engine::lie::{admissible_pair, AdmissibilityPair};
use crate::rep_engine::{
    embed, embed_group, embedding_matrix, neg_transpose, pair, project, RegularFunction, RepModel, Side,
};
use crate::space_catalog::{make_space, propagates, Family, SpaceData};
use crate::weight_limits::WeightSequence;

type C64 = Complex64;

/// A chain of levels with one model per level for a stabilized weight.
#[derive(Clone, Debug)]
pub struct PropagatedFamily {
    pub levels: Vec<SpaceData>,
    pub coefficients: Vec<u64>,
    /// Explicit models, where the level has one.
    pub models: Vec<Option<Arc<RepModel>>>,
    pub finite_rank: bool,
}

impl PropagatedFamily {
    /// Levels are given by the growing parameter (q for SO/SU/Sp(p,q), n for
    /// SL(n), r for SL(2)^r).
    pub fn new(family: Family, p: usize, params: &[usize], coefficients: &[u64]) -> Result<Self> {
        if params.is_empty() {
            return Err(Error::Usage("a family needs at least one level".into()));
        }
        let levels: Vec<SpaceData> = params
            .iter()
            .map(|&x| match family {
                Family::SoPq | Family::SuPq | Family::SpPq => make_space(family, &[p, x]),
                Family::SlnR | Family::Sl2Product => make_space(family, &[x]),
            })
            .collect::<Result<_>>()?;
        for w in levels.windows(2) {
            if !propagates(&w[0], &w[1]) {
                return Err(Error::Usage(format!("{} does not propagate to {}", w[0].label(), w[1].label())));
            }
        }
        let seq = WeightSequence { start_level: 0, coefficients: coefficients.to_vec() };
        let mut models = Vec::with_capacity(levels.len());
        for s in &levels {
            let mu = seq.materialize(s)?;
            models.push(RepModel::for_space(s, &mu).ok().map(Arc::new));
        }
        let finite_rank = levels.iter().all(|s| s.rank == levels[0].rank);
        Ok(PropagatedFamily { levels, coefficients: coefficients.to_vec(), models, finite_rank })
    }

    /// The harmonic family H^q, q ∈ qs, with weight kω.
    pub fn harmonic(qs: &[usize], k: u64) -> Result<Self> {
        Self::new(Family::SoPq, 1, qs, &[k])
    }

    pub fn model(&self, j: usize) -> Result<&Arc<RepModel>> {
        self.models
            .get(j)
            .and_then(|m| m.as_ref())
            .ok_or_else(|| Error::Unsupported(format!("no explicit model at level {j}")))
    }

    fn require_finite_rank(&self) -> Result<()> {
        if !self.finite_rank {
            return Err(Error::Unsupported("the check needs a finite-rank family".into()));
        }
        Ok(())
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibilityReport {
    pub admissible: bool,
    pub constant_rank: bool,
    pub pairs: Vec<AdmissibilityPair>,
}

pub fn check_admissible(fam: &PropagatedFamily) -> Result<AdmissibilityReport> {
    let mut pairs = Vec::new();
    for j in 0..fam.levels.len() {
        for k in j + 1..fam.levels.len() {
            pairs.push(admissible_pair(&fam.levels[j], &fam.levels[k])?);
        }
    }
    Ok(AdmissibilityReport { admissible: pairs.iter().all(|p| p.holds), constant_rank: fam.finite_rank, pairs })
}

/// Deterministic test points of the complex group at level j.
pub fn test_points(m: &RepModel, count: usize, seed: u64) -> Vec<GroupElement> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| m.random_complex(&mut rng)).collect()
}

/// max |ψ^{(j)}_v(g) − ψ^{(k)}_{ι v}(g)| and the same on the Z-side, over
/// points g of level j.
pub fn gamma_commute_check(fam: &PropagatedFamily, j: usize, k: usize, v: &[C64], points: &[GroupElement]) -> Result<f64> {
    let (lo, hi) = (fam.model(j)?, fam.model(k)?);
    let w = embed(lo, hi, v)?;
    let mut err = 0.0f64;
    for g in points {
        let gh = embed_group(lo, hi, g);
        let a = lo.matrix_coeff_psi(v, g);
        let b = hi.matrix_coeff_psi(&w, &gh);
        let c = lo.matrix_coeff_f(v, g);
        let d = hi.matrix_coeff_f(&w, &gh);
        err = err.max((a - b).norm() / a.norm().max(1.0)).max((c - d).norm() / c.norm().max(1.0));
    }
    Ok(err)
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct GradedProjReport {
    /// |proj Γ_k f_w − Γ_j f_{proj w}| on Ξ_j.
    pub restriction_error: f64,
    /// |Γ_k ι f − ι Γ_j f| on Ξ_j for f = f_{proj w}.
    pub embedding_error: f64,
    /// Whether proj∘ι = id holds exactly on the coordinate level.
    pub proj_embed_identity: bool,
}

pub fn graded_proj_check(fam: &PropagatedFamily, j: usize, k: usize, w: &[C64], points: &[GroupElement]) -> Result<GradedProjReport> {
    fam.require_finite_rank()?;
    let (lo, hi) = (fam.model(j)?, fam.model(k)?);
    let pw = project(hi, lo, w)?;
    let mut restriction_error = 0.0f64;
    for g in points {
        let gh = embed_group(lo, hi, g);
        let a = hi.matrix_coeff_psi(w, &gh);
        let b = lo.matrix_coeff_psi(&pw, g);
        restriction_error = restriction_error.max((a - b).norm() / a.norm().max(1.0));
    }
    let embedding_error = gamma_commute_check(fam, j, k, &pw, points)?;
    let p = crate::rep_engine::projection_matrix(hi, lo)?;
    let e = embedding_matrix(lo, hi)?;
    Ok(GradedProjReport { restriction_error, embedding_error, proj_embed_identity: p.mul(&e) == Mat::identity(lo.dim) })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct KernelLimitReport {
    pub sequence: Vec<C64>,
    pub max_step: f64,
    pub target: C64,
    pub error: f64,
}

/// K_{Z_k}(ι f_v)(ξ) for the levels k ≥ j, with f_v and ξ at level j.
pub fn kernel_limit_check(fam: &PropagatedFamily, j: usize, v: &[C64], xi: &GroupElement, truncation: usize) -> Result<KernelLimitReport> {
    let lo = fam.model(j)?;
    let mut sequence = Vec::new();
    for k in j..fam.levels.len() {
        let hi = fam.model(k)?;
        let f = RegularFunction::single(Side::Z, hi.clone(), embed(lo, hi, v)?)?;
        sequence.push(kernel_operator_kz(&f, &embed_group(lo, hi, xi), truncation)?);
    }
    let target = lo.matrix_coeff_psi(v, xi);
    let scale = target.norm().max(1.0);
    let max_step = sequence.windows(2).map(|w| (w[1] - w[0]).norm() / scale).fold(0.0, f64::max);
    let error = sequence.iter().map(|s| (s - target).norm() / scale).fold(0.0, f64::max);
    Ok(KernelLimitReport { sequence, max_step, target, error })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DualRadonLimitReport {
    pub sequence: Vec<C64>,
    pub ratios: Vec<f64>,
    pub oracle: Vec<f64>,
    pub max_ratio_error: f64,
    pub gamma_inv_value: C64,
    pub c_infinity: f64,
    pub exponent: f64,
    pub tail_difference: f64,
}

/// R*_j ψ_v(x) along the family, against c_{μ_j}·Γ⁻¹ψ_v(x) per level and
/// against the limit c_∞^s.
pub fn dual_radon_limit(fam: &PropagatedFamily, v: &[C64], x: &GroupElement, exponent: &Q) -> Result<DualRadonLimitReport> {
    fam.require_finite_rank()?;
    let lo = fam.model(0)?;
    let gamma_inv_value = lo.matrix_coeff_f(v, x);
    let mut sequence = Vec::new();
    let mut ratios = Vec::new();
    let mut oracle = Vec::new();
    let mut max_ratio_error = 0.0f64;
    for k in 0..fam.levels.len() {
        let hi = fam.model(k)?;
        let psi = RegularFunction::single(Side::Xi, hi.clone(), embed(lo, hi, v)?)?;
        let val = dual_radon(&psi, &embed_group(lo, hi, x))?;
        let r = (val / gamma_inv_value).re;
        let o = c_mu_oracle(hi)?;
        max_ratio_error = max_ratio_error.max((r - o).abs() / o);
        sequence.push(val);
        ratios.push(r);
        oracle.push(o);
    }
    let mus: Vec<_> = fam.models.iter().map(|m| m.as_ref().map(|m| m.mu.clone())).collect::<Option<_>>().ok_or_else(|| Error::Unsupported("missing model".into()))?;
    let ci = c_infinity(&fam.levels, &mus)?;
    let s = crate::exact::q_to_f64(exponent);
    let tail_difference = ratios.windows(2).last().map_or(0.0, |w| (w[1] - w[0]).abs());
    Ok(DualRadonLimitReport {
        sequence,
        ratios,
        oracle,
        max_ratio_error,
        gamma_inv_value,
        c_infinity: ci.limit_estimate.powf(s),
        exponent: s,
        tail_difference,
    })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct SphereRadonLimitReport {
    /// ⟨w, π*(g) ∫_{K_j} π*(k)π*(a)e* dk⟩ per level.
    pub level_values: Vec<C64>,
    pub level_max_step: f64,
    /// t of the radius sweep a = exp(tH).
    pub t: Vec<f64>,
    /// |R_a f_w(g·S_a)/a^{μ*} − c_μ f_w(g)| per radius at the top level.
    pub sweep_defect: Vec<f64>,
    pub sweep_monotone: bool,
}

pub fn sphere_radon_limit(fam: &PropagatedFamily, w: &[C64], a_t: f64, g: &GroupElement, sweep: &[f64]) -> Result<SphereRadonLimitReport> {
    fam.require_finite_rank()?;
    let lo = fam.model(0)?;
    let mut level_values = Vec::new();
    for k in 0..fam.levels.len() {
        let hi = fam.model(k)?;
        let phi = hi.dual_act(&hi.a_element(&[a_t]), &hi.e_star);
        let avg = k0_average(hi, &phi);
        let wv = embed(lo, hi, w)?;
        level_values.push(pair(&wv, &hi.dual_act(&embed_group(lo, hi, g), &avg)));
    }
    let level_max_step = level_values.windows(2).map(|p| (p[1] - p[0]).norm()).fold(0.0, f64::max);
    let top = fam.model(fam.levels.len() - 1)?;
    let wt = embed(lo, top, w)?;
    let gt = embed_group(lo, top, g);
    let c = c_mu_oracle(top)?;
    let target = top.matrix_coeff_f(&wt, &gt) * c;
    let mut sweep_defect = Vec::new();
    for &t in sweep {
        let a = top.a_element(&[t]);
        let f = RegularFunction::single(Side::Z, top.clone(), wt.clone())?;
        let val = crate::radon_ops::sphere_radon(&f, &a, &gt)?;
        let scale = top.a_power(&[t], &[top.mu_coeffs[0] as f64]);
        sweep_defect.push((val / scale - target).norm());
    }
    let sweep_monotone = sweep_defect.windows(2).all(|p| p[1] <= p[0]);
    Ok(SphereRadonLimitReport { level_values, level_max_step, t: sweep.to_vec(), sweep_defect, sweep_monotone })
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct DefectReport {
    /// ι_{k,j}(R*_j ψ)(x)
    pub lhs: C64,
    /// R*_k(ι_{k,j} ψ)(x)
    pub rhs: C64,
    pub ratio: f64,
    /// |lhs − ratio·rhs| / |lhs|
    pub identity_error: f64,
}

pub fn noncommuting_defect(fam: &PropagatedFamily, j: usize, k: usize, v: &[C64], x: &GroupElement) -> Result<DefectReport> {
    fam.require_finite_rank()?;
    let (lo, hi) = (fam.model(j)?, fam.model(k)?);
    let psi_j = RegularFunction::single(Side::Xi, lo.clone(), v.to_vec())?;
    let psi_k = RegularFunction::single(Side::Xi, hi.clone(), embed(lo, hi, v)?)?;
    let lhs = dual_radon(&psi_j, x)?;
    let rhs = dual_radon(&psi_k, &embed_group(lo, hi, x))?;
    let ratio = c_mu_oracle(lo)? / c_mu_oracle(hi)?;
    let identity_error = (lhs - rhs * ratio).norm() / lhs.norm().max(1e-300);
    Ok(DefectReport { lhs, rhs, ratio, identity_error })
}

/// Dimension of the space of sequences (φ_j) of K_j-fixed dual vectors with
/// φ_k∘ι_{k,j} = φ_j, computed exactly.
pub fn compatible_k_invariant_dim(fam: &PropagatedFamily) -> Result<usize> {
    let models: Vec<&Arc<RepModel>> = (0..fam.levels.len()).map(|j| fam.model(j)).collect::<Result<_>>()?;
    let offsets: Vec<usize> = models.iter().scan(0, |acc, m| {
        let o = *acc;
        *acc += m.dim;
        Some(o)
    }).collect();
    let total: usize = models.iter().map(|m| m.dim).sum();
    let mut rows: Vec<Vec<GaussQ>> = Vec::new();
    for (m, &o) in models.iter().zip(&offsets) {
        for x in m.lie_actions().k {
            let d = neg_transpose(&x);
            for i in 0..d.rows {
                let mut row = vec![GaussQ::zero(); total];
                for c in 0..d.cols {
                    row[o + c] = d[(i, c)].clone();
                }
                rows.push(row);
            }
        }
    }
    for j in 0..models.len().saturating_sub(1) {
        let e = embedding_matrix(models[j], models[j + 1])?;
        // (φ_{j+1} E)_c − φ_j,c = 0
        for c in 0..models[j].dim {
            let mut row = vec![GaussQ::zero(); total];
            for r in 0..models[j + 1].dim {
                row[offsets[j + 1] + r] = GaussQ::real(e[(r, c)].clone());
            }
            row[offsets[j] + c] = row[offsets[j] + c].clone() - GaussQ::real(q(1));
            rows.push(row);
        }
    }
    let rank = if rows.is_empty() { 0 } else { Mat::from_rows(rows).rank() };
    Ok(total - rank)
}

/// c(μ_n+ρ_n) along a chain of levels for stabilized ω-coefficients.
pub fn c_sequence(levels: &[SpaceData], coefficients: &[u64]) -> Result<Vec<f64>> {
    let seq = WeightSequence { start_level: 0, coefficients: coefficients.to_vec() };
    levels.iter().map(|s| c_mu(s, &seq.materialize(s)?, &q(1))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fam(k: u64) -> PropagatedFamily {
        PropagatedFamily::harmonic(&[2, 3, 4, 5], k).unwrap()
    }

    #[test]
    fn commuting_diagrams() {
        let f = fam(2);
        let lo = f.model(0).unwrap().clone();
        let pts = test_points(&lo, 4, 3);
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let v = lo.random_vector(&mut rng);
        assert!(gamma_commute_check(&f, 0, 2, &v, &pts).unwrap() < 1e-10);
        let hi = f.model(3).unwrap();
        let w = hi.random_vector(&mut rng);
        let r = graded_proj_check(&f, 0, 3, &w, &pts).unwrap();
        assert!(r.restriction_error < 1e-9 && r.embedding_error < 1e-9 && r.proj_embed_identity, "{r:?}");
    }

    #[test]
    fn kernel_sequence_is_constant() {
        let f = PropagatedFamily::harmonic(&[2, 3, 4], 1).unwrap();
        let lo = f.model(0).unwrap().clone();
        let xi = test_points(&lo, 1, 8).remove(0);
        let r = kernel_limit_check(&f, 0, &lo.u, &xi, 1).unwrap();
        assert!(r.max_step < 1e-12 && r.error < 1e-10, "{r:?}");
    }

    #[test]
    fn defect_ratio() {
        let f = fam(2);
        let lo = f.model(0).unwrap().clone();
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let x = lo.random_g0(&mut rng);
        let r = noncommuting_defect(&f, 0, 1, &lo.u, &x).unwrap();
        assert!(r.identity_error < 1e-8);
        assert!((r.ratio - 1.125).abs() < 1e-10, "{r:?}");
    }

    #[test]
    fn compatible_invariants_are_one_dimensional() {
        assert_eq!(compatible_k_invariant_dim(&PropagatedFamily::harmonic(&[2, 3, 4], 2).unwrap()).unwrap(), 1);
    }

    #[test]
    fn admissibility_report() {
        assert!(check_admissible(&fam(1)).unwrap().admissible);
        let sl = PropagatedFamily::new(Family::SlnR, 0, &[3, 4, 5], &[1]).unwrap();
        let r = check_admissible(&sl).unwrap();
        assert!(r.admissible && !r.constant_rank);
    }

    #[test]
    fn dual_radon_sequence() {
        let f = PropagatedFamily::harmonic(&[2, 3, 4], 2).unwrap();
        let lo = f.model(0).unwrap().clone();
        let x = lo.a_element(&[0.7]);
        let r = dual_radon_limit(&f, &lo.u, &x, &q(1)).unwrap();
        assert!(r.max_ratio_error < 1e-8, "{r:?}");
    }

    #[test]
    fn sphere_sweep() {
        let f = PropagatedFamily::harmonic(&[2, 3], 1).unwrap();
        let lo = f.model(0).unwrap().clone();
        let g = lo.a_element(&[0.3]);
        let sweep: Vec<f64> = (1..=8).map(|t| t as f64).collect();
        let r = sphere_radon_limit(&f, &lo.u, 0.5, &g, &sweep).unwrap();
        assert!(r.sweep_monotone, "{r:?}");
    }
}

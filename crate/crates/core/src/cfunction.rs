//! Harish-Chandra c-function by the Gindikin–Karpelevich product.

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{qf, q_to_f64, Q};
use crate::root_core::{inner_product, is_in_lambda_plus, Weight};
use crate::space_catalog::{Family, SpaceData};
use crate::special::{aitken, ln_gamma_signed, tanh_sinh};

/// Cauchy tolerance used by [`c_infinity`].
pub const CAUCHY_TOL: f64 = 1e-6;

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CValue {
    pub value: f64,
    pub log_value: f64,
    pub well_defined: bool,
}

impl CValue {
    fn undefined() -> Self {
        CValue { value: f64::NAN, log_value: f64::NAN, well_defined: false }
    }
}

/// Signed log of the unnormalized product at the real point λ.
fn gk_log(space: &SpaceData, lambda: &Weight) -> Result<(f64, f64)> {
    let mut log = 0.0;
    let mut sign = 1.0;
    let ln2 = std::f64::consts::LN_2;
    for (alpha, m1, m2) in space.indivisible() {
        let z = q_to_f64(
            &(inner_product(lambda, &alpha, &space.rs)? / inner_product(&alpha, &alpha, &space.rs)?),
        );
        let (m1, m2) = (m1 as f64, m2 as f64);
        let (g0, s0) = ln_gamma_signed(z)?;
        let (g1, s1) = ln_gamma_signed(0.5 * (0.5 * m1 + 1.0 + z))?;
        let (g2, s2) = ln_gamma_signed(0.5 * (0.5 * m1 + m2 + z))?;
        log += -z * ln2 + g0 - g1 - g2;
        sign *= s0 * s1 * s2;
    }
    Ok((log, sign))
}

/// c(λ) normalized so that c(ρ) = 1.
pub fn c_function(space: &SpaceData, lambda: &Weight) -> CValue {
    if lambda.rank() != space.rank {
        return CValue::undefined();
    }
    let (Ok((l, s)), Ok((l0, s0))) = (gk_log(space, lambda), gk_log(space, &space.rho)) else {
        return CValue::undefined();
    };
    let log_value = l - l0;
    let sign = s * s0;
    CValue { value: sign * log_value.exp(), log_value, well_defined: true }
}

/// c(μ + ρ)^exponent with exponent one half or one.
pub fn c_mu(space: &SpaceData, mu: &Weight, exponent: &Q) -> Result<f64> {
    if *exponent != qf(1, 2) && *exponent != qf(1, 1) {
        return Err(Error::Usage(format!("exponent {exponent} is neither 1/2 nor 1")));
    }
    if !is_in_lambda_plus(mu, &space.rs) {
        return Err(Error::Domain(format!("{mu} is not in Λ⁺ of {}", space.label())));
    }
    let c = c_function(space, &mu.add(&space.rho));
    if !c.well_defined {
        return Err(Error::Pole(format!("c({mu} + ρ) on {}", space.label())));
    }
    Ok(c.value.powf(q_to_f64(exponent)))
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CInfinity {
    pub sequence: Vec<f64>,
    pub limit_estimate: f64,
    pub converged: bool,
}

/// The sequence c(μ_j + ρ_j) along a chain, with a Cauchy-tail limit estimate.
pub fn c_infinity(chain: &[SpaceData], mus: &[Weight]) -> Result<CInfinity> {
    if chain.len() != mus.len() || chain.is_empty() {
        return Err(Error::Usage("chain and weight sequence must be nonempty and equally long".into()));
    }
    let seq: Vec<Result<f64>> = chain
        .par_iter()
        .zip(mus.par_iter())
        .enumerate()
        .map(|(j, (s, mu))| {
            let c = c_function(s, &mu.add(&s.rho));
            if c.well_defined {
                Ok(c.value)
            } else {
                Err(Error::Pole(format!("level {j} ({})", s.label())))
            }
        })
        .collect();
    let sequence: Vec<f64> = seq.into_iter().collect::<Result<_>>()?;
    let n = sequence.len();
    let last = sequence[n - 1];
    let tail = if n >= 2 { (sequence[n - 1] - sequence[n - 2]).abs() } else { 0.0 };
    let converged = n >= 2 && tail < CAUCHY_TOL;
    let limit_estimate = if converged || n < 3 { last } else { aitken(&sequence).unwrap_or(last) };
    Ok(CInfinity { sequence, limit_estimate, converged })
}

/// N̄-integral oracle for SO₀(1,q): the ratio
/// ∫ a(n̄)^{−λ−ρ} dn̄ / ∫ a(n̄)^{−2ρ} dn̄, with a(n̄) read off from the
/// Iwasawa projection of the explicit Lorentz matrix exp(X), X ∈ 𝔫̄.
pub fn rank_one_integral_oracle(space: &SpaceData, lambda: &Weight) -> Result<f64> {
    if space.family != Family::SoPq || space.params[0] != 1 {
        return Err(Error::Unsupported("the integral oracle covers SO(1,q) only".into()));
    }
    let qq = space.params[1];
    let n = qq + 1;
    // α(H) = 1 for the boost H, so λ(H) is the simple-root coordinate.
    let lam_h = q_to_f64(&lambda.coords[0]);
    let rho_h = q_to_f64(&space.rho.coords[0]);
    // Coordinates: 0 spatial boost partner, 1 time, 2.. spatial.
    let mut y = DMatrix::<f64>::zeros(n, n);
    y[(0, 2)] = 1.0;
    y[(2, 0)] = -1.0;
    y[(1, 2)] = -1.0;
    y[(2, 1)] = -1.0;
    let y2 = &y * &y;
    let mut null = nalgebra::DVector::<f64>::zeros(n);
    null[0] = 1.0;
    null[1] = 1.0;
    // By rotation invariance of a(n̄) in x ∈ ℝ^{q−1} the integral is radial.
    let log_a = |r: f64| -> f64 {
        let nbar = DMatrix::<f64>::identity(n, n) + &y * r + &y2 * (0.5 * r * r);
        (nbar * &null)[1].ln()
    };
    let radial = |s: f64| -> f64 {
        tanh_sinh(
            |theta| {
                let r = theta.tan();
                let sec2 = 1.0 + r * r;
                (-s * log_a(r)).exp() * r.powi(qq as i32 - 2) * sec2
            },
            0.0,
            std::f64::consts::FRAC_PI_2,
            1e-13,
        )
    };
    if lam_h <= 0.0 {
        return Err(Error::Domain("the N̄ integral converges only for λ(H) > 0".into()));
    }
    Ok(radial(lam_h + rho_h) / radial(2.0 * rho_h))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::q;
    use crate::root_core::dual_weight;
    use crate::space_catalog::{catalog, make_space};

    #[test]
    fn normalized_at_rho() {
        for s in catalog(4, 10) {
            let c = c_function(&s, &s.rho);
            assert!((c.value - 1.0).abs() < 1e-12, "{}", s.label());
        }
    }

    #[test]
    fn hyperbolic_closed_form() {
        // SO(1,q): c(kω+ρ) = Γ(k+m/2)Γ(m)/(Γ(k+m)Γ(m/2)) with m = q−1, via the
        // duplication formula; for k = 1 this is 1/2.
        for qq in 2..8usize {
            let s = make_space(Family::SoPq, &[1, qq]).unwrap();
            let m = (qq - 1) as f64;
            for k in 0..6i64 {
                let mu = s.rs.from_omega_int(&[k]);
                let got = c_function(&s, &mu.add(&s.rho)).value;
                let mut want = 1.0;
                for i in 0..k {
                    want *= (m / 2.0 + i as f64) / (m + i as f64);
                }
                assert!((got - want).abs() < 1e-12 * want, "q={qq} k={k}");
            }
        }
    }

    #[test]
    fn sl_n_first_fundamental() {
        for n in 2..9 {
            let s = make_space(Family::SlnR, &[n]).unwrap();
            let mut k = vec![0; n - 1];
            k[0] = 1;
            let mu = s.rs.from_omega_int(&k);
            let c = c_function(&s, &mu.add(&s.rho)).value;
            assert!((c - 1.0 / n as f64).abs() < 1e-12, "n={n}: {c}");
        }
    }

    #[test]
    fn symmetric_under_dual() {
        let s = make_space(Family::SlnR, &[4]).unwrap();
        let mu = s.rs.from_omega_int(&[2, 0, 1]);
        let a = c_function(&s, &mu.add(&s.rho)).value;
        let b = c_function(&s, &dual_weight(&mu, &s.rs).unwrap().add(&s.rho)).value;
        assert!((a - b).abs() < 1e-13);
        assert!(a < 1.0 && a > 0.0);
    }

    #[test]
    fn oracle_matches_product() {
        let s = make_space(Family::SoPq, &[1, 3]).unwrap();
        let mu = s.rs.from_omega_int(&[2]);
        let lam = mu.add(&s.rho);
        let o = rank_one_integral_oracle(&s, &lam).unwrap();
        let c = c_function(&s, &lam).value;
        assert!((o - c).abs() < 1e-9 * c, "{o} vs {c}");
    }

    #[test]
    fn c_mu_rejects_bad_input() {
        let s = make_space(Family::SoPq, &[1, 2]).unwrap();
        let mu = s.rs.from_omega_int(&[1]);
        assert!(c_mu(&s, &mu, &qf(1, 3)).is_err());
        assert!(c_mu(&s, &mu.neg(), &q(1)).is_err());
        assert!((c_mu(&s, &Weight::zero(1), &qf(1, 2)).unwrap() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn constant_chain_limit() {
        let chain: Vec<_> = (2..10).map(|qq| make_space(Family::SoPq, &[1, qq]).unwrap()).collect();
        let mus: Vec<_> = chain.iter().map(|s| Weight::zero(s.rank)).collect();
        let r = c_infinity(&chain, &mus).unwrap();
        assert!(r.converged);
        assert!((r.limit_estimate - 1.0).abs() < 1e-14);
    }
}

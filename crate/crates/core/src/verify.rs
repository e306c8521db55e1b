//! The acceptance checks, shared by `horolab verify-all` and the test suite.

use std::sync::Arc;

use num_complex::Complex64;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cfunction::{c_function, c_mu, rank_one_integral_oracle};
use crate::limit_harness::c_sequence;
use crate::error::Result;
use crate::exact::{q, qf, Mat, Q};
use crate::limit_harness::{
    gamma_commute_check, graded_proj_check, kernel_limit_check, noncommuting_defect, test_points,
    PropagatedFamily,
};
use crate::radon_ops::{
    c_mu_oracle, dual_radon, gamma, kernel_operator_kxi, kernel_operator_kz, kernel_tilde, model_degree,
    sphere_to_horosphere_limit,
};
use crate::rep_engine::lie::{harmonic_intertwiner_dim, Arithmetic};
use crate::rep_engine::quadrature::u_nodes;
use crate::rep_engine::{embedding_matrix, projection_matrix, pair, RegularFunction, RepModel, Side};
use crate::root_core::dual_weight;
use crate::space_catalog::{catalog, make_space, Family};
use crate::weight_limits::{iota, restrict};

type C64 = Complex64;

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct CriterionReport {
    pub id: u32,
    pub name: String,
    pub passed: bool,
    pub max_error: Option<f64>,
    pub detail: Value,
}

impl CriterionReport {
    pub fn line(&self) -> String {
        let err = self.max_error.map_or(String::new(), |e| format!(" maxError={e:.3e}"));
        let summary = self.detail.get("summary").and_then(Value::as_str).unwrap_or("");
        format!(
            "criterion {:>2} {:<34} {}{}{}{}",
            self.id,
            self.name,
            if self.passed { "PASS" } else { "FAIL" },
            err,
            if summary.is_empty() { "" } else { "  " },
            summary
        )
    }
}

pub const NAMES: [&str; 13] = [
    "c(rho) = 1",
    "c symmetry under -w0",
    "rank-one integral oracle",
    "c_mu calibration",
    "dual transform identity",
    "Schur orthogonality on SU(2)",
    "kernel operator identities",
    "k-tilde closed form",
    "lattice exactness",
    "multiplicity one",
    "commuting diagrams",
    "limits",
    "non-commutativity defect",
];

fn rel(a: C64, b: C64) -> f64 {
    (a - b).norm() / b.norm().max(1e-300)
}

fn report(id: u32, passed: bool, max_error: Option<f64>, detail: Value) -> CriterionReport {
    CriterionReport { id, name: NAMES[id as usize - 1].into(), passed, max_error, detail }
}

/// Run one criterion; internal errors count as failures.
pub fn run_criterion(id: u32, quick: bool) -> CriterionReport {
    let r = match id {
        1 => c1(),
        2 => c2(quick),
        3 => c3(quick),
        4 => c4(quick),
        5 => c5(quick),
        6 => c6(quick),
        7 => c7(quick),
        8 => c8(),
        9 => c9(quick),
        10 => c10(quick),
        11 => c11(quick),
        12 => c12(quick),
        13 => c13(),
        _ => return report(1, false, None, json!({"summary": format!("no criterion {id}")})),
    };
    r.unwrap_or_else(|e| report(id, false, None, json!({"summary": format!("error: {e}")})))
}

pub fn run_all(quick: bool) -> Vec<CriterionReport> {
    (1..=13).map(|i| run_criterion(i, quick)).collect()
}

fn c1() -> Result<CriterionReport> {
    let spaces = catalog(4, 9);
    let mut worst = 0.0f64;
    for s in &spaces {
        let c = c_function(s, &s.rho);
        worst = worst.max(if c.well_defined { (c.value - 1.0).abs() } else { f64::INFINITY });
    }
    Ok(report(1, worst <= 1e-10, Some(worst), json!({"summary": format!("{} spaces", spaces.len())})))
}

fn c2(quick: bool) -> Result<CriterionReport> {
    let spaces = catalog(4, 9);
    let per = if quick { 10 } else { 50 };
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for s in &spaces {
        for _ in 0..per {
            let k: Vec<Q> = (0..s.rank).map(|_| qf(rng.gen_range(1..=40), rng.gen_range(1..=8))).collect();
            let lam = s.rs.from_omega(&k);
            let dual = dual_weight(&lam, &s.rs)?;
            let (a, b) = (c_function(s, &lam), c_function(s, &dual));
            worst = worst.max((a.value - b.value).abs() / a.value.abs().max(1e-300));
        }
    }
    Ok(report(2, worst <= 1e-10, Some(worst), json!({"summary": format!("{} spaces x {per}", spaces.len())})))
}

fn c3(quick: bool) -> Result<CriterionReport> {
    let mut worst = 0.0f64;
    let top = if quick { 3 } else { 5 };
    for qq in 2..=top {
        let s = make_space(Family::SoPq, &[1, qq])?;
        for k in 0..=4 {
            let lam = s.rs.from_omega_int(&[k]).add(&s.rho);
            let gk = c_function(&s, &lam).value;
            let o = rank_one_integral_oracle(&s, &lam)?;
            worst = worst.max((gk - o).abs() / gk);
        }
    }
    Ok(report(3, worst <= 1e-6, Some(worst), json!({"summary": format!("SO(1,q), q = 2..{top}")})))
}

/// The exponent s ∈ {1/2, 1} for which c(μ+ρ)^s reproduces the oracle.
pub fn calibrate_exponent(quick: bool) -> Result<(Option<Q>, f64, f64)> {
    let kmax = if quick { 2 } else { 4 };
    let (mut e_half, mut e_one) = (0.0f64, 0.0f64);
    for qq in 2..=4 {
        for k in 1..=kmax {
            let m = RepModel::harmonic(qq, k)?;
            let o = c_mu_oracle(&m)?;
            let r = |s: &Q| c_mu(&m.space, &m.mu, s).map(|c| (o - c).abs() / c);
            e_half = e_half.max(r(&qf(1, 2))?);
            e_one = e_one.max(r(&q(1))?);
        }
    }
    let s = if e_one <= 1e-8 {
        Some(q(1))
    } else if e_half <= 1e-8 {
        Some(qf(1, 2))
    } else {
        None
    };
    Ok((s, e_half, e_one))
}

fn c4(quick: bool) -> Result<CriterionReport> {
    let (s, e_half, e_one) = calibrate_exponent(quick)?;
    let worst = e_half.min(e_one);
    Ok(report(
        4,
        s.is_some(),
        Some(worst),
        json!({
            "summary": format!("calibrated s = {}", s.as_ref().map_or("none".into(), |x| x.to_string())),
            "exponent": s.map(|x| x.to_string()),
            "errorHalf": e_half,
            "errorOne": e_one,
        }),
    ))
}

fn c5(quick: bool) -> Result<CriterionReport> {
    let count = if quick { 5 } else { 20 };
    let mut models = Vec::new();
    for qq in 2..=4 {
        for k in 1..=3 {
            models.push(RepModel::harmonic(qq, k)?);
        }
    }
    for k in 1..=3 {
        models.push(RepModel::spin(k)?);
    }
    models.push(RepModel::product(&[1, 2])?);
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = 0.0f64;
    for m in models {
        let m = Arc::new(m);
        let c = c_mu_oracle(&m)?;
        for _ in 0..count {
            let v = m.random_vector(&mut rng);
            let x = m.random_g0(&mut rng);
            let psi = RegularFunction::single(Side::Xi, m.clone(), v.clone())?;
            worst = worst.max(rel(dual_radon(&psi, &x)?, m.matrix_coeff_f(&v, &x) * c));
        }
    }
    Ok(report(5, worst <= 1e-8, Some(worst), json!({"summary": format!("{count} points per model")})))
}

/// ∫_U ⟨π_μ(b)v, w*⟩⟨π_ν(b⁻¹)u, v*⟩ db against δ_{μν} d(μ)⁻¹ ⟨v, v*⟩⟨u, w*⟩.
pub fn schur_error(mu: &RepModel, nu: &RepModel, rng: &mut ChaCha8Rng) -> f64 {
    let v = mu.random_vector(rng);
    let w_star = mu.random_vector(rng);
    let u = nu.random_vector(rng);
    let v_star = nu.random_vector(rng);
    let degree = model_degree(mu) + model_degree(nu);
    let mut acc = C64::zero();
    for (b, wt) in u_nodes(mu, degree / 2 + 1, false) {
        let x = pair(&mu.act(&b, &v), &w_star);
        let y = pair((nu.rep_matrix_inv(&b) * nalgebra::DVector::from_column_slice(&u)).as_slice(), &v_star);
        acc += x * y * wt;
    }
    let expected = if mu.mu == nu.mu && mu.dim == nu.dim {
        pair(&v, &v_star) * pair(&u, &w_star) / mu.dim as f64
    } else {
        C64::zero()
    };
    (acc - expected).norm()
}

fn c6(quick: bool) -> Result<CriterionReport> {
    let kmax = if quick { 2 } else { 4 };
    let models: Vec<RepModel> = (0..=kmax).map(RepModel::spin).collect::<Result<_>>()?;
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for a in &models {
        for b in &models {
            worst = worst.max(schur_error(a, b, &mut rng));
        }
    }
    Ok(report(6, worst <= 1e-10, Some(worst), json!({"summary": format!("dimensions 1..{}", 2 * kmax + 1)})))
}

fn c7(quick: bool) -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let points = if quick { 1 } else { 3 };
    let mut worst = 0.0f64;
    for k in 0..=3 {
        for m in [RepModel::spin(k)?, RepModel::harmonic(2, k)?] {
            let m = Arc::new(m);
            for _ in 0..points {
                let v = m.random_vector(&mut rng);
                let g = m.random_complex(&mut rng);
                let f = RegularFunction::single(Side::Z, m.clone(), v.clone())?;
                worst = worst.max(rel(kernel_operator_kz(&f, &g, 3)?, m.matrix_coeff_psi(&v, &g)));
                worst = worst.max(rel(kernel_operator_kxi(&gamma(&f)?, &g, 3)?, m.matrix_coeff_f(&v, &g)));
            }
        }
    }
    Ok(report(7, worst <= 1e-8, Some(worst), json!({"summary": "SL2 and H2, height 0..3, truncation 3"})))
}

fn c8() -> Result<CriterionReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let mut ok = true;
    let mut worst_ratio = 0.0f64;
    let mut rows = Vec::new();
    for r in 1..=3 {
        let m = RepModel::product(&vec![0; r])?;
        for trial in 0..3 {
            let ts: Vec<f64> = (0..r).map(|_| rng.gen_range(0.2..1.5)).collect();
            let g = m.random_mn(&mut rng).mul(&m.a_element(&ts)).mul(&m.random_k(&mut rng));
            let kt = kernel_tilde(r, &g, 20)?;
            let err = (kt.series - kt.closed_form).abs();
            let bound = kt.tail_bound + kt.roundoff;
            ok &= kt.in_domain && err <= bound;
            worst_ratio = worst_ratio.max(err / bound);
            rows.push(json!({"r": r, "trial": trial, "error": err, "tailBound": kt.tail_bound}));
        }
    }
    Ok(report(8, ok, None, json!({"summary": format!("worst error/bound = {worst_ratio:.3}"), "rows": rows})))
}

fn c9(quick: bool) -> Result<CriterionReport> {
    let mut failures = Vec::new();
    let chains: Vec<(Family, Vec<Vec<usize>>)> = vec![
        (Family::SoPq, (2..7).map(|x| vec![1, x]).collect()),
        (Family::SoPq, (3..7).map(|x| vec![2, x]).collect()),
        (Family::SuPq, (2..6).map(|x| vec![1, x]).collect()),
        (Family::SpPq, (3..7).map(|x| vec![2, x]).collect()),
        (Family::SlnR, (2..7).map(|x| vec![x]).collect()),
        (Family::Sl2Product, (1..5).map(|x| vec![x]).collect()),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for (fam, params) in &chains {
        let levels: Vec<_> = params.iter().map(|p| make_space(*fam, p)).collect::<Result<_>>()?;
        for j in 0..levels.len() {
            for k in j..levels.len() {
                let (lo, hi) = (&levels[j], &levels[k]);
                let rnd = |rng: &mut ChaCha8Rng| lo.rs.from_omega_int(&(0..lo.rank).map(|_| rng.gen_range(0..4)).collect::<Vec<_>>());
                for _ in 0..4 {
                    let (a, b) = (rnd(&mut rng), rnd(&mut rng));
                    let (ia, ib) = (iota(&a, lo, hi)?, iota(&b, lo, hi)?);
                    if restrict(&ia, hi, lo)? != a {
                        failures.push(format!("r∘ι on {} → {}", lo.label(), hi.label()));
                    }
                    if iota(&a.add(&b), lo, hi)? != ia.add(&ib) {
                        failures.push(format!("ι additive on {} → {}", lo.label(), hi.label()));
                    }
                    if (a != b) != (ia != ib) {
                        failures.push(format!("ι injective on {} → {}", lo.label(), hi.label()));
                    }
                }
            }
        }
    }
    // proj∘embed on model coordinates, exactly
    let kmax = if quick { 2 } else { 3 };
    let mut model_chains: Vec<Vec<RepModel>> = Vec::new();
    for k in 0..=kmax {
        model_chains.push((2..=5).map(|qq| RepModel::harmonic(qq, k)).collect::<Result<_>>()?);
    }
    model_chains.push(vec![RepModel::product(&[2])?, RepModel::product(&[2, 0])?, RepModel::product(&[2, 0, 0])?]);
    for chain in &model_chains {
        for j in 0..chain.len() {
            for k in j..chain.len() {
                let p = projection_matrix(&chain[k], &chain[j])?;
                let e = embedding_matrix(&chain[j], &chain[k])?;
                if p.mul(&e) != Mat::identity(chain[j].dim) {
                    failures.push(format!("proj∘embed for {} → {}", chain[j].space.label(), chain[k].space.label()));
                }
            }
        }
    }
    let passed = failures.is_empty();
    Ok(report(9, passed, None, json!({"summary": if passed { "exact".to_string() } else { format!("{} failures", failures.len()) }, "failures": failures})))
}

fn c10(quick: bool) -> Result<CriterionReport> {
    // H^n has n + 1 variables
    let nmax = if quick { 3 } else { 4 };
    let mut rows = Vec::new();
    let mut ok = true;
    for n_lo in 2..=nmax {
        for n_hi in n_lo..=nmax {
            for k in 0..=3 {
                let d = harmonic_intertwiner_dim(n_lo + 1, n_hi + 1, k, Arithmetic::Rational)?;
                ok &= d == 1;
                rows.push(json!({"nLo": n_lo, "nHi": n_hi, "k": k, "dim": d}));
            }
        }
    }
    Ok(report(10, ok, None, json!({"summary": format!("{} pairs, n ≤ {nmax}, k ≤ 3", rows.len()), "rows": rows})))
}

fn c11(quick: bool) -> Result<CriterionReport> {
    let kmax = if quick { 2 } else { 3 };
    let mut worst = 0.0f64;
    let mut exact = true;
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for k in 0..=kmax {
        let fam = PropagatedFamily::harmonic(&[2, 3, 4, 5], k as u64)?;
        for j in 0..4 {
            let lo = fam.model(j)?.clone();
            let pts = test_points(&lo, if quick { 2 } else { 4 }, 100 + j as u64);
            for l in j..4 {
                let v = lo.random_vector(&mut rng);
                worst = worst.max(gamma_commute_check(&fam, j, l, &v, &pts)?);
                let w = fam.model(l)?.random_vector(&mut rng);
                let r = graded_proj_check(&fam, j, l, &w, &pts)?;
                worst = worst.max(r.restriction_error).max(r.embedding_error);
                exact &= r.proj_embed_identity;
            }
        }
    }
    Ok(report(11, worst <= 1e-9 && exact, Some(worst), json!({"summary": format!("H^2..H^5, k ≤ {kmax}")})))
}

/// Part (b): tail difference and limit estimate of c(kω + ρ_n) along SO(1,n).
pub fn c_tail(k: u64, n_max: usize) -> Result<(f64, f64)> {
    let levels: Vec<_> = (2..=n_max).map(|n| make_space(Family::SoPq, &[1, n])).collect::<Result<_>>()?;
    let seq = c_sequence(&levels, &[k])?;
    let l = seq.len();
    Ok(((seq[l - 1] - seq[l - 2]).abs(), seq[l - 1]))
}

fn c12(quick: bool) -> Result<CriterionReport> {
    // (a) kernel stabilization
    let mut a_step = 0.0f64;
    let mut a_err = 0.0f64;
    for k in 0..=if quick { 1 } else { 2 } {
        let fam = PropagatedFamily::harmonic(&[2, 3, 4], k)?;
        let lo = fam.model(0)?.clone();
        let mut rng = ChaCha8Rng::seed_from_u64(120 + k);
        let v = lo.random_vector(&mut rng);
        let xi = test_points(&lo, 1, 121 + k).remove(0);
        let r = kernel_limit_check(&fam, 0, &v, &xi, k as usize)?;
        a_step = a_step.max(r.max_step);
        a_err = a_err.max(r.error);
    }
    // constant up to the roundoff of the level-wise quadrature
    let a_ok = a_step <= 1e-12 && a_err <= 1e-8;

    // (b) c(μ+ρ_n) along SO(1,n), n = 2..40
    let mut b_rows = Vec::new();
    let mut b_ok = true;
    for k in 1..=3 {
        let (tail, last) = c_tail(k, 40)?;
        b_ok &= tail < 1e-6 && last > 0.0;
        b_rows.push(json!({"k": k, "tailDifference": tail, "c40": last}));
    }

    // (c) SL(n), μ = ω₁
    let s = make_space(Family::SlnR, &[40])?;
    let mu = s.rs.from_omega_int(&(0..s.rank).map(|i| i64::from(i == 0)).collect::<Vec<_>>());
    let c40 = c_mu(&s, &mu, &q(1))?;
    let c_ok = c40 < 1e-6;
    // diagnostic only: larger multiples of ω₁ on the same chain
    let multiples: Vec<f64> = (2..=7).map(|k| c_mu(&s, &mu.scale(&q(k)), &q(1))).collect::<Result<_>>()?;

    // (d) sphere to horosphere on H²
    let models: Vec<_> = (1..=3).map(|k| RepModel::harmonic(2, k).map(Arc::new)).collect::<Result<_>>()?;
    let ts: Vec<f64> = (1..=10).map(f64::from).collect();
    let lim = sphere_to_horosphere_limit(&models, &ts)?;
    let d_final = lim.iter().map(|r| *r.distance.last().unwrap_or(&f64::INFINITY)).fold(0.0, f64::max);
    let d_ok = lim.iter().all(|r| r.monotone) && d_final < 1e-4;

    let mark = |b: bool| if b { "pass" } else { "FAIL" };
    Ok(report(
        12,
        a_ok && b_ok && c_ok && d_ok,
        None,
        json!({
            "summary": format!("a:{} b:{} c:{} d:{}", mark(a_ok), mark(b_ok), mark(c_ok), mark(d_ok)),
            "a": {"maxStep": a_step, "error": a_err},
            "b": b_rows,
            "c": {"n": 40, "c": c40, "multiplesOfOmega1From2": multiples},
            "d": {"finalDistance": d_final},
        }),
    ))
}

fn c13() -> Result<CriterionReport> {
    let mut worst = 0.0f64;
    let mut max_gap = 0.0f64;
    let mut rows = Vec::new();
    for k in 1..=3 {
        let fam = PropagatedFamily::harmonic(&[2, 3, 4], k)?;
        for (j, l) in [(0, 1), (1, 2), (0, 2)] {
            let lo = fam.model(j)?.clone();
            let mut rng = ChaCha8Rng::seed_from_u64(130 + k);
            let x = lo.random_g0(&mut rng);
            let v = lo.random_vector(&mut rng);
            let r = noncommuting_defect(&fam, j, l, &v, &x)?;
            worst = worst.max(r.identity_error);
            max_gap = max_gap.max((r.ratio - 1.0).abs());
            rows.push(json!({"k": k, "j": j + 2, "l": l + 2, "ratio": r.ratio, "identityError": r.identity_error}));
        }
    }
    Ok(report(
        13,
        worst <= 1e-8 && max_gap > 1e-3,
        Some(worst),
        json!({"summary": format!("max |ratio − 1| = {max_gap:.4}"), "rows": rows}),
    ))
}

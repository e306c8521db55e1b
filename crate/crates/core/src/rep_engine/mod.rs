//! Explicit spherical representations with exact distinguished vectors.
//!
//! Three model kinds are provided:
//! - `SL2Spin`: SL(2,ℝ) on homogeneous polynomials of degree 2k in two
//!   variables, spherical weight kω;
//! - `HarmonicPoly`: SO₀(q,1) on harmonic polynomials of degree k on ℂ^{q+1},
//!   the level SO(1,q) with weight kω;
//! - `ProductModel`: tensor products of `SL2Spin` factors for SL(2,ℝ)^r.
//!
//! Pairings ⟨v, φ⟩ between V and V* are the bilinear coordinate sums, and
//! π*(g)φ = π(g⁻¹)ᵀφ.

pub mod group;
pub mod harmonic;
pub mod lie;
pub mod poly;
pub mod quadrature;

use std::sync::Arc;

use nalgebra::DVector;
use num_complex::Complex64;
use num_traits::{One, Zero};
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{q, q_to_f64, Field, GaussQ, Mat, Q};
use crate::root_core::Weight;
use crate::space_catalog::{make_space, Family, SpaceData};

use group::{c, complexify_lorentz, iwasawa_lorentz, iwasawa_sl2, lorentz_boost, plane_rotation, realify_lorentz, sl2_diag, CMat, GroupElement, Iwasawa, RMat};
use harmonic::HarmonicSpace;
use poly::{full_lie_action, full_rep_matrix, full_substitution_matrix, MonomialTable};

pub type C64 = Complex64;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum ModelKind {
    SL2Spin,
    HarmonicPoly,
    ProductModel,
}

#[derive(Clone, Debug)]
enum Backend {
    Harmonic(HarmonicSpace),
    Spin { m: usize, table: MonomialTable },
    Product(Vec<Arc<RepModel>>),
}

#[derive(Clone, Debug)]
pub struct RepModel {
    pub kind: ModelKind,
    pub space: SpaceData,
    pub mu: Weight,
    /// ω-coefficients of μ.
    pub mu_coeffs: Vec<usize>,
    pub dim: usize,
    pub labels: Vec<String>,
    pub u: Vec<C64>,
    pub e: Vec<C64>,
    pub u_star: Vec<C64>,
    pub e_star: Vec<C64>,
    pub u_exact: Vec<GaussQ>,
    pub u_star_exact: Vec<GaussQ>,
    pub e_star_exact: Vec<GaussQ>,
    pub s0: GroupElement,
    /// Gram matrix of the U-invariant Hermitian inner product.
    pub gram: Mat<Q>,
    backend: Backend,
}

/// Bilinear pairing Σ v_i φ_i.
pub fn pair(v: &[C64], phi: &[C64]) -> C64 {
    v.iter().zip(phi).map(|(a, b)| a * b).sum()
}

pub fn pair_exact(v: &[GaussQ], phi: &[GaussQ]) -> GaussQ {
    v.iter().zip(phi).fold(GaussQ::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
}

fn to_c64(v: &[GaussQ]) -> Vec<C64> {
    v.iter().map(|x| x.to_c64()).collect()
}

fn mat_c(m: &CMat, v: &[C64]) -> Vec<C64> {
    (m * DVector::from_column_slice(v)).iter().cloned().collect()
}

fn kron_c(a: &CMat, b: &CMat) -> CMat {
    a.kronecker(b)
}

fn kron_q<F: Field>(a: &Mat<F>, b: &Mat<F>) -> Mat<F> {
    let mut out = Mat::zeros(a.rows * b.rows, a.cols * b.cols);
    for i in 0..a.rows {
        for j in 0..a.cols {
            if a[(i, j)].is_zero() {
                continue;
            }
            for k in 0..b.rows {
                for l in 0..b.cols {
                    out[(i * b.rows + k, j * b.cols + l)] = a[(i, j)].clone() * b[(k, l)].clone();
                }
            }
        }
    }
    out
}

fn kron_vec<F: Field>(a: &[F], b: &[F]) -> Vec<F> {
    let mut out = Vec::with_capacity(a.len() * b.len());
    for x in a {
        for y in b {
            out.push(x.clone() * y.clone());
        }
    }
    out
}

fn gq(re: i64, im: i64) -> GaussQ {
    GaussQ::new(q(re), q(im))
}

fn unit_mat(n: usize, entries: &[(usize, usize, GaussQ)]) -> Mat<GaussQ> {
    let mut m = Mat::<GaussQ>::zeros(n, n);
    for (i, j, v) in entries {
        m[(*i, *j)] = m[(*i, *j)].clone() + v.clone();
    }
    m
}

/// Generators of the subalgebras in the defining realization.
#[derive(Clone, Debug, Default)]
pub struct Generators {
    pub k: Vec<Mat<GaussQ>>,
    pub m: Vec<Mat<GaussQ>>,
    pub n: Vec<Mat<GaussQ>>,
    pub a: Vec<Mat<GaussQ>>,
}

/// so(N, ℂ) generators in the twisted Lorentz coordinates.
pub fn lorentz_generators(nv: usize) -> Generators {
    let rot = |a: usize, b: usize| unit_mat(nv, &[(a, b, gq(1, 0)), (b, a, gq(-1, 0))]);
    let spatial: Vec<usize> = std::iter::once(0).chain(2..nv).collect();
    let k = spatial.windows(2).map(|w| rot(w[0], w[1])).collect();
    let m = (2..nv).collect::<Vec<_>>().windows(2).map(|w| rot(w[0], w[1])).collect();
    let n = (2..nv)
        .map(|j| unit_mat(nv, &[(0, j, gq(1, 0)), (j, 0, gq(-1, 0)), (1, j, gq(0, 1)), (j, 1, gq(0, -1))]))
        .collect();
    let a = vec![unit_mat(nv, &[(0, 1, gq(0, -1)), (1, 0, gq(0, 1))])];
    Generators { k, m, n, a }
}

pub fn sl2_generators() -> Generators {
    Generators {
        k: vec![unit_mat(2, &[(0, 1, gq(-1, 0)), (1, 0, gq(1, 0))])],
        m: vec![],
        n: vec![unit_mat(2, &[(0, 1, gq(1, 0))])],
        a: vec![unit_mat(2, &[(0, 0, gq(1, 0)), (1, 1, gq(-1, 0))])],
    }
}

fn one_dim_nullspace(blocks: Vec<Mat<GaussQ>>, dim: usize, what: &str) -> Result<Vec<GaussQ>> {
    let ns = if blocks.is_empty() {
        (0..dim)
            .map(|i| {
                let mut v = vec![GaussQ::zero(); dim];
                v[i] = GaussQ::one();
                v
            })
            .collect()
    } else {
        Mat::vstack(&blocks).nullspace()
    };
    if ns.len() != 1 {
        return Err(Error::Convention(format!("{what}: invariant space has dimension {}", ns.len())));
    }
    Ok(ns.into_iter().next().unwrap())
}

pub fn neg_transpose(m: &Mat<GaussQ>) -> Mat<GaussQ> {
    let t = m.transpose();
    Mat { rows: t.rows, cols: t.cols, data: t.data.into_iter().map(|x| -x).collect() }
}

fn scale_vec(v: &[GaussQ], s: &GaussQ) -> Vec<GaussQ> {
    v.iter().map(|x| x.clone() * s.clone()).collect()
}

fn hermitian_norm2(v: &[C64], g: &Mat<Q>) -> f64 {
    let mut acc = C64::zero();
    for i in 0..v.len() {
        for j in 0..v.len() {
            if !g[(i, j)].is_zero() {
                acc += v[i].conj() * v[j] * q_to_f64(&g[(i, j)]);
            }
        }
    }
    acc.re
}

impl RepModel {
    /// Harmonic model of degree k for the level SO(1, q).
    pub fn harmonic(qq: usize, k: usize) -> Result<Self> {
        if qq < 2 {
            return Err(Error::Usage("the harmonic model needs q ≥ 2".into()));
        }
        let space = make_space(Family::SoPq, &[1, qq])?;
        let nv = qq + 1;
        let hs = HarmonicSpace::new(nv, k);
        let dim = hs.dim();
        let labels = hs
            .coord_mono
            .iter()
            .map(|&m| {
                let e = &hs.table.monos[k][m];
                let parts: Vec<String> = e
                    .iter()
                    .enumerate()
                    .filter(|(_, &x)| x > 0)
                    .map(|(i, &x)| if x == 1 { format!("y{}", i + 1) } else { format!("y{}^{}", i + 1, x) })
                    .collect();
                if parts.is_empty() { "1".to_string() } else { parts.join("*") }
            })
            .collect();
        let mut lin = vec![GaussQ::zero(); nv];
        lin[0] = GaussQ::one();
        lin[1] = GaussQ::i();
        let u = hs.power_of_linear(&lin);
        let mut s0 = RMat::identity(nv, nv);
        s0[(0, 0)] = -1.0;
        s0[(2, 2)] = -1.0;
        let gens = lorentz_generators(nv);
        let act = |x: &Mat<GaussQ>| hs.lie_action(x);
        let gram = hs.gram();
        let mu = space.rs.from_omega_int(&[k as i64]);
        let backend = Backend::Harmonic(hs.clone());
        Self::finish(
            ModelKind::HarmonicPoly,
            space,
            mu,
            vec![k],
            dim,
            labels,
            u,
            GroupElement::from_real(&s0),
            gram,
            &gens,
            &act,
            backend,
        )
    }

    /// SL(2,ℝ) on homogeneous polynomials of degree 2k.
    pub fn spin(k: usize) -> Result<Self> {
        let m = 2 * k;
        let space = make_space(Family::SlnR, &[2])?;
        let table = MonomialTable::new(2, m);
        let labels = table.monos[m].iter().map(|e| format!("z1^{}*z2^{}", e[0], e[1])).collect();
        let mut u = vec![GaussQ::zero(); m + 1];
        u[table.idx(&[0, m as u8])] = GaussQ::one();
        let mut gram = Mat::<Q>::zeros(m + 1, m + 1);
        for (i, e) in table.monos[m].iter().enumerate() {
            let f = |n: u8| (1..=n as i64).fold(q(1), |a, b| a * q(b));
            gram[(i, i)] = f(e[0]) * f(e[1]);
        }
        let s0 = RMat::from_row_slice(2, 2, &[0.0, -1.0, 1.0, 0.0]);
        let gens = sl2_generators();
        let t2 = table.clone();
        let act = move |x: &Mat<GaussQ>| full_lie_action(&t2, m, x);
        let mu = space.rs.from_omega_int(&[k as i64]);
        Self::finish(
            ModelKind::SL2Spin,
            space,
            mu,
            vec![k],
            m + 1,
            labels,
            u,
            GroupElement::from_real(&s0),
            gram,
            &gens,
            &act,
            Backend::Spin { m, table },
        )
    }

    /// Tensor product of spin factors for SL(2,ℝ)^r with weight Σ k_j ω_j.
    pub fn product(ks: &[usize]) -> Result<Self> {
        if ks.is_empty() {
            return Err(Error::Usage("a product model needs at least one factor".into()));
        }
        let space = make_space(Family::Sl2Product, &[ks.len()])?;
        let factors: Vec<Arc<RepModel>> =
            ks.iter().map(|&k| RepModel::spin(k).map(Arc::new)).collect::<Result<_>>()?;
        let mut dim = 1;
        let mut labels = vec![String::new()];
        let mut u = vec![GaussQ::one()];
        let mut us = vec![GaussQ::one()];
        let mut es = vec![GaussQ::one()];
        let mut e = vec![C64::one()];
        let mut gram = Mat::<Q>::identity(1);
        for f in &factors {
            dim *= f.dim;
            labels = labels
                .iter()
                .flat_map(|a| f.labels.iter().map(move |b| if a.is_empty() { b.clone() } else { format!("{a}⊗{b}") }))
                .collect();
            u = kron_vec(&u, &f.u_exact);
            us = kron_vec(&us, &f.u_star_exact);
            es = kron_vec(&es, &f.e_star_exact);
            let mut ne = Vec::with_capacity(e.len() * f.e.len());
            for x in &e {
                for y in &f.e {
                    ne.push(x * y);
                }
            }
            e = ne;
            gram = kron_q(&gram, &f.gram);
        }
        let mu = space.rs.from_omega_int(&ks.iter().map(|&k| k as i64).collect::<Vec<_>>());
        let s0 = GroupElement { blocks: factors.iter().map(|f| f.s0.blocks[0].clone()).collect() };
        Ok(RepModel {
            kind: ModelKind::ProductModel,
            space,
            mu,
            mu_coeffs: ks.to_vec(),
            dim,
            labels,
            u: to_c64(&u),
            e,
            u_star: to_c64(&us),
            e_star: to_c64(&es),
            u_exact: u,
            u_star_exact: us,
            e_star_exact: es,
            s0,
            gram,
            backend: Backend::Product(factors),
        })
    }

    /// The model realizing μ on a supported level.
    pub fn for_space(space: &SpaceData, mu: &Weight) -> Result<Self> {
        let k = crate::weight_limits::omega_ints(mu, space)?;
        let ks: Vec<usize> = k.iter().map(|&x| x as usize).collect();
        match (space.family, space.params.as_slice()) {
            (Family::SoPq, [1, qq]) if *qq >= 2 => Self::harmonic(*qq, ks[0]),
            (Family::SlnR, [2]) => Self::spin(ks[0]),
            (Family::Sl2Product, _) => Self::product(&ks),
            _ => Err(Error::Unsupported(format!("no explicit model for {}", space.label()))),
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn finish(
        kind: ModelKind,
        space: SpaceData,
        mu: Weight,
        mu_coeffs: Vec<usize>,
        dim: usize,
        labels: Vec<String>,
        u: Vec<GaussQ>,
        s0: GroupElement,
        gram: Mat<Q>,
        gens: &Generators,
        act: &dyn Fn(&Mat<GaussQ>) -> Mat<GaussQ>,
        backend: Backend,
    ) -> Result<Self> {
        let k_act: Vec<Mat<GaussQ>> = gens.k.iter().map(act).collect();
        let mn_act: Vec<Mat<GaussQ>> = gens.m.iter().chain(&gens.n).map(act).collect();
        let e_star = one_dim_nullspace(k_act.iter().map(neg_transpose).collect(), dim, "K-fixed dual vectors")?;
        let e_star = {
            let p = pair_exact(&u, &e_star);
            if p.is_zero() {
                return Err(Error::Convention("⟨u, e*⟩ vanishes".into()));
            }
            scale_vec(&e_star, &(GaussQ::one() / p))
        };
        let u_star = one_dim_nullspace(mn_act.iter().map(neg_transpose).collect(), dim, "MN-fixed dual vectors")?;
        let mut model = RepModel {
            kind,
            space,
            mu,
            mu_coeffs,
            dim,
            labels,
            u: to_c64(&u),
            e: vec![],
            u_star: vec![],
            e_star: to_c64(&e_star),
            u_exact: u.clone(),
            u_star_exact: vec![],
            e_star_exact: e_star,
            s0,
            gram,
            backend,
        };
        let s0u = model.s0_exact_apply(&u)?;
        let p = pair_exact(&s0u, &u_star);
        if p.is_zero() {
            return Err(Error::Convention("⟨π(s₀)u, u*⟩ vanishes".into()));
        }
        let u_star = scale_vec(&u_star, &(GaussQ::one() / p));
        model.u_star = to_c64(&u_star);
        model.u_star_exact = u_star;
        let e0 = to_c64(&one_dim_nullspace(k_act, dim, "K-fixed vectors")?);
        let nrm = hermitian_norm2(&e0, &model.gram).sqrt();
        let ph = pair(&e0, &model.e_star);
        let phase = ph.conj() / ph.norm();
        model.e = e0.iter().map(|x| x * phase / nrm).collect();
        Ok(model)
    }

    /// π(s₀)v in exact arithmetic; s₀ acts by a signed permutation.
    fn s0_exact_apply(&self, v: &[GaussQ]) -> Result<Vec<GaussQ>> {
        let m = self.rep_matrix(&self.s0);
        let mut out = vec![GaussQ::zero(); self.dim];
        for i in 0..self.dim {
            for j in 0..self.dim {
                let x = m[(i, j)];
                let (re, im) = (x.re.round(), x.im.round());
                if (x.re - re).abs() > 1e-9 || (x.im - im).abs() > 1e-9 {
                    return Err(Error::Convention("π(s₀) is not integral".into()));
                }
                if re != 0.0 || im != 0.0 {
                    out[i] = out[i].clone() + gq(re as i64, im as i64) * v[j].clone();
                }
            }
        }
        Ok(out)
    }

    pub fn rank(&self) -> usize {
        self.space.rank
    }

    /// Generators of 𝔨, 𝔪, 𝔫, 𝔞 acting on V.
    pub fn lie_actions(&self) -> Generators {
        match &self.backend {
            Backend::Harmonic(hs) => {
                let g = lorentz_generators(hs.nvars);
                let f = |v: &Vec<Mat<GaussQ>>| v.iter().map(|x| hs.lie_action(x)).collect();
                Generators { k: f(&g.k), m: f(&g.m), n: f(&g.n), a: f(&g.a) }
            }
            Backend::Spin { m, table } => {
                let g = sl2_generators();
                let f = |v: &Vec<Mat<GaussQ>>| v.iter().map(|x| full_lie_action(table, *m, x)).collect();
                Generators { k: f(&g.k), m: f(&g.m), n: f(&g.n), a: f(&g.a) }
            }
            Backend::Product(fs) => {
                let mut out = Generators::default();
                for (idx, f) in fs.iter().enumerate() {
                    let g = f.lie_actions();
                    let lift = |x: &Mat<GaussQ>| {
                        let mut acc = Mat::<GaussQ>::identity(1);
                        for (j, h) in fs.iter().enumerate() {
                            let blk = if j == idx { x.clone() } else { Mat::identity(h.dim) };
                            acc = kron_q(&acc, &blk);
                        }
                        acc
                    };
                    out.k.extend(g.k.iter().map(lift));
                    out.m.extend(g.m.iter().map(lift));
                    out.n.extend(g.n.iter().map(lift));
                    out.a.extend(g.a.iter().map(lift));
                }
                out
            }
        }
    }

    pub fn rep_matrix(&self, g: &GroupElement) -> CMat {
        match &self.backend {
            Backend::Harmonic(hs) => hs.rep_matrix(&g.blocks[0]),
            Backend::Spin { m, table } => full_rep_matrix(table, *m, &g.blocks[0]),
            Backend::Product(fs) => {
                assert_eq!(g.blocks.len(), fs.len(), "factor count mismatch");
                let mut acc = CMat::identity(1, 1);
                for (f, b) in fs.iter().zip(&g.blocks) {
                    acc = kron_c(&acc, &f.rep_matrix(&GroupElement::single(b.clone())));
                }
                acc
            }
        }
    }

    /// π(g)⁻¹ = π(g⁻¹), computed by substitution without inverting g.
    pub fn rep_matrix_inv(&self, g: &GroupElement) -> CMat {
        match &self.backend {
            Backend::Harmonic(hs) => hs.substitution_matrix(&g.blocks[0]),
            Backend::Spin { m, table } => full_substitution_matrix(table, *m, &g.blocks[0]),
            Backend::Product(fs) => {
                assert_eq!(g.blocks.len(), fs.len(), "factor count mismatch");
                let mut acc = CMat::identity(1, 1);
                for (f, b) in fs.iter().zip(&g.blocks) {
                    acc = kron_c(&acc, &f.rep_matrix_inv(&GroupElement::single(b.clone())));
                }
                acc
            }
        }
    }

    pub fn factors(&self) -> Option<&[Arc<RepModel>]> {
        match &self.backend {
            Backend::Product(fs) => Some(fs),
            _ => None,
        }
    }

    pub fn harmonic_space(&self) -> Option<&HarmonicSpace> {
        match &self.backend {
            Backend::Harmonic(hs) => Some(hs),
            _ => None,
        }
    }

    /// π*(g)φ = π(g⁻¹)ᵀφ.
    pub fn dual_act(&self, g: &GroupElement, phi: &[C64]) -> Vec<C64> {
        mat_c(&self.rep_matrix_inv(g).transpose(), phi)
    }

    pub fn act(&self, g: &GroupElement, v: &[C64]) -> Vec<C64> {
        mat_c(&self.rep_matrix(g), v)
    }

    /// f_{v,μ}(g·x₀) = ⟨v, π*(g)e*⟩.
    pub fn matrix_coeff_f(&self, v: &[C64], g: &GroupElement) -> C64 {
        pair(&mat_c(&self.rep_matrix_inv(g), v), &self.e_star)
    }

    /// ψ_{v,μ}(g·ξ₀) = ⟨v, π*(g)u*⟩.
    pub fn matrix_coeff_psi(&self, v: &[C64], g: &GroupElement) -> C64 {
        pair(&mat_c(&self.rep_matrix_inv(g), v), &self.u_star)
    }

    /// f⁰(g) = ⟨π(g)e, e*⟩ / ⟨e, e*⟩.
    pub fn zonal_spherical(&self, g: &GroupElement) -> C64 {
        pair(&self.act(g, &self.e), &self.e_star) / pair(&self.e, &self.e_star)
    }

    /// ⟨v, w⟩ in the U-invariant Hermitian inner product.
    pub fn inner(&self, v: &[C64], w: &[C64]) -> C64 {
        let mut acc = C64::zero();
        for i in 0..self.dim {
            for j in 0..self.dim {
                if !self.gram[(i, j)].is_zero() {
                    acc += v[i] * w[j].conj() * q_to_f64(&self.gram[(i, j)]);
                }
            }
        }
        acc
    }

    /// Number of factors of A (the rank).
    pub fn a_element(&self, t: &[f64]) -> GroupElement {
        match &self.backend {
            Backend::Harmonic(hs) => GroupElement::single(complexify_lorentz(&lorentz_boost(hs.nvars, t[0]))),
            Backend::Spin { .. } => GroupElement::from_real(&sl2_diag(t[0])),
            Backend::Product(_) => GroupElement {
                blocks: t.iter().map(|&x| sl2_diag(x).map(|y| c(y, 0.0))).collect(),
            },
        }
    }

    /// ω_j(H_j) for the generator used by [`Self::a_element`].
    pub fn omega_of_h(&self) -> f64 {
        match self.kind {
            ModelKind::HarmonicPoly => 1.0,
            _ => 2.0,
        }
    }

    /// a^{λ} for a = a_element(t) and λ with ω-coefficients `coeffs`.
    pub fn a_power(&self, t: &[f64], coeffs: &[f64]) -> f64 {
        let w = self.omega_of_h();
        t.iter().zip(coeffs).map(|(ti, k)| k * w * ti).sum::<f64>().exp()
    }

    pub fn iwasawa(&self, g: &GroupElement) -> Result<Iwasawa> {
        match &self.backend {
            Backend::Harmonic(_) => {
                let h = realify_lorentz(&g.blocks[0], 1e-9)?;
                let (k, t, n) = iwasawa_lorentz(&h)?;
                Ok(Iwasawa {
                    k: GroupElement::single(complexify_lorentz(&k)),
                    a: GroupElement::single(complexify_lorentz(&lorentz_boost(h.nrows(), t))),
                    n: GroupElement::single(complexify_lorentz(&n)),
                    omega_log: vec![t],
                })
            }
            Backend::Spin { .. } | Backend::Product(_) => {
                let mut out = Iwasawa {
                    k: GroupElement { blocks: vec![] },
                    a: GroupElement { blocks: vec![] },
                    n: GroupElement { blocks: vec![] },
                    omega_log: vec![],
                };
                for b in &g.blocks {
                    if b.iter().any(|z| z.im.abs() > 1e-9 * b.norm().max(1.0)) {
                        return Err(Error::Domain("element is not in SL(2,ℝ)".into()));
                    }
                    let (k, t, n) = iwasawa_sl2(&b.map(|z| z.re))?;
                    out.k.blocks.push(k.map(|x| c(x, 0.0)));
                    out.a.blocks.push(sl2_diag(t).map(|x| c(x, 0.0)));
                    out.n.blocks.push(n.map(|x| c(x, 0.0)));
                    out.omega_log.push(2.0 * t);
                }
                Ok(out)
            }
        }
    }

    /// A random element of the real group G₀.
    pub fn random_g0<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &self.backend {
            Backend::Harmonic(hs) => {
                let n = hs.nvars;
                let mut h = RMat::identity(n, n);
                for _ in 0..3 {
                    h = h * lorentz_boost(n, rng.gen_range(-1.0..1.0));
                    for i in (0..n).filter(|&i| i != 1) {
                        for j in (i + 1..n).filter(|&j| j != 1) {
                            h = h * plane_rotation(n, i, j, rng.gen_range(-3.1..3.1));
                        }
                    }
                }
                GroupElement::single(complexify_lorentz(&h))
            }
            Backend::Spin { .. } => GroupElement::from_real(&random_sl2(rng)),
            Backend::Product(fs) => GroupElement {
                blocks: fs.iter().map(|_| random_sl2(rng).map(|x| c(x, 0.0))).collect(),
            },
        }
    }

    /// A random element of K₀.
    pub fn random_k<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &self.backend {
            Backend::Harmonic(hs) => {
                let n = hs.nvars;
                let spatial: Vec<usize> = std::iter::once(0).chain(2..n).collect();
                let mut k = RMat::identity(n, n);
                for _ in 0..2 {
                    for a in 0..spatial.len() {
                        for b in a + 1..spatial.len() {
                            k = k * plane_rotation(n, spatial[a], spatial[b], rng.gen_range(-3.1..3.1));
                        }
                    }
                }
                GroupElement::from_real(&k)
            }
            Backend::Spin { .. } => GroupElement::from_real(&plane_rotation(2, 0, 1, rng.gen_range(-3.1..3.1))),
            Backend::Product(fs) => GroupElement {
                blocks: fs
                    .iter()
                    .map(|_| plane_rotation(2, 0, 1, rng.gen_range(-3.1..3.1)).map(|x| c(x, 0.0)))
                    .collect(),
            },
        }
    }

    /// A random element of M N.
    pub fn random_mn<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &self.backend {
            Backend::Harmonic(hs) => {
                let n = hs.nvars;
                let mut x = RMat::zeros(n, n);
                for j in 2..n {
                    let s = rng.gen_range(-1.0..1.0);
                    x[(0, j)] += s;
                    x[(j, 0)] -= s;
                    x[(1, j)] += s;
                    x[(j, 1)] += s;
                }
                let nn = RMat::identity(n, n) + &x + &x * &x * 0.5;
                let mut m = RMat::identity(n, n);
                for a in 2..n {
                    for b in a + 1..n {
                        m = m * plane_rotation(n, a, b, rng.gen_range(-3.1..3.1));
                    }
                }
                GroupElement::single(complexify_lorentz(&(m * nn)))
            }
            Backend::Spin { .. } => GroupElement::from_real(&sl2_upper(rng.gen_range(-2.0..2.0))),
            Backend::Product(fs) => GroupElement {
                blocks: fs.iter().map(|_| sl2_upper(rng.gen_range(-2.0..2.0)).map(|x| c(x, 0.0))).collect(),
            },
        }
    }

    /// A random element of the compact form U.
    pub fn random_u<R: Rng>(&self, rng: &mut R) -> GroupElement {
        match &self.backend {
            Backend::Harmonic(hs) => {
                let n = hs.nvars;
                let mut k = RMat::identity(n, n);
                for _ in 0..2 {
                    for a in 0..n {
                        for b in a + 1..n {
                            k = k * plane_rotation(n, a, b, rng.gen_range(-3.1..3.1));
                        }
                    }
                }
                GroupElement::from_real(&k)
            }
            Backend::Spin { .. } => GroupElement::single(random_su2(rng)),
            Backend::Product(fs) => GroupElement { blocks: fs.iter().map(|_| random_su2(rng)).collect() },
        }
    }

    /// A random element of the complex group G = G_ℂ acting on Z.
    pub fn random_complex<R: Rng>(&self, rng: &mut R) -> GroupElement {
        let g = self.random_g0(rng);
        let u = self.random_u(rng);
        g.mul(&u)
    }

    pub fn identity(&self) -> GroupElement {
        self.s0.identity_like()
    }

    /// Random vector in V with entries in the unit square.
    pub fn random_vector<R: Rng>(&self, rng: &mut R) -> Vec<C64> {
        (0..self.dim).map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect()
    }

    pub fn exact_to_c64(v: &[GaussQ]) -> Vec<C64> {
        to_c64(v)
    }
}

/// Matrix E of the inclusion V_{μ_lo} → V_{μ_hi} (columns are images of
/// basis vectors). Levels must propagate and carry the same stabilized
/// ω-coefficients.
pub fn embedding_matrix(lo: &RepModel, hi: &RepModel) -> Result<Mat<Q>> {
    if !crate::space_catalog::propagates(&lo.space, &hi.space) {
        return Err(Error::Domain(format!("{} does not propagate to {}", lo.space.label(), hi.space.label())));
    }
    let tail_zero = hi.mu_coeffs.len() >= lo.mu_coeffs.len()
        && hi.mu_coeffs[..lo.mu_coeffs.len()] == lo.mu_coeffs[..]
        && hi.mu_coeffs[lo.mu_coeffs.len()..].iter().all(|&x| x == 0);
    if !tail_zero {
        return Err(Error::Domain(format!("weights {:?} and {:?} are not compatible", lo.mu_coeffs, hi.mu_coeffs)));
    }
    let mut e = Mat::<Q>::zeros(hi.dim, lo.dim);
    match (&lo.backend, &hi.backend) {
        (Backend::Harmonic(a), Backend::Harmonic(b)) => {
            for col in 0..lo.dim {
                let mut unit = vec![GaussQ::zero(); lo.dim];
                unit[col] = GaussQ::one();
                for (row, x) in b.include_from(a, &unit).into_iter().enumerate() {
                    e[(row, col)] = x.re;
                }
            }
        }
        // Extra factors carry the trivial representation.
        _ if lo.dim == hi.dim && lo.kind == hi.kind => {
            for i in 0..lo.dim {
                e[(i, i)] = q(1);
            }
        }
        (Backend::Spin { .. }, Backend::Product(_)) | (Backend::Product(_), Backend::Product(_)) if lo.dim == hi.dim => {
            for i in 0..lo.dim {
                e[(i, i)] = q(1);
            }
        }
        _ => return Err(Error::Unsupported(format!("no embedding from {} to {}", lo.space.label(), hi.space.label()))),
    }
    Ok(e)
}

pub fn embed_exact(lo: &RepModel, hi: &RepModel, v: &[GaussQ]) -> Result<Vec<GaussQ>> {
    let e = embedding_matrix(lo, hi)?;
    Ok((0..hi.dim)
        .map(|i| (0..lo.dim).fold(GaussQ::zero(), |acc, j| acc + GaussQ::real(e[(i, j)].clone()) * v[j].clone()))
        .collect())
}

pub fn embed(lo: &RepModel, hi: &RepModel, v: &[C64]) -> Result<Vec<C64>> {
    let e = embedding_matrix(lo, hi)?;
    Ok((0..hi.dim).map(|i| (0..lo.dim).map(|j| v[j] * q_to_f64(&e[(i, j)])).sum()).collect())
}

/// The projection proj_{lo,hi} = (EᵀGE)⁻¹EᵀG, orthogonal for the invariant
/// inner product of the higher level.
pub fn projection_matrix(hi: &RepModel, lo: &RepModel) -> Result<Mat<Q>> {
    let e = embedding_matrix(lo, hi)?;
    let etg = e.transpose().mul(&hi.gram);
    let inv = etg.mul(&e).inverse().ok_or_else(|| Error::Internal("singular Gram block".into()))?;
    Ok(inv.mul(&etg))
}

pub fn project_exact(hi: &RepModel, lo: &RepModel, w: &[GaussQ]) -> Result<Vec<GaussQ>> {
    let p = projection_matrix(hi, lo)?;
    Ok((0..lo.dim)
        .map(|i| (0..hi.dim).fold(GaussQ::zero(), |acc, j| acc + GaussQ::real(p[(i, j)].clone()) * w[j].clone()))
        .collect())
}

pub fn project(hi: &RepModel, lo: &RepModel, w: &[C64]) -> Result<Vec<C64>> {
    let p = projection_matrix(hi, lo)?;
    Ok((0..lo.dim).map(|i| (0..hi.dim).map(|j| w[j] * q_to_f64(&p[(i, j)])).sum()).collect())
}

/// G_lo → G_hi: identity on the added coordinates or factors.
pub fn embed_group(lo: &RepModel, hi: &RepModel, g: &GroupElement) -> GroupElement {
    match (&lo.backend, &hi.backend) {
        (Backend::Harmonic(a), Backend::Harmonic(b)) => {
            let mut m = CMat::identity(b.nvars, b.nvars);
            m.view_mut((0, 0), (a.nvars, a.nvars)).copy_from(&g.blocks[0]);
            GroupElement::single(m)
        }
        _ => {
            let mut blocks = g.blocks.clone();
            let target = hi.factors().map_or(1, |f| f.len());
            while blocks.len() < target {
                blocks.push(CMat::identity(2, 2));
            }
            GroupElement { blocks }
        }
    }
}

pub fn sl2_upper(x: f64) -> RMat {
    RMat::from_row_slice(2, 2, &[1.0, x, 0.0, 1.0])
}

pub fn random_sl2<R: Rng>(rng: &mut R) -> RMat {
    let k1 = plane_rotation(2, 0, 1, rng.gen_range(-3.1..3.1));
    let k2 = plane_rotation(2, 0, 1, rng.gen_range(-3.1..3.1));
    k1 * sl2_diag(rng.gen_range(-1.0..1.0)) * k2
}

pub fn random_su2<R: Rng>(rng: &mut R) -> CMat {
    let mut v = [0.0f64; 4];
    loop {
        for x in v.iter_mut() {
            *x = rng.gen_range(-1.0..1.0);
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 0.1 && n < 1.0 {
            for x in v.iter_mut() {
                *x /= n;
            }
            break;
        }
    }
    let a = c(v[0], v[1]);
    let b = c(v[2], v[3]);
    CMat::from_row_slice(2, 2, &[a, -b.conj(), b, a.conj()])
}

/// Which side of the Radon transform a regular function lives on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Side {
    /// f_{v,μ}(g·x₀) = ⟨v, π*(g)e*⟩
    Z,
    /// ψ_{v,μ}(g·ξ₀) = ⟨v, π*(g)u*⟩
    Xi,
}

/// Finite sum of μ-components.
#[derive(Clone, Debug)]
pub struct RegularFunction {
    pub side: Side,
    pub components: Vec<(Arc<RepModel>, Vec<C64>)>,
}

impl RegularFunction {
    pub fn single(side: Side, model: Arc<RepModel>, v: Vec<C64>) -> Result<Self> {
        if v.len() != model.dim {
            return Err(Error::Dimension(format!("vector of length {} in a {}-dimensional model", v.len(), model.dim)));
        }
        Ok(RegularFunction { side, components: vec![(model, v)] })
    }

    pub fn eval(&self, g: &GroupElement) -> C64 {
        self.components
            .iter()
            .map(|(m, v)| match self.side {
                Side::Z => m.matrix_coeff_f(v, g),
                Side::Xi => m.matrix_coeff_psi(v, g),
            })
            .sum()
    }

    /// Left translate (h·F)(x) = F(h⁻¹x), realized on the coefficient vectors.
    pub fn translate(&self, h: &GroupElement) -> RegularFunction {
        RegularFunction {
            side: self.side,
            components: self.components.iter().map(|(m, v)| (m.clone(), m.act(h, v))).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn close(a: C64, b: C64, tol: f64) -> bool {
        (a - b).norm() <= tol * (1.0 + b.norm())
    }

    #[test]
    fn harmonic_normalizations() {
        for qq in 2..5 {
            for k in 0..4 {
                let m = RepModel::harmonic(qq, k).unwrap();
                assert!(close(pair(&m.u, &m.e_star), C64::one(), 1e-12));
                let s0u = m.act(&m.s0, &m.u);
                assert!(close(pair(&s0u, &m.u_star), C64::one(), 1e-12));
                assert!((m.inner(&m.e, &m.e).re - 1.0).abs() < 1e-12);
                let p = pair(&m.e, &m.e_star);
                assert!(p.re > 0.0 && p.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn highest_weight_vector_is_annihilated() {
        let m = RepModel::harmonic(4, 3).unwrap();
        let g = m.lie_actions();
        for x in g.n.iter().chain(&g.m) {
            assert!(x.mul_vec(&m.u_exact).iter().all(|c| c.is_zero()));
        }
        let h = g.a[0].mul_vec(&m.u_exact);
        assert_eq!(h, scale_vec(&m.u_exact, &gq(3, 0)));
    }

    #[test]
    fn spin_highest_weight() {
        let m = RepModel::spin(2).unwrap();
        let g = m.lie_actions();
        assert!(g.n[0].mul_vec(&m.u_exact).iter().all(|c| c.is_zero()));
        assert_eq!(g.a[0].mul_vec(&m.u_exact), scale_vec(&m.u_exact, &gq(4, 0)));
    }

    #[test]
    fn homomorphism_and_unitarity() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for m in [RepModel::harmonic(3, 2).unwrap(), RepModel::spin(2).unwrap(), RepModel::product(&[1, 1]).unwrap()] {
            let g = m.random_complex(&mut rng);
            let h = m.random_complex(&mut rng);
            let lhs = m.rep_matrix(&g.mul(&h));
            let rhs = m.rep_matrix(&g) * m.rep_matrix(&h);
            assert!((lhs - &rhs).norm() < 1e-9 * rhs.norm());
            let u = m.random_u(&mut rng);
            let v = m.random_vector(&mut rng);
            let w = m.random_vector(&mut rng);
            let a = m.inner(&m.act(&u, &v), &m.act(&u, &w));
            assert!(close(a, m.inner(&v, &w), 1e-10));
        }
    }

    #[test]
    fn invariances_of_matrix_coefficients() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for m in [RepModel::harmonic(3, 2).unwrap(), RepModel::spin(1).unwrap(), RepModel::product(&[1, 2]).unwrap()] {
            let v = m.random_vector(&mut rng);
            let g = m.random_g0(&mut rng);
            let k = m.random_k(&mut rng);
            let mn = m.random_mn(&mut rng);
            assert!(close(m.matrix_coeff_f(&v, &g.mul(&k)), m.matrix_coeff_f(&v, &g), 1e-10));
            assert!(close(m.matrix_coeff_psi(&v, &g.mul(&mn)), m.matrix_coeff_psi(&v, &g), 1e-10));
            assert!(close(m.matrix_coeff_f(&m.u, &m.identity()), C64::one(), 1e-12));
            assert!(close(m.matrix_coeff_psi(&m.u, &m.s0), C64::one(), 1e-12));
        }
    }

    #[test]
    fn embedding_and_projection() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let lo = RepModel::harmonic(2, 3).unwrap();
        let hi = RepModel::harmonic(4, 3).unwrap();
        assert_eq!(embed_exact(&lo, &hi, &lo.u_exact).unwrap(), hi.u_exact);
        let p = projection_matrix(&hi, &lo).unwrap();
        let e = embedding_matrix(&lo, &hi).unwrap();
        assert_eq!(p.mul(&e), Mat::identity(lo.dim));
        let v = lo.random_vector(&mut rng);
        let g = lo.random_complex(&mut rng);
        let lhs = embed(&lo, &hi, &lo.act(&g, &v)).unwrap();
        let rhs = hi.act(&embed_group(&lo, &hi, &g), &embed(&lo, &hi, &v).unwrap());
        for (a, b) in lhs.iter().zip(&rhs) {
            assert!(close(*a, *b, 1e-10));
        }
        assert_eq!(embed_exact(&lo, &hi, &lo.e_star_exact).is_ok(), true);
        let bad = RepModel::harmonic(4, 2).unwrap();
        assert!(embedding_matrix(&lo, &bad).is_err());
    }

    #[test]
    fn distinguished_functionals_restrict() {
        let lo = RepModel::harmonic(2, 2).unwrap();
        let hi = RepModel::harmonic(5, 2).unwrap();
        let e = embedding_matrix(&lo, &hi).unwrap();
        let pull = |phi: &[GaussQ]| -> Vec<GaussQ> {
            (0..lo.dim)
                .map(|j| (0..hi.dim).fold(GaussQ::zero(), |acc, i| acc + GaussQ::real(e[(i, j)].clone()) * phi[i].clone()))
                .collect()
        };
        assert_eq!(pull(&hi.e_star_exact), lo.e_star_exact);
        assert_eq!(pull(&hi.u_star_exact), lo.u_star_exact);
    }

    #[test]
    fn model_dimensions() {
        assert_eq!(RepModel::harmonic(2, 3).unwrap().dim, 7);
        assert_eq!(RepModel::harmonic(3, 2).unwrap().dim, 9);
        assert_eq!(RepModel::spin(2).unwrap().dim, 5);
        assert_eq!(RepModel::product(&[1, 2]).unwrap().dim, 15);
        assert_eq!(RepModel::harmonic(2, 0).unwrap().dim, 1);
    }
}

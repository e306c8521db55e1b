//! Lie algebra realizations and multiplicity checks.
//!
//! Subalgebras are spanned by matrices in the defining realization of the
//! largest level; smaller levels sit in the upper-left corner (or in the
//! first factors). All computations are exact.

use num_traits::Zero;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{intersection_dim, q, Field, Fp, GaussQ, Mat, Q};
use crate::rep_engine::harmonic::HarmonicSpace;
use crate::space_catalog::{Family, SpaceData};

/// Bases of 𝔤, 𝔪 and 𝔫 as flattened n×n matrices.
#[derive(Clone, Debug)]
pub struct Realization {
    pub size: usize,
    pub g: Vec<Vec<GaussQ>>,
    pub m: Vec<Vec<GaussQ>>,
    pub n: Vec<Vec<GaussQ>>,
}

fn unit(size: usize, entries: &[(usize, usize, GaussQ)]) -> Vec<GaussQ> {
    let mut v = vec![GaussQ::zero(); size * size];
    for (i, j, x) in entries {
        v[i * size + j] = v[i * size + j].clone() + x.clone();
    }
    v
}

fn one() -> GaussQ {
    GaussQ::real(q(1))
}

fn rot(size: usize, a: usize, b: usize) -> Vec<GaussQ> {
    unit(size, &[(a, b, one()), (b, a, -one())])
}

/// so(1, q) in the twisted coordinates of the harmonic model with `nv`
/// active coordinates, padded to `size`.
fn lorentz(nv: usize, size: usize) -> Realization {
    let mut g = Vec::new();
    for a in 0..nv {
        for b in a + 1..nv {
            g.push(rot(size, a, b));
        }
    }
    let mut m = Vec::new();
    for a in 2..nv {
        for b in a + 1..nv {
            m.push(rot(size, a, b));
        }
    }
    let i = GaussQ::i();
    let n = (2..nv)
        .map(|j| unit(size, &[(0, j, one()), (j, 0, -one()), (1, j, i.clone()), (j, 1, -i.clone())]))
        .collect();
    Realization { size, g, m, n }
}

/// sl(n) with 𝔪 = 0 and 𝔫 strictly upper triangular, padded to `size`.
fn sl(n: usize, size: usize) -> Realization {
    let mut g = Vec::new();
    let mut nn = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if a != b {
                g.push(unit(size, &[(a, b, one())]));
                if a < b {
                    nn.push(unit(size, &[(a, b, one())]));
                }
            }
        }
        if a + 1 < n {
            g.push(unit(size, &[(a, a, one()), (a + 1, a + 1, -one())]));
        }
    }
    Realization { size, g, m: vec![], n: nn }
}

/// sl(2)^r as block diagonal 2r×2r matrices; the first r blocks are active.
fn sl2_product(r: usize, size: usize) -> Realization {
    let mut g = Vec::new();
    let mut n = Vec::new();
    for f in 0..r {
        let o = 2 * f;
        g.push(unit(size, &[(o, o + 1, one())]));
        g.push(unit(size, &[(o + 1, o, one())]));
        g.push(unit(size, &[(o, o, one()), (o + 1, o + 1, -one())]));
        n.push(unit(size, &[(o, o + 1, one())]));
    }
    Realization { size, g, m: vec![], n }
}

/// Realization of a level inside a matrix space of the given size.
pub fn realization(s: &SpaceData, size: usize) -> Result<Realization> {
    match (s.family, s.params.as_slice()) {
        (Family::SoPq, [1, qq]) => Ok(lorentz(qq + 1, size)),
        (Family::SlnR, [n]) => Ok(sl(*n, size)),
        (Family::Sl2Product, [r]) => Ok(sl2_product(*r, size)),
        _ => Err(Error::Unsupported(format!("no matrix realization for {}", s.label()))),
    }
}

/// Matrix size of the defining realization.
pub fn realization_size(s: &SpaceData) -> Result<usize> {
    match (s.family, s.params.as_slice()) {
        (Family::SoPq, [1, qq]) => Ok(qq + 1),
        (Family::SlnR, [n]) => Ok(*n),
        (Family::Sl2Product, [r]) => Ok(2 * r),
        _ => Err(Error::Unsupported(format!("no matrix realization for {}", s.label()))),
    }
}

#[derive(Clone, Debug, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct AdmissibilityPair {
    pub lo: String,
    pub hi: String,
    pub dim_m_lo: usize,
    pub dim_m_hi_cap_g_lo: usize,
    pub dim_n_lo: usize,
    pub dim_n_hi_cap_g_lo: usize,
    pub holds: bool,
}

/// 𝔪_lo = 𝔪_hi ∩ 𝔤_lo and 𝔫_lo = 𝔤_lo ∩ 𝔫_hi as subspace identities.
pub fn admissible_pair(lo: &SpaceData, hi: &SpaceData) -> Result<AdmissibilityPair> {
    let size = realization_size(hi)?;
    let a = realization(lo, size)?;
    let b = realization(hi, size)?;
    let dm = intersection_dim(&b.m, &a.g);
    let dn = intersection_dim(&b.n, &a.g);
    // containment of the small subalgebras makes equal dimensions equal spaces
    let m_in = a.m.is_empty() || intersection_dim(&b.m, &a.m) == a.m.len();
    let n_in = a.n.is_empty() || intersection_dim(&b.n, &a.n) == a.n.len();
    Ok(AdmissibilityPair {
        lo: lo.label(),
        hi: hi.label(),
        dim_m_lo: a.m.len(),
        dim_m_hi_cap_g_lo: dm,
        dim_n_lo: a.n.len(),
        dim_n_hi_cap_g_lo: dn,
        holds: m_in && n_in && dm == a.m.len() && dn == a.n.len(),
    })
}

fn to_fp(x: &GaussQ) -> Result<Fp> {
    if !x.im.is_zero() {
        return Err(Error::Internal("expected a real action matrix".into()));
    }
    Ok(Fp::from_q(&x.re))
}

/// Linear system T·A = B·T for all pairs (A, B), unknowns row-major in T.
fn equivariance_system<F: Field>(pairs: &[(Mat<F>, Mat<F>)], rows: usize, cols: usize) -> Mat<F> {
    let unknowns = rows * cols;
    let mut eqs = Vec::new();
    for (a, b) in pairs {
        for i in 0..rows {
            for j in 0..cols {
                let mut row = vec![F::zero(); unknowns];
                for c in 0..cols {
                    if !a[(c, j)].is_zero() {
                        row[i * cols + c] = row[i * cols + c].clone() + a[(c, j)].clone();
                    }
                }
                for c in 0..rows {
                    if !b[(i, c)].is_zero() {
                        row[c * cols + j] = row[c * cols + j].clone() - b[(i, c)].clone();
                    }
                }
                if row.iter().any(|x| !x.is_zero()) {
                    eqs.push(row);
                }
            }
        }
    }
    if eqs.is_empty() {
        return Mat::zeros(0, unknowns);
    }
    Mat::from_rows(eqs)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Arithmetic {
    /// Modulo the prime 2⁶¹ − 1; the nullity is an upper bound for the
    /// rational one.
    Modular,
    Rational,
}

/// dim Hom_{𝔤_lo}(H_k(ℂ^{n_lo}), H_k(ℂ^{n_hi})) from the equivariance
/// equations over the real rotation generators of 𝔤_lo.
pub fn harmonic_intertwiner_dim(n_lo: usize, n_hi: usize, k: usize, arith: Arithmetic) -> Result<usize> {
    hom_dim(n_lo, k, n_hi, k, arith)
}

/// dim Hom_{𝔤_lo}(H_{k_lo}(ℂ^{n_lo}), H_{k_hi}(ℂ^{n_hi})).
pub fn hom_dim(n_lo: usize, k_lo: usize, n_hi: usize, k_hi: usize, arith: Arithmetic) -> Result<usize> {
    if n_lo > n_hi || n_lo < 2 {
        return Err(Error::Usage(format!("levels {n_lo} → {n_hi}")));
    }
    let lo = HarmonicSpace::new(n_lo, k_lo);
    let hi = HarmonicSpace::new(n_hi, k_hi);
    let mut gens = Vec::new();
    for a in 0..n_lo {
        for b in a + 1..n_lo {
            let mk = |n: usize| {
                let mut x = Mat::<GaussQ>::zeros(n, n);
                x[(a, b)] = one();
                x[(b, a)] = -one();
                x
            };
            gens.push((lo.lie_action(&mk(n_lo)), hi.lie_action(&mk(n_hi))));
        }
    }
    let unknowns = hi.dim() * lo.dim();
    match arith {
        Arithmetic::Modular => {
            let conv = |m: &Mat<GaussQ>| -> Result<Mat<Fp>> {
                Ok(Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(to_fp).collect::<Result<_>>()? })
            };
            let pairs: Vec<(Mat<Fp>, Mat<Fp>)> =
                gens.iter().map(|(a, b)| Ok((conv(a)?, conv(b)?))).collect::<Result<_>>()?;
            Ok(unknowns - equivariance_system(&pairs, hi.dim(), lo.dim()).rank())
        }
        Arithmetic::Rational => {
            let conv = |m: &Mat<GaussQ>| -> Result<Mat<Q>> {
                if m.data.iter().any(|x| !x.im.is_zero()) {
                    return Err(Error::Internal("expected a real action matrix".into()));
                }
                Ok(Mat { rows: m.rows, cols: m.cols, data: m.data.iter().map(|x| x.re.clone()).collect() })
            };
            let pairs: Vec<(Mat<Q>, Mat<Q>)> =
                gens.iter().map(|(a, b)| Ok((conv(a)?, conv(b)?))).collect::<Result<_>>()?;
            Ok(unknowns - equivariance_system(&pairs, hi.dim(), lo.dim()).rank())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_catalog::make_space;

    #[test]
    fn lorentz_chain_is_admissible() {
        for a in 2..5 {
            for b in a..6 {
                let lo = make_space(Family::SoPq, &[1, a]).unwrap();
                let hi = make_space(Family::SoPq, &[1, b]).unwrap();
                let r = admissible_pair(&lo, &hi).unwrap();
                assert!(r.holds, "{r:?}");
            }
        }
    }

    #[test]
    fn split_chains_are_admissible() {
        let lo = make_space(Family::SlnR, &[3]).unwrap();
        let hi = make_space(Family::SlnR, &[5]).unwrap();
        assert!(admissible_pair(&lo, &hi).unwrap().holds);
        let lo = make_space(Family::Sl2Product, &[1]).unwrap();
        let hi = make_space(Family::Sl2Product, &[3]).unwrap();
        assert!(admissible_pair(&lo, &hi).unwrap().holds);
    }

    #[test]
    fn unsupported_realization() {
        let s = make_space(Family::SuPq, &[1, 3]).unwrap();
        assert!(realization(&s, 4).is_err());
    }

    #[test]
    fn multiplicity_one_small() {
        assert_eq!(harmonic_intertwiner_dim(3, 4, 2, Arithmetic::Rational).unwrap(), 1);
        assert_eq!(harmonic_intertwiner_dim(3, 5, 3, Arithmetic::Modular).unwrap(), 1);
        assert_eq!(harmonic_intertwiner_dim(3, 3, 0, Arithmetic::Modular).unwrap(), 1);
    }

    #[test]
    fn detects_larger_hom_spaces() {
        // H_4(ℝ⁵) branches to ⊕_{i ≤ j ≤ 4} H_i(ℝ³), with five trivial summands.
        assert_eq!(hom_dim(3, 0, 5, 4, Arithmetic::Modular).unwrap(), 5);
        assert_eq!(hom_dim(3, 1, 4, 2, Arithmetic::Rational).unwrap(), 1);
        assert_eq!(hom_dim(3, 2, 4, 1, Arithmetic::Rational).unwrap(), 0);
    }
}

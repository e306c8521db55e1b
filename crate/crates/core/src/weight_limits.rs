//! Weight bookkeeping along propagated chains: ι, restriction, fibers.

use num_traits::{Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integer, q, Q};
use crate::root_core::{is_in_lambda_plus, RootType, Weight};
use crate::space_catalog::{propagates, Family, SpaceData};

/// Stabilized ω-coefficients starting at some level of a chain.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct WeightSequence {
    pub start_level: usize,
    pub coefficients: Vec<u64>,
}

impl WeightSequence {
    /// μ_k = Σ_s k_s ω_{k,s} at a level of rank at least the coefficient count.
    pub fn materialize(&self, level: &SpaceData) -> Result<Weight> {
        if level.rank < self.coefficients.len() {
            return Err(Error::Dimension(format!(
                "{} coefficients on a rank {} level",
                self.coefficients.len(),
                level.rank
            )));
        }
        let mut k = vec![Q::zero(); level.rank];
        for (x, &c) in k.iter_mut().zip(&self.coefficients) {
            *x = q(c as i64);
        }
        Ok(level.rs.from_omega(&k))
    }
}

fn check_pair(lo: &SpaceData, hi: &SpaceData) -> Result<()> {
    if !propagates(lo, hi) {
        return Err(Error::Usage(format!("{} does not propagate to {}", lo.label(), hi.label())));
    }
    Ok(())
}

/// Nonnegative integer ω-coefficients of a dominant weight.
pub fn omega_ints(mu: &Weight, s: &SpaceData) -> Result<Vec<u64>> {
    if !is_in_lambda_plus(mu, &s.rs) {
        return Err(Error::Domain(format!("{mu} is not in Λ⁺ of {}", s.label())));
    }
    s.rs.omega_coords(mu)
        .iter()
        .map(|k| {
            if is_integer(k) && !k.is_negative() {
                k.to_integer().to_u64().ok_or_else(|| Error::Domain("coefficient too large".into()))
            } else {
                Err(Error::Domain(format!("ω-coefficient {k} of {mu} is not a nonnegative integer")))
            }
        })
        .collect()
}

pub fn iota(mu: &Weight, lo: &SpaceData, hi: &SpaceData) -> Result<Weight> {
    check_pair(lo, hi)?;
    let k = omega_ints(mu, lo)?;
    WeightSequence { start_level: 0, coefficients: k }.materialize(hi)
}

pub fn restrict(mu: &Weight, hi: &SpaceData, lo: &SpaceData) -> Result<Weight> {
    check_pair(lo, hi)?;
    if mu.rank() != hi.rank {
        return Err(Error::Dimension(format!("weight rank {} on {}", mu.rank(), hi.label())));
    }
    if lo.rank == hi.rank {
        return Ok(mu.clone());
    }
    match hi.rs.kind {
        // 𝔞_j is the span of the first coordinates of the diagonal.
        RootType::A => {
            let e = hi.rs.to_e(mu);
            Ok(lo.rs.from_e(&e[..lo.rs.e_dim]))
        }
        RootType::A1Product => Ok(Weight::new(mu.coords[..lo.rank].to_vec())),
        _ => Err(Error::Unsupported(format!(
            "no cataloged restriction from {} to {}",
            hi.label(),
            lo.label()
        ))),
    }
}

fn boxes(bounds: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &b in bounds {
        let mut next = Vec::new();
        for v in &out {
            for x in 0..=b {
                let mut w = v.clone();
                w.push(x);
                next.push(w);
            }
        }
        out = next;
    }
    out
}

/// Whether `candidate` is the least element of the restriction fiber over
/// `mu_lo` among dominant weights below it in the ω-coefficient order.
pub fn is_minimal_in_fiber(
    mu_lo: &Weight,
    candidate: &Weight,
    hi: &SpaceData,
    lo: &SpaceData,
) -> Result<bool> {
    if restrict(candidate, hi, lo)? != *mu_lo {
        return Err(Error::Usage(format!("{candidate} does not restrict to {mu_lo}")));
    }
    let kc = omega_ints(candidate, hi)?;
    for k in boxes(&kc) {
        if k == kc {
            continue;
        }
        let nu = hi.rs.from_omega_int(&k.iter().map(|&x| x as i64).collect::<Vec<_>>());
        if restrict(&nu, hi, lo)? == *mu_lo {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct LimitClass {
    pub finite_rank: bool,
    pub family_tag: Option<String>,
}

pub fn classify_limit(chain: &[SpaceData]) -> Result<LimitClass> {
    let Some(first) = chain.first() else {
        return Err(Error::Usage("empty chain".into()));
    };
    for w in chain.windows(2) {
        check_pair(&w[0], &w[1])?;
    }
    let finite_rank = chain.iter().all(|s| s.rank == first.rank);
    let last = chain.last().unwrap();
    let family_tag = match first.family {
        Family::SoPq | Family::SuPq | Family::SpPq
            if finite_rank && last.params[1] > first.params[1] =>
        {
            Some(format!("{}({}+∞)", first.family, first.params[0]))
        }
        _ => None,
    };
    Ok(LimitClass { finite_rank, family_tag })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::space_catalog::make_space;

    fn sl(n: usize) -> SpaceData {
        make_space(Family::SlnR, &[n]).unwrap()
    }

    #[test]
    fn iota_sl3_to_sl4() {
        let (lo, hi) = (sl(3), sl(4));
        let mu = lo.rs.from_omega_int(&[2, 1]);
        let up = iota(&mu, &lo, &hi).unwrap();
        assert_eq!(up, hi.rs.from_omega_int(&[2, 1, 0]));
        assert_eq!(restrict(&up, &hi, &lo).unwrap(), mu);
        assert!(iota(&Weight::zero(2), &lo, &hi).unwrap().is_zero());
    }

    #[test]
    fn a_series_restriction_of_fundamentals_and_roots() {
        let (lo, hi) = (sl(3), sl(6));
        for s in 0..hi.rank {
            let mut k = vec![0; hi.rank];
            k[s] = 1;
            let r = restrict(&hi.rs.from_omega_int(&k), &hi, &lo).unwrap();
            if s < lo.rank {
                let mut kl = vec![0; lo.rank];
                kl[s] = 1;
                assert_eq!(r, lo.rs.from_omega_int(&kl));
            } else {
                assert!(r.is_zero());
            }
            let a = restrict(&hi.rs.simple_root(s), &hi, &lo).unwrap();
            if s >= lo.rank + 1 {
                assert!(a.is_zero(), "α_{}", s + 1);
            }
        }
    }

    #[test]
    fn constant_rank_is_identity() {
        let lo = make_space(Family::SoPq, &[2, 3]).unwrap();
        let hi = make_space(Family::SoPq, &[2, 7]).unwrap();
        let mu = lo.rs.from_omega_int(&[3, 1]);
        assert_eq!(iota(&mu, &lo, &hi).unwrap(), mu);
        assert_eq!(restrict(&mu, &hi, &lo).unwrap(), mu);
    }

    #[test]
    fn fiber_minimality() {
        let (lo, hi) = (sl(3), sl(5));
        let mu = lo.rs.from_omega_int(&[1, 2]);
        let c = iota(&mu, &lo, &hi).unwrap();
        assert!(is_minimal_in_fiber(&mu, &c, &hi, &lo).unwrap());
        let shifted = c.add(&hi.rs.from_omega_int(&[0, 0, 1, 0]));
        assert!(!is_minimal_in_fiber(&mu, &shifted, &hi, &lo).unwrap());
        assert!(is_minimal_in_fiber(&Weight::zero(2), &Weight::zero(4), &hi, &lo).unwrap());
    }

    #[test]
    fn classification() {
        let so: Vec<_> = (2..6).map(|qq| make_space(Family::SoPq, &[1, qq]).unwrap()).collect();
        let c = classify_limit(&so).unwrap();
        assert!(c.finite_rank);
        assert_eq!(c.family_tag.as_deref(), Some("SO(1+∞)"));
        let sls: Vec<_> = (2..6).map(sl).collect();
        assert!(!classify_limit(&sls).unwrap().finite_rank);
        let same = vec![sl(4), sl(4), sl(4)];
        assert!(classify_limit(&same).unwrap().finite_rank);
        assert!(classify_limit(&[sl(4), sl(3)]).is_err());
    }

    #[test]
    fn unsupported_restriction_is_explicit() {
        let lo = make_space(Family::SoPq, &[2, 5]).unwrap();
        let hi = make_space(Family::SoPq, &[3, 5]).unwrap();
        assert!(restrict(&hi.rho, &hi, &lo).is_err());
    }
}

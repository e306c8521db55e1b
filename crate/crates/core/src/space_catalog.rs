//! Classical symmetric-space levels: restricted roots, multiplicities, ρ.

use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::Serialize;
use serde_json::json;

use crate::error::{Error, Result};
use crate::exact::{q, qf, Q};
use crate::root_core::{inner_product, RootSystemData, RootType, Weight};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    SlnR,
    SoPq,
    SuPq,
    SpPq,
    Sl2Product,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Family::SlnR => "SL",
            Family::SoPq => "SO",
            Family::SuPq => "SU",
            Family::SpPq => "Sp",
            Family::Sl2Product => "SL2xR",
        };
        f.write_str(s)
    }
}

impl FromStr for Family {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sl" | "sl_n_r" | "slnr" => Ok(Family::SlnR),
            "so" | "so_p_q" | "sopq" => Ok(Family::SoPq),
            "su" | "su_p_q" | "supq" => Ok(Family::SuPq),
            "sp" | "sp_p_q" | "sppq" => Ok(Family::SpPq),
            "sl2xr" | "sl2_product" | "sl2product" | "sl2" => Ok(Family::Sl2Product),
            _ => Err(Error::Usage(format!("unknown family {s:?}"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct SpaceData {
    pub family: Family,
    /// (p, q) for the indefinite families, (n) for SL(n,ℝ), (r) for products.
    pub params: Vec<usize>,
    pub rs: RootSystemData,
    /// m_α for each entry of `rs.positive`.
    pub mult: Vec<u32>,
    pub rank: usize,
    pub rho: Weight,
}

impl SpaceData {
    pub fn label(&self) -> String {
        match self.family {
            Family::SlnR => format!("SL({},R)", self.params[0]),
            Family::Sl2Product => format!("SL(2,R)^{}", self.params[0]),
            f => format!("{}({},{})", f, self.params[0], self.params[1]),
        }
    }

    /// m_α, zero when α is not a root.
    pub fn mult_of(&self, alpha: &Weight) -> u32 {
        self.rs.positive.iter().position(|a| a == alpha).map_or(0, |i| self.mult[i])
    }

    /// Indivisible positive roots (α/2 ∉ Σ) with (m_α, m_{2α}).
    pub fn indivisible(&self) -> Vec<(Weight, u32, u32)> {
        let half = qf(1, 2);
        self.rs
            .positive
            .iter()
            .zip(&self.mult)
            .filter(|(a, _)| !self.rs.positive.contains(&a.scale(&half)))
            .map(|(a, &m)| (a.clone(), m, self.mult_of(&a.scale(&q(2)))))
            .collect()
    }

    pub fn info_json(&self) -> serde_json::Value {
        let roots: Vec<serde_json::Value> = self
            .rs
            .positive
            .iter()
            .zip(&self.mult)
            .map(|(a, m)| {
                json!({
                    "simpleCoords": a.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
                    "multiplicity": m,
                })
            })
            .collect();
        json!({
            "family": self.family.to_string(),
            "label": self.label(),
            "params": self.params,
            "type": self.rs.kind.to_string(),
            "rank": self.rank,
            "positiveRoots": roots,
            "multiplicities": self.mult,
            "rho": self.rho.coords.iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        })
    }
}

/// Number of nonzero e-coordinates and the largest absolute entry.
fn shape(e: &[Q]) -> (usize, Q) {
    let nz = e.iter().filter(|x| !x.is_zero()).count();
    let max = e.iter().map(|x| if *x < Q::zero() { -x.clone() } else { x.clone() }).max().unwrap();
    (nz, max)
}

pub fn make_space(family: Family, params: &[usize]) -> Result<SpaceData> {
    let bad = |m: &str| Error::Usage(format!("{family}: {m}"));
    let (kind, rank, mults): (RootType, usize, [u32; 3]) = match family {
        Family::SlnR => {
            let [n] = params else { return Err(bad("expects one parameter n")) };
            if *n < 2 {
                return Err(bad("n must be ≥ 2"));
            }
            (RootType::A, n - 1, [1, 1, 1])
        }
        Family::Sl2Product => {
            let [r] = params else { return Err(bad("expects one parameter r")) };
            if *r < 1 {
                return Err(bad("r must be ≥ 1"));
            }
            (RootType::A1Product, *r, [1, 1, 1])
        }
        Family::SoPq | Family::SuPq | Family::SpPq => {
            let [p, qq] = params else { return Err(bad("expects parameters p q")) };
            let (p, qq) = (*p as u32, *qq as u32);
            if p < 1 || p > qq {
                return Err(bad("requires 1 ≤ p ≤ q"));
            }
            // Multiplicities of e_i ± e_j, e_i, 2e_i.
            match (family, p == qq) {
                (Family::SoPq, true) => {
                    if p < 2 {
                        return Err(bad("SO(1,1) has no restricted roots"));
                    }
                    (RootType::D, p as usize, [1, 0, 0])
                }
                (Family::SoPq, false) => (RootType::B, p as usize, [1, qq - p, 0]),
                (Family::SuPq, true) => (RootType::C, p as usize, [2, 0, 1]),
                (Family::SuPq, false) => (RootType::BC, p as usize, [2, 2 * (qq - p), 1]),
                (Family::SpPq, true) => (RootType::C, p as usize, [4, 0, 3]),
                (Family::SpPq, false) => (RootType::BC, p as usize, [4, 4 * (qq - p), 3]),
                _ => unreachable!(),
            }
        }
    };
    let rs = RootSystemData::new(kind.clone(), rank)?;
    let mult: Vec<u32> = rs
        .positive
        .iter()
        .map(|a| {
            if matches!(kind, RootType::A | RootType::A1Product) {
                return mults[0];
            }
            match shape(&rs.to_e(a)) {
                (2, _) => mults[0],
                (1, m) if m == q(1) => mults[1],
                _ => mults[2],
            }
        })
        .collect();
    let mut rho = Weight::zero(rank);
    for (a, &m) in rs.positive.iter().zip(&mult) {
        rho = rho.add(&a.scale(&qf(m as i64, 2)));
    }
    Ok(SpaceData { family, params: params.to_vec(), rs, mult, rank, rho })
}

/// Whether `hi` extends `lo` by adding simple roots at the far end of the
/// diagram (or by raising multiplicities at constant rank). Levels from
/// different families never propagate into one another.
pub fn propagates(lo: &SpaceData, hi: &SpaceData) -> bool {
    if lo.family != hi.family || lo.rs.kind != hi.rs.kind {
        return false;
    }
    match lo.family {
        Family::SlnR | Family::Sl2Product => hi.params[0] >= lo.params[0],
        _ => lo.params[0] == hi.params[0] && hi.params[1] >= lo.params[1],
    }
}

/// ⟨ρ, α⟩/⟨α, α⟩ for every positive root.
pub fn rho_pairings(s: &SpaceData) -> Vec<Q> {
    s.rs
        .positive
        .iter()
        .map(|a| inner_product(&s.rho, a, &s.rs).unwrap() / inner_product(a, a, &s.rs).unwrap())
        .collect()
}

/// Every catalog space with rank ≤ `max_rank` and p + q, n, r bounded by
/// `max_size`.
pub fn catalog(max_rank: usize, max_size: usize) -> Vec<SpaceData> {
    let mut out = Vec::new();
    for n in 2..=max_size {
        if n - 1 <= max_rank {
            out.push(make_space(Family::SlnR, &[n]).unwrap());
        }
    }
    for r in 1..=max_rank.min(max_size) {
        out.push(make_space(Family::Sl2Product, &[r]).unwrap());
    }
    for fam in [Family::SoPq, Family::SuPq, Family::SpPq] {
        for p in 1..=max_rank {
            for qq in p..=max_size.saturating_sub(p) {
                if let Ok(s) = make_space(fam, &[p, qq]) {
                    out.push(s);
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn so12_hyperbolic_plane() {
        let s = make_space(Family::SoPq, &[1, 2]).unwrap();
        assert_eq!(s.rank, 1);
        assert_eq!(s.rs.positive.len(), 1);
        assert_eq!(s.mult, vec![1]);
        assert_eq!(s.rho, s.rs.simple_root(0).scale(&qf(1, 2)));
    }

    #[test]
    fn so24_is_b2() {
        let s = make_space(Family::SoPq, &[2, 4]).unwrap();
        assert_eq!(s.rs.kind, RootType::B);
        for (a, m) in s.rs.positive.iter().zip(&s.mult) {
            let len = inner_product(a, a, &s.rs).unwrap();
            assert_eq!(*m, if len == q(1) { 2 } else { 1 });
        }
    }

    #[test]
    fn sl2_product_rho() {
        let s = make_space(Family::Sl2Product, &[3]).unwrap();
        assert_eq!(s.rank, 3);
        assert_eq!(s.rho.coords, vec![qf(1, 2); 3]);
    }

    #[test]
    fn rho_is_strictly_positive() {
        for s in catalog(4, 9) {
            assert!(rho_pairings(&s).iter().all(|x| *x > Q::zero()), "{}", s.label());
        }
    }

    #[test]
    fn rank_is_min_pq() {
        for s in catalog(4, 9) {
            if s.params.len() == 2 {
                assert_eq!(s.rank, s.params[0].min(s.params[1]));
            }
        }
    }

    #[test]
    fn bc_doubles_only_for_bc() {
        for s in catalog(3, 7) {
            for (_, _, m2) in s.indivisible() {
                if m2 > 0 {
                    assert_eq!(s.rs.kind, RootType::BC, "{}", s.label());
                }
            }
        }
    }

    #[test]
    fn propagation_examples() {
        let so = |qq| make_space(Family::SoPq, &[1, qq]).unwrap();
        assert!(propagates(&so(3), &so(4)));
        let sl = |n| make_space(Family::SlnR, &[n]).unwrap();
        assert!(propagates(&sl(3), &sl(4)));
        assert!(!propagates(&sl(4), &sl(3)));
        let su = make_space(Family::SuPq, &[1, 3]).unwrap();
        assert!(!propagates(&so(3), &su));
    }

    #[test]
    fn constant_rank_rho_difference_is_nonnegative() {
        let lo = make_space(Family::SuPq, &[2, 3]).unwrap();
        let hi = make_space(Family::SuPq, &[2, 6]).unwrap();
        let d = hi.rho.sub(&lo.rho);
        assert!(d.coords.iter().all(|c| *c >= Q::zero()));
    }

    #[test]
    fn invalid_params_rejected() {
        assert!(make_space(Family::SoPq, &[3, 2]).is_err());
        assert!(make_space(Family::SoPq, &[1, 1]).is_err());
        assert!(make_space(Family::SlnR, &[1]).is_err());
        assert!(make_space(Family::SuPq, &[2]).is_err());
    }
}

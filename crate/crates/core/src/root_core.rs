//! Restricted root systems with exact weights.
//!
//! A weight is stored by its coordinates in the simple roots of the
//! nonmultipliable subsystem Σ₀. Each classical type carries an orthogonal
//! e-basis realization with a scalar metric, scaled so that the long roots
//! of Σ₀ have squared length 2.

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{is_integer, q, q_to_f64, Mat, Q};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum RootType {
    A,
    B,
    C,
    D,
    BC,
    /// r orthogonal copies of A₁.
    A1Product,
}

impl fmt::Display for RootType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            RootType::A => "A",
            RootType::B => "B",
            RootType::C => "C",
            RootType::D => "D",
            RootType::BC => "BC",
            RootType::A1Product => "A1^r",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Weight {
    pub coords: Vec<Q>,
}

impl Weight {
    pub fn new(coords: Vec<Q>) -> Self {
        Weight { coords }
    }

    pub fn zero(rank: usize) -> Self {
        Weight { coords: vec![Q::zero(); rank] }
    }

    pub fn rank(&self) -> usize {
        self.coords.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    fn check(&self, o: &Weight) -> Result<()> {
        if self.rank() != o.rank() {
            return Err(Error::Dimension(format!("rank {} vs {}", self.rank(), o.rank())));
        }
        Ok(())
    }

    pub fn add(&self, o: &Weight) -> Weight {
        assert_eq!(self.rank(), o.rank(), "weight rank mismatch");
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a + b).collect() }
    }

    pub fn sub(&self, o: &Weight) -> Weight {
        assert_eq!(self.rank(), o.rank(), "weight rank mismatch");
        Weight { coords: self.coords.iter().zip(&o.coords).map(|(a, b)| a - b).collect() }
    }

    pub fn scale(&self, c: &Q) -> Weight {
        Weight { coords: self.coords.iter().map(|a| a * c).collect() }
    }

    pub fn neg(&self) -> Weight {
        self.scale(&q(-1))
    }

    pub fn to_f64(&self) -> Vec<f64> {
        self.coords.iter().map(q_to_f64).collect()
    }
}

impl fmt::Display for Weight {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Clone, Debug)]
pub struct RootSystemData {
    pub kind: RootType,
    pub rank: usize,
    /// Dimension of the ambient e-space.
    pub e_dim: usize,
    /// ⟨x, y⟩ = metric_scale · (x · y) in the e-basis.
    pub metric_scale: Q,
    /// Simple roots of Σ₀, as e-vectors.
    pub simple_e: Vec<Vec<Q>>,
    /// Gram matrix of the simple roots.
    pub gram: Mat<Q>,
    gram_inv: Mat<Q>,
    /// Σ⁺ in simple-root coordinates.
    pub positive: Vec<Weight>,
    /// Σ₀⁺ (α ∈ Σ⁺ with 2α ∉ Σ).
    pub nonmultipliable: Vec<Weight>,
}

fn unit(n: usize, i: usize) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    v[i] = q(1);
    v
}

fn comb(n: usize, terms: &[(usize, i64)]) -> Vec<Q> {
    let mut v = vec![Q::zero(); n];
    for &(i, c) in terms {
        v[i] += q(c);
    }
    v
}

fn dot(a: &[Q], b: &[Q]) -> Q {
    a.iter().zip(b).fold(Q::zero(), |acc, (x, y)| acc + x * y)
}

impl RootSystemData {
    /// Builds a classical system. For type A the rank is r and the e-space is ℝ^{r+1}.
    pub fn new(kind: RootType, rank: usize) -> Result<Self> {
        if rank == 0 {
            return Err(Error::Usage("rank must be positive".into()));
        }
        if kind == RootType::D && rank < 2 {
            return Err(Error::Usage("type D needs rank ≥ 2".into()));
        }
        let r = rank;
        let n = if kind == RootType::A { r + 1 } else { r };
        let mut simple = Vec::new();
        let mut pos_e: Vec<Vec<Q>> = Vec::new();
        match kind {
            RootType::A => {
                for i in 0..r {
                    simple.push(comb(n, &[(i, 1), (i + 1, -1)]));
                }
                for i in 0..n {
                    for j in i + 1..n {
                        pos_e.push(comb(n, &[(i, 1), (j, -1)]));
                    }
                }
            }
            RootType::A1Product => {
                for i in 0..r {
                    simple.push(unit(n, i));
                    pos_e.push(unit(n, i));
                }
            }
            _ => {
                for i in 0..r.saturating_sub(1) {
                    simple.push(comb(n, &[(i, 1), (i + 1, -1)]));
                }
                let last = match kind {
                    RootType::B => comb(n, &[(r - 1, 1)]),
                    RootType::C | RootType::BC => comb(n, &[(r - 1, 2)]),
                    RootType::D => comb(n, &[(r - 2, 1), (r - 1, 1)]),
                    _ => unreachable!(),
                };
                simple.push(last);
                for i in 0..n {
                    for j in i + 1..n {
                        pos_e.push(comb(n, &[(i, 1), (j, -1)]));
                        pos_e.push(comb(n, &[(i, 1), (j, 1)]));
                    }
                }
                for i in 0..n {
                    match kind {
                        RootType::B => pos_e.push(unit(n, i)),
                        RootType::C => pos_e.push(comb(n, &[(i, 2)])),
                        RootType::BC => {
                            pos_e.push(unit(n, i));
                            pos_e.push(comb(n, &[(i, 2)]));
                        }
                        _ => {}
                    }
                }
            }
        }
        // Scale so that the longest root of Σ₀ has squared length 2.
        let doubled = |v: &Vec<Q>| -> Vec<Q> { v.iter().map(|x| x * q(2)).collect() };
        let nonmult_e: Vec<&Vec<Q>> =
            pos_e.iter().filter(|a| !pos_e.contains(&doubled(a))).collect();
        let max_len = nonmult_e.iter().map(|a| dot(a, a)).max().expect("nonempty root system");
        let metric_scale = q(2) / max_len;
        let mut gram = Mat::<Q>::zeros(r, r);
        for i in 0..r {
            for j in 0..r {
                gram[(i, j)] = &metric_scale * dot(&simple[i], &simple[j]);
            }
        }
        let gram_inv = gram.inverse().ok_or_else(|| Error::Internal("singular Gram matrix".into()))?;
        let mut rs = RootSystemData {
            kind,
            rank: r,
            e_dim: n,
            metric_scale,
            simple_e: simple,
            gram,
            gram_inv,
            positive: Vec::new(),
            nonmultipliable: Vec::new(),
        };
        let positive: Vec<Weight> = pos_e.iter().map(|v| rs.from_e(v)).collect();
        let nonmult: Vec<Weight> = pos_e
            .iter()
            .filter(|a| !pos_e.contains(&doubled(a)))
            .map(|v| rs.from_e(v))
            .collect();
        rs.positive = positive;
        rs.nonmultipliable = nonmult;
        Ok(rs)
    }

    /// Coordinates in the simple-root basis of an e-vector, after orthogonal
    /// projection onto the span of the roots.
    pub fn from_e(&self, v: &[Q]) -> Weight {
        let pairings: Vec<Q> =
            self.simple_e.iter().map(|a| &self.metric_scale * dot(a, v)).collect();
        Weight::new(self.gram_inv.mul_vec(&pairings))
    }

    pub fn to_e(&self, w: &Weight) -> Vec<Q> {
        let mut v = vec![Q::zero(); self.e_dim];
        for (c, a) in w.coords.iter().zip(&self.simple_e) {
            for (x, y) in v.iter_mut().zip(a) {
                *x += c * y;
            }
        }
        v
    }

    pub fn simple_root(&self, i: usize) -> Weight {
        let mut c = vec![Q::zero(); self.rank];
        c[i] = q(1);
        Weight::new(c)
    }

    fn check(&self, w: &Weight) -> Result<()> {
        if w.rank() != self.rank {
            return Err(Error::Dimension(format!(
                "weight has rank {}, root system rank {}",
                w.rank(),
                self.rank
            )));
        }
        Ok(())
    }

    /// ⟨α_i, α_i⟩ for the i-th simple root.
    pub fn simple_len2(&self, i: usize) -> &Q {
        &self.gram[(i, i)]
    }

    /// Coefficients k_i = ⟨μ, α_i⟩/⟨α_i, α_i⟩ of μ in the fundamental weights.
    pub fn omega_coords(&self, w: &Weight) -> Vec<Q> {
        let g = self.gram.mul_vec(&w.coords);
        g.iter().enumerate().map(|(i, x)| x / self.simple_len2(i)).collect()
    }

    pub fn from_omega(&self, k: &[Q]) -> Weight {
        let pairings: Vec<Q> =
            k.iter().enumerate().map(|(i, x)| x * self.simple_len2(i)).collect();
        Weight::new(self.gram_inv.mul_vec(&pairings))
    }

    pub fn from_omega_int(&self, k: &[i64]) -> Weight {
        let kq: Vec<Q> = k.iter().map(|&x| q(x)).collect();
        self.from_omega(&kq)
    }

    /// Sum of the ω-coefficients.
    pub fn omega_height(&self, w: &Weight) -> Q {
        self.omega_coords(w).into_iter().fold(Q::zero(), |a, b| a + b)
    }

    pub fn reflect(&self, w: &Weight, i: usize) -> Weight {
        let k = &self.omega_coords(w)[i];
        let mut c = w.coords.clone();
        c[i] -= k * q(2);
        Weight::new(c)
    }

    pub fn is_dominant(&self, w: &Weight) -> bool {
        self.omega_coords(w).iter().all(|k| !k.is_negative())
    }
}

pub fn inner_product(lambda: &Weight, mu: &Weight, rs: &RootSystemData) -> Result<Q> {
    lambda.check(mu)?;
    rs.check(lambda)?;
    let gm = rs.gram.mul_vec(&mu.coords);
    Ok(dot(&lambda.coords, &gm))
}

/// Inner product of e-space vectors in the realization metric.
pub fn inner_product_e(x: &[Q], y: &[Q], rs: &RootSystemData) -> Q {
    &rs.metric_scale * dot(x, y)
}

pub fn fundamental_spherical_weights(rs: &RootSystemData) -> Vec<Weight> {
    (0..rs.rank)
        .map(|i| {
            let mut k = vec![Q::zero(); rs.rank];
            k[i] = q(1);
            rs.from_omega(&k)
        })
        .collect()
}

pub fn is_in_lambda_plus(mu: &Weight, rs: &RootSystemData) -> bool {
    if mu.rank() != rs.rank {
        return false;
    }
    rs.nonmultipliable.iter().all(|a| {
        let num = inner_product(mu, a, rs).expect("rank checked");
        let den = inner_product(a, a, rs).expect("rank checked");
        let x = num / den;
        is_integer(&x) && !x.is_negative()
    })
}

pub fn dominance_leq(nu: &Weight, mu: &Weight, rs: &RootSystemData) -> bool {
    if nu.rank() != rs.rank || mu.rank() != rs.rank {
        return false;
    }
    mu.sub(nu).coords.iter().all(|c| is_integer(c) && !c.is_negative())
}

/// The dominant Weyl conjugate of −μ, i.e. −w₀μ.
pub fn dual_weight(mu: &Weight, rs: &RootSystemData) -> Result<Weight> {
    rs.check(mu)?;
    let mut w = mu.neg();
    let bound = rs.nonmultipliable.len() + 1;
    for _ in 0..=bound {
        let k = rs.omega_coords(&w);
        match k.iter().position(|x| x.is_negative()) {
            None => return Ok(w),
            Some(i) => w = rs.reflect(&w, i),
        }
    }
    Err(Error::Internal("reflection walk did not reach the dominant chamber".into()))
}

/// Weyl dimension formula for a complex semisimple algebra, all data given as
/// vectors in one orthonormal basis.
pub fn weyl_dim(full_positive_roots: &[Vec<Q>], rho_g: &[Q], mu: &[Q]) -> Result<BigInt> {
    if rho_g.len() != mu.len() || full_positive_roots.iter().any(|a| a.len() != mu.len()) {
        return Err(Error::Dimension("weyl_dim vectors differ in length".into()));
    }
    let mut acc = q(1);
    for a in full_positive_roots {
        let den = dot(rho_g, a);
        if den.is_zero() {
            return Err(Error::Data("ρ orthogonal to a positive root".into()));
        }
        let shifted: Vec<Q> = mu.iter().zip(rho_g).map(|(x, y)| x + y).collect();
        acc *= dot(&shifted, a) / den;
    }
    if !is_integer(&acc) || acc.is_negative() {
        return Err(Error::Data(format!("Weyl dimension {acc} is not a nonnegative integer")));
    }
    Ok(acc.to_integer())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::qf;

    #[test]
    fn a1_normalization() {
        let rs = RootSystemData::new(RootType::A, 1).unwrap();
        let a = rs.simple_root(0);
        assert_eq!(inner_product(&a, &a, &rs).unwrap(), q(2));
        let w = &fundamental_spherical_weights(&rs)[0];
        assert_eq!(inner_product(w, &a, &rs).unwrap() / q(2), q(1));
        // ⟨ω,α⟩/⟨α,α⟩ = 1 puts ω = α for A₁.
        assert_eq!(w, &a);
    }

    #[test]
    fn long_roots_have_length_two() {
        for (t, r) in [
            (RootType::A, 3),
            (RootType::B, 1),
            (RootType::B, 3),
            (RootType::C, 2),
            (RootType::D, 4),
            (RootType::BC, 2),
            (RootType::A1Product, 3),
        ] {
            let rs = RootSystemData::new(t.clone(), r).unwrap();
            let max = rs
                .nonmultipliable
                .iter()
                .map(|a| inner_product(a, a, &rs).unwrap())
                .max()
                .unwrap();
            assert_eq!(max, q(2), "{t}{r}");
        }
    }

    #[test]
    fn b2_brute_force_inner_product() {
        let rs = RootSystemData::new(RootType::B, 2).unwrap();
        let short = rs.simple_root(1);
        let long = rs.simple_root(0);
        // e₂ · (e₁ − e₂) = −1 with unit metric.
        let ex = inner_product_e(&rs.to_e(&short), &rs.to_e(&long), &rs);
        assert_eq!(ex, q(-1));
        assert_eq!(inner_product(&short, &long, &rs).unwrap(), ex);
    }

    #[test]
    fn root_counts() {
        let count = |t, r| {
            let rs = RootSystemData::new(t, r).unwrap();
            (rs.positive.len(), rs.nonmultipliable.len())
        };
        assert_eq!(count(RootType::A, 3), (6, 6));
        assert_eq!(count(RootType::B, 3), (9, 9));
        assert_eq!(count(RootType::C, 3), (9, 9));
        assert_eq!(count(RootType::D, 4), (12, 12));
        assert_eq!(count(RootType::BC, 2), (6, 4));
    }

    #[test]
    fn lambda_plus_examples_b2() {
        let rs = RootSystemData::new(RootType::B, 2).unwrap();
        assert!(is_in_lambda_plus(&Weight::zero(2), &rs));
        assert!(is_in_lambda_plus(&rs.from_omega_int(&[1, 2]), &rs));
        let bad = rs.from_omega_int(&[1, -1]);
        assert!(!is_in_lambda_plus(&bad, &rs));
        let a2 = rs.simple_root(1);
        let val = inner_product(&bad, &a2, &rs).unwrap() / inner_product(&a2, &a2, &rs).unwrap();
        assert_eq!(val, q(-1));
    }

    #[test]
    fn dominance_examples() {
        let rs = RootSystemData::new(RootType::A, 2).unwrap();
        let mu = rs.from_omega_int(&[2, 1]);
        let a1 = rs.simple_root(0);
        assert!(dominance_leq(&mu, &mu, &rs));
        assert!(dominance_leq(&mu.sub(&a1), &mu, &rs));
        assert!(!dominance_leq(&mu.add(&a1), &mu, &rs));
    }

    #[test]
    fn dual_weight_a2_swaps() {
        let rs = RootSystemData::new(RootType::A, 2).unwrap();
        let w = fundamental_spherical_weights(&rs);
        assert_eq!(dual_weight(&w[0], &rs).unwrap(), w[1]);
        let rs1 = RootSystemData::new(RootType::A, 1).unwrap();
        let m = rs1.from_omega_int(&[3]);
        assert_eq!(dual_weight(&m, &rs1).unwrap(), m);
    }

    /// Orbit of a weight by breadth-first search over simple reflections.
    fn orbit(w: &Weight, rs: &RootSystemData) -> Vec<Weight> {
        let mut seen = vec![w.clone()];
        let mut i = 0;
        while i < seen.len() {
            for s in 0..rs.rank {
                let x = rs.reflect(&seen[i], s);
                if !seen.contains(&x) {
                    seen.push(x);
                }
            }
            i += 1;
        }
        seen
    }

    #[test]
    fn type_b_contains_minus_one() {
        for r in 1..=3 {
            let rs = RootSystemData::new(RootType::B, r).unwrap();
            let mu = rs.from_omega_int(&vec![1; r]);
            assert!(orbit(&mu, &rs).contains(&mu.neg()));
            assert_eq!(dual_weight(&mu, &rs).unwrap(), mu);
        }
    }

    #[test]
    fn a2_dual_by_orbit() {
        let rs = RootSystemData::new(RootType::A, 2).unwrap();
        let w1 = rs.from_omega_int(&[1, 0]);
        let orb = orbit(&w1.neg(), &rs);
        assert_eq!(orb.len(), 3);
        let dom: Vec<_> = orb.into_iter().filter(|x| rs.is_dominant(x)).collect();
        assert_eq!(dom, vec![rs.from_omega_int(&[0, 1])]);
    }

    #[test]
    fn weyl_dim_sl2_and_so5() {
        // sl(2) in e-coordinates: α = e₁ − e₂, ρ = (1/2, −1/2).
        let roots = vec![vec![q(1), q(-1)]];
        let rho = vec![qf(1, 2), qf(-1, 2)];
        for m in 0..6i64 {
            let mu = vec![qf(m, 2), qf(-m, 2)];
            assert_eq!(weyl_dim(&roots, &rho, &mu).unwrap(), BigInt::from(m + 1));
        }
        // so(5): B₂ roots, ρ = (3/2, 1/2), harmonic weight k e₁.
        let b2 = vec![
            vec![q(1), q(-1)],
            vec![q(1), q(1)],
            vec![q(1), q(0)],
            vec![q(0), q(1)],
        ];
        let rho = vec![qf(3, 2), qf(1, 2)];
        assert_eq!(weyl_dim(&b2, &rho, &[q(2), q(0)]).unwrap(), BigInt::from(14));
        assert_eq!(weyl_dim(&b2, &rho, &[q(0), q(0)]).unwrap(), BigInt::from(1));
    }

    #[test]
    fn bc_short_roots_pair_with_doubles() {
        let rs = RootSystemData::new(RootType::BC, 2).unwrap();
        let mut pairs = 0;
        for a in &rs.positive {
            if rs.positive.contains(&a.scale(&q(2))) {
                pairs += 1;
                assert!(!rs.nonmultipliable.contains(a));
            }
        }
        assert_eq!(pairs, 2);
    }
}

//! Homogeneous polynomials in a fixed number of variables: monomial tables,
//! exact sphere integrals, and dense substitution.

use std::collections::HashMap;

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exact::{Field, Q};

pub type Exps = Vec<u8>;

/// Monomials of each degree up to `max_degree`, with multiplication tables.
#[derive(Clone, Debug)]
pub struct MonomialTable {
    pub nvars: usize,
    pub monos: Vec<Vec<Exps>>,
    index: Vec<HashMap<Exps, usize>>,
    /// times[d][i][v] = index in degree d+1 of (monomial i of degree d)·y_v.
    times: Vec<Vec<Vec<usize>>>,
}

fn monomials_of_degree(nvars: usize, d: usize) -> Vec<Exps> {
    if nvars == 0 {
        return if d == 0 { vec![vec![]] } else { vec![] };
    }
    let mut out = Vec::new();
    for first in (0..=d).rev() {
        for mut rest in monomials_of_degree(nvars - 1, d - first) {
            rest.insert(0, first as u8);
            out.push(rest);
        }
    }
    out
}

impl MonomialTable {
    pub fn new(nvars: usize, max_degree: usize) -> Self {
        let monos: Vec<Vec<Exps>> =
            (0..=max_degree).map(|d| monomials_of_degree(nvars, d)).collect();
        let index: Vec<HashMap<Exps, usize>> = monos
            .iter()
            .map(|ms| ms.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect())
            .collect();
        let mut times = Vec::new();
        for d in 0..max_degree {
            let t: Vec<Vec<usize>> = monos[d]
                .iter()
                .map(|m| {
                    (0..nvars)
                        .map(|v| {
                            let mut x = m.clone();
                            x[v] += 1;
                            index[d + 1][&x]
                        })
                        .collect()
                })
                .collect();
            times.push(t);
        }
        MonomialTable { nvars, monos, index, times }
    }

    pub fn count(&self, d: usize) -> usize {
        self.monos[d].len()
    }

    pub fn idx(&self, e: &[u8]) -> usize {
        let d: usize = e.iter().map(|&x| x as usize).sum();
        self.index[d][e]
    }

    pub fn times(&self, d: usize, i: usize, v: usize) -> usize {
        self.times[d][i][v]
    }

    /// Matrix of P ↦ P(M y) on degree-d polynomials, where M is given by rows
    /// (the i-th variable is replaced by Σ_j M_ij y_j). Column c holds the
    /// image of monomial c.
    pub fn substitution(&self, m: &[Vec<Complex64>], d: usize) -> Vec<Vec<Complex64>> {
        let n = self.nvars;
        let mut prev: Vec<Vec<Complex64>> = vec![vec![Complex64::one()]];
        for deg in 1..=d {
            let cnt = self.count(deg);
            let mut cur = Vec::with_capacity(cnt);
            for mono in &self.monos[deg] {
                let v = mono.iter().position(|&x| x > 0).unwrap();
                let mut lower = mono.clone();
                lower[v] -= 1;
                let li = self.index[deg - 1][&lower];
                let src = &prev[li];
                let mut img = vec![Complex64::zero(); cnt];
                for (k, c) in src.iter().enumerate() {
                    if *c == Complex64::zero() {
                        continue;
                    }
                    for j in 0..n {
                        let coef = m[v][j];
                        if coef != Complex64::zero() {
                            img[self.times[deg - 1][k][j]] += c * coef;
                        }
                    }
                }
                cur.push(img);
            }
            prev = cur;
        }
        prev
    }
}

/// Sparse polynomial with exact coefficients.
pub type SparsePoly<F> = HashMap<Exps, F>;

pub fn add_term<F: Field>(p: &mut SparsePoly<F>, e: Exps, c: F) {
    if c.is_zero() {
        return;
    }
    let entry = p.entry(e.clone()).or_insert_with(F::zero);
    *entry = entry.clone() + c;
    if entry.is_zero() {
        p.remove(&e);
    }
}

/// Laplacian in the first `nvars` variables.
pub fn laplacian<F: Field + From<Q>>(p: &SparsePoly<F>, nvars: usize) -> SparsePoly<F> {
    let mut out = SparsePoly::new();
    for (e, c) in p {
        for v in 0..nvars {
            let a = e[v] as i64;
            if a >= 2 {
                let mut f = e.clone();
                f[v] -= 2;
                add_term(&mut out, f, c.clone() * F::from(crate::exact::q(a * (a - 1))));
            }
        }
    }
    out
}

pub fn is_harmonic(p: &SparsePoly<Q>, nvars: usize) -> bool {
    laplacian(p, nvars).is_empty()
}

/// ∫ y^a dσ over the unit sphere in ℝ^N (N = exps.len()) for the normalized
/// rotation-invariant measure.
pub fn sphere_monomial_integral(exps: &[u32]) -> Q {
    if exps.iter().any(|&a| a % 2 == 1) {
        return Q::zero();
    }
    let n = exps.len() as i64;
    let mut num = Q::one();
    let mut half_total = 0i64;
    for &a in exps {
        let b = (a / 2) as i64;
        for i in 0..b {
            num *= crate::exact::q(2 * i + 1);
        }
        half_total += b;
    }
    let mut den = Q::one();
    for i in 0..half_total {
        den *= crate::exact::q(n + 2 * i);
    }
    num / den
}

impl From<Q> for crate::exact::GaussQ {
    fn from(x: Q) -> Self {
        crate::exact::GaussQ::real(x)
    }
}

/// Matrix of (g·P)(y) = P(g⁻¹y) on all degree-d monomials.
pub fn full_rep_matrix(table: &MonomialTable, d: usize, g: &crate::rep_engine::group::CMat) -> crate::rep_engine::group::CMat {
    full_substitution_matrix(table, d, &g.clone().try_inverse().expect("invertible"))
}

/// Matrix of P ↦ P(my) on all degree-d monomials.
pub fn full_substitution_matrix(table: &MonomialTable, d: usize, ginv: &crate::rep_engine::group::CMat) -> crate::rep_engine::group::CMat {
    let n = table.nvars;
    let rows: Vec<Vec<Complex64>> = (0..n).map(|i| (0..n).map(|j| ginv[(i, j)]).collect()).collect();
    let sub = table.substitution(&rows, d);
    let m = table.count(d);
    crate::rep_engine::group::CMat::from_fn(m, m, |r, c| sub[c][r])
}

/// dπ(X) on all degree-d monomials: P ↦ −Σ X_ab y_b ∂_a P.
pub fn full_lie_action(table: &MonomialTable, d: usize, x: &crate::exact::Mat<crate::exact::GaussQ>) -> crate::exact::Mat<crate::exact::GaussQ> {
    use crate::exact::GaussQ;
    let m = table.count(d);
    let mut out = crate::exact::Mat::<GaussQ>::zeros(m, m);
    if d == 0 {
        return out;
    }
    for (col, e) in table.monos[d].iter().enumerate() {
        for a in 0..table.nvars {
            if e[a] == 0 {
                continue;
            }
            let mut lower = e.clone();
            lower[a] -= 1;
            let li = table.idx(&lower);
            for b in 0..table.nvars {
                if x[(a, b)].is_zero() {
                    continue;
                }
                let row = table.times(d - 1, li, b);
                let v = out[(row, col)].clone() - x[(a, b)].clone() * GaussQ::real(crate::exact::q(e[a] as i64));
                out[(row, col)] = v;
            }
        }
    }
    out
}

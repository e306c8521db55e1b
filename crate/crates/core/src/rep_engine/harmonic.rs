//! Harmonic polynomials of degree k on ℂ^N as a representation of SO(N, ℂ).
//!
//! Basis: one element per monomial whose degree in the last variable is at
//! most one, extended to the unique harmonic polynomial with that leading
//! part. The coordinates of a harmonic polynomial are its coefficients on
//! those monomials.

use num_complex::Complex64;
use num_traits::{One, Zero};

use crate::exact::{q, GaussQ, Mat, Q};
use crate::rep_engine::group::CMat;
use crate::rep_engine::poly::{add_term, laplacian, sphere_monomial_integral, Exps, MonomialTable, SparsePoly};

#[derive(Clone, Debug)]
pub struct HarmonicSpace {
    pub nvars: usize,
    pub degree: usize,
    pub table: MonomialTable,
    /// Degree-k monomial index of each coordinate.
    pub coord_mono: Vec<usize>,
    /// Coordinate of each degree-k monomial, if it is a basis monomial.
    pub mono_coord: Vec<Option<usize>>,
    /// Sparse expansion of each basis polynomial over degree-k monomials.
    pub ext: Vec<Vec<(usize, Q)>>,
}

fn factorial(n: usize) -> Q {
    (1..=n as i64).fold(q(1), |acc, i| acc * q(i))
}

impl HarmonicSpace {
    pub fn new(nvars: usize, degree: usize) -> Self {
        assert!(nvars >= 2);
        let table = MonomialTable::new(nvars, degree);
        let last = nvars - 1;
        let mut coord_mono = Vec::new();
        let mut mono_coord = vec![None; table.count(degree)];
        for (i, m) in table.monos[degree].iter().enumerate() {
            if m[last] <= 1 {
                mono_coord[i] = Some(coord_mono.len());
                coord_mono.push(i);
            }
        }
        let ext = coord_mono
            .iter()
            .map(|&i| {
                let m = &table.monos[degree][i];
                let eps = m[last] as usize;
                let mut base = m.clone();
                base[last] = 0;
                let mut cur: SparsePoly<Q> = SparsePoly::new();
                cur.insert(base, q(1));
                let mut out = Vec::new();
                let mut j = 0;
                while !cur.is_empty() {
                    let pw = 2 * j + eps;
                    let sign = if j % 2 == 0 { q(1) } else { q(-1) };
                    let coef = sign / factorial(pw);
                    for (e, c) in &cur {
                        let mut f: Exps = e.clone();
                        f[last] = pw as u8;
                        out.push((table.idx(&f), c * &coef));
                    }
                    cur = laplacian(&cur, last);
                    j += 1;
                }
                out
            })
            .collect();
        HarmonicSpace { nvars, degree, table, coord_mono, mono_coord, ext }
    }

    pub fn dim(&self) -> usize {
        self.coord_mono.len()
    }

    /// Dense monomial coefficients of the basis element `a`.
    pub fn expand(&self, coords: &[GaussQ]) -> Vec<GaussQ> {
        let mut out = vec![GaussQ::zero(); self.table.count(self.degree)];
        for (a, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (m, x) in &self.ext[a] {
                out[*m] = out[*m].clone() + c.clone() * GaussQ::real(x.clone());
            }
        }
        out
    }

    /// Coordinates of a harmonic polynomial given by dense monomial coefficients.
    pub fn coords_of<T: Clone>(&self, dense: &[T]) -> Vec<T> {
        self.coord_mono.iter().map(|&m| dense[m].clone()).collect()
    }

    /// π(g) for g ∈ SO(N, ℂ), (g·P)(y) = P(g⁻¹y).
    pub fn rep_matrix(&self, g: &CMat) -> CMat {
        self.substitution_matrix(&g.clone().try_inverse().expect("invertible"))
    }

    /// P ↦ P(my), which is π(m⁻¹) without inverting m.
    pub fn substitution_matrix(&self, m: &CMat) -> CMat {
        let rows: Vec<Vec<Complex64>> =
            (0..self.nvars).map(|i| (0..self.nvars).map(|j| m[(i, j)]).collect()).collect();
        let sub = self.table.substitution(&rows, self.degree);
        let d = self.dim();
        let mut out = CMat::zeros(d, d);
        for (a, terms) in self.ext.iter().enumerate() {
            for (m, x) in terms {
                let xf = crate::exact::q_to_f64(x);
                let img = &sub[*m];
                for (r, &mi) in self.coord_mono.iter().enumerate() {
                    out[(r, a)] += img[mi] * xf;
                }
            }
        }
        out
    }

    /// dπ(X) for X ∈ so(N, ℂ): P ↦ −Σ X_ab y_b ∂_a P.
    pub fn lie_action(&self, x: &Mat<GaussQ>) -> Mat<GaussQ> {
        let d = self.dim();
        let k = self.degree;
        let mut out = Mat::<GaussQ>::zeros(d, d);
        if k == 0 {
            return out;
        }
        for (col, terms) in self.ext.iter().enumerate() {
            let mut img: Vec<GaussQ> = vec![GaussQ::zero(); self.table.count(k)];
            for (m, cx) in terms {
                let e = &self.table.monos[k][*m];
                for a in 0..self.nvars {
                    if e[a] == 0 {
                        continue;
                    }
                    let mut lower = e.clone();
                    lower[a] -= 1;
                    let li = self.table.idx(&lower);
                    for b in 0..self.nvars {
                        let xab = &x[(a, b)];
                        if xab.is_zero() {
                            continue;
                        }
                        let target = self.table.times(k - 1, li, b);
                        let coef = -(xab.clone() * GaussQ::real(cx * q(e[a] as i64)));
                        img[target] = img[target].clone() + coef;
                    }
                }
            }
            for (r, &mi) in self.coord_mono.iter().enumerate() {
                out[(r, col)] = img[mi].clone();
            }
        }
        out
    }

    /// Hermitian L²(S^{N−1}) Gram matrix of the basis (real and rational).
    pub fn gram(&self) -> Mat<Q> {
        let d = self.dim();
        let mut g = Mat::<Q>::zeros(d, d);
        let monos = &self.table.monos[self.degree];
        for a in 0..d {
            for b in a..d {
                let mut acc = Q::zero();
                for (ma, xa) in &self.ext[a] {
                    for (mb, xb) in &self.ext[b] {
                        let e: Vec<u32> =
                            monos[*ma].iter().zip(&monos[*mb]).map(|(x, y)| (*x + *y) as u32).collect();
                        let i = sphere_monomial_integral(&e);
                        if !i.is_zero() {
                            acc += xa * xb * i;
                        }
                    }
                }
                g[(a, b)] = acc.clone();
                g[(b, a)] = acc;
            }
        }
        g
    }

    /// Coordinates in this space of a polynomial from a space with fewer
    /// variables (literal inclusion).
    pub fn include_from(&self, lo: &HarmonicSpace, coords: &[GaussQ]) -> Vec<GaussQ> {
        assert!(lo.nvars <= self.nvars && lo.degree == self.degree);
        if lo.nvars == self.nvars {
            return coords.to_vec();
        }
        let dense = lo.expand(coords);
        let mut out = vec![GaussQ::zero(); self.dim()];
        for (i, c) in dense.into_iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut e = lo.table.monos[lo.degree][i].clone();
            e.resize(self.nvars, 0);
            let m = self.table.idx(&e);
            let coord = self.mono_coord[m].expect("polynomials in fewer variables have no last-variable part");
            out[coord] = c;
        }
        out
    }

    /// Coordinates of (Σ c_i y_i)^k.
    pub fn power_of_linear(&self, lin: &[GaussQ]) -> Vec<GaussQ> {
        let k = self.degree;
        let mut cur: Vec<GaussQ> = vec![GaussQ::one()];
        for d in 0..k {
            let mut next = vec![GaussQ::zero(); self.table.count(d + 1)];
            for (i, c) in cur.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                for (v, l) in lin.iter().enumerate() {
                    if l.is_zero() {
                        continue;
                    }
                    let t = self.table.times(d, i, v);
                    next[t] = next[t].clone() + c.clone() * l.clone();
                }
            }
            cur = next;
        }
        self.coords_of(&cur)
    }

    /// Whether dense monomial coefficients describe a harmonic polynomial.
    pub fn dense_is_harmonic(&self, dense: &[GaussQ]) -> bool {
        let mut re = SparsePoly::<Q>::new();
        let mut im = SparsePoly::<Q>::new();
        for (i, c) in dense.iter().enumerate() {
            let e = self.table.monos[self.degree][i].clone();
            add_term(&mut re, e.clone(), c.re.clone());
            add_term(&mut im, e, c.im.clone());
        }
        laplacian(&re, self.nvars).is_empty() && laplacian(&im, self.nvars).is_empty()
    }
}

/// dim H_k(ℝ^N) = C(N+k−1, k) − C(N+k−3, k−2).
pub fn harmonic_dimension(nvars: usize, k: usize) -> usize {
    let binom = |n: usize, r: usize| -> usize {
        if r > n {
            return 0;
        }
        let mut acc: u128 = 1;
        for i in 0..r {
            acc = acc * (n - i) as u128 / (i + 1) as u128;
        }
        acc as usize
    };
    let total = binom(nvars + k - 1, k);
    if k < 2 {
        total
    } else {
        total - binom(nvars + k - 3, k - 2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimensions() {
        for n in 2..7 {
            for k in 0..5 {
                assert_eq!(HarmonicSpace::new(n, k).dim(), harmonic_dimension(n, k));
            }
        }
        assert_eq!(harmonic_dimension(3, 4), 9);
        assert_eq!(harmonic_dimension(4, 2), 9);
        assert_eq!(harmonic_dimension(5, 2), 14);
    }

    #[test]
    fn basis_is_harmonic() {
        let h = HarmonicSpace::new(4, 3);
        for a in 0..h.dim() {
            let mut e = vec![GaussQ::zero(); h.dim()];
            e[a] = GaussQ::one();
            assert!(h.dense_is_harmonic(&h.expand(&e)));
        }
    }

    #[test]
    fn gram_is_positive_diagonal_dominant_check() {
        let h = HarmonicSpace::new(3, 2);
        let g = h.gram();
        for i in 0..h.dim() {
            assert!(g[(i, i)] > Q::zero());
        }
    }
}

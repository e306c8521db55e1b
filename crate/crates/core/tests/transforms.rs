//! Γ as a graded ring morphism, G-equivariance, and R* on sums.

use std::sync::Arc;

use horolab::radon_ops::{c_mu_oracle, dual_radon, gamma, gamma_inv};
use horolab::rep_engine::{RegularFunction, RepModel, Side, C64};
use num_traits::Zero;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn exps(label: &str) -> (usize, usize) {
    let (a, b) = label.split_once('*').unwrap();
    (a.trim_start_matches("z1^").parse().unwrap(), b.trim_start_matches("z2^").parse().unwrap())
}

/// Product of binary forms given in the monomial bases of two spin models.
fn multiply(a: &RepModel, v: &[C64], b: &RepModel, w: &[C64], c: &RepModel) -> Vec<C64> {
    let mut out = vec![C64::zero(); c.dim];
    for (i, x) in v.iter().enumerate() {
        for (j, y) in w.iter().enumerate() {
            let (p, q) = exps(&a.labels[i]);
            let (r, s) = exps(&b.labels[j]);
            let k = c.labels.iter().position(|l| exps(l) == (p + r, q + s)).unwrap();
            out[k] += x * y;
        }
    }
    out
}

fn close(a: C64, b: C64) -> bool {
    (a - b).norm() <= 1e-10 * b.norm().max(1.0)
}

#[test]
fn gamma_is_multiplicative_on_binary_forms() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for (k, l) in [(1, 1), (1, 2), (2, 3)] {
        let (a, b, c) = (RepModel::spin(k).unwrap(), RepModel::spin(l).unwrap(), RepModel::spin(k + l).unwrap());
        let (v, w) = (a.random_vector(&mut rng), b.random_vector(&mut rng));
        let vw = multiply(&a, &v, &b, &w, &c);
        for _ in 0..4 {
            let g = a.random_complex(&mut rng);
            // the top component of f_v f_w is f_{vw}, and Γ of it is ψ_v ψ_w
            let top = RegularFunction::single(Side::Z, Arc::new(c.clone()), vw.clone()).unwrap();
            let lhs = gamma(&top).unwrap().eval(&g);
            assert!(close(a.matrix_coeff_psi(&v, &g) * b.matrix_coeff_psi(&w, &g), lhs));
        }
    }
}

#[test]
fn highest_weight_functions_multiply_on_hyperbolic_space() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    let ms: Vec<_> = (0..5).map(|k| RepModel::harmonic(3, k).unwrap()).collect();
    let h = ms[1].random_g0(&mut rng);
    for _ in 0..4 {
        let x = ms[1].random_complex(&mut rng);
        for (k, l) in [(1, 1), (1, 3), (2, 2)] {
            let psi = |m: &RepModel| m.matrix_coeff_psi(&m.act(&h, &m.u), &x);
            assert!(close(psi(&ms[k]) * psi(&ms[l]), psi(&ms[k + l])));
            let f = |m: &RepModel| m.matrix_coeff_f(&m.act(&h, &m.u), &x);
            assert!(close(f(&ms[k]) * f(&ms[l]), f(&ms[k + l])));
        }
    }
}

#[test]
fn gamma_commutes_with_translation() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    for m in [RepModel::harmonic(2, 2).unwrap(), RepModel::spin(2).unwrap(), RepModel::product(&[1, 2]).unwrap()] {
        let m = Arc::new(m);
        let v = m.random_vector(&mut rng);
        let h = m.random_g0(&mut rng);
        let f = RegularFunction::single(Side::Z, m.clone(), v.clone()).unwrap();
        let moved = RegularFunction::single(Side::Z, m.clone(), m.act(&h, &v)).unwrap();
        for _ in 0..3 {
            let x = m.random_complex(&mut rng);
            assert!(close(gamma(&f.translate(&h)).unwrap().eval(&x), gamma(&moved).unwrap().eval(&x)));
            assert!(close(f.translate(&h).eval(&x), moved.eval(&x)));
        }
        let back = gamma_inv(&gamma(&f).unwrap()).unwrap();
        assert_eq!(back.components[0].1, v);
        assert!(gamma_inv(&f).is_err());
    }
}

#[test]
fn dual_radon_is_linear_over_components() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let (a, b) = (Arc::new(RepModel::harmonic(3, 1).unwrap()), Arc::new(RepModel::harmonic(3, 2).unwrap()));
    let (v, w) = (a.random_vector(&mut rng), b.random_vector(&mut rng));
    let psi = RegularFunction { side: Side::Xi, components: vec![(a.clone(), v.clone()), (b.clone(), w.clone())] };
    let x = a.random_g0(&mut rng);
    let expected = a.matrix_coeff_f(&v, &x) * c_mu_oracle(&a).unwrap() + b.matrix_coeff_f(&w, &x) * c_mu_oracle(&b).unwrap();
    assert!(close(dual_radon(&psi, &x).unwrap(), expected));
}

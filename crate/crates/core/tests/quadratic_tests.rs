mod common;

use common::{cfg, digits, omega, quad};
use num_complex::Complex64;
use proptest::prelude::*;
use quadfourier::field::{LinearForm, SymMatrix};
use quadfourier::fourier::{dft, DenseFunction, PointSet};
use quadfourier::gowers::uk_norm;
use quadfourier::harness::rng::{random_bounded, random_phase, SeededRng};
use quadfourier::progressions::balanced;
use quadfourier::quadratic::{
    additive_quadruple_count, best_quadratic_correlation, derivative_spectrum, gauss_sum, inverse_oracle,
    quad_correlation, quad_phase_fn, OracleConfig, PhiSelection, QuadraticPhase,
};

fn phase(m: &[Vec<i64>], r: &[i64]) -> QuadraticPhase {
    QuadraticPhase::new(SymMatrix::from_ints(m).unwrap(), LinearForm::from_ints(r)).unwrap()
}

/// E_x ω^{xᵀMx + rᵀx} by direct summation.
fn brute_gauss(m: &[Vec<i64>], r: &[i64]) -> Complex64 {
    let n = r.len();
    let big = 5usize.pow(n as u32);
    (0..big)
        .map(|x| {
            let d = digits(x, n);
            omega(quad(m, &d) + d.iter().zip(r).map(|(a, b)| a * b).sum::<i64>())
        })
        .sum::<Complex64>()
        / big as f64
}

#[test]
fn phase_function_examples() {
    let f = quad_phase_fn(&phase(&[vec![0, 0], vec![0, 0]], &[0, 0]), &cfg(2)).unwrap();
    assert!(f.max_diff(&DenseFunction::ones(cfg(2))).unwrap() < 1e-15);
    let ch = quad_phase_fn(&phase(&[vec![0]], &[1]), &cfg(1)).unwrap();
    assert!((0..5).all(|x| (ch[x] - omega(x as i64)).norm() < 1e-12));
    let sq = quad_phase_fn(&phase(&[vec![1]], &[0]), &cfg(1)).unwrap();
    assert!((0..5).all(|x| (sq[x] - omega((x * x) as i64)).norm() < 1e-12));
}

#[test]
fn gauss_sum_examples() {
    assert!((gauss_sum(&phase(&[vec![0]], &[0]), &cfg(1)).unwrap() - 1.0).norm() < 1e-14);
    assert!((gauss_sum(&phase(&[vec![1]], &[0]), &cfg(1)).unwrap().norm() - 5f64.powf(-0.5)).abs() < 1e-12);
    let m = vec![vec![1, 0], vec![0, 0]];
    assert!(gauss_sum(&phase(&m, &[0, 1]), &cfg(2)).unwrap().norm() < 1e-12);
    assert!(brute_gauss(&m, &[0, 1]).norm() < 1e-12);
}

#[test]
fn correlation_examples() {
    let q = phase(&[vec![1, 2], vec![2, 3]], &[4, 1]);
    let f = quad_phase_fn(&q, &cfg(2)).unwrap().conj();
    assert!((quad_correlation(&f, &q).unwrap().correlation - 1.0).norm() < 1e-12);
    let g = quad_correlation(&DenseFunction::ones(cfg(1)), &phase(&[vec![1]], &[0])).unwrap();
    assert!((g.magnitude - 5f64.powf(-0.5)).abs() < 1e-12);
    let mut rng = SeededRng::new(21);
    for _ in 0..10 {
        let pm = common::plus_minus(2, &mut rng);
        assert!(quad_correlation(&pm, &random_phase(2, &mut rng)).unwrap().magnitude <= 1.0);
    }
}

#[test]
fn oracle_examples() {
    let oc = OracleConfig::default();
    let key = quad_phase_fn(&QuadraticPhase::pure(SymMatrix::identity(2)), &cfg(2)).unwrap();
    let cert = inverse_oracle(&key, 0.9, &oc).unwrap().unwrap();
    assert!((cert.magnitude - 1.0).abs() < 1e-12);
    // Correlation is taken without conjugation, so the maximiser is −I.
    assert_eq!(cert.phase.m, SymMatrix::diagonal(&[4, 4]));
    assert!(cert.phase.r.is_zero());

    let ch = quad_phase_fn(&phase(&[vec![0, 0], vec![0, 0]], &[2, 3]), &cfg(2)).unwrap();
    let cert = best_quadratic_correlation(&ch).unwrap();
    assert!(cert.phase.m.is_zero() && (cert.magnitude - 1.0).abs() < 1e-12);
    assert_eq!(cert.phase.r, LinearForm::from_ints(&[3, 2]));

    let quadric = PointSet::from_predicate(cfg(2), |x| {
        let d = digits(x, 2);
        (d[0] * d[0] + d[1] * d[1]) % 5 == 0
    });
    let f = balanced(&quadric);
    let cert = best_quadratic_correlation(&f).unwrap();
    let linear_max = dft(&f).sup_norm();
    assert!(cert.magnitude >= 0.1);
    assert!(cert.magnitude > linear_max);
    assert!(best_quadratic_correlation(&DenseFunction::ones(cfg(4))).is_err());
}

#[test]
fn derivative_spectrum_examples() {
    let key = quad_phase_fn(&QuadraticPhase::pure(SymMatrix::identity(2)), &cfg(2)).unwrap();
    let map = derivative_spectrum(&key, 0.5, PhiSelection::Argmax).unwrap();
    assert!(map.entries.iter().all(|e| e.len() == 1));
    assert_eq!(additive_quadruple_count(&map).unwrap(), 25u64.pow(3));

    let one = DenseFunction::ones(cfg(2));
    let map = derivative_spectrum(&one, 0.5, PhiSelection::Argmax).unwrap();
    assert!(map.phi.iter().all(|p| *p == Some(0)));

    let mut rng = SeededRng::new(17);
    let pm = common::plus_minus(2, &mut rng);
    let map = derivative_spectrum(&pm, 0.9, PhiSelection::Argmax).unwrap();
    // Only h = 0 (where Δ = |f|² ≡ 1) survives a 0.9 threshold for a random sign pattern.
    assert!(map.support().len() <= 2);

    let empty = derivative_spectrum(&DenseFunction::zeros(cfg(2)), 0.5, PhiSelection::Argmax).unwrap();
    assert_eq!(additive_quadruple_count(&empty).unwrap(), 0);

    let q = random_phase(2, &mut rng);
    let noise = random_bounded(cfg(2), &mut rng).map(|v| 0.7 + 0.3 * v);
    let f = quad_phase_fn(&q, &cfg(2)).unwrap().mul(&noise).unwrap();
    let map = derivative_spectrum(&f, 0.3, PhiSelection::Argmax).unwrap();
    let count = additive_quadruple_count(&map).unwrap();
    let s = map.support().len() as u64;
    assert!(count <= s.pow(3) && count <= 25u64.pow(3));
    let rmap = derivative_spectrum(&f, 0.3, PhiSelection::Random { seed: 5 }).unwrap();
    assert_eq!(rmap.support(), map.support());
    assert!(rmap.phi.iter().zip(&rmap.entries).all(|(p, e)| p.is_none_or(|v| e.contains(&v))));
}

fn sym_entries(n: usize) -> impl Strategy<Value = (Vec<Vec<i64>>, Vec<i64>)> {
    (prop::collection::vec(0i64..5, n * (n + 1) / 2), prop::collection::vec(0i64..5, n)).prop_map(move |(u, r)| {
        let mut m = vec![vec![0; n]; n];
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m[i][j] = u[k];
                m[j][i] = u[k];
                k += 1;
            }
        }
        (m, r)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn gauss_bound((m, r) in (1usize..=3).prop_flat_map(sym_entries)) {
        let n = r.len();
        let rank = common::brute_rank(&m);
        let bound = 5f64.powf(-(rank as f64) / 2.0);
        let g = brute_gauss(&m, &r);
        prop_assert!(g.norm() <= bound + 1e-9);
        prop_assert!((gauss_sum(&phase(&m, &r), &cfg(n)).unwrap() - g).norm() < 1e-12);
        let zero = vec![0; n];
        prop_assert!((brute_gauss(&m, &zero).norm() - bound).abs() < 1e-9);
    }

    #[test]
    fn correlation_lower_bounds_u3(seed in any::<u64>(), n in 1usize..=2) {
        let mut rng = SeededRng::new(seed);
        let q = random_phase(n, &mut rng);
        let noise = random_bounded(cfg(n), &mut rng).map(|v| 0.5 + 0.5 * v);
        let f = quad_phase_fn(&q, &cfg(n)).unwrap().conj().mul(&noise).unwrap();
        let corr = quad_correlation(&f, &q).unwrap().magnitude;
        prop_assert!(uk_norm(&f, 3).unwrap() >= corr - 1e-9);
    }

    #[test]
    fn oracle_recovers_every_phase(seed in any::<u64>(), n in 1usize..=2) {
        let q = random_phase(n, &mut SeededRng::new(seed));
        let f = quad_phase_fn(&q, &cfg(n)).unwrap();
        let cert = best_quadratic_correlation(&f).unwrap();
        prop_assert!((cert.magnitude - 1.0).abs() < 1e-9);
        let rec = quad_phase_fn(&cert.phase, &cfg(n)).unwrap();
        prop_assert!(f.mul(&rec).unwrap().max_diff(&DenseFunction::ones(cfg(n))).unwrap() < 1e-9);
    }

    #[test]
    fn argmax_independent_of_delta(seed in any::<u64>(), d1 in 0.01f64..1.0, d2 in 0.01f64..1.0) {
        let f = random_bounded(cfg(2), &mut SeededRng::new(seed));
        let oc = OracleConfig::default();
        if let (Some(a), Some(b)) = (inverse_oracle(&f, d1, &oc).unwrap(), inverse_oracle(&f, d2, &oc).unwrap()) {
            prop_assert_eq!(a.phase, b.phase);
        }
    }
}

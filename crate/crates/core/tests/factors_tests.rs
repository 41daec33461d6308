mod common;

use common::{brute_rank, cfg, digits};
use num_complex::Complex64;
use proptest::prelude::*;
use quadfourier::factors::{
    ap4_atom_census, ap4_atom_probability, atom_statistics, conditional_expectation, energy, factor_rank,
    haar_on_subspace, join, rank_reduce, rank_reduce_traced, refines, Atom, QuadraticFactor,
};
use quadfourier::field::{GroupPoint, LinearForm, SymMatrix};
use quadfourier::fourier::DenseFunction;
use quadfourier::harness::rng::{random_balanced, random_complex, random_factor, random_sym_matrix, SeededRng};
use quadfourier::quadratic::{quad_phase_fn, QuadraticPhase};

fn lin(n: usize, forms: &[&[i64]]) -> QuadraticFactor {
    QuadraticFactor::new(cfg(n), forms.iter().map(|f| LinearForm::from_ints(f)).collect(), vec![]).unwrap()
}

fn quads(n: usize, ms: Vec<SymMatrix>) -> QuadraticFactor {
    QuadraticFactor::new(cfg(n), vec![], ms).unwrap()
}

/// Atom key of x computed from raw digits.
fn brute_key(factor: &QuadraticFactor, x: usize) -> (Vec<i64>, Vec<i64>) {
    let n = factor.cfg().dim();
    let d = digits(x, n);
    let a = factor
        .linear_forms()
        .iter()
        .map(|f| f.coeffs.iter().zip(&d).map(|(c, v)| c.value() as i64 * v).sum::<i64>().rem_euclid(5))
        .collect();
    let b = factor
        .quadratics()
        .iter()
        .map(|m| {
            let rows: Vec<Vec<i64>> = m.to_rows().iter().map(|r| r.iter().map(|v| v.value() as i64).collect()).collect();
            common::quad(&rows, &d).rem_euclid(5)
        })
        .collect();
    (a, b)
}

#[test]
fn atom_examples() {
    let t = QuadraticFactor::trivial(cfg(2));
    let at = t.atom_of(&GroupPoint::from_ints(&[1, 2])).unwrap();
    assert!(at.a.is_empty() && at.b.is_empty());
    let f = lin(2, &[&[1, 0]]);
    assert_eq!(f.atom_of(&GroupPoint::from_ints(&[3, 2])).unwrap(), Atom::from_ints(&[3], &[]));
    let q = quads(2, vec![SymMatrix::identity(2)]);
    assert_eq!(q.atom_of(&GroupPoint::from_ints(&[1, 2])).unwrap(), Atom::from_ints(&[], &[0]));
}

#[test]
fn conditional_expectation_examples() {
    let mut rng = SeededRng::new(1);
    let f = random_complex(cfg(2), &mut rng);
    let t = conditional_expectation(&f, &QuadraticFactor::trivial(cfg(2))).unwrap();
    assert!(t.max_diff(&DenseFunction::constant(cfg(2), f.mean())).unwrap() < 1e-14);
    let full = conditional_expectation(&f, &QuadraticFactor::full_linear(cfg(2))).unwrap();
    assert!(full.max_diff(&f).unwrap() < 1e-14);
    let sq = quad_phase_fn(&QuadraticPhase::pure(SymMatrix::identity(1)), &cfg(1)).unwrap();
    let e = conditional_expectation(&sq, &quads(1, vec![SymMatrix::identity(1)])).unwrap();
    assert!(e.max_diff(&sq).unwrap() < 1e-14);
}

#[test]
fn energy_examples() {
    let one = DenseFunction::ones(cfg(2));
    assert!((energy(&one, &QuadraticFactor::trivial(cfg(2))).unwrap() - 1.0).abs() < 1e-14);
    let mut rng = SeededRng::new(2);
    let b = random_balanced(cfg(2), &mut rng);
    assert!(energy(&b, &QuadraticFactor::trivial(cfg(2))).unwrap() < 1e-28);
    let f = random_complex(cfg(3), &mut rng);
    let coarse = random_factor(cfg(3), 1, 1, &mut rng);
    let fine = join(&coarse, &random_factor(cfg(3), 1, 0, &mut rng)).unwrap();
    assert!(energy(&f, &fine).unwrap() >= energy(&f, &coarse).unwrap() - 1e-12);
}

#[test]
fn join_examples() {
    let mut rng = SeededRng::new(3);
    let f = random_factor(cfg(2), 1, 1, &mut rng);
    assert_eq!(join(&f, &QuadraticFactor::trivial(cfg(2))).unwrap(), f);
    assert_eq!(join(&f, &f).unwrap(), f);
    let j = join(&lin(2, &[&[1, 0]]), &lin(2, &[&[0, 1]])).unwrap();
    assert_eq!(j.atoms().len(), 25);
}

#[test]
fn rank_examples() {
    assert_eq!(factor_rank(&quads(3, vec![SymMatrix::identity(3)])).unwrap(), 3);
    let m = SymMatrix::from_ints(&[vec![1, 2, 0], vec![2, 0, 1], vec![0, 1, 3]]).unwrap();
    let m2 = SymMatrix::combination(3, &[quadfourier::field::F5::reduce(2)], &[m.clone()]);
    assert_eq!(factor_rank(&quads(3, vec![m, m2])).unwrap(), 0);
    assert_eq!(factor_rank(&lin(3, &[&[1, 0, 0]])).unwrap(), 4);

    let mut rng = SeededRng::new(4);
    for _ in 0..10 {
        let ms = vec![random_sym_matrix(3, &mut rng), random_sym_matrix(3, &mut rng)];
        let rows = |m: &SymMatrix| -> Vec<Vec<i64>> {
            m.to_rows().iter().map(|r| r.iter().map(|v| v.value() as i64).collect()).collect()
        };
        let (a, b) = (rows(&ms[0]), rows(&ms[1]));
        let mut best = usize::MAX;
        for l1 in 0..5i64 {
            for l2 in 0..5i64 {
                if l1 == 0 && l2 == 0 {
                    continue;
                }
                let u: Vec<Vec<i64>> = (0..3).map(|i| (0..3).map(|j| l1 * a[i][j] + l2 * b[i][j]).collect()).collect();
                best = best.min(brute_rank(&u));
            }
        }
        assert_eq!(factor_rank(&quads(3, ms)).unwrap(), best);
    }
}

#[test]
fn rank_reduce_examples() {
    let high = quads(3, vec![SymMatrix::identity(3)]);
    assert_eq!(rank_reduce(&high, |_| 2.0).unwrap(), high);

    let low = quads(3, vec![SymMatrix::diagonal(&[1, 0, 0])]);
    let (out, trace) = rank_reduce_traced(&low, |_| 2.0).unwrap();
    assert_eq!(out.complexity(), (1, 0));
    assert_eq!(out.linear_forms()[0], LinearForm::from_ints(&[1, 0, 0]));
    assert_eq!(trace.len(), 1);

    let i3 = SymMatrix::identity(3);
    let two = SymMatrix::diagonal(&[2, 2, 2]);
    let (out, trace) = rank_reduce_traced(&quads(3, vec![i3.clone(), two]), |_| 3.0).unwrap();
    assert_eq!(trace[0].combination_rank, 0);
    assert_eq!(trace[0].forms_added, 0);
    assert_eq!(trace[0].lambda, vec![3, 1]);
    assert_eq!(out.quadratics(), &[i3]);
}

#[test]
fn atom_statistics_examples() {
    let st = atom_statistics(&QuadraticFactor::trivial(cfg(2))).unwrap();
    assert_eq!(st.atoms.len(), 1);
    assert_eq!(st.atoms[0].probability, 1.0);
    let st = atom_statistics(&lin(2, &[&[1, 3]])).unwrap();
    assert_eq!(st.atoms.len(), 5);
    assert!(st.atoms.iter().all(|a| a.probability == 0.2));
    // Quadric x² + y² = c in F_5²: 9 points for c = 0, 4 for each c ≠ 0.
    let st = atom_statistics(&quads(2, vec![SymMatrix::identity(2)])).unwrap();
    let sizes: Vec<usize> = st.atoms.iter().map(|a| a.size).collect();
    assert_eq!(sizes, vec![9, 4, 4, 4, 4]);
    assert_eq!(st.rank, 2);
    assert_eq!(st.flagged, 0);
}

#[test]
fn ap4_probability_examples() {
    let t = QuadraticFactor::trivial(cfg(2));
    let e = Atom::from_ints(&[], &[]);
    let p = ap4_atom_probability(&t, &[e.clone(), e.clone(), e.clone(), e]).unwrap();
    assert_eq!(p.probability, 1.0);
    let l = lin(2, &[&[1, 0]]);
    let not_ap = [0, 1, 3, 4].map(|a| Atom::from_ints(&[a], &[]));
    let p = ap4_atom_probability(&l, &not_ap).unwrap();
    assert!(!p.constrained && p.probability == 0.0);
    let q = quads(2, vec![SymMatrix::identity(2)]);
    // b = (1, 2, 3, 4): 1 − 3·2 + 3·3 − 4 = 0.
    let tuple = [1, 2, 3, 4].map(|b| Atom::from_ints(&[], &[b]));
    let p = ap4_atom_probability(&q, &tuple).unwrap();
    assert!(p.constrained);
    assert!((p.probability - 5f64.powi(-3)).abs() <= 5f64.powf(-(p.rank as f64) / 2.0));
}

#[test]
fn haar_examples() {
    let c = cfg(2);
    let full = haar_on_subspace(&[GroupPoint::from_ints(&[1, 0]), GroupPoint::from_ints(&[0, 1])], &c).unwrap();
    assert!(full.max_diff(&DenseFunction::ones(c)).unwrap() < 1e-14);
    let zero = haar_on_subspace(&[], &c).unwrap();
    assert!(zero.max_diff(&DenseFunction::point_mass(c)).unwrap() < 1e-14);
    let line = haar_on_subspace(&[GroupPoint::from_ints(&[1, 2])], &c).unwrap();
    assert_eq!(line.values().iter().filter(|v| (**v - Complex64::new(5.0, 0.0)).norm() < 1e-14).count(), 5);
    assert!((line.mean() - 1.0).norm() < 1e-14);
    let dependent = haar_on_subspace(&[GroupPoint::from_ints(&[1, 2]), GroupPoint::from_ints(&[2, 4])], &c).unwrap();
    assert_eq!(dependent, line);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn atoms_match_raw_evaluation(n in 1usize..=3, d1 in 0usize..3, d2 in 0usize..3, seed in any::<u64>()) {
        let factor = random_factor(cfg(n), d1, d2, &mut SeededRng::new(seed));
        let keys = factor.atom_keys();
        for x in 0..cfg(n).order() {
            let (a, b) = brute_key(&factor, x);
            let atom = factor.decode(keys[x]);
            prop_assert_eq!(atom.a.iter().map(|v| v.value() as i64).collect::<Vec<_>>(), a);
            prop_assert_eq!(atom.b.iter().map(|v| v.value() as i64).collect::<Vec<_>>(), b);
        }
        let (c1, c2) = factor.complexity();
        prop_assert!(factor.atoms().len() <= 5usize.pow((c1 + c2) as u32));
    }

    #[test]
    fn pythagoras(n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let coarse = random_factor(cfg(n), rng.below(2), rng.below(2), &mut rng);
        let fine = join(&coarse, &random_factor(cfg(n), 1, rng.below(2), &mut rng)).unwrap();
        prop_assert!(refines(&fine, &coarse).unwrap());
        let f = random_complex(cfg(n), &mut rng);
        let e = conditional_expectation(&f, &coarse).unwrap();
        let e2 = conditional_expectation(&f, &fine).unwrap();
        let gap = e2.norm2().powi(2) - e.norm2().powi(2) - e2.sub(&e).unwrap().norm2().powi(2);
        prop_assert!(gap.abs() < 1e-10);
    }

    #[test]
    fn projection_properties(n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let b = random_factor(cfg(n), rng.below(3), rng.below(3), &mut rng);
        let f = random_complex(cfg(n), &mut rng);
        let p = conditional_expectation(&f, &b).unwrap();
        prop_assert!(conditional_expectation(&p, &b).unwrap().max_diff(&p).unwrap() < 1e-12);
        prop_assert!((p.mean() - f.mean()).norm() < 1e-12);
        prop_assert!(p.norm2() <= f.norm2() + 1e-12);
        let keys = b.atom_keys();
        for x in 0..keys.len() {
            for y in 0..keys.len() {
                if keys[x] == keys[y] {
                    prop_assert!((p[x] - p[y]).norm() < 1e-12);
                }
            }
        }
    }

    #[test]
    fn rank_reduce_refines_and_reaches_target(n in 1usize..=3, d2 in 1usize..=3, target in 1u32..=4, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let b = random_factor(cfg(n), rng.below(2), d2, &mut rng);
        let out = rank_reduce(&b, |_| target as f64).unwrap();
        prop_assert!(refines(&out, &b).unwrap());
        let (_, e2) = out.complexity();
        prop_assert!(e2 == 0 || factor_rank(&out).unwrap() >= target as usize);
        prop_assert!(e2 <= d2);
    }

    #[test]
    fn join_refines_both(n in 1usize..=3, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let a = random_factor(cfg(n), rng.below(2), rng.below(2), &mut rng);
        let b = random_factor(cfg(n), rng.below(2), rng.below(2), &mut rng);
        let j = join(&a, &b).unwrap();
        prop_assert!(refines(&j, &a).unwrap() && refines(&j, &b).unwrap());
    }

    #[test]
    fn ap4_census_sums_to_one(n in 1usize..=2, seed in any::<u64>()) {
        let mut rng = SeededRng::new(seed);
        let b = random_factor(cfg(n), rng.below(2), rng.below(2), &mut rng);
        let census = ap4_atom_census(&b).unwrap();
        let total: u64 = census.values().sum();
        prop_assert_eq!(total, (cfg(n).order() as u64).pow(2));
        for (keys, &count) in census.iter().take(4) {
            let atoms = keys.map(|k| b.decode(k));
            let p = ap4_atom_probability(&b, &atoms).unwrap();
            prop_assert!((p.probability - count as f64 / total as f64).abs() < 1e-15);
        }
    }
}

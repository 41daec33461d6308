//! Seeded generators for sets, functions, matrices and factors.
//!
//! The generator is xoshiro256++ seeded from a single u64 through
//! splitmix64. A uniform real is `(next_u64 >> 11) · 2^-53`, and a uniform
//! integer below k is `floor(k · uniform)`. Ports that follow these two
//! rules reproduce every object below from the same seed.

use std::f64::consts::TAU;

use num_complex::Complex64;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;

use crate::error::{QfError, Result};
use crate::factors::QuadraticFactor;
use crate::field::{GroupConfig, LinearForm, SymMatrix, F5};
use crate::fourier::{DenseFunction, PointSet};
use crate::quadratic::QuadraticPhase;

#[derive(Clone, Debug)]
pub struct SeededRng(Xoshiro256PlusPlus);

impl SeededRng {
    pub fn new(seed: u64) -> Self {
        SeededRng(Xoshiro256PlusPlus::seed_from_u64(seed))
    }

    pub fn next_u64(&mut self) -> u64 {
        self.0.next_u64()
    }

    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    pub fn below(&mut self, k: usize) -> usize {
        ((self.uniform() * k as f64) as usize).min(k.saturating_sub(1))
    }

    pub fn f5(&mut self) -> F5 {
        F5::reduce(self.below(5) as i64)
    }

    /// Uniform on the closed unit disk.
    pub fn unit_disk(&mut self) -> Complex64 {
        let r = self.uniform().sqrt();
        Complex64::from_polar(r, TAU * self.uniform())
    }
}

/// Each index joins the set independently with probability α.
pub fn random_set(n: usize, alpha: f64, seed: u64) -> Result<PointSet> {
    let cfg = GroupConfig::new(n)?;
    random_set_with(cfg, alpha, &mut SeededRng::new(seed))
}

pub fn random_set_with(cfg: GroupConfig, alpha: f64, rng: &mut SeededRng) -> Result<PointSet> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(QfError::InvalidParameter(format!("density must lie in [0, 1], got {alpha}")));
    }
    let members = (0..cfg.order()).filter(|_| rng.uniform() < alpha).collect();
    PointSet::new(cfg, members)
}

/// Values uniform on the unit disk.
pub fn random_bounded(cfg: GroupConfig, rng: &mut SeededRng) -> DenseFunction {
    let values = (0..cfg.order()).map(|_| rng.unit_disk()).collect();
    DenseFunction::new(cfg, values).expect("length matches")
}

/// Real values uniform in [−1, 1].
pub fn random_real(cfg: GroupConfig, rng: &mut SeededRng) -> DenseFunction {
    let values: Vec<f64> = (0..cfg.order()).map(|_| 2.0 * rng.uniform() - 1.0).collect();
    DenseFunction::from_real(cfg, &values).expect("length matches")
}

/// Real and imaginary parts independent and uniform in [−1, 1].
pub fn random_complex(cfg: GroupConfig, rng: &mut SeededRng) -> DenseFunction {
    let values = (0..cfg.order())
        .map(|_| Complex64::new(2.0 * rng.uniform() - 1.0, 2.0 * rng.uniform() - 1.0))
        .collect();
    DenseFunction::new(cfg, values).expect("length matches")
}

/// 1_A − α for a random set A of density 1/2.
pub fn random_balanced(cfg: GroupConfig, rng: &mut SeededRng) -> DenseFunction {
    let set = random_set_with(cfg, 0.5, rng).expect("valid density");
    let alpha = set.density();
    DenseFunction::indicator(&set).map(|v| v - alpha)
}

pub fn random_linear_form(n: usize, rng: &mut SeededRng) -> LinearForm {
    LinearForm::new((0..n).map(|_| rng.f5()).collect())
}

pub fn random_sym_matrix(n: usize, rng: &mut SeededRng) -> SymMatrix {
    let upper: Vec<F5> = (0..n * (n + 1) / 2).map(|_| rng.f5()).collect();
    SymMatrix::from_upper_triangle(n, &upper)
}

pub fn random_phase(n: usize, rng: &mut SeededRng) -> QuadraticPhase {
    let m = random_sym_matrix(n, rng);
    let r = random_linear_form(n, rng);
    QuadraticPhase::new(m, r).expect("dimensions agree")
}

/// A factor with `d1` random linear forms and `d2` random nonzero quadratics.
pub fn random_factor(cfg: GroupConfig, d1: usize, d2: usize, rng: &mut SeededRng) -> QuadraticFactor {
    let n = cfg.dim();
    let linear = (0..d1).map(|_| random_linear_form(n, rng)).collect();
    let quadratics = (0..d2)
        .map(|_| loop {
            let m = random_sym_matrix(n, rng);
            if !m.is_zero() {
                break m;
            }
        })
        .collect();
    QuadraticFactor::new(cfg, linear, quadratics).expect("dimensions agree")
}

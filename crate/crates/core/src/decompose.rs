//! Decomposition drivers: linear and quadratic Koopman–von Neumann splits,
//! the arithmetic regularity lemmas, and the 4-AP counting experiment.

use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::factors::{
    conditional_expectation, energy, factor_rank, haar_on_subspace, join, rank_reduce, FactorSpec,
    QuadraticFactor,
};
use crate::field::{null_space, GroupConfig};
use crate::fourier::{convolve, dft, large_spectrum, DenseFunction, PointSet};
use crate::gowers::uk_norm;
use crate::progressions::{ap4_count_for_difference, lambda4_weighted, CENSUS_MAX_DIM};
use crate::quadratic::{best_quadratic_correlation, CorrelationCertificate, OracleConfig, ORACLE_MAX_DIM};

const NORM_TOL: f64 = 1e-9;
const BOUNDED_TOL: f64 = 1e-9;

/// Lower clamp for the regularity schedule δ_i.
pub const MIN_SCHEDULE_DELTA: f64 = 1e-10;
/// Upper clamp for the regularity schedule δ_i.
pub const MAX_SCHEDULE_DELTA: f64 = 0.999;

/// A monotone growth function d ↦ ω(d).
pub trait Growth {
    fn eval(&self, d: usize) -> f64;

    fn describe(&self) -> String {
        "custom".to_string()
    }
}

impl<F: Fn(usize) -> f64> Growth for F {
    fn eval(&self, d: usize) -> f64 {
        self(d)
    }
}

/// Named growth presets, reproducible from their serialized form.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum GrowthFn {
    /// scale · base^d.
    Exponential { base: f64, scale: f64 },
    /// (1 + d)^power.
    Polynomial { power: f64 },
    Constant { value: f64 },
    /// slope · d + intercept.
    Affine { slope: f64, intercept: f64 },
}

impl GrowthFn {
    pub fn validate(&self) -> Result<()> {
        let ok = match *self {
            GrowthFn::Exponential { base, scale } => base >= 1.0 && scale > 0.0,
            GrowthFn::Polynomial { power } => power >= 0.0,
            GrowthFn::Constant { value } => value > 0.0,
            GrowthFn::Affine { slope, intercept } => slope >= 0.0 && intercept > 0.0,
        };
        if !ok {
            return Err(QfError::InvalidParameter(format!("growth function {self} is not positive and non-decreasing")));
        }
        Ok(())
    }
}

impl Growth for GrowthFn {
    fn eval(&self, d: usize) -> f64 {
        let d = d as f64;
        match *self {
            GrowthFn::Exponential { base, scale } => scale * base.powf(d),
            GrowthFn::Polynomial { power } => (1.0 + d).powf(power),
            GrowthFn::Constant { value } => value,
            GrowthFn::Affine { slope, intercept } => slope * d + intercept,
        }
    }

    fn describe(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for GrowthFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GrowthFn::Exponential { base, scale } => write!(f, "exp:{base}:{scale}"),
            GrowthFn::Polynomial { power } => write!(f, "poly:{power}"),
            GrowthFn::Constant { value } => write!(f, "const:{value}"),
            GrowthFn::Affine { slope, intercept } => write!(f, "affine:{slope}:{intercept}"),
        }
    }
}

impl FromStr for GrowthFn {
    type Err = QfError;

    /// `exp:BASE:SCALE`, `poly:POWER`, `const:VALUE` or `affine:SLOPE:INTERCEPT`.
    fn from_str(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split(':').collect();
        let num = |i: usize| -> Result<f64> {
            parts
                .get(i)
                .ok_or_else(|| QfError::InvalidParameter(format!("growth `{s}` is missing a parameter")))?
                .parse::<f64>()
                .map_err(|e| QfError::InvalidParameter(format!("growth `{s}`: {e}")))
        };
        let (g, arity) = match parts[0] {
            "exp" => (GrowthFn::Exponential { base: num(1)?, scale: num(2)? }, 3),
            "poly" => (GrowthFn::Polynomial { power: num(1)? }, 2),
            "const" => (GrowthFn::Constant { value: num(1)? }, 2),
            "affine" => (GrowthFn::Affine { slope: num(1)?, intercept: num(2)? }, 3),
            other => return Err(QfError::InvalidParameter(format!("unknown growth preset `{other}`"))),
        };
        if parts.len() != arity {
            return Err(QfError::InvalidParameter(format!("growth `{s}` has too many parameters")));
        }
        g.validate()?;
        Ok(g)
    }
}

/// c(δ) = θ(δ)²/4, the guaranteed energy gain of one increment step.
pub fn increment_floor(delta: f64, oracle: &OracleConfig) -> f64 {
    oracle.theta(delta).powi(2) / 4.0
}

/// Iteration cap ⌈1/θ(δ)²⌉ + 8 for the quadratic Koopman–von Neumann loop.
pub fn kvn_iteration_cap(delta: f64, oracle: &OracleConfig) -> usize {
    let inv = (1.0 / oracle.theta(delta).powi(2)).ceil();
    if inv.is_finite() && inv < (usize::MAX / 2) as f64 {
        (inv as usize).saturating_add(8)
    } else {
        usize::MAX
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Decomposition {
    pub f1: DenseFunction,
    pub f2: DenseFunction,
    pub f3: Option<DenseFunction>,
    pub factor: QuadraticFactor,
    pub iterations: usize,
    pub energy_history: Vec<f64>,
    pub certificates: Vec<CorrelationCertificate>,
    /// Factor rank, recorded by the high-rank driver.
    pub rank: Option<usize>,
    /// The δ_i used by each regularity round.
    pub schedule: Vec<f64>,
    pub increment_floor: Option<f64>,
}

impl Decomposition {
    /// max |f − (f1 + f2 + f3)|.
    pub fn reconstruction_error(&self, f: &DenseFunction) -> Result<f64> {
        let mut sum = self.f1.add(&self.f2)?;
        if let Some(f3) = &self.f3 {
            sum = sum.add(f3)?;
        }
        sum.max_diff(f)
    }
}

#[derive(Serialize, Deserialize)]
struct DecompositionRepr {
    n: usize,
    f1: DenseFunction,
    f2: DenseFunction,
    f3: Option<DenseFunction>,
    factor: FactorSpec,
    iterations: usize,
    energy_history: Vec<f64>,
    certificates: Vec<CorrelationCertificate>,
    rank: Option<usize>,
    schedule: Vec<f64>,
    increment_floor: Option<f64>,
}

impl Serialize for Decomposition {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DecompositionRepr {
            n: self.f1.cfg().dim(),
            f1: self.f1.clone(),
            f2: self.f2.clone(),
            f3: self.f3.clone(),
            factor: self.factor.spec(),
            iterations: self.iterations,
            energy_history: self.energy_history.clone(),
            certificates: self.certificates.clone(),
            rank: self.rank,
            schedule: self.schedule.clone(),
            increment_floor: self.increment_floor,
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Decomposition {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let r = DecompositionRepr::deserialize(d)?;
        let cfg = GroupConfig::new(r.n).map_err(serde::de::Error::custom)?;
        let factor = r.factor.into_factor(cfg).map_err(serde::de::Error::custom)?;
        Ok(Decomposition {
            f1: r.f1,
            f2: r.f2,
            f3: r.f3,
            factor,
            iterations: r.iterations,
            energy_history: r.energy_history,
            certificates: r.certificates,
            rank: r.rank,
            schedule: r.schedule,
            increment_floor: r.increment_floor,
        })
    }
}

fn require_bounded(f: &DenseFunction) -> Result<()> {
    let m = f.sup_norm();
    if m > 1.0 + BOUNDED_TOL {
        return Err(QfError::Unbounded { max_abs: m });
    }
    Ok(())
}

fn require_delta(delta: f64) -> Result<()> {
    if !(delta > 0.0 && delta < 1.0) {
        return Err(QfError::InvalidParameter(format!("delta must lie in (0, 1), got {delta}")));
    }
    Ok(())
}

fn require_oracle(cfg: &GroupConfig) -> Result<()> {
    if cfg.dim() > ORACLE_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for the quadratic oracle", limit: ORACLE_MAX_DIM, got: cfg.dim() });
    }
    Ok(())
}

/// f = f1 + f2 with f1 = f ∗ μ_H, H the annihilator of Spec_η(f), η = δ²/2.
pub fn linear_kvn(f: &DenseFunction, delta: f64) -> Result<Decomposition> {
    require_delta(delta)?;
    require_bounded(f)?;
    let cfg = *f.cfg();
    let eta = delta * delta / 2.0;
    let spec = large_spectrum(f, eta)?;
    let factor = QuadraticFactor::new(cfg, spec, vec![])?;
    let h_basis = null_space(factor.linear_forms(), &cfg)?;
    let mu = haar_on_subspace(&h_basis, &cfg)?;
    let f1 = convolve(f, &mu)?;
    let f2 = f.sub(&f1)?;

    let projected = conditional_expectation(f, &factor)?;
    let gap = projected.max_diff(&f1)?;
    if gap > 1e-10 {
        return Err(QfError::InvariantViolated(format!("f ∗ μ_H differs from E(f|B) by {gap:e}")));
    }
    let complexity = factor.complexity().0 as f64;
    if complexity > 4.0 * delta.powi(-4) {
        return Err(QfError::InvariantViolated(format!("linear factor complexity {complexity} exceeds 4δ^-4")));
    }
    let u2 = uk_norm(&f2, 2)?;
    if u2 > delta + NORM_TOL {
        return Err(QfError::InvariantViolated(format!("∥f2∥_U2 = {u2} exceeds δ = {delta}")));
    }
    let e = f1.norm2().powi(2);
    Ok(Decomposition {
        f1,
        f2,
        f3: None,
        factor,
        iterations: 1,
        energy_history: vec![e],
        certificates: vec![],
        rank: None,
        schedule: vec![],
        increment_floor: None,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct IncrementStep {
    pub factor: QuadraticFactor,
    pub certificate: CorrelationCertificate,
    pub u3_before: f64,
    pub energy_before: f64,
    pub energy_after: f64,
}

/// One energy increment: if ∥f − E(f|B_2)∥_{U^3} ≥ δ, join the factor with
/// the (r, M) of the best quadratic correlation of the residual.
pub fn energy_increment_step(
    f: &DenseFunction,
    factor: &QuadraticFactor,
    delta: f64,
    oracle: &OracleConfig,
) -> Result<Option<IncrementStep>> {
    require_oracle(f.cfg())?;
    let projected = conditional_expectation(f, factor)?;
    let g = f.sub(&projected)?;
    let u3 = uk_norm(&g, 3)?;
    if u3 < delta {
        return Ok(None);
    }
    let cert = best_quadratic_correlation(&g)?;
    let floor = oracle.theta(delta);
    if cert.magnitude < floor {
        return Err(QfError::InverseTheoremViolated { u3_norm: u3, delta, best: cert.magnitude, floor });
    }
    let cfg = *f.cfg();
    let piece = QuadraticFactor::new(cfg, vec![cert.phase.r.clone()], vec![cert.phase.m.clone()])?;
    let next = join(factor, &piece)?;
    let energy_before = projected.norm2().powi(2);
    let energy_after = energy(f, &next)?;
    let gain = energy_after - energy_before;
    let c = increment_floor(delta, oracle);
    if gain < c - 1e-12 {
        return Err(QfError::InvariantViolated(format!("energy gain {gain:e} is below the floor {c:e}")));
    }
    Ok(Some(IncrementStep { factor: next, certificate: cert, u3_before: u3, energy_before, energy_after }))
}

/// Repeats the increment step from `initial` until the residual has U^3 norm below δ.
pub fn quadratic_kvn(
    f: &DenseFunction,
    delta: f64,
    initial: &QuadraticFactor,
    oracle: &OracleConfig,
) -> Result<Decomposition> {
    require_delta(delta)?;
    require_bounded(f)?;
    require_oracle(f.cfg())?;
    let cap = kvn_iteration_cap(delta, oracle);
    let mut factor = initial.clone();
    let mut history = vec![energy(f, &factor)?];
    let mut certificates = Vec::new();
    while let Some(step) = energy_increment_step(f, &factor, delta, oracle)? {
        if certificates.len() >= cap {
            return Err(QfError::IterationCap { cap, energy_history: history });
        }
        factor = step.factor;
        history.push(step.energy_after);
        certificates.push(step.certificate);
    }
    let f1 = conditional_expectation(f, &factor)?;
    let f2 = f.sub(&f1)?;
    Ok(Decomposition {
        f1,
        f2,
        f3: None,
        factor,
        iterations: certificates.len(),
        energy_history: history,
        certificates,
        rank: None,
        schedule: vec![],
        increment_floor: Some(increment_floor(delta, oracle)),
    })
}

/// δ_{i+1} = 1/ω(C_i), clamped into [MIN_SCHEDULE_DELTA, MAX_SCHEDULE_DELTA].
pub fn schedule_delta(omega: &dyn Growth, c: usize) -> f64 {
    let v = 1.0 / omega.eval(c);
    if v.is_nan() {
        return MIN_SCHEDULE_DELTA;
    }
    v.clamp(MIN_SCHEDULE_DELTA, MAX_SCHEDULE_DELTA)
}

/// f = f1 + f2 + f3 with f1 = E(f|B), ∥f2∥_2 ≤ δ and ∥f3∥_{U^3} ≤ 1/ω(d).
///
/// Runs quadratic Koopman–von Neumann rounds B^(0) ⊆ B^(1) ⊆ … with
/// δ_{i+1} = 1/ω(C_i), C_i = max(d_1, d_2) of B^(i), and stops at the first
/// i whose energy gap to round i+1 is at most δ².
pub fn regularity(
    f: &DenseFunction,
    delta: f64,
    omega: &dyn Growth,
    initial: &QuadraticFactor,
    oracle: &OracleConfig,
) -> Result<Decomposition> {
    require_delta(delta)?;
    require_bounded(f)?;
    require_oracle(f.cfg())?;
    let cap = (delta.powi(-2)).ceil() as usize;
    let mut current = initial.clone();
    let mut current_energy = energy(f, &current)?;
    let mut history = vec![current_energy];
    let mut schedule = Vec::new();
    let mut certificates = Vec::new();
    for i in 0..=cap {
        let (d1, d2) = current.complexity();
        let step_delta = schedule_delta(omega, d1.max(d2));
        schedule.push(step_delta);
        let kvn = quadratic_kvn(f, step_delta, &current, oracle)?;
        let next_energy = energy(f, &kvn.factor)?;
        history.push(next_energy);
        certificates.extend(kvn.certificates.iter().cloned());
        if next_energy - current_energy <= delta * delta {
            let f1 = conditional_expectation(f, &current)?;
            let next_proj = kvn.f1;
            let f2 = next_proj.sub(&f1)?;
            let f3 = kvn.f2;
            let bound = 1.0 / omega.eval(d1.max(d2));
            let f2_l2 = f2.norm2();
            let f3_u3 = uk_norm(&f3, 3)?;
            if f2_l2 > delta + NORM_TOL {
                return Err(QfError::InvariantViolated(format!("∥f2∥_2 = {f2_l2} exceeds δ = {delta}")));
            }
            if f3_u3 > bound.max(MIN_SCHEDULE_DELTA) + NORM_TOL {
                return Err(QfError::InvariantViolated(format!("∥f3∥_U3 = {f3_u3} exceeds 1/ω(d) = {bound}")));
            }
            return Ok(Decomposition {
                f1,
                f2,
                f3: Some(f3),
                factor: current,
                iterations: i + 1,
                energy_history: history,
                certificates,
                rank: None,
                schedule,
                increment_floor: None,
            });
        }
        current = kvn.factor;
        current_energy = next_energy;
    }
    Err(QfError::IterationCap { cap, energy_history: history })
}

/// Regularity with a high-rank factor: rank ≥ ω_1(d_1 + d_2) (or no
/// quadratics), ∥f2∥_2 ≤ δ and ∥f3∥_{U^3} ≤ 1/ω_2(d_1 + d_2).
///
/// Each round runs [`regularity`] at δ/2 with ω(C) = ω_2(n + C), which
/// dominates ω_2 of any complexity reachable by rank reduction since d_1 ≤ n,
/// then reduces the rank and re-enters if the projection moved by ≥ δ/2.
pub fn regularity_high_rank(
    f: &DenseFunction,
    delta: f64,
    omega1: &dyn Growth,
    omega2: &dyn Growth,
    initial: &QuadraticFactor,
    oracle: &OracleConfig,
) -> Result<Decomposition> {
    require_delta(delta)?;
    require_bounded(f)?;
    let n = f.cfg().dim();
    let cap = (4.0 / (delta * delta)).ceil() as usize;
    let shifted = |c: usize| omega2.eval(n + c);
    let mut current = initial.clone();
    let mut history = Vec::new();
    let mut schedule = Vec::new();
    let mut certificates = Vec::new();
    for round in 0..cap.max(1) {
        let dec = regularity(f, delta / 2.0, &shifted, &current, oracle)?;
        history.extend(dec.energy_history.iter().copied());
        schedule.extend(dec.schedule.iter().copied());
        certificates.extend(dec.certificates.iter().cloned());
        let reduced = rank_reduce(&dec.factor, |d| omega1.eval(d))?;
        let reduced_proj = conditional_expectation(f, &reduced)?;
        let moved = dec.f1.sub(&reduced_proj)?.norm2();
        if moved < delta / 2.0 {
            let f2 = dec.f2.add(&dec.f1.sub(&reduced_proj)?)?;
            let f3 = dec.f3.expect("regularity yields three parts");
            let (d1, d2) = reduced.complexity();
            let rank = factor_rank(&reduced)?;
            if d2 > 0 && (rank as f64) < omega1.eval(d1 + d2) {
                return Err(QfError::InvariantViolated(format!("rank {rank} below ω1({})", d1 + d2)));
            }
            let f2_l2 = f2.norm2();
            if f2_l2 > delta + NORM_TOL {
                return Err(QfError::InvariantViolated(format!("∥f2∥_2 = {f2_l2} exceeds δ = {delta}")));
            }
            let bound = 1.0 / omega2.eval(d1 + d2);
            let f3_u3 = uk_norm(&f3, 3)?;
            if f3_u3 > bound.max(MIN_SCHEDULE_DELTA) + NORM_TOL {
                return Err(QfError::InvariantViolated(format!("∥f3∥_U3 = {f3_u3} exceeds 1/ω2(d) = {bound}")));
            }
            history.push(reduced_proj.norm2().powi(2));
            return Ok(Decomposition {
                f1: reduced_proj,
                f2,
                f3: Some(f3),
                factor: reduced,
                iterations: round + 1,
                energy_history: history,
                certificates,
                rank: Some(rank),
                schedule,
                increment_floor: None,
            });
        }
        current = reduced;
    }
    Err(QfError::IterationCap { cap, energy_history: history })
}

/// Values of a factor-measurable real function on configuration space,
/// indexed `a + 5^{d_1} b`; empty atoms get 0.
pub fn config_space_function(f: &DenseFunction, factor: &QuadraticFactor) -> Result<Vec<f64>> {
    let size = factor.config_space_size()?;
    let mut out = vec![0.0; size];
    for (key, members) in factor.atoms() {
        out[key] = members.iter().map(|&i| f[i].re).sum::<f64>() / members.len() as f64;
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConfigInequality {
    pub lhs: f64,
    pub rhs: f64,
    pub lhs_fourier: f64,
}

/// Largest d_1 + d_2 accepted on configuration space.
pub const CONFIG_MAX_DIM: usize = 6;

/// Cap on 5^{d_1 + 3 d_2}, the cost of the direct constrained sum.
pub const CONFIG_BUDGET: f64 = 1e9;

/// E over a and b^{(1..4)} with b^{(1)} − 3b^{(2)} + 3b^{(3)} − b^{(4)} = 0 of
/// Π F(a, b^{(i)}), against (E F)^4; also evaluated as
/// E_a Σ_r |F̃(a,r)|² |F̃(a,−3r)|².
pub fn configspace_count_inequality(values: &[f64], d1: usize, d2: usize) -> Result<ConfigInequality> {
    if d1 + d2 > CONFIG_MAX_DIM {
        return Err(QfError::TooLarge { what: "configuration space dimension d1 + d2", limit: CONFIG_MAX_DIM, got: d1 + d2 });
    }
    let la = 5usize.pow(d1 as u32);
    let lb = 5usize.pow(d2 as u32);
    if values.len() != la * lb {
        return Err(QfError::DimensionMismatch { expected: la * lb, got: values.len() });
    }
    if let Some((index, &value)) = values.iter().enumerate().find(|(_, v)| **v < 0.0 || v.is_nan()) {
        return Err(QfError::NegativeValue { index, value });
    }
    let cost = (la as f64) * (lb as f64).powi(3);
    if cost > CONFIG_BUDGET {
        return Err(QfError::BudgetExceeded { cost, budget: CONFIG_BUDGET });
    }
    let bcfg = GroupConfig::new(d2)?;
    let at = |a: usize, b: usize| values[a + la * b];

    let mut lhs = 0.0;
    for a in 0..la {
        let mut acc = 0.0;
        for b1 in 0..lb {
            let f1 = at(a, b1);
            if f1 == 0.0 {
                continue;
            }
            for b2 in 0..lb {
                let f12 = f1 * at(a, b2);
                if f12 == 0.0 {
                    continue;
                }
                let base = bcfg.sub(b1, bcfg.scale(3, b2));
                for b3 in 0..lb {
                    let b4 = bcfg.add(base, bcfg.scale(3, b3));
                    acc += f12 * at(a, b3) * at(a, b4);
                }
            }
        }
        lhs += acc / (lb as f64).powi(3);
    }
    lhs /= la as f64;

    let mean = values.iter().sum::<f64>() / values.len() as f64;
    let rhs = mean.powi(4);

    let mut lhs_fourier = 0.0;
    for a in 0..la {
        let slice: Vec<Complex64> = (0..lb).map(|b| Complex64::new(at(a, b), 0.0)).collect();
        let s = dft(&DenseFunction::new(bcfg, slice)?);
        lhs_fourier += (0..lb).map(|r| s[r].norm_sqr() * s[bcfg.scale(2, r)].norm_sqr()).sum::<f64>();
    }
    lhs_fourier /= la as f64;

    if lhs < rhs - 1e-10 {
        return Err(QfError::InvariantViolated(format!("counting inequality fails: {lhs} < {rhs}")));
    }
    if (lhs - lhs_fourier).abs() > 1e-9 {
        return Err(QfError::InvariantViolated(format!(
            "direct ({lhs}) and Fourier ({lhs_fourier}) evaluations disagree"
        )));
    }
    Ok(ConfigInequality { lhs, rhs, lhs_fourier })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhkOptions {
    /// Regularity parameter; ε/200 when absent.
    pub delta: Option<f64>,
    /// Rank growth; 100·(t + ⌈ln 1/ε⌉ + ⌈ln 1/α⌉) when absent.
    pub omega1: Option<GrowthFn>,
    /// Uniformity growth; 5^{t+4}/ε when absent.
    pub omega2: Option<GrowthFn>,
    pub oracle: OracleConfig,
}

impl Default for BhkOptions {
    fn default() -> Self {
        BhkOptions { delta: None, omega1: None, omega2: None, oracle: OracleConfig::default() }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub bound: f64,
    pub satisfied: bool,
    /// The bound is at least 1, so it holds for any 1-bounded term.
    pub vacuous: bool,
}

impl BoundCheck {
    fn new(value: f64, bound: f64) -> Self {
        BoundCheck { bound, satisfied: value <= bound + NORM_TOL, vacuous: bound >= 1.0 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhkTerm {
    /// Which of f1, f2, f3 sits at each of the four positions.
    pub parts: [u8; 4],
    pub value: Complex64,
    pub f2_bound: Option<BoundCheck>,
    pub f3_bound: Option<BoundCheck>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhkPipeline {
    pub factor: FactorSpec,
    pub complexity: (usize, usize),
    pub rank: usize,
    pub rounds: usize,
    pub f2_l2: f64,
    pub f3_u3: f64,
    pub h_dim: usize,
    /// E_{x,d} 1_A(x)…1_A(x+3d) μ_H(d).
    pub weighted_count: f64,
    pub terms: Vec<BhkTerm>,
    pub terms_sum: Complex64,
    pub reconcile_error: f64,
    /// Mean of f1 over configuration space, next to α.
    pub config_mean: f64,
    pub config: Option<ConfigInequality>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub d: Vec<u8>,
    pub index: usize,
    pub count: u64,
    /// (α⁴ − ε)N.
    pub threshold: f64,
    /// count/N − (α⁴ − ε).
    pub margin: f64,
    pub in_h: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BhkReport {
    pub n: usize,
    pub alpha: f64,
    pub epsilon: f64,
    pub delta: f64,
    pub omega1: GrowthFn,
    pub omega2: GrowthFn,
    pub theta_scale: f64,
    pub theta_power: f64,
    pub fallback: bool,
    pub fallback_reason: Option<String>,
    pub pipeline: Option<BhkPipeline>,
    pub witness: Option<Witness>,
}

/// Best d (most progressions, ties to the lex-least) among `candidates`.
fn best_difference(mask: &[bool], cfg: &GroupConfig, candidates: impl Iterator<Item = usize>) -> Option<(usize, u64)> {
    let mut best: Option<(usize, u64)> = None;
    for d in candidates {
        let c = ap4_count_for_difference(mask, cfg, d);
        let better = match best {
            None => true,
            Some((bd, bc)) => c > bc || (c == bc && cfg.digits(d) < cfg.digits(bd)),
        };
        if better {
            best = Some((d, c));
        }
    }
    best
}

fn pipeline(
    set: &PointSet,
    delta: f64,
    omega1: &GrowthFn,
    omega2: &GrowthFn,
    oracle: &OracleConfig,
) -> Result<(BhkPipeline, Vec<usize>)> {
    let cfg = *set.cfg();
    let f = DenseFunction::indicator(set);
    let dec = regularity_high_rank(&f, delta, omega1, omega2, &QuadraticFactor::trivial(cfg), oracle)?;
    let factor = dec.factor.clone();
    let (d1, d2) = factor.complexity();
    let h_basis = null_space(factor.linear_forms(), &cfg)?;
    let mu = haar_on_subspace(&h_basis, &cfg)?;
    let h_members: Vec<usize> = (0..cfg.order()).filter(|&i| mu[i].re > 0.0).collect();

    let f3 = dec.f3.clone().expect("three-part decomposition");
    let parts = [&dec.f1, &dec.f2, &f3];
    let f2_l2 = dec.f2.norm2();
    let f3_u3 = uk_norm(&f3, 3)?;
    let f3_bound = 5f64.powi(2 * d1 as i32) * f3_u3;
    let mut terms = Vec::with_capacity(81);
    for code in 0..81usize {
        let idx = [code % 3, code / 3 % 3, code / 9 % 3, code / 27];
        let value = lambda4_weighted([parts[idx[0]], parts[idx[1]], parts[idx[2]], parts[idx[3]]], &mu)?;
        let has = |p: usize| idx.contains(&p);
        terms.push(BhkTerm {
            parts: idx.map(|p| p as u8 + 1),
            value,
            f2_bound: has(1).then(|| BoundCheck::new(value.norm(), f2_l2)),
            f3_bound: has(2).then(|| BoundCheck::new(value.norm(), f3_bound)),
        });
    }
    let terms_sum: Complex64 = terms.iter().map(|t| t.value).sum();
    let weighted = lambda4_weighted([&f, &f, &f, &f], &mu)?;
    let reconcile_error = (terms_sum - weighted).norm();
    if reconcile_error > 1e-8 {
        return Err(QfError::InvariantViolated(format!("81-term split misses the weighted count by {reconcile_error:e}")));
    }

    let config_values = config_space_function(&dec.f1, &factor)?;
    let config_mean = config_values.iter().sum::<f64>() / config_values.len() as f64;
    let config = if d1 + d2 <= CONFIG_MAX_DIM {
        Some(configspace_count_inequality(&config_values, d1, d2)?)
    } else {
        None
    };
    let rank = dec.rank.unwrap_or(factor_rank(&factor)?);
    Ok((
        BhkPipeline {
            factor: factor.spec(),
            complexity: (d1, d2),
            rank,
            rounds: dec.iterations,
            f2_l2,
            f3_u3,
            h_dim: h_basis.len(),
            weighted_count: weighted.re,
            terms,
            terms_sum,
            reconcile_error,
            config_mean,
            config,
        },
        h_members,
    ))
}

/// Looks for d ≠ 0 with at least (α⁴ − ε)N four-term progressions of
/// difference d, first inside H from the regularity pipeline and otherwise
/// over all of G.
pub fn bhk_experiment(set: &PointSet, epsilon: f64, options: &BhkOptions) -> Result<BhkReport> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(QfError::InvalidParameter(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    let cfg = *set.cfg();
    if cfg.dim() > CENSUS_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for the progression experiment", limit: CENSUS_MAX_DIM, got: cfg.dim() });
    }
    let alpha = set.density();
    let delta = options.delta.unwrap_or(epsilon / 200.0);
    require_delta(delta)?;
    let omega2 = options.omega2.unwrap_or(GrowthFn::Exponential { base: 5.0, scale: 625.0 / epsilon });
    let log_alpha = if alpha > 0.0 { (1.0 / alpha).ln().ceil() } else { 0.0 };
    let omega1 = options.omega1.unwrap_or(GrowthFn::Affine {
        slope: 100.0,
        intercept: 100.0 * ((1.0 / epsilon).ln().ceil() + log_alpha).max(1.0),
    });
    omega1.validate()?;
    omega2.validate()?;

    let n_pts = cfg.order() as f64;
    let threshold = (alpha.powi(4) - epsilon) * n_pts;
    let mask = set.mask();
    let make_witness = |d: usize, count: u64, in_h: bool| Witness {
        d: cfg.digits(d).iter().map(|v| v.value()).collect(),
        index: d,
        count,
        threshold,
        margin: count as f64 / n_pts - (alpha.powi(4) - epsilon),
        in_h,
    };

    let mut report = BhkReport {
        n: cfg.dim(),
        alpha,
        epsilon,
        delta,
        omega1,
        omega2,
        theta_scale: options.oracle.scale,
        theta_power: options.oracle.power,
        fallback: false,
        fallback_reason: None,
        pipeline: None,
        witness: None,
    };

    let mut reason = None;
    if cfg.dim() > ORACLE_MAX_DIM {
        reason = Some(format!("n = {} exceeds the oracle limit {ORACLE_MAX_DIM}", cfg.dim()));
    } else if alpha == 0.0 {
        reason = Some("empty set".to_string());
    } else {
        let (pipe, h_members) = pipeline(set, delta, &omega1, &omega2, &options.oracle)?;
        report.pipeline = Some(pipe);
        let in_h = h_members.into_iter().filter(|&d| d != 0);
        match best_difference(&mask, &cfg, in_h) {
            None => reason = Some("H = {0}".to_string()),
            Some((d, c)) if c as f64 >= threshold => report.witness = Some(make_witness(d, c, true)),
            Some(_) => reason = Some("no difference in H meets the threshold".to_string()),
        }
    }
    if report.witness.is_none() {
        report.fallback = true;
        report.fallback_reason = reason;
        if let Some((d, c)) = best_difference(&mask, &cfg, 1..cfg.order()) {
            if c as f64 >= threshold {
                report.witness = Some(make_witness(d, c, false));
            }
        }
    }
    Ok(report)
}

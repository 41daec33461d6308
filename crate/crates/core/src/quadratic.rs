//! Quadratic phases ω^{xᵀMx + rᵀx}, Gauss sums, correlations and the
//! exhaustive U^3 inverse oracle.

use std::cmp::Ordering;

use num_complex::Complex64;
use rand_xoshiro::rand_core::{Rng, SeedableRng};
use rand_xoshiro::Xoshiro256PlusPlus;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::field::{symmetrize, GroupConfig, LinearForm, Matrix, SymMatrix, F5};
use crate::fourier::{dft, omega_pow, DenseFunction};
use crate::gowers::derivative_at;

/// Largest n for exhaustive (M, r) search.
pub const ORACLE_MAX_DIM: usize = 3;

/// Magnitudes closer than this are treated as tied.
pub const TIE_TOL: f64 = 1e-12;

const GAUSS_TOL: f64 = 1e-9;

/// x ↦ ω^{xᵀMx + rᵀx} with M symmetric.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct QuadraticPhase {
    #[serde(rename = "M")]
    pub m: SymMatrix,
    pub r: LinearForm,
}

impl QuadraticPhase {
    pub fn new(m: SymMatrix, r: LinearForm) -> Result<Self> {
        if m.dim() != r.dim() {
            return Err(QfError::DimensionMismatch { expected: m.dim(), got: r.dim() });
        }
        Ok(QuadraticPhase { m, r })
    }

    /// Replaces M by its symmetric part, which leaves the phase unchanged.
    pub fn from_matrix(m: &Matrix, r: LinearForm) -> Result<Self> {
        QuadraticPhase::new(symmetrize(m)?, r)
    }

    pub fn pure(m: SymMatrix) -> Self {
        let n = m.dim();
        QuadraticPhase { m, r: LinearForm::zero(n) }
    }

    pub fn linear(r: LinearForm) -> Self {
        QuadraticPhase { m: SymMatrix::zero(r.dim()), r }
    }

    pub fn dim(&self) -> usize {
        self.m.dim()
    }

    /// Exponent xᵀMx + rᵀx for every x in index order.
    pub fn exponents(&self, cfg: &GroupConfig) -> Result<Vec<u8>> {
        if self.dim() != cfg.dim() {
            return Err(QfError::DimensionMismatch { expected: cfg.dim(), got: self.dim() });
        }
        Ok((0..cfg.order())
            .map(|i| {
                let x = cfg.digits(i);
                (self.m.quad_form(&x) + self.r.eval(&x)).value()
            })
            .collect())
    }
}

/// The phase as a function on G.
pub fn quad_phase_fn(q: &QuadraticPhase, cfg: &GroupConfig) -> Result<DenseFunction> {
    let e = q.exponents(cfg)?;
    DenseFunction::new(*cfg, e.into_iter().map(omega_pow).collect())
}

/// E_x ω^{xᵀMx + rᵀx}, checked against |·| ≤ 5^{−rk M/2} (equality when r = 0).
pub fn gauss_sum(q: &QuadraticPhase, cfg: &GroupConfig) -> Result<Complex64> {
    let value = quad_phase_fn(q, cfg)?.mean();
    let bound = 5f64.powf(-(q.m.rank() as f64) / 2.0);
    let mag = value.norm();
    if mag > bound + GAUSS_TOL {
        return Err(QfError::InvariantViolated(format!("Gauss sum {mag} exceeds 5^(-rank/2) = {bound}")));
    }
    if q.r.is_zero() && (mag - bound).abs() > GAUSS_TOL {
        return Err(QfError::InvariantViolated(format!("Gauss sum {mag} with r = 0 differs from {bound}")));
    }
    Ok(value)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CorrelationCertificate {
    pub phase: QuadraticPhase,
    pub correlation: Complex64,
    pub magnitude: f64,
}

impl CorrelationCertificate {
    pub fn new(phase: QuadraticPhase, correlation: Complex64) -> Self {
        CorrelationCertificate { phase, magnitude: correlation.norm(), correlation }
    }
}

#[derive(Serialize, Deserialize)]
struct CertificateRepr {
    #[serde(rename = "M")]
    m: SymMatrix,
    r: LinearForm,
    corr: [f64; 2],
}

impl Serialize for CorrelationCertificate {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        CertificateRepr {
            m: self.phase.m.clone(),
            r: self.phase.r.clone(),
            corr: [self.correlation.re, self.correlation.im],
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for CorrelationCertificate {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = CertificateRepr::deserialize(d)?;
        let phase = QuadraticPhase::new(repr.m, repr.r).map_err(serde::de::Error::custom)?;
        Ok(CorrelationCertificate::new(phase, Complex64::new(repr.corr[0], repr.corr[1])))
    }
}

/// E_x f(x) ω^{xᵀMx + rᵀx}, without conjugation.
pub fn quad_correlation(f: &DenseFunction, q: &QuadraticPhase) -> Result<CorrelationCertificate> {
    let phase = quad_phase_fn(q, f.cfg())?;
    let corr = f.mul(&phase)?.mean();
    Ok(CorrelationCertificate::new(q.clone(), corr))
}

/// Accept threshold θ(δ) = scale·δ^power for the inverse oracle.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct OracleConfig {
    pub scale: f64,
    pub power: f64,
}

impl Default for OracleConfig {
    fn default() -> Self {
        OracleConfig { scale: 0.5, power: 4.0 }
    }
}

impl OracleConfig {
    pub fn theta(&self, delta: f64) -> f64 {
        self.scale * delta.powf(self.power)
    }
}

fn triangle_len(n: usize) -> usize {
    n * (n + 1) / 2
}

/// The `m`-th symmetric matrix in lexicographic order of its row-major upper
/// triangle.
pub fn sym_matrix_by_rank(n: usize, m: usize) -> SymMatrix {
    let t = triangle_len(n);
    let mut upper = vec![F5::ZERO; t];
    let mut rest = m;
    for k in (0..t).rev() {
        upper[k] = F5::reduce((rest % 5) as i64);
        rest /= 5;
    }
    SymMatrix::from_upper_triangle(n, &upper)
}

/// Lexicographic comparison of two indices by coordinate vector (x_0 first).
pub fn lex_cmp(cfg: &GroupConfig, a: usize, b: usize) -> Ordering {
    cfg.digits(a).cmp(&cfg.digits(b))
}

/// Lex-least index among those with magnitude within TIE_TOL of the maximum.
fn argmax_lex(cfg: &GroupConfig, mags: impl Iterator<Item = (usize, f64)> + Clone) -> Option<(usize, f64)> {
    let best = mags.clone().map(|(_, m)| m).fold(f64::NEG_INFINITY, f64::max);
    if best == f64::NEG_INFINITY {
        return None;
    }
    mags.filter(|&(_, m)| m >= best - TIE_TOL)
        .min_by(|a, b| lex_cmp(cfg, a.0, b.0))
        .map(|(i, _)| (i, best))
}

fn check_oracle_dim(cfg: &GroupConfig) -> Result<()> {
    if cfg.dim() > ORACLE_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for exhaustive quadratic search", limit: ORACLE_MAX_DIM, got: cfg.dim() });
    }
    Ok(())
}

/// The (M, r) maximising |E f ω^{xᵀMx + rᵀx}| over all symmetric M and all r.
///
/// Ties go to the lexicographically least (M, r). Each M costs one transform
/// of f·ω^{xᵀMx}, which yields every r at once.
pub fn best_quadratic_correlation(f: &DenseFunction) -> Result<CorrelationCertificate> {
    let cfg = *f.cfg();
    check_oracle_dim(&cfg)?;
    let n = cfg.dim();
    let count = 5usize.pow(triangle_len(n) as u32);
    let per_m: Vec<(usize, f64, Complex64)> = (0..count)
        .into_par_iter()
        .map(|mi| {
            let m = sym_matrix_by_rank(n, mi);
            let q = m.quadratic_values(&cfg);
            let g = DenseFunction::from_fn(cfg, |x| f[x] * omega_pow(q[x]));
            let s = dft(&g);
            let (r, mag) = argmax_lex(&cfg, s.values().iter().enumerate().map(|(r, v)| (r, v.norm())))
                .expect("group is non-empty");
            (r, mag, s[r])
        })
        .collect();
    let gmax = per_m.iter().map(|p| p.1).fold(f64::NEG_INFINITY, f64::max);
    let (mi, (r, _, corr)) = per_m
        .into_iter()
        .enumerate()
        .find(|(_, p)| p.1 >= gmax - TIE_TOL)
        .expect("at least one matrix");
    let phase = QuadraticPhase::new(sym_matrix_by_rank(n, mi), LinearForm::new(cfg.digits(r)))?;
    Ok(CorrelationCertificate::new(phase, corr))
}

/// The best certificate if its magnitude reaches θ(δ), else `None`.
pub fn inverse_oracle(f: &DenseFunction, delta: f64, config: &OracleConfig) -> Result<Option<CorrelationCertificate>> {
    if !(delta > 0.0) {
        return Err(QfError::InvalidParameter(format!("delta must be positive, got {delta}")));
    }
    let cert = best_quadratic_correlation(f)?;
    Ok((cert.magnitude >= config.theta(delta)).then_some(cert))
}

/// How φ(h) is chosen from Φ(h).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum PhiSelection {
    /// Largest |Δ(f;h)^(r)|, ties to the lex-least r.
    Argmax,
    /// Uniform over Φ(h) from a seeded generator.
    Random { seed: u64 },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DerivativeSpectrumMap {
    pub n: usize,
    pub eta: f64,
    /// Φ(h) for every h, as sorted dual indices.
    pub entries: Vec<Vec<usize>>,
    /// φ(h), present exactly when Φ(h) is non-empty.
    pub phi: Vec<Option<usize>>,
}

impl DerivativeSpectrumMap {
    /// S = {h : Φ(h) ≠ ∅}.
    pub fn support(&self) -> Vec<usize> {
        self.phi.iter().enumerate().filter_map(|(h, p)| p.map(|_| h)).collect()
    }
}

/// Φ(h) = {r : |Δ(f;h)^(r)| ≥ η} for every h, with a selection φ.
pub fn derivative_spectrum(f: &DenseFunction, eta: f64, selection: PhiSelection) -> Result<DerivativeSpectrumMap> {
    if !(eta > 0.0) {
        return Err(QfError::InvalidParameter(format!("threshold must be positive, got {eta}")));
    }
    let cfg = *f.cfg();
    let mut rng = match selection {
        PhiSelection::Random { seed } => Some(Xoshiro256PlusPlus::seed_from_u64(seed)),
        PhiSelection::Argmax => None,
    };
    let mut entries = Vec::with_capacity(cfg.order());
    let mut phi = Vec::with_capacity(cfg.order());
    for h in 0..cfg.order() {
        let s = dft(&derivative_at(f, h));
        let set: Vec<usize> = (0..cfg.order()).filter(|&r| s[r].norm() >= eta).collect();
        let choice = match rng.as_mut() {
            _ if set.is_empty() => None,
            Some(g) => Some(set[(g.next_u64() % set.len() as u64) as usize]),
            None => argmax_lex(&cfg, set.iter().map(|&r| (r, s[r].norm()))).map(|p| p.0),
        };
        entries.push(set);
        phi.push(choice);
    }
    Ok(DerivativeSpectrumMap { n: cfg.dim(), eta, entries, phi })
}

/// #{(s_1,…,s_4) ∈ S⁴ : s_1+s_2 = s_3+s_4 and φ(s_1)+φ(s_2) = φ(s_3)+φ(s_4)}.
pub fn additive_quadruple_count(map: &DerivativeSpectrumMap) -> Result<u64> {
    let cfg = GroupConfig::new(map.n)?;
    let support = map.support();
    let phi = |h: usize| map.phi[h].expect("support element");
    let mut count = 0u64;
    for &s1 in &support {
        for &s2 in &support {
            let sum = cfg.add(s1, s2);
            let psum = cfg.add(phi(s1), phi(s2));
            for &s3 in &support {
                let s4 = cfg.sub(sum, s3);
                if let Some(p4) = map.phi[s4] {
                    if cfg.add(phi(s3), p4) == psum {
                        count += 1;
                    }
                }
            }
        }
    }
    Ok(count)
}

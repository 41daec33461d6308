//! Functions on G, their spectra, and the Fourier transform.
//!
//! Normalisation: the forward transform averages over G,
//! `f̂(r) = E_x f(x) ω^{r·x}`, and inversion sums over the dual group,
//! `f(x) = Σ_r f̂(r) ω^{-r·x}`. Function norms are averages; spectrum norms
//! use counting measure.

use std::sync::LazyLock;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::field::{GroupConfig, LinearForm};

/// Above this many points the per-axis passes run on the rayon pool.
const PAR_THRESHOLD: usize = 5usize.pow(6);

static ROOTS: LazyLock<[Complex64; 5]> = LazyLock::new(|| {
    std::array::from_fn(|k| Complex64::from_polar(1.0, std::f64::consts::TAU * k as f64 / 5.0))
});

/// ω^k for k mod 5.
#[inline]
pub fn omega_pow(k: u8) -> Complex64 {
    ROOTS[(k % 5) as usize]
}

pub fn roots() -> &'static [Complex64; 5] {
    &ROOTS
}

fn check_same(a: &GroupConfig, b: &GroupConfig) -> Result<()> {
    if a != b {
        return Err(QfError::ConfigMismatch { left: a.dim(), right: b.dim() });
    }
    Ok(())
}

fn check_len(cfg: &GroupConfig, len: usize) -> Result<()> {
    if len != cfg.order() {
        return Err(QfError::DimensionMismatch { expected: cfg.order(), got: len });
    }
    Ok(())
}

/// A complex-valued function on G stored in index order.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseFunction {
    cfg: GroupConfig,
    values: Vec<Complex64>,
}

impl DenseFunction {
    pub fn new(cfg: GroupConfig, values: Vec<Complex64>) -> Result<Self> {
        check_len(&cfg, values.len())?;
        Ok(DenseFunction { cfg, values })
    }

    pub fn from_real(cfg: GroupConfig, values: &[f64]) -> Result<Self> {
        DenseFunction::new(cfg, values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    pub fn from_fn(cfg: GroupConfig, f: impl Fn(usize) -> Complex64) -> Self {
        DenseFunction { cfg, values: (0..cfg.order()).map(f).collect() }
    }

    pub fn zeros(cfg: GroupConfig) -> Self {
        DenseFunction::constant(cfg, Complex64::new(0.0, 0.0))
    }

    pub fn constant(cfg: GroupConfig, c: Complex64) -> Self {
        DenseFunction { cfg, values: vec![c; cfg.order()] }
    }

    pub fn ones(cfg: GroupConfig) -> Self {
        DenseFunction::constant(cfg, Complex64::new(1.0, 0.0))
    }

    /// N·δ_0, the identity for convolution.
    pub fn point_mass(cfg: GroupConfig) -> Self {
        let mut f = DenseFunction::zeros(cfg);
        f.values[0] = Complex64::new(cfg.order() as f64, 0.0);
        f
    }

    pub fn indicator(set: &PointSet) -> Self {
        let mut f = DenseFunction::zeros(set.cfg);
        for &m in &set.members {
            f.values[m] = Complex64::new(1.0, 0.0);
        }
        f
    }

    pub fn cfg(&self) -> &GroupConfig {
        &self.cfg
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn values_mut(&mut self) -> &mut [Complex64] {
        &mut self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> Complex64 {
        self.values.iter().sum::<Complex64>() / self.values.len() as f64
    }

    /// (E |f|²)^{1/2}.
    pub fn norm2(&self) -> f64 {
        (self.values.iter().map(|v| v.norm_sqr()).sum::<f64>() / self.values.len() as f64).sqrt()
    }

    pub fn norm1(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).sum::<f64>() / self.values.len() as f64
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Whether max |f| ≤ 1 + tol.
    pub fn is_one_bounded(&self, tol: f64) -> bool {
        self.sup_norm() <= 1.0 + tol
    }

    /// E_x f(x) conj(g(x)).
    pub fn inner(&self, other: &DenseFunction) -> Result<Complex64> {
        check_same(&self.cfg, &other.cfg)?;
        let s: Complex64 = self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum();
        Ok(s / self.values.len() as f64)
    }

    pub fn conj(&self) -> DenseFunction {
        self.map(|v| v.conj())
    }

    pub fn map(&self, f: impl Fn(Complex64) -> Complex64) -> DenseFunction {
        DenseFunction { cfg: self.cfg, values: self.values.iter().map(|&v| f(v)).collect() }
    }

    pub fn zip_with(
        &self,
        other: &DenseFunction,
        f: impl Fn(Complex64, Complex64) -> Complex64,
    ) -> Result<DenseFunction> {
        check_same(&self.cfg, &other.cfg)?;
        let values = self.values.iter().zip(&other.values).map(|(&a, &b)| f(a, b)).collect();
        Ok(DenseFunction { cfg: self.cfg, values })
    }

    pub fn add(&self, other: &DenseFunction) -> Result<DenseFunction> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &DenseFunction) -> Result<DenseFunction> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn mul(&self, other: &DenseFunction) -> Result<DenseFunction> {
        self.zip_with(other, |a, b| a * b)
    }

    pub fn scale(&self, c: Complex64) -> DenseFunction {
        self.map(|v| v * c)
    }

    /// max_x |f(x) − g(x)|.
    pub fn max_diff(&self, other: &DenseFunction) -> Result<f64> {
        check_same(&self.cfg, &other.cfg)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }

    /// x ↦ f(x + h), with h given by index.
    pub fn translate(&self, h: usize) -> DenseFunction {
        let cfg = self.cfg;
        DenseFunction::from_fn(cfg, |x| self.values[cfg.add(x, h)])
    }

    /// x ↦ f(−x).
    pub fn reflect(&self) -> DenseFunction {
        let cfg = self.cfg;
        DenseFunction::from_fn(cfg, |x| self.values[cfg.neg(x)])
    }

    /// Whether every value is real up to `tol`.
    pub fn is_real(&self, tol: f64) -> bool {
        self.values.iter().all(|v| v.im.abs() <= tol)
    }
}

impl std::ops::Index<usize> for DenseFunction {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

#[derive(Serialize, Deserialize)]
struct DenseFunctionRepr {
    n: usize,
    values: Vec<[f64; 2]>,
}

impl Serialize for DenseFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DenseFunctionRepr { n: self.cfg.dim(), values: self.values.iter().map(|v| [v.re, v.im]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for DenseFunction {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DenseFunctionRepr::deserialize(d)?;
        let cfg = GroupConfig::new(repr.n).map_err(serde::de::Error::custom)?;
        let values = repr.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        DenseFunction::new(cfg, values).map_err(serde::de::Error::custom)
    }
}

/// A function on the dual group, indexed like G.
#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    cfg: GroupConfig,
    values: Vec<Complex64>,
}

impl Spectrum {
    pub fn new(cfg: GroupConfig, values: Vec<Complex64>) -> Result<Self> {
        check_len(&cfg, values.len())?;
        Ok(Spectrum { cfg, values })
    }

    /// δ_r, the spectrum of the character ω^{-r·x}.
    pub fn delta(cfg: GroupConfig, r: usize) -> Self {
        let mut values = vec![Complex64::new(0.0, 0.0); cfg.order()];
        values[r] = Complex64::new(1.0, 0.0);
        Spectrum { cfg, values }
    }

    pub fn cfg(&self) -> &GroupConfig {
        &self.cfg
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    pub fn into_values(self) -> Vec<Complex64> {
        self.values
    }

    /// (Σ_r |s(r)|²)^{1/2}.
    pub fn norm2(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Σ_r |s(r)|^4, the fourth power of the ℓ⁴ norm.
    pub fn norm4_pow4(&self) -> f64 {
        self.values.iter().map(|v| v.norm_sqr().powi(2)).sum()
    }

    /// (Σ_r |s(r)|^p)^{1/p}.
    pub fn norm_p(&self, p: f64) -> f64 {
        self.values.iter().map(|v| v.norm().powf(p)).sum::<f64>().powf(1.0 / p)
    }

    pub fn sup_norm(&self) -> f64 {
        self.values.iter().map(|v| v.norm()).fold(0.0, f64::max)
    }

    /// Σ_r s(r) conj(t(r)).
    pub fn inner(&self, other: &Spectrum) -> Result<Complex64> {
        check_same(&self.cfg, &other.cfg)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| a * b.conj()).sum())
    }

    pub fn mul(&self, other: &Spectrum) -> Result<Spectrum> {
        check_same(&self.cfg, &other.cfg)?;
        let values = self.values.iter().zip(&other.values).map(|(a, b)| a * b).collect();
        Ok(Spectrum { cfg: self.cfg, values })
    }

    pub fn max_diff(&self, other: &Spectrum) -> Result<f64> {
        check_same(&self.cfg, &other.cfg)?;
        Ok(self.values.iter().zip(&other.values).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max))
    }
}

impl std::ops::Index<usize> for Spectrum {
    type Output = Complex64;
    fn index(&self, i: usize) -> &Complex64 {
        &self.values[i]
    }
}

impl Serialize for Spectrum {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        DenseFunctionRepr { n: self.cfg.dim(), values: self.values.iter().map(|v| [v.re, v.im]).collect() }
            .serialize(s)
    }
}

impl<'de> Deserialize<'de> for Spectrum {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = DenseFunctionRepr::deserialize(d)?;
        let cfg = GroupConfig::new(repr.n).map_err(serde::de::Error::custom)?;
        let values = repr.values.iter().map(|&[re, im]| Complex64::new(re, im)).collect();
        Spectrum::new(cfg, values).map_err(serde::de::Error::custom)
    }
}

/// A subset of G, stored as sorted, deduplicated indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PointSet {
    cfg: GroupConfig,
    members: Vec<usize>,
}

impl PointSet {
    pub fn new(cfg: GroupConfig, mut members: Vec<usize>) -> Result<Self> {
        if let Some(&bad) = members.iter().find(|&&m| m >= cfg.order()) {
            return Err(QfError::IndexOutOfRange { index: bad, order: cfg.order() });
        }
        members.sort_unstable();
        members.dedup();
        Ok(PointSet { cfg, members })
    }

    pub fn empty(cfg: GroupConfig) -> Self {
        PointSet { cfg, members: Vec::new() }
    }

    pub fn full(cfg: GroupConfig) -> Self {
        PointSet { cfg, members: (0..cfg.order()).collect() }
    }

    pub fn from_predicate(cfg: GroupConfig, pred: impl Fn(usize) -> bool) -> Self {
        PointSet { cfg, members: (0..cfg.order()).filter(|&i| pred(i)).collect() }
    }

    pub fn cfg(&self) -> &GroupConfig {
        &self.cfg
    }

    pub fn members(&self) -> &[usize] {
        &self.members
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn contains(&self, i: usize) -> bool {
        self.members.binary_search(&i).is_ok()
    }

    /// |A| / N.
    pub fn density(&self) -> f64 {
        self.members.len() as f64 / self.cfg.order() as f64
    }

    /// Membership mask in index order.
    pub fn mask(&self) -> Vec<bool> {
        let mut m = vec![false; self.cfg.order()];
        for &i in &self.members {
            m[i] = true;
        }
        m
    }
}

#[derive(Serialize, Deserialize)]
struct PointSetRepr {
    n: usize,
    members: Vec<usize>,
}

impl Serialize for PointSet {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        PointSetRepr { n: self.cfg.dim(), members: self.members.clone() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PointSet {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let repr = PointSetRepr::deserialize(d)?;
        let cfg = GroupConfig::new(repr.n).map_err(serde::de::Error::custom)?;
        PointSet::new(cfg, repr.members).map_err(serde::de::Error::custom)
    }
}

/// One 5-point pass along `axis`; `sign` is +1 for the forward kernel.
fn axis_pass(values: &mut [Complex64], stride: usize, sign: i8) {
    let block = 5 * stride;
    let kernel = |chunk: &mut [Complex64]| {
        let mut buf = [Complex64::new(0.0, 0.0); 5];
        for lo in 0..stride {
            for (k, b) in buf.iter_mut().enumerate() {
                *b = chunk[lo + k * stride];
            }
            for j in 0..5 {
                let mut acc = Complex64::new(0.0, 0.0);
                for (k, b) in buf.iter().enumerate() {
                    let e = (j * k) % 5;
                    let e = if sign > 0 { e } else { (5 - e) % 5 };
                    acc += b * ROOTS[e];
                }
                chunk[lo + j * stride] = acc;
            }
        }
    };
    if values.len() >= PAR_THRESHOLD {
        values.par_chunks_mut(block).for_each(kernel);
    } else {
        values.chunks_mut(block).for_each(kernel);
    }
}

fn transform(cfg: &GroupConfig, mut values: Vec<Complex64>, sign: i8) -> Vec<Complex64> {
    for axis in 0..cfg.dim() {
        axis_pass(&mut values, cfg.stride(axis), sign);
    }
    values
}

/// f̂(r) = N^{-1} Σ_x f(x) ω^{r·x}, by n per-axis 5-point passes.
pub fn dft(f: &DenseFunction) -> Spectrum {
    let scale = 1.0 / f.cfg.order() as f64;
    let mut values = transform(&f.cfg, f.values.clone(), 1);
    values.iter_mut().for_each(|v| *v *= scale);
    Spectrum { cfg: f.cfg, values }
}

/// The O(N²) double sum, kept as a reference.
pub fn dft_direct(f: &DenseFunction) -> Spectrum {
    let cfg = f.cfg;
    let scale = 1.0 / cfg.order() as f64;
    let values = (0..cfg.order())
        .map(|r| {
            let s: Complex64 =
                f.values.iter().enumerate().map(|(x, v)| v * omega_pow(cfg.dot(r, x))).sum();
            s * scale
        })
        .collect();
    Spectrum { cfg, values }
}

/// f(x) = Σ_r s(r) ω^{-r·x}.
pub fn idft(s: &Spectrum) -> DenseFunction {
    DenseFunction { cfg: s.cfg, values: transform(&s.cfg, s.values.clone(), -1) }
}

/// (f ∗ g)(x) = E_y f(y) g(x − y), computed as the inverse transform of f̂ĝ.
pub fn convolve(f: &DenseFunction, g: &DenseFunction) -> Result<DenseFunction> {
    check_same(&f.cfg, &g.cfg)?;
    Ok(idft(&dft(f).mul(&dft(g))?))
}

/// Indices r with |f̂(r)| ≥ η, in increasing order.
pub fn large_spectrum_indices(f: &DenseFunction, eta: f64) -> Result<Vec<usize>> {
    if !(eta > 0.0) {
        return Err(QfError::InvalidParameter(format!("threshold must be positive, got {eta}")));
    }
    let spec = dft(f);
    Ok((0..spec.values.len()).filter(|&r| spec.values[r].norm() >= eta).collect())
}

/// Spec_η(f) = {r : |f̂(r)| ≥ η}.
pub fn large_spectrum(f: &DenseFunction, eta: f64) -> Result<Vec<LinearForm>> {
    let cfg = f.cfg;
    Ok(large_spectrum_indices(f, eta)?
        .into_iter()
        .map(|r| LinearForm::new(cfg.digits(r)))
        .collect())
}

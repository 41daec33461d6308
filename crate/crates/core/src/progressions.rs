//! Progression-counting operators Λ_3, Λ_4 and their companions.
//!
//! All averages run over every pair (x, d), so trivial progressions with
//! d = 0 are included.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::field::GroupConfig;
use crate::fourier::{dft, DenseFunction, PointSet};
use crate::gowers::uk_norm;

/// Largest n for the O(N²) direct operators.
pub const DIRECT_MAX_DIM: usize = 5;

/// Largest n for the integer census.
pub const CENSUS_MAX_DIM: usize = 4;

/// Largest n for the balanced-function expansion.
pub const EXPANSION_MAX_DIM: usize = 3;

const BOUND_TOL: f64 = 1e-9;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ApCountReport {
    pub k: usize,
    pub value: Complex64,
    pub trivial_count_included: bool,
}

fn same_cfg(fs: &[&DenseFunction]) -> Result<GroupConfig> {
    let cfg = *fs[0].cfg();
    for f in fs {
        if *f.cfg() != cfg {
            return Err(QfError::ConfigMismatch { left: cfg.dim(), right: f.cfg().dim() });
        }
    }
    if cfg.dim() > DIRECT_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for direct progression sums", limit: DIRECT_MAX_DIM, got: cfg.dim() });
    }
    Ok(cfg)
}

/// E_{x,d} w(d) Π_i f_i(x + i·d).
fn progression_average(fs: &[&DenseFunction], weight: Option<&DenseFunction>) -> Result<Complex64> {
    let cfg = same_cfg(fs)?;
    if let Some(w) = weight {
        same_cfg(&[fs[0], w])?;
    }
    let n_pts = cfg.order();
    let vals: Vec<&[Complex64]> = fs.iter().map(|f| f.values()).collect();
    let per_x: Vec<Complex64> = (0..n_pts)
        .into_par_iter()
        .map(|x| {
            let mut acc = Complex64::new(0.0, 0.0);
            for d in 0..n_pts {
                let wd = weight.map_or(Complex64::new(1.0, 0.0), |w| w[d]);
                if wd == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let mut p = vals[0][x] * wd;
                let mut y = x;
                for v in &vals[1..] {
                    y = cfg.add(y, d);
                    p *= v[y];
                }
                acc += p;
            }
            acc
        })
        .collect();
    let total: Complex64 = per_x.iter().sum();
    Ok(total / (n_pts as f64 * n_pts as f64))
}

/// Λ_3(f_1,f_2,f_3) = E_{x,d} f_1(x) f_2(x+d) f_3(x+2d).
pub fn lambda3(f1: &DenseFunction, f2: &DenseFunction, f3: &DenseFunction) -> Result<Complex64> {
    progression_average(&[f1, f2, f3], None)
}

/// Λ_3 as Σ_r f̂_1(r) f̂_2(−2r) f̂_3(r), with −2r = 3r.
pub fn lambda3_spectral(f1: &DenseFunction, f2: &DenseFunction, f3: &DenseFunction) -> Result<Complex64> {
    let cfg = *f1.cfg();
    for f in [f2, f3] {
        if *f.cfg() != cfg {
            return Err(QfError::ConfigMismatch { left: cfg.dim(), right: f.cfg().dim() });
        }
    }
    let (s1, s2, s3) = (dft(f1), dft(f2), dft(f3));
    Ok((0..cfg.order()).map(|r| s1[r] * s2[cfg.scale(3, r)] * s3[r]).sum())
}

/// Λ_4(f_1,…,f_4) = E_{x,d} f_1(x) f_2(x+d) f_3(x+2d) f_4(x+3d).
pub fn lambda4(f1: &DenseFunction, f2: &DenseFunction, f3: &DenseFunction, f4: &DenseFunction) -> Result<Complex64> {
    progression_average(&[f1, f2, f3, f4], None)
}

/// E_{x,d} f_1(x) f_2(x+d) f_3(x+2d) f_4(x+3d) w(d).
///
/// `w` is meant to be a probability density (w ≥ 0, E w = 1); other weights
/// are used as given after a warning.
pub fn lambda4_weighted(fs: [&DenseFunction; 4], w: &DenseFunction) -> Result<Complex64> {
    let mean = w.mean();
    let negative = w.values().iter().any(|v| v.re < -1e-12 || v.im.abs() > 1e-12);
    if (mean - Complex64::new(1.0, 0.0)).norm() > 1e-9 || negative {
        log::warn!("weight is not a probability density (mean {mean}); using it as given");
    }
    progression_average(&fs, Some(w))
}

/// f_A = 1_A − α.
pub fn balanced(set: &PointSet) -> DenseFunction {
    let alpha = set.density();
    DenseFunction::indicator(set).map(|v| v - alpha)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionTerm {
    /// `true` where the balanced function f_{A_i} sits, `false` where α_i does.
    pub balanced: Vec<bool>,
    pub value: Complex64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExpansionReport {
    pub k: usize,
    pub densities: Vec<f64>,
    pub terms: Vec<ExpansionTerm>,
    pub sum: Complex64,
    pub direct: Complex64,
    pub error: f64,
}

fn expansion(sets: &[&PointSet]) -> Result<ExpansionReport> {
    let k = sets.len();
    let cfg = *sets[0].cfg();
    for s in sets {
        if *s.cfg() != cfg {
            return Err(QfError::ConfigMismatch { left: cfg.dim(), right: s.cfg().dim() });
        }
    }
    if cfg.dim() > EXPANSION_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for the balanced expansion", limit: EXPANSION_MAX_DIM, got: cfg.dim() });
    }
    let densities: Vec<f64> = sets.iter().map(|s| s.density()).collect();
    let bal: Vec<DenseFunction> = sets.iter().map(|s| balanced(s)).collect();
    let consts: Vec<DenseFunction> =
        densities.iter().map(|&a| DenseFunction::constant(cfg, Complex64::new(a, 0.0))).collect();
    let mut terms = Vec::with_capacity(1 << k);
    for mask in 0..(1usize << k) {
        let pattern: Vec<bool> = (0..k).map(|i| mask >> i & 1 == 1).collect();
        let args: Vec<&DenseFunction> =
            pattern.iter().enumerate().map(|(i, &b)| if b { &bal[i] } else { &consts[i] }).collect();
        let value = progression_average(&args, None)?;
        terms.push(ExpansionTerm { balanced: pattern, value });
    }
    let sum: Complex64 = terms.iter().map(|t| t.value).sum();
    let inds: Vec<DenseFunction> = sets.iter().map(|s| DenseFunction::indicator(s)).collect();
    let refs: Vec<&DenseFunction> = inds.iter().collect();
    let direct = progression_average(&refs, None)?;
    let error = (sum - direct).norm();
    Ok(ExpansionReport { k, densities, terms, sum, direct, error })
}

/// The 16 terms of Λ_4(1_{A_1},…,1_{A_4}) after writing 1_{A_i} = α_i + f_{A_i}.
/// The first term is α_1α_2α_3α_4.
pub fn balanced_expansion_check(sets: [&PointSet; 4]) -> Result<ExpansionReport> {
    let report = expansion(&sets)?;
    if report.error > 1e-9 {
        return Err(QfError::InvariantViolated(format!("16-term expansion misses Λ_4 by {:e}", report.error)));
    }
    Ok(report)
}

/// The 8-term analogue for Λ_3.
pub fn balanced_expansion_check3(sets: [&PointSet; 3]) -> Result<ExpansionReport> {
    let report = expansion(&sets)?;
    if report.error > 1e-9 {
        return Err(QfError::InvariantViolated(format!("8-term expansion misses Λ_3 by {:e}", report.error)));
    }
    Ok(report)
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GvnReport {
    pub lambda4_abs: f64,
    pub min_u3: f64,
    /// min_i ∥f_i∥_{U^3} − |Λ_4|.
    pub slack4: f64,
    pub lambda3_abs: f64,
    pub min_u2: f64,
    /// min_{i≤3} ∥f_i∥_{U^2} − |Λ_3(f_1,f_2,f_3)|.
    pub slack3: f64,
    pub holds: bool,
}

/// Measures |Λ_4| ≤ min ∥f_i∥_{U^3} and |Λ_3| ≤ min ∥f_i∥_{U^2} on 1-bounded inputs.
pub fn gvn_check(fs: [&DenseFunction; 4]) -> Result<GvnReport> {
    for f in fs {
        let m = f.sup_norm();
        if m > 1.0 + BOUND_TOL {
            return Err(QfError::Unbounded { max_abs: m });
        }
    }
    let lambda4_abs = lambda4(fs[0], fs[1], fs[2], fs[3])?.norm();
    let min_u3 = fs.iter().map(|f| uk_norm(f, 3)).collect::<Result<Vec<_>>>()?.into_iter().fold(f64::INFINITY, f64::min);
    let lambda3_abs = lambda3(fs[0], fs[1], fs[2])?.norm();
    let min_u2 = fs[..3].iter().map(|f| uk_norm(f, 2)).collect::<Result<Vec<_>>>()?.into_iter().fold(f64::INFINITY, f64::min);
    let slack4 = min_u3 - lambda4_abs;
    let slack3 = min_u2 - lambda3_abs;
    Ok(GvnReport {
        lambda4_abs,
        min_u3,
        slack4,
        lambda3_abs,
        min_u2,
        slack3,
        holds: slack4 >= -BOUND_TOL && slack3 >= -BOUND_TOL,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApCensus {
    pub k: usize,
    /// Pairs (x, d) including d = 0.
    pub with_trivial: u64,
    pub without_trivial: u64,
}

/// Exact number of k-term progressions x, x+d, … inside A.
pub fn ap_census(set: &PointSet, k: usize) -> Result<ApCensus> {
    if !(3..=4).contains(&k) {
        return Err(QfError::InvalidParameter(format!("progression length must be 3 or 4, got {k}")));
    }
    let cfg = *set.cfg();
    if cfg.dim() > CENSUS_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for the progression census", limit: CENSUS_MAX_DIM, got: cfg.dim() });
    }
    let mask = set.mask();
    let mut with_trivial = 0u64;
    for &x in set.members() {
        for d in 0..cfg.order() {
            let mut y = x;
            let mut inside = true;
            for _ in 1..k {
                y = cfg.add(y, d);
                if !mask[y] {
                    inside = false;
                    break;
                }
            }
            with_trivial += inside as u64;
        }
    }
    Ok(ApCensus { k, with_trivial, without_trivial: with_trivial - set.len() as u64 })
}

/// Number of x with x, x+d, x+2d, x+3d all in A, for one fixed d.
pub fn ap4_count_for_difference(mask: &[bool], cfg: &GroupConfig, d: usize) -> u64 {
    (0..cfg.order())
        .filter(|&x| {
            let mut y = x;
            (0..4).all(|i| {
                if i > 0 {
                    y = cfg.add(y, d);
                }
                mask[y]
            })
        })
        .count() as u64
}

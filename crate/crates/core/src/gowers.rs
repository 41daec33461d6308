//! Multiplicative derivatives, Gowers U^k norms and inner products.
//!
//! Cube vertices are bitmasks `v` with bit `i` attached to `h_{i+1}`; the
//! function at vertex `v` is conjugated when `v` has odd weight.

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::field::GroupPoint;
use crate::fourier::{dft, idft, DenseFunction, Spectrum};

/// Default cap on inner-loop evaluations for definitional sums.
pub const DEFAULT_BUDGET: f64 = 1e9;

const IMAG_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum GowersMethod {
    Direct,
    Fast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GowersReport {
    pub k: usize,
    pub value: f64,
    pub method: GowersMethod,
    /// Inner-loop evaluations performed.
    pub cost: f64,
}

fn check_k(k: usize) -> Result<()> {
    if !(2..=4).contains(&k) {
        return Err(QfError::InvalidParameter(format!("Gowers order k must be 2, 3 or 4, got {k}")));
    }
    Ok(())
}

fn check_budget(cost: f64, budget: f64) -> Result<()> {
    if cost > budget {
        return Err(QfError::BudgetExceeded { cost, budget });
    }
    Ok(())
}

fn direct_cost(n_points: usize, k: usize) -> f64 {
    (n_points as f64).powi(k as i32 + 1)
}

/// Δ(f;h)(x) = f(x)·conj(f(x − h)), with h given by index.
pub fn derivative_at(f: &DenseFunction, h: usize) -> DenseFunction {
    let cfg = *f.cfg();
    let v = f.values();
    DenseFunction::from_fn(cfg, |x| v[x] * v[cfg.sub(x, h)].conj())
}

/// Δ(f;h)(x) = f(x)·conj(f(x − h)).
pub fn derivative(f: &DenseFunction, h: &GroupPoint) -> Result<DenseFunction> {
    let h = f.cfg().point_to_index(h)?;
    Ok(derivative_at(f, h))
}

/// Real part of a normalised cube average after checking the imaginary part.
fn real_average(avg: Complex64, what: &str) -> Result<f64> {
    if avg.im.abs() > IMAG_TOL * avg.norm().max(1.0) {
        return Err(QfError::InvariantViolated(format!(
            "{what} should be real, got imaginary part {:e}",
            avg.im
        )));
    }
    Ok(avg.re)
}

fn root(power_sum: f64, k: usize) -> f64 {
    power_sum.max(0.0).powf(1.0 / (1u32 << k) as f64)
}

/// ⟨f_v⟩ by the definitional average over (x, h_1, …, h_k).
pub fn gowers_inner_product_direct(fs: &[DenseFunction], k: usize, budget: f64) -> Result<Complex64> {
    check_k(k)?;
    check_tuple(fs, k)?;
    let cfg = *fs[0].cfg();
    let n_pts = cfg.order();
    check_budget(direct_cost(n_pts, k), budget)?;
    let verts = 1usize << k;
    let vals: Vec<Vec<Complex64>> = (0..verts)
        .map(|v| {
            let odd = v.count_ones() % 2 == 1;
            fs[v].values().iter().map(|z| if odd { z.conj() } else { *z }).collect()
        })
        .collect();

    let per_x: Vec<Complex64> = (0..n_pts)
        .into_par_iter()
        .map(|x| {
            let mut pts = vec![0usize; verts];
            pts[0] = x;
            cube_sum(&cfg, &vals, &mut pts, 0, k)
        })
        .collect();
    let total: Complex64 = per_x.iter().sum();
    Ok(total / direct_cost(n_pts, k))
}

/// Sums over h_{level+1}, …, h_k, filling vertex points as it goes.
fn cube_sum(
    cfg: &crate::field::GroupConfig,
    vals: &[Vec<Complex64>],
    pts: &mut Vec<usize>,
    level: usize,
    k: usize,
) -> Complex64 {
    let filled = 1usize << level;
    if level == k {
        return pts.iter().enumerate().map(|(v, &p)| vals[v][p]).product();
    }
    let mut acc = Complex64::new(0.0, 0.0);
    for h in 0..cfg.order() {
        for v in 0..filled {
            pts[v + filled] = cfg.add(pts[v], h);
        }
        acc += cube_sum(cfg, vals, pts, level + 1, k);
    }
    acc
}

fn check_tuple(fs: &[DenseFunction], k: usize) -> Result<()> {
    if fs.len() != 1 << k {
        return Err(QfError::DimensionMismatch { expected: 1 << k, got: fs.len() });
    }
    let cfg = fs[0].cfg();
    for f in fs {
        if f.cfg() != cfg {
            return Err(QfError::ConfigMismatch { left: cfg.dim(), right: f.cfg().dim() });
        }
    }
    Ok(())
}

/// ⟨f_v⟩ by peeling off h_k and finishing with the U^2 box formula
/// Σ_r f̂_0 conj(f̂_1) conj(f̂_2) f̂_3.
pub fn gowers_inner_product_box(fs: &[DenseFunction], k: usize) -> Result<Complex64> {
    check_k(k)?;
    check_tuple(fs, k)?;
    Ok(box_recursive(fs, k))
}

fn box_recursive(fs: &[DenseFunction], k: usize) -> Complex64 {
    if k == 2 {
        let s: Vec<Spectrum> = fs.iter().map(dft).collect();
        return (0..s[0].values().len())
            .map(|r| s[0][r] * s[1][r].conj() * s[2][r].conj() * s[3][r])
            .sum();
    }
    let cfg = *fs[0].cfg();
    let half = 1usize << (k - 1);
    let per_h: Vec<Complex64> = (0..cfg.order())
        .into_par_iter()
        .map(|h| {
            let gs: Vec<DenseFunction> = (0..half)
                .map(|v| {
                    let (a, b) = (fs[v].values(), fs[v + half].values());
                    DenseFunction::from_fn(cfg, |y| a[y] * b[cfg.add(y, h)].conj())
                })
                .collect();
            box_recursive(&gs, k - 1)
        })
        .collect();
    per_h.iter().sum::<Complex64>() / cfg.order() as f64
}

/// The Gowers inner product: direct when the budget allows, otherwise the
/// box recursion (k ≤ 3).
pub fn gowers_inner_product(fs: &[DenseFunction], k: usize, budget: f64) -> Result<Complex64> {
    check_k(k)?;
    check_tuple(fs, k)?;
    let cost = direct_cost(fs[0].cfg().order(), k);
    if cost <= budget {
        gowers_inner_product_direct(fs, k, budget)
    } else if k <= 3 {
        gowers_inner_product_box(fs, k)
    } else {
        Err(QfError::BudgetExceeded { cost, budget })
    }
}

/// ∥f∥_{U^k} from the definitional 2^k-fold average.
pub fn gowers_norm_direct(f: &DenseFunction, k: usize, budget: f64) -> Result<GowersReport> {
    check_k(k)?;
    let fs = vec![f.clone(); 1 << k];
    let avg = gowers_inner_product_direct(&fs, k, budget)?;
    let power = real_average(avg, "U^k power sum")?;
    Ok(GowersReport {
        k,
        value: root(power, k),
        method: GowersMethod::Direct,
        cost: direct_cost(f.cfg().order(), k),
    })
}

/// ∥f∥_{U^k}^{2^k} through ∥f∥_{U^2}^4 = Σ|f̂|^4 and
/// ∥f∥_{U^k}^{2^k} = E_h ∥Δ(f;h)∥_{U^{k-1}}^{2^{k-1}}.
pub fn gowers_power_fast(f: &DenseFunction, k: usize) -> Result<f64> {
    check_k(k)?;
    Ok(power_fast(f, k))
}

fn power_fast(f: &DenseFunction, k: usize) -> f64 {
    if k == 2 {
        return dft(f).norm4_pow4();
    }
    let n_pts = f.cfg().order();
    let per_h: Vec<f64> =
        (0..n_pts).into_par_iter().map(|h| power_fast(&derivative_at(f, h), k - 1)).collect();
    per_h.iter().sum::<f64>() / n_pts as f64
}

fn fast_cost(n_pts: usize, n: usize, k: usize) -> f64 {
    let base = (n_pts * n + n_pts) as f64;
    if k == 2 {
        base
    } else {
        n_pts as f64 * (n_pts as f64 + fast_cost(n_pts, n, k - 1))
    }
}

/// ∥f∥_{U^k} by the recursive derivative formula.
pub fn gowers_norm_fast(f: &DenseFunction, k: usize) -> Result<GowersReport> {
    let power = gowers_power_fast(f, k)?;
    Ok(GowersReport {
        k,
        value: root(power, k),
        method: GowersMethod::Fast,
        cost: fast_cost(f.cfg().order(), f.cfg().dim(), k),
    })
}

/// Shorthand for the fast U^k value.
pub fn uk_norm(f: &DenseFunction, k: usize) -> Result<f64> {
    Ok(gowers_norm_fast(f, k)?.value)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamorodnitskySides {
    pub lhs: f64,
    pub rhs: f64,
}

/// Largest dimension for which both sides are evaluated.
pub const SAMORODNITSKY_MAX_DIM: usize = 2;

/// Both sides of Samorodnitsky's identity (stated for real f).
///
/// rhs = E_h Σ_r |Δ(f;h)^(r)|^8; lhs averages E_x g_1 g_2 conj(g_3 g_4) over
/// h_1 + h_2 = h_3 + h_4, where g_h is the inverse transform of |Δ(f;h)^|².
pub fn samorodnitsky_sides(f: &DenseFunction) -> Result<SamorodnitskySides> {
    let cfg = *f.cfg();
    if cfg.dim() > SAMORODNITSKY_MAX_DIM {
        return Err(QfError::TooLarge {
            what: "dimension for Samorodnitsky's identity",
            limit: SAMORODNITSKY_MAX_DIM,
            got: cfg.dim(),
        });
    }
    let n_pts = cfg.order();
    let spectra: Vec<Spectrum> = (0..n_pts).map(|h| dft(&derivative_at(f, h))).collect();
    let rhs = spectra
        .iter()
        .map(|s| s.values().iter().map(|v| v.norm_sqr().powi(4)).sum::<f64>())
        .sum::<f64>()
        / n_pts as f64;

    let gs: Vec<Vec<Complex64>> = spectra
        .iter()
        .map(|s| {
            let sq: Vec<Complex64> = s.values().iter().map(|v| Complex64::new(v.norm_sqr(), 0.0)).collect();
            idft(&Spectrum::new(cfg, sq).expect("length preserved")).into_values()
        })
        .collect();
    let per_h1: Vec<Complex64> = (0..n_pts)
        .into_par_iter()
        .map(|h1| {
            let mut acc = Complex64::new(0.0, 0.0);
            for h2 in 0..n_pts {
                let s12 = cfg.add(h1, h2);
                for h3 in 0..n_pts {
                    let h4 = cfg.sub(s12, h3);
                    let (g1, g2, g3, g4) = (&gs[h1], &gs[h2], &gs[h3], &gs[h4]);
                    for x in 0..n_pts {
                        acc += g1[x] * g2[x] * (g3[x] * g4[x]).conj();
                    }
                }
            }
            acc
        })
        .collect();
    let total: Complex64 = per_h1.iter().sum();
    let lhs = real_average(total / (n_pts as f64).powi(4), "Samorodnitsky left side")?;
    Ok(SamorodnitskySides { lhs, rhs })
}

/// The common value of both sides as a normalised sum over the 16-point
/// configurations c_1..c_8, c'_i = c_i − h with c_1+…+c_4 = c_5+…+c_8.
/// Costs N^8, so only n ≤ 1 is accepted.
pub fn samorodnitsky_configuration_sum(f: &DenseFunction) -> Result<f64> {
    let cfg = *f.cfg();
    if cfg.dim() > 1 {
        return Err(QfError::TooLarge { what: "dimension for the configuration sum", limit: 1, got: cfg.dim() });
    }
    let n_pts = cfg.order();
    let mut total = Complex64::new(0.0, 0.0);
    for h in 0..n_pts {
        let d = derivative_at(f, h);
        let d = d.values();
        for c1 in 0..n_pts {
            for c2 in 0..n_pts {
                let p12 = d[c1] * d[c2];
                let s12 = cfg.add(c1, c2);
                for c3 in 0..n_pts {
                    let s123 = cfg.add(s12, c3);
                    let p123 = p12 * d[c3];
                    for c4 in 0..n_pts {
                        let s = cfg.add(s123, c4);
                        let p = p123 * d[c4];
                        for c5 in 0..n_pts {
                            for c6 in 0..n_pts {
                                let q56 = (d[c5] * d[c6]).conj();
                                let s56 = cfg.add(c5, c6);
                                for c7 in 0..n_pts {
                                    let c8 = cfg.sub(s, cfg.add(s56, c7));
                                    total += p * q56 * (d[c7] * d[c8]).conj();
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    real_average(total / (n_pts as f64).powi(8), "configuration sum")
}

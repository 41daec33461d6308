//! The invariant suite behind `qf verify`: seeded randomized checks of every
//! identity and inequality the library relies on, one table row each.

use std::fmt::Write as _;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::decompose::{
    bhk_experiment, configspace_count_inequality, increment_floor, linear_kvn, quadratic_kvn, regularity,
    regularity_high_rank, BhkOptions, Growth, GrowthFn, MIN_SCHEDULE_DELTA,
};
use crate::error::{QfError, Result};
use crate::factors::{
    ap4_atom_census, ap4_atom_probability, atom_statistics, conditional_expectation, factor_rank, join,
    rank_reduce, refines, QuadraticFactor,
};
use crate::field::{mat_rank, null_space, span_rank, GroupConfig, LinearForm, Matrix, F5};
use crate::fourier::{convolve, dft, dft_direct, idft, DenseFunction};
use crate::gowers::{
    derivative_at, gowers_inner_product, gowers_norm_direct, gowers_norm_fast, samorodnitsky_configuration_sum,
    samorodnitsky_sides, uk_norm,
};
use crate::harness::report::to_json_string;
use crate::harness::rng::{
    random_bounded, random_complex, random_factor, random_linear_form, random_phase, random_real, random_set_with,
    random_balanced, SeededRng,
};
use crate::progressions::{balanced_expansion_check, gvn_check, lambda3, lambda3_spectral, lambda4};
use crate::quadratic::{
    best_quadratic_correlation, inverse_oracle, quad_correlation, quad_phase_fn, OracleConfig, QuadraticPhase,
};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckRow {
    pub module: String,
    pub invariant: String,
    pub anchor: String,
    pub trials: usize,
    pub failures: usize,
    /// Largest violation measure seen; ≤ the tolerance on passing rows.
    pub worst: f64,
    pub passed: bool,
    pub error: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerifyTable {
    pub n: usize,
    pub seed: u64,
    pub trials: usize,
    pub rows: Vec<CheckRow>,
    pub passed: bool,
}

impl VerifyTable {
    pub fn render(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "{:<6} {:<12} {:<56} {:<34} {:>6} {:>5} {:>10}", "status", "module", "invariant", "anchor", "trials", "fail", "worst");
        for r in &self.rows {
            let _ = writeln!(
                out,
                "{:<6} {:<12} {:<56} {:<34} {:>6} {:>5} {:>10.3e}",
                if r.passed { "PASS" } else { "FAIL" },
                r.module,
                r.invariant,
                r.anchor,
                r.trials,
                r.failures,
                r.worst
            );
            if let Some(e) = &r.error {
                let _ = writeln!(out, "       error: {e}");
            }
        }
        let failed = self.rows.iter().filter(|r| !r.passed).count();
        let _ = writeln!(out, "{} checks, {} failed", self.rows.len(), failed);
        out
    }
}

struct Outcome {
    ok: bool,
    metric: f64,
}

fn within(metric: f64, tol: f64) -> Result<Outcome> {
    Ok(Outcome { ok: metric <= tol, metric })
}

fn holds(ok: bool) -> Result<Outcome> {
    Ok(Outcome { ok, metric: if ok { 0.0 } else { 1.0 } })
}

struct Suite {
    seed: u64,
    rows: Vec<CheckRow>,
}

impl Suite {
    fn run(
        &mut self,
        module: &str,
        invariant: &str,
        anchor: &str,
        trials: usize,
        mut body: impl FnMut(&mut SeededRng, usize) -> Result<Outcome>,
    ) {
        let salt = (self.rows.len() as u64 + 1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
        let mut rng = SeededRng::new(self.seed ^ salt);
        let mut failures = 0;
        let mut worst = 0.0f64;
        let mut error = None;
        for t in 0..trials {
            match body(&mut rng, t) {
                Ok(o) => {
                    worst = worst.max(o.metric);
                    if !o.ok {
                        failures += 1;
                    }
                }
                Err(e) => {
                    failures += 1;
                    error.get_or_insert_with(|| e.to_string());
                }
            }
        }
        log::debug!("{module}: {invariant}: {failures}/{trials} failures");
        self.rows.push(CheckRow {
            module: module.to_string(),
            invariant: invariant.to_string(),
            anchor: anchor.to_string(),
            trials,
            failures,
            worst,
            passed: failures == 0,
            error,
        });
    }
}

fn cfg(n: usize) -> GroupConfig {
    GroupConfig::new(n).expect("small dimension")
}

/// Cycles 1..=max so every dimension up to `max` gets exercised.
fn dim_for(t: usize, max: usize) -> usize {
    1 + t % max.max(1)
}

fn random_matrix(rows: usize, cols: usize, rng: &mut SeededRng) -> Matrix {
    let entries: Vec<Vec<F5>> = (0..rows).map(|_| (0..cols).map(|_| rng.f5()).collect()).collect();
    Matrix::from_rows(&entries).expect("rectangular")
}

fn direct_convolution(f: &DenseFunction, g: &DenseFunction) -> DenseFunction {
    let c = *f.cfg();
    let n = c.order() as f64;
    DenseFunction::from_fn(c, |x| (0..c.order()).map(|y| f[y] * g[c.sub(x, y)]).sum::<Complex64>() / n)
}

/// Runs every check at dimension ≤ `n` with `trials` random instances per
/// cheap check; the decomposition drivers use fewer.
pub fn run_verify(n: usize, seed: u64, trials: usize, budget: f64) -> Result<VerifyTable> {
    if n == 0 {
        return Err(QfError::InvalidParameter("verify needs n ≥ 1".into()));
    }
    let n4 = n.min(4);
    let n3 = n.min(3);
    let n2 = n.min(2);
    let heavy = trials.clamp(1, 5);
    let mut s = Suite { seed, rows: Vec::new() };

    // field
    s.run("field", "rank(M) = rank(M^T)", "row rank equals column rank", trials, |rng, _| {
        let m = random_matrix(1 + rng.below(5), 1 + rng.below(5), rng);
        holds(mat_rank(&m) == mat_rank(&m.transpose()))
    });
    s.run("field", "dim null_space(S) + rank(S) = n", "rank-nullity", trials, |rng, t| {
        let d = dim_for(t, n4);
        let forms: Vec<LinearForm> = (0..rng.below(d + 2)).map(|_| random_linear_form(d, rng)).collect();
        let ns = null_space(&forms, &cfg(d))?;
        holds(ns.len() + span_rank(&forms, d) == d)
    });
    s.run("field", "index/point round trip", "base-5 digits", 1, |_, _| {
        let c = cfg(n.min(5));
        let ok = (0..c.order()).all(|i| c.index_to_point(i).and_then(|p| c.point_to_index(&p)).ok() == Some(i));
        holds(ok)
    });

    // fourier
    s.run("fourier", "Parseval", "Parseval identity", trials, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let (f, g) = (random_complex(c, rng), random_complex(c, rng));
        within((f.inner(&g)? - dft(&f).inner(&dft(&g))?).norm(), 1e-10)
    });
    s.run("fourier", "||f||_2 = ||f^||_2", "Plancherel", trials, |rng, t| {
        let f = random_complex(cfg(dim_for(t, n3)), rng);
        within((f.norm2() - dft(&f).norm2()).abs(), 1e-10)
    });
    s.run("fourier", "|f^(r)| <= ||f||_1", "trivial Fourier bound", trials, |rng, t| {
        let f = random_complex(cfg(dim_for(t, n3)), rng);
        within((dft(&f).sup_norm() - f.norm1()).max(0.0), 1e-12)
    });
    s.run("fourier", "per-axis transform = direct double sum", "definition of the transform", trials, |rng, t| {
        let f = random_complex(cfg(dim_for(t, n3)), rng);
        within(dft(&f).max_diff(&dft_direct(&f))?, 1e-10)
    });
    s.run("fourier", "inversion", "Fourier inversion", trials, |rng, t| {
        let f = random_complex(cfg(dim_for(t, n3)), rng);
        within(idft(&dft(&f)).max_diff(&f)?, 1e-10)
    });
    s.run("fourier", "(f*g)^ = f^ g^", "convolution identity", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let (f, g) = (random_complex(c, rng), random_complex(c, rng));
        let direct = direct_convolution(&f, &g);
        let e1 = convolve(&f, &g)?.max_diff(&direct)?;
        let e2 = dft(&direct).max_diff(&dft(&f).mul(&dft(&g))?)?;
        within(e1.max(e2), 1e-10)
    });

    // gowers
    s.run("gowers", "triangle inequality, k = 2, 3", "Gowers norms are norms", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let k = 2 + t % 2;
        let (f, g) = (random_complex(c, rng), random_complex(c, rng));
        let gap = uk_norm(&f.add(&g)?, k)? - uk_norm(&f, k)? - uk_norm(&g, k)?;
        within(gap.max(0.0), 1e-9)
    });
    s.run("gowers", "||cf|| = |c| ||f||, k = 2, 3", "Gowers norms are norms", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let k = 2 + t % 2;
        let f = random_complex(c, rng);
        let a = 3.0 * rng.unit_disk();
        within((uk_norm(&f.scale(a), k)? - a.norm() * uk_norm(&f, k)?).abs(), 1e-9)
    });
    s.run("gowers", "||f||_U2 <= ||f||_U3", "nesting of Gowers norms", trials, |rng, t| {
        let f = random_bounded(cfg(dim_for(t, n2)), rng);
        within((uk_norm(&f, 2)? - uk_norm(&f, 3)?).max(0.0), 1e-9)
    });
    s.run("gowers", "w^{x.x}: U3 = 1, U2 = 5^{-n/4}, sup f^ = 5^{-n/2}", "key example", n3, |_, t| {
        let d = t + 1;
        let c = cfg(d);
        let f = quad_phase_fn(&QuadraticPhase::pure(crate::field::SymMatrix::identity(d)), &c)?;
        let e3 = (uk_norm(&f, 3)? - 1.0).abs();
        let e2 = (uk_norm(&f, 2)? - 5f64.powf(-(d as f64) / 4.0)).abs();
        let es = (dft(&f).sup_norm() - 5f64.powf(-(d as f64) / 2.0)).abs();
        within(e3.max(e2).max(es), 1e-9)
    });
    s.run("gowers", "Gowers-Cauchy-Schwarz, k = 2, 3", "Gowers-Cauchy-Schwarz inequality", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let k = 2 + t % 2;
        let fs: Vec<DenseFunction> = (0..1usize << k).map(|_| random_bounded(c, rng)).collect();
        let lhs = gowers_inner_product(&fs, k, budget)?.norm();
        let rhs = fs.iter().map(|f| uk_norm(f, k)).product::<Result<f64>>()?;
        within((lhs - rhs).max(0.0), 1e-9)
    });
    s.run("gowers", "fast = direct, k = 2, 3", "U2 as the L4 norm of the transform", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let k = 2 + t % 2;
        let f = random_complex(c, rng);
        within((gowers_norm_fast(&f, k)?.value - gowers_norm_direct(&f, k, budget)?.value).abs(), 1e-9)
    });
    s.run("gowers", "||f||_U3^8 = E_h ||D_h f^||_4^4", "U3 through derivatives", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let f = random_complex(c, rng);
        let avg = (0..c.order()).map(|h| dft(&derivative_at(&f, h)).norm4_pow4()).sum::<f64>() / c.order() as f64;
        let direct = gowers_norm_direct(&f, 3, budget)?.value.powi(8);
        within((avg - direct).abs(), 1e-9 * direct.max(1.0))
    });
    s.run("gowers", "Samorodnitsky identity", "Samorodnitsky's identity", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let f = random_real(c, rng);
        let sides = samorodnitsky_sides(&f)?;
        let mut err = (sides.lhs - sides.rhs).abs();
        if c.dim() == 1 {
            err = err.max((samorodnitsky_configuration_sum(&f)? - sides.rhs).abs());
        }
        within(err, 1e-9)
    });

    // progressions
    s.run("progressions", "Lambda3 spectral = direct", "Lambda3 in Fourier space", trials, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let fs: Vec<DenseFunction> = (0..3).map(|_| random_complex(c, rng)).collect();
        within((lambda3(&fs[0], &fs[1], &fs[2])? - lambda3_spectral(&fs[0], &fs[1], &fs[2])?).norm(), 1e-10)
    });
    s.run("progressions", "16-term balanced expansion", "balanced function decomposition", heavy, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let set = random_set_with(c, rng.uniform(), rng)?;
        let rep = balanced_expansion_check([&set, &set, &set, &set])?;
        let alpha4 = set.density().powi(4);
        let max_term = rep.terms[1..].iter().map(|t| t.value.norm()).fold(0.0, f64::max);
        let dev = (rep.direct - alpha4).norm() - 15.0 * max_term;
        within(dev.max(0.0).max(rep.error), 1e-9)
    });
    s.run("progressions", "Lambda4 is multilinear", "multilinearity", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let mut fs: Vec<DenseFunction> = (0..4).map(|_| random_complex(c, rng)).collect();
        let g = random_complex(c, rng);
        let slot = t % 4;
        let l = |fs: &[DenseFunction]| lambda4(&fs[0], &fs[1], &fs[2], &fs[3]);
        let a = l(&fs)?;
        let orig = std::mem::replace(&mut fs[slot], g.clone());
        let b = l(&fs)?;
        fs[slot] = orig.add(&g)?;
        within((l(&fs)? - a - b).norm(), 1e-10)
    });
    s.run("progressions", "|Lambda4| <= min U3, |Lambda3| <= min U2", "generalised von Neumann", trials, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let fs: Vec<DenseFunction> = (0..4).map(|_| random_bounded(c, rng)).collect();
        let rep = gvn_check([&fs[0], &fs[1], &fs[2], &fs[3]])?;
        Ok(Outcome { ok: rep.holds, metric: (-rep.slack4).max(-rep.slack3).max(0.0) })
    });

    // quadratic
    s.run("quadratic", "|gauss sum| <= 5^{-rk/2}, equality at r = 0", "Gauss sums", trials, |rng, t| {
        let d = dim_for(t, n3);
        let c = cfg(d);
        let q = random_phase(d, rng);
        let bound = 5f64.powf(-(q.m.rank() as f64) / 2.0);
        let g = quad_phase_fn(&q, &c)?.mean().norm();
        let g0 = quad_phase_fn(&QuadraticPhase::pure(q.m.clone()), &c)?.mean().norm();
        within((g - bound).max(0.0).max((g0 - bound).abs()), 1e-9)
    });
    s.run("quadratic", "quadratic correlation >= d implies U3 >= d", "correlation lower-bounds U3", trials, |rng, t| {
        let d = dim_for(t, n2);
        let c = cfg(d);
        let q = random_phase(d, rng);
        let noise: Vec<Complex64> = (0..c.order()).map(|_| 0.5 + 0.5 * rng.unit_disk()).collect();
        let noise = DenseFunction::new(c, noise)?;
        let f = quad_phase_fn(&q, &c)?.conj().mul(&noise)?;
        let corr = quad_correlation(&f, &q)?.magnitude;
        within((corr - uk_norm(&f, 3)?).max(0.0), 1e-9)
    });
    s.run("quadratic", "oracle recovers quadratic phases", "exhaustive inverse oracle", heavy, |rng, t| {
        let d = dim_for(t, n2);
        let f = quad_phase_fn(&random_phase(d, rng), &cfg(d))?;
        within((best_quadratic_correlation(&f)?.magnitude - 1.0).abs(), 1e-9)
    });
    s.run("quadratic", "oracle argmax does not depend on delta", "exhaustive inverse oracle", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let f = random_bounded(c, rng);
        let best = best_quadratic_correlation(&f)?;
        let oc = OracleConfig::default();
        let mut ok = true;
        for delta in [0.05, 0.3, 0.6, 0.95] {
            if let Some(cert) = inverse_oracle(&f, delta, &oc)? {
                ok &= cert.phase == best.phase;
            }
        }
        holds(ok)
    });

    // factors
    s.run("factors", "Pythagoras for nested factors", "Pythagoras' theorem", trials, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let coarse = random_factor(c, rng.below(2), rng.below(2), rng);
        let fine = join(&coarse, &random_factor(c, 1, rng.below(2), rng))?;
        let f = random_complex(c, rng);
        let (e, e2) = (conditional_expectation(&f, &coarse)?, conditional_expectation(&f, &fine)?);
        let gap = e2.norm2().powi(2) - e.norm2().powi(2) - e2.sub(&e)?.norm2().powi(2);
        within(gap.abs(), 1e-10)
    });
    s.run("factors", "E(.|B) idempotent, mean-preserving, contractive", "conditional expectation", trials, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let b = random_factor(c, rng.below(3), rng.below(3), rng);
        let f = random_complex(c, rng);
        let p = conditional_expectation(&f, &b)?;
        let idem = conditional_expectation(&p, &b)?.max_diff(&p)?;
        let mean = (p.mean() - f.mean()).norm();
        let contr = (p.norm2() - f.norm2()).max(0.0);
        within(idem.max(mean).max(contr), 1e-12)
    });
    s.run("factors", "rank_reduce output refines input", "rank reduction", heavy * 2, |rng, t| {
        let d = dim_for(t, n3);
        let c = cfg(d);
        let b = random_factor(c, rng.below(2), 1 + rng.below(3), rng);
        let target = 1.0 + rng.below(d + 1) as f64;
        let out = rank_reduce(&b, |_| target)?;
        let high = out.complexity().1 == 0 || factor_rank(&out)? as f64 >= target;
        holds(refines(&out, &b)? && high)
    });
    s.run("factors", "atom count <= 5^{d1+d2}", "atoms of a factor", trials, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let b = random_factor(c, rng.below(3), rng.below(3), rng);
        let (d1, d2) = b.complexity();
        holds(b.atoms().len() <= 5usize.pow((d1 + d2) as u32))
    });
    s.run("factors", "atom probabilities within 5^{-rank/2}", "atom sizes of high-rank factors", heavy, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let st = atom_statistics(&random_factor(c, rng.below(2), rng.below(3), rng))?;
        Ok(Outcome { ok: st.flagged == 0, metric: (st.max_deviation - st.bound).max(0.0) })
    });
    s.run("factors", "progression atom probabilities sum to 1", "4-term progressions across atoms", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let b = random_factor(c, rng.below(2), rng.below(2), rng);
        let census = ap4_atom_census(&b)?;
        let n2pts = (c.order() as f64).powi(2);
        let total = census.values().sum::<u64>() as f64 / n2pts;
        let mut err = (total - 1.0).abs();
        for (keys, &count) in census.iter().take(5) {
            let atoms = keys.map(|k| b.decode(k));
            err = err.max((ap4_atom_probability(&b, &atoms)?.probability - count as f64 / n2pts).abs());
        }
        within(err, 1e-12)
    });

    // decompose
    let oracle = OracleConfig::default();
    s.run("decompose", "linear KvN: complexity, measurability, U2 bound", "linear Koopman-von Neumann", heavy, |rng, t| {
        let c = cfg(dim_for(t, n3));
        let delta = if t % 2 == 0 { 0.3 } else { 0.5 };
        let f = random_bounded(c, rng);
        let dec = linear_kvn(&f, delta)?;
        let cx = dec.factor.complexity().0 as f64 <= 4.0 * delta.powi(-4);
        let meas = conditional_expectation(&dec.f1, &dec.factor)?.max_diff(&dec.f1)?;
        let u2 = gowers_norm_direct(&dec.f2, 2, budget)?.value;
        Ok(Outcome { ok: cx && meas <= 1e-10 && u2 <= delta + 1e-9, metric: (u2 - delta).max(0.0).max(meas) })
    });
    s.run("decompose", "quadratic KvN: bounds, monotone energy, cap", "quadratic Koopman-von Neumann", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let delta = 0.5;
        let f = random_balanced(c, rng);
        let dec = quadratic_kvn(&f, delta, &QuadraticFactor::trivial(c), &oracle)?;
        let floor = increment_floor(delta, &oracle);
        let steps_ok = dec.energy_history.windows(2).all(|w| w[1] - w[0] >= floor - 1e-12);
        let cap_ok = dec.iterations as f64 <= (1.0 / floor).ceil();
        let u3 = gowers_norm_direct(&dec.f2, 3, budget)?.value;
        let meas = conditional_expectation(&dec.f1, &dec.factor)?.max_diff(&dec.f1)?;
        Ok(Outcome { ok: steps_ok && cap_ok && u3 <= delta + 1e-9 && meas <= 1e-10, metric: (u3 - delta).max(0.0) })
    });
    s.run("decompose", "regularity: three-part bounds re-measured", "arithmetic regularity", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let delta = 0.5;
        let omega = GrowthFn::Exponential { base: 5.0, scale: 2.0 };
        let f = random_balanced(c, rng);
        let dec = regularity(&f, delta, &omega, &QuadraticFactor::trivial(c), &oracle)?;
        let (d1, d2) = dec.factor.complexity();
        let f3 = dec.f3.as_ref().expect("three parts");
        let u3 = gowers_norm_direct(f3, 3, budget)?.value;
        let bound = (1.0 / omega.eval(d1.max(d2))).max(MIN_SCHEDULE_DELTA);
        let monotone = dec.energy_history.windows(2).all(|w| w[1] >= w[0] - 1e-12);
        let cap = dec.iterations as f64 <= (delta.powi(-2)).ceil() + 1.0;
        let recon = dec.reconstruction_error(&f)?;
        let ok = monotone && cap && recon <= 1e-10 && dec.f2.norm2() <= delta + 1e-9 && u3 <= bound + 1e-9;
        Ok(Outcome { ok, metric: (u3 - bound).max(0.0).max(recon) })
    });
    s.run("decompose", "high-rank regularity: rank and norm bounds", "regularity with a high-rank factor", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let delta = 0.5;
        let omega1 = GrowthFn::Constant { value: 2.0 };
        let omega2 = GrowthFn::Exponential { base: 5.0, scale: 2.0 };
        let f = random_balanced(c, rng);
        let dec = regularity_high_rank(&f, delta, &omega1, &omega2, &QuadraticFactor::trivial(c), &oracle)?;
        let (d1, d2) = dec.factor.complexity();
        let rank_ok = d2 == 0 || factor_rank(&dec.factor)? as f64 >= omega1.eval(d1 + d2);
        let f3 = dec.f3.as_ref().expect("three parts");
        let u3 = gowers_norm_direct(f3, 3, budget)?.value;
        let bound = (1.0 / omega2.eval(d1 + d2)).max(MIN_SCHEDULE_DELTA);
        let recon = dec.reconstruction_error(&f)?;
        let ok = rank_ok && recon <= 1e-10 && dec.f2.norm2() <= delta + 1e-9 && u3 <= bound + 1e-9;
        Ok(Outcome { ok, metric: (u3 - bound).max(0.0).max(recon) })
    });
    s.run("decompose", "81-term split reconciles, claim bounds hold", "4-term progressions in dense sets", heavy, |rng, t| {
        let c = cfg(dim_for(t, n2));
        let set = random_set_with(c, 0.5 + 0.4 * rng.uniform(), rng)?;
        let rep = bhk_experiment(&set, 0.1, &BhkOptions::default())?;
        let mut ok = true;
        let mut metric = 0.0f64;
        if let Some(p) = &rep.pipeline {
            metric = p.reconcile_error;
            ok &= p.reconcile_error <= 1e-8;
            ok &= p.terms.iter().all(|t| {
                t.f2_bound.as_ref().is_none_or(|b| b.satisfied) && t.f3_bound.as_ref().is_none_or(|b| b.satisfied)
            });
        }
        if let Some(w) = &rep.witness {
            let mask = set.mask();
            let recount = (0..c.order())
                .filter(|&x| (0..4).all(|i| mask[c.add(x, c.scale(i as u8, w.index))]))
                .count() as u64;
            ok &= recount == w.count && w.index != 0;
        }
        Ok(Outcome { ok, metric })
    });
    s.run("decompose", "configuration-space counting inequality", "two Cauchy-Schwarz steps", trials, |rng, t| {
        let (d1, d2) = (t % 3, (t / 3) % 3);
        let values: Vec<f64> = (0..5usize.pow((d1 + d2) as u32)).map(|_| rng.uniform()).collect();
        let r = configspace_count_inequality(&values, d1, d2)?;
        within((r.rhs - r.lhs).max(0.0).max((r.lhs - r.lhs_fourier).abs()), 1e-9)
    });

    // harness
    s.run("harness", "identical seeds and thread counts give identical output", "determinism", 1, |_, _| {
        let c = cfg(n3);
        let a = random_set_with(c, 0.5, &mut SeededRng::new(seed))?;
        let b = random_set_with(c, 0.5, &mut SeededRng::new(seed))?;
        let f = random_complex(c, &mut SeededRng::new(seed));
        let run = |threads: usize| -> Result<String> {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .map_err(|e| QfError::InvalidParameter(e.to_string()))?;
            pool.install(|| to_json_string(&gowers_norm_direct(&f, 2, budget)?))
        };
        holds(a == b && run(1)? == run(4)?)
    });

    let passed = s.rows.iter().all(|r| r.passed);
    Ok(VerifyTable { n, seed, trials, rows: s.rows, passed })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_suite_passes() {
        let table = run_verify(1, 3, 2, 1e9).unwrap();
        assert!(table.passed, "{}", table.render());
    }
}

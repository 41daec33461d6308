//! Quadratic factors: σ-algebras generated by linear forms rᵀx and pure
//! quadratics xᵀMx, with atoms indexed by configuration-space points.
//!
//! An atom (a, b) ∈ F_5^{d_1} × F_5^{d_2} is encoded as the integer
//! `Σ a_j 5^j + 5^{d_1} Σ b_j 5^j`.

use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};
use crate::field::{independent_subset, span_indices, GroupConfig, GroupPoint, LinearForm, SymMatrix, F5};
use crate::fourier::DenseFunction;

/// Largest number of quadratics for rank enumeration (5^6 − 1 combinations).
pub const RANK_MAX_D2: usize = 6;

/// Largest n for atom size statistics.
pub const ATOM_STATS_MAX_DIM: usize = 4;

/// Largest n for the (x, d) census of progression atoms.
pub const AP4_MAX_DIM: usize = 3;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct Atom {
    pub a: Vec<F5>,
    pub b: Vec<F5>,
}

impl Atom {
    pub fn from_ints(a: &[i64], b: &[i64]) -> Self {
        Atom { a: a.iter().map(|&v| F5::reduce(v)).collect(), b: b.iter().map(|&v| F5::reduce(v)).collect() }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadraticFactor {
    cfg: GroupConfig,
    linear: Vec<LinearForm>,
    quadratics: Vec<SymMatrix>,
}

/// Serialized form of a factor.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorSpec {
    pub linear: Vec<LinearForm>,
    pub quadratics: Vec<SymMatrix>,
}

impl FactorSpec {
    pub fn into_factor(self, cfg: GroupConfig) -> Result<QuadraticFactor> {
        QuadraticFactor::new(cfg, self.linear, self.quadratics)
    }
}

impl Serialize for QuadraticFactor {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.spec().serialize(s)
    }
}

impl QuadraticFactor {
    /// Builds a factor, keeping a greedily chosen independent subset of the
    /// linear forms.
    pub fn new(cfg: GroupConfig, linear: Vec<LinearForm>, quadratics: Vec<SymMatrix>) -> Result<Self> {
        let n = cfg.dim();
        if let Some(f) = linear.iter().find(|f| f.dim() != n) {
            return Err(QfError::DimensionMismatch { expected: n, got: f.dim() });
        }
        if let Some(m) = quadratics.iter().find(|m| m.dim() != n) {
            return Err(QfError::DimensionMismatch { expected: n, got: m.dim() });
        }
        Ok(QuadraticFactor { cfg, linear: independent_subset(&linear), quadratics })
    }

    pub fn trivial(cfg: GroupConfig) -> Self {
        QuadraticFactor { cfg, linear: Vec::new(), quadratics: Vec::new() }
    }

    /// The factor of the n coordinate forms, whose atoms are points.
    pub fn full_linear(cfg: GroupConfig) -> Self {
        let n = cfg.dim();
        QuadraticFactor { cfg, linear: (0..n).map(|i| LinearForm::basis(n, i)).collect(), quadratics: Vec::new() }
    }

    pub fn cfg(&self) -> &GroupConfig {
        &self.cfg
    }

    pub fn linear_forms(&self) -> &[LinearForm] {
        &self.linear
    }

    pub fn quadratics(&self) -> &[SymMatrix] {
        &self.quadratics
    }

    /// (d_1, d_2).
    pub fn complexity(&self) -> (usize, usize) {
        (self.linear.len(), self.quadratics.len())
    }

    pub fn spec(&self) -> FactorSpec {
        FactorSpec { linear: self.linear.clone(), quadratics: self.quadratics.clone() }
    }

    /// Number of points of configuration space, 5^{d_1 + d_2}.
    pub fn config_space_size(&self) -> Result<usize> {
        let (d1, d2) = self.complexity();
        5usize
            .checked_pow((d1 + d2) as u32)
            .ok_or(QfError::TooLarge { what: "configuration space exponent d1 + d2", limit: 27, got: d1 + d2 })
    }

    /// (Γ(x), Φ(x)).
    pub fn atom_of(&self, x: &GroupPoint) -> Result<Atom> {
        if x.dim() != self.cfg.dim() {
            return Err(QfError::DimensionMismatch { expected: self.cfg.dim(), got: x.dim() });
        }
        Ok(Atom {
            a: self.linear.iter().map(|r| r.eval(&x.coords)).collect(),
            b: self.quadratics.iter().map(|m| m.quad_form(&x.coords)).collect(),
        })
    }

    pub fn encode(&self, atom: &Atom) -> usize {
        let lin = atom.a.iter().rev().fold(0, |acc, v| acc * 5 + v.value() as usize);
        let quad = atom.b.iter().rev().fold(0, |acc, v| acc * 5 + v.value() as usize);
        lin + 5usize.pow(self.linear.len() as u32) * quad
    }

    pub fn decode(&self, mut key: usize) -> Atom {
        let (d1, d2) = self.complexity();
        let mut digits = |d: usize| {
            (0..d)
                .map(|_| {
                    let v = F5::reduce((key % 5) as i64);
                    key /= 5;
                    v
                })
                .collect::<Vec<_>>()
        };
        let a = digits(d1);
        let b = digits(d2);
        Atom { a, b }
    }

    /// Encoded atom of every point, in index order.
    pub fn atom_keys(&self) -> Vec<usize> {
        let cfg = self.cfg;
        let lin_place = 5usize.pow(self.linear.len() as u32);
        (0..cfg.order())
            .into_par_iter()
            .map(|i| {
                let x = cfg.digits(i);
                let lin = self.linear.iter().rev().fold(0, |acc, r| acc * 5 + r.eval(&x).value() as usize);
                let quad = self.quadratics.iter().rev().fold(0, |acc, m| acc * 5 + m.quad_form(&x).value() as usize);
                lin + lin_place * quad
            })
            .collect()
    }

    /// Non-empty atoms with their members, keyed by encoded atom.
    pub fn atoms(&self) -> BTreeMap<usize, Vec<usize>> {
        let mut out: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for (i, k) in self.atom_keys().into_iter().enumerate() {
            out.entry(k).or_default().push(i);
        }
        out
    }
}

fn check_cfg(f: &DenseFunction, factor: &QuadraticFactor) -> Result<()> {
    if f.cfg() != factor.cfg() {
        return Err(QfError::ConfigMismatch { left: f.cfg().dim(), right: factor.cfg().dim() });
    }
    Ok(())
}

/// E(f|B): the average of f over the atom containing each point.
pub fn conditional_expectation(f: &DenseFunction, factor: &QuadraticFactor) -> Result<DenseFunction> {
    check_cfg(f, factor)?;
    let keys = factor.atom_keys();
    let mut sums: BTreeMap<usize, (Complex64, usize)> = BTreeMap::new();
    for (i, &k) in keys.iter().enumerate() {
        let e = sums.entry(k).or_insert((Complex64::new(0.0, 0.0), 0));
        e.0 += f[i];
        e.1 += 1;
    }
    let means: BTreeMap<usize, Complex64> = sums.into_iter().map(|(k, (s, c))| (k, s / c as f64)).collect();
    DenseFunction::new(*f.cfg(), keys.iter().map(|k| means[k]).collect())
}

/// ∥E(f|B)∥_2².
pub fn energy(f: &DenseFunction, factor: &QuadraticFactor) -> Result<f64> {
    Ok(conditional_expectation(f, factor)?.norm2().powi(2))
}

/// The common refinement: independent linear forms of both, and the
/// distinct nonzero quadratics of both.
pub fn join(fa: &QuadraticFactor, fb: &QuadraticFactor) -> Result<QuadraticFactor> {
    if fa.cfg != fb.cfg {
        return Err(QfError::ConfigMismatch { left: fa.cfg.dim(), right: fb.cfg.dim() });
    }
    let linear: Vec<LinearForm> = fa.linear.iter().chain(&fb.linear).cloned().collect();
    let mut quadratics: Vec<SymMatrix> = Vec::new();
    for m in fa.quadratics.iter().chain(&fb.quadratics) {
        if !m.is_zero() && !quadratics.contains(m) {
            quadratics.push(m.clone());
        }
    }
    QuadraticFactor::new(fa.cfg, linear, quadratics)
}

/// Whether every atom of `fine` lies inside one atom of `coarse`.
pub fn refines(fine: &QuadraticFactor, coarse: &QuadraticFactor) -> Result<bool> {
    if fine.cfg != coarse.cfg {
        return Err(QfError::ConfigMismatch { left: fine.cfg.dim(), right: coarse.cfg.dim() });
    }
    let (kf, kc) = (fine.atom_keys(), coarse.atom_keys());
    let mut seen: BTreeMap<usize, usize> = BTreeMap::new();
    for (f, c) in kf.into_iter().zip(kc) {
        if *seen.entry(f).or_insert(c) != c {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Nonzero λ ∈ F_5^{d} in lexicographic order, λ_1 most significant.
fn lambdas(d: usize) -> impl Iterator<Item = Vec<F5>> {
    (1..5usize.pow(d as u32)).map(move |mut v| {
        let mut out = vec![F5::ZERO; d];
        for slot in out.iter_mut().rev() {
            *slot = F5::reduce((v % 5) as i64);
            v /= 5;
        }
        out
    })
}

fn check_rank_d2(d2: usize) -> Result<()> {
    if d2 > RANK_MAX_D2 {
        return Err(QfError::TooLarge { what: "number of quadratics for rank enumeration", limit: RANK_MAX_D2, got: d2 });
    }
    Ok(())
}

/// min over nonzero λ of rk(Σ λ_j M_j); n + 1 when there are no quadratics.
pub fn factor_rank(factor: &QuadraticFactor) -> Result<usize> {
    let n = factor.cfg.dim();
    let d2 = factor.quadratics.len();
    if d2 == 0 {
        return Ok(n + 1);
    }
    check_rank_d2(d2)?;
    Ok(lambdas(d2)
        .map(|l| SymMatrix::combination(n, &l, &factor.quadratics).rank())
        .min()
        .expect("d2 > 0"))
}

/// One elimination performed by [`rank_reduce`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RankReduction {
    /// λ after scaling its last nonzero entry to 1.
    pub lambda: Vec<u8>,
    pub removed: usize,
    pub combination_rank: usize,
    pub forms_added: usize,
}

/// Refines `factor` until its rank is at least ω(d_1 + d_2) or no quadratics
/// remain.
///
/// Each round takes the first λ (lexicographic) with rk(Σ λ_j M_j) below the
/// target, scales it so the last nonzero λ_j is 1, drops M_j and adds a row
/// basis of U = Σ λ_j M_j as linear forms.
pub fn rank_reduce(factor: &QuadraticFactor, omega: impl Fn(usize) -> f64) -> Result<QuadraticFactor> {
    Ok(rank_reduce_traced(factor, omega)?.0)
}

/// [`rank_reduce`] together with the eliminations it performed.
pub fn rank_reduce_traced(
    factor: &QuadraticFactor,
    omega: impl Fn(usize) -> f64,
) -> Result<(QuadraticFactor, Vec<RankReduction>)> {
    let n = factor.cfg.dim();
    let mut current = factor.clone();
    let mut trace = Vec::new();
    loop {
        let (d1, d2) = current.complexity();
        if d2 == 0 {
            break;
        }
        check_rank_d2(d2)?;
        let target = omega(d1 + d2);
        let hit = lambdas(d2).find_map(|l| {
            let u = SymMatrix::combination(n, &l, &current.quadratics);
            let rk = u.rank();
            ((rk as f64) < target).then_some((l, rk))
        });
        let Some((mut lambda, rk)) = hit else { break };
        let j = lambda.iter().rposition(|v| !v.is_zero()).expect("nonzero λ");
        let inv = lambda[j].inv().expect("nonzero entry");
        lambda.iter_mut().for_each(|v| *v = *v * inv);
        let u = SymMatrix::combination(n, &lambda, &current.quadratics);
        let new_forms = u.matrix().row_basis();
        let before = current.linear.len();
        let mut linear = current.linear.clone();
        linear.extend(new_forms);
        let mut quadratics = current.quadratics.clone();
        quadratics.remove(j);
        current = QuadraticFactor::new(current.cfg, linear, quadratics)?;
        trace.push(RankReduction {
            lambda: lambda.iter().map(|v| v.value()).collect(),
            removed: j,
            combination_rank: rk,
            forms_added: current.linear.len() - before,
        });
    }
    Ok((current, trace))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomStat {
    pub atom: Atom,
    pub size: usize,
    pub probability: f64,
    pub deviation: f64,
    pub flagged: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AtomStatistics {
    pub complexity: (usize, usize),
    pub rank: usize,
    /// 5^{−d_1−d_2}.
    pub expected: f64,
    /// 5^{−rank/2}.
    pub bound: f64,
    /// Non-empty atoms in key order.
    pub atoms: Vec<AtomStat>,
    pub empty_atoms: usize,
    pub max_deviation: f64,
    pub flagged: usize,
}

/// Exact atom sizes compared against 5^{−d_1−d_2} ± 5^{−rank/2}.
pub fn atom_statistics(factor: &QuadraticFactor) -> Result<AtomStatistics> {
    let cfg = factor.cfg;
    if cfg.dim() > ATOM_STATS_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for atom statistics", limit: ATOM_STATS_MAX_DIM, got: cfg.dim() });
    }
    let (d1, d2) = factor.complexity();
    let rank = factor_rank(factor)?;
    let expected = 5f64.powi(-((d1 + d2) as i32));
    let bound = 5f64.powf(-(rank as f64) / 2.0);
    let total = factor.config_space_size()?;
    let census = factor.atoms();
    let n_pts = cfg.order() as f64;
    let atoms: Vec<AtomStat> = census
        .iter()
        .map(|(&k, members)| {
            let probability = members.len() as f64 / n_pts;
            let deviation = (probability - expected).abs();
            AtomStat { atom: factor.decode(k), size: members.len(), probability, deviation, flagged: deviation > bound }
        })
        .collect();
    let empty_atoms = total - census.len();
    let mut max_deviation = atoms.iter().map(|a| a.deviation).fold(0.0, f64::max);
    let mut flagged = atoms.iter().filter(|a| a.flagged).count();
    if empty_atoms > 0 {
        max_deviation = max_deviation.max(expected);
        if expected > bound {
            flagged += empty_atoms;
        }
    }
    Ok(AtomStatistics { complexity: (d1, d2), rank, expected, bound, atoms, empty_atoms, max_deviation, flagged })
}

/// Whether four atoms can be the atoms of x, x+d, x+2d, x+3d: the a's form
/// a progression and b^{(1)} − 3b^{(2)} + 3b^{(3)} − b^{(4)} = 0.
pub fn ap4_constraints_hold(atoms: &[Atom; 4]) -> bool {
    let three = F5::reduce(3);
    let lin = (0..atoms[0].a.len()).all(|j| {
        let a: Vec<F5> = atoms.iter().map(|t| t.a[j]).collect();
        (a[0] - a[1] - a[1] + a[2]).is_zero() && (a[1] - a[2] - a[2] + a[3]).is_zero()
    });
    let quad = (0..atoms[0].b.len()).all(|j| {
        let b: Vec<F5> = atoms.iter().map(|t| t.b[j]).collect();
        (b[0] - three * b[1] + three * b[2] - b[3]).is_zero()
    });
    lin && quad
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Ap4AtomProbability {
    pub probability: f64,
    pub constrained: bool,
    /// 5^{−2d_1−3d_2} when constrained, else 0.
    pub expected: f64,
    pub bound: f64,
    pub rank: usize,
}

fn check_ap4_dim(cfg: &GroupConfig) -> Result<()> {
    if cfg.dim() > AP4_MAX_DIM {
        return Err(QfError::TooLarge { what: "dimension for progression atom census", limit: AP4_MAX_DIM, got: cfg.dim() });
    }
    Ok(())
}

/// P_{x,d}(x + i·d lies in atom i for i = 0..3), by enumeration of (x, d).
pub fn ap4_atom_probability(factor: &QuadraticFactor, atoms: &[Atom; 4]) -> Result<Ap4AtomProbability> {
    let cfg = factor.cfg;
    check_ap4_dim(&cfg)?;
    let (d1, d2) = factor.complexity();
    if let Some(t) = atoms.iter().find(|t| t.a.len() != d1 || t.b.len() != d2) {
        return Err(QfError::DimensionMismatch { expected: d1 + d2, got: t.a.len() + t.b.len() });
    }
    let keys = factor.atom_keys();
    let want: Vec<usize> = atoms.iter().map(|t| factor.encode(t)).collect();
    let mut hits = 0u64;
    for x in 0..cfg.order() {
        if keys[x] != want[0] {
            continue;
        }
        for d in 0..cfg.order() {
            let mut y = x;
            if (1..4).all(|i| {
                y = cfg.add(y, d);
                keys[y] == want[i]
            }) {
                hits += 1;
            }
        }
    }
    let probability = hits as f64 / (cfg.order() as f64).powi(2);
    let constrained = ap4_constraints_hold(atoms);
    let rank = factor_rank(factor)?;
    let expected = if constrained { 5f64.powi(-(2 * d1 as i32 + 3 * d2 as i32)) } else { 0.0 };
    let bound = 5f64.powf(-(rank as f64) / 2.0);
    if !constrained && hits != 0 {
        return Err(QfError::InvariantViolated(format!("unconstrained atom tuple has probability {probability}")));
    }
    if constrained && (probability - expected).abs() > bound {
        return Err(QfError::InvariantViolated(format!(
            "atom tuple probability {probability} is farther than {bound} from {expected}"
        )));
    }
    Ok(Ap4AtomProbability { probability, constrained, expected, bound, rank })
}

/// Counts of (x, d) by the 4-tuple of encoded atoms of x, x+d, x+2d, x+3d.
pub fn ap4_atom_census(factor: &QuadraticFactor) -> Result<BTreeMap<[usize; 4], u64>> {
    let cfg = factor.cfg;
    check_ap4_dim(&cfg)?;
    let keys = factor.atom_keys();
    let mut out = BTreeMap::new();
    for x in 0..cfg.order() {
        for d in 0..cfg.order() {
            let y1 = cfg.add(x, d);
            let y2 = cfg.add(y1, d);
            let y3 = cfg.add(y2, d);
            *out.entry([keys[x], keys[y1], keys[y2], keys[y3]]).or_insert(0) += 1;
        }
    }
    Ok(out)
}

/// μ_H = 1_H / E 1_H for H spanned by `basis`.
pub fn haar_on_subspace(basis: &[GroupPoint], cfg: &GroupConfig) -> Result<DenseFunction> {
    let n = cfg.dim();
    if let Some(b) = basis.iter().find(|b| b.dim() != n) {
        return Err(QfError::DimensionMismatch { expected: n, got: b.dim() });
    }
    let forms: Vec<LinearForm> = basis.iter().map(|b| LinearForm::new(b.coords.clone())).collect();
    let independent = independent_subset(&forms);
    if independent.len() != basis.len() {
        log::warn!("subspace basis has {} vectors but spans dimension {}", basis.len(), independent.len());
    }
    let basis: Vec<GroupPoint> = independent.into_iter().map(|f| GroupPoint::new(f.coeffs)).collect();
    let members = span_indices(&basis, cfg);
    let density = cfg.order() as f64 / members.len() as f64;
    let mut f = DenseFunction::zeros(*cfg);
    for m in members {
        f.values_mut()[m] = Complex64::new(density, 0.0);
    }
    Ok(f)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> GroupConfig {
        GroupConfig::new(n).unwrap()
    }

    #[test]
    fn atom_examples() {
        let c = cfg(2);
        let triv = QuadraticFactor::trivial(c);
        assert_eq!(triv.atom_of(&GroupPoint::from_ints(&[1, 2])).unwrap(), Atom::from_ints(&[], &[]));
        let lin = QuadraticFactor::new(c, vec![LinearForm::basis(2, 0)], vec![]).unwrap();
        assert_eq!(lin.atom_of(&GroupPoint::from_ints(&[3, 2])).unwrap().a, vec![F5::reduce(3)]);
        let quad = QuadraticFactor::new(c, vec![], vec![SymMatrix::identity(2)]).unwrap();
        assert_eq!(quad.atom_of(&GroupPoint::from_ints(&[1, 2])).unwrap().b, vec![F5::ZERO]);
    }

    #[test]
    fn encode_round_trip() {
        let c = cfg(2);
        let f = QuadraticFactor::new(c, vec![LinearForm::from_ints(&[1, 2])], vec![SymMatrix::identity(2)]).unwrap();
        for x in 0..25 {
            let atom = f.atom_of(&c.index_to_point(x).unwrap()).unwrap();
            let k = f.encode(&atom);
            assert_eq!(f.decode(k), atom);
            assert_eq!(f.atom_keys()[x], k);
        }
    }

    #[test]
    fn dependent_forms_are_dropped() {
        let c = cfg(2);
        let f = QuadraticFactor::new(
            c,
            vec![LinearForm::from_ints(&[1, 1]), LinearForm::from_ints(&[2, 2]), LinearForm::zero(2)],
            vec![],
        )
        .unwrap();
        assert_eq!(f.complexity(), (1, 0));
    }

    #[test]
    fn join_examples() {
        let c = cfg(2);
        let a = QuadraticFactor::new(c, vec![LinearForm::basis(2, 0)], vec![]).unwrap();
        let b = QuadraticFactor::new(c, vec![LinearForm::basis(2, 1)], vec![]).unwrap();
        assert_eq!(join(&a, &QuadraticFactor::trivial(c)).unwrap(), a);
        assert_eq!(join(&a, &a).unwrap(), a);
        let ab = join(&a, &b).unwrap();
        assert_eq!(ab.atoms().len(), 25);
        assert!(refines(&ab, &a).unwrap() && refines(&ab, &b).unwrap());
        assert!(!refines(&a, &ab).unwrap());
    }

    #[test]
    fn rank_examples() {
        let c = cfg(3);
        let id = QuadraticFactor::new(c, vec![], vec![SymMatrix::identity(3)]).unwrap();
        assert_eq!(factor_rank(&id).unwrap(), 3);
        let m = SymMatrix::identity(3);
        let two_m = SymMatrix::combination(3, &[F5::reduce(2)], &[m.clone()]);
        let pencil = QuadraticFactor::new(c, vec![], vec![m.clone(), two_m]).unwrap();
        assert_eq!(factor_rank(&pencil).unwrap(), 0);
        assert_eq!(factor_rank(&QuadraticFactor::trivial(c)).unwrap(), 4);
    }

    #[test]
    fn rank_reduce_examples() {
        let c = cfg(3);
        let m = SymMatrix::identity(3);
        let two_m = SymMatrix::combination(3, &[F5::reduce(2)], &[m.clone()]);
        let pencil = QuadraticFactor::new(c, vec![], vec![m.clone(), two_m]).unwrap();
        let (out, trace) = rank_reduce_traced(&pencil, |_| 3.0).unwrap();
        assert_eq!(trace.len(), 1);
        assert_eq!(trace[0].lambda, vec![3, 1]);
        assert_eq!(trace[0].forms_added, 0);
        assert_eq!(out.quadratics(), &[m]);
        assert!(out.linear_forms().is_empty());

        let low = QuadraticFactor::new(c, vec![], vec![SymMatrix::diagonal(&[1, 0, 0])]).unwrap();
        let out = rank_reduce(&low, |_| 2.0).unwrap();
        assert!(out.quadratics().is_empty());
        assert_eq!(out.linear_forms(), &[LinearForm::basis(3, 0)]);
        assert!(refines(&out, &low).unwrap());

        assert_eq!(rank_reduce(&id_factor(c), |_| 2.0).unwrap(), id_factor(c));
    }

    fn id_factor(c: GroupConfig) -> QuadraticFactor {
        QuadraticFactor::new(c, vec![], vec![SymMatrix::identity(c.dim())]).unwrap()
    }

    #[test]
    fn conditional_expectation_examples() {
        let c = cfg(1);
        let f = DenseFunction::from_fn(c, |x| Complex64::new(x as f64, 0.0));
        let triv = conditional_expectation(&f, &QuadraticFactor::trivial(c)).unwrap();
        assert!(triv.max_diff(&DenseFunction::constant(c, Complex64::new(2.0, 0.0))).unwrap() < 1e-12);
        let full = conditional_expectation(&f, &QuadraticFactor::full_linear(c)).unwrap();
        assert!(full.max_diff(&f).unwrap() < 1e-12);
        let q = DenseFunction::from_fn(c, |x| crate::fourier::omega_pow((x * x % 5) as u8));
        let cq = conditional_expectation(&q, &id_factor(c)).unwrap();
        assert!(cq.max_diff(&q).unwrap() < 1e-12);
    }

    #[test]
    fn atom_statistics_examples() {
        let c = cfg(2);
        let triv = atom_statistics(&QuadraticFactor::trivial(c)).unwrap();
        assert_eq!(triv.atoms.len(), 1);
        assert_eq!(triv.atoms[0].probability, 1.0);
        let lin = atom_statistics(&QuadraticFactor::new(c, vec![LinearForm::basis(2, 1)], vec![]).unwrap()).unwrap();
        assert!(lin.atoms.iter().all(|a| (a.probability - 0.2).abs() < 1e-15));
        let q = atom_statistics(&id_factor(c)).unwrap();
        assert_eq!(q.flagged, 0);
        assert_eq!(q.atoms.iter().map(|a| a.size).sum::<usize>(), 25);
    }

    #[test]
    fn ap4_probability_examples() {
        let c = cfg(2);
        let triv = QuadraticFactor::trivial(c);
        let e = Atom::from_ints(&[], &[]);
        let p = ap4_atom_probability(&triv, &[e.clone(), e.clone(), e.clone(), e]).unwrap();
        assert_eq!(p.probability, 1.0);
        let lin = QuadraticFactor::new(c, vec![LinearForm::basis(2, 0)], vec![]).unwrap();
        let bad = [0, 1, 3, 3].map(|v| Atom::from_ints(&[v], &[]));
        let p = ap4_atom_probability(&lin, &bad).unwrap();
        assert!(!p.constrained && p.probability == 0.0);
        let q = id_factor(c);
        let good = [Atom::from_ints(&[], &[1]), Atom::from_ints(&[], &[1]), Atom::from_ints(&[], &[1]), Atom::from_ints(&[], &[1])];
        let p = ap4_atom_probability(&q, &good).unwrap();
        assert!(p.constrained && (p.probability - 5f64.powi(-3)).abs() <= p.bound);
        let census = ap4_atom_census(&q).unwrap();
        assert_eq!(census.values().sum::<u64>(), 625);
    }

    #[test]
    fn haar_examples() {
        let c = cfg(2);
        let full = haar_on_subspace(&crate::field::null_space(&[], &c).unwrap(), &c).unwrap();
        assert!(full.max_diff(&DenseFunction::ones(c)).unwrap() < 1e-12);
        let point = haar_on_subspace(&[], &c).unwrap();
        assert!(point.max_diff(&DenseFunction::point_mass(c)).unwrap() < 1e-12);
        let line = haar_on_subspace(&[GroupPoint::from_ints(&[1, 2])], &c).unwrap();
        assert_eq!(line.values().iter().filter(|v| (v.re - 5.0).abs() < 1e-12).count(), 5);
        assert!((line.mean().re - 1.0).abs() < 1e-12);
    }
}

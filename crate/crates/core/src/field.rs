//! Exact arithmetic over F_5 and the ambient group G = F_5^n.
//!
//! Group elements are addressed by their little-endian base-5 index: the
//! coordinate `x_0` is the least significant digit, so `7 = 2 + 1*5` is the
//! point `(2, 1)`. Every dense array in the crate uses this order.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{QfError, Result};

pub const MODULUS: u8 = 5;

/// Largest supported dimension; 5^10 points is already ~10^7 complex values.
pub const MAX_DIM: usize = 10;

const INV: [u8; 5] = [0, 1, 3, 2, 4];

/// An element of the field with five elements.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(try_from = "i64", into = "u8")]
pub struct F5(u8);

impl F5 {
    pub const ZERO: F5 = F5(0);
    pub const ONE: F5 = F5(1);

    /// Reduces any integer mod 5.
    pub const fn reduce(v: i64) -> F5 {
        F5(v.rem_euclid(5) as u8)
    }

    pub const fn value(self) -> u8 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn inv(self) -> Option<F5> {
        (self.0 != 0).then(|| F5(INV[self.0 as usize]))
    }

    pub fn all() -> impl Iterator<Item = F5> {
        (0..MODULUS).map(F5)
    }
}

impl TryFrom<i64> for F5 {
    type Error = QfError;

    fn try_from(v: i64) -> Result<F5> {
        if (0..5).contains(&v) {
            Ok(F5(v as u8))
        } else {
            Err(QfError::InvalidResidue(v))
        }
    }
}

impl From<F5> for u8 {
    fn from(v: F5) -> u8 {
        v.0
    }
}

impl fmt::Debug for F5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl fmt::Display for F5 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Add for F5 {
    type Output = F5;
    fn add(self, rhs: F5) -> F5 {
        F5((self.0 + rhs.0) % 5)
    }
}

impl AddAssign for F5 {
    fn add_assign(&mut self, rhs: F5) {
        *self = *self + rhs;
    }
}

impl Sub for F5 {
    type Output = F5;
    fn sub(self, rhs: F5) -> F5 {
        F5((self.0 + 5 - rhs.0) % 5)
    }
}

impl Neg for F5 {
    type Output = F5;
    fn neg(self) -> F5 {
        F5((5 - self.0) % 5)
    }
}

impl Mul for F5 {
    type Output = F5;
    fn mul(self, rhs: F5) -> F5 {
        F5((self.0 * rhs.0) % 5)
    }
}

fn residues(values: &[i64]) -> Vec<F5> {
    values.iter().map(|&v| F5::reduce(v)).collect()
}

fn dot(a: &[F5], b: &[F5]) -> F5 {
    a.iter().zip(b).fold(F5::ZERO, |acc, (&x, &y)| acc + x * y)
}

/// The group F_5^n together with its order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "usize", into = "usize")]
pub struct GroupConfig {
    n: usize,
    order: usize,
}

impl TryFrom<usize> for GroupConfig {
    type Error = QfError;
    fn try_from(n: usize) -> Result<GroupConfig> {
        GroupConfig::new(n)
    }
}

impl From<GroupConfig> for usize {
    fn from(cfg: GroupConfig) -> usize {
        cfg.n
    }
}

impl GroupConfig {
    pub fn new(n: usize) -> Result<Self> {
        if n > MAX_DIM {
            return Err(QfError::TooLarge { what: "dimension n", limit: MAX_DIM, got: n });
        }
        Ok(GroupConfig { n, order: 5usize.pow(n as u32) })
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    /// N = 5^n.
    pub fn order(&self) -> usize {
        self.order
    }

    /// 5^axis, the index stride of coordinate `axis`.
    pub fn stride(&self, axis: usize) -> usize {
        5usize.pow(axis as u32)
    }

    pub fn index_to_point(&self, i: usize) -> Result<GroupPoint> {
        if i >= self.order {
            return Err(QfError::IndexOutOfRange { index: i, order: self.order });
        }
        Ok(GroupPoint { coords: self.digits(i) })
    }

    pub fn point_to_index(&self, p: &GroupPoint) -> Result<usize> {
        if p.coords.len() != self.n {
            return Err(QfError::DimensionMismatch { expected: self.n, got: p.coords.len() });
        }
        Ok(self.index_of(&p.coords))
    }

    /// Base-5 digits of `i`, least significant first. `i` must be in range.
    pub fn digits(&self, mut i: usize) -> Vec<F5> {
        let mut out = Vec::with_capacity(self.n);
        for _ in 0..self.n {
            out.push(F5((i % 5) as u8));
            i /= 5;
        }
        out
    }

    pub fn index_of(&self, coords: &[F5]) -> usize {
        coords.iter().rev().fold(0, |acc, c| acc * 5 + c.0 as usize)
    }

    /// Index of x + y.
    pub fn add(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += ((x % 5 + y % 5) % 5) * place;
            place *= 5;
            x /= 5;
            y /= 5;
        }
        out
    }

    /// Index of x - y.
    pub fn sub(&self, mut x: usize, mut y: usize) -> usize {
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += ((x % 5 + 5 - y % 5) % 5) * place;
            place *= 5;
            x /= 5;
            y /= 5;
        }
        out
    }

    /// Index of -x.
    pub fn neg(&self, x: usize) -> usize {
        self.sub(0, x)
    }

    /// Index of c * x.
    pub fn scale(&self, c: u8, mut x: usize) -> usize {
        let c = (c % 5) as usize;
        let mut out = 0;
        let mut place = 1;
        for _ in 0..self.n {
            out += ((x % 5) * c % 5) * place;
            place *= 5;
            x /= 5;
        }
        out
    }

    /// r^T x for two indices.
    pub fn dot(&self, mut r: usize, mut x: usize) -> u8 {
        let mut acc = 0;
        for _ in 0..self.n {
            acc += (r % 5) * (x % 5);
            r /= 5;
            x /= 5;
        }
        (acc % 5) as u8
    }
}

/// A point of G, or equivalently a vector of F_5^n.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupPoint {
    pub coords: Vec<F5>,
}

impl GroupPoint {
    pub fn new(coords: Vec<F5>) -> Self {
        GroupPoint { coords }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        GroupPoint { coords: residues(values) }
    }

    pub fn zero(n: usize) -> Self {
        GroupPoint { coords: vec![F5::ZERO; n] }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }
}

/// A linear form x -> r^T x, identified with its coefficient vector r.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LinearForm {
    pub coeffs: Vec<F5>,
}

impl LinearForm {
    pub fn new(coeffs: Vec<F5>) -> Self {
        LinearForm { coeffs }
    }

    pub fn from_ints(values: &[i64]) -> Self {
        LinearForm { coeffs: residues(values) }
    }

    pub fn zero(n: usize) -> Self {
        LinearForm { coeffs: vec![F5::ZERO; n] }
    }

    /// The coordinate form x -> x_i.
    pub fn basis(n: usize, i: usize) -> Self {
        let mut coeffs = vec![F5::ZERO; n];
        coeffs[i] = F5::ONE;
        LinearForm { coeffs }
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn eval(&self, x: &[F5]) -> F5 {
        dot(&self.coeffs, x)
    }
}

/// A dense rows x cols matrix over F_5.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    entries: Vec<F5>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, entries: vec![F5::ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            m.set(i, i, F5::ONE);
        }
        m
    }

    pub fn from_rows(rows: &[Vec<F5>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        let mut entries = Vec::with_capacity(rows.len() * cols);
        for row in rows {
            if row.len() != cols {
                return Err(QfError::DimensionMismatch { expected: cols, got: row.len() });
            }
            entries.extend_from_slice(row);
        }
        Ok(Matrix { rows: rows.len(), cols, entries })
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        let rows: Vec<Vec<F5>> = rows.iter().map(|r| residues(r)).collect();
        Matrix::from_rows(&rows)
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> F5 {
        self.entries[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: F5) {
        self.entries[i * self.cols + j] = v;
    }

    pub fn row(&self, i: usize) -> &[F5] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn to_rows(&self) -> Vec<Vec<F5>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t.set(j, i, self.get(i, j));
            }
        }
        t
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Reduces to reduced row echelon form in place and returns the pivot columns.
    pub fn rref(&mut self) -> Vec<usize> {
        let mut pivots = Vec::new();
        let mut lead = 0;
        for col in 0..self.cols {
            if lead == self.rows {
                break;
            }
            let Some(p) = (lead..self.rows).find(|&r| !self.get(r, col).is_zero()) else {
                continue;
            };
            for j in 0..self.cols {
                self.entries.swap(lead * self.cols + j, p * self.cols + j);
            }
            let inv = self.get(lead, col).inv().expect("pivot is nonzero");
            for j in 0..self.cols {
                let v = self.get(lead, j) * inv;
                self.set(lead, j, v);
            }
            for r in 0..self.rows {
                let factor = self.get(r, col);
                if r == lead || factor.is_zero() {
                    continue;
                }
                for j in 0..self.cols {
                    let v = self.get(r, j) - factor * self.get(lead, j);
                    self.set(r, j, v);
                }
            }
            pivots.push(col);
            lead += 1;
        }
        pivots
    }

    /// Nonzero rows of the reduced row echelon form: a basis of the row space.
    pub fn row_basis(&self) -> Vec<LinearForm> {
        let mut m = self.clone();
        let pivots = m.rref();
        (0..pivots.len()).map(|i| LinearForm::new(m.row(i).to_vec())).collect()
    }
}

/// Rank over F_5 by exact Gaussian elimination.
pub fn mat_rank(m: &Matrix) -> usize {
    m.clone().rref().len()
}

/// A symmetric n x n matrix over F_5.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct SymMatrix(Matrix);

impl SymMatrix {
    /// Validates symmetry of a square matrix.
    pub fn new(m: Matrix) -> Result<Self> {
        if m.rows != m.cols {
            return Err(QfError::NotSquare { rows: m.rows, cols: m.cols });
        }
        for i in 0..m.rows {
            for j in (i + 1)..m.cols {
                if m.get(i, j) != m.get(j, i) {
                    return Err(QfError::NotSymmetric { row: i, col: j });
                }
            }
        }
        Ok(SymMatrix(m))
    }

    pub fn from_ints(rows: &[Vec<i64>]) -> Result<Self> {
        SymMatrix::new(Matrix::from_ints(rows)?)
    }

    pub fn zero(n: usize) -> Self {
        SymMatrix(Matrix::zeros(n, n))
    }

    pub fn identity(n: usize) -> Self {
        SymMatrix(Matrix::identity(n))
    }

    pub fn diagonal(diag: &[i64]) -> Self {
        let n = diag.len();
        let mut m = Matrix::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, F5::reduce(d));
        }
        SymMatrix(m)
    }

    /// Builds the matrix whose upper triangle, read row by row, is `upper`.
    pub fn from_upper_triangle(n: usize, upper: &[F5]) -> Self {
        debug_assert_eq!(upper.len(), n * (n + 1) / 2);
        let mut m = Matrix::zeros(n, n);
        let mut k = 0;
        for i in 0..n {
            for j in i..n {
                m.set(i, j, upper[k]);
                m.set(j, i, upper[k]);
                k += 1;
            }
        }
        SymMatrix(m)
    }

    pub fn upper_triangle(&self) -> Vec<F5> {
        let n = self.dim();
        let mut out = Vec::with_capacity(n * (n + 1) / 2);
        for i in 0..n {
            for j in i..n {
                out.push(self.get(i, j));
            }
        }
        out
    }

    pub fn dim(&self) -> usize {
        self.0.rows
    }

    pub fn get(&self, i: usize, j: usize) -> F5 {
        self.0.get(i, j)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.0
    }

    pub fn to_rows(&self) -> Vec<Vec<F5>> {
        self.0.to_rows()
    }

    pub fn rank(&self) -> usize {
        mat_rank(&self.0)
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    /// Σ λ_j M_j. All matrices must share the dimension `n`.
    pub fn combination(n: usize, coeffs: &[F5], mats: &[SymMatrix]) -> SymMatrix {
        let mut out = Matrix::zeros(n, n);
        for (&c, m) in coeffs.iter().zip(mats) {
            if c.is_zero() {
                continue;
            }
            for (o, &e) in out.entries.iter_mut().zip(&m.0.entries) {
                *o += c * e;
            }
        }
        SymMatrix(out)
    }

    /// x^T M x.
    pub fn quad_form(&self, x: &[F5]) -> F5 {
        let n = self.dim();
        let mut acc = F5::ZERO;
        for i in 0..n {
            if x[i].is_zero() {
                continue;
            }
            acc += x[i] * dot(self.0.row(i), x);
        }
        acc
    }

    /// x^T M x for every x in G, as residues in index order.
    pub fn quadratic_values(&self, cfg: &GroupConfig) -> Vec<u8> {
        (0..cfg.order()).map(|i| self.quad_form(&cfg.digits(i)).value()).collect()
    }

    /// M x as a vector.
    pub fn apply(&self, x: &[F5]) -> Vec<F5> {
        (0..self.dim()).map(|i| dot(self.0.row(i), x)).collect()
    }
}

impl Serialize for SymMatrix {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_rows().serialize(s)
    }
}

impl<'de> Deserialize<'de> for SymMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let rows: Vec<Vec<F5>> = Vec::deserialize(d)?;
        let m = Matrix::from_rows(&rows).map_err(serde::de::Error::custom)?;
        SymMatrix::new(m).map_err(serde::de::Error::custom)
    }
}

/// ½(M + M^T), computed as 3·(M + M^T) since 2^{-1} = 3 in F_5.
pub fn symmetrize(m: &Matrix) -> Result<SymMatrix> {
    if m.rows != m.cols {
        return Err(QfError::NotSquare { rows: m.rows, cols: m.cols });
    }
    let n = m.rows;
    let half = F5(3);
    let mut out = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            out.set(i, j, half * (m.get(i, j) + m.get(j, i)));
        }
    }
    Ok(SymMatrix(out))
}

/// Rank of a list of forms (the dimension of their span).
pub fn span_rank(forms: &[LinearForm], n: usize) -> usize {
    if forms.is_empty() {
        return 0;
    }
    let rows: Vec<Vec<F5>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    Matrix::from_rows(&rows).map(|m| mat_rank(&m)).unwrap_or_else(|_| {
        debug_assert!(false, "forms of mixed length in span_rank (n = {n})");
        0
    })
}

/// Greedily keeps, in order, the forms that enlarge the span.
pub fn independent_subset(forms: &[LinearForm]) -> Vec<LinearForm> {
    let mut kept: Vec<LinearForm> = Vec::new();
    for f in forms {
        if f.is_zero() {
            continue;
        }
        kept.push(f.clone());
        if span_rank(&kept, f.dim()) < kept.len() {
            kept.pop();
        }
    }
    kept
}

/// Basis of {x : r^T x = 0 for every r in `forms`}.
pub fn null_space(forms: &[LinearForm], cfg: &GroupConfig) -> Result<Vec<GroupPoint>> {
    let n = cfg.dim();
    if let Some(bad) = forms.iter().find(|f| f.dim() != n) {
        return Err(QfError::DimensionMismatch { expected: n, got: bad.dim() });
    }
    if forms.is_empty() {
        return Ok((0..n).map(|i| GroupPoint::new(LinearForm::basis(n, i).coeffs)).collect());
    }
    let rows: Vec<Vec<F5>> = forms.iter().map(|f| f.coeffs.clone()).collect();
    let mut m = Matrix::from_rows(&rows)?;
    let pivots = m.rref();
    let free: Vec<usize> = (0..n).filter(|c| !pivots.contains(c)).collect();
    let basis = free
        .iter()
        .map(|&fc| {
            let mut v = vec![F5::ZERO; n];
            v[fc] = F5::ONE;
            for (row, &pc) in pivots.iter().enumerate() {
                v[pc] = -m.get(row, fc);
            }
            GroupPoint::new(v)
        })
        .collect();
    Ok(basis)
}

/// All indices of the subspace spanned by `basis`.
pub fn span_indices(basis: &[GroupPoint], cfg: &GroupConfig) -> Vec<usize> {
    let mut members = vec![0usize];
    for b in basis {
        let bi = cfg.index_of(&b.coords);
        if members.contains(&bi) {
            continue;
        }
        let mut next = Vec::with_capacity(members.len() * 5);
        for &m in &members {
            let mut p = m;
            for _ in 0..5 {
                next.push(p);
                p = cfg.add(p, bi);
            }
        }
        next.sort_unstable();
        next.dedup();
        members = next;
    }
    members
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(n: usize) -> GroupConfig {
        GroupConfig::new(n).unwrap()
    }

    #[test]
    fn index_point_examples() {
        assert_eq!(cfg(3).index_to_point(0).unwrap(), GroupPoint::from_ints(&[0, 0, 0]));
        assert_eq!(cfg(2).index_to_point(7).unwrap(), GroupPoint::from_ints(&[2, 1]));
        assert_eq!(cfg(3).index_to_point(124).unwrap(), GroupPoint::from_ints(&[4, 4, 4]));
        assert!(matches!(cfg(2).index_to_point(25), Err(QfError::IndexOutOfRange { .. })));
    }

    #[test]
    fn index_round_trip_all_small_dims() {
        for n in 0..=5 {
            let c = cfg(n);
            for i in 0..c.order() {
                let p = c.index_to_point(i).unwrap();
                assert_eq!(c.point_to_index(&p).unwrap(), i);
            }
        }
    }

    #[test]
    fn group_ops_match_coordinates() {
        let c = cfg(3);
        for x in (0..125).step_by(7) {
            for y in (0..125).step_by(11) {
                let (px, py) = (c.digits(x), c.digits(y));
                let sum: Vec<F5> = px.iter().zip(&py).map(|(&a, &b)| a + b).collect();
                let diff: Vec<F5> = px.iter().zip(&py).map(|(&a, &b)| a - b).collect();
                assert_eq!(c.add(x, y), c.index_of(&sum));
                assert_eq!(c.sub(x, y), c.index_of(&diff));
                assert_eq!(c.dot(x, y), dot(&px, &py).value());
            }
            let tripled: Vec<F5> = c.digits(x).iter().map(|&a| F5(3) * a).collect();
            assert_eq!(c.scale(3, x), c.index_of(&tripled));
        }
    }

    #[test]
    fn field_inverses() {
        for a in F5::all().skip(1) {
            assert_eq!(a * a.inv().unwrap(), F5::ONE);
        }
        assert_eq!(F5::ZERO.inv(), None);
        assert_eq!(F5::reduce(-3), F5(2));
    }

    #[test]
    fn rank_examples() {
        assert_eq!(mat_rank(&Matrix::zeros(3, 3)), 0);
        assert_eq!(mat_rank(&Matrix::identity(3)), 3);
        assert_eq!(mat_rank(&Matrix::from_ints(&[vec![1, 2], vec![2, 4]]).unwrap()), 1);
    }

    #[test]
    fn symmetrize_examples() {
        let m = Matrix::from_ints(&[vec![0, 1], vec![0, 0]]).unwrap();
        let s = symmetrize(&m).unwrap();
        assert_eq!(s, SymMatrix::from_ints(&[vec![0, 3], vec![3, 0]]).unwrap());
        let sym = SymMatrix::from_ints(&[vec![1, 2], vec![2, 4]]).unwrap();
        assert_eq!(symmetrize(sym.matrix()).unwrap(), sym);
        assert!(symmetrize(&Matrix::zeros(2, 2)).unwrap().is_zero());
    }

    #[test]
    fn null_space_examples() {
        let c = cfg(2);
        assert_eq!(null_space(&[], &c).unwrap().len(), 2);
        assert_eq!(
            null_space(&[LinearForm::from_ints(&[1, 0])], &c).unwrap(),
            vec![GroupPoint::from_ints(&[0, 1])]
        );
        let full = [LinearForm::from_ints(&[1, 1]), LinearForm::from_ints(&[1, 2])];
        assert!(null_space(&full, &c).unwrap().is_empty());
    }

    #[test]
    fn null_space_vectors_are_annihilated() {
        let c = cfg(3);
        let forms = [LinearForm::from_ints(&[1, 2, 3]), LinearForm::from_ints(&[2, 4, 1])];
        for v in null_space(&forms, &c).unwrap() {
            for f in &forms {
                assert!(f.eval(&v.coords).is_zero());
            }
        }
    }

    #[test]
    fn not_symmetric_is_rejected() {
        let m = Matrix::from_ints(&[vec![0, 1], vec![2, 0]]).unwrap();
        assert!(matches!(SymMatrix::new(m), Err(QfError::NotSymmetric { row: 0, col: 1 })));
    }

    #[test]
    fn span_indices_counts() {
        let c = cfg(2);
        assert_eq!(span_indices(&[], &c), vec![0]);
        assert_eq!(span_indices(&[GroupPoint::from_ints(&[1, 1])], &c).len(), 5);
        let basis = null_space(&[], &c).unwrap();
        assert_eq!(span_indices(&basis, &c).len(), 25);
    }

    #[test]
    fn quad_form_identity() {
        let m = SymMatrix::identity(2);
        assert_eq!(m.quad_form(&[F5(1), F5(2)]), F5::ZERO);
        assert_eq!(m.quad_form(&[F5(1), F5(1)]), F5(2));
    }
}

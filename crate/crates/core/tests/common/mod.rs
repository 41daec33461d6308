//! Independent reference implementations used as test oracles. They work on
//! raw base-5 digit vectors and compute roots of unity with `exp`, sharing
//! no code paths with the library kernels.
#![allow(dead_code)]

use std::f64::consts::TAU;

use num_complex::Complex64;
use quadfourier::field::GroupConfig;
use quadfourier::fourier::DenseFunction;
use quadfourier::harness::rng::SeededRng;

pub fn omega(k: i64) -> Complex64 {
    Complex64::from_polar(1.0, TAU * (k.rem_euclid(5) as f64) / 5.0)
}

pub fn digits(mut i: usize, n: usize) -> Vec<i64> {
    (0..n)
        .map(|_| {
            let d = (i % 5) as i64;
            i /= 5;
            d
        })
        .collect()
}

pub fn index(d: &[i64]) -> usize {
    d.iter().rev().fold(0usize, |acc, &v| acc * 5 + v.rem_euclid(5) as usize)
}

pub fn add(x: usize, y: usize, n: usize) -> usize {
    let (a, b) = (digits(x, n), digits(y, n));
    index(&a.iter().zip(&b).map(|(p, q)| p + q).collect::<Vec<_>>())
}

pub fn scale(c: i64, x: usize, n: usize) -> usize {
    index(&digits(x, n).iter().map(|v| c * v).collect::<Vec<_>>())
}

pub fn dot(x: usize, y: usize, n: usize) -> i64 {
    digits(x, n).iter().zip(digits(y, n)).map(|(p, q)| p * q).sum()
}

pub fn quad(m: &[Vec<i64>], x: &[i64]) -> i64 {
    let n = x.len();
    (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| m[i][j] * x[i] * x[j]).sum()
}

/// f̂(r) = N^{-1} Σ_x f(x) ω^{r·x}.
pub fn naive_dft(vals: &[Complex64], n: usize) -> Vec<Complex64> {
    let big = vals.len();
    (0..big)
        .map(|r| (0..big).map(|x| vals[x] * omega(dot(r, x, n))).sum::<Complex64>() / big as f64)
        .collect()
}

/// Rank over F_5 as log_5 of the size of the row space, by enumeration.
pub fn brute_rank(rows: &[Vec<i64>]) -> usize {
    let k = rows.len();
    if k == 0 {
        return 0;
    }
    let cols = rows[0].len();
    let mut seen = std::collections::BTreeSet::new();
    for c in 0..5usize.pow(k as u32) {
        let coeffs = digits(c, k);
        let v: Vec<i64> = (0..cols)
            .map(|j| (0..k).map(|i| coeffs[i] * rows[i][j]).sum::<i64>().rem_euclid(5))
            .collect();
        seen.insert(v);
    }
    let mut r = 0;
    while 5usize.pow(r as u32) < seen.len() {
        r += 1;
    }
    r
}

/// ∥f∥_{U^k}^{2^k} by enumerating every (x, h_1..h_k).
pub fn brute_gowers_power(vals: &[Complex64], n: usize, k: usize) -> f64 {
    let big = vals.len();
    let mut total = Complex64::new(0.0, 0.0);
    for x in 0..big {
        for hs in 0..big.pow(k as u32) {
            let h: Vec<usize> = (0..k).map(|i| hs / big.pow(i as u32) % big).collect();
            let mut prod = Complex64::new(1.0, 0.0);
            for v in 0..(1usize << k) {
                let mut y = x;
                for (i, hi) in h.iter().enumerate() {
                    if v >> i & 1 == 1 {
                        y = add(y, *hi, n);
                    }
                }
                let val = vals[y];
                prod *= if v.count_ones() % 2 == 1 { val.conj() } else { val };
            }
            total += prod;
        }
    }
    total.re / (big as f64).powi(k as i32 + 1)
}

/// E_{x,d} Π_i f_i(x + i d).
pub fn brute_lambda(fs: &[&[Complex64]], n: usize, weight: Option<&[Complex64]>) -> Complex64 {
    let big = fs[0].len();
    let mut total = Complex64::new(0.0, 0.0);
    for x in 0..big {
        for d in 0..big {
            let mut p = weight.map_or(Complex64::new(1.0, 0.0), |w| w[d]);
            for (i, f) in fs.iter().enumerate() {
                p *= f[add(x, scale(i as i64, d, n), n)];
            }
            total += p;
        }
    }
    total / (big * big) as f64
}

pub fn cfg(n: usize) -> GroupConfig {
    GroupConfig::new(n).unwrap()
}

pub fn func(n: usize, vals: Vec<Complex64>) -> DenseFunction {
    DenseFunction::new(cfg(n), vals).unwrap()
}

pub fn plus_minus(n: usize, rng: &mut SeededRng) -> DenseFunction {
    let vals: Vec<f64> = (0..5usize.pow(n as u32)).map(|_| if rng.uniform() < 0.5 { 1.0 } else { -1.0 }).collect();
    DenseFunction::from_real(cfg(n), &vals).unwrap()
}

//! Fundamental-region sums `Sigma(n)` and related summatory functions.
//!
//! `Sigma_i(n)` sums the state component `f_i(m)` over `k^n <= m < k^{n+1}`.
//! Level 0 starts at `m = 1`, so `Sigma(0) = B_1 w + ... + B_{k-1} w` and
//! `Sigma(n) = B Sigma(n-1)`.

use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linrep::{DigitWord, LinearRepresentation};
use crate::matrix::{dot, QMatrix};
use crate::rational::{self, Rational};

/// Oracle enumeration limit.
pub const BRUTE_LIMIT: u64 = 1 << 24;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SigmaVector {
    pub level: u32,
    pub values: Vec<Rational>,
}

/// `Sigma(0) = sum_{a=1}^{k-1} B_a w`.
pub fn sigma_zero(rep: &LinearRepresentation) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); rep.dim()];
    for b in &rep.digit_matrices()[1..] {
        let v = b.mul_vec(rep.terminal());
        for (a, x) in acc.iter_mut().zip(v) {
            *a += x;
        }
    }
    acc
}

pub fn sigma_vector(rep: &LinearRepresentation, n: u32) -> SigmaVector {
    let b = rep.digit_sum();
    let mut v = sigma_zero(rep);
    for _ in 0..n {
        v = b.mul_vec(&v);
    }
    SigmaVector { level: n, values: v }
}

/// `Sigma(0), ..., Sigma(n_max)`.
pub fn sigma_sequence(rep: &LinearRepresentation, n_max: u32) -> Vec<SigmaVector> {
    let b = rep.digit_sum();
    let mut v = sigma_zero(rep);
    let mut out = Vec::with_capacity(n_max as usize + 1);
    for n in 0..=n_max {
        if n > 0 {
            v = b.mul_vec(&v);
        }
        out.push(SigmaVector {
            level: n,
            values: v.clone(),
        });
    }
    out
}

fn level_bounds(k: u64, n: u32) -> Result<(u64, u64)> {
    let guard = Error::SizeGuard {
        what: "k^(n+1)",
        limit: BRUTE_LIMIT,
    };
    let hi = k.checked_pow(n + 1).filter(|&h| h <= BRUTE_LIMIT).ok_or(guard)?;
    Ok((hi / k, hi))
}

/// `Sigma(n)` by summing state vectors over the fundamental region directly.
pub fn brute_sigma(rep: &LinearRepresentation, n: u32) -> Result<SigmaVector> {
    let (lo, hi) = level_bounds(rep.base() as u64, n)?;
    let mut acc = vec![Rational::zero(); rep.dim()];
    for m in lo..hi {
        for (a, x) in acc.iter_mut().zip(rep.state_vector(m)) {
            *a += x;
        }
    }
    Ok(SigmaVector { level: n, values: acc })
}

/// `sum_{m=0}^{x} f(m)` by enumeration, for `x <= 2^24`.
pub fn partial_sum(rep: &LinearRepresentation, x: u64) -> Result<Rational> {
    if x > BRUTE_LIMIT {
        return Err(Error::SizeGuard {
            what: "partial-sum bound",
            limit: BRUTE_LIMIT,
        });
    }
    let k = rep.base() as u64;
    // States up to x / k are kept; every later state is derived from one of them.
    let keep = (x / k) as usize;
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(keep + 1);
    let mut total = vec![Rational::zero(); rep.dim()];
    for m in 0..=x {
        let state = if m == 0 {
            rep.terminal().to_vec()
        } else {
            rep.digit_matrix((m % k) as usize)
                .mul_vec(&table[(m / k) as usize])
        };
        for (t, s) in total.iter_mut().zip(&state) {
            *t += s;
        }
        if (m as usize) <= keep {
            table.push(state);
        }
    }
    Ok(dot(rep.selector(), &total))
}

/// `sum_{0 <= j < x} f(j)` (the state-vector prefix sum) by block decomposition.
///
/// Cost is linear in the number of base-`k` digits of `x`.
pub fn prefix_state_sum(rep: &LinearRepresentation, x: &BigUint) -> Vec<Rational> {
    let d = rep.dim();
    if x.is_zero() {
        return vec![Rational::zero(); d];
    }
    let word = DigitWord::from_biguint(x, rep.base()).expect("valid base");
    let digits = word.digits();
    let s = digits.len() - 1;
    let b = rep.digit_sum();

    // Cumulative digit sums C[t] = B_0 + ... + B_{t-1}.
    let mut cumulative = Vec::with_capacity(rep.base() as usize + 1);
    cumulative.push(QMatrix::zeros(d, d));
    for m in rep.digit_matrices() {
        let next = cumulative.last().unwrap().add(m);
        cumulative.push(next);
    }

    // w plus every complete length below the top length.
    let mut total = rep.terminal().to_vec();
    let mut sig = sigma_zero(rep);
    for _ in 0..s {
        for (t, v) in total.iter_mut().zip(&sig) {
            *t += v;
        }
        sig = b.mul_vec(&sig);
    }

    // Numbers of the top length below x, scanned from the top digit down.
    let mut acc = vec![Rational::zero(); d];
    let mut prefix = rep.terminal().to_vec();
    for p in (0..=s).rev() {
        let xp = digits[p] as usize;
        let range = if p == s {
            cumulative[xp].sub(&cumulative[1])
        } else {
            cumulative[xp].clone()
        };
        let term = range.mul_vec(&prefix);
        acc = b.mul_vec(&acc);
        for (a, t) in acc.iter_mut().zip(term) {
            *a += t;
        }
        prefix = rep.digit_matrix(xp).mul_vec(&prefix);
    }
    for (t, a) in total.iter_mut().zip(acc) {
        *t += a;
    }
    total
}

/// `sum_{m=0}^{x} f(m)` through [`prefix_state_sum`]; no size limit.
pub fn summatory(rep: &LinearRepresentation, x: &BigUint) -> Rational {
    dot(rep.selector(), &prefix_state_sum(rep, &(x + 1u32)))
}

/// Estimated growth of `Sigma_1(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct GrowthReport {
    pub n_max: u32,
    pub rho_hat: f64,
    /// Polynomial order: `Sigma_1(n) ~ c n^ell rho^n`.
    pub ell_hat: usize,
    /// Successive ratios `|Sigma_1(n) / Sigma_1(n-1)|` for `n = 1..=n_max`.
    pub ratios: Vec<f64>,
    pub converged: bool,
    /// `Sigma_j(n_max - 1) / Sigma_i(n_max)` at row `i`, column `j`; `None` where `Sigma_i(n_max) = 0`.
    pub quotients: Vec<Vec<Option<f64>>>,
    /// `Sigma_i(n_max) / (n_max^ell rho_hat^n_max)`.
    pub c_estimates: Vec<f64>,
}

fn least_squares_rss(xs: &[f64], ys: &[f64]) -> f64 {
    let n = xs.len() as f64;
    let mx = xs.iter().sum::<f64>() / n;
    let my = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - mx) * (x - mx)).sum();
    let sxy: f64 = xs.iter().zip(ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let slope = if sxx > 0.0 { sxy / sxx } else { 0.0 };
    xs.iter()
        .zip(ys)
        .map(|(x, y)| {
            let r = y - my - slope * (x - mx);
            r * r
        })
        .sum()
}

pub fn sigma_growth(rep: &LinearRepresentation, n_max: u32) -> Result<GrowthReport> {
    if n_max < 4 {
        return Err(Error::domain("growth estimation needs n_max >= 4"));
    }
    let seq = sigma_sequence(rep, n_max);
    if let Some(s) = seq.iter().find(|s| s.values[0].is_zero()) {
        return Err(Error::VanishingSum { level: s.level });
    }
    let logs: Vec<f64> = seq
        .iter()
        .map(|s| rational::ln_abs_ratio(&s.values[0]))
        .collect();
    let ratios: Vec<f64> = logs.windows(2).map(|w| libm::exp(w[1] - w[0])).collect();

    // Fit over the upper half of the levels, skipping n = 0 where log n is undefined.
    let start = (n_max / 2).max(1) as usize;
    let xs: Vec<f64> = (start..=n_max as usize).map(|n| n as f64).collect();
    let mut best = (0usize, f64::INFINITY);
    for ell in 0..rep.dim() {
        let ys: Vec<f64> = xs
            .iter()
            .map(|&n| logs[n as usize] - ell as f64 * libm::log(n))
            .collect();
        let rss = least_squares_rss(&xs, &ys);
        if rss < best.1 - 1e-12 * (1.0 + best.1.abs()) || best.1.is_infinite() {
            best = (ell, rss);
        }
    }
    let ell_hat = best.0;

    let n = n_max as f64;
    let last = *ratios.last().unwrap();
    let rho_hat = last * libm::pow((n - 1.0) / n, ell_hat as f64);

    let quarter = ((n_max / 4).max(2)) as usize;
    let tail = &ratios[ratios.len() - quarter..];
    let max_change = tail
        .windows(2)
        .map(|w| ((w[1] - w[0]) / w[0]).abs())
        .fold(0.0, f64::max);
    let converged = max_change <= 0.01;

    let top = &seq[n_max as usize].values;
    let prev = &seq[n_max as usize - 1].values;
    let quotients = top
        .iter()
        .map(|si| {
            prev.iter()
                .map(|sj| (!si.is_zero()).then(|| rational::to_f64(&(sj / si))))
                .collect()
        })
        .collect();
    let scale_ln = ell_hat as f64 * libm::log(n) + n * libm::log(rho_hat);
    let c_estimates = top
        .iter()
        .map(|s| {
            if s.is_zero() {
                0.0
            } else {
                let sign = if s.numer().sign() == num_bigint::Sign::Minus { -1.0 } else { 1.0 };
                sign * libm::exp(rational::ln_abs_ratio(s) - scale_ln)
            }
        })
        .collect();

    Ok(GrowthReport {
        n_max,
        rho_hat,
        ell_hat,
        ratios,
        converged,
        quotients,
        c_estimates,
    })
}

/// `k^n` as a big integer.
pub(crate) fn big_pow(k: u32, n: u32) -> BigUint {
    num_traits::pow(BigUint::from(k), n as usize)
}

//! Approximant measures on the torus and the objects built from them.
//!
//! At level `n` the component `i` puts weight `f_i(k^n + m) / Sigma_i(n)` on the
//! point `m / (k^n (k-1))` for `0 <= m < k^{n+1} - k^n`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::f64::consts::PI;

use num_bigint::{BigInt, BigUint};
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::linrep::{LinearRepresentation, MatrixPolynomial};
use crate::matrix::{dot, CMatrix, Matrix, QMatrix};
use crate::rational::{self, Rational};
use crate::sums::{self, big_pow, BRUTE_LIMIT};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PurePointMeasure {
    pub level: u32,
    pub base: u32,
    pub weights: Vec<Rational>,
}

impl PurePointMeasure {
    /// Grid denominator `k^n (k-1)`.
    pub fn denominator(&self) -> u64 {
        (self.base as u64).pow(self.level) * (self.base as u64 - 1)
    }

    pub fn point(&self, m: usize) -> Rational {
        Rational::new(BigInt::from(m), BigInt::from(self.denominator()))
    }

    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn total(&self) -> Rational {
        self.weights.iter().fold(Rational::zero(), |a, w| a + w)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MeasureVector {
    pub level: u32,
    pub base: u32,
    pub components: Vec<PurePointMeasure>,
}

fn nonzero_sigma(sigma: &[Rational], level: u32) -> Result<()> {
    match sigma.iter().position(Zero::is_zero) {
        Some(i) => Err(Error::DegenerateNormalisation {
            level,
            component: i + 1,
        }),
        None => Ok(()),
    }
}

fn region_guard(k: u32, n: u32) -> Result<()> {
    match (k as u64).checked_pow(n + 1) {
        Some(h) if h <= BRUTE_LIMIT => Ok(()),
        _ => Err(Error::SizeGuard {
            what: "k^(n+1)",
            limit: BRUTE_LIMIT,
        }),
    }
}

/// State vectors on the fundamental region `[k^n, k^{n+1})`, in order.
fn region_states(rep: &LinearRepresentation, n: u32) -> Vec<Vec<Rational>> {
    let k = rep.base() as usize;
    let mut states: Vec<Vec<Rational>> = (1..k)
        .map(|a| rep.digit_matrix(a).mul_vec(rep.terminal()))
        .collect();
    for _ in 0..n {
        let mut next = Vec::with_capacity(states.len() * k);
        for s in &states {
            for a in 0..k {
                next.push(rep.digit_matrix(a).mul_vec(s));
            }
        }
        states = next;
    }
    states
}

pub fn approximant(rep: &LinearRepresentation, n: u32) -> Result<MeasureVector> {
    region_guard(rep.base(), n)?;
    let sigma = sums::sigma_vector(rep, n).values;
    nonzero_sigma(&sigma, n)?;
    let states = region_states(rep, n);
    let components = sigma
        .iter()
        .enumerate()
        .map(|(i, s)| PurePointMeasure {
            level: n,
            base: rep.base(),
            weights: states.iter().map(|st| &st[i] / s).collect(),
        })
        .collect();
    Ok(MeasureVector {
        level: n,
        base: rep.base(),
        components,
    })
}

/// The normalised matrix polynomial `A_n(z)_{ij} = Sigma_j(n-1) b_ij(z) / Sigma_i(n)`.
#[derive(Clone, Debug, PartialEq)]
pub struct CocycleMatrix {
    pub level: u32,
    pub sigma_prev: Vec<Rational>,
    pub sigma: Vec<Rational>,
    pub polynomial: MatrixPolynomial,
}

impl CocycleMatrix {
    /// Exact coefficient of `z^a`.
    pub fn coefficient(&self, a: usize) -> QMatrix {
        let b = &self.polynomial.coefficients()[a];
        let d = b.rows();
        let mut out = QMatrix::zeros(d, d);
        for i in 0..d {
            for j in 0..d {
                out.set(i, j, &self.sigma_prev[j] * b.get(i, j) / &self.sigma[i]);
            }
        }
        out
    }

    pub fn at_one(&self) -> QMatrix {
        let d = self.sigma.len();
        (0..self.polynomial.coefficients().len())
            .fold(QMatrix::zeros(d, d), |acc, a| acc.add(&self.coefficient(a)))
    }

    pub fn evaluate_at(&self, z: Complex64) -> CMatrix {
        let d = self.sigma.len();
        let mut out = CMatrix::zeros(d, d);
        let mut zp = Complex64::one();
        for a in 0..self.polynomial.coefficients().len() {
            let c = self.coefficient(a);
            for i in 0..d {
                for j in 0..d {
                    let v = *out.get(i, j) + zp * rational::to_f64(c.get(i, j));
                    out.set(i, j, v);
                }
            }
            zp *= z;
        }
        out
    }
}

pub fn cocycle_matrix(rep: &LinearRepresentation, n: u32) -> Result<CocycleMatrix> {
    if n == 0 {
        return Err(Error::domain("the cocycle starts at level 1"));
    }
    let sigma_prev = sums::sigma_vector(rep, n - 1).values;
    let sigma = rep.digit_sum().mul_vec(&sigma_prev);
    nonzero_sigma(&sigma, n)?;
    Ok(CocycleMatrix {
        level: n,
        sigma_prev,
        sigma,
        polynomial: rep.matrix_polynomial(),
    })
}

/// One application of `A_n(delta_{1/(k^n (k-1))})` to the level `n-1` measures.
pub fn refine_step(rep: &LinearRepresentation, prev: &MeasureVector) -> Result<MeasureVector> {
    let n = prev.level + 1;
    if prev.base != rep.base() || prev.components.len() != rep.dim() {
        return Err(Error::shape("measure vector does not match the representation"));
    }
    region_guard(rep.base(), n)?;
    let a_n = cocycle_matrix(rep, n)?;
    let k = rep.base() as usize;
    let d = rep.dim();
    let len = prev.components[0].len() * k;
    let coeffs: Vec<QMatrix> = (0..k).map(|a| a_n.coefficient(a)).collect();
    let components = (0..d)
        .map(|i| {
            let mut weights = vec![Rational::zero(); len];
            for (a, c) in coeffs.iter().enumerate() {
                for j in 0..d {
                    let cij = c.get(i, j);
                    if cij.is_zero() {
                        continue;
                    }
                    for (l, w) in prev.components[j].weights.iter().enumerate() {
                        weights[k * l + a] += cij * w;
                    }
                }
            }
            PurePointMeasure {
                level: n,
                base: rep.base(),
                weights,
            }
        })
        .collect();
    Ok(MeasureVector {
        level: n,
        base: rep.base(),
        components,
    })
}

/// Which endpoint convention a distribution function uses.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Interval {
    /// `[0, x]`
    Closed,
    /// `[0, x)`
    HalfOpen,
}

/// Number of support indices of level `n` inside `[0, x]` or `[0, x)`.
fn support_count(k: u32, n: u32, x: &Rational, conv: Interval) -> BigUint {
    let grid = big_pow(k, n) * BigUint::from(k - 1);
    let scaled = x * Rational::from_integer(BigInt::from(grid.clone()));
    let c = match conv {
        Interval::Closed => scaled.floor().to_integer() + 1,
        Interval::HalfOpen => scaled.ceil().to_integer(),
    };
    let c = c.max(BigInt::zero()).to_biguint().unwrap();
    c.min(grid)
}

fn check_unit(x: &Rational) -> Result<()> {
    if x.is_negative() || *x > Rational::one() {
        return Err(Error::domain(format!("{} is outside [0, 1]", rational::format_rational(x))));
    }
    Ok(())
}

/// Prefix mass vector `sum_{m < count} f(k^n + m)` (unnormalised).
fn region_prefix(rep: &LinearRepresentation, n: u32, count: &BigUint) -> Vec<Rational> {
    let start = big_pow(rep.base(), n);
    let hi = sums::prefix_state_sum(rep, &(&start + count));
    let lo = sums::prefix_state_sum(rep, &start);
    hi.into_iter().zip(lo).map(|(h, l)| h - l).collect()
}

/// `mu_{n,i}([0, x])` (or `[0, x)`) for every component, by block sums.
pub fn empirical_cdf(
    rep: &LinearRepresentation,
    n: u32,
    x: &Rational,
    conv: Interval,
) -> Result<Vec<Rational>> {
    check_unit(x)?;
    let sigma = sums::sigma_vector(rep, n).values;
    nonzero_sigma(&sigma, n)?;
    let count = support_count(rep.base(), n, x, conv);
    Ok(region_prefix(rep, n, &count)
        .into_iter()
        .zip(&sigma)
        .map(|(p, s)| p / s)
        .collect())
}

/// The distribution function of the selected sequence `f = L f`.
pub fn empirical_cdf_selected(
    rep: &LinearRepresentation,
    n: u32,
    x: &Rational,
    conv: Interval,
) -> Result<Rational> {
    check_unit(x)?;
    let total = dot(rep.selector(), &sums::sigma_vector(rep, n).values);
    if total.is_zero() {
        return Err(Error::VanishingSum { level: n });
    }
    let count = support_count(rep.base(), n, x, conv);
    Ok(dot(rep.selector(), &region_prefix(rep, n, &count)) / total)
}

/// `sum_m w_m exp(-2 pi i t m / (k^n (k-1)))`, accumulated in support order.
pub fn fourier_empirical(measure: &PurePointMeasure, t: i64) -> Complex64 {
    let den = measure.denominator() as i128;
    let mut acc = Complex64::zero();
    for (m, w) in measure.weights.iter().enumerate() {
        let r = ((t as i128) * (m as i128)).rem_euclid(den);
        let ang = -2.0 * PI * (r as f64) / (den as f64);
        acc += Complex64::new(libm::cos(ang), libm::sin(ang)) * rational::to_f64(w);
    }
    acc
}

/// Fourier coefficients of the level-0 measures.
fn fourier_level_zero(rep: &LinearRepresentation, t: f64) -> Result<Vec<Complex64>> {
    let sigma = sums::sigma_zero(rep);
    nonzero_sigma(&sigma, 0)?;
    let k = rep.base() as usize;
    let states: Vec<Vec<Rational>> = (1..k)
        .map(|a| rep.digit_matrix(a).mul_vec(rep.terminal()))
        .collect();
    Ok((0..rep.dim())
        .map(|i| {
            states
                .iter()
                .enumerate()
                .map(|(l, st)| {
                    let ang = -2.0 * PI * t * l as f64 / (k - 1) as f64;
                    Complex64::new(libm::cos(ang), libm::sin(ang))
                        * rational::to_f64(&(&st[i] / &sigma[i]))
                })
                .fold(Complex64::zero(), |a, b| a + b)
        })
        .collect())
}

fn apply(m: &CMatrix, v: &[Complex64]) -> Vec<Complex64> {
    m.mul_vec(v)
}

/// Truncated infinite product `A_N(z_N) ... A_1(z_1) mu_0^(t)`.
#[derive(Clone, Debug, PartialEq)]
pub struct FourierProduct {
    pub t: f64,
    pub truncation: u32,
    pub values: Vec<Complex64>,
    /// `max_i |value_N - value_{N-1}|`.
    pub last_delta: f64,
}

/// `z_n = exp(-2 pi i t / (k^n (k-1)))`.
pub fn twiddle(k: u32, n: u32, t: f64) -> Complex64 {
    let den = libm::pow(k as f64, n as f64) * (k - 1) as f64;
    let ang = -2.0 * PI * t / den;
    Complex64::new(libm::cos(ang), libm::sin(ang))
}

/// Levels `0..=truncation` of the Fourier recursion.
pub fn fourier_levels(rep: &LinearRepresentation, t: f64, truncation: u32) -> Result<Vec<Vec<Complex64>>> {
    let mut v = fourier_level_zero(rep, t)?;
    let mut out = Vec::with_capacity(truncation as usize + 1);
    out.push(v.clone());
    for n in 1..=truncation {
        let a = cocycle_matrix(rep, n)?;
        v = apply(&a.evaluate_at(twiddle(rep.base(), n, t)), &v);
        out.push(v.clone());
    }
    Ok(out)
}

pub fn fourier_product(rep: &LinearRepresentation, t: f64, truncation: u32) -> Result<FourierProduct> {
    let levels = fourier_levels(rep, t, truncation)?;
    let last = levels.last().unwrap();
    let last_delta = if levels.len() >= 2 {
        let prev = &levels[levels.len() - 2];
        last.iter()
            .zip(prev)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    } else {
        0.0
    };
    Ok(FourierProduct {
        t,
        truncation,
        values: last.clone(),
        last_delta,
    })
}

/// Tolerance for componentwise agreement and stabilisation.
pub const UNIQUENESS_TOL: f64 = 1e-5;

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessEntry {
    pub t: f64,
    pub max_deviation: f64,
    pub mean: Complex64,
    pub last_delta: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct UniquenessReport {
    pub truncation: u32,
    pub entries: Vec<UniquenessEntry>,
    /// Every component agrees within [`UNIQUENESS_TOL`] at every `t`.
    pub pass: bool,
    /// Every product changed by at most [`UNIQUENESS_TOL`] in its last step.
    pub stabilised: bool,
    /// The representation is not primitive, so agreement is not predicted.
    pub advisory: bool,
}

pub fn uniqueness_check(rep: &LinearRepresentation, ts: &[f64], truncation: u32) -> Result<UniquenessReport> {
    let mut entries = Vec::with_capacity(ts.len());
    for &t in ts {
        let p = fourier_product(rep, t, truncation)?;
        let mut dev: f64 = 0.0;
        for a in &p.values {
            for b in &p.values {
                dev = dev.max((a - b).norm());
            }
        }
        let mean = p.values.iter().sum::<Complex64>() / p.values.len() as f64;
        entries.push(UniquenessEntry {
            t,
            max_deviation: dev,
            mean,
            last_delta: p.last_delta,
        });
    }
    let pass = entries.iter().all(|e| e.max_deviation <= UNIQUENESS_TOL);
    let stabilised = entries.iter().all(|e| e.last_delta <= UNIQUENESS_TOL);
    Ok(UniquenessReport {
        truncation,
        entries,
        pass,
        stabilised,
        advisory: !crate::spectral::is_primitive_rep(rep).primitive,
    })
}

/// A fraction kept in unreduced form; equality is by cross-multiplication.
#[derive(Clone, Debug)]
pub struct ExactFraction {
    pub numer: BigInt,
    pub denom: BigInt,
}

impl ExactFraction {
    pub fn to_f64(&self) -> f64 {
        rational::ratio_to_f64(&self.numer, &self.denom)
    }

    pub fn reduced(&self) -> Rational {
        Rational::new(self.numer.clone(), self.denom.clone())
    }
}

impl PartialEq for ExactFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.numer * &other.denom == &other.numer * &self.denom
    }
}

impl Eq for ExactFraction {}

impl From<Rational> for ExactFraction {
    fn from(q: Rational) -> Self {
        let (numer, denom) = q.into_raw();
        ExactFraction { numer, denom }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanPoint {
    pub level: u32,
    /// `None` when `L Sigma(n) = 0`.
    pub mass: Option<ExactFraction>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ScanSeries {
    pub points: Vec<ScanPoint>,
}

impl ScanSeries {
    pub fn max_abs(&self) -> f64 {
        self.points
            .iter()
            .filter_map(|p| p.mass.as_ref())
            .map(|m| m.to_f64().abs())
            .fold(0.0, f64::max)
    }

    /// First level starting a run of `len` equal consecutive masses.
    pub fn constant_window(&self, len: usize) -> Option<u32> {
        if len == 0 {
            return None;
        }
        let mut run = 1usize;
        for i in 1..self.points.len() {
            let same = match (&self.points[i].mass, &self.points[i - 1].mass) {
                (Some(a), Some(b)) => a == b,
                (None, None) => true,
                _ => false,
            };
            run = if same { run + 1 } else { 1 };
            if run >= len {
                return Some(self.points[i + 1 - len].level);
            }
        }
        (len == 1 && !self.points.is_empty()).then(|| self.points[0].level)
    }
}

/// `x = c / k^e` with `0 <= c <= k^e`, or an error when `x` is not `k`-adic in `[0, 1]`.
fn k_adic(x: &Rational, k: u32) -> Result<(BigUint, u32)> {
    check_unit(x)?;
    let den = x.denom().to_biguint().expect("positive denominator");
    // Each prime of the denominator divides k, so e never exceeds its bit length.
    for e in 0..=den.bits() as u32 {
        let ke = big_pow(k, e);
        if (&ke % &den).is_zero() {
            let c = x.numer().to_biguint().expect("nonnegative") * (ke / &den);
            return Ok((c, e));
        }
    }
    Err(Error::domain(format!(
        "{} is not a {k}-adic rational",
        rational::format_rational(x)
    )))
}

/// Integer vector `v * scale` with the smallest positive `scale` making it integral.
fn integral(v: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let scale = v.iter().fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let ints = v
        .iter()
        .map(|q| (q * Rational::from_integer(scale.clone())).to_integer())
        .collect();
    (ints, scale)
}

/// Masses `mu_{f,n}([a, b))` for `n_from <= n <= n_max` using exact block sums.
///
/// Past the resolution of the endpoints each level costs two integer
/// matrix-vector products, so long scans stay cheap.
pub fn scan_interval(
    rep: &LinearRepresentation,
    a: &Rational,
    b: &Rational,
    n_from: u32,
    n_max: u32,
) -> Result<ScanSeries> {
    let k = rep.base();
    let (ca, ea) = k_adic(a, k)?;
    let (cb, eb) = k_adic(b, k)?;
    if a > b {
        return Err(Error::domain("interval endpoints are reversed"));
    }
    let e = ea.max(eb);
    let ca = ca * big_pow(k, e - ea);
    let cb = cb * big_pow(k, e - eb);

    // Integer digit matrices D B_a.
    let den = rep
        .digit_matrices()
        .iter()
        .flat_map(|m| m.entries().iter())
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()));
    let dq = Rational::from_integer(den.clone());
    let big_b: Matrix<BigInt> = rep.digit_sum().scale(&dq).map(|q| q.to_integer());
    let (sel, _) = integral(rep.selector());

    // G = S(Y_b) - S(Y_a) with Y = k^e + c (k - 1).
    let km1 = BigUint::from(k - 1);
    let ke = big_pow(k, e);
    let ya = &ke + &ca * &km1;
    let yb = &ke + &cb * &km1;
    let g: Vec<Rational> = sums::prefix_state_sum(rep, &yb)
        .into_iter()
        .zip(sums::prefix_state_sum(rep, &ya))
        .map(|(x, y)| x - y)
        .collect();
    let (g_int, g_scale) = integral(&g);
    let (s_int, s_scale) = integral(&sums::sigma_zero(rep));
    let num_factor = num_traits::pow(den.clone(), e as usize) * &s_scale;

    let mut points = Vec::new();
    let mut sigma = s_int;
    let mut block = g_int;
    for n in 0..=n_max {
        if n > 0 {
            sigma = big_b.mul_vec(&sigma);
        }
        if n > e {
            block = big_b.mul_vec(&block);
        }
        if n < n_from {
            continue;
        }
        let total = dot(&sel, &sigma);
        let mass = if total.is_zero() {
            None
        } else if n >= e {
            Some(ExactFraction {
                numer: dot(&sel, &block) * &num_factor,
                denom: total * &g_scale,
            })
        } else {
            // Below the endpoint resolution: count support points directly.
            let lo = support_count(k, n, a, Interval::HalfOpen);
            let hi = support_count(k, n, b, Interval::HalfOpen);
            let sel_q = rep.selector();
            let part = dot(sel_q, &region_prefix(rep, n, &hi)) - dot(sel_q, &region_prefix(rep, n, &lo));
            let tot = dot(sel_q, &sums::sigma_vector(rep, n).values);
            Some(ExactFraction::from(part / tot))
        };
        points.push(ScanPoint { level: n, mass });
    }
    Ok(ScanSeries { points })
}

/// `sum_j |F(x_{j+1}) - F(x_j)|` over samples at strictly increasing `x`.
pub fn total_variation_estimate(samples: &[(f64, f64)]) -> Result<f64> {
    let mut tv = 0.0;
    for w in samples.windows(2) {
        if w[1].0.partial_cmp(&w[0].0) != Some(Ordering::Greater) {
            return Err(Error::domain("grid points are not strictly increasing"));
        }
        tv += (w[1].1 - w[0].1).abs();
    }
    Ok(tv)
}

/// Exact weights as `f64`, in support order.
pub fn weights_f64(m: &PurePointMeasure) -> Vec<f64> {
    m.weights.iter().map(rational::to_f64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::builtin;
    use crate::rational::{frac, int};

    #[test]
    fn approximant_examples() {
        let s = approximant(&builtin("stern").unwrap(), 1).unwrap();
        assert_eq!(s.components[0].weights, vec![frac(1, 3), frac(2, 3)]);
        assert_eq!(s.components[0].point(1), frac(1, 2));
        let z = approximant(&builtin("stern").unwrap(), 0).unwrap();
        assert_eq!(z.components[0].weights, vec![int(1)]);
        let j = approximant(&builtin("josephus").unwrap(), 2).unwrap();
        assert_eq!(
            j.components[0].weights,
            vec![frac(1, 16), frac(3, 16), frac(5, 16), frac(7, 16)]
        );
        let zero = LinearRepresentation::new(
            2,
            vec![QMatrix::from_i64(1, 1, &[1]), QMatrix::from_i64(1, 1, &[0])],
            vec![int(1)],
            None,
        )
        .unwrap();
        assert_eq!(
            approximant(&zero, 1),
            Err(Error::DegenerateNormalisation { level: 1, component: 1 })
        );
    }

    #[test]
    fn cocycle_examples() {
        let s = builtin("stern").unwrap();
        let a1 = cocycle_matrix(&s, 1).unwrap();
        assert_eq!(a1.at_one(), QMatrix::from_rows(vec![
            vec![frac(2, 3), frac(1, 3)],
            vec![frac(1, 3), frac(2, 3)],
        ]).unwrap());
        let z0 = a1.evaluate_at(Complex64::zero());
        let want = [[1.0 / 3.0, 0.0], [1.0 / 3.0, 1.0 / 3.0]];
        for (i, row) in want.iter().enumerate() {
            for (j, w) in row.iter().enumerate() {
                assert!((z0.get(i, j) - w).norm() < 1e-15);
            }
        }
        for n in 1..=20 {
            let m = cocycle_matrix(&s, n).unwrap().at_one();
            for i in 0..2 {
                assert_eq!(m.row(i).iter().fold(Rational::zero(), |a, x| a + x), int(1));
            }
        }
    }

    #[test]
    fn refinement_examples() {
        for name in ["stern", "josephus", "one"] {
            let rep = builtin(name).unwrap();
            let prev = approximant(&rep, 2).unwrap();
            assert_eq!(refine_step(&rep, &prev).unwrap(), approximant(&rep, 3).unwrap(), "{name}");
        }
        let one = approximant(&builtin("one").unwrap(), 3).unwrap();
        assert!(one.components[0].weights.iter().all(|w| *w == frac(1, 8)));
    }

    #[test]
    fn cdf_examples() {
        let j = builtin("josephus").unwrap();
        let c = empirical_cdf(&j, 14, &frac(1, 2), Interval::Closed).unwrap();
        let want = Rational::new(BigInt::from((1 << 13) + 1).pow(2), BigInt::from(4).pow(14));
        assert_eq!(c[0], want);
        assert_eq!(empirical_cdf(&j, 5, &int(1), Interval::Closed).unwrap()[0], int(1));
        let d = builtin("dumas").unwrap();
        assert_eq!(empirical_cdf(&d, 2, &frac(1, 2), Interval::HalfOpen).unwrap()[0], frac(-1, 17));
        assert!(empirical_cdf(&d, 2, &frac(3, 2), Interval::Closed).is_err());
    }

    #[test]
    fn cdf_matches_weight_sums() {
        let s = builtin("stern").unwrap();
        let mu = approximant(&s, 6).unwrap();
        for j in 0..=64 {
            let x = frac(j, 64);
            for conv in [Interval::Closed, Interval::HalfOpen] {
                let want: Rational = mu.components[1]
                    .weights
                    .iter()
                    .enumerate()
                    .filter(|(m, _)| {
                        let p = mu.components[1].point(*m);
                        match conv {
                            Interval::Closed => p <= x,
                            Interval::HalfOpen => p < x,
                        }
                    })
                    .fold(Rational::zero(), |a, (_, w)| a + w);
                assert_eq!(empirical_cdf(&s, 6, &x, conv).unwrap()[1], want);
            }
        }
    }

    #[test]
    fn fourier_examples() {
        let s = builtin("stern").unwrap();
        let m0 = &approximant(&s, 0).unwrap().components[0];
        assert!((fourier_empirical(m0, 5) - Complex64::one()).norm() < 1e-15);
        let one = &approximant(&builtin("one").unwrap(), 3).unwrap().components[0];
        assert!((fourier_empirical(one, 0) - Complex64::one()).norm() < 1e-15);
        let m1 = &approximant(&s, 1).unwrap().components[0];
        assert!((fourier_empirical(m1, 1) - Complex64::new(-1.0 / 3.0, 0.0)).norm() < 1e-15);
        let p = fourier_product(&s, 0.0, 20).unwrap();
        assert!(p.values.iter().all(|v| (v - Complex64::one()).norm() < 1e-12));
    }

    #[test]
    fn uniqueness_examples() {
        let ts: Vec<f64> = (1..=8).map(f64::from).collect();
        let s = uniqueness_check(&builtin("stern").unwrap(), &ts, 30).unwrap();
        assert!(s.pass && !s.advisory);
        let o = uniqueness_check(&builtin("one").unwrap(), &ts, 20).unwrap();
        assert!(o.pass && o.entries.iter().all(|e| e.mean.norm() < 1e-12));
        let d = uniqueness_check(&builtin("dumas").unwrap(), &[1.0], 30).unwrap();
        assert!(d.advisory && !d.stabilised);
    }

    #[test]
    fn scan_examples() {
        let d = builtin("dumas").unwrap();
        let s = scan_interval(&d, &int(0), &frac(1, 2), 1, 2).unwrap();
        assert_eq!(s.points[0].mass.as_ref().unwrap().reduced(), int(1));
        assert_eq!(s.points[1].mass.as_ref().unwrap().reduced(), frac(-1, 17));
        let o = scan_interval(&builtin("one").unwrap(), &int(0), &frac(1, 2), 1, 10).unwrap();
        assert!(o.points.iter().all(|p| p.mass.as_ref().unwrap().reduced() == frac(1, 2)));
        assert!(scan_interval(&d, &int(0), &frac(1, 3), 0, 3).is_err());
    }

    #[test]
    fn scan_matches_direct_masses() {
        let s = builtin("stern").unwrap();
        let a = frac(1, 8);
        let b = frac(3, 4);
        let series = scan_interval(&s, &a, &b, 0, 8).unwrap();
        for p in &series.points {
            let hi = empirical_cdf_selected(&s, p.level, &b, Interval::HalfOpen).unwrap();
            let lo = empirical_cdf_selected(&s, p.level, &a, Interval::HalfOpen).unwrap();
            assert_eq!(p.mass.as_ref().unwrap().reduced(), hi - lo, "level {}", p.level);
        }
        let full = scan_interval(&builtin("dumas").unwrap(), &int(0), &int(1), 0, 30).unwrap();
        assert!(full.points.iter().all(|p| p.mass.as_ref().unwrap().reduced() == int(1)));
    }

    #[test]
    fn total_variation() {
        assert_eq!(total_variation_estimate(&[(0.0, 0.0), (0.5, 1.0), (1.0, 0.0)]).unwrap(), 2.0);
        let lin: Vec<(f64, f64)> = (0..=16).map(|j| (j as f64 / 16.0, j as f64 / 16.0)).collect();
        assert!((total_variation_estimate(&lin).unwrap() - 1.0).abs() < 1e-15);
        assert!(total_variation_estimate(&[(0.5, 0.0), (0.25, 1.0)]).is_err());
    }
}

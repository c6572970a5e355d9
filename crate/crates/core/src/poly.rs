//! Exact rational polynomials, characteristic polynomials and root finding.
//!
//! Roots are located in three stages: the characteristic polynomial is split
//! exactly into square-free factors (Yun), each factor's roots are found by
//! simultaneous Aberth iteration from a deterministic circle of seeds and
//! polished by Newton steps, and finally real roots are snapped to exact
//! rationals when a continued-fraction convergent is an exact zero, and complex
//! roots are symmetrised into exact conjugate pairs.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{One, Signed, Zero};

use crate::matrix::QMatrix;
use crate::rational::{self, Rational};

/// Polynomial with exact rational coefficients, lowest degree first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    coeffs: Vec<Rational>,
}

impl Poly {
    pub fn new(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn one() -> Self {
        Poly::new(vec![Rational::one()])
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; the zero polynomial reports 0.
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        self.coeffs
            .iter()
            .rev()
            .fold(Rational::zero(), |acc, c| acc * x + c)
    }

    pub fn eval_c(&self, z: Complex64) -> Complex64 {
        self.coeffs
            .iter()
            .rev()
            .fold(Complex64::zero(), |acc, c| acc * z + rational::to_f64(c))
    }

    pub fn derivative(&self) -> Poly {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
                .collect(),
        )
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let lead = self.leading();
        Poly::new(self.coeffs.iter().map(|c| c / &lead).collect())
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        let n = self.coeffs.len().max(other.coeffs.len());
        Poly::new(
            (0..n)
                .map(|i| {
                    let a = self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    let b = other.coeffs.get(i).cloned().unwrap_or_else(Rational::zero);
                    a - b
                })
                .collect(),
        )
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        if self.is_zero() || other.is_zero() {
            return Poly::new(Vec::new());
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Poly::new(out)
    }

    /// Quotient and remainder; panics on division by zero.
    pub fn div_rem(&self, divisor: &Poly) -> (Poly, Poly) {
        assert!(!divisor.is_zero(), "polynomial division by zero");
        let mut rem = self.coeffs.clone();
        let dd = divisor.degree();
        if self.coeffs.len() < divisor.coeffs.len() {
            return (Poly::new(Vec::new()), self.clone());
        }
        let lead = divisor.leading();
        let mut quot = vec![Rational::zero(); self.coeffs.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd] / &lead;
            if !c.is_zero() {
                for (j, dc) in divisor.coeffs.iter().enumerate() {
                    rem[i + j] -= &c * dc;
                }
            }
            quot[i] = c;
        }
        rem.truncate(dd);
        (Poly::new(quot), Poly::new(rem))
    }

    pub fn gcd(&self, other: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Square-free factorisation: `self = c * prod f_i^i`, returned as
    /// `(f_i, i)` with every `f_i` monic and of positive degree.
    pub fn square_free(&self) -> Vec<(Poly, usize)> {
        let mut out = Vec::new();
        if self.degree() == 0 {
            return out;
        }
        let f = self.monic();
        let fp = f.derivative();
        let a0 = f.gcd(&fp);
        let mut b = f.div_rem(&a0).0;
        let c = fp.div_rem(&a0).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree() > 0 {
            let a = b.gcd(&d);
            if a.degree() > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            let c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Numerical roots of a square-free polynomial.
    pub fn simple_roots(&self) -> Vec<Root> {
        let n = self.degree();
        match n {
            0 => Vec::new(),
            1 => {
                let r = -&self.coeffs[0] / &self.coeffs[1];
                vec![Root::exact(r)]
            }
            _ => {
                let raw = aberth(self);
                let polished: Vec<Complex64> = raw.into_iter().map(|z| newton_polish(self, z)).collect();
                finalize_roots(self, polished)
            }
        }
    }
}

/// A located root, exact when it was certified rational.
#[derive(Clone, Debug, PartialEq)]
pub struct Root {
    pub value: Complex64,
    pub exact: Option<Rational>,
}

impl Root {
    fn exact(r: Rational) -> Self {
        Root {
            value: Complex64::new(rational::to_f64(&r), 0.0),
            exact: Some(r),
        }
    }
}

/// `det(x I - M)` by the Faddeev-LeVerrier recursion in exact arithmetic.
pub fn characteristic_polynomial(m: &QMatrix) -> Poly {
    assert!(m.is_square());
    let n = m.rows();
    let mut coeffs = vec![Rational::zero(); n + 1];
    coeffs[n] = Rational::one();
    let mut mk = QMatrix::zeros(n, n);
    for k in 1..=n {
        let mut next = m.mul(&mk);
        for i in 0..n {
            let v = next.get(i, i) + &coeffs[n - k + 1];
            next.set(i, i, v);
        }
        mk = next;
        let tr = m.mul(&mk).trace();
        coeffs[n - k] = -tr / Rational::from_integer((k as i64).into());
    }
    Poly::new(coeffs)
}

fn float_coeffs(p: &Poly) -> Vec<f64> {
    p.coeffs.iter().map(rational::to_f64).collect()
}

fn aberth(p: &Poly) -> Vec<Complex64> {
    let c = float_coeffs(p);
    let n = c.len() - 1;
    let lead = c[n];
    // Cauchy bound on root moduli.
    let radius = 1.0 + c[..n].iter().map(|v| (v / lead).abs()).fold(0.0, f64::max);
    let seed_r = radius.min(1e6) * 0.5 + 0.1;
    let mut z: Vec<Complex64> = (0..n)
        .map(|j| {
            let ang = 2.0 * core::f64::consts::PI * j as f64 / n as f64 + 0.4;
            Complex64::new(seed_r * libm::cos(ang), seed_r * libm::sin(ang))
        })
        .collect();
    let dp = p.derivative();
    for _ in 0..1000 {
        let mut max_step: f64 = 0.0;
        for i in 0..n {
            let pv = p.eval_c(z[i]);
            let dv = dp.eval_c(z[i]);
            if pv.norm() == 0.0 {
                continue;
            }
            let ratio = pv / dv;
            let mut s = Complex64::zero();
            for j in 0..n {
                if j != i {
                    let diff = z[i] - z[j];
                    if diff.norm() > 0.0 {
                        s += diff.inv();
                    }
                }
            }
            let w = ratio / (Complex64::one() - ratio * s);
            if w.re.is_finite() && w.im.is_finite() {
                z[i] -= w;
                max_step = max_step.max(w.norm() / z[i].norm().max(1.0));
            }
        }
        if max_step < 1e-16 {
            break;
        }
    }
    z
}

fn newton_polish(p: &Poly, mut z: Complex64) -> Complex64 {
    let dp = p.derivative();
    for _ in 0..4 {
        let d = dp.eval_c(z);
        if d.norm() == 0.0 {
            break;
        }
        let step = p.eval_c(z) / d;
        if !(step.re.is_finite() && step.im.is_finite()) {
            break;
        }
        z -= step;
    }
    z
}

fn finalize_roots(p: &Poly, roots: Vec<Complex64>) -> Vec<Root> {
    let mut out: Vec<Root> = Vec::with_capacity(roots.len());
    let mut complex: Vec<Complex64> = Vec::new();
    for z in roots {
        if z.im.abs() <= 1e-9 * z.norm().max(1.0) {
            let re = z.re;
            let exact = rational::convergents(re, 1_000_000)
                .into_iter()
                .filter(|q| (rational::to_f64(q) - re).abs() <= 1e-6 * re.abs().max(1.0))
                .find(|q| p.eval(q).is_zero());
            out.push(match exact {
                Some(q) => Root::exact(q),
                None => Root {
                    value: Complex64::new(re, 0.0),
                    exact: None,
                },
            });
        } else {
            complex.push(z);
        }
    }
    let mut used = vec![false; complex.len()];
    for i in 0..complex.len() {
        if used[i] || complex[i].im < 0.0 {
            continue;
        }
        let partner = (0..complex.len())
            .filter(|&j| !used[j] && j != i && complex[j].im < 0.0)
            .min_by(|&a, &b| {
                (complex[a] - complex[i].conj())
                    .norm()
                    .total_cmp(&(complex[b] - complex[i].conj()).norm())
            });
        used[i] = true;
        match partner {
            Some(j) => {
                used[j] = true;
                let m = (complex[i] + complex[j].conj()) * 0.5;
                out.push(Root { value: m, exact: None });
                out.push(Root {
                    value: m.conj(),
                    exact: None,
                });
            }
            None => out.push(Root {
                value: complex[i],
                exact: None,
            }),
        }
    }
    for (j, z) in complex.iter().enumerate() {
        if !used[j] {
            out.push(Root { value: *z, exact: None });
        }
    }
    out
}

/// Distinct eigenvalue with its algebraic multiplicity.
#[derive(Clone, Debug, PartialEq)]
pub struct Eigenvalue {
    pub value: Complex64,
    pub multiplicity: usize,
    pub exact: Option<Rational>,
}

/// Distinct roots of `p` with multiplicities, largest modulus first.
pub fn distinct_roots(p: &Poly) -> Vec<Eigenvalue> {
    let mut out = Vec::new();
    for (factor, mult) in p.square_free() {
        for r in factor.simple_roots() {
            out.push(Eigenvalue {
                value: r.value,
                multiplicity: mult,
                exact: r.exact,
            });
        }
    }
    out.sort_by(|a, b| {
        b.value
            .norm()
            .total_cmp(&a.value.norm())
            .then(b.value.im.total_cmp(&a.value.im))
    });
    out
}

/// Spectral radius of an exact matrix.
pub fn spectral_radius(m: &QMatrix) -> f64 {
    let p = characteristic_polynomial(m);
    distinct_roots(&p)
        .first()
        .map_or(0.0, |e| match &e.exact {
            Some(q) => rational::to_f64(&q.abs()),
            None => e.value.norm(),
        })
}

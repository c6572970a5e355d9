//! Eigen-structure of `B`, primitivity, joint spectral radius and Hölder bounds.

use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_traits::{Signed, Zero};

use crate::error::{Error, HypothesisKind, Result};
use crate::linrep::LinearRepresentation;
use crate::matrix::{dot, QMatrix};
use crate::poly::{characteristic_polynomial, distinct_roots, spectral_radius, Eigenvalue};
use crate::rational::{self, Rational};
use crate::sums;

/// Largest dimension handled by the characteristic-polynomial route.
pub const MAX_DIM: usize = 12;

/// Work guard on `k^L` for the product tree.
pub const JSR_WORK_LIMIT: u64 = 1 << 20;

/// Number of initial terms sampled when non-negativity cannot be certified.
pub const SAMPLE_LEN: u64 = 1 << 16;

const MODULUS_TOL: f64 = 1e-9;

fn check_dim(m: &QMatrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::shape("matrix is not square"));
    }
    if m.rows() > MAX_DIM {
        return Err(Error::SizeGuard {
            what: "matrix dimension",
            limit: MAX_DIM as u64,
        });
    }
    Ok(())
}

/// Distinct eigenvalues with multiplicity, largest modulus first.
pub fn distinct_eigenvalues(b: &QMatrix) -> Result<Vec<Eigenvalue>> {
    check_dim(b)?;
    Ok(distinct_roots(&characteristic_polynomial(b)))
}

/// All `d` eigenvalues, repeated according to algebraic multiplicity.
pub fn eigenvalues(b: &QMatrix) -> Result<Vec<Complex64>> {
    Ok(distinct_eigenvalues(b)?
        .into_iter()
        .flat_map(|e| core::iter::repeat_n(e.value, e.multiplicity))
        .collect())
}

/// The eigenvalue of maximal modulus, when it is unique and a positive real.
#[derive(Clone, Debug, PartialEq)]
pub struct Dominant {
    pub rho: f64,
    pub exact: Option<Rational>,
    pub multiplicity: usize,
    pub subdominant_modulus: f64,
}

fn attains(e: &Eigenvalue, rho: f64) -> bool {
    (e.value.norm() - rho).abs() <= MODULUS_TOL * rho.max(1.0)
}

/// Dominant eigenvalue of `b`, or the hypothesis it violates.
pub fn dominant(b: &QMatrix) -> Result<Dominant> {
    let eig = distinct_eigenvalues(b)?;
    let rho = eig.first().map_or(0.0, |e| e.value.norm());
    let top: Vec<&Eigenvalue> = eig.iter().filter(|e| attains(e, rho)).collect();
    if top.len() != 1 {
        let list: Vec<String> = top.iter().map(|e| format!("{}", e.value)).collect();
        return Err(Error::hypothesis(
            HypothesisKind::NonUniqueDominant,
            format!("{} eigenvalues of modulus {rho}: {}", top.len(), list.join(", ")),
        ));
    }
    let e = top[0];
    if e.value.im != 0.0 || e.value.re <= 0.0 {
        return Err(Error::hypothesis(
            HypothesisKind::ComplexDominant,
            format!("dominant eigenvalue {}", e.value),
        ));
    }
    let subdominant_modulus = eig
        .iter()
        .filter(|x| !attains(x, rho))
        .map(|x| x.value.norm())
        .fold(0.0, f64::max);
    let rho = match &e.exact {
        Some(q) => rational::to_f64(q),
        None => e.value.re,
    };
    Ok(Dominant {
        rho,
        exact: e.exact.clone(),
        multiplicity: e.multiplicity,
        subdominant_modulus,
    })
}

/// Smallest `j <= d^2 - 2d + 2` with `B^j` entrywise positive.
pub fn positivity_power(b: &QMatrix) -> Result<Option<u32>> {
    if !b.is_square() {
        return Err(Error::shape("matrix is not square"));
    }
    if !b.is_nonnegative() {
        return Err(Error::domain("positivity power needs a nonnegative matrix"));
    }
    let d = b.rows();
    let pattern: Vec<bool> = b.entries().iter().map(|x| !x.is_zero()).collect();
    let bound = (d * d - 2 * d + 2) as u32;
    let mut power = pattern.clone();
    for j in 1..=bound {
        if power.iter().all(|&p| p) {
            return Ok(Some(j));
        }
        let mut next = vec![false; d * d];
        for i in 0..d {
            for l in 0..d {
                next[i * d + l] = (0..d).any(|t| power[i * d + t] && pattern[t * d + l]);
            }
        }
        power = next;
    }
    Ok(None)
}

/// How non-negativity of the sequence was established.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Nonnegativity {
    /// Digit matrices, terminal and selector are all entrywise nonnegative.
    Certified,
    /// The first [`SAMPLE_LEN`] values are nonnegative integers; no proof.
    Sampled,
    /// A sampled value is negative or not an integer.
    Violated,
}

impl Nonnegativity {
    pub fn label(self) -> &'static str {
        match self {
            Nonnegativity::Certified => "certified",
            Nonnegativity::Sampled => "sampled, not certified",
            Nonnegativity::Violated => "violated",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PrimitivityReport {
    pub primitive: bool,
    pub nonnegativity: Nonnegativity,
    pub reasons: Vec<String>,
}

fn sample_values(rep: &LinearRepresentation) -> Option<(u64, Rational)> {
    let k = rep.base() as u64;
    let keep = SAMPLE_LEN / k;
    let mut table: Vec<Vec<Rational>> = Vec::with_capacity(keep as usize + 1);
    for m in 0..SAMPLE_LEN {
        let state = if m == 0 {
            rep.terminal().to_vec()
        } else {
            rep.digit_matrix((m % k) as usize).mul_vec(&table[(m / k) as usize])
        };
        let v = dot(rep.selector(), &state);
        if v.is_negative() || !v.is_integer() {
            return Some((m, v));
        }
        if m <= keep {
            table.push(state);
        }
    }
    None
}

pub fn is_primitive_rep(rep: &LinearRepresentation) -> PrimitivityReport {
    let mut reasons = Vec::new();
    let mut matrices_ok = true;
    for (a, m) in rep.digit_matrices().iter().enumerate() {
        if !m.is_nonnegative() {
            matrices_ok = false;
            reasons.push(format!("B_{a} has a negative entry"));
        }
    }
    let vectors_ok = rep.terminal().iter().all(rational::is_nonnegative)
        && rep.selector().iter().all(rational::is_nonnegative);
    let integral = rep.is_integral();
    let nonnegativity = if matrices_ok && vectors_ok && integral {
        Nonnegativity::Certified
    } else {
        match sample_values(rep) {
            None => Nonnegativity::Sampled,
            Some((m, v)) => {
                reasons.push(format!(
                    "f({m}) = {} is not a nonnegative integer",
                    rational::format_rational(&v)
                ));
                Nonnegativity::Violated
            }
        }
    };
    if !rep.digit_sum().is_positive() {
        reasons.push(String::from("B is not positive"));
    }
    // The sums selector . Sigma(n) obey a linear recurrence of order d, so they
    // vanish for every n >= d exactly when they vanish on [d, 2d).
    let d = rep.dim() as u32;
    let seq = sums::sigma_sequence(rep, 2 * d - 1);
    let alive = seq[d as usize..]
        .iter()
        .any(|s| !dot(rep.selector(), &s.values).is_zero());
    if !alive {
        reasons.push(String::from("sequence is eventually zero"));
    }
    PrimitivityReport {
        primitive: reasons.is_empty(),
        nonnegativity,
        reasons,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SpectrumReport {
    pub eigenvalues: Vec<Complex64>,
    pub rho: f64,
    pub dominant_unique: bool,
    pub subdominant_modulus: f64,
    pub primitive: bool,
    pub positivity_power: Option<u32>,
    pub primitivity: PrimitivityReport,
    pub notes: Vec<String>,
}

pub fn spectrum_report(rep: &LinearRepresentation) -> Result<SpectrumReport> {
    let b = rep.digit_sum();
    let eig = distinct_eigenvalues(&b)?;
    let rho = eig.first().map_or(0.0, |e| e.value.norm());
    let top = eig.iter().filter(|e| attains(e, rho)).count();
    let subdominant_modulus = eig
        .iter()
        .filter(|e| !attains(e, rho))
        .map(|e| e.value.norm())
        .fold(0.0, f64::max);
    let mut notes = Vec::new();
    if top > 1 {
        notes.push(format!("{top} eigenvalues share the maximal modulus {rho}"));
    } else if let Some(e) = eig.first() {
        if e.value.im != 0.0 || e.value.re <= 0.0 {
            notes.push(format!("dominant eigenvalue {} is not a positive real", e.value));
        }
        if e.multiplicity > 1 {
            notes.push(format!("dominant eigenvalue has algebraic multiplicity {}", e.multiplicity));
        }
    }
    let positivity_power = if b.is_nonnegative() {
        positivity_power(&b)?
    } else {
        notes.push(String::from("B has a negative entry"));
        None
    };
    let primitivity = is_primitive_rep(rep);
    notes.push(format!("non-negativity of f: {}", primitivity.nonnegativity.label()));
    Ok(SpectrumReport {
        eigenvalues: eig
            .iter()
            .flat_map(|e| core::iter::repeat_n(e.value, e.multiplicity))
            .collect(),
        rho,
        dominant_unique: top == 1,
        subdominant_modulus,
        primitive: primitivity.primitive,
        positivity_power,
        primitivity,
        notes,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct JsrBounds {
    pub lower: f64,
    pub upper: f64,
    pub depth: u32,
    /// `(lower, upper)` after each product length `1..=depth`.
    pub history: Vec<(f64, f64)>,
    /// Set when an exact value was recognised (single matrix, common triangular form).
    pub exact: Option<f64>,
}

fn is_triangular(m: &QMatrix, upper: bool) -> bool {
    let d = m.rows();
    (0..d).all(|i| {
        (0..d).all(|j| {
            let below = if upper { i > j } else { i < j };
            !below || m.get(i, j).is_zero()
        })
    })
}

/// Exact `rho*` for families where it is known in closed form.
fn exact_jsr(family: &[QMatrix]) -> Option<f64> {
    if family.len() == 1 {
        return Some(spectral_radius(&family[0]));
    }
    let tri = family.iter().all(|m| is_triangular(m, true))
        || family.iter().all(|m| is_triangular(m, false));
    tri.then(|| {
        family
            .iter()
            .flat_map(|m| (0..m.rows()).map(move |i| rational::to_f64(&m.get(i, i).abs())))
            .fold(0.0, f64::max)
    })
}

/// Bounds on the joint spectral radius from products of length at most `depth`.
///
/// The lower bound is the largest `rho(P)^{1/n}`, the upper bound the smallest
/// `max ||P||^{1/n}` in the max-row-sum norm. Products whose norm cannot beat
/// the current lower bound are pruned; they are covered by the lower bound.
pub fn jsr_bounds(matrices: &[QMatrix], depth: u32) -> Result<JsrBounds> {
    if depth == 0 {
        return Err(Error::domain("product depth must be at least 1"));
    }
    let first = matrices.first().ok_or_else(|| Error::domain("empty matrix family"))?;
    let d = first.rows();
    for m in matrices {
        check_dim(m)?;
        if m.rows() != d {
            return Err(Error::shape("matrices of different sizes"));
        }
    }
    let mut family: Vec<QMatrix> = Vec::new();
    for m in matrices {
        if !family.contains(m) {
            family.push(m.clone());
        }
    }
    let work = (family.len() as u64).checked_pow(depth);
    if work.is_none_or(|w| w > JSR_WORK_LIMIT) {
        return Err(Error::SizeGuard {
            what: "k^L product count",
            limit: JSR_WORK_LIMIT,
        });
    }
    let exact = exact_jsr(&family);

    let mut lower: f64 = 0.0;
    let mut upper = f64::INFINITY;
    let mut history = Vec::with_capacity(depth as usize);
    let mut frontier: Vec<QMatrix> = vec![QMatrix::identity(d)];
    for n in 1..=depth {
        let inv_n = 1.0 / n as f64;
        let level: Vec<(QMatrix, f64)> = frontier
            .iter()
            .flat_map(|p| family.iter().map(move |m| p.mul(m)))
            .map(|p| {
                let norm = libm::pow(rational::to_f64(&p.norm_inf()), inv_n);
                (p, norm)
            })
            .collect();
        for (p, norm) in &level {
            if *norm > lower {
                lower = lower.max(libm::pow(spectral_radius(p), inv_n));
            }
        }
        let mut level_max: f64 = 0.0;
        frontier = Vec::new();
        for (p, norm) in level {
            if norm > lower {
                level_max = level_max.max(norm);
                frontier.push(p);
            }
        }
        upper = upper.min(lower.max(level_max));
        if let Some(x) = exact {
            lower = lower.max(x);
            upper = upper.min(x);
        }
        upper = upper.max(lower);
        history.push((lower, upper));
        if frontier.is_empty() {
            // Every product is dominated by the lower bound from here on.
            for _ in n..depth {
                history.push((lower, upper));
            }
            break;
        }
    }
    Ok(JsrBounds {
        lower,
        upper,
        depth,
        history,
        exact,
    })
}

/// Certified interval for `log_k(rho / rho*)`.
#[derive(Clone, Debug, PartialEq)]
pub struct HolderInterval {
    pub alpha_lower: f64,
    pub alpha_upper: f64,
    pub rho: f64,
    pub jsr: JsrBounds,
}

pub fn holder_bound(rep: &LinearRepresentation, depth: u32) -> Result<HolderInterval> {
    let dom = dominant(&rep.digit_sum())?;
    let jsr = jsr_bounds(rep.digit_matrices(), depth)?;
    if dom.rho <= jsr.upper {
        return Err(Error::hypothesis(
            HypothesisKind::RhoNotAboveJsr,
            format!("rho = {} but the joint spectral radius may be as large as {}", dom.rho, jsr.upper),
        ));
    }
    let lnk = libm::log(rep.base() as f64);
    let alpha_lower = libm::log(dom.rho / jsr.upper) / lnk;
    let alpha_upper = if jsr.lower > 0.0 {
        libm::log(dom.rho / jsr.lower) / lnk
    } else {
        f64::INFINITY
    };
    Ok(HolderInterval {
        alpha_lower,
        alpha_upper,
        rho: dom.rho,
        jsr,
    })
}

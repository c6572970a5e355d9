//! Linear representations of k-regular sequences.
//!
//! A representation `(B_0, ..., B_{k-1}, w, L)` defines the state vector
//! `f(m) = B_{i_0} B_{i_1} ... B_{i_s} w` for `m = i_s ... i_1 i_0` in base `k`
//! (least-significant digit leftmost in the product) and the sequence value
//! `f(m) = L f(m)`. The empty digit word of `m = 0` gives `f(0) = L w`.

use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigUint;
use num_complex::Complex64;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};
use crate::matrix::{dot, CMatrix, QMatrix};
use crate::rational::{self, Rational};

/// Base-`k` expansion, least-significant digit first, no leading zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DigitWord {
    base: u32,
    digits: Vec<u32>,
}

impl DigitWord {
    pub fn from_digits(base: u32, digits: Vec<u32>) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        if let Some(&d) = digits.iter().find(|&&d| d >= base) {
            return Err(Error::domain(format!("digit {d} out of range for base {base}")));
        }
        let mut digits = digits;
        while digits.last() == Some(&0) {
            digits.pop();
        }
        Ok(DigitWord { base, digits })
    }

    pub fn from_biguint(m: &BigUint, base: u32) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        let b = BigUint::from(base);
        let mut digits = Vec::new();
        let mut m = m.clone();
        while !m.is_zero() {
            let (q, r) = m.div_rem(&b);
            digits.push(r.to_u32().expect("digit below base"));
            m = q;
        }
        Ok(DigitWord { base, digits })
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn digits(&self) -> &[u32] {
        &self.digits
    }

    pub fn len(&self) -> usize {
        self.digits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.digits.is_empty()
    }

    pub fn value(&self) -> BigUint {
        let b = BigUint::from(self.base);
        self.digits
            .iter()
            .rev()
            .fold(BigUint::zero(), |acc, &d| acc * &b + BigUint::from(d))
    }
}

/// Base-`k` digits of `m`, least significant first.
pub fn digits(m: u64, k: u64) -> Result<DigitWord> {
    if k < 2 || k > u32::MAX as u64 {
        return Err(Error::InvalidBase(k));
    }
    let mut out = Vec::new();
    let mut m = m;
    while m > 0 {
        out.push((m % k) as u32);
        m /= k;
    }
    Ok(DigitWord {
        base: k as u32,
        digits: out,
    })
}

/// The matrix polynomial `B(z) = sum_a B_a z^a`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixPolynomial {
    coefficients: Vec<QMatrix>,
}

impl MatrixPolynomial {
    pub fn coefficients(&self) -> &[QMatrix] {
        &self.coefficients
    }

    pub fn at_one(&self) -> QMatrix {
        let d = self.coefficients[0].rows();
        self.coefficients
            .iter()
            .fold(QMatrix::zeros(d, d), |acc, b| acc.add(b))
    }

    pub fn evaluate(&self, z: Complex64) -> CMatrix {
        let d = self.coefficients[0].rows();
        let mut out = CMatrix::zeros(d, d);
        let mut zp = Complex64::new(1.0, 0.0);
        for b in &self.coefficients {
            for i in 0..d {
                for j in 0..d {
                    let v = *out.get(i, j) + zp * rational::to_f64(b.get(i, j));
                    out.set(i, j, v);
                }
            }
            zp *= z;
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearRepresentation {
    base: u32,
    dim: usize,
    digit_matrices: Vec<QMatrix>,
    terminal: Vec<Rational>,
    selector: Vec<Rational>,
    name: Option<String>,
}

impl LinearRepresentation {
    /// Validates shapes; a missing selector defaults to `e_1^T`.
    pub fn new(
        base: u32,
        digit_matrices: Vec<QMatrix>,
        terminal: Vec<Rational>,
        selector: Option<Vec<Rational>>,
    ) -> Result<Self> {
        if base < 2 {
            return Err(Error::InvalidBase(base as u64));
        }
        if digit_matrices.len() != base as usize {
            return Err(Error::shape(format!(
                "{} digit matrices for base {base}",
                digit_matrices.len()
            )));
        }
        let dim = terminal.len();
        if dim == 0 {
            return Err(Error::shape("dimension must be at least 1"));
        }
        for (a, m) in digit_matrices.iter().enumerate() {
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::shape(format!(
                    "B_{a} is {}x{}, expected {dim}x{dim}",
                    m.rows(),
                    m.cols()
                )));
            }
        }
        let selector = selector.unwrap_or_else(|| {
            let mut e = vec![Rational::zero(); dim];
            e[0] = Rational::one();
            e
        });
        if selector.len() != dim {
            return Err(Error::shape(format!(
                "selector has length {}, expected {dim}",
                selector.len()
            )));
        }
        Ok(LinearRepresentation {
            base,
            dim,
            digit_matrices,
            terminal,
            selector,
            name: None,
        })
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = Some(name.into());
        self
    }

    pub fn base(&self) -> u32 {
        self.base
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn digit_matrices(&self) -> &[QMatrix] {
        &self.digit_matrices
    }

    pub fn digit_matrix(&self, a: usize) -> &QMatrix {
        &self.digit_matrices[a]
    }

    pub fn terminal(&self) -> &[Rational] {
        &self.terminal
    }

    pub fn selector(&self) -> &[Rational] {
        &self.selector
    }

    pub fn name(&self) -> Option<&str> {
        self.name.as_deref()
    }

    /// `B = B_0 + ... + B_{k-1}`.
    pub fn digit_sum(&self) -> QMatrix {
        self.matrix_polynomial().at_one()
    }

    pub fn matrix_polynomial(&self) -> MatrixPolynomial {
        MatrixPolynomial {
            coefficients: self.digit_matrices.clone(),
        }
    }

    /// State vector for a digit word: `B_{i_0} ... B_{i_s} w`.
    pub fn state_for_word(&self, word: &DigitWord) -> Result<Vec<Rational>> {
        if word.base() != self.base {
            return Err(Error::domain(format!(
                "digit word in base {}, representation in base {}",
                word.base(),
                self.base
            )));
        }
        let mut v = self.terminal.clone();
        for &d in word.digits().iter().rev() {
            v = self.digit_matrices[d as usize].mul_vec(&v);
        }
        Ok(v)
    }

    pub fn state_vector(&self, m: u64) -> Vec<Rational> {
        let word = digits(m, self.base as u64).expect("representation base is valid");
        self.state_for_word(&word).expect("matching base")
    }

    pub fn evaluate(&self, m: u64) -> Rational {
        dot(&self.selector, &self.state_vector(m))
    }

    pub fn evaluate_word(&self, word: &DigitWord) -> Result<Rational> {
        Ok(dot(&self.selector, &self.state_for_word(word)?))
    }

    /// Change of basis: `T B_a T^{-1}`, `T w`, `L T^{-1}`.
    pub fn conjugate(&self, t: &QMatrix) -> Result<Self> {
        if t.rows() != self.dim || t.cols() != self.dim {
            return Err(Error::shape(format!(
                "conjugating matrix is {}x{}, expected {}x{}",
                t.rows(),
                t.cols(),
                self.dim,
                self.dim
            )));
        }
        let inv = t.inverse()?;
        Ok(LinearRepresentation {
            base: self.base,
            dim: self.dim,
            digit_matrices: self
                .digit_matrices
                .iter()
                .map(|b| t.mul(b).mul(&inv))
                .collect(),
            terminal: t.mul_vec(&self.terminal),
            selector: inv.vec_mul(&self.selector),
            name: self.name.as_ref().map(|n| format!("{n}-conjugated")),
        })
    }

    /// The same sequence read in base `k^j`.
    ///
    /// Values agree with the original when `B_0 w = w`; otherwise the zero
    /// digits padding the top lifted digit contribute extra `B_0` factors.
    pub fn lift_base(&self, j: u32) -> Result<Self> {
        if j == 0 {
            return Err(Error::domain("lift power must be at least 1"));
        }
        let new_base = (self.base as u64)
            .checked_pow(j)
            .filter(|&b| b <= u32::MAX as u64)
            .ok_or(Error::SizeGuard {
                what: "lifted base",
                limit: u32::MAX as u64,
            })? as u32;
        let mut mats = Vec::with_capacity(new_base as usize);
        for a in 0..new_base {
            // Digit matrix for a = sum_t a_t k^t is B_{a_0} B_{a_1} ... B_{a_{j-1}}.
            let mut m = QMatrix::identity(self.dim);
            let mut rest = a;
            for _ in 0..j {
                m = m.mul(&self.digit_matrices[(rest % self.base) as usize]);
                rest /= self.base;
            }
            mats.push(m);
        }
        Ok(LinearRepresentation {
            base: new_base,
            dim: self.dim,
            digit_matrices: mats,
            terminal: self.terminal.clone(),
            selector: self.selector.clone(),
            name: self.name.as_ref().map(|n| format!("{n}-lift{j}")),
        })
    }

    /// Transposed digit matrices with selector and terminal exchanged.
    pub fn transpose(&self) -> Self {
        LinearRepresentation {
            base: self.base,
            dim: self.dim,
            digit_matrices: self.digit_matrices.iter().map(QMatrix::transpose).collect(),
            terminal: self.selector.clone(),
            selector: self.terminal.clone(),
            name: self.name.clone(),
        }
    }

    /// True when every digit matrix, the terminal and the selector are integral.
    pub fn is_integral(&self) -> bool {
        self.digit_matrices
            .iter()
            .all(|m| m.entries().iter().all(Rational::is_integer))
            && self.terminal.iter().all(Rational::is_integer)
            && self.selector.iter().all(Rational::is_integer)
    }
}

pub const BUILTIN_NAMES: [&str; 5] = ["stern", "josephus", "dumas", "sumdigits", "one"];

/// Built-in example representations.
pub fn builtin(name: &str) -> Result<LinearRepresentation> {
    let q = |entries: &[i64]| QMatrix::from_i64(2, 2, entries);
    let v = |entries: &[i64]| entries.iter().map(|&e| rational::int(e)).collect::<Vec<_>>();
    let rep = match name {
        // s(2n) = s(n), s(2n+1) = s(n) + s(n+1) on the state (s(n), s(n+1)).
        "stern" => LinearRepresentation::new(
            2,
            vec![q(&[1, 0, 1, 1]), q(&[1, 1, 0, 1])],
            v(&[0, 1]),
            None,
        ),
        // J(2n) = 2J(n) - 1, J(2n+1) = 2J(n) + 1 on the state (J(n), 1).
        "josephus" => LinearRepresentation::new(
            2,
            vec![q(&[2, -1, 0, 1]), q(&[2, 1, 0, 1])],
            v(&[0, 1]),
            None,
        ),
        "dumas" => LinearRepresentation::new(
            2,
            vec![q(&[1, 0, 0, 1]), q(&[3, -3, 3, 3])],
            v(&[1, 0]),
            None,
        ),
        "sumdigits" => LinearRepresentation::new(
            2,
            vec![q(&[1, 0, 0, 1]), q(&[1, 1, 0, 1])],
            v(&[0, 1]),
            None,
        ),
        "one" => LinearRepresentation::new(
            2,
            vec![QMatrix::from_i64(1, 1, &[1]), QMatrix::from_i64(1, 1, &[1])],
            v(&[1]),
            None,
        ),
        other => return Err(Error::UnknownBuiltin(other.to_string())),
    }?;
    Ok(rep.with_name(name))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    #[test]
    fn digit_expansions() {
        assert!(digits(0, 2).unwrap().is_empty());
        assert_eq!(digits(5, 2).unwrap().digits(), &[1, 0, 1]);
        assert_eq!(digits(7, 3).unwrap().digits(), &[1, 2]);
        assert_eq!(digits(7, 1), Err(Error::InvalidBase(1)));
        assert_eq!(digits(7, 3).unwrap().value(), BigUint::from(7u32));
    }

    #[test]
    fn builtin_values() {
        assert_eq!(builtin("stern").unwrap().evaluate(5), int(3));
        assert_eq!(builtin("stern").unwrap().evaluate(0), int(0));
        assert_eq!(builtin("dumas").unwrap().evaluate(7), int(-54));
        assert_eq!(builtin("josephus").unwrap().evaluate(5), int(3));
        assert_eq!(builtin("josephus").unwrap().evaluate(2), int(1));
        assert_eq!(builtin("one").unwrap().evaluate(99), int(1));
        assert_eq!(builtin("sumdigits").unwrap().evaluate(7), int(3));
        assert!(matches!(builtin("fib"), Err(Error::UnknownBuiltin(_))));
    }

    #[test]
    fn state_vectors() {
        let s = builtin("stern").unwrap();
        assert_eq!(s.state_vector(1), vec![int(1), int(1)]);
        assert_eq!(s.state_vector(3), vec![int(2), int(1)]);
        assert_eq!(builtin("josephus").unwrap().state_vector(0), vec![int(0), int(1)]);
    }

    #[test]
    fn josephus_conjugation_is_positive() {
        let j = builtin("josephus").unwrap();
        let t = QMatrix::from_i64(2, 2, &[1, -1, 1, 1]);
        let c = j.conjugate(&t).unwrap();
        assert_eq!(c.digit_sum(), QMatrix::from_i64(2, 2, &[3, 1, 1, 3]));
        assert_eq!(j.conjugate(&QMatrix::identity(2)).unwrap().digit_matrices(), j.digit_matrices());
        let singular = QMatrix::from_i64(2, 2, &[1, 1, 1, 1]);
        assert_eq!(j.conjugate(&singular), Err(Error::NotInvertible));
    }

    #[test]
    fn conjugated_stern_keeps_values() {
        let s = builtin("stern").unwrap();
        let c = s.conjugate(&QMatrix::from_i64(2, 2, &[1, -1, 1, 1])).unwrap();
        assert_eq!(c.evaluate(5), int(3));
    }

    #[test]
    fn lifting() {
        let s = builtin("stern").unwrap();
        assert_eq!(s.lift_base(1).unwrap().digit_matrices(), s.digit_matrices());
        let s4 = s.lift_base(2).unwrap();
        assert_eq!(s4.base(), 4);
        assert_eq!(s4.evaluate(11), int(5));
        let j4 = builtin("josephus").unwrap().lift_base(2).unwrap();
        assert_eq!(j4.digit_sum(), QMatrix::from_i64(2, 2, &[16, 0, 0, 4]));
    }

    #[test]
    fn transposition() {
        let s = builtin("stern").unwrap();
        let t = s.transpose();
        assert_eq!(t.digit_matrix(0), &QMatrix::from_i64(2, 2, &[1, 1, 0, 1]));
        assert_eq!(t.digit_matrix(1), &QMatrix::from_i64(2, 2, &[1, 0, 1, 1]));
        assert_eq!(t.transpose(), s);
        let d = builtin("dumas").unwrap().transpose();
        assert_eq!(d.digit_matrix(1), &QMatrix::from_i64(2, 2, &[3, 3, -3, 3]));
    }

    #[test]
    fn rejects_bad_shapes() {
        let m = QMatrix::from_i64(2, 2, &[1, 0, 0, 1]);
        assert!(LinearRepresentation::new(2, vec![m.clone()], vec![int(1), int(0)], None).is_err());
        assert!(LinearRepresentation::new(2, vec![m.clone(), m.clone()], vec![int(1)], None).is_err());
        assert!(LinearRepresentation::new(
            2,
            vec![m.clone(), m],
            vec![int(1), int(0)],
            Some(vec![int(1)])
        )
        .is_err());
    }
}

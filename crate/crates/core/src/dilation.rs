//! Dilation-equation solutions and the closed forms built from them.
//!
//! Everything here works on a representation `rep'` whose digit sum `B'` has
//! a unique positive dominant eigenvalue `rho`. By default `rep'` is the
//! transpose of the user's representation (see [`Route`]). With
//! `J = rho I + Z` the Jordan block of `rho` and `V` a chain of generalised
//! eigenvectors, `F : R -> R^{d x v}` solves
//!
//! `F(x) J = sum_a B'_a F(k x - a)`, `F = 0` on `(-inf, 0]`, `F = V` on `[1, inf)`.

use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use num_traits::{Signed, Zero};

use crate::error::{Error, HypothesisKind, Result};
use crate::linrep::LinearRepresentation;
use crate::matrix::{dot, QMatrix, RMatrix};
use crate::rational::{self, Rational};
use crate::spectral::{self, JsrBounds};

/// Which representation the closed-form machinery is applied to.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Route {
    /// Transposed digit matrices, selector and terminal exchanged.
    #[default]
    Transposed,
    /// The representation as given. Degenerate for Josephus (`M = 0`).
    Direct,
}

pub fn route_rep(rep: &LinearRepresentation, route: Route) -> LinearRepresentation {
    match route {
        Route::Transposed => rep.transpose(),
        Route::Direct => rep.clone(),
    }
}

/// Dominant Jordan block data of `B'`.
#[derive(Clone, Debug, PartialEq)]
pub struct JordanData {
    pub rho: f64,
    pub v: usize,
    /// `d x v`; column `c` is annihilated by `(B' - rho I)^c`.
    pub basis: RMatrix,
    /// `rho I + Z`.
    pub j: RMatrix,
    /// Ones on the superdiagonal.
    pub z: RMatrix,
    /// Coordinates of the dominant component of the terminal vector.
    pub m: Vec<f64>,
    pub r_gap: f64,
}

fn nilpotent(v: usize) -> RMatrix {
    let mut z = RMatrix::zeros(v, v);
    for c in 0..v.saturating_sub(1) {
        z.set(c, c + 1, 1.0);
    }
    z
}

impl JordanData {
    /// Assemble from user-supplied `rho`, `V` (d x v) and `M`.
    pub fn from_parts(rho: f64, basis: RMatrix, m: Vec<f64>, r_gap: f64) -> Result<Self> {
        let v = basis.cols();
        if v == 0 || m.len() != v {
            return Err(Error::shape(format!(
                "V has {v} columns but M has {} entries",
                m.len()
            )));
        }
        let z = nilpotent(v);
        let j = RMatrix::identity(v).scale(&rho).add(&z);
        Ok(JordanData {
            rho,
            v,
            basis,
            j,
            z,
            m,
            r_gap,
        })
    }

    pub fn dim(&self) -> usize {
        self.basis.rows()
    }
}

fn normalise_largest(cols: &mut [Vec<Rational>]) {
    let first = &cols[0];
    let mut best = Rational::zero();
    for x in first {
        if x.abs() > best.abs() {
            best = x.clone();
        }
    }
    if best.is_zero() {
        return;
    }
    for col in cols.iter_mut() {
        for x in col.iter_mut() {
            *x = &*x / &best;
        }
    }
}

fn exact_jordan(b: &QMatrix, rho: &Rational, terminal: &[Rational]) -> Result<(RMatrix, Vec<f64>)> {
    let d = b.rows();
    let n = b.sub(&QMatrix::identity(d).scale(rho));
    if d - n.rank() > 1 {
        return Err(Error::Unsupported(format!(
            "eigenvalue {} has more than one Jordan block",
            rational::format_rational(rho)
        )));
    }
    // Block size: the power at which the kernel of N^j stops growing.
    let mut powers = vec![QMatrix::identity(d)];
    let mut v = 0;
    loop {
        let next = powers.last().unwrap().mul(&n);
        let grown = next.rank() < powers.last().unwrap().rank();
        powers.push(next);
        if !grown {
            break;
        }
        v += 1;
    }
    let nv = &powers[v];
    let kernel = nv.nullspace();
    let top = kernel
        .into_iter()
        .find(|b| powers[v - 1].mul_vec(b).iter().any(|x| !x.is_zero()))
        .ok_or_else(|| Error::Unsupported("generalised eigenvector chain not found".into()))?;
    let mut cols = vec![Vec::new(); v];
    cols[v - 1] = top;
    for c in (0..v - 1).rev() {
        cols[c] = n.mul_vec(&cols[c + 1]);
    }
    normalise_largest(&mut cols);
    let basis = QMatrix::from_columns(&cols)?;
    let complement = nv.column_basis();
    let mut all = cols.clone();
    all.extend(complement);
    let coords = QMatrix::from_columns(&all)?.solve(terminal)?;
    let m = coords[..v].iter().map(rational::to_f64).collect();
    Ok((basis.to_f64(), m))
}

fn inverse_iteration(b: &RMatrix, rho: f64) -> Result<Vec<f64>> {
    let d = b.rows();
    let shift = rho + 1e-9 * rho.abs().max(1.0);
    let inv = b.sub(&RMatrix::identity(d).scale(&shift)).inverse()?;
    let mut x = vec![1.0; d];
    for _ in 0..50 {
        let y = inv.mul_vec(&x);
        let scale = y.iter().fold(0.0f64, |a, &v| if v.abs() > a.abs() { v } else { a });
        if scale == 0.0 {
            return Err(Error::NumericalFailure { last_delta: f64::NAN });
        }
        x = y.iter().map(|v| v / scale).collect();
    }
    Ok(x)
}

fn float_jordan(b: &QMatrix, rho: f64, terminal: &[Rational]) -> Result<(RMatrix, Vec<f64>)> {
    let bf = b.to_f64();
    let right = inverse_iteration(&bf, rho)?;
    let left = inverse_iteration(&bf.transpose(), rho)?;
    let t: Vec<f64> = terminal.iter().map(rational::to_f64).collect();
    let m = dot(&left, &t) / dot(&left, &right);
    Ok((RMatrix::from_columns(&[right])?, vec![m]))
}

pub fn jordan_data(rep: &LinearRepresentation) -> Result<JordanData> {
    let b = rep.digit_sum();
    let dom = spectral::dominant(&b)?;
    let (basis, m) = match &dom.exact {
        Some(rho) => exact_jordan(&b, rho, rep.terminal())?,
        None if dom.multiplicity == 1 => float_jordan(&b, dom.rho, rep.terminal())?,
        None => {
            return Err(Error::Unsupported(format!(
                "irrational dominant eigenvalue {} of multiplicity {}; supply Jordan data explicitly",
                dom.rho, dom.multiplicity
            )))
        }
    };
    JordanData::from_parts(dom.rho, basis, m, dom.subdominant_modulus)
}

/// `F` sampled at `j / k^D`, `0 <= j <= k^D`.
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    pub depth: u32,
    pub base: u32,
    pub values: Vec<RMatrix>,
    /// `rho*_upper / rho`.
    pub contraction: f64,
    pub iterations: u32,
    pub last_delta: f64,
}

impl GridFunction {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn points(&self) -> u64 {
        self.values.len() as u64 - 1
    }

    pub fn at_index(&self, j: usize) -> &RMatrix {
        &self.values[j]
    }

    /// Linear interpolation between neighbouring grid points; clamped outside `[0, 1]`.
    pub fn at(&self, x: f64) -> RMatrix {
        let n = self.points() as f64;
        if x <= 0.0 {
            return self.values[0].clone();
        }
        if x >= 1.0 {
            return self.values[self.values.len() - 1].clone();
        }
        let pos = x * n;
        let lo = libm::floor(pos) as usize;
        let frac = pos - lo as f64;
        if frac == 0.0 {
            return self.values[lo].clone();
        }
        let a = &self.values[lo];
        let b = &self.values[lo + 1];
        a.scale(&(1.0 - frac)).add(&b.scale(&frac))
    }
}

pub const DEFAULT_TOL: f64 = 1e-10;

/// Largest `L` with `k^L` within the product-tree guard, capped at 12.
pub fn default_jsr_depth(k: u32) -> u32 {
    let mut l = 0;
    while l < 12 && (k as u64).pow(l + 1) <= spectral::JSR_WORK_LIMIT {
        l += 1;
    }
    l.max(1)
}

/// Solve on the depth-`D` grid after certifying `rho > rho*` with a fresh JSR bound.
pub fn solve_dilation(
    rep: &LinearRepresentation,
    jordan: &JordanData,
    depth: u32,
    tol: f64,
) -> Result<GridFunction> {
    let jsr = spectral::jsr_bounds(rep.digit_matrices(), default_jsr_depth(rep.base()))?;
    solve_dilation_with(rep, jordan, depth, tol, &jsr)
}

fn digit_matrices_f64(rep: &LinearRepresentation) -> Vec<RMatrix> {
    rep.digit_matrices().iter().map(QMatrix::to_f64).collect()
}

/// One sweep of the dilation map over the whole grid.
fn sweep(
    old: &[RMatrix],
    mats: &[RMatrix],
    jinv: &RMatrix,
    basis: &RMatrix,
    k: usize,
) -> Vec<RMatrix> {
    let total = old.len() - 1;
    let coarse = total / k;
    let (d, v) = (basis.rows(), basis.cols());
    let mut out = Vec::with_capacity(old.len());
    for j in 0..=total {
        let mut acc = RMatrix::zeros(d, v);
        for (a, b) in mats.iter().enumerate() {
            let idx = j as i64 - (a * coarse) as i64;
            if idx <= 0 {
                continue;
            }
            let f = if idx as usize >= coarse {
                basis
            } else {
                &old[k * idx as usize]
            };
            acc = acc.add(&b.mul(f));
        }
        out.push(acc.mul(jinv));
    }
    out[0] = RMatrix::zeros(d, v);
    out[total] = basis.clone();
    out
}

pub fn solve_dilation_with(
    rep: &LinearRepresentation,
    jordan: &JordanData,
    depth: u32,
    tol: f64,
    jsr: &JsrBounds,
) -> Result<GridFunction> {
    if depth < 4 {
        return Err(Error::domain("grid depth must be at least 4"));
    }
    if jordan.dim() != rep.dim() {
        return Err(Error::shape("Jordan data does not match the representation"));
    }
    let total = (rep.base() as u64)
        .checked_pow(depth)
        .filter(|&t| t <= 1 << 24)
        .ok_or(Error::SizeGuard {
            what: "k^D grid points",
            limit: 1 << 24,
        })? as usize;
    if jordan.rho <= jsr.upper {
        return Err(Error::hypothesis(
            HypothesisKind::RhoNotAboveJsr,
            format!("rho = {} but the joint spectral radius may be as large as {}", jordan.rho, jsr.upper),
        ));
    }
    let jinv = jordan.j.inverse()?;
    let mats = digit_matrices_f64(rep);
    let k = rep.base() as usize;
    let cap_f = 10.0 * depth as f64 / libm::log(jordan.rho / jsr.upper);
    let cap = (depth + 2).max(libm::ceil(cap_f).min(1e6) as u32);

    let mut values: Vec<RMatrix> = (0..=total)
        .map(|j| jordan.basis.scale(&(j as f64 / total as f64)))
        .collect();
    let mut last_delta = f64::INFINITY;
    for it in 1..=cap {
        let next = sweep(&values, &mats, &jinv, &jordan.basis, k);
        last_delta = next
            .iter()
            .zip(&values)
            .map(|(a, b)| a.sub(b).max_abs())
            .fold(0.0, f64::max);
        values = next;
        if last_delta <= tol {
            return Ok(GridFunction {
                depth,
                base: rep.base(),
                values,
                contraction: jsr.upper / jordan.rho,
                iterations: it,
                last_delta,
            });
        }
    }
    Err(Error::NumericalFailure { last_delta })
}

/// `max ||F(x) J - sum_a B'_a F(k x - a)||` over interior grid points.
pub fn dilation_residual(rep: &LinearRepresentation, jordan: &JordanData, grid: &GridFunction) -> f64 {
    let mats = digit_matrices_f64(rep);
    let total = grid.values.len() - 1;
    let coarse = total / rep.base() as usize;
    let mut worst: f64 = 0.0;
    for j in 1..total {
        let lhs = grid.values[j].mul(&jordan.j);
        let mut rhs = RMatrix::zeros(jordan.dim(), jordan.v);
        for (a, b) in mats.iter().enumerate() {
            let idx = j as i64 - (a * coarse) as i64;
            if idx <= 0 {
                continue;
            }
            let f = if idx as usize >= coarse {
                &jordan.basis
            } else {
                &grid.values[rep.base() as usize * idx as usize]
            };
            rhs = rhs.add(&b.mul(f));
        }
        worst = worst.max(lhs.sub(&rhs).max_abs());
    }
    worst
}

#[derive(Clone, Debug, PartialEq)]
pub struct NonVanishing {
    pub ell: Option<usize>,
    /// `L (V - F(1/k)) Z^j M` for `j = 0..v`.
    pub brackets: Vec<f64>,
}

fn row_times(l: &[f64], m: &RMatrix) -> Vec<f64> {
    m.vec_mul(l)
}

fn zpow_m(jordan: &JordanData, j: usize) -> Vec<f64> {
    let mut x = jordan.m.clone();
    for _ in 0..j {
        x = jordan.z.mul_vec(&x);
    }
    x
}

fn selector_f64(rep: &LinearRepresentation) -> Vec<f64> {
    rep.selector().iter().map(rational::to_f64).collect()
}

pub fn nonvanishing_index(rep: &LinearRepresentation, jordan: &JordanData, grid: &GridFunction) -> NonVanishing {
    let l = selector_f64(rep);
    let at_inv_k = &grid.values[grid.values.len() / rep.base() as usize];
    let diff = jordan.basis.sub(at_inv_k);
    let row = row_times(&l, &diff);
    let scale = l.iter().map(|x| x.abs()).sum::<f64>()
        * jordan.basis.max_abs().max(1.0)
        * jordan.m.iter().map(|x| x.abs()).sum::<f64>().max(1.0);
    let brackets: Vec<f64> = (0..jordan.v).map(|j| dot(&row, &zpow_m(jordan, j))).collect();
    let ell = (0..jordan.v)
        .rev()
        .find(|&j| brackets[j].abs() > 1e-9 * scale.max(f64::MIN_POSITIVE));
    NonVanishing { ell, brackets }
}

fn require_ell(nv: &NonVanishing) -> Result<usize> {
    nv.ell.ok_or_else(|| {
        Error::hypothesis(
            HypothesisKind::DegenerateIndex,
            "L (V - F(1/k)) Z^j M vanishes for every j",
        )
    })
}

pub fn closed_form_cdf(
    rep: &LinearRepresentation,
    jordan: &JordanData,
    grid: &GridFunction,
    ell: usize,
    x: f64,
) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::domain(format!("{x} is outside [0, 1]")));
    }
    let k = rep.base() as f64;
    let l = selector_f64(rep);
    let zm = zpow_m(jordan, ell);
    let base = grid.at(1.0 / k);
    let den = dot(&row_times(&l, &jordan.basis.sub(&base)), &zm);
    if den == 0.0 {
        return Err(Error::hypothesis(
            HypothesisKind::DegenerateIndex,
            format!("bracket for j = {ell} vanishes"),
        ));
    }
    let num = dot(&row_times(&l, &grid.at((1.0 + (k - 1.0) * x) / k).sub(&base)), &zm);
    Ok(num / den)
}

/// Main term of `sum_{m <= x} f(m)`.
pub fn dumas_partial_sum(
    rep: &LinearRepresentation,
    jordan: &JordanData,
    grid: &GridFunction,
    x: f64,
) -> Result<f64> {
    if !x.is_finite() || x < 1.0 {
        return Err(Error::domain(format!("x = {x} must be at least 1")));
    }
    if (jordan.rho - 1.0).abs() < 1e-12 {
        return Err(Error::Unsupported("rho = 1 makes I - J singular".into()));
    }
    let k = rep.base() as f64;
    // n = floor(log_k x), found by exact comparison with powers of k.
    let mut n = 0u32;
    let mut kn = 1.0;
    while kn * k <= x {
        kn *= k;
        n += 1;
    }
    let y = x / kn / k;
    let d = rep.dim();
    let v = jordan.v;
    let i_minus_b0 = RMatrix::identity(d).sub(&rep.digit_matrix(0).to_f64());
    let i_minus_j_inv = RMatrix::identity(v).sub(&jordan.j).inverse()?;
    let c = i_minus_b0.mul(&jordan.basis).mul(&i_minus_j_inv);
    let p = RMatrix::identity(v)
        .add(&jordan.z.scale(&(1.0 / jordan.rho)))
        .pow(n as u64);
    let scale = libm::pow(jordan.rho, n as f64 + 1.0);
    let e = c.add(&grid.at(y).sub(&c).mul(&p).scale(&scale));
    let l = selector_f64(rep);
    Ok(dot(&row_times(&l, &e), &jordan.m))
}

/// Everything needed to evaluate the closed-form distribution function.
#[derive(Clone, Debug, PartialEq)]
pub struct ClosedForm {
    pub rep: LinearRepresentation,
    pub jordan: JordanData,
    pub grid: GridFunction,
    pub index: NonVanishing,
}

impl ClosedForm {
    /// Route, Jordan data (unless supplied), grid solve and index in one go.
    pub fn build(
        rep: &LinearRepresentation,
        route: Route,
        depth: u32,
        tol: f64,
        jordan: Option<JordanData>,
    ) -> Result<Self> {
        let r = route_rep(rep, route);
        let jordan = match jordan {
            Some(j) => j,
            None => jordan_data(&r)?,
        };
        let grid = solve_dilation(&r, &jordan, depth, tol)?;
        let index = nonvanishing_index(&r, &jordan, &grid);
        Ok(ClosedForm {
            rep: r,
            jordan,
            grid,
            index,
        })
    }

    pub fn ell(&self) -> Result<usize> {
        require_ell(&self.index)
    }

    pub fn cdf(&self, x: f64) -> Result<f64> {
        closed_form_cdf(&self.rep, &self.jordan, &self.grid, self.ell()?, x)
    }

    pub fn partial_sum(&self, x: f64) -> Result<f64> {
        dumas_partial_sum(&self.rep, &self.jordan, &self.grid, x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linrep::builtin;
    use crate::rational::int;

    fn transposed(name: &str) -> LinearRepresentation {
        builtin(name).unwrap().transpose()
    }

    #[test]
    fn jordan_examples() {
        let j = jordan_data(&transposed("josephus")).unwrap();
        assert_eq!((j.rho, j.v), (4.0, 1));
        assert_eq!(j.basis.column(0), vec![1.0, 0.0]);
        assert_eq!(j.m, vec![1.0]);
        let o = jordan_data(&transposed("one")).unwrap();
        assert_eq!((o.rho, o.v, o.m.clone()), (2.0, 1, vec![1.0]));
        let s = jordan_data(&transposed("sumdigits")).unwrap();
        assert_eq!((s.rho, s.v), (2.0, 2));
        let st = jordan_data(&transposed("stern")).unwrap();
        assert_eq!(st.basis.column(0), vec![1.0, 1.0]);
        assert_eq!(st.m, vec![0.5]);
        assert!(matches!(
            jordan_data(&transposed("dumas")),
            Err(Error::Hypothesis {
                kind: HypothesisKind::NonUniqueDominant,
                ..
            })
        ));
    }

    #[test]
    fn sumdigits_chain() {
        let r = transposed("sumdigits");
        let j = jordan_data(&r).unwrap();
        let b = r.digit_sum().to_f64();
        // B' V = V J
        let lhs = b.mul(&j.basis);
        let rhs = j.basis.mul(&j.j);
        assert!(lhs.sub(&rhs).max_abs() < 1e-15);
        // V M reproduces the terminal vector, which lies in the dominant space.
        let vm = j.basis.mul_vec(&j.m);
        assert_eq!(vm, vec![1.0, 0.0]);
    }

    #[test]
    fn irrational_dominant_eigenvector() {
        // ((1,1),(1,0)) + I has dominant eigenvalue 1 + golden ratio.
        let rep = LinearRepresentation::new(
            2,
            vec![QMatrix::identity(2), QMatrix::from_i64(2, 2, &[1, 1, 1, 0])],
            vec![int(1), int(0)],
            None,
        )
        .unwrap();
        let j = jordan_data(&rep).unwrap();
        let phi = (1.0 + libm::sqrt(5.0)) / 2.0;
        assert!((j.rho - (1.0 + phi)).abs() < 1e-12);
        let v = j.basis.column(0);
        assert!((v[0] - 1.0).abs() < 1e-12 && (v[1] - 1.0 / phi).abs() < 1e-12);
        // u = v for a symmetric matrix, so M = v_1 / |v|^2.
        let want = 1.0 / (1.0 + 1.0 / (phi * phi));
        assert!((j.m[0] - want).abs() < 1e-12);
    }

    #[test]
    fn josephus_grid() {
        let r = transposed("josephus");
        let j = jordan_data(&r).unwrap();
        let g = solve_dilation(&r, &j, 12, DEFAULT_TOL).unwrap();
        let half = g.at_index(1 << 11);
        assert!((half.get(0, 0) - 0.5).abs() < 1e-12);
        assert!((half.get(1, 0) + 0.25).abs() < 1e-12);
        assert_eq!(g.at_index(0), &RMatrix::zeros(2, 1));
        assert_eq!(g.at_index(1 << 12), &j.basis);
        assert!(dilation_residual(&r, &j, &g) <= DEFAULT_TOL);
        let nv = nonvanishing_index(&r, &j, &g);
        assert_eq!(nv.ell, Some(0));
        assert!((nv.brackets[0] - 0.25).abs() < 1e-12);
        assert!((closed_form_cdf(&r, &j, &g, 0, 0.5).unwrap() - 0.25).abs() < 1e-12);
        assert!((closed_form_cdf(&r, &j, &g, 0, 1.0).unwrap() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn constant_grid() {
        let cf = ClosedForm::build(&builtin("one").unwrap(), Route::Transposed, 8, DEFAULT_TOL, None).unwrap();
        for (i, f) in cf.grid.values.iter().enumerate() {
            assert!((f.get(0, 0) - i as f64 / 256.0).abs() < 1e-14);
        }
        assert!((cf.index.brackets[0] - 0.5).abs() < 1e-14);
        assert!((cf.cdf(0.3).unwrap() - 0.3).abs() < 1e-12);
        assert!((cf.partial_sum(1000.0).unwrap() - 1001.0).abs() <= 1.0);
    }

    #[test]
    fn josephus_partial_sums() {
        let cf = ClosedForm::build(&builtin("josephus").unwrap(), Route::Transposed, 12, DEFAULT_TOL, None).unwrap();
        let x = 4096.0;
        let want = (libm::pow(4.0, 12.0) - 1.0) / 3.0;
        assert!(((cf.partial_sum(x).unwrap() - want) / want).abs() < 1e-3);
        assert!(cf.partial_sum(0.5).is_err());
    }

    #[test]
    fn direct_route_for_josephus() {
        let rep = builtin("josephus").unwrap();
        // The terminal vector has no component along V = e_1, so M = 0.
        let cf = ClosedForm::build(&rep, Route::Direct, 10, DEFAULT_TOL, None).unwrap();
        assert_eq!(cf.jordan.m, vec![0.0]);
        assert_eq!(cf.index.ell, None);
        // Forcing M = 1 gives the uniform distribution rather than x^2.
        let forced = JordanData::from_parts(4.0, cf.jordan.basis.clone(), vec![1.0], 2.0).unwrap();
        let cf = ClosedForm::build(&rep, Route::Direct, 10, DEFAULT_TOL, Some(forced)).unwrap();
        assert!((cf.cdf(0.5).unwrap() - 0.5).abs() < 1e-12);
    }

    #[test]
    fn isolated_dominant_block_is_degenerate() {
        let q = |e: &[i64]| QMatrix::from_i64(3, 3, e);
        let rep = LinearRepresentation::new(
            2,
            vec![q(&[2, -1, 0, 0, 1, 0, 0, 0, 3]), q(&[2, 1, 0, 0, 1, 0, 0, 0, 3])],
            vec![int(0), int(1), int(0)],
            None,
        )
        .unwrap();
        let cf = ClosedForm::build(&rep, Route::Transposed, 8, DEFAULT_TOL, None).unwrap();
        assert_eq!(cf.jordan.rho, 6.0);
        assert_eq!(cf.index.ell, None);
        assert!(matches!(
            cf.cdf(0.5),
            Err(Error::Hypothesis {
                kind: HypothesisKind::DegenerateIndex,
                ..
            })
        ));
    }

    #[test]
    fn certification_is_required() {
        let r = LinearRepresentation::new(
            2,
            vec![QMatrix::from_i64(1, 1, &[2]), QMatrix::from_i64(1, 1, &[0])],
            vec![int(1)],
            None,
        )
        .unwrap();
        let j = jordan_data(&r).unwrap();
        assert!(matches!(
            solve_dilation(&r, &j, 6, DEFAULT_TOL),
            Err(Error::Hypothesis {
                kind: HypothesisKind::RhoNotAboveJsr,
                ..
            })
        ));
    }
}

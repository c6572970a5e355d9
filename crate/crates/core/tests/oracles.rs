//! Cross-checks against independent recurrences and closed forms.

use regmeas_core::dilation::{dilation_residual, ClosedForm, Route, DEFAULT_TOL};
use regmeas_core::measure::{
    approximant, cocycle_matrix, empirical_cdf, empirical_cdf_selected, fourier_empirical,
    fourier_levels, fourier_product, refine_step, twiddle, Interval,
};
use regmeas_core::rational::{frac, int, to_f64};
use regmeas_core::spectral::{eigenvalues, positivity_power};
use regmeas_core::sums::{brute_sigma, partial_sum, sigma_vector};
use regmeas_core::{builtin, BigInt, Complex64, QMatrix, Rational, BUILTIN_NAMES};

fn stern_table(n: usize) -> Vec<i64> {
    let mut s = vec![0i64; n + 2];
    s[1] = 1;
    for m in 1..=n.div_ceil(2) {
        if 2 * m < s.len() {
            s[2 * m] = s[m];
        }
        if 2 * m + 1 < s.len() {
            s[2 * m + 1] = s[m] + s[m + 1];
        }
    }
    s
}

#[test]
fn stern_state_vectors_follow_the_recurrence() {
    let s = stern_table(1 << 12);
    let rep = builtin("stern").unwrap();
    for m in 0..(1u64 << 12) {
        assert_eq!(
            rep.state_vector(m),
            vec![int(s[m as usize]), int(s[m as usize + 1])],
            "m = {m}"
        );
    }
}

#[test]
fn josephus_values_follow_the_recurrence() {
    let rep = builtin("josephus").unwrap();
    let mut j = vec![0i64; 1 << 12];
    for m in 1..j.len() {
        j[m] = if m % 2 == 0 { 2 * j[m / 2] - 1 } else { 2 * j[m / 2] + 1 };
    }
    j[0] = 0;
    for (m, v) in j.iter().enumerate().skip(1) {
        assert_eq!(rep.evaluate(m as u64), int(*v), "m = {m}");
    }
}

#[test]
fn products_agree_with_unrolled_recursion() {
    for name in BUILTIN_NAMES {
        let rep = builtin(name).unwrap();
        let k = rep.base() as usize;
        let mut states = vec![rep.terminal().to_vec()];
        for m in 1..(1usize << 12) {
            let next = rep.digit_matrix(m % k).mul_vec(&states[m / k]);
            states.push(next);
        }
        for (m, st) in states.iter().enumerate() {
            assert_eq!(&rep.state_vector(m as u64), st, "{name} at {m}");
        }
    }
}

#[test]
fn sigma_matches_enumeration() {
    for name in BUILTIN_NAMES {
        let rep = builtin(name).unwrap();
        for n in 0..=12 {
            assert_eq!(sigma_vector(&rep, n), brute_sigma(&rep, n).unwrap(), "{name} n={n}");
        }
    }
}

#[test]
fn sigma_closed_forms() {
    let stern = builtin("stern").unwrap();
    let sd = builtin("sumdigits").unwrap();
    let jo = builtin("josephus").unwrap();
    for n in 0..30u32 {
        let s = sigma_vector(&stern, n).values;
        assert_eq!(s[0], s[1]);
        // Sigma_1(n) = 2^{n-1} (n + 2) counts the ones among n+1 digit strings.
        let want = Rational::new(BigInt::from(n + 2) * BigInt::from(2).pow(n), BigInt::from(2));
        assert_eq!(sigma_vector(&sd, n).values[0], want);
        assert_eq!(sigma_vector(&jo, n).values[0], Rational::from(BigInt::from(4).pow(n)));
    }
}

#[test]
fn lifted_sigma_zero_collects_lower_levels() {
    let stern = builtin("stern").unwrap();
    let lifted = stern.lift_base(2).unwrap();
    let s0 = sigma_vector(&stern, 0).values;
    let s1 = sigma_vector(&stern, 1).values;
    let want: Vec<Rational> = s0.iter().zip(&s1).map(|(a, b)| a + b).collect();
    assert_eq!(sigma_vector(&lifted, 0).values, want);
    for m in 0..2000 {
        assert_eq!(lifted.evaluate(m), stern.evaluate(m));
    }
}

fn conjugated_josephus() -> regmeas_core::LinearRepresentation {
    builtin("josephus")
        .unwrap()
        .conjugate(&QMatrix::from_i64(2, 2, &[1, -1, 1, 1]))
        .unwrap()
}

#[test]
fn refinement_is_exact() {
    // The conjugated Josephus representation has Sigma_1(0) = 0 and starts one level later.
    for (rep, start) in [
        (builtin("stern").unwrap(), 0),
        (builtin("one").unwrap(), 0),
        (conjugated_josephus(), 1),
    ] {
        let mut prev = approximant(&rep, start).unwrap();
        for n in start + 1..=10 {
            let next = refine_step(&rep, &prev).unwrap();
            assert_eq!(next, approximant(&rep, n).unwrap());
            for c in &next.components {
                assert_eq!(c.total(), int(1));
                assert!(c.weights.iter().all(|w| *w >= int(0)));
            }
            prev = next;
        }
    }
}

#[test]
fn cocycle_is_markov() {
    for rep in [builtin("stern").unwrap(), conjugated_josephus()] {
        for n in 1..=20 {
            let a = cocycle_matrix(&rep, n).unwrap().at_one();
            for i in 0..a.rows() {
                let sum = a.row(i).iter().fold(int(0), |acc, x| acc + x);
                assert_eq!(sum, int(1));
            }
        }
    }
}

#[test]
fn fourier_recursion_matches_direct_sums() {
    let rep = builtin("stern").unwrap();
    for t in 1..=8i64 {
        let levels = fourier_levels(&rep, t as f64, 10).unwrap();
        for n in 1..=10u32 {
            let mu = approximant(&rep, n).unwrap();
            let prev = &levels[n as usize - 1];
            let a = cocycle_matrix(&rep, n).unwrap().evaluate_at(twiddle(2, n, t as f64));
            let rec = a.mul_vec(prev);
            for (i, c) in mu.components.iter().enumerate() {
                let z = fourier_empirical(c, t);
                assert!((z - rec[i]).norm() < 1e-10, "t={t} n={n}");
            }
        }
    }
}

#[test]
fn josephus_fourier_matches_density() {
    // int_0^1 2x e^{-2 pi i x} dx = i / pi.
    let p = fourier_product(&builtin("josephus").unwrap(), 1.0, 30).unwrap();
    let want = Complex64::new(0.0, 1.0 / std::f64::consts::PI);
    assert!((p.values[0] - want).norm() < 1e-4, "{:?}", p.values[0]);
}

#[test]
fn constant_sequence_cdf_is_a_staircase() {
    let one = builtin("one").unwrap();
    for n in [4u32, 8, 12] {
        for j in 0..=100 {
            let x = frac(j, 100);
            let f = to_f64(&empirical_cdf(&one, n, &x, Interval::Closed).unwrap()[0]);
            assert!((f - j as f64 / 100.0).abs() <= 1.0 / (1u64 << n) as f64 + 1e-15);
        }
    }
}

#[test]
fn eigenvalue_invariants() {
    let mats = [
        builtin("stern").unwrap().digit_sum(),
        builtin("dumas").unwrap().digit_sum(),
        QMatrix::from_i64(3, 3, &[1, 2, 0, -1, 3, 4, 2, 0, 5]),
        QMatrix::from_i64(4, 4, &[0, 1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 1, -6, 1, 5, 1]),
    ];
    for m in mats {
        let ev = eigenvalues(&m).unwrap();
        assert_eq!(ev.len(), m.rows());
        let prod = ev.iter().fold(Complex64::new(1.0, 0.0), |a, z| a * z);
        let sum: Complex64 = ev.iter().sum();
        let det = {
            let mut p = regmeas_core::poly::characteristic_polynomial(&m).coeffs()[0].clone();
            if m.rows() % 2 == 1 {
                p = -p;
            }
            to_f64(&p)
        };
        let tr = to_f64(&m.trace());
        assert!((prod.re - det).abs() <= 1e-8 * det.abs().max(1.0) && prod.im.abs() < 1e-8);
        assert!((sum.re - tr).abs() <= 1e-8 * tr.abs().max(1.0));
    }
}

#[test]
fn positivity_power_is_minimal() {
    for entries in [[0i64, 1, 1, 1], [1, 1, 1, 0], [2, 1, 1, 2]] {
        let b = QMatrix::from_i64(2, 2, &entries);
        let j = positivity_power(&b).unwrap().unwrap();
        assert!(b.pow(j as u64).is_positive());
        assert!(j == 1 || !b.pow(j as u64 - 1).is_positive());
    }
    let cyc = QMatrix::from_i64(3, 3, &[0, 1, 0, 0, 0, 1, 1, 1, 0]);
    let j = positivity_power(&cyc).unwrap().unwrap();
    assert!(cyc.pow(j as u64).is_positive() && !cyc.pow(j as u64 - 1).is_positive());
}

#[test]
fn closed_form_agrees_with_empirical() {
    for name in ["josephus", "stern", "one"] {
        let rep = builtin(name).unwrap();
        let cf = ClosedForm::build(&rep, Route::Transposed, 12, DEFAULT_TOL, None).unwrap();
        assert!(dilation_residual(&cf.rep, &cf.jordan, &cf.grid) <= DEFAULT_TOL);
        for j in 0..=64 {
            let emp = to_f64(&empirical_cdf_selected(&rep, 14, &frac(j, 64), Interval::Closed).unwrap());
            let closed = cf.cdf(j as f64 / 64.0).unwrap();
            assert!((emp - closed).abs() <= 0.02, "{name} at {j}/64");
        }
    }
}

#[test]
fn closed_form_is_monotone_for_nonnegative_sequences() {
    for name in ["stern", "sumdigits", "one"] {
        let cf = ClosedForm::build(&builtin(name).unwrap(), Route::Transposed, 10, DEFAULT_TOL, None).unwrap();
        let n = 1 << 10;
        let mut prev = f64::NEG_INFINITY;
        for j in 0..=n {
            let f = cf.cdf(j as f64 / n as f64).unwrap();
            assert!(f >= prev - 1e-12, "{name} at {j}");
            prev = f;
        }
    }
}

#[test]
fn stern_distribution_is_holder() {
    let cf = ClosedForm::build(&builtin("stern").unwrap(), Route::Transposed, 12, DEFAULT_TOL, None).unwrap();
    let n = 1usize << 12;
    let f: Vec<f64> = (0..=n).map(|j| cf.cdf(j as f64 / n as f64).unwrap()).collect();
    let mut c: f64 = 0.0;
    for i in 0..=n {
        for j in i + 1..=n {
            let h = (j - i) as f64 / n as f64;
            c = c.max((f[j] - f[i]).abs() / h.powf(0.85));
        }
    }
    assert!(c <= 10.0, "constant {c}");
}

#[test]
fn josephus_partial_sum_error_shrinks() {
    let rep = builtin("josephus").unwrap();
    let cf = ClosedForm::build(&rep, Route::Transposed, 12, DEFAULT_TOL, None).unwrap();
    let mut last = f64::INFINITY;
    for n in 8..=12u32 {
        let x = (1u64 << n) * 3 / 2;
        let oracle = to_f64(&partial_sum(&rep, x).unwrap());
        let err = (cf.partial_sum(x as f64).unwrap() - oracle).abs() / 4f64.powi(n as i32);
        assert!(err < last, "n = {n}");
        last = err;
    }
}

use facseries::applications::{e1_factorial_coeffs, scaled_e1_reference, E1Series};
use facseries::evaluation::{
    beta_by_quadrature, beta_exact, eval_power_as_factorial, half_precision, sum_factorial_series,
    sum_inverse_power_series,
};
use facseries::pade::pade_construct;
use facseries::series::{factorial_term, inverse_pochhammer_series, pochhammer, term_decay_estimate};
use facseries::transform::{inverse_power_to_factorial, power_to_factorial_coeffs};
use facseries::{BigFloat, BigRational, FormalSeries, PrecisionContext, QuadratureSpec, Real, SeriesKind};
use num_traits::{One, Zero};

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}

fn ctx() -> PrecisionContext {
    PrecisionContext::new(64).unwrap()
}

fn e5(ctx: &PrecisionContext) -> BigFloat {
    scaled_e1_reference(&BigFloat::from_i64(5, ctx), ctx).unwrap()
}

#[test]
fn e1_factorial_series_improves_with_order() {
    let ctx = ctx();
    let reference = e5(&ctx);
    let d = FormalSeries::new(SeriesKind::Factorial, e1_factorial_coeffs(15));
    let report = sum_factorial_series(&d, &BigFloat::from_i64(5, &ctx), 16, &ctx).unwrap().with_reference(reference);
    let errors = report.relative_errors.unwrap();
    // errors[i] belongs to N = i + 1 terms; the sequence has sign-change dips, so compare against N = 5
    for i in 5..15 {
        assert!(errors[i] < errors[4], "N = {}: {}", i + 1, errors[i]);
    }
    assert!(errors[14] < errors[9]);
    assert!(errors[14] < BigFloat::from_f64(1e-6, &ctx));
}

#[test]
fn e1_inverse_power_series_diverges_where_factorial_converges() {
    let ctx = ctx();
    let z = BigFloat::from_i64(5, &ctx);
    let reference = e5(&ctx);
    let s = E1Series::new(30);
    let asym = sum_inverse_power_series(&s.inverse_power, &z, 31, &ctx).unwrap().with_reference(reference.clone());
    let fact = sum_factorial_series(&s.factorial, &z, 15, &ctx).unwrap().with_reference(reference);
    let asym_err = asym.relative_errors.unwrap();
    assert!(asym_err[30] > asym_err[5]);
    assert!(fact.relative_errors.unwrap()[14] < BigFloat::from_f64(1e-6, &ctx));
}

#[test]
fn diagonal_pade_of_e1_improves_monotonically() {
    let ctx = ctx();
    let reference = e5(&ctx);
    let x = q(1, 5);
    let c: Vec<BigRational> = E1Series::new(34).inverse_power.into_coeffs();
    let mut previous: Option<BigFloat> = None;
    for n in 2..=17 {
        let p = pade_construct(&c[..=2 * n], n, n).unwrap();
        let value = &x * p.eval_exact(&x).unwrap();
        let err = (BigFloat::from_rational(&value, &ctx) - reference.clone()).abs();
        if let Some(prev) = previous {
            assert!(err < prev, "[{n}/{n}]: {err} vs {prev}");
        }
        previous = Some(err);
    }
    assert!(previous.unwrap() / reference < BigFloat::from_f64(1e-10, &ctx));
}

#[test]
fn inverse_square_as_factorial_series() {
    let ctx = ctx();
    let mut c = vec![BigRational::zero(); 41];
    c[1] = BigRational::one();
    let d = inverse_power_to_factorial(&FormalSeries::new(SeriesKind::InversePower, c), 40).unwrap();
    for (m, dm) in d.coeffs().iter().enumerate().skip(1) {
        assert_eq!(dm, &BigRational::from_integer(facseries::series::factorial(m - 1)));
    }
    let report = sum_factorial_series(&d, &BigFloat::from_i64(4, &ctx), 40, &ctx).unwrap();
    // terms are 6 / (m)_5, so the neglected tail telescopes to 6 / (4 (40)_4)
    let tail = BigFloat::from_rational(&q(6, 4 * 40 * 41 * 42 * 43), &ctx);
    let err = BigFloat::from_rational(&q(1, 16), &ctx) - report.final_value;
    assert!(((err - tail.clone()) / tail).abs() < BigFloat::tolerance(6, &ctx));
    let longer = {
        let mut c = vec![BigRational::zero(); 121];
        c[1] = BigRational::one();
        inverse_power_to_factorial(&FormalSeries::new(SeriesKind::InversePower, c), 120).unwrap()
    };
    let report = sum_factorial_series(&longer, &BigFloat::from_i64(4, &ctx), 120, &ctx).unwrap();
    let err = (report.final_value - BigFloat::from_rational(&q(1, 16), &ctx)).abs();
    assert!(err < BigFloat::from_f64(1e-8, &ctx), "error {err}");
}

#[test]
fn inverse_pochhammer_expansion_converges() {
    let ctx = ctx();
    let z = BigFloat::from_i64(6, &ctx);
    let series = inverse_pochhammer_series(2, 39);
    let report = sum_inverse_power_series(&series, &z, 40, &ctx).unwrap();
    let target = BigFloat::from_i64(1, &ctx) / pochhammer(&z, 3, &ctx);
    let err = (report.final_value - target).abs();
    assert!(err < BigFloat::from_f64(1e-8, &ctx), "error {err}");
}

#[test]
fn product_form_matches_factorial_series_in_reciprocal_argument() {
    let ctx = ctx();
    let gamma = E1Series::new(20).inverse_power.into_coeffs();
    let lambda = power_to_factorial_coeffs(&FormalSeries::new(SeriesKind::Power, gamma), 20).unwrap();
    let as_factorial = FormalSeries::new(SeriesKind::Factorial, lambda.clone());
    for w in [q(1, 10), q(1, 5)] {
        let wt = BigFloat::from_rational(&w, &ctx);
        let inv = BigFloat::from_rational(&(BigRational::one() / &w), &ctx);
        let product = eval_power_as_factorial(&lambda, &wt, 21, &ctx).unwrap();
        let fact = sum_factorial_series(&as_factorial, &inv, 21, &ctx).unwrap();
        for (a, b) in product.partial_sums.iter().zip(&fact.partial_sums) {
            let b = b.clone() * inv.clone();
            let scale = BigFloat::max_of(b.abs(), BigFloat::tolerance(0, &ctx));
            assert!((a.clone() - b).abs() / scale < BigFloat::tolerance(6, &ctx), "w = {w}");
        }
    }
}

fn gamma_function(z: &BigRational) -> f64 {
    // z is an integer or half-integer in [1, 5]
    let two_z = (z * BigRational::from_integer(2.into())).to_integer();
    let two_z: i64 = two_z.try_into().unwrap();
    let mut g = if two_z % 2 == 0 { 1.0 } else { std::f64::consts::PI.sqrt() };
    let mut x = if two_z % 2 == 0 { 1.0 } else { 0.5 };
    while (2.0 * x) as i64 != two_z {
        g *= x;
        x += 1.0;
    }
    g
}

#[test]
fn term_decay_follows_gamma_scaled_power_law() {
    let ctx = PrecisionContext::default();
    for twice in 2..=10 {
        let z = q(twice, 2);
        let zf = twice as f64 / 2.0;
        let gamma = gamma_function(&z);
        let mut last = f64::INFINITY;
        for n in 1..=40usize {
            let term: f64 = factorial_term(&zf, n, &BigRational::from_integer(facseries::series::factorial(n)), &ctx).unwrap();
            let ratio = term / term_decay_estimate(&zf, n, &ctx).unwrap() / gamma;
            let gap = (ratio - 1.0).abs();
            assert!(gap < last, "z = {zf}, n = {n}");
            last = gap;
            if n >= 20 {
                assert!(ratio > 0.5 && ratio < 2.0, "z = {zf}, n = {n}: {ratio}");
            }
        }
    }
}

#[test]
fn beta_integrals_match_closed_form() {
    let ctx = ctx();
    let spec = QuadratureSpec::default();
    let tol = half_precision::<BigFloat>(&ctx);
    for z in [q(1, 1), q(5, 2), q(5, 1), q(3, 2)] {
        for n in 0..=10 {
            let v: BigFloat = beta_by_quadrature(&z, n, &spec, &ctx).unwrap();
            let exact = BigFloat::from_rational(&beta_exact(&z, n), &ctx);
            let direct = factorial_term(&BigFloat::from_rational(&z, &ctx), n, &BigRational::from_integer(facseries::series::factorial(n)), &ctx).unwrap();
            assert!(((v - exact.clone()) / exact.clone()).abs() < tol, "z = {z}, n = {n}");
            assert!(((direct - exact.clone()) / exact).abs() < BigFloat::tolerance(4, &ctx));
        }
    }
}

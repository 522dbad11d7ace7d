use mlf_core::hfun::solve_h;
use mlf_core::inequal::*;
use mlf_core::{eval_derivative, taylor_jet, Complex64, Params};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

fn p(a: f64, b: f64) -> Params {
    Params::new(a, b).unwrap()
}

fn h(a: f64) -> f64 {
    solve_h(a, 1e-14).unwrap().h
}

// (α, β, x, F) from extended-precision derivatives
const F_REFERENCE: &[(f64, f64, f64, f64)] = &[
    (0.8, 2.0, 1.0, -0.9152793455059067133832653791852409886239),
    (1.5, 1.5, 2.0, 0.1580092946890816968260559979683181771398),
    (0.5, 1.0, 5.0, -4.1477644227007832935508e22),
];

#[test]
fn f_ab_reference() {
    for &(a, b, x, want) in F_REFERENCE {
        let got = f_ab(&p(a, b), x).unwrap();
        assert!((got - want).abs() <= 1e-13 * want.abs(), "({a}, {b}) at {x}: {got} vs {want}");
    }
    assert!(f_ab(&p(1.0, 1.0), 3.0).unwrap().abs() < 1e-12);
}

#[test]
fn f_ab_leading_form() {
    let (a, b, x) = (1.5f64, 1.0f64, 40.0f64);
    let r = x.powf(1.0 / a);
    let lead = x.powf(2.0 * (1.0 - a - b) / a) * (2.0 * r).exp() * ((a - 1.0) * r + a * (1.0 - b)) / a.powi(4);
    let got = f_ab(&p(a, b), x).unwrap();
    assert!(got > 0.0);
    assert!((got / lead - 1.0).abs() < 0.05, "{got} vs {lead}");
}

#[test]
fn f_ab_zero_values() {
    assert!(f_ab_zero(&p(1.0, 1.0)).unwrap().abs() < 1e-28);
    assert!((f_ab_zero(&p(2.0, 3.0)).unwrap() - 1.0 / 2880.0).abs() < 1e-18);
    assert!(f_ab_zero(&p(2.0, 4.4)).unwrap() < 0.0);
    assert!(f_ab_zero(&p(2.0, 0.0)).is_err());
}

#[test]
fn sign_bridge() {
    let mut rng = StdRng::seed_from_u64(21);
    for _ in 0..200 {
        let a: f64 = rng.random_range(0.1..5.0);
        let b: f64 = rng.random_range(0.05..14.0);
        let v = f_ab_zero(&p(a, b)).unwrap();
        let hh = h(a);
        if (b - hh).abs() > 1e-9 * hh {
            assert_eq!(v > 0.0, b < hh, "({a}, {b}): F(0) = {v}, h = {hh}");
        }
    }
    for &a in &[1.5, 2.0, 3.0] {
        let hh = h(a);
        assert!(f_ab_zero(&p(a, hh - 1e-6)).unwrap() > 0.0);
        assert!(f_ab_zero(&p(a, hh + 1e-6)).unwrap() < 0.0);
    }
}

#[test]
fn first_binomial_sum_is_minus_twice_f() {
    for &(a, b, x) in &[(1.5, 1.5, 2.0), (0.7, 1.3, -4.0), (2.5, 2.0, 3.0)] {
        let q = p(a, b);
        let f1 = f_k(&q, x, 1).unwrap();
        let f = f_ab(&q, x).unwrap();
        assert!((f1 + 2.0 * f).abs() <= 1e-12 * f.abs(), "({a}, {b}) at {x}");
    }
}

#[test]
fn binomial_sums_two_routes() {
    for &(a, b, x) in &[(1.5, 1.5, 2.0), (2.5, 2.0, 3.0), (0.6, 0.8, -1.5), (1.2, 3.0, 6.0)] {
        let q = p(a, b);
        for k in 1..=3 {
            let n = 2 * k;
            let direct: Vec<f64> = (0..=n).map(|i| eval_derivative(&q, x, i, 1e-15).unwrap()).collect();
            let j = taylor_jet(&q, x, n, 1e-15).unwrap();
            let fact = |m: usize| (1..=m).product::<usize>() as f64;
            let from_jet: Vec<f64> = (0..=n).map(|i| fact(i) * j.coeffs[i]).collect();
            let err: f64 = (0..=n).map(|i| fact(n) * (j.errs[i] * from_jet[n - i].abs() / fact(n - i) + 1e-16 * (from_jet[i] * from_jet[n - i]).abs() / (fact(i) * fact(n - i)))).sum();
            let u = binomial_sum(&direct, k);
            let v = binomial_sum(&from_jet, k);
            assert!((u - v).abs() <= 4.0 * err, "({a}, {b}) at {x}, k = {k}: {u} vs {v}");
            assert_eq!(f_k(&q, x, k).unwrap(), u);
        }
    }
}

#[test]
fn modulus_expansion_through_second_order() {
    // |E(x+iy)|² = Σ (−1)^k F_k y^{2k}/(2k)!, truncated at k = 3
    let (q, x, y) = (p(2.5, 2.0), 3.0, 0.05);
    let e0 = eval_derivative(&q, x, 0, 1e-15).unwrap();
    let v = mlf_core::eval(&q, Complex64::new(x, y), 1e-15).unwrap().value.norm_sqr();
    let s = e0 * e0 - f_k(&q, x, 1).unwrap() * y * y / 2.0 + f_k(&q, x, 2).unwrap() * y.powi(4) / 24.0
        - f_k(&q, x, 3).unwrap() * y.powi(6) / 720.0;
    assert!((v - s).abs() < 1e-13 * v, "{v} vs {s}");
    let fit = local_expansion_check(&q, x, &DEFAULT_Y).unwrap();
    let f2 = f_k(&q, x, 2).unwrap();
    assert!((fit.curvature - f2 / 24.0).abs() < 1e-3 * f2.abs());
}

#[test]
fn local_expansion_sample() {
    let sample = [
        (1.5, 1.5, 2.0),
        (2.5, 2.0, 3.0),
        (0.8, 2.0, 1.0),
        (3.0, 2.0, -4.0),
        (1.2, 0.5, 10.0),
        (0.5, 1.0, 2.0),
        (0.7, 1.3, -3.0),
        (2.0, 3.0, 4.0),
        (1.7, 0.9, 1.5),
        (3.5, 2.0, 20.0),
        (0.9, 0.9, 0.5),
        (2.2, 4.0, -6.0),
    ];
    for &(a, b, x) in &sample {
        let fit = local_expansion_check(&p(a, b), x, &DEFAULT_Y).unwrap();
        assert!(fit.deviation.abs() <= 1e-6 * fit.f_ab.abs(), "({a}, {b}) at {x}: {fit:?}");
    }
    let fit = local_expansion_check(&p(1.0, 1.0), 2.0, &DEFAULT_Y).unwrap();
    assert!(fit.constant.abs() < 1e-10);
    assert!(local_expansion_check(&p(0.5, 1.0), 5.0, &DEFAULT_Y).unwrap().constant < 0.0);
    assert!(local_expansion_check(&p(1.5, 1.5), 2.0, &[0.5, 0.6]).is_err());
}

#[test]
fn u_sequence_monotonicity() {
    let seq = |a: f64, b: f64| -> Vec<f64> { (0..=64).map(|n| u_seq(&p(a, b), n).unwrap()).collect() };
    for &(a, b) in &[(0.8, 1.2), (0.5, 0.5)] {
        let u = seq(a, b);
        assert!(u.windows(2).all(|w| w[1] >= w[0]), "({a}, {b})");
    }
    for &(a, b) in &[(1.5, 1.0), (2.0, 4.0)] {
        let u = seq(a, b);
        assert!(u.windows(2).all(|w| w[1] <= w[0]), "({a}, {b})");
    }
    assert!(seq(1.0, 1.0).iter().all(|&v| (v - 1.0).abs() < 1e-15));
    let q = p(0.8, h(0.8));
    assert!((u_seq(&q, 1).unwrap() - u_seq(&q, 0).unwrap()).abs() < 1e-8);
}

#[test]
fn additivity_spot_check() {
    let mut rng = StdRng::seed_from_u64(22);
    for &(a, b) in &[(0.5, 1.0), (0.8, 2.0), (1.5, 1.0), (2.0, 3.0), (1.0, 0.5)] {
        let lab = classify_point(&p(a, b)).unwrap().additivity;
        for _ in 0..50 {
            let (x, y) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
            let g = additivity_gap(&p(a, b), x, y).unwrap();
            let tol = 1e-12 * additivity_gap(&p(a, b), x + y, 0.0).unwrap().abs().max(1.0);
            match lab {
                Additivity::Super => assert!(g >= -tol, "({a}, {b}) x = {x}, y = {y}: {g}"),
                Additivity::Sub => assert!(g <= tol, "({a}, {b}) x = {x}, y = {y}: {g}"),
                Additivity::Neither => unreachable!(),
            }
        }
    }
}

#[test]
fn small_grids_on_proved_regions() {
    let g = GridSpec::square(20.0, 41).unwrap();
    for &(a, b) in &[(0.5, 1.0), (1.0, 3.0)] {
        assert!(check_le(&p(a, b), &g, 1e-14).unwrap().is_empty());
    }
    let g = GridSpec::square(30.0, 41).unwrap();
    for &(a, b) in &[(1.0, 0.5), (2.0, 2.0), (2.0, 3.0), (3.0, 4.0), (4.0, 8.0)] {
        assert!(check_ge(&p(a, b), &g, 1e-14).unwrap().is_empty(), "({a}, {b})");
    }
    let g = GridSpec::new((0.0, 30.0), (-30.0, 30.0), 31, 41).unwrap();
    assert!(check_two_sided(&p(1.5, 1.2), &g, 1e-14).unwrap().is_empty());
    assert!(check_two_sided(&p(2.0, 2.0), &GridSpec::square(30.0, 40).unwrap(), 1e-14).unwrap().is_empty());
    let e = p(1.0, 1.0);
    assert!(check_le(&e, &g, 1e-14).unwrap().is_empty());
    assert!(check_ge(&e, &g, 1e-14).unwrap().is_empty());
    assert!(check_two_sided(&e, &g, 1e-14).unwrap().is_empty());
}

#[test]
fn violations_found() {
    let v = check_le(&p(1.5, 1.0), &GridSpec::new((25.0, 35.0), (0.2, 1.0), 11, 5).unwrap(), 1e-14).unwrap();
    assert!(!v.is_empty());
    assert!(v.iter().all(|r| r.margin > r.budget && r.bound == Bound::Upper));
    let v = check_ge(&p(1.5, 3.0), &GridSpec::new((-30.0, -20.0), (0.1, 0.5), 11, 5).unwrap(), 1e-14).unwrap();
    assert!(!v.is_empty());
    let b = h(2.5) + 0.5;
    assert!(!check_ge(&p(2.5, b), &GridSpec::square(0.5, 11).unwrap(), 1e-14).unwrap().is_empty());
}

#[test]
fn region_labels() {
    let l = classify_point(&p(0.5, 1.0)).unwrap();
    assert_eq!((l.ineq, l.additivity), (IneqLabel::LeHolds, Additivity::Super));
    let l = classify_point(&p(2.0, 2.5)).unwrap();
    assert_eq!((l.ineq, l.additivity), (IneqLabel::GeHolds, Additivity::Sub));
    let l = classify_point(&p(1.5, 3.0)).unwrap();
    assert_eq!((l.ineq, l.additivity), (IneqLabel::Neither, Additivity::Neither));
    assert!(h(1.5) > 1.0 && h(1.5) < 4.37);
}

#[test]
fn region_map_layout() {
    let m = region_map((0.1, 4.0), (0.0, 8.0), 79).unwrap();
    assert_eq!(m.cells.len(), 79 * 79);
    assert_eq!(m.h_curve.len(), 79);
    for (i, &(a, hh)) in m.h_curve.iter().enumerate() {
        assert_eq!(a, m.alphas[i]);
        for (j, &b) in m.betas.iter().enumerate() {
            let c = m.cell(i, j);
            assert_eq!((c.alpha, c.beta, c.h_of_alpha), (a, b, hh));
            let want = if a <= 1.0 && b >= hh {
                Additivity::Super
            } else if a >= 1.0 && b <= hh {
                Additivity::Sub
            } else {
                Additivity::Neither
            };
            assert_eq!(c.label.additivity, want, "({a}, {b})");
            if a > 1.0 && a < 2.0 && b >= a - 1.0 && b <= a {
                assert_eq!(c.label.ineq, IneqLabel::GeConjectured);
            }
        }
    }
    let m = region_map((0.5, 1.5), (0.5, 1.5), 3).unwrap();
    let c = m.cell(1, 1);
    assert_eq!((c.alpha, c.beta), (1.0, 1.0));
    assert_eq!(c.label.ineq, IneqLabel::LeHolds);
    assert!(region_map((0.0, 1.0), (0.0, 1.0), 5).is_err());
}

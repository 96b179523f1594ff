use super::*;
use crate::quartic_analysis::turning_points;
use crate::scalar::{cplx, Complex};

fn canonical() -> PhysicalParams<f64> {
    PhysicalParams::canonical(0.75)
}

#[test]
fn control_case_reproduces_exponential() {
    let p = PhysicalParams::new(0.6, 1.0, 0.0, 0, -1.0).unwrap();
    let k = 0.8f64;
    let grid: Vec<f64> = (0..=900).map(|i| 1.0 + i as f64 * 0.01).collect();
    let start = Start::Values { f: (-k * 10.0).exp(), df: -k * (-k * 10.0).exp() };
    let sol = integrate_radial_on(&p, 0.6, &grid, Direction::Inward, start, StepControl::default()).unwrap();
    for (i, &r) in sol.grid.iter().enumerate() {
        let exact = (-k * r).exp();
        assert!(((sol.f[i] - exact) / exact).abs() < 1e-8, "r={r}");
        assert!(((sol.df[i] + k * exact) / exact).abs() < 1e-8);
    }
}

#[test]
fn origin_asymptotic_solves_core_equation() {
    let (b, r) = (1.0f64, 0.05);
    let h = 1e-6;
    let f = |x: f64| asymptotic_origin(x, b).0;
    let fd2 = (f(r + h) - 2.0 * f(r) + f(r - h)) / (h * h);
    let core = b * b / r.powi(4) * f(r);
    assert!(((fd2 - core) / core).abs() < 1e-6);
    let full = -p_squared_unchecked(r, &canonical().derive()) * f(r);
    assert!(((full - core) / core).abs() < 0.1);
    let (v, dv) = asymptotic_origin(r, b);
    assert!(((f(r + h) - f(r - h)) / (2.0 * h) - dv).abs() < 1e-6 * dv.abs());
    assert!(v > 0.0);
}

#[test]
fn origin_asymptotic_limits() {
    assert_eq!(asymptotic_origin(1e-4, 1.0f64), (0.0, 0.0));
    assert!(asymptotic_origin(0.01, 1.0f64).0 < 1e-40);
    for &r in &[0.05, 0.2, 1.0] {
        assert!(asymptotic_origin(r, 2.0f64).0 < asymptotic_origin(r, 1.0).0);
    }
}

#[test]
fn infinity_asymptotic() {
    let e = 0.75f64;
    let k2 = 1.0 - e * e;
    let r = 50.0;
    let h = 1e-3;
    let y = |x: f64| asymptotic_infinity(x, e).unwrap().0;
    let fd2 = (y(r + h) - 2.0 * y(r) + y(r - h)) / (h * h);
    assert!(((fd2 - k2 * y(r)) / (k2 * y(r))).abs() < 0.1);
    let (v, dv) = asymptotic_infinity(r, e).unwrap();
    assert!(((y(r + h) - y(r - h)) / (2.0 * h) - dv).abs() < 1e-6 * dv.abs());
    assert!(v > 0.0 && asymptotic_infinity(2.0 * r, e).unwrap().0 < v);
    let slow = asymptotic_infinity(10.0, 0.999999).unwrap().0 * 10.0;
    let fast = asymptotic_infinity(10.0, 0.5).unwrap().0 * 10.0;
    assert!(slow * (1.0f64 - 0.999999f64.powi(2)).sqrt() > fast * 0.75f64.sqrt());
    assert!(asymptotic_infinity(1.0, 1.0).is_err());
}

#[test]
fn default_span_hits_tail_exponent() {
    let (lo, hi) = default_span(&canonical(), 0.75).unwrap();
    assert!((1.0 / lo - 30.0).abs() < 1e-12);
    assert!((hi * (1.0f64 - 0.5625).sqrt() - 30.0).abs() < 1e-12);
    let repulsive = PhysicalParams::new(0.75, 1.0, 1.0, 0, 1.0).unwrap();
    assert!(matches!(default_span(&repulsive, 0.75), Err(Error::Domain(_))));
}

#[test]
fn wronskian_is_constant() {
    let p = canonical();
    let grid = log_grid(0.5, 5.0, 301).unwrap();
    let ctl = StepControl::default();
    let a = integrate_radial_on(&p, 0.75, &grid, Direction::Outward, Start::Values { f: 1.0, df: 0.0 }, ctl).unwrap();
    let b = integrate_radial_on(&p, 0.75, &grid, Direction::Outward, Start::Values { f: 0.0, df: 1.0 }, ctl).unwrap();
    let w = wronskian(&a, &b).unwrap();
    for v in &w {
        assert!((v - 1.0).abs() < 1e-8, "{v}");
    }
}

#[test]
fn solution_grid_is_valid() {
    let p = canonical();
    let span = default_span(&p, 0.75).unwrap();
    let sol = integrate_radial(&p, 0.75, (span.0, 3.0), Direction::Outward).unwrap();
    assert_eq!(sol.grid.len(), DEFAULT_GRID_POINTS);
    assert!(sol.grid.windows(2).all(|w| w[1] > w[0]) && sol.grid[0] > 0.0);
    assert!(sol.f.iter().chain(&sol.df).all(|v| v.is_finite()));
    let inward = integrate_radial(&p, 0.75, (1.0, span.1), Direction::Inward).unwrap();
    assert!(inward.f.iter().all(|v| v.is_finite()));
    assert_eq!(inward.direction, Direction::Inward);
}

#[test]
fn p_squared_sign_matches_motion_intervals() {
    let p = canonical();
    let qa = turning_points(&p, Convention::CoulombShifted).unwrap();
    let d = p.derive();
    let sol = integrate_radial(&p, 0.75, (1.0 / 30.0, 40.0), Direction::Outward).unwrap();
    let tps: Vec<f64> = qa.turning_points.clone();
    for &r in &sol.grid {
        if tps.iter().any(|t| (r - t).abs() < 1e-6) {
            continue;
        }
        let inside = qa.motion_intervals.iter().any(|iv| r > iv.lo && iv.hi.map_or(true, |h| r < h));
        assert_eq!(p_squared_unchecked(r, &d) > 0.0, inside, "r={r}");
    }
}

#[test]
fn growth_past_eigenvalue_overflows() {
    let p = canonical();
    let res = integrate_radial(&p, 0.75, (1.0 / 30.0, 2000.0), Direction::Outward);
    assert!(matches!(res, Err(Error::Overflow { .. })), "{res:?}");
}

#[test]
fn invalid_grids() {
    let p = canonical();
    let ctl = StepControl::default();
    let start = Start::Values { f: 1.0, df: 0.0 };
    assert!(integrate_radial_on(&p, 0.75, &[1.0], Direction::Outward, start, ctl).is_err());
    assert!(integrate_radial_on(&p, 0.75, &[2.0, 1.0], Direction::Outward, start, ctl).is_err());
    assert!(integrate_radial_on(&p, 0.75, &[0.0, 1.0], Direction::Outward, start, ctl).is_err());
}

#[test]
fn canonical_ground_state() {
    let p = canonical();
    let match_r = default_match_point(&p).unwrap();
    assert!((match_r - (1.0f64 / 0.625342).sqrt()).abs() < 1e-4);
    let opts = ShootOptions::default();
    let ev = lowest_eigenvalue(&p, (0.62, 0.99), match_r, &opts).unwrap();
    assert!(ev.e > 0.614659 && ev.e < 1.0);
    // independent shooting with an off-the-shelf RK45 solver gave 0.7492051
    assert!((ev.e - 0.7492051).abs() < 1e-6, "{}", ev.e);
    assert!(ev.defect_lo.log_derivative.signum() != ev.defect_hi.log_derivative.signum());
    let halved = lowest_eigenvalue(&p, (0.62, 0.99), match_r, &opts.halved()).unwrap();
    assert!((halved.e - ev.e).abs() < 1e-6);
    let direct = shoot_eigenvalue(&p, ev.cell, match_r).unwrap();
    assert!((direct - ev.e).abs() < 1e-8);
    let d = matching_defect(&p, ev.e, match_r, &opts).unwrap();
    assert!(d.wronskian.abs() < 1e-7);
}

#[test]
fn no_bound_state_without_coupling() {
    let p = PhysicalParams::new(0.5, 1.0, 0.0, 0, -1.0).unwrap();
    assert!(matches!(shoot_eigenvalue(&p, (0.1, 0.9), 1.0), Err(Error::NoBoundState { .. })));
    let p = PhysicalParams::new(0.5, 1.0, 0.0, 2, -1.0).unwrap();
    assert!(matches!(lowest_eigenvalue(&p, (0.1, 0.9), 1.0, &ShootOptions::default()), Err(Error::NoBoundState { .. })));
}

#[test]
fn shoot_requires_sign_change() {
    let p = canonical();
    assert!(matches!(shoot_eigenvalue(&p, (0.65, 0.7), 1.26), Err(Error::NoSignChange { .. })));
    assert!(shoot_eigenvalue(&p, (0.7, 0.6), 1.26).is_err());
    assert!(matching_defect(&p, 0.75, 1e3, &ShootOptions::default()).is_err());
}

// analytic profile C = r e^{−r/2}
fn profile(r: f64) -> (f64, f64, f64) {
    let ex = (-r / 2.0).exp();
    (r * ex, (1.0 - r / 2.0) * ex, (r / 4.0 - 1.0) * ex)
}

fn analytic_solution(e: f64) -> RadialSolution<f64> {
    let grid = log_grid(0.1, 20.0, 97).unwrap();
    let (mut f, mut df) = (Vec::new(), Vec::new());
    for &r in &grid {
        let (c, dc, _) = profile(r);
        f.push(r * c);
        df.push(c + r * dc);
    }
    RadialSolution { grid, f, df, e, direction: Direction::Outward, stats: StepStats::default() }
}

fn close(a: Complex<f64>, b: Complex<f64>, scale: f64) -> bool {
    (a - b).norm() <= 1e-10 * scale.max(1e-300)
}

#[test]
fn reconstruction_satisfies_first_order_system() {
    let p = PhysicalParams::new(0.8, 1.3, 0.7, 2, -1.0).unwrap();
    let e = p.e();
    let sol = analytic_solution(e);
    let i = Complex::new(0.0, 1.0);
    for &(mass, sign) in &[
        (cplx(0.0, 1.3), FieldSign::Plus),
        (cplx(0.0, 1.3), FieldSign::Minus),
        (cplx(1.3, 0.0), FieldSign::Plus),
        (cplx(0.4, -0.9), FieldSign::Minus),
    ] {
        let fc = reconstruct_components(&sol, &p, ReconstructOptions { mass, sign }).unwrap();
        assert_eq!(fc.constraint_violation(), 0.0);
        let m = mass;
        let m2 = m * m;
        let s = sign.value::<f64>();
        let (eps, al, sg) = (p.epsilon, p.alpha, p.sigma);
        let nu = (p.jj1() / 2.0).sqrt();
        for (k, &r) in fc.grid.iter().enumerate() {
            let (c, dc, d2c) = profile(r);
            let (c, dc, d2c) = (Complex::from(c), Complex::from(dc), Complex::from(d2c));
            let w = eps + al / r;
            let scale = c.norm().max(dc.norm()) * (1.0 + w.abs() + al / (r * r)).powi(2) / m.norm().min(1.0).powi(3);
            // (1.4c)
            assert!(close(m * fc.phi0[k], -i * w * c, scale));
            assert!(close(m * fc.phi1[k], -(nu / r) * c, scale));
            assert!(close(m * fc.phi2[k], dc, scale));
            // (1.4d) with analytic Φ₀′
            let dphi0 = (-i * (-al / (r * r)) * c - i * w * dc) / m;
            let e1 = s * (-i * w * fc.phi1[k] + (nu / r) * fc.phi0[k]) / m;
            let e2 = s * (-i * w * fc.phi2[k] - dphi0) / m;
            let dphi1 = -(nu / m) * (dc / r - c / (r * r));
            let h1 = s * (-i * (dphi1 + fc.phi1[k] / r) - i * (nu / r) * fc.phi2[k]) / m;
            assert!(close(fc.e1[k], e1, scale));
            assert!(close(fc.e2[k], e2, scale));
            assert!(close(fc.h1[k], h1, scale));
            // (1.4b) with analytic E₂′ and E₁ = H₁ = 0
            let de2 = -i * s * al / m2 * (dc / (r * r) - 2.0 * c / (r * r * r));
            let c0 = (-i * w * c - sg * (de2 + 2.0 * fc.e2[k] / r)) / m;
            let c1 = -(nu / r) * c / m;
            let c2 = (i * w * sg * fc.e2[k] + dc) / m;
            assert!(close(fc.c0[k], c0, scale));
            assert!(close(fc.c1[k], c1, scale));
            assert!(close(fc.c2[k], c2, scale));
            // (1.4a) reduces to the second-order equation for C
            let dwc = (-al / (r * r)) * c / (r * r) + w * (dc / (r * r) - 2.0 * c / (r * r * r));
            let dc2 = (d2c + s * sg * al / m2 * dwc) / m;
            let lhs = -i * w * fc.c0[k] - (dc2 + 2.0 * fc.c2[k] / r) - (nu / r) * 2.0 * fc.c1[k];
            let second_order =
                d2c + 2.0 * dc / r + w * w * c + m2 * c - 2.0 * nu * nu * c / (r * r) - s * sg * al * al * c / (m2 * r.powi(4));
            assert!(close(m * lhs - m2 * c, -second_order, scale * m.norm().max(1.0)));
        }
    }
}

#[test]
fn sign_flip_negates_e2() {
    let p = canonical();
    let sol = analytic_solution(0.75);
    let plus = reconstruct_components(&sol, &p, ReconstructOptions::for_params(&p)).unwrap();
    let minus =
        reconstruct_components(&sol, &p, ReconstructOptions { sign: FieldSign::Minus, ..ReconstructOptions::for_params(&p) })
            .unwrap();
    for k in 0..sol.grid.len() {
        assert_eq!(plus.e2[k], -minus.e2[k]);
        assert_eq!(plus.c[k], minus.c[k]);
        assert_eq!(plus.phi0[k], minus.phi0[k]);
        assert_eq!(plus.phi2[k], minus.phi2[k]);
        assert_eq!(plus.c1[k], minus.c1[k]);
    }
    let r = sol.grid[10];
    let expected = Complex::new(0.0, -1.0) * (1.0 / (-1.0 * r * r)) * plus.c[10];
    assert!((plus.e2[10] - expected).norm() < 1e-14 * expected.norm());
}

#[test]
fn phi2_is_derivative_over_mass() {
    let p = canonical();
    let sol = analytic_solution(0.75);
    let fc = reconstruct_components(&sol, &p, ReconstructOptions::for_params(&p)).unwrap();
    for (k, &r) in sol.grid.iter().enumerate() {
        let want = Complex::from(profile(r).1) / Complex::new(0.0, 1.0);
        assert!((fc.phi2[k] - want).norm() <= 1e-8 * want.norm().max(1e-12));
    }
}

#[test]
fn reconstruction_guards() {
    let p = canonical();
    let mut sol = analytic_solution(0.75);
    assert!(reconstruct_components(&sol, &p, ReconstructOptions { mass: cplx(0.0, 0.0), sign: FieldSign::Plus }).is_err());
    sol.grid[0] = 1e-13;
    assert!(matches!(reconstruct_components(&sol, &p, ReconstructOptions::for_params(&p)), Err(Error::Singular(_))));
    let names = FieldComponents::<f64>::NAMES;
    assert_eq!(names.len(), 15);
}

#[test]
fn reconstruct_numerical_ground_state() {
    let p = canonical();
    let opts = ShootOptions::default();
    let match_r = default_match_point(&p).unwrap();
    let e = lowest_eigenvalue(&p, (0.7, 0.8), match_r, &opts).unwrap().e;
    let (lo, _) = default_span(&p, e).unwrap();
    let sol = integrate_radial(&p, e, (lo, 6.0), Direction::Outward).unwrap();
    let fc = reconstruct_components(&sol, &p, ReconstructOptions::for_params(&p)).unwrap();
    assert_eq!(fc.columns().len(), 15);
    assert_eq!(fc.constraint_violation(), 0.0);
    assert!(fc.c.iter().all(|c| c.re >= 0.0 && c.im == 0.0));
}

use num_complex::Complex64;
use polcoul::bifurcation::{self, EnergySign};
use polcoul::heun_map::{heun_params, Branch};
use polcoul::quartic_analysis::{effective_p_squared, turning_points, vieta_residuals};
use polcoul::radial_ode::{
    default_match_point, default_span, integrate_radial_on, log_grid, lowest_eigenvalue, matching_defect,
    reconstruct_components, Direction, FieldComponents, FieldSign, ReconstructOptions, ShootOptions, Start,
    StepControl,
};
use polcoul::variational::{minimize_root, root_curves, RootBranch, TrialState};
use polcoul::{p_squared, Error, PhysicalParamsF64, RadialSolutionF64};
use serde::Serialize;

use crate::output::{opt, Table, C, F};
use crate::{
    BifurcationArgs, BranchArg, Failure, HeunArgs, Output, ReconstructArgs, RegimesArgs, ShootArgs,
    SignArg, VariationalArgs,
};

#[derive(Serialize)]
struct ParamsOut {
    epsilon: F,
    mass: F,
    alpha: F,
    j: u32,
    sigma: F,
}

impl From<&PhysicalParamsF64> for ParamsOut {
    fn from(p: &PhysicalParamsF64) -> Self {
        Self { epsilon: F(p.epsilon), mass: F(p.mass), alpha: F(p.alpha), j: p.j, sigma: F(p.sigma) }
    }
}

fn require_rows(n: usize) -> Result<usize, Failure> {
    if n < 2 {
        return Err(Failure::validation(format!("need at least 2 samples, got {n}")));
    }
    Ok(n)
}

fn pair(v: &[f64], what: &str) -> Result<(f64, f64), Failure> {
    match v {
        [lo, hi] if lo < hi && lo.is_finite() && hi.is_finite() => Ok((*lo, *hi)),
        _ => Err(Failure::validation(format!("{what} must be two finite numbers LO < HI, got {v:?}"))),
    }
}

#[derive(Serialize)]
struct IntervalOut {
    lo: F,
    hi: Option<F>,
    finite: bool,
}

#[derive(Serialize)]
struct RegimesReport {
    params: ParamsOut,
    convention: &'static str,
    regime: String,
    bound: bool,
    coefficients: Vec<F>,
    roots: Vec<C>,
    turning_points: Vec<F>,
    double_roots: Vec<F>,
    motion_intervals: Vec<IntervalOut>,
    vieta_residuals: Vec<F>,
    max_residual: F,
}

pub fn regimes(a: &RegimesArgs) -> Result<Output, Failure> {
    let p = a.params.params()?;
    let conv = a.convention.into();
    let qa = turning_points(&p, conv)?;
    let report = RegimesReport {
        params: (&p).into(),
        convention: conv.name(),
        regime: qa.regime.to_string(),
        bound: qa.regime.is_bound(),
        coefficients: qa.coefficients.iter().map(|&c| F(c)).collect(),
        roots: qa.roots.iter().map(|z| C(*z)).collect(),
        turning_points: qa.turning_points.iter().map(|&r| F(r)).collect(),
        double_roots: qa.double_roots.iter().map(|&r| F(r)).collect(),
        motion_intervals: qa
            .motion_intervals
            .iter()
            .map(|iv| IntervalOut { lo: F(iv.lo), hi: iv.hi.map(F), finite: iv.is_finite() })
            .collect(),
        vieta_residuals: vieta_residuals(&qa).iter().map(|&r| F(r)).collect(),
        max_residual: F(qa.max_residual()),
    };
    let table = match a.samples {
        None => None,
        Some(n) => {
            let n = require_rows(n)?;
            let outer = qa.turning_points.last().copied().unwrap_or(0.0).max(5.0 / p.mass);
            let r_max = 2.0 * outer;
            let mut t = Table::new(["r", "p_squared"]);
            for k in 1..=n {
                let r = r_max * k as f64 / n as f64;
                t.push(vec![Some(r), Some(effective_p_squared(r, &p, conv))]);
            }
            Some(t)
        }
    };
    Ok(Output::report(&report).with_table(table))
}

#[derive(Serialize)]
struct BifurcationReport {
    params: ParamsOut,
    found: bool,
    sign: Option<&'static str>,
    e_min: Option<F>,
    epsilon_min: Option<F>,
    r0: Option<F>,
    a: Option<F>,
    b2: Option<F>,
    residual: Option<F>,
    reality_bound: F,
}

fn sign_name(s: EnergySign) -> &'static str {
    match s {
        EnergySign::Positive => "+",
        EnergySign::Negative => "-",
    }
}

pub fn bifurcation(a: &BifurcationArgs) -> Result<Output, Failure> {
    let p = a.params.params()?;
    let scan = match &a.scan {
        None => None,
        Some(v) => {
            let lo: f64 = v[0].parse().map_err(|_| Failure::validation(format!("bad scan start {:?}", v[0])))?;
            let hi: f64 = v[1].parse().map_err(|_| Failure::validation(format!("bad scan end {:?}", v[1])))?;
            let n: usize = v[2].parse().map_err(|_| Failure::validation(format!("bad scan count {:?}", v[2])))?;
            pair(&[lo, hi], "scan range")?;
            Some((lo, hi, require_rows(n)?))
        }
    };

    let signs: Vec<EnergySign> = match a.sign {
        Some(SignArg::Plus) => vec![EnergySign::Positive],
        Some(SignArg::Minus) => vec![EnergySign::Negative],
        None => vec![EnergySign::Positive, EnergySign::Negative],
    };
    let mut found = None;
    let mut last_err = None;
    if let Some(br) = &a.bracket {
        let bracket = pair(br, "bracket")?;
        match bifurcation::e_min(&p, bracket) {
            Ok(e) => {
                let sign = if e >= 0.0 { EnergySign::Positive } else { EnergySign::Negative };
                found = Some((sign, e, bifurcation::double_root_geometry(e, &p)?));
            }
            Err(e) => last_err = Some(e),
        }
    } else {
        for &s in &signs {
            match bifurcation::find_bifurcation(&p, s) {
                Ok(b) => {
                    found = Some((s, b.e_min, b.geometry));
                    break;
                }
                Err(e @ Error::NoSignChange { .. }) => last_err = Some(e),
                Err(e) => return Err(e.into()),
            }
        }
    }
    if found.is_none() && scan.is_none() {
        let detail = last_err.map(|e| e.to_string()).unwrap_or_default();
        return Err(Failure::no_solution(format!("no bifurcation in (-1,1): {detail}")));
    }
    let report = BifurcationReport {
        params: (&p).into(),
        found: found.is_some(),
        sign: found.map(|f| sign_name(f.0)),
        e_min: found.map(|f| F(f.1)),
        epsilon_min: found.map(|f| F(f.1 * p.mass)),
        r0: found.map(|f| F(f.2.r0)),
        a: found.map(|f| F(f.2.a)),
        b2: found.map(|f| F(f.2.b2)),
        residual: found.and_then(|f| bifurcation::bifurcation_residual(f.1, &p).ok()).map(F),
        reality_bound: F(bifurcation::reality_bound(p.j, p.alpha)),
    };
    let table = scan.map(|(lo, hi, n)| {
        let mut t = Table::new(["e", "residual"]);
        for (e, r) in bifurcation::residual_scan(&p, lo, hi, n) {
            t.push(vec![Some(e), r]);
        }
        t
    });
    Ok(Output::report(&report).with_table(table))
}

#[derive(Serialize)]
struct VariationalReport {
    alpha: F,
    branch: &'static str,
    kappa_range: [F; 2],
    e_star: F,
    kappa_star: F,
    epsilon_star: F,
    at_boundary: bool,
    constrained_kappa: Option<F>,
    norm: F,
    peak_r: F,
}

pub fn variational(a: &VariationalArgs) -> Result<Output, Failure> {
    let p = a.params.params()?;
    let range = pair(&a.kappa_range, "kappa range")?;
    let branch = match a.branch {
        BranchArg::Root1 => RootBranch::Root1,
        BranchArg::Root2 => RootBranch::Root2,
    };
    let res = minimize_root(p.alpha, branch, range)?;
    if res.at_boundary {
        eprintln!("warning: minimum at the edge of the kappa range ({}, {})", range.0, range.1);
    }
    let ts = TrialState::new(p.alpha, res.kappa_star)?;
    let report = VariationalReport {
        alpha: F(p.alpha),
        branch: match branch {
            RootBranch::Root1 => "root1",
            RootBranch::Root2 => "root2",
        },
        kappa_range: [F(range.0), F(range.1)],
        e_star: F(res.e_star),
        kappa_star: F(res.kappa_star),
        epsilon_star: F(res.e_star * p.mass),
        at_boundary: res.at_boundary,
        constrained_kappa: opt(res.constrained_kappa),
        norm: F(ts.norm),
        peak_r: F(ts.peak()),
    };
    let table = if a.curves {
        let mut t = Table::new(["kappa", "eps1", "eps2"]);
        for s in root_curves(p.alpha, range, require_rows(a.samples)?)? {
            t.push(vec![Some(s.kappa), s.eps1, s.eps2]);
        }
        Some(t)
    } else if a.wavefunction {
        let n = require_rows(a.samples)?;
        let r_max = 30.0 / res.kappa_star;
        let at_e = p.with_epsilon(res.e_star * p.mass);
        let mut t = Table::new(["r", "C", "p_squared"]);
        for k in 1..=n {
            let r = r_max * k as f64 / n as f64;
            t.push(vec![Some(r), Some(ts.value(r)), Some(p_squared(r, &at_e)?)]);
        }
        Some(t)
    } else {
        None
    };
    Ok(Output::report(&report).with_table(table))
}

#[derive(Serialize)]
struct HeunReport {
    params: ParamsOut,
    branch: &'static str,
    a: C,
    mu: C,
    beta: C,
    gamma: C,
    delta: C,
    constraint_residual: F,
}

pub fn heun(a: &HeunArgs) -> Result<Output, Failure> {
    let p = a.params.params()?;
    let branch = match a.sign {
        SignArg::Plus => Branch::Plus,
        SignArg::Minus => Branch::Minus,
    };
    let h = heun_params(&p, branch)?;
    let report = HeunReport {
        params: (&p).into(),
        branch: match branch {
            Branch::Plus => "+",
            Branch::Minus => "-",
        },
        a: C(p.derive().a),
        mu: C(h.mu),
        beta: C(h.beta),
        gamma: C(h.gamma),
        delta: C(h.delta),
        constraint_residual: F(h.constraint_residual()),
    };
    Ok(Output::report(&report))
}

#[derive(Serialize)]
struct ShootReport {
    params: ParamsOut,
    source: &'static str,
    e: F,
    epsilon: F,
    bracket: Option<[F; 2]>,
    match_r: F,
    log_derivative_defect: F,
    wronskian_defect: F,
    r_min: F,
    r_max: F,
    samples: usize,
}

/// Stitched outward/inward solution at the chosen energy, scaled so that
/// ∫ f² dr = 1 by the trapezoid rule on the emitted grid.
fn shoot(a: &ShootArgs) -> Result<(PhysicalParamsF64, RadialSolutionF64, ShootReport), Failure> {
    let p = a.params.params()?;
    let n = require_rows(a.samples)?;
    if n < 4 {
        return Err(Failure::validation("need at least 4 samples for a stitched profile"));
    }
    let opts = ShootOptions::default();
    let match_r = match a.match_r {
        Some(r) => r,
        None => default_match_point(&p)?,
    };
    let (e, source, bracket) = match a.energy {
        Some(e) => (e, "given", None),
        None => {
            let bracket = pair(&a.bracket, "bracket")?;
            (lowest_eigenvalue(&p, bracket, match_r, &opts)?.e, "shooting", Some([F(bracket.0), F(bracket.1)]))
        }
    };
    let defect = matching_defect(&p, e, match_r, &opts)?;
    let (lo, hi) = default_span(&p, e)?;
    let n_out = n / 2;
    let out_grid = log_grid(lo, match_r, n_out)?;
    let in_grid = log_grid(match_r, hi, n - n_out + 1)?;
    let ctl = StepControl::default();
    let outward = integrate_radial_on(&p, e, &out_grid, Direction::Outward, Start::Asymptotic, ctl)?;
    let inward = integrate_radial_on(&p, e, &in_grid, Direction::Inward, Start::Asymptotic, ctl)?;
    let scale = outward.f[n_out - 1] / inward.f[0];

    let mut grid = outward.grid.clone();
    let mut f = outward.f.clone();
    let mut df = outward.df.clone();
    grid.extend_from_slice(&inward.grid[1..]);
    f.extend(inward.f[1..].iter().map(|v| v * scale));
    df.extend(inward.df[1..].iter().map(|v| v * scale));
    let norm2: f64 = grid.windows(2).zip(f.windows(2)).map(|(r, v)| 0.5 * (r[1] - r[0]) * (v[0] * v[0] + v[1] * v[1])).sum();
    let s = if norm2 > 0.0 { norm2.sqrt().recip() } else { 1.0 };
    f.iter_mut().chain(df.iter_mut()).for_each(|v| *v *= s);

    let report = ShootReport {
        params: (&p).into(),
        source,
        e: F(e),
        epsilon: F(e * p.mass),
        bracket,
        match_r: F(match_r),
        log_derivative_defect: F(defect.log_derivative),
        wronskian_defect: F(defect.wronskian),
        r_min: F(lo),
        r_max: F(hi),
        samples: grid.len(),
    };
    let sol = RadialSolutionF64 { grid, f, df, e, direction: Direction::Outward, stats: outward.stats };
    Ok((p, sol, report))
}

pub fn wavefunction(a: &ShootArgs) -> Result<Output, Failure> {
    let (p, sol, report) = shoot(a)?;
    let at_e = p.with_epsilon(sol.e * p.mass);
    let mut t = Table::new(["r", "f", "C", "p_squared"]);
    for (k, &r) in sol.grid.iter().enumerate() {
        t.push(vec![Some(r), Some(sol.f[k]), Some(sol.f[k] / r), Some(p_squared(r, &at_e)?)]);
    }
    Ok(Output::report(&report).with_table(Some(t)))
}

pub fn reconstruct(a: &ReconstructArgs) -> Result<Output, Failure> {
    let (p, sol, report) = shoot(&a.shoot)?;
    let mass = if a.real_mass { Complex64::new(p.mass, 0.0) } else { Complex64::new(0.0, p.mass) };
    let sign = match a.sign {
        SignArg::Plus => FieldSign::Plus,
        SignArg::Minus => FieldSign::Minus,
    };
    let fc = reconstruct_components(&sol, &p, ReconstructOptions { mass, sign })?;
    let mut header = vec!["r".to_string()];
    for name in FieldComponents::<f64>::NAMES {
        header.push(format!("{name}_re"));
        header.push(format!("{name}_im"));
    }
    let mut t = Table::new(header);
    let cols = fc.columns();
    for (k, &r) in fc.grid.iter().enumerate() {
        let mut row = vec![Some(r)];
        for (_, col) in &cols {
            row.push(Some(col[k].re));
            row.push(Some(col[k].im));
        }
        t.push(row);
    }
    #[derive(Serialize)]
    struct Report {
        #[serde(flatten)]
        shoot: ShootReport,
        mass: C,
        sign: &'static str,
        constraint_violation: F,
    }
    let report = Report {
        shoot: report,
        mass: C(mass),
        sign: match sign {
            FieldSign::Plus => "+",
            FieldSign::Minus => "-",
        },
        constraint_violation: F(fc.constraint_violation()),
    };
    Ok(Output::report(&report).with_table(Some(t)))
}

//! Direct integration of f'' + P²(r) f = 0 (C = f/r) and reconstruction of
//! the remaining field components from C.

mod integrator;
mod reconstruct;

pub use integrator::{integrate, StepControl, StepStats};
pub use reconstruct::{reconstruct_components, FieldComponents, FieldSign, ReconstructOptions};

use crate::error::{Error, Result};
use crate::params::{p_squared_unchecked, PhysicalParams};
use crate::quartic_analysis::{turning_points, Convention};
use crate::roots::{bisect_secant, HybridOptions};
use crate::scalar::{lit, Real};
use crate::variational::{minimize_root, RootBranch};

/// Start and end of the default span sit where the asymptotic exponentials
/// have fallen to e^{-30}.
pub const TAIL_EXPONENT: f64 = 30.0;
pub const DEFAULT_GRID_POINTS: usize = 2001;
const UNDERFLOW_EXPONENT: f64 = -700.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Outward,
    Inward,
}

/// Initial data at the starting end of the grid.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Start<T> {
    /// Decaying origin branch for outward runs, r^{-1}e^{-Kr} for inward runs.
    Asymptotic,
    Values { f: T, df: T },
}

#[derive(Debug, Clone, PartialEq)]
pub struct RadialSolution<T> {
    pub grid: Vec<T>,
    pub f: Vec<T>,
    pub df: Vec<T>,
    /// Dimensionless energy ε/M.
    pub e: T,
    pub direction: Direction,
    pub stats: StepStats,
}

impl<T: Real> RadialSolution<T> {
    /// C(r) = f(r)/r on the grid.
    pub fn c(&self) -> Vec<T> {
        self.grid.iter().zip(&self.f).map(|(&r, &f)| f / r).collect()
    }
}

/// Value and derivative of (1/(2b)) r e^{-b/r}, the decaying solution of
/// f'' = b² f / r⁴ (b = α for σ = −1, M = 1).
pub fn asymptotic_origin<T: Real>(r: T, b: T) -> (T, T) {
    let exponent = -b / r;
    if exponent < lit(UNDERFLOW_EXPONENT) {
        return (T::zero(), T::zero());
    }
    let scale = exponent.exp() / (lit::<T>(2.0) * b);
    (scale * r, scale * (T::one() + b / r))
}

/// Value and derivative of (1/(2κ)) r^{-1} e^{-κr}, κ = √(1 − e²), in units of 1/M.
pub fn asymptotic_infinity<T: Real>(r: T, e: T) -> Result<(T, T)> {
    if !(e.abs() < T::one()) {
        return Err(Error::Domain(format!("decaying asymptotics need |e| < 1, got {e}")));
    }
    Ok(decaying_tail(r, (T::one() - e * e).sqrt()))
}

fn decaying_tail<T: Real>(r: T, k: T) -> (T, T) {
    let exponent = -k * r;
    if exponent < lit(UNDERFLOW_EXPONENT) {
        return (T::zero(), T::zero());
    }
    let y = exponent.exp() / (lit::<T>(2.0) * k * r);
    (y, -y * (k + T::one() / r))
}

/// Strength b of the attractive 1/r⁴ core, b² = −Σ²; `None` unless Σ² < 0.
pub fn core_strength<T: Real>(p: &PhysicalParams<T>) -> Option<T> {
    let s2 = p.derive().sigma2;
    if s2 < T::zero() { Some((-s2).sqrt()) } else { None }
}

fn decay_rate<T: Real>(p: &PhysicalParams<T>) -> Result<T> {
    let k2 = p.derive().k2;
    if k2 > T::zero() {
        Ok(k2.sqrt())
    } else {
        Err(Error::Domain(format!("no decaying tail at ε = {} (M² − ε² = {k2})", p.epsilon)))
    }
}

/// (b/30, 30/K): both asymptotic exponentials at e^{-30}.
pub fn default_span<T: Real>(p: &PhysicalParams<T>, e: T) -> Result<(T, T)> {
    let q = p.with_epsilon(e * p.mass);
    let b = core_strength(&q).ok_or_else(|| Error::Domain("origin asymptotics need σ < 0 and α ≠ 0".into()))?;
    let k = decay_rate(&q)?;
    let t = lit::<T>(TAIL_EXPONENT);
    Ok((b / t, t / k))
}

/// `n` log-spaced points spanning [lo, hi].
pub fn log_grid<T: Real>(lo: T, hi: T, n: usize) -> Result<Vec<T>> {
    if !(lo > T::zero() && hi > lo) || n < 2 {
        return Err(Error::InvalidParams(format!("need 0 < lo < hi and n >= 2, got ({lo}, {hi}), n = {n}")));
    }
    let ratio = (hi / lo).ln();
    let last = T::from_usize(n - 1).expect("count");
    let mut g: Vec<T> = (0..n).map(|k| lo * (ratio * T::from_usize(k).expect("index") / last).exp()).collect();
    g[n - 1] = hi;
    Ok(g)
}

/// Integrates the reduced radial equation at dimensionless energy `e` over
/// `r_span` on a log-spaced grid, starting from the asymptotic form at the
/// appropriate end.
pub fn integrate_radial<T: Real>(
    p: &PhysicalParams<T>,
    e: T,
    r_span: (T, T),
    direction: Direction,
) -> Result<RadialSolution<T>> {
    let grid = log_grid(r_span.0, r_span.1, DEFAULT_GRID_POINTS)?;
    integrate_radial_on(p, e, &grid, direction, Start::Asymptotic, StepControl::default())
}

pub fn integrate_radial_on<T: Real>(
    p: &PhysicalParams<T>,
    e: T,
    grid: &[T],
    direction: Direction,
    start: Start<T>,
    ctl: StepControl<T>,
) -> Result<RadialSolution<T>> {
    p.validate()?;
    if grid.len() < 2 || !(grid[0] > T::zero()) || grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParams("grid must be strictly increasing and positive".into()));
    }
    let q = p.with_epsilon(e * p.mass);
    let d = q.derive();
    let rhs = |r: T, y: &[T; 2]| [y[1], -p_squared_unchecked(r, &d) * y[0]];

    let (r0, outputs): (T, Vec<T>) = match direction {
        Direction::Outward => (grid[0], grid.to_vec()),
        Direction::Inward => (grid[grid.len() - 1], grid.iter().rev().copied().collect()),
    };
    let y0 = match start {
        Start::Values { f, df } => [f, df],
        Start::Asymptotic => {
            let (f, df) = match direction {
                Direction::Outward => {
                    let b = core_strength(&q)
                        .ok_or_else(|| Error::Domain("no decaying origin branch unless σ < 0 and α ≠ 0".into()))?;
                    asymptotic_origin(r0, b)
                }
                Direction::Inward => decaying_tail(r0, decay_rate(&q)?),
            };
            if f == T::zero() && df == T::zero() {
                return Err(Error::Domain(format!("asymptotic start underflows at r = {r0}")));
            }
            [f, df]
        }
    };
    let (mut ys, stats) = integrate(rhs, r0, y0, &outputs, ctl)?;
    if direction == Direction::Inward {
        ys.reverse();
    }
    Ok(RadialSolution {
        grid: grid.to_vec(),
        f: ys.iter().map(|y| y[0]).collect(),
        df: ys.iter().map(|y| y[1]).collect(),
        e,
        direction,
        stats,
    })
}

/// f₁f₂′ − f₂f₁′ along a shared grid.
pub fn wronskian<T: Real>(a: &RadialSolution<T>, b: &RadialSolution<T>) -> Result<Vec<T>> {
    if a.grid != b.grid {
        return Err(Error::InvalidParams("wronskian needs solutions on the same grid".into()));
    }
    Ok((0..a.grid.len()).map(|i| a.f[i] * b.df[i] - b.f[i] * a.df[i]).collect())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShootOptions<T> {
    pub control: StepControl<T>,
    /// Energy tolerance of the refined eigenvalue.
    pub etol: T,
    /// Cells of the uniform scan used to locate the lowest sign change.
    pub scan_cells: usize,
}

impl<T: Real> Default for ShootOptions<T> {
    fn default() -> Self {
        Self { control: StepControl::default(), etol: lit(1e-10), scan_cells: 80 }
    }
}

impl<T: Real> ShootOptions<T> {
    /// Same settings with both integrator tolerances halved.
    pub fn halved(self) -> Self {
        let half = lit::<T>(0.5);
        Self { control: StepControl { rtol: self.control.rtol * half, atol: self.control.atol * half, ..self.control }, ..self }
    }
}

/// Mismatch between the outward and inward solutions at the matching point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MatchDefect<T> {
    pub e: T,
    pub match_r: T,
    /// f_out′/f_out − f_in′/f_in.
    pub log_derivative: T,
    /// (f_out f_in′ − f_out′ f_in) / (‖(f_out, f_out′)‖ ‖(f_in, f_in′)‖), continuous in e.
    pub wronskian: T,
}

pub fn matching_defect<T: Real>(
    p: &PhysicalParams<T>,
    e: T,
    match_r: T,
    opts: &ShootOptions<T>,
) -> Result<MatchDefect<T>> {
    let (lo, hi) = default_span(p, e)?;
    if !(match_r > lo && match_r < hi) {
        return Err(Error::InvalidParams(format!("matching point {match_r} outside ({lo}, {hi})")));
    }
    let out = integrate_radial_on(p, e, &[lo, match_r], Direction::Outward, Start::Asymptotic, opts.control)?;
    let inw = integrate_radial_on(p, e, &[match_r, hi], Direction::Inward, Start::Asymptotic, opts.control)?;
    let (fo, dfo) = (out.f[1], out.df[1]);
    let (fi, dfi) = (inw.f[0], inw.df[0]);
    let norm = (fo * fo + dfo * dfo).sqrt() * (fi * fi + dfi * dfi).sqrt();
    Ok(MatchDefect {
        e,
        match_r,
        log_derivative: dfo / fo - dfi / fi,
        wronskian: (fo * dfi - dfo * fi) / norm,
    })
}

/// Matching point at the peak √(α/κ*) of the variational trial state, in units of 1/M.
pub fn default_match_point<T: Real>(p: &PhysicalParams<T>) -> Result<T> {
    let res = minimize_root(p.alpha, RootBranch::Root2, (lit(0.05), lit(3.0)))?;
    Ok((p.alpha / res.kappa_star).sqrt() / p.mass)
}

fn ensure_bound_motion<T: Real>(p: &PhysicalParams<T>, bracket: (T, T)) -> Result<()> {
    let top = p.with_epsilon(bracket.1 * p.mass);
    let qa = turning_points(&top, Convention::CoulombShifted)?;
    if qa.motion_intervals.is_empty() || core_strength(p).is_none() {
        return Err(Error::NoBoundState { lo: bracket.0.as_f64(), hi: bracket.1.as_f64() });
    }
    Ok(())
}

fn check_bracket<T: Real>(bracket: (T, T)) -> Result<()> {
    let (lo, hi) = bracket;
    if !(lo < hi) || !(hi.abs() < T::one()) || !(lo.abs() < T::one()) {
        return Err(Error::InvalidParams(format!("energy bracket must satisfy -1 < lo < hi < 1, got ({lo}, {hi})")));
    }
    Ok(())
}

fn refine<T: Real>(p: &PhysicalParams<T>, a: T, b: T, match_r: T, opts: &ShootOptions<T>) -> Result<T> {
    let mut failure = None;
    let f = |e: T| match matching_defect(p, e, match_r, opts) {
        Ok(d) => d.wronskian,
        Err(err) => {
            failure.get_or_insert(err);
            T::nan()
        }
    };
    let hybrid = HybridOptions { bisect_width: lit(1e-4), xtol: opts.etol, ftol: T::zero(), max_iter: 200 };
    let e = bisect_secant(f, a, b, hybrid);
    match failure {
        Some(err) => Err(err),
        None => e,
    }
}

/// Energy in `e_bracket` at which outward and inward solutions match at
/// `match_r`. The matching defect must change sign across the bracket.
pub fn shoot_eigenvalue<T: Real>(p: &PhysicalParams<T>, e_bracket: (T, T), match_r: T) -> Result<T> {
    shoot_eigenvalue_with(p, e_bracket, match_r, &ShootOptions::default())
}

pub fn shoot_eigenvalue_with<T: Real>(
    p: &PhysicalParams<T>,
    e_bracket: (T, T),
    match_r: T,
    opts: &ShootOptions<T>,
) -> Result<T> {
    p.validate()?;
    check_bracket(e_bracket)?;
    ensure_bound_motion(p, e_bracket)?;
    let (lo, hi) = e_bracket;
    let dlo = matching_defect(p, lo, match_r, opts)?;
    let dhi = matching_defect(p, hi, match_r, opts)?;
    if dlo.wronskian.signum() == dhi.wronskian.signum() {
        return Err(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: dlo.wronskian.as_f64(),
            f_hi: dhi.wronskian.as_f64(),
        });
    }
    refine(p, lo, hi, match_r, opts)
}

#[derive(Debug, Clone, PartialEq)]
pub struct Eigenvalue<T> {
    pub e: T,
    /// Scan cell in which the sign change was found.
    pub cell: (T, T),
    pub defect_lo: MatchDefect<T>,
    pub defect_hi: MatchDefect<T>,
    pub match_r: T,
}

/// Lowest sign change of the matching defect on a uniform scan of
/// `e_bracket`, refined to `opts.etol`.
pub fn lowest_eigenvalue<T: Real>(
    p: &PhysicalParams<T>,
    e_bracket: (T, T),
    match_r: T,
    opts: &ShootOptions<T>,
) -> Result<Eigenvalue<T>> {
    p.validate()?;
    check_bracket(e_bracket)?;
    ensure_bound_motion(p, e_bracket)?;
    let (lo, hi) = e_bracket;
    let cells = opts.scan_cells.max(1);
    let step = (hi - lo) / T::from_usize(cells).expect("cells");
    let at = |k: usize| if k == cells { hi } else { lo + step * T::from_usize(k).expect("index") };
    let first = matching_defect(p, lo, match_r, opts)?;
    let mut prev = first;
    for k in 1..=cells {
        let cur = matching_defect(p, at(k), match_r, opts)?;
        if cur.wronskian.signum() != prev.wronskian.signum() {
            let e = refine(p, prev.e, cur.e, match_r, opts)?;
            return Ok(Eigenvalue { e, cell: (prev.e, cur.e), defect_lo: prev, defect_hi: cur, match_r });
        }
        prev = cur;
    }
    Err(Error::NoSignChange {
        lo: lo.as_f64(),
        hi: hi.as_f64(),
        f_lo: first.wronskian.as_f64(),
        f_hi: prev.wronskian.as_f64(),
    })
}

#[cfg(test)]
mod tests;

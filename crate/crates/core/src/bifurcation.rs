//! Lowest bound-state energy: the e = ε/M at which the bare turning-point
//! quartic
//!
//! ```text
//! Π(r) = r⁴ + 2eα/(M(e²−1)) r³ − j(j+1)/(M²(e²−1)) r² + σα²/(M⁴(e²−1))
//! ```
//!
//! first acquires a double positive root r₀, Π = (r − r₀)²((r − a)² + b²).
//! Eliminating r₀, a, b² leaves a single algebraic equation in e.

use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::quartic_analysis::{quartic_coefficients, Convention};
use crate::roots::{bisect_secant, HybridOptions};
use crate::scalar::{lit, Real};

/// Offset of the default bracket from the reality bound and from |e| = 1.
pub const BRACKET_MARGIN: f64 = 1e-6;
const SCAN_CELLS: usize = 400;

/// Which sign of e to search.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EnergySign {
    #[default]
    Positive,
    Negative,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DoubleRootGeometry<T> {
    /// Double root on the positive axis.
    pub r0: T,
    /// Real part of the remaining conjugate pair.
    pub a: T,
    /// Squared imaginary part of the pair.
    pub b2: T,
    pub e: T,
}

impl<T: Real> DoubleRootGeometry<T> {
    /// Monic coefficients of (r − r₀)²((r − a)² + b²), highest degree first.
    pub fn monic_coefficients(&self) -> [T; 5] {
        let two = lit::<T>(2.0);
        let (r0, a) = (self.r0, self.a);
        let q = a * a + self.b2;
        [
            T::one(),
            -two * (r0 + a),
            r0 * r0 + lit::<T>(4.0) * a * r0 + q,
            -two * r0 * (q + a * r0),
            r0 * r0 * q,
        ]
    }
}

fn radicand<T: Real>(e: T, p: &PhysicalParams<T>) -> T {
    let g = e * e - T::one();
    lit::<T>(8.0) * g * p.jj1() + lit::<T>(9.0) * e * e * p.alpha * p.alpha
}

fn checked_sqrt_radicand<T: Real>(e: T, p: &PhysicalParams<T>) -> Result<T> {
    let rad = radicand(e, p);
    if rad < T::zero() {
        return Err(Error::Domain(format!("negative radicand {rad} at e = {e}")));
    }
    Ok(rad.sqrt())
}

/// r₀, a and b² at energy e from the closed-form solution of the
/// coefficient-matching system (all but the constant-term equation).
pub fn double_root_geometry<T: Real>(e: T, p: &PhysicalParams<T>) -> Result<DoubleRootGeometry<T>> {
    p.validate()?;
    if !(e.abs() < T::one()) {
        return Err(Error::Domain(format!("double-root geometry needs |e| < 1, got {e}")));
    }
    let s = checked_sqrt_radicand(e, p)?;
    let m = p.mass;
    let g = e * e - T::one();
    let ea = e * p.alpha;
    let r0 = -(lit::<T>(3.0) * ea + s) / (lit::<T>(4.0) * g * m);
    let a = (m * (r0 - e * e * r0) - ea) / (g * m);
    let b2 = -(ea * (g * m * r0 + ea)) / (g * g * m * m);
    if b2 < T::zero() {
        return Err(Error::Domain(format!("complex pair degenerates into real roots at e = {e} (b^2 = {b2})")));
    }
    Ok(DoubleRootGeometry { r0, a, b2, e })
}

/// Left-hand side of the algebraic equation for the bifurcation energy,
/// all eight terms as they stand (M drops out by scaling).
pub fn bifurcation_residual<T: Real>(e: T, p: &PhysicalParams<T>) -> Result<T> {
    let s = checked_sqrt_radicand(e, p)?;
    let c = |x: f64| lit::<T>(x);
    let j = T::from_u32(p.j).expect("j representable");
    let al = p.alpha;
    let g = e * e - T::one();
    let g2 = g * g;
    let value = -c(16.0) * g2 * j.powi(3) - c(8.0) * g2 * j.powi(4) - c(27.0) * e.powi(4) * al.powi(4)
        - c(9.0) * e.powi(3) * al.powi(3) * s
        - c(4.0) * e * g * j * al * (c(9.0) * e * al + c(2.0) * s)
        - c(4.0) * g * j * j * (-c(2.0) + e * e * (c(2.0) + c(9.0) * al * al) + c(2.0) * e * al * s)
        + c(32.0) * g2 * g * al * al * p.sigma;
    Ok(value)
}

/// Magnitude of the largest term of the residual, for relative checks.
pub fn residual_scale<T: Real>(e: T, p: &PhysicalParams<T>) -> T {
    let c = |x: f64| lit::<T>(x);
    let s = radicand(e, p).max(T::zero()).sqrt();
    let j = T::from_u32(p.j).expect("j representable");
    let al = p.alpha.abs();
    let g = (e * e - T::one()).abs();
    let e = e.abs();
    [
        c(16.0) * g * g * j.powi(3),
        c(8.0) * g * g * j.powi(4),
        c(27.0) * e.powi(4) * al.powi(4),
        c(9.0) * e.powi(3) * al.powi(3) * s,
        c(4.0) * e * g * j * al * (c(9.0) * e * al + c(2.0) * s),
        c(4.0) * g * j * j * (c(2.0) + e * e * (c(2.0) + c(9.0) * al * al) + c(2.0) * e * al * s),
        c(32.0) * g * g * g * al * al * p.sigma.abs(),
    ]
    .into_iter()
    .fold(T::zero(), T::max)
}

/// |e| must exceed √((8j + 8j²)/(8j + 8j² + 9α²)) for r₀ to be real.
pub fn reality_bound<T: Real>(j: u32, alpha: T) -> T {
    let j = T::from_u32(j).expect("j representable");
    let num = lit::<T>(8.0) * (j + j * j);
    let den = num + lit::<T>(9.0) * alpha * alpha;
    if den == T::zero() {
        return T::zero();
    }
    (num / den).sqrt()
}

/// (bound + margin, 1 − margin), mirrored for negative energies.
pub fn default_bracket<T: Real>(p: &PhysicalParams<T>, sign: EnergySign) -> (T, T) {
    let margin = lit::<T>(BRACKET_MARGIN);
    let lo = reality_bound(p.j, p.alpha) + margin;
    let hi = T::one() - margin;
    match sign {
        EnergySign::Positive => (lo, hi),
        EnergySign::Negative => (-hi, -lo),
    }
}

/// Root-refinement settings: bisection down to 1e-4, secant polish to 1e-10.
pub fn refinement_options<T: Real>() -> HybridOptions<T> {
    HybridOptions { bisect_width: lit(1e-4), xtol: lit(1e-10), ftol: T::zero(), max_iter: 200 }
}

/// Bifurcation energy inside `bracket`. When the residual does not change
/// sign across the whole bracket, the lowest sign change on a uniform scan
/// is refined instead.
pub fn e_min<T: Real>(p: &PhysicalParams<T>, bracket: (T, T)) -> Result<T> {
    p.validate()?;
    let (lo, hi) = bracket;
    if !(lo < hi) {
        return Err(Error::InvalidParams(format!("bracket must satisfy lo < hi, got ({lo}, {hi})")));
    }
    let f = |e: T| bifurcation_residual(e, p).unwrap_or(T::nan());
    let (flo, fhi) = (f(lo), f(hi));
    let straddles = flo.is_finite() && fhi.is_finite() && flo.signum() != fhi.signum();
    let (a, b) = if straddles {
        (lo, hi)
    } else {
        lowest_sign_change(&f, lo, hi).ok_or(Error::NoSignChange {
            lo: lo.as_f64(),
            hi: hi.as_f64(),
            f_lo: flo.as_f64(),
            f_hi: fhi.as_f64(),
        })?
    };
    bisect_secant(f, a, b, refinement_options())
}

fn lowest_sign_change<T: Real>(f: &impl Fn(T) -> T, lo: T, hi: T) -> Option<(T, T)> {
    let n = T::from_usize(SCAN_CELLS).expect("cells");
    let step = (hi - lo) / n;
    let mut prev = (lo, f(lo));
    for k in 1..=SCAN_CELLS {
        let x = lo + step * T::from_usize(k).expect("index");
        let fx = f(x);
        if prev.1.is_finite() && fx.is_finite() && prev.1.signum() != fx.signum() {
            return Some((prev.0, x));
        }
        prev = (x, fx);
    }
    None
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bifurcation<T> {
    pub e_min: T,
    pub geometry: DoubleRootGeometry<T>,
    pub residual: T,
}

/// e_min on the default bracket for the requested sign, with its geometry.
pub fn find_bifurcation<T: Real>(p: &PhysicalParams<T>, sign: EnergySign) -> Result<Bifurcation<T>> {
    let e = e_min(p, default_bracket(p, sign))?;
    Ok(Bifurcation { e_min: e, geometry: double_root_geometry(e, p)?, residual: bifurcation_residual(e, p)? })
}

/// Uniform samples (e, residual) over [lo, hi]; `None` where the radicand is negative.
pub fn residual_scan<T: Real>(p: &PhysicalParams<T>, lo: T, hi: T, n: usize) -> Vec<(T, Option<T>)> {
    let denom = T::from_usize(n.saturating_sub(1).max(1)).expect("count");
    (0..n)
        .map(|k| {
            let e = lo + (hi - lo) * T::from_usize(k).expect("index") / denom;
            (e, bifurcation_residual(e, p).ok())
        })
        .collect()
}

/// Monic bare quartic at dimensionless energy e (for consistency checks).
pub fn monic_bare_quartic<T: Real>(e: T, p: &PhysicalParams<T>) -> [T; 5] {
    let c = quartic_coefficients(&p.with_epsilon(e * p.mass), Convention::Bare);
    let lead = c[0];
    [T::one(), c[1] / lead, c[2] / lead, c[3] / lead, c[4] / lead]
}

//! Ritz estimate of the ground state with the trial function
//! C(r) = N e^{−α/r − κr}.

mod bessel;
mod quadrature;

pub use bessel::{bessel_k, k0_k1};
pub use quadrature::{adaptive_quadrature, adaptive_quadrature_with_budget, Upper, DEFAULT_BUDGET};

use crate::error::{Error, Result};
use crate::roots::golden_section;
use crate::scalar::{lit, Real};

/// Exponent below which the trial function is reported as exactly zero.
pub const UNDERFLOW_EXPONENT: f64 = -700.0;

fn check_positive<T: Real>(name: &str, v: T) -> Result<()> {
    if v > T::zero() && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParams(format!("{name} must be positive and finite, got {v}")))
    }
}

/// ∫₀^∞ e^{−2α/r − 2κr} r² dr = 2(α/κ)^{3/2} K₃(4√(ακ)).
pub fn norm_integral<T: Real>(alpha: T, kappa: T) -> Result<T> {
    check_positive("alpha", alpha)?;
    check_positive("kappa", kappa)?;
    let k3 = bessel_k(3, lit::<T>(4.0) * (alpha * kappa).sqrt())?;
    Ok(lit::<T>(2.0) * (alpha / kappa).powf(lit(1.5)) * k3)
}

/// Same integral by direct quadrature of the integrand.
pub fn norm_integral_quadrature<T: Real>(alpha: T, kappa: T, tol: T) -> Result<T> {
    check_positive("alpha", alpha)?;
    check_positive("kappa", kappa)?;
    let two = lit::<T>(2.0);
    let integrand = |r: T| {
        if r <= T::zero() {
            return T::zero();
        }
        let exponent = -two * alpha / r - two * kappa * r;
        if exponent < lit(UNDERFLOW_EXPONENT) { T::zero() } else { exponent.exp() * r * r }
    };
    adaptive_quadrature(integrand, T::zero(), Upper::Infinite, tol)
}

/// Smaller / larger root of the energy quadratic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RootBranch {
    Root1,
    #[default]
    Root2,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyQuadratic<T> {
    pub c2: T,
    pub c1: T,
    pub c0: T,
}

impl<T: Real> EnergyQuadratic<T> {
    pub fn new(kappa: T, alpha: T) -> Result<Self> {
        check_positive("alpha", alpha)?;
        check_positive("kappa", kappa)?;
        let x = lit::<T>(4.0) * (alpha * kappa).sqrt();
        let k2 = bessel_k(2, x)?;
        let k3 = bessel_k(3, x)?;
        let w = (alpha / kappa).sqrt() * k3;
        Ok(Self { c2: w, c1: lit::<T>(2.0) * alpha * k2, c0: w * (alpha * kappa - kappa * kappa - T::one()) - alpha * k2 })
    }

    pub fn discriminant(&self) -> T {
        self.c1 * self.c1 - lit::<T>(4.0) * self.c2 * self.c0
    }

    pub fn eval(&self, eps: T) -> T {
        (self.c2 * eps + self.c1) * eps + self.c0
    }

    /// Largest absolute term at `eps`, the scale for back-substitution checks.
    pub fn scale(&self, eps: T) -> T {
        (self.c2 * eps * eps).abs().max((self.c1 * eps).abs()).max(self.c0.abs())
    }

    pub fn roots(&self) -> EnergyRoots<T> {
        let disc = self.discriminant();
        if disc < T::zero() || !disc.is_finite() || !(self.c2.abs() > T::zero()) {
            return EnergyRoots { root1: None, root2: None };
        }
        // cancellation-free form
        let q = -(self.c1 + self.c1.signum() * disc.sqrt()) / lit(2.0);
        let (a, b) = if q == T::zero() { (T::zero(), T::zero()) } else { (q / self.c2, self.c0 / q) };
        EnergyRoots { root1: Some(a.min(b)), root2: Some(a.max(b)) }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyRoots<T> {
    pub root1: Option<T>,
    pub root2: Option<T>,
}

impl<T: Copy> EnergyRoots<T> {
    pub fn get(&self, branch: RootBranch) -> Option<T> {
        match branch {
            RootBranch::Root1 => self.root1,
            RootBranch::Root2 => self.root2,
        }
    }
}

/// Both roots in ε of √(α/κ)K₃(X)(ακ − κ² + ε² − 1) + α(2ε − 1)K₂(X) = 0,
/// X = 4√(ακ); `None` where the discriminant is negative.
pub fn energy_roots<T: Real>(kappa: T, alpha: T) -> Result<EnergyRoots<T>> {
    Ok(EnergyQuadratic::new(kappa, alpha)?.roots())
}

/// The energy equation written out term by term, for back-substitution.
pub fn energy_equation_residual<T: Real>(eps: T, kappa: T, alpha: T) -> Result<T> {
    let x = lit::<T>(4.0) * (alpha * kappa).sqrt();
    let k2 = bessel_k(2, x)?;
    let k3 = bessel_k(3, x)?;
    Ok((alpha / kappa).sqrt() * k3 * (alpha * kappa - kappa * kappa + eps * eps - T::one())
        + alpha * (lit::<T>(2.0) * eps - T::one()) * k2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RootCurveSample<T> {
    pub kappa: T,
    pub eps1: Option<T>,
    pub eps2: Option<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VariationalResult<T> {
    pub e_star: T,
    pub kappa_star: T,
    pub branch: RootBranch,
    pub alpha: T,
    pub root_curves: Vec<RootCurveSample<T>>,
    /// Set when the minimum sits on an end of the κ range.
    pub at_boundary: bool,
    /// √(1 − e*²), reported for comparison with κ*.
    pub constrained_kappa: Option<T>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinimizeOptions<T> {
    pub scan_points: usize,
    pub curve_points: usize,
    pub xtol: T,
}

impl<T: Real> Default for MinimizeOptions<T> {
    fn default() -> Self {
        Self { scan_points: 400, curve_points: 200, xtol: lit(1e-7) }
    }
}

pub fn root_curves<T: Real>(alpha: T, kappa_range: (T, T), n: usize) -> Result<Vec<RootCurveSample<T>>> {
    let (lo, hi) = kappa_range;
    let denom = T::from_usize(n.saturating_sub(1).max(1)).expect("count");
    (0..n)
        .map(|k| {
            let kappa = lo + (hi - lo) * T::from_usize(k).expect("index") / denom;
            let roots = energy_roots(kappa, alpha)?;
            Ok(RootCurveSample { kappa, eps1: roots.root1, eps2: roots.root2 })
        })
        .collect()
}

/// Golden-section minimization of one root of the energy quadratic over κ.
pub fn minimize_root<T: Real>(alpha: T, branch: RootBranch, kappa_range: (T, T)) -> Result<VariationalResult<T>> {
    minimize_root_with(alpha, branch, kappa_range, MinimizeOptions::default())
}

pub fn minimize_root_with<T: Real>(
    alpha: T,
    branch: RootBranch,
    kappa_range: (T, T),
    opts: MinimizeOptions<T>,
) -> Result<VariationalResult<T>> {
    check_positive("alpha", alpha)?;
    let (lo, hi) = kappa_range;
    check_positive("kappa range start", lo)?;
    if !(hi > lo) || !hi.is_finite() {
        return Err(Error::InvalidParams(format!("kappa range must satisfy 0 < lo < hi, got ({lo}, {hi})")));
    }
    if opts.scan_points < 3 || !(opts.xtol > T::zero()) {
        return Err(Error::InvalidParams("need scan_points >= 3 and xtol > 0".into()));
    }
    let objective = |kappa: T| {
        energy_roots(kappa, alpha).ok().and_then(|r| r.get(branch)).unwrap_or(T::infinity())
    };

    let n = opts.scan_points;
    let step = (hi - lo) / T::from_usize(n - 1).expect("count");
    let at = |k: usize| if k + 1 == n { hi } else { lo + step * T::from_usize(k).expect("index") };
    let mut best: Option<(usize, T)> = None;
    for k in 0..n {
        let v = objective(at(k));
        if v.is_finite() && best.map_or(true, |(_, b)| v < b) {
            best = Some((k, v));
        }
    }
    let (k_best, _) = best.ok_or(Error::NoRealRoot { lo: lo.as_f64(), hi: hi.as_f64() })?;
    let a = at(k_best.saturating_sub(1));
    let b = at((k_best + 1).min(n - 1));
    let (kappa_star, _) = golden_section(objective, a, b, opts.xtol);
    let e_star = objective(kappa_star);
    if !e_star.is_finite() {
        return Err(Error::NoRealRoot { lo: lo.as_f64(), hi: hi.as_f64() });
    }
    let edge = opts.xtol * lit(10.0);
    let at_boundary = kappa_star - lo <= edge || hi - kappa_star <= edge;
    let constrained_kappa = if e_star.abs() < T::one() { Some((T::one() - e_star * e_star).sqrt()) } else { None };
    Ok(VariationalResult {
        e_star,
        kappa_star,
        branch,
        alpha,
        root_curves: root_curves(alpha, kappa_range, opts.curve_points)?,
        at_boundary,
        constrained_kappa,
    })
}

/// Normalized trial state N e^{−α/r − κr}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialState<T> {
    pub alpha: T,
    pub kappa: T,
    pub norm: T,
}

impl<T: Real> TrialState<T> {
    pub fn new(alpha: T, kappa: T) -> Result<Self> {
        let integral = norm_integral(alpha, kappa)?;
        Ok(Self { alpha, kappa, norm: T::one() / integral.sqrt() })
    }

    pub fn value(&self, r: T) -> T {
        trial_wavefunction(r, self)
    }

    /// Location of the maximum, √(α/κ).
    pub fn peak(&self) -> T {
        (self.alpha / self.kappa).sqrt()
    }
}

pub fn trial_wavefunction<T: Real>(r: T, ts: &TrialState<T>) -> T {
    if !(r > T::zero()) {
        return T::zero();
    }
    let exponent = -ts.alpha / r - ts.kappa * r;
    if exponent < lit(UNDERFLOW_EXPONENT) {
        T::zero()
    } else {
        ts.norm * exponent.exp()
    }
}

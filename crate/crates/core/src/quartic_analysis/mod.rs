//! Classical turning points of the radial motion and the regime they define.
//!
//! P²(r)·r⁴ is the quartic (ε² − M²)r⁴ + 2εα r³ + c₂ r² + Σ², whose positive
//! real roots are the turning points. Its r² coefficient depends on the
//! [`Convention`] in use.

mod companion;

pub use companion::{horner, poly_roots};

use std::fmt;

use crate::error::{Error, Result};
use crate::params::{derive, PhysicalParams};
use crate::scalar::{cplx, lit, real, Complex, Real};

/// |ε² − M²| below this multiple of M² counts as the massless shell.
pub const DEGENERATE_GAP_REL: f64 = 1e-12;
/// Real roots closer than this multiple of max(1, |r|) form a double root.
pub const DOUBLE_ROOT_REL: f64 = 1e-6;

/// Which r² coefficient the turning-point quartic carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Convention {
    /// −J² = −(j(j+1) − α²): the coefficient the radial equation actually has.
    #[default]
    CoulombShifted,
    /// −j(j+1): the unshifted form used for the bound-state threshold.
    Bare,
}

impl Convention {
    pub fn name(self) -> &'static str {
        match self {
            Convention::CoulombShifted => "shifted",
            Convention::Bare => "bare",
        }
    }
}

/// Motion regime fixed by the signs of (ε² − M², Σ²).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    /// ε² < M², Σ² < 0: bounded motion between two turning points.
    I,
    /// ε² < M², Σ² ≥ 0: bounded motion, possibly also near the origin.
    II,
    /// ε² > M², Σ² < 0: unbounded motion.
    III,
    /// ε² > M², Σ² ≥ 0: unbounded motion plus a pocket at the origin.
    IV,
}

impl Regime {
    /// Σ² = 0 (α = 0) is grouped with the nonnegative sign.
    pub fn from_signs<T: Real>(energy_gap: T, sigma2: T) -> Self {
        match (energy_gap < T::zero(), sigma2 < T::zero()) {
            (true, true) => Regime::I,
            (true, false) => Regime::II,
            (false, true) => Regime::III,
            (false, false) => Regime::IV,
        }
    }

    pub fn is_bound(self) -> bool {
        matches!(self, Regime::I | Regime::II)
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Regime::I => "I",
            Regime::II => "II",
            Regime::III => "III",
            Regime::IV => "IV",
        };
        f.write_str(s)
    }
}

/// A classically allowed stretch of r > 0; `hi = None` means unbounded.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MotionInterval<T> {
    pub lo: T,
    pub hi: Option<T>,
}

impl<T: Real> MotionInterval<T> {
    pub fn is_finite(&self) -> bool {
        self.hi.is_some()
    }
}

/// Coefficients of the turning-point quartic, highest degree first.
pub fn quartic_coefficients<T: Real>(p: &PhysicalParams<T>, convention: Convention) -> [T; 5] {
    let d = derive(p);
    let c2 = match convention {
        Convention::CoulombShifted => -d.j2,
        Convention::Bare => -p.jj1(),
    };
    [-d.k2, lit::<T>(2.0) * p.epsilon * p.alpha, c2, T::zero(), d.sigma2]
}

/// P²(r) under the chosen convention, evaluated term by term.
pub fn effective_p_squared<T: Real>(r: T, p: &PhysicalParams<T>, convention: Convention) -> T {
    let c = quartic_coefficients(p, convention);
    let inv = r.recip();
    c[0] + c[1] * inv + c[2] * inv * inv + c[4] * inv.powi(4)
}

/// Roots of a quartic, with exact zero roots split off when the trailing
/// coefficients vanish. Sorted by (re, im).
pub fn quartic_roots<T: Real>(coeffs: &[T; 5]) -> Result<[Complex<T>; 4]> {
    let zeros = coeffs.iter().rev().take_while(|c| **c == T::zero()).count().min(4);
    let mut roots = poly_roots(&coeffs[..5 - zeros])?;
    roots.extend(std::iter::repeat(cplx(T::zero(), T::zero())).take(zeros));
    sort_roots(&mut roots);
    Ok([roots[0], roots[1], roots[2], roots[3]])
}

fn sort_roots<T: Real>(roots: &mut [Complex<T>]) {
    roots.sort_by(|a, b| {
        a.re.partial_cmp(&b.re)
            .unwrap_or(std::cmp::Ordering::Equal)
            .then(a.im.partial_cmp(&b.im).unwrap_or(std::cmp::Ordering::Equal))
    });
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuarticAnalysis<T> {
    pub convention: Convention,
    pub coefficients: [T; 5],
    /// All four roots sorted by (re, im); near-real conjugate pairs are
    /// collapsed onto the real axis as a double root.
    pub roots: [Complex<T>; 4],
    pub regime: Regime,
    /// Distinct positive real roots in increasing order.
    pub turning_points: Vec<T>,
    /// Real roots of multiplicity two.
    pub double_roots: Vec<T>,
    pub motion_intervals: Vec<MotionInterval<T>>,
}

impl<T: Real> QuarticAnalysis<T> {
    pub fn real_roots(&self) -> Vec<T> {
        self.roots.iter().filter(|z| z.im == T::zero()).map(|z| z.re).collect()
    }

    pub fn complex_roots(&self) -> Vec<Complex<T>> {
        self.roots.iter().filter(|z| z.im != T::zero()).copied().collect()
    }

    pub fn positive_double_root(&self) -> Option<T> {
        self.double_roots.iter().copied().find(|r| *r > T::zero())
    }

    /// Largest backward error |q(z)| / Σ|cₖ||z|ᵏ over the roots.
    pub fn max_residual(&self) -> T {
        self.roots
            .iter()
            .map(|z| {
                let scale = horner(&self.coefficients.map(|c| c.abs()), Complex::new(z.norm(), T::zero())).re;
                if scale > T::zero() { horner(&self.coefficients, *z).norm() / scale } else { T::zero() }
            })
            .fold(T::zero(), T::max)
    }
}

/// Solve the turning-point quartic and classify the motion.
pub fn turning_points<T: Real>(p: &PhysicalParams<T>, convention: Convention) -> Result<QuarticAnalysis<T>> {
    p.validate()?;
    let coefficients = quartic_coefficients(p, convention);
    let gap = coefficients[0];
    if gap.abs() < lit::<T>(DEGENERATE_GAP_REL) * p.mass * p.mass {
        return Err(Error::MasslessShell { gap: gap.abs().as_f64() });
    }
    let mut roots = quartic_roots(&coefficients)?;
    let double_roots = merge_near_real(&mut roots);
    sort_roots(&mut roots);

    let mut turning_points: Vec<T> = Vec::new();
    for z in roots.iter().filter(|z| z.im == T::zero() && z.re > T::zero()) {
        if turning_points.last().map_or(true, |last| !close(*last, z.re)) {
            turning_points.push(z.re);
        }
    }
    let motion_intervals = intervals_from_breakpoints(&turning_points, |r| {
        horner(&coefficients, real(r)).re > T::zero()
    });

    Ok(QuarticAnalysis {
        convention,
        coefficients,
        roots,
        regime: Regime::from_signs(gap, coefficients[4]),
        turning_points,
        double_roots,
        motion_intervals,
    })
}

fn close<T: Real>(a: T, b: T) -> bool {
    (a - b).abs() <= lit::<T>(DOUBLE_ROOT_REL) * T::one().max(a.abs().max(b.abs()))
}

/// Snaps conjugate pairs with negligible imaginary part onto the real axis
/// and averages real roots that coincide within the double-root threshold.
fn merge_near_real<T: Real>(roots: &mut [Complex<T>; 4]) -> Vec<T> {
    let tol = lit::<T>(DOUBLE_ROOT_REL);
    for z in roots.iter_mut() {
        if z.im != T::zero() && z.im.abs() <= tol * T::one().max(z.re.abs()) {
            *z = cplx(z.re, T::zero());
        }
    }
    sort_roots(roots);
    let mut doubles = Vec::new();
    let mut i = 0;
    while i + 1 < 4 {
        let (a, b) = (roots[i], roots[i + 1]);
        if a.im == T::zero() && b.im == T::zero() && close(a.re, b.re) {
            let mid = (a.re + b.re) * lit::<T>(0.5);
            roots[i] = real(mid);
            roots[i + 1] = real(mid);
            doubles.push(mid);
            i += 2;
        } else {
            i += 1;
        }
    }
    doubles
}

/// Allowed intervals given sorted positive breakpoints and a sign oracle.
/// Neighbouring allowed pieces separated by a tangency are merged.
fn intervals_from_breakpoints<T: Real>(points: &[T], allowed: impl Fn(T) -> bool) -> Vec<MotionInterval<T>> {
    let mut edges: Vec<T> = Vec::with_capacity(points.len() + 1);
    edges.push(T::zero());
    edges.extend_from_slice(points);
    let half = lit::<T>(0.5);
    let mut out: Vec<MotionInterval<T>> = Vec::new();
    for k in 0..edges.len() {
        let lo = edges[k];
        let hi = edges.get(k + 1).copied();
        let probe = match hi {
            Some(h) => (lo + h) * half,
            None => lo * lit::<T>(2.0) + T::one(),
        };
        if !allowed(probe) {
            continue;
        }
        match out.last_mut() {
            Some(prev) if prev.hi == Some(lo) => prev.hi = hi,
            _ => out.push(MotionInterval { lo, hi }),
        }
    }
    out
}

/// Vieta residuals |LHS − RHS| / max(1, |LHS|) for the four symmetric functions.
pub fn vieta_residuals<T: Real>(qa: &QuarticAnalysis<T>) -> [T; 4] {
    vieta_residuals_for(&qa.coefficients, &qa.roots)
}

/// Vieta residuals for arbitrary quartic coefficients and candidate roots.
pub fn vieta_residuals_for<T: Real>(coeffs: &[T; 5], roots: &[Complex<T>; 4]) -> [T; 4] {
    let [r1, r2, r3, r4] = *roots;
    let lead = coeffs[0];
    let e1 = r1 + r2 + r3 + r4;
    let e2 = r1 * r2 + r1 * r3 + r1 * r4 + r2 * r3 + r2 * r4 + r3 * r4;
    let e3 = r1 * r3 * r4 + r2 * r3 * r4 + r3 * r1 * r2 + r4 * r1 * r2;
    let e4 = r1 * r2 * r3 * r4;
    let lhs = [-coeffs[1] / lead, coeffs[2] / lead, -coeffs[3] / lead, coeffs[4] / lead];
    let rhs = [e1, e2, e3, e4];
    let mut out = [T::zero(); 4];
    for k in 0..4 {
        out[k] = (real(lhs[k]) - rhs[k]).norm() / T::one().max(lhs[k].abs());
    }
    out
}

/// Closed-form pair (r₁, r₂) from the outer turning points r₃ < r₄ via the
/// root-sum and root-product identities. A negative discriminant yields a
/// conjugate pair.
pub fn inner_roots_from_outer<T: Real>(r3: T, r4: T, p: &PhysicalParams<T>) -> Result<(Complex<T>, Complex<T>)> {
    if !(r3 > T::zero() && r4 > r3) {
        return Err(Error::Domain(format!("need 0 < r3 < r4, got r3 = {r3}, r4 = {r4}")));
    }
    let d = derive(p);
    if !(d.k2 > T::zero()) {
        return Err(Error::Domain("inner roots require eps^2 < M^2".into()));
    }
    let two = lit::<T>(2.0);
    let shift = r3 + r4 - two * p.epsilon * p.alpha / d.k2;
    let disc = shift * shift + lit::<T>(4.0) * d.sigma2 / (d.k2 * r3 * r4);
    let root = real(disc).sqrt();
    let half = lit::<T>(0.5);
    Ok(((real(-shift) - root) * half, (real(-shift) + root) * half))
}

/// Dense sampling grid (step, step·2, …, r_max] for the brute-force scan.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid<T> {
    pub step: T,
    pub r_max: T,
}

/// Allowed intervals found by scanning the sign of P²(r) on a grid. An
/// interval still open at `r_max` is reported as unbounded.
pub fn classify_brute_force<T: Real>(
    p: &PhysicalParams<T>,
    convention: Convention,
    grid: SamplingGrid<T>,
) -> Vec<MotionInterval<T>> {
    let n = (grid.r_max / grid.step).ceil().to_usize().unwrap_or(0).max(1);
    let mut out = Vec::new();
    let mut open: Option<T> = None;
    for k in 1..=n {
        let r = grid.step * T::from_usize(k).expect("grid index");
        let positive = effective_p_squared(r, p, convention) > T::zero();
        match (positive, open) {
            (true, None) => open = Some(if k == 1 { T::zero() } else { r }),
            (false, Some(lo)) => {
                out.push(MotionInterval { lo, hi: Some(r) });
                open = None;
            }
            _ => {}
        }
    }
    if let Some(lo) = open {
        out.push(MotionInterval { lo, hi: None });
    }
    out
}

/// Two interval lists agree when their endpoints pair up within
/// `2·resolution`. Features a sampled scan cannot resolve are normalised away
/// first: gaps narrower than `2·resolution` are closed and intervals narrower
/// than that are dropped.
pub fn motion_intervals_agree<T: Real>(a: &[MotionInterval<T>], b: &[MotionInterval<T>], resolution: T) -> bool {
    let tol = lit::<T>(2.0) * resolution;
    let a = normalise(a, tol);
    let b = normalise(b, tol);
    a.len() == b.len()
        && a.iter().zip(&b).all(|(x, y)| {
            let lo_ok = (x.lo - y.lo).abs() <= tol;
            let hi_ok = match (x.hi, y.hi) {
                (Some(h1), Some(h2)) => (h1 - h2).abs() <= tol,
                (None, None) => true,
                _ => false,
            };
            lo_ok && hi_ok
        })
}

fn normalise<T: Real>(intervals: &[MotionInterval<T>], tol: T) -> Vec<MotionInterval<T>> {
    let mut merged: Vec<MotionInterval<T>> = Vec::new();
    for iv in intervals {
        match merged.last_mut() {
            Some(prev) if prev.hi.is_some_and(|h| iv.lo - h <= tol) => prev.hi = iv.hi,
            _ => merged.push(*iv),
        }
    }
    merged.retain(|iv| iv.hi.map_or(true, |h| h - iv.lo > tol));
    merged
}

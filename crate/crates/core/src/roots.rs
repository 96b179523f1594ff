//! One-dimensional root refinement and minimisation.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

#[derive(Debug, Clone, Copy)]
pub struct HybridOptions<T> {
    /// Bracket width at which bisection hands over to the secant polish.
    pub bisect_width: T,
    /// Absolute step tolerance of the secant phase.
    pub xtol: T,
    /// Stop as soon as |f| falls to this level.
    pub ftol: T,
    pub max_iter: usize,
}

impl<T: Real> Default for HybridOptions<T> {
    fn default() -> Self {
        Self { bisect_width: lit(1e-4), xtol: lit(1e-10), ftol: T::zero(), max_iter: 200 }
    }
}

/// Root of `f` on `[lo, hi]`: bisection until the bracket is narrower than
/// `bisect_width`, then a secant iteration kept inside the bracket. Any secant
/// step that leaves the bracket falls back to bisection.
pub fn bisect_secant<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, opts: HybridOptions<T>) -> Result<T> {
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == T::zero() {
        return Ok(a);
    }
    if fb == T::zero() {
        return Ok(b);
    }
    if !(fa.signum() != fb.signum()) || fa.is_nan() || fb.is_nan() {
        return Err(Error::NoSignChange { lo: a.as_f64(), hi: b.as_f64(), f_lo: fa.as_f64(), f_hi: fb.as_f64() });
    }
    let half = lit::<T>(0.5);
    let mut iter = 0;
    while b - a > opts.bisect_width {
        let m = (a + b) * half;
        let fm = f(m);
        if fm == T::zero() {
            return Ok(m);
        }
        if fm.signum() == fa.signum() {
            a = m;
            fa = fm;
        } else {
            b = m;
            fb = fm;
        }
        iter += 1;
        if iter > opts.max_iter {
            return Err(Error::NonConvergence { method: "bisection", budget: opts.max_iter });
        }
    }

    // Secant from the two bracket ends, retaining a sign-changing bracket.
    let (mut x0, mut f0, mut x1, mut f1) = (a, fa, b, fb);
    for _ in 0..opts.max_iter {
        let denom = f1 - f0;
        let mut x2 = if denom != T::zero() { x1 - f1 * (x1 - x0) / denom } else { (a + b) * half };
        if !(x2 > a && x2 < b) {
            x2 = (a + b) * half;
        }
        let f2 = f(x2);
        if f2.abs() <= opts.ftol || f2 == T::zero() {
            return Ok(x2);
        }
        if f2.signum() == fa.signum() {
            a = x2;
            fa = f2;
        } else {
            b = x2;
        }
        let step = (x2 - x1).abs();
        x0 = x1;
        f0 = f1;
        x1 = x2;
        f1 = f2;
        let floor = T::epsilon() * lit::<T>(4.0) * x2.abs().max(T::one());
        if step <= opts.xtol.max(floor) || b - a <= floor {
            // One more step if it shrinks the residual further.
            return Ok(x1);
        }
    }
    Err(Error::NonConvergence { method: "secant", budget: opts.max_iter })
}

/// Minimiser of a unimodal `f` on `[lo, hi]` by golden-section search,
/// returned when the bracket is narrower than `xtol`.
pub fn golden_section<T: Real>(mut f: impl FnMut(T) -> T, lo: T, hi: T, xtol: T) -> (T, T) {
    let inv_phi = (lit::<T>(5.0).sqrt() - T::one()) * lit::<T>(0.5);
    let (mut a, mut b) = if lo <= hi { (lo, hi) } else { (hi, lo) };
    let mut c = b - inv_phi * (b - a);
    let mut d = a + inv_phi * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > xtol {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    let x = (a + b) * lit::<T>(0.5);
    (x, f(x))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finds_cube_root_of_two() {
        let r = bisect_secant(|x: f64| x * x * x - 2.0, 0.0, 3.0, HybridOptions::default()).unwrap();
        assert!((r - 2f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn reversed_bracket_and_exact_endpoint() {
        let r = bisect_secant(|x: f64| x - 1.0, 2.0, 0.0, HybridOptions::default()).unwrap();
        assert!((r - 1.0).abs() < 1e-14);
        assert_eq!(bisect_secant(|x: f64| x, 0.0, 1.0, HybridOptions::default()).unwrap(), 0.0);
    }

    #[test]
    fn no_sign_change_is_reported() {
        let err = bisect_secant(|x: f64| x * x + 1.0, -1.0, 1.0, HybridOptions::default()).unwrap_err();
        assert!(matches!(err, Error::NoSignChange { .. }));
    }

    #[test]
    fn stiff_function_converges() {
        let r = bisect_secant(|x: f64| (50.0 * (x - 0.3)).tanh(), 0.0, 1.0, HybridOptions::default()).unwrap();
        assert!((r - 0.3).abs() < 1e-10);
    }

    #[test]
    fn golden_section_parabola() {
        let (x, fx) = golden_section(|x: f64| (x - 0.7).powi(2), 0.0, 3.0, 1e-9);
        assert!((x - 0.7).abs() < 1e-8);
        assert!(fx < 1e-16);
    }

    #[test]
    fn golden_section_monotone_goes_to_endpoint() {
        let (x, _) = golden_section(|x: f64| -x, 0.0, 1.0, 1e-9);
        assert!((x - 1.0).abs() < 1e-8);
    }
}

//! Modified Bessel functions of the second kind, integer order.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
const SERIES_LIMIT: f64 = 2.0;
const MAX_TERMS: usize = 10_000;

/// K_n(x) for x > 0.
///
/// K₀ and K₁ come from their power series for x ≤ 2 and from Steed's
/// continued fraction for x > 2; higher orders follow by upward recurrence.
pub fn bessel_k<T: Real>(n: u32, x: T) -> Result<T> {
    if !(x > T::zero()) || !x.is_finite() {
        return Err(Error::Domain(format!("bessel_k needs finite x > 0, got {x}")));
    }
    let (k0, k1) = k0_k1(x);
    if n == 0 {
        return Ok(k0);
    }
    let (mut prev, mut cur) = (k0, k1);
    for m in 1..n {
        let next = prev + lit::<T>(2.0 * m as f64) / x * cur;
        prev = cur;
        cur = next;
    }
    Ok(cur)
}

/// (K₀(x), K₁(x)).
pub fn k0_k1<T: Real>(x: T) -> (T, T) {
    if x <= lit(SERIES_LIMIT) {
        series(x)
    } else {
        steed(x)
    }
}

fn series<T: Real>(x: T) -> (T, T) {
    let eps = T::epsilon();
    let half = x / lit(2.0);
    let y = half * half;
    let log_half = half.ln();

    // term_k = y^k / (k!)^2, term1_k = y^k / (k!(k+1)!)
    let mut term = T::one();
    let mut term1 = T::one();
    let mut harmonic = T::zero();
    let mut i0 = T::one();
    let mut k0_tail = T::zero();
    let mut i1_sum = T::one();
    let gamma = lit::<T>(EULER_GAMMA);
    // ψ(1) + ψ(2) = −2γ + 1
    let mut psi_pair_sum = (T::one() - lit::<T>(2.0) * gamma) * term1;
    for k in 1..MAX_TERMS {
        let kf = lit::<T>(k as f64);
        term = term * y / (kf * kf);
        term1 = term1 * y / (kf * (kf + T::one()));
        harmonic = harmonic + T::one() / kf;
        i0 = i0 + term;
        k0_tail = k0_tail + harmonic * term;
        i1_sum = i1_sum + term1;
        // ψ(k+1) + ψ(k+2) = −2γ + 2H_k + 1/(k+1)
        let psi_pair = lit::<T>(2.0) * (harmonic - gamma) + T::one() / (kf + T::one());
        psi_pair_sum = psi_pair_sum + psi_pair * term1;
        if term < eps * i0 && term1 < eps * i1_sum {
            break;
        }
    }
    let k0 = -(log_half + gamma) * i0 + k0_tail;
    let i1 = half * i1_sum;
    let k1 = T::one() / x + log_half * i1 - x / lit(4.0) * psi_pair_sum;
    (k0, k1)
}

fn steed<T: Real>(x: T) -> (T, T) {
    let eps = T::epsilon();
    let two = lit::<T>(2.0);
    let a1 = lit::<T>(0.25);
    let mut b = two * (T::one() + x);
    let mut d = T::one() / b;
    let mut delh = d;
    let mut h = d;
    let (mut q1, mut q2) = (T::zero(), T::one());
    let mut q = a1;
    let mut c = a1;
    let mut a = -a1;
    let mut s = T::one() + q * delh;
    for i in 1..MAX_TERMS {
        let fi = lit::<T>(i as f64);
        a = a - two * fi;
        c = -a * c / (fi + T::one());
        let qnew = (q1 - b * q2) / a;
        q1 = q2;
        q2 = qnew;
        q = q + c * qnew;
        b = b + two;
        d = T::one() / (b + a * d);
        delh = (b * d - T::one()) * delh;
        h = h + delh;
        let dels = q * delh;
        s = s + dels;
        if (dels / s).abs() < eps {
            break;
        }
    }
    let h = a1 * h;
    let k0 = (T::PI() / (two * x)).sqrt() * (-x).exp() / s;
    let k1 = k0 * (x + lit(0.5) - h) / x;
    (k0, k1)
}

//! Dormand–Prince 5(4) with Hairer's continuous extension.

use crate::error::{Error, Result};
use crate::scalar::{lit, Real};

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A21: f64 = 0.2;
const A3: [f64; 2] = [3.0 / 40.0, 9.0 / 40.0];
const A4: [f64; 3] = [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0];
const A5: [f64; 4] = [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0];
const A6: [f64; 5] = [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0];
const B: [f64; 6] = [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];
const D: [f64; 7] = [
    -12715105075.0 / 11282082432.0,
    0.0,
    87487479700.0 / 32700410799.0,
    -10690763975.0 / 1880347072.0,
    701980252875.0 / 199316789632.0,
    -1453857185.0 / 822651844.0,
    69997945.0 / 29380423.0,
];

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepControl<T> {
    pub rtol: T,
    pub atol: T,
    pub max_steps: usize,
    /// Abort with [`Error::Overflow`] once any component exceeds this.
    pub overflow: T,
}

impl<T: Real> Default for StepControl<T> {
    fn default() -> Self {
        Self { rtol: lit(1e-10), atol: lit(1e-12), max_steps: 200_000, overflow: lit(1e100) }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct StepStats {
    pub accepted: usize,
    pub rejected: usize,
}

fn axpy<T: Real, const N: usize>(y: &[T; N], h: T, terms: &[(f64, &[T; N])]) -> [T; N] {
    let mut out = *y;
    for (i, o) in out.iter_mut().enumerate() {
        let mut acc = T::zero();
        for (c, k) in terms {
            acc = acc + lit::<T>(*c) * k[i];
        }
        *o = *o + h * acc;
    }
    out
}

/// Integrates y' = rhs(x, y) from (x0, y0) and returns the dense-output
/// solution at each of `outputs`, which must be monotone in the direction
/// of integration and lie between x0 and the last output.
pub fn integrate<T: Real, const N: usize>(
    mut rhs: impl FnMut(T, &[T; N]) -> [T; N],
    x0: T,
    y0: [T; N],
    outputs: &[T],
    ctl: StepControl<T>,
) -> Result<(Vec<[T; N]>, StepStats)> {
    let mut stats = StepStats::default();
    let Some(&x_end) = outputs.last() else {
        return Ok((Vec::new(), stats));
    };
    if !(ctl.rtol > T::zero()) || ctl.atol < T::zero() {
        return Err(Error::InvalidParams("integrator tolerances must be positive".into()));
    }
    let dir = if x_end >= x0 { T::one() } else { -T::one() };
    if outputs.iter().any(|&x| (x - x0) * dir < T::zero())
        || outputs.windows(2).any(|w| (w[1] - w[0]) * dir < T::zero())
    {
        return Err(Error::InvalidParams("output points must be monotone in the integration direction".into()));
    }

    let mut result = Vec::with_capacity(outputs.len());
    let mut next_out = 0;
    while next_out < outputs.len() && outputs[next_out] == x0 {
        result.push(y0);
        next_out += 1;
    }
    if next_out == outputs.len() {
        return Ok((result, stats));
    }

    let mut x = x0;
    let mut y = y0;
    let mut k1 = rhs(x, &y);
    let span = (x_end - x0).abs();
    let mut h = initial_step(&mut rhs, x, &y, &k1, dir, span, &ctl) * dir;
    let safety = lit::<T>(0.9);
    let fifth = lit::<T>(0.2);

    while next_out < outputs.len() {
        if stats.accepted + stats.rejected >= ctl.max_steps {
            return Err(Error::NonConvergence { method: "dopri5", budget: ctl.max_steps });
        }
        if (x + h - x_end) * dir > T::zero() {
            h = x_end - x;
        }
        if h.abs() <= T::epsilon() * x.abs().max(T::one()) * lit(4.0) {
            return Err(Error::NonConvergence { method: "dopri5 (step underflow)", budget: ctl.max_steps });
        }

        let k2 = rhs(x + h * lit(C[1]), &axpy(&y, h, &[(A21, &k1)]));
        let k3 = rhs(x + h * lit(C[2]), &axpy(&y, h, &[(A3[0], &k1), (A3[1], &k2)]));
        let k4 = rhs(x + h * lit(C[3]), &axpy(&y, h, &[(A4[0], &k1), (A4[1], &k2), (A4[2], &k3)]));
        let k5 = rhs(
            x + h * lit(C[4]),
            &axpy(&y, h, &[(A5[0], &k1), (A5[1], &k2), (A5[2], &k3), (A5[3], &k4)]),
        );
        let k6 = rhs(
            x + h,
            &axpy(&y, h, &[(A6[0], &k1), (A6[1], &k2), (A6[2], &k3), (A6[3], &k4), (A6[4], &k5)]),
        );
        let y_new = axpy(&y, h, &[(B[0], &k1), (B[2], &k3), (B[3], &k4), (B[4], &k5), (B[5], &k6)]);
        let k7 = rhs(x + h, &y_new);

        let mut err_sq = T::zero();
        for i in 0..N {
            let e = h
                * (lit::<T>(E[0]) * k1[i]
                    + lit::<T>(E[2]) * k3[i]
                    + lit::<T>(E[3]) * k4[i]
                    + lit::<T>(E[4]) * k5[i]
                    + lit::<T>(E[5]) * k6[i]
                    + lit::<T>(E[6]) * k7[i]);
            let sc = ctl.atol + ctl.rtol * y[i].abs().max(y_new[i].abs());
            err_sq = err_sq + (e / sc) * (e / sc);
        }
        let err = (err_sq / lit(N as f64)).sqrt();
        if !err.is_finite() {
            stats.rejected += 1;
            h = h * fifth;
            continue;
        }

        if err <= T::one() {
            stats.accepted += 1;
            let x_new = x + h;
            // continuous extension coefficients
            let mut r = [[T::zero(); N]; 5];
            for i in 0..N {
                let ydiff = y_new[i] - y[i];
                let bspl = h * k1[i] - ydiff;
                r[0][i] = y[i];
                r[1][i] = ydiff;
                r[2][i] = bspl;
                r[3][i] = ydiff - h * k7[i] - bspl;
                r[4][i] = h
                    * (lit::<T>(D[0]) * k1[i]
                        + lit::<T>(D[2]) * k3[i]
                        + lit::<T>(D[3]) * k4[i]
                        + lit::<T>(D[4]) * k5[i]
                        + lit::<T>(D[5]) * k6[i]
                        + lit::<T>(D[6]) * k7[i]);
            }
            while next_out < outputs.len() && (outputs[next_out] - x_new) * dir <= T::zero() {
                let s = (outputs[next_out] - x) / h;
                let s1 = T::one() - s;
                let mut out = [T::zero(); N];
                for i in 0..N {
                    out[i] = r[0][i] + s * (r[1][i] + s1 * (r[2][i] + s * (r[3][i] + s1 * r[4][i])));
                }
                result.push(out);
                next_out += 1;
            }
            x = x_new;
            y = y_new;
            k1 = k7;
            if y.iter().any(|v| !(v.abs() <= ctl.overflow)) {
                return Err(Error::Overflow { r: x.as_f64() });
            }
            let fac = (safety * err.max(lit(1e-10)).powf(-fifth)).min(lit(10.0)).max(fifth);
            h = h * fac;
        } else {
            stats.rejected += 1;
            let fac = (safety * err.powf(-fifth)).max(fifth);
            h = h * fac;
        }
    }
    Ok((result, stats))
}

fn initial_step<T: Real, const N: usize>(
    rhs: &mut impl FnMut(T, &[T; N]) -> [T; N],
    x: T,
    y: &[T; N],
    f0: &[T; N],
    dir: T,
    span: T,
    ctl: &StepControl<T>,
) -> T {
    let n = lit::<T>(N as f64);
    let norm = |v: &[T; N]| {
        let mut s = T::zero();
        for i in 0..N {
            let sc = ctl.atol + ctl.rtol * y[i].abs();
            s = s + (v[i] / sc) * (v[i] / sc);
        }
        (s / n).sqrt()
    };
    let (d0, d1) = (norm(y), norm(f0));
    let mut h0 = if d0 < lit(1e-5) || d1 < lit(1e-5) { lit(1e-6) } else { lit::<T>(0.01) * d0 / d1 };
    h0 = h0.min(span);
    let y1 = axpy(y, h0 * dir, &[(1.0, f0)]);
    let f1 = rhs(x + h0 * dir, &y1);
    let mut diff = [T::zero(); N];
    for i in 0..N {
        diff[i] = f1[i] - f0[i];
    }
    let d2 = norm(&diff) / h0;
    let h1 = if d1.max(d2) <= lit(1e-15) {
        (h0 * lit(1e-3)).max(lit(1e-6))
    } else {
        (lit::<T>(0.01) / d1.max(d2)).powf(lit(0.2))
    };
    let h = (h0 * lit(100.0)).min(h1).min(span);
    if h > T::zero() && h.is_finite() { h } else { span.min(lit(1e-6)) }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_growth() {
        let xs: Vec<f64> = (0..=10).map(|k| k as f64 * 0.5).collect();
        let (ys, stats) = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &xs, StepControl::default()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((y[0] - x.exp()).abs() <= 1e-9 * x.exp(), "x={x}");
        }
        assert!(stats.accepted > 0);
    }

    #[test]
    fn harmonic_oscillator_dense_output() {
        let xs: Vec<f64> = (0..=997).map(|k| k as f64 * 0.01).collect();
        let (ys, _) =
            integrate(|_, y: &[f64; 2]| [y[1], -y[0]], 0.0, [0.0, 1.0], &xs, StepControl::default()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((y[0] - x.sin()).abs() < 1e-9, "x={x}: {}", y[0] - x.sin());
            assert!((y[1] - x.cos()).abs() < 1e-9);
        }
    }

    #[test]
    fn backward_direction() {
        let xs = [3.0, 2.0, 1.0];
        let (ys, _) = integrate(|_, y: &[f64; 1]| [-y[0]], 3.0, [1.0], &xs, StepControl::default()).unwrap();
        assert_eq!(ys[0][0], 1.0);
        assert!((ys[2][0] - 2f64.exp()).abs() < 1e-9 * 2f64.exp());
    }

    #[test]
    fn overflow_detected() {
        let ctl = StepControl { overflow: 1e10, ..StepControl::default() };
        let res = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[50.0], ctl);
        match res {
            Err(Error::Overflow { r }) => assert!(r > 20.0 && r < 30.0, "{r}"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn step_budget() {
        let ctl = StepControl { max_steps: 3, ..StepControl::default() };
        let res = integrate(|x: f64, _: &[f64; 1]| [(50.0 * x).cos()], 0.0, [0.0], &[10.0], ctl);
        assert!(matches!(res, Err(Error::NonConvergence { .. })));
    }

    #[test]
    fn rejects_non_monotone_outputs() {
        let res = integrate(|_, y: &[f64; 1]| [y[0]], 0.0, [1.0], &[1.0, 0.5], StepControl::default());
        assert!(matches!(res, Err(Error::InvalidParams(_))));
    }
}

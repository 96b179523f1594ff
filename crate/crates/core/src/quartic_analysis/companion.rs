//! Real polynomial roots as eigenvalues of the balanced companion matrix.
//!
//! The companion matrix is already upper Hessenberg, so the eigenvalues come
//! straight out of the shifted Francis double-step QR iteration.

use crate::error::{Error, Result};
use crate::scalar::{cplx, lit, Complex, Real};

const MAX_SWEEPS: usize = 60;

/// Roots of `coeffs[0]·x^n + … + coeffs[n]` (highest degree first, leading
/// coefficient nonzero). Each root gets one Newton polish step on the
/// original coefficients, kept only when it lowers the residual.
pub fn poly_roots<T: Real>(coeffs: &[T]) -> Result<Vec<Complex<T>>> {
    let n = coeffs.len().saturating_sub(1);
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = coeffs[0];
    if lead == T::zero() {
        return Err(Error::Domain("leading coefficient is zero".into()));
    }
    if n == 1 {
        return Ok(vec![cplx(-coeffs[1] / lead, T::zero())]);
    }

    // 1-based Hessenberg storage keeps the QR sweep close to its textbook form.
    let mut a = vec![vec![T::zero(); n + 1]; n + 1];
    for k in 1..=n {
        a[1][k] = -coeffs[k] / lead;
    }
    for i in 2..=n {
        a[i][i - 1] = T::one();
    }
    balance(&mut a, n);
    let (wr, wi) = hqr(&mut a, n)?;

    let mut roots: Vec<Complex<T>> = Vec::with_capacity(n);
    let mut i = 1;
    while i <= n {
        if wi[i] == T::zero() {
            roots.push(polish_real(coeffs, wr[i]));
            i += 1;
        } else {
            // Conjugate pairs come out adjacent; polish one and mirror it.
            let z = polish(coeffs, cplx(wr[i], wi[i].abs()));
            roots.push(z);
            roots.push(z.conj());
            i += 2;
        }
    }
    Ok(roots)
}

pub fn horner<T: Real>(coeffs: &[T], z: Complex<T>) -> Complex<T> {
    coeffs.iter().fold(cplx(T::zero(), T::zero()), |acc, &c| acc * z + c)
}

fn horner_with_derivative<T: Real>(coeffs: &[T], z: Complex<T>) -> (Complex<T>, Complex<T>) {
    let zero = cplx(T::zero(), T::zero());
    coeffs.iter().fold((zero, zero), |(p, dp), &c| (p * z + c, dp * z + p))
}

fn polish<T: Real>(coeffs: &[T], z: Complex<T>) -> Complex<T> {
    let (p, dp) = horner_with_derivative(coeffs, z);
    if dp.norm() == T::zero() {
        return z;
    }
    let candidate = z - p / dp;
    if candidate.re.is_finite() && candidate.im.is_finite() && horner(coeffs, candidate).norm() < p.norm() {
        candidate
    } else {
        z
    }
}

fn polish_real<T: Real>(coeffs: &[T], x: T) -> Complex<T> {
    let z = polish(coeffs, cplx(x, T::zero()));
    cplx(z.re, T::zero())
}

/// Similarity scaling by powers of the radix so row and column norms match.
fn balance<T: Real>(a: &mut [Vec<T>], n: usize) {
    let radix = lit::<T>(2.0);
    let sqrdx = radix * radix;
    let mut done = false;
    while !done {
        done = true;
        for i in 1..=n {
            let mut r = T::zero();
            let mut c = T::zero();
            for j in 1..=n {
                if j != i {
                    c = c + a[j][i].abs();
                    r = r + a[i][j].abs();
                }
            }
            if c != T::zero() && r != T::zero() {
                let mut g = r / radix;
                let mut f = T::one();
                let s = c + r;
                while c < g {
                    f = f * radix;
                    c = c * sqrdx;
                }
                g = r * radix;
                while c > g {
                    f = f / radix;
                    c = c / sqrdx;
                }
                if (c + r) / f < lit::<T>(0.95) * s {
                    done = false;
                    g = T::one() / f;
                    for j in 1..=n {
                        a[i][j] = a[i][j] * g;
                    }
                    for j in 1..=n {
                        a[j][i] = a[j][i] * f;
                    }
                }
            }
        }
    }
}

#[inline]
fn sign<T: Real>(a: T, b: T) -> T {
    if b >= T::zero() {
        a.abs()
    } else {
        -a.abs()
    }
}

/// Eigenvalues of an upper Hessenberg matrix (1-based, destroyed on exit).
#[allow(clippy::many_single_char_names)]
fn hqr<T: Real>(a: &mut [Vec<T>], n: usize) -> Result<(Vec<T>, Vec<T>)> {
    let zero = T::zero();
    let mut wr = vec![zero; n + 1];
    let mut wi = vec![zero; n + 1];

    let mut anorm = zero;
    for i in 1..=n {
        for j in (i.max(2) - 1)..=n {
            anorm = anorm + a[i][j].abs();
        }
    }

    let mut nn = n;
    let mut t = zero;
    let (mut p, mut q, mut r): (T, T, T);
    let (mut x, mut y, mut z, mut w);
    while nn >= 1 {
        let mut its = 0;
        loop {
            let mut l = nn;
            while l >= 2 {
                let mut s = a[l - 1][l - 1].abs() + a[l][l].abs();
                if s == zero {
                    s = anorm;
                }
                if a[l][l - 1].abs() + s == s {
                    a[l][l - 1] = zero;
                    break;
                }
                l -= 1;
            }
            x = a[nn][nn];
            if l == nn {
                wr[nn] = x + t;
                wi[nn] = zero;
                nn -= 1;
            } else {
                y = a[nn - 1][nn - 1];
                w = a[nn][nn - 1] * a[nn - 1][nn];
                if l == nn - 1 {
                    p = lit::<T>(0.5) * (y - x);
                    q = p * p + w;
                    z = q.abs().sqrt();
                    x = x + t;
                    if q >= zero {
                        z = p + sign(z, p);
                        wr[nn - 1] = x + z;
                        wr[nn] = x + z;
                        if z != zero {
                            wr[nn] = x - w / z;
                        }
                        wi[nn - 1] = zero;
                        wi[nn] = zero;
                    } else {
                        wr[nn - 1] = x + p;
                        wr[nn] = x + p;
                        wi[nn - 1] = -z;
                        wi[nn] = z;
                    }
                    nn = nn.saturating_sub(2);
                } else {
                    if its == MAX_SWEEPS {
                        return Err(Error::NonConvergence { method: "Hessenberg QR", budget: MAX_SWEEPS });
                    }
                    if its == 10 || its == 20 || its == 40 {
                        // Exceptional shift.
                        t = t + x;
                        for i in 1..=nn {
                            a[i][i] = a[i][i] - x;
                        }
                        let s = a[nn][nn - 1].abs() + a[nn - 1][nn - 2].abs();
                        x = lit::<T>(0.75) * s;
                        y = x;
                        w = lit::<T>(-0.4375) * s * s;
                    }
                    its += 1;
                    let mut m = nn - 2;
                    loop {
                        z = a[m][m];
                        let rr = x - z;
                        let ss = y - z;
                        p = (rr * ss - w) / a[m + 1][m] + a[m][m + 1];
                        q = a[m + 1][m + 1] - z - rr - ss;
                        r = a[m + 2][m + 1];
                        let s = p.abs() + q.abs() + r.abs();
                        p = p / s;
                        q = q / s;
                        r = r / s;
                        if m == l {
                            break;
                        }
                        let u = a[m][m - 1].abs() * (q.abs() + r.abs());
                        let v = p.abs() * (a[m - 1][m - 1].abs() + z.abs() + a[m + 1][m + 1].abs());
                        if u + v == v {
                            break;
                        }
                        m -= 1;
                    }
                    for i in (m + 2)..=nn {
                        a[i][i - 2] = zero;
                        if i != m + 2 {
                            a[i][i - 3] = zero;
                        }
                    }
                    let mut k = m;
                    while k + 1 <= nn {
                        if k != m {
                            p = a[k][k - 1];
                            q = a[k + 1][k - 1];
                            r = zero;
                            if k != nn - 1 {
                                r = a[k + 2][k - 1];
                            }
                            x = p.abs() + q.abs() + r.abs();
                            if x != zero {
                                p = p / x;
                                q = q / x;
                                r = r / x;
                            }
                        }
                        let s = sign((p * p + q * q + r * r).sqrt(), p);
                        if s != zero {
                            if k == m {
                                if l != m {
                                    a[k][k - 1] = -a[k][k - 1];
                                }
                            } else {
                                a[k][k - 1] = -s * x;
                            }
                            p = p + s;
                            x = p / s;
                            y = q / s;
                            z = r / s;
                            q = q / p;
                            r = r / p;
                            for j in k..=nn {
                                p = a[k][j] + q * a[k + 1][j];
                                if k != nn - 1 {
                                    p = p + r * a[k + 2][j];
                                    a[k + 2][j] = a[k + 2][j] - p * z;
                                }
                                a[k + 1][j] = a[k + 1][j] - p * y;
                                a[k][j] = a[k][j] - p * x;
                            }
                            let mmin = if nn < k + 3 { nn } else { k + 3 };
                            for i in l..=mmin {
                                p = x * a[i][k] + y * a[i][k + 1];
                                if k != nn - 1 {
                                    p = p + z * a[i][k + 2];
                                    a[i][k + 2] = a[i][k + 2] - p * r;
                                }
                                a[i][k + 1] = a[i][k + 1] - p * q;
                                a[i][k] = a[i][k] - p;
                            }
                        }
                        k += 1;
                    }
                }
            }
            if nn < 1 || l + 1 >= nn {
                break;
            }
        }
    }
    Ok((wr, wi))
}

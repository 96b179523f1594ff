//! Physical inputs and the composite symbols of the reduced radial equation.

use crate::error::{Error, Result};
use crate::scalar::{real, Complex, Real};

/// The five physical inputs of the radial problem, in units ħ = c = 1.
///
/// The dimensionless energy used in the bifurcation and variational
/// analysis is `e = epsilon / mass`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalParams<T> {
    pub epsilon: T,
    pub mass: T,
    pub alpha: T,
    pub j: u32,
    pub sigma: T,
}

impl<T: Real> PhysicalParams<T> {
    pub fn new(epsilon: T, mass: T, alpha: T, j: u32, sigma: T) -> Result<Self> {
        let p = Self { epsilon, mass, alpha, j, sigma };
        p.validate()?;
        Ok(p)
    }

    /// Fixed values used for the bound-state numerics: M = 1, σ = −1, j = 0, α = 1.
    pub fn canonical(epsilon: T) -> Self {
        Self { epsilon, mass: T::one(), alpha: T::one(), j: 0, sigma: -T::one() }
    }

    pub fn validate(&self) -> Result<()> {
        let finite = [self.epsilon, self.mass, self.alpha, self.sigma]
            .iter()
            .all(|v| v.is_finite());
        if !finite {
            return Err(Error::InvalidParams("parameters must be finite".into()));
        }
        if self.mass <= T::zero() {
            return Err(Error::InvalidParams(format!("mass must be positive, got {}", self.mass)));
        }
        if self.sigma == T::zero() {
            return Err(Error::InvalidParams("sigma must be nonzero".into()));
        }
        Ok(())
    }

    pub fn with_epsilon(self, epsilon: T) -> Self {
        Self { epsilon, ..self }
    }

    /// Dimensionless energy e = ε / M.
    pub fn e(&self) -> T {
        self.epsilon / self.mass
    }

    /// j(j + 1) as a scalar.
    pub fn jj1(&self) -> T {
        let j = T::from_u32(self.j).expect("j representable");
        j * (j + T::one())
    }

    pub fn derive(&self) -> DerivedParams<T> {
        derive(self)
    }
}

/// Composite symbols K², J², Σ² and the transform scale A.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DerivedParams<T> {
    /// M² − ε² (sign-carrying).
    pub k2: T,
    /// j(j+1) − α², negative when α² > j(j+1).
    pub j2: T,
    /// σα²/M².
    pub sigma2: T,
    /// Principal fourth root of (ε² − M²)Σ².
    pub a: Complex<T>,
    pub epsilon: T,
    pub alpha: T,
}

impl<T: Real> DerivedParams<T> {
    /// Principal square root of Σ²: positive real for Σ² > 0, +i|Σ| for Σ² < 0.
    pub fn sigma(&self) -> Complex<T> {
        real(self.sigma2).sqrt()
    }

    /// ε² − M².
    pub fn energy_gap(&self) -> T {
        -self.k2
    }
}

pub fn derive<T: Real>(p: &PhysicalParams<T>) -> DerivedParams<T> {
    let m2 = p.mass * p.mass;
    let k2 = m2 - p.epsilon * p.epsilon;
    let j2 = p.jj1() - p.alpha * p.alpha;
    let sigma2 = p.sigma * p.alpha * p.alpha / m2;
    let a4 = -k2 * sigma2;
    let a = if a4 == T::zero() { Complex::new(T::zero(), T::zero()) } else { real(a4).powf(T::lit(0.25)) };
    DerivedParams { k2, j2, sigma2, a, epsilon: p.epsilon, alpha: p.alpha }
}

/// Effective squared radial momentum (ε² − M²) + 2εα/r − J²/r² + Σ²/r⁴.
pub fn p_squared<T: Real>(r: T, p: &PhysicalParams<T>) -> Result<T> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("p_squared requires r > 0, got {r}")));
    }
    Ok(p_squared_unchecked(r, &p.derive()))
}

/// [`p_squared`] for callers that already hold the derived symbols and a positive `r`.
#[inline]
pub fn p_squared_unchecked<T: Real>(r: T, d: &DerivedParams<T>) -> T {
    let inv = r.recip();
    let inv2 = inv * inv;
    let two = T::lit(2.0);
    -d.k2 + two * d.epsilon * d.alpha * inv - d.j2 * inv2 + d.sigma2 * inv2 * inv2
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn pp(eps: f64, m: f64, a: f64, j: u32, s: f64) -> PhysicalParams<f64> {
        PhysicalParams::new(eps, m, a, j, s).unwrap()
    }

    #[test]
    fn alpha_zero_switches_off_polarizability() {
        let d = pp(0.0, 1.0, 0.0, 1, 1.0).derive();
        assert_eq!(d.k2, 1.0);
        assert_eq!(d.j2, 2.0);
        assert_eq!(d.sigma2, 0.0);
        assert_eq!(d.a, Complex::new(0.0, 0.0));
    }

    #[test]
    fn hand_evaluated_bound_case() {
        let d = pp(0.75, 1.0, 1.0, 0, -1.0).derive();
        assert_relative_eq!(d.k2, 0.4375, max_relative = 1e-15);
        assert_eq!(d.j2, -1.0);
        assert_eq!(d.sigma2, -1.0);
        assert_relative_eq!(d.a.re, 0.4375f64.powf(0.25), max_relative = 1e-14);
        assert_relative_eq!(d.a.re, 0.813288, epsilon = 1e-6);
        assert!(d.a.im.abs() < 1e-15);
        assert_eq!(d.sigma(), Complex::new(0.0, 1.0));
    }

    #[test]
    fn k2_at_bifurcation_energy() {
        let d = pp(0.614659, 1.0, 1.0, 0, -1.0).derive();
        assert_relative_eq!(d.k2, 0.622194, epsilon = 1e-6);
    }

    #[test]
    fn a_fourth_power_matches_definition() {
        for &(eps, s) in &[(0.3, 1.0), (0.3, -1.0), (1.7, 1.0), (1.7, -1.0)] {
            let p = pp(eps, 1.3, 0.8, 2, s);
            let d = p.derive();
            let target = (eps * eps - 1.69) * d.sigma2;
            let a4 = d.a.powi(4);
            assert!((a4.re - target).abs() <= 1e-12 * target.abs());
            assert!(a4.im.abs() <= 1e-12 * target.abs());
        }
    }

    #[test]
    fn p_squared_hand_value_and_domain() {
        let p = pp(0.0, 1.0, 1.0, 0, -1.0);
        assert_relative_eq!(p_squared(1.0, &p).unwrap(), -1.0, epsilon = 1e-15);
        assert!(matches!(p_squared(0.0, &p), Err(Error::Domain(_))));
        assert!(matches!(p_squared(-2.0, &p), Err(Error::Domain(_))));
    }

    #[test]
    fn p_squared_limits() {
        let p = pp(0.75, 1.0, 1.0, 0, -1.0);
        let far = p_squared(1e9, &p).unwrap();
        assert_relative_eq!(far, 0.75 * 0.75 - 1.0, max_relative = 1e-8);
        let d = p.derive();
        for &r in &[1e-3, 1e-4, 1e-5] {
            let ratio = p_squared(r, &p).unwrap() * r.powi(4) / d.sigma2;
            assert!((ratio - 1.0).abs() < 10.0 * r, "r = {r}: ratio {ratio}");
        }
    }

    #[test]
    fn quartic_numerator_coefficients_by_interpolation() {
        // Fit a quartic through 5 samples of P²·r⁴ and compare with (ε²−M², 2εα, −J², 0, Σ²).
        let p = pp(0.6, 1.2, 0.9, 1, -1.0);
        let d = p.derive();
        let xs = [0.5, 1.0, 1.5, 2.0, 3.0];
        let ys: Vec<f64> = xs.iter().map(|&r| p_squared(r, &p).unwrap() * r.powi(4)).collect();
        let coeffs = vandermonde_solve(&xs, &ys);
        let expected = [d.sigma2, 0.0, -d.j2, 2.0 * 0.6 * 0.9, -d.k2];
        for (c, e) in coeffs.iter().zip(expected) {
            assert!((c - e).abs() <= 1e-10 * e.abs().max(1.0), "{c} vs {e}");
        }
    }

    fn vandermonde_solve(xs: &[f64; 5], ys: &[f64]) -> [f64; 5] {
        let mut a = [[0.0; 6]; 5];
        for i in 0..5 {
            for k in 0..5 {
                a[i][k] = xs[i].powi(k as i32);
            }
            a[i][5] = ys[i];
        }
        for col in 0..5 {
            let piv = (col..5).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs())).unwrap();
            a.swap(col, piv);
            for row in 0..5 {
                if row != col {
                    let f = a[row][col] / a[col][col];
                    for k in col..6 {
                        a[row][k] -= f * a[col][k];
                    }
                }
            }
        }
        let mut out = [0.0; 5];
        for i in 0..5 {
            out[i] = a[i][5] / a[i][i];
        }
        out
    }

    #[test]
    fn unit_mass_energy_is_dimensionless_energy() {
        let p = pp(0.614659, 1.0, 1.0, 0, -1.0);
        assert_eq!(p.e(), 0.614659);
        let p2 = pp(1.2, 2.0, 1.0, 0, -1.0);
        assert_relative_eq!(p2.e(), 0.6);
    }

    #[test]
    fn validation_rejects_bad_inputs() {
        assert!(PhysicalParams::new(0.5, 0.0, 1.0, 0, 1.0).is_err());
        assert!(PhysicalParams::new(0.5, 1.0, 1.0, 0, 0.0).is_err());
        assert!(PhysicalParams::new(f64::NAN, 1.0, 1.0, 0, 1.0).is_err());
    }

    #[test]
    fn generic_over_f32() {
        let p = PhysicalParams::<f32>::new(0.75, 1.0, 1.0, 0, -1.0).unwrap();
        let d = p.derive();
        assert!((d.a.re - 0.813288f32).abs() < 1e-5);
    }
}

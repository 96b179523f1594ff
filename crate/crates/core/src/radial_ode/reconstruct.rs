//! The remaining field components expressed through C(r).

use super::RadialSolution;
use crate::error::{Error, Result};
use crate::params::PhysicalParams;
use crate::scalar::{cplx, imag_unit, lit, real, Complex, Real};

const MIN_RADIUS: f64 = 1e-12;

/// The (±) sign carried by the field-strength equations.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum FieldSign {
    #[default]
    Plus,
    Minus,
}

impl FieldSign {
    pub fn value<T: Real>(self) -> T {
        match self {
            FieldSign::Plus => T::one(),
            FieldSign::Minus => -T::one(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReconstructOptions<T> {
    /// The mass symbol m of the first-order system. m = iM turns m² into −M².
    pub mass: Complex<T>,
    pub sign: FieldSign,
}

impl<T: Real> ReconstructOptions<T> {
    pub fn for_params(p: &PhysicalParams<T>) -> Self {
        Self { mass: cplx(T::zero(), p.mass), sign: FieldSign::Plus }
    }
}

/// All fifteen radial profiles on the solution grid.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldComponents<T> {
    pub grid: Vec<T>,
    pub c: Vec<Complex<T>>,
    pub c0: Vec<Complex<T>>,
    pub c1: Vec<Complex<T>>,
    pub c2: Vec<Complex<T>>,
    pub c3: Vec<Complex<T>>,
    pub phi0: Vec<Complex<T>>,
    pub phi1: Vec<Complex<T>>,
    pub phi2: Vec<Complex<T>>,
    pub phi3: Vec<Complex<T>>,
    pub e1: Vec<Complex<T>>,
    pub e2: Vec<Complex<T>>,
    pub e3: Vec<Complex<T>>,
    pub h1: Vec<Complex<T>>,
    pub h2: Vec<Complex<T>>,
    pub h3: Vec<Complex<T>>,
}

impl<T: Real> FieldComponents<T> {
    pub const NAMES: [&'static str; 15] =
        ["C", "C0", "C1", "C2", "C3", "Phi0", "Phi1", "Phi2", "Phi3", "E1", "E2", "E3", "H1", "H2", "H3"];

    pub fn columns(&self) -> [(&'static str, &[Complex<T>]); 15] {
        let cols: [&[Complex<T>]; 15] = [
            &self.c, &self.c0, &self.c1, &self.c2, &self.c3, &self.phi0, &self.phi1, &self.phi2, &self.phi3, &self.e1,
            &self.e2, &self.e3, &self.h1, &self.h2, &self.h3,
        ];
        let mut out = [("", &self.c[..]); 15];
        for (i, col) in cols.into_iter().enumerate() {
            out[i] = (Self::NAMES[i], col);
        }
        out
    }

    /// Largest violation of Φ₃ = Φ₁, C₃ = C₁, E₃ = E₁, H₃ = −H₁, H₂ = 0,
    /// E₁ = 0, H₁ = 0.
    pub fn constraint_violation(&self) -> T {
        let mut worst = T::zero();
        for i in 0..self.grid.len() {
            for v in [
                self.phi3[i] - self.phi1[i],
                self.c3[i] - self.c1[i],
                self.e3[i] - self.e1[i],
                self.h3[i] + self.h1[i],
                self.h2[i],
                self.e1[i],
                self.h1[i],
            ] {
                worst = worst.max(v.norm());
            }
        }
        worst
    }
}

/// Builds every component from C = f/r and C′ = f′/r − f/r²:
///
/// ```text
/// mΦ₀ = −i(ε + α/r)C     mΦ₁ = mΦ₃ = −(ν/r)C     mΦ₂ = C′
/// E₂ = s(−iα/(m²r²))C    E₁ = E₃ = 0             H₁ = H₂ = H₃ = 0
/// mC₀ = −i(ε + α/r)C + s iασ C′/(m²r²)
/// mC₁ = mC₃ = −(ν/r)C
/// mC₂ = C′ + sσα(ε + α/r)C/(m²r²)
/// ```
///
/// with ν² = j(j+1)/2 and s the field sign.
pub fn reconstruct_components<T: Real>(
    sol: &RadialSolution<T>,
    p: &PhysicalParams<T>,
    opts: ReconstructOptions<T>,
) -> Result<FieldComponents<T>> {
    p.validate()?;
    let m = opts.mass;
    if !(m.norm() > T::zero()) || !m.re.is_finite() || !m.im.is_finite() {
        return Err(Error::InvalidParams(format!("mass symbol must be finite and nonzero, got {m}")));
    }
    if sol.f.len() != sol.grid.len() || sol.df.len() != sol.grid.len() {
        return Err(Error::InvalidParams("solution arrays differ in length".into()));
    }
    if let Some(&r) = sol.grid.iter().find(|&&r| !(r >= lit(MIN_RADIUS))) {
        return Err(Error::Singular(format!("reconstruction needs r >= {MIN_RADIUS}, got {r}")));
    }
    let epsilon = sol.e * p.mass;
    let nu = (p.jj1() / lit(2.0)).sqrt();
    let s = opts.sign.value::<T>();
    let i = imag_unit::<T>();
    let m2 = m * m;
    let zero = Complex::new(T::zero(), T::zero());
    let n = sol.grid.len();

    let mut out = FieldComponents {
        grid: sol.grid.clone(),
        c: Vec::with_capacity(n),
        c0: Vec::with_capacity(n),
        c1: Vec::with_capacity(n),
        c2: Vec::with_capacity(n),
        c3: Vec::with_capacity(n),
        phi0: Vec::with_capacity(n),
        phi1: Vec::with_capacity(n),
        phi2: Vec::with_capacity(n),
        phi3: Vec::with_capacity(n),
        e1: vec![zero; n],
        e2: Vec::with_capacity(n),
        e3: vec![zero; n],
        h1: vec![zero; n],
        h2: vec![zero; n],
        h3: vec![zero; n],
    };
    for k in 0..n {
        let r = sol.grid[k];
        let cr = sol.f[k] / r;
        let dcr = sol.df[k] / r - sol.f[k] / (r * r);
        let c = real(cr);
        let dc = real(dcr);
        let w = epsilon + p.alpha / r;
        let coupling = real(p.alpha / (r * r)) / m2;

        let phi1 = real(-nu / r) * c / m;
        out.c.push(c);
        out.phi0.push(-i * real(w) * c / m);
        out.phi1.push(phi1);
        out.phi2.push(dc / m);
        out.phi3.push(phi1);
        out.e2.push(-i * real(s) * coupling * c);
        out.c0.push((-i * real(w) * c + i * real(s * p.sigma) * coupling * dc) / m);
        out.c1.push(phi1);
        out.c2.push((dc + real(s * p.sigma * w) * coupling * c) / m);
        out.c3.push(phi1);
    }
    Ok(out)
}

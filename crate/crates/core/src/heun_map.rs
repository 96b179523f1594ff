//! Möbius change of variable r ↦ x that sends r = 0, ∞ to x = −1, +1, and
//! the reduction of the radial equation to the double confluent Heun form
//!
//! ```text
//! H'' + (1/(x+1) + 1/(x−1) − μ/(2(x+1)²) − μ/(2(x−1)²)) H'
//!     + (βx² + (γ + 2μ)x + δ) / ((x+1)³(x−1)³) H = 0.
//! ```

use num_rational::Rational64;

use crate::error::{Error, Result};
use crate::params::{derive, DerivedParams, PhysicalParams};
use crate::scalar::{imag_unit, lit, real, Complex, Real};

/// Sign choice for D = ±4A (and hence μ = ±8A).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Branch {
    #[default]
    Plus,
    Minus,
}

impl Branch {
    pub fn sign<T: Real>(self) -> T {
        match self {
            Branch::Plus => T::one(),
            Branch::Minus => -T::one(),
        }
    }
}

/// Exponents of f = (x+1)^B (x−1)^C exp(Dx/((x+1)(x−1))) F.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstitutionParams<T> {
    pub b: Rational64,
    pub c: Rational64,
    pub d: Complex<T>,
}

impl<T: Real> SubstitutionParams<T> {
    pub fn new(d: &DerivedParams<T>, branch: Branch) -> Self {
        Self { b: Rational64::new(1, 2), c: Rational64::new(-1, 2), d: d.a * lit::<T>(4.0) * branch.sign::<T>() }
    }

    fn b_real(&self) -> T {
        rational_to_real(self.b)
    }

    fn c_real(&self) -> T {
        rational_to_real(self.c)
    }
}

fn rational_to_real<T: Real>(q: Rational64) -> T {
    T::from_i64(*q.numer()).expect("numerator") / T::from_i64(*q.denom()).expect("denominator")
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HeunParams<T> {
    pub mu: Complex<T>,
    pub beta: Complex<T>,
    pub gamma: Complex<T>,
    pub delta: Complex<T>,
    pub branch: Branch,
}

impl<T: Real> HeunParams<T> {
    /// |β + δ − γ| relative to max(1, |β|, |γ|, |δ|).
    pub fn constraint_residual(&self) -> T {
        let scale = T::one().max(self.beta.norm()).max(self.gamma.norm()).max(self.delta.norm());
        (self.beta + self.delta - self.gamma).norm() / scale
    }
}

fn nonzero_a<T: Real>(d: &DerivedParams<T>) -> Result<Complex<T>> {
    if d.a.norm() == T::zero() {
        Err(Error::DegenerateA)
    } else {
        Ok(d.a)
    }
}

/// x = (iAr + Σ)/(iAr − Σ).
pub fn x_of_r<T: Real>(r: T, d: &DerivedParams<T>) -> Result<Complex<T>> {
    if !(r > T::zero()) {
        return Err(Error::Domain(format!("x_of_r requires r > 0, got {r}")));
    }
    let a = nonzero_a(d)?;
    let iar = imag_unit::<T>() * a * r;
    let sigma = d.sigma();
    let den = iar - sigma;
    if den.norm() <= T::epsilon() * (iar.norm() + sigma.norm()) {
        return Err(Error::Singular(format!("iAr = Sigma at r = {r}")));
    }
    Ok((iar + sigma) / den)
}

/// r = (−iΣ/A)·(x + 1)/(x − 1).
pub fn r_of_x<T: Real>(x: Complex<T>, d: &DerivedParams<T>) -> Result<Complex<T>> {
    let a = nonzero_a(d)?;
    let den = x - T::one();
    if den.norm() == T::zero() {
        return Err(Error::Singular("x = 1 corresponds to r = infinity".into()));
    }
    Ok(-imag_unit::<T>() * d.sigma() / a * (x + T::one()) / den)
}

pub fn heun_params<T: Real>(p: &PhysicalParams<T>, branch: Branch) -> Result<HeunParams<T>> {
    p.validate()?;
    heun_params_from(&derive(p), branch)
}

fn heun_params_from<T: Real>(d: &DerivedParams<T>, branch: Branch) -> Result<HeunParams<T>> {
    let a = nonzero_a(d)?;
    let sub = SubstitutionParams::new(d, branch);
    let i = imag_unit::<T>();
    // iεαΣ/A appears in every parameter.
    let coupling = i * d.epsilon * d.alpha * d.sigma() / a;
    let one = T::one();
    let four_j2 = lit::<T>(4.0) * d.j2;
    let eight_a2 = a * a * lit::<T>(8.0);
    Ok(HeunParams {
        mu: sub.d * lit::<T>(2.0),
        gamma: coupling * lit::<T>(-16.0),
        beta: real(-one - four_j2) + eight_a2 - coupling * lit::<T>(8.0),
        delta: real(one + four_j2) - eight_a2 - coupling * lit::<T>(8.0),
        branch,
    })
}

/// Largest pointwise mismatches between three routes to the coefficients of
/// the equation for F(x).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReductionResidual<T> {
    /// First-derivative coefficient: substituted form vs Heun form.
    pub first_order: T,
    /// Zeroth-order coefficient: substituted polynomial form vs Heun form.
    pub zeroth_order: T,
    /// Both coefficients rebuilt from the radial equation by the chain rule
    /// and the substitution, vs the substituted polynomial form.
    pub chain_rule: T,
}

impl<T: Real> ReductionResidual<T> {
    pub fn max(&self) -> T {
        self.first_order.max(self.zeroth_order).max(self.chain_rule)
    }
}

/// Coefficients (p, q) of F'' + p F' + q F = 0 as produced by the
/// substitution with B = 1/2, C = −1/2, D = ±4A.
pub fn substituted_coefficients<T: Real>(
    x: Complex<T>,
    d: &DerivedParams<T>,
    sub: &SubstitutionParams<T>,
) -> (Complex<T>, Complex<T>) {
    let a = d.a;
    let dd = sub.d;
    let i = imag_unit::<T>();
    let coupling = i * d.epsilon * d.alpha * d.sigma();
    let (xp, xm) = (x + T::one(), x - T::one());
    let first = xp.inv() + xm.inv() - dd / (xp * xp) - dd / (xm * xm);
    let two = lit::<T>(2.0);
    let eight = lit::<T>(8.0);
    let j2a = a * d.j2 * eight;
    let d2a = dd * dd * a;
    let quad = d2a - j2a - a * two - coupling * lit::<T>(16.0);
    let lin = dd * a * eight - coupling * lit::<T>(32.0);
    let cons = a * two - coupling * lit::<T>(16.0) - d2a + j2a;
    let zeroth = (quad * x * x + lin * x + cons) / (a * two * (xp * xm).powi(3));
    (first, zeroth)
}

/// Coefficients of the canonical Heun form for the given parameters.
pub fn heun_coefficients<T: Real>(x: Complex<T>, h: &HeunParams<T>) -> (Complex<T>, Complex<T>) {
    let (xp, xm) = (x + T::one(), x - T::one());
    let half_mu = h.mu * lit::<T>(0.5);
    let first = xp.inv() + xm.inv() - half_mu / (xp * xp) - half_mu / (xm * xm);
    let zeroth = (h.beta * x * x + (h.gamma + h.mu * lit::<T>(2.0)) * x + h.delta) / (xp * xm).powi(3);
    (first, zeroth)
}

/// Independent route: start from f'' + P²(r) f = 0, change variable to x
/// (f_xx + 2/(x−1) f_x + P²(r(x)) r'(x)² f = 0) and apply f = g F with
/// log g = B ln(x+1) + C ln(x−1) + Dx/(x²−1).
fn chain_rule_coefficients<T: Real>(
    x: Complex<T>,
    d: &DerivedParams<T>,
    sub: &SubstitutionParams<T>,
) -> Result<(Complex<T>, Complex<T>)> {
    let r = r_of_x(x, d)?;
    let (xp, xm) = (x + T::one(), x - T::one());
    let scale = -imag_unit::<T>() * d.sigma() / d.a;
    let dr_dx = scale * lit::<T>(-2.0) / (xm * xm);
    let inv_r = r.inv();
    let two = lit::<T>(2.0);
    let p2 = real(-d.k2) + inv_r * (two * d.epsilon * d.alpha) - inv_r * inv_r * d.j2 + inv_r.powi(4) * d.sigma2;

    let (b, c, dd) = (sub.b_real(), sub.c_real(), sub.d);
    let x2m1 = xp * xm;
    let lg1 = xp.inv() * b + xm.inv() * c - dd * (x * x + T::one()) / (x2m1 * x2m1);
    let lg2 = -(xp * xp).inv() * b - (xm * xm).inv() * c + dd / xp.powi(3) + dd / xm.powi(3);
    let p0 = xm.inv() * two;
    let first = p0 + lg1 * two;
    let zeroth = p2 * dr_dx * dr_dx + p0 * lg1 + lg2 + lg1 * lg1;
    Ok((first, zeroth))
}

/// Pointwise comparison of the three coefficient routes at each sample.
pub fn verify_heun_reduction<T: Real>(
    p: &PhysicalParams<T>,
    branch: Branch,
    x_samples: &[Complex<T>],
) -> Result<ReductionResidual<T>> {
    p.validate()?;
    let d = derive(p);
    let h = heun_params_from(&d, branch)?;
    let sub = SubstitutionParams::new(&d, branch);
    let mut out = ReductionResidual { first_order: T::zero(), zeroth_order: T::zero(), chain_rule: T::zero() };
    for &x in x_samples {
        if (x - T::one()).norm() == T::zero() || (x + T::one()).norm() == T::zero() {
            return Err(Error::Singular("sample at x = ±1".into()));
        }
        let (p_sub, q_sub) = substituted_coefficients(x, &d, &sub);
        let (p_heun, q_heun) = heun_coefficients(x, &h);
        let (p_chain, q_chain) = chain_rule_coefficients(x, &d, &sub)?;
        out.first_order = out.first_order.max((p_sub - p_heun).norm());
        out.zeroth_order = out.zeroth_order.max((q_sub - q_heun).norm());
        out.chain_rule = out.chain_rule.max((p_chain - p_sub).norm()).max((q_chain - q_sub).norm());
    }
    Ok(out)
}

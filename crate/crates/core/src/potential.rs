//! The shifted Deng-Fan well, its effective radial potential and the
//! quadratic form it takes in `xi = 1/(e^{ar} - 1)`.

use serde::{Deserialize, Serialize};

use crate::error::{domain, Error, Result};
use crate::molecule::MoleculeParams;
use crate::units;

/// Constant term of the centrifugal approximation.
pub const C0: f64 = 1.0 / 12.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CentrifugalMode {
    /// `l(l+1)/r^2`.
    Exact,
    /// `l(l+1) a^2 [C0 + e^{ar}/(e^{ar}-1)^2]`.
    Approx,
}

impl std::str::FromStr for CentrifugalMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Self::Exact),
            "approx" => Ok(Self::Approx),
            other => Err(domain(format!("unknown centrifugal mode {other:?}"))),
        }
    }
}

impl std::fmt::Display for CentrifugalMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Exact => "exact",
            Self::Approx => "approx",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DengFanShape {
    /// `e^{a r_e} - 1`.
    pub b: f64,
    pub a: f64,
    pub depth: f64,
    pub r_e: f64,
}

impl DengFanShape {
    /// Builds the shape from raw numbers; only overflow is rejected.
    pub fn from_parts(depth: f64, r_e: f64, a: f64) -> Result<Self> {
        let b = (a * r_e).exp_m1();
        if !b.is_finite() {
            return Err(domain(format!("e^(a r_e) overflows for a = {a}, r_e = {r_e}")));
        }
        Ok(Self { b, a, depth, r_e })
    }

    /// `xi(r) = 1/(e^{ar} - 1)`.
    pub fn xi(&self, r: f64) -> f64 {
        1.0 / (self.a * r).exp_m1()
    }

    /// Inverse of [`Self::xi`].
    pub fn r_of_xi(&self, xi: f64) -> f64 {
        (1.0 / xi).ln_1p() / self.a
    }
}

pub fn shape(params: &MoleculeParams) -> Result<DengFanShape> {
    params.validate()?;
    DengFanShape::from_parts(params.depth, params.r_e, params.a)
}

fn check_radius(r: f64) -> Result<()> {
    if r > 0.0 && r.is_finite() {
        Ok(())
    } else {
        Err(domain(format!("radius must be positive, got {r}")))
    }
}

/// `V(r) = D (1 - b/(e^{ar}-1))^2 - D`.
pub fn potential_energy(shape: &DengFanShape, r: f64) -> Result<f64> {
    check_radius(r)?;
    Ok(potential_unchecked(shape, r))
}

pub(crate) fn potential_unchecked(shape: &DengFanShape, r: f64) -> f64 {
    let u = 1.0 - shape.b / (shape.a * r).exp_m1();
    shape.depth * u * u - shape.depth
}

/// The factor multiplying `l(l+1)` in the centrifugal term (before `kappa`).
pub fn centrifugal_factor(a: f64, r: f64, mode: CentrifugalMode) -> f64 {
    match mode {
        CentrifugalMode::Exact => 1.0 / (r * r),
        CentrifugalMode::Approx => {
            // e^x/(e^x-1)^2 = 1/(2 sinh(x/2))^2
            let s = 2.0 * (0.5 * a * r).sinh();
            a * a * (C0 + 1.0 / (s * s))
        }
    }
}

pub fn effective_potential(shape: &DengFanShape, l: u32, mu: f64, r: f64, mode: CentrifugalMode) -> Result<f64> {
    check_radius(r)?;
    let kappa = units::kappa(mu)?;
    Ok(effective_unchecked(shape, kappa, l, r, mode))
}

pub(crate) fn effective_unchecked(shape: &DengFanShape, kappa: f64, l: u32, r: f64, mode: CentrifugalMode) -> f64 {
    let ll = f64::from(l) * f64::from(l + 1);
    let v = potential_unchecked(shape, r);
    if l == 0 {
        v
    } else {
        v + kappa * ll * centrifugal_factor(shape.a, r, mode)
    }
}

/// `V_eff(xi) = P + Q xi + R xi^2` under the approximate centrifugal term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EffectiveCoefficients {
    pub p: f64,
    pub q: f64,
    pub r: f64,
    pub c0: f64,
}

impl EffectiveCoefficients {
    pub fn eval(&self, xi: f64) -> f64 {
        self.p + xi * (self.q + self.r * xi)
    }

    /// Location and value of the minimum in `xi`.
    pub fn vertex(&self) -> (f64, f64) {
        let xi = -self.q / (2.0 * self.r);
        (xi, self.p - self.q * self.q / (4.0 * self.r))
    }

    pub fn scale(&self) -> f64 {
        self.p.abs().max(self.q.abs()).max(self.r.abs())
    }
}

pub fn pqr(shape: &DengFanShape, l: u32, mu: f64) -> Result<EffectiveCoefficients> {
    let kappa = units::kappa(mu)?;
    Ok(pqr_with_kappa(shape, l, kappa))
}

pub(crate) fn pqr_with_kappa(shape: &DengFanShape, l: u32, kappa: f64) -> EffectiveCoefficients {
    let c = kappa * shape.a * shape.a * f64::from(l) * f64::from(l + 1);
    EffectiveCoefficients {
        p: c * C0,
        q: c - 2.0 * shape.b * shape.depth,
        r: c + shape.depth * shape.b * shape.b,
        c0: C0,
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TurningPoints {
    pub xi_a: f64,
    pub xi_b: f64,
}

impl TurningPoints {
    /// Radii of the two turning points, inner first. Requires `xi_a > 0`;
    /// the smaller `xi` is the outer radius.
    pub fn radii(&self, shape: &DengFanShape) -> (f64, f64) {
        (shape.r_of_xi(self.xi_b), shape.r_of_xi(self.xi_a))
    }
}

/// Real roots of `P + Q xi + R xi^2 = E`, ordered.
pub fn turning_points(coeffs: &EffectiveCoefficients, energy: f64) -> Result<TurningPoints> {
    let c = coeffs.p - energy;
    let disc = coeffs.q * coeffs.q - 4.0 * coeffs.r * c;
    if !(disc > 0.0) {
        return Err(Error::NoClassicalRegion { energy });
    }
    let t = -0.5 * (coeffs.q + coeffs.q.signum() * disc.sqrt());
    let (x1, x2) = (t / coeffs.r, c / t);
    Ok(TurningPoints {
        xi_a: x1.min(x2),
        xi_b: x1.max(x2),
    })
}

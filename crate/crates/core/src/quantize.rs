//! Numerical checks of the proper quantization rule in `xi` space.
//!
//! With the approximate centrifugal term the effective potential is a
//! quadratic in `xi = 1/(e^{ar}-1)` and `dr = -dxi/(a xi (1+xi))`, so the
//! action between the turning points is
//!
//! ```text
//! J(E) = (1/a) sqrt(R/kappa) * I(xi_a, xi_b)
//! I    = int_{xi_a}^{xi_b} sqrt((xi - xi_a)(xi_b - xi)) / (xi (1+xi)) dxi
//!      = pi [ sqrt((1+xi_a)(1+xi_b)) - 1 - sqrt(xi_a xi_b) ]
//! ```
//!
//! The rule states `J(E_n) - J(E_0) = n pi`.

use std::f64::consts::{FRAC_PI_2, PI};

use serde::Serialize;

use crate::error::{domain, Result};
use crate::molecule::MoleculeParams;
use crate::potential::{pqr_with_kappa, shape, turning_points, EffectiveCoefficients, TurningPoints};
use crate::quadrature::integrate_adaptive;
use crate::spectrum::{energy, QuantumState};
use crate::units;

/// Quadrature tolerance on successive Gauss-Legendre orders.
pub const QUADRATURE_TOL: f64 = 1e-9;

/// Local wave number `sqrt((E - P - Q xi - R xi^2)/kappa)` in 1/Å.
pub fn momentum_xi(coeffs: &EffectiveCoefficients, mu: f64, energy: f64, xi: f64) -> Result<f64> {
    let kappa = units::kappa(mu)?;
    let tp = turning_points(coeffs, energy)?;
    if !(xi >= tp.xi_a && xi <= tp.xi_b) {
        return Err(domain(format!(
            "xi = {xi} lies outside the classical region [{}, {}]",
            tp.xi_a, tp.xi_b
        )));
    }
    // factored so both turning points give exactly zero
    Ok((coeffs.r * (xi - tp.xi_a) * (tp.xi_b - xi) / kappa).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ActionIntegral {
    pub value: f64,
    pub energy: f64,
    pub quadrature_error_estimate: f64,
}

fn classical_region(
    params: &MoleculeParams,
    l: u32,
    energy: f64,
) -> Result<(EffectiveCoefficients, TurningPoints, f64)> {
    let sh = shape(params)?;
    let kappa = params.kappa()?;
    let coeffs = pqr_with_kappa(&sh, l, kappa);
    let tp = turning_points(&coeffs, energy)?;
    if !(tp.xi_a > 0.0) {
        return Err(domain(format!(
            "classical region at E = {energy} eV extends to infinite r"
        )));
    }
    Ok((coeffs, tp, kappa))
}

/// `I(xi_a, xi_b)` by quadrature after `xi = c + h sin(theta)`, which turns
/// the square-root endpoints into a smooth `h^2 cos^2(theta)`.
pub fn master_integral_numeric(xi_a: f64, xi_b: f64) -> (f64, f64) {
    let c = 0.5 * (xi_a + xi_b);
    let h = 0.5 * (xi_b - xi_a);
    let q = integrate_adaptive(
        |theta: f64| {
            let cos = theta.cos();
            let xi = c + h * theta.sin();
            h * h * cos * cos / (xi * (1.0 + xi))
        },
        -FRAC_PI_2,
        FRAC_PI_2,
        QUADRATURE_TOL,
    );
    (q.value, q.error_estimate)
}

/// Closed form of `I(xi_a, xi_b)` for `0 <= xi_a <= xi_b`.
pub fn master_integral_closed(xi_a: f64, xi_b: f64) -> f64 {
    let sum = xi_a + xi_b + xi_a * xi_b;
    // sqrt((1+xa)(1+xb)) - 1 without the cancellation
    let root_minus_one = sum / ((1.0 + sum).sqrt() + 1.0);
    PI * (root_minus_one - (xi_a * xi_b).sqrt())
}

pub fn action_integral_numeric(params: &MoleculeParams, l: u32, energy: f64) -> Result<ActionIntegral> {
    let (coeffs, tp, kappa) = classical_region(params, l, energy)?;
    let prefactor = (coeffs.r / kappa).sqrt() / params.a;
    let (value, err) = master_integral_numeric(tp.xi_a, tp.xi_b);
    Ok(ActionIntegral {
        value: prefactor * value,
        energy,
        quadrature_error_estimate: prefactor * err,
    })
}

pub fn action_integral_analytic(params: &MoleculeParams, l: u32, energy: f64) -> Result<f64> {
    let (coeffs, tp, kappa) = classical_region(params, l, energy)?;
    Ok((coeffs.r / kappa).sqrt() / params.a * master_integral_closed(tp.xi_a, tp.xi_b))
}

/// Ground-state logarithmic derivative `phi_0 = A + B xi` (per unit `r`).
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RiccatiGround {
    /// Constant term, negative: `-sqrt((P - E_0)/kappa)`.
    pub coef_a: f64,
    /// Linear term `a/2 + sqrt(a^2/4 + R/kappa)`.
    pub coef_b: f64,
    pub energy: f64,
    pub range_a: f64,
    pub kappa: f64,
    pub p: f64,
    pub q: f64,
    pub r: f64,
}

impl RiccatiGround {
    /// The terms of `phi' = -k^2 - phi^2` at `xi`, with `phi' = -a xi (1+xi) B`.
    fn terms(&self, xi: f64) -> [f64; 3] {
        let lhs = -self.range_a * xi * (1.0 + xi) * self.coef_b;
        let k2 = (self.energy - self.p - self.q * xi - self.r * xi * xi) / self.kappa;
        let phi = self.coef_a + self.coef_b * xi;
        [lhs, -k2, -phi * phi]
    }

    /// Residual of the Riccati equation divided by its largest term.
    pub fn relative_residual(&self, xi: f64) -> f64 {
        let [lhs, a, b] = self.terms(xi);
        let scale = lhs.abs().max(a.abs()).max(b.abs());
        (lhs - a - b).abs() / scale
    }

    /// Largest relative residual on `points` interior points of the
    /// classical region at the ground-state energy.
    pub fn max_relative_residual(&self, points: usize) -> Result<f64> {
        let coeffs = EffectiveCoefficients {
            p: self.p,
            q: self.q,
            r: self.r,
            c0: crate::potential::C0,
        };
        let tp = turning_points(&coeffs, self.energy)?;
        let width = tp.xi_b - tp.xi_a;
        Ok((0..points)
            .map(|i| tp.xi_a + width * (i as f64 + 0.5) / points as f64)
            .map(|xi| self.relative_residual(xi))
            .fold(0.0, f64::max))
    }

    /// Relative mismatch of the `xi^0`, `xi^1`, `xi^2` coefficient equations
    /// `A^2 = (P-E)/kappa`, `2AB - aB = Q/kappa`, `B^2 - aB = R/kappa`.
    pub fn coefficient_residuals(&self) -> [f64; 3] {
        let (a, b, k) = (self.coef_a, self.coef_b, self.kappa);
        let rel = |lhs: f64, rhs: f64| (lhs - rhs).abs() / lhs.abs().max(rhs.abs());
        [
            rel(a * a, (self.p - self.energy) / k),
            rel(2.0 * a * b - self.range_a * b, self.q / k),
            rel(b * b - self.range_a * b, self.r / k),
        ]
    }
}

pub fn riccati_ground(params: &MoleculeParams, l: u32) -> Result<RiccatiGround> {
    let e0 = energy(params, QuantumState::new(0, l))?;
    let sh = shape(params)?;
    let kappa = params.kappa()?;
    let c = pqr_with_kappa(&sh, l, kappa);
    let a = params.a;
    Ok(RiccatiGround {
        coef_a: -((c.p - e0) / kappa).sqrt(),
        coef_b: 0.5 * a + (0.25 * a * a + c.r / kappa).sqrt(),
        energy: e0,
        range_a: a,
        kappa,
        p: c.p,
        q: c.q,
        r: c.r,
    })
}

/// Closed-form ground-state action `(pi/a)(B - sqrt(R/kappa))`.
pub fn ground_action(params: &MoleculeParams, l: u32) -> Result<f64> {
    let g = riccati_ground(params, l)?;
    Ok(PI / g.range_a * (g.coef_b - (g.r / g.kappa).sqrt()))
}

/// `J(E_n) - J(E_0) - n pi`, signed.
pub fn proper_rule_residual(params: &MoleculeParams, n: u32, l: u32) -> Result<f64> {
    let e_n = energy(params, QuantumState::new(n, l))?;
    let e_0 = energy(params, QuantumState::new(0, l))?;
    let j_n = action_integral_numeric(params, l, e_n)?;
    let j_0 = action_integral_numeric(params, l, e_0)?;
    Ok(j_n.value - j_0.value - f64::from(n) * PI)
}

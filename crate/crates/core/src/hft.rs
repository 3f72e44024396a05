//! Expectation values from the Hellmann-Feynman theorem, and a numerical
//! check of them by differentiating the energy formula.
//!
//! The Hamiltonian depends on three parameters with simple derivatives:
//! `dH/dD = V/D`, `dH/dmu = -T/mu` and `dH/dl = kappa (2l+1)/r^2`. So
//!
//! ```text
//! <V>     = D dE/dD          = -2 k D omega Omega
//! <T>     = -mu dE/dmu       = E - <V>
//! <r^-2>  = (dE/dl)/(kappa (2l+1)) = a^2 (C0 - 2 omega chi/(1+2l))
//! ```
//!
//! `<T>` is taken as `E - <V>`; a closed form built from the kinetic term
//! directly comes out with the wrong sign.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::molecule::MoleculeParams;
use crate::potential::C0;
use crate::spectrum::{bound_intermediates, energy_continuous, QuantumState, StateReport};
use crate::units::{self, C_SI};

pub fn expect_r2(params: &MoleculeParams, state: QuantumState) -> Result<f64> {
    let it = bound_intermediates(params, state)?;
    let l = f64::from(state.l);
    Ok(params.a * params.a * (C0 - 2.0 * it.omega * it.chi / (1.0 + 2.0 * l)))
}

pub fn expect_potential(params: &MoleculeParams, state: QuantumState) -> Result<f64> {
    let it = bound_intermediates(params, state)?;
    Ok(-2.0 * it.energy_scale * params.depth * it.omega * it.big_omega)
}

pub fn expect_kinetic(params: &MoleculeParams, state: QuantumState) -> Result<f64> {
    let it = bound_intermediates(params, state)?;
    let v = -2.0 * it.energy_scale * params.depth * it.omega * it.big_omega;
    Ok(it.energy() - v)
}

/// `<p^2>` in two scales.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MomentumSquared {
    /// `2 mu c^2 <T>` in (eV/c)^2.
    pub natural: f64,
    /// `natural / (3e8)^2`, the scale of the reference tables.
    pub paper_scale: f64,
}

impl MomentumSquared {
    pub fn from_kinetic(mu: f64, kinetic: f64) -> Result<Self> {
        let natural = 2.0 * units::amu_to_evc2(mu)? * kinetic;
        Ok(Self {
            natural,
            paper_scale: natural / (C_SI * C_SI),
        })
    }
}

pub fn expect_p2(params: &MoleculeParams, state: QuantumState) -> Result<MomentumSquared> {
    MomentumSquared::from_kinetic(params.mu, expect_kinetic(params, state)?)
}

/// All observables of one bound state.
pub fn state_report(params: &MoleculeParams, state: QuantumState) -> Result<StateReport> {
    let it = bound_intermediates(params, state)?;
    let l = f64::from(state.l);
    let energy = it.energy();
    let potential = -2.0 * it.energy_scale * params.depth * it.omega * it.big_omega;
    let kinetic = energy - potential;
    let p2 = MomentumSquared::from_kinetic(params.mu, kinetic)?;
    Ok(StateReport {
        molecule: params.name.clone(),
        n: state.n,
        l: state.l,
        r2: params.a * params.a * (C0 - 2.0 * it.omega * it.chi / (1.0 + 2.0 * l)),
        potential,
        kinetic,
        energy,
        p2_paper: p2.paper_scale,
        p2_natural: p2.natural,
    })
}

/// Step sizes for the finite-difference check.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepPolicy {
    /// Relative step in `D`.
    pub rel_depth: f64,
    /// Relative step in `mu`.
    pub rel_mu: f64,
    /// Absolute step in continuous `l`.
    pub abs_l: f64,
    /// Combine the step with its half: `(4 D(h/2) - D(h))/3`.
    pub richardson: bool,
}

impl Default for StepPolicy {
    /// At much smaller steps the `l` derivative of heavy molecules drowns in
    /// roundoff (`dE/dl` is ~1e-5 eV for I2).
    fn default() -> Self {
        Self {
            rel_depth: 1e-3,
            rel_mu: 1e-3,
            abs_l: 1e-3,
            richardson: true,
        }
    }
}

impl StepPolicy {
    pub fn plain(rel_depth: f64, rel_mu: f64, abs_l: f64) -> Self {
        Self {
            rel_depth,
            rel_mu,
            abs_l,
            richardson: false,
        }
    }

    fn halved(&self) -> Self {
        Self {
            rel_depth: 0.5 * self.rel_depth,
            rel_mu: 0.5 * self.rel_mu,
            abs_l: 0.5 * self.abs_l,
            richardson: self.richardson,
        }
    }
}

/// Relative residuals of the three Hellmann-Feynman identities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HftResiduals {
    pub res_v: f64,
    pub res_t: f64,
    pub res_r2: f64,
}

impl HftResiduals {
    pub fn max(&self) -> f64 {
        self.res_v.max(self.res_t).max(self.res_r2)
    }
}

fn step_error(what: &str, err: Error) -> Error {
    match err {
        Error::NotBound { .. } => Error::StepTooLarge(format!(
            "perturbing {what} leaves the state unbound; use a smaller step"
        )),
        other => other,
    }
}

struct Derivatives {
    depth: f64,
    mu: f64,
    l: f64,
}

fn central(f: impl Fn(f64) -> Result<f64>, x: f64, h: f64) -> Result<f64> {
    Ok((f(x + h)? - f(x - h)?) / (2.0 * h))
}

fn plain_derivatives(params: &MoleculeParams, state: QuantumState, policy: &StepPolicy) -> Result<Derivatives> {
    let l = f64::from(state.l);
    let n = state.n;
    let depth = central(
        |d| energy_continuous(&params.with_depth(d), n, l),
        params.depth,
        policy.rel_depth * params.depth,
    )
    .map_err(|e| step_error("D", e))?;
    let mu = central(
        |m| energy_continuous(&params.with_mu(m), n, l),
        params.mu,
        policy.rel_mu * params.mu,
    )
    .map_err(|e| step_error("mu", e))?;
    let dl = central(|x| energy_continuous(params, n, x), l, policy.abs_l).map_err(|e| step_error("l", e))?;
    Ok(Derivatives { depth, mu, l: dl })
}

fn derivatives(params: &MoleculeParams, state: QuantumState, policy: &StepPolicy) -> Result<Derivatives> {
    let coarse = plain_derivatives(params, state, policy)?;
    if !policy.richardson {
        return Ok(coarse);
    }
    let fine = plain_derivatives(params, state, &policy.halved())?;
    let extrapolate = |c: f64, f: f64| (4.0 * f - c) / 3.0;
    Ok(Derivatives {
        depth: extrapolate(coarse.depth, fine.depth),
        mu: extrapolate(coarse.mu, fine.mu),
        l: extrapolate(coarse.l, fine.l),
    })
}

/// Compares the closed-form expectation values with numerical derivatives
/// of the energy in `D`, `mu` and continuous `l`.
pub fn hft_fd_check(params: &MoleculeParams, state: QuantumState, policy: &StepPolicy) -> Result<HftResiduals> {
    let report = state_report(params, state)?;
    let d = derivatives(params, state, policy)?;
    let kappa = params.kappa()?;
    let l = f64::from(state.l);

    let v_fd = params.depth * d.depth;
    let t_fd = -params.mu * d.mu;
    let r2_fd = d.l / (kappa * (2.0 * l + 1.0));
    Ok(HftResiduals {
        res_v: ((v_fd - report.potential) / report.potential).abs(),
        res_t: ((t_fd - report.kinetic) / report.kinetic).abs(),
        res_r2: ((r2_fd - report.r2) / report.r2).abs(),
    })
}

/// Log-log slopes of residual against step, one per parameter.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ConvergenceSlopes {
    pub depth: f64,
    pub mu: f64,
    pub l: f64,
}

/// Least-squares slope of `ln residual` against `ln step` over `halvings+1`
/// plain central differences starting from `start`.
///
/// The default ladder (10% in `D` and `mu`, 4 in `l`) keeps the truncation
/// error well above roundoff for every built-in molecule.
pub fn convergence_slopes(
    params: &MoleculeParams,
    state: QuantumState,
    start: &StepPolicy,
    halvings: u32,
) -> Result<ConvergenceSlopes> {
    let mut steps = Vec::new();
    let mut res = Vec::new();
    let mut policy = StepPolicy {
        richardson: false,
        ..*start
    };
    for _ in 0..=halvings {
        let r = hft_fd_check(params, state, &policy)?;
        steps.push(policy.abs_l);
        res.push(r);
        policy = policy.halved();
    }
    let slope = |pick: fn(&HftResiduals) -> f64| {
        let pts: Vec<(f64, f64)> = steps.iter().zip(&res).map(|(h, r)| (h.ln(), pick(r).ln())).collect();
        log_log_slope(&pts)
    };
    Ok(ConvergenceSlopes {
        depth: slope(|r| r.res_v),
        mu: slope(|r| r.res_t),
        l: slope(|r| r.res_r2),
    })
}

pub fn default_slope_ladder() -> StepPolicy {
    StepPolicy::plain(0.1, 0.1, 4.0)
}

fn log_log_slope(pts: &[(f64, f64)]) -> f64 {
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx) * (p.0 - mx)).sum();
    sxy / sxx
}

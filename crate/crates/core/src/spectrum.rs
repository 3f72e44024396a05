//! Closed-form bound-state energies and the dimensionless intermediates the
//! expectation values are built from.
//!
//! With `kappa = hbar^2/2mu` and `k = kappa a^2`:
//!
//! ```text
//! s      = 4 D b^2 / k          Lambda = sqrt((1+2l)^2 + s)
//! eta    = (1 + Lambda)/2       g      = b (2+b) D / k
//! omega  = (g - (n+eta)^2) / (2 (n+eta))
//! E      = k (C0 l(l+1) - omega^2)
//! ```
//!
//! `lambda`, `chi` are `d eta/dl` and `d omega/dl`; `zeta`, `big_omega` are
//! `d eta/dD` and `d omega/dD`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::molecule::MoleculeParams;
use crate::potential::{shape, C0};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct QuantumState {
    pub n: u32,
    pub l: u32,
}

impl QuantumState {
    pub fn new(n: u32, l: u32) -> Self {
        Self { n, l }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralIntermediates {
    pub b: f64,
    pub s: f64,
    pub big_lambda: f64,
    pub eta: f64,
    pub g: f64,
    pub omega: f64,
    pub lambda: f64,
    pub chi: f64,
    pub zeta: f64,
    pub big_omega: f64,
    /// `kappa a^2`, the energy scale in eV.
    pub energy_scale: f64,
    /// `n` and `l` as evaluated (`l` may be non-integer internally).
    pub n: f64,
    pub l: f64,
}

impl SpectralIntermediates {
    pub fn is_bound(&self) -> bool {
        self.omega > 0.0 && self.energy() < 0.0
    }

    pub fn energy(&self) -> f64 {
        self.energy_scale * (C0 * self.l * (self.l + 1.0) - self.omega * self.omega)
    }
}

/// Intermediates with `l` treated as a real parameter.
pub fn intermediates_continuous(params: &MoleculeParams, n: u32, l: f64) -> Result<SpectralIntermediates> {
    let sh = shape(params)?;
    let kappa = params.kappa()?;
    let b = sh.b;
    let d = params.depth;
    let k = kappa * params.a * params.a;
    let n = f64::from(n);

    let two_l1 = 1.0 + 2.0 * l;
    let s = 4.0 * d * b * b / k;
    let big_lambda = (two_l1 * two_l1 + s).sqrt();
    let eta = 0.5 * (1.0 + big_lambda);
    let g = b * (2.0 + b) * d / k;
    let m = n + eta;

    // g - m^2 with the b^2 D/k parts of g and eta^2 cancelled analytically;
    // the direct difference loses several digits for heavy molecules.
    let numerator = 2.0 * b * d / k - 0.25 * (two_l1 * two_l1 + 1.0 + 2.0 * big_lambda) - n * (2.0 * eta + n);
    let omega = numerator / (2.0 * m);

    let m2 = m * m;
    let lambda = two_l1 / big_lambda;
    let chi = -lambda * (g + m2) / (2.0 * m2);
    let zeta = s / (4.0 * d * big_lambda);
    let big_omega = (2.0 * (g / d) * (m - d * zeta) - 2.0 * zeta * m2) / (4.0 * m2);

    Ok(SpectralIntermediates {
        b,
        s,
        big_lambda,
        eta,
        g,
        omega,
        lambda,
        chi,
        zeta,
        big_omega,
        energy_scale: k,
        n,
        l,
    })
}

/// Intermediates exist for any state, bound or not.
pub fn intermediates(params: &MoleculeParams, state: QuantumState) -> Result<SpectralIntermediates> {
    intermediates_continuous(params, state.n, f64::from(state.l))
}

/// Intermediates of a bound state; `NotBound` otherwise.
pub fn bound_intermediates(params: &MoleculeParams, state: QuantumState) -> Result<SpectralIntermediates> {
    let it = intermediates(params, state)?;
    if it.is_bound() {
        Ok(it)
    } else {
        Err(Error::NotBound {
            n: state.n,
            l: state.l,
            n_max: n_max(params, state.l)?,
        })
    }
}

pub fn energy(params: &MoleculeParams, state: QuantumState) -> Result<f64> {
    Ok(bound_intermediates(params, state)?.energy())
}

/// Energy at real-valued `l`. Errors if the state is not bound there.
pub fn energy_continuous(params: &MoleculeParams, n: u32, l: f64) -> Result<f64> {
    let it = intermediates_continuous(params, n, l)?;
    if it.is_bound() {
        Ok(it.energy())
    } else {
        Err(Error::NotBound {
            n,
            l: l.max(0.0).round() as u32,
            n_max: None,
        })
    }
}

/// Largest `n` with `omega > 0` and `E < 0` at this `l`, or `None` if the
/// well holds no level. Both conditions are monotone in `n`.
///
/// At `l = 0` this is `floor(sqrt(g) - eta)`. For `l > 0` the `omega > 0`
/// bound alone admits one or two levels with `0 < E < P`, which are not
/// bound, so the energy condition closes the window instead.
pub fn n_max(params: &MoleculeParams, l: u32) -> Result<Option<u32>> {
    let bound = |n: u32| intermediates(params, QuantumState::new(n, l)).map(|it| it.is_bound());
    let base = intermediates(params, QuantumState::new(0, l))?;
    if !base.is_bound() {
        return Ok(None);
    }
    let guess = (base.g.sqrt() - base.eta).floor();
    let mut n = if guess.is_finite() && guess >= 0.0 {
        guess.min(f64::from(u32::MAX - 1)) as u32
    } else {
        0
    };
    while n > 0 && !bound(n)? {
        n -= 1;
    }
    while bound(n + 1)? {
        n += 1;
    }
    Ok(Some(n))
}

/// One row of observables for a bound state.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateReport {
    pub molecule: String,
    pub n: u32,
    pub l: u32,
    #[serde(rename = "r2_invA2")]
    pub r2: f64,
    #[serde(rename = "V_eV")]
    pub potential: f64,
    #[serde(rename = "T_eV")]
    pub kinetic: f64,
    #[serde(rename = "E_eV")]
    pub energy: f64,
    pub p2_paper: f64,
    #[serde(rename = "p2_natural_eVc2")]
    pub p2_natural: f64,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::builtin_registry;
    use approx::assert_relative_eq;

    fn mol(name: &str) -> MoleculeParams {
        builtin_registry().get(name).unwrap().clone()
    }

    #[test]
    fn table_anchors() {
        let cases = [
            ("ScH", 0, 0, -2.145149306),
            ("CO", 1, 5, -10.78600845),
            ("I2", 3, 0, -1.462957037),
        ];
        for (name, n, l, expected) in cases {
            let e = energy(&mol(name), QuantumState::new(n, l)).unwrap();
            assert!((e - expected).abs() <= 1e-6, "{name} ({n},{l}): {e}");
        }
    }

    #[test]
    fn sch_ground_intermediates() {
        let it = intermediates(&mol("ScH"), QuantumState::new(0, 0)).unwrap();
        assert_relative_eq!(it.eta, 260.42, max_relative = 1e-3);
        assert_relative_eq!(it.g, 7.956e4, max_relative = 1e-3);
        assert_relative_eq!(it.omega, 22.54, max_relative = 1e-3);
        assert!(it.big_lambda >= 1.0 && it.eta >= 1.0);
        assert!(it.lambda > 0.0 && it.lambda <= 1.0);
        assert!(it.chi < 0.0);
    }

    #[test]
    fn stable_numerator_matches_direct_form() {
        for m in &builtin_registry() {
            for l in 0..=5 {
                for n in 0..=3 {
                    let it = intermediates(m, QuantumState::new(n, l)).unwrap();
                    let mm = it.n + it.eta;
                    let direct = (it.g - mm * mm) / (2.0 * mm);
                    assert_relative_eq!(it.omega, direct, max_relative = 1e-10);
                }
            }
        }
    }

    #[test]
    fn vanishing_depth_limit() {
        let m = MoleculeParams::new("X", 1e-300, 1.0, 1.0, 1.0).unwrap();
        for l in 0..4 {
            let it = intermediates(&m, QuantumState::new(0, l)).unwrap();
            assert_eq!(it.lambda, 1.0);
            assert_eq!(it.big_lambda, 1.0 + 2.0 * f64::from(l));
        }
    }

    #[test]
    fn eta_and_lambda_grow_with_l() {
        let m = mol("HCl");
        let mut prev = intermediates(&m, QuantumState::new(0, 0)).unwrap();
        for l in 1..10 {
            let it = intermediates(&m, QuantumState::new(0, l)).unwrap();
            assert!(it.eta > prev.eta);
            // (1+2l)/sqrt((1+2l)^2 + s) rises towards 1
            assert!(it.lambda > prev.lambda && it.lambda < 1.0);
            prev = it;
        }
    }

    #[test]
    fn derivatives_match_finite_differences() {
        let m = mol("ScH");
        let it = intermediates(&m, QuantumState::new(2, 3)).unwrap();
        let h = 1e-4;
        let up = intermediates_continuous(&m, 2, 3.0 + h).unwrap();
        let dn = intermediates_continuous(&m, 2, 3.0 - h).unwrap();
        assert_relative_eq!((up.eta - dn.eta) / (2.0 * h), it.lambda, max_relative = 1e-7);
        assert_relative_eq!((up.omega - dn.omega) / (2.0 * h), it.chi, max_relative = 1e-7);

        let hd = 1e-6 * m.depth;
        let up = intermediates(&m.with_depth(m.depth + hd), QuantumState::new(2, 3)).unwrap();
        let dn = intermediates(&m.with_depth(m.depth - hd), QuantumState::new(2, 3)).unwrap();
        assert_relative_eq!((up.eta - dn.eta) / (2.0 * hd), it.zeta, max_relative = 1e-6);
        assert_relative_eq!((up.omega - dn.omega) / (2.0 * hd), it.big_omega, max_relative = 1e-6);
    }

    #[test]
    fn sch_window_at_l_zero() {
        assert_eq!(n_max(&mol("ScH"), 0).unwrap(), Some(21));
        let it = intermediates(&mol("ScH"), QuantumState::new(0, 0)).unwrap();
        assert_eq!((it.g.sqrt() - it.eta).floor(), 21.0);
    }

    #[test]
    fn window_matches_brute_force_scan() {
        for m in &builtin_registry() {
            for l in [0, 2, 7] {
                let nm = n_max(m, l).unwrap().unwrap();
                let scan = (0..2000)
                    .take_while(|&n| intermediates(m, QuantumState::new(n, l)).unwrap().is_bound())
                    .last()
                    .unwrap();
                assert_eq!(nm, scan, "{} l={l}", m.name);
            }
        }
    }

    #[test]
    fn no_bound_states() {
        let m = MoleculeParams::new("Shallow", 1e-4, 1.0, 1.0, 0.5).unwrap();
        assert_eq!(n_max(&m, 0).unwrap(), None);
        assert!(matches!(
            energy(&m, QuantumState::new(0, 0)),
            Err(Error::NotBound { n_max: None, .. })
        ));
    }

    #[test]
    fn beyond_window_errors() {
        let m = mol("ScH");
        assert!(energy(&m, QuantumState::new(21, 0)).is_ok());
        match energy(&m, QuantumState::new(22, 0)) {
            Err(Error::NotBound { n_max, .. }) => assert_eq!(n_max, Some(21)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn window_non_increasing_in_l() {
        for m in &builtin_registry() {
            let mut prev = n_max(m, 0).unwrap();
            for l in 1..=10 {
                let cur = n_max(m, l).unwrap();
                assert!(cur <= prev, "{} l={l}", m.name);
                prev = cur;
            }
        }
    }

    #[test]
    fn energies_bounded_and_monotone() {
        for m in &builtin_registry() {
            for l in 0..=10 {
                let top = n_max(m, l).unwrap().unwrap();
                let mut prev = f64::NEG_INFINITY;
                for n in 0..=top {
                    let e = energy(m, QuantumState::new(n, l)).unwrap();
                    assert!(e > -m.depth && e < 0.0, "{} ({n},{l}) {e}", m.name);
                    assert!(e > prev);
                    prev = e;
                }
            }
            for n in 0..=3 {
                for l in 0..5 {
                    let lo = energy(m, QuantumState::new(n, l)).unwrap();
                    let hi = energy(m, QuantumState::new(n, l + 1)).unwrap();
                    assert!(hi > lo);
                }
            }
        }
    }

    #[test]
    fn continuous_l_agrees_at_integers() {
        let m = mol("TiH");
        for l in 0..6 {
            let a = energy(&m, QuantumState::new(1, l)).unwrap();
            let b = energy_continuous(&m, 1, f64::from(l)).unwrap();
            assert_eq!(a, b);
        }
    }

    #[test]
    fn second_order_convergence_in_l() {
        let m = mol("CO");
        let exact = {
            let it = intermediates(&m, QuantumState::new(1, 2)).unwrap();
            it.energy_scale * (C0 * 5.0 - 2.0 * it.omega * it.chi)
        };
        let err = |h: f64| {
            let d =
                (energy_continuous(&m, 1, 2.0 + h).unwrap() - energy_continuous(&m, 1, 2.0 - h).unwrap()) / (2.0 * h);
            (d - exact).abs()
        };
        let ratio = err(0.4) / err(0.2);
        assert!((ratio - 4.0).abs() < 0.3, "{ratio}");
    }
}

//! Physical constants and the two conversions everything else goes through.
//!
//! The constants are the rounded values the reference tables were computed
//! with, not CODATA: reproducing those tables to ten digits depends on them.

use crate::error::{domain, Result};

/// ħc in eV·Å.
pub const HBAR_C: f64 = 1973.29;
/// Rest energy of one atomic mass unit, in eV.
pub const AMU_EV: f64 = 931.494028e6;
/// Speed of light in m/s, used only for the tabulated `<p^2>` scale.
pub const C_SI: f64 = 3.0e8;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    pub hbar_c: f64,
    pub amu_to_ev: f64,
    pub c_si: f64,
}

pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar_c: HBAR_C,
    amu_to_ev: AMU_EV,
    c_si: C_SI,
};

/// Mass in amu to its rest energy m·c² in eV.
pub fn amu_to_evc2(mass: f64) -> Result<f64> {
    if !(mass >= 0.0) || !mass.is_finite() {
        return Err(domain(format!("mass must be non-negative, got {mass}")));
    }
    Ok(mass * AMU_EV)
}

/// ħ²/2μ in eV·Å² for a reduced mass in amu.
pub fn kappa(mu: f64) -> Result<f64> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(domain(format!("reduced mass must be positive, got {mu}")));
    }
    Ok(HBAR_C * HBAR_C / (2.0 * amu_to_evc2(mu)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use proptest::prelude::*;

    #[test]
    fn one_amu() {
        assert_eq!(amu_to_evc2(1.0).unwrap(), 931_494_028.0);
        assert_eq!(amu_to_evc2(0.0).unwrap(), 0.0);
    }

    #[test]
    fn hydrogen_reduced_mass() {
        let e = amu_to_evc2(0.50391).unwrap();
        assert!((e - 4.69389e8).abs() <= 1e3, "{e}");
    }

    #[test]
    fn negative_mass_rejected() {
        assert!(amu_to_evc2(-1.0).is_err());
        assert!(kappa(0.0).is_err());
        assert!(kappa(-0.5).is_err());
        assert!(kappa(f64::NAN).is_err());
    }

    #[test]
    fn kappa_sch() {
        let k = kappa(0.986040).unwrap();
        assert!((k - 2.11971e-3).abs() <= 1e-8, "{k}");
    }

    #[test]
    fn kappa_decreases_with_mass() {
        let mut prev = f64::INFINITY;
        for mu in [0.1, 1.0, 10.0, 100.0, 1e4, 1e8] {
            let k = kappa(mu).unwrap();
            assert!(k < prev);
            prev = k;
        }
        assert!(prev < 1e-9);
    }

    proptest! {
        #[test]
        fn kappa_is_homogeneous(mu in 1e-3f64..1e4) {
            assert_relative_eq!(kappa(2.0 * mu).unwrap(), kappa(mu).unwrap() / 2.0, max_relative = 1e-15);
        }

        #[test]
        fn kappa_times_rest_energy(mu in 1e-3f64..1e4) {
            let product = kappa(mu).unwrap() * amu_to_evc2(mu).unwrap();
            assert_relative_eq!(product, HBAR_C * HBAR_C / 2.0, max_relative = 1e-15);
        }
    }
}

//! Physical constants and unit conversions.
//!
//! Internally energies are in MeV, lengths in fm and wavenumbers in fm⁻¹.
//! A time computed in natural units carries dimension MeV⁻¹ and becomes
//! seconds after multiplication by ħ (MeV·s). A length L in fm corresponds
//! to the natural time L/ħc, i.e. the light-travel time over L.

use crate::error::{Error, Result};

/// Femtometres per ångström.
pub const FM_PER_ANGSTROM: f64 = 1.0e5;
/// Metres per femtometre.
pub const M_PER_FM: f64 = 1.0e-15;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalConstants {
    /// ħc in MeV·fm.
    pub hbar_c: f64,
    /// ħ in MeV·s.
    pub hbar: f64,
    /// Speed of light in m/s.
    pub c: f64,
    /// Neutron rest energy in MeV.
    pub neutron_rest_energy: f64,
}

const HBAR_C: f64 = 197.326_980_4;
const C_M_PER_S: f64 = 2.997_924_58e8;

/// The single reference table. ħ is derived from ħc and c so that
/// `hbar_c / hbar` is c in fm/s to the last bit.
pub const CONSTANTS: PhysicalConstants = PhysicalConstants {
    hbar_c: HBAR_C,
    hbar: HBAR_C / (C_M_PER_S / M_PER_FM),
    c: C_M_PER_S,
    neutron_rest_energy: 939.565_42,
};

impl Default for PhysicalConstants {
    fn default() -> Self {
        CONSTANTS
    }
}

impl PhysicalConstants {
    /// Speed of light in fm/s.
    pub fn c_fm_per_s(&self) -> f64 {
        self.c / M_PER_FM
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ParticleSpec {
    rest_energy: f64,
    label: String,
}

impl ParticleSpec {
    pub fn new(rest_energy: f64, label: impl Into<String>) -> Result<Self> {
        if !(rest_energy > 0.0 && rest_energy.is_finite()) {
            return Err(Error::Domain(format!(
                "rest energy must be positive and finite, got {rest_energy}"
            )));
        }
        Ok(Self {
            rest_energy,
            label: label.into(),
        })
    }

    pub fn neutron() -> Self {
        Self {
            rest_energy: CONSTANTS.neutron_rest_energy,
            label: "neutron".to_string(),
        }
    }

    /// mc² in MeV.
    pub fn rest_energy(&self) -> f64 {
        self.rest_energy
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    /// Nonrelativistic kinetic energy ½mv² for a speed given in m/s.
    pub fn kinetic_energy_nonrel(&self, speed: f64) -> f64 {
        let beta = speed / CONSTANTS.c;
        0.5 * self.rest_energy * beta * beta
    }

    /// Relativistic kinetic energy (γ−1)mc² for a speed given in m/s.
    pub fn kinetic_energy_rel(&self, speed: f64) -> f64 {
        let beta = speed / CONSTANTS.c;
        let b2 = beta * beta;
        // γ−1 = β²/(√(1−β²)(1+√(1−β²))), no cancellation at small β
        let s = (1.0 - b2).sqrt();
        self.rest_energy * b2 / (s * (1.0 + s))
    }
}

impl Default for ParticleSpec {
    fn default() -> Self {
        Self::neutron()
    }
}

/// Nonrelativistic wavenumber √(2·mc²·E_k)/ħc in fm⁻¹.
pub fn wavenumber_from_kinetic(e_kinetic: f64, rest_energy: f64) -> Result<f64> {
    if !(e_kinetic > 0.0) || !(rest_energy > 0.0) {
        return Err(Error::Domain(format!(
            "wavenumber needs E_k > 0 and mc^2 > 0, got E_k = {e_kinetic}, mc^2 = {rest_energy}"
        )));
    }
    Ok((2.0 * rest_energy * e_kinetic).sqrt() / CONSTANTS.hbar_c)
}

/// Natural time (MeV⁻¹) to seconds.
pub fn time_to_seconds(t_natural: f64) -> f64 {
    t_natural * CONSTANTS.hbar
}

/// Light-travel time over a length in fm, as a natural time in MeV⁻¹.
pub fn length_to_natural_time(length_fm: f64) -> f64 {
    length_fm / CONSTANTS.hbar_c
}

pub fn angstrom_to_fm(a: f64) -> f64 {
    a * FM_PER_ANGSTROM
}

pub fn fm_to_angstrom(fm: f64) -> f64 {
    fm / FM_PER_ANGSTROM
}

pub fn fm_to_m(fm: f64) -> f64 {
    fm * M_PER_FM
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn constants_are_consistent() {
        let k = CONSTANTS;
        assert!(k.hbar_c > 0.0 && k.hbar > 0.0 && k.c > 0.0 && k.neutron_rest_energy > 0.0);
        let rel = (k.hbar_c / k.hbar - k.c_fm_per_s()).abs() / k.c_fm_per_s();
        assert!(rel < 1e-10, "{rel}");
    }

    #[test]
    fn wavenumber_at_tenth_of_c() {
        let mc2 = 939.565;
        let k0 = wavenumber_from_kinetic(4.698, mc2).unwrap();
        // √(2·939.565·4.698)/197.3269804
        let expected = (2.0_f64 * 939.565 * 4.698).sqrt() / 197.326_980_4;
        assert!((k0 - expected).abs() < 1e-15);
        assert!((k0 - 0.4762).abs() < 5e-5, "{k0}");
    }

    #[test]
    fn wavenumber_limits_and_scaling() {
        let tiny = wavenumber_from_kinetic(1e-300, 939.0).unwrap();
        assert!(tiny < 1e-145);
        let a = wavenumber_from_kinetic(3.0, 939.0).unwrap();
        let b = wavenumber_from_kinetic(6.0, 939.0).unwrap();
        assert!((b / a - 2f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn wavenumber_rejects_nonpositive() {
        assert!(matches!(wavenumber_from_kinetic(0.0, 939.0), Err(Error::Domain(_))));
        assert!(matches!(wavenumber_from_kinetic(1.0, -1.0), Err(Error::Domain(_))));
        assert!(wavenumber_from_kinetic(f64::NAN, 1.0).is_err());
    }

    #[test]
    fn time_conversion() {
        assert_eq!(time_to_seconds(0.0), 0.0);
        assert!((time_to_seconds(1.0) - 6.582e-22).abs() < 1e-25);
        let (a, b) = (3.25, -1.5);
        assert!((time_to_seconds(a + b) - time_to_seconds(a) - time_to_seconds(b)).abs() < 1e-36);
    }

    #[test]
    fn kinetic_energy_from_speed() {
        let n = ParticleSpec::neutron();
        let ek = n.kinetic_energy_nonrel(0.1 * CONSTANTS.c);
        assert!((ek - 0.5 * n.rest_energy() * 0.01).abs() < 1e-12);
        // γ − 1 at β = 0.6 is 0.25
        let ek = n.kinetic_energy_rel(0.6 * CONSTANTS.c);
        assert!((ek / n.rest_energy() - 0.25).abs() < 1e-14);
    }

    #[test]
    fn particle_rejects_bad_mass() {
        assert!(ParticleSpec::new(0.0, "x").is_err());
        assert!(ParticleSpec::new(f64::INFINITY, "x").is_err());
        assert_eq!(ParticleSpec::new(1.0, "x").unwrap().label(), "x");
    }

    proptest! {
        #[test]
        fn angstrom_round_trip(a in -1e6f64..1e6) {
            let back = fm_to_angstrom(angstrom_to_fm(a));
            prop_assert!((back - a).abs() <= 1e-12 * a.abs().max(1e-300));
        }

        #[test]
        fn wavenumber_monotone(e in 1e-6f64..1e4, de in 1e-9f64..1.0) {
            let lo = wavenumber_from_kinetic(e, 939.565).unwrap();
            let hi = wavenumber_from_kinetic(e * (1.0 + de), 939.565).unwrap();
            prop_assert!(hi > lo);
        }
    }
}

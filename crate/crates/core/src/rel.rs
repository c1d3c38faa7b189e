//! Dirac–Pauli scattering from a rectangular barrier coupled through β,
//! with a longitudinal field confined to the barrier.
//!
//! Channel 1 couples spinor components (1, 4) and channel 2 couples (2, 3).
//! Inside the barrier the spin-up channel sees E + ε/2 and the spin-down
//! channel E − ε/2 against the shifted mass mc² + V₀. Energies are taken as
//! kinetic E_k = E − mc² to avoid cancellation near threshold.

use num_complex::Complex64;

use crate::barrier::{
    phase_difference, BarrierSpec, ChannelAmplitudes, ChannelResult, Hyper, SlabChannel,
    TimeReport,
};
use crate::error::{Error, Result};
use crate::nonrel::{first_order_vector, orientation_of, scaled_expectation, FirstOrderSpin};
use crate::spinlab::{lorentz_spin_factor, SpinExpectation, SpinVector, Spinor2, Spinor4};
use crate::units::{ParticleSpec, CONSTANTS};

/// Relativistic kinematics. Wavenumbers k/ħ are in fm⁻¹; `xi` is cξ in MeV.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelKinematics {
    pub e_kinetic: f64,
    /// Total energy E = E_k + mc².
    pub energy: f64,
    pub rest_energy: f64,
    pub height: f64,
    pub zeeman: f64,
    pub k0: f64,
    pub k1: f64,
    pub k2: f64,
    /// Zero-field decay wavenumber.
    pub k: f64,
    pub f0: f64,
    pub f1: f64,
    pub f2: f64,
    /// Zero-field inner ratio k/ξ.
    pub f: f64,
    /// cξ = mc² + V₀ + E (MeV).
    pub xi: f64,
    /// Eħω_L/(2c²k) expressed in fm⁻¹.
    pub delta: f64,
}

impl RelKinematics {
    /// ck in MeV for a wavenumber in fm⁻¹.
    pub fn momentum(&self, wavenumber: f64) -> f64 {
        wavenumber * CONSTANTS.hbar_c
    }

    /// mc² + V₀
    pub fn shifted_mass(&self) -> f64 {
        self.rest_energy + self.height
    }

    /// First-order (k₁, k₂).
    pub fn first_order_ks(&self) -> (f64, f64) {
        (self.k - self.delta, self.k + self.delta)
    }

    /// Displacement of f under the field: (ħω_L/2cξ)(k/ξ + E/ck).
    pub fn f_shift(&self) -> f64 {
        0.5 * self.zeeman / self.xi * (self.f + self.energy / self.momentum(self.k))
    }

    /// First-order (f₁, f₂).
    pub fn first_order_fs(&self) -> (f64, f64) {
        let s = self.f_shift();
        (self.f - s, self.f + s)
    }

    /// E − c(ξ² − k²)/(2ξ), relative to E. Zero up to rounding.
    pub fn energy_identity_residual(&self) -> f64 {
        let kp = self.momentum(self.k);
        let rebuilt = (self.xi * self.xi - kp * kp) / (2.0 * self.xi);
        (rebuilt - self.energy).abs() / self.energy
    }

    /// k₂ − k₁ without cancellation.
    pub fn k_split(&self) -> f64 {
        let hc2 = CONSTANTS.hbar_c.powi(2);
        2.0 * self.energy * self.zeeman / hc2 / (self.k1 + self.k2)
    }

    /// f₂ − f₁ without cancellation.
    pub fn f_split(&self) -> f64 {
        let h = 0.5 * self.zeeman;
        let b = self.xi;
        2.0 * self.shifted_mass() * self.zeeman / ((b - h) * (b + h)) / (self.f1 + self.f2)
    }

    /// Incident speed c·√(1 − (mc²/E)²) in m/s.
    pub fn speed(&self) -> f64 {
        CONSTANTS.c * self.momentum(self.k0) / self.energy
    }

    pub(crate) fn channel(&self, k: f64, f: f64, half_width: f64) -> SlabChannel {
        SlabChannel {
            q0: self.f0,
            q: f,
            k,
            k0: self.k0,
            half_width,
            norm: 1.0 + self.f0 * self.f0,
        }
    }
}

/// Kinematics for a total energy E.
pub fn rel_kinematics(
    energy: f64,
    spec: &BarrierSpec,
    particle: &ParticleSpec,
) -> Result<RelKinematics> {
    let mc2 = particle.rest_energy();
    if !(energy > mc2) {
        return Err(Error::NoPropagatingWave {
            energy,
            rest_energy: mc2,
        });
    }
    rel_kinematics_kinetic(energy - mc2, spec, particle)
}

/// Kinematics for a kinetic energy E_k = E − mc².
pub fn rel_kinematics_kinetic(
    e_kinetic: f64,
    spec: &BarrierSpec,
    particle: &ParticleSpec,
) -> Result<RelKinematics> {
    let mc2 = particle.rest_energy();
    if !(e_kinetic > 0.0) || !e_kinetic.is_finite() {
        return Err(Error::NoPropagatingWave {
            energy: e_kinetic + mc2,
            rest_energy: mc2,
        });
    }
    let ceiling = spec.tunneling_ceiling();
    if e_kinetic >= ceiling {
        return Err(Error::AboveBarrier {
            energy: e_kinetic,
            ceiling,
        });
    }
    let hc = CONSTANTS.hbar_c;
    let v0 = spec.height();
    let h = 0.5 * spec.zeeman();
    let energy = mc2 + e_kinetic;
    // (M − E ∓ h) and (M + E ± h) with M = mc² + V₀
    let below = v0 - e_kinetic;
    let above = 2.0 * mc2 + v0 + e_kinetic;
    let wave = |lo: f64, hi: f64| (lo * hi).sqrt() / hc;
    let ratio = |lo: f64, hi: f64| (lo / hi).sqrt();
    let k = wave(below, above);
    Ok(RelKinematics {
        e_kinetic,
        energy,
        rest_energy: mc2,
        height: v0,
        zeeman: spec.zeeman(),
        k0: wave(e_kinetic, e_kinetic + 2.0 * mc2),
        k1: wave(below - h, above + h),
        k2: wave(below + h, above - h),
        k,
        f0: ratio(e_kinetic, e_kinetic + 2.0 * mc2),
        f1: ratio(below - h, above + h),
        f2: ratio(below + h, above - h),
        f: ratio(below, above),
        xi: above,
        delta: energy * spec.zeeman() / (2.0 * hc * hc * k),
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct RelScatteringSolution {
    pub channels: [ChannelResult; 2],
    /// Amplitudes of the upper component of each channel; the lower
    /// components follow from f₀, fᵢ.
    pub amplitudes: [ChannelAmplitudes; 2],
    pub incoming: Spinor4,
    pub incoming_upper: Spinor2,
    pub kinematics: RelKinematics,
    pub half_width: f64,
}

/// Closed-form solution for an incoming coherent spinor `incoming` (the
/// upper pair u₁, u₂ of the normalized Dirac plane wave).
pub fn rel_scatter(kin: &RelKinematics, half_width: f64, incoming: &Spinor2) -> RelScatteringSolution {
    let c1 = kin.channel(kin.k1, kin.f1, half_width);
    let c2 = kin.channel(kin.k2, kin.f2, half_width);
    RelScatteringSolution {
        channels: [c1.result(), c2.result()],
        amplitudes: [c1.amplitudes(incoming.u1), c2.amplitudes(incoming.u2)],
        incoming: Spinor4::dirac_incoming(incoming, kin.f0),
        incoming_upper: *incoming,
        kinematics: *kin,
        half_width,
    }
}

/// Spinor-component index pairs (upper, lower) per channel.
pub const CHANNEL_COMPONENTS: [(usize, usize); 2] = [(0, 3), (1, 2)];

impl RelScatteringSolution {
    pub fn phase_difference(&self) -> f64 {
        let k = &self.kinematics;
        let c1 = k.channel(k.k1, k.f1, self.half_width);
        let c2 = k.channel(k.k2, k.f2, self.half_width);
        phase_difference(&c1, &c2, k.f_split(), k.k_split())
    }

    /// (1+f₀²)|D|², (1+f₀²)|A|² per spin channel.
    pub fn probabilities(&self) -> crate::nonrel::SpinResolvedProbabilities {
        let w = 1.0 + self.kinematics.f0.powi(2);
        let [a1, a2] = &self.amplitudes;
        crate::nonrel::SpinResolvedProbabilities {
            t_up: w * a1.d().norm_sqr(),
            t_down: w * a2.d().norm_sqr(),
            r_up: w * a1.a().norm_sqr(),
            r_down: w * a2.a().norm_sqr(),
        }
    }

    /// The full 4-spinor inside the barrier.
    pub fn interior_spinor(&self, x: f64) -> [Complex64; 4] {
        let k = &self.kinematics;
        let mut psi = [Complex64::new(0.0, 0.0); 4];
        for (ch, (&(up, low), f)) in CHANNEL_COMPONENTS.iter().zip([k.f1, k.f2]).enumerate() {
            let (b, c) = self.amplitudes[ch].interior_terms(x);
            psi[up] = b + c;
            psi[low] = Complex64::new(0.0, -f) * (b - c);
        }
        psi
    }

    pub fn barrier_density(&self, x: f64) -> f64 {
        self.interior_spinor(x).iter().map(|z| z.norm_sqr()).sum()
    }

    /// ψ†cα₁ψ for the incoming wave, in m/s.
    pub fn incident_flux(&self) -> f64 {
        let f0 = self.kinematics.f0;
        CONSTANTS.c * 2.0 * f0 / (1.0 + f0 * f0) * self.incoming_upper.norm_sqr()
    }

    pub fn expansion(&self) -> RelExpansion {
        rel_expansion(&self.kinematics, self.half_width)
    }
}

/// Zero-field probabilities and the first-order shifts along the field
/// displacement (k ∓ δ, f ∓ Δf).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RelExpansion {
    pub zero_field: ChannelResult,
    pub d_t: f64,
    pub d_r: f64,
    pub dln_t: f64,
    pub dln_r: f64,
}

impl RelExpansion {
    pub fn first_order_t(&self) -> (f64, f64) {
        let t = self.zero_field.transmission;
        (t - self.d_t, t + self.d_t)
    }

    pub fn first_order_r(&self) -> (f64, f64) {
        let r = self.zero_field.reflection;
        (r - self.d_r, r + self.d_r)
    }
}

pub fn rel_expansion(kin: &RelKinematics, half_width: f64) -> RelExpansion {
    let c = kin.channel(kin.k, kin.f, half_width);
    let zero = c.result();
    let ld = c.log_derivatives(kin.f_shift(), kin.delta);
    RelExpansion {
        zero_field: zero,
        d_t: zero.transmission * ld.dln_t,
        d_r: zero.reflection * ld.dln_r,
        dln_t: ld.dln_t,
        dln_r: ld.dln_r,
    }
}

#[derive(Debug)]
pub struct RelSpinExpectations {
    pub transmitted: Result<SpinExpectation>,
    pub reflected: Result<SpinExpectation>,
    pub combined: SpinVector,
    pub first_order: FirstOrderSpin,
}

pub fn rel_spin_expectations(sol: &RelScatteringSolution) -> RelSpinExpectations {
    let f0 = sol.kinematics.f0;
    let [a1, a2] = &sol.amplitudes;
    // ψ_t = (D₁, D₂, f₀D₂, f₀D₁), ψ_r = (A₁, A₂, −f₀A₂, −f₀A₁)
    let transmitted = scaled_expectation(
        [
            (a1.transmitted.mantissa, a1.transmitted.ln_scale),
            (a2.transmitted.mantissa, a2.transmitted.ln_scale),
        ],
        Some(f0),
    );
    let reflected = scaled_expectation([(a1.a(), 0.0), (a2.a(), 0.0)], Some(-f0));
    let mut combined = SpinVector::default();
    for e in [&transmitted, &reflected].into_iter().flatten() {
        combined = combined.add(&e.raw());
    }
    let exp = sol.expansion();
    let orient = orientation_of(&sol.incoming_upper);
    let twist = -sol.phase_difference();
    let g = lorentz_spin_factor(f0);
    RelSpinExpectations {
        transmitted,
        reflected,
        combined,
        first_order: FirstOrderSpin {
            transmitted: first_order_vector(orient, twist, exp.dln_t, g),
            reflected: first_order_vector(orient, twist, exp.dln_r, g),
        },
    }
}

/// Shared bracket pieces of the Larmor and dwell expressions.
struct Brackets {
    kp: f64,
    xi: f64,
    f02: f64,
    x: f64,
    h: Hyper,
}

impl Brackets {
    fn new(kin: &RelKinematics, d: f64) -> Self {
        let x = 2.0 * d * kin.k;
        Self {
            kp: kin.momentum(kin.k),
            xi: kin.xi,
            f02: kin.f0 * kin.f0,
            x,
            h: Hyper::new(x),
        }
    }

    /// [4f₀²ξ²k² + (k²+f₀²ξ²)² sinh²]/sinh²
    fn denominator(&self) -> f64 {
        let (k2, xi2) = (self.kp * self.kp, self.xi * self.xi);
        4.0 * self.f02 * xi2 * k2 * self.h.inv_s2 + (k2 + self.f02 * xi2).powi(2)
    }
}

/// τ_L in natural units (MeV⁻¹).
fn larmor_time_natural(kin: &RelKinematics, d: f64) -> f64 {
    let b = Brackets::new(kin, d);
    let (k2, xi2) = (b.kp * b.kp, b.xi * b.xi);
    let e = kin.energy;
    let num = 2.0 * b.x * b.xi * e * (k2 - b.f02 * xi2) * b.h.inv_s2
        + 2.0 * (k2 + e * b.xi) * (k2 + b.f02 * xi2) * b.h.coth;
    kin.f0 / b.kp * num / b.denominator()
}

/// Probability in the barrier (fm) for the normalized incoming Dirac wave.
pub fn rel_barrier_probability(kin: &RelKinematics, d: f64) -> f64 {
    let b = Brackets::new(kin, d);
    let (k2, xi2) = (b.kp * b.kp, b.xi * b.xi);
    let num = -2.0 * b.x * (k2 - xi2) * (k2 - b.f02 * xi2) * b.h.inv_s2
        + 2.0 * (k2 + xi2) * (k2 + b.f02 * xi2) * b.h.coth;
    b.f02 * num / ((1.0 + b.f02) * kin.k * b.denominator())
}

/// Incident Dirac flux 2f₀/(1+f₀²) in units of c.
pub fn rel_incident_flux_over_c(kin: &RelKinematics) -> f64 {
    2.0 * kin.f0 / (1.0 + kin.f0 * kin.f0)
}

/// Opaque limit 2f₀(k²+Eξ)/(k(k²+f₀²ξ²)) of τ_L, in seconds.
pub fn rel_opaque_larmor_time(kin: &RelKinematics) -> f64 {
    let kp = kin.momentum(kin.k);
    let (k2, xi2) = (kp * kp, kin.xi * kin.xi);
    let nat = 2.0 * kin.f0 * (k2 + kin.energy * kin.xi) / (kp * (k2 + kin.f0.powi(2) * xi2));
    crate::units::time_to_seconds(nat)
}

/// Times for a kinetic energy E_k = E − mc².
pub fn rel_times(e_kinetic: f64, spec: &BarrierSpec, particle: &ParticleSpec) -> Result<TimeReport> {
    let kin = rel_kinematics_kinetic(e_kinetic, spec, particle)?;
    Ok(rel_times_from(&kin, spec.half_width()))
}

pub fn rel_times_from(kin: &RelKinematics, d: f64) -> TimeReport {
    let hc = CONSTANTS.hbar_c;
    let tau_l = larmor_time_natural(kin, d);
    let tau_d = rel_barrier_probability(kin, d) / rel_incident_flux_over_c(kin) / hc;
    // 2dE/(c²k₀) = 2d/v
    let tau_l0 = 2.0 * d * kin.energy / (hc * kin.momentum(kin.k0));
    let t = rel_expansion(kin, d).zero_field.log10_transmission;
    TimeReport::from_natural(tau_l, tau_d, tau_l0, 2.0 * d, t)
}

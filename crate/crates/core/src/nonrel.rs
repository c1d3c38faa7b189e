//! Schrödinger–Pauli scattering from a magnetized rectangular barrier.

use num_complex::Complex64;

use crate::barrier::{
    phase_difference, BarrierSpec, ChannelAmplitudes, ChannelResult, Hyper, SlabChannel,
    TimeReport,
};
use crate::error::{Error, Result};
use crate::spinlab::{spin_expectation, SpinExpectation, SpinOrientation, SpinVector, Spinor2};
use crate::units::{ParticleSpec, CONSTANTS};

/// Wavenumbers (fm⁻¹) outside and inside the barrier.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NonrelKinematics {
    pub e_kinetic: f64,
    pub rest_energy: f64,
    pub zeeman: f64,
    /// κ₀ outside the barrier.
    pub kappa0: f64,
    /// Spin-up channel, V₀ − E − ε/2.
    pub kappa1: f64,
    /// Spin-down channel, V₀ − E + ε/2.
    pub kappa2: f64,
    /// Zero-field decay constant.
    pub kappa: f64,
    /// m ω_L / (2ħκ), the first-order splitting.
    pub delta: f64,
}

impl NonrelKinematics {
    /// κ₂ − κ₁ computed without cancellation.
    pub fn kappa_split(&self) -> f64 {
        2.0 * self.rest_energy * self.zeeman / CONSTANTS.hbar_c.powi(2) / (self.kappa1 + self.kappa2)
    }

    /// First-order channel wavenumbers (κ − δ, κ + δ).
    pub fn first_order_kappas(&self) -> (f64, f64) {
        (self.kappa - self.delta, self.kappa + self.delta)
    }

    /// Incident speed ħκ₀/m in m/s.
    pub fn speed(&self) -> f64 {
        CONSTANTS.c * CONSTANTS.hbar_c * self.kappa0 / self.rest_energy
    }

    fn channel(&self, kappa: f64, half_width: f64) -> SlabChannel {
        SlabChannel {
            q0: self.kappa0,
            q: kappa,
            k: kappa,
            k0: self.kappa0,
            half_width,
            norm: 1.0,
        }
    }
}

pub fn kinematics(
    e_kinetic: f64,
    spec: &BarrierSpec,
    particle: &ParticleSpec,
) -> Result<NonrelKinematics> {
    if !(e_kinetic > 0.0) || !e_kinetic.is_finite() {
        return Err(Error::Domain(format!("kinetic energy must be > 0, got {e_kinetic}")));
    }
    let ceiling = spec.tunneling_ceiling();
    if e_kinetic >= ceiling {
        return Err(Error::AboveBarrier {
            energy: e_kinetic,
            ceiling,
        });
    }
    let mc2 = particle.rest_energy();
    let hc = CONSTANTS.hbar_c;
    let wave = |e: f64| (2.0 * mc2 * e).sqrt() / hc;
    let gap = spec.height() - e_kinetic;
    let half = 0.5 * spec.zeeman();
    let kappa = wave(gap);
    Ok(NonrelKinematics {
        e_kinetic,
        rest_energy: mc2,
        zeeman: spec.zeeman(),
        kappa0: wave(e_kinetic),
        kappa1: wave(gap - half),
        kappa2: wave(gap + half),
        kappa,
        delta: mc2 * spec.zeeman() / (2.0 * hc * hc * kappa),
    })
}

/// Exact finite-field solution.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringSolution {
    pub channels: [ChannelResult; 2],
    pub amplitudes: [ChannelAmplitudes; 2],
    pub incoming: Spinor2,
    pub kinematics: NonrelKinematics,
    pub half_width: f64,
}

/// Probabilities weighted by the incoming spinor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinResolvedProbabilities {
    pub t_up: f64,
    pub t_down: f64,
    pub r_up: f64,
    pub r_down: f64,
}

impl SpinResolvedProbabilities {
    pub fn total(&self) -> f64 {
        self.t_up + self.t_down + self.r_up + self.r_down
    }
}

pub fn scatter(kin: &NonrelKinematics, half_width: f64, incoming: &Spinor2) -> ScatteringSolution {
    let c1 = kin.channel(kin.kappa1, half_width);
    let c2 = kin.channel(kin.kappa2, half_width);
    ScatteringSolution {
        channels: [c1.result(), c2.result()],
        amplitudes: [c1.amplitudes(incoming.u1), c2.amplitudes(incoming.u2)],
        incoming: *incoming,
        kinematics: *kin,
        half_width,
    }
}

impl ScatteringSolution {
    /// φ₁ − φ₂ evaluated without subtractive cancellation.
    pub fn phase_difference(&self) -> f64 {
        let k = &self.kinematics;
        let c1 = k.channel(k.kappa1, self.half_width);
        let c2 = k.channel(k.kappa2, self.half_width);
        let split = k.kappa_split();
        phase_difference(&c1, &c2, split, split)
    }

    /// |D|², |A|² per spin channel.
    pub fn probabilities(&self) -> SpinResolvedProbabilities {
        let [a1, a2] = &self.amplitudes;
        SpinResolvedProbabilities {
            t_up: a1.d().norm_sqr(),
            t_down: a2.d().norm_sqr(),
            r_up: a1.a().norm_sqr(),
            r_down: a2.a().norm_sqr(),
        }
    }

    /// ψ†ψ at a point inside the barrier.
    pub fn barrier_density(&self, x: f64) -> f64 {
        self.amplitudes
            .iter()
            .map(|a| {
                let (b, c) = a.interior_terms(x);
                (b + c).norm_sqr()
            })
            .sum()
    }

    /// Incident flux ħκ₀/m|u|² in m/s.
    pub fn incident_flux(&self) -> f64 {
        self.kinematics.speed() * self.incoming.norm_sqr()
    }

    /// T(κ), R(κ) and their first-order shifts at zero field.
    pub fn expansion(&self) -> Expansion {
        expansion(&self.kinematics, self.half_width)
    }
}

/// Zero-field probabilities and first-order field corrections:
/// T₁ ≈ T − dT, T₂ ≈ T + dT with dT = (∂T/∂κ)·δ, likewise for R.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Expansion {
    pub zero_field: ChannelResult,
    pub d_t: f64,
    pub d_r: f64,
    /// dT/T, finite even when T underflows.
    pub dln_t: f64,
    /// dR/R
    pub dln_r: f64,
}

impl Expansion {
    pub fn first_order_t(&self) -> (f64, f64) {
        let t = self.zero_field.transmission;
        (t - self.d_t, t + self.d_t)
    }

    pub fn first_order_r(&self) -> (f64, f64) {
        let r = self.zero_field.reflection;
        (r - self.d_r, r + self.d_r)
    }
}

pub fn expansion(kin: &NonrelKinematics, half_width: f64) -> Expansion {
    let c = kin.channel(kin.kappa, half_width);
    let zero = c.result();
    let ld = c.log_derivatives(kin.delta, kin.delta);
    Expansion {
        zero_field: zero,
        d_t: zero.transmission * ld.dln_t,
        d_r: zero.reflection * ld.dln_r,
        dln_t: ld.dln_t,
        dln_r: ld.dln_r,
    }
}

/// Analytic ∂T/∂κ and ∂R/∂κ of the single-channel transmission at κ.
pub fn transmission_slope(kappa0: f64, kappa: f64, half_width: f64) -> (f64, f64) {
    let c = SlabChannel {
        q0: kappa0,
        q: kappa,
        k: kappa,
        k0: kappa0,
        half_width,
        norm: 1.0,
    };
    let (t, r, _) = c.probabilities();
    let ld = c.log_derivatives(1.0, 1.0);
    (t * ld.dln_t, r * ld.dln_r)
}

/// Single-channel transmission T(κ) at fixed κ₀.
pub fn transmission_at(kappa0: f64, kappa: f64, half_width: f64) -> f64 {
    SlabChannel {
        q0: kappa0,
        q: kappa,
        k: kappa,
        k0: kappa0,
        half_width,
        norm: 1.0,
    }
    .probabilities()
    .0
}

/// First-order spin expectations (transmitted, reflected) from the
/// infinitesimal-field expansion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FirstOrderSpin {
    pub transmitted: SpinVector,
    pub reflected: SpinVector,
}

#[derive(Debug)]
pub struct SpinExpectations {
    pub transmitted: Result<SpinExpectation>,
    pub reflected: Result<SpinExpectation>,
    /// ⟨ψ_t|S|ψ_t⟩ + ⟨ψ_r|S|ψ_r⟩
    pub combined: SpinVector,
    pub first_order: FirstOrderSpin,
}

/// Expectation over a 2-spinor whose components carry separate log scales.
pub(crate) fn scaled_expectation(
    parts: [(Complex64, f64); 2],
    lower_factor: Option<f64>,
) -> Result<SpinExpectation> {
    let top = parts[0].1.max(parts[1].1);
    let p = [
        parts[0].0 * (parts[0].1 - top).exp(),
        parts[1].0 * (parts[1].1 - top).exp(),
    ];
    let mut e = match lower_factor {
        None => spin_expectation(p, None)?,
        Some(f) => spin_expectation(p, Some([p[1] * f, p[0] * f]))?,
    };
    e.weight *= (2.0 * top).exp();
    Ok(e)
}

pub(crate) fn first_order_vector(
    orient: SpinOrientation,
    twist: f64,
    dln: f64,
    lorentz: f64,
) -> SpinVector {
    let (st, ct) = orient.theta().sin_cos();
    let (s, c) = (twist + orient.phi()).sin_cos();
    let den = 1.0 - dln * ct;
    SpinVector::new(
        st * c / den,
        lorentz * st * s / den,
        lorentz * (ct - dln) / den,
    )
}

/// Incoming orientation recovered from the stored coherent spinor.
pub(crate) fn orientation_of(s: &Spinor2) -> SpinOrientation {
    let theta = 2.0 * s.u2.norm().atan2(s.u1.norm());
    let phi = if s.u1.norm() > 0.0 && s.u2.norm() > 0.0 {
        s.u2.arg() - s.u1.arg()
    } else {
        0.0
    };
    SpinOrientation::new(theta, phi)
}

pub fn spin_expectations(sol: &ScatteringSolution) -> SpinExpectations {
    let [a1, a2] = &sol.amplitudes;
    let transmitted = scaled_expectation(
        [
            (a1.transmitted.mantissa, a1.transmitted.ln_scale),
            (a2.transmitted.mantissa, a2.transmitted.ln_scale),
        ],
        None,
    );
    let reflected = spin_expectation([a1.a(), a2.a()], None);
    let mut combined = SpinVector::default();
    for e in [&transmitted, &reflected].into_iter().flatten() {
        combined = combined.add(&e.raw());
    }
    let exp = sol.expansion();
    let orient = orientation_of(&sol.incoming);
    let twist = -sol.phase_difference();
    SpinExpectations {
        transmitted,
        reflected,
        combined,
        first_order: FirstOrderSpin {
            transmitted: first_order_vector(orient, twist, exp.dln_t, 1.0),
            reflected: first_order_vector(orient, twist, exp.dln_r, 1.0),
        },
    }
}

/// (m κ₀/ħκ)·[4dκ(κ²−κ₀²) + (κ²+κ₀²) sinh 4dκ] / [4κ₀²κ² + (κ²+κ₀²)² sinh² 2dκ]
/// in natural units (MeV⁻¹), divided through by sinh² 2dκ.
fn larmor_time_natural(kin: &NonrelKinematics, d: f64) -> f64 {
    let (k0, k) = (kin.kappa0, kin.kappa);
    let x = 2.0 * d * k;
    let h = Hyper::new(x);
    let (k02, k2) = (k0 * k0, k * k);
    let num = 2.0 * x * (k2 - k02) * h.inv_s2 + 2.0 * (k2 + k02) * h.coth;
    let den = 4.0 * k02 * k2 * h.inv_s2 + (k2 + k02).powi(2);
    kin.rest_energy * k0 / (CONSTANTS.hbar_c.powi(2) * k) * num / den
}

/// Probability of finding the particle in the barrier (fm), unit incidence.
pub fn barrier_probability(kin: &NonrelKinematics, d: f64) -> f64 {
    let (k0, k) = (kin.kappa0, kin.kappa);
    let x = 2.0 * d * k;
    let h = Hyper::new(x);
    let (k02, k2) = (k0 * k0, k * k);
    let num = 2.0 * x * (k2 - k02) * h.inv_s2 + 2.0 * (k2 + k02) * h.coth;
    let den = 4.0 * k02 * k2 * h.inv_s2 + (k2 + k02).powi(2);
    k02 / k * num / den
}

/// Incident flux ħκ₀/m as a speed in units of c.
pub fn incident_flux_over_c(kin: &NonrelKinematics) -> f64 {
    CONSTANTS.hbar_c * kin.kappa0 / kin.rest_energy
}

/// Opaque-barrier limit 2mκ₀/(ħκ(κ²+κ₀²)) of the Larmor time, in seconds.
pub fn opaque_larmor_time(kin: &NonrelKinematics) -> f64 {
    let (k0, k) = (kin.kappa0, kin.kappa);
    let nat = 2.0 * kin.rest_energy * k0 / (CONSTANTS.hbar_c.powi(2) * k * (k * k + k0 * k0));
    crate::units::time_to_seconds(nat)
}

pub fn times(e_kinetic: f64, spec: &BarrierSpec, particle: &ParticleSpec) -> Result<TimeReport> {
    let kin = kinematics(e_kinetic, spec, particle)?;
    Ok(times_from(&kin, spec.half_width()))
}

pub fn times_from(kin: &NonrelKinematics, d: f64) -> TimeReport {
    let hc = CONSTANTS.hbar_c;
    let tau_l = larmor_time_natural(kin, d);
    // P_b (fm) / J_i, with J_i = v = c·(ħκ₀/mc); a length over c is L/ħc in MeV⁻¹
    let tau_d = barrier_probability(kin, d) / incident_flux_over_c(kin) / hc;
    let tau_l0 = 2.0 * d / incident_flux_over_c(kin) / hc;
    let t = expansion(kin, d).zero_field.log10_transmission;
    TimeReport::from_natural(tau_l, tau_d, tau_l0, 2.0 * d, t)
}

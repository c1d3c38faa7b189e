//! Barrier geometry and the single-channel slab kernel shared by the
//! Schrödinger–Pauli and Dirac–Pauli solvers.
//!
//! Both regimes reduce, channel by channel, to the same matching problem:
//! an outer ratio `q0` (κ₀ or f₀), an inner ratio `q` (κᵢ or fᵢ), a decay
//! wavenumber K across a slab of width 2d, and a flux normalization
//! (1 nonrelativistically, 1+f₀² for Dirac). Everything here is written in
//! terms of 1/sinh²(2dK) and coth(2dK) so that opaque barriers with
//! 2dK ~ 10⁶ evaluate without overflow.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::units::{self, CONSTANTS};

/// Rectangular barrier on [−d, d] with a longitudinal field confined to it.
///
/// The field points along +z; inside the barrier the spin-up channel is
/// lowered by ε/2 and the spin-down channel raised by ε/2, where ε = ħω_L.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BarrierSpec {
    half_width: f64,
    height: f64,
    zeeman: f64,
}

impl BarrierSpec {
    /// `half_width` in fm, `height` and `zeeman` in MeV.
    pub fn new(half_width: f64, height: f64, zeeman: f64) -> Result<Self> {
        if !(half_width > 0.0 && half_width.is_finite()) {
            return Err(Error::Domain(format!("half-width must be > 0, got {half_width}")));
        }
        if !(height > 0.0 && height.is_finite()) {
            return Err(Error::Domain(format!("barrier height must be > 0, got {height}")));
        }
        if !(zeeman >= 0.0 && zeeman.is_finite()) {
            return Err(Error::Domain(format!("Zeeman splitting must be >= 0, got {zeeman}")));
        }
        Ok(Self {
            half_width,
            height,
            zeeman,
        })
    }

    /// Full width 2d given in ångström.
    pub fn from_full_width_angstrom(width: f64, height: f64, zeeman: f64) -> Result<Self> {
        Self::new(0.5 * units::angstrom_to_fm(width), height, zeeman)
    }

    pub fn with_zeeman(&self, zeeman: f64) -> Result<Self> {
        Self::new(self.half_width, self.height, zeeman)
    }

    /// d in fm.
    pub fn half_width(&self) -> f64 {
        self.half_width
    }

    /// 2d in fm.
    pub fn full_width(&self) -> f64 {
        2.0 * self.half_width
    }

    /// V₀ in MeV.
    pub fn height(&self) -> f64 {
        self.height
    }

    /// ε = ħω_L in MeV.
    pub fn zeeman(&self) -> f64 {
        self.zeeman
    }

    /// ω_L in rad/s.
    pub fn larmor_frequency(&self) -> f64 {
        self.zeeman / CONSTANTS.hbar
    }

    /// Kinetic energies must stay strictly below V₀ − ε/2.
    pub fn tunneling_ceiling(&self) -> f64 {
        self.height - 0.5 * self.zeeman
    }

    /// Default "infinitesimal" splitting ε = 10⁻⁶·(V₀ − E_k).
    pub fn infinitesimal_zeeman(&self, e_kinetic: f64) -> f64 {
        1e-6 * (self.height - e_kinetic)
    }
}

/// Per-channel transmission, reflection and transmission phase.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelResult {
    pub transmission: f64,
    pub reflection: f64,
    /// log₁₀ of the transmission, finite even when the linear value underflows.
    pub log10_transmission: f64,
    /// Principal-value phase in (−π/2, π/2).
    pub phase: f64,
}

/// A complex amplitude `mantissa · e^{ln_scale}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Scaled {
    pub mantissa: Complex64,
    pub ln_scale: f64,
}

impl Scaled {
    pub fn new(mantissa: Complex64, ln_scale: f64) -> Self {
        Self { mantissa, ln_scale }
    }

    /// Plain value; underflows to zero in opaque barriers.
    pub fn value(&self) -> Complex64 {
        self.shifted(0.0)
    }

    /// `mantissa · e^{ln_scale + extra}`
    pub fn shifted(&self, extra: f64) -> Complex64 {
        self.mantissa * (self.ln_scale + extra).exp()
    }

    pub fn ln_norm(&self) -> f64 {
        self.mantissa.norm().ln() + self.ln_scale
    }
}

/// Amplitudes of one channel, using the incoming upper amplitude convention
/// D = √T e^{iφ} e^{−2iK₀d} u.
///
/// The interior amplitudes are stored relative to the interface where each
/// exponential is largest: `growing` holds B·e^{Kd} and `decaying` holds
/// C·e^{−Kd}. All three share one log scale ln √T.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelAmplitudes {
    pub reflected: Complex64,
    pub growing: Scaled,
    pub decaying: Scaled,
    pub transmitted: Scaled,
    /// Decay wavenumber K in fm⁻¹.
    pub decay: f64,
    pub half_width: f64,
}

impl ChannelAmplitudes {
    /// A
    pub fn a(&self) -> Complex64 {
        self.reflected
    }

    /// B
    pub fn b(&self) -> Complex64 {
        self.growing.shifted(-self.decay * self.half_width)
    }

    /// C
    pub fn c(&self) -> Complex64 {
        self.decaying.shifted(self.decay * self.half_width)
    }

    /// D
    pub fn d(&self) -> Complex64 {
        self.transmitted.value()
    }

    /// The pair (B e^{Kx}, C e^{−Kx}) at a point inside the barrier.
    pub fn interior_terms(&self, x: f64) -> (Complex64, Complex64) {
        let d = self.half_width;
        (
            self.growing.shifted(self.decay * (x - d)),
            self.decaying.shifted(self.decay * (d - x)),
        )
    }
}

pub(crate) fn inv_sinh2(x: f64) -> f64 {
    let em1 = (-2.0 * x).exp_m1();
    4.0 * (-2.0 * x).exp() / (em1 * em1)
}

pub(crate) fn coth(x: f64) -> f64 {
    1.0 / x.tanh()
}

pub(crate) fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

/// Overflow-safe combination 1/sinh²(x) and coth(x) of a slab exponent.
#[derive(Debug, Clone, Copy)]
pub(crate) struct Hyper {
    pub inv_s2: f64,
    pub coth: f64,
}

impl Hyper {
    pub fn new(x: f64) -> Self {
        Self {
            inv_s2: inv_sinh2(x),
            coth: coth(x),
        }
    }
}

/// One channel of the slab problem.
#[derive(Debug, Clone, Copy)]
pub(crate) struct SlabChannel {
    pub q0: f64,
    pub q: f64,
    /// Decay wavenumber K (fm⁻¹).
    pub k: f64,
    /// Outer wavenumber K₀ (fm⁻¹).
    pub k0: f64,
    pub half_width: f64,
    /// 1 (Schrödinger) or 1+f₀² (Dirac).
    pub norm: f64,
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct LogDerivatives {
    pub dln_t: f64,
    pub dln_r: f64,
}

impl SlabChannel {
    pub fn exponent(&self) -> f64 {
        2.0 * self.half_width * self.k
    }

    /// (q₀² + q²)/(2q₀q) ≥ 1
    pub fn a_coef(&self) -> f64 {
        (self.q0 * self.q0 + self.q * self.q) / (2.0 * self.q0 * self.q)
    }

    pub fn phase_slope(&self) -> f64 {
        (self.q0 * self.q0 - self.q * self.q) / (2.0 * self.q0 * self.q)
    }

    pub fn tan_phase(&self) -> f64 {
        self.phase_slope() * self.exponent().tanh()
    }

    /// (T, R, ln T)
    pub fn probabilities(&self) -> (f64, f64, f64) {
        let x = self.exponent();
        let a2 = self.a_coef().powi(2);
        let inv = inv_sinh2(x);
        let den = self.norm * (inv + a2);
        let t = inv / den;
        let r = a2 / den;
        let ln_t = if t > 1e-290 {
            t.ln()
        } else {
            -self.norm.ln() - 2.0 * ln_sinh(x) - (a2 + inv).ln()
        };
        (t, r, ln_t)
    }

    pub fn result(&self) -> ChannelResult {
        let (t, r, ln_t) = self.probabilities();
        ChannelResult {
            transmission: t,
            reflection: r,
            log10_transmission: ln_t * std::f64::consts::LOG10_E,
            phase: self.tan_phase().atan(),
        }
    }

    /// Logarithmic change of T and R for a displacement (dq, dK).
    pub fn log_derivatives(&self, dq: f64, dk: f64) -> LogDerivatives {
        let h = Hyper::new(self.exponent());
        let a = self.a_coef();
        let p = (self.q * self.q - self.q0 * self.q0) / (2.0 * self.q0 * self.q * self.q) * dq;
        let q = a * 2.0 * self.half_width * dk;
        let common = p + q * h.coth;
        let den = h.inv_s2 + a * a;
        LogDerivatives {
            dln_t: -2.0 * a * common / den,
            dln_r: 2.0 * common / a * h.inv_s2 / den,
        }
    }

    /// Closed-form amplitudes for incoming upper amplitude `u`.
    pub fn amplitudes(&self, u: Complex64) -> ChannelAmplitudes {
        let (_, r, ln_t) = self.probabilities();
        let phase = self.tan_phase().atan();
        let k0d = self.k0 * self.half_width;
        let carrier = Complex64::from_polar(1.0, phase - 2.0 * k0d) * u;
        let ln_scale = 0.5 * ln_t;
        let entry = Complex64::from_polar(1.0, k0d);
        let growing = Complex64::new(self.q, self.q0) / (2.0 * self.q) * entry * carrier;
        let decaying = Complex64::new(self.q, -self.q0) / (2.0 * self.q) * entry * carrier;
        ChannelAmplitudes {
            reflected: Complex64::new(0.0, -r.sqrt()) * carrier,
            growing: Scaled::new(growing, ln_scale),
            decaying: Scaled::new(decaying, ln_scale),
            transmitted: Scaled::new(carrier, ln_scale),
            decay: self.k,
            half_width: self.half_width,
        }
    }
}

/// φ₁ − φ₂ without cancellation, given accurate q₂ − q₁ and K₂ − K₁.
pub(crate) fn phase_difference(c1: &SlabChannel, c2: &SlabChannel, dq: f64, dk: f64) -> f64 {
    let q0 = c1.q0;
    let (x1, x2) = (c1.exponent(), c2.exponent());
    let t1 = x1.tanh();
    let dh = dq * (q0 * q0 + c1.q * c2.q) / (2.0 * q0 * c1.q * c2.q);
    let dx = 2.0 * c1.half_width * dk;
    let dt = -dx.sinh() / (x1.cosh() * x2.cosh());
    let g1 = c1.tan_phase();
    let g2 = c2.tan_phase();
    let dg = dh * t1 + c2.phase_slope() * dt;
    dg.atan2(1.0 + g1 * g2)
}

/// τ_L, τ_d and the free-passage time, all in seconds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeReport {
    pub tau_l: f64,
    pub tau_d: f64,
    pub tau_l0: f64,
    /// τ_L/τ_L⁰
    pub ratio: f64,
    /// 2d/τ_L in m/s.
    pub apparent_speed: f64,
    /// log₁₀ of the zero-field transmission probability.
    pub log10_transmission: f64,
}

impl TimeReport {
    pub(crate) fn from_natural(
        tau_l: f64,
        tau_d: f64,
        tau_l0: f64,
        full_width_fm: f64,
        log10_transmission: f64,
    ) -> Self {
        let tau_l = units::time_to_seconds(tau_l);
        Self {
            tau_l,
            tau_d: units::time_to_seconds(tau_d),
            tau_l0: units::time_to_seconds(tau_l0),
            ratio: tau_l / units::time_to_seconds(tau_l0),
            apparent_speed: units::fm_to_m(full_width_fm) / tau_l,
            log10_transmission,
        }
    }

    /// |τ_d − τ_L|/τ_d
    pub fn identity_residual(&self) -> f64 {
        (self.tau_d - self.tau_l).abs() / self.tau_d
    }
}

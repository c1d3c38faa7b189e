//! Spin coherent states, Pauli and Dirac matrices, spin expectation values
//! and the free-precession reference solutions.
//!
//! Spin vectors are expressed in units of ħ/2, so a pure spin-½ state has
//! a unit-length expectation vector.

use std::f64::consts::{PI, TAU};

use num_complex::Complex64;

use crate::error::{Error, Result};

pub type Mat2 = [[Complex64; 2]; 2];
pub type Mat4 = [[Complex64; 4]; 4];

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pauli matrices σ₁, σ₂, σ₃.
pub const PAULI: [Mat2; 3] = [
    [[ZERO, ONE], [ONE, ZERO]],
    [[ZERO, Complex64::new(0.0, -1.0)], [I, ZERO]],
    [[ONE, ZERO], [ZERO, Complex64::new(-1.0, 0.0)]],
];

/// Dirac β in the Pauli representation.
pub fn dirac_beta() -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    m[0][0] = ONE;
    m[1][1] = ONE;
    m[2][2] = -ONE;
    m[3][3] = -ONE;
    m
}

/// αᵢ = [[0, σᵢ], [σᵢ, 0]], `i` in 0..3.
pub fn dirac_alpha(i: usize) -> Mat4 {
    let s = PAULI[i];
    let mut m = [[ZERO; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c + 2] = s[r][c];
            m[r + 2][c] = s[r][c];
        }
    }
    m
}

/// Σᵢ = [[σᵢ, 0], [0, σᵢ]], `i` in 0..3.
pub fn dirac_sigma(i: usize) -> Mat4 {
    let s = PAULI[i];
    let mut m = [[ZERO; 4]; 4];
    for r in 0..2 {
        for c in 0..2 {
            m[r][c] = s[r][c];
            m[r + 2][c + 2] = s[r][c];
        }
    }
    m
}

pub fn mat4_mul(a: &Mat4, b: &Mat4) -> Mat4 {
    let mut m = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            m[r][c] = (0..4).map(|k| a[r][k] * b[k][c]).sum();
        }
    }
    m
}

pub fn mat4_apply(a: &Mat4, v: &[Complex64; 4]) -> [Complex64; 4] {
    let mut out = [ZERO; 4];
    for (r, o) in out.iter_mut().enumerate() {
        *o = (0..4).map(|k| a[r][k] * v[k]).sum();
    }
    out
}

/// Direction n(θ, φ) of a spin coherent state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinOrientation {
    theta: f64,
    phi: f64,
}

impl SpinOrientation {
    /// θ is clamped to [0, π] and φ reduced into [0, 2π).
    pub fn new(theta: f64, phi: f64) -> Self {
        let phi = phi.rem_euclid(TAU);
        // rem_euclid can round up to exactly 2π for tiny negative inputs
        let phi = if phi >= TAU { 0.0 } else { phi };
        Self {
            theta: theta.clamp(0.0, PI),
            phi,
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn phi(&self) -> f64 {
        self.phi
    }

    pub fn unit_vector(&self) -> SpinVector {
        let (st, ct) = self.theta.sin_cos();
        let (sp, cp) = self.phi.sin_cos();
        SpinVector::new(st * cp, st * sp, ct)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor2 {
    pub u1: Complex64,
    pub u2: Complex64,
}

impl Spinor2 {
    pub fn new(u1: Complex64, u2: Complex64) -> Self {
        Self { u1, u2 }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.u1.norm_sqr() + self.u2.norm_sqr()
    }

    pub fn components(&self) -> [Complex64; 2] {
        [self.u1, self.u2]
    }

    pub fn expectation(&self) -> Result<SpinExpectation> {
        spin_expectation([self.u1, self.u2], None)
    }
}

/// Four-component Dirac spinor in the Pauli representation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Spinor4 {
    pub c: [Complex64; 4],
}

impl Spinor4 {
    pub fn new(c: [Complex64; 4]) -> Self {
        Self { c }
    }

    /// Normalized positive-energy plane-wave spinor (u₁, u₂, f₀u₂, f₀u₁)/√(1+f₀²).
    pub fn dirac_incoming(upper: &Spinor2, f0: f64) -> Self {
        let n = 1.0 / (1.0 + f0 * f0).sqrt();
        Self {
            c: [
                upper.u1 * n,
                upper.u2 * n,
                upper.u2 * (f0 * n),
                upper.u1 * (f0 * n),
            ],
        }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|z| z.norm_sqr()).sum()
    }

    pub fn upper(&self) -> [Complex64; 2] {
        [self.c[0], self.c[1]]
    }

    pub fn lower(&self) -> [Complex64; 2] {
        [self.c[2], self.c[3]]
    }

    pub fn expectation(&self) -> Result<SpinExpectation> {
        spin_expectation(self.upper(), Some(self.lower()))
    }
}

/// Spin expectation values in units of ħ/2.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct SpinVector {
    pub s1: f64,
    pub s2: f64,
    pub s3: f64,
}

impl SpinVector {
    pub const fn new(s1: f64, s2: f64, s3: f64) -> Self {
        Self { s1, s2, s3 }
    }

    pub fn norm(&self) -> f64 {
        (self.s1 * self.s1 + self.s2 * self.s2 + self.s3 * self.s3).sqrt()
    }

    pub fn scale(&self, w: f64) -> Self {
        Self::new(self.s1 * w, self.s2 * w, self.s3 * w)
    }

    pub fn add(&self, o: &Self) -> Self {
        Self::new(self.s1 + o.s1, self.s2 + o.s2, self.s3 + o.s3)
    }

    /// Largest component-wise absolute difference.
    pub fn max_abs_diff(&self, o: &Self) -> f64 {
        (self.s1 - o.s1)
            .abs()
            .max((self.s2 - o.s2).abs())
            .max((self.s3 - o.s3).abs())
    }

    pub fn as_array(&self) -> [f64; 3] {
        [self.s1, self.s2, self.s3]
    }
}

/// Normalized direction ⟨ψ|Σ|ψ⟩/⟨ψ|ψ⟩ together with the weight ⟨ψ|ψ⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpinExpectation {
    pub direction: SpinVector,
    pub weight: f64,
}

impl SpinExpectation {
    /// The unnormalized expectation ⟨ψ|Σ|ψ⟩.
    pub fn raw(&self) -> SpinVector {
        self.direction.scale(self.weight)
    }
}

fn pair_moments(p: [Complex64; 2]) -> [f64; 4] {
    let cross = p[0].conj() * p[1];
    let a = p[0].norm_sqr();
    let b = p[1].norm_sqr();
    [2.0 * cross.re, 2.0 * cross.im, a - b, a + b]
}

/// Spin expectation of a 2-spinor (`lower = None`) or of a 4-spinor with Σᵢ
/// acting blockwise on the upper and lower pairs.
pub fn spin_expectation(
    upper: [Complex64; 2],
    lower: Option<[Complex64; 2]>,
) -> Result<SpinExpectation> {
    let mut m = pair_moments(upper);
    if let Some(l) = lower {
        let ml = pair_moments(l);
        for (a, b) in m.iter_mut().zip(ml) {
            *a += b;
        }
    }
    let weight = m[3];
    if !(weight > 0.0) || !weight.is_finite() {
        return Err(Error::DegenerateState("spinor has zero or non-finite norm"));
    }
    Ok(SpinExpectation {
        direction: SpinVector::new(m[0] / weight, m[1] / weight, m[2] / weight),
        weight,
    })
}

/// Eigenstate of σ·n with eigenvalue +1: (cos(θ/2)e^{−iφ/2}, sin(θ/2)e^{+iφ/2}).
pub fn coherent_spinor(orient: SpinOrientation) -> Spinor2 {
    let (sh, ch) = (0.5 * orient.theta).sin_cos();
    let half = 0.5 * orient.phi;
    Spinor2 {
        u1: Complex64::from_polar(ch, -half),
        u2: Complex64::from_polar(sh, half),
    }
}

/// σ·n as a 2×2 matrix.
pub fn sigma_dot(n: &SpinVector) -> Mat2 {
    let mut m = [[ZERO; 2]; 2];
    for (k, w) in n.as_array().into_iter().enumerate() {
        for r in 0..2 {
            for c in 0..2 {
                m[r][c] += PAULI[k][r][c] * w;
            }
        }
    }
    m
}

/// Free precession after a rotation angle ω_L·t about +z.
pub fn free_precession_nonrel_angle(orient: SpinOrientation, angle: f64) -> SpinVector {
    let st = orient.theta.sin();
    let (s, c) = (orient.phi - angle).sin_cos();
    SpinVector::new(st * c, st * s, orient.theta.cos())
}

/// Heisenberg-picture spin under H = −½ħω_Lσ₃ starting from a coherent state.
pub fn free_precession_nonrel(orient: SpinOrientation, omega_l: f64, t: f64) -> SpinVector {
    free_precession_nonrel_angle(orient, omega_l * t)
}

/// Relativistic counterpart: components 2 and 3 carry (1−f₀²)/(1+f₀²).
pub fn free_precession_rel_angle(orient: SpinOrientation, angle: f64, f0: f64) -> SpinVector {
    let v = free_precession_nonrel_angle(orient, angle);
    let g = lorentz_spin_factor(f0);
    SpinVector::new(v.s1, g * v.s2, g * v.s3)
}

/// Spin of the Dirac plane-wave state under H = −½ħω_L βΣ₃.
///
/// f₀ ≥ 1 is accepted (the factor turns negative) but has no sub-luminal
/// kinematic meaning.
pub fn free_precession_rel(orient: SpinOrientation, omega_l: f64, t: f64, f0: f64) -> SpinVector {
    free_precession_rel_angle(orient, omega_l * t, f0)
}

/// (1−f₀²)/(1+f₀²)
pub fn lorentz_spin_factor(f0: f64) -> f64 {
    let f2 = f0 * f0;
    (1.0 - f2) / (1.0 + f2)
}

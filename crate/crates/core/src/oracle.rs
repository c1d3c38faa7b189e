//! Brute-force verifiers for the closed forms: a dense boundary-matching
//! solve, adaptive quadrature of the barrier density, Richardson finite
//! differences and a 4×4 matrix exponential.
//!
//! Nothing in here calls the closed-form amplitude or time expressions.

use num_complex::Complex64;

use crate::barrier::{ChannelAmplitudes, Scaled};
use crate::error::{Error, Result};
use crate::nonrel::{NonrelKinematics, ScatteringSolution};
use crate::rel::{RelKinematics, RelScatteringSolution, CHANNEL_COMPONENTS};
use crate::spinlab::{dirac_alpha, dirac_beta, dirac_sigma, mat4_mul, Mat4, Spinor2, Spinor4};
use crate::units::{self, CONSTANTS};

const N: usize = 8;
const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// Dense 8×8 complex system with its solution and relative residual.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearSystem {
    pub matrix: [[Complex64; N]; N],
    pub rhs: [Complex64; N],
    pub solution: [Complex64; N],
    /// ‖Mx − b‖/‖b‖
    pub residual_norm: f64,
}

fn vec_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

impl LinearSystem {
    /// Gaussian elimination with partial pivoting.
    pub fn solve(matrix: [[Complex64; N]; N], rhs: [Complex64; N]) -> Result<Self> {
        let mut m = matrix;
        let mut b = rhs;
        let scale = m
            .iter()
            .flat_map(|r| r.iter())
            .map(|z| z.norm())
            .fold(0.0, f64::max);
        for col in 0..N {
            let (piv, mag) = (col..N)
                .map(|r| (r, m[r][col].norm()))
                .fold((col, -1.0), |acc, x| if x.1 > acc.1 { x } else { acc });
            if !(mag > 1e-14 * scale) {
                return Err(Error::IllConditioned(format!(
                    "pivot {mag:e} in column {col} against matrix scale {scale:e}"
                )));
            }
            m.swap(col, piv);
            b.swap(col, piv);
            for r in col + 1..N {
                let factor = m[r][col] / m[col][col];
                if factor == ZERO {
                    continue;
                }
                let pivot_row = m[col];
                for (dst, v) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *dst -= factor * v;
                }
                let v = b[col];
                b[r] -= factor * v;
            }
        }
        let mut x = [ZERO; N];
        for r in (0..N).rev() {
            let s: Complex64 = (r + 1..N).map(|c| m[r][c] * x[c]).sum();
            x[r] = (b[r] - s) / m[r][r];
        }
        let mut res = [ZERO; N];
        for (r, out) in res.iter_mut().enumerate() {
            let mx: Complex64 = (0..N).map(|c| matrix[r][c] * x[c]).sum();
            *out = mx - rhs[r];
        }
        let bn = vec_norm(&rhs);
        let residual_norm = if bn > 0.0 { vec_norm(&res) / bn } else { vec_norm(&res) };
        if !(residual_norm < 1e-10) {
            return Err(Error::IllConditioned(format!("residual {residual_norm:e}")));
        }
        Ok(Self {
            matrix,
            rhs,
            solution: x,
            residual_norm,
        })
    }
}

/// Amplitudes recovered from a numeric boundary solve.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericAmplitudes {
    pub channels: [ChannelAmplitudes; 2],
    pub system: LinearSystem,
}

// Unknown layout per channel j: A_j, C_j e^{Kd}, B_j e^{3Kd}, D_j e^{2Kd}.
fn col_a(j: usize) -> usize {
    j
}
fn col_c(j: usize) -> usize {
    2 + j
}
fn col_b(j: usize) -> usize {
    4 + j
}
fn col_d(j: usize) -> usize {
    6 + j
}

fn unpack(sys: LinearSystem, decay: [f64; 2], d: f64) -> NumericAmplitudes {
    let x = &sys.solution;
    let channels = [0, 1].map(|j| {
        let shift = -2.0 * decay[j] * d;
        ChannelAmplitudes {
            reflected: x[col_a(j)],
            growing: Scaled::new(x[col_b(j)], shift),
            decaying: Scaled::new(x[col_c(j)], shift),
            transmitted: Scaled::new(x[col_d(j)], shift),
            decay: decay[j],
            half_width: d,
        }
    });
    NumericAmplitudes {
        channels,
        system: sys,
    }
}

/// Schrödinger matching: continuity of ψ and ψ′ at x = ±d for each
/// spin component, with the interior exponentials referred to the
/// interface where they are largest.
pub fn numeric_amplitudes_nonrel(
    kin: &NonrelKinematics,
    d: f64,
    incoming: &Spinor2,
) -> Result<NumericAmplitudes> {
    let mut m = [[ZERO; N]; N];
    let mut rhs = [ZERO; N];
    let i = Complex64::i();
    let k0 = kin.kappa0;
    let p = Complex64::from_polar(1.0, k0 * d);
    let pbar = p.conj();
    let decay = [kin.kappa1, kin.kappa2];
    for (j, u) in incoming.components().into_iter().enumerate() {
        let k = decay[j];
        let e2 = (-4.0 * k * d).exp();
        let row = 4 * j;
        // ψ(−d)
        m[row][col_a(j)] = p;
        m[row][col_b(j)] = -e2 + ZERO;
        m[row][col_c(j)] = -1.0 + ZERO;
        rhs[row] = -u * pbar;
        // ψ′(−d)
        m[row + 1][col_a(j)] = -i * k0 * p;
        m[row + 1][col_b(j)] = (-k * e2).into();
        m[row + 1][col_c(j)] = k.into();
        rhs[row + 1] = -i * k0 * u * pbar;
        // ψ(d), divided by e^{−2Kd}
        m[row + 2][col_b(j)] = 1.0.into();
        m[row + 2][col_c(j)] = 1.0.into();
        m[row + 2][col_d(j)] = -p;
        // ψ′(d), divided by e^{−2Kd}
        m[row + 3][col_b(j)] = k.into();
        m[row + 3][col_c(j)] = (-k).into();
        m[row + 3][col_d(j)] = -i * k0 * p;
    }
    let sys = LinearSystem::solve(m, rhs)?;
    Ok(unpack(sys, decay, d))
}

/// H − mc² for a plane wave e^{λx}, built from the Pauli-representation
/// matrices; `potential` is V₀ inside and 0 outside.
fn shifted_dirac_hamiltonian(lambda: Complex64, rest: f64, potential: f64, zeeman: f64) -> Mat4 {
    // c·p = −iħc·λ
    let cp = Complex64::new(0.0, -CONSTANTS.hbar_c) * lambda;
    let alpha = dirac_alpha(0);
    let beta = dirac_beta();
    let bs3 = mat4_mul(&beta, &dirac_sigma(2));
    let mut h = [[ZERO; 4]; 4];
    for r in 0..4 {
        for c in 0..4 {
            h[r][c] = alpha[r][c] * cp + beta[r][c] * potential - bs3[r][c] * (0.5 * zeeman);
        }
        // (β − 1)mc²
        h[r][r] += (beta[r][r] - 1.0) * rest;
    }
    h
}

/// Lower/upper ratio of the null vector of (H − E) restricted to one channel.
fn channel_ratio(h: &Mat4, e_kinetic: f64, up: usize, low: usize) -> Result<Complex64> {
    let huu = h[up][up] - e_kinetic;
    let hll = h[low][low] - e_kinetic;
    let det = huu * hll - h[up][low] * h[low][up];
    let scale = huu.norm() * hll.norm() + h[up][low].norm() * h[low][up].norm();
    if det.norm() > 1e-9 * scale {
        return Err(Error::Domain(format!(
            "wavenumber is not an eigenmode: |det| = {:e} vs {:e}",
            det.norm(),
            scale
        )));
    }
    Ok(-huu / h[up][low])
}

/// Dirac matching: continuity of all four components at x = ±d.
pub fn numeric_amplitudes_rel(
    kin: &RelKinematics,
    d: f64,
    incoming: &Spinor4,
) -> Result<NumericAmplitudes> {
    let mut m = [[ZERO; N]; N];
    let mut rhs = [ZERO; N];
    let i = Complex64::i();
    let ek = kin.e_kinetic;
    let rest = kin.rest_energy;
    let k0 = kin.k0;
    let p = Complex64::from_polar(1.0, k0 * d);
    let pbar = p.conj();
    let decay = [kin.k1, kin.k2];
    let outside = |lambda: Complex64| shifted_dirac_hamiltonian(lambda, rest, 0.0, 0.0);
    let inside = |lambda: Complex64| shifted_dirac_hamiltonian(lambda, rest, kin.height, kin.zeeman);
    for (j, &(up, low)) in CHANNEL_COMPONENTS.iter().enumerate() {
        let k = decay[j];
        let rho_tr = channel_ratio(&outside(i * k0), ek, up, low)?;
        let rho_ref = channel_ratio(&outside(-i * k0), ek, up, low)?;
        let rho_grow = channel_ratio(&inside(k.into()), ek, up, low)?;
        let rho_dec = channel_ratio(&inside((-k).into()), ek, up, low)?;
        let e2 = (-4.0 * k * d).exp();
        let row = 4 * j;
        // upper and lower components at −d
        for (r, (rr, rg, rd)) in [(row, (1.0.into(), 1.0.into(), 1.0.into())), (row + 1, (rho_ref, rho_grow, rho_dec))] {
            m[r][col_a(j)] = rr * p;
            m[r][col_b(j)] = -rg * e2;
            m[r][col_c(j)] = -rd;
        }
        rhs[row] = -incoming.c[up] * pbar;
        rhs[row + 1] = -incoming.c[low] * pbar;
        // upper and lower components at +d, divided by e^{−2Kd}
        for (r, (rg, rd, rt)) in [(row + 2, (1.0.into(), 1.0.into(), 1.0.into())), (row + 3, (rho_grow, rho_dec, rho_tr))] {
            m[r][col_b(j)] = rg;
            m[r][col_c(j)] = rd;
            m[r][col_d(j)] = -rt * p;
        }
    }
    let sys = LinearSystem::solve(m, rhs)?;
    Ok(unpack(sys, decay, d))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    pub estimated_error: f64,
    pub panels: usize,
}

/// Composite Simpson rule over `panels` panels (each panel = 2 subintervals).
pub fn composite_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, panels: usize) -> f64 {
    let n = 2 * panels.max(1);
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for k in 1..n {
        let w = if k % 2 == 1 { 4.0 } else { 2.0 };
        s += w * f(a + k as f64 * h);
    }
    s * h / 3.0
}

struct Simpson<'a, F> {
    f: &'a F,
    panels: usize,
    error: f64,
    converged: bool,
}

impl<F: Fn(f64) -> f64> Simpson<'_, F> {
    #[allow(clippy::too_many_arguments)]
    fn recurse(&mut self, a: f64, fa: f64, m: f64, fm: f64, b: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
        let lm = 0.5 * (a + m);
        let rm = 0.5 * (m + b);
        let flm = (self.f)(lm);
        let frm = (self.f)(rm);
        let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
        let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
        let delta = left + right - whole;
        if delta.abs() <= 15.0 * tol || depth == 0 {
            if depth == 0 && delta.abs() > 15.0 * tol {
                self.converged = false;
            }
            self.panels += 2;
            self.error += delta.abs() / 15.0;
            return left + right + delta / 15.0;
        }
        self.recurse(a, fa, lm, flm, m, fm, left, 0.5 * tol, depth - 1)
            + self.recurse(m, fm, rm, frm, b, fb, right, 0.5 * tol, depth - 1)
    }
}

/// Adaptive Simpson quadrature to a relative tolerance.
pub fn adaptive_simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, rel_tol: f64) -> Result<QuadratureResult> {
    const SEED_PANELS: usize = 16;
    const MAX_DEPTH: u32 = 60;
    let scale = composite_simpson(&f, a, b, 64).abs();
    let tol = rel_tol * scale.max(f64::MIN_POSITIVE) / SEED_PANELS as f64;
    let mut s = Simpson {
        f: &f,
        panels: 0,
        error: 0.0,
        converged: true,
    };
    let h = (b - a) / SEED_PANELS as f64;
    let mut value = 0.0;
    for k in 0..SEED_PANELS {
        let lo = a + k as f64 * h;
        let hi = if k + 1 == SEED_PANELS { b } else { lo + h };
        let mid = 0.5 * (lo + hi);
        let (flo, fmid, fhi) = (f(lo), f(mid), f(hi));
        let whole = (hi - lo) / 6.0 * (flo + 4.0 * fmid + fhi);
        value += s.recurse(lo, flo, mid, fmid, hi, fhi, whole, tol, MAX_DEPTH);
    }
    if !s.converged || !value.is_finite() || s.error > rel_tol * value.abs() {
        return Err(Error::Quadrature(format!(
            "value {value:e}, estimated error {:e}, tolerance {rel_tol:e}",
            s.error
        )));
    }
    Ok(QuadratureResult {
        value,
        estimated_error: s.error,
        panels: s.panels,
    })
}

/// ∫ density over [−d, d] divided by the incident flux. `flux_over_c` is
/// the flux as a speed in units of c; the result is in seconds.
pub fn numeric_dwell<F: Fn(f64) -> f64>(
    density: F,
    half_width: f64,
    flux_over_c: f64,
    rel_tol: f64,
) -> Result<QuadratureResult> {
    let q = adaptive_simpson(density, -half_width, half_width, rel_tol)?;
    let to_seconds = |p: f64| units::time_to_seconds(p / flux_over_c / CONSTANTS.hbar_c);
    Ok(QuadratureResult {
        value: to_seconds(q.value),
        estimated_error: to_seconds(q.estimated_error),
        panels: q.panels,
    })
}

pub fn numeric_dwell_nonrel(sol: &ScatteringSolution, rel_tol: f64) -> Result<QuadratureResult> {
    numeric_dwell(
        |x| sol.barrier_density(x),
        sol.half_width,
        sol.incident_flux() / CONSTANTS.c,
        rel_tol,
    )
}

pub fn numeric_dwell_rel(sol: &RelScatteringSolution, rel_tol: f64) -> Result<QuadratureResult> {
    numeric_dwell(
        |x| sol.barrier_density(x),
        sol.half_width,
        sol.incident_flux() / CONSTANTS.c,
        rel_tol,
    )
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SlopeEstimate {
    /// Richardson-extrapolated derivative.
    pub value: f64,
    pub error_estimate: f64,
    /// Central difference at step h.
    pub coarse: f64,
    /// Central difference at step h/2.
    pub fine: f64,
}

/// Richardson-extrapolated central difference from steps h and h/2.
pub fn fd_slope<F: Fn(f64) -> f64>(f: F, x0: f64, h: f64) -> Result<SlopeEstimate> {
    let floor = 64.0 * f64::EPSILON * x0.abs();
    if !(h > floor) || !h.is_finite() || h == 0.0 {
        return Err(Error::StepSize { h, floor });
    }
    let central = |s: f64| (f(x0 + s) - f(x0 - s)) / (2.0 * s);
    let coarse = central(h);
    let fine = central(0.5 * h);
    Ok(SlopeEstimate {
        value: (4.0 * fine - coarse) / 3.0,
        error_estimate: (fine - coarse).abs() / 3.0,
        coarse,
        fine,
    })
}

fn mat4_norm1(a: &Mat4) -> f64 {
    (0..4)
        .map(|c| (0..4).map(|r| a[r][c].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// exp(A) by scaling and squaring with a Taylor core.
pub fn expm4(a: &Mat4) -> Mat4 {
    let norm = mat4_norm1(a);
    let squarings = if norm > 0.5 {
        (norm / 0.5).log2().ceil() as i32
    } else {
        0
    };
    let scale = 0.5f64.powi(squarings);
    let mut x = *a;
    for row in x.iter_mut() {
        for v in row.iter_mut() {
            *v *= scale;
        }
    }
    let mut result = [[ZERO; 4]; 4];
    let mut term = [[ZERO; 4]; 4];
    for k in 0..4 {
        result[k][k] = Complex64::new(1.0, 0.0);
        term[k][k] = Complex64::new(1.0, 0.0);
    }
    for n in 1..40 {
        term = mat4_mul(&term, &x);
        for row in term.iter_mut() {
            for v in row.iter_mut() {
                *v /= n as f64;
            }
        }
        for r in 0..4 {
            for c in 0..4 {
                result[r][c] += term[r][c];
            }
        }
        if mat4_norm1(&term) < 1e-13 * f64::EPSILON {
            break;
        }
    }
    for _ in 0..squarings {
        result = mat4_mul(&result, &result);
    }
    result
}

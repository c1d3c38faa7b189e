//! Self-check suite behind the `verify` subcommand: closed forms against
//! each other and against the numeric oracles, for a given barrier.

use std::fmt;

use num_complex::Complex64;

use crate::barrier::BarrierSpec;
use crate::error::Result;
use crate::nonrel::{self, kinematics, scatter, spin_expectations};
use crate::oracle::{self, numeric_amplitudes_nonrel, numeric_amplitudes_rel};
use crate::rel::{self, rel_kinematics_kinetic, rel_scatter, rel_spin_expectations};
use crate::spinlab::{coherent_spinor, free_precession_nonrel_angle, free_precession_rel_angle, SpinOrientation};
use crate::units::ParticleSpec;

const GRID: usize = 200;
const SAMPLES: usize = 12;
// largest 2dκ used where amplitudes must stay representable
const OPACITY: f64 = 60.0;

#[derive(Debug, Clone, PartialEq)]
pub struct CheckOutcome {
    pub name: &'static str,
    pub max_residual: f64,
    pub tolerance: f64,
    pub error: Option<String>,
}

impl CheckOutcome {
    pub fn passed(&self) -> bool {
        self.error.is_none() && self.max_residual < self.tolerance
    }

    fn from(name: &'static str, tolerance: f64, r: Result<f64>) -> Self {
        match r {
            Ok(max_residual) => Self {
                name,
                max_residual,
                tolerance,
                error: None,
            },
            Err(e) => Self {
                name,
                max_residual: f64::NAN,
                tolerance,
                error: Some(format!("{}: {e}", e.kind())),
            },
        }
    }
}

impl fmt::Display for CheckOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(
            f,
            "{status} {:<28} max_residual={:.3e} tol={:.0e}",
            self.name, self.max_residual, self.tolerance
        )?;
        if let Some(e) = &self.error {
            write!(f, " error={e}")?;
        }
        Ok(())
    }
}

fn energies(spec: &BarrierSpec, n: usize) -> Vec<f64> {
    let top = spec.tunneling_ceiling();
    (0..n)
        .map(|i| top * (0.01 + 0.98 * i as f64 / (n - 1) as f64))
        .collect()
}

fn orientations() -> impl Iterator<Item = SpinOrientation> {
    (0..SAMPLES).map(|i| SpinOrientation::new(0.2 + 0.23 * i as f64, 0.7 * i as f64))
}

fn rel_diff(a: Complex64, b: Complex64) -> f64 {
    (a - b).norm() / b.norm().max(f64::MIN_POSITIVE)
}

fn max_over<I: IntoIterator<Item = Result<f64>>>(it: I) -> Result<f64> {
    let mut m: f64 = 0.0;
    for r in it {
        m = m.max(r?);
    }
    Ok(m)
}

/// Same barrier, narrowed so that 2dκ stays below `OPACITY`.
fn representable(spec: &BarrierSpec, kappa: f64, zeeman: f64) -> Result<BarrierSpec> {
    let d = spec.half_width().min(0.5 * OPACITY / kappa);
    BarrierSpec::new(d, spec.height(), zeeman)
}

pub fn run_checks(spec: &BarrierSpec, particle: &ParticleSpec) -> Vec<CheckOutcome> {
    let grid = energies(spec, GRID);
    let samples = energies(spec, SAMPLES);
    let tiny = |e: f64| spec.infinitesimal_zeeman(e);
    let mut out = Vec::new();

    out.push(CheckOutcome::from(
        "identity nonrel",
        1e-10,
        spec.with_zeeman(0.0).and_then(|z| {
            max_over(grid.iter().map(|&e| nonrel::times(e, &z, particle).map(|t| t.identity_residual())))
        }),
    ));
    out.push(CheckOutcome::from(
        "identity rel",
        1e-10,
        spec.with_zeeman(0.0).and_then(|z| {
            max_over(grid.iter().map(|&e| rel::rel_times(e, &z, particle).map(|t| t.identity_residual())))
        }),
    ));
    out.push(CheckOutcome::from(
        "energy identity rel",
        1e-12,
        max_over(grid.iter().map(|&e| {
            rel_kinematics_kinetic(e, spec, particle).map(|k| k.energy_identity_residual())
        })),
    ));

    out.push(CheckOutcome::from(
        "oracle nonrel",
        1e-10,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let k = kinematics(e, spec, particle)?;
            let s = representable(spec, k.kappa, spec.zeeman().max(1e-3 * (spec.height() - e)))?;
            let k = kinematics(e, &s, particle)?;
            let inc = coherent_spinor(o);
            let num = numeric_amplitudes_nonrel(&k, s.half_width(), &inc)?;
            let sol = scatter(&k, s.half_width(), &inc);
            Ok(amplitude_mismatch(&num.channels, &sol.amplitudes))
        })),
    ));
    out.push(CheckOutcome::from(
        "oracle rel",
        1e-10,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let k = rel_kinematics_kinetic(e, spec, particle)?;
            let s = representable(spec, k.k, spec.zeeman().max(1e-3 * (spec.height() - e)))?;
            let k = rel_kinematics_kinetic(e, &s, particle)?;
            let sol = rel_scatter(&k, s.half_width(), &coherent_spinor(o));
            let num = numeric_amplitudes_rel(&k, s.half_width(), &sol.incoming)?;
            Ok(amplitude_mismatch(&num.channels, &sol.amplitudes))
        })),
    ));

    out.push(CheckOutcome::from(
        "dwell quadrature nonrel",
        1e-8,
        max_over(samples.iter().map(|&e| {
            let k = kinematics(e, spec, particle)?;
            let s = representable(spec, k.kappa, 0.0)?;
            let k = kinematics(e, &s, particle)?;
            let sol = scatter(&k, s.half_width(), &coherent_spinor(SpinOrientation::new(0.0, 0.0)));
            let q = oracle::numeric_dwell_nonrel(&sol, 1e-11)?;
            let closed = nonrel::times_from(&k, s.half_width()).tau_d;
            Ok((q.value - closed).abs() / closed)
        })),
    ));
    out.push(CheckOutcome::from(
        "dwell quadrature rel",
        1e-8,
        max_over(samples.iter().map(|&e| {
            let k = rel_kinematics_kinetic(e, spec, particle)?;
            let s = representable(spec, k.k, 0.0)?;
            let k = rel_kinematics_kinetic(e, &s, particle)?;
            let sol = rel_scatter(&k, s.half_width(), &coherent_spinor(SpinOrientation::new(0.0, 0.0)));
            let q = oracle::numeric_dwell_rel(&sol, 1e-11)?;
            let closed = rel::rel_times_from(&k, s.half_width()).tau_d;
            Ok((q.value - closed).abs() / closed)
        })),
    ));

    out.push(CheckOutcome::from(
        "spin clock nonrel",
        1e-8,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let s = spec.with_zeeman(tiny(e))?;
            let k = kinematics(e, &s, particle)?;
            let sol = scatter(&k, s.half_width(), &coherent_spinor(o));
            let reference = free_precession_nonrel_angle(o, sol.phase_difference());
            Ok(spin_expectations(&sol).combined.max_abs_diff(&reference))
        })),
    ));
    out.push(CheckOutcome::from(
        "spin clock rel",
        1e-8,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let s = spec.with_zeeman(tiny(e))?;
            let k = rel_kinematics_kinetic(e, &s, particle)?;
            let sol = rel_scatter(&k, s.half_width(), &coherent_spinor(o));
            let reference = free_precession_rel_angle(o, sol.phase_difference(), k.f0);
            Ok(rel_spin_expectations(&sol).combined.max_abs_diff(&reference))
        })),
    ));

    out.push(CheckOutcome::from(
        "conservation nonrel",
        1e-12,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let k = kinematics(e, spec, particle)?;
            let p = scatter(&k, spec.half_width(), &coherent_spinor(o)).probabilities();
            Ok((p.total() - 1.0).abs())
        })),
    ));
    out.push(CheckOutcome::from(
        "conservation rel",
        1e-12,
        max_over(samples.iter().zip(orientations()).map(|(&e, o)| {
            let k = rel_kinematics_kinetic(e, spec, particle)?;
            let p = rel_scatter(&k, spec.half_width(), &coherent_spinor(o)).probabilities();
            Ok((p.total() - 1.0).abs())
        })),
    ));
    out
}

fn amplitude_mismatch(
    numeric: &[crate::barrier::ChannelAmplitudes; 2],
    closed: &[crate::barrier::ChannelAmplitudes; 2],
) -> f64 {
    let mut m: f64 = 0.0;
    for (n, c) in numeric.iter().zip(closed) {
        for (a, b) in [(n.a(), c.a()), (n.b(), c.b()), (n.c(), c.c()), (n.d(), c.d())] {
            if b.norm() > 0.0 {
                m = m.max(rel_diff(a, b));
            } else {
                m = m.max(a.norm());
            }
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn low_barrier_passes() {
        let s = BarrierSpec::from_full_width_angstrom(8.0, 470.0, 1e-6).unwrap();
        let checks = run_checks(&s, &ParticleSpec::neutron());
        for c in &checks {
            assert!(c.passed(), "{c}");
        }
        assert_eq!(checks.len(), 11);
    }

    #[test]
    fn failing_check_is_reported() {
        let c = CheckOutcome::from("x", 1e-10, Ok(1.0));
        assert!(!c.passed());
        assert!(c.to_string().starts_with("FAIL x"));
    }
}

use proptest::prelude::*;

use larmor_clock::nonrel::{kinematics, scatter, times_from};
use larmor_clock::rel::{rel_kinematics_kinetic, rel_scatter, rel_times_from};
use larmor_clock::spinlab::{coherent_spinor, SpinOrientation};
use larmor_clock::units::time_to_seconds;
use larmor_clock::{BarrierSpec, ParticleSpec};

// (E_k, V0, 2dκ-ish opacity in units of fm) within the tunneling regime
fn regime() -> impl Strategy<Value = (f64, f64, f64)> {
    (1.0f64..1000.0, 0.02f64..0.98, 0.05f64..5.0).prop_map(|(v0, u, d)| (u * v0, v0, d))
}

fn orientation() -> impl Strategy<Value = SpinOrientation> {
    (0.0f64..std::f64::consts::PI, 0.0f64..std::f64::consts::TAU).prop_map(|(t, p)| SpinOrientation::new(t, p))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn unitarity_nonrel((e, v0, d) in regime(), w in -6.0f64..-0.5, o in orientation()) {
        let s = BarrierSpec::new(d, v0, (v0 - e) * 10f64.powf(w)).unwrap();
        let k = kinematics(e, &s, &ParticleSpec::neutron()).unwrap();
        let sol = scatter(&k, d, &coherent_spinor(o));
        for c in &sol.channels {
            prop_assert!((c.transmission + c.reflection - 1.0).abs() < 1e-13);
        }
        prop_assert!((sol.probabilities().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn unitarity_rel((e, v0, d) in regime(), w in -6.0f64..-0.5, o in orientation()) {
        let s = BarrierSpec::new(d, v0, (v0 - e) * 10f64.powf(w)).unwrap();
        let k = rel_kinematics_kinetic(e, &s, &ParticleSpec::neutron()).unwrap();
        let sol = rel_scatter(&k, d, &coherent_spinor(o));
        prop_assert!((sol.probabilities().total() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn geometric_mean_transmission_is_second_order((e, v0, d) in regime()) {
        let n = ParticleSpec::neutron();
        let residual = |eps: f64| {
            let s = BarrierSpec::new(d, v0, eps).unwrap();
            let k = kinematics(e, &s, &n).unwrap();
            let sol = scatter(&k, d, &coherent_spinor(SpinOrientation::new(1.0, 0.0)));
            let t = sol.expansion().zero_field.transmission;
            ((sol.channels[0].transmission * sol.channels[1].transmission).sqrt() - t).abs() / t
        };
        let eps = 1e-3 * (v0 - e);
        let (r1, r2) = (residual(eps), residual(0.5 * eps));
        prop_assume!(r1 > 1e-11);
        prop_assert!((3.5..4.5).contains(&(r1 / r2)), "{}", r1 / r2);
    }

    #[test]
    fn identity_holds_everywhere((e, v0, d) in regime(), scale in 0.0f64..6.0) {
        let n = ParticleSpec::neutron();
        let d = d * 10f64.powf(scale);
        let s = BarrierSpec::new(d, v0, 0.0).unwrap();
        let t = times_from(&kinematics(e, &s, &n).unwrap(), d);
        prop_assert!(t.identity_residual() < 1e-10);
        let t = rel_times_from(&rel_kinematics_kinetic(e, &s, &n).unwrap(), d);
        prop_assert!(t.identity_residual() < 1e-10);
    }
}

/// τ_L is the ε → 0 limit of the phase-difference clock (φ₁ − φ₂)/ω_L; the
/// symmetric split makes the approach quadratic in ε.
#[test]
fn phase_clock_converges_quadratically() {
    let n = ParticleSpec::neutron();
    for (e, v0, d) in [(4.698, 470.0, 1.0), (50.0, 100.0, 3.0), (300.0, 1000.0, 0.3)] {
        let clock = |eps: f64| {
            let s = BarrierSpec::new(d, v0, eps).unwrap();
            let k = kinematics(e, &s, &n).unwrap();
            let phase = scatter(&k, d, &coherent_spinor(SpinOrientation::new(1.0, 0.0))).phase_difference();
            (time_to_seconds(phase / eps), times_from(&k, d).tau_l)
        };
        let eps = 1e-2 * (v0 - e);
        let (a, tau) = clock(eps);
        let (b, _) = clock(0.5 * eps);
        let ratio = (a - tau).abs() / (b - tau).abs();
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }
    for (e, v0, d) in [(2766.83, 6000.0, 0.05), (300.0, 1000.0, 0.3)] {
        let clock = |eps: f64| {
            let s = BarrierSpec::new(d, v0, eps).unwrap();
            let k = rel_kinematics_kinetic(e, &s, &n).unwrap();
            let phase = rel_scatter(&k, d, &coherent_spinor(SpinOrientation::new(1.0, 0.0))).phase_difference();
            (time_to_seconds(phase / eps), rel_times_from(&k, d).tau_l)
        };
        let eps = 1e-2 * (v0 - e);
        let (a, tau) = clock(eps);
        let (b, _) = clock(0.5 * eps);
        let ratio = (a - tau).abs() / (b - tau).abs();
        assert!((3.5..4.5).contains(&ratio), "{ratio}");
    }
}

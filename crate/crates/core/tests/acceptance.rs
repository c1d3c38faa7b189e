//! Acceptance gate. Runs without the libtest harness so every criterion
//! prints its own PASS/FAIL line; exits nonzero if any fails.

use std::f64::consts::{FRAC_PI_2, PI, TAU};
use std::process::ExitCode;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use larmor_clock::barrier::ChannelAmplitudes;
use larmor_clock::nonrel::{self, kinematics, scatter, spin_expectations};
use larmor_clock::oracle::{self, numeric_amplitudes_nonrel, numeric_amplitudes_rel};
use larmor_clock::rel::{self, rel_kinematics_kinetic, rel_scatter, rel_spin_expectations};
use larmor_clock::spinlab::{
    coherent_spinor, free_precession_nonrel_angle, free_precession_rel_angle, SpinOrientation,
};
use larmor_clock::sweep::{run_sweep, Regime, SweepConfig};
use larmor_clock::{BarrierSpec, ParticleSpec};

struct Outcome {
    detail: String,
    passed: bool,
}

impl Outcome {
    fn check(passed: bool, detail: String) -> Self {
        Self { detail, passed }
    }

    fn failed(detail: impl Into<String>) -> Self {
        Self {
            detail: detail.into(),
            passed: false,
        }
    }
}

type Criterion = fn() -> Outcome;

fn neutron() -> ParticleSpec {
    ParticleSpec::neutron()
}

fn low_barrier() -> BarrierSpec {
    BarrierSpec::from_full_width_angstrom(8.0, 470.0, 0.0).unwrap()
}

fn high_barrier() -> BarrierSpec {
    BarrierSpec::from_full_width_angstrom(8.0, 6000.0, 0.0).unwrap()
}

fn grid(spec: &BarrierSpec, n: usize) -> Vec<f64> {
    let top = spec.tunneling_ceiling();
    (0..n)
        .map(|i| top * (1e-3 + 0.998 * i as f64 / (n - 1) as f64))
        .collect()
}

fn identity_nonrel() -> Outcome {
    let spec = low_barrier();
    let p = neutron();
    let energies = grid(&spec, 1000);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &e in &energies {
        match nonrel::times(e, &spec, &p) {
            Ok(t) => worst = worst.max(t.identity_residual()),
            Err(err) => return Outcome::failed(format!("E_k={e}: {err}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    Outcome::check(
        worst < 1e-10 && elapsed < 1.0,
        format!("max |τ_d−τ_L|/τ_d = {worst:.2e} (< 1e-10), {elapsed:.3} s (< 1 s)"),
    )
}

fn identity_rel() -> Outcome {
    let spec = high_barrier();
    let p = neutron();
    let energies = grid(&spec, 1000);
    let start = Instant::now();
    let mut worst: f64 = 0.0;
    for &e in &energies {
        match rel::rel_times(e, &spec, &p) {
            Ok(t) => worst = worst.max(t.identity_residual()),
            Err(err) => return Outcome::failed(format!("E_k={e}: {err}")),
        }
    }
    let elapsed = start.elapsed().as_secs_f64();
    let mut energy_identity: f64 = 0.0;
    for &e in &energies {
        let k = rel_kinematics_kinetic(e, &spec, &p).unwrap();
        energy_identity = energy_identity.max(k.energy_identity_residual());
    }
    Outcome::check(
        worst < 1e-10 && elapsed < 1.0 && energy_identity < 1e-12,
        format!(
            "max |τ_d−τ_L|/τ_d = {worst:.2e} (< 1e-10), {elapsed:.3} s (< 1 s), \
             energy identity {energy_identity:.2e} (< 1e-12)"
        ),
    )
}

fn speed_nonrel() -> Outcome {
    let p = neutron();
    let e = 0.5 * p.rest_energy() * 1e-2;
    match nonrel::times(e, &low_barrier(), &p) {
        Ok(t) => {
            let rel = (t.apparent_speed - 5.7e15).abs() / 5.7e15;
            Outcome::check(
                rel < 0.02,
                format!("2d/τ_L = {:.4e} m/s at E_k = {e:.4} MeV, off by {:.2}% (< 2%)", t.apparent_speed, 100.0 * rel),
            )
        }
        Err(err) => Outcome::failed(err.to_string()),
    }
}

fn speed_rel() -> Outcome {
    let p = neutron();
    let e = p.kinetic_energy_rel(2.9e8);
    match rel::rel_times(e, &high_barrier(), &p) {
        Ok(t) => {
            let rel = (t.apparent_speed - 6.4e15).abs() / 6.4e15;
            Outcome::check(
                rel < 0.05,
                format!("2d/τ_L = {:.4e} m/s at E_k = {e:.2} MeV, off by {:.2}% (< 5%)", t.apparent_speed, 100.0 * rel),
            )
        }
        Err(err) => Outcome::failed(err.to_string()),
    }
}

/// A random in-regime configuration with 2dκ ≤ `max_opacity`.
struct Draw {
    e_k: f64,
    spec: BarrierSpec,
    orient: SpinOrientation,
}

fn draw(rng: &mut ChaCha8Rng, regime: Regime, max_opacity: f64) -> Draw {
    let p = neutron();
    let v0 = rng.gen_range(1.0..1000.0);
    let e_k = v0 * rng.gen_range(0.01..0.99);
    let eps = (v0 - e_k) * 10f64.powf(rng.gen_range(-6.0..-0.3));
    let orient = SpinOrientation::new(rng.gen_range(0.0..PI), rng.gen_range(0.0..TAU));
    let probe = BarrierSpec::new(1.0, v0, eps).unwrap();
    let kappa = match regime {
        Regime::Nonrel => kinematics(e_k, &probe, &p).unwrap().kappa,
        Regime::Rel => rel_kinematics_kinetic(e_k, &probe, &p).unwrap().k,
    };
    let opacity = rng.gen_range(0.01..max_opacity);
    let spec = BarrierSpec::new(opacity / (2.0 * kappa), v0, eps).unwrap();
    Draw { e_k, spec, orient }
}

fn conservation() -> Outcome {
    let p = neutron();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0005);
    let mut worst = [0.0f64; 2];
    for _ in 0..10_000 {
        for (slot, regime) in [Regime::Nonrel, Regime::Rel].into_iter().enumerate() {
            let d = draw(&mut rng, regime, 300.0);
            let inc = coherent_spinor(d.orient);
            let probs = match regime {
                Regime::Nonrel => {
                    let k = kinematics(d.e_k, &d.spec, &p).unwrap();
                    scatter(&k, d.spec.half_width(), &inc).probabilities()
                }
                Regime::Rel => {
                    let k = rel_kinematics_kinetic(d.e_k, &d.spec, &p).unwrap();
                    rel_scatter(&k, d.spec.half_width(), &inc).probabilities()
                }
            };
            worst[slot] = worst[slot].max((probs.total() - 1.0).abs());
        }
    }
    Outcome::check(
        worst[0] < 1e-12 && worst[1] < 1e-12,
        format!(
            "max |ΣT+ΣR−1| over 10⁴ draws: nonrel {:.2e}, rel {:.2e} (< 1e-12)",
            worst[0], worst[1]
        ),
    )
}

fn mismatch(numeric: &[ChannelAmplitudes; 2], closed: &[ChannelAmplitudes; 2]) -> f64 {
    let mut m: f64 = 0.0;
    for (n, c) in numeric.iter().zip(closed) {
        let pairs: [(Complex64, Complex64); 4] = [(n.a(), c.a()), (n.b(), c.b()), (n.c(), c.c()), (n.d(), c.d())];
        for (a, b) in pairs {
            m = m.max((a - b).norm() / b.norm());
        }
    }
    m
}

fn oracle_equivalence() -> Outcome {
    let p = neutron();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed_0006);
    let mut worst = [0.0f64; 2];
    for _ in 0..100 {
        let d = draw(&mut rng, Regime::Nonrel, 300.0);
        let k = kinematics(d.e_k, &d.spec, &p).unwrap();
        let inc = coherent_spinor(d.orient);
        let sol = scatter(&k, d.spec.half_width(), &inc);
        match numeric_amplitudes_nonrel(&k, d.spec.half_width(), &inc) {
            Ok(num) => worst[0] = worst[0].max(mismatch(&num.channels, &sol.amplitudes)),
            Err(e) => return Outcome::failed(format!("nonrel oracle: {e}")),
        }
        let d = draw(&mut rng, Regime::Rel, 300.0);
        let k = rel_kinematics_kinetic(d.e_k, &d.spec, &p).unwrap();
        let sol = rel_scatter(&k, d.spec.half_width(), &coherent_spinor(d.orient));
        match numeric_amplitudes_rel(&k, d.spec.half_width(), &sol.incoming) {
            Ok(num) => worst[1] = worst[1].max(mismatch(&num.channels, &sol.amplitudes)),
            Err(e) => return Outcome::failed(format!("rel oracle: {e}")),
        }
    }
    Outcome::check(
        worst[0] < 1e-10 && worst[1] < 1e-10,
        format!(
            "max relative amplitude mismatch over 100 draws: nonrel {:.2e}, rel {:.2e} (< 1e-10)",
            worst[0], worst[1]
        ),
    )
}

fn expansion_residual(regime: Regime, e_k: f64, v0: f64, d: f64, eps: f64) -> f64 {
    let p = neutron();
    let spec = BarrierSpec::new(d, v0, eps).unwrap();
    let inc = coherent_spinor(SpinOrientation::new(1.0, 0.0));
    let (exact, t, r) = match regime {
        Regime::Nonrel => {
            let k = kinematics(e_k, &spec, &p).unwrap();
            let sol = scatter(&k, d, &inc);
            let ex = sol.expansion();
            (sol.channels, ex.first_order_t(), ex.first_order_r())
        }
        Regime::Rel => {
            let k = rel_kinematics_kinetic(e_k, &spec, &p).unwrap();
            let sol = rel_scatter(&k, d, &inc);
            let ex = sol.expansion();
            (sol.channels, ex.first_order_t(), ex.first_order_r())
        }
    };
    [
        exact[0].transmission - t.0,
        exact[1].transmission - t.1,
        exact[0].reflection - r.0,
        exact[1].reflection - r.1,
    ]
    .iter()
    .fold(0.0f64, |m, x| m.max(x.abs()))
}

fn expansion_order() -> Outcome {
    let cases = [
        (Regime::Nonrel, 4.698, 470.0, 1.0),
        (Regime::Nonrel, 50.0, 100.0, 3.0),
        (Regime::Rel, 2766.83, 6000.0, 0.05),
        (Regime::Rel, 300.0, 1000.0, 0.5),
    ];
    let mut ratios = Vec::new();
    for (regime, e_k, v0, d) in cases {
        let eps = 1e-3 * (v0 - e_k);
        let r1 = expansion_residual(regime, e_k, v0, d, eps);
        let r2 = expansion_residual(regime, e_k, v0, d, 0.5 * eps);
        ratios.push(r1 / r2);
    }
    let ok = ratios.iter().all(|r| (3.5..=4.5).contains(r));
    let shown: Vec<String> = ratios.iter().map(|r| format!("{r:.4}")).collect();
    Outcome::check(ok, format!("residual ratio on halving ε: [{}] (in [3.5, 4.5])", shown.join(", ")))
}

fn spin_clock() -> Outcome {
    let p = neutron();
    let mut worst = [0.0f64; 2];
    let orients = [(0.3, 0.0), (1.0, 0.5), (FRAC_PI_2, 2.0), (2.5, 4.0)];
    for (theta, phi) in orients {
        let o = SpinOrientation::new(theta, phi);
        for (e_k, v0, d) in [(4.698, 470.0, 4e5), (50.0, 100.0, 3.0)] {
            let spec = BarrierSpec::new(d, v0, 1e-6 * (v0 - e_k)).unwrap();
            let k = kinematics(e_k, &spec, &p).unwrap();
            let sol = scatter(&k, d, &coherent_spinor(o));
            let reference = free_precession_nonrel_angle(o, sol.phase_difference());
            worst[0] = worst[0].max(spin_expectations(&sol).combined.max_abs_diff(&reference));
        }
        for (e_k, v0, d) in [(2766.83, 6000.0, 4e5), (300.0, 1000.0, 0.5)] {
            let spec = BarrierSpec::new(d, v0, 1e-6 * (v0 - e_k)).unwrap();
            let k = rel_kinematics_kinetic(e_k, &spec, &p).unwrap();
            let sol = rel_scatter(&k, d, &coherent_spinor(o));
            let reference = free_precession_rel_angle(o, sol.phase_difference(), k.f0);
            worst[1] = worst[1].max(rel_spin_expectations(&sol).combined.max_abs_diff(&reference));
        }
    }
    Outcome::check(
        worst[0] < 1e-8 && worst[1] < 1e-8,
        format!("max component deviation: nonrel {:.2e}, rel {:.2e} (< 1e-8)", worst[0], worst[1]),
    )
}


fn dwell_quadrature() -> Outcome {
    let p = neutron();
    let inc = coherent_spinor(SpinOrientation::new(0.8, 0.3));
    let mut worst = [0.0f64; 2];
    for (e_k, v0, d) in [(4.698, 470.0, 1.0), (50.0, 100.0, 3.0), (0.5, 10.0, 20.0)] {
        let spec = BarrierSpec::new(d, v0, 0.0).unwrap();
        let k = kinematics(e_k, &spec, &p).unwrap();
        let sol = scatter(&k, d, &inc);
        match oracle::numeric_dwell_nonrel(&sol, 1e-11) {
            Ok(q) => {
                let closed = nonrel::times_from(&k, d).tau_d;
                worst[0] = worst[0].max((q.value - closed).abs() / closed);
            }
            Err(e) => return Outcome::failed(format!("nonrel quadrature: {e}")),
        }
    }
    for (e_k, v0, d) in [(2766.83, 6000.0, 0.05), (300.0, 1000.0, 0.5), (1.0, 20.0, 10.0)] {
        let spec = BarrierSpec::new(d, v0, 0.0).unwrap();
        let k = rel_kinematics_kinetic(e_k, &spec, &p).unwrap();
        let sol = rel_scatter(&k, d, &inc);
        match oracle::numeric_dwell_rel(&sol, 1e-11) {
            Ok(q) => {
                let closed = rel::rel_times_from(&k, d).tau_d;
                worst[1] = worst[1].max((q.value - closed).abs() / closed);
            }
            Err(e) => return Outcome::failed(format!("rel quadrature: {e}")),
        }
    }
    Outcome::check(
        worst[0] < 1e-8 && worst[1] < 1e-8,
        format!("max relative deviation: nonrel {:.2e}, rel {:.2e} (< 1e-8)", worst[0], worst[1]),
    )
}

fn monotonicity() -> Outcome {
    let cfg = SweepConfig::with_default_range(Regime::Nonrel, 500, low_barrier(), neutron()).unwrap();
    let out = run_sweep(&cfg).unwrap();
    if !out.errors.is_empty() || out.rows.len() != 500 {
        return Outcome::failed(format!("{} row errors", out.errors.len()));
    }
    let increasing = out.rows.windows(2).all(|w| w[1].tau_l > w[0].tau_l);
    let p = neutron();
    let at_op = nonrel::times(0.5 * p.rest_energy() * 1e-2, &low_barrier(), &p).unwrap();
    Outcome::check(
        increasing && at_op.ratio < 1.0,
        format!(
            "τ_L strictly increasing over 500 points: {increasing}; r at v = 0.1c: {:.3e} (< 1)",
            at_op.ratio
        ),
    )
}

fn nonrel_limit() -> Outcome {
    let p = neutron();
    let mc2 = p.rest_energy();
    let spec = BarrierSpec::new(1000.0, 1e-6 * mc2, 0.0).unwrap();
    let e_k = 1e-8 * mc2;
    match (nonrel::times(e_k, &spec, &p), rel::rel_times(e_k, &spec, &p)) {
        (Ok(a), Ok(b)) => {
            let diff = (a.tau_l - b.tau_l).abs() / a.tau_l;
            Outcome::check(
                diff < 1e-4,
                format!("τ_L nonrel {:.6e} s, rel {:.6e} s, relative difference {diff:.2e} (< 1e-4)", a.tau_l, b.tau_l),
            )
        }
        (Err(e), _) | (_, Err(e)) => Outcome::failed(e.to_string()),
    }
}

fn main() -> ExitCode {
    let criteria: [(&str, Criterion); 11] = [
        ("identity τ_d = τ_L, nonrelativistic", identity_nonrel),
        ("identity τ_d = τ_L, relativistic", identity_rel),
        ("apparent speed, nonrelativistic", speed_nonrel),
        ("apparent speed, relativistic", speed_rel),
        ("probability conservation", conservation),
        ("oracle equivalence", oracle_equivalence),
        ("expansion order", expansion_order),
        ("spin-clock consistency", spin_clock),
        ("dwell-time quadrature", dwell_quadrature),
        ("monotonicity and r < 1", monotonicity),
        ("relativistic to nonrelativistic limit", nonrel_limit),
    ];
    let mut failures = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        let status = if o.passed { "PASS" } else { "FAIL" };
        println!("criterion {:>2} {status} {name}: {}", i + 1, o.detail);
        if !o.passed {
            failures += 1;
        }
    }
    println!("acceptance: {} passed, {failures} failed", criteria.len() - failures);
    if failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}

use std::f64::consts::FRAC_PI_2;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use larmor_clock::nonrel::{kinematics, scatter, spin_expectations};
use larmor_clock::rel::{rel_kinematics_kinetic, rel_scatter, rel_spin_expectations};
use larmor_clock::spinlab::{
    coherent_spinor, free_precession_nonrel_angle, free_precession_rel_angle, SpinExpectation, SpinOrientation,
    SpinVector,
};
use larmor_clock::sweep::{self, Regime, SweepConfig};
use larmor_clock::verify::run_checks;
use larmor_clock::{BarrierSpec, Error, ParticleSpec, Result};

#[derive(Parser)]
#[command(name = "larmor-clock", version, about = "Larmor-clock tunneling times through a magnetized barrier")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Times, probabilities and spin vectors at one kinetic energy.
    Compute {
        #[command(flatten)]
        barrier: BarrierArgs,
        #[arg(long)]
        ek_mev: f64,
        /// Polar angle of the incoming spin (rad).
        #[arg(long, default_value_t = FRAC_PI_2)]
        theta: f64,
        /// Azimuth of the incoming spin (rad).
        #[arg(long, default_value_t = 0.0)]
        phi: f64,
    },
    /// Kinetic-energy sweep written as CSV.
    Sweep {
        #[command(flatten)]
        barrier: BarrierArgs,
        #[arg(long, num_args = 2, value_names = ["MIN", "MAX"])]
        ek_range: Option<Vec<f64>>,
        #[arg(long, default_value_t = sweep::DEFAULT_POINTS)]
        points: usize,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Closed forms against each other and the numeric oracles.
    Verify {
        #[command(flatten)]
        barrier: BarrierArgs,
    },
}

#[derive(Args)]
struct BarrierArgs {
    #[arg(long, default_value = "nonrel")]
    regime: Regime,
    #[arg(long, default_value_t = 470.0)]
    v0_mev: f64,
    /// Full barrier width 2d.
    #[arg(long, default_value_t = 8.0)]
    width_angstrom: f64,
    /// Zeeman splitting; `compute` defaults to 1e-6·(V0 − E_k), the others to 0.
    #[arg(long)]
    zeeman_mev: Option<f64>,
}

impl BarrierArgs {
    fn spec(&self, default_zeeman: f64) -> Result<BarrierSpec> {
        BarrierSpec::from_full_width_angstrom(
            self.width_angstrom,
            self.v0_mev,
            self.zeeman_mev.unwrap_or(default_zeeman),
        )
    }
}

fn io_err(source: io::Error) -> Error {
    Error::Io {
        path: PathBuf::from("<stdout>"),
        source,
    }
}

fn vector(v: &SpinVector) -> String {
    format!("({:.12e}, {:.12e}, {:.12e})", v.s1, v.s2, v.s3)
}

fn expectation(e: &Result<SpinExpectation>) -> String {
    match e {
        Ok(e) => format!("{} weight={:.12e}", vector(&e.direction), e.weight),
        Err(err) => format!("undefined ({})", err.kind()),
    }
}

fn compute(barrier: &BarrierArgs, e_k: f64, theta: f64, phi: f64) -> Result<()> {
    let spec = barrier.spec(1e-6 * (barrier.v0_mev - e_k).max(0.0))?;
    let particle = ParticleSpec::neutron();
    let orient = SpinOrientation::new(theta, phi);
    let incoming = coherent_spinor(orient);
    let mut lines = Vec::new();
    let report = barrier.regime.times(e_k, &spec.with_zeeman(0.0)?, &particle)?;
    let (probs, phase, spins, reference) = match barrier.regime {
        Regime::Nonrel => {
            let k = kinematics(e_k, &spec, &particle)?;
            let sol = scatter(&k, spec.half_width(), &incoming);
            let sp = spin_expectations(&sol);
            let phase = sol.phase_difference();
            (
                sol.probabilities(),
                phase,
                (sp.transmitted, sp.reflected, sp.combined),
                free_precession_nonrel_angle(orient, phase),
            )
        }
        Regime::Rel => {
            let k = rel_kinematics_kinetic(e_k, &spec, &particle)?;
            let sol = rel_scatter(&k, spec.half_width(), &incoming);
            let sp = rel_spin_expectations(&sol);
            let phase = sol.phase_difference();
            (
                sol.probabilities(),
                phase,
                (sp.transmitted, sp.reflected, sp.combined),
                free_precession_rel_angle(orient, phase, k.f0),
            )
        }
    };
    lines.push(format!("regime            {}", barrier.regime));
    lines.push(format!("E_k_MeV           {e_k:.12e}"));
    lines.push(format!("zeeman_MeV        {:.12e}", spec.zeeman()));
    lines.push(format!("tau_L_s           {:.12e}", report.tau_l));
    lines.push(format!("tau_d_s           {:.12e}", report.tau_d));
    lines.push(format!("tau_L0_s          {:.12e}", report.tau_l0));
    lines.push(format!("ratio_r           {:.12e}", report.ratio));
    lines.push(format!("apparent_speed    {:.12e} m/s", report.apparent_speed));
    lines.push(format!("log10_T           {:.12e}", report.log10_transmission));
    lines.push(format!("T_up T_down       {:.12e} {:.12e}", probs.t_up, probs.t_down));
    lines.push(format!("R_up R_down       {:.12e} {:.12e}", probs.r_up, probs.r_down));
    lines.push(format!("phase_difference  {phase:.12e}"));
    lines.push(format!("spin_transmitted  {}", expectation(&spins.0)));
    lines.push(format!("spin_reflected    {}", expectation(&spins.1)));
    lines.push(format!("spin_combined     {}", vector(&spins.2)));
    lines.push(format!("spin_free         {}", vector(&reference)));
    let mut out = io::stdout().lock();
    for l in lines {
        writeln!(out, "{l}").map_err(io_err)?;
    }
    Ok(())
}

fn run_sweep(barrier: &BarrierArgs, range: Option<&[f64]>, points: usize, out: Option<PathBuf>) -> Result<()> {
    let spec = barrier.spec(0.0)?;
    let particle = ParticleSpec::neutron();
    let cfg = match range {
        Some(r) => SweepConfig::new(barrier.regime, (r[0], r[1]), points, spec, particle)?,
        None => SweepConfig::with_default_range(barrier.regime, points, spec, particle)?,
    };
    let outcome = sweep::run_sweep(&cfg)?;
    for e in &outcome.errors {
        eprintln!("warning: kind={} e_k={:e} message={}", e.error.kind(), e.e_k, e.error);
    }
    match out {
        Some(path) => sweep::emit_csv(&outcome.rows, &path),
        None => sweep::write_csv(&outcome.rows, io::stdout().lock()).map_err(io_err),
    }
}

fn verify(barrier: &BarrierArgs) -> Result<bool> {
    let spec = barrier.spec(0.0)?;
    let checks = run_checks(&spec, &ParticleSpec::neutron());
    let mut out = io::stdout().lock();
    for c in &checks {
        writeln!(out, "{c}").map_err(io_err)?;
    }
    Ok(checks.iter().all(|c| c.passed()))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if !e.use_stderr() => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("").trim_start_matches("error: ");
            eprintln!("error: kind=usage message={first}");
            return ExitCode::from(2);
        }
    };
    let result = match &cli.command {
        Command::Compute { barrier, ek_mev, theta, phi } => compute(barrier, *ek_mev, *theta, *phi).map(|_| true),
        Command::Sweep {
            barrier,
            ek_range,
            points,
            out,
        } => run_sweep(barrier, ek_range.as_deref(), *points, out.clone()).map(|_| true),
        Command::Verify { barrier } => verify(barrier),
    };
    match result {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => {
            eprintln!("error: kind=verification message=one or more checks failed");
            ExitCode::FAILURE
        }
        Err(e) => {
            eprintln!("error: kind={} message={e}", e.kind());
            ExitCode::FAILURE
        }
    }
}

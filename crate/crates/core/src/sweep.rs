//! Kinetic-energy sweeps and CSV output.

use std::fmt;
use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::barrier::{BarrierSpec, TimeReport};
use crate::error::{Error, Result};
use crate::units::ParticleSpec;
use crate::{nonrel, rel};

pub const CSV_HEADER: &str =
    "E_k_MeV,tau_L_s,tau_L0_s,tau_d_s,ratio_r,log10_T,apparent_speed_m_per_s";

pub const DEFAULT_POINTS: usize = 500;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Regime {
    Nonrel,
    Rel,
}

impl Regime {
    pub fn times(self, e_kinetic: f64, spec: &BarrierSpec, particle: &ParticleSpec) -> Result<TimeReport> {
        match self {
            Regime::Nonrel => nonrel::times(e_kinetic, spec, particle),
            Regime::Rel => rel::rel_times(e_kinetic, spec, particle),
        }
    }
}

impl fmt::Display for Regime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Regime::Nonrel => "nonrel",
            Regime::Rel => "rel",
        })
    }
}

impl FromStr for Regime {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nonrel" => Ok(Regime::Nonrel),
            "rel" => Ok(Regime::Rel),
            other => Err(Error::InvalidConfig(format!("unknown regime {other:?}"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    pub regime: Regime,
    pub e_min: f64,
    pub e_max: f64,
    pub points: usize,
    pub barrier: BarrierSpec,
    pub particle: ParticleSpec,
    pub output: Option<PathBuf>,
}

impl SweepConfig {
    pub fn new(
        regime: Regime,
        (e_min, e_max): (f64, f64),
        points: usize,
        barrier: BarrierSpec,
        particle: ParticleSpec,
    ) -> Result<Self> {
        let cfg = Self {
            regime,
            e_min,
            e_max,
            points,
            barrier,
            particle,
            output: None,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    /// E_k from 1% to 99% of the tunneling ceiling.
    pub fn with_default_range(regime: Regime, points: usize, barrier: BarrierSpec, particle: ParticleSpec) -> Result<Self> {
        let ceiling = barrier.tunneling_ceiling();
        Self::new(regime, (0.01 * ceiling, 0.99 * ceiling), points, barrier, particle)
    }

    pub fn with_output(mut self, path: impl Into<PathBuf>) -> Self {
        self.output = Some(path.into());
        self
    }

    pub fn validate(&self) -> Result<()> {
        let ceiling = self.barrier.tunneling_ceiling();
        if !(self.e_min > 0.0) {
            return Err(Error::InvalidConfig(format!("E_k min must be > 0, got {}", self.e_min)));
        }
        if !(self.e_max < ceiling) {
            return Err(Error::InvalidConfig(format!(
                "E_k max {} must be below the ceiling {ceiling}",
                self.e_max
            )));
        }
        if !(self.e_min < self.e_max) {
            return Err(Error::InvalidConfig(format!(
                "empty range [{}, {}]",
                self.e_min, self.e_max
            )));
        }
        if self.points < 2 {
            return Err(Error::InvalidConfig(format!("need at least 2 points, got {}", self.points)));
        }
        Ok(())
    }

    pub fn grid(&self) -> Vec<f64> {
        let n = self.points - 1;
        let step = (self.e_max - self.e_min) / n as f64;
        (0..self.points)
            .map(|i| if i == n { self.e_max } else { self.e_min + i as f64 * step })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub e_k: f64,
    pub tau_l: f64,
    pub tau_l0: f64,
    pub tau_d: f64,
    pub ratio_r: f64,
    pub log10_t: f64,
    pub apparent_speed: f64,
}

impl SweepRow {
    pub fn from_report(e_k: f64, t: &TimeReport) -> Self {
        Self {
            e_k,
            tau_l: t.tau_l,
            tau_l0: t.tau_l0,
            tau_d: t.tau_d,
            ratio_r: t.ratio,
            log10_t: t.log10_transmission,
            apparent_speed: t.apparent_speed,
        }
    }

    fn csv_line(&self) -> String {
        [
            self.e_k,
            self.tau_l,
            self.tau_l0,
            self.tau_d,
            self.ratio_r,
            self.log10_t,
            self.apparent_speed,
        ]
        .iter()
        .map(|v| format!("{v:.11e}"))
        .collect::<Vec<_>>()
        .join(",")
    }
}

#[derive(Debug)]
pub struct RowError {
    pub e_k: f64,
    pub error: Error,
}

#[derive(Debug, Default)]
pub struct SweepOutcome {
    pub rows: Vec<SweepRow>,
    pub errors: Vec<RowError>,
}

fn evaluate(cfg: &SweepConfig, e_k: f64) -> Result<SweepRow> {
    cfg.regime
        .times(e_k, &cfg.barrier, &cfg.particle)
        .map(|t| SweepRow::from_report(e_k, &t))
}

fn collect(results: Vec<(f64, Result<SweepRow>)>) -> SweepOutcome {
    let mut out = SweepOutcome::default();
    for (e_k, r) in results {
        match r {
            Ok(row) => out.rows.push(row),
            Err(error) => out.errors.push(RowError { e_k, error }),
        }
    }
    out
}

/// Evaluates every grid point in parallel; rows come back in grid order.
pub fn run_sweep(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let results = cfg
        .grid()
        .into_par_iter()
        .map(|e| (e, evaluate(cfg, e)))
        .collect();
    Ok(collect(results))
}

pub fn run_sweep_serial(cfg: &SweepConfig) -> Result<SweepOutcome> {
    cfg.validate()?;
    let results = cfg.grid().into_iter().map(|e| (e, evaluate(cfg, e))).collect();
    Ok(collect(results))
}

pub fn write_csv<W: Write>(rows: &[SweepRow], mut w: W) -> std::io::Result<()> {
    let mut sorted: Vec<&SweepRow> = rows.iter().collect();
    sorted.sort_by(|a, b| a.e_k.total_cmp(&b.e_k));
    writeln!(w, "{CSV_HEADER}")?;
    for row in sorted {
        writeln!(w, "{}", row.csv_line())?;
    }
    w.flush()
}

pub fn emit_csv(rows: &[SweepRow], path: &Path) -> Result<()> {
    let io = |source| Error::Io {
        path: path.to_path_buf(),
        source,
    };
    let file = File::create(path).map_err(io)?;
    write_csv(rows, BufWriter::new(file)).map_err(io)
}

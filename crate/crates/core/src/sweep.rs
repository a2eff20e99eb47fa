//! Parameter sweeps over `(R, B, KT)`, CSV output and threshold finders.
//!
//! Grid points are evaluated on a rayon pool whose size comes from
//! [`WORKERS_ENV`] (default: number of logical CPUs). Records are always
//! emitted in `(KT, B, R)` order, so output does not depend on scheduling.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::PathBuf;

use rayon::prelude::*;

use crate::correlations::{concurrence, quantum_discord, MinimizerOptions};
use crate::error::{Error, Result};
use crate::linalg::{partial_trace, von_neumann_entropy, Subsystem};
use crate::model::{Construction, ModelParams, HF_PEAK_DISTANCE};
use crate::optimize::bisect_boundary;

/// Environment variable holding the worker count for sweeps.
pub const WORKERS_ENV: &str = "HF_CORRELATIONS_WORKERS";

pub const CSV_HEADER: &str =
    "R,B,KT,J,concurrence,discord,s_ab,s_a,s_b,mutual_information,theta_opt";

/// Upper end of the death-radius bracket; `J(12) < 1e-8`.
pub const DEATH_RADIUS_MAX: f64 = 12.0;

const CRITICAL_KT_FLOOR: f64 = 1e-3;
const CRITICAL_KT_CEILING: f64 = 1e6;

#[derive(Clone, Debug, PartialEq)]
pub struct SweepConfig {
    pub r_min: f64,
    pub r_max: f64,
    pub r_steps: usize,
    pub b_values: Vec<f64>,
    pub kt_values: Vec<f64>,
    pub construction: Construction,
    pub minimizer: MinimizerOptions,
    pub out_path: PathBuf,
}

impl SweepConfig {
    pub fn validate(&self) -> Result<()> {
        let finite = |xs: &[f64]| xs.iter().all(|x| x.is_finite());
        if !(self.r_min.is_finite() && self.r_max.is_finite()) || self.r_min < 0.0 {
            return Err(Error::InvalidInput(format!(
                "R range must be finite and nonnegative, got [{}, {}]",
                self.r_min, self.r_max
            )));
        }
        if self.r_min >= self.r_max {
            return Err(Error::InvalidInput(format!(
                "r_min ({}) must be below r_max ({})",
                self.r_min, self.r_max
            )));
        }
        if self.r_steps < 2 {
            return Err(Error::InvalidInput(format!(
                "r_steps must be at least 2, got {}",
                self.r_steps
            )));
        }
        if self.b_values.is_empty() || !finite(&self.b_values) {
            return Err(Error::InvalidInput(
                "B list must be non-empty and finite".into(),
            ));
        }
        if self.kt_values.is_empty()
            || !finite(&self.kt_values)
            || self.kt_values.iter().any(|&k| k <= 0.0)
        {
            return Err(Error::InvalidInput(
                "KT list must be non-empty, finite and positive".into(),
            ));
        }
        self.minimizer.validate()
    }

    /// Uniform R grid with exact endpoints.
    pub fn r_grid(&self) -> Vec<f64> {
        let span = self.r_max - self.r_min;
        let last = self.r_steps - 1;
        (0..self.r_steps)
            .map(|i| {
                if i == last {
                    self.r_max
                } else {
                    self.r_min + span * i as f64 / last as f64
                }
            })
            .collect()
    }

    /// All grid points in `(KT, B, R)` lexicographic order.
    pub fn points(&self) -> Vec<(f64, f64, f64)> {
        let mut kts = self.kt_values.clone();
        kts.sort_by(f64::total_cmp);
        let mut bs = self.b_values.clone();
        bs.sort_by(f64::total_cmp);
        let rs = self.r_grid();
        let mut out = Vec::with_capacity(kts.len() * bs.len() * rs.len());
        for &kt in &kts {
            for &b in &bs {
                for &r in &rs {
                    out.push((kt, b, r));
                }
            }
        }
        out
    }
}

/// One evaluated grid point.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct CorrelationRecord {
    pub r: f64,
    pub b: f64,
    pub kt: f64,
    pub j: f64,
    pub concurrence: f64,
    pub discord: f64,
    pub s_ab: f64,
    pub s_a: f64,
    pub s_b: f64,
    pub mutual_information: f64,
    pub theta_opt: f64,
}

impl CorrelationRecord {
    pub fn csv_row(&self) -> String {
        [
            self.r,
            self.b,
            self.kt,
            self.j,
            self.concurrence,
            self.discord,
            self.s_ab,
            self.s_a,
            self.s_b,
            self.mutual_information,
            self.theta_opt,
        ]
        .iter()
        .map(|&x| format_number(x))
        .collect::<Vec<_>>()
        .join(",")
    }
}

/// Decimal text with 12 significant digits.
///
/// Magnitudes in `[1e-3, 1e15)` are written positionally with trailing
/// zeros trimmed; smaller nonzero magnitudes use scientific notation.
pub fn format_number(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return x.to_string();
    }
    let mag = x.abs();
    if !(1e-3..1e15).contains(&mag) {
        return format!("{x:.11e}");
    }
    let exponent = mag.log10().floor() as i32;
    let decimals = (11 - exponent).max(0) as usize;
    let s = format!("{x:.decimals$}");
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

pub fn evaluate_point(
    p: &ModelParams,
    construction: Construction,
    opts: &MinimizerOptions,
) -> Result<CorrelationRecord> {
    let rho = construction.density_matrix(p)?;
    let c = concurrence(&rho)?;
    let d = quantum_discord(&rho, opts)?;
    let s_b = von_neumann_entropy(&partial_trace(&rho, Subsystem::B)?)?;
    Ok(CorrelationRecord {
        r: p.r(),
        b: p.b(),
        kt: p.kt(),
        j: p.coupling().value(),
        concurrence: c.value,
        discord: d.value,
        s_ab: d.s_ab,
        s_a: d.s_a,
        s_b,
        mutual_information: (d.s_a + s_b - d.s_ab).max(0.0),
        theta_opt: d.optimal_basis.theta,
    })
}

/// Single-point report; same fields as one sweep row.
pub fn point_report(
    p: &ModelParams,
    construction: Construction,
    opts: &MinimizerOptions,
) -> Result<CorrelationRecord> {
    evaluate_point(p, construction, opts)
}

/// Worker count from [`WORKERS_ENV`], falling back to the CPU count.
pub fn worker_count() -> Result<usize> {
    match std::env::var(WORKERS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(n) if n > 0 => Ok(n),
            _ => Err(Error::InvalidInput(format!(
                "{WORKERS_ENV} must be a positive integer, got '{v}'"
            ))),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

/// Evaluates every grid point without touching the filesystem.
pub fn compute_sweep(cfg: &SweepConfig) -> Result<Vec<CorrelationRecord>> {
    cfg.validate()?;
    let points = cfg.points();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(worker_count()?)
        .build()
        .map_err(|e| Error::InvalidInput(format!("cannot start worker pool: {e}")))?;
    pool.install(|| {
        points
            .par_iter()
            .map(|&(kt, b, r)| {
                let p = ModelParams::new(r, b, kt)?;
                evaluate_point(&p, cfg.construction, &cfg.minimizer)
            })
            .collect()
    })
}

pub fn write_csv<W: Write>(mut w: W, records: &[CorrelationRecord]) -> std::io::Result<()> {
    writeln!(w, "{CSV_HEADER}")?;
    for rec in records {
        writeln!(w, "{}", rec.csv_row())?;
    }
    w.flush()
}

/// Runs the sweep and writes it to `cfg.out_path`. The output file is
/// created before any evaluation so an unwritable path fails fast.
pub fn run_sweep(cfg: &SweepConfig) -> Result<Vec<CorrelationRecord>> {
    cfg.validate()?;
    let file = File::create(&cfg.out_path)?;
    let records = compute_sweep(cfg)?;
    write_csv(BufWriter::new(file), &records)?;
    Ok(records)
}

fn signed_concurrence(r: f64, b: f64, kt: f64, construction: Construction) -> Result<f64> {
    let rho = construction.density_matrix(&ModelParams::new(r, b, kt)?)?;
    Ok(concurrence(&rho)?.signed())
}

/// Runs `bisect_boundary` on a fallible predicate, surfacing the first error.
fn bisect_fallible<F>(mut f: F, inside: f64, outside: f64, tol: f64) -> Result<f64>
where
    F: FnMut(f64) -> Result<bool>,
{
    let mut err = None;
    let x = bisect_boundary(
        |x| match f(x) {
            Ok(v) => v,
            Err(e) => {
                err.get_or_insert(e);
                false
            }
        },
        inside,
        outside,
        tol,
    );
    match err {
        Some(e) => Err(e),
        None => Ok(x),
    }
}

fn check_tol(tol: f64) -> Result<()> {
    if tol > 0.0 && tol.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!(
            "tolerance must be positive, got {tol}"
        )))
    }
}

/// Distance beyond which concurrence is exactly zero, by bisection on the
/// sign of `p - q - r - s` over `R ∈ [1.25, 12]`.
pub fn find_death_radius(b: f64, kt: f64, construction: Construction, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    let entangled = |r: f64| signed_concurrence(r, b, kt, construction).map(|s| s > 0.0);
    if !entangled(HF_PEAK_DISTANCE)? {
        return Err(Error::NoEntanglement(format!(
            "concurrence vanishes at the coupling peak R={HF_PEAK_DISTANCE} (B={b}, KT={kt})"
        )));
    }
    if entangled(DEATH_RADIUS_MAX)? {
        return Err(Error::NoEntanglement(format!(
            "concurrence is still positive at R={DEATH_RADIUS_MAX} (B={b}, KT={kt})"
        )));
    }
    bisect_fallible(entangled, HF_PEAK_DISTANCE, DEATH_RADIUS_MAX, tol)
}

/// Largest temperature at which the concurrence at the coupling peak
/// `R = 1.25` is still positive.
pub fn find_critical_kt(b: f64, construction: Construction, tol: f64) -> Result<f64> {
    check_tol(tol)?;
    if !b.is_finite() {
        return Err(Error::Domain(format!("B must be finite, got {b}")));
    }
    let entangled =
        |kt: f64| signed_concurrence(HF_PEAK_DISTANCE, b, kt, construction).map(|s| s > 0.0);
    // Bracket outward from KT = 1 so a large field cannot push the lower end
    // into the regime where the central weights underflow.
    let (mut lo, mut hi) = (1.0, 1.0);
    if entangled(1.0)? {
        while entangled(hi)? {
            lo = hi;
            hi *= 2.0;
            if hi > CRITICAL_KT_CEILING {
                return Err(Error::Domain(format!(
                    "concurrence stays positive up to KT={CRITICAL_KT_CEILING}"
                )));
            }
        }
    } else {
        while !entangled(lo)? {
            hi = lo;
            lo *= 0.5;
            if lo < CRITICAL_KT_FLOOR {
                return Err(Error::NoEntanglement(format!(
                    "no entanglement at R={HF_PEAK_DISTANCE} for any KT >= {CRITICAL_KT_FLOOR} (B={b})"
                )));
            }
        }
    }
    bisect_fallible(entangled, lo, hi, tol)
}

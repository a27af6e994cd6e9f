//! Repulsion metrics and parameter studies built on the pressure engine.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::lifshitz::{pressure_term, total_pressure, CavityConfig, EngineSettings, PressureDecomposition};
use crate::materials::{Material, ResponseModel};
use crate::reflection::{Polarization, Thickness};
use crate::solve::{brent, golden_max};

/// Lower end of the automatic bracket scan, m.
pub const SCAN_MIN: f64 = 10e-9;
/// Upper end of the automatic bracket scan, m.
pub const SCAN_MAX: f64 = 100e-6;
pub const POINTS_PER_OCTAVE: u32 = 8;
/// Engine tolerances are divided by this inside root and extremum searches.
pub const SOLVER_TIGHTENING: f64 = 100.0;
/// Relative tolerance on d for the transition separation.
pub const TRANSITION_REL_TOL: f64 = 1e-6;
/// Relative tolerance on d for the location of maximum repulsion.
pub const MAXIMUM_REL_TOL: f64 = 1e-4;
/// Bracket for μ(0) in the zero-pressure locus.
pub const LOCUS_MU_RANGE: (f64, f64) = (1.0, 1e6);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RepulsionMetrics {
    pub d_transition: f64,
    pub d_at_max_repulsion: f64,
    /// Largest repulsive pressure, Pa (positive).
    pub p_max: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LocusPoint {
    pub eps0: f64,
    pub mu0: f64,
    pub d_t: f64,
    pub b: Thickness,
    pub temperature: f64,
}

fn pressure_at(d: f64, cav: &CavityConfig, settings: &EngineSettings) -> Result<f64> {
    Ok(total_pressure(d, cav, settings)?.total)
}

fn scan_grid() -> Vec<f64> {
    let octaves = (SCAN_MAX / SCAN_MIN).log2();
    let steps = (octaves * POINTS_PER_OCTAVE as f64).floor() as u32;
    let mut grid: Vec<f64> = (0..=steps)
        .map(|i| SCAN_MIN * 2f64.powf(i as f64 / POINTS_PER_OCTAVE as f64))
        .collect();
    if *grid.last().unwrap() < SCAN_MAX * (1.0 - 1e-12) {
        grid.push(SCAN_MAX);
    }
    grid
}

/// Finds a separation interval on which the pressure turns from attractive to
/// repulsive, scanning outward from 1 μm on the octave grid.
fn scan_for_bracket(cav: &CavityConfig, settings: &EngineSettings) -> Result<(f64, f64, f64, f64)> {
    let grid = scan_grid();
    let start = grid.iter().position(|&d| d >= 1e-6).unwrap_or(0);
    let p_start = pressure_at(grid[start], cav, settings)?;

    if p_start < 0.0 {
        let mut prev = (grid[start], p_start);
        for &d in &grid[start + 1..] {
            let p = pressure_at(d, cav, settings)?;
            if p > 0.0 {
                return Ok((prev.0, d, prev.1, p));
            }
            prev = (d, p);
        }
        Err(Error::NoTransition(format!(
            "pressure is purely attractive between {SCAN_MIN:e} m and {SCAN_MAX:e} m"
        )))
    } else if p_start > 0.0 {
        let mut prev = (grid[start], p_start);
        for &d in grid[..start].iter().rev() {
            let p = pressure_at(d, cav, settings)?;
            if p < 0.0 {
                return Ok((d, prev.0, p, prev.1));
            }
            prev = (d, p);
        }
        Err(Error::NoTransition(format!("pressure is repulsive down to {SCAN_MIN:e} m")))
    } else {
        Err(Error::NoTransition("pressure vanishes identically".into()))
    }
}

/// Separation at which the total pressure changes from attraction to
/// repulsion.
///
/// With `bracket = Some((d_lo, d_hi))` the pressure must be negative at
/// `d_lo` and positive at `d_hi`; otherwise an octave scan over
/// [10 nm, 100 μm] locates one.
pub fn find_transition(cav: &CavityConfig, bracket: Option<(f64, f64)>, settings: &EngineSettings) -> Result<f64> {
    let tight = settings.tightened(SOLVER_TIGHTENING);
    let (lo, hi, p_lo, p_hi) = match bracket {
        Some((lo, hi)) => {
            let p_lo = pressure_at(lo, cav, &tight)?;
            let p_hi = pressure_at(hi, cav, &tight)?;
            if !(p_lo < 0.0 && p_hi > 0.0) {
                return Err(Error::NoTransition(format!(
                    "no attraction-to-repulsion change in [{lo:e}, {hi:e}] m (P = {p_lo:e}, {p_hi:e} Pa)"
                )));
            }
            (lo, hi, p_lo, p_hi)
        }
        None => scan_for_bracket(cav, &tight)?,
    };
    let root = brent(
        |d| pressure_at(d, cav, &tight),
        lo,
        hi,
        p_lo,
        p_hi,
        |d| TRANSITION_REL_TOL * d.abs(),
        200,
    )?;
    Ok(root.x)
}

const MAX_SCAN_RATIO: f64 = 1.090_507_732_665_257_7; // 2^(1/8)

/// Transition separation and the location and size of the largest repulsion.
///
/// The search for the maximum starts at `max(d_start, d_T)` and walks the
/// octave grid in whichever direction the pressure increases until the peak
/// is bracketed, then refines it by golden-section search.
pub fn find_max_repulsion(cav: &CavityConfig, d_start: f64, settings: &EngineSettings) -> Result<RepulsionMetrics> {
    let d_t = find_transition(cav, None, settings)?;
    max_repulsion_beyond(cav, d_t, d_start, settings)
}

/// [`find_max_repulsion`] for a cavity whose transition separation `d_t` is
/// already known.
pub fn max_repulsion_beyond(cav: &CavityConfig, d_t: f64, d_start: f64, settings: &EngineSettings) -> Result<RepulsionMetrics> {
    let tight = settings.tightened(SOLVER_TIGHTENING);
    let p = |d: f64| pressure_at(d, cav, &tight);

    let x0 = d_start.max(d_t * MAX_SCAN_RATIO);
    let p0 = p(x0)?;
    let x1 = x0 * MAX_SCAN_RATIO;
    let p1 = p(x1)?;

    let (lo, hi) = if p1 >= p0 {
        let (mut a, mut b, mut pb) = (x0, x1, p1);
        loop {
            let c = b * MAX_SCAN_RATIO;
            if c > 10.0 * SCAN_MAX {
                return Err(Error::NoTransition(format!("repulsion keeps growing beyond {:e} m", 10.0 * SCAN_MAX)));
            }
            let pc = p(c)?;
            if pc < pb {
                break (a, c);
            }
            a = b;
            b = c;
            pb = pc;
        }
    } else {
        let (mut b, mut c, mut pb) = (x0, x1, p0);
        loop {
            let a = (b / MAX_SCAN_RATIO).max(d_t);
            if a <= d_t {
                break (d_t, c);
            }
            let pa = p(a)?;
            if pa < pb {
                break (a, c);
            }
            c = b;
            b = a;
            pb = pa;
        }
    };

    let best = golden_max(p, lo, hi, MAXIMUM_REL_TOL, 200)?;
    let resolution = total_pressure(best.x, cav, &tight)?.quadrature_error_estimate;
    if !(best.value > resolution) {
        return Err(Error::NoTransition(format!(
            "repulsive lobe ({:e} Pa) is below solver resolution",
            best.value
        )));
    }
    Ok(RepulsionMetrics { d_transition: d_t, d_at_max_repulsion: best.x, p_max: best.value })
}

/// Fixed part of a zero-pressure locus: everything except ε(0).
#[derive(Debug, Clone, PartialEq)]
pub struct LocusSetup {
    pub left: Material,
    /// Permittivity whose static value is rescaled to each requested ε(0).
    pub eps_template: ResponseModel,
    /// Permeability whose static value is solved for.
    pub mu_template: ResponseModel,
    pub d_t: f64,
    pub thickness: Thickness,
    pub temperature: f64,
}

impl LocusSetup {
    /// Au (plasma) against a YIG-like slab.
    pub fn au_yig_like(d_t: f64, thickness: Thickness, temperature: f64) -> Self {
        let yig = crate::materials::default_yig_like();
        Self {
            left: Material::au_plasma(),
            eps_template: yig.epsilon,
            mu_template: yig.mu,
            d_t,
            thickness,
            temperature,
        }
    }

    pub fn cavity(&self, eps0: f64, mu0: f64) -> Result<CavityConfig> {
        let right = Material::new(self.eps_template.with_static_value(eps0)?, self.mu_template.with_static_value(mu0)?)?;
        CavityConfig::new(self.left.clone(), right, self.thickness, self.temperature)
    }
}

/// μ(0) at which the total pressure at `setup.d_t` vanishes for the given ε(0).
pub fn solve_locus(eps0: f64, setup: &LocusSetup, settings: &EngineSettings) -> Result<LocusPoint> {
    let tight = settings.tightened(SOLVER_TIGHTENING);
    let d = setup.d_t;
    let (mu_lo, mu_hi) = LOCUS_MU_RANGE;

    // A quasistatic μ only enters the n = 0 TE term, so everything else is
    // computed once.
    let fast = matches!(setup.mu_template, ResponseModel::QuasistaticMagnetic { .. });
    let base = total_pressure(d, &setup.cavity(eps0, mu_lo)?, &tight)?;
    let rest = base.tm_zero + base.te_pos + base.tm_pos;
    let pressure = |mu0: f64| -> Result<f64> {
        let cav = setup.cavity(eps0, mu0)?;
        if fast {
            Ok(pressure_term(0, d, &cav, Polarization::Te, &tight)? + rest)
        } else {
            Ok(total_pressure(d, &cav, &tight)?.total)
        }
    };

    let p_lo = base.total;
    let p_hi = pressure(mu_hi)?;
    let sign = |p: f64| if p > 0.0 { "repulsive" } else if p < 0.0 { "attractive" } else { "zero" };
    if !(p_lo <= 0.0 && p_hi > 0.0) {
        return Err(Error::NoLocusRoot { lo: mu_lo, hi: mu_hi, sign_lo: sign(p_lo), sign_hi: sign(p_hi) });
    }
    let root = brent(pressure, mu_lo, mu_hi, p_lo, p_hi, |mu| 1e-12 * mu.abs(), 300)?;
    Ok(LocusPoint { eps0, mu0: root.x, d_t: d, b: setup.thickness, temperature: setup.temperature })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepParameter {
    Separation,
    Mu0,
    Thickness,
    Temperature,
    Eps0,
}

impl std::str::FromStr for SweepParameter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Ok(match s {
            "separation" => Self::Separation,
            "mu0" => Self::Mu0,
            "thickness" => Self::Thickness,
            "temperature" => Self::Temperature,
            "eps0" => Self::Eps0,
            other => return Err(Error::Config(format!("unknown sweep parameter '{other}'"))),
        })
    }
}

impl SweepParameter {
    pub fn name(&self) -> &'static str {
        match self {
            Self::Separation => "separation",
            Self::Mu0 => "mu0",
            Self::Thickness => "thickness",
            Self::Temperature => "temperature",
            Self::Eps0 => "eps0",
        }
    }

    /// `base` with this parameter set to `value`. Separation leaves the
    /// cavity unchanged.
    pub fn apply(&self, base: &CavityConfig, value: f64) -> Result<CavityConfig> {
        let mut cav = base.clone();
        match self {
            Self::Separation => {}
            Self::Mu0 => cav.right.mu = cav.right.mu.with_static_value(value)?,
            Self::Eps0 => cav.right.epsilon = cav.right.epsilon.with_static_value(value)?,
            Self::Thickness => {
                cav.thickness = if value.is_infinite() { Thickness::Infinite } else { Thickness::Finite(value) }
            }
            Self::Temperature => cav.temperature = value,
        }
        cav.validate()?;
        Ok(cav)
    }
}

/// One grid point of a sweep. Separation sweeps fill `pressure`; all other
/// parameters fill `metrics`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub value: f64,
    pub pressure: Option<PressureDecomposition>,
    pub metrics: Option<RepulsionMetrics>,
    pub error: Option<Error>,
}

fn check_grid(grid: &[f64]) -> Result<()> {
    if grid.is_empty() {
        return Err(Error::Config("sweep grid is empty".into()));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::Config("sweep grid must be strictly ascending".into()));
    }
    Ok(())
}

/// Evaluates every grid point independently. Failures are recorded per row.
pub fn sweep(
    parameter: SweepParameter,
    grid: &[f64],
    base: &CavityConfig,
    settings: &EngineSettings,
) -> Result<Vec<SweepRecord>> {
    check_grid(grid)?;
    base.validate()?;
    let records = grid
        .par_iter()
        .map(|&value| {
            let outcome = parameter.apply(base, value).and_then(|cav| match parameter {
                SweepParameter::Separation => total_pressure(value, &cav, settings).map(|p| (Some(p), None)),
                _ => find_max_repulsion(&cav, 0.0, settings).map(|m| (None, Some(m))),
            });
            match outcome {
                Ok((pressure, metrics)) => SweepRecord { value, pressure, metrics, error: None },
                Err(e) => SweepRecord { value, pressure: None, metrics: None, error: Some(e) },
            }
        })
        .collect();
    Ok(records)
}

//! Lifshitz pressure between a semi-infinite plate and a slab across a vacuum
//! gap: Matsubara sum over imaginary frequencies and wave-vector quadrature,
//! split into the TE/TM contributions of ξ = 0 and ξ > 0.
//!
//! With `y = 2ρ_m d` each Matsubara term becomes
//!
//! ```text
//! P_n = −(k_B T/π) w_n (1/8d³) ∫_{y_min}^∞ y² R e^{−y}/(1 − R e^{−y}) dy
//! ```
//!
//! where `R = r^L r^{R,eff}`, `y_min = 2ξ_n d/c`, `w_0 = 1/2` and `w_n = 1`
//! otherwise. Negative pressure is attractive.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, HBAR, K_B};
use crate::error::{Error, Result};
use crate::materials::Material;
use crate::quadrature::{integrate, QuadratureSettings};
use crate::reflection::{effective_reflection, interface_coefficient, Polarization, StaticResponse, Thickness};

/// Full description of the plate-gap-plate problem. The gap is vacuum.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CavityConfig {
    /// Semi-infinite plate.
    pub left: Material,
    pub right: Material,
    pub thickness: Thickness,
    /// Kelvin.
    pub temperature: f64,
}

impl CavityConfig {
    pub fn new(left: Material, right: Material, thickness: Thickness, temperature: f64) -> Result<Self> {
        let cav = Self { left, right, thickness, temperature };
        cav.validate()?;
        Ok(cav)
    }

    pub fn validate(&self) -> Result<()> {
        self.left.validate()?;
        self.right.validate()?;
        if !(self.temperature.is_finite() && self.temperature > 0.0) {
            return Err(Error::Config(format!("temperature must be positive, got {}", self.temperature)));
        }
        if let Thickness::Finite(b) = self.thickness {
            if !(b.is_finite() && b > 0.0) {
                return Err(Error::Config(format!("thickness must be positive or infinite, got {b}")));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EngineSettings {
    /// Relative tolerance for both the wave-vector quadrature and the
    /// Matsubara truncation.
    pub rel_tol: f64,
    /// Absolute tolerance of each wave-vector integral, applied to the
    /// dimensionless integral `∫ y² R e^{−y}/(1 − R e^{−y}) dy`.
    pub abs_tol: f64,
    pub max_matsubara_terms: usize,
    /// Integration window above `y_min`, in e-folds.
    pub y_span: f64,
    pub max_intervals: usize,
}

impl Default for EngineSettings {
    fn default() -> Self {
        Self {
            rel_tol: 1e-9,
            abs_tol: 1e-10,
            max_matsubara_terms: 100_000,
            y_span: 60.0,
            max_intervals: 2000,
        }
    }
}

impl EngineSettings {
    pub fn validate(&self) -> Result<()> {
        if !(self.rel_tol > 0.0 && self.rel_tol < 1.0) {
            return Err(Error::Config(format!("rel_tol must lie in (0, 1), got {}", self.rel_tol)));
        }
        if !(self.abs_tol >= 0.0) {
            return Err(Error::Config(format!("abs_tol must be non-negative, got {}", self.abs_tol)));
        }
        if self.max_matsubara_terms < 1 {
            return Err(Error::Config("max_matsubara_terms must be at least 1".into()));
        }
        Ok(())
    }

    /// Tolerances divided by `factor`.
    pub fn tightened(&self, factor: f64) -> Self {
        Self { rel_tol: self.rel_tol / factor, abs_tol: self.abs_tol / factor, ..*self }
    }

    fn quadrature(&self) -> QuadratureSettings {
        QuadratureSettings { abs_tol: self.abs_tol, rel_tol: self.rel_tol, max_intervals: self.max_intervals }
    }
}

/// Pressure split into the four mode contributions, in Pa.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PressureDecomposition {
    pub total: f64,
    pub te_zero: f64,
    pub tm_zero: f64,
    pub te_pos: f64,
    pub tm_pos: f64,
    /// Matsubara indices evaluated, including n = 0.
    pub n_terms_used: usize,
    /// Summed quadrature error estimates plus the magnitude of the
    /// extrapolated Matsubara tail.
    pub quadrature_error_estimate: f64,
}

impl PressureDecomposition {
    pub fn nonzero(&self) -> f64 {
        self.te_pos + self.tm_pos
    }

    pub fn zero(&self) -> f64 {
        self.te_zero + self.tm_zero
    }

    fn scaled(&self, factor: f64) -> Self {
        Self {
            total: self.total * factor,
            te_zero: self.te_zero * factor,
            tm_zero: self.tm_zero * factor,
            te_pos: self.te_pos * factor,
            tm_pos: self.tm_pos * factor,
            n_terms_used: self.n_terms_used,
            quadrature_error_estimate: self.quadrature_error_estimate * factor.abs(),
        }
    }
}

/// `ξ_n = 2πn k_B T/ħ`
pub fn matsubara_frequency(n: usize, temperature: f64) -> f64 {
    2.0 * PI * n as f64 * K_B * temperature / HBAR
}

/// Casimir pressure between perfect mirrors, `−ħcπ²/(240 d⁴)`.
pub fn ideal_pressure(d: f64) -> f64 {
    -HBAR * C * PI * PI / (240.0 * d.powi(4))
}

/// Material responses frozen at one Matsubara frequency.
#[derive(Debug, Clone, Copy)]
enum TermOptics {
    Static {
        left: StaticResponse,
        right: StaticResponse,
    },
    Dynamic {
        /// (ξ/c)²
        q2: f64,
        eps_left: f64,
        mu_left: f64,
        eps_right: f64,
        mu_right: f64,
    },
}

impl TermOptics {
    fn at(n: usize, cav: &CavityConfig) -> Result<Self> {
        if n == 0 {
            return Ok(Self::Static { left: StaticResponse::of(&cav.left)?, right: StaticResponse::of(&cav.right)? });
        }
        let xi = matsubara_frequency(n, cav.temperature);
        let q = xi / C;
        Ok(Self::Dynamic {
            q2: q * q,
            eps_left: cav.left.epsilon.eval(xi)?,
            mu_left: cav.left.mu.eval(xi)?,
            eps_right: cav.right.epsilon.eval(xi)?,
            mu_right: cav.right.mu.eval(xi)?,
        })
    }

    /// `R = r^L r^{R,eff}` at `ρ_m = y/2d`.
    #[inline]
    fn round_trip(&self, rho_m: f64, pol: Polarization, b: Thickness) -> f64 {
        match *self {
            Self::Static { left, right } => {
                let (r_left, _) = left.reflection(rho_m, pol);
                let (r_right, rho_right) = right.reflection(rho_m, pol);
                r_left * effective_reflection(r_right, rho_right, b)
            }
            Self::Dynamic { q2, eps_left, mu_left, eps_right, mu_right } => {
                let base = rho_m * rho_m;
                let rho_left = (base + (eps_left * mu_left - 1.0) * q2).sqrt();
                let rho_right = (base + (eps_right * mu_right - 1.0) * q2).sqrt();
                let (s_left, s_right) = match pol {
                    Polarization::Tm => (eps_left, eps_right),
                    Polarization::Te => (mu_left, mu_right),
                };
                let r_left = interface_coefficient(rho_m, rho_left, 1.0, s_left);
                let r_right = interface_coefficient(rho_m, rho_right, 1.0, s_right);
                r_left * effective_reflection(r_right, rho_right, b)
            }
        }
    }
}

/// Dimensionless wave-vector integral and its error estimate.
fn term_integral(
    optics: &TermOptics,
    y_min: f64,
    d: f64,
    pol: Polarization,
    b: Thickness,
    settings: &EngineSettings,
) -> Result<(f64, f64)> {
    let integrand = |y: f64| {
        let decay = (-y).exp();
        if decay == 0.0 {
            return 0.0;
        }
        let r = optics.round_trip(y / (2.0 * d), pol, b);
        let re = r * decay;
        y * y * re / (1.0 - re)
    };
    let est = integrate(integrand, y_min, y_min + settings.y_span, &settings.quadrature());
    if !est.converged {
        return Err(Error::Convergence {
            message: format!("wave-vector quadrature did not converge (error estimate {:e})", est.error),
            partial: est.value,
        });
    }
    Ok((est.value, est.error))
}

fn prefactor(n: usize, d: f64, temperature: f64) -> f64 {
    let weight = if n == 0 { 0.5 } else { 1.0 };
    -K_B * temperature / PI * weight / (8.0 * d * d * d)
}

fn check_separation(d: f64) -> Result<()> {
    if d.is_finite() && d > 0.0 {
        Ok(())
    } else {
        Err(Error::Config(format!("separation must be positive, got {d}")))
    }
}

/// Contribution of Matsubara index `n` and one polarization, in Pa. The n = 0
/// weight of 1/2 is already applied.
pub fn pressure_term(n: usize, d: f64, cav: &CavityConfig, pol: Polarization, settings: &EngineSettings) -> Result<f64> {
    check_separation(d)?;
    let optics = TermOptics::at(n, cav)?;
    let y_min = 2.0 * matsubara_frequency(n, cav.temperature) * d / C;
    let (value, _) = term_integral(&optics, y_min, d, pol, cav.thickness, settings)?;
    Ok(prefactor(n, d, cav.temperature) * value)
}

/// Total pressure at separation `d`, summing Matsubara terms until three
/// consecutive terms fall below `rel_tol` times the running sum of
/// magnitudes, then adding a geometric tail.
pub fn total_pressure(d: f64, cav: &CavityConfig, settings: &EngineSettings) -> Result<PressureDecomposition> {
    check_separation(d)?;
    settings.validate()?;
    let b = cav.thickness;

    let mut error = 0.0;
    let mut eval = |n: usize| -> Result<[f64; 2]> {
        let optics = TermOptics::at(n, cav)?;
        let y_min = 2.0 * matsubara_frequency(n, cav.temperature) * d / C;
        let scale = prefactor(n, d, cav.temperature);
        let mut out = [0.0; 2];
        for (slot, pol) in out.iter_mut().zip(Polarization::BOTH) {
            let (v, e) = term_integral(&optics, y_min, d, pol, b, settings)?;
            *slot = scale * v;
            error += (scale * e).abs();
        }
        Ok(out)
    };

    let [te_zero, tm_zero] = eval(0)?;
    let mut magnitude = te_zero.abs() + tm_zero.abs();
    let mut pos = [0.0f64; 2];
    let mut last = [0.0f64; 2];
    let mut prev: [f64; 2];
    let mut small_run = 0;
    let mut n = 0;

    loop {
        n += 1;
        if n >= settings.max_matsubara_terms {
            let partial = te_zero + tm_zero + pos[0] + pos[1];
            return Err(Error::Convergence {
                message: format!("Matsubara sum not converged after {n} terms"),
                partial,
            });
        }
        let term = eval(n).map_err(|e| match e {
            Error::Convergence { message, partial } => Error::Convergence {
                message: format!("term n = {n}: {message}"),
                partial: te_zero + tm_zero + pos[0] + pos[1] + partial,
            },
            other => other,
        })?;
        prev = last;
        last = term;
        pos[0] += term[0];
        pos[1] += term[1];
        let size = term[0].abs() + term[1].abs();
        magnitude += size;
        if size <= settings.rel_tol * magnitude {
            small_run += 1;
            if small_run == 3 {
                break;
            }
        } else {
            small_run = 0;
        }
    }

    let mut tail_error = 0.0;
    for i in 0..2 {
        if prev[i] != 0.0 {
            let ratio = last[i] / prev[i];
            if ratio > 0.0 && ratio < 1.0 {
                let tail = last[i] * ratio / (1.0 - ratio);
                pos[i] += tail;
                tail_error += tail.abs();
            }
        }
    }

    let [te_pos, tm_pos] = pos;
    Ok(PressureDecomposition {
        total: te_zero + tm_zero + te_pos + tm_pos,
        te_zero,
        tm_zero,
        te_pos,
        tm_pos,
        n_terms_used: n + 1,
        quadrature_error_estimate: error + tail_error,
    })
}

/// [`total_pressure`] with every pressure field divided by `ideal_pressure(d)`.
pub fn normalized_decomposition(d: f64, cav: &CavityConfig, settings: &EngineSettings) -> Result<PressureDecomposition> {
    let p = total_pressure(d, cav, settings)?;
    Ok(p.scaled(1.0 / ideal_pressure(d)))
}

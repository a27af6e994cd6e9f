//! Closed-form approximations to the zero-frequency pressure of a metal
//! facing a thin, high-contrast plate.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::constants::{C, K_B};
use crate::error::{Error, Result};
use crate::lifshitz::{pressure_term, total_pressure, CavityConfig, EngineSettings};
use crate::materials::{ResponseModel, StaticLimit};
use crate::reflection::{effective_thickness, Polarization, Thickness};

/// Expansion parameters at one separation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExpansionContext {
    /// c/(d·ω_p) of the metallic plate.
    pub alpha: f64,
    /// TE effective thickness over d.
    pub beta_te: f64,
    /// TM effective thickness over d.
    pub beta_tm: f64,
    /// −2πd³·P(ξ>0)/(k_B·T).
    pub delta: f64,
}

fn plasma_frequency(model: &ResponseModel) -> Result<f64> {
    match model {
        ResponseModel::Plasma { omega_p } => Ok(*omega_p),
        other => Err(Error::UnsupportedModel(format!(
            "expansion needs a plasma-model metal, got {}",
            other.kind_name()
        ))),
    }
}

fn static_value(model: &ResponseModel, name: &str) -> Result<f64> {
    match model.static_limit()? {
        StaticLimit::Finite(v) => Ok(v),
        StaticLimit::Divergent { .. } => Err(Error::UnsupportedModel(format!("{name} of the plate diverges at zero frequency"))),
    }
}

impl ExpansionContext {
    /// Builds the context for `cav` at separation `d`. The β values use the
    /// exact zero-frequency effective thickness; δ comes from the full
    /// nonzero-frequency sum.
    pub fn for_cavity(d: f64, cav: &CavityConfig, settings: &EngineSettings) -> Result<Self> {
        cav.validate()?;
        let omega_p = plasma_frequency(&cav.left.epsilon)?;
        let b = match cav.thickness {
            Thickness::Finite(b) => b,
            Thickness::Infinite => return Err(Error::UnsupportedModel("expansion needs a finite plate".into())),
        };
        let eps0 = static_value(&cav.right.epsilon, "permittivity")?;
        let mu0 = static_value(&cav.right.mu, "permeability")?;
        let p = total_pressure(d, cav, settings)?;
        Ok(Self {
            alpha: C / (d * omega_p),
            beta_te: effective_thickness((mu0 - 1.0) / (mu0 + 1.0), b) / d,
            beta_tm: effective_thickness((eps0 - 1.0) / (eps0 + 1.0), b) / d,
            delta: delta_from_nonzero(p.nonzero(), d, cav.temperature),
        })
    }
}

pub fn delta_from_nonzero(p_nonzero: f64, d: f64, temperature: f64) -> f64 {
    -2.0 * PI * d.powi(3) * p_nonzero / (K_B * temperature)
}

fn prefactor(d: f64, temperature: f64) -> f64 {
    K_B * temperature / (2.0 * PI * d.powi(3))
}

/// First- and second-order TE coefficients for a plasma metal.
pub fn gamma_coefficients(alpha: f64) -> (f64, f64) {
    let g1 = 3.0 / 8.0 * (1.0 - 4.0 * alpha + 10.0 * alpha * alpha);
    let g2 = 99.0 / 128.0 * (1.0 - 5.0 * alpha + 15.0 * alpha * alpha);
    (g1, g2)
}

/// Padé [1/1] approximant of the zero-frequency pressure, Pa.
pub fn pade_pressure_zero_freq(ctx: &ExpansionContext, d: f64, temperature: f64, pol: Polarization) -> f64 {
    let pre = prefactor(d, temperature);
    match pol {
        Polarization::Te => {
            let (g1, g2) = gamma_coefficients(ctx.alpha);
            let beta = ctx.beta_te;
            if beta == 0.0 {
                return 0.0;
            }
            if beta.is_infinite() {
                return pre * g1 * g1 / g2;
            }
            pre * g1 * g1 * beta / (g2 * beta + g1)
        }
        Polarization::Tm => {
            let beta = ctx.beta_tm;
            if beta.is_infinite() {
                return -pre * 6.0 / 33.0;
            }
            -pre * 6.0 * beta / (33.0 * beta + 16.0)
        }
    }
}

/// Second-order Taylor expansion of the zero-frequency pressure, Pa.
pub fn taylor_pressure_zero_freq(ctx: &ExpansionContext, d: f64, temperature: f64, pol: Polarization) -> f64 {
    let pre = prefactor(d, temperature);
    match pol {
        Polarization::Te => {
            let (g1, g2) = gamma_coefficients(ctx.alpha);
            let beta = ctx.beta_te;
            pre * (g1 * beta - g2 * beta * beta)
        }
        Polarization::Tm => {
            let beta = ctx.beta_tm;
            -pre * (3.0 / 8.0 * beta - 99.0 / 128.0 * beta * beta)
        }
    }
}

/// μ(0) that cancels the pressure at separation `d` according to the Padé
/// approximants, with β_TE ≈ bμ(0)/(2d) and β_TM ≈ bε(0)/(2d).
pub fn analytic_mu_for_eps(eps0: f64, d: f64, b: f64, temperature: f64, omega_p: f64, p_nonzero: f64) -> Result<f64> {
    if !(d > 0.0 && b > 0.0 && temperature > 0.0 && omega_p > 0.0) {
        return Err(Error::Domain(format!(
            "d, b, T and ω_p must be positive (d = {d:e}, b = {b:e}, T = {temperature}, ω_p = {omega_p:e})"
        )));
    }
    let (g1, g2) = gamma_coefficients(C / (d * omega_p));
    let delta = delta_from_nonzero(p_nonzero, d, temperature);
    let h = b / (2.0 * d);
    let a = (6.0 + 33.0 * delta) * g1 * h;
    let bb = 16.0 * g1 * delta;
    let c = (33.0 * g1 * g1 - (6.0 + 33.0 * delta) * g2) * h;
    let dd = 16.0 * (g1 * g1 - g2 * delta);
    let den = c * eps0 + dd;
    let num = a * eps0 + bb;
    let scale = (c * eps0).abs() + 16.0 * (g1 * g1 + (g2 * delta).abs());
    if den.abs() <= 1e-12 * scale {
        return Err(Error::Singular(format!("analytic relation is singular at ε(0) = {eps0}")));
    }
    Ok(num / (h * den))
}

/// Leading terms of the plasma-metal TE reflection at zero frequency in
/// powers of ck/ω_p.
pub fn left_te_expansion(k: f64, omega_p: f64) -> f64 {
    let x = C * k / omega_p;
    -1.0 + 2.0 * x - 2.0 * x * x
}

/// Thin-plate zero-frequency reflection to leading order in k·b_eff.
pub fn small_beta_reflection(k: f64, b_eff: f64) -> f64 {
    let kb = k * b_eff;
    kb / (kb + 1.0)
}

/// Zero-frequency pressures from the engine next to both approximants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ApproxComparison {
    pub d: f64,
    pub context: ExpansionContext,
    pub te_engine: f64,
    pub te_pade: f64,
    pub te_taylor: f64,
    pub tm_engine: f64,
    pub tm_pade: f64,
    pub tm_taylor: f64,
}

pub fn compare_zero_frequency(d: f64, cav: &CavityConfig, settings: &EngineSettings) -> Result<ApproxComparison> {
    let ctx = ExpansionContext::for_cavity(d, cav, settings)?;
    let t = cav.temperature;
    Ok(ApproxComparison {
        d,
        context: ctx,
        te_engine: pressure_term(0, d, cav, Polarization::Te, settings)?,
        te_pade: pade_pressure_zero_freq(&ctx, d, t, Polarization::Te),
        te_taylor: taylor_pressure_zero_freq(&ctx, d, t, Polarization::Te),
        tm_engine: pressure_term(0, d, cav, Polarization::Tm, settings)?,
        tm_pade: pade_pressure_zero_freq(&ctx, d, t, Polarization::Tm),
        tm_taylor: taylor_pressure_zero_freq(&ctx, d, t, Polarization::Tm),
    })
}

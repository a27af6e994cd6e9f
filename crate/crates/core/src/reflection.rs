//! Fresnel coefficients on the imaginary frequency axis for half-spaces and a
//! single finite slab, plus the ξ = 0 limiting forms.

use serde::{Deserialize, Serialize};

use crate::constants::C;
use crate::error::{Error, Result};
use crate::materials::{Material, ResponseModel, StaticLimit};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Polarization {
    Te,
    Tm,
}

impl Polarization {
    pub const BOTH: [Polarization; 2] = [Polarization::Te, Polarization::Tm];
}

/// Transverse wave vector `k` (1/m) and imaginary frequency `xi` (rad/s).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub k: f64,
    pub xi: f64,
}

/// Slab thickness. `Infinite` marks a semi-infinite plate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum Thickness {
    Finite(f64),
    Infinite,
}

impl Thickness {
    pub fn is_infinite(&self) -> bool {
        matches!(self, Thickness::Infinite)
    }

    pub fn meters(&self) -> f64 {
        match self {
            Thickness::Finite(b) => *b,
            Thickness::Infinite => f64::INFINITY,
        }
    }
}

/// Local optical state of one medium at given kinematics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerOptics {
    pub epsilon: f64,
    pub mu: f64,
    /// Imaginary z-component of the wave vector, 1/m.
    pub rho: f64,
}

impl LayerOptics {
    pub fn new(kin: Kinematics, epsilon: f64, mu: f64) -> Self {
        Self { epsilon, mu, rho: rho(kin, epsilon, mu) }
    }

    pub fn vacuum(kin: Kinematics) -> Self {
        Self::new(kin, 1.0, 1.0)
    }
}

/// `√(k² + εμξ²/c²)`
pub fn rho(kin: Kinematics, epsilon: f64, mu: f64) -> f64 {
    let q = kin.xi / C;
    (kin.k * kin.k + epsilon * mu * q * q).sqrt()
}

/// `(ρ_gap·s_medium − ρ_medium·s_gap)/(ρ_gap·s_medium + ρ_medium·s_gap)` where
/// `s` is ε for TM and μ for TE.
#[inline]
pub fn interface_coefficient(rho_gap: f64, rho_medium: f64, gap_response: f64, medium_response: f64) -> f64 {
    let a = rho_gap * medium_response;
    let b = rho_medium * gap_response;
    (a - b) / (a + b)
}

/// Half-space reflection coefficient seen from the gap.
pub fn fresnel_halfspace(medium: &LayerOptics, gap: &LayerOptics, pol: Polarization) -> f64 {
    match pol {
        Polarization::Tm => interface_coefficient(gap.rho, medium.rho, gap.epsilon, medium.epsilon),
        Polarization::Te => interface_coefficient(gap.rho, medium.rho, gap.mu, medium.mu),
    }
}

/// Zero-frequency coefficient of a metallic plate with unit permeability.
///
/// TM is 1 for both plasma and Drude. TE is
/// `(k − √(k² + ω_p²/c²))/(k + √(k² + ω_p²/c²))` for plasma and 0 for Drude.
pub fn fresnel_left_zero_freq(k: f64, model: &ResponseModel, pol: Polarization) -> Result<f64> {
    if !model.is_metallic() {
        return Err(Error::UnsupportedModel(format!(
            "zero-frequency metal reflection needs a plasma or drude model, got {}",
            model.kind_name()
        )));
    }
    let limit = model.static_limit()?;
    Ok(static_halfspace(k, limit, 1.0, pol).0)
}

/// ξ → 0 limit of a half-space with permittivity limit `eps` and static
/// permeability `mu0`. Returns the reflection coefficient and ρ inside the
/// medium.
pub fn static_halfspace(k: f64, eps: StaticLimit, mu0: f64, pol: Polarization) -> (f64, f64) {
    match eps {
        StaticLimit::Finite(eps0) => {
            let r = match pol {
                Polarization::Tm => (eps0 - 1.0) / (eps0 + 1.0),
                Polarization::Te => (mu0 - 1.0) / (mu0 + 1.0),
            };
            (r, k)
        }
        StaticLimit::Divergent { eps_xi_squared } => {
            let rho = (k * k + mu0 * eps_xi_squared / (C * C)).sqrt();
            let r = match pol {
                Polarization::Tm => 1.0,
                Polarization::Te => interface_coefficient(k, rho, 1.0, mu0),
            };
            (r, rho)
        }
    }
}

/// Static description of a material used by the ξ = 0 Matsubara term.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StaticResponse {
    pub epsilon: StaticLimit,
    pub mu0: f64,
}

impl StaticResponse {
    pub fn of(material: &Material) -> Result<Self> {
        let mu0 = match material.mu.static_limit()? {
            StaticLimit::Finite(v) => v,
            StaticLimit::Divergent { .. } => {
                return Err(Error::UnsupportedModel("permeability cannot diverge at xi = 0".into()))
            }
        };
        Ok(Self { epsilon: material.epsilon.static_limit()?, mu0 })
    }

    pub fn reflection(&self, k: f64, pol: Polarization) -> (f64, f64) {
        static_halfspace(k, self.epsilon, self.mu0, pol)
    }
}

/// Reflection of a slab of thickness `b` with half-space coefficient `r`:
/// `r(1 − e^{−2ρb})/(1 − r²e^{−2ρb})`.
pub fn effective_reflection(r: f64, rho_r: f64, b: Thickness) -> f64 {
    let b = match b {
        Thickness::Infinite => return r,
        Thickness::Finite(b) => b,
    };
    let two_rho_b = 2.0 * rho_r * b;
    if two_rho_b == f64::INFINITY {
        return r;
    }
    // 1 − e^{−2ρb}, accurate for thin slabs
    let one_minus_x = -(-two_rho_b).exp_m1();
    if one_minus_x == 0.0 {
        return 0.0;
    }
    let r2 = r * r;
    r * one_minus_x / ((1.0 - r2) + r2 * one_minus_x)
}

/// Effective slab thickness `2b·r₀/(1 − r₀²)`.
pub fn effective_thickness(r0: f64, b: f64) -> f64 {
    2.0 * b * r0 / (1.0 - r0 * r0)
}

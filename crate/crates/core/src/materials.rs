//! Dielectric and magnetic response on the imaginary frequency axis.
//!
//! Every model is evaluated at `iξ` with `ξ ≥ 0` in rad/s and returns a real
//! value `≥ 1` that is non-increasing in `ξ`. The metallic models (plasma and
//! Drude) diverge at `ξ = 0`; their static behaviour is exposed through
//! [`StaticLimit`] instead of [`ResponseModel::eval`].

use std::f64::consts::FRAC_2_PI;
use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::constants::{AU_DRUDE_GAMMA, AU_PLASMA_FREQUENCY};
use crate::error::{Error, Result};
use crate::quadrature::{integrate, QuadratureSettings};

/// One undamped Lorentz oscillator contributing `strength / (1 + (ξ/ω)²)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Oscillator {
    pub strength: f64,
    /// Resonance angular frequency, rad/s.
    pub omega: f64,
}

/// Sample of the absorptive part of ε on the real frequency axis.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbsorptionSample {
    /// rad/s
    pub omega: f64,
    pub im_eps: f64,
}

pub const DEFAULT_LOW_TAIL_EXPONENT: f64 = 1.0;
pub const DEFAULT_HIGH_TAIL_EXPONENT: f64 = -3.0;

/// Tabulated Im ε(ω) with power-law extrapolation outside the sampled range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TabulatedSpectrum {
    pub samples: Vec<AbsorptionSample>,
    /// Im ε ∝ ω^a below the first sample. Must be positive.
    pub low_tail_exponent: f64,
    /// Im ε ∝ ω^a above the last sample. Must be negative.
    pub high_tail_exponent: f64,
}

impl TabulatedSpectrum {
    pub fn new(samples: Vec<AbsorptionSample>, low_tail_exponent: f64, high_tail_exponent: f64) -> Result<Self> {
        let spectrum = Self { samples, low_tail_exponent, high_tail_exponent };
        spectrum.validate()?;
        Ok(spectrum)
    }

    pub fn validate(&self) -> Result<()> {
        if self.samples.is_empty() {
            return Err(Error::Config("tabulated model has no samples".into()));
        }
        for (i, s) in self.samples.iter().enumerate() {
            if !(s.omega.is_finite() && s.omega > 0.0) {
                return Err(Error::Config(format!("sample {i}: omega must be positive and finite, got {}", s.omega)));
            }
            if !(s.im_eps.is_finite() && s.im_eps >= 0.0) {
                return Err(Error::Config(format!("sample {i}: im_eps must be non-negative, got {}", s.im_eps)));
            }
        }
        if let Some(i) = self.samples.windows(2).position(|w| w[1].omega <= w[0].omega) {
            return Err(Error::Config(format!(
                "sample {}: omega grid is not strictly increasing ({} after {})",
                i + 1,
                self.samples[i + 1].omega,
                self.samples[i].omega
            )));
        }
        if !(self.low_tail_exponent > 0.0 && self.low_tail_exponent.is_finite()) {
            return Err(Error::Config(format!(
                "low_tail_exponent must be positive for a convergent tail, got {}",
                self.low_tail_exponent
            )));
        }
        if !(self.high_tail_exponent < 0.0 && self.high_tail_exponent.is_finite()) {
            return Err(Error::Config(format!(
                "high_tail_exponent must be negative for a convergent tail, got {}",
                self.high_tail_exponent
            )));
        }
        Ok(())
    }
}

/// Response function ε(iξ) or μ(iξ).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ResponseModel {
    /// `1 + ω_p²/ξ²`
    Plasma { omega_p: f64 },
    /// `1 + ω_p²/(ξ(ξ + γ))`
    Drude { omega_p: f64, gamma: f64 },
    /// `1 + Σ C_j/(1 + (ξ/ω_j)²)`
    Lorentz { oscillators: Vec<Oscillator> },
    /// Kramers–Kronig transform of tabulated absorption.
    Tabulated(TabulatedSpectrum),
    /// Nondispersive.
    Constant { value: f64 },
    /// `mu0` at ξ = 0, 1 for every ξ > 0.
    QuasistaticMagnetic { mu0: f64 },
}

/// Behaviour of a response model as ξ → 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StaticLimit {
    Finite(f64),
    /// ε diverges; `eps_xi_squared` is lim ξ²ε(iξ) (ω_p² for plasma, 0 for Drude).
    Divergent { eps_xi_squared: f64 },
}

impl ResponseModel {
    pub fn plasma(omega_p: f64) -> Self {
        Self::Plasma { omega_p }
    }

    pub fn drude(omega_p: f64, gamma: f64) -> Self {
        Self::Drude { omega_p, gamma }
    }

    pub fn lorentz(oscillators: Vec<Oscillator>) -> Self {
        Self::Lorentz { oscillators }
    }

    pub fn constant(value: f64) -> Self {
        Self::Constant { value }
    }

    pub fn quasistatic_magnetic(mu0: f64) -> Self {
        Self::QuasistaticMagnetic { mu0 }
    }

    pub fn vacuum() -> Self {
        Self::Constant { value: 1.0 }
    }

    pub fn is_metallic(&self) -> bool {
        matches!(self, Self::Plasma { .. } | Self::Drude { .. })
    }

    /// Checks parameter ranges.
    pub fn validate(&self) -> Result<()> {
        let positive = |name: &str, v: f64| {
            if v.is_finite() && v > 0.0 {
                Ok(())
            } else {
                Err(Error::Config(format!("{name} must be positive and finite, got {v}")))
            }
        };
        match self {
            Self::Plasma { omega_p } => positive("omega_p", *omega_p),
            Self::Drude { omega_p, gamma } => {
                positive("omega_p", *omega_p)?;
                positive("gamma", *gamma)
            }
            Self::Lorentz { oscillators } => {
                for o in oscillators {
                    positive("oscillator omega", o.omega)?;
                    if !(o.strength.is_finite() && o.strength >= 0.0) {
                        return Err(Error::Config(format!(
                            "oscillator strength must be non-negative, got {}",
                            o.strength
                        )));
                    }
                }
                Ok(())
            }
            Self::Tabulated(spectrum) => spectrum.validate(),
            Self::Constant { value } => {
                if value.is_finite() && *value >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("constant response must be >= 1, got {value}")))
                }
            }
            Self::QuasistaticMagnetic { mu0 } => {
                if mu0.is_finite() && *mu0 >= 1.0 {
                    Ok(())
                } else {
                    Err(Error::Config(format!("mu0 must be >= 1, got {mu0}")))
                }
            }
        }
    }

    /// Value at `iξ`.
    pub fn eval(&self, xi: f64) -> Result<f64> {
        if !(xi >= 0.0) {
            return Err(Error::Domain(format!("xi must be non-negative, got {xi}")));
        }
        match self {
            Self::Plasma { omega_p } => {
                if xi == 0.0 {
                    return Err(Error::Domain(
                        "plasma model diverges at xi = 0; use the zero-frequency reflection path".into(),
                    ));
                }
                let ratio = omega_p / xi;
                Ok(1.0 + ratio * ratio)
            }
            Self::Drude { omega_p, gamma } => {
                if xi == 0.0 {
                    return Err(Error::Domain(
                        "Drude model diverges at xi = 0; use the zero-frequency reflection path".into(),
                    ));
                }
                Ok(1.0 + omega_p * omega_p / (xi * (xi + gamma)))
            }
            Self::Lorentz { oscillators } => Ok(1.0
                + oscillators
                    .iter()
                    .map(|o| {
                        let r = xi / o.omega;
                        o.strength / (1.0 + r * r)
                    })
                    .sum::<f64>()),
            Self::Tabulated(spectrum) => kk_to_imaginary_axis(spectrum, xi),
            Self::Constant { value } => Ok(*value),
            Self::QuasistaticMagnetic { mu0 } => Ok(if xi == 0.0 { *mu0 } else { 1.0 }),
        }
    }

    pub fn static_limit(&self) -> Result<StaticLimit> {
        Ok(match self {
            Self::Plasma { omega_p } => StaticLimit::Divergent { eps_xi_squared: omega_p * omega_p },
            Self::Drude { .. } => StaticLimit::Divergent { eps_xi_squared: 0.0 },
            _ => StaticLimit::Finite(self.eval(0.0)?),
        })
    }

    /// Returns a copy whose ξ = 0 value equals `target`.
    ///
    /// Lorentz strengths are multiplied by a common factor, keeping the
    /// resonance positions. Constant and quasistatic models are replaced
    /// outright.
    pub fn with_static_value(&self, target: f64) -> Result<Self> {
        if !(target.is_finite() && target >= 1.0) {
            return Err(Error::Config(format!("static value must be >= 1, got {target}")));
        }
        match self {
            Self::Lorentz { oscillators } => {
                let total: f64 = oscillators.iter().map(|o| o.strength).sum();
                if total == 0.0 {
                    if target == 1.0 {
                        return Ok(self.clone());
                    }
                    return Err(Error::UnsupportedModel(
                        "cannot rescale a Lorentz model with zero total strength".into(),
                    ));
                }
                let factor = (target - 1.0) / total;
                Ok(Self::Lorentz {
                    oscillators: oscillators
                        .iter()
                        .map(|o| Oscillator { strength: o.strength * factor, omega: o.omega })
                        .collect(),
                })
            }
            Self::Constant { .. } => Ok(Self::Constant { value: target }),
            Self::QuasistaticMagnetic { .. } => Ok(Self::QuasistaticMagnetic { mu0: target }),
            other => Err(Error::UnsupportedModel(format!(
                "static value of {} model cannot be rescaled",
                other.kind_name()
            ))),
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            Self::Plasma { .. } => "plasma",
            Self::Drude { .. } => "drude",
            Self::Lorentz { .. } => "lorentz",
            Self::Tabulated(_) => "tabulated",
            Self::Constant { .. } => "constant",
            Self::QuasistaticMagnetic { .. } => "quasistatic_magnetic",
        }
    }
}

pub fn eval_response(model: &ResponseModel, xi: f64) -> Result<f64> {
    model.eval(xi)
}

/// A plate material: permittivity and permeability.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Material {
    pub epsilon: ResponseModel,
    pub mu: ResponseModel,
}

impl Material {
    pub fn new(epsilon: ResponseModel, mu: ResponseModel) -> Result<Self> {
        epsilon.validate()?;
        mu.validate()?;
        if mu.is_metallic() {
            return Err(Error::UnsupportedModel("permeability cannot be a plasma or Drude model".into()));
        }
        Ok(Self { epsilon, mu })
    }

    pub fn vacuum() -> Self {
        Self { epsilon: ResponseModel::vacuum(), mu: ResponseModel::vacuum() }
    }

    /// Gold in the plasma model, ω_p = 9.0 eV.
    pub fn au_plasma() -> Self {
        Self { epsilon: ResponseModel::plasma(AU_PLASMA_FREQUENCY), mu: ResponseModel::vacuum() }
    }

    /// Gold in the Drude model, ω_p = 9.0 eV and γ = 0.035 eV.
    pub fn au_drude() -> Self {
        Self { epsilon: ResponseModel::drude(AU_PLASMA_FREQUENCY, AU_DRUDE_GAMMA), mu: ResponseModel::vacuum() }
    }

    pub fn validate(&self) -> Result<()> {
        Self::new(self.epsilon.clone(), self.mu.clone()).map(|_| ())
    }
}

/// Oscillators of the YIG-like permittivity: an infrared and an ultraviolet
/// resonance with ε(0) = 4.02.
pub const YIG_LIKE_OSCILLATORS: [Oscillator; 2] = [
    Oscillator { strength: 0.1, omega: 1.0e14 },
    Oscillator { strength: 2.92, omega: 7.5e15 },
];

pub const YIG_MU0: f64 = 160.0;

/// YIG-like magnetodielectric: two-oscillator permittivity with ε(0) = 4.02 and
/// quasistatic permeability μ(0) = 160.
pub fn default_yig_like() -> Material {
    Material {
        epsilon: ResponseModel::lorentz(YIG_LIKE_OSCILLATORS.to_vec()),
        mu: ResponseModel::quasistatic_magnetic(YIG_MU0),
    }
}

const KK_SUBDIVISIONS: usize = 16;

fn interpolate(a: &AbsorptionSample, b: &AbsorptionSample, omega: f64) -> f64 {
    if a.im_eps > 0.0 && b.im_eps > 0.0 {
        // power law between the two samples
        let slope = (b.im_eps / a.im_eps).ln() / (b.omega / a.omega).ln();
        a.im_eps * (omega / a.omega).powf(slope)
    } else {
        let t = (omega - a.omega) / (b.omega - a.omega);
        a.im_eps + t * (b.im_eps - a.im_eps)
    }
}

/// `∫_0^1 t^{a+1}/(t² + s²) dt`: low-frequency tail in units of the first sample.
fn low_tail_integral(exponent: f64, s: f64) -> f64 {
    if exponent == 1.0 {
        if s == 0.0 {
            1.0
        } else {
            1.0 - s * (1.0 / s).atan()
        }
    } else {
        low_tail_numeric(exponent, s)
    }
}

/// `∫_1^∞ t^{a+1}/(t² + s²) dt`: high-frequency tail in units of the last sample.
fn high_tail_integral(exponent: f64, s: f64) -> f64 {
    if exponent == -3.0 {
        if s < 1e-3 {
            let s2 = s * s;
            1.0 / 3.0 - s2 / 5.0 + s2 * s2 / 7.0
        } else {
            (1.0 - s.atan() / s) / (s * s)
        }
    } else {
        high_tail_numeric(exponent, s)
    }
}

// With v = t^a the low tail becomes (1/a)∫_0^1 v^{2/a}/(v^{2/a} + s²) dv.
fn low_tail_numeric(exponent: f64, s: f64) -> f64 {
    let p = 2.0 / exponent;
    let settings = QuadratureSettings { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 500 };
    integrate(|v: f64| {
        let w = v.powf(p);
        if w == 0.0 && s == 0.0 { 1.0 } else { w / (w + s * s) }
    }, 0.0, 1.0, &settings)
    .value
        / exponent
}

// With u = 1/t and v = u^{-a} the high tail becomes (1/|a|)∫_0^1 dv/(1 + s² v^{2/|a|}).
fn high_tail_numeric(exponent: f64, s: f64) -> f64 {
    let b = -exponent;
    let p = 2.0 / b;
    let settings = QuadratureSettings { abs_tol: 1e-14, rel_tol: 1e-12, max_intervals: 500 };
    integrate(|v: f64| 1.0 / (1.0 + s * s * v.powf(p)), 0.0, 1.0, &settings).value / b
}

/// ε(iξ) = 1 + (2/π)∫_0^∞ ω Im ε(ω)/(ω² + ξ²) dω for tabulated absorption.
///
/// Between samples Im ε is interpolated as a power law (linearly when a
/// sample is zero) and integrated with the trapezoidal rule on a refined
/// log-ω grid. The tails use the configured power laws.
pub fn kk_to_imaginary_axis(spectrum: &TabulatedSpectrum, xi: f64) -> Result<f64> {
    spectrum.validate()?;
    if !(xi >= 0.0) {
        return Err(Error::Domain(format!("xi must be non-negative, got {xi}")));
    }
    let samples = &spectrum.samples;
    let first = samples[0];
    let last = samples[samples.len() - 1];
    let xi2 = xi * xi;

    // In u = ln ω the integrand is ω² Im ε/(ω² + ξ²).
    let g = |omega: f64, im: f64| omega * omega * im / (omega * omega + xi2);

    let mut middle = 0.0;
    for pair in samples.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        let h = (b.omega / a.omega).ln() / KK_SUBDIVISIONS as f64;
        let mut prev = g(a.omega, a.im_eps);
        for j in 1..=KK_SUBDIVISIONS {
            let omega = if j == KK_SUBDIVISIONS { b.omega } else { a.omega * (h * j as f64).exp() };
            let im = if j == KK_SUBDIVISIONS { b.im_eps } else { interpolate(a, b, omega) };
            let cur = g(omega, im);
            middle += 0.5 * h * (prev + cur);
            prev = cur;
        }
    }

    let low = first.im_eps * low_tail_integral(spectrum.low_tail_exponent, xi / first.omega);
    let high = last.im_eps * high_tail_integral(spectrum.high_tail_exponent, xi / last.omega);

    Ok(1.0 + FRAC_2_PI * (low + middle + high))
}

/// Parses the optical data format: `#` comments, optional
/// `low_tail_exponent = x` / `high_tail_exponent = x` headers, then
/// `omega_rad_per_s, im_eps` rows in ascending ω.
pub fn parse_optical_data(text: &str, source: &str) -> Result<ResponseModel> {
    let ingest = |line: usize, message: String| Error::Ingest { path: source.to_string(), line, message };

    let mut low = DEFAULT_LOW_TAIL_EXPONENT;
    let mut high = DEFAULT_HIGH_TAIL_EXPONENT;
    let mut samples: Vec<AbsorptionSample> = Vec::new();

    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        if let Some((key, value)) = line.split_once('=') {
            if !samples.is_empty() {
                return Err(ingest(line_no, "header lines must precede data rows".into()));
            }
            let value: f64 = value
                .trim()
                .parse()
                .map_err(|_| ingest(line_no, format!("cannot parse header value '{}'", value.trim())))?;
            match key.trim() {
                "low_tail_exponent" => low = value,
                "high_tail_exponent" => high = value,
                other => return Err(ingest(line_no, format!("unknown header '{other}'"))),
            }
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        if fields.len() != 2 {
            return Err(ingest(line_no, format!("expected 2 comma-separated columns, found {}", fields.len())));
        }
        let omega: f64 = fields[0]
            .parse()
            .map_err(|_| ingest(line_no, format!("cannot parse omega '{}'", fields[0])))?;
        let im_eps: f64 = fields[1]
            .parse()
            .map_err(|_| ingest(line_no, format!("cannot parse im_eps '{}'", fields[1])))?;
        if !(omega.is_finite() && omega > 0.0) {
            return Err(ingest(line_no, format!("omega must be positive, got {omega}")));
        }
        if !(im_eps.is_finite() && im_eps >= 0.0) {
            return Err(ingest(line_no, format!("im_eps must be non-negative, got {im_eps}")));
        }
        if let Some(prev) = samples.last() {
            if omega <= prev.omega {
                return Err(ingest(
                    line_no,
                    format!("omega {omega} is not greater than the previous row's {}", prev.omega),
                ));
            }
        }
        samples.push(AbsorptionSample { omega, im_eps });
    }

    if samples.is_empty() {
        return Err(ingest(0, "no data rows".into()));
    }
    let spectrum = TabulatedSpectrum::new(samples, low, high).map_err(|e| ingest(0, e.to_string()))?;
    Ok(ResponseModel::Tabulated(spectrum))
}

pub fn load_optical_data(path: impl AsRef<Path>) -> Result<ResponseModel> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::Ingest {
        path: path.display().to_string(),
        line: 0,
        message: e.to_string(),
    })?;
    parse_optical_data(&text, &path.display().to_string())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lifshitz::matsubara_frequency;

    const FIRST_MATSUBARA_300K: f64 = 2.4678e14;

    #[test]
    fn plasma_at_its_frequency() {
        let m = ResponseModel::plasma(1.36734e16);
        assert!((m.eval(1.36734e16).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn metallic_models_reject_zero_frequency() {
        assert!(matches!(ResponseModel::plasma(1e16).eval(0.0), Err(Error::Domain(_))));
        assert!(matches!(ResponseModel::drude(1e16, 1e13).eval(0.0), Err(Error::Domain(_))));
    }

    #[test]
    fn quasistatic_permeability() {
        let m = ResponseModel::quasistatic_magnetic(160.0);
        assert_eq!(m.eval(0.0).unwrap(), 160.0);
        assert_eq!(m.eval(FIRST_MATSUBARA_300K).unwrap(), 1.0);
    }

    #[test]
    fn lorentz_static_value() {
        let m = ResponseModel::lorentz(vec![Oscillator { strength: 3.02, omega: 5.0e14 }]);
        assert!((m.eval(0.0).unwrap() - 4.02).abs() < 1e-15);
        assert_eq!(ResponseModel::constant(1.0).eval(3.3e15).unwrap(), 1.0);
    }

    #[test]
    fn empty_tabulated_is_a_config_error() {
        let m = ResponseModel::Tabulated(TabulatedSpectrum {
            samples: vec![],
            low_tail_exponent: 1.0,
            high_tail_exponent: -3.0,
        });
        assert!(matches!(m.eval(1.0), Err(Error::Config(_))));
    }

    #[test]
    fn yig_like_defaults() {
        let yig = default_yig_like();
        assert!((yig.epsilon.eval(0.0).unwrap() - 4.02).abs() < 1e-14);
        assert_eq!(yig.mu.eval(0.0).unwrap(), 160.0);
        assert!(yig.epsilon.eval(1e22).unwrap() - 1.0 < 1e-10);
        let xi1 = matsubara_frequency(1, 300.0);
        let e1 = yig.epsilon.eval(xi1).unwrap();
        assert!(e1 > 1.0 && e1 < 4.02);
    }

    #[test]
    fn rescaling_keeps_resonances() {
        let yig = default_yig_like();
        let scaled = yig.epsilon.with_static_value(12.0).unwrap();
        assert!((scaled.eval(0.0).unwrap() - 12.0).abs() < 1e-12);
        match scaled {
            ResponseModel::Lorentz { oscillators } => {
                assert_eq!(oscillators[0].omega, 1.0e14);
                assert_eq!(oscillators[1].omega, 7.5e15);
            }
            _ => unreachable!(),
        }
        assert!(ResponseModel::plasma(1e16).with_static_value(2.0).is_err());
    }

    fn lorentzian_absorption(c: f64, w0: f64, gamma: f64, w: f64) -> f64 {
        c * gamma * w0 * w0 * w / ((w0 * w0 - w * w).powi(2) + gamma * gamma * w * w)
    }

    #[test]
    fn kk_of_zero_absorption_is_vacuum() {
        let samples = (1..50).map(|i| AbsorptionSample { omega: i as f64 * 1e14, im_eps: 0.0 }).collect();
        let spec = TabulatedSpectrum::new(samples, 1.0, -3.0).unwrap();
        for xi in [0.0, 1e13, 1e15, 1e17] {
            assert_eq!(kk_to_imaginary_axis(&spec, xi).unwrap(), 1.0);
        }
    }

    #[test]
    fn kk_reproduces_damped_lorentz_oscillator() {
        // Closed-form pair: Im ε above ↔ ε(iξ) = 1 + Cω₀²/(ω₀² + ξ² + γξ).
        let (c, w0, gamma) = (2.5, 1.0e15, 0.1e15);
        let n = 4000;
        let samples: Vec<_> = (0..n)
            .map(|i| {
                let w = w0 * 10f64.powf(-3.0 + 6.0 * i as f64 / (n - 1) as f64);
                AbsorptionSample { omega: w, im_eps: lorentzian_absorption(c, w0, gamma, w) }
            })
            .collect();
        let spec = TabulatedSpectrum::new(samples, 1.0, -3.0).unwrap();
        for k in 0..=40 {
            let xi = w0 * 10.0 * k as f64 / 40.0;
            let exact = 1.0 + c * w0 * w0 / (w0 * w0 + xi * xi + gamma * xi);
            let got = kk_to_imaginary_axis(&spec, xi).unwrap();
            assert!((got - exact).abs() / exact < 1e-2, "xi={xi:e}: {got} vs {exact}");
        }
    }

    #[test]
    fn kk_decays_to_one_from_above() {
        let samples = (1..=20)
            .map(|i| AbsorptionSample { omega: i as f64 * 1e14, im_eps: 0.3 })
            .collect();
        let spec = TabulatedSpectrum::new(samples, 1.0, -3.0).unwrap();
        let mut prev = f64::INFINITY;
        for p in 10..22 {
            let v = kk_to_imaginary_axis(&spec, 10f64.powi(p)).unwrap();
            assert!(v >= 1.0 && v <= prev);
            prev = v;
        }
        assert!(prev - 1.0 < 1e-8);
    }

    #[test]
    fn analytic_tails_match_numeric_quadrature() {
        for s in [0.0, 1e-4, 0.3, 1.0, 7.0, 100.0] {
            let a = low_tail_integral(1.0, s);
            let b = low_tail_numeric(1.0, s);
            assert!((a - b).abs() < 1e-10, "low s={s}: {a} vs {b}");
            let a = high_tail_integral(-3.0, s);
            let b = high_tail_numeric(-3.0, s);
            assert!((a - b).abs() < 1e-10, "high s={s}: {a} vs {b}");
        }
    }

    #[test]
    fn kk_rejects_bad_grids() {
        let bad = TabulatedSpectrum {
            samples: vec![
                AbsorptionSample { omega: 2.0, im_eps: 0.1 },
                AbsorptionSample { omega: 1.0, im_eps: 0.1 },
            ],
            low_tail_exponent: 1.0,
            high_tail_exponent: -3.0,
        };
        assert!(matches!(kk_to_imaginary_axis(&bad, 0.0), Err(Error::Config(_))));
        let negative = TabulatedSpectrum {
            samples: vec![AbsorptionSample { omega: 1.0, im_eps: -0.1 }],
            low_tail_exponent: 1.0,
            high_tail_exponent: -3.0,
        };
        assert!(matches!(kk_to_imaginary_axis(&negative, 0.0), Err(Error::Config(_))));
    }

    #[test]
    fn parses_two_rows() {
        let m = parse_optical_data("1.0e14, 0.5\n2.0e14, 0.3\n", "mem").unwrap();
        match m {
            ResponseModel::Tabulated(s) => {
                assert_eq!(s.samples.len(), 2);
                assert_eq!(s.low_tail_exponent, DEFAULT_LOW_TAIL_EXPONENT);
                assert_eq!(s.high_tail_exponent, DEFAULT_HIGH_TAIL_EXPONENT);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn parses_headers_and_comments() {
        let text = "# YIG absorption\nlow_tail_exponent = 2\nhigh_tail_exponent = -2.5\n1e14, 0.1 # first\n\n3e14, 0.2\n";
        match parse_optical_data(text, "mem").unwrap() {
            ResponseModel::Tabulated(s) => {
                assert_eq!(s.low_tail_exponent, 2.0);
                assert_eq!(s.high_tail_exponent, -2.5);
                assert_eq!(s.samples[1].omega, 3e14);
            }
            _ => unreachable!(),
        }
    }

    #[test]
    fn rejects_empty_descending_and_negative() {
        assert!(matches!(parse_optical_data("", "mem"), Err(Error::Ingest { .. })));
        assert!(matches!(parse_optical_data("# only comments\n", "mem"), Err(Error::Ingest { .. })));
        match parse_optical_data("2e14, 0.1\n1e14, 0.2\n", "mem") {
            Err(Error::Ingest { line, .. }) => assert_eq!(line, 2),
            other => panic!("unexpected {other:?}"),
        }
        match parse_optical_data("1e14, 0.1\n2e14, -0.2\n", "mem") {
            Err(Error::Ingest { line, message, .. }) => {
                assert_eq!(line, 2);
                assert!(message.contains("non-negative"));
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(parse_optical_data("1e14; 0.1\n", "mem").is_err());
    }

    #[test]
    fn load_from_disk() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("yig.txt");
        fs::write(&path, "1.0e14, 0.5\n2.0e14, 0.3\n").unwrap();
        assert!(matches!(load_optical_data(&path).unwrap(), ResponseModel::Tabulated(_)));
        assert!(load_optical_data(dir.path().join("missing.txt")).is_err());
    }
}

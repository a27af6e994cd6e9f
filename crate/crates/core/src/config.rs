//! Run configuration: a flat `key = value` text format in which every
//! physical quantity carries a unit suffix.
//!
//! ```text
//! left = au_plasma
//! right = yig_like
//! right_mu0 = 160
//! b = 1 um
//! T = 300 K
//! separations = 0.2 um .. 10 um, 50 log
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use crate::analysis::SweepParameter;
use crate::constants::EV_TO_RAD_PER_S;
use crate::error::{Error, Result};
use crate::lifshitz::{CavityConfig, EngineSettings};
use crate::materials::{default_yig_like, load_optical_data, Material, Oscillator, ResponseModel};
use crate::reflection::Thickness;

/// First line of an emitted CSV; a file starting with it can be fed back as
/// a configuration.
pub const PROVENANCE_MARKER: &str = "# casimir resolved configuration";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Dimension {
    Length,
    Temperature,
    Frequency,
    Dimensionless,
}

impl Dimension {
    fn units(&self) -> &'static [(&'static str, Scale)] {
        match self {
            Self::Length => &[("nm", Scale::Decade(-9)), ("um", Scale::Decade(-6)), ("m", Scale::Decade(0))],
            Self::Temperature => &[("K", Scale::Decade(0))],
            Self::Frequency => &[("eV", Scale::Factor(EV_TO_RAD_PER_S)), ("rad_s", Scale::Decade(0))],
            Self::Dimensionless => &[],
        }
    }

    fn si_unit(&self) -> &'static str {
        match self {
            Self::Length => "m",
            Self::Temperature => "K",
            Self::Frequency => "rad_s",
            Self::Dimensionless => "",
        }
    }

    fn unit_list(&self) -> String {
        self.units().iter().map(|(u, _)| *u).collect::<Vec<_>>().join(", ")
    }
}

#[derive(Debug, Clone, Copy)]
enum Scale {
    /// Power of ten, applied to the decimal exponent so that `1 um` parses
    /// to exactly `1e-6`.
    Decade(i32),
    Factor(f64),
}

fn config_err(field: &str, message: impl std::fmt::Display) -> Error {
    Error::Config(format!("field '{field}': {message}"))
}

fn parse_number(field: &str, text: &str) -> Result<f64> {
    let v: f64 = text.trim().parse().map_err(|_| config_err(field, format!("cannot parse number '{}'", text.trim())))?;
    if v.is_nan() {
        return Err(config_err(field, "value is NaN"));
    }
    Ok(v)
}

/// Parses `<number> <unit>` (the space is optional) into SI units.
fn parse_quantity(field: &str, text: &str, dim: Dimension) -> Result<f64> {
    let text = text.trim();
    if dim == Dimension::Dimensionless {
        return parse_number(field, text);
    }
    let split = text
        .char_indices()
        .rev()
        .take_while(|(_, c)| c.is_ascii_alphabetic() || *c == '_')
        .last()
        .map(|(i, _)| i);
    let (number, unit) = match split {
        Some(i) if !text[..i].trim().is_empty() => (&text[..i], text[i..].trim()),
        _ => (text, ""),
    };
    if unit.is_empty() {
        return Err(config_err(field, format!("missing unit in '{text}' (expected one of {})", dim.unit_list())));
    }
    let scale = dim
        .units()
        .iter()
        .find(|(u, _)| *u == unit)
        .map(|(_, s)| *s)
        .ok_or_else(|| config_err(field, format!("unit '{unit}' is not one of {}", dim.unit_list())))?;
    match scale {
        Scale::Factor(f) => Ok(parse_number(field, number)? * f),
        Scale::Decade(shift) => {
            let number = number.trim();
            let (mantissa, exponent) = match number.find(['e', 'E']) {
                Some(i) => {
                    let exp: i32 = number[i + 1..]
                        .parse()
                        .map_err(|_| config_err(field, format!("cannot parse number '{number}'")))?;
                    (&number[..i], exp)
                }
                None => (number, 0),
            };
            parse_number(field, &format!("{mantissa}e{}", exponent + shift))
        }
    }
}

/// `a .. b, N log|lin` or a comma-separated list.
fn parse_grid(field: &str, text: &str, dim: Dimension) -> Result<Vec<f64>> {
    let grid = if let Some((range, spec)) = text.split_once("..") {
        let (hi, count) = spec
            .rsplit_once(',')
            .ok_or_else(|| config_err(field, "range needs ', <count> log|lin' after the end point"))?;
        let lo = parse_quantity(field, range, dim)?;
        let hi = parse_quantity(field, hi, dim)?;
        let mut words = count.split_whitespace();
        let n: usize = words
            .next()
            .and_then(|w| w.parse().ok())
            .ok_or_else(|| config_err(field, format!("cannot parse point count in '{}'", count.trim())))?;
        let spacing = words.next().unwrap_or("");
        if words.next().is_some() {
            return Err(config_err(field, format!("unexpected text in '{}'", count.trim())));
        }
        if n < 2 {
            return Err(config_err(field, "range needs at least 2 points"));
        }
        let t = |i: usize| i as f64 / (n - 1) as f64;
        match spacing {
            "lin" => (0..n).map(|i| if i == n - 1 { hi } else { lo + (hi - lo) * t(i) }).collect(),
            "log" => {
                if !(lo > 0.0 && hi > 0.0) {
                    return Err(config_err(field, "log spacing needs positive end points"));
                }
                (0..n).map(|i| if i == n - 1 { hi } else { lo * (hi / lo).powf(t(i)) }).collect()
            }
            other => return Err(config_err(field, format!("spacing must be 'log' or 'lin', got '{other}'"))),
        }
    } else {
        text.split(',').map(|item| parse_quantity(field, item, dim)).collect::<Result<Vec<_>>>()?
    };
    if grid.is_empty() {
        return Err(config_err(field, "grid is empty"));
    }
    if grid.iter().any(|v| !v.is_finite()) {
        return Err(config_err(field, "grid values must be finite"));
    }
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(config_err(field, "grid must be strictly ascending"));
    }
    Ok(grid)
}

fn format_grid(values: &[f64], dim: Dimension) -> String {
    let unit = dim.si_unit();
    values
        .iter()
        .map(|v| if unit.is_empty() { format!("{v:e}") } else { format!("{v:e} {unit}") })
        .collect::<Vec<_>>()
        .join(", ")
}

/// Raw `key = value` pairs, in file order, with duplicate detection.
fn parse_pairs(text: &str) -> Result<BTreeMap<String, String>> {
    let mut lines: Vec<&str> = text.lines().collect();
    let embedded = lines.first().is_some_and(|l| l.trim_end() == PROVENANCE_MARKER);
    if embedded {
        lines = lines[1..].iter().take_while(|l| l.starts_with('#')).map(|l| l[1..].trim_start()).collect();
    }
    let mut pairs = BTreeMap::new();
    for (idx, raw) in lines.iter().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("line {}: expected 'key = value', got '{line}'", idx + 1)))?;
        let key = key.trim().to_string();
        if pairs.insert(key.clone(), value.trim().to_string()).is_some() {
            return Err(config_err(&key, "given more than once"));
        }
    }
    Ok(pairs)
}

/// One plate as written in the configuration, plus the data path for
/// tabulated permittivities so the resolved form can name it again.
#[derive(Debug, Clone, PartialEq)]
pub struct PlateSpec {
    pub material: Material,
    pub data_path: Option<String>,
}

/// Everything a command needs, resolved to SI units.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub left: PlateSpec,
    pub right: PlateSpec,
    pub thickness: Thickness,
    pub temperature: f64,
    pub settings: EngineSettings,
    pub separations: Option<Vec<f64>>,
    pub bracket: Option<(f64, f64)>,
    pub d_start: Option<f64>,
    pub d_t: Option<f64>,
    pub eps0_grid: Option<Vec<f64>>,
    pub sweep: Option<(SweepParameter, Vec<f64>)>,
}

struct Fields {
    pairs: BTreeMap<String, String>,
}

impl Fields {
    fn take(&mut self, key: &str) -> Option<String> {
        self.pairs.remove(key)
    }

    fn quantity(&mut self, key: &str, dim: Dimension) -> Result<Option<f64>> {
        self.take(key).map(|v| parse_quantity(key, &v, dim)).transpose()
    }

    fn grid(&mut self, key: &str, dim: Dimension) -> Result<Option<Vec<f64>>> {
        self.take(key).map(|v| parse_grid(key, &v, dim)).transpose()
    }
}

fn parse_oscillators(field: &str, text: &str) -> Result<Vec<Oscillator>> {
    text.split(';')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (strength, omega) = item
                .split_once('@')
                .ok_or_else(|| config_err(field, format!("oscillator '{}' must read '<strength> @ <frequency>'", item.trim())))?;
            Ok(Oscillator {
                strength: parse_number(field, strength)?,
                omega: parse_quantity(field, omega, Dimension::Frequency)?,
            })
        })
        .collect()
}

fn parse_plate(side: &str, fields: &mut Fields, base_dir: &Path) -> Result<PlateSpec> {
    let key = |suffix: &str| format!("{side}_{suffix}");
    let name = fields.take(side).ok_or_else(|| config_err(side, "missing material"))?;
    let omega_p = fields.quantity(&key("omega_p"), Dimension::Frequency)?;
    let gamma = fields.quantity(&key("gamma"), Dimension::Frequency)?;
    let eps_const = fields.quantity(&key("eps"), Dimension::Dimensionless)?;
    let oscillators = fields.take(&key("oscillators")).map(|v| parse_oscillators(&key("oscillators"), &v)).transpose()?;
    let data = fields.take(&key("data"));
    let eps0 = fields.quantity(&key("eps0"), Dimension::Dimensionless)?;
    let mu0 = fields.quantity(&key("mu0"), Dimension::Dimensionless)?;
    let mu_const = fields.quantity(&key("mu_const"), Dimension::Dimensionless)?;

    let require = |v: Option<f64>, what: &str| v.ok_or_else(|| config_err(&key(what), format!("required for '{name}'")));
    let unused = |v: bool, what: &str| -> Result<()> {
        if v {
            Err(config_err(&key(what), format!("does not apply to material '{name}'")))
        } else {
            Ok(())
        }
    };

    let mut data_path = None;
    let mut material = match name.as_str() {
        "au_plasma" | "plasma" => {
            let default = if name == "au_plasma" { Some(crate::constants::AU_PLASMA_FREQUENCY) } else { None };
            unused(gamma.is_some(), "gamma")?;
            Material::new(ResponseModel::plasma(require(omega_p.or(default), "omega_p")?), ResponseModel::vacuum())?
        }
        "au_drude" | "drude" => {
            let (wp, g) = if name == "au_drude" {
                (Some(crate::constants::AU_PLASMA_FREQUENCY), Some(crate::constants::AU_DRUDE_GAMMA))
            } else {
                (None, None)
            };
            Material::new(
                ResponseModel::drude(require(omega_p.or(wp), "omega_p")?, require(gamma.or(g), "gamma")?),
                ResponseModel::vacuum(),
            )?
        }
        "yig_like" => default_yig_like(),
        "vacuum" => Material::vacuum(),
        "lorentz" => Material::new(
            ResponseModel::lorentz(oscillators.clone().ok_or_else(|| config_err(&key("oscillators"), "required for 'lorentz'"))?),
            ResponseModel::vacuum(),
        )?,
        "constant" => Material::new(ResponseModel::constant(require(eps_const, "eps")?), ResponseModel::vacuum())?,
        "tabulated" => {
            let path = data.clone().ok_or_else(|| config_err(&key("data"), "required for 'tabulated'"))?;
            let resolved = base_dir.join(&path);
            let resolved = resolved.canonicalize().map_err(|e| config_err(&key("data"), format!("{}: {e}", resolved.display())))?;
            data_path = Some(resolved.display().to_string());
            Material::new(load_optical_data(&resolved)?, ResponseModel::vacuum())?
        }
        other => {
            return Err(config_err(
                side,
                format!("unknown material '{other}' (built-in: au_plasma, au_drude, yig_like; models: plasma, drude, lorentz, constant, tabulated, vacuum)"),
            ))
        }
    };

    let metal = matches!(name.as_str(), "au_plasma" | "plasma" | "au_drude" | "drude");
    unused(omega_p.is_some() && !metal, "omega_p")?;
    unused(gamma.is_some() && !matches!(name.as_str(), "au_drude" | "drude"), "gamma")?;
    unused(eps_const.is_some() && name != "constant", "eps")?;
    unused(data.is_some() && name != "tabulated", "data")?;
    if let Some(osc) = oscillators {
        match name.as_str() {
            "lorentz" => {}
            "yig_like" => material.epsilon = ResponseModel::lorentz(osc),
            _ => unused(true, "oscillators")?,
        }
    }
    if let Some(e) = eps0 {
        material.epsilon = material.epsilon.with_static_value(e).map_err(|err| config_err(&key("eps0"), err))?;
    }
    match (mu0, mu_const) {
        (Some(_), Some(_)) => return Err(config_err(&key("mu_const"), format!("cannot be combined with {}", key("mu0")))),
        (Some(m), None) => material.mu = ResponseModel::quasistatic_magnetic(m),
        (None, Some(m)) => material.mu = ResponseModel::constant(m),
        (None, None) => {}
    }
    material.validate().map_err(|e| config_err(side, e))?;
    Ok(PlateSpec { material, data_path })
}

impl RunConfig {
    pub fn parse(text: &str, base_dir: &Path) -> Result<Self> {
        let mut fields = Fields { pairs: parse_pairs(text)? };
        let left = parse_plate("left", &mut fields, base_dir)?;
        let right = parse_plate("right", &mut fields, base_dir)?;

        let thickness = match fields.take("b") {
            None => return Err(config_err("b", "missing plate thickness")),
            Some(v) if v.trim() == "inf" => Thickness::Infinite,
            Some(v) => Thickness::Finite(parse_quantity("b", &v, Dimension::Length)?),
        };
        let temperature =
            fields.quantity("T", Dimension::Temperature)?.ok_or_else(|| config_err("T", "missing temperature"))?;

        let mut settings = EngineSettings::default();
        if let Some(v) = fields.quantity("rel_tol", Dimension::Dimensionless)? {
            settings.rel_tol = v;
        }
        if let Some(v) = fields.quantity("abs_tol", Dimension::Dimensionless)? {
            settings.abs_tol = v;
        }
        if let Some(v) = fields.take("max_terms") {
            settings.max_matsubara_terms =
                v.trim().parse().map_err(|_| config_err("max_terms", format!("expected a positive integer, got '{v}'")))?;
        }
        settings.validate()?;

        let separations = fields.grid("separations", Dimension::Length)?;
        let bracket = match fields.take("bracket") {
            None => None,
            Some(v) => {
                let ends = v.split(',').map(|s| parse_quantity("bracket", s, Dimension::Length)).collect::<Result<Vec<_>>>()?;
                match ends[..] {
                    [lo, hi] if lo < hi => Some((lo, hi)),
                    _ => return Err(config_err("bracket", "expected '<lo> <unit>, <hi> <unit>' with lo < hi")),
                }
            }
        };
        let d_start = fields.quantity("d_start", Dimension::Length)?;
        let d_t = fields.quantity("d_t", Dimension::Length)?;
        let eps0_grid = fields.grid("eps0_grid", Dimension::Dimensionless)?;
        let sweep = match (fields.take("sweep_parameter"), fields.take("sweep_grid")) {
            (None, None) => None,
            (Some(p), Some(g)) => {
                let parameter: SweepParameter = p.trim().parse().map_err(|e| config_err("sweep_parameter", e))?;
                Some((parameter, parse_grid("sweep_grid", &g, sweep_dimension(parameter))?))
            }
            (Some(_), None) => return Err(config_err("sweep_grid", "missing (sweep_parameter is set)")),
            (None, Some(_)) => return Err(config_err("sweep_parameter", "missing (sweep_grid is set)")),
        };

        if let Some(key) = fields.pairs.keys().next() {
            return Err(config_err(key, "unknown key"));
        }

        let config = Self { left, right, thickness, temperature, settings, separations, bracket, d_start, d_t, eps0_grid, sweep };
        config.cavity()?;
        Ok(config)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text, path.parent().unwrap_or(Path::new(".")))
    }

    pub fn cavity(&self) -> Result<CavityConfig> {
        CavityConfig::new(self.left.material.clone(), self.right.material.clone(), self.thickness, self.temperature)
    }

    /// Canonical text form in SI units. Parsing it gives back an identical
    /// configuration.
    pub fn render(&self) -> String {
        let mut out = String::new();
        render_plate(&mut out, "left", &self.left);
        render_plate(&mut out, "right", &self.right);
        match self.thickness {
            Thickness::Infinite => out.push_str("b = inf\n"),
            Thickness::Finite(b) => writeln!(out, "b = {b:e} m").unwrap(),
        }
        writeln!(out, "T = {:e} K", self.temperature).unwrap();
        writeln!(out, "rel_tol = {:e}", self.settings.rel_tol).unwrap();
        writeln!(out, "abs_tol = {:e}", self.settings.abs_tol).unwrap();
        writeln!(out, "max_terms = {}", self.settings.max_matsubara_terms).unwrap();
        if let Some(g) = &self.separations {
            writeln!(out, "separations = {}", format_grid(g, Dimension::Length)).unwrap();
        }
        if let Some((lo, hi)) = self.bracket {
            writeln!(out, "bracket = {lo:e} m, {hi:e} m").unwrap();
        }
        if let Some(d) = self.d_start {
            writeln!(out, "d_start = {d:e} m").unwrap();
        }
        if let Some(d) = self.d_t {
            writeln!(out, "d_t = {d:e} m").unwrap();
        }
        if let Some(g) = &self.eps0_grid {
            writeln!(out, "eps0_grid = {}", format_grid(g, Dimension::Dimensionless)).unwrap();
        }
        if let Some((p, g)) = &self.sweep {
            writeln!(out, "sweep_parameter = {}", p.name()).unwrap();
            writeln!(out, "sweep_grid = {}", format_grid(g, sweep_dimension(*p))).unwrap();
        }
        out
    }
}

fn sweep_dimension(parameter: SweepParameter) -> Dimension {
    match parameter {
        SweepParameter::Separation | SweepParameter::Thickness => Dimension::Length,
        SweepParameter::Temperature => Dimension::Temperature,
        SweepParameter::Mu0 | SweepParameter::Eps0 => Dimension::Dimensionless,
    }
}

fn render_plate(out: &mut String, side: &str, plate: &PlateSpec) {
    match &plate.material.epsilon {
        ResponseModel::Plasma { omega_p } => {
            writeln!(out, "{side} = plasma\n{side}_omega_p = {omega_p:e} rad_s").unwrap();
        }
        ResponseModel::Drude { omega_p, gamma } => {
            writeln!(out, "{side} = drude\n{side}_omega_p = {omega_p:e} rad_s\n{side}_gamma = {gamma:e} rad_s").unwrap();
        }
        ResponseModel::Lorentz { oscillators } => {
            let list = oscillators.iter().map(|o| format!("{:e} @ {:e} rad_s", o.strength, o.omega)).collect::<Vec<_>>();
            writeln!(out, "{side} = lorentz\n{side}_oscillators = {}", list.join("; ")).unwrap();
        }
        ResponseModel::Tabulated(_) => {
            writeln!(out, "{side} = tabulated\n{side}_data = {}", plate.data_path.as_deref().unwrap_or("")).unwrap();
        }
        ResponseModel::Constant { value } => writeln!(out, "{side} = constant\n{side}_eps = {value:e}").unwrap(),
        other => writeln!(out, "# {side} permittivity model '{}' has no text form", other.kind_name()).unwrap(),
    }
    match &plate.material.mu {
        ResponseModel::QuasistaticMagnetic { mu0 } => writeln!(out, "{side}_mu0 = {mu0:e}").unwrap(),
        ResponseModel::Constant { value } => writeln!(out, "{side}_mu_const = {value:e}").unwrap(),
        other => writeln!(out, "# {side} permeability model '{}' has no text form", other.kind_name()).unwrap(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<RunConfig> {
        RunConfig::parse(text, Path::new("."))
    }

    const FIG3: &str = "left = au_plasma\nright = yig_like\nb = 1 um\nT = 300 K\nseparations = 0.2 um .. 10 um, 5 log\n";

    fn field_of(err: Error) -> String {
        match err {
            Error::Config(m) => m,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn quantities_and_units() {
        assert_eq!(parse_quantity("b", "1 um", Dimension::Length).unwrap(), 1e-6);
        assert_eq!(parse_quantity("b", "250nm", Dimension::Length).unwrap(), 250e-9);
        assert_eq!(parse_quantity("b", "2e-6 m", Dimension::Length).unwrap(), 2e-6);
        assert_eq!(parse_quantity("T", "300 K", Dimension::Temperature).unwrap(), 300.0);
        assert_eq!(parse_quantity("w", "9 eV", Dimension::Frequency).unwrap(), 9.0 * EV_TO_RAD_PER_S);
        assert_eq!(parse_quantity("w", "1e14 rad_s", Dimension::Frequency).unwrap(), 1e14);
        assert!(field_of(parse_quantity("b", "1", Dimension::Length).unwrap_err()).contains("'b'"));
        assert!(parse_quantity("b", "1 K", Dimension::Length).is_err());
        assert!(parse_quantity("b", "um", Dimension::Length).is_err());
    }

    #[test]
    fn grids() {
        let g = parse_grid("s", "1 um .. 100 um, 3 log", Dimension::Length).unwrap();
        assert_eq!(g.len(), 3);
        assert!((g[1] - 1e-5).abs() < 1e-18);
        assert_eq!(g[2], 100e-6);
        assert_eq!(parse_grid("s", "1 .. 3, 3 lin", Dimension::Dimensionless).unwrap(), vec![1.0, 2.0, 3.0]);
        assert_eq!(parse_grid("s", "300 K, 305 K", Dimension::Temperature).unwrap(), vec![300.0, 305.0]);
        assert!(parse_grid("s", "3, 1", Dimension::Dimensionless).is_err());
        assert!(parse_grid("s", "1 .. 3, 3 cubic", Dimension::Dimensionless).is_err());
        assert!(parse_grid("s", "1 .. 3", Dimension::Dimensionless).is_err());
    }

    #[test]
    fn parses_fig3_config() {
        let c = parse(FIG3).unwrap();
        assert_eq!(c.left.material, Material::au_plasma());
        assert_eq!(c.right.material, default_yig_like());
        assert_eq!(c.thickness, Thickness::Finite(1e-6));
        assert_eq!(c.separations.as_ref().unwrap().len(), 5);
    }

    #[test]
    fn unsuffixed_thickness_names_field() {
        let text = FIG3.replace("b = 1 um", "b = 1");
        assert!(field_of(parse(&text).unwrap_err()).contains("'b'"));
    }

    #[test]
    fn rejects_unknown_duplicate_and_misplaced_keys() {
        assert!(field_of(parse(&format!("{FIG3}colour = red\n")).unwrap_err()).contains("'colour'"));
        assert!(field_of(parse(&format!("{FIG3}T = 310 K\n")).unwrap_err()).contains("'T'"));
        assert!(field_of(parse(&format!("{FIG3}right_gamma = 1 eV\n")).unwrap_err()).contains("'right_gamma'"));
        assert!(parse("left = unobtainium\nright = vacuum\nb = 1 um\nT = 1 K\n").is_err());
        assert!(parse(&FIG3.replace("T = 300 K\n", "")).is_err());
    }

    #[test]
    fn inline_models_and_overrides() {
        let text = "left = plasma\nleft_omega_p = 100 eV\nright = constant\nright_eps = 1\nright_mu_const = 1e4\nb = inf\nT = 1 K\n";
        let c = parse(text).unwrap();
        assert_eq!(c.left.material.epsilon, ResponseModel::plasma(100.0 * EV_TO_RAD_PER_S));
        assert_eq!(c.right.material.mu, ResponseModel::constant(1e4));
        assert_eq!(c.thickness, Thickness::Infinite);

        let c = parse(&format!("{FIG3}right_eps0 = 8\nright_mu0 = 20\n")).unwrap();
        assert!((c.right.material.epsilon.eval(0.0).unwrap() - 8.0).abs() < 1e-12);
        assert_eq!(c.right.material.mu, ResponseModel::quasistatic_magnetic(20.0));

        let c = parse(&FIG3.replace("right = yig_like", "right = lorentz\nright_oscillators = 3 @ 7.5e15 rad_s; 0.5 @ 0.1 eV")).unwrap();
        match &c.right.material.epsilon {
            ResponseModel::Lorentz { oscillators } => assert_eq!(oscillators.len(), 2),
            other => panic!("{other:?}"),
        }
        assert!(parse("left = plasma\nright = vacuum\nb = 1 um\nT = 1 K\n").is_err());
    }

    #[test]
    fn sweep_keys_come_in_pairs() {
        let c = parse(&format!("{FIG3}sweep_parameter = temperature\nsweep_grid = 300 K, 305 K, 310 K\n")).unwrap();
        assert_eq!(c.sweep, Some((SweepParameter::Temperature, vec![300.0, 305.0, 310.0])));
        assert!(parse(&format!("{FIG3}sweep_parameter = mu0\n")).is_err());
        assert!(parse(&format!("{FIG3}sweep_parameter = colour\nsweep_grid = 1, 2\n")).is_err());
    }

    #[test]
    fn render_round_trips() {
        let text = format!(
            "{FIG3}right_eps0 = 6.5\nbracket = 1 um, 4 um\nd_start = 2.5 um\nd_t = 6 um\neps0_grid = 1 .. 20, 7 lin\nsweep_parameter = mu0\nsweep_grid = 20, 160, 1000\nrel_tol = 1e-8\n"
        );
        let c = parse(&text).unwrap();
        let again = parse(&c.render()).unwrap();
        assert_eq!(c, again);
        assert_eq!(c.render(), again.render());

        let embedded: String = std::iter::once(PROVENANCE_MARKER.to_string())
            .chain(c.render().lines().map(|l| format!("# {l}")))
            .chain(["d,total".to_string(), "1,2".to_string()])
            .collect::<Vec<_>>()
            .join("\n");
        assert_eq!(parse(&embedded).unwrap(), c);
    }
}

//! JSON run configuration: schema, validation and conversion into library
//! types.
//!
//! Axial lengths are in wavelengths. Transverse positions (grid x/y, beam
//! offsets, trace seeds and axis) are in wavelengths too unless
//! `"units": {"transverse": "waist"}` is given, in which case they are
//! multiples of the focal beam radius. Lattice spacing is always in waists.

use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::grid::{AxisRange, SamplingGrid, DEFAULT_MAX_SAMPLES};
use crate::helix::RAYLEIGH_VALLEY;
use crate::lattice::{CentralModification, EmbedOptions, LatticeSpec, SiteContent};
use crate::modes::{BeamGeometry, Direction, ModeIndex, Normalization};
use crate::superposition::{BeamComponent, FieldSpec};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ConfigError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("invalid value for `{field}`: {message}")]
    Invalid { field: String, message: String },
}

fn invalid(field: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        field: field.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Command {
    EvalGrid,
    Trace,
    Pitch,
    Contour,
    Lattice,
    Embed,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::EvalGrid => "eval-grid",
            Command::Trace => "trace",
            Command::Pitch => "pitch",
            Command::Contour => "contour",
            Command::Lattice => "lattice",
            Command::Embed => "embed",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransverseUnit {
    #[default]
    Wavelength,
    Waist,
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Units {
    #[serde(default)]
    pub transverse: TransverseUnit,
}

fn one() -> f64 {
    1.0
}

/// Give exactly one of `rayleigh_length` and `waist`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometryConfig {
    #[serde(default = "one")]
    pub wavelength: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rayleigh_length: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub waist: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeConfig {
    pub p: i64,
    pub l: i64,
}

fn unit_amplitude() -> [f64; 2] {
    [1.0, 0.0]
}

fn forward() -> i64 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BeamConfig {
    pub mode: ModeConfig,
    /// `[re, im]`.
    #[serde(default = "unit_amplitude")]
    pub amplitude: [f64; 2],
    /// `+1` forward, `-1` backward.
    #[serde(default = "forward")]
    pub direction: i64,
    #[serde(default)]
    pub polarization_deg: f64,
    #[serde(default)]
    pub offset: [f64; 2],
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FieldConfig {
    pub beams: Vec<BeamConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum ContentConfig {
    Gaussian,
    Helical(FieldConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EmbedConfig {
    #[serde(default = "default_ratio")]
    pub gaussian_ratio: f64,
    #[serde(default = "default_power")]
    pub power_factor: f64,
}

fn default_ratio() -> f64 {
    EmbedOptions::default().gaussian_ratio
}

fn default_power() -> f64 {
    EmbedOptions::default().power_factor
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum CentralConfig {
    #[default]
    None,
    EmbedSingleHelix(EmbedConfig),
}

fn default_polarizations() -> [f64; 3] {
    [0.0, 60.0, 120.0]
}

fn default_rings() -> u32 {
    4
}

fn default_core_rings() -> u32 {
    1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LatticeConfig {
    /// Nearest-neighbour distance in waists.
    pub spacing: f64,
    #[serde(default = "default_rings")]
    pub rings: u32,
    #[serde(default = "default_polarizations")]
    pub polarization_deg: [f64; 3],
    pub content: ContentConfig,
    #[serde(default)]
    pub central: CentralConfig,
    /// Sites within this hex distance contribute cores to the suppression figure.
    #[serde(default = "default_core_rings")]
    pub core_rings: u32,
}

/// Where the superposition comes from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum SourceConfig {
    Field(FieldConfig),
    /// JSON file holding a `{"beams": [...]}` object, relative to the config file.
    File(String),
    Lattice(LatticeConfig),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AxisConfig {
    pub min: f64,
    pub max: f64,
    pub count: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub x: AxisConfig,
    pub y: AxisConfig,
    pub z: AxisConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TraceKind {
    #[default]
    Dark,
    Bright,
    Both,
}

impl TraceKind {
    pub fn dark(self) -> bool {
        matches!(self, TraceKind::Dark | TraceKind::Both)
    }

    pub fn bright(self) -> bool {
        matches!(self, TraceKind::Bright | TraceKind::Both)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceConfig {
    #[serde(default)]
    pub kind: TraceKind,
    pub z_min: f64,
    pub z_max: f64,
    pub steps: usize,
    /// Dark-core seed at `z_min`; scanned for when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<[f64; 2]>,
    /// Bright-ridge seed at `z_min`; the brightest point when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bright_seed: Option<[f64; 2]>,
    #[serde(default)]
    pub axis: [f64; 2],
}

fn default_fraction() -> f64 {
    0.9
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContourConfig {
    #[serde(default = "default_fraction")]
    pub fraction: f64,
}

/// Artifact file names, relative to the output directory. Each command
/// fills in its own primary artifact when left out.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputsConfig {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dump: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dark_trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bright_trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pitch: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_report: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub embed: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Tolerances {
    /// Newton stop, relative to the focal peak amplitude.
    pub newton: f64,
    pub max_iterations: usize,
    pub max_samples: u64,
    /// Continuation jump cap in waists.
    pub step_cap_w0: f64,
    pub min_steps_per_half_pitch: usize,
    pub exclusion_radius_w0: f64,
    pub self_overlap_ratio: f64,
    /// Trap analysis requires `|E| < dark × peak amplitude` at the core.
    pub dark: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            newton: 1e-10,
            max_iterations: 50,
            max_samples: DEFAULT_MAX_SAMPLES,
            step_cap_w0: 0.25,
            min_steps_per_half_pitch: 8,
            exclusion_radius_w0: 0.35,
            self_overlap_ratio: RAYLEIGH_VALLEY,
            dark: 1e-6,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// May be left to the command line.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<Command>,
    #[serde(default)]
    pub units: Units,
    pub geometry: GeometryConfig,
    #[serde(default)]
    pub normalization: Normalization,
    pub source: SourceConfig,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<GridConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<TraceConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub contour: Option<ContourConfig>,
    #[serde(default)]
    pub outputs: OutputsConfig,
    #[serde(default)]
    pub tolerances: Tolerances,
}

/// Parses and validates a configuration.
pub fn parse_config(text: &str) -> Result<RunConfig, ConfigError> {
    let config: RunConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    config.validate()?;
    Ok(config)
}

/// Pretty JSON that [`parse_config`] accepts back unchanged.
pub fn serialize_config(config: &RunConfig) -> String {
    serde_json::to_string_pretty(config).expect("config serializes")
}

/// Parses a stand-alone `{"beams": [...]}` document.
pub fn parse_field(text: &str, field: &str) -> Result<FieldConfig, ConfigError> {
    let f: FieldConfig = serde_json::from_str(text).map_err(|e| ConfigError::Parse {
        line: e.line(),
        column: e.column(),
        message: e.to_string(),
    })?;
    validate_field(&f, field)?;
    Ok(f)
}

fn positive(v: f64, field: &str) -> Result<(), ConfigError> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, format!("must be positive and finite (got {v})")))
    }
}

fn finite(v: f64, field: &str) -> Result<(), ConfigError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(invalid(field, "must be finite"))
    }
}

fn validate_field(f: &FieldConfig, field: &str) -> Result<(), ConfigError> {
    if f.beams.is_empty() {
        return Err(invalid(format!("{field}.beams"), "needs at least one beam"));
    }
    for (i, b) in f.beams.iter().enumerate() {
        let at = format!("{field}.beams[{i}]");
        if b.mode.p < 0 || b.mode.p > u32::MAX as i64 {
            return Err(invalid(format!("{at}.mode.p"), format!("must be a nonnegative integer (got {})", b.mode.p)));
        }
        if b.mode.l.abs() > i32::MAX as i64 {
            return Err(invalid(format!("{at}.mode.l"), "out of range"));
        }
        if Direction::from_sign(b.direction).is_none() {
            return Err(invalid(format!("{at}.direction"), format!("must be +1 or -1 (got {})", b.direction)));
        }
        finite(b.amplitude[0], &format!("{at}.amplitude[0]"))?;
        finite(b.amplitude[1], &format!("{at}.amplitude[1]"))?;
        finite(b.polarization_deg, &format!("{at}.polarization_deg"))?;
        finite(b.offset[0], &format!("{at}.offset[0]"))?;
        finite(b.offset[1], &format!("{at}.offset[1]"))?;
    }
    Ok(())
}

fn validate_file_name(name: &Option<String>, field: &str) -> Result<(), ConfigError> {
    match name {
        Some(n) if n.is_empty() || n.contains("..") || n.starts_with('/') => {
            Err(invalid(field, "must be a relative path inside the output directory"))
        }
        _ => Ok(()),
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), ConfigError> {
        let g = &self.geometry;
        positive(g.wavelength, "geometry.wavelength")?;
        match (g.rayleigh_length, g.waist) {
            (Some(z), None) => positive(z, "geometry.rayleigh_length")?,
            (None, Some(w)) => positive(w, "geometry.waist")?,
            _ => return Err(invalid("geometry", "give exactly one of rayleigh_length and waist")),
        }
        match &self.source {
            SourceConfig::Field(f) => validate_field(f, "source.field")?,
            SourceConfig::File(p) if p.is_empty() => return Err(invalid("source.file", "empty path")),
            SourceConfig::File(_) => {}
            SourceConfig::Lattice(l) => {
                positive(l.spacing, "source.lattice.spacing")?;
                for (i, a) in l.polarization_deg.iter().enumerate() {
                    finite(*a, &format!("source.lattice.polarization_deg[{i}]"))?;
                }
                if let ContentConfig::Helical(f) = &l.content {
                    validate_field(f, "source.lattice.content.helical")?;
                }
                if let CentralConfig::EmbedSingleHelix(e) = l.central {
                    if !(e.gaussian_ratio >= 0.0 && e.gaussian_ratio.is_finite()) {
                        return Err(invalid("source.lattice.central.embed_single_helix.gaussian_ratio", "must be nonnegative"));
                    }
                    positive(e.power_factor, "source.lattice.central.embed_single_helix.power_factor")?;
                    if l.content != ContentConfig::Gaussian {
                        return Err(invalid("source.lattice.central", "embedding needs gaussian content"));
                    }
                }
            }
        }
        if let Some(grid) = &self.grid {
            for (name, a) in [("grid.x", grid.x), ("grid.y", grid.y), ("grid.z", grid.z)] {
                finite(a.min, &format!("{name}.min"))?;
                finite(a.max, &format!("{name}.max"))?;
                if a.count == 0 {
                    return Err(invalid(format!("{name}.count"), "must be at least 1"));
                }
                if a.max < a.min {
                    return Err(invalid(format!("{name}.max"), "must not be below min"));
                }
            }
        }
        if let Some(t) = &self.trace {
            finite(t.z_min, "trace.z_min")?;
            finite(t.z_max, "trace.z_max")?;
            if !(t.z_max > t.z_min) {
                return Err(invalid("trace.z_max", "must exceed z_min"));
            }
            if t.steps < 2 {
                return Err(invalid("trace.steps", "must be at least 2"));
            }
            for (name, v) in [("trace.axis[0]", t.axis[0]), ("trace.axis[1]", t.axis[1])] {
                finite(v, name)?;
            }
        }
        if let Some(c) = &self.contour {
            if !(c.fraction > 0.0 && c.fraction < 1.0) {
                return Err(invalid("contour.fraction", "must lie strictly between 0 and 1"));
            }
        }
        let o = &self.outputs;
        for (name, v) in [
            ("outputs.dump", &o.dump),
            ("outputs.contour", &o.contour),
            ("outputs.dark_trace", &o.dark_trace),
            ("outputs.bright_trace", &o.bright_trace),
            ("outputs.pitch", &o.pitch),
            ("outputs.lattice_report", &o.lattice_report),
            ("outputs.embed", &o.embed),
        ] {
            validate_file_name(v, name)?;
        }
        let t = &self.tolerances;
        positive(t.newton, "tolerances.newton")?;
        positive(t.step_cap_w0, "tolerances.step_cap_w0")?;
        positive(t.exclusion_radius_w0, "tolerances.exclusion_radius_w0")?;
        positive(t.self_overlap_ratio, "tolerances.self_overlap_ratio")?;
        positive(t.dark, "tolerances.dark")?;
        if t.max_iterations == 0 {
            return Err(invalid("tolerances.max_iterations", "must be positive"));
        }
        if t.max_samples == 0 {
            return Err(invalid("tolerances.max_samples", "must be positive"));
        }
        if t.min_steps_per_half_pitch == 0 {
            return Err(invalid("tolerances.min_steps_per_half_pitch", "must be positive"));
        }
        Ok(())
    }

    pub fn geometry(&self) -> BeamGeometry {
        let g = &self.geometry;
        match (g.rayleigh_length, g.waist) {
            (Some(z), _) => BeamGeometry::from_rayleigh_length(g.wavelength, z),
            (_, Some(w)) => BeamGeometry::from_waist(g.wavelength, w),
            _ => unreachable!("validated"),
        }
        .expect("validated geometry")
    }

    /// Factor converting configured transverse positions to lengths.
    pub fn transverse_scale(&self) -> f64 {
        match self.units.transverse {
            TransverseUnit::Wavelength => 1.0,
            TransverseUnit::Waist => self.geometry().waist(),
        }
    }

    /// Sampling grid in physical lengths.
    pub fn sampling_grid(&self) -> Option<SamplingGrid> {
        let g = self.grid?;
        let s = self.transverse_scale();
        SamplingGrid::new(
            AxisRange::new(g.x.min * s, g.x.max * s, g.x.count),
            AxisRange::new(g.y.min * s, g.y.max * s, g.y.count),
            AxisRange::new(g.z.min, g.z.max, g.z.count),
        )
        .ok()
    }

    /// Builds the superposition for an inline or loaded field description.
    pub fn field_spec(&self, field: &FieldConfig) -> FieldSpec {
        let geom = self.geometry();
        let s = self.transverse_scale();
        let beams = field.beams.iter().map(|b| beam_component(geom, b, s)).collect();
        FieldSpec::new(beams, self.normalization).expect("validated field")
    }

    pub fn lattice_spec(&self, l: &LatticeConfig) -> LatticeSpec {
        let geom = self.geometry();
        let content = match &l.content {
            ContentConfig::Gaussian => SiteContent::Gaussian,
            ContentConfig::Helical(f) => SiteContent::Helical(self.field_spec(f)),
        };
        LatticeSpec {
            geometry: geom,
            normalization: self.normalization,
            spacing: l.spacing,
            rings: l.rings,
            polarization_angles: l.polarization_deg.map(f64::to_radians),
            content,
            central: match l.central {
                CentralConfig::None => CentralModification::None,
                CentralConfig::EmbedSingleHelix(e) => CentralModification::EmbedSingleHelix(EmbedOptions {
                    gaussian_ratio: e.gaussian_ratio,
                    power_factor: e.power_factor,
                }),
            },
        }
    }

    /// SHA-256 over everything that affects the numbers (not output names).
    pub fn physics_hash(&self) -> String {
        #[derive(Serialize)]
        struct Physics<'a> {
            units: &'a Units,
            geometry: &'a GeometryConfig,
            normalization: Normalization,
            source: &'a SourceConfig,
            grid: &'a Option<GridConfig>,
            trace: &'a Option<TraceConfig>,
            contour: &'a Option<ContourConfig>,
            tolerances: &'a Tolerances,
        }
        let text = serde_json::to_string(&Physics {
            units: &self.units,
            geometry: &self.geometry,
            normalization: self.normalization,
            source: &self.source,
            grid: &self.grid,
            trace: &self.trace,
            contour: &self.contour,
            tolerances: &self.tolerances,
        })
        .expect("serializable");
        Sha256::digest(text.as_bytes()).iter().map(|b| format!("{b:02x}")).collect()
    }
}

fn beam_component(geom: BeamGeometry, b: &BeamConfig, scale: f64) -> BeamComponent {
    BeamComponent::new(
        geom,
        ModeIndex::new(b.mode.p as u32, b.mode.l as i32),
        Complex64::new(b.amplitude[0], b.amplitude[1]),
        Direction::from_sign(b.direction).expect("validated direction"),
    )
    .with_polarization(b.polarization_deg.to_radians())
    .with_offset(b.offset[0] * scale, b.offset[1] * scale)
}

#[cfg(test)]
mod tests {
    use super::*;

    const MINIMAL: &str = r#"{
        "geometry": {"rayleigh_length": 50},
        "source": {"field": {"beams": [{"mode": {"p": 0, "l": 0}}]}},
        "grid": {"x": {"min": 0, "max": 0, "count": 1},
                 "y": {"min": 0, "max": 0, "count": 1},
                 "z": {"min": 0, "max": 0, "count": 1}},
        "command": "eval-grid"
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let c = parse_config(MINIMAL).unwrap();
        assert_eq!(c.command, Some(Command::EvalGrid));
        assert_eq!(c.geometry.wavelength, 1.0);
        assert_eq!(c.normalization, Normalization::UnitNorm);
        assert_eq!(c.tolerances, Tolerances::default());
        assert_eq!(c.units.transverse, TransverseUnit::Wavelength);
        let SourceConfig::Field(f) = &c.source else { panic!() };
        assert_eq!(f.beams[0].amplitude, [1.0, 0.0]);
        assert_eq!(f.beams[0].direction, 1);
        assert_eq!(c.sampling_grid().unwrap().len(), 1);
    }

    #[test]
    fn negative_p_names_field() {
        let text = MINIMAL.replace(r#""p": 0"#, r#""p": -1"#);
        match parse_config(&text) {
            Err(ConfigError::Invalid { field, .. }) => assert_eq!(field, "source.field.beams[0].mode.p"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn unknown_key_and_syntax_errors_carry_position() {
        let text = MINIMAL.replace(r#""command""#, r#""colour": 1, "command""#);
        assert!(matches!(parse_config(&text), Err(ConfigError::Parse { line: 5.., .. })));
        match parse_config("{\n  \"geometry\": ,\n}") {
            Err(ConfigError::Parse { line, column, .. }) => assert_eq!((line, column), (2, 15)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn validation_catches_bad_values() {
        let cases = [
            (r#""rayleigh_length": 50"#, r#""rayleigh_length": -5"#, "geometry.rayleigh_length"),
            (r#""rayleigh_length": 50"#, r#""rayleigh_length": 50, "waist": 2"#, "geometry"),
            (r#""count": 1},
                 "y""#, r#""count": 0},
                 "y""#, "grid.x.count"),
            (r#""l": 0}"#, r#""l": 0}, "direction": 0"#, "source.field.beams[0].direction"),
        ];
        for (from, to, field) in cases {
            let text = MINIMAL.replace(from, to);
            match parse_config(&text) {
                Err(ConfigError::Invalid { field: f, .. }) => assert_eq!(f, field),
                other => panic!("{field}: {other:?}"),
            }
        }
    }

    #[test]
    fn hash_ignores_output_names() {
        let a = parse_config(MINIMAL).unwrap();
        let mut b = a.clone();
        b.outputs.dump = Some("other.dat".into());
        assert_eq!(a.physics_hash(), b.physics_hash());
        b.geometry.wavelength = 2.0;
        assert_ne!(a.physics_hash(), b.physics_hash());
        assert_eq!(a.physics_hash().len(), 64);
    }

    #[test]
    fn waist_units_scale_positions() {
        let text = MINIMAL
            .replace(r#""command""#, r#""units": {"transverse": "waist"}, "command""#)
            .replace(r#""x": {"min": 0, "max": 0"#, r#""x": {"min": -1, "max": 1"#);
        let c = parse_config(&text).unwrap();
        let w0 = c.geometry().waist();
        assert_eq!(c.sampling_grid().unwrap().x.max, w0);
    }
}

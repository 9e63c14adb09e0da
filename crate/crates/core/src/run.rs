//! Executes a validated configuration and writes its artifacts.

use std::f64::consts::TAU;
use std::fs;
use std::path::{Path, PathBuf};

use crate::config::{
    parse_field, CentralConfig, Command, ConfigError, RunConfig, SourceConfig, TraceConfig, TransverseUnit,
};
use crate::contour::extract_contours;
use crate::error::{FieldError, HelixError, LatticeError};
use crate::grid::{evaluate_grid, FieldDump, SamplingGrid};
use crate::helix::{
    azimuthal_maxima, darkest_point, estimate_pitch, find_zero, focal_peak, maximize_intensity, trace_bright_ridge,
    trace_dark_helix, trap_profile, HelixTrace, TraceOptions, TrapOptions, ZeroOptions,
};
use crate::io::{write_contours, write_dump, write_trace, Header, Report};
use crate::lattice::{embed_single_helix, lattice_field, lattice_report, LatticeSpec, ReportOptions};
use crate::modes::{mode_power, ModeIndex};
use crate::superposition::FieldSpec;

#[derive(Debug, Clone, PartialEq)]
pub struct RunOptions {
    pub out_dir: PathBuf,
    /// Worker threads for grid evaluation; 0 picks the machine default.
    pub threads: usize,
    /// Command from the command line; must agree with the config's, if any.
    pub command: Option<Command>,
    /// Dark-trace seed override, in the config's transverse unit.
    pub seed: Option<[f64; 2]>,
    /// Directory that `source.file` paths are relative to.
    pub base_dir: PathBuf,
}

impl RunOptions {
    pub fn new(out_dir: impl Into<PathBuf>) -> Self {
        Self {
            out_dir: out_dir.into(),
            threads: 0,
            command: None,
            seed: None,
            base_dir: PathBuf::from("."),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RunError {
    #[error("input error: {0}")]
    Input(String),
    #[error("numerical failure in {operation}: {message}")]
    Numerical { operation: &'static str, message: String },
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Input(_) => 1,
            RunError::Numerical { .. } => 2,
        }
    }
}

impl From<ConfigError> for RunError {
    fn from(e: ConfigError) -> Self {
        RunError::Input(e.to_string())
    }
}

fn input(msg: impl Into<String>) -> RunError {
    RunError::Input(msg.into())
}

fn field_err(operation: &'static str, e: FieldError) -> RunError {
    input(format!("{operation}: {e}"))
}

fn helix_err(operation: &'static str, e: HelixError) -> RunError {
    match e {
        HelixError::InvalidRequest(_)
        | HelixError::TooFewSteps { .. }
        | HelixError::MixedPolarization
        | HelixError::DegenerateOam(_) => input(format!("{operation}: {e}")),
        e => RunError::Numerical {
            operation,
            message: e.to_string(),
        },
    }
}

fn lattice_err(operation: &'static str, e: LatticeError) -> RunError {
    match e {
        LatticeError::Field(f) => field_err(operation, f),
        LatticeError::Helix(h) => helix_err(operation, h),
        LatticeError::BadSpacing | LatticeError::NotEmbeddable | LatticeError::BadTemplate => {
            input(format!("{operation}: {e}"))
        }
        e => RunError::Numerical {
            operation,
            message: e.to_string(),
        },
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub command: Command,
    pub config_hash: String,
    /// Written files, in write order.
    pub artifacts: Vec<PathBuf>,
    /// Non-fatal conditions (such as an ill-defined bright ridge).
    pub warnings: Vec<String>,
}

/// Runs `config` on a dedicated thread pool. Nothing is written unless every
/// requested artifact could be computed.
pub fn run(config: &RunConfig, opts: &RunOptions) -> Result<RunOutcome, RunError> {
    config.validate()?;
    let command = match (config.command, opts.command) {
        (Some(a), Some(b)) if a != b => {
            return Err(input(format!("command: config says `{a}` but `{b}` was requested")));
        }
        (a, b) => a.or(b).ok_or_else(|| input("command: none given in the config or on the command line"))?,
    };
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(opts.threads)
        .build()
        .map_err(|e| input(format!("threads: {e}")))?;
    let mut runner = Runner::new(config, opts, command)?;
    pool.install(|| runner.execute())?;
    runner.flush()
}

struct Runner<'a> {
    config: &'a RunConfig,
    opts: &'a RunOptions,
    command: Command,
    hash: String,
    units: &'static str,
    scale: f64,
    pending: Vec<(String, String)>,
    warnings: Vec<String>,
}

impl<'a> Runner<'a> {
    fn new(config: &'a RunConfig, opts: &'a RunOptions, command: Command) -> Result<Self, RunError> {
        Ok(Self {
            config,
            opts,
            command,
            hash: config.physics_hash(),
            units: match config.units.transverse {
                TransverseUnit::Wavelength => "wavelength",
                TransverseUnit::Waist => "waist",
            },
            scale: config.transverse_scale(),
            pending: Vec::new(),
            warnings: Vec::new(),
        })
    }

    fn header(&self, kind: &str) -> Header {
        Header::new(kind, &self.hash, self.units)
    }

    fn emit(&mut self, name: &str, text: String) {
        self.pending.push((name.to_string(), text));
    }

    fn flush(self) -> Result<RunOutcome, RunError> {
        let dir = &self.opts.out_dir;
        fs::create_dir_all(dir).map_err(|e| input(format!("--out {}: {e}", dir.display())))?;
        let mut artifacts = Vec::new();
        for (name, text) in &self.pending {
            let path = dir.join(name);
            if let Some(parent) = path.parent() {
                fs::create_dir_all(parent).map_err(|e| input(format!("{}: {e}", parent.display())))?;
            }
            fs::write(&path, text).map_err(|e| input(format!("{}: {e}", path.display())))?;
            artifacts.push(path);
        }
        Ok(RunOutcome {
            command: self.command,
            config_hash: self.hash,
            artifacts,
            warnings: self.warnings,
        })
    }

    fn execute(&mut self) -> Result<(), RunError> {
        let c = self.config;
        let mut out = c.outputs.clone();
        match self.command {
            Command::EvalGrid => {
                out.dump.get_or_insert_with(|| "field.dump".into());
            }
            Command::Trace => {
                let t = c.trace.ok_or_else(|| input("trace: required by the trace command"))?;
                if t.kind.dark() {
                    out.dark_trace.get_or_insert_with(|| "dark_trace.dat".into());
                }
                if t.kind.bright() {
                    out.bright_trace.get_or_insert_with(|| "bright_trace.dat".into());
                }
            }
            Command::Pitch => {
                out.pitch.get_or_insert_with(|| "pitch.txt".into());
            }
            Command::Contour => {
                out.contour.get_or_insert_with(|| "contour.dat".into());
            }
            Command::Lattice => {
                out.lattice_report.get_or_insert_with(|| "lattice_report.txt".into());
            }
            Command::Embed => {
                out.embed.get_or_insert_with(|| "embed.txt".into());
            }
        }

        let lattice = match &c.source {
            SourceConfig::Lattice(l) => Some((c.lattice_spec(l), l)),
            _ => None,
        };
        if (out.lattice_report.is_some() || out.embed.is_some()) && lattice.is_none() {
            return Err(input("source: lattice reports need a `lattice` source"));
        }
        let spec = match (&c.source, &lattice) {
            (SourceConfig::Field(f), _) => c.field_spec(f),
            (SourceConfig::File(p), _) => {
                let path = self.opts.base_dir.join(p);
                let text = fs::read_to_string(&path).map_err(|e| input(format!("source.file {}: {e}", path.display())))?;
                c.field_spec(&parse_field(&text, "source.file")?)
            }
            (SourceConfig::Lattice(_), Some((ls, _))) => lattice_field(ls).map_err(|e| lattice_err("lattice_field", e))?,
            _ => unreachable!(),
        };

        let needs_grid = out.dump.is_some() || out.contour.is_some() || out.lattice_report.is_some();
        let grid = if needs_grid {
            let g = c.sampling_grid().ok_or_else(|| input("grid: required for dumps, contours and lattice reports"))?;
            Some(g)
        } else {
            None
        };

        let mut dump: Option<FieldDump> = None;
        if let (Some(name), Some((ls, lc))) = (&out.lattice_report, &lattice) {
            let grid = grid.as_ref().expect("grid checked");
            let ropts = ReportOptions {
                exclusion_radius_w0: c.tolerances.exclusion_radius_w0,
                core_rings: lc.core_rings,
            };
            let (_, d, report) =
                lattice_report(ls, grid, c.tolerances.max_samples, &ropts).map_err(|e| lattice_err("lattice_report", e))?;
            let text = self.lattice_text(ls, &report);
            self.emit(name, text);
            dump = Some(d);
        }
        if out.dump.is_some() || out.contour.is_some() {
            let d = match dump.take() {
                Some(d) => d,
                None => self.evaluate(&spec, grid.as_ref().expect("grid checked"))?,
            };
            if let Some(name) = &out.dump {
                let text = write_dump(&d, &self.header("field-dump"), self.scale);
                self.emit(name, text);
            }
            if let Some(name) = &out.contour {
                let fraction = c.contour.map_or(0.9, |k| k.fraction);
                let set = extract_contours(&d, fraction).map_err(|e| input(format!("contour: {e}")))?;
                let text = write_contours(&set, &self.header("contours"), self.scale);
                self.emit(name, text);
            }
        }
        if let (Some(name), Some((ls, lc))) = (&out.embed, &lattice) {
            if !matches!(lc.central, CentralConfig::EmbedSingleHelix(_)) {
                return Err(input("source.lattice.central: the embed output needs embed_single_helix"));
            }
            let text = self.embed_text(ls)?;
            self.emit(name, text);
        }

        if out.dark_trace.is_some() || out.bright_trace.is_some() || out.pitch.is_some() {
            let t = c.trace.ok_or_else(|| input("trace: required for traces and pitch reports"))?;
            let topts = self.trace_options(&t);
            let want_dark = out.dark_trace.is_some() || out.pitch.is_some();
            let dark = if want_dark {
                let seed = self.dark_seed(&spec, &t);
                Some(
                    trace_dark_helix(&spec, t.z_min, t.z_max, t.steps, seed, &topts)
                        .map_err(|e| helix_err("trace_dark_helix", e))?,
                )
            } else {
                None
            };
            let bright = if out.bright_trace.is_some() || (out.pitch.is_some() && t.kind.bright()) {
                let seed = match t.bright_seed {
                    Some([x, y]) => (x * self.scale, y * self.scale),
                    None => {
                        let p = focal_peak(&spec, t.z_min, topts.axis, 2.0 * spec.waist(), 81);
                        (p.x, p.y)
                    }
                };
                Some(trace_bright_ridge(&spec, t.z_min, t.z_max, t.steps, seed, &topts))
            } else {
                None
            };
            if let (Some(name), Some(d)) = (&out.dark_trace, &dark) {
                let text = write_trace(&d.samples, &self.header("dark-trace").with("status", "ok"), self.scale);
                self.emit(name, text);
            }
            if let Some(b) = &bright {
                let status = match b {
                    Ok(_) => "ok".to_string(),
                    Err(HelixError::RidgeIllDefined { z, cause }) => {
                        let msg = format!("ridge-ill-defined z={z} self_overlap={} cause={cause}", cause.is_self_overlap());
                        self.warnings.push(format!("bright ridge: {msg}"));
                        msg
                    }
                    Err(e) => return Err(helix_err("trace_bright_ridge", e.clone())),
                };
                if let Some(name) = &out.bright_trace {
                    let samples = b.as_ref().map(|t| t.samples.as_slice()).unwrap_or(&[]);
                    let text = write_trace(samples, &self.header("bright-trace").with("status", status), self.scale);
                    self.emit(name, text);
                }
            }
            if let Some(name) = &out.pitch {
                let d = dark.as_ref().expect("dark trace computed");
                let b = bright.as_ref().and_then(|b| b.as_ref().ok());
                let text = self.pitch_text(&spec, d, b, &topts)?;
                self.emit(name, text);
            }
        }
        Ok(())
    }

    fn evaluate(&self, spec: &FieldSpec, grid: &SamplingGrid) -> Result<FieldDump, RunError> {
        evaluate_grid(spec, grid, self.config.tolerances.max_samples).map_err(|e| field_err("evaluate_grid", e))
    }

    fn trace_options(&self, t: &TraceConfig) -> TraceOptions {
        let tol = &self.config.tolerances;
        TraceOptions {
            zero: ZeroOptions {
                tolerance: tol.newton,
                max_iterations: tol.max_iterations,
                ..ZeroOptions::default()
            },
            step_cap_w0: tol.step_cap_w0,
            min_steps_per_half_pitch: tol.min_steps_per_half_pitch,
            axis: [t.axis[0] * self.scale, t.axis[1] * self.scale],
            self_overlap_ratio: tol.self_overlap_ratio,
        }
    }

    /// Darkest point of the first plane; a zero sitting on the axis itself
    /// (both beams vortices) is skipped.
    fn dark_seed(&self, spec: &FieldSpec, t: &TraceConfig) -> (f64, f64) {
        if let Some([x, y]) = self.opts.seed.or(t.seed) {
            return (x * self.scale, y * self.scale);
        }
        let w0 = spec.waist();
        let axis = [t.axis[0] * self.scale, t.axis[1] * self.scale];
        let peak = focal_peak(spec, t.z_min, axis, 2.0 * w0, 41).intensity;
        let on_axis = spec.intensity_at(axis[0], axis[1], t.z_min) <= 1e-24 * peak;
        let min_radius = if on_axis { 0.2 * w0 } else { 0.0 };
        darkest_point(spec, t.z_min, axis, 1.5 * w0, 61, min_radius)
    }

    fn pitch_text(
        &self,
        spec: &FieldSpec,
        dark: &HelixTrace,
        bright: Option<&HelixTrace>,
        topts: &TraceOptions,
    ) -> Result<String, RunError> {
        let s = self.scale;
        let axis = topts.axis;
        let est = estimate_pitch(dark).map_err(|e| helix_err("estimate_pitch", e))?;
        let mut r = Report::new();
        r.text("status", "ok");
        if let Some(p) = spec.predicted_pitch() {
            r.num("predicted_pitch", p);
            r.num("relative_error", (est.pitch - p) / p.abs());
        }
        r.num("pitch", est.pitch)
            .num("slope", est.slope)
            .num("turns", est.turns)
            .num("focal_angle_rad", est.focal_angle)
            .num("focal_angle_deg", est.focal_angle.to_degrees());

        let nearest = |t: &HelixTrace| {
            *t.samples
                .iter()
                .min_by(|a, b| a.z.abs().total_cmp(&b.z.abs()))
                .expect("trace has samples")
        };
        let d0 = nearest(dark);
        let z0 = d0.z;
        let zero = find_zero(spec, z0, (d0.x, d0.y), &topts.zero).map_err(|e| helix_err("find_zero", e))?;
        r.num("focal_z", z0).pair("dark_zero", zero.0 / s, zero.1 / s);
        let peak = match bright {
            Some(b) => {
                let b0 = nearest(b);
                maximize_intensity(spec, z0, (b0.x, b0.y), topts).map_err(|e| helix_err("maximize_intensity", e))?
            }
            None => focal_peak(spec, z0, axis, 2.0 * spec.waist(), 81),
        };
        r.pair("bright_peak", peak.x / s, peak.y / s);
        let phi_d = (zero.1 - axis[1]).atan2(zero.0 - axis[0]);
        let phi_b = (peak.y - axis[1]).atan2(peak.x - axis[0]);
        let sep = (phi_b - phi_d).rem_euclid(TAU);
        r.num("azimuth_separation_deg", sep.min(TAU - sep).to_degrees());
        let shell = (peak.x - axis[0]).hypot(peak.y - axis[1]);
        r.num("shell_radius", shell / s);
        r.text("azimuthal_maxima", azimuthal_maxima(spec, z0, axis, shell, 720).to_string());

        let trap = TrapOptions {
            axis,
            dark_tolerance: self.config.tolerances.dark,
        };
        match trap_profile(spec, [zero.0, zero.1, z0], &trap) {
            Ok(t) => {
                r.num("kappa_x", t.kappa_x)
                    .num("kappa_eta", t.kappa_eta)
                    .num("kappa_ratio", t.kappa_eta / t.kappa_x)
                    .num("gradient_radial", t.radial.norm())
                    .num("gradient_azimuthal", t.azimuthal.norm())
                    .num("gradient_axial", t.axial.norm())
                    .num("azimuthal_axial_ratio", t.azimuthal_axial_ratio())
                    .text("trap_degenerate", t.degenerate.to_string());
            }
            Err(e) => {
                r.text("trap", format!("unavailable ({e})"));
            }
        }
        Ok(r.render(&self.header("pitch-report").with("gradients", "per unit length")))
    }

    fn lattice_text(&self, ls: &LatticeSpec, report: &crate::lattice::LatticeReport) -> String {
        let s = self.scale;
        let mut r = Report::new();
        let u = &report.uniformity;
        r.text("sites", report.sites.to_string())
            .num("spacing_w0", ls.spacing)
            .text("rings", ls.rings.to_string())
            .text("mask", u.mask.clone())
            .text("uniformity_samples", u.samples.to_string())
            .num("uniformity_min", u.i_min)
            .num("uniformity_max", u.i_max)
            .num("uniformity_ratio", u.ratio);
        match &report.contrast {
            None => {
                r.text("suppression", "none (no dark cores)");
            }
            Some(cr) => {
                r.num("background_median", cr.background)
                    .num("worst_core_intensity", cr.worst)
                    .num("suppression", cr.suppression)
                    .text("cores", cr.cores.len().to_string());
                for (k, core) in cr.cores.iter().enumerate() {
                    let [x, y, z] = core.position;
                    r.text(
                        &format!("core[{k}]"),
                        format!("{} {} {} {}", x / s, y / s, z, crate::io::fmt_f64(core.intensity)),
                    );
                }
            }
        }
        r.render(&self.header("lattice-report"))
    }

    fn embed_text(&self, ls: &LatticeSpec) -> Result<String, RunError> {
        let e = embed_single_helix(ls).map_err(|e| lattice_err("embed_single_helix", e))?;
        let norm = ls.normalization;
        let p00: f64 = mode_power(ModeIndex::new(0, 0), norm);
        let pair_power: f64 = e.spec.components()[..2]
            .iter()
            .map(|c| c.amplitude.norm_sqr() * mode_power::<f64>(c.mode, norm))
            .sum();
        let s = self.scale;
        let mut r = Report::new();
        r.num("helix_scale", e.helix_scale)
            .num("pair_power_over_gaussian", pair_power / p00)
            .pair("core_seed", e.core_seed.0 / s, e.core_seed.1 / s)
            .text("components", e.spec.components().len().to_string())
            .text("auxiliary", e.auxiliary.len().to_string());
        for (k, a) in e.auxiliary.iter().enumerate() {
            r.text(
                &format!("auxiliary[{k}]"),
                format!(
                    "p={} l={} re={} im={} polarization_deg={}",
                    a.mode.p,
                    a.mode.l,
                    crate::io::fmt_f64(a.amplitude.re),
                    crate::io::fmt_f64(a.amplitude.im),
                    crate::io::fmt_f64(a.polarization.to_degrees())
                ),
            );
        }
        Ok(r.render(&self.header("embed-report")))
    }
}

/// Resolves the `source.file` base directory from a config path.
pub fn base_dir_of(config_path: &Path) -> PathBuf {
    config_path.parent().map(Path::to_path_buf).unwrap_or_else(|| PathBuf::from("."))
}

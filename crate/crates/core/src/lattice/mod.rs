//! Hexagonal beam lattices with three polarization sublattices, embedded
//! dark helices, and background/contrast measurements.

mod contrast;
mod embed;
mod report;

use num_complex::Complex64;

use crate::error::LatticeError;
use crate::helix::{darkest_point, find_zero, helix_position_model, ZeroOptions};
use crate::modes::{BeamGeometry, Direction, ModeIndex, Normalization};
use crate::superposition::{BeamComponent, FieldSpec};

pub use contrast::{
    background_uniformity, core_suppression, median_intensity, polish_core, ContrastReport, Mask, PolishedCore, Region,
    UniformityReport, SUPPRESSION_CAP,
};
pub use embed::{embed_single_helix, EmbedOptions, EmbeddedHelix};
pub use report::{lattice_field, lattice_report, LatticeReport, ReportOptions};

/// What each lattice site carries.
#[derive(Debug, Clone, PartialEq)]
pub enum SiteContent {
    /// One forward `u_{0,0}` of unit amplitude.
    Gaussian,
    /// The template's components, translated to the site and repolarized.
    Helical(FieldSpec),
}

#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub enum CentralModification {
    #[default]
    None,
    EmbedSingleHelix(EmbedOptions),
}

/// Triangular arrangement of parallel beams, `rings` hexagonal shells around the origin.
#[derive(Debug, Clone, PartialEq)]
pub struct LatticeSpec {
    pub geometry: BeamGeometry,
    pub normalization: Normalization,
    /// Nearest-neighbour distance in waists.
    pub spacing: f64,
    pub rings: u32,
    /// Polarization angle of each sublattice, radians.
    pub polarization_angles: [f64; 3],
    pub content: SiteContent,
    pub central: CentralModification,
}

impl LatticeSpec {
    pub fn gaussian(geometry: BeamGeometry, spacing: f64, rings: u32) -> Self {
        Self {
            geometry,
            normalization: Normalization::UnitNorm,
            spacing,
            rings,
            polarization_angles: DEFAULT_POLARIZATIONS,
            content: SiteContent::Gaussian,
            central: CentralModification::None,
        }
    }

    pub fn helical(template: FieldSpec, spacing: f64, rings: u32) -> Self {
        Self {
            geometry: *template.geometry(),
            normalization: template.normalization(),
            spacing,
            rings,
            polarization_angles: DEFAULT_POLARIZATIONS,
            content: SiteContent::Helical(template),
            central: CentralModification::None,
        }
    }

    /// Physical nearest-neighbour distance.
    pub fn pitch(&self) -> f64 {
        self.spacing * self.geometry.waist()
    }

    /// Sites in deterministic order (rows of increasing `j`, then `i`).
    pub fn sites(&self) -> Vec<Site> {
        let n = self.rings as i32;
        let a = self.pitch();
        let mut out = Vec::new();
        for j in -n..=n {
            for i in -n..=n {
                if hex_distance(i, j) > n as u32 {
                    continue;
                }
                out.push(Site {
                    i,
                    j,
                    position: [a * (i as f64 + 0.5 * j as f64), a * (j as f64 * 3f64.sqrt() / 2.0)],
                    sublattice: sublattice(i, j),
                });
            }
        }
        out
    }
}

/// Sublattice polarizations 0°, 60°, 120°.
pub const DEFAULT_POLARIZATIONS: [f64; 3] = [0.0, std::f64::consts::FRAC_PI_3, 2.0 * std::f64::consts::FRAC_PI_3];

/// Number of hexagonal shells between site `(i, j)` and the origin.
pub fn hex_distance(i: i32, j: i32) -> u32 {
    i.unsigned_abs().max(j.unsigned_abs()).max((i + j).unsigned_abs())
}

/// Proper three-coloring of the triangular lattice: `(i - j) mod 3`.
pub fn sublattice(i: i32, j: i32) -> usize {
    (i - j).rem_euclid(3) as usize
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Site {
    pub i: i32,
    pub j: i32,
    pub position: [f64; 2],
    pub sublattice: usize,
}

impl Site {
    pub fn is_origin(&self) -> bool {
        self.i == 0 && self.j == 0
    }
}

fn site_components(spec: &LatticeSpec, site: &Site) -> Vec<BeamComponent> {
    let angle = spec.polarization_angles[site.sublattice];
    let [sx, sy] = site.position;
    match &spec.content {
        SiteContent::Gaussian => vec![BeamComponent::new(
            spec.geometry,
            ModeIndex::new(0, 0),
            Complex64::new(1.0, 0.0),
            Direction::Forward,
        )
        .with_polarization(angle)
        .with_offset(sx, sy)],
        SiteContent::Helical(template) => template
            .components()
            .iter()
            .map(|c| {
                let mut c = c.clone();
                c.polarization = angle;
                c.offset = [c.offset[0] + sx, c.offset[1] + sy];
                c
            })
            .collect(),
    }
}

/// Expands the lattice into one flat superposition.
pub fn generate_lattice(spec: &LatticeSpec) -> Result<FieldSpec, LatticeError> {
    if !(spec.spacing > 0.0 && spec.spacing.is_finite()) {
        return Err(LatticeError::BadSpacing);
    }
    let components = spec.sites().iter().flat_map(|s| site_components(spec, s)).collect();
    Ok(FieldSpec::new(components, spec.normalization)?)
}

/// Dark core of a helical template (relative to its site) at each `z`:
/// Newton zero at the focus seeded from the darkest point of a coarse scan,
/// then the position model as seed for the other planes.
pub fn template_cores(template: &FieldSpec, zs: &[f64]) -> Result<Vec<(f64, f64)>, LatticeError> {
    let (fwd, bwd) = template.counterpropagating_pair().ok_or(LatticeError::BadTemplate)?;
    if fwd.mode.l == bwd.mode.l {
        return Err(LatticeError::BadTemplate);
    }
    let w0 = template.waist();
    let seed = darkest_point(template, 0.0, [0.0, 0.0], 1.5 * w0, 61, 0.0);
    let opts = ZeroOptions::default();
    let focal = find_zero(template, 0.0, seed, &opts)?;
    zs.iter()
        .map(|&z| {
            let seed = helix_position_model(fwd.mode, bwd.mode, template.geometry(), focal, z)?;
            Ok(find_zero(template, z, seed, &opts)?)
        })
        .collect()
}

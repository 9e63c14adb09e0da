use crate::error::LatticeError;
use crate::grid::{evaluate_grid, FieldDump, SamplingGrid};
use crate::superposition::FieldSpec;

use super::contrast::{background_uniformity, core_suppression, median_intensity, ContrastReport, Mask, Region};
use super::embed::embed_single_helix;
use super::{generate_lattice, hex_distance, template_cores, CentralModification, LatticeSpec, SiteContent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReportOptions {
    /// Discs of this radius (waists) around every dark core are left out of
    /// the uniformity statistic.
    pub exclusion_radius_w0: f64,
    /// Cores of sites within this hex distance of the origin are polished
    /// for the suppression figure.
    pub core_rings: u32,
}

impl Default for ReportOptions {
    fn default() -> Self {
        Self {
            exclusion_radius_w0: 0.35,
            core_rings: 1,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct LatticeReport {
    pub sites: usize,
    pub uniformity: super::UniformityReport,
    /// `None` for a plain Gaussian lattice, which has no dark cores.
    pub contrast: Option<ContrastReport>,
}

/// Full superposition described by `spec`, including any central embedding.
pub fn lattice_field(spec: &LatticeSpec) -> Result<FieldSpec, LatticeError> {
    match spec.central {
        CentralModification::None => generate_lattice(spec),
        CentralModification::EmbedSingleHelix(_) => Ok(embed_single_helix(spec)?.spec),
    }
}

/// Dark cores `(x, y, z)` of the lattice at every grid slice: all of them
/// and the subset used for the suppression figure.
fn lattice_cores(spec: &LatticeSpec, zs: &[f64], opts: &ReportOptions) -> Result<(Vec<[f64; 3]>, Vec<[f64; 3]>), LatticeError> {
    let mut all = Vec::new();
    let mut probed = Vec::new();
    match (&spec.content, spec.central) {
        (SiteContent::Helical(template), _) => {
            let offsets = template_cores(template, zs)?;
            for site in spec.sites() {
                for (&z, &(dx, dy)) in zs.iter().zip(&offsets) {
                    let core = [site.position[0] + dx, site.position[1] + dy, z];
                    all.push(core);
                    if hex_distance(site.i, site.j) <= opts.core_rings {
                        probed.push(core);
                    }
                }
            }
        }
        (SiteContent::Gaussian, CentralModification::EmbedSingleHelix(_)) => {
            let embedded = embed_single_helix(spec)?;
            let pair = FieldSpec::new(embedded.spec.components()[..2].to_vec(), spec.normalization)?;
            for (&z, &(x, y)) in zs.iter().zip(&template_cores(&pair, zs)?) {
                all.push([x, y, z]);
                probed.push([x, y, z]);
            }
        }
        (SiteContent::Gaussian, CentralModification::None) => {}
    }
    Ok((all, probed))
}

/// Evaluates the lattice on `grid` and measures background uniformity over
/// the Wigner-Seitz cell of the central site and, when the
/// lattice carries dark cores, their suppression against the median focal
/// intensity of the same hexagon.
pub fn lattice_report(
    spec: &LatticeSpec,
    grid: &SamplingGrid,
    max_samples: u64,
    opts: &ReportOptions,
) -> Result<(FieldSpec, FieldDump, LatticeReport), LatticeError> {
    let field = lattice_field(spec)?;
    let dump = evaluate_grid(&field, grid, max_samples)?;
    let zs: Vec<f64> = (0..grid.z.count).map(|i| grid.z.coord(i)).collect();
    let (all, probed) = lattice_cores(spec, &zs, opts)?;
    let hexagon = Region::CentralHexagon {
        circumradius: spec.pitch() / 3f64.sqrt(),
    };
    let w0 = spec.geometry.waist();
    let mask = Mask::new(hexagon).excluding(all, opts.exclusion_radius_w0 * w0);
    let uniformity = background_uniformity(&dump, &mask)?;
    let contrast = if probed.is_empty() {
        None
    } else {
        let background = median_intensity(&dump, &Mask::new(hexagon).focal())?;
        Some(core_suppression(&field, &probed, background)?)
    };
    let report = LatticeReport {
        sites: spec.sites().len(),
        uniformity,
        contrast,
    };
    Ok((field, dump, report))
}

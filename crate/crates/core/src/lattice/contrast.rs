use crate::error::LatticeError;
use crate::grid::FieldDump;
use crate::superposition::FieldSpec;

/// Reported suppression when a core is an exact zero.
pub const SUPPRESSION_CAP: f64 = 1e12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Region {
    /// Regular hexagon centred on the origin with vertices at 30° + k·60°,
    /// i.e. flat sides facing the nearest lattice neighbours. With
    /// circumradius `a/√3` it is the Wigner-Seitz cell of the central site.
    CentralHexagon { circumradius: f64 },
    Disc { center: [f64; 2], radius: f64 },
    Everything,
}

impl Region {
    pub fn contains(&self, x: f64, y: f64) -> bool {
        match *self {
            Region::CentralHexagon { circumradius } => {
                let apothem = circumradius * 3f64.sqrt() / 2.0 * (1.0 + 1e-12);
                (0..6).all(|k| {
                    let t = k as f64 * std::f64::consts::FRAC_PI_3;
                    x * t.cos() + y * t.sin() <= apothem
                })
            }
            Region::Disc { center, radius } => (x - center[0]).hypot(y - center[1]) <= radius * (1.0 + 1e-12),
            Region::Everything => true,
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            Region::CentralHexagon { circumradius } => format!("central hexagon, circumradius {circumradius}"),
            Region::Disc { center, radius } => format!("disc at ({}, {}), radius {radius}", center[0], center[1]),
            Region::Everything => "whole grid".to_string(),
        }
    }
}

/// Samples selected for a background statistic.
#[derive(Debug, Clone, PartialEq)]
pub struct Mask {
    pub region: Region,
    /// Known dark cores `(x, y, z)`; samples in the same slice closer than
    /// `exclusion_radius` are skipped.
    pub exclusions: Vec<[f64; 3]>,
    pub exclusion_radius: f64,
    /// Only use the slice nearest z = 0.
    pub focal_only: bool,
}

impl Mask {
    pub fn new(region: Region) -> Self {
        Self {
            region,
            exclusions: Vec::new(),
            exclusion_radius: 0.0,
            focal_only: false,
        }
    }

    pub fn excluding(mut self, cores: Vec<[f64; 3]>, radius: f64) -> Self {
        self.exclusions = cores;
        self.exclusion_radius = radius;
        self
    }

    pub fn focal(mut self) -> Self {
        self.focal_only = true;
        self
    }

    pub fn describe(&self) -> String {
        let mut s = self.region.describe();
        if !self.exclusions.is_empty() {
            s.push_str(&format!(
                "; {} cores excluded within {}",
                self.exclusions.len(),
                self.exclusion_radius
            ));
        }
        if self.focal_only {
            s.push_str("; focal slice");
        }
        s
    }

    fn selected<'d>(&'d self, dump: &'d FieldDump) -> impl Iterator<Item = f64> + 'd {
        let g = &dump.grid;
        let slice_tol = (0.5 * g.z.step()).max(1e-9);
        let focal = dump.nearest_slice(0.0);
        (0..dump.intensity.len()).filter_map(move |i| {
            let (_, _, iz) = g.unravel(i);
            if self.focal_only && iz != focal {
                return None;
            }
            let [x, y, z] = g.point(i);
            if !self.region.contains(x, y) {
                return None;
            }
            let near_core = self.exclusions.iter().any(|c| {
                (c[2] - z).abs() <= slice_tol && (c[0] - x).hypot(c[1] - y) < self.exclusion_radius
            });
            (!near_core).then_some(dump.intensity[i])
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct UniformityReport {
    pub mask: String,
    pub samples: usize,
    pub i_min: f64,
    pub i_max: f64,
    pub ratio: f64,
}

/// Intensity extrema over the masked samples.
pub fn background_uniformity(dump: &FieldDump, mask: &Mask) -> Result<UniformityReport, LatticeError> {
    let (mut lo, mut hi, mut n) = (f64::INFINITY, f64::NEG_INFINITY, 0usize);
    for v in mask.selected(dump) {
        lo = lo.min(v);
        hi = hi.max(v);
        n += 1;
    }
    if n == 0 {
        return Err(LatticeError::EmptyMask);
    }
    Ok(UniformityReport {
        mask: mask.describe(),
        samples: n,
        i_min: lo,
        i_max: hi,
        ratio: hi / lo,
    })
}

/// Median of the masked intensities.
pub fn median_intensity(dump: &FieldDump, mask: &Mask) -> Result<f64, LatticeError> {
    let mut v: Vec<f64> = mask.selected(dump).collect();
    if v.is_empty() {
        return Err(LatticeError::EmptyMask);
    }
    v.sort_by(f64::total_cmp);
    let n = v.len();
    Ok(if n % 2 == 1 { v[n / 2] } else { 0.5 * (v[n / 2 - 1] + v[n / 2]) })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolishedCore {
    pub seed: [f64; 3],
    pub position: [f64; 3],
    pub intensity: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContrastReport {
    pub cores: Vec<PolishedCore>,
    pub background: f64,
    /// Largest polished core intensity.
    pub worst: f64,
    pub suppression: f64,
}

fn residual(spec: &FieldSpec, x: f64, y: f64, z: f64) -> [f64; 4] {
    let s = spec.evaluate_field(x, y, z);
    [s.ex.re, s.ex.im, s.ey.re, s.ey.im]
}

fn norm_sqr(r: &[f64; 4]) -> f64 {
    r.iter().map(|v| v * v).sum()
}

/// Levenberg-Marquardt descent on the four real field components, moving
/// only in the transverse plane. Returns the local intensity minimum.
pub fn polish_core(spec: &FieldSpec, seed: [f64; 3]) -> Result<PolishedCore, LatticeError> {
    let w0 = spec.waist();
    let h = 1e-6 * w0;
    let [mut x, mut y, z] = seed;
    let mut r = residual(spec, x, y, z);
    let mut cost = norm_sqr(&r);
    let mut damping = 1e-3;
    for _ in 0..200 {
        if cost == 0.0 {
            break;
        }
        let rxp = residual(spec, x + h, y, z);
        let rxm = residual(spec, x - h, y, z);
        let ryp = residual(spec, x, y + h, z);
        let rym = residual(spec, x, y - h, z);
        let jx: Vec<f64> = (0..4).map(|k| (rxp[k] - rxm[k]) / (2.0 * h)).collect();
        let jy: Vec<f64> = (0..4).map(|k| (ryp[k] - rym[k]) / (2.0 * h)).collect();
        let a11: f64 = jx.iter().map(|v| v * v).sum();
        let a22: f64 = jy.iter().map(|v| v * v).sum();
        let a12: f64 = jx.iter().zip(&jy).map(|(a, b)| a * b).sum();
        let g1: f64 = jx.iter().zip(&r).map(|(a, b)| a * b).sum();
        let g2: f64 = jy.iter().zip(&r).map(|(a, b)| a * b).sum();
        let mut accepted = None;
        while damping < 1e12 {
            let (b11, b22) = (a11 * (1.0 + damping), a22 * (1.0 + damping));
            let det = b11 * b22 - a12 * a12;
            if det <= 0.0 {
                damping *= 10.0;
                continue;
            }
            let dx = -(b22 * g1 - a12 * g2) / det;
            let dy = -(b11 * g2 - a12 * g1) / det;
            let rt = residual(spec, x + dx, y + dy, z);
            let ct = norm_sqr(&rt);
            if ct < cost {
                accepted = Some((dx, dy, rt, ct));
                damping = (damping / 10.0).max(1e-12);
                break;
            }
            damping *= 10.0;
        }
        let Some((dx, dy, rt, ct)) = accepted else { break };
        x += dx;
        y += dy;
        r = rt;
        cost = ct;
        if (x - seed[0]).hypot(y - seed[1]) > w0 {
            return Err(LatticeError::PolishDiverged {
                x: seed[0],
                y: seed[1],
                z: seed[2],
            });
        }
        if dx.hypot(dy) < 1e-13 * w0 {
            break;
        }
    }
    Ok(PolishedCore {
        seed,
        position: [x, y, z],
        intensity: cost,
    })
}

/// Polishes every core to its local intensity minimum and compares the
/// darkest-but-worst one against `background`.
pub fn core_suppression(spec: &FieldSpec, cores: &[[f64; 3]], background: f64) -> Result<ContrastReport, LatticeError> {
    if !(background > 0.0) {
        return Err(LatticeError::BadBackground);
    }
    let cores = cores
        .iter()
        .map(|&c| polish_core(spec, c))
        .collect::<Result<Vec<_>, _>>()?;
    let worst = cores.iter().map(|c| c.intensity).fold(0.0, f64::max);
    let suppression = if worst == 0.0 {
        SUPPRESSION_CAP
    } else {
        (background / worst).min(SUPPRESSION_CAP)
    };
    Ok(ContrastReport {
        cores,
        background,
        worst,
        suppression,
    })
}

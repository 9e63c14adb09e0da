use num_complex::Complex64;

use crate::error::LatticeError;
use crate::helix::dark_zero_focal;
use crate::modes::{mode_power, Direction, ModeIndex};
use crate::superposition::{BeamComponent, FieldSpec};

use super::{site_components, sublattice, CentralModification, LatticeSpec, SiteContent};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EmbedOptions {
    /// Amplitude of the forward Gaussian relative to the backward vortex.
    pub gaussian_ratio: f64,
    /// Power of the inserted pair in units of one lattice Gaussian.
    pub power_factor: f64,
}

impl Default for EmbedOptions {
    fn default() -> Self {
        Self {
            gaussian_ratio: 0.125,
            power_factor: 2.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedHelix {
    pub spec: FieldSpec,
    /// Common factor applied to the inserted pair.
    pub helix_scale: f64,
    /// Forward cancellation beams at the origin (nonzero amplitudes only).
    pub auxiliary: Vec<BeamComponent>,
    /// Focal dark core of the isolated helical pair.
    pub core_seed: (f64, f64),
}

// value, w0² ∂xx, w0² ∂yy, w0² ∂xy of both polarization components at the origin
fn taylor(spec: &FieldSpec, w0: f64) -> [[Complex64; 4]; 2] {
    let h = 1e-3 * w0;
    let f = |x: f64, y: f64| {
        let s = spec.evaluate_field(x, y, 0.0);
        [s.ex, s.ey]
    };
    let c = f(0.0, 0.0);
    let (xp, xm, yp, ym) = (f(h, 0.0), f(-h, 0.0), f(0.0, h), f(0.0, -h));
    let (pp, pm, mp, mm) = (f(h, h), f(h, -h), f(-h, h), f(-h, -h));
    let s = w0 * w0 / (h * h);
    let mut out = [[Complex64::new(0.0, 0.0); 4]; 2];
    for k in 0..2 {
        out[k] = [
            c[k],
            (xp[k] - c[k] * 2.0 + xm[k]) * s,
            (yp[k] - c[k] * 2.0 + ym[k]) * s,
            (pp[k] - pm[k] - mp[k] + mm[k]) * (s / 4.0),
        ];
    }
    out
}

/// Complex least squares `min ‖A a + b‖` for two unknowns.
fn solve_two(cols: [[Complex64; 4]; 2], b: [Complex64; 4]) -> Result<[Complex64; 2], LatticeError> {
    let dot = |u: &[Complex64; 4], v: &[Complex64; 4]| u.iter().zip(v).map(|(a, b)| a.conj() * b).sum::<Complex64>();
    let g11 = dot(&cols[0], &cols[0]).re;
    let g22 = dot(&cols[1], &cols[1]).re;
    let g12 = dot(&cols[0], &cols[1]);
    let r1 = -dot(&cols[0], &b);
    let r2 = -dot(&cols[1], &b);
    let det = g11 * g22 - g12.norm_sqr();
    if !(det > 1e-14 * g11 * g22) {
        return Err(LatticeError::MinimizationFailed(format!("normal equations singular (det {det:e})")));
    }
    let a1 = (r1 * g22 - g12 * r2) / det;
    let a2 = (r2 * g11 - g12.conj() * r1) / det;
    if !(a1.is_finite() && a2.is_finite()) {
        return Err(LatticeError::MinimizationFailed("non-finite amplitude".into()));
    }
    Ok([a1, a2])
}

/// Replaces the central Gaussian of a Gaussian lattice by a helical pair and
/// adds weak on-axis beams cancelling the neighbours' field and curvature at
/// the origin, separately for x and y polarization.
pub fn embed_single_helix(lattice: &LatticeSpec) -> Result<EmbeddedHelix, LatticeError> {
    let CentralModification::EmbedSingleHelix(opts) = lattice.central else {
        return Err(LatticeError::NotEmbeddable);
    };
    if lattice.content != SiteContent::Gaussian {
        return Err(LatticeError::NotEmbeddable);
    }
    if !(lattice.spacing > 0.0 && lattice.spacing.is_finite()) {
        return Err(LatticeError::BadSpacing);
    }
    if !(opts.gaussian_ratio >= 0.0 && opts.power_factor > 0.0) {
        return Err(LatticeError::MinimizationFailed("invalid embedding options".into()));
    }
    let geom = lattice.geometry;
    let norm = lattice.normalization;
    let w0 = geom.waist();
    let c = opts.gaussian_ratio;

    let neighbours: Vec<BeamComponent> = lattice
        .sites()
        .iter()
        .filter(|s| !s.is_origin())
        .flat_map(|s| site_components(lattice, s))
        .collect();

    let gauss = ModeIndex::new(0, 0);
    let vortex = ModeIndex::new(0, 1);
    let p00: f64 = mode_power(gauss, norm);
    let p01: f64 = mode_power(vortex, norm);
    let scale = (opts.power_factor * p00 / (c * c * p00 + p01)).sqrt();
    let theta = lattice.polarization_angles[sublattice(0, 0)];
    let helix = [
        BeamComponent::new(geom, gauss, Complex64::new(c * scale, 0.0), Direction::Forward).with_polarization(theta),
        BeamComponent::new(geom, vortex, Complex64::new(scale, 0.0), Direction::Backward).with_polarization(theta),
    ];

    let mut auxiliary = Vec::new();
    if !neighbours.is_empty() {
        let spill = taylor(&FieldSpec::new(neighbours.clone(), norm)?, w0);
        let basis = |mode| {
            let b = BeamComponent::new(geom, mode, Complex64::new(1.0, 0.0), Direction::Forward);
            taylor(&FieldSpec::new(vec![b], norm).expect("single component"), w0)[0]
        };
        let cols = [basis(gauss), basis(ModeIndex::new(1, 0))];
        for (k, angle) in [(0, 0.0), (1, std::f64::consts::FRAC_PI_2)] {
            let amps = solve_two(cols, spill[k])?;
            for (mode, a) in [gauss, ModeIndex::new(1, 0)].into_iter().zip(amps) {
                if a != Complex64::new(0.0, 0.0) {
                    auxiliary.push(BeamComponent::new(geom, mode, a, Direction::Forward).with_polarization(angle));
                }
            }
        }
    }

    let mut components = helix.to_vec();
    components.extend(auxiliary.iter().cloned());
    components.extend(neighbours);
    Ok(EmbeddedHelix {
        spec: FieldSpec::new(components, norm)?,
        helix_scale: scale,
        auxiliary,
        core_seed: dark_zero_focal(c, &geom),
    })
}

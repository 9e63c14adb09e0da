use num_complex::Complex64;

use crate::error::HelixError;
use crate::superposition::FieldSpec;

use super::zero::ScalarField;

/// Complex field gradient `(∂x E, ∂y E, ∂z E)`.
pub type Gradient = [Complex64; 3];

/// Central differences (steps 1e-4 w0 transverse, 1e-4 λ axial), Richardson-extrapolated once.
pub fn field_gradients(spec: &FieldSpec, point: [f64; 3]) -> Result<Gradient, HelixError> {
    let field = ScalarField::new(spec)?;
    Ok(gradient_of(&field, point))
}

pub(crate) fn gradient_of(field: &ScalarField<'_>, [x, y, z]: [f64; 3]) -> Gradient {
    let steps = [1e-4 * field.waist(), 1e-4 * field.waist(), 1e-4 * field.spec().wavelength()];
    let mut out = [Complex64::new(0.0, 0.0); 3];
    for (axis, h) in steps.into_iter().enumerate() {
        let at = |d: f64| {
            let mut p = [x, y, z];
            p[axis] += d;
            field.value(p[0], p[1], p[2])
        };
        let central = |h: f64| (at(h) - at(-h)) / (2.0 * h);
        let coarse = central(h);
        let fine = central(h / 2.0);
        out[axis] = (fine * 4.0 - coarse) / 3.0;
    }
    out
}

/// Local harmonic expansion of the dipole trap around a dark core.
///
/// The potential is `V ∝ κ_x ρ² + κ_η η²` with ρ the displacement along the
/// local radius vector (from the helix axis) and η perpendicular to both the
/// radius vector and the helix tangent. Coefficients share the undetermined
/// dipole prefactor.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapProfile {
    /// Lab-frame gradients.
    pub gradients: Gradient,
    pub radial: Complex64,
    pub azimuthal: Complex64,
    pub axial: Complex64,
    pub kappa_x: f64,
    pub kappa_eta: f64,
    /// `|∂φE/∂zE|` outside `[1e-3, 1e3]`: the helix is locally a plane or a straight line.
    pub degenerate: bool,
}

impl TrapProfile {
    pub fn azimuthal_axial_ratio(&self) -> f64 {
        self.azimuthal.norm() / self.axial.norm()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrapOptions {
    pub axis: [f64; 2],
    /// Core must satisfy `|E| < dark_tolerance × peak amplitude`.
    pub dark_tolerance: f64,
}

impl Default for TrapOptions {
    fn default() -> Self {
        Self {
            axis: [0.0, 0.0],
            dark_tolerance: 1e-6,
        }
    }
}

pub fn trap_profile(spec: &FieldSpec, core: [f64; 3], opts: &TrapOptions) -> Result<TrapProfile, HelixError> {
    let field = ScalarField::new(spec)?;
    let amplitude = field.value(core[0], core[1], core[2]).norm();
    let tolerance = opts.dark_tolerance * field.peak_amplitude();
    if amplitude > tolerance {
        return Err(HelixError::NotAZero { amplitude, tolerance });
    }
    let g = gradient_of(&field, core);
    let (rx, ry) = (core[0] - opts.axis[0], core[1] - opts.axis[1]);
    let r = rx.hypot(ry);
    let (c, s) = if r > 0.0 { (rx / r, ry / r) } else { (1.0, 0.0) };
    let radial = g[0] * c + g[1] * s;
    let azimuthal = g[1] * c - g[0] * s;
    let axial = g[2];
    let ratio = azimuthal.norm() / axial.norm();
    let kappa_x = radial.norm_sqr();
    let kappa_eta = 4.0 * kappa_x / (1.0 + ratio * ratio);
    Ok(TrapProfile {
        gradients: g,
        radial,
        azimuthal,
        axial,
        kappa_x,
        kappa_eta,
        degenerate: !(1e-3..=1e3).contains(&ratio),
    })
}

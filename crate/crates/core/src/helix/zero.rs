use num_complex::Complex64;

use crate::error::HelixError;
use crate::modes::BeamGeometry;
use crate::superposition::FieldSpec;

/// Settings of the 2-D Newton zero search.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZeroOptions {
    /// Converged once `|E| < tolerance × peak focal amplitude`.
    pub tolerance: f64,
    pub max_iterations: usize,
    /// Largest admissible Newton step, in waists. Larger steps mean no zero nearby.
    pub max_step_w0: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        Self {
            tolerance: 1e-10,
            max_iterations: 50,
            max_step_w0: 0.5,
        }
    }
}

/// Scalar view of a uniformly polarized superposition.
///
/// Components may differ in polarization only by a sign flip (angle + π),
/// which is folded into their weights.
#[derive(Debug, Clone)]
pub struct ScalarField<'a> {
    spec: &'a FieldSpec,
    signs: Vec<f64>,
    waist: f64,
    peak_amplitude: f64,
}

impl<'a> ScalarField<'a> {
    pub fn new(spec: &'a FieldSpec) -> Result<Self, HelixError> {
        let reference = spec.components()[0].polarization;
        let mut signs = Vec::with_capacity(spec.components().len());
        for c in spec.components() {
            let d = c.polarization - reference;
            if d.sin().abs() > 1e-12 {
                return Err(HelixError::MixedPolarization);
            }
            signs.push(d.cos().signum());
        }
        let mut field = Self {
            spec,
            signs,
            waist: spec.waist(),
            peak_amplitude: 0.0,
        };
        field.peak_amplitude = field.scan_peak_amplitude();
        Ok(field)
    }

    pub fn spec(&self) -> &FieldSpec {
        self.spec
    }

    pub fn waist(&self) -> f64 {
        self.waist
    }

    /// Largest `|E|` found on an 81×81 focal-plane scan around the beams.
    pub fn peak_amplitude(&self) -> f64 {
        self.peak_amplitude
    }

    pub fn value(&self, x: f64, y: f64, z: f64) -> Complex64 {
        let norm = self.spec.normalization();
        self.spec
            .components()
            .iter()
            .zip(&self.signs)
            .map(|(c, s)| c.scalar_field(norm, x, y, z) * *s)
            .sum()
    }

    fn scan_peak_amplitude(&self) -> f64 {
        let (mut x0, mut x1, mut y0, mut y1) = (f64::MAX, f64::MIN, f64::MAX, f64::MIN);
        for c in self.spec.components() {
            x0 = x0.min(c.offset[0]);
            x1 = x1.max(c.offset[0]);
            y0 = y0.min(c.offset[1]);
            y1 = y1.max(c.offset[1]);
        }
        let pad = 2.5 * self.waist;
        let n = 81;
        let mut best = 0.0f64;
        for j in 0..n {
            let y = y0 - pad + (y1 - y0 + 2.0 * pad) * j as f64 / (n - 1) as f64;
            for i in 0..n {
                let x = x0 - pad + (x1 - x0 + 2.0 * pad) * i as f64 / (n - 1) as f64;
                best = best.max(self.value(x, y, 0.0).norm());
            }
        }
        best
    }

    /// Transverse partial derivatives by central differences.
    fn transverse_jacobian(&self, x: f64, y: f64, z: f64) -> (Complex64, Complex64) {
        let h = 1e-6 * self.waist;
        let dx = (self.value(x + h, y, z) - self.value(x - h, y, z)) / (2.0 * h);
        let dy = (self.value(x, y + h, z) - self.value(x, y - h, z)) / (2.0 * h);
        (dx, dy)
    }

    /// Newton iteration on `(Re E, Im E)` over the transverse plane at `z`.
    pub fn find_zero(&self, z: f64, seed: (f64, f64), opts: &ZeroOptions) -> Result<(f64, f64), HelixError> {
        let tol = opts.tolerance * self.peak_amplitude;
        let max_step = opts.max_step_w0 * self.waist;
        let (mut x, mut y) = seed;
        let mut residual = f64::INFINITY;
        for _ in 0..opts.max_iterations {
            let e = self.value(x, y, z);
            residual = e.norm();
            if residual == 0.0 {
                return Ok((x, y));
            }
            let (gx, gy) = self.transverse_jacobian(x, y, z);
            let det = gx.re * gy.im - gy.re * gx.im;
            let scale = gx.norm_sqr() + gy.norm_sqr();
            if det.abs() <= 1e-10 * scale || scale == 0.0 {
                return Err(HelixError::JacobianSingular { x, y });
            }
            let dx = -(gy.im * e.re - gy.re * e.im) / det;
            let dy = -(gx.re * e.im - gx.im * e.re) / det;
            if dx.hypot(dy) > max_step {
                return Err(HelixError::JacobianSingular { x, y });
            }
            x += dx;
            y += dy;
            // one polishing step after the tolerance is met
            if residual <= tol {
                return Ok((x, y));
            }
        }
        Err(HelixError::NoConvergence {
            iterations: opts.max_iterations,
            residual,
        })
    }
}

/// Newton zero of a uniformly polarized spec at axial position `z`.
pub fn find_zero(spec: &FieldSpec, z: f64, seed: (f64, f64), opts: &ZeroOptions) -> Result<(f64, f64), HelixError> {
    ScalarField::new(spec)?.find_zero(z, seed, opts)
}

/// Darkest point of an `n`×`n` scan of the square of half-width
/// `half_width` around `center`, ignoring points closer than `min_radius`
/// to the center. Used to seed [`find_zero`].
pub fn darkest_point(spec: &FieldSpec, z: f64, center: [f64; 2], half_width: f64, n: usize, min_radius: f64) -> (f64, f64) {
    let mut best = (center[0], center[1], f64::INFINITY);
    let n = n.max(2);
    for j in 0..n {
        let y = center[1] - half_width + 2.0 * half_width * j as f64 / (n - 1) as f64;
        for i in 0..n {
            let x = center[0] - half_width + 2.0 * half_width * i as f64 / (n - 1) as f64;
            if (x - center[0]).hypot(y - center[1]) < min_radius {
                continue;
            }
            let v = spec.intensity_at(x, y, z);
            if v < best.2 {
                best = (x, y, v);
            }
        }
    }
    (best.0, best.1)
}

/// Focal-plane zero `(-c w0/√2, 0)` of `c u_{0,0}(z) + u_{0,1}(-z)` with unit-power modes.
pub fn dark_zero_focal(c: f64, geom: &BeamGeometry) -> (f64, f64) {
    (-c * geom.waist() / std::f64::consts::SQRT_2, 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{Direction, ModeIndex, Normalization};
    use crate::superposition::BeamComponent;

    fn geom() -> BeamGeometry {
        BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap()
    }

    fn helix(c: f64) -> FieldSpec {
        let g = geom();
        FieldSpec::new(
            vec![
                BeamComponent::new(g, ModeIndex::new(0, 0), Complex64::new(c, 0.0), Direction::Forward),
                BeamComponent::new(g, ModeIndex::new(0, 1), Complex64::new(1.0, 0.0), Direction::Backward),
            ],
            Normalization::UnitNorm,
        )
        .unwrap()
    }

    #[test]
    fn analytic_zero_values() {
        let g = BeamGeometry::from_waist(1.0, 1.0).unwrap();
        assert_eq!(dark_zero_focal(0.0, &g), (-0.0, 0.0));
        let (x, y) = dark_zero_focal(0.125, &g);
        assert!((x + 0.088388347648).abs() < 1e-11 && y == 0.0);
    }

    #[test]
    fn newton_hits_closed_form() {
        let g = geom();
        let w0 = g.waist();
        let spec = helix(0.5);
        let (x, y) = find_zero(&spec, 0.0, (-0.6 * w0, 0.1 * w0), &ZeroOptions::default()).unwrap();
        let (ax, ay) = dark_zero_focal(0.5, &g);
        assert!((x - ax).abs() < 1e-9 * w0 && (y - ay).abs() < 1e-9 * w0, "{x} {y}");
    }

    #[test]
    fn pure_vortex_zero_on_axis() {
        let g = geom();
        let spec = FieldSpec::new(
            vec![BeamComponent::new(g, ModeIndex::new(0, 1), Complex64::new(1.0, 0.0), Direction::Forward)],
            Normalization::UnitNorm,
        )
        .unwrap();
        for z in [-3.0, 0.0, 11.0] {
            let (x, y) = find_zero(&spec, z, (0.05, -0.03), &ZeroOptions::default()).unwrap();
            assert!(x.hypot(y) < 1e-9, "{x} {y}");
        }
    }

    #[test]
    fn bright_maximum_seed_fails() {
        let spec = helix(0.5);
        let w0 = geom().waist();
        // maximum of e^{-2r²/w0²}(c + √2 r/w0)² on the +x axis
        let c = 0.5f64;
        let r = (-c / 2f64.sqrt() + (c * c / 2.0 + 2.0).sqrt()) / 2.0 * w0;
        let err = find_zero(&spec, 0.0, (r, 0.0), &ZeroOptions::default()).unwrap_err();
        assert!(
            matches!(err, HelixError::JacobianSingular { .. } | HelixError::NoConvergence { .. }),
            "{err:?}"
        );
    }

    #[test]
    fn mixed_polarization_rejected() {
        let g = geom();
        let a = BeamComponent::new(g, ModeIndex::new(0, 0), Complex64::new(1.0, 0.0), Direction::Forward);
        let b = a.clone().with_polarization(1.0);
        let spec = FieldSpec::new(vec![a.clone(), b], Normalization::UnitNorm).unwrap();
        assert_eq!(ScalarField::new(&spec).unwrap_err(), HelixError::MixedPolarization);
        // antiparallel is the same axis
        let b = a.clone().with_polarization(std::f64::consts::PI);
        let spec = FieldSpec::new(vec![a, b], Normalization::UnitNorm).unwrap();
        let f = ScalarField::new(&spec).unwrap();
        assert!(f.value(0.3, 0.1, 0.0).norm() < 1e-15);
    }
}

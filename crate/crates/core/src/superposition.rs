//! Weighted, polarized, offset superpositions of counterpropagating modes.

use num_complex::Complex;

use crate::error::FieldError;
use crate::modes::{paraxial_mode, BeamGeometry, Direction, ModeIndex, Normalization};
use crate::scalar::Real;

/// One linearly polarized Laguerre-Gauss beam inside a superposition.
#[derive(Debug, Clone, PartialEq)]
pub struct BeamComponent<T = f64> {
    pub geom: BeamGeometry<T>,
    pub mode: ModeIndex,
    pub amplitude: Complex<T>,
    pub direction: Direction,
    /// Linear polarization angle in the transverse plane, radians from x.
    pub polarization: T,
    /// Transverse position of the beam axis.
    pub offset: [T; 2],
}

impl<T: Real> BeamComponent<T> {
    /// On-axis, x-polarized beam with the given complex weight.
    pub fn new(geom: BeamGeometry<T>, mode: ModeIndex, amplitude: Complex<T>, direction: Direction) -> Self {
        Self {
            geom,
            mode,
            amplitude,
            direction,
            polarization: T::zero(),
            offset: [T::zero(), T::zero()],
        }
    }

    pub fn with_polarization(mut self, angle: T) -> Self {
        self.polarization = angle;
        self
    }

    pub fn with_offset(mut self, x: T, y: T) -> Self {
        self.offset = [x, y];
        self
    }

    /// Complex scalar amplitude `a · u(x - x_c, y - y_c, ±z)` before polarization.
    pub fn scalar_field(&self, norm: Normalization, x: T, y: T, z: T) -> Complex<T> {
        self.amplitude
            * paraxial_mode(
                &self.geom,
                self.mode,
                norm,
                self.direction,
                x - self.offset[0],
                y - self.offset[1],
                z,
            )
    }
}

/// Transverse field `(Ex, Ey)` at one point.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct VectorFieldSample<T = f64> {
    pub ex: Complex<T>,
    pub ey: Complex<T>,
}

impl<T: Real> VectorFieldSample<T> {
    pub fn new(ex: Complex<T>, ey: Complex<T>) -> Self {
        Self { ex, ey }
    }

    /// `|Ex|² + |Ey|²`.
    pub fn intensity(&self) -> T {
        self.ex.norm_sqr() + self.ey.norm_sqr()
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self::new(self.ex * factor, self.ey * factor)
    }
}

impl<T: Real> std::ops::Add for VectorFieldSample<T> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        Self::new(self.ex + rhs.ex, self.ey + rhs.ey)
    }
}

impl<T: Real> std::ops::Sub for VectorFieldSample<T> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self::new(self.ex - rhs.ex, self.ey - rhs.ey)
    }
}

/// Standard `|E|²` of a sample.
pub fn intensity<T: Real>(sample: &VectorFieldSample<T>) -> T {
    sample.intensity()
}

/// A non-empty list of beams sharing one wavelength.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldSpec<T = f64> {
    components: Vec<BeamComponent<T>>,
    normalization: Normalization,
}

impl<T: Real> FieldSpec<T> {
    pub fn new(components: Vec<BeamComponent<T>>, normalization: Normalization) -> Result<Self, FieldError> {
        let first = components.first().ok_or(FieldError::Empty)?.geom.wavelength();
        for c in &components[1..] {
            let other = c.geom.wavelength();
            if other != first {
                return Err(FieldError::MixedWavelength {
                    first: first.to_f64().unwrap_or(f64::NAN),
                    other: other.to_f64().unwrap_or(f64::NAN),
                });
            }
        }
        Ok(Self {
            components,
            normalization,
        })
    }

    pub fn components(&self) -> &[BeamComponent<T>] {
        &self.components
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn wavelength(&self) -> T {
        self.components[0].geom.wavelength()
    }

    /// Largest waist among the components, the natural transverse scale.
    pub fn waist(&self) -> T {
        self.components
            .iter()
            .map(|c| c.geom.waist())
            .fold(T::zero(), T::max)
    }

    /// Geometry of the first component.
    pub fn geometry(&self) -> &BeamGeometry<T> {
        &self.components[0].geom
    }

    /// Components of `self` followed by those of `other`.
    pub fn concat(&self, other: &Self) -> Result<Self, FieldError> {
        let mut components = self.components.clone();
        components.extend(other.components.iter().cloned());
        Self::new(components, self.normalization)
    }

    pub fn evaluate_field(&self, x: T, y: T, z: T) -> VectorFieldSample<T> {
        let mut ex = Complex::new(T::zero(), T::zero());
        let mut ey = ex;
        for c in &self.components {
            let u = c.scalar_field(self.normalization, x, y, z);
            let (s, co) = c.polarization.sin_cos();
            ex = ex + u * co;
            ey = ey + u * s;
        }
        VectorFieldSample::new(ex, ey)
    }

    pub fn intensity_at(&self, x: T, y: T, z: T) -> T {
        self.evaluate_field(x, y, z).intensity()
    }

    /// Multiplies the second amplitude of a two-beam spec by `e^{iδ}`.
    pub fn relative_phase_rotation(&self, delta: T) -> Result<Self, FieldError> {
        if self.components.len() != 2 {
            return Err(FieldError::WrongArity(self.components.len()));
        }
        let mut out = self.clone();
        out.components[1].amplitude = out.components[1].amplitude * Complex::from_polar(T::one(), delta);
        Ok(out)
    }

    /// Forward/backward pair view of a two-beam counterpropagating spec.
    pub fn counterpropagating_pair(&self) -> Option<(&BeamComponent<T>, &BeamComponent<T>)> {
        match self.components.as_slice() {
            [a, b] if a.direction == Direction::Forward && b.direction == Direction::Backward => Some((a, b)),
            [a, b] if a.direction == Direction::Backward && b.direction == Direction::Forward => Some((b, a)),
            _ => None,
        }
    }

    /// Signed axial advance per counterclockwise turn of the interference
    /// helices, `λ (l_backward - l_forward) / 2`, for a two-beam
    /// counterpropagating spec.
    pub fn predicted_pitch(&self) -> Option<T> {
        let (f, b) = self.counterpropagating_pair()?;
        Some(pitch_length(b.mode.l, f.mode.l, self.wavelength()))
    }

    /// Smallest nonzero half-pitch `λ |l_f - l_b| / 4` over all
    /// forward/backward component pairs.
    pub fn shortest_half_pitch(&self) -> Option<T> {
        let mut best: Option<T> = None;
        for f in self.components.iter().filter(|c| c.direction == Direction::Forward) {
            for b in self.components.iter().filter(|c| c.direction == Direction::Backward) {
                let dl = (f.mode.l - b.mode.l).abs();
                if dl != 0 {
                    let h = self.wavelength() * T::from_int(dl as i64) / T::lit(4.0);
                    best = Some(best.map_or(h, |v| v.min(h)));
                }
            }
        }
        best
    }
}

/// Axial shift per full turn, `λ (l - l') / 2`.
pub fn pitch_length<T: Real>(l: i32, l_prime: i32, wavelength: T) -> T {
    wavelength * T::from_int((l - l_prime) as i64) / T::lit(2.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, PI};

    fn geom() -> BeamGeometry {
        BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap()
    }

    fn figure1() -> FieldSpec {
        let g = geom();
        FieldSpec::new(
            vec![
                BeamComponent::new(g, ModeIndex::new(0, 0), Complex::new(0.5, 0.0), Direction::Forward),
                BeamComponent::new(g, ModeIndex::new(0, 1), Complex::new(1.0, 0.0), Direction::Backward),
            ],
            Normalization::UnitNorm,
        )
        .unwrap()
    }

    #[test]
    fn singleton_is_the_mode() {
        let g = geom();
        let m = ModeIndex::new(1, 2);
        let spec = FieldSpec::new(
            vec![BeamComponent::new(g, m, Complex::new(1.0, 0.0), Direction::Forward)],
            Normalization::UnitNorm,
        )
        .unwrap();
        let s = spec.evaluate_field(0.7, -1.1, 0.3);
        let u = paraxial_mode(&g, m, Normalization::UnitNorm, Direction::Forward, 0.7, -1.1, 0.3);
        assert_eq!(s.ex, u);
        assert_eq!(s.ey, Complex::new(0.0, 0.0));
    }

    #[test]
    fn figure1_axis_intensity() {
        let spec = figure1();
        let u00 = crate::modes::lg_envelope(&geom(), ModeIndex::new(0, 0), Normalization::UnitNorm, 0.0, 0.0, 0.0);
        let want = (0.5 * u00.norm()).powi(2);
        assert!((spec.intensity_at(0.0, 0.0, 0.0) - want).abs() < 1e-15);
    }

    #[test]
    fn orthogonal_polarizations_do_not_interfere() {
        let g = geom();
        let m = ModeIndex::new(0, 1);
        let a = BeamComponent::new(g, m, Complex::new(1.0, 0.0), Direction::Forward);
        let b = a.clone().with_polarization(FRAC_PI_2);
        let both = FieldSpec::new(vec![a.clone(), b.clone()], Normalization::UnitNorm).unwrap();
        let sa = FieldSpec::new(vec![a], Normalization::UnitNorm).unwrap();
        let sb = FieldSpec::new(vec![b], Normalization::UnitNorm).unwrap();
        for &(x, y, z) in &[(0.5, 0.2, 0.0), (-2.0, 1.0, 3.3), (1.0, -3.0, -0.7)] {
            let sum = sa.intensity_at(x, y, z) + sb.intensity_at(x, y, z);
            assert!((both.intensity_at(x, y, z) - sum).abs() < 1e-15 * sum.max(1e-300));
        }
    }

    #[test]
    fn intensity_basics() {
        let zero = VectorFieldSample::<f64>::default();
        assert_eq!(intensity(&zero), 0.0);
        let s = VectorFieldSample::new(Complex::new(1.0, 0.0), Complex::new(0.0, 1.0));
        assert_eq!(intensity(&s), 2.0);
        let s = VectorFieldSample::new(Complex::new(0.3, -1.2), Complex::new(2.0, 0.7));
        for k in 0..10 {
            let g = 0.61 * k as f64;
            let t = s.scale(Complex::from_polar(1.0, g));
            assert!((t.intensity() - s.intensity()).abs() < 1e-14);
        }
    }

    #[test]
    fn pitch_lengths() {
        assert_eq!(pitch_length(1, 0, 1.0), 0.5);
        assert_eq!(pitch_length(0, 0, 1.0), 0.0);
        assert_eq!(pitch_length(0, 2, 1.0), -1.0);
        assert_eq!(figure1().predicted_pitch(), Some(0.5));
    }

    #[test]
    fn phase_rotation_arity_and_identity() {
        let spec = figure1();
        assert_eq!(spec.relative_phase_rotation(0.0).unwrap(), spec);
        let full = spec.relative_phase_rotation(2.0 * PI).unwrap();
        for &(x, y, z) in &[(0.3, 0.4, 0.1), (-1.0, 2.0, -0.2), (0.0, 0.0, 0.0), (3.0, -1.0, 0.37)] {
            let a = spec.intensity_at(x, y, z);
            let b = full.intensity_at(x, y, z);
            assert!((a - b).abs() <= 1e-12 * a.max(1e-300));
        }
        let three = spec.concat(&spec.relative_phase_rotation(1.0).unwrap()).unwrap();
        assert_eq!(three.relative_phase_rotation(1.0), Err(FieldError::WrongArity(4)));
    }

    #[test]
    fn construction_invariants() {
        assert_eq!(FieldSpec::<f64>::new(vec![], Normalization::UnitNorm), Err(FieldError::Empty));
        let g1 = geom();
        let g2 = BeamGeometry::from_rayleigh_length(2.0, 50.0).unwrap();
        let m = ModeIndex::new(0, 0);
        let r = FieldSpec::new(
            vec![
                BeamComponent::new(g1, m, Complex::new(1.0, 0.0), Direction::Forward),
                BeamComponent::new(g2, m, Complex::new(1.0, 0.0), Direction::Forward),
            ],
            Normalization::UnitNorm,
        );
        assert!(matches!(r, Err(FieldError::MixedWavelength { .. })));
    }

    #[test]
    fn shortest_half_pitch_ignores_copropagating_pairs() {
        let spec = figure1();
        assert_eq!(spec.shortest_half_pitch(), Some(0.25));
        let g = geom();
        let co = FieldSpec::new(
            vec![
                BeamComponent::new(g, ModeIndex::new(0, 0), Complex::new(0.5, 0.0), Direction::Forward),
                BeamComponent::new(g, ModeIndex::new(0, 1), Complex::new(1.0, 0.0), Direction::Forward),
            ],
            Normalization::UnitNorm,
        )
        .unwrap();
        assert_eq!(co.shortest_half_pitch(), None);
    }
}

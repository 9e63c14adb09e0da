//! Dense sampling of a superposition on a regular 3-D grid.

use rayon::prelude::*;

use crate::error::FieldError;
use crate::scalar::Real;
use crate::superposition::{FieldSpec, VectorFieldSample};

/// Default cap on the number of samples a single grid may hold.
pub const DEFAULT_MAX_SAMPLES: u64 = 1 << 27;

/// Closed interval sampled at `count` evenly spaced points.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AxisRange<T = f64> {
    pub min: T,
    pub max: T,
    pub count: usize,
}

impl<T: Real> AxisRange<T> {
    pub fn new(min: T, max: T, count: usize) -> Self {
        Self { min, max, count }
    }

    /// Single point.
    pub fn point(v: T) -> Self {
        Self::new(v, v, 1)
    }

    /// Coordinate of sample `i`; a one-point axis sits at `min`.
    pub fn coord(&self, i: usize) -> T {
        if self.count <= 1 {
            return self.min;
        }
        let t = T::from_int(i as i64) / T::from_int((self.count - 1) as i64);
        self.min + (self.max - self.min) * t
    }

    pub fn step(&self) -> T {
        if self.count <= 1 {
            T::zero()
        } else {
            (self.max - self.min) / T::from_int((self.count - 1) as i64)
        }
    }

    fn validate(&self, name: &str) -> Result<(), FieldError> {
        if self.count == 0 {
            return Err(FieldError::InvalidGrid(format!("{name}.count must be at least 1")));
        }
        if !(self.min.is_finite() && self.max.is_finite()) || self.max < self.min {
            return Err(FieldError::InvalidGrid(format!("{name}: need finite min <= max")));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SamplingGrid<T = f64> {
    pub x: AxisRange<T>,
    pub y: AxisRange<T>,
    pub z: AxisRange<T>,
}

impl<T: Real> SamplingGrid<T> {
    pub fn new(x: AxisRange<T>, y: AxisRange<T>, z: AxisRange<T>) -> Result<Self, FieldError> {
        x.validate("x")?;
        y.validate("y")?;
        z.validate("z")?;
        Ok(Self { x, y, z })
    }

    pub fn len(&self) -> u128 {
        self.x.count as u128 * self.y.count as u128 * self.z.count as u128
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Flat index in z-major, then y, then x order.
    pub fn index(&self, ix: usize, iy: usize, iz: usize) -> usize {
        (iz * self.y.count + iy) * self.x.count + ix
    }

    /// Inverse of [`SamplingGrid::index`].
    pub fn unravel(&self, i: usize) -> (usize, usize, usize) {
        let ix = i % self.x.count;
        let rest = i / self.x.count;
        (ix, rest % self.y.count, rest / self.y.count)
    }

    pub fn point(&self, i: usize) -> [T; 3] {
        let (ix, iy, iz) = self.unravel(i);
        [self.x.coord(ix), self.y.coord(iy), self.z.coord(iz)]
    }
}

/// Field samples and intensities on a grid, stored in grid order.
#[derive(Debug, Clone, PartialEq)]
pub struct FieldDump<T = f64> {
    pub grid: SamplingGrid<T>,
    pub samples: Vec<VectorFieldSample<T>>,
    pub intensity: Vec<T>,
}

impl<T: Real> FieldDump<T> {
    pub fn from_samples(grid: SamplingGrid<T>, samples: Vec<VectorFieldSample<T>>) -> Self {
        let intensity = samples.iter().map(|s| s.intensity()).collect();
        Self {
            grid,
            samples,
            intensity,
        }
    }

    pub fn intensity_at(&self, ix: usize, iy: usize, iz: usize) -> T {
        self.intensity[self.grid.index(ix, iy, iz)]
    }

    /// Intensity values of one z slice, row-major in (y, x).
    pub fn slice(&self, iz: usize) -> &[T] {
        let n = self.grid.x.count * self.grid.y.count;
        &self.intensity[iz * n..(iz + 1) * n]
    }

    pub fn peak_intensity(&self) -> T {
        self.intensity.iter().copied().fold(T::zero(), T::max)
    }

    /// Index of the slice whose z is closest to `z`.
    pub fn nearest_slice(&self, z: T) -> usize {
        (0..self.grid.z.count)
            .min_by(|&a, &b| {
                let da = (self.grid.z.coord(a) - z).abs();
                let db = (self.grid.z.coord(b) - z).abs();
                da.partial_cmp(&db).unwrap_or(std::cmp::Ordering::Equal)
            })
            .unwrap_or(0)
    }
}

/// Evaluates `spec` at every grid point, in parallel on the current rayon pool.
///
/// Each sample is computed independently, so the result does not depend on
/// the number of worker threads.
pub fn evaluate_grid<T: Real>(
    spec: &FieldSpec<T>,
    grid: &SamplingGrid<T>,
    max_samples: u64,
) -> Result<FieldDump<T>, FieldError> {
    let n = grid.len();
    if n > max_samples as u128 {
        return Err(FieldError::GridTooLarge {
            requested: n,
            cap: max_samples,
        });
    }
    let samples: Vec<VectorFieldSample<T>> = (0..n as usize)
        .into_par_iter()
        .map(|i| {
            let [x, y, z] = grid.point(i);
            spec.evaluate_field(x, y, z)
        })
        .collect();
    Ok(FieldDump::from_samples(*grid, samples))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::modes::{BeamGeometry, Direction, ModeIndex, Normalization};
    use crate::superposition::BeamComponent;
    use num_complex::Complex;

    fn spec() -> FieldSpec {
        let g = BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap();
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
    fn single_point_grid() {
        let s = spec();
        let grid = SamplingGrid::new(AxisRange::point(0.3), AxisRange::point(-0.2), AxisRange::point(0.1)).unwrap();
        let dump = evaluate_grid(&s, &grid, DEFAULT_MAX_SAMPLES).unwrap();
        assert_eq!(dump.samples.len(), 1);
        assert_eq!(dump.samples[0], s.evaluate_field(0.3, -0.2, 0.1));
    }

    #[test]
    fn index_round_trip() {
        let grid = SamplingGrid::new(
            AxisRange::new(0.0, 1.0, 3),
            AxisRange::new(0.0, 1.0, 4),
            AxisRange::new(0.0, 1.0, 5),
        )
        .unwrap();
        for i in 0..60 {
            let (ix, iy, iz) = grid.unravel(i);
            assert_eq!(grid.index(ix, iy, iz), i);
        }
        assert_eq!(grid.point(1), [0.5, 0.0, 0.0]);
        assert_eq!(grid.point(3), [0.0, 1.0 / 3.0, 0.0]);
    }

    #[test]
    fn cap_is_enforced() {
        let grid = SamplingGrid::new(
            AxisRange::new(0.0, 1.0, 1024),
            AxisRange::new(0.0, 1.0, 1024),
            AxisRange::new(0.0, 1.0, 1024),
        )
        .unwrap();
        let err = evaluate_grid(&spec(), &grid, DEFAULT_MAX_SAMPLES).unwrap_err();
        assert!(matches!(err, FieldError::GridTooLarge { requested, .. } if requested == 1 << 30));
    }

    #[test]
    fn invalid_axes_rejected() {
        assert!(SamplingGrid::new(AxisRange::new(1.0, 0.0, 2), AxisRange::point(0.0), AxisRange::point(0.0)).is_err());
        assert!(SamplingGrid::new(AxisRange::new(0.0, 1.0, 0), AxisRange::point(0.0), AxisRange::point(0.0)).is_err());
    }

    #[test]
    fn thread_count_does_not_change_bits() {
        let s = spec();
        let grid = SamplingGrid::new(
            AxisRange::new(-6.0, 6.0, 23),
            AxisRange::new(-6.0, 6.0, 19),
            AxisRange::new(-0.5, 0.5, 7),
        )
        .unwrap();
        let run = |threads| {
            rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap()
                .install(|| evaluate_grid(&s, &grid, DEFAULT_MAX_SAMPLES).unwrap())
        };
        let a = run(1);
        let b = run(5);
        for (p, q) in a.intensity.iter().zip(&b.intensity) {
            assert_eq!(p.to_bits(), q.to_bits());
        }
        assert_eq!(a, b);
    }
}

//! Marching-squares iso-lines of intensity slices.
//!
//! Every slice is framed by a ring of virtual samples one grid step outside
//! the sampled window, carrying the slice minimum, so each iso-line closes
//! and a slice entirely above the level yields nothing. Saddle cells are
//! resolved by the cell-centre average. Loops are returned in the order in
//! which a row-major scan first meets them and are oriented
//! counterclockwise.

use std::collections::HashMap;

use crate::error::ContourError;
use crate::grid::{AxisRange, FieldDump};

/// Closed polylines of one z slice; each loop repeats its first vertex at the end.
#[derive(Debug, Clone, PartialEq)]
pub struct SliceContours {
    pub slice: usize,
    pub z: f64,
    pub loops: Vec<Vec<[f64; 2]>>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ContourSet {
    pub fraction: f64,
    /// Absolute intensity level, `fraction × global peak`.
    pub level: f64,
    pub slices: Vec<SliceContours>,
}

impl ContourSet {
    pub fn loop_count(&self) -> usize {
        self.slices.iter().map(|s| s.loops.len()).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.loop_count() == 0
    }
}

/// Iso-lines at `fraction` of the dump's global peak intensity, per slice.
pub fn extract_contours(dump: &FieldDump, fraction: f64) -> Result<ContourSet, ContourError> {
    if !(fraction > 0.0 && fraction < 1.0) {
        return Err(ContourError::BadFraction(fraction));
    }
    let g = &dump.grid;
    if g.x.count < 2 || g.y.count < 2 {
        return Err(ContourError::TooFewSamples {
            nx: g.x.count,
            ny: g.y.count,
        });
    }
    let level = fraction * dump.peak_intensity();
    let slices = (0..g.z.count)
        .map(|iz| SliceContours {
            slice: iz,
            z: g.z.coord(iz),
            loops: if level > 0.0 {
                contour_slice(dump.slice(iz), &g.x, &g.y, level)
            } else {
                Vec::new()
            },
        })
        .collect();
    Ok(ContourSet {
        fraction,
        level,
        slices,
    })
}

// Crossing on the edge leaving padded node (i, j) along +x (dir 0) or +y (dir 1).
type EdgeKey = (u8, usize, usize);

/// Closed iso-lines of a row-major `(y, x)` slice at `level`.
pub fn contour_slice(values: &[f64], xs: &AxisRange, ys: &AxisRange, level: f64) -> Vec<Vec<[f64; 2]>> {
    let (nx, ny) = (xs.count, ys.count);
    assert_eq!(values.len(), nx * ny, "slice size does not match axes");
    // padded node (i, j) ↔ sample (i - 1, j - 1)
    let (px, py) = (nx + 2, ny + 2);
    let frame = values.iter().copied().fold(f64::INFINITY, f64::min);
    let value = |i: usize, j: usize| -> f64 {
        if i == 0 || j == 0 || i > nx || j > ny {
            frame
        } else {
            values[(j - 1) * nx + (i - 1)]
        }
    };
    let (dx, dy) = (xs.step(), ys.step());
    let coord = |i: usize, j: usize| [xs.min + (i as f64 - 1.0) * dx, ys.min + (j as f64 - 1.0) * dy];
    let above = |i: usize, j: usize| value(i, j) > level;

    let point = |key: EdgeKey| -> [f64; 2] {
        let (d, i, j) = key;
        let (i1, j1) = if d == 0 { (i + 1, j) } else { (i, j + 1) };
        let (v0, v1) = (value(i, j), value(i1, j1));
        let t = (level - v0) / (v1 - v0);
        let (a, b) = (coord(i, j), coord(i1, j1));
        [a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])]
    };

    let mut links: HashMap<EdgeKey, Vec<EdgeKey>> = HashMap::new();
    let mut discovery: Vec<EdgeKey> = Vec::new();
    for j in 0..py - 1 {
        for i in 0..px - 1 {
            // corners counterclockwise from bottom-left; edges between them
            let corners = [above(i, j), above(i + 1, j), above(i + 1, j + 1), above(i, j + 1)];
            let edges: [EdgeKey; 4] = [(0, i, j), (1, i + 1, j), (0, i, j + 1), (1, i, j)];
            let crossing: Vec<usize> = (0..4).filter(|&e| corners[e] != corners[(e + 1) % 4]).collect();
            let pairs: Vec<(usize, usize)> = match crossing.len() {
                0 => continue,
                2 => vec![(crossing[0], crossing[1])],
                _ => {
                    let centre = (value(i, j) + value(i + 1, j) + value(i + 1, j + 1) + value(i, j + 1)) / 4.0;
                    // join the edges around each corner that is on the minority side
                    let isolated = if centre > level { !corners[0] } else { corners[0] };
                    if isolated {
                        vec![(3, 0), (1, 2)]
                    } else {
                        vec![(0, 1), (2, 3)]
                    }
                }
            };
            for (a, b) in pairs {
                let (ka, kb) = (edges[a], edges[b]);
                for k in [ka, kb] {
                    if !links.contains_key(&k) {
                        discovery.push(k);
                    }
                }
                links.entry(ka).or_default().push(kb);
                links.entry(kb).or_default().push(ka);
            }
        }
    }

    let mut visited: HashMap<EdgeKey, bool> = HashMap::with_capacity(links.len());
    let mut loops = Vec::new();
    for &start in &discovery {
        if visited.contains_key(&start) {
            continue;
        }
        let mut keys = vec![start];
        visited.insert(start, true);
        let mut prev = start;
        let mut cur = links[&start][0];
        while cur != start {
            visited.insert(cur, true);
            keys.push(cur);
            let next = links[&cur].iter().copied().find(|&k| k != prev).unwrap_or(prev);
            prev = cur;
            cur = next;
        }
        let mut pts: Vec<[f64; 2]> = keys.into_iter().map(point).collect();
        if signed_area(&pts) < 0.0 {
            pts[1..].reverse();
        }
        pts.push(pts[0]);
        loops.push(pts);
    }
    loops
}

/// Shoelace area of an open polygon, positive when counterclockwise.
pub fn signed_area(pts: &[[f64; 2]]) -> f64 {
    let n = pts.len();
    (0..n)
        .map(|k| {
            let (a, b) = (pts[k], pts[(k + 1) % n]);
            a[0] * b[1] - b[0] * a[1]
        })
        .sum::<f64>()
        / 2.0
}

/// Mean of a closed loop's distinct vertices.
pub fn loop_centroid(pts: &[[f64; 2]]) -> [f64; 2] {
    let open = if pts.len() > 1 && pts[0] == pts[pts.len() - 1] { &pts[..pts.len() - 1] } else { pts };
    let n = open.len() as f64;
    let (sx, sy) = open.iter().fold((0.0, 0.0), |(sx, sy), p| (sx + p[0], sy + p[1]));
    [sx / n, sy / n]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::grid::{evaluate_grid, SamplingGrid, DEFAULT_MAX_SAMPLES};
    use crate::modes::{BeamGeometry, Direction, ModeIndex, Normalization};
    use crate::superposition::{BeamComponent, FieldSpec, VectorFieldSample};
    use num_complex::Complex64;

    fn axis(n: usize) -> AxisRange {
        AxisRange::new(-1.0, 1.0, n)
    }

    #[test]
    fn constant_slice_has_no_contours() {
        let grid = SamplingGrid::new(axis(5), axis(5), AxisRange::point(0.0)).unwrap();
        let s = VectorFieldSample::new(Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0));
        let dump = FieldDump::from_samples(grid, vec![s; 25]);
        assert!(extract_contours(&dump, 0.5).unwrap().is_empty());
        let zero = FieldDump::from_samples(grid, vec![VectorFieldSample::default(); 25]);
        assert!(extract_contours(&zero, 0.5).unwrap().is_empty());
    }

    #[test]
    fn rejects_bad_requests() {
        let grid = SamplingGrid::new(axis(1), axis(5), AxisRange::point(0.0)).unwrap();
        let dump = FieldDump::from_samples(grid, vec![VectorFieldSample::default(); 5]);
        assert_eq!(extract_contours(&dump, 0.5), Err(ContourError::TooFewSamples { nx: 1, ny: 5 }));
        assert_eq!(extract_contours(&dump, 1.0), Err(ContourError::BadFraction(1.0)));
        assert_eq!(extract_contours(&dump, 0.0), Err(ContourError::BadFraction(0.0)));
    }

    #[test]
    fn saddle_uses_centre_value() {
        // checkerboard 2x2 cell: high diagonal joined when the centre is high
        let xs = AxisRange::new(0.0, 1.0, 2);
        let high = contour_slice(&[1.0, 0.0, 0.0, 1.0], &xs, &xs, 0.4);
        let low = contour_slice(&[1.0, 0.0, 0.0, 1.0], &xs, &xs, 0.6);
        // centre 0.5: above 0.4 joins the high corners, below 0.6 splits them
        assert_eq!(high.len(), 1);
        assert_eq!(low.len(), 2);
    }

    #[test]
    fn loops_are_closed_and_counterclockwise() {
        let xs: AxisRange = AxisRange::new(-2.0, 2.0, 41);
        let vals: Vec<f64> = (0..41 * 41)
            .map(|k| {
                let (x, y) = (xs.coord(k % 41), xs.coord(k / 41));
                (-(x * x + y * y)).exp() + 0.8 * (-((x - 1.2).powi(2) + (y + 1.0).powi(2)) * 8.0).exp()
            })
            .collect();
        let loops = contour_slice(&vals, &xs, &xs, 0.5);
        assert!(!loops.is_empty());
        for l in &loops {
            assert_eq!(l.first(), l.last());
            assert!(signed_area(&l[..l.len() - 1]) > 0.0);
        }
    }

    #[test]
    fn gaussian_contour_is_beam_radius() {
        let g = BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap();
        let w0 = g.waist();
        let spec = FieldSpec::new(
            vec![BeamComponent::new(g, ModeIndex::new(0, 0), Complex64::new(1.0, 0.0), Direction::Forward)],
            Normalization::UnitNorm,
        )
        .unwrap();
        let h = 1.6 * w0;
        let grid = SamplingGrid::new(AxisRange::new(-h, h, 81), AxisRange::new(-h, h, 81), AxisRange::new(-25.0, 25.0, 3)).unwrap();
        let dump = evaluate_grid(&spec, &grid, DEFAULT_MAX_SAMPLES).unwrap();
        // global peak sits at the focus; scale the level per slice via w0²/w²
        let set = extract_contours(&dump, (-2.0f64).exp()).unwrap();
        let focal = &set.slices[1];
        assert_eq!(focal.loops.len(), 1);
        let half_cell = grid.x.step() / 2.0;
        for p in &focal.loops[0] {
            assert!((p[0].hypot(p[1]) - w0).abs() < half_cell);
        }
        for s in &set.slices {
            for l in &s.loops {
                for p in l {
                    let i = spec.intensity_at(p[0], p[1], s.z);
                    assert!(i > 0.0);
                }
            }
        }
    }
}

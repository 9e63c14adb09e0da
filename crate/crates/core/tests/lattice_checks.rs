//! Lattice assembly, core placement and single-helix embedding.

use helixlight::helix::dark_zero_focal;
use helixlight::lattice::*;
use helixlight::{BeamComponent, BeamGeometry, Direction, FieldSpec, ModeIndex, Normalization};
use num_complex::Complex64;

fn geom() -> BeamGeometry {
    BeamGeometry::from_rayleigh_length(1.0, 50.0).unwrap()
}

fn weak_helix(norm: Normalization) -> FieldSpec {
    let g = geom();
    FieldSpec::new(
        vec![
            BeamComponent::new(g, ModeIndex::new(0, 0), Complex64::new(0.125, 0.0), Direction::Forward),
            BeamComponent::new(g, ModeIndex::new(0, 1), Complex64::new(1.0, 0.0), Direction::Backward),
        ],
        norm,
    )
    .unwrap()
}

/// Trapezoid rule over the focal plane; spectrally accurate for Gaussian tails.
fn focal_power(spec: &FieldSpec) -> f64 {
    let w0 = spec.waist();
    let (half, n) = (8.0 * w0, 321);
    let h = 2.0 * half / (n - 1) as f64;
    let mut acc = 0.0;
    for j in 0..n {
        for i in 0..n {
            acc += spec.intensity_at(-half + i as f64 * h, -half + j as f64 * h, 0.0);
        }
    }
    acc * h * h
}

#[test]
fn lattice_is_sum_of_sites() {
    let lat = LatticeSpec::helical(weak_helix(Normalization::UnitNorm), 2.5, 3);
    let field = generate_lattice(&lat).unwrap();
    let w0 = lat.geometry.waist();
    for &(x, y, z) in &[(0.0, 0.0, 0.0), (1.3 * w0, -0.4 * w0, 0.1), (-3.1 * w0, 2.2 * w0, -0.37), (7.0 * w0, 5.0 * w0, 0.2)] {
        let whole = field.evaluate_field(x, y, z);
        let (mut ex, mut ey) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
        for site in lat.sites() {
            let angle = lat.polarization_angles[site.sublattice];
            for c in weak_helix(Normalization::UnitNorm).components() {
                let u = c.scalar_field(Normalization::UnitNorm, x - site.position[0], y - site.position[1], z);
                ex += u * angle.cos();
                ey += u * angle.sin();
            }
        }
        let scale = whole.intensity().sqrt().max(1e-30);
        assert!((whole.ex - ex).norm() < 1e-13 * scale.max(ex.norm()));
        assert!((whole.ey - ey).norm() < 1e-13 * scale.max(ey.norm()));
    }
}

/// Worst distance, in waists, between a polished core of the central seven
/// sites and the site position shifted by the single-beam focal offset.
fn worst_core_miss(spacing: f64) -> f64 {
    let lat = LatticeSpec::helical(weak_helix(Normalization::UnitNorm), spacing, 4);
    let field = generate_lattice(&lat).unwrap();
    let w0 = lat.geometry.waist();
    let (dx, dy) = dark_zero_focal(0.125, &lat.geometry);
    let central: Vec<Site> = lat.sites().into_iter().filter(|s| hex_distance(s.i, s.j) <= 1).collect();
    assert_eq!(central.len(), 7);
    central
        .iter()
        .map(|site| {
            let want = [site.position[0] + dx, site.position[1] + dy];
            let core = polish_core(&field, [want[0] + 0.02 * w0, want[1] - 0.02 * w0, 0.0]).unwrap();
            (core.position[0] - want[0]).hypot(core.position[1] - want[1]) / w0
        })
        .fold(0.0, f64::max)
}

#[test]
fn helical_cores_sit_at_the_single_beam_offset() {
    assert!(worst_core_miss(3.0) < 1e-3);
    // neighbour spill-over pulls the cores by an amount falling like the Gaussian tail
    let misses: Vec<f64> = [2.5, 3.0, 3.5, 4.0].iter().map(|&a| worst_core_miss(a)).collect();
    assert!(misses.windows(2).all(|w| w[1] < 0.2 * w[0]), "{misses:?}");
}

#[test]
fn embedded_pair_carries_twice_a_site_power() {
    for norm in [Normalization::UnitNorm, Normalization::PaperExact] {
        let mut lat = LatticeSpec::gaussian(geom(), 2.3, 4);
        lat.normalization = norm;
        lat.central = CentralModification::EmbedSingleHelix(EmbedOptions::default());
        let embedded = embed_single_helix(&lat).unwrap();
        let pair = FieldSpec::new(embedded.spec.components()[..2].to_vec(), norm).unwrap();
        let site = FieldSpec::new(
            vec![BeamComponent::new(geom(), ModeIndex::new(0, 0), Complex64::new(1.0, 0.0), Direction::Forward)],
            norm,
        )
        .unwrap();
        let ratio = focal_power(&pair) / focal_power(&site);
        assert!((ratio - 2.0).abs() < 2e-6, "{norm:?}: {ratio}");
    }
}

#[test]
fn embedded_core_is_dark_against_background() {
    let mut lat = LatticeSpec::gaussian(geom(), 2.3, 4);
    lat.central = CentralModification::EmbedSingleHelix(EmbedOptions::default());
    let embedded = embed_single_helix(&lat).unwrap();
    let w0 = lat.geometry.waist();
    let core = polish_core(&embedded.spec, [embedded.core_seed.0, embedded.core_seed.1, 0.0]).unwrap();
    assert!(core.position[0].hypot(core.position[1]) < 0.5 * w0);

    let dump = {
        use helixlight::{evaluate_grid, AxisRange, SamplingGrid, DEFAULT_MAX_SAMPLES};
        let h = 0.6 * lat.pitch();
        let grid = SamplingGrid::new(AxisRange::new(-h, h, 121), AxisRange::new(-h, h, 121), AxisRange::new(0.0, 0.0, 1)).unwrap();
        evaluate_grid(&embedded.spec, &grid, DEFAULT_MAX_SAMPLES).unwrap()
    };
    let mask = Mask::new(Region::CentralHexagon { circumradius: lat.pitch() / 3f64.sqrt() })
        .excluding(vec![core.position], 0.35 * w0)
        .focal();
    let background = median_intensity(&dump, &mask).unwrap();
    assert!(core.intensity <= 1e-4 * background, "{:e} vs {:e}", core.intensity, background);
}

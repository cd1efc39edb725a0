use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand::rngs::StdRng;
use spinpointer::estimation::{upper_hemisphere_probability, FidelityQuadrature};
use spinpointer::pointer::{
    build_adaptive_field, build_amplitude_field, position_amplitudes_direct, KrausSpectrum, MomentumQuadrature, OutcomeGrid,
    OutcomeSpec, PointerModel,
};
use spinpointer::quadrature::Refine;
use spinpointer::spin::{coherent_dicke, direction_from_angles, DickeVector};

fn model(d: f64) -> PointerModel {
    PointerModel::new(d).unwrap()
}

#[test]
fn total_probability_is_one() {
    let quad = MomentumQuadrature::default();
    let spec = OutcomeSpec::default();
    for n in 1..=6 {
        for d in [0.05, 0.3, 1.0, 3.0] {
            let field = build_adaptive_field(n, &model(d), &quad, &spec).unwrap();
            assert!(field.is_normalized(), "N={n} Δ={d}: {}", field.total_probability());
        }
    }
}

#[test]
fn density_is_nonnegative_and_normalized_at_reference_point() {
    let field = build_adaptive_field(3, &model(0.5), &MomentumQuadrature::default(), &OutcomeSpec::default()).unwrap();
    assert!((field.total_probability() - 1.0).abs() < 1e-4);
    for i in 0..field.grid().radial().len() {
        for j in 0..field.grid().polar().len() {
            assert!(field.density(i, j) >= 0.0);
        }
    }
}

#[test]
fn doubling_nodes_leaves_total_probability() {
    let m = model(0.5);
    let quad = MomentumQuadrature::default();
    let spec = OutcomeSpec::default();
    let base = build_adaptive_field(2, &m, &quad, &spec).unwrap();
    let doubled_quad = MomentumQuadrature {
        radial_nodes: 2 * quad.radial_nodes,
        polar_nodes: 2 * quad.polar_nodes,
        azimuthal_nodes: 2 * quad.azimuthal_nodes,
        ..quad
    };
    let doubled_spec = OutcomeSpec {
        radial_nodes: 2 * spec.radial_nodes,
        polar_nodes: 2 * spec.polar_nodes,
    };
    let grid = OutcomeGrid::ball(&doubled_spec, base.grid().r_max(), m.spread()).unwrap();
    let doubled = build_amplitude_field(2, &m, &doubled_quad, &grid).unwrap();
    assert!((base.total_probability() - doubled.total_probability()).abs() < 1e-5);
    let refined = build_adaptive_field(2, &m, &quad.refined(), &spec.refined()).unwrap();
    assert!((base.total_probability() - refined.total_probability()).abs() < 1e-5);
}

#[test]
fn field_is_identical_across_worker_counts() {
    let m = model(0.4);
    let quad = MomentumQuadrature::default();
    let grid = OutcomeGrid::ball(&OutcomeSpec::default(), 3.0, m.spread()).unwrap();
    let run = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| build_amplitude_field(3, &m, &quad, &grid).unwrap())
    };
    let (a, b) = (run(1), run(4));
    assert_eq!(a.total_probability().to_bits(), b.total_probability().to_bits());
    for i in 0..grid.radial().len() {
        for j in 0..grid.polar().len() {
            assert_eq!(a.amplitudes(i, j), b.amplitudes(i, j));
        }
    }
}

/// `P(θ < π/2)` when every spin is measured along an isotropically random axis:
/// the outcome sign follows the projection, so the hemisphere is right with
/// probability `(1 + |n_z|)/2`.
fn random_axis_hemisphere_bias(samples: usize, seed: u64) -> f64 {
    let mut rng = StdRng::seed_from_u64(seed);
    let mut hits = 0.0;
    for _ in 0..samples {
        let nz: f64 = rng.gen_range(-1.0..1.0);
        let plus = rng.gen::<f64>() < 0.5 * (1.0 + nz);
        if (nz > 0.0) == plus {
            hits += 1.0;
        }
    }
    hits / samples as f64
}

#[test]
fn strong_coupling_hemisphere_matches_random_axis_sampling() {
    let oracle = random_axis_hemisphere_bias(1_000_000, 7);
    assert!((oracle - 0.75).abs() < 3e-3);
    let upper = upper_hemisphere_probability(1, &model(0.01), &FidelityQuadrature::default()).unwrap();
    assert!((upper - oracle).abs() < 5e-3, "quadrature {upper}, sampling {oracle}");
}

#[test]
fn upper_hemisphere_dominates_below_unit_spread() {
    let quad = FidelityQuadrature::default();
    for n in 1..=4 {
        for d in [0.05, 0.2, 0.5, 0.9] {
            let upper = upper_hemisphere_probability(n, &model(d), &quad).unwrap();
            assert!(upper >= 0.5, "N={n} Δ={d}: {upper}");
        }
    }
}

fn euler_matrix(alpha: f64, beta: f64, gamma: f64) -> [[f64; 3]; 3] {
    let rz = |a: f64| [[a.cos(), -a.sin(), 0.0], [a.sin(), a.cos(), 0.0], [0.0, 0.0, 1.0]];
    let ry = |b: f64| [[b.cos(), 0.0, b.sin()], [0.0, 1.0, 0.0], [-b.sin(), 0.0, b.cos()]];
    let mul = |a: [[f64; 3]; 3], b: [[f64; 3]; 3]| {
        let mut c = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                c[i][j] = (0..3).map(|k| a[i][k] * b[k][j]).sum();
            }
        }
        c
    };
    mul(mul(rz(alpha), ry(beta)), rz(gamma))
}

fn apply(m: &[[f64; 3]; 3], v: [f64; 3]) -> [f64; 3] {
    [0, 1, 2].map(|i| (0..3).map(|k| m[i][k] * v[k]).sum())
}

#[test]
fn rotated_input_gives_rotated_density() {
    let m = model(0.8);
    let direct_quad = MomentumQuadrature {
        radial_nodes: 40,
        radial_cutoff_sigmas: 8.0,
        polar_nodes: 40,
        azimuthal_nodes: 40,
    };
    let spectrum = KrausSpectrum::new(2, &m, &MomentumQuadrature::default(), 3.0).unwrap();
    let up = DickeVector::all_up(2).unwrap();
    let mut rng = StdRng::seed_from_u64(11);
    for _ in 0..3 {
        let (alpha, beta, gamma) = (rng.gen_range(0.0..2.0 * PI), rng.gen_range(0.0..PI), rng.gen_range(0.0..2.0 * PI));
        let rot = euler_matrix(alpha, beta, gamma);
        let input = coherent_dicke(&direction_from_angles(beta, alpha).unwrap(), 2).unwrap();
        let r = [rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)];
        let reference = spectrum.amplitudes_for_input(r, &up).unwrap().norm_sqr();
        let rotated = position_amplitudes_direct(apply(&rot, r), &input, &m, &direct_quad).unwrap().norm_sqr();
        assert!((reference - rotated).abs() < 1e-9, "{reference} vs {rotated}");
    }
}

#[test]
fn spectral_route_matches_direct_quadrature_at_strong_coupling() {
    let m = model(0.2);
    let direct_quad = MomentumQuadrature {
        radial_nodes: 72,
        radial_cutoff_sigmas: 8.0,
        polar_nodes: 48,
        azimuthal_nodes: 48,
    };
    let spectrum = KrausSpectrum::new(1, &m, &MomentumQuadrature::default(), 2.0).unwrap();
    let up = DickeVector::all_up(1).unwrap();
    for &(r, theta) in &[(0.45, 0.3), (0.5, 1.6), (0.7, 2.6)] {
        let fast = spectrum.amplitudes(r, theta).unwrap();
        let slow = position_amplitudes_direct([r * f64::sin(theta), 0.0, r * f64::cos(theta)], &up, &m, &direct_quad).unwrap();
        for (a, b) in fast.iter().zip(slow.amplitudes()) {
            assert!((a - b).norm() < 1e-8, "r={r} θ={theta}: {a} vs {b}");
        }
    }
}

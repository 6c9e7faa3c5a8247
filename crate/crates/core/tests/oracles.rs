//! Independent-oracle checks: the crossing-sign count of a planar
//! projection validates the Gauss-integral linking numbers, ray-crossing
//! probes validate the solid-angle sphere degrees, and closed-form flow
//! solutions validate the RK4 integration.

mod common;

use common::{crossing_link_number, relu_flow_exact};

use linktopo::activation::ActivationKind;
use linktopo::degree::{
    degree_of, linking_number, sphere_point_degree, winding_number, GaussMapProbe,
};
use linktopo::flow::{check_group_law, compactified_homotopy, flow_field, integrate_flow};
use linktopo::geometry::{
    apply_homeomorphism, builtin_pair, make_hopf_pair, make_sphere_point_pair, unit_sphere_cloud,
    Homeomorphism, MonotoneMap,
};
use linktopo::linalg::Matrix;

fn oracle_of(pair: &linktopo::geometry::EmbeddedPair) -> i64 {
    crossing_link_number(&pair.side_a.points, &pair.side_b.points)
}

#[test]
fn canonical_hopf_has_linking_number_one_by_crossings() {
    // the hand-checkable ground truth: B crosses A's spanning disk once,
    // upward, so the linking number is +1
    let pair = make_hopf_pair(1.0, 256).unwrap();
    assert_eq!(oracle_of(&pair), 1);
    let report = linking_number(&pair).unwrap();
    assert_eq!(report.rounded, 1);
}

#[test]
fn gauss_integral_matches_crossing_oracle_on_builtins() {
    for name in ["hopf", "hopf-reflected", "unlinked", "far-separated"] {
        let pair = builtin_pair(name, 256).unwrap();
        let report = linking_number(&pair).unwrap();
        assert_eq!(report.rounded, oracle_of(&pair), "disagreement on {name}");
        assert_eq!(Some(report.rounded), pair.expected_degree, "metadata wrong on {name}");
    }
}

#[test]
fn oracle_agreement_survives_homeomorphisms() {
    let pair = make_hopf_pair(1.0, 256).unwrap();

    let scaled = make_hopf_pair(2.0, 256).unwrap();
    assert_eq!(oracle_of(&scaled), 1);
    assert_eq!(linking_number(&scaled).unwrap().rounded, 1);

    let skew = Homeomorphism::componentwise(vec![
        MonotoneMap::SineSkew { amplitude: 0.3 };
        3
    ])
    .unwrap();
    let skewed = apply_homeomorphism(&skew, &pair).unwrap();
    assert_eq!(oracle_of(&skewed), 1);
    let report = linking_number(&skewed).unwrap();
    assert_eq!(report.rounded, 1);

    let reflect = Homeomorphism::affine(
        Matrix::from_rows(&[
            vec![1.0, 0.0, 0.0],
            vec![0.0, -1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ])
        .unwrap(),
        vec![0.5, -0.25, 1.0],
    )
    .unwrap();
    let reflected = apply_homeomorphism(&reflect, &pair).unwrap();
    assert_eq!(oracle_of(&reflected), -1);
    assert_eq!(linking_number(&reflected).unwrap().rounded, -1);
}

#[test]
fn sphere_degrees_match_ray_crossing_probes() {
    for (dim, offsets) in [
        (2usize, vec![vec![0.5, 0.0], vec![2.0, 0.0]]),
        (3, vec![vec![0.0, 0.0, 0.0], vec![0.3, -0.2, 0.1], vec![2.0, 0.0, 0.0]]),
        (4, vec![vec![0.0; 4], vec![0.0, 1.5, 0.0, 0.0]]),
    ] {
        for offset in offsets {
            let pair = make_sphere_point_pair(dim, &offset, 400).unwrap();
            let report = sphere_point_degree(&pair).unwrap();
            let probe = GaussMapProbe::new(&pair, 7, 1234).unwrap();
            let counts = probe.signed_crossing_counts().unwrap();
            assert!(
                counts.iter().all(|&c| c == report.rounded),
                "dim {dim} offset {offset:?}: probes {counts:?} vs degree {}",
                report.rounded
            );
            assert_eq!(Some(report.rounded), pair.expected_degree);
        }
    }
}

#[test]
fn winding_number_examples() {
    let circle = unit_sphere_cloud(2, 256).unwrap();
    let inside = winding_number(&circle, &[0.5, 0.0]).unwrap();
    assert_eq!(inside.rounded, 1);
    let pair = make_sphere_point_pair(2, &[0.5, 0.0], 256).unwrap();
    assert_eq!(degree_of(&pair).unwrap().rounded, 1);
}

#[test]
fn hopf_min_gap_matches_bruteforce() {
    // dense continuum scan of the distance between the two circles: the
    // minimum is 1 (every point of B sits at distance exactly 1 from A's
    // point (1, 0, 0), and nothing comes closer)
    let n = 2000;
    let mut brute = f64::INFINITY;
    for i in 0..n {
        let th = std::f64::consts::TAU * i as f64 / n as f64;
        for j in 0..n {
            let ph = std::f64::consts::TAU * j as f64 / n as f64;
            let dx = th.cos() - 1.0 - ph.cos();
            let dy = th.sin();
            let dz = ph.sin();
            let d2 = dx * dx + dy * dy + dz * dz;
            if d2 < brute {
                brute = d2;
            }
        }
    }
    let brute = brute.sqrt();
    assert!((brute - 1.0).abs() < 1e-5, "continuum min gap {brute}");

    let pair = make_hopf_pair(1.0, 512).unwrap();
    assert!((pair.min_gap - 1.0).abs() < 1e-12, "sampled min gap {}", pair.min_gap);
}

#[test]
fn relu_flow_matches_closed_form() {
    let relu = ActivationKind::relu();

    // fixed on the nonnegative orthant
    let x = integrate_flow(&relu, &[2.0, 3.0], 5.0, 1e-3).unwrap();
    assert!((x[0] - 2.0).abs() < 1e-9 && (x[1] - 3.0).abs() < 1e-9);

    // exponential contraction on the nonpositive orthant
    let x = integrate_flow(&relu, &[-1.0, -1.0], 3.0, 1e-3).unwrap();
    let expect = -(-3.0f64).exp();
    assert!((x[0] - expect).abs() < 1e-6 && (x[1] - expect).abs() < 1e-6);

    // mixed signs against the componentwise closed form
    for (x0, t) in [(vec![-1.0, 2.0, 0.5, -0.25], 1.7), (vec![-4.0, 0.0, 3.0, -0.1], 4.0)] {
        let numeric = integrate_flow(&relu, &x0, t, 1e-3).unwrap();
        let exact = relu_flow_exact(&x0, t);
        for (a, b) in numeric.iter().zip(&exact) {
            assert!((a - b).abs() < 1e-6, "{numeric:?} vs {exact:?}");
        }
    }

    // compactified homotopy endpoints and midpoint
    let x0 = [-1.0, 2.0];
    assert_eq!(compactified_homotopy(&relu, &x0, 0.0).unwrap(), x0.to_vec());
    assert_eq!(compactified_homotopy(&relu, &x0, 1.0).unwrap(), vec![0.0, 2.0]);
    let mid = compactified_homotopy(&relu, &x0, 0.5).unwrap();
    assert!((mid[0] + (-1.0f64).exp()).abs() < 1e-6);
    assert!((mid[1] - 2.0).abs() < 1e-9);

    // group law against the decoupled closed form
    let dev = check_group_law(&relu, &[vec![-1.0, 2.0]], &[(0.3, 0.2)], 1e-3).unwrap();
    assert!(dev < 1e-8);
}

#[test]
fn flow_field_values() {
    assert_eq!(flow_field(&ActivationKind::relu(), &[1.0, -1.0]), vec![0.0, 1.0]);
    assert_eq!(flow_field(&ActivationKind::relu(), &[0.0, 0.0]), vec![0.0, 0.0]);
    let sig = flow_field(&ActivationKind::sigmoid(), &[0.0]);
    assert!((sig[0] - 0.5).abs() < 1e-15);
}

#[test]
fn forward_equals_flow_limit_composed_with_affines() {
    // the relu net is the composition of affines with the flow's s = 1
    // limit map, layer by layer
    use linktopo::net::{FinalActivation, MLPSpec, MLP};
    let relu = ActivationKind::relu();
    let spec = MLPSpec::new(
        vec![3, 4, 4, 1],
        relu.clone(),
        FinalActivation::SameAsHidden,
        21,
    )
    .unwrap();
    let net = MLP::init(spec);
    for x in [[0.3, -0.7, 1.1], [-2.0, 0.0, 0.4], [1.5, 2.5, -3.5]] {
        let direct = net.forward(&x).unwrap();
        let mut state = x.to_vec();
        for (w, b) in net.weights.iter().zip(&net.biases) {
            let affine = linktopo::linalg::add(&w.matvec(&state), b);
            state = compactified_homotopy(&relu, &affine, 1.0).unwrap();
        }
        for (a, b) in direct.iter().zip(&state) {
            assert!((a - b).abs() < 1e-9);
        }
    }
}

//! Layout-engine fixtures with closed-form optima, and trend/approximation
//! checks on seeded runs.

use linlog::{
    ar_energy, minimize_energy, two_vertex_optimal_distance, EnergyParams, LayoutOptions,
    LayoutState, Network, PlantedPartitionSpec, VertexWeightMode,
};

fn tight_options(seed: u64) -> LayoutOptions {
    LayoutOptions {
        seed,
        max_iterations: 4000,
        convergence_tol: 1e-7,
        ..LayoutOptions::default()
    }
}

/// Golden-section minimizer over log-distance; independent of the closed
/// form under test.
fn golden_section_optimum(params: &EnergyParams, w_uv: f64, w_u: f64, w_v: f64) -> f64 {
    let energy = |ln_d: f64| {
        let d: f64 = ln_d.exp();
        let attraction = if params.a == -1.0 {
            d.ln()
        } else {
            d.powf(params.a + 1.0) / (params.a + 1.0)
        };
        let repulsion = if params.r == -1.0 {
            d.ln()
        } else {
            d.powf(params.r + 1.0) / (params.r + 1.0)
        };
        params.attraction_factor * w_uv * attraction
            - params.repulsion_factor * w_u * w_v * repulsion
    };
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let (mut lo, mut hi) = ((1e-6f64).ln(), (1e6f64).ln());
    let mut c = hi - (hi - lo) / phi;
    let mut d = lo + (hi - lo) / phi;
    for _ in 0..200 {
        if energy(c) < energy(d) {
            hi = d;
        } else {
            lo = c;
        }
        c = hi - (hi - lo) / phi;
        d = lo + (hi - lo) / phi;
    }
    ((lo + hi) / 2.0).exp()
}

#[test]
fn closed_form_matches_numeric_minimizer() {
    let grid = [(0.0, -1.0), (1.0, -1.0), (2.0, -1.0), (0.0, -2.0), (1.0, 0.0)];
    let weights = [(1.0, 1.0, 1.0), (1.0, 2.0, 2.0), (3.0, 1.0, 2.0), (0.5, 4.0, 0.25)];
    for (a, r) in grid {
        let params = EnergyParams::new(a, r).unwrap();
        for (w_uv, w_u, w_v) in weights {
            let closed = two_vertex_optimal_distance(&params, w_uv, w_u, w_v).unwrap();
            let numeric = golden_section_optimum(&params, w_uv, w_u, w_v);
            let rel = (closed - numeric).abs() / closed;
            assert!(rel <= 1e-6, "({a},{r}) weights ({w_uv},{w_u},{w_v}): {closed} vs {numeric}");
        }
    }
}

#[test]
fn engine_reaches_two_vertex_optima() {
    for (a, r) in [(0.0, -1.0), (2.0, -1.0), (1.0, 0.0)] {
        let params = EnergyParams::new(a, r).unwrap();
        for (w_uv, w_u, w_v) in [(1.0, 1.0, 1.0), (1.0, 2.0, 2.0)] {
            let net = linlog::two_vertex_network(w_uv, w_u, w_v).unwrap();
            let result = minimize_energy(&net, &params, &tight_options(4)).unwrap();
            let d = result.layout.distance(0, 1);
            let expected = two_vertex_optimal_distance(&params, w_uv, w_u, w_v).unwrap();
            let rel = (d - expected).abs() / expected;
            assert!(rel <= 1e-4, "({a},{r}): distance {d}, expected {expected}");
        }
    }
}

/// Three-vertex path with a unit-weight center: at the optimum the leaves sit
/// at distance x = (1 + 2^r)^(1/(a-r)) from the center (force balance of one
/// attraction against center and far-leaf repulsion).
#[test]
fn engine_reaches_star_optimum() {
    for (a, r) in [(0.0, -1.0), (1.0, -1.0)] {
        let params = EnergyParams::new(a, r).unwrap();
        let net = Network::from_labeled_edges(
            &[("l1", "c", 1.0), ("c", "l2", 1.0)],
            VertexWeightMode::Unit,
        )
        .unwrap();
        let result = minimize_energy(&net, &params, &tight_options(11)).unwrap();
        let c = net.index_of("c").unwrap();
        let expected = (1.0 + 2f64.powf(r)).powf(1.0 / (a - r));
        for leaf in ["l1", "l2"] {
            let d = result.layout.distance(net.index_of(leaf).unwrap(), c);
            let rel = (d - expected).abs() / expected;
            assert!(rel <= 1e-4, "({a},{r}) leaf {leaf}: {d} vs {expected}");
        }
    }
}

/// At a = 0 the optimal separation of the triangles does not depend on
/// whether the bridge is a single edge or a two-edge path through a
/// weightless vertex.
#[test]
fn figure_fixtures_separate_identically_at_a_zero() {
    let [bridged, subdivided] = linlog::figure2_networks();
    let params = EnergyParams::linlog();
    let opts = tight_options(3);
    let direct = minimize_energy(&bridged, &params, &opts).unwrap();
    let via_path = minimize_energy(&subdivided, &params, &opts).unwrap();

    let endpoint_distance = |net: &Network, layout: &linlog::Layout| {
        layout.distance(net.index_of("c").unwrap(), net.index_of("d").unwrap())
    };
    let d_direct = endpoint_distance(&bridged, &direct.layout);
    let d_path = endpoint_distance(&subdivided, &via_path.layout);
    let ratio = d_path / d_direct;
    assert!(
        (ratio - 1.0).abs() < 0.05,
        "separation ratio {ratio} (direct {d_direct}, path {d_path})"
    );
}

#[test]
fn barnes_hut_trend_allows_at_most_one_increase() {
    let (net, _) = linlog::planted_partition(&PlantedPartitionSpec {
        cluster_count: 4,
        vertices_per_cluster: 16,
        p_in: 0.9,
        p_out: 0.05,
        seed: 8,
    })
    .unwrap();
    let params = EnergyParams::linlog();
    let opts = LayoutOptions {
        seed: 21,
        use_barnes_hut: Some(true),
        max_iterations: 400,
        ..LayoutOptions::default()
    };
    let mut state = LayoutState::new(&net, &params, &opts).unwrap();
    let mut checkpoints = vec![ar_energy(&net, state.layout(), &params).unwrap()];
    for i in 1..=400 {
        if state.converged() {
            break;
        }
        state.step().unwrap();
        if i % 25 == 0 {
            checkpoints.push(ar_energy(&net, state.layout(), &params).unwrap());
        }
    }
    let increases = checkpoints
        .windows(2)
        .filter(|pair| pair[1] > pair[0] + 1e-12)
        .count();
    assert!(increases <= 1, "{increases} increases across {checkpoints:?}");
}

/// LinLog separates the planted clusters much more clearly than a
/// Fruchterman-Reingold-like exponent pair on the same instance.
#[test]
fn linlog_beats_fr_on_cluster_separation() {
    let (net, truth) = linlog::planted_partition(&PlantedPartitionSpec {
        cluster_count: 8,
        vertices_per_cluster: 16,
        p_in: 1.0,
        p_out: 0.2,
        seed: 1,
    })
    .unwrap();
    let opts = LayoutOptions {
        seed: 1,
        use_barnes_hut: Some(false),
        ..LayoutOptions::default()
    };
    let linlog_run = minimize_energy(&net, &EnergyParams::linlog(), &opts).unwrap();
    let fr_run = minimize_energy(&net, &EnergyParams::fruchterman_reingold(), &opts).unwrap();

    let ratio = |layout: &linlog::Layout| {
        linlog::consistency_report(&net, layout, &truth, 0.0, -0.5)
            .unwrap()
            .separation_ratio
            .unwrap()
    };
    let linlog_ratio = ratio(&linlog_run.layout);
    let fr_ratio = ratio(&fr_run.layout);
    assert!(
        linlog_ratio > fr_ratio,
        "LinLog {linlog_ratio} should exceed FR {fr_ratio}"
    );
}

//! Gradient verification against central finite differences of the exact
//! energy, plus rigid-motion invariance of the energy itself.

use linlog::{ar_energy, ar_gradient, EnergyParams, Layout, Network, VertexWeightMode};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const PARAMETER_GRID: [(f64, f64); 5] =
    [(0.0, -1.0), (1.0, 0.0), (2.0, -1.0), (0.0, -2.0), (-0.5, -1.5)];

fn random_network(rng: &mut ChaCha8Rng, n: usize) -> Network {
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            if rng.random::<f64>() < 0.6 {
                edges.push((format!("v{u}"), format!("v{v}"), 0.25 + rng.random::<f64>()));
            }
        }
    }
    if edges.is_empty() {
        edges.push(("v0".to_string(), "v1".to_string(), 1.0));
    }
    let refs: Vec<(&str, &str, f64)> = edges
        .iter()
        .map(|(a, b, w)| (a.as_str(), b.as_str(), *w))
        .collect();
    Network::from_labeled_edges(&refs, VertexWeightMode::Degree).unwrap()
}

fn random_layout(rng: &mut ChaCha8Rng, n: usize, dim: usize) -> Layout {
    let coords = (0..n * dim)
        .map(|_| (rng.random::<f64>() - 0.5) * 4.0)
        .collect();
    Layout::new(dim, coords).unwrap()
}

/// Central finite differences of the exact energy, step h = 1e-6 * scale.
fn fd_gradient(net: &Network, layout: &Layout, params: &EnergyParams) -> Vec<Vec<f64>> {
    let scale = layout.bounding_diagonal().max(1.0);
    let h = 1e-6 * scale;
    let dim = layout.dimension();
    let mut grad = vec![vec![0.0; dim]; layout.vertex_count()];
    for v in 0..layout.vertex_count() {
        for k in 0..dim {
            let mut plus = layout.clone();
            plus.position_mut(v)[k] += h;
            let mut minus = layout.clone();
            minus.position_mut(v)[k] -= h;
            let e_plus = ar_energy(net, &plus, params).unwrap();
            let e_minus = ar_energy(net, &minus, params).unwrap();
            grad[v][k] = (e_plus - e_minus) / (2.0 * h);
        }
    }
    grad
}

fn norm(rows: &[Vec<f64>]) -> f64 {
    rows.iter()
        .flat_map(|r| r.iter())
        .map(|c| c * c)
        .sum::<f64>()
        .sqrt()
}

#[test]
fn analytic_gradient_matches_finite_differences() {
    let mut rng = ChaCha8Rng::seed_from_u64(1234);
    let mut checked = 0;
    while checked < 50 {
        let (a, r) = PARAMETER_GRID[checked % PARAMETER_GRID.len()];
        let params = EnergyParams::new(a, r).unwrap();
        let n = 3 + (rng.random::<u32>() % 6) as usize;
        let dim = if checked % 3 == 0 { 3 } else { 2 };
        let net = random_network(&mut rng, n);
        let layout = random_layout(&mut rng, net.vertex_count(), dim);
        let analytic = ar_gradient(&net, &layout, &params).unwrap();
        let numeric = fd_gradient(&net, &layout, &params);
        let diff: Vec<Vec<f64>> = analytic
            .iter()
            .zip(&numeric)
            .map(|(a, b)| a.iter().zip(b).map(|(x, y)| x - y).collect())
            .collect();
        let rel = norm(&diff) / norm(&analytic).max(1e-12);
        assert!(
            rel <= 1e-5,
            "({a},{r}) n={n} dim={dim}: relative gradient error {rel}"
        );
        checked += 1;
    }
}

#[test]
fn stationary_at_the_two_vertex_optimum() {
    let params = EnergyParams::linlog();
    let net = linlog::two_vertex_network(1.0, 1.0, 1.0).unwrap();
    let d0 = linlog::two_vertex_optimal_distance(&params, 1.0, 1.0, 1.0).unwrap();
    let layout = Layout::from_rows(vec![vec![0.0, 0.0], vec![d0, 0.0]]).unwrap();
    let grad = ar_gradient(&net, &layout, &params).unwrap();
    assert!(norm(&grad) <= 1e-9, "gradient norm {}", norm(&grad));
}

/// Apply a global rotation (Givens product) and translation.
fn rigid_motion(layout: &Layout, rng: &mut ChaCha8Rng) -> Layout {
    let dim = layout.dimension();
    let n = layout.vertex_count();
    let mut coords = layout.coords().to_vec();
    for i in 0..dim {
        for j in (i + 1)..dim {
            let angle = rng.random::<f64>() * std::f64::consts::TAU;
            let (sin, cos) = angle.sin_cos();
            for v in 0..n {
                let (x, y) = (coords[v * dim + i], coords[v * dim + j]);
                coords[v * dim + i] = cos * x - sin * y;
                coords[v * dim + j] = sin * x + cos * y;
            }
        }
    }
    let shift: Vec<f64> = (0..dim).map(|_| (rng.random::<f64>() - 0.5) * 10.0).collect();
    for v in 0..n {
        for k in 0..dim {
            coords[v * dim + k] += shift[k];
        }
    }
    Layout::new(dim, coords).unwrap()
}

#[test]
fn energy_is_rigid_motion_invariant() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for case in 0..20 {
        let (a, r) = PARAMETER_GRID[case % PARAMETER_GRID.len()];
        let params = EnergyParams::new(a, r).unwrap();
        let n = 4 + (case % 4);
        let net = random_network(&mut rng, n);
        let layout = random_layout(&mut rng, net.vertex_count(), 2 + case % 2);
        let moved = rigid_motion(&layout, &mut rng);
        let e0 = ar_energy(&net, &layout, &params).unwrap();
        let e1 = ar_energy(&net, &moved, &params).unwrap();
        let rel = (e0 - e1).abs() / e0.abs().max(1e-12);
        assert!(rel <= 1e-10, "case {case}: {e0} vs {e1} (rel {rel})");
    }
}

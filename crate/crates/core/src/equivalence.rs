//! Clusterings as restricted layouts: embedding a k-cluster partition at the
//! corners of a unit-edge regular (k-1)-simplex turns modularity into the
//! negative of a normalized (a,r)-energy,
//!
//! ```text
//!   sum over pairs u != v of
//!       (w_uv / w_VV) d^(a+1) - (w_u w_v / (w_V^2/2)) d^(r+1),
//! ```
//!
//! for every a > -1, r > -1: distances inside the simplex are 0 or 1, so the
//! exponents never matter and the sum telescopes to -modularity.

use crate::cluster::{modularity, Clustering};
use crate::energy::EnergyParams;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::layout::Layout;

/// Corners of a regular (k-1)-simplex with unit edge length, embedded in
/// R^(max(k-1,1)). Corner i is solved from its distances to corners 0..i.
pub fn simplex_corners(k: usize) -> Vec<Vec<f64>> {
    let dim = k.saturating_sub(1).max(1);
    let mut corners: Vec<Vec<f64>> = Vec::with_capacity(k);
    if k == 0 {
        return corners;
    }
    corners.push(vec![0.0; dim]);
    for i in 1..k {
        let mut p = vec![0.0; dim];
        // Unit distance to corner 0 gives |p|^2 = 1; unit distance to corner
        // m gives p . c_m = |c_m|^2 / 2, a triangular system because corner m
        // only uses the first m coordinates.
        for m in 1..i {
            let c_m = &corners[m];
            let norm_sq: f64 = c_m.iter().map(|x| x * x).sum();
            let partial: f64 = (0..m - 1).map(|j| p[j] * c_m[j]).sum();
            p[m - 1] = (norm_sq / 2.0 - partial) / c_m[m - 1];
        }
        let used: f64 = (0..i - 1).map(|j| p[j] * p[j]).sum();
        p[i - 1] = (1.0 - used).max(0.0).sqrt();
        corners.push(p);
    }
    corners
}

/// Embed a clustering as a layout: vertices of one cluster share a corner of
/// the unit-edge regular (k-1)-simplex.
pub fn clustering_to_simplex_layout(clustering: &Clustering) -> Layout {
    let corners = simplex_corners(clustering.cluster_count().max(1));
    let dim = corners.first().map_or(1, |c| c.len());
    let mut coords = Vec::with_capacity(clustering.vertex_count() * dim);
    for v in 0..clustering.vertex_count() {
        coords.extend_from_slice(&corners[clustering.cluster_of(v)]);
    }
    Layout::new(dim, coords).expect("simplex coordinates are finite")
}

fn normalized_pow(d: f64, exponent: f64, u: usize, v: usize, what: &str) -> Result<f64> {
    if d == 0.0 {
        if exponent > 0.0 {
            return Ok(0.0);
        }
        return Err(Error::CoincidentPositions {
            context: format!(
                "vertices {u} and {v}: {what} term d^{exponent} is undefined at distance 0"
            ),
        });
    }
    Ok(d.powf(exponent))
}

/// Normalized (a,r)-energy of a layout: attraction weighted by 1/w_VV with
/// integrand d^(a+1), repulsion by 1/(w_V^2/2) with integrand d^(r+1).
/// Coincident vertices are permitted whenever a, r > -1.
pub fn normalized_energy(net: &Network, layout: &Layout, a: f64, r: f64) -> Result<f64> {
    if layout.vertex_count() != net.vertex_count() {
        return Err(Error::invalid_parameter(format!(
            "layout has {} positions but the network has {} vertices",
            layout.vertex_count(),
            net.vertex_count()
        )));
    }
    if net.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let w_vv = net.total_edge_weight();
    if !(w_vv > 0.0) {
        return Err(Error::ZeroTotalEdgeWeight);
    }
    let w_v = net.total_vertex_weight();
    if !(w_v > 0.0) {
        return Err(Error::ZeroTotalVertexWeight);
    }
    let half_wv_sq = 0.5 * w_v * w_v;

    let mut energy = 0.0;
    for e in net.edges() {
        if e.u == e.v {
            continue;
        }
        let d = layout.distance(e.u, e.v);
        energy += e.weight / w_vv * normalized_pow(d, a + 1.0, e.u, e.v, "attraction")?;
    }
    let weights = net.vertex_weights();
    for u in 0..net.vertex_count() {
        if weights[u] == 0.0 {
            continue;
        }
        for v in (u + 1)..net.vertex_count() {
            if weights[v] == 0.0 {
                continue;
            }
            let d = layout.distance(u, v);
            energy -= weights[u] * weights[v] / half_wv_sq
                * normalized_pow(d, r + 1.0, u, v, "repulsion")?;
        }
    }
    if !energy.is_finite() {
        return Err(Error::NonFinite {
            context: "normalized energy".to_string(),
        });
    }
    Ok(energy)
}

/// Energy parameters whose exact (a,r)-energy equals the normalized energy:
/// the per-pair integrands of the exact model carry 1/(x+1) factors, so the
/// normalizations pick up the matching (x+1).
pub fn normalized_params(net: &Network, a: f64, r: f64) -> Result<EnergyParams> {
    if !(a > -1.0) || !(r > -1.0) {
        return Err(Error::invalid_parameter(
            "normalized energy requires a > -1 and r > -1",
        ));
    }
    let w_vv = net.total_edge_weight();
    let w_v = net.total_vertex_weight();
    if !(w_vv > 0.0) {
        return Err(Error::ZeroTotalEdgeWeight);
    }
    if !(w_v > 0.0) {
        return Err(Error::ZeroTotalVertexWeight);
    }
    EnergyParams::with_factors(a, r, (a + 1.0) / w_vv, (r + 1.0) / (0.5 * w_v * w_v))
}

/// Result of checking modularity = -normalized_energy(simplex embedding).
#[derive(Debug, Clone, Copy)]
pub struct EquivalenceCheck {
    pub residual: f64,
    pub pass: bool,
}

pub const EQUIVALENCE_TOLERANCE: f64 = 1e-10;

/// Verify that the modularity of a clustering equals the negative normalized
/// (a,r)-energy of its simplex embedding.
pub fn verify_equivalence(
    net: &Network,
    clustering: &Clustering,
    a: f64,
    r: f64,
) -> Result<EquivalenceCheck> {
    if !(a > -1.0) || !(r > -1.0) {
        return Err(Error::invalid_parameter(
            "the equivalence holds for a > -1 and r > -1",
        ));
    }
    let q = modularity(net, clustering)?;
    let layout = clustering_to_simplex_layout(clustering);
    let energy = normalized_energy(net, &layout, a, r)?;
    let residual = (q + energy).abs();
    Ok(EquivalenceCheck {
        residual,
        pass: residual <= EQUIVALENCE_TOLERANCE,
    })
}

/// Layout/clustering consistency diagnostics.
#[derive(Debug, Clone)]
pub struct ConsistencyReport {
    /// Mean inter-cluster distance over mean intra-cluster distance, vertex
    /// pairs weighted by w_u * w_v; absent when either mean is degenerate.
    pub separation_ratio: Option<f64>,
    /// Pairwise inter-cluster densities; entry [c][d] is absent when a
    /// density is undefined (zero set weight). Symmetric, diagonal absent.
    pub density_between: Vec<Vec<Option<f64>>>,
    /// Per-cluster internal density; absent for zero-weight clusters.
    pub density_within: Vec<Option<f64>>,
    pub modularity: f64,
    pub normalized_energy: f64,
}

/// Compute the consistency diagnostics of a layout against a clustering.
pub fn consistency_report(
    net: &Network,
    layout: &Layout,
    clustering: &Clustering,
    a: f64,
    r: f64,
) -> Result<ConsistencyReport> {
    if clustering.vertex_count() != net.vertex_count() {
        return Err(Error::InvalidClustering {
            reason: "clustering and network sizes differ".to_string(),
        });
    }
    let q = modularity(net, clustering)?;
    let energy = normalized_energy(net, layout, a, r)?;

    let n = net.vertex_count();
    let weights = net.vertex_weights();
    let (mut intra_sum, mut intra_weight) = (0.0, 0.0);
    let (mut inter_sum, mut inter_weight) = (0.0, 0.0);
    for u in 0..n {
        for v in (u + 1)..n {
            let w = weights[u] * weights[v];
            if w == 0.0 {
                continue;
            }
            let d = layout.distance(u, v);
            if clustering.cluster_of(u) == clustering.cluster_of(v) {
                intra_sum += w * d;
                intra_weight += w;
            } else {
                inter_sum += w * d;
                inter_weight += w;
            }
        }
    }
    let separation_ratio = if intra_weight > 0.0 && inter_weight > 0.0 {
        let intra_mean = intra_sum / intra_weight;
        let inter_mean = inter_sum / inter_weight;
        (intra_mean > 0.0).then(|| inter_mean / intra_mean)
    } else {
        None
    };

    let members = clustering.members();
    let k = members.len();
    let mut between = vec![vec![None; k]; k];
    for c in 0..k {
        for d in (c + 1)..k {
            let value = net.density_between(&members[c], &members[d]).ok();
            between[c][d] = value;
            between[d][c] = value;
        }
    }
    let within = members
        .iter()
        .map(|m| net.density_within(m).ok())
        .collect();

    Ok(ConsistencyReport {
        separation_ratio,
        density_between: between,
        density_within: within,
        modularity: q,
        normalized_energy: energy,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::VertexWeightMode;

    fn two_triangles() -> (Network, Clustering) {
        let net = Network::from_labeled_edges(
            &[
                ("a", "b", 1.0),
                ("a", "c", 1.0),
                ("b", "c", 1.0),
                ("c", "d", 1.0),
                ("d", "e", 1.0),
                ("d", "f", 1.0),
                ("e", "f", 1.0),
            ],
            VertexWeightMode::Degree,
        )
        .unwrap();
        let clustering = Clustering::new(vec![0, 0, 0, 1, 1, 1]).unwrap();
        (net, clustering)
    }

    #[test]
    fn simplex_corner_distances() {
        for k in [1usize, 2, 3, 4, 10, 50] {
            let corners = simplex_corners(k);
            assert_eq!(corners.len(), k);
            for i in 0..k {
                for j in (i + 1)..k {
                    let d = crate::energy::dist(&corners[i], &corners[j]);
                    assert!(
                        (d - 1.0).abs() <= 1e-12,
                        "k={k}: corners {i},{j} at distance {d}"
                    );
                }
            }
        }
    }

    #[test]
    fn simplex_layout_shapes() {
        let single = clustering_to_simplex_layout(&Clustering::single_cluster(3));
        assert_eq!(single.dimension(), 1);
        assert_eq!(single.distance(0, 2), 0.0);

        let pair = clustering_to_simplex_layout(&Clustering::new(vec![0, 1, 0]).unwrap());
        assert_eq!(pair.dimension(), 1);
        assert!((pair.distance(0, 1) - 1.0).abs() < 1e-15);
        assert_eq!(pair.distance(0, 2), 0.0);

        let tetra = clustering_to_simplex_layout(&Clustering::new(vec![0, 1, 2, 3]).unwrap());
        assert_eq!(tetra.dimension(), 3);
        for i in 0..4 {
            for j in (i + 1)..4 {
                assert!((tetra.distance(i, j) - 1.0).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn two_vertex_normalized_energy() {
        let net =
            Network::from_labeled_edges(&[("u", "v", 1.0)], VertexWeightMode::Degree).unwrap();
        let clustering = Clustering::singletons(2);
        let layout = clustering_to_simplex_layout(&clustering);
        for (a, r) in [(0.0, -0.5), (1.0, 0.0), (2.5, -0.9)] {
            let e = normalized_energy(&net, &layout, a, r).unwrap();
            assert!((e - 0.5).abs() < 1e-15, "energy {e} at ({a},{r})");
        }
        let q = modularity(&net, &clustering).unwrap();
        assert!((q + 0.5).abs() < 1e-15);
    }

    #[test]
    fn coincident_layout_energy_is_zero() {
        let (net, _) = two_triangles();
        let layout = clustering_to_simplex_layout(&Clustering::single_cluster(6));
        let e = normalized_energy(&net, &layout, 0.0, -0.5).unwrap();
        assert_eq!(e, 0.0);
        let q = modularity(&net, &Clustering::single_cluster(6)).unwrap();
        assert!(q.abs() < 1e-15);
    }

    #[test]
    fn out_of_domain_coincidence_errors() {
        let (net, _) = two_triangles();
        let layout = clustering_to_simplex_layout(&Clustering::single_cluster(6));
        assert!(matches!(
            normalized_energy(&net, &layout, 0.0, -1.0),
            Err(Error::CoincidentPositions { .. })
        ));
        assert!(matches!(
            normalized_energy(&net, &layout, -1.0, -0.5),
            Err(Error::CoincidentPositions { .. })
        ));
    }

    #[test]
    fn equivalence_on_the_triangle_fixture() {
        let (net, clustering) = two_triangles();
        for (a, r) in [(0.0, -0.5), (0.7, -0.3)] {
            let check = verify_equivalence(&net, &clustering, a, r).unwrap();
            assert!(check.pass, "residual {}", check.residual);
            assert!(check.residual <= 1e-12);
        }
        let trivial = verify_equivalence(&net, &Clustering::single_cluster(6), 0.5, 0.5).unwrap();
        assert_eq!(trivial.residual, 0.0);
    }

    #[test]
    fn equivalence_requires_the_open_domain() {
        let (net, clustering) = two_triangles();
        assert!(verify_equivalence(&net, &clustering, -1.0, 0.0).is_err());
        assert!(verify_equivalence(&net, &clustering, 0.0, -1.0).is_err());
    }

    #[test]
    fn normalized_params_reproduce_normalized_energy() {
        let (net, clustering) = two_triangles();
        // A layout with strictly positive distances: perturbed simplex.
        let base = clustering_to_simplex_layout(&clustering);
        let coords: Vec<f64> = base
            .coords()
            .iter()
            .enumerate()
            .map(|(i, &c)| c + 0.01 * (i as f64 + 1.0))
            .collect();
        let layout = Layout::new(base.dimension(), coords).unwrap();
        for (a, r) in [(0.0, -0.5), (1.5, 0.25)] {
            let params = normalized_params(&net, a, r).unwrap();
            let via_exact = crate::energy::ar_energy(&net, &layout, &params).unwrap();
            let direct = normalized_energy(&net, &layout, a, r).unwrap();
            assert!(
                (via_exact - direct).abs() <= 1e-12 * direct.abs().max(1.0),
                "{via_exact} vs {direct}"
            );
        }
    }

    #[test]
    fn report_on_simplex_embedding() {
        let (net, clustering) = two_triangles();
        let layout = clustering_to_simplex_layout(&clustering);
        let report = consistency_report(&net, &layout, &clustering, 0.0, -0.5).unwrap();
        // Intra distances are all zero: the ratio is degenerate.
        assert_eq!(report.separation_ratio, None);
        assert!((report.modularity - 5.0 / 14.0).abs() < 1e-12);
        assert!((report.normalized_energy + 5.0 / 14.0).abs() < 1e-12);
        assert!(report.density_between[0][1].is_some());
        assert_eq!(report.density_between[0][0], None);
        assert_eq!(report.density_within.len(), 2);
    }

    #[test]
    fn report_ratio_absent_for_singletons() {
        let net =
            Network::from_labeled_edges(&[("u", "v", 1.0)], VertexWeightMode::Degree).unwrap();
        let clustering = Clustering::singletons(2);
        let layout = clustering_to_simplex_layout(&clustering);
        let report = consistency_report(&net, &layout, &clustering, 0.0, -0.5).unwrap();
        assert_eq!(report.separation_ratio, None);
    }
}

//! Deterministic generators for benchmark and illustration networks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cluster::Clustering;
use crate::error::{Error, Result};
use crate::graph::Network;

/// Planted-partition specification: k blocks of equal size, independent edge
/// sampling with probability p_in inside blocks and p_out between them.
#[derive(Debug, Clone, Copy)]
pub struct PlantedPartitionSpec {
    pub cluster_count: usize,
    pub vertices_per_cluster: usize,
    pub p_in: f64,
    pub p_out: f64,
    pub seed: u64,
}

/// Generate a planted-partition network (unit vertex and edge weights, no
/// self-edges) together with its ground-truth clustering.
pub fn planted_partition(spec: &PlantedPartitionSpec) -> Result<(Network, Clustering)> {
    if spec.cluster_count == 0 || spec.vertices_per_cluster == 0 {
        return Err(Error::invalid_parameter(
            "cluster count and size must be at least 1",
        ));
    }
    if !(0.0..=1.0).contains(&spec.p_out)
        || !(0.0..=1.0).contains(&spec.p_in)
        || spec.p_out > spec.p_in
    {
        return Err(Error::invalid_parameter(
            "probabilities must satisfy 0 <= p_out <= p_in <= 1",
        ));
    }
    let n = spec.cluster_count * spec.vertices_per_cluster;
    let block = |v: usize| v / spec.vertices_per_cluster;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut edges = Vec::new();
    for u in 0..n {
        for v in (u + 1)..n {
            let p = if block(u) == block(v) {
                spec.p_in
            } else {
                spec.p_out
            };
            if rng.random::<f64>() < p {
                edges.push((u, v, 1.0));
            }
        }
    }
    let labels = (0..n).map(|v| format!("v{v}")).collect();
    let net = Network::from_parts(labels, vec![1.0; n], edges)?;
    let truth = Clustering::new((0..n).map(block).collect())?;
    Ok((net, truth))
}

/// The two triangle fixtures: (i) two unit triangles joined by one unit
/// edge, and (ii) the same triangles joined by a two-edge path through an
/// extra vertex of weight 0.
pub fn figure2_networks() -> [Network; 2] {
    let bridged = Network::from_parts(
        vec!["a", "b", "c", "d", "e", "f"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec![1.0; 6],
        vec![
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (3, 4, 1.0),
            (3, 5, 1.0),
            (4, 5, 1.0),
        ],
    )
    .expect("fixture construction cannot fail");

    let subdivided = Network::from_parts(
        vec!["a", "b", "c", "m", "d", "e", "f"]
            .into_iter()
            .map(String::from)
            .collect(),
        vec![1.0, 1.0, 1.0, 0.0, 1.0, 1.0, 1.0],
        vec![
            (0, 1, 1.0),
            (0, 2, 1.0),
            (1, 2, 1.0),
            (2, 3, 1.0),
            (3, 4, 1.0),
            (4, 5, 1.0),
            (4, 6, 1.0),
            (5, 6, 1.0),
        ],
    )
    .expect("fixture construction cannot fail");

    [bridged, subdivided]
}

/// Two vertices `u`, `v` with the given weights and edge; a zero edge weight
/// leaves the pair disconnected.
pub fn two_vertex_network(w_uv: f64, w_u: f64, w_v: f64) -> Result<Network> {
    Network::from_parts(
        vec!["u".to_string(), "v".to_string()],
        vec![w_u, w_v],
        vec![(0, 1, w_uv)],
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::modularity;

    #[test]
    fn planted_densities() {
        let (net, truth) = planted_partition(&PlantedPartitionSpec {
            cluster_count: 8,
            vertices_per_cluster: 16,
            p_in: 1.0,
            p_out: 0.2,
            seed: 20,
        })
        .unwrap();
        assert_eq!(net.vertex_count(), 128);
        // p_in = 1 realizes every intra-cluster pair.
        for members in truth.members() {
            let mut intra = 0;
            for (i, &u) in members.iter().enumerate() {
                for &v in &members[i + 1..] {
                    if net.edge_weight(u, v) > 0.0 {
                        intra += 1;
                    }
                }
            }
            assert_eq!(intra, members.len() * (members.len() - 1) / 2);
        }
        // Realized inter-cluster density concentrates near p_out.
        let members = truth.members();
        let mut total = 0.0;
        let mut pairs = 0;
        for c in 0..8 {
            for d in (c + 1)..8 {
                total += net.density_between(&members[c], &members[d]).unwrap();
                pairs += 1;
            }
        }
        let mean = total / pairs as f64;
        assert!((mean - 0.2).abs() < 0.03, "inter density {mean}");
    }

    #[test]
    fn extreme_probabilities() {
        let (net, _) = planted_partition(&PlantedPartitionSpec {
            cluster_count: 2,
            vertices_per_cluster: 4,
            p_in: 1.0,
            p_out: 0.0,
            seed: 0,
        })
        .unwrap();
        assert_eq!(net.edges().len(), 12);
        assert_eq!(net.connected_components().len(), 2);

        let (clique, _) = planted_partition(&PlantedPartitionSpec {
            cluster_count: 1,
            vertices_per_cluster: 5,
            p_in: 1.0,
            p_out: 0.0,
            seed: 0,
        })
        .unwrap();
        assert_eq!(clique.edges().len(), 10);
    }

    #[test]
    fn invalid_probabilities_rejected() {
        assert!(planted_partition(&PlantedPartitionSpec {
            cluster_count: 2,
            vertices_per_cluster: 2,
            p_in: 0.2,
            p_out: 0.5,
            seed: 0,
        })
        .is_err());
    }

    #[test]
    fn same_seed_same_network() {
        let spec = PlantedPartitionSpec {
            cluster_count: 3,
            vertices_per_cluster: 6,
            p_in: 0.8,
            p_out: 0.1,
            seed: 42,
        };
        let (a, _) = planted_partition(&spec).unwrap();
        let (b, _) = planted_partition(&spec).unwrap();
        assert_eq!(a.edges(), b.edges());
    }

    #[test]
    fn ground_truth_has_positive_modularity() {
        for seed in [1, 2, 3] {
            let (net, truth) = planted_partition(&PlantedPartitionSpec {
                cluster_count: 4,
                vertices_per_cluster: 8,
                p_in: 0.9,
                p_out: 0.1,
                seed,
            })
            .unwrap();
            assert!(modularity(&net, &truth).unwrap() > 0.0);
        }
    }

    #[test]
    fn figure2_shapes() {
        let [bridged, subdivided] = figure2_networks();
        assert_eq!(bridged.vertex_count(), 6);
        assert_eq!(bridged.edges().len(), 7);
        assert_eq!(subdivided.vertex_count(), 7);
        assert_eq!(subdivided.edges().len(), 8);
        let zero_weight: Vec<usize> = (0..subdivided.vertex_count())
            .filter(|&v| subdivided.vertex_weight(v) == 0.0)
            .collect();
        assert_eq!(zero_weight.len(), 1);
        assert_eq!(subdivided.label(zero_weight[0]), "m");
    }

    #[test]
    fn subdividing_the_bridge_reproduces_the_path_fixture() {
        let [bridged, subdivided] = figure2_networks();
        let c = bridged.index_of("c").unwrap();
        let d = bridged.index_of("d").unwrap();
        let result = bridged.subdivide_edge(c, d).unwrap();
        // Structural isomorphism via (vertex weight, sorted incident weights)
        // signatures plus matched adjacency.
        let signature = |net: &Network, v: usize| {
            let mut incident: Vec<u64> = net
                .neighbors(v)
                .iter()
                .map(|&(_, w)| w.to_bits())
                .collect();
            incident.sort_unstable();
            (net.vertex_weight(v).to_bits(), incident)
        };
        let mut left: Vec<_> = (0..result.vertex_count())
            .map(|v| signature(&result, v))
            .collect();
        let mut right: Vec<_> = (0..subdivided.vertex_count())
            .map(|v| signature(&subdivided, v))
            .collect();
        left.sort();
        right.sort();
        assert_eq!(left, right);
        assert_eq!(result.vertex_count(), subdivided.vertex_count());
        assert_eq!(result.edges().len(), subdivided.edges().len());
    }

    #[test]
    fn two_vertex_fixtures() {
        let dumbbell = two_vertex_network(1.0, 1.0, 1.0).unwrap();
        assert_eq!(dumbbell.edge_weight(0, 1), 1.0);

        let heavy = two_vertex_network(1.0, 2.0, 2.0).unwrap();
        assert_eq!(heavy.vertex_weight(0), 2.0);

        let split = two_vertex_network(0.0, 1.0, 1.0).unwrap();
        assert_eq!(split.edges().len(), 0);
        assert_eq!(split.connected_components().len(), 2);
    }
}

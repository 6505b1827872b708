//! Barnes-Hut tree for approximate repulsion. A node whose box is small
//! relative to its distance from the query point (width/distance < theta) is
//! treated as one body of its total weight at its weight-weighted centroid;
//! otherwise it is opened. theta = 0 therefore reproduces the exact pairwise
//! sum.

use crate::energy::{dist, phi};
use crate::error::{Error, Result};
use crate::layout::Layout;

const LEAF_CAPACITY: usize = 8;
const MAX_DEPTH: usize = 48;

#[derive(Debug)]
enum NodeKind {
    Leaf { vertices: Vec<usize> },
    Internal { children: Vec<usize> },
}

#[derive(Debug)]
struct Node {
    center: Vec<f64>,
    half_width: f64,
    /// Total repulsion weight of contained vertices.
    weight: f64,
    /// Weight-weighted centroid; box center when the total weight is zero.
    centroid: Vec<f64>,
    kind: NodeKind,
}

/// Space-partitioning tree over the positions of a layout (2^d children per
/// internal node). Read-only after construction.
#[derive(Debug)]
pub struct BhTree {
    dimension: usize,
    theta: f64,
    positions: Vec<f64>,
    weights: Vec<f64>,
    nodes: Vec<Node>,
}

impl BhTree {
    pub fn build(layout: &Layout, weights: &[f64], theta: f64) -> Result<BhTree> {
        if !(theta >= 0.0) || !theta.is_finite() {
            return Err(Error::invalid_parameter(
                "opening parameter theta must be a nonnegative real",
            ));
        }
        let n = layout.vertex_count();
        if weights.len() != n {
            return Err(Error::invalid_parameter(format!(
                "{} weights for {} positions",
                weights.len(),
                n
            )));
        }
        let dim = layout.dimension();
        let mut tree = BhTree {
            dimension: dim,
            theta,
            positions: layout.coords().to_vec(),
            weights: weights.to_vec(),
            nodes: Vec::new(),
        };
        if n == 0 {
            return Ok(tree);
        }

        let mut lo = vec![f64::INFINITY; dim];
        let mut hi = vec![f64::NEG_INFINITY; dim];
        for v in 0..n {
            let p = layout.position(v);
            for k in 0..dim {
                lo[k] = lo[k].min(p[k]);
                hi[k] = hi[k].max(p[k]);
            }
        }
        let mut half_width: f64 = 0.0;
        let mut center = vec![0.0; dim];
        for k in 0..dim {
            center[k] = 0.5 * (lo[k] + hi[k]);
            half_width = half_width.max(0.5 * (hi[k] - lo[k]));
        }
        // Slack so boundary points stay strictly inside.
        half_width = half_width.max(1e-12) * (1.0 + 1e-9);

        let all: Vec<usize> = (0..n).collect();
        tree.build_node(center, half_width, all, 0);
        Ok(tree)
    }

    fn build_node(
        &mut self,
        center: Vec<f64>,
        half_width: f64,
        vertices: Vec<usize>,
        depth: usize,
    ) -> usize {
        let dim = self.dimension;
        let mut weight = 0.0;
        let mut centroid = vec![0.0; dim];
        for &v in &vertices {
            let w = self.weights[v];
            weight += w;
            for k in 0..dim {
                centroid[k] += w * self.positions[v * dim + k];
            }
        }
        if weight > 0.0 {
            for c in &mut centroid {
                *c /= weight;
            }
        } else {
            centroid.copy_from_slice(&center);
        }

        let id = self.nodes.len();
        self.nodes.push(Node {
            center: center.clone(),
            half_width,
            weight,
            centroid,
            kind: NodeKind::Leaf { vertices: Vec::new() },
        });

        if vertices.len() <= LEAF_CAPACITY || depth >= MAX_DEPTH {
            self.nodes[id].kind = NodeKind::Leaf { vertices };
            return id;
        }

        let buckets_len = 1usize << dim;
        let mut buckets: Vec<Vec<usize>> = vec![Vec::new(); buckets_len];
        for &v in &vertices {
            let mut code = 0usize;
            for k in 0..dim {
                if self.positions[v * dim + k] > center[k] {
                    code |= 1 << k;
                }
            }
            buckets[code].push(v);
        }
        let mut children = Vec::new();
        for (code, bucket) in buckets.into_iter().enumerate() {
            if bucket.is_empty() {
                continue;
            }
            let mut child_center = center.clone();
            for k in 0..dim {
                let offset = half_width / 2.0;
                child_center[k] += if code & (1 << k) != 0 { offset } else { -offset };
            }
            let child = self.build_node(child_center, half_width / 2.0, bucket, depth + 1);
            children.push(child);
        }
        self.nodes[id].kind = NodeKind::Internal { children };
        id
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    fn contains(&self, node: &Node, point: &[f64]) -> bool {
        node.center
            .iter()
            .zip(point)
            .all(|(&c, &p)| (p - c).abs() <= node.half_width)
    }

    /// Accumulate the repulsion force exerted on the query vertex into `out`.
    /// The query vertex itself is skipped; nodes with zero total weight are
    /// skipped; internal nodes containing the query point are always opened.
    pub fn accumulate_repulsion(
        &self,
        query: usize,
        position: &[f64],
        query_weight: f64,
        r: f64,
        repulsion_factor: f64,
        out: &mut [f64],
    ) -> Result<()> {
        if self.nodes.is_empty() || query_weight == 0.0 {
            return Ok(());
        }
        let dim = self.dimension;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node.weight == 0.0 {
                continue;
            }
            match &node.kind {
                NodeKind::Leaf { vertices } => {
                    for &v in vertices {
                        if v == query || self.weights[v] == 0.0 {
                            continue;
                        }
                        let p = &self.positions[v * dim..(v + 1) * dim];
                        let d = dist(position, p);
                        if d <= 0.0 {
                            return Err(Error::CoincidentPositions {
                                context: format!("vertices {query} and {v} (repulsion)"),
                            });
                        }
                        let scale =
                            repulsion_factor * query_weight * self.weights[v] * d.powf(r) / d;
                        for k in 0..dim {
                            out[k] += scale * (position[k] - p[k]);
                        }
                    }
                }
                NodeKind::Internal { children } => {
                    let d = dist(position, &node.centroid);
                    let width = 2.0 * node.half_width;
                    if d > 0.0 && width < self.theta * d && !self.contains(node, position) {
                        let scale = repulsion_factor * query_weight * node.weight * d.powf(r) / d;
                        for k in 0..dim {
                            out[k] += scale * (position[k] - node.centroid[k]);
                        }
                    } else {
                        stack.extend_from_slice(children);
                    }
                }
            }
        }
        Ok(())
    }

    /// Approximate repulsion energy between the query vertex and all others:
    /// sum of w_q * W_node * phi_r(d) over accepted nodes and leaf vertices.
    pub fn repulsion_energy(
        &self,
        query: usize,
        position: &[f64],
        query_weight: f64,
        r: f64,
    ) -> Result<f64> {
        if self.nodes.is_empty() || query_weight == 0.0 {
            return Ok(0.0);
        }
        let dim = self.dimension;
        let mut energy = 0.0;
        let mut stack = vec![0usize];
        while let Some(id) = stack.pop() {
            let node = &self.nodes[id];
            if node.weight == 0.0 {
                continue;
            }
            match &node.kind {
                NodeKind::Leaf { vertices } => {
                    for &v in vertices {
                        if v == query || self.weights[v] == 0.0 {
                            continue;
                        }
                        let p = &self.positions[v * dim..(v + 1) * dim];
                        let d = dist(position, p);
                        if d <= 0.0 && r <= -1.0 {
                            return Err(Error::CoincidentPositions {
                                context: format!("vertices {query} and {v} (repulsion energy)"),
                            });
                        }
                        energy += query_weight * self.weights[v] * phi(r, d);
                    }
                }
                NodeKind::Internal { children } => {
                    let d = dist(position, &node.centroid);
                    let width = 2.0 * node.half_width;
                    if d > 0.0 && width < self.theta * d && !self.contains(node, position) {
                        energy += query_weight * node.weight * phi(r, d);
                    } else {
                        stack.extend_from_slice(children);
                    }
                }
            }
        }
        Ok(energy)
    }

    /// Recomputed node weights for invariant checks: (stored, recomputed).
    #[cfg(test)]
    fn node_weight_pairs(&self) -> Vec<(f64, f64)> {
        self.nodes
            .iter()
            .map(|node| {
                let recomputed = match &node.kind {
                    NodeKind::Leaf { vertices } => {
                        vertices.iter().map(|&v| self.weights[v]).sum()
                    }
                    NodeKind::Internal { children } => {
                        children.iter().map(|&c| self.nodes[c].weight).sum()
                    }
                };
                (node.weight, recomputed)
            })
            .collect()
    }
}

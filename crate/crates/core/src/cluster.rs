//! Generalized modularity and its maximization: greedy agglomeration from
//! singletons, multi-level refinement by single-vertex moves, and an
//! exhaustive small-instance oracle.
//!
//! The modularity of a clustering is
//!
//! ```text
//!   sum over clusters c of  w_cc / w_VV  -  (w_c^2 / 2) / (w_V^2 / 2)
//! ```
//!
//! where w_cc is the edge weight inside c (self-edges included), w_c the
//! vertex weight of c, and w_VV, w_V the network totals.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::graph::Network;

/// Partition of the vertex set into disjoint clusters with dense ids 0..k-1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Clustering {
    assignment: Vec<usize>,
    cluster_count: usize,
}

impl Clustering {
    /// Validates that every id below the maximum is used.
    pub fn new(assignment: Vec<usize>) -> Result<Clustering> {
        let k = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
        let mut used = vec![false; k];
        for &c in &assignment {
            used[c] = true;
        }
        if let Some(missing) = used.iter().position(|&u| !u) {
            return Err(Error::InvalidClustering {
                reason: format!("cluster id {missing} is unused"),
            });
        }
        Ok(Clustering {
            assignment,
            cluster_count: k,
        })
    }

    /// Compacts arbitrary ids to dense 0..k-1 in order of first appearance.
    pub fn from_labels(raw: &[usize]) -> Clustering {
        let mut remap: BTreeMap<usize, usize> = BTreeMap::new();
        let mut next = 0;
        let assignment = raw
            .iter()
            .map(|&c| {
                *remap.entry(c).or_insert_with(|| {
                    let id = next;
                    next += 1;
                    id
                })
            })
            .collect();
        Clustering {
            assignment,
            cluster_count: next,
        }
    }

    pub fn singletons(n: usize) -> Clustering {
        Clustering {
            assignment: (0..n).collect(),
            cluster_count: n,
        }
    }

    pub fn single_cluster(n: usize) -> Clustering {
        Clustering {
            assignment: vec![0; n],
            cluster_count: if n == 0 { 0 } else { 1 },
        }
    }

    pub fn vertex_count(&self) -> usize {
        self.assignment.len()
    }

    pub fn cluster_count(&self) -> usize {
        self.cluster_count
    }

    pub fn cluster_of(&self, v: usize) -> usize {
        self.assignment[v]
    }

    pub fn assignment(&self) -> &[usize] {
        &self.assignment
    }

    /// Member lists per cluster, each sorted ascending.
    pub fn members(&self) -> Vec<Vec<usize>> {
        let mut members = vec![Vec::new(); self.cluster_count];
        for (v, &c) in self.assignment.iter().enumerate() {
            members[c].push(v);
        }
        members
    }

    /// True when the two clusterings partition the vertices identically,
    /// ignoring cluster ids.
    pub fn same_partition(&self, other: &Clustering) -> bool {
        if self.assignment.len() != other.assignment.len()
            || self.cluster_count != other.cluster_count
        {
            return false;
        }
        let a = Clustering::from_labels(&self.assignment);
        let b = Clustering::from_labels(&other.assignment);
        a.assignment == b.assignment
    }
}

fn check_inputs(net: &Network, clustering: &Clustering) -> Result<(f64, f64)> {
    if net.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    if clustering.vertex_count() != net.vertex_count() {
        return Err(Error::InvalidClustering {
            reason: format!(
                "clustering covers {} vertices, network has {}",
                clustering.vertex_count(),
                net.vertex_count()
            ),
        });
    }
    let w_vv = net.total_edge_weight();
    if !(w_vv > 0.0) {
        return Err(Error::ZeroTotalEdgeWeight);
    }
    let w_v = net.total_vertex_weight();
    if !(w_v > 0.0) {
        return Err(Error::ZeroTotalVertexWeight);
    }
    Ok((w_vv, w_v))
}

/// Generalized modularity of a clustering.
pub fn modularity(net: &Network, clustering: &Clustering) -> Result<f64> {
    let (w_vv, w_v) = check_inputs(net, clustering)?;
    let k = clustering.cluster_count();
    let mut intra = vec![0.0; k];
    let mut weight = vec![0.0; k];
    for e in net.edges() {
        if clustering.cluster_of(e.u) == clustering.cluster_of(e.v) {
            intra[clustering.cluster_of(e.u)] += e.weight;
        }
    }
    for v in 0..net.vertex_count() {
        weight[clustering.cluster_of(v)] += net.vertex_weight(v);
    }
    Ok((0..k)
        .map(|c| intra[c] / w_vv - (weight[c] / w_v) * (weight[c] / w_v))
        .sum())
}

/// Modularity change of joining clusters c and d:
/// w_cd / w_VV - w_c * w_d / (w_V^2 / 2).
pub fn join_delta(net: &Network, clustering: &Clustering, c: usize, d: usize) -> Result<f64> {
    let (w_vv, w_v) = check_inputs(net, clustering)?;
    let k = clustering.cluster_count();
    for id in [c, d] {
        if id >= k {
            return Err(Error::ClusterOutOfRange { id, count: k });
        }
    }
    if c == d {
        return Err(Error::invalid_parameter("cannot join a cluster with itself"));
    }
    let mut between = 0.0;
    for e in net.edges() {
        let (pc, pd) = (clustering.cluster_of(e.u), clustering.cluster_of(e.v));
        if (pc == c && pd == d) || (pc == d && pd == c) {
            between += e.weight;
        }
    }
    let (mut w_c, mut w_d) = (0.0, 0.0);
    for v in 0..net.vertex_count() {
        let p = clustering.cluster_of(v);
        if p == c {
            w_c += net.vertex_weight(v);
        } else if p == d {
            w_d += net.vertex_weight(v);
        }
    }
    Ok(between / w_vv - w_c * w_d / (0.5 * w_v * w_v))
}

/// Modularity change of moving vertex v into `target`. `target` may be an
/// existing cluster id or `cluster_count()` for a fresh singleton.
pub fn move_delta(net: &Network, clustering: &Clustering, v: usize, target: usize) -> Result<f64> {
    let (w_vv, w_v) = check_inputs(net, clustering)?;
    if v >= net.vertex_count() {
        return Err(Error::VertexOutOfRange {
            index: v,
            count: net.vertex_count(),
        });
    }
    let k = clustering.cluster_count();
    if target > k {
        return Err(Error::ClusterOutOfRange {
            id: target,
            count: k,
        });
    }
    let current = clustering.cluster_of(v);
    if target == current {
        return Ok(0.0);
    }
    let mut to_target = 0.0;
    let mut to_current = 0.0;
    for &(nb, w) in net.neighbors(v) {
        let p = clustering.cluster_of(nb);
        if p == target {
            to_target += w;
        } else if p == current {
            to_current += w;
        }
    }
    let (mut w_cur, mut w_tgt) = (0.0, 0.0);
    for u in 0..net.vertex_count() {
        let p = clustering.cluster_of(u);
        if p == current {
            w_cur += net.vertex_weight(u);
        } else if p == target {
            w_tgt += net.vertex_weight(u);
        }
    }
    let w_v_own = net.vertex_weight(v);
    Ok((to_target - to_current) / w_vv
        - 2.0 * w_v_own * (w_tgt - w_cur + w_v_own) / (w_v * w_v))
}

/// Coarse network with one vertex per cluster, plus the inducing mapping from
/// the finer vertex set. Self-edges of the coarse vertices hold the
/// intra-cluster weight, so modularity is preserved under the singleton
/// clustering of the coarse network.
#[derive(Debug, Clone)]
pub struct ClusterGraph {
    pub network: Network,
    /// Finer-level vertex -> coarse vertex (= cluster id).
    pub mapping: Vec<usize>,
}

/// Collapse a network under a clustering.
pub fn cluster_graph(net: &Network, clustering: &Clustering) -> Result<ClusterGraph> {
    if clustering.vertex_count() != net.vertex_count() {
        return Err(Error::InvalidClustering {
            reason: "clustering and network sizes differ".to_string(),
        });
    }
    let k = clustering.cluster_count();
    let members = clustering.members();
    let labels = members
        .iter()
        .map(|m| net.label(m[0]).to_string())
        .collect();
    let mut weights = vec![0.0; k];
    for v in 0..net.vertex_count() {
        weights[clustering.cluster_of(v)] += net.vertex_weight(v);
    }
    let edges = net
        .edges()
        .iter()
        .map(|e| {
            (
                clustering.cluster_of(e.u),
                clustering.cluster_of(e.v),
                e.weight,
            )
        })
        .collect();
    Ok(ClusterGraph {
        network: Network::from_parts(labels, weights, edges)?,
        mapping: clustering.assignment().to_vec(),
    })
}

/// Coarsening levels from fine to coarse. Level 0 maps the original vertices;
/// level i maps the vertices of level i-1's network.
#[derive(Debug, Clone)]
pub struct MergeHierarchy {
    pub levels: Vec<ClusterGraph>,
}

impl MergeHierarchy {
    /// Compose the level mappings into an assignment over the original
    /// vertices.
    pub fn final_clustering(&self) -> Clustering {
        let mut assignment: Vec<usize> = match self.levels.first() {
            Some(level) => level.mapping.clone(),
            None => return Clustering::singletons(0),
        };
        for level in &self.levels[1..] {
            for a in &mut assignment {
                *a = level.mapping[*a];
            }
        }
        Clustering::from_labels(&assignment)
    }
}

/// Working state for greedy agglomeration: cluster adjacency kept in ordered
/// maps so scans are deterministic.
struct Agglomeration {
    adjacency: Vec<BTreeMap<usize, f64>>,
    weight: Vec<f64>,
    alive: Vec<bool>,
    alive_count: usize,
    w_vv: f64,
    half_wv_sq: f64,
}

impl Agglomeration {
    fn from_network(net: &Network) -> Self {
        let n = net.vertex_count();
        let mut adjacency = vec![BTreeMap::new(); n];
        for e in net.edges() {
            if e.u != e.v {
                *adjacency[e.u].entry(e.v).or_insert(0.0) += e.weight;
                *adjacency[e.v].entry(e.u).or_insert(0.0) += e.weight;
            }
        }
        let w_v = net.total_vertex_weight();
        Agglomeration {
            adjacency,
            weight: net.vertex_weights().to_vec(),
            alive: vec![true; n],
            alive_count: n,
            w_vv: net.total_edge_weight(),
            half_wv_sq: 0.5 * w_v * w_v,
        }
    }

    /// Best positive join among connected cluster pairs; ties resolved by the
    /// ascending (c, d) scan order.
    fn best_join(&self) -> Option<(usize, usize, f64)> {
        let mut best: Option<(usize, usize, f64)> = None;
        for c in 0..self.adjacency.len() {
            if !self.alive[c] {
                continue;
            }
            for (&d, &w_cd) in self.adjacency[c].range(c + 1..) {
                let delta = w_cd / self.w_vv - self.weight[c] * self.weight[d] / self.half_wv_sq;
                if best.map_or(true, |(_, _, b)| delta > b) {
                    best = Some((c, d, delta));
                }
            }
        }
        best.filter(|&(_, _, delta)| delta > 0.0)
    }

    fn merge(&mut self, c: usize, d: usize) {
        let absorbed: Vec<(usize, f64)> =
            std::mem::take(&mut self.adjacency[d]).into_iter().collect();
        for (x, w) in absorbed {
            self.adjacency[x].remove(&d);
            if x == c {
                continue;
            }
            *self.adjacency[c].entry(x).or_insert(0.0) += w;
            *self.adjacency[x].entry(c).or_insert(0.0) += w;
        }
        self.weight[c] += self.weight[d];
        self.weight[d] = 0.0;
        self.alive[d] = false;
        self.alive_count -= 1;
    }
}

/// Greedy agglomeration from singletons: repeatedly join the cluster pair
/// with the largest positive modularity gain. A hierarchy level is snapshot
/// whenever the cluster count halves.
pub fn agglomerate(net: &Network) -> Result<(MergeHierarchy, Clustering)> {
    check_inputs(net, &Clustering::singletons(net.vertex_count()))?;
    let n = net.vertex_count();
    let mut state = Agglomeration::from_network(net);
    // parent[v] follows merges so current assignments are recoverable.
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut Vec<usize>, mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }

    let mut levels: Vec<ClusterGraph> = Vec::new();
    // Assignment of the previous snapshot's coarse vertices (initially the
    // original vertices) to current representatives.
    let mut level_base: Vec<usize> = (0..n).collect();
    let mut level_net = net.clone();
    let mut snapshot_threshold = n;

    while let Some((c, d, _)) = state.best_join() {
        parent[d] = c;
        state.merge(c, d);
        if state.alive_count * 2 <= snapshot_threshold {
            let raw: Vec<usize> = level_base
                .iter()
                .map(|&rep| find(&mut parent, rep))
                .collect();
            let clustering = Clustering::from_labels(&raw);
            let level = cluster_graph(&level_net, &clustering)?;
            // Representative state id of each compact cluster, so the next
            // snapshot can resolve current assignments through the forest.
            let mut rep_of = vec![usize::MAX; clustering.cluster_count()];
            for (i, &r) in raw.iter().enumerate() {
                let compact = clustering.cluster_of(i);
                if rep_of[compact] == usize::MAX {
                    rep_of[compact] = r;
                }
            }
            level_base = rep_of;
            level_net = level.network.clone();
            levels.push(level);
            snapshot_threshold = state.alive_count;
        }
    }

    // Capture merges made since the last snapshot; an identity level keeps
    // the hierarchy nonempty when nothing merged at all.
    if levels.is_empty() || level_base.len() != state.alive_count {
        let raw: Vec<usize> = level_base
            .iter()
            .map(|&rep| find(&mut parent, rep))
            .collect();
        let clustering = Clustering::from_labels(&raw);
        levels.push(cluster_graph(&level_net, &clustering)?);
    }

    let hierarchy = MergeHierarchy { levels };
    let clustering = hierarchy.final_clustering();
    Ok((hierarchy, clustering))
}

const MOVE_EPS: f64 = 1e-12;
const MAX_SWEEPS: usize = 20;

/// Vertex-move sweeps over one network: each vertex moves to the cluster
/// (including a fresh singleton) with the largest positive gain; ties keep
/// the current cluster, then prefer the smallest id. Stops when a full sweep
/// makes no move or after 20 sweeps.
fn local_moving(net: &Network, assignment: &mut Vec<usize>) {
    let n = net.vertex_count();
    let w_vv = net.total_edge_weight();
    let w_v_total = net.total_vertex_weight();
    if !(w_vv > 0.0) || !(w_v_total > 0.0) {
        return;
    }
    let mut k = assignment.iter().map(|&c| c + 1).max().unwrap_or(0);
    let mut weight = vec![0.0; k];
    for v in 0..n {
        weight[assignment[v]] += net.vertex_weight(v);
    }
    // Edge weight from the current vertex into each cluster; reset via the
    // touched list after every vertex.
    let mut link = vec![0.0; k];

    for _ in 0..MAX_SWEEPS {
        let mut moved = false;
        for v in 0..n {
            let current = assignment[v];
            let w_own = net.vertex_weight(v);
            let mut touched = Vec::new();
            for &(nb, w) in net.neighbors(v) {
                let p = assignment[nb];
                if link[p] == 0.0 {
                    touched.push(p);
                }
                link[p] += w;
            }
            let to_current = link[current];
            let mut best_target = current;
            let mut best_delta = 0.0;
            // Candidates: every cluster plus the fresh singleton (id k).
            for target in 0..=k {
                if target == current {
                    continue;
                }
                let (w_tgt, to_target) = if target == k {
                    (0.0, 0.0)
                } else {
                    (weight[target], link[target])
                };
                let delta = (to_target - to_current) / w_vv
                    - 2.0 * w_own * (w_tgt - weight[current] + w_own)
                        / (w_v_total * w_v_total);
                if delta > best_delta {
                    best_delta = delta;
                    best_target = target;
                }
            }
            for p in touched {
                link[p] = 0.0;
            }
            if best_target != current && best_delta > MOVE_EPS {
                if best_target == k {
                    weight.push(0.0);
                    link.push(0.0);
                    k += 1;
                }
                weight[current] -= w_own;
                weight[best_target] += w_own;
                assignment[v] = best_target;
                moved = true;
            }
        }
        if !moved {
            break;
        }
    }
}

/// Multi-level refinement: from the coarsest level down, project the current
/// assignment and run vertex-move sweeps on each level's network.
pub fn refine(net: &Network, hierarchy: &MergeHierarchy) -> Result<Clustering> {
    if hierarchy.levels.is_empty() {
        let mut assignment: Vec<usize> = (0..net.vertex_count()).collect();
        local_moving(net, &mut assignment);
        return Ok(Clustering::from_labels(&assignment));
    }
    let top = hierarchy.levels.last().unwrap();
    let mut assignment: Vec<usize> = (0..top.network.vertex_count()).collect();
    local_moving(&top.network, &mut assignment);

    for i in (0..hierarchy.levels.len()).rev() {
        let level = &hierarchy.levels[i];
        let finer: &Network = if i == 0 {
            net
        } else {
            &hierarchy.levels[i - 1].network
        };
        let mut projected: Vec<usize> =
            level.mapping.iter().map(|&c| assignment[c]).collect();
        local_moving(finer, &mut projected);
        assignment = projected;
    }
    Ok(Clustering::from_labels(&assignment))
}

/// Agglomeration followed by multi-level refinement. The heuristic is fully
/// deterministic; the seed is accepted for interface stability and reserved
/// for randomized sweep orders.
pub fn maximize_modularity(net: &Network, _seed: u64) -> Result<(Clustering, f64)> {
    let (hierarchy, _) = agglomerate(net)?;
    let clustering = refine(net, &hierarchy)?;
    let q = modularity(net, &clustering)?;
    Ok((clustering, q))
}

/// Exhaustively enumerate all set partitions (restricted-growth strings, in
/// lexicographic order) and return a modularity maximizer. The first
/// maximizer found wins, which makes the tie-break the lexicographically
/// smallest string.
pub fn exhaustive_best_clustering(net: &Network, max_n: usize) -> Result<(Clustering, f64)> {
    let n = net.vertex_count();
    if n > max_n {
        return Err(Error::TooLarge { n, max: max_n });
    }
    check_inputs(net, &Clustering::singletons(n))?;

    let w_vv = net.total_edge_weight();
    let w_v = net.total_vertex_weight();
    let mut rgs = vec![0usize; n];
    let mut best: Option<(Vec<usize>, f64)> = None;
    loop {
        let k = rgs.iter().max().map_or(0, |&m| m + 1);
        let mut intra = vec![0.0; k];
        let mut weight = vec![0.0; k];
        for e in net.edges() {
            if rgs[e.u] == rgs[e.v] {
                intra[rgs[e.u]] += e.weight;
            }
        }
        for v in 0..n {
            weight[rgs[v]] += net.vertex_weight(v);
        }
        let q: f64 = (0..k)
            .map(|c| intra[c] / w_vv - (weight[c] / w_v) * (weight[c] / w_v))
            .sum();
        if best.as_ref().map_or(true, |&(_, bq)| q > bq) {
            best = Some((rgs.clone(), q));
        }

        // Advance to the next restricted-growth string.
        let mut i = n;
        loop {
            if i <= 1 {
                let (rgs, q) = best.unwrap();
                return Ok((Clustering::from_labels(&rgs), q));
            }
            i -= 1;
            let prefix_max = rgs[..i].iter().copied().max().unwrap();
            if rgs[i] <= prefix_max {
                rgs[i] += 1;
                for item in rgs.iter_mut().skip(i + 1) {
                    *item = 0;
                }
                break;
            }
        }
    }
}

/// Repulsion exponent selection: -2 for strongly modular networks
/// (modularity above 0.5), -1 for weakly modular ones (below 0.3), -1.5 in
/// between. The attraction exponent is fixed at 0 in this mode.
pub fn auto_repulsion_exponent(net: &Network) -> Result<f64> {
    let (_, q) = maximize_modularity(net, 0)?;
    Ok(if q > 0.5 {
        -2.0
    } else if q < 0.3 {
        -1.0
    } else {
        -1.5
    })
}

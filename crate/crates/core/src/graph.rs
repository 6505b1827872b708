//! Weighted-network data model: nonnegative vertex weights, symmetric
//! nonnegative edge weights (self-edges allowed), density analytics and
//! structural transformations.

use std::collections::HashMap;

use crate::error::{Error, Result};

/// An undirected edge between canonical vertex indices `u <= v`.
/// `u == v` is a self-edge.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Edge {
    pub u: usize,
    pub v: usize,
    pub weight: f64,
}

/// How vertex weights are assigned when building a network from an edge list.
#[derive(Debug, Clone, PartialEq)]
pub enum VertexWeightMode {
    /// Every vertex gets weight 1.
    Unit,
    /// Every vertex gets its degree: total incident edge weight, self-edges
    /// counted twice.
    Degree,
    /// Weights looked up by label. Labels that appear in the list but not in
    /// the edge list become isolated vertices; edge-list labels missing from
    /// the list are an error.
    Explicit(Vec<(String, f64)>),
}

/// Immutable weighted network.
///
/// Edge weights are keyed on unordered pairs and therefore symmetric by
/// construction; absent pairs have weight 0. Zero-weight edges are not
/// stored. Totals are cached at construction.
#[derive(Debug, Clone)]
pub struct Network {
    labels: Vec<String>,
    vertex_weights: Vec<f64>,
    edges: Vec<Edge>,
    /// Per vertex: (neighbor, weight) for neighbors != self, sorted by index.
    adjacency: Vec<Vec<(usize, f64)>>,
    /// Per vertex: self-edge weight w_{v,v}.
    self_loops: Vec<f64>,
    label_index: HashMap<String, usize>,
    total_vertex_weight: f64,
    total_edge_weight: f64,
}

impl Network {
    /// Build a network from vertex data and an edge list given as index
    /// triples. Duplicate pairs are summed, zero-weight entries dropped.
    pub fn from_parts(
        labels: Vec<String>,
        vertex_weights: Vec<f64>,
        edge_list: Vec<(usize, usize, f64)>,
    ) -> Result<Network> {
        let n = labels.len();
        if vertex_weights.len() != n {
            return Err(Error::invalid_parameter(format!(
                "{} labels but {} vertex weights",
                n,
                vertex_weights.len()
            )));
        }
        let mut label_index = HashMap::with_capacity(n);
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel {
                    context: format!("vertex {i}"),
                });
            }
            if label_index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel {
                    label: label.clone(),
                });
            }
        }
        for (i, &w) in vertex_weights.iter().enumerate() {
            if !(w >= 0.0) {
                return Err(Error::NegativeWeight {
                    weight: w,
                    context: format!("vertex `{}`", labels[i]),
                });
            }
        }

        let mut merged: HashMap<(usize, usize), f64> = HashMap::new();
        for (a, b, w) in edge_list {
            for idx in [a, b] {
                if idx >= n {
                    return Err(Error::VertexOutOfRange { index: idx, count: n });
                }
            }
            if !(w >= 0.0) {
                return Err(Error::NegativeWeight {
                    weight: w,
                    context: format!("edge `{}` -- `{}`", labels[a], labels[b]),
                });
            }
            let key = (a.min(b), a.max(b));
            *merged.entry(key).or_insert(0.0) += w;
        }
        let mut edges: Vec<Edge> = merged
            .into_iter()
            .filter(|&(_, w)| w > 0.0)
            .map(|((u, v), weight)| Edge { u, v, weight })
            .collect();
        edges.sort_by_key(|e| (e.u, e.v));

        let mut adjacency = vec![Vec::new(); n];
        let mut self_loops = vec![0.0; n];
        let mut total_edge_weight = 0.0;
        for e in &edges {
            total_edge_weight += e.weight;
            if e.u == e.v {
                self_loops[e.u] = e.weight;
            } else {
                adjacency[e.u].push((e.v, e.weight));
                adjacency[e.v].push((e.u, e.weight));
            }
        }
        for list in &mut adjacency {
            list.sort_by_key(|&(v, _)| v);
        }
        let total_vertex_weight = vertex_weights.iter().sum();

        Ok(Network {
            labels,
            vertex_weights,
            edges,
            adjacency,
            self_loops,
            label_index,
            total_vertex_weight,
            total_edge_weight,
        })
    }

    /// Build a network from labeled edges. Vertices are numbered in order of
    /// first appearance; duplicate pairs are summed.
    pub fn from_labeled_edges<S: AsRef<str>>(
        edges: &[(S, S, f64)],
        mode: VertexWeightMode,
    ) -> Result<Network> {
        let mut labels: Vec<String> = Vec::new();
        let mut index: HashMap<String, usize> = HashMap::new();
        let mut edge_list = Vec::with_capacity(edges.len());
        for (a, b, w) in edges {
            let mut id_of = |s: &str| -> Result<usize> {
                if s.is_empty() {
                    return Err(Error::EmptyLabel {
                        context: "edge list".to_string(),
                    });
                }
                Ok(*index.entry(s.to_string()).or_insert_with(|| {
                    labels.push(s.to_string());
                    labels.len() - 1
                }))
            };
            let u = id_of(a.as_ref())?;
            let v = id_of(b.as_ref())?;
            edge_list.push((u, v, *w));
        }

        let vertex_weights = match mode {
            VertexWeightMode::Unit => vec![1.0; labels.len()],
            VertexWeightMode::Degree => {
                // Resolved after construction; placeholder here.
                vec![0.0; labels.len()]
            }
            VertexWeightMode::Explicit(ref list) => {
                let mut by_label: HashMap<&str, f64> = HashMap::new();
                for (label, w) in list {
                    if by_label.insert(label.as_str(), *w).is_some() {
                        return Err(Error::DuplicateLabel {
                            label: label.clone(),
                        });
                    }
                }
                // Labels only present in the weight list become isolated
                // vertices, in list order.
                for (label, _) in list {
                    if !index.contains_key(label) {
                        index.insert(label.clone(), labels.len());
                        labels.push(label.clone());
                    }
                }
                let mut weights = Vec::with_capacity(labels.len());
                for label in &labels {
                    match by_label.get(label.as_str()) {
                        Some(&w) => weights.push(w),
                        None => {
                            return Err(Error::MissingVertexWeight {
                                label: label.clone(),
                            })
                        }
                    }
                }
                weights
            }
        };
        let degree_mode = matches!(mode, VertexWeightMode::Degree);
        let mut net = Network::from_parts(labels, vertex_weights, edge_list)?;
        if degree_mode {
            net.vertex_weights = (0..net.vertex_count()).map(|v| net.degree(v)).collect();
            net.total_vertex_weight = net.vertex_weights.iter().sum();
        }
        Ok(net)
    }

    pub fn vertex_count(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn label(&self, v: usize) -> &str {
        &self.labels[v]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.label_index.get(label).copied()
    }

    pub fn vertex_weight(&self, v: usize) -> f64 {
        self.vertex_weights[v]
    }

    pub fn vertex_weights(&self) -> &[f64] {
        &self.vertex_weights
    }

    /// Edge weight of the unordered pair {u, v}; 0 when absent.
    pub fn edge_weight(&self, u: usize, v: usize) -> f64 {
        if u == v {
            return self.self_loops[u];
        }
        self.adjacency[u]
            .binary_search_by_key(&v, |&(w, _)| w)
            .map(|i| self.adjacency[u][i].1)
            .unwrap_or(0.0)
    }

    pub fn self_loop(&self, v: usize) -> f64 {
        self.self_loops[v]
    }

    /// Neighbors of `v` excluding `v` itself, sorted by index.
    pub fn neighbors(&self, v: usize) -> &[(usize, f64)] {
        &self.adjacency[v]
    }

    /// All stored edges (weight > 0), canonical `u <= v`, sorted.
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// w_V: sum of vertex weights.
    pub fn total_vertex_weight(&self) -> f64 {
        self.total_vertex_weight
    }

    /// w_{V,V}: sum of edge weights over unordered pairs, self-edges included.
    pub fn total_edge_weight(&self) -> f64 {
        self.total_edge_weight
    }

    /// Total incident edge weight of `v`, the self-edge counted twice.
    pub fn degree(&self, v: usize) -> f64 {
        let incident: f64 = self.adjacency[v].iter().map(|&(_, w)| w).sum();
        incident + 2.0 * self.self_loops[v]
    }

    fn check_vertex_set(&self, set: &[usize]) -> Result<()> {
        for &v in set {
            if v >= self.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    index: v,
                    count: self.vertex_count(),
                });
            }
        }
        Ok(())
    }

    fn set_weight(&self, set: &[usize]) -> f64 {
        set.iter().map(|&v| self.vertex_weights[v]).sum()
    }

    /// Density between two disjoint vertex sets: w_{T,U} / (w_T * w_U).
    pub fn density_between(&self, t: &[usize], u: &[usize]) -> Result<f64> {
        self.check_vertex_set(t)?;
        self.check_vertex_set(u)?;
        let mut membership = vec![0u8; self.vertex_count()];
        for &v in t {
            membership[v] = 1;
        }
        for &v in u {
            if membership[v] == 1 {
                return Err(Error::OverlappingSets { vertex: v });
            }
            membership[v] = 2;
        }
        let (w_t, w_u) = (self.set_weight(t), self.set_weight(u));
        if w_t <= 0.0 || w_u <= 0.0 {
            return Err(Error::ZeroSetWeight);
        }
        let mut between = 0.0;
        for &v in t {
            for &(nb, w) in &self.adjacency[v] {
                if membership[nb] == 2 {
                    between += w;
                }
            }
        }
        Ok(between / (w_t * w_u))
    }

    /// Density within a vertex set: w_{U,U} / (w_U^2 / 2). Self-edges count
    /// fully toward w_{U,U}.
    pub fn density_within(&self, set: &[usize]) -> Result<f64> {
        self.check_vertex_set(set)?;
        let w_u = self.set_weight(set);
        if w_u <= 0.0 {
            return Err(Error::ZeroSetWeight);
        }
        let mut in_set = vec![false; self.vertex_count()];
        for &v in set {
            in_set[v] = true;
        }
        let mut internal = 0.0;
        for &v in set {
            internal += self.self_loops[v];
            for &(nb, w) in &self.adjacency[v] {
                if in_set[nb] && nb > v {
                    internal += w;
                }
            }
        }
        Ok(internal / (w_u * w_u / 2.0))
    }

    /// Replace the edge {u, v} by a two-edge path through a fresh vertex of
    /// weight 0, both new edges carrying the original edge weight.
    pub fn subdivide_edge(&self, u: usize, v: usize) -> Result<Network> {
        self.check_vertex_set(&[u, v])?;
        if u == v {
            return Err(Error::invalid_parameter(
                "cannot subdivide a self-edge".to_string(),
            ));
        }
        let w_uv = self.edge_weight(u, v);
        if w_uv <= 0.0 {
            return Err(Error::NoSuchEdge { u, v });
        }
        let mut labels = self.labels.clone();
        labels.push(self.fresh_label(&format!("{}~{}", self.labels[u], self.labels[v])));
        let mut vertex_weights = self.vertex_weights.clone();
        vertex_weights.push(0.0);
        let t = labels.len() - 1;
        let mut edge_list: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .filter(|e| !(e.u == u.min(v) && e.v == u.max(v)))
            .map(|e| (e.u, e.v, e.weight))
            .collect();
        edge_list.push((u, t, w_uv));
        edge_list.push((t, v, w_uv));
        Network::from_parts(labels, vertex_weights, edge_list)
    }

    /// Disjoint union of the network with a copy of itself. Copied labels get
    /// a `'` suffix (repeated until unique).
    pub fn double(&self) -> Network {
        let n = self.vertex_count();
        let mut labels = self.labels.clone();
        for label in &self.labels {
            labels.push(Self::fresh_label_among(&labels, &format!("{label}'")));
        }
        let mut vertex_weights = self.vertex_weights.clone();
        vertex_weights.extend_from_slice(&self.vertex_weights);
        let mut edge_list: Vec<(usize, usize, f64)> = self
            .edges
            .iter()
            .map(|e| (e.u, e.v, e.weight))
            .collect();
        edge_list.extend(self.edges.iter().map(|e| (e.u + n, e.v + n, e.weight)));
        Network::from_parts(labels, vertex_weights, edge_list)
            .expect("doubling a valid network cannot fail")
    }

    /// Maximal sets connected by edges of nonzero weight, each sorted, the
    /// list ordered by smallest contained index.
    pub fn connected_components(&self) -> Vec<Vec<usize>> {
        let n = self.vertex_count();
        let mut component = vec![usize::MAX; n];
        let mut components = Vec::new();
        for start in 0..n {
            if component[start] != usize::MAX {
                continue;
            }
            let id = components.len();
            let mut members = vec![start];
            component[start] = id;
            let mut queue = vec![start];
            while let Some(v) = queue.pop() {
                for &(nb, _) in &self.adjacency[v] {
                    if component[nb] == usize::MAX {
                        component[nb] = id;
                        members.push(nb);
                        queue.push(nb);
                    }
                }
            }
            members.sort_unstable();
            components.push(members);
        }
        components
    }

    /// Restriction of the network to `vertices` (order preserved); indices in
    /// the result follow the order of the slice.
    pub fn subnetwork(&self, vertices: &[usize]) -> Result<Network> {
        self.check_vertex_set(vertices)?;
        let mut new_index = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in vertices.iter().enumerate() {
            if new_index[v] != usize::MAX {
                return Err(Error::invalid_parameter(format!(
                    "vertex {v} listed twice in subnetwork"
                )));
            }
            new_index[v] = i;
        }
        let labels = vertices.iter().map(|&v| self.labels[v].clone()).collect();
        let weights = vertices.iter().map(|&v| self.vertex_weights[v]).collect();
        let edge_list = self
            .edges
            .iter()
            .filter(|e| new_index[e.u] != usize::MAX && new_index[e.v] != usize::MAX)
            .map(|e| (new_index[e.u], new_index[e.v], e.weight))
            .collect();
        Network::from_parts(labels, weights, edge_list)
    }

    fn fresh_label(&self, base: &str) -> String {
        Self::fresh_label_among(&self.labels, base)
    }

    fn fresh_label_among(existing: &[String], base: &str) -> String {
        let mut candidate = base.to_string();
        while existing.iter().any(|l| l == &candidate) {
            candidate.push('\'');
        }
        candidate
    }
}

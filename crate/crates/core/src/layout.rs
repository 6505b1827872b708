//! Iterative force-directed minimization of (a,r)-energy.
//!
//! Each iteration is one synchronous sweep: all net forces are computed
//! against the frozen current positions, then every vertex moves by
//! step*force with the displacement capped at the current step length. The
//! step length adapts: accepted moves (energy decreased) grow it by 1.1,
//! otherwise it halves and the move is retried once against the same forces;
//! a move that still does not decrease the energy is rejected. Convergence is
//! displacement-based. Connected components are laid out independently and
//! packed on a grid.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::bhtree::BhTree;
use crate::energy::{ar_energy, net_force, phi, EnergyParams};
use crate::error::{Error, Result};
use crate::graph::Network;

/// Per-vertex positions in d-dimensional Euclidean space, stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct Layout {
    dimension: usize,
    coords: Vec<f64>,
}

impl Layout {
    pub fn new(dimension: usize, coords: Vec<f64>) -> Result<Layout> {
        if dimension == 0 {
            return Err(Error::invalid_parameter("layout dimension must be >= 1"));
        }
        if coords.len() % dimension != 0 {
            return Err(Error::invalid_parameter(format!(
                "{} coordinates do not fill {}-dimensional rows",
                coords.len(),
                dimension
            )));
        }
        if coords.iter().any(|c| !c.is_finite()) {
            return Err(Error::NonFinite {
                context: "layout coordinates".to_string(),
            });
        }
        Ok(Layout { dimension, coords })
    }

    pub fn from_rows(rows: Vec<Vec<f64>>) -> Result<Layout> {
        let dimension = rows.first().map_or(1, |r| r.len());
        let mut coords = Vec::with_capacity(rows.len() * dimension);
        for row in &rows {
            if row.len() != dimension {
                return Err(Error::invalid_parameter(
                    "all positions must have the same dimension",
                ));
            }
            coords.extend_from_slice(row);
        }
        Layout::new(dimension, coords)
    }

    pub fn zeros(vertex_count: usize, dimension: usize) -> Layout {
        Layout {
            dimension: dimension.max(1),
            coords: vec![0.0; vertex_count * dimension.max(1)],
        }
    }

    pub fn dimension(&self) -> usize {
        self.dimension
    }

    pub fn vertex_count(&self) -> usize {
        self.coords.len() / self.dimension
    }

    pub fn position(&self, v: usize) -> &[f64] {
        &self.coords[v * self.dimension..(v + 1) * self.dimension]
    }

    pub fn position_mut(&mut self, v: usize) -> &mut [f64] {
        &mut self.coords[v * self.dimension..(v + 1) * self.dimension]
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn distance(&self, u: usize, v: usize) -> f64 {
        crate::energy::dist(self.position(u), self.position(v))
    }

    /// Diagonal of the axis-aligned bounding box; 0 for degenerate layouts.
    pub fn bounding_diagonal(&self) -> f64 {
        let n = self.vertex_count();
        if n == 0 {
            return 0.0;
        }
        let d = self.dimension;
        let mut sum = 0.0;
        for k in 0..d {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in 0..n {
                let c = self.coords[v * d + k];
                lo = lo.min(c);
                hi = hi.max(c);
            }
            sum += (hi - lo) * (hi - lo);
        }
        sum.sqrt()
    }
}

/// Options controlling one minimization run.
#[derive(Debug, Clone)]
pub struct LayoutOptions {
    pub dimension: usize,
    pub max_iterations: usize,
    pub seed: u64,
    /// Convergence threshold, relative to the layout bounding-box diagonal.
    pub convergence_tol: f64,
    /// Initial step length; default 0.05 * n^(1/dimension).
    pub initial_step: Option<f64>,
    /// Barnes-Hut repulsion; default on for components above 200 vertices.
    pub use_barnes_hut: Option<bool>,
    pub theta: f64,
    /// Parallelize force sweeps. Sequential mode is the determinism reference.
    pub parallel: bool,
}

impl Default for LayoutOptions {
    fn default() -> Self {
        LayoutOptions {
            dimension: 2,
            max_iterations: 500,
            seed: 0,
            convergence_tol: 1e-4,
            initial_step: None,
            use_barnes_hut: None,
            theta: 0.5,
            parallel: false,
        }
    }
}

impl LayoutOptions {
    fn validate(&self) -> Result<()> {
        if self.dimension == 0 {
            return Err(Error::invalid_parameter("dimension must be >= 1"));
        }
        if self.max_iterations == 0 {
            return Err(Error::invalid_parameter("max_iterations must be >= 1"));
        }
        if !(self.convergence_tol > 0.0) {
            return Err(Error::invalid_parameter("convergence_tol must be positive"));
        }
        if let Some(s) = self.initial_step {
            if !(s > 0.0) {
                return Err(Error::invalid_parameter("initial_step must be positive"));
            }
        }
        if !(self.theta >= 0.0) {
            return Err(Error::invalid_parameter("theta must be nonnegative"));
        }
        Ok(())
    }
}

/// Result of a minimization: layout, exact energy of it, iterations used.
#[derive(Debug, Clone)]
pub struct LayoutResult {
    pub layout: Layout,
    pub energy: f64,
    pub iterations: usize,
}

/// Outcome of one synchronous sweep.
#[derive(Debug, Clone, Copy)]
pub struct StepOutcome {
    pub moved: bool,
    pub max_displacement: f64,
    /// Schedule energy of the current positions (approximate when Barnes-Hut
    /// is active).
    pub energy: f64,
}

/// Iteration state over one (usually connected) network.
pub struct LayoutState<'a> {
    net: &'a Network,
    params: EnergyParams,
    layout: Layout,
    step: f64,
    energy: f64,
    use_bh: bool,
    theta: f64,
    tol: f64,
    parallel: bool,
    rng: ChaCha8Rng,
    iterations: usize,
    converged: bool,
}

const STEP_GROW: f64 = 1.1;
const STEP_SHRINK: f64 = 0.5;
const JITTER_RELATIVE: f64 = 1e-9;
const JITTER_FLOOR: f64 = 1e-12;
const MAX_JITTER_ROUNDS: usize = 16;

impl<'a> LayoutState<'a> {
    pub fn new(net: &'a Network, params: &EnergyParams, opts: &LayoutOptions) -> Result<Self> {
        opts.validate()?;
        if net.is_empty() {
            return Err(Error::EmptyNetwork);
        }
        let n = net.vertex_count();
        let dim = opts.dimension;
        let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
        let side = (n as f64).powf(1.0 / dim as f64);
        let coords: Vec<f64> = (0..n * dim)
            .map(|_| (rng.random::<f64>() - 0.5) * side)
            .collect();
        let layout = Layout::new(dim, coords)?;
        let use_bh = opts.use_barnes_hut.unwrap_or(n > 200);
        let step = opts.initial_step.unwrap_or(0.05 * side);
        let mut state = LayoutState {
            net,
            params: *params,
            layout,
            step,
            energy: f64::INFINITY,
            use_bh,
            theta: opts.theta,
            tol: opts.convergence_tol,
            parallel: opts.parallel,
            rng,
            iterations: 0,
            converged: n <= 1,
        };
        state.jitter_coincident();
        state.energy = state.schedule_energy(&state.layout).unwrap_or(f64::INFINITY);
        Ok(state)
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn converged(&self) -> bool {
        self.converged
    }

    pub fn iterations(&self) -> usize {
        self.iterations
    }

    /// Displace one vertex of every near-coincident pair by a deterministic
    /// pseudo-random unit vector scaled to the separation floor.
    fn jitter_coincident(&mut self) {
        let n = self.layout.vertex_count();
        if n < 2 {
            return;
        }
        let threshold =
            JITTER_RELATIVE * self.layout.bounding_diagonal().max(JITTER_FLOOR / JITTER_RELATIVE);
        let mut order: Vec<usize> = (0..n).collect();
        let dim = self.layout.dimension();
        order.sort_by(|&a, &b| {
            self.layout
                .position(a)
                .partial_cmp(self.layout.position(b))
                .unwrap_or(std::cmp::Ordering::Equal)
        });
        for i in 1..n {
            let (prev, cur) = (order[i - 1], order[i]);
            if self.layout.distance(prev, cur) < threshold {
                let dir: Vec<f64> = (0..dim).map(|_| self.rng.random::<f64>() - 0.5).collect();
                let norm = dir.iter().map(|c| c * c).sum::<f64>().sqrt().max(1e-300);
                let pos = self.layout.position_mut(cur);
                for k in 0..dim {
                    pos[k] += dir[k] / norm * threshold.max(JITTER_FLOOR);
                }
            }
        }
    }

    /// Energy driving the step schedule: exact when Barnes-Hut is off,
    /// tree-approximated otherwise.
    fn schedule_energy(&self, layout: &Layout) -> Result<f64> {
        if !self.use_bh {
            return ar_energy(self.net, layout, &self.params);
        }
        let tree = BhTree::build(layout, self.net.vertex_weights(), self.theta)?;
        let mut energy = 0.0;
        for e in self.net.edges() {
            if e.u == e.v {
                continue;
            }
            let d = layout.distance(e.u, e.v);
            if d <= 0.0 && self.params.a <= -1.0 {
                return Err(Error::CoincidentPositions {
                    context: format!("vertices {} and {}", e.u, e.v),
                });
            }
            energy += self.params.attraction_factor * e.weight * phi(self.params.a, d);
        }
        let mut repulsion = 0.0;
        for v in 0..self.net.vertex_count() {
            let w = self.net.vertex_weight(v);
            if w == 0.0 {
                continue;
            }
            repulsion += tree.repulsion_energy(v, layout.position(v), w, self.params.r)?;
        }
        // Each unordered pair is visited from both endpoints.
        energy -= self.params.repulsion_factor * repulsion / 2.0;
        if !energy.is_finite() {
            return Err(Error::NonFinite {
                context: "schedule energy".to_string(),
            });
        }
        Ok(energy)
    }

    fn forces(&mut self) -> Result<Vec<f64>> {
        let n = self.net.vertex_count();
        let dim = self.layout.dimension();
        for _ in 0..MAX_JITTER_ROUNDS {
            let tree = if self.use_bh {
                Some(BhTree::build(
                    &self.layout,
                    self.net.vertex_weights(),
                    self.theta,
                )?)
            } else {
                None
            };
            let attempt: Result<Vec<Vec<f64>>> = if self.parallel {
                (0..n)
                    .into_par_iter()
                    .map(|v| net_force(self.net, &self.layout, &self.params, v, tree.as_ref()))
                    .collect()
            } else {
                (0..n)
                    .map(|v| net_force(self.net, &self.layout, &self.params, v, tree.as_ref()))
                    .collect()
            };
            match attempt {
                Ok(per_vertex) => {
                    let mut flat = vec![0.0; n * dim];
                    for (v, f) in per_vertex.iter().enumerate() {
                        flat[v * dim..(v + 1) * dim].copy_from_slice(f);
                    }
                    return Ok(flat);
                }
                Err(Error::CoincidentPositions { .. }) => {
                    // Exactly equal positions sort adjacent, so the scan in
                    // jitter_coincident separates them; retry afterwards.
                    self.jitter_coincident();
                }
                Err(other) => return Err(other),
            }
        }
        Err(Error::NonFinite {
            context: "force computation kept hitting coincident vertices".to_string(),
        })
    }

    fn displaced(&self, forces: &[f64], step: f64) -> Layout {
        let n = self.layout.vertex_count();
        let dim = self.layout.dimension();
        let mut coords = self.layout.coords().to_vec();
        for v in 0..n {
            let f = &forces[v * dim..(v + 1) * dim];
            let norm = f.iter().map(|c| c * c).sum::<f64>().sqrt();
            if norm == 0.0 || !norm.is_finite() {
                continue;
            }
            // Displacement step*force, capped at the step length.
            let scale = if step * norm > step { step / norm } else { step };
            for k in 0..dim {
                coords[v * dim + k] += scale * f[k];
            }
        }
        Layout {
            dimension: dim,
            coords,
        }
    }

    /// One synchronous sweep against the frozen current positions.
    pub fn step(&mut self) -> Result<StepOutcome> {
        self.iterations += 1;
        if self.net.vertex_count() <= 1 {
            self.converged = true;
            return Ok(StepOutcome {
                moved: false,
                max_displacement: 0.0,
                energy: self.energy,
            });
        }
        self.jitter_coincident();
        let forces = self.forces()?;

        let scale = self.layout.bounding_diagonal().max(1e-12);
        let mut accepted = false;
        let mut grew = true;
        let mut step_used = self.step;
        for attempt in 0..2 {
            step_used = self.step;
            let candidate = self.displaced(&forces, step_used);
            let energy = match self.schedule_energy(&candidate) {
                Ok(e) => e,
                Err(Error::CoincidentPositions { .. }) | Err(Error::NonFinite { .. }) => {
                    f64::INFINITY
                }
                Err(other) => return Err(other),
            };
            if energy < self.energy {
                self.layout = candidate;
                self.energy = energy;
                accepted = true;
                grew = attempt == 0;
                break;
            }
            self.step *= STEP_SHRINK;
        }

        let mut max_displacement = 0.0;
        if accepted {
            if grew {
                self.step *= STEP_GROW;
            }
            let dim = self.layout.dimension();
            let mut max_norm = 0.0f64;
            for v in 0..self.layout.vertex_count() {
                let f = &forces[v * dim..(v + 1) * dim];
                let norm = f.iter().map(|c| c * c).sum::<f64>().sqrt();
                max_norm = max_norm.max(norm);
            }
            // Displacement is step*|force| capped at the step length.
            max_displacement = step_used * max_norm.min(1.0);
            if max_displacement < self.tol * scale {
                self.converged = true;
            }
        } else if self.step < 1e-14 * scale {
            if !self.energy.is_finite() {
                return Err(Error::NonFinite {
                    context: "energy stayed non-finite after step-halving retries".to_string(),
                });
            }
            self.converged = true;
        }

        Ok(StepOutcome {
            moved: accepted,
            max_displacement,
            energy: self.energy,
        })
    }
}

/// Minimize the (a,r)-energy of a network. Connected components are laid out
/// independently and packed on a grid with gaps of twice their bounding-box
/// diagonal. Deterministic for a fixed seed in sequential mode.
pub fn minimize_energy(
    net: &Network,
    params: &EnergyParams,
    opts: &LayoutOptions,
) -> Result<LayoutResult> {
    opts.validate()?;
    if net.is_empty() {
        return Err(Error::EmptyNetwork);
    }
    let components = net.connected_components();
    let dim = opts.dimension;
    let mut full = Layout::zeros(net.vertex_count(), dim);
    let mut component_layouts = Vec::with_capacity(components.len());
    let mut iterations = 0usize;

    for (index, members) in components.iter().enumerate() {
        let sub = net.subnetwork(members)?;
        let mut sub_opts = opts.clone();
        sub_opts.seed = opts
            .seed
            .wrapping_add((index as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15));
        let mut state = LayoutState::new(&sub, params, &sub_opts)?;
        while !state.converged() && state.iterations() < sub_opts.max_iterations {
            state.step()?;
        }
        iterations = iterations.max(state.iterations());
        component_layouts.push(state.layout.clone());
    }

    place_on_grid(&mut full, &components, &component_layouts);
    let energy = ar_energy(net, &full, params)?;
    Ok(LayoutResult {
        layout: full,
        energy,
        iterations,
    })
}

/// Center each component layout and place the components on a grid whose
/// pitch leaves a gap of twice the largest component diagonal.
fn place_on_grid(full: &mut Layout, components: &[Vec<usize>], layouts: &[Layout]) {
    let dim = full.dimension();
    let max_diag = layouts
        .iter()
        .map(|l| l.bounding_diagonal())
        .fold(0.0f64, f64::max);
    let pitch = if max_diag > 0.0 { 3.0 * max_diag } else { 1.0 };
    let columns = (components.len() as f64).sqrt().ceil().max(1.0) as usize;

    for (index, (members, layout)) in components.iter().zip(layouts).enumerate() {
        let mut center = vec![0.0; dim];
        for k in 0..dim {
            let mut lo = f64::INFINITY;
            let mut hi = f64::NEG_INFINITY;
            for v in 0..layout.vertex_count() {
                lo = lo.min(layout.position(v)[k]);
                hi = hi.max(layout.position(v)[k]);
            }
            center[k] = 0.5 * (lo + hi);
        }
        let (row, col) = (index / columns, index % columns);
        let mut offset = vec![0.0; dim];
        offset[0] = col as f64 * pitch;
        if dim > 1 {
            offset[1] = row as f64 * pitch;
        } else {
            offset[0] = index as f64 * pitch;
        }
        for (local, &v) in members.iter().enumerate() {
            let src = layout.position(local);
            let dst = full.position_mut(v);
            for k in 0..dim {
                dst[k] = src[k] - center[k] + offset[k];
            }
        }
    }
}

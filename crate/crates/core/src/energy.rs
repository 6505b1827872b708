//! The (a,r)-energy model: exact energy, attraction/repulsion forces, the
//! analytic gradient, and the two-vertex closed form.
//!
//! For a layout p and exponents a > r, the energy is
//!
//! ```text
//!   sum over pairs {u,v}, u != v, of
//!       alpha * w_uv  * phi_a(d)  -  beta * w_u * w_v * phi_r(d)
//! ```
//!
//! with d = ||p_u - p_v|| and phi_x(d) = d^(x+1)/(x+1), read as ln d at
//! x = -1. The force on a vertex is the negative gradient: attraction of
//! magnitude alpha*w_uv*d^a along each incident edge, repulsion of magnitude
//! beta*w_u*w_v*d^r from every other vertex.

use crate::bhtree::BhTree;
use crate::error::{Error, Result};
use crate::graph::Network;
use crate::layout::Layout;

/// Parameters of an (a,r)-energy instance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnergyParams {
    pub a: f64,
    pub r: f64,
    pub attraction_factor: f64,
    pub repulsion_factor: f64,
}

impl EnergyParams {
    pub fn new(a: f64, r: f64) -> Result<EnergyParams> {
        EnergyParams::with_factors(a, r, 1.0, 1.0)
    }

    pub fn with_factors(a: f64, r: f64, attraction: f64, repulsion: f64) -> Result<EnergyParams> {
        if !a.is_finite() || !r.is_finite() {
            return Err(Error::invalid_parameter("exponents must be finite"));
        }
        if !(a > r) {
            return Err(Error::invalid_parameter(format!(
                "attraction exponent a = {a} must exceed repulsion exponent r = {r}"
            )));
        }
        if !(attraction > 0.0) || !(repulsion > 0.0) {
            return Err(Error::invalid_parameter(
                "attraction and repulsion factors must be positive",
            ));
        }
        Ok(EnergyParams {
            a,
            r,
            attraction_factor: attraction,
            repulsion_factor: repulsion,
        })
    }

    /// The LinLog instance (0,-1): distances approximate inverse densities.
    pub fn linlog() -> EnergyParams {
        EnergyParams::new(0.0, -1.0).unwrap()
    }

    /// The Fruchterman-Reingold instance (2,-1).
    pub fn fruchterman_reingold() -> EnergyParams {
        EnergyParams::new(2.0, -1.0).unwrap()
    }
}

/// phi_x(d) = d^(x+1)/(x+1), with the x = -1 case read as ln d.
pub(crate) fn phi(x: f64, d: f64) -> f64 {
    if x == -1.0 {
        d.ln()
    } else {
        d.powf(x + 1.0) / (x + 1.0)
    }
}

/// Energy contribution of one pair at distance `d`, or an error when a
/// divergent term applies at d = 0.
fn pair_energy(
    params: &EnergyParams,
    w_uv: f64,
    w_u: f64,
    w_v: f64,
    d: f64,
    u: usize,
    v: usize,
) -> Result<f64> {
    let mut e = 0.0;
    if w_uv > 0.0 {
        if d <= 0.0 && params.a <= -1.0 {
            return Err(Error::CoincidentPositions {
                context: format!("attraction between vertices {u} and {v} diverges at distance 0"),
            });
        }
        e += params.attraction_factor * w_uv * phi(params.a, d);
    }
    if w_u * w_v > 0.0 {
        if d <= 0.0 && params.r <= -1.0 {
            return Err(Error::CoincidentPositions {
                context: format!("repulsion between vertices {u} and {v} diverges at distance 0"),
            });
        }
        e -= params.repulsion_factor * w_u * w_v * phi(params.r, d);
    }
    Ok(e)
}

fn check_same_size(net: &Network, layout: &Layout) -> Result<()> {
    if layout.vertex_count() != net.vertex_count() {
        return Err(Error::invalid_parameter(format!(
            "layout has {} positions but the network has {} vertices",
            layout.vertex_count(),
            net.vertex_count()
        )));
    }
    Ok(())
}

/// Exact (a,r)-energy of a layout.
pub fn ar_energy(net: &Network, layout: &Layout, params: &EnergyParams) -> Result<f64> {
    check_same_size(net, layout)?;
    let n = net.vertex_count();
    let mut energy = 0.0;
    // Attraction is sparse over edges; self-edges carry no energy.
    for e in net.edges() {
        if e.u == e.v {
            continue;
        }
        let d = layout.distance(e.u, e.v);
        energy += pair_energy(params, e.weight, 0.0, 0.0, d, e.u, e.v)?;
    }
    // Repulsion over all pairs with positive weight product.
    let weights = net.vertex_weights();
    for u in 0..n {
        if weights[u] == 0.0 {
            continue;
        }
        for v in (u + 1)..n {
            if weights[v] == 0.0 {
                continue;
            }
            let d = layout.distance(u, v);
            energy += pair_energy(params, 0.0, weights[u], weights[v], d, u, v)?;
        }
    }
    if !energy.is_finite() {
        return Err(Error::NonFinite {
            context: "(a,r)-energy".to_string(),
        });
    }
    Ok(energy)
}

/// Attractive force exerted on `u` by `v`: w_uv * d^a toward v.
pub fn attraction_force(w_uv: f64, p_u: &[f64], p_v: &[f64], a: f64) -> Result<Vec<f64>> {
    if w_uv == 0.0 {
        return Ok(vec![0.0; p_u.len()]);
    }
    let d = dist(p_u, p_v);
    if d <= 0.0 {
        return Err(Error::CoincidentPositions {
            context: "attraction direction is undefined at distance 0".to_string(),
        });
    }
    let scale = w_uv * d.powf(a) / d;
    Ok(p_u
        .iter()
        .zip(p_v)
        .map(|(&cu, &cv)| scale * (cv - cu))
        .collect())
}

/// Repulsive force exerted on `u` by `v`: w_u * w_v * d^r away from v.
pub fn repulsion_force(w_u: f64, w_v: f64, p_u: &[f64], p_v: &[f64], r: f64) -> Result<Vec<f64>> {
    if w_u * w_v == 0.0 {
        return Ok(vec![0.0; p_u.len()]);
    }
    let d = dist(p_u, p_v);
    if d <= 0.0 {
        return Err(Error::CoincidentPositions {
            context: "repulsion direction is undefined at distance 0".to_string(),
        });
    }
    let scale = w_u * w_v * d.powf(r) / d;
    Ok(p_u
        .iter()
        .zip(p_v)
        .map(|(&cu, &cv)| scale * (cu - cv))
        .collect())
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Net force on vertex `v`: exact attraction over incident edges plus
/// repulsion over all other vertices, tree-approximated when `approx` is
/// given. Includes the configured attraction/repulsion factors.
pub fn net_force(
    net: &Network,
    layout: &Layout,
    params: &EnergyParams,
    v: usize,
    approx: Option<&BhTree>,
) -> Result<Vec<f64>> {
    check_same_size(net, layout)?;
    let dim = layout.dimension();
    let mut force = vec![0.0; dim];
    let p_v = layout.position(v);

    for &(nb, w) in net.neighbors(v) {
        let p_nb = layout.position(nb);
        let d = dist(p_v, p_nb);
        if d <= 0.0 {
            return Err(Error::CoincidentPositions {
                context: format!("vertices {v} and {nb} (attraction)"),
            });
        }
        let scale = params.attraction_factor * w * d.powf(params.a) / d;
        for k in 0..dim {
            force[k] += scale * (p_nb[k] - p_v[k]);
        }
    }

    let w_v = net.vertex_weight(v);
    if w_v > 0.0 {
        match approx {
            Some(tree) => tree.accumulate_repulsion(
                v,
                p_v,
                w_v,
                params.r,
                params.repulsion_factor,
                &mut force,
            )?,
            None => {
                let weights = net.vertex_weights();
                for u in 0..net.vertex_count() {
                    if u == v || weights[u] == 0.0 {
                        continue;
                    }
                    let p_u = layout.position(u);
                    let d = dist(p_v, p_u);
                    if d <= 0.0 {
                        return Err(Error::CoincidentPositions {
                            context: format!("vertices {v} and {u} (repulsion)"),
                        });
                    }
                    let scale = params.repulsion_factor * w_v * weights[u] * d.powf(params.r) / d;
                    for k in 0..dim {
                        force[k] += scale * (p_v[k] - p_u[k]);
                    }
                }
            }
        }
    }
    Ok(force)
}

/// Analytic gradient of the exact energy; equals -net_force per vertex.
pub fn ar_gradient(net: &Network, layout: &Layout, params: &EnergyParams) -> Result<Vec<Vec<f64>>> {
    check_same_size(net, layout)?;
    let n = net.vertex_count();
    let dim = layout.dimension();
    let mut grad = vec![0.0; n * dim];

    for e in net.edges() {
        if e.u == e.v {
            continue;
        }
        let (p_u, p_v) = (layout.position(e.u), layout.position(e.v));
        let d = dist(p_u, p_v);
        if d <= 0.0 {
            return Err(Error::CoincidentPositions {
                context: format!("vertices {} and {} (attraction gradient)", e.u, e.v),
            });
        }
        let scale = params.attraction_factor * e.weight * d.powf(params.a) / d;
        for k in 0..dim {
            let g = scale * (p_u[k] - p_v[k]);
            grad[e.u * dim + k] += g;
            grad[e.v * dim + k] -= g;
        }
    }

    let weights = net.vertex_weights();
    for u in 0..n {
        if weights[u] == 0.0 {
            continue;
        }
        for v in (u + 1)..n {
            if weights[v] == 0.0 {
                continue;
            }
            let (p_u, p_v) = (layout.position(u), layout.position(v));
            let d = dist(p_u, p_v);
            if d <= 0.0 {
                return Err(Error::CoincidentPositions {
                    context: format!("vertices {u} and {v} (repulsion gradient)"),
                });
            }
            let scale = params.repulsion_factor * weights[u] * weights[v] * d.powf(params.r) / d;
            for k in 0..dim {
                let g = scale * (p_u[k] - p_v[k]);
                grad[u * dim + k] -= g;
                grad[v * dim + k] += g;
            }
        }
    }

    Ok(grad.chunks(dim).map(|c| c.to_vec()).collect())
}

/// Closed-form optimal distance of a two-vertex network:
/// ((alpha*w_uv) / (beta*w_u*w_v))^(-1/(a-r)).
pub fn two_vertex_optimal_distance(
    params: &EnergyParams,
    w_uv: f64,
    w_u: f64,
    w_v: f64,
) -> Result<f64> {
    if !(w_uv > 0.0) {
        return Err(Error::invalid_parameter(
            "zero edge weight: the optimal separation is infinite",
        ));
    }
    if !(w_u * w_v > 0.0) {
        return Err(Error::invalid_parameter(
            "zero vertex weight product: the optimal separation is zero",
        ));
    }
    let ratio = (params.attraction_factor * w_uv) / (params.repulsion_factor * w_u * w_v);
    Ok(ratio.powf(-1.0 / (params.a - params.r)))
}

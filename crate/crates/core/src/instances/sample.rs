use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{edge_count, edge_index};
use crate::error::{invalid, Error, Result};

/// ChaCha stream carrying the edge weights.
pub const WEIGHT_STREAM: u64 = 0;
/// ChaCha stream carrying the edge costs.
pub const COST_STREAM: u64 = 1;

/// Complete graph with independent `U^gamma` weights and costs on every edge.
///
/// Both matrices are stored densely and symmetrically (`n * n`, diagonal
/// unused and zero) so that a row can be scanned contiguously by the dense
/// MST routine. On disk only the upper triangle is kept.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "InstanceFile", into = "InstanceFile")]
pub struct Instance {
    n: usize,
    gamma: f64,
    seed: u64,
    weights: Vec<f64>,
    costs: Vec<f64>,
}

/// Maps a raw 64-bit draw to a uniform variate strictly inside (0, 1).
#[inline]
pub fn uniform_open(bits: u64) -> f64 {
    ((bits >> 11) as f64 + 0.5) * (1.0 / (1u64 << 53) as f64)
}

#[inline]
fn power_transform(u: f64, gamma: f64) -> f64 {
    let v = if gamma == 1.0 { u } else { u.powf(gamma) };
    // u^gamma can round up to 1.0 for tiny gamma
    if v >= 1.0 {
        1.0 - f64::EPSILON / 2.0
    } else {
        v
    }
}

/// Value of edge number `index` (canonical order) in stream `stream`, drawn
/// by seeking the generator directly. Agrees bit-for-bit with
/// [`sample_instance`], which consumes the same streams sequentially.
pub fn edge_draw(seed: u64, stream: u64, index: usize, gamma: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng.set_word_pos(2 * index as u128);
    power_transform(uniform_open(rng.next_u64()), gamma)
}

/// Draws an instance. Each stream is consumed in row-major upper-triangle
/// edge order: edge `(u, v)`, `u < v`, takes the `edge_index(n, u, v)`-th
/// 64-bit word pair of its stream. Weights use [`WEIGHT_STREAM`], costs use
/// [`COST_STREAM`].
pub fn sample_instance(n: usize, gamma: f64, seed: u64) -> Result<Instance> {
    validate_shape(n, gamma)?;
    let mut wrng = ChaCha8Rng::seed_from_u64(seed);
    wrng.set_stream(WEIGHT_STREAM);
    let mut crng = ChaCha8Rng::seed_from_u64(seed);
    crng.set_stream(COST_STREAM);

    let mut weights = vec![0.0; n * n];
    let mut costs = vec![0.0; n * n];
    for u in 0..n {
        for v in u + 1..n {
            let w = power_transform(uniform_open(wrng.next_u64()), gamma);
            let c = power_transform(uniform_open(crng.next_u64()), gamma);
            weights[u * n + v] = w;
            weights[v * n + u] = w;
            costs[u * n + v] = c;
            costs[v * n + u] = c;
        }
    }
    Ok(Instance {
        n,
        gamma,
        seed,
        weights,
        costs,
    })
}

fn validate_shape(n: usize, gamma: f64) -> Result<()> {
    if n < 2 {
        return Err(invalid(format!("n must be at least 2, got {n}")));
    }
    if !(gamma > 0.0 && gamma <= 1.0) {
        return Err(invalid(format!("gamma must lie in (0, 1], got {gamma}")));
    }
    Ok(())
}

impl Instance {
    /// Builds an instance from explicit upper-triangle weight and cost arrays.
    pub fn from_upper(
        n: usize,
        gamma: f64,
        seed: u64,
        weights: &[f64],
        costs: &[f64],
    ) -> Result<Self> {
        validate_shape(n, gamma)?;
        let m = edge_count(n);
        if weights.len() != m || costs.len() != m {
            return Err(Error::MalformedInstance(format!(
                "expected {m} upper-triangle entries, got {} weights and {} costs",
                weights.len(),
                costs.len()
            )));
        }
        if let Some(bad) = weights
            .iter()
            .chain(costs)
            .find(|x| !(**x > 0.0 && **x < 1.0))
        {
            return Err(Error::MalformedInstance(format!(
                "edge value {bad} outside (0, 1)"
            )));
        }
        let mut w = vec![0.0; n * n];
        let mut c = vec![0.0; n * n];
        for u in 0..n {
            for v in u + 1..n {
                let k = edge_index(n, u, v);
                w[u * n + v] = weights[k];
                w[v * n + u] = weights[k];
                c[u * n + v] = costs[k];
                c[v * n + u] = costs[k];
            }
        }
        Ok(Instance {
            n,
            gamma,
            seed,
            weights: w,
            costs: c,
        })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    #[inline]
    pub fn weight(&self, u: usize, v: usize) -> f64 {
        self.weights[u * self.n + v]
    }

    #[inline]
    pub fn cost(&self, u: usize, v: usize) -> f64 {
        self.costs[u * self.n + v]
    }

    /// Row `u` of the weight matrix (entry `u` is the unused diagonal).
    #[inline]
    pub fn weight_row(&self, u: usize) -> &[f64] {
        &self.weights[u * self.n..(u + 1) * self.n]
    }

    #[inline]
    pub fn cost_row(&self, u: usize) -> &[f64] {
        &self.costs[u * self.n..(u + 1) * self.n]
    }

    pub fn upper_weights(&self) -> Vec<f64> {
        upper(&self.weights, self.n)
    }

    pub fn upper_costs(&self) -> Vec<f64> {
        upper(&self.costs, self.n)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("instance serialization cannot fail")
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::MalformedInstance(e.to_string()))
    }
}

fn upper(m: &[f64], n: usize) -> Vec<f64> {
    let mut out = Vec::with_capacity(edge_count(n));
    for u in 0..n {
        out.extend_from_slice(&m[u * n + u + 1..(u + 1) * n]);
    }
    out
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct InstanceFile {
    n: usize,
    gamma: f64,
    seed: u64,
    weights: Vec<f64>,
    costs: Vec<f64>,
}

impl TryFrom<InstanceFile> for Instance {
    type Error = Error;

    fn try_from(f: InstanceFile) -> Result<Self> {
        Instance::from_upper(f.n, f.gamma, f.seed, &f.weights, &f.costs)
    }
}

impl From<Instance> for InstanceFile {
    fn from(inst: Instance) -> Self {
        InstanceFile {
            n: inst.n,
            gamma: inst.gamma,
            seed: inst.seed,
            weights: inst.upper_weights(),
            costs: inst.upper_costs(),
        }
    }
}

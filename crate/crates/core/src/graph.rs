//! Weighted undirected graphs in compressed adjacency form.
//!
//! Each vertex carries a cost `c_i` and a positive weight `w_i`; each edge a
//! positive weight used only by the coarsening rules. The matrix `H = A + I`
//! that appears in the separator objective is never stored: [`WeightedGraph::mul_h`]
//! applies it on the fly from the 0/1 adjacency pattern.

use crate::error::{Result, VsepError};

#[derive(Clone, Debug, PartialEq)]
pub struct WeightedGraph {
    offsets: Vec<usize>,
    neighbors: Vec<usize>,
    edge_weights: Vec<f64>,
    vertex_cost: Vec<f64>,
    vertex_weight: Vec<f64>,
}

impl WeightedGraph {
    /// Builds a graph with unit vertex costs and weights from undirected
    /// edges `(u, v, weight)`, 0-indexed, each listed once.
    ///
    /// Self-loops are dropped; the number dropped is returned alongside the
    /// graph. Listing an edge twice (in either orientation) is an error.
    pub fn from_edges(n: usize, edges: &[(usize, usize, f64)]) -> Result<(Self, usize)> {
        let mut degree = vec![0usize; n];
        let mut loops = 0;
        for &(u, v, w) in edges {
            for idx in [u, v] {
                if idx >= n {
                    return Err(VsepError::VertexOutOfRange { index: idx, n });
                }
            }
            if !(w.is_finite() && w > 0.0) {
                return Err(VsepError::InvalidEdgeWeight { u, v, weight: w });
            }
            if u == v {
                loops += 1;
                continue;
            }
            degree[u] += 1;
            degree[v] += 1;
        }
        let mut offsets = Vec::with_capacity(n + 1);
        offsets.push(0);
        for d in &degree {
            offsets.push(offsets.last().unwrap() + d);
        }
        let total = offsets[n];
        let mut cursor = offsets[..n].to_vec();
        let mut pairs = vec![(0usize, 0f64); total];
        for &(u, v, w) in edges {
            if u == v {
                continue;
            }
            pairs[cursor[u]] = (v, w);
            cursor[u] += 1;
            pairs[cursor[v]] = (u, w);
            cursor[v] += 1;
        }
        for u in 0..n {
            let list = &mut pairs[offsets[u]..offsets[u + 1]];
            list.sort_by_key(|&(v, _)| v);
            if let Some(win) = list.windows(2).find(|win| win[0].0 == win[1].0) {
                return Err(VsepError::DuplicateEdge {
                    line: 0,
                    u: u + 1,
                    v: win[0].0 + 1,
                });
            }
        }
        let (neighbors, edge_weights) = pairs.into_iter().unzip();
        Ok((
            Self {
                offsets,
                neighbors,
                edge_weights,
                vertex_cost: vec![1.0; n],
                vertex_weight: vec![1.0; n],
            },
            loops,
        ))
    }

    /// Assembles a graph from raw compressed adjacency arrays and checks
    /// every structural invariant.
    pub fn from_parts(
        offsets: Vec<usize>,
        neighbors: Vec<usize>,
        edge_weights: Vec<f64>,
        vertex_cost: Vec<f64>,
        vertex_weight: Vec<f64>,
    ) -> Result<Self> {
        let g = Self {
            offsets,
            neighbors,
            edge_weights,
            vertex_cost,
            vertex_weight,
        };
        g.validate()?;
        Ok(g)
    }

    /// Checks symmetry, sortedness, absence of self-loops and duplicates,
    /// and positivity of vertex and edge weights.
    pub fn validate(&self) -> Result<()> {
        let n = self.n();
        if self.offsets.first() != Some(&0)
            || self.offsets.last() != Some(&self.neighbors.len())
            || self.edge_weights.len() != self.neighbors.len()
        {
            return Err(VsepError::InvalidArgument(
                "inconsistent adjacency arrays".into(),
            ));
        }
        for (name, len) in [
            ("costs", self.vertex_cost.len()),
            ("weights", self.vertex_weight.len()),
        ] {
            if len != n {
                return Err(VsepError::InvalidArgument(format!(
                    "{name} has length {len}, expected {n}"
                )));
            }
        }
        for (i, &w) in self.vertex_weight.iter().enumerate() {
            if !(w.is_finite() && w > 0.0) {
                return Err(VsepError::NonPositiveWeight {
                    vertex: i + 1,
                    weight: w,
                });
            }
        }
        if let Some(i) = self.vertex_cost.iter().position(|c| !c.is_finite()) {
            return Err(VsepError::InvalidArgument(format!(
                "vertex {} has a non-finite cost",
                i + 1
            )));
        }
        for u in 0..n {
            let nbrs = self.neighbors(u);
            for (k, (&v, &w)) in nbrs.iter().zip(self.edge_weights(u)).enumerate() {
                if v >= n {
                    return Err(VsepError::VertexOutOfRange { index: v, n });
                }
                if v == u {
                    return Err(VsepError::InvalidArgument(format!(
                        "self-loop on vertex {}",
                        u + 1
                    )));
                }
                if k > 0 && nbrs[k - 1] >= v {
                    return Err(VsepError::DuplicateEdge {
                        line: 0,
                        u: u + 1,
                        v: v + 1,
                    });
                }
                if !(w.is_finite() && w > 0.0) {
                    return Err(VsepError::InvalidEdgeWeight {
                        u: u + 1,
                        v: v + 1,
                        weight: w,
                    });
                }
                if self.edge_weight(v, u) != Some(w) {
                    return Err(VsepError::AsymmetricEdge {
                        line: 0,
                        u: u + 1,
                        v: v + 1,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn with_vertex_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.len() != self.n() {
            return Err(VsepError::DimensionMismatch {
                expected: self.n(),
                found: weights.len(),
            });
        }
        if let Some((i, &w)) = weights
            .iter()
            .enumerate()
            .find(|(_, w)| !(w.is_finite() && **w > 0.0))
        {
            return Err(VsepError::NonPositiveWeight {
                vertex: i + 1,
                weight: w,
            });
        }
        self.vertex_weight = weights;
        Ok(self)
    }

    pub fn with_vertex_costs(mut self, costs: Vec<f64>) -> Result<Self> {
        if costs.len() != self.n() {
            return Err(VsepError::DimensionMismatch {
                expected: self.n(),
                found: costs.len(),
            });
        }
        if costs.iter().any(|c| !c.is_finite()) {
            return Err(VsepError::InvalidArgument("non-finite vertex cost".into()));
        }
        self.vertex_cost = costs;
        Ok(self)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.offsets.len() - 1
    }

    /// Number of undirected edges.
    #[inline]
    pub fn num_edges(&self) -> usize {
        self.neighbors.len() / 2
    }

    #[inline]
    pub fn degree(&self, u: usize) -> usize {
        self.offsets[u + 1] - self.offsets[u]
    }

    #[inline]
    pub fn neighbors(&self, u: usize) -> &[usize] {
        &self.neighbors[self.offsets[u]..self.offsets[u + 1]]
    }

    #[inline]
    pub fn edge_weights(&self, u: usize) -> &[f64] {
        &self.edge_weights[self.offsets[u]..self.offsets[u + 1]]
    }

    pub fn edge_weight(&self, u: usize, v: usize) -> Option<f64> {
        self.neighbors(u)
            .binary_search(&v)
            .ok()
            .map(|k| self.edge_weights(u)[k])
    }

    pub fn has_edge(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    /// Iterates every undirected edge once as `(u, v, weight)` with `u < v`.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
        (0..self.n()).flat_map(move |u| {
            self.neighbors(u)
                .iter()
                .zip(self.edge_weights(u))
                .filter(move |(&v, _)| v > u)
                .map(move |(&v, &w)| (u, v, w))
        })
    }

    #[inline]
    pub fn costs(&self) -> &[f64] {
        &self.vertex_cost
    }

    #[inline]
    pub fn weights(&self) -> &[f64] {
        &self.vertex_weight
    }

    pub fn total_weight(&self) -> f64 {
        self.vertex_weight.iter().sum()
    }

    pub fn total_cost(&self) -> f64 {
        self.vertex_cost.iter().sum()
    }

    pub fn total_edge_weight(&self) -> f64 {
        self.edges().map(|(_, _, w)| w).sum()
    }

    pub fn max_cost(&self) -> f64 {
        self.vertex_cost
            .iter()
            .copied()
            .fold(f64::NEG_INFINITY, f64::max)
    }

    pub fn is_complete(&self) -> bool {
        let n = self.n();
        n > 0 && self.neighbors.len() == n * (n - 1)
    }

    /// `out = (A + I) v` using the unweighted adjacency pattern.
    pub fn mul_h(&self, v: &[f64], out: &mut [f64]) {
        debug_assert_eq!(v.len(), self.n());
        debug_assert_eq!(out.len(), self.n());
        for (u, o) in out.iter_mut().enumerate() {
            let mut acc = v[u];
            for &j in self.neighbors(u) {
                acc += v[j];
            }
            *o = acc;
        }
    }

    pub fn h_times(&self, v: &[f64]) -> Vec<f64> {
        let mut out = vec![0.0; self.n()];
        self.mul_h(v, &mut out);
        out
    }

    /// Row `u` of `H` applied to `v`.
    #[inline]
    pub fn h_row_dot(&self, u: usize, v: &[f64]) -> f64 {
        self.neighbors(u).iter().fold(v[u], |acc, &j| acc + v[j])
    }

    /// `H[u][v]` for the 0/1 adjacency pattern.
    #[inline]
    pub fn h_entry(&self, u: usize, v: usize) -> f64 {
        if u == v || self.has_edge(u, v) {
            1.0
        } else {
            0.0
        }
    }
}

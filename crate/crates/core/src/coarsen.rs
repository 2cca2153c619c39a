//! Matching-based coarsening and prolongation.
//!
//! Vertices are visited in a seeded random order; each unmatched vertex is
//! paired with an unmatched neighbor (the heaviest edge, or a uniformly
//! random one). Pairs are merged with summed cost and weight, parallel edges
//! are merged with summed weight, and the edge inside each pair disappears.

use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;
use crate::qp::ContinuousPoint;

/// Coarsening stops once a level has fewer vertices than this...
pub const COARSEST_MAX_VERTICES: usize = 75;
/// ...or fewer edges than this.
pub const COARSEST_MIN_EDGES: usize = 10;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum MatchingRule {
    Random,
    HeavyEdge,
}

impl MatchingRule {
    pub fn short_name(self) -> &'static str {
        match self {
            MatchingRule::Random => "rm",
            MatchingRule::HeavyEdge => "he",
        }
    }
}

impl FromStr for MatchingRule {
    type Err = VsepError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "rm" | "random" => Ok(MatchingRule::Random),
            "he" | "heavy_edge" | "heavy-edge" | "heavyedge" => Ok(MatchingRule::HeavyEdge),
            other => Err(VsepError::InvalidArgument(format!(
                "unknown matching rule '{other}' (expected rm or he)"
            ))),
        }
    }
}

/// Fine-to-coarse vertex map of one coarsening step.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matching {
    map: Vec<usize>,
    groups: Vec<(usize, Option<usize>)>,
}

impl Matching {
    pub fn identity(n: usize) -> Self {
        Self {
            map: (0..n).collect(),
            groups: (0..n).map(|i| (i, None)).collect(),
        }
    }

    /// Builds a matching from `mate[u] = Some(v)` pairs. Coarse vertices are
    /// numbered by their smallest fine vertex.
    pub fn from_mates(mate: &[Option<usize>]) -> Result<Self> {
        let n = mate.len();
        let mut map = vec![usize::MAX; n];
        let mut groups = Vec::new();
        for u in 0..n {
            if map[u] != usize::MAX {
                continue;
            }
            let k = groups.len();
            map[u] = k;
            match mate[u] {
                Some(v) if v != u => {
                    if v >= n || mate[v] != Some(u) || map[v] != usize::MAX {
                        return Err(VsepError::InvalidArgument(format!(
                            "inconsistent mate for vertex {}",
                            u + 1
                        )));
                    }
                    map[v] = k;
                    groups.push((u, Some(v)));
                }
                _ => groups.push((u, None)),
            }
        }
        Ok(Self { map, groups })
    }

    pub fn fine_len(&self) -> usize {
        self.map.len()
    }

    pub fn coarse_len(&self) -> usize {
        self.groups.len()
    }

    /// Coarse image of each fine vertex.
    pub fn map(&self) -> &[usize] {
        &self.map
    }

    /// Fine preimages of each coarse vertex.
    pub fn groups(&self) -> &[(usize, Option<usize>)] {
        &self.groups
    }

    pub fn pairs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.groups.iter().filter_map(|&(u, v)| v.map(|v| (u, v)))
    }

    pub fn is_identity(&self) -> bool {
        self.groups.len() == self.map.len()
    }

    /// Copies coarse values back to fine vertices.
    pub fn prolong_values(&self, coarse: &[f64]) -> Result<Vec<f64>> {
        if coarse.len() != self.coarse_len() {
            return Err(VsepError::DimensionMismatch {
                expected: self.coarse_len(),
                found: coarse.len(),
            });
        }
        Ok(self.map.iter().map(|&k| coarse[k]).collect())
    }
}

/// One coarsening step with a fresh generator seeded from `seed`.
pub fn coarsen(g: &WeightedGraph, rule: MatchingRule, seed: u64) -> (WeightedGraph, Matching) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    coarsen_with_rng(g, rule, &mut rng)
}

pub fn coarsen_with_rng<R: Rng>(
    g: &WeightedGraph,
    rule: MatchingRule,
    rng: &mut R,
) -> (WeightedGraph, Matching) {
    let mut order: Vec<usize> = (0..g.n()).collect();
    order.shuffle(rng);
    coarsen_in_order(g, rule, &order, rng)
}

/// One coarsening step visiting vertices in `order`. `rng` is consulted
/// only by the random rule. Heavy-edge ties go to the smallest neighbor.
pub fn coarsen_in_order<R: Rng>(
    g: &WeightedGraph,
    rule: MatchingRule,
    order: &[usize],
    rng: &mut R,
) -> (WeightedGraph, Matching) {
    let n = g.n();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    let mut candidates = Vec::new();
    for &u in order {
        if mate[u].is_some() {
            continue;
        }
        let free = g
            .neighbors(u)
            .iter()
            .zip(g.edge_weights(u))
            .filter(|(&v, _)| mate[v].is_none());
        let pick = match rule {
            MatchingRule::HeavyEdge => free
                .fold(None, |best: Option<(usize, f64)>, (&v, &w)| match best {
                    Some((_, bw)) if bw >= w => best,
                    _ => Some((v, w)),
                })
                .map(|(v, _)| v),
            MatchingRule::Random => {
                candidates.clear();
                candidates.extend(free.map(|(&v, _)| v));
                (!candidates.is_empty()).then(|| candidates[rng.gen_range(0..candidates.len())])
            }
        };
        match pick {
            Some(v) => {
                mate[u] = Some(v);
                mate[v] = Some(u);
            }
            None => mate[u] = Some(u),
        }
    }
    let matching = Matching::from_mates(&mate).expect("matching built from symmetric mates");
    let coarse = contract(g, &matching);
    (coarse, matching)
}

/// Builds the quotient graph of `matching`.
pub fn contract(g: &WeightedGraph, matching: &Matching) -> WeightedGraph {
    let nc = matching.coarse_len();
    let map = matching.map();
    let mut offsets = Vec::with_capacity(nc + 1);
    offsets.push(0);
    let mut neighbors = Vec::new();
    let mut weights = Vec::new();
    let mut cost = vec![0.0; nc];
    let mut vweight = vec![0.0; nc];
    let mut slot = vec![usize::MAX; nc];
    let mut row: Vec<(usize, f64)> = Vec::new();
    for (k, &(u, v)) in matching.groups().iter().enumerate() {
        row.clear();
        for f in std::iter::once(u).chain(v) {
            cost[k] += g.costs()[f];
            vweight[k] += g.weights()[f];
            for (&nb, &w) in g.neighbors(f).iter().zip(g.edge_weights(f)) {
                let kc = map[nb];
                if kc == k {
                    continue;
                }
                if slot[kc] == usize::MAX {
                    slot[kc] = row.len();
                    row.push((kc, w));
                } else {
                    row[slot[kc]].1 += w;
                }
            }
        }
        for &(kc, _) in &row {
            slot[kc] = usize::MAX;
        }
        row.sort_unstable_by_key(|&(kc, _)| kc);
        for &(kc, w) in &row {
            neighbors.push(kc);
            weights.push(w);
        }
        offsets.push(neighbors.len());
    }
    WeightedGraph::from_parts(offsets, neighbors, weights, cost, vweight)
        .expect("contraction of a valid graph is valid")
}

/// Graphs from finest (index 0) to coarsest with the matchings between them.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    levels: Vec<WeightedGraph>,
    matchings: Vec<Matching>,
}

impl Hierarchy {
    pub fn levels(&self) -> &[WeightedGraph] {
        &self.levels
    }

    /// `matchings()[l]` maps level `l` onto level `l + 1`.
    pub fn matchings(&self) -> &[Matching] {
        &self.matchings
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }

    pub fn finest(&self) -> &WeightedGraph {
        &self.levels[0]
    }

    pub fn coarsest(&self) -> &WeightedGraph {
        self.levels
            .last()
            .expect("hierarchy has at least one level")
    }
}

fn small_enough(g: &WeightedGraph) -> bool {
    g.n() < COARSEST_MAX_VERTICES || g.num_edges() < COARSEST_MIN_EDGES
}

/// Coarsens until the level is small enough or a pass fails to shrink it.
pub fn build_hierarchy(g: &WeightedGraph, rule: MatchingRule, seed: u64) -> Hierarchy {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut levels = vec![g.clone()];
    let mut matchings = Vec::new();
    loop {
        let last = levels.last().unwrap();
        if small_enough(last) {
            break;
        }
        let (coarse, matching) = coarsen_with_rng(last, rule, &mut rng);
        if coarse.n() == last.n() {
            break;
        }
        log::debug!(
            "level {}: {} vertices, {} edges",
            levels.len(),
            coarse.n(),
            coarse.num_edges()
        );
        levels.push(coarse);
        matchings.push(matching);
    }
    Hierarchy { levels, matchings }
}

/// Copies each coarse `(x_i, y_i)` to the fine vertices merged into `i`.
pub fn prolong(
    coarse: &ContinuousPoint,
    matching: &Matching,
    fine: &WeightedGraph,
) -> Result<ContinuousPoint> {
    if fine.n() != matching.fine_len() {
        return Err(VsepError::DimensionMismatch {
            expected: matching.fine_len(),
            found: fine.n(),
        });
    }
    let x = matching.prolong_values(coarse.x())?;
    let y = matching.prolong_values(coarse.y())?;
    ContinuousPoint::new(fine, x, y)
}

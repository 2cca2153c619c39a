//! Multi-seed benchmark runs and their CSV rows.

use std::io::Write;
use std::time::Instant;

use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::coarsen::MatchingRule;
use crate::driver::{solve, SolveOptions};
use crate::error::{Result, VsepError};
use crate::graph::WeightedGraph;

pub const CSV_COLUMNS: [&str; 11] = [
    "graph", "seed", "rule", "n", "m", "cost_S", "weight_A", "weight_B", "levels", "time_ms",
    "feasible",
];

fn rule_name<S: Serializer>(rule: &MatchingRule, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(rule.short_name())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchRow {
    pub graph: String,
    pub seed: u64,
    #[serde(serialize_with = "rule_name")]
    pub rule: MatchingRule,
    pub n: usize,
    pub m: usize,
    #[serde(rename = "cost_S")]
    pub cost_s: f64,
    #[serde(rename = "weight_A")]
    pub weight_a: f64,
    #[serde(rename = "weight_B")]
    pub weight_b: f64,
    pub levels: usize,
    pub time_ms: f64,
    pub feasible: bool,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Summary {
    pub graph: String,
    pub rule: MatchingRule,
    pub trials: usize,
    pub avg: f64,
    pub min: f64,
    pub max: f64,
}

impl Summary {
    pub fn line(&self) -> String {
        format!(
            "summary graph={} rule={} trials={} avg={} min={} max={}",
            self.graph,
            self.rule.short_name(),
            self.trials,
            self.avg,
            self.min,
            self.max
        )
    }
}

/// Parses `a..b` (inclusive), `a..=b`, a single seed, or a comma list.
pub fn parse_seeds(s: &str) -> Result<Vec<u64>> {
    let bad = || VsepError::InvalidArgument(format!("invalid seed specification '{s}'"));
    let num = |t: &str| t.trim().parse::<u64>().map_err(|_| bad());
    let s = s.trim();
    if let Some((a, b)) = s.split_once("..") {
        let a = num(a)?;
        let b = num(b.strip_prefix('=').unwrap_or(b))?;
        if a > b {
            return Err(bad());
        }
        return Ok((a..=b).collect());
    }
    s.split(',').map(num).collect()
}

/// One solve per `(graph, rule, seed)`, rows in that nested order.
pub fn run_bench(
    graphs: &[(String, WeightedGraph)],
    seeds: &[u64],
    rules: &[MatchingRule],
    base: &SolveOptions,
    jobs: usize,
) -> Result<Vec<BenchRow>> {
    let tasks: Vec<(usize, MatchingRule, u64)> = (0..graphs.len())
        .flat_map(|gi| {
            rules
                .iter()
                .flat_map(move |&r| seeds.iter().map(move |&s| (gi, r, s)))
        })
        .collect();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| VsepError::InvalidArgument(format!("cannot build worker pool: {e}")))?;
    pool.install(|| {
        tasks
            .par_iter()
            .map(|&(gi, rule, seed)| {
                let (name, g) = &graphs[gi];
                let opts = SolveOptions {
                    rule,
                    seed,
                    ..base.clone()
                };
                let t = Instant::now();
                let (part, stats) = solve(g, &opts)?;
                let time_ms = (t.elapsed().as_secs_f64() * 1e6).round() / 1e3;
                Ok(BenchRow {
                    graph: name.clone(),
                    seed,
                    rule,
                    n: g.n(),
                    m: g.num_edges(),
                    cost_s: part.cost_s,
                    weight_a: part.weight_a,
                    weight_b: part.weight_b,
                    levels: stats.depth(),
                    time_ms,
                    feasible: part.feasible,
                })
            })
            .collect()
    })
}

/// avg/min/max of `cost_S` per `(graph, rule)`, in order of first appearance.
pub fn summarize(rows: &[BenchRow]) -> Vec<Summary> {
    let mut out: Vec<(Summary, f64)> = Vec::new();
    for r in rows {
        let k = out
            .iter()
            .position(|(s, _)| s.graph == r.graph && s.rule == r.rule);
        let (s, sum) = match k {
            Some(k) => &mut out[k],
            None => {
                out.push((
                    Summary {
                        graph: r.graph.clone(),
                        rule: r.rule,
                        trials: 0,
                        avg: 0.0,
                        min: f64::INFINITY,
                        max: f64::NEG_INFINITY,
                    },
                    0.0,
                ));
                out.last_mut().unwrap()
            }
        };
        s.trials += 1;
        *sum += r.cost_s;
        s.min = s.min.min(r.cost_s);
        s.max = s.max.max(r.cost_s);
    }
    out.into_iter()
        .map(|(mut s, sum)| {
            s.avg = sum / s.trials as f64;
            s
        })
        .collect()
}

pub fn write_csv<W: Write>(out: W, rows: &[BenchRow]) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    if rows.is_empty() {
        w.write_record(CSV_COLUMNS).map_err(csv_error)?;
    }
    for r in rows {
        w.serialize(r).map_err(csv_error)?;
    }
    w.flush()?;
    Ok(())
}

fn csv_error(e: csv::Error) -> VsepError {
    match e.into_kind() {
        csv::ErrorKind::Io(e) => VsepError::Io(e),
        other => VsepError::InvalidArgument(format!("csv: {other:?}")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn row(graph: &str, seed: u64, cost: f64) -> BenchRow {
        BenchRow {
            graph: graph.into(),
            seed,
            rule: MatchingRule::HeavyEdge,
            n: 3,
            m: 2,
            cost_s: cost,
            weight_a: 1.0,
            weight_b: 1.0,
            levels: 1,
            time_ms: 0.5,
            feasible: true,
        }
    }

    #[test]
    fn seeds() {
        assert_eq!(parse_seeds("1..3").unwrap(), vec![1, 2, 3]);
        assert_eq!(parse_seeds("1..=2").unwrap(), vec![1, 2]);
        assert_eq!(parse_seeds("7").unwrap(), vec![7]);
        assert_eq!(parse_seeds("4,2").unwrap(), vec![4, 2]);
        assert_eq!(parse_seeds("1..100").unwrap().len(), 100);
        assert!(parse_seeds("3..1").is_err());
        assert!(parse_seeds("x").is_err());
    }

    #[test]
    fn csv_header_and_row() {
        let mut buf = Vec::new();
        write_csv(&mut buf, &[row("p3.graph", 1, 1.0)]).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
        assert_eq!(
            lines.next().unwrap(),
            "p3.graph,1,he,3,2,1.0,1.0,1.0,1,0.5,true"
        );

        let mut buf = Vec::new();
        write_csv(&mut buf, &[]).unwrap();
        assert_eq!(
            String::from_utf8(buf).unwrap().trim(),
            CSV_COLUMNS.join(",")
        );
    }

    #[test]
    fn summary_stats() {
        let rows = [
            row("a", 1, 3.0),
            row("b", 1, 1.0),
            row("a", 2, 4.0),
            row("a", 3, 2.0),
        ];
        let s = summarize(&rows);
        assert_eq!(s.len(), 2);
        assert_eq!(
            (s[0].trials, s[0].avg, s[0].min, s[0].max),
            (3, 3.0, 2.0, 4.0)
        );
        assert_eq!(s[1].graph, "b");
    }
}

//! Brute-force ground truth for small graphs: exhaustive orbit enumeration
//! over all configurations, attractor classification with basin sizes, and
//! predecessor queries. The stepping code here is written against packed
//! integer configurations, independent of the engine in `dynamics`.

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::dynamics::Configuration;
use crate::graph::Graph;

/// Exhaustive sweeps iterate `2^n` configurations; beyond this the budget
/// is rejected rather than attempted.
pub const EXHAUSTIVE_NODE_LIMIT: usize = 22;

/// Per-configuration tables are included only up to this size.
pub const TABLE_NODE_LIMIT: usize = 20;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("graph has {n} nodes, exhaustive budget allows at most {limit}")]
    BudgetExceeded { n: usize, limit: usize },
}

fn check_budget(g: &Graph) -> Result<(), OracleError> {
    if g.node_count() > EXHAUSTIVE_NODE_LIMIT {
        return Err(OracleError::BudgetExceeded {
            n: g.node_count(),
            limit: EXHAUSTIVE_NODE_LIMIT,
        });
    }
    Ok(())
}

/// The majority rule compiled to neighbor bitmasks over a word-packed
/// configuration.
#[derive(Debug, Clone)]
pub struct WordRule {
    masks: Vec<u32>,
    degrees: Vec<u32>,
}

impl WordRule {
    pub fn new(g: &Graph) -> Self {
        let masks = (0..g.node_count())
            .map(|u| g.neighbors(u).iter().fold(0u32, |m, &v| m | (1 << v)))
            .collect();
        let degrees = (0..g.node_count()).map(|u| g.degree(u) as u32).collect();
        Self { masks, degrees }
    }

    pub fn step(&self, x: u32) -> u32 {
        let mut next = 0u32;
        for (u, (&mask, &d)) in self.masks.iter().zip(&self.degrees).enumerate() {
            let ones = (x & mask).count_ones();
            let bit = match (2 * ones).cmp(&d) {
                std::cmp::Ordering::Greater => 1,
                std::cmp::Ordering::Equal => (x >> u) & 1,
                std::cmp::Ordering::Less => 0,
            };
            next |= bit << u;
        }
        next
    }
}

pub fn config_to_word(x: &Configuration) -> u32 {
    assert!(x.len() <= 32);
    let mut w = 0u32;
    for (i, bit) in x.iter_bits().enumerate() {
        if bit {
            w |= 1 << i;
        }
    }
    w
}

pub fn word_to_config(w: u32, n: usize) -> Configuration {
    let bits: Vec<bool> = (0..n).map(|i| (w >> i) & 1 == 1).collect();
    Configuration::from_bits(&bits)
}

fn config_string(w: u32, n: usize) -> String {
    (0..n)
        .map(|i| if (w >> i) & 1 == 1 { '1' } else { '0' })
        .collect()
}

/// Successor table `f[x] = step(x)` for all configurations.
fn step_table(g: &Graph) -> Vec<u32> {
    let rule = WordRule::new(g);
    let size = 1usize << g.node_count();
    (0..size)
        .into_par_iter()
        .map(|x| rule.step(x as u32))
        .collect()
}

struct FunctionalAnalysis {
    transient: Vec<u32>,
    period: Vec<u32>,
    /// Smallest configuration on the attractor cycle each state falls into.
    representative: Vec<u32>,
}

/// Classifies every configuration of the successor table: distance to its
/// cycle, the cycle length, and a canonical cycle representative. Makes no
/// assumption about cycle lengths.
fn analyze(f: &[u32]) -> FunctionalAnalysis {
    let size = f.len();
    let mut status = vec![0u8; size]; // 0 new, 1 on current path, 2 done
    let mut transient = vec![0u32; size];
    let mut period = vec![0u32; size];
    let mut representative = vec![0u32; size];
    let mut path_index = vec![0u32; size];
    let mut path: Vec<usize> = Vec::new();
    for start in 0..size {
        if status[start] == 2 {
            continue;
        }
        path.clear();
        let mut x = start;
        while status[x] == 0 {
            status[x] = 1;
            path_index[x] = path.len() as u32;
            path.push(x);
            x = f[x] as usize;
        }
        let (base_transient, base_period, base_rep, tail_start) = if status[x] == 1 {
            // New cycle discovered within the current path.
            let pos = path_index[x] as usize;
            let cycle = &path[pos..];
            let rep = *cycle.iter().min().unwrap() as u32;
            for &y in cycle {
                transient[y] = 0;
                period[y] = cycle.len() as u32;
                representative[y] = rep;
                status[y] = 2;
            }
            (0u32, cycle.len() as u32, rep, pos)
        } else {
            (transient[x], period[x], representative[x], path.len())
        };
        for (i, &y) in path[..tail_start].iter().enumerate().rev() {
            transient[y] = base_transient + (tail_start - i) as u32;
            period[y] = base_period;
            representative[y] = base_rep;
            status[y] = 2;
        }
    }
    FunctionalAnalysis {
        transient,
        period,
        representative,
    }
}

/// Summary of the full configuration space of one graph.
#[derive(Debug, Clone, Serialize)]
pub struct DynamicsSummary {
    pub n: usize,
    pub edge_count: usize,
    pub config_count: u64,
    pub max_transient: usize,
    pub max_period: usize,
    pub fixed_points: Vec<String>,
    /// Each period-2 attractor once, smaller state first.
    pub two_cycles: Vec<(String, String)>,
    /// `(transient, period)` per configuration in integer order; present
    /// only for graphs of at most `TABLE_NODE_LIMIT` nodes.
    #[serde(skip)]
    pub per_config: Option<Vec<(u32, u32)>>,
}

/// Iterates every configuration and aggregates orbit statistics.
pub fn enumerate_dynamics(g: &Graph) -> Result<DynamicsSummary, OracleError> {
    check_budget(g)?;
    let n = g.node_count();
    let f = step_table(g);
    let analysis = analyze(&f);
    let max_transient = analysis.transient.iter().copied().max().unwrap_or(0) as usize;
    let max_period = analysis.period.iter().copied().max().unwrap_or(1) as usize;
    let mut fixed_points = Vec::new();
    let mut two_cycles = Vec::new();
    for x in 0..f.len() {
        if analysis.transient[x] == 0 {
            match analysis.period[x] {
                1 => fixed_points.push(config_string(x as u32, n)),
                2 => {
                    let partner = f[x] as usize;
                    if x < partner {
                        two_cycles
                            .push((config_string(x as u32, n), config_string(partner as u32, n)));
                    }
                }
                _ => {}
            }
        }
    }
    let per_config = (n <= TABLE_NODE_LIMIT).then(|| {
        analysis
            .transient
            .iter()
            .zip(&analysis.period)
            .map(|(&t, &p)| (t, p))
            .collect()
    });
    Ok(DynamicsSummary {
        n,
        edge_count: g.edge_count(),
        config_count: f.len() as u64,
        max_transient,
        max_period,
        fixed_points,
        two_cycles,
        per_config,
    })
}

/// All configurations mapping onto `y` in one step.
pub fn predecessors(g: &Graph, y: &Configuration) -> Result<Vec<Configuration>, OracleError> {
    check_budget(g)?;
    assert_eq!(y.len(), g.node_count(), "configuration length mismatch");
    let target = config_to_word(y);
    let rule = WordRule::new(g);
    let size = 1u64 << g.node_count();
    let mut out = Vec::new();
    for x in 0..size {
        if rule.step(x as u32) == target {
            out.push(word_to_config(x as u32, g.node_count()));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractorInfo {
    pub period: usize,
    pub states: Vec<String>,
    /// Number of configurations whose orbit ends in this attractor,
    /// including the attractor states themselves.
    pub basin_size: u64,
}

impl AttractorInfo {
    /// An attractor nothing else falls into.
    pub fn is_isolated(&self) -> bool {
        self.basin_size == self.states.len() as u64
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct AttractorReport {
    pub n: usize,
    pub attractors: Vec<AttractorInfo>,
}

/// Lists every attractor with its period and basin size.
pub fn classify_attractors(g: &Graph) -> Result<AttractorReport, OracleError> {
    check_budget(g)?;
    let n = g.node_count();
    let f = step_table(g);
    let analysis = analyze(&f);
    let mut reps: Vec<u32> = analysis
        .representative
        .iter()
        .copied()
        .collect::<std::collections::BTreeSet<_>>()
        .into_iter()
        .collect();
    reps.sort_unstable();
    let mut attractors = Vec::with_capacity(reps.len());
    for rep in reps {
        let period = analysis.period[rep as usize] as usize;
        let mut states = Vec::with_capacity(period);
        let mut x = rep;
        for _ in 0..period {
            states.push(config_string(x, n));
            x = f[x as usize];
        }
        let basin_size = analysis
            .representative
            .iter()
            .filter(|&&r| r == rep)
            .count() as u64;
        attractors.push(AttractorInfo {
            period,
            states,
            basin_size,
        });
    }
    Ok(AttractorReport { n, attractors })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dynamics::{attractor_horizon, majority_step, orbit};
    use crate::graph;
    use proptest::prelude::*;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn single_edge_summary() {
        let g = graph::path(2).unwrap();
        let s = enumerate_dynamics(&g).unwrap();
        assert_eq!(s.max_transient, 0);
        assert_eq!(s.max_period, 2);
        let mut fps = s.fixed_points.clone();
        fps.sort();
        assert_eq!(fps, vec!["00".to_string(), "11".to_string()]);
        assert_eq!(s.two_cycles, vec![("01".to_string(), "10".to_string())]);
    }

    #[test]
    fn c4_summary() {
        let g = graph::cycle(4).unwrap();
        let s = enumerate_dynamics(&g).unwrap();
        assert_eq!(s.max_transient, 1);
        assert_eq!(s.max_period, 2);
        assert_eq!(s.fixed_points.len(), 6);
        assert_eq!(s.two_cycles.len(), 1);
        assert!(s.max_transient <= g.edge_count());
    }

    #[test]
    fn c4_alternating_predecessor() {
        let g = graph::cycle(4).unwrap();
        let preds = predecessors(&g, &"0101".parse().unwrap()).unwrap();
        assert_eq!(preds, vec!["1010".parse().unwrap()]);
    }

    #[test]
    fn c6_alternating_predecessor() {
        let g = graph::cycle(6).unwrap();
        let preds = predecessors(&g, &"010101".parse().unwrap()).unwrap();
        assert_eq!(preds, vec!["101010".parse().unwrap()]);
    }

    #[test]
    fn zeros_is_own_predecessor() {
        let g = graph::torus(&[3, 3]).unwrap();
        let zeros = Configuration::zeros(9);
        let preds = predecessors(&g, &zeros).unwrap();
        assert!(preds.contains(&zeros));
    }

    #[test]
    fn p5_only_fixed_points() {
        let g = graph::path(5).unwrap();
        let report = classify_attractors(&g).unwrap();
        assert!(report.attractors.iter().all(|a| a.period == 1));
        let total: u64 = report.attractors.iter().map(|a| a.basin_size).sum();
        assert_eq!(total, 32);
    }

    #[test]
    fn c8_unique_isolated_two_cycle() {
        let g = graph::cycle(8).unwrap();
        let report = classify_attractors(&g).unwrap();
        let cycles: Vec<_> = report.attractors.iter().filter(|a| a.period == 2).collect();
        assert_eq!(cycles.len(), 1);
        assert_eq!(cycles[0].basin_size, 2);
        assert!(cycles[0].is_isolated());
    }

    #[test]
    fn c7_no_two_cycles() {
        let g = graph::cycle(7).unwrap();
        let report = classify_attractors(&g).unwrap();
        assert!(report.attractors.iter().all(|a| a.period == 1));
    }

    #[test]
    fn budget_enforced() {
        let g = graph::path(30).unwrap();
        assert!(matches!(
            enumerate_dynamics(&g),
            Err(OracleError::BudgetExceeded { .. })
        ));
    }

    proptest! {
        #[test]
        fn word_rule_matches_engine_step(seed in 0u64..300) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..14usize);
            let g = graph::random_max_degree(n, 5, &mut rng).unwrap();
            let rule = WordRule::new(&g);
            let x = Configuration::random(n, &mut rng);
            let via_words = word_to_config(rule.step(config_to_word(&x)), n);
            prop_assert_eq!(majority_step(&g, &x).unwrap(), via_words);
        }

        #[test]
        fn summary_matches_engine_orbits(seed in 0u64..60) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = rng.gen_range(2..10usize);
            let g = graph::random_max_degree(n, 4, &mut rng).unwrap();
            let summary = enumerate_dynamics(&g).unwrap();
            let table = summary.per_config.as_ref().unwrap();
            for w in 0..(1u32 << n) {
                let x = word_to_config(w, n);
                let orb = orbit(&g, &x, attractor_horizon(&g)).unwrap();
                let (t, p) = table[w as usize];
                prop_assert_eq!(orb.transient(), t as usize);
                prop_assert_eq!(orb.period(), p as usize);
            }
        }
    }
}

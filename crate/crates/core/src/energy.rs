//! Energy functionals over orbits: the global edge-disagreement energy that
//! forces convergence, and the distance-weighted variant centered at a node
//! that bounds its two-step change count. All arithmetic is exact.

use num::{BigInt, BigRational, One, Signed, Zero};
use thiserror::Error;

use crate::dynamics::{orbit, attractor_horizon, Configuration, DynamicsError, Orbit};
use crate::graph::Graph;

#[derive(Debug, Error)]
pub enum EnergyError {
    #[error("alpha must lie strictly between 0 and 1, got {0}")]
    AlphaOutOfRange(BigRational),
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnergyKind {
    Global,
    Centered { center: usize, alpha: BigRational },
}

/// Energy values along an orbit, one per step `0 ..= transient + period`.
/// `values[t]` pairs the states at steps `t+1` and `t`.
#[derive(Debug, Clone)]
pub struct EnergySeries {
    pub kind: EnergyKind,
    pub values: Vec<BigRational>,
    pub transient: usize,
    pub period: usize,
}

/// Weight decay for the centered energy: `Δ/(Δ+2)`, or `1/2` when the
/// maximum degree is at most 3.
pub fn default_alpha(g: &Graph) -> BigRational {
    let delta = g.max_degree();
    if delta <= 3 {
        BigRational::new(BigInt::from(1), BigInt::from(2))
    } else {
        BigRational::new(BigInt::from(delta), BigInt::from(delta + 2))
    }
}

/// Terms of the energy sum: ordered edge pairs both ways plus a diagonal
/// term at every even-degree node, each tagged with its distance level
/// (always 0 for the global energy).
struct TermTable {
    /// (later-step node, earlier-step node, level)
    terms: Vec<(usize, usize, usize)>,
    levels: usize,
}

fn term_table(g: &Graph, center: Option<usize>) -> TermTable {
    let dist = center.map(|r| g.bfs_distances(r));
    let level = |u: usize, v: usize| -> usize {
        match &dist {
            Some(d) => d[u].min(d[v]),
            None => 0,
        }
    };
    let mut terms = Vec::with_capacity(2 * g.edge_count() + g.node_count());
    for &(u, v) in g.edges() {
        terms.push((u, v, level(u, v)));
        terms.push((v, u, level(u, v)));
    }
    for u in 0..g.node_count() {
        if g.degree(u) % 2 == 0 {
            terms.push((u, u, level(u, u)));
        }
    }
    let levels = terms.iter().map(|&(_, _, l)| l).max().unwrap_or(0) + 1;
    TermTable { terms, levels }
}

fn series_values(orb: &Orbit, table: &TermTable, weights: &[BigRational]) -> Vec<BigRational> {
    let len = orb.transient() + orb.period();
    let mut values = Vec::with_capacity(len + 1);
    for t in 0..=len {
        let later = orb.state(t + 1);
        let earlier = orb.state(t);
        let mut counts = vec![0u64; table.levels];
        for &(u, v, level) in &table.terms {
            if later.get(u) != earlier.get(v) {
                counts[level] += 1;
            }
        }
        let mut total = BigRational::zero();
        for (level, &count) in counts.iter().enumerate() {
            if count != 0 {
                total += &weights[level] * BigRational::from_integer(BigInt::from(count));
            }
        }
        values.push(total);
    }
    values
}

/// Global energy along the orbit of `x`.
pub fn energy_series(g: &Graph, x: &Configuration) -> Result<EnergySeries, DynamicsError> {
    let orb = orbit(g, x, attractor_horizon(g))?;
    Ok(energy_series_for(g, &orb))
}

pub fn energy_series_for(g: &Graph, orb: &Orbit) -> EnergySeries {
    let table = term_table(g, None);
    let weights = vec![BigRational::one(); table.levels];
    EnergySeries {
        kind: EnergyKind::Global,
        values: series_values(orb, &table, &weights),
        transient: orb.transient(),
        period: orb.period(),
    }
}

/// Energy centered at `r` along the orbit of `x`, with edge weights scaled
/// by `alpha` to the power of the edge's distance from `r`.
pub fn centered_energy_series(
    g: &Graph,
    x: &Configuration,
    r: usize,
    alpha: &BigRational,
) -> Result<EnergySeries, EnergyError> {
    let orb = orbit(g, x, attractor_horizon(g))?;
    centered_energy_series_for(g, &orb, r, alpha)
}

pub fn centered_energy_series_for(
    g: &Graph,
    orb: &Orbit,
    r: usize,
    alpha: &BigRational,
) -> Result<EnergySeries, EnergyError> {
    if !(alpha > &BigRational::zero() && alpha < &BigRational::one()) {
        return Err(EnergyError::AlphaOutOfRange(alpha.clone()));
    }
    let table = term_table(g, Some(r));
    let mut weights = Vec::with_capacity(table.levels);
    let mut w = BigRational::one();
    for _ in 0..table.levels {
        weights.push(w.clone());
        w *= alpha;
    }
    Ok(EnergySeries {
        kind: EnergyKind::Centered {
            center: r,
            alpha: alpha.clone(),
        },
        values: series_values(orb, &table, &weights),
        transient: orb.transient(),
        period: orb.period(),
    })
}

/// A failed exactness check on an energy series.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EnergyViolation {
    /// Drop below 1 between consecutive transient steps.
    InsufficientDecrease { t: usize },
    /// Value changed on the attractor.
    NotConstantOnAttractor { t: usize },
    /// Centered difference above `-c_r^t`.
    DecreaseBelowChange { t: usize },
    /// Total change count above the first energy value.
    TelescopeExceeded,
    NegativeValue { t: usize },
}

/// Checks that the global energy drops by at least 1 on every transient
/// step and stays constant on the attractor.
pub fn check_global_energy(series: &EnergySeries) -> Result<(), EnergyViolation> {
    let one = BigRational::one();
    for (t, v) in series.values.iter().enumerate() {
        if v.is_negative() {
            return Err(EnergyViolation::NegativeValue { t });
        }
    }
    for t in 0..series.transient {
        if &series.values[t] - &series.values[t + 1] < one {
            return Err(EnergyViolation::InsufficientDecrease { t });
        }
    }
    for t in series.transient..series.values.len() - 1 {
        if series.values[t] != series.values[t + 1] {
            return Err(EnergyViolation::NotConstantOnAttractor { t });
        }
    }
    Ok(())
}

/// Two-step change magnitude of `r` at step `t >= 1`: 1 when the states at
/// `t+1` and `t-1` differ.
fn two_step_change(orb: &Orbit, r: usize, t: usize) -> u8 {
    u8::from(orb.state(t + 1).get(r) != orb.state(t - 1).get(r))
}

/// Checks the per-step bound for the centered energy: each step's drop is
/// at least the center's two-step change, and the summed changes never
/// exceed the leading value.
pub fn check_centered_energy(
    series: &EnergySeries,
    orb: &Orbit,
    r: usize,
) -> Result<(), EnergyViolation> {
    for (t, v) in series.values.iter().enumerate() {
        if v.is_negative() {
            return Err(EnergyViolation::NegativeValue { t });
        }
    }
    let mut total_changes: u64 = 0;
    for t in 1..series.values.len() {
        let c = two_step_change(orb, r, t);
        total_changes += u64::from(c);
        let diff = &series.values[t] - &series.values[t - 1];
        if diff > -BigRational::from_integer(BigInt::from(c)) {
            return Err(EnergyViolation::DecreaseBelowChange { t });
        }
    }
    if BigRational::from_integer(BigInt::from(total_changes)) > series.values[0] {
        return Err(EnergyViolation::TelescopeExceeded);
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph;
    use num::FromPrimitive;
    use rand_chacha::rand_core::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn cfg(s: &str) -> Configuration {
        s.parse().unwrap()
    }

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn p3_attractor_energy_constant_one() {
        let g = graph::path(3).unwrap();
        let s = energy_series(&g, &cfg("101")).unwrap();
        assert_eq!(s.values[0], rat(1, 1));
        assert_eq!(s.values[1], rat(1, 1));
        check_global_energy(&s).unwrap();
    }

    #[test]
    fn zeros_energy_is_zero() {
        let g = graph::torus(&[3, 3]).unwrap();
        let s = energy_series(&g, &Configuration::zeros(9)).unwrap();
        assert!(s.values.iter().all(|v| v.is_zero()));
    }

    #[test]
    fn c4_1101_strict_drop_then_constant() {
        let g = graph::cycle(4).unwrap();
        let s = energy_series(&g, &cfg("1101")).unwrap();
        assert!(s.values[0] > s.values[1]);
        check_global_energy(&s).unwrap();
    }

    #[test]
    fn default_alpha_values() {
        assert_eq!(default_alpha(&graph::cycle(5).unwrap()), rat(1, 2));
        assert_eq!(default_alpha(&graph::torus(&[4, 4]).unwrap()), rat(4, 6));
    }

    #[test]
    fn centered_constant_on_fixed_point() {
        let g = graph::cycle(6).unwrap();
        let s = centered_energy_series(&g, &Configuration::all_ones(6), 0, &rat(1, 2)).unwrap();
        assert!(s.values.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn centered_single_edge_two_cycle_constant() {
        let g = graph::path(2).unwrap();
        let s = centered_energy_series(&g, &cfg("01"), 0, &rat(1, 3)).unwrap();
        assert!(s.values.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn alpha_range_enforced() {
        let g = graph::path(2).unwrap();
        assert!(centered_energy_series(&g, &cfg("01"), 0, &rat(1, 1)).is_err());
        assert!(centered_energy_series(&g, &cfg("01"), 0, &rat(0, 1)).is_err());
    }

    #[test]
    fn centered_inequality_on_samples() {
        for seed in 0..40u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let n = 6 + (seed as usize % 8);
            let g = graph::random_max_degree(n, 4, &mut rng).unwrap();
            let x = Configuration::random(n, &mut rng);
            let orb = orbit(&g, &x, attractor_horizon(&g)).unwrap();
            let alpha = default_alpha(&g);
            for r in 0..n {
                let s = centered_energy_series_for(&g, &orb, r, &alpha).unwrap();
                check_centered_energy(&s, &orb, r).unwrap();
            }
        }
    }

    #[test]
    fn global_energy_violation_detected_on_fudged_series() {
        let g = graph::cycle(4).unwrap();
        let mut s = energy_series(&g, &cfg("1101")).unwrap();
        s.values[1] = s.values[0].clone() + BigRational::from_i64(1).unwrap();
        assert!(check_global_energy(&s).is_err());
    }
}

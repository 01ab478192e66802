//! Synchronous majority dynamics: configurations, the update rule, orbit
//! computation with attractor detection, and two-step change tracking.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::graph::Graph;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum DynamicsError {
    #[error("configuration has {got} bits, graph has {expected} nodes")]
    LengthMismatch { expected: usize, got: usize },
    #[error("horizon {horizon} is below the attractor bound {required}")]
    HorizonTooSmall { horizon: usize, required: usize },
    #[error("no attractor of period at most 2 within {steps} steps (period {period} repeat seen)")]
    PeriodBound { steps: usize, period: usize },
    #[error("malformed configuration text: {0}")]
    Parse(String),
}

/// One opinion bit per node, packed into 64-bit words.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Configuration {
    len: usize,
    words: Vec<u64>,
}

impl Configuration {
    pub fn zeros(len: usize) -> Self {
        Self {
            len,
            words: vec![0; len.div_ceil(64)],
        }
    }

    pub fn all_ones(len: usize) -> Self {
        let mut c = Self::zeros(len);
        for w in &mut c.words {
            *w = u64::MAX;
        }
        c.mask_tail();
        c
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mut c = Self::zeros(bits.len());
        for (i, &b) in bits.iter().enumerate() {
            c.set(i, b);
        }
        c
    }

    pub fn random<R: Rng>(len: usize, rng: &mut R) -> Self {
        let mut c = Self::zeros(len);
        for w in &mut c.words {
            *w = rng.gen();
        }
        c.mask_tail();
        c
    }

    fn mask_tail(&mut self) {
        let rem = self.len % 64;
        if rem != 0 {
            if let Some(last) = self.words.last_mut() {
                *last &= (1u64 << rem) - 1;
            }
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, i: usize) -> bool {
        debug_assert!(i < self.len);
        (self.words[i / 64] >> (i % 64)) & 1 == 1
    }

    #[inline]
    pub fn set(&mut self, i: usize, value: bool) {
        debug_assert!(i < self.len);
        let word = &mut self.words[i / 64];
        let bit = 1u64 << (i % 64);
        if value {
            *word |= bit;
        } else {
            *word &= !bit;
        }
    }

    /// Number of nodes holding opinion 1.
    pub fn count_ones(&self) -> usize {
        self.words.iter().map(|w| w.count_ones() as usize).sum()
    }

    pub fn complemented(&self) -> Self {
        let mut c = self.clone();
        for w in &mut c.words {
            *w = !*w;
        }
        c.mask_tail();
        c
    }

    pub fn iter_bits(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.len {
            f.write_str(if self.get(i) { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Configuration({self})")
    }
}

impl FromStr for Configuration {
    type Err = DynamicsError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let mut c = Configuration::zeros(s.len());
        for (i, ch) in s.chars().enumerate() {
            match ch {
                '0' => {}
                '1' => c.set(i, true),
                other => {
                    return Err(DynamicsError::Parse(format!(
                        "unexpected character {other:?} at position {i}"
                    )))
                }
            }
        }
        Ok(c)
    }
}

fn check_len(g: &Graph, x: &Configuration) -> Result<(), DynamicsError> {
    if x.len() != g.node_count() {
        return Err(DynamicsError::LengthMismatch {
            expected: g.node_count(),
            got: x.len(),
        });
    }
    Ok(())
}

/// One synchronous update: each node adopts the strict majority of its
/// neighbors and keeps its state on a tie (possible only at even degree).
pub fn majority_step(g: &Graph, x: &Configuration) -> Result<Configuration, DynamicsError> {
    check_len(g, x)?;
    let mut next = Configuration::zeros(x.len());
    for u in 0..g.node_count() {
        let ones = g.neighbors(u).iter().filter(|&&v| x.get(v)).count();
        let d = g.degree(u);
        let bit = match (2 * ones).cmp(&d) {
            std::cmp::Ordering::Greater => true,
            std::cmp::Ordering::Equal => x.get(u),
            std::cmp::Ordering::Less => false,
        };
        next.set(u, bit);
    }
    Ok(next)
}

/// Smallest horizon guaranteed to reach the attractor: the transient is at
/// most the edge count and the period at most 2.
pub fn attractor_horizon(g: &Graph) -> usize {
    g.edge_count() + 2
}

/// A computed orbit: the visited states through one full period past the
/// transient, plus the detected transient length and period.
#[derive(Debug, Clone)]
pub struct Orbit {
    states: Vec<Configuration>,
    transient: usize,
    period: usize,
}

impl Orbit {
    pub fn transient(&self) -> usize {
        self.transient
    }

    pub fn period(&self) -> usize {
        self.period
    }

    /// States `x^0 ..= x^(transient + period)`.
    pub fn states(&self) -> &[Configuration] {
        &self.states
    }

    /// Index of `x^t` inside `states`, folding attractor times by parity.
    pub fn state_index(&self, t: usize) -> usize {
        if t <= self.transient + self.period {
            t
        } else {
            self.transient + (t - self.transient) % self.period
        }
    }

    pub fn state(&self, t: usize) -> &Configuration {
        &self.states[self.state_index(t)]
    }
}

/// Iterates the majority rule until the attractor repeats. The fast path
/// compares against the previous two states; a full-history fallback turns
/// any longer repeat into an explicit error instead of looping forever.
pub fn orbit(g: &Graph, x: &Configuration, horizon: usize) -> Result<Orbit, DynamicsError> {
    check_len(g, x)?;
    let required = attractor_horizon(g);
    if horizon < required {
        return Err(DynamicsError::HorizonTooSmall { horizon, required });
    }
    let mut states = vec![x.clone()];
    let mut seen: HashMap<Configuration, usize> = HashMap::new();
    seen.insert(x.clone(), 0);
    for t in 1..=horizon {
        let next = majority_step(g, &states[t - 1])?;
        if next == states[t - 1] {
            states.push(next);
            return Ok(Orbit {
                states,
                transient: t - 1,
                period: 1,
            });
        }
        if t >= 2 && next == states[t - 2] {
            states.push(next);
            return Ok(Orbit {
                states,
                transient: t - 2,
                period: 2,
            });
        }
        if let Some(&prev) = seen.get(&next) {
            return Err(DynamicsError::PeriodBound {
                steps: t,
                period: t - prev,
            });
        }
        seen.insert(next.clone(), t);
        states.push(next);
    }
    Err(DynamicsError::PeriodBound {
        steps: horizon,
        period: 0,
    })
}

/// State after `t` steps, evaluated by parity on the attractor instead of
/// iterating `t` times.
pub fn state_at(g: &Graph, x: &Configuration, t: usize) -> Result<Configuration, DynamicsError> {
    let orb = orbit(g, x, attractor_horizon(g))?;
    Ok(orb.state(t).clone())
}

/// A recorded change in the two-step dynamics: the node first holds `state`
/// at step `time` within its parity class (`x^time != x^(time-2)`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChangeEntry {
    pub state: bool,
    pub time: usize,
}

/// Per-node change times split by parity. Entries start at time 2; the
/// anchors at times 0 and 1 belong to the certificate layer.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct NodeChanges {
    pub even: Vec<ChangeEntry>,
    pub odd: Vec<ChangeEntry>,
}

impl NodeChanges {
    pub fn count(&self) -> usize {
        self.even.len() + self.odd.len()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChangeLog {
    pub nodes: Vec<NodeChanges>,
}

impl ChangeLog {
    pub fn max_count(&self) -> usize {
        self.nodes.iter().map(NodeChanges::count).max().unwrap_or(0)
    }
}

/// Records, per node, every step `s >= 2` with `x^s != x^(s-2)`. On the
/// attractor the two-step dynamics is constant, so the log is complete
/// after scanning one period past the transient.
pub fn two_step_changes(g: &Graph, x: &Configuration) -> Result<ChangeLog, DynamicsError> {
    let orb = orbit(g, x, attractor_horizon(g))?;
    Ok(change_log_for(&orb))
}

pub fn change_log_for(orb: &Orbit) -> ChangeLog {
    let n = orb.states()[0].len();
    let mut nodes = vec![NodeChanges::default(); n];
    let last = orb.transient() + 1;
    for s in 2..=last {
        let cur = orb.state(s);
        let prev = orb.state(s - 2);
        for (u, entry) in nodes.iter_mut().enumerate() {
            let state = cur.get(u);
            if state != prev.get(u) {
                let list = if s % 2 == 0 { &mut entry.even } else { &mut entry.odd };
                list.push(ChangeEntry { state, time: s });
            }
        }
    }
    ChangeLog { nodes }
}

//! One-round local certification: a prover assigns per-node certificates,
//! every node checks them against its own input and its neighbors'
//! certificates, and the instance is accepted only if every node accepts.
//!
//! Certificates are plain data so that dishonest assignments can be
//! constructed and attacked; see [`fuzz`].

pub mod count_ones;
pub mod fuzz;
pub mod pred;
pub mod prediction;

use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::dynamics::DynamicsError;

#[derive(Debug, Error)]
pub enum ProveError {
    #[error("honest prover refuses a NO instance: {0}")]
    NotAYesInstance(String),
    #[error("size bound {n_bound} is below the node count {n}")]
    BoundTooSmall { n_bound: usize, n: usize },
    #[error("instance time must be at least 1")]
    ZeroTime,
    #[error(transparent)]
    Dynamics(#[from] DynamicsError),
}

/// Why a node rejected. Composite-protocol rejections name the failing
/// sub-protocol.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum RejectReason {
    MalformedCertificate { detail: String },
    /// Reconstructed time-0 state disagrees with the node's input.
    BadAnchor,
    /// Reconstructed orbit violates the majority rule at this step.
    MajorityMismatch { time: usize },
    /// Reconstructed orbit misses the claimed target state.
    TargetMismatch,
    /// Neighbors claim a different tree root.
    RootDisagreement,
    /// A node holding the claimed root identifier has bad root fields.
    BadRootFields,
    /// No neighbor matches the claimed parent at the right depth.
    MissingParent,
    /// Count does not equal own bit plus the children's counts.
    SubtreeCountMismatch,
    /// Root count differs from the claimed total.
    RootCountMismatch,
    /// Neighbors disagree on a bundle-wide field.
    BundleDisagreement { field: &'static str },
    /// The certified one-count does not exceed half the certified size.
    MajorityClaimFailed,
    /// A sub-protocol of a composite scheme rejected.
    Sub {
        protocol: &'static str,
        reason: Box<RejectReason>,
    },
}

impl fmt::Display for RejectReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::MalformedCertificate { detail } => write!(f, "malformed certificate: {detail}"),
            Self::BadAnchor => write!(f, "time-0 state differs from input"),
            Self::MajorityMismatch { time } => write!(f, "majority rule violated at time {time}"),
            Self::TargetMismatch => write!(f, "orbit misses the claimed target"),
            Self::RootDisagreement => write!(f, "neighbors disagree on the root"),
            Self::BadRootFields => write!(f, "root fields are inconsistent"),
            Self::MissingParent => write!(f, "no neighbor matches the claimed parent"),
            Self::SubtreeCountMismatch => write!(f, "subtree count mismatch"),
            Self::RootCountMismatch => write!(f, "root count differs from the claimed total"),
            Self::BundleDisagreement { field } => write!(f, "neighbors disagree on {field}"),
            Self::MajorityClaimFailed => write!(f, "certified ones are not a strict majority"),
            Self::Sub { protocol, reason } => write!(f, "{protocol}: {reason}"),
        }
    }
}

/// Per-node accept/reject outcome of one verification round.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub node_count: usize,
    /// Rejecting nodes with their reasons, ascending by node.
    pub rejections: Vec<(usize, RejectReason)>,
}

impl Verdict {
    pub fn from_node_results(results: Vec<Result<(), RejectReason>>) -> Self {
        let node_count = results.len();
        let rejections = results
            .into_iter()
            .enumerate()
            .filter_map(|(v, r)| r.err().map(|reason| (v, reason)))
            .collect();
        Self {
            node_count,
            rejections,
        }
    }

    /// Global acceptance: every node accepted.
    pub fn all_accept(&self) -> bool {
        self.rejections.is_empty()
    }

    pub fn rejecting_nodes(&self) -> Vec<usize> {
        self.rejections.iter().map(|&(v, _)| v).collect()
    }
}

/// Ceiling of the base-2 logarithm; 0 for inputs of 0 or 1.
pub fn ceil_log2(x: u128) -> usize {
    if x <= 1 {
        0
    } else {
        (128 - (x - 1).leading_zeros()) as usize
    }
}

/// Bits for one change entry under the logical encoding: one state bit
/// plus a time field covering `[0, N^2]`.
pub fn change_entry_bits(n_bound: usize) -> usize {
    let n2 = (n_bound as u128) * (n_bound as u128);
    1 + ceil_log2(n2 + 1)
}

/// Logical size of a change-list certificate with the given number of
/// non-anchor entries: the two anchors count too.
pub fn change_list_bits(change_count: usize, n_bound: usize) -> usize {
    (2 + change_count) * change_entry_bits(n_bound)
}

/// Identifier and count fields are charged `ceil(log2 N)` bits each.
pub fn id_field_bits(n_bound: usize) -> usize {
    ceil_log2(n_bound as u128)
}

/// Logical size of a spanning-tree counting certificate entry.
pub fn tree_entry_bits(n_bound: usize) -> usize {
    4 * id_field_bits(n_bound)
}

/// Total and per-node-maximum logical certificate sizes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct SizeReport {
    pub total_bits: usize,
    pub max_node_bits: usize,
}

impl SizeReport {
    pub fn from_node_bits(bits: impl IntoIterator<Item = usize>) -> Self {
        let mut total = 0;
        let mut max = 0;
        for b in bits {
            total += b;
            max = max.max(b);
        }
        Self {
            total_bits: total,
            max_node_bits: max,
        }
    }
}

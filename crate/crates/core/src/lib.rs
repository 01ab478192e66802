//! Majority-vote dynamics on finite graphs, with one-round local
//! certification protocols, lower-bound gadget constructions, and a
//! brute-force enumeration oracle.

pub mod analysis;
pub mod certify;
pub mod corpus;
pub mod dynamics;
pub mod energy;
pub mod gadgets;
pub mod graph;
pub mod oracle;
pub mod seed;

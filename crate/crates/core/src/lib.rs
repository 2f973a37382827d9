//! Census engine for Cayley digraphs on small finite groups.
//!
//! The crate enumerates connection sets `S` of a finite group `R`, computes the
//! full automorphism group of each Cayley digraph `Γ(R, S)`, and classifies it
//! as a digraphical regular representation (DRR), a normal Cayley digraph, or a
//! non-normal one. Around that engine sit brute-force checkers for the counting
//! facts the classification rests on: invariant-digraph counts, fixed-subset
//! counts, partition-fixing subgroups, odd and normal quotients, and the
//! explicit upper bounds on non-DRR counts.
//!
//! Runnable walkthroughs of each capability live in the crate's `examples/`
//! directory; the `cayley-census` binary exposes the same operations on the
//! command line.

pub mod autgrp;
pub mod bitset;
pub mod census;
pub mod cli;
pub mod digraph;
pub mod error;
pub mod groups;
pub mod lemmalab;
pub mod partition;
pub mod perm;
pub mod quotient;

pub use autgrp::{automorphism_group, brute_force_automorphisms, canonical_form, CanonicalCode};
pub use census::{BoundKind, BoundParams, CensusRecord, CensusSummary, Classification};
pub use digraph::{cayley, ColoredDigraph, ConnectionSet};
pub use error::{Error, Result};
pub use groups::{FiniteGroup, GroupSpec};
pub use partition::BlockPartition;
pub use perm::{PermGroup, Permutation};

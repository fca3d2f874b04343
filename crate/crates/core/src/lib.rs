//! Partial spreads of finite projective spaces.
//!
//! A partial `(t−1)`-spread of PG(n−1, q) is a set of `t`-dimensional
//! subspaces of GF(q)^n meeting pairwise only in zero. This crate computes
//! exact upper and lower bounds on the largest such set, builds sets that
//! attain the classical lower bound, turns them into vector space partitions
//! and checks hyperplane counting identities on them, emits checkable
//! certificates for the upper bound argument, and runs exhaustive search at
//! small parameters.
//!
//! * [`gf`]: finite fields GF(p^e) and extensions.
//! * [`linalg`]: matrices, canonical subspaces, subspace enumeration.
//! * [`bounds`]: exact integer bounds and the best-known table.
//! * [`construct`]: spread construction and verification.
//! * [`partition`]: partitions, hyperplane profiles, Heden's cases, certificates.
//! * [`search`]: branch-and-bound and greedy search.
//! * [`cli`]: the `spreadlab` command.

pub mod bounds;
pub mod cli;
pub mod construct;
pub mod gf;
pub mod json;
pub mod linalg;
pub mod partition;
pub mod search;

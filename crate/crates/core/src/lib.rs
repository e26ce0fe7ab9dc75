#![no_std]

//! Stackelberg equilibrium solvers for large general-sum games.
//!
//! The crate is `no_std` and only needs `alloc`. It contains:
//!
//! - [`game`]: explicit bimatrix games, best responses, and the exact
//!   solvers (one LP per follower action, maximin, Nash support enumeration).
//! - [`lp`]: a dense two-phase simplex and a constraint-generation loop
//!   driven by a [`lp::SeparationOracle`].
//! - [`incentive`]: incentive games where the leader may also commit to a
//!   sparse bonus on follower sets, solved exactly through one LP.
//! - [`matching`]: the permuted matching game, its greedy 1/12-approximate
//!   leader strategy, and the 3D-matching reduction.
//! - [`discretize`]: the epsilon-grid approximate solver.
//! - [`gen`]: seeded instance generators backed by [`rng::XorShift64Star`].

extern crate alloc;

pub mod discretize;
pub mod game;
pub mod gen;
pub mod incentive;
pub mod linalg;
pub mod lp;
pub mod matching;
pub mod rng;
pub mod shortest_path;

/// Two payoffs closer than this are treated as equal.
pub const TIE_TOL: f64 = 1e-9;

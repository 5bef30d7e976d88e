//! Exact list `H`-colouring partition functions.
//!
//! Given a simple graph `G`, a target multigraph `H` (loops allowed), lists
//! `L_v ⊆ V(H)` and rational weights `w_{v,h}`, the crate computes
//!
//! ```text
//! p(x) = Σ_f ∏_v w_{v,f(v)} x_{f(v)}
//! ```
//!
//! over all homomorphisms `f: G → H` with `f(v) ∈ L_v`, together with its
//! counting, min-cost and decision specialisations. Three engines are provided:
//! [`hcol::hcol`] (branch-and-reduce, subexponential on `P_t`-free graphs when no
//! two colours of `H` share two neighbours), [`dp::dp_solve`] (dynamic
//! programming over a path-decomposition built from an uncle tree) and
//! [`oracle::brute_force_solve`] (plain enumeration, for testing).
//!
//! ```
//! use homcount::{hcol, CountSemiring, HColConfig, Instance, SimpleGraph, TargetGraph};
//!
//! let c5 = SimpleGraph::from_edges(5, &[(0, 1), (1, 2), (2, 3), (3, 4), (0, 4)]).unwrap();
//! let inst = Instance::unweighted(c5, 3);
//! let (count, stats) = hcol(&inst, &TargetGraph::complete(3), &HColConfig::default(), &CountSemiring).unwrap();
//! assert_eq!(count.to_string(), "30");
//! assert!(stats.nodes >= 1);
//! ```

pub mod cli;
pub mod decomposition;
pub mod dp;
pub mod error;
pub mod graph;
pub mod hcol;
pub mod io;
pub mod oracle;
pub mod semiring;

pub use error::SolveError;
pub use graph::{Instance, ListAssignment, SimpleGraph, TargetGraph, WeightTable};
pub use hcol::{hcol, HColConfig, RecursionStats};
pub use semiring::{
    Cost, CountSemiring, DecisionSemiring, MinCostSemiring, PartitionPolynomial, PolynomialSemiring, Semiring,
    SemiringKind,
};

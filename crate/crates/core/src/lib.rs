//! Satisfiability, model checking and model compression for two-variable
//! term modal logic: modalities are indexed by agent variables that
//! quantifiers can bind, over increasing-agent Kripke structures.
//!
//! The pipeline: translate increasing-agent satisfiability to constant-agent
//! satisfiability ([`translate::tr1`] with the monotonicity guard
//! [`translate::gamma`]), reduce predicates to propositions
//! ([`translate::tr2`]), rewrite into the combined modal/two-variable normal
//! form ([`normalform::to_fsnf`]), bound the number of agents needed by a
//! type-based model compression ([`typesys`]), and decide satisfiability by
//! grounding quantifiers over a finite agent set and running a multimodal
//! tableau ([`decide::solve`]). A brute-force bounded-model oracle
//! ([`semantics::oracle_sat`]) provides ground truth for differential tests.

pub mod decide;
pub mod fixtures;
pub mod gen;
pub mod model;
pub mod normalform;
pub mod semantics;
pub mod syntax;
pub mod translate;
pub mod typesys;

pub use model::{Assignment, KripkeModel, TreeModel};
pub use syntax::{Formula, ParseMode};

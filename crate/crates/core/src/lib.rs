//! Uncertain bisimilarity and apartness for partially known state machines.
//!
//! The crate works with three kinds of finite systems: partial Mealy
//! machines, suspension automata (the model class of ioco testing) and
//! finite powerset systems. On top of them it decides
//!
//! * uncertain bisimilarity and apartness, with shortest separating words,
//! * ioco compatibility,
//! * lax, oplax and strict morphisms, kernels and restriction,
//! * whether two states can be merged by a lax morphism,
//! * simulations in the Hughes–Jacobs and open-map styles, including joint
//!   simulators for uncertain-bisimilar states,
//!
//! and provides the observation-tree substrate of active automata learning.
//!
//! ```
//! use apartness::{bisim, fixtures, systems::disjoint_union_all};
//!
//! let machines = fixtures::four_machines();
//! let (u, _) = disjoint_union_all(&machines.iter().collect::<Vec<_>>()).unwrap();
//! let p0 = u.state_index("p.p0").unwrap();
//! let r0 = u.state_index("r.r0").unwrap();
//! let w = bisim::apartness_witness(&u, p0, r0).unwrap().unwrap();
//! assert_eq!(w.display(&u).to_string(), "j a b");
//! ```

pub mod bisim;
pub mod cli;
pub mod error;
pub mod fixtures;
pub mod format;
pub mod generate;
pub mod learning;
pub mod lifting;
pub mod morphisms;
pub mod relation;
pub mod simulation;
pub mod systems;

pub use error::{Error, Result};
pub use relation::Relation;
pub use systems::{
    Alphabet, Coalgebra, Machine, PartialMealy, PowersetSystem, Successor, SuspensionAutomaton, TotalMealy,
};

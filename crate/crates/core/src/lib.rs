//! Computable order theory at desk scale.
//!
//! Quasi-orders are consumed as oracles ([`QuasiOrder`]). On top of them the
//! crate builds the Hoare and Smyth orders on finite subsets, Alexandroff and
//! upper topologies with effectively open and closed set codes, true stages of
//! injections, the staged partial orders driven by them, and explicit
//! non-stabilizing chains of closed sets, each with a checker.

pub mod code;
pub mod csc;
pub mod finset;
pub mod order;
pub mod powerset;
pub mod powerspace;
pub mod reversal;
pub mod true_stages;
pub mod xi;

pub use finset::FinSet;
pub use order::{
    build_order, BadPrefix, BaseOrder, Direction, FiniteOrder, OrderError, OrderSpec, QuasiOrder, Relation,
    Search,
};
pub use powerset::{power_order, Mode, PowerOrder, Shape, SymbolicSubset};
pub use true_stages::{Injection, InjectionError};

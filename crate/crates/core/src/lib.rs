//! Regular path queries over labeled directed graphs under minimal-walk
//! semantics, with a 3-SAT gadget compiler and a verification harness for
//! the hardness construction.

pub mod engine;
pub mod error;
pub mod graph;
pub mod reduction;
pub mod regex;
pub mod semantics;
pub mod verify;

pub use engine::{Dominance, MatchLength, ProductState, Query};
pub use error::{Error, Result};
pub use graph::{bag_lt, set_lt, Color, ColorMap, Edge, EdgeBag, Graph, GraphDocument, Step, Walk};
pub use regex::{parse, Nfa, RegExp};
pub use semantics::Membership;

//! Finite-state generation of controlled natural language explanations for
//! verification traces.

pub mod clause;
pub mod fsm;
pub mod monitor;
pub mod pipeline;
pub mod render;
pub mod rewrite;
pub mod spec;

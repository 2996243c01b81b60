//! Sound static analysis of programs that build code as strings and run it
//! with `eval`.
//!
//! String values are abstracted by minimal deterministic automata. When an
//! `eval` argument is reached, the automaton of its possible values is turned
//! into a control-flow graph over abstract statements, which is abstracted
//! further and analysed recursively.

#![allow(clippy::should_implement_trait, clippy::type_complexity)]

pub mod imp;
pub mod automata;
pub mod domains;
pub mod cfg;
pub mod label;
pub mod synth;
pub mod concrete;
pub mod code_abs;
pub mod analyzer;
pub mod par;

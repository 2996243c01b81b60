//! Value abstractions: signs, boolean sets and automata combined as a
//! coalesced sum, memories over them, and the collecting domain used as
//! an oracle.

pub mod boolval;
pub mod collecting;
pub mod eval;
pub mod expr;
pub mod memory;
pub mod sign;
pub mod value;

pub use boolval::BoolVal;
pub use collecting::{eval_concrete, CollectingMemory, Store};
pub use eval::{
    bulk_sign, digit_strings, eval_abstract, eval_abstract_expr, eval_collecting, eval_collecting_expr, leaf_values, SortMismatch,
    Transfer,
};
pub use expr::AbsExpr;
pub use memory::AbstractMemory;
pub use sign::Sign;
pub use value::{Bounds, ConcreteValue, Value};

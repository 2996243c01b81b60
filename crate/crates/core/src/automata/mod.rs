//! Deterministic automata over printable ASCII: the string abstraction
//! and the input of the abstract parser.

pub mod dfa;
pub mod dot;
pub mod extended;
pub mod nfa;
pub mod ops;
pub mod regex;
pub mod scc;
pub mod widen;

pub use dfa::{alphabet, chr, sym, AlphabetError, Dfa, ALPHABET_LEN};
pub use extended::{ExtendedDfa, Symbol};
pub use ops::{substr_clamped, substring_overapprox, IndexInfo};
pub use scc::{tarjan_scc, MultiEntryCycle, Scc};
pub use widen::widen;

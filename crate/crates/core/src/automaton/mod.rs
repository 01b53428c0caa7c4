//! Automata with rational output, read most-significant digit first.

mod dfao;
mod format;
mod kernel;

pub use dfao::{digits, AutomaticSet, Dfao, Digit};
pub use format::{parse_dfao, serialize_dfao};
pub use kernel::{kernel_system, KernelSystem};

pub mod automaton;
pub mod cayley;
pub mod catalog;
pub mod cli;
pub mod encoding;
pub mod error;
pub mod genfunc;
pub mod geometry;
pub mod regularity;

pub use cayley::{Basis, CayleyPermutation};
pub use encoding::{Encoding, Mode};
pub use error::{Error, Result};

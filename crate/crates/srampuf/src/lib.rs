pub mod analysis;
pub mod bits;
pub mod ecc;
pub mod error;
pub mod fuzzy;
pub mod rng;
pub mod seeding;
pub mod sram;

pub use error::{Error, Result};

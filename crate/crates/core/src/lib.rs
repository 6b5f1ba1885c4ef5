pub mod balls;
pub mod error;
pub mod expmap;
pub mod lie;
pub mod oracle;
pub mod padic;
pub mod quotient;
pub mod verify;

pub use error::{Error, Result};

pub mod cli;
pub mod error;
pub mod quadrature;
pub mod special;
pub mod testfn;

pub use error::{Error, Result};
pub mod padic;
pub mod weil;
pub mod zeta;

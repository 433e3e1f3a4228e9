pub mod algebra;
pub mod backend;
pub mod stabilizer;
pub mod quotient;
pub mod tree;
pub mod verify;
pub mod error;
pub mod expr;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/backends.md")]
    mod backends {}
    #[doc = include_str!("../../../book/src/tree.md")]
    mod tree {}
    #[doc = include_str!("../../../book/src/stabilizers.md")]
    mod stabilizers {}
    #[doc = include_str!("../../../book/src/quotients.md")]
    mod quotients {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub mod blocking;
pub mod census;
pub mod conics;
pub mod cover;
pub mod curve;
pub mod error;
pub mod gf;
pub mod pencil;
pub mod plane;

pub use error::{Error, Result};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/fields.md")]
    mod fields {}
    #[doc = include_str!("../../../book/src/plane.md")]
    mod plane {}
    #[doc = include_str!("../../../book/src/curves.md")]
    mod curves {}
    #[doc = include_str!("../../../book/src/pencil.md")]
    mod pencil {}
    #[doc = include_str!("../../../book/src/conics.md")]
    mod conics {}
    #[doc = include_str!("../../../book/src/census.md")]
    mod census {}
    #[doc = include_str!("../../../book/src/cover.md")]
    mod cover {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}

pub mod arith;
pub mod catalog;
pub mod construct;
pub mod discform;
pub mod e8;
pub mod embedding;
pub mod error;
pub mod lattice;
pub mod matrix;
pub mod moduli;
pub mod normal_form;
pub mod squares;
pub mod verify;

pub use error::{Error, Result};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/lattices.md")]
    mod lattices {}
    #[doc = include_str!("../../../book/src/discriminant-forms.md")]
    mod discriminant_forms {}
    #[doc = include_str!("../../../book/src/embeddings.md")]
    mod embeddings {}
    #[doc = include_str!("../../../book/src/moduli.md")]
    mod moduli {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
}

//! Exact calculus for the complex power `(x1 ... xn)_+^lambda` near `lambda = -1`.
//!
//! The crate is organised bottom-up:
//!
//! - [`weyl`]: normal-ordered differential operators with rational coefficients.
//! - [`dist`]: tensor products of one-variable distributions (delta derivatives
//!   and canonical finite parts) with the operator action.
//! - [`laurent`]: the Laurent expansion of the product power at `lambda = -1`.
//! - [`annih`]: annihilating generator sets, exact verification and
//!   bounded-degree completeness checks.
//! - [`oracle`]: floating-point pairings, local zeta samples and Laurent fits
//!   used to cross-check the symbolic results.
//!
//! ```
//! use normcross::laurent::expand_product;
//!
//! let exp = expand_product(2, 0).unwrap();
//! assert_eq!(exp.coeff(-2).unwrap().to_string(), "2 d(x1) d(x2)");
//! ```

pub mod annih;
pub mod dist;
mod error;
pub mod laurent;
pub mod oracle;
pub mod scalar;
pub mod weyl;

pub use error::{Error, Result};
pub use scalar::Scalar;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/weyl.md")]
    mod weyl {}
    #[doc = include_str!("../../../book/src/distributions.md")]
    mod distributions {}
    #[doc = include_str!("../../../book/src/laurent.md")]
    mod laurent {}
    #[doc = include_str!("../../../book/src/annihilators.md")]
    mod annihilators {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
    #[doc = include_str!("../../../README.md")]
    mod readme {}
}

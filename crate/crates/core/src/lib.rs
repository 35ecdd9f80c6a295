pub mod data;
pub mod diagnostics;
pub mod error;
pub mod linear;
pub mod nonlinear;
pub mod oracle;
pub mod quad;
pub mod runner;
pub mod special;
pub mod spectral;

pub use error::{Error, Result};

/// Chapters of the user guide, compiled here so their examples run as doc tests.
pub mod guide {
    #[doc = include_str!("../../../book/src/overview.md")]
    pub mod overview {}
    #[doc = include_str!("../../../book/src/spectral.md")]
    pub mod spectral {}
    #[doc = include_str!("../../../book/src/initial_data.md")]
    pub mod initial_data {}
    #[doc = include_str!("../../../book/src/linear.md")]
    pub mod linear {}
    #[doc = include_str!("../../../book/src/nonlinear.md")]
    pub mod nonlinear {}
    #[doc = include_str!("../../../book/src/special.md")]
    pub mod special {}
    #[doc = include_str!("../../../book/src/diagnostics.md")]
    pub mod diagnostics {}
    #[doc = include_str!("../../../book/src/oracle.md")]
    pub mod oracle {}
    #[doc = include_str!("../../../book/src/cli.md")]
    pub mod cli {}
}

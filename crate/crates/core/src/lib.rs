//! Explicit equations for Groebner strata of monomial ideals.
//!
//! Given a finite set of corner exponents and a monomial order, this crate
//! writes down the ideal cutting out every reduced Groebner basis with that
//! set of leading monomials, computes its Zariski tangent space at the
//! monomial ideal, eliminates the linearly solvable coordinates and checks
//! the results against a direct Buchberger criterion.

pub mod error;
pub mod monomials;
pub mod oracle;
pub mod par;
pub mod pipeline;
pub mod poly;
pub mod scheme;
pub mod standard_set;
pub mod tangent;
pub mod ufamily;

pub use monomials::{Exponent, MonomialOrder, OrderKind, OrderSpec};
pub use par::Exec;
pub use error::{Error, Result};
pub use pipeline::{run, JobConfig, Report};
pub use poly::{Poly, Rational, TVar, Var, VarTable};
pub use scheme::{build_scheme, BuildOptions, GenTag, Generator, SchemeIdeal};
pub use standard_set::{validate_corners, EdgeTriple, NuStrategy, StandardSet};
pub use tangent::{eliminate, tangent_space, EmbeddedPresentation, TangentReport};
pub use ufamily::Mode;

//! Rational Dunkl calculus.
//!
//! The crate is layered bottom-up:
//!
//! * [`root_system`] – roots, reflections, Weyl group closure, the weight
//!   `ω(x) = ∏ |⟨α,x⟩|^{k_α}` and the support geometry (`D_r^W`, orbit hulls).
//! * [`poly`] and [`dunkl_poly`] – exact sparse polynomials over ℚ, Dunkl
//!   operators, the intertwining operator `V`, polynomial generalized
//!   translation, truncated kernel series and Dunkl derivatives of rational
//!   functions.
//! * [`numeric`] – quadrature adapted to `ω`, the Dunkl kernel, the Dunkl
//!   transform, numeric translation, convolution, mollifiers and support
//!   diagnostics.
//! * [`symbols`] – elliptic symbols, reciprocal symbols, parametrices, Sobolev
//!   norms and the spectral regularity experiment.
//! * [`riesz`] – type-A Riesz distributions and the Dunkl–Laplace transform.
//! * [`suites`] – named verification suites and convergence tables used by the
//!   `dunkl` command-line tool and the acceptance tests.

pub mod error;
pub mod numeric;
pub mod poly;
pub mod dunkl_poly;
pub mod rational;
pub mod report;
pub mod riesz;
pub mod root_system;
pub mod suites;
pub mod symbols;
pub mod testfn;

pub use error::{DunklError, Result};
pub use poly::{Monomial, Poly};
pub use rational::Q;
pub use root_system::{GroupElement, Multiplicity, RootSystem, RootSystemName};

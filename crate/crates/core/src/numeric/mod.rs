//! Floating-point layer: special functions, quadrature, kernels, transforms.

pub mod frame;
pub mod grid;
pub mod kernel;
pub mod mehta;
pub mod planar;
pub mod quadrature;
pub mod special;
pub mod support;
pub mod transform;

pub use frame::{FactorKind, Frame, FrameFactor};
pub use grid::{Domain, FactorSpec, GridFn, QuadratureGrid};
pub use kernel::{rank1_kernel, KernelEvaluator, KernelStrategy, KernelValue};
pub use mehta::{mehta_closed_form, mehta_constant, mehta_factorized, MehtaEstimate};
pub use support::{verify_support, SupportKind, SupportReport};
pub use transform::DunklTransform;

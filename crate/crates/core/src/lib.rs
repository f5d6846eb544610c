//! Weighted σ_k-curvature calculus on manifolds with density.
//!
//! The crate is layered bottom-up:
//!
//! * [`wsym`]: weighted elementary symmetric functions σ_k^∞(μ₀; μ), weighted
//!   Newton transformations and negative elliptic cones.
//! * [`tensor`]: frame-level curvature algebra (Newton tensors, the S̃_k
//!   obstruction, curvature contractions).
//! * [`geom`]: model backends (Euclidean, flat torus, round sphere), exactly
//!   differentiable fields and quadrature rules.
//! * [`functionals`]: the 𝒲_k and Ŵ_k functionals, their variations,
//!   divergence identities, soliton checks and spectral gaps.

pub mod ad;
pub mod error;
pub mod functionals;
pub mod geom;
pub mod sampling;
pub mod tensor;
pub mod wsym;

pub use error::{Error, Result};
pub use functionals::{DensityConfig, HatWCoeffs, Mode, VariationPath};
pub use geom::{Backend, BackendKind, Field, PolyField, QuadSpec, QuadratureRule, SphereField, TrigField};
pub use tensor::{Cotton3, Curv4, PointCurvature, Sym2};
pub use wsym::{ConeReport, SymPair, WeightedSpectrum};

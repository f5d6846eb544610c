//! Model backends, exactly differentiable fields and quadrature.

pub mod backend;
pub mod field;
pub mod quadrature;

pub use backend::{point_curvature, scale_metric, sphere_gradient, sphere_hessian, tangent_frame, Backend, BackendKind};
pub use field::{Field, Jet, PolyField, SphereField, TrigField, TrigTerm};
pub use quadrature::{pairwise_sum, quadrature, unit_sphere_volume, QuadSpec, QuadratureRule};

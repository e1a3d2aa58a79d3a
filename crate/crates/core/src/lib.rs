//! Exact arithmetic on rational right triangles of a fixed area `A`.
//!
//! Triangles are tracked by their parameter `t = tan(α/2)` and combined by
//! straightedge-style constructions (doubling, addition, subtraction,
//! halving). The congruent number curve `y² = x³ - A²x` serves as an
//! independent check on every construction. Everything is exact: no
//! floating point is used anywhere.

pub mod arith;
pub mod construction;
pub mod curve;
pub mod descent;
pub mod error;
pub mod field;
pub mod param;
pub mod quad;
pub mod square_class;

pub use arith::{parse_rat, rational_sqrt, Rat};
pub use construction::{
    add_params, double_int_triangle, double_param, halve_param, iterate_double, sub_params, Halved,
};
pub use curve::{
    isogeny, phi, phi_inv, psi_map, triangle_from_point, CongruentCurve, Curve, CurvePoint, Point,
};
pub use descent::{
    coset_candidates, generators, reduce, search_params, w_map, Decomposition, RepresentativeSet,
    WImage,
};
pub use error::{Error, Result};
pub use field::Field;
pub use param::{
    associate, membership, param_from_triangle, primitive_normalize, triangle_from_param,
    CongruentParam, Member, Param, ParamOrIdentity, Triangle,
};
pub use quad::{conj_diff_triangle, conj_sum_triangle, QuadPoint, QuadRat, QuadTriangle};
pub use square_class::{class_mul, squarefree_class, FactorBound, SquareClass};

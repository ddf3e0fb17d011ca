//! Modular polynomials mod P, Hecke images of plane curves, and the
//! group-theoretic counts around them.

pub mod bipoly;
pub mod curves;
pub mod groups;
pub mod modpoly;

pub use bipoly::BiPoly;
pub use curves::{
    contained_in_image, hecke_image_curve, hecke_image_polynomial, image_degree_bound, is_stabilized, is_stabilized_exact,
    PlaneCurve,
};
pub use modpoly::{
    check_fixed_point, compute_modular_polynomial, consistent_across, crt_lift, fixed_points, psi, FixedPoints,
    ModularPolynomial, SampleOptions,
};
pub use groups::{
    group_orders, minimal_index_bound, scalar_count_brute, sl2_order_brute, squares_claim, type_finiteness, GroupOrders,
};

//! Imaginary quadratic function fields, orders and binary quadratic forms over A = F_q[T].

pub mod counting;
pub mod field;
pub mod forms;
pub mod order;

pub use counting::{cebotarev_count, cebotarev_window, count_cm_points, orders_up_to, pic_window_constants, CebotarevCount};
pub use field::{boundh, hasse_weil, imaginary_discriminants, is_imaginary, Case, ImagQuadField};
pub use forms::{count_classes, enumerate_reduced_forms, FormClassGroup, QuadForm};
pub use order::{j_valuation_estimate, log_bq, JValuation, QuadOrder};

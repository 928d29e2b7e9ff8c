//! Decomposition templates, `log U` in Hall coordinates, order checks, the
//! scaled 1-norm error measure and the named-coefficient catalog.

pub mod catalog;
mod eval;
mod params;
pub mod recursive;
mod template;

#[cfg(test)]
mod tests;

pub use catalog::{catalog, lookup, CatalogEntry};
pub use eval::{
    default_tolerance, epsilon, epsilon_value, epsilon_with_tolerance, log_dense, log_scheme,
    order_conditions, verify_order, ErrorReport, OrderingError, TIE_TOLERANCE,
};
pub use params::{ParamAssignment, Provenance, SchemeDocument};
pub use recursive::{suzuki_recursive, yoshida_recursive};
pub use template::{Chart, Factor, Family, LinExpr, Scheme, Slot};

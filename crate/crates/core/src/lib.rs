//! Clean flexes of functions on the circle.
//!
//! The crate works with trigonometric Chebyshev spaces and the functions
//! they osculate: flexes are zeros of the space's disconjugate operator
//! applied to `u`, and a flex is clean when its osculating polynomial
//! supports `u` from one side with a connected contact set. The same
//! machinery, applied to the support function of a convex curve, yields
//! vertices, and an osculating-conic layer yields sextactic points.

pub mod angle;
pub mod census;
pub mod chebyshev;
pub mod curves;
pub mod error;
pub mod funcmodel;
pub mod jet;
pub mod osculation;
pub mod smooth;

pub use census::{
    bose_tally, clean_flex_census, operator_sign_change_check, sign_change_count, BoseTally,
    CensusReport, TheoremCheck,
};
pub use chebyshev::{
    apply_disconjugate, count_zeros, hermite_interpolate, DisconjugateOperator, HermiteData,
    SpaceDescriptor, TrigPoly,
};
pub use curves::{
    curvature_radius, curve_from_support, doubly_tangent_conic, osculating_circle, osculating_conic,
    sextactic_scan, vertex_scan, Circle, Conic, ConicClass, SextacticRecord, Side, SupportCurve,
    VertexRecord,
};
pub use error::{Error, Result};
pub use funcmodel::{
    evaluate_with_derivatives, find_zeros, near_zero_components, sup_of_ratio, Arc, Catalog,
    GridProfile, PeriodicFunction, Zero,
};
pub use jet::Jet;
pub use osculation::{
    axiom_audit, classify_flex, contact_profile, flex_scan, minimal_function,
    osculating_polynomial, AxiomReport, ContactEntry, ContactProfile, FlexKind, FlexRecord,
    MinimalFunctionResult, Multiplicity,
};
pub use smooth::{Parity, Smooth};

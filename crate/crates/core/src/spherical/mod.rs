//! Spherically symmetric invariant connections on `ℝ × ℝ³∖{0}` with `M_2`
//! as the noncommutative fibre.

pub mod ansatz;
pub mod expr;
pub mod fields;
pub mod gauge;

pub use ansatz::{
    decomposition_along_section, decomposition_form, radial_gauge_form, radial_gauge_form_at,
    rotation_invariance_defect, singular_gauge_form, singular_gauge_form_at, su2_lift,
    Intertwiners, SamplePoint, TangentData,
};
pub use expr::Expr;
pub use fields::{passive_gauge_transform, symmetric_gauge_transform, AnsatzFields, FieldValues};
pub use gauge::{
    local_gauge_transform, local_transition, AxialU1Gauge, AxisProductGauge, Chart, ConstantGauge,
    FnGauge, GaugeFunction, LocalNCOneForm, ProductGauge, RadialU1Gauge, TrigExpGauge,
};

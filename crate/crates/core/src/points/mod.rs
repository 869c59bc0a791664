//! Point schemes, point modules and the periods they predict.

pub mod period;
pub mod scheme;

pub use period::{
    point_module, point_module_over, predict_period, transport_point_module, verify_shift_law, PeriodReport,
    PeriodSource, SyzygyWitness,
};
pub use scheme::{enumerate_point_scheme, orbit_length, OrbitLength, PointScheme, ProjPoint};

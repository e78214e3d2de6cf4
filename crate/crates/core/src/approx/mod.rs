//! Disc-side approximation, the boundary fit, and the two approximation pipelines.

mod mergelyan;
mod pipeline;
mod taylor;

pub use mergelyan::{
    mergelyan_step, ArnoldiPolynomial, DomainPoint, Evaluate, MergelyanFit, ERROR_REFINEMENT, ORTHONORMALITY_TOLERANCE,
    SAMPLES_PER_DEGREE,
};
pub(crate) use pipeline::grid_max;
pub use pipeline::{
    bar_infinite_disc_approx, default_dilation, disc_bar_finite_approx, disc_chordal_approx, infinity_schedule,
    theorem1_pipeline, theorem2_pipeline, ApproximationReport, DiscApproximation, PipelineControls, VerificationGrid,
    DEFAULT_MAGNITUDE, DEFAULT_VERIFY_BOUNDARY, DEFAULT_VERIFY_INTERIOR,
};
pub use taylor::{taylor_truncate, DOUBLING_TOLERANCE};

//! Contextual fraction of empirical models, Born-rule models of qubit states
//! in `(n, 2, 2)` Bell scenarios, and a contextuality-based entanglement
//! measure for two-qubit states.

pub mod entanglement;
pub mod error;
pub mod fraction;
pub mod linalg;
pub mod lp;
pub mod notation;
pub mod quantum;
pub mod scenario;

pub use entanglement::{
    distinguished_cf, equatorial_sweep, monotonicity_check, phase_rotation_equivalence,
    state_scenario, theta_curve, threshold_entropy, CurvePoint, DistinguishedResult,
    EquatorialScenario, MonotonicityReport, SweepGrid,
};
pub use error::{Error, Result};
pub use fraction::{build_cf_lp, contextual_fraction, is_noncontextual, CfResult};
pub use linalg::{Mat2, C64};
pub use lp::{solve_lp, LpProblem, LpSolution, LpStatus};
pub use quantum::{
    bloch_ket, born_model, diag_state, entanglement_entropy, ghz_state, reduced_density,
    schmidt_decompose, separable_witness, BellScenario, BlochBasis, DensityMatrix2, PartySettings,
    PureState, SchmidtForm,
};
pub use scenario::{
    fixture_model, marginalize, mix_models, validate_model, EmpiricalModel, GlobalDistribution,
    JointOutcome, MeasurementScenario, Violation,
};

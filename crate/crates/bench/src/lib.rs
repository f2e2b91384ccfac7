//! Inputs shared by the benchmarks.

use std::f64::consts::FRAC_PI_8;

use ctxfrac::{born_model, ghz_state, EmpiricalModel, EquatorialScenario};

/// GHZ state of `n` qubits measured in the equatorial bases at `pi/8` and `5pi/8`.
pub fn ghz_model(n: usize) -> EmpiricalModel {
    let sc = EquatorialScenario::new(FRAC_PI_8, 5.0 * FRAC_PI_8)
        .bell_scenario(n)
        .expect("valid party count");
    born_model(&ghz_state(n).expect("valid qubit count"), &sc).expect("matching sizes")
}

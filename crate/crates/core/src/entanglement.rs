//! Contextual fraction as an entanglement measure for two qubits.
//!
//! Every two-qubit state is `(U_A ⊗ U_B)|diag; θ, 0⟩`. Measuring it in the
//! state-dependent scenario where each party uses `{B_{π/8}, B_{5π/8}}`
//! rotated by its Schmidt unitary yields exactly the model of
//! `|diag; θ, π/4⟩` under `S(B_x, B_y)`. The contextual fraction of that
//! model depends on `θ` alone and is the distinguished contextual fraction.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI, SQRT_2, TAU};
use std::io::{self, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::fraction::contextual_fraction;
use crate::quantum::{
    born_model, diag_state, diagonal_entropy, entanglement_entropy, ghz_state, random_state,
    schmidt_decompose, wrap_phi, BellScenario, BlochBasis, PartySettings, PureState,
};
use crate::scenario::EmpiricalModel;

pub const DEFAULT_GRID: usize = 64;
pub const DEFAULT_CURVE_POINTS: usize = 201;
pub const DEFAULT_MONOTONICITY_SAMPLES: usize = 1000;
pub const DEFAULT_SEED: u64 = 42;

/// Slack allowed when comparing contextual fractions of two states.
pub const MONOTONICITY_TOL: f64 = 1e-6;

/// `S(B(π/2, φ₁), B(π/2, φ₂))`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EquatorialScenario {
    pub phi1: f64,
    pub phi2: f64,
}

impl EquatorialScenario {
    pub fn new(phi1: f64, phi2: f64) -> Self {
        Self {
            phi1: wrap_phi(phi1),
            phi2: wrap_phi(phi2),
        }
    }

    pub fn bell_scenario(&self, parties: usize) -> Result<BellScenario> {
        BellScenario::symmetric(
            BlochBasis::equatorial(self.phi1),
            BlochBasis::equatorial(self.phi2),
            parties,
        )
    }
}

/// The scenario `S_ψ`: `{B_{π/8}, B_{5π/8}}` rotated by each party's Schmidt unitary.
pub fn state_scenario(psi: &PureState) -> Result<BellScenario> {
    let f = schmidt_decompose(psi)?;
    let pair = PartySettings::new(BlochBasis::pi8(), BlochBasis::five_pi8());
    BellScenario::new(vec![pair.rotated(f.u_a), pair.rotated(f.u_b)])
}

/// The model of `|diag; θ, π/4⟩` under `S(B_x, B_y)`.
pub fn distinguished_model(theta: f64) -> Result<EmpiricalModel> {
    let sc = BellScenario::symmetric(BlochBasis::x(), BlochBasis::y(), 2)?;
    born_model(&diag_state(theta, FRAC_PI_4)?, &sc)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DistinguishedResult {
    /// Schmidt angle, canonical range `[0, π/2]`.
    pub theta: f64,
    pub entropy: f64,
    pub cf: f64,
}

/// Distinguished contextual fraction of a two-qubit state.
pub fn distinguished_cf(psi: &PureState) -> Result<DistinguishedResult> {
    let theta = schmidt_decompose(psi)?.theta;
    distinguished_cf_at(theta)
}

/// Same as [`distinguished_cf`] for a state with Schmidt angle `theta`.
pub fn distinguished_cf_at(theta: f64) -> Result<DistinguishedResult> {
    let cf = contextual_fraction(&distinguished_model(theta)?)?.cf;
    Ok(DistinguishedResult {
        theta,
        entropy: diagonal_entropy(theta),
        cf,
    })
}

/// Entropy threshold `S_th = ¼[6 + √2 log₂(3 − 2√2)]`, the entropy at `θ = π/4`.
pub fn threshold_entropy() -> f64 {
    0.25 * (6.0 + SQRT_2 * (3.0 - 2.0 * SQRT_2).log2())
}

#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub name: String,
    pub start: f64,
    pub stop: f64,
    pub points: usize,
    /// Whether `stop` itself is a grid point.
    pub inclusive: bool,
}

impl Axis {
    pub fn periodic(name: &str, period: f64, points: usize) -> Self {
        Self {
            name: name.into(),
            start: 0.0,
            stop: period,
            points,
            inclusive: false,
        }
    }

    pub fn closed(name: &str, start: f64, stop: f64, points: usize) -> Self {
        Self {
            name: name.into(),
            start,
            stop,
            points,
            inclusive: true,
        }
    }

    pub fn value(&self, i: usize) -> f64 {
        let steps = if self.inclusive {
            self.points - 1
        } else {
            self.points
        };
        self.start + (self.stop - self.start) * i as f64 / steps as f64
    }
}

/// Values on a 2-D grid, row-major (`rows` axis outer).
#[derive(Debug, Clone, PartialEq)]
pub struct SweepGrid {
    pub rows: Axis,
    pub cols: Axis,
    pub cf: Vec<f64>,
    pub entropy: Option<Vec<f64>>,
}

impl SweepGrid {
    pub fn cf_at(&self, i: usize, j: usize) -> f64 {
        self.cf[i * self.cols.points + j]
    }

    /// Largest cf value and its grid position (first in row-major order).
    pub fn argmax(&self) -> (usize, usize, f64) {
        let (k, v) =
            self.cf
                .iter()
                .enumerate()
                .fold((0, f64::NEG_INFINITY), |(bk, bv), (k, &v)| {
                    if v > bv {
                        (k, v)
                    } else {
                        (bk, bv)
                    }
                });
        (k / self.cols.points, k % self.cols.points, v)
    }

    /// Strict local maxima of `cf` on the grid treated as a torus.
    ///
    /// Cells whose values agree within `tol` and touch (8-neighbourhood) form a
    /// plateau; a plateau counts once, represented by its first cell in
    /// row-major order, when all cells bordering it are lower by more than `tol`.
    pub fn periodic_local_maxima(&self, tol: f64) -> Vec<(usize, usize)> {
        let (nr, nc) = (self.rows.points, self.cols.points);
        let mut seen = vec![false; nr * nc];
        let mut out = Vec::new();
        for start in 0..nr * nc {
            if seen[start] {
                continue;
            }
            let level = self.cf[start];
            let mut stack = vec![start];
            seen[start] = true;
            let mut members = vec![start];
            let mut is_max = true;
            while let Some(k) = stack.pop() {
                let (i, j) = (k / nc, k % nc);
                for di in [nr - 1, 0, 1] {
                    for dj in [nc - 1, 0, 1] {
                        if di == 0 && dj == 0 {
                            continue;
                        }
                        let nk = ((i + di) % nr) * nc + (j + dj) % nc;
                        let v = self.cf[nk];
                        if (v - level).abs() <= tol {
                            if !seen[nk] {
                                seen[nk] = true;
                                members.push(nk);
                                stack.push(nk);
                            }
                        } else if v > level {
                            is_max = false;
                        }
                    }
                }
            }
            if is_max {
                let first = *members.iter().min().expect("plateau is non-empty");
                out.push((first / nc, first % nc));
            }
        }
        out.sort_unstable();
        out
    }

    /// Folds a grid that repeats every `points / divisor` cells along both axes
    /// onto one period. Returns `None` if the values do not repeat within `tol`
    /// or the point counts are not divisible.
    pub fn fold_periodic(&self, divisor: usize, tol: f64) -> Option<SweepGrid> {
        let (nr, nc) = (self.rows.points, self.cols.points);
        if divisor == 0 || nr % divisor != 0 || nc % divisor != 0 {
            return None;
        }
        let (pr, pc) = (nr / divisor, nc / divisor);
        for i in 0..nr {
            for j in 0..nc {
                if (self.cf_at(i, j) - self.cf_at(i % pr, j % pc)).abs() > tol {
                    return None;
                }
            }
        }
        let fold_axis = |a: &Axis, p: usize| Axis {
            stop: a.start + (a.stop - a.start) / divisor as f64,
            points: p,
            ..a.clone()
        };
        let pick = |layer: &[f64]| -> Vec<f64> {
            (0..pr)
                .flat_map(|i| (0..pc).map(move |j| (i, j)))
                .map(|(i, j)| layer[i * nc + j])
                .collect()
        };
        Some(SweepGrid {
            rows: fold_axis(&self.rows, pr),
            cols: fold_axis(&self.cols, pc),
            cf: pick(&self.cf),
            entropy: self.entropy.as_deref().map(pick),
        })
    }

    /// CSV with header `<rows>,<cols>[,entropy],cf`, row-major.
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        let mut header = format!("{},{}", self.rows.name, self.cols.name);
        if self.entropy.is_some() {
            header.push_str(",entropy");
        }
        header.push_str(",cf");
        writeln!(out, "{header}")?;
        for i in 0..self.rows.points {
            for j in 0..self.cols.points {
                let k = i * self.cols.points + j;
                write!(out, "{},{}", self.rows.value(i), self.cols.value(j))?;
                if let Some(e) = &self.entropy {
                    write!(out, ",{}", e[k])?;
                }
                writeln!(out, ",{}", self.cf[k])?;
            }
        }
        Ok(())
    }
}

fn check_grid(n: usize, what: &str) -> Result<()> {
    if n < 2 {
        return Err(Error::InvalidArgument(format!(
            "{what} must be at least 2, got {n}"
        )));
    }
    Ok(())
}

/// Contextual fraction of `subject` under `S(B(π/2, φ₁), B(π/2, φ₂))` for
/// `φ₁, φ₂` on a uniform `grid_n × grid_n` grid over `[0, 2π)²`.
pub fn equatorial_sweep(subject: &PureState, grid_n: usize) -> Result<SweepGrid> {
    check_grid(grid_n, "grid size")?;
    let rows = Axis::periodic("phi1", TAU, grid_n);
    let cols = Axis::periodic("phi2", TAU, grid_n);
    let cf = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|k| {
            let sc = EquatorialScenario::new(rows.value(k / grid_n), cols.value(k % grid_n))
                .bell_scenario(subject.n_qubits())?;
            Ok(contextual_fraction(&born_model(subject, &sc)?)?.cf)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SweepGrid {
        rows,
        cols,
        cf,
        entropy: None,
    })
}

/// [`equatorial_sweep`] of the two-qubit GHZ state.
pub fn ghz_equatorial_sweep(grid_n: usize) -> Result<SweepGrid> {
    equatorial_sweep(&ghz_state(2)?, grid_n)
}

/// Entropy and contextual fraction of `|diag; θ, φ⟩` under `S(B_x, B_y)`.
pub fn diagonal_point(theta: f64, phi: f64) -> Result<(f64, f64)> {
    let sc = BellScenario::symmetric(BlochBasis::x(), BlochBasis::y(), 2)?;
    let cf = contextual_fraction(&born_model(&diag_state(theta, phi)?, &sc)?)?.cf;
    Ok((diagonal_entropy(theta), cf))
}

/// [`diagonal_point`] over `θ ∈ [0, π]` (closed, `grid_n` points) and
/// `φ ∈ [0, 2π)` (`grid_n` points).
pub fn diagonal_sweep(grid_n: usize) -> Result<SweepGrid> {
    check_grid(grid_n, "grid size")?;
    let rows = Axis::closed("theta", 0.0, PI, grid_n);
    let cols = Axis::periodic("phi", TAU, grid_n);
    let points = (0..grid_n * grid_n)
        .into_par_iter()
        .map(|k| diagonal_point(rows.value(k / grid_n), cols.value(k % grid_n)))
        .collect::<Result<Vec<_>>>()?;
    let (entropy, cf) = points.into_iter().unzip();
    Ok(SweepGrid {
        rows,
        cols,
        cf,
        entropy: Some(entropy),
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub theta: f64,
    pub entropy: f64,
    pub cf: f64,
}

/// Distinguished contextual fraction along `θ ∈ [0, π/2]`.
pub fn theta_curve(points: usize) -> Result<Vec<CurvePoint>> {
    check_grid(points, "point count")?;
    let axis = Axis::closed("theta", 0.0, FRAC_PI_2, points);
    (0..points)
        .into_par_iter()
        .map(|k| {
            let r = distinguished_cf_at(axis.value(k))?;
            Ok(CurvePoint {
                theta: r.theta,
                entropy: r.entropy,
                cf: r.cf,
            })
        })
        .collect()
}

/// Extends a `[0, π/2]` curve to `[0, π]` using the `θ ↔ π − θ` symmetry.
pub fn mirror_curve(curve: &[CurvePoint]) -> Vec<CurvePoint> {
    let mut out = curve.to_vec();
    let last = curve.last().map_or(0.0, |p| p.theta);
    out.extend(
        curve
            .iter()
            .rev()
            .filter(|p| p.theta < last)
            .map(|p| CurvePoint {
                theta: PI - p.theta,
                ..*p
            }),
    );
    out
}

pub fn write_curve_csv<W: Write>(curve: &[CurvePoint], mut out: W) -> io::Result<()> {
    writeln!(out, "theta,entropy,cf")?;
    for p in curve {
        writeln!(out, "{},{},{}", p.theta, p.entropy, p.cf)?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityViolation {
    pub pair: usize,
    pub higher: DistinguishedResult,
    pub lower: DistinguishedResult,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonotonicityReport {
    pub seed: u64,
    pub samples: usize,
    pub violations: Vec<MonotonicityViolation>,
}

impl MonotonicityReport {
    pub fn write_csv<W: Write>(&self, mut out: W) -> io::Result<()> {
        writeln!(out, "seed,samples,violations")?;
        writeln!(
            out,
            "{},{},{}",
            self.seed,
            self.samples,
            self.violations.len()
        )
    }
}

/// Checks `S(ψ) > S(χ) ⇒ cf(ψ) ≥ cf(χ) − tol` on `samples` random state pairs.
pub fn monotonicity_check(samples: usize, seed: u64) -> Result<MonotonicityReport> {
    check_grid(samples, "sample count")?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let pairs: Vec<(PureState, PureState)> = (0..samples)
        .map(|_| (random_state(2, &mut rng), random_state(2, &mut rng)))
        .collect();
    let evaluated = pairs
        .par_iter()
        .map(|(a, b)| Ok((evaluate(a)?, evaluate(b)?)))
        .collect::<Result<Vec<_>>>()?;
    let violations = evaluated
        .into_iter()
        .enumerate()
        .filter_map(|(pair, (a, b))| {
            let (hi, lo) = if a.entropy >= b.entropy {
                (a, b)
            } else {
                (b, a)
            };
            (hi.entropy > lo.entropy && hi.cf < lo.cf - MONOTONICITY_TOL).then_some(
                MonotonicityViolation {
                    pair,
                    higher: hi,
                    lower: lo,
                },
            )
        })
        .collect();
    Ok(MonotonicityReport {
        seed,
        samples,
        violations,
    })
}

fn evaluate(psi: &PureState) -> Result<DistinguishedResult> {
    let mut r = distinguished_cf(psi)?;
    r.entropy = entanglement_entropy(psi)?;
    Ok(r)
}

/// Max entrywise difference between `|diag; θ, 0⟩` under
/// `S(B(π/2, varphi), B(π/2, π/2 + varphi))` and `|diag; θ, −2 varphi⟩` under
/// `S(B_x, B_y)`.
///
/// Shifting every measurement azimuth by `+varphi` is the same as rotating the
/// state by `−varphi` about z on each qubit, which moves the relative phase of
/// a diagonal state by `−2 varphi`. The opposite sign gives the same model
/// only up to relabelling outcomes, see [`conjugate_phase_model`].
pub fn phase_rotation_equivalence(theta: f64, varphi: f64) -> Result<f64> {
    let (phi1, phi2) = (0.0, FRAC_PI_2);
    let rotated = EquatorialScenario::new(phi1 + varphi, phi2 + varphi).bell_scenario(2)?;
    let plain = EquatorialScenario::new(phi1, phi2).bell_scenario(2)?;
    let a = born_model(&diag_state(theta, 0.0)?, &rotated)?;
    let b = born_model(&diag_state(theta, -2.0 * varphi)?, &plain)?;
    a.max_deviation(&b)
}

/// The model of `|diag; θ, −φ⟩` under `S(B_x, B_y)` equals that of
/// `|diag; θ, φ⟩` with the outcomes of every `B_y` measurement swapped
/// (complex conjugation maps `B_y` onto itself with its kets exchanged).
/// Returns the max entrywise deviation of that identity.
pub fn conjugate_phase_model(theta: f64, phi: f64) -> Result<f64> {
    let sc = BellScenario::symmetric(BlochBasis::x(), BlochBasis::y(), 2)?;
    let plus = born_model(&diag_state(theta, phi)?, &sc)?;
    let minus = born_model(&diag_state(theta, -phi)?, &sc)?;
    // y measurements are a2 and b2
    let relabelled = plus.reverse_outcomes(1)?.reverse_outcomes(3)?;
    minus.max_deviation(&relabelled)
}

/// Random `(θ, varphi)` pairs for the phase-rotation check.
pub fn random_angle_pairs(count: usize, seed: u64) -> Vec<(f64, f64)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| (rng.random_range(0.0..=PI), rng.random_range(0.0..TAU)))
        .collect()
}

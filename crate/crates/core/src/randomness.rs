//! Born-rule joint distributions, min-entropy, and noise scans.
//!
//! The randomness pipeline: a state and a measurement frame generate the 32
//! joint outcome probabilities P(abc|xy); the largest of them is the
//! adversary's guessing probability, and -log2 of it the certified
//! min-entropy. For the white-noise family measured in its optimal frame the
//! maximum has the closed form (1+sqrt2) p/8 + 1/8, which serves as the
//! achievable lower curve against the moment-matrix upper bound.

use std::io::Write;

use crate::bell::{bell_coefficient, quantum_bound, white_noise_optimal_frame, MeasurementFrame};
use crate::error::{Error, Result};
use crate::fmt_sig;
use crate::linalg::{CMatrix, C64};
use crate::npa::{npa_upper_bound, NpaParams};
use crate::pauli::{white_noise_state, BlochVector, DensityMatrix};

const SQRT2: f64 = std::f64::consts::SQRT_2;

/// Entry bound slack tolerated before clamping into [0, 1].
const PROB_CLAMP_TOL: f64 = 1e-12;
/// Tolerance on each input pair's total probability.
const NORMALIZATION_TOL: f64 = 1e-10;
/// Tolerance on the no-signaling marginal comparisons.
const NO_SIGNALING_TOL: f64 = 1e-10;

/// The ten measurement projectors of a frame, indexed by setting and
/// outcome; outcome index 0 is the +1 outcome, M = (I + A)/2, and index 1
/// its complement.
pub struct ProjectorSet {
    pub alice: [[CMatrix; 2]; 2],
    pub bob: [[CMatrix; 2]; 2],
    pub charlie: [CMatrix; 2],
}

fn outcome_pair(direction: &BlochVector) -> [CMatrix; 2] {
    let half = C64::new(0.5, 0.0);
    let obs = direction.observable();
    [
        CMatrix::identity(2).add(&obs).scale(half),
        CMatrix::identity(2).sub(&obs).scale(half),
    ]
}

/// Spectral projectors of all five measurements in the frame.
pub fn projectors(frame: &MeasurementFrame) -> ProjectorSet {
    ProjectorSet {
        alice: [outcome_pair(&frame.a), outcome_pair(&frame.a_prime)],
        bob: [outcome_pair(&frame.b), outcome_pair(&frame.b_prime)],
        charlie: outcome_pair(&frame.c),
    }
}

/// Joint conditional distribution P(abc|xy) over the two binary inputs of
/// Alice and Bob (Charlie's single input is implicit).
#[derive(Clone, Debug)]
pub struct JointDistribution {
    probs: [f64; 32],
}

impl JointDistribution {
    /// Flat index of P(abc|xy); outcome arguments are the measured values
    /// +1 or -1.
    pub fn index(a: i8, b: i8, c: i8, x: u8, y: u8) -> usize {
        debug_assert!(a.abs() == 1 && b.abs() == 1 && c.abs() == 1 && x < 2 && y < 2);
        let bit = |s: i8| if s == 1 { 0 } else { 1 };
        ((((x as usize * 2 + y as usize) * 2 + bit(a)) * 2 + bit(b)) * 2) + bit(c)
    }

    /// Validates and clamps a raw probability table. Entries may stray
    /// outside [0, 1] by at most 1e-12; each input pair must be normalized
    /// to 1e-10; and the outcome marginals shared with Charlie must not
    /// depend on the other party's input (no-signaling) to 1e-10.
    pub fn from_probs(raw: [f64; 32]) -> Result<JointDistribution> {
        let mut probs = raw;
        for (i, v) in probs.iter_mut().enumerate() {
            if !(-PROB_CLAMP_TOL..=1.0 + PROB_CLAMP_TOL).contains(v) {
                return Err(Error::Validation(format!(
                    "probability entry {i} out of range: {v}"
                )));
            }
            *v = v.clamp(0.0, 1.0);
        }
        let outcomes = [1i8, -1];
        for x in 0..2u8 {
            for y in 0..2u8 {
                let mut total = 0.0;
                for &a in &outcomes {
                    for &b in &outcomes {
                        for &c in &outcomes {
                            total += probs[Self::index(a, b, c, x, y)];
                        }
                    }
                }
                if (total - 1.0).abs() > NORMALIZATION_TOL {
                    return Err(Error::Validation(format!(
                        "input pair ({x},{y}) sums to {total}, not 1"
                    )));
                }
            }
        }
        // No-signaling: the (a, c) marginal cannot depend on Bob's input,
        // nor the (b, c) marginal on Alice's.
        for &a in &outcomes {
            for &c in &outcomes {
                for x in 0..2u8 {
                    let marg = |y: u8| -> f64 {
                        outcomes
                            .iter()
                            .map(|&b| probs[Self::index(a, b, c, x, y)])
                            .sum()
                    };
                    if (marg(0) - marg(1)).abs() > NO_SIGNALING_TOL {
                        return Err(Error::Validation(format!(
                            "no-signaling violated: (a={a}, c={c}) marginal depends on y at x={x}"
                        )));
                    }
                }
            }
        }
        for &b in &outcomes {
            for &c in &outcomes {
                for y in 0..2u8 {
                    let marg = |x: u8| -> f64 {
                        outcomes
                            .iter()
                            .map(|&a| probs[Self::index(a, b, c, x, y)])
                            .sum()
                    };
                    if (marg(0) - marg(1)).abs() > NO_SIGNALING_TOL {
                        return Err(Error::Validation(format!(
                            "no-signaling violated: (b={b}, c={c}) marginal depends on x at y={y}"
                        )));
                    }
                }
            }
        }
        Ok(JointDistribution { probs })
    }

    pub fn prob(&self, a: i8, b: i8, c: i8, x: u8, y: u8) -> f64 {
        self.probs[Self::index(a, b, c, x, y)]
    }

    pub fn probs(&self) -> &[f64; 32] {
        &self.probs
    }

    /// Largest joint outcome probability over all inputs: the adversary's
    /// guessing probability for this distribution.
    pub fn max_probability(&self) -> f64 {
        self.probs.iter().cloned().fold(f64::NEG_INFINITY, f64::max)
    }

    /// The Bell functional evaluated directly on the probabilities.
    pub fn bell_value(&self) -> f64 {
        let outcomes = [1i8, -1];
        let mut total = 0.0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                for &a in &outcomes {
                    for &b in &outcomes {
                        for &c in &outcomes {
                            total += bell_coefficient(a, b, c, x, y)
                                * self.probs[Self::index(a, b, c, x, y)];
                        }
                    }
                }
            }
        }
        total
    }
}

/// Born-rule distribution of a three-qubit state measured in a frame.
/// Validation failures here indicate numerical inconsistency, not bad input:
/// exact Born probabilities always satisfy the distribution invariants.
pub fn born_distribution(
    rho: &DensityMatrix,
    frame: &MeasurementFrame,
) -> Result<JointDistribution> {
    if rho.num_qubits() != 3 {
        return Err(Error::InvalidInput(format!(
            "need a three-qubit state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let sets = projectors(frame);
    let mut probs = [0.0f64; 32];
    let outcomes = [1i8, -1];
    let bit = |s: i8| if s == 1 { 0usize } else { 1 };
    for x in 0..2u8 {
        for y in 0..2u8 {
            for &a in &outcomes {
                for &b in &outcomes {
                    for &c in &outcomes {
                        let m = sets.alice[x as usize][bit(a)]
                            .kron(&sets.bob[y as usize][bit(b)])
                            .kron(&sets.charlie[bit(c)]);
                        let z = rho.matrix().trace_product(&m);
                        if z.im.abs() > 1e-9 {
                            return Err(Error::NumericalConsistency(format!(
                                "Born probability has imaginary residue {:.3e}",
                                z.im
                            )));
                        }
                        probs[JointDistribution::index(a, b, c, x, y)] = z.re;
                    }
                }
            }
        }
    }
    JointDistribution::from_probs(probs).map_err(|e| match e {
        Error::Validation(msg) => {
            Error::NumericalConsistency(format!("Born distribution failed validation: {msg}"))
        }
        other => other,
    })
}

/// Certified randomness of a guessing probability, in bits.
pub fn min_entropy(p_guess: f64) -> Result<f64> {
    if !(p_guess > 0.0 && p_guess <= 1.0 + 1e-12) {
        return Err(Error::InvalidInput(format!(
            "guessing probability must lie in (0, 1], got {p_guess}"
        )));
    }
    Ok(-p_guess.min(1.0).log2())
}

/// Closed-form guessing probability of the white-noise family measured in
/// its optimal frame with Charlie along z: (1 + sqrt2) p / 8 + 1/8.
pub fn analytic_lower_curve(p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "visibility must lie in [0, 1], got {p}"
        )));
    }
    Ok((1.0 + SQRT2) * p / 8.0 + 0.125)
}

/// One row of a visibility scan.
#[derive(Clone, Debug)]
pub struct ScanRow {
    pub p: f64,
    /// Tight quantum maximum of the Bell value at this visibility.
    pub bell_bound: f64,
    /// Guessing probability actually achieved by the explicit strategy.
    pub lower_max_prob: f64,
    /// Relaxation upper bound on the guessing probability, when requested.
    pub npa_upper_max_prob: Option<f64>,
    /// Min-entropy certified by the achieved guessing probability.
    pub min_entropy_bits: f64,
}

/// Scans the white-noise family over [p_min, p_max]: per row the Bell bound,
/// the achieved guessing probability (Born rule in the optimal frame with
/// Charlie along z, where the maximum class is largest), optionally the
/// moment-matrix upper bound, and the certified min-entropy.
pub fn noise_scan(
    p_min: f64,
    p_max: f64,
    steps: usize,
    include_npa: bool,
    npa: &NpaParams,
) -> Result<Vec<ScanRow>> {
    if !(0.0..=1.0).contains(&p_min) || !(0.0..=1.0).contains(&p_max) || p_min > p_max {
        return Err(Error::InvalidInput(format!(
            "need 0 <= p_min <= p_max <= 1, got [{p_min}, {p_max}]"
        )));
    }
    if steps < 2 {
        return Err(Error::InvalidInput(format!(
            "need at least 2 steps, got {steps}"
        )));
    }
    let charlie = BlochVector::new([0.0, 0.0, 1.0]).expect("unit vector");
    let frame = white_noise_optimal_frame(charlie);
    let mut rows = Vec::with_capacity(steps);
    for k in 0..steps {
        let t = k as f64 / (steps - 1) as f64;
        let p = p_min + t * (p_max - p_min);
        let rho = white_noise_state(p)?;
        let bell_bound = quantum_bound(&rho)?.bound;
        let lower_max_prob = born_distribution(&rho, &frame)?.max_probability();
        let analytic = analytic_lower_curve(p)?;
        if (lower_max_prob - analytic).abs() > 1e-9 {
            return Err(Error::NumericalConsistency(format!(
                "achieved guessing probability {lower_max_prob} disagrees with the closed form {analytic} at p = {p}"
            )));
        }
        let npa_upper_max_prob = if include_npa {
            let bound = npa_upper_bound(bell_bound, npa)?;
            if lower_max_prob > bound.upper + 1e-3 {
                return Err(Error::NumericalConsistency(format!(
                    "upper bound {} fell below the achieved probability {lower_max_prob} at p = {p}",
                    bound.upper
                )));
            }
            Some(bound.upper)
        } else {
            None
        };
        rows.push(ScanRow {
            p,
            bell_bound,
            lower_max_prob,
            npa_upper_max_prob,
            min_entropy_bits: min_entropy(lower_max_prob)?,
        });
    }
    Ok(rows)
}

/// Writes scan rows as CSV: fixed header, 12 significant digits, an empty
/// field where the NPA column was not computed, LF line endings.
pub fn write_scan_csv<W: Write>(rows: &[ScanRow], out: &mut W) -> Result<()> {
    writeln!(
        out,
        "p,bell_bound,lower_max_prob,npa_upper_max_prob,min_entropy_bits"
    )?;
    for r in rows {
        let npa = r
            .npa_upper_max_prob
            .map_or(String::new(), |v| fmt_sig(v, 12));
        writeln!(
            out,
            "{},{},{},{},{}",
            fmt_sig(r.p, 12),
            fmt_sig(r.bell_bound, 12),
            fmt_sig(r.lower_max_prob, 12),
            npa,
            fmt_sig(r.min_entropy_bits, 12),
        )?;
    }
    Ok(())
}

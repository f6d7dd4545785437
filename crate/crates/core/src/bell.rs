//! The parity-CHSH functional: evaluation, the tight quantum bound, a
//! saturating measurement construction, the classical bound, and a see-saw
//! verifier.
//!
//! The functional is B = <A1 (B0-B1)/2 C0> + <A0 (B0+B1)/2> on a three-qubit
//! state, where each observable is a Bloch direction. Its classical bound is
//! 1; the quantum maximum for a given state rho is
//!     max_c sqrt(lambda1(c)^2 + lambda2^2),
//! with lambda2 the largest singular value of the Alice-Bob correlation block
//! T_0 and lambda1(c) the largest singular value of the c-contracted block of
//! the full correlation tensor.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{
    add3, any_orthogonal3, dot3, norm3, normalize3, scale3, sigma_max3, sub3, svd3, CMatrix, Svd3,
    Vec3, C64,
};
use crate::optim::NelderMead;
use crate::pauli::{BlochVector, CorrelationTensor, DensityMatrix};

/// Five measurement directions: Alice's pair (a, a'), Bob's pair (b, b'),
/// and the single third-party direction c.
#[derive(Clone, Debug)]
pub struct MeasurementFrame {
    pub a: BlochVector,
    pub a_prime: BlochVector,
    pub b: BlochVector,
    pub b_prime: BlochVector,
    pub c: BlochVector,
}

/// Bob's pair rewritten as b = cos(theta_b) m + sin(theta_b) m',
/// b' = cos(theta_b) m - sin(theta_b) m'. For unit b, b' the two axes are
/// orthogonal automatically; at b = +-b' the undefined axis is completed
/// arbitrarily and theta_b snaps to 0 or pi/2.
#[derive(Clone, Copy, Debug)]
pub struct BobFrame {
    pub m: Vec3,
    pub m_prime: Vec3,
    pub theta_b: f64,
}

/// Norm below which a b +- b' combination counts as degenerate.
pub const BOB_DEGENERACY_TOL: f64 = 1e-9;

impl MeasurementFrame {
    pub fn new(
        a: BlochVector,
        a_prime: BlochVector,
        b: BlochVector,
        b_prime: BlochVector,
        c: BlochVector,
    ) -> Self {
        MeasurementFrame {
            a,
            a_prime,
            b,
            b_prime,
            c,
        }
    }

    /// Decomposes Bob's pair into the mid-axis m, the difference axis m', and
    /// the half-angle theta_b = atan2(|b - b'|, |b + b'|).
    pub fn bob_frame(&self) -> BobFrame {
        let sum = add3(&self.b.components(), &self.b_prime.components());
        let diff = sub3(&self.b.components(), &self.b_prime.components());
        let (ns, nd) = (norm3(&sum), norm3(&diff));
        // |sum|^2 + |diff|^2 = 4 for unit vectors, so at most one vanishes.
        let (m, m_prime) = if ns <= BOB_DEGENERACY_TOL {
            let mp = normalize3(&diff);
            (any_orthogonal3(&mp), mp)
        } else if nd <= BOB_DEGENERACY_TOL {
            let m = normalize3(&sum);
            (m, any_orthogonal3(&m))
        } else {
            (normalize3(&sum), normalize3(&diff))
        };
        BobFrame {
            m,
            m_prime,
            theta_b: nd.atan2(ns),
        }
    }

    /// The 8x8 parity-CHSH operator
    /// A1 x (B0-B1)/2 x C0 + A0 x (B0+B1)/2 x I.
    pub fn bell_operator(&self) -> CMatrix {
        let half = C64::new(0.5, 0.0);
        let b0 = self.b.observable();
        let b1 = self.b_prime.observable();
        let b_minus = b0.sub(&b1).scale(half);
        let b_plus = b0.add(&b1).scale(half);
        let term_abc = self
            .a_prime
            .observable()
            .kron(&b_minus)
            .kron(&self.c.observable());
        let term_ab = self
            .a
            .observable()
            .kron(&b_plus)
            .kron(&CMatrix::identity(2));
        term_abc.add(&term_ab)
    }
}

/// Tr(rho B) for the parity-CHSH operator of `frame`.
pub fn bell_value(rho: &DensityMatrix, frame: &MeasurementFrame) -> Result<f64> {
    if rho.num_qubits() != 3 {
        return Err(Error::InvalidInput(format!(
            "the Bell functional needs a three-qubit state, got {} qubits",
            rho.num_qubits()
        )));
    }
    let z = rho.matrix().trace_product(&frame.bell_operator());
    if z.im.abs() > 1e-12 {
        return Err(Error::NumericalConsistency(format!(
            "Bell value has imaginary residue {:.3e}",
            z.im
        )));
    }
    Ok(z.re)
}

/// Same value computed from a precomputed correlation tensor; used by the
/// optimization loops where the state is fixed and only the frame moves.
pub fn bell_value_from_tensor(t: &CorrelationTensor, frame: &MeasurementFrame) -> f64 {
    let a = frame.a.components();
    let ap = frame.a_prime.components();
    let half_diff = scale3(
        &sub3(&frame.b.components(), &frame.b_prime.components()),
        0.5,
    );
    let half_sum = scale3(
        &add3(&frame.b.components(), &frame.b_prime.components()),
        0.5,
    );
    let g = t.contracted(&frame.c.components());
    dot3(&ap, &g.mul_vec(&half_diff)) + dot3(&a, &t.t0().mul_vec(&half_sum))
}

/// The two pieces of the Bell value in Bob's (m, m') frame:
/// (sin(theta_b) <A1 M' C0>, cos(theta_b) <A0 M>). Their sum is the Bell
/// value; at b = +-b' the vanishing term uses the arbitrary completed axis,
/// multiplied by an exactly zero weight.
pub fn bell_value_decomposed(rho: &DensityMatrix, frame: &MeasurementFrame) -> Result<(f64, f64)> {
    let t = CorrelationTensor::of(rho)?;
    let bf = frame.bob_frame();
    let g = t.contracted(&frame.c.components());
    let term_abc = bf.theta_b.sin() * dot3(&frame.a_prime.components(), &g.mul_vec(&bf.m_prime));
    let term_ab = bf.theta_b.cos() * dot3(&frame.a.components(), &t.t0().mul_vec(&bf.m));
    Ok((term_abc, term_ab))
}

/// Bell-functional coefficient of P(a,b,c|x,y): the functional is
/// sum over outcomes and inputs of alpha * P. Signs a, b, c are +-1; inputs
/// x, y are 0 or 1.
pub fn bell_coefficient(a: i8, b: i8, c: i8, x: u8, y: u8) -> f64 {
    debug_assert!(a.abs() == 1 && b.abs() == 1 && c.abs() == 1 && x <= 1 && y <= 1);
    if x == 1 {
        let sign = if y == 0 { 0.5 } else { -0.5 };
        sign * f64::from(a) * f64::from(b) * f64::from(c)
    } else {
        0.5 * f64::from(a) * f64::from(b)
    }
}

/// The measurement frame saturating the quantum bound for the benchmark
/// white-noise family: Alice measures x then z, Bob the two diagonal
/// directions between them, and the third party along `c`.
pub fn white_noise_optimal_frame(c: BlochVector) -> MeasurementFrame {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    MeasurementFrame {
        a: BlochVector::new([1.0, 0.0, 0.0]).expect("unit"),
        a_prime: BlochVector::new([0.0, 0.0, 1.0]).expect("unit"),
        b: BlochVector::new([s, 0.0, s]).expect("unit"),
        b_prime: BlochVector::new([s, 0.0, -s]).expect("unit"),
        c,
    }
}

/// Result of the tight-bound computation.
#[derive(Clone, Debug)]
pub struct QuantumBound {
    /// max_c sqrt(lambda1(c)^2 + lambda2^2)
    pub bound: f64,
    /// Direction attaining the maximum of lambda1.
    pub c_star: BlochVector,
    pub lambda1: f64,
    pub lambda2: f64,
    /// A frame built to achieve the bound (see `saturating_frame` for when
    /// that is possible).
    pub frame: MeasurementFrame,
}

/// Search parameters for the c-sphere maximization.
#[derive(Clone, Copy, Debug)]
pub struct BoundParams {
    /// Spherical grid resolution (grid_n x grid_n points), minimum 8.
    pub grid_n: usize,
    /// Evaluation budget of the simplex refinement started at the best grid
    /// point.
    pub refine_iters: usize,
}

impl Default for BoundParams {
    fn default() -> Self {
        BoundParams {
            grid_n: 64,
            refine_iters: 200,
        }
    }
}

fn unit_from_angles(theta: f64, phi: f64) -> Vec3 {
    [
        theta.sin() * phi.cos(),
        theta.sin() * phi.sin(),
        theta.cos(),
    ]
}

/// Tight maximum of the Bell value over all measurements, with default
/// search parameters.
pub fn quantum_bound(rho: &DensityMatrix) -> Result<QuantumBound> {
    quantum_bound_with(rho, &BoundParams::default())
}

/// Tight maximum of the Bell value over all measurements.
///
/// lambda2 is fixed by the state; lambda1 is maximized over the unit sphere
/// of third-party directions by an inclusive theta in [0, pi] x phi in
/// [0, 2 pi) grid followed by Nelder-Mead refinement from the best grid
/// point. lambda1(c) is a largest-singular-value function of a linear matrix
/// family, hence convex in c and maximized on the sphere; the grid guards
/// against the antipodal multi-modality, the refinement supplies precision.
pub fn quantum_bound_with(rho: &DensityMatrix, params: &BoundParams) -> Result<QuantumBound> {
    if params.grid_n < 8 {
        return Err(Error::InvalidInput(format!(
            "grid_n must be at least 8, got {}",
            params.grid_n
        )));
    }
    let t = CorrelationTensor::of(rho)?;
    let lambda2 = sigma_max3(&t.t0());

    let lambda1_of =
        |theta: f64, phi: f64| -> f64 { sigma_max3(&t.contracted(&unit_from_angles(theta, phi))) };

    let n = params.grid_n;
    let mut best = (f64::NEG_INFINITY, 0.0, 0.0);
    for i in 0..n {
        let theta = i as f64 * std::f64::consts::PI / (n - 1) as f64;
        for j in 0..n {
            let phi = j as f64 * std::f64::consts::TAU / n as f64;
            let v = lambda1_of(theta, phi);
            if v > best.0 {
                best = (v, theta, phi);
            }
        }
    }

    let nm = NelderMead {
        max_evals: params.refine_iters,
        ..Default::default()
    };
    let step = 0.5 * std::f64::consts::PI / (n - 1) as f64;
    let (x, refined) = nm.maximize(|x| lambda1_of(x[0], x[1]), &[best.1, best.2], step);
    let (lambda1, c_angles) = if refined > best.0 {
        (refined, (x[0], x[1]))
    } else {
        (best.0, (best.1, best.2))
    };
    let c_star = BlochVector::new(unit_from_angles(c_angles.0, c_angles.1))
        .expect("angles give a unit vector");

    let sat = saturating_frame_from_tensor(&t, &c_star);
    Ok(QuantumBound {
        bound: lambda1.hypot(lambda2),
        c_star,
        lambda1,
        lambda2,
        frame: sat.frame,
    })
}

/// A frame constructed to achieve the quantum bound, plus whether the
/// construction actually saturates.
#[derive(Clone, Debug)]
pub struct SaturatingFrame {
    pub frame: MeasurementFrame,
    /// Bell value the frame attains on the state.
    pub achieved: f64,
    /// True when the construction is exact: the two top singular-vector axes
    /// could be chosen orthogonal and the bound is nonzero.
    pub saturated: bool,
    /// |<m, m'>| for the chosen axes.
    pub bob_overlap: f64,
}

/// Overlap above which the construction is declared non-saturating.
pub const SATURATION_OVERLAP_TOL: f64 = 1e-8;

/// Right-singular vectors spanning the top singular value's subspace,
/// within a relative degeneracy tolerance.
fn top_right_subspace(svd: &Svd3) -> Vec<Vec3> {
    let tol = 1e-9 * svd.sigma[0].max(1.0);
    (0..3)
        .filter(|&k| svd.sigma[0] - svd.sigma[k] <= tol)
        .map(|k| svd.right[k])
        .collect()
}

/// Component of some vector of `span` orthogonal to `m`, if the span allows
/// one; falls back to the leading vector otherwise.
fn orthogonal_within_span(span: &[Vec3], m: &Vec3) -> Vec3 {
    let coords: Vec<f64> = span.iter().map(|w| dot3(w, m)).collect();
    let n2: f64 = coords.iter().map(|c| c * c).sum();
    if n2 <= 1e-20 {
        return span[0];
    }
    // Pick the span basis vector least aligned with m and strip its
    // m-component (Gram-Schmidt in span coordinates).
    let j = coords
        .iter()
        .enumerate()
        .min_by(|a, b| a.1.abs().partial_cmp(&b.1.abs()).expect("finite"))
        .map(|(i, _)| i)
        .expect("span is nonempty");
    let mut d: Vec<f64> = coords.iter().map(|c| -coords[j] * c / n2).collect();
    d[j] += 1.0;
    let mut out = [0.0; 3];
    for (di, w) in d.iter().zip(span) {
        out = add3(&out, &scale3(w, *di));
    }
    if norm3(&out) < 1e-12 {
        return span[0];
    }
    normalize3(&out)
}

fn saturating_frame_from_tensor(t: &CorrelationTensor, c_star: &BlochVector) -> SaturatingFrame {
    let t0 = t.t0();
    let g = t.contracted(&c_star.components());
    let svd0 = svd3(&t0);
    let svdg = svd3(&g);
    let (lambda2, lambda1) = (svd0.sigma[0], svdg.sigma[0]);

    let sub0 = top_right_subspace(&svd0);
    let subg = top_right_subspace(&svdg);
    let (m, m_prime) = if sub0.len() == 1 && subg.len() == 1 {
        (sub0[0], subg[0])
    } else if subg.len() >= 2 {
        let m = sub0[0];
        (m, orthogonal_within_span(&subg, &m))
    } else {
        let mp = subg[0];
        (orthogonal_within_span(&sub0, &mp), mp)
    };
    let overlap = dot3(&m, &m_prime).abs();

    let theta_b = lambda1.atan2(lambda2);
    let (cos_t, sin_t) = (theta_b.cos(), theta_b.sin());
    let b_raw = add3(&scale3(&m, cos_t), &scale3(&m_prime, sin_t));
    let bp_raw = sub3(&scale3(&m, cos_t), &scale3(&m_prime, sin_t));
    // Unit only when m is exactly orthogonal to m'; normalize so the frame is
    // valid even on the non-saturating path.
    let to_bloch = |v: &Vec3, fallback: Vec3| -> BlochVector {
        let n = norm3(v);
        if n > 1e-12 {
            BlochVector::new(normalize3(v)).expect("normalized")
        } else {
            BlochVector::new(fallback).expect("unit fallback")
        }
    };
    let b = to_bloch(&b_raw, [0.0, 0.0, 1.0]);
    let b_prime = to_bloch(&bp_raw, [1.0, 0.0, 0.0]);

    let tiny = 1e-12;
    let a = if lambda2 > tiny {
        to_bloch(&t0.mul_vec(&m), [0.0, 0.0, 1.0])
    } else {
        BlochVector::new([0.0, 0.0, 1.0]).expect("unit")
    };
    let a_prime = if lambda1 > tiny {
        to_bloch(&g.mul_vec(&m_prime), [1.0, 0.0, 0.0])
    } else {
        BlochVector::new([1.0, 0.0, 0.0]).expect("unit")
    };

    let frame = MeasurementFrame {
        a,
        a_prime,
        b,
        b_prime,
        c: *c_star,
    };
    let achieved = bell_value_from_tensor(t, &frame);
    let bound = lambda1.hypot(lambda2);
    SaturatingFrame {
        frame,
        achieved,
        saturated: overlap <= SATURATION_OVERLAP_TOL && bound > 1e-12,
        bob_overlap: overlap,
    }
}

/// Builds the frame that saturates the bound for `c_star` when the top
/// singular subspaces of T_0 and of the contracted block admit an orthogonal
/// axis pair; otherwise returns the best frame of the construction with
/// `saturated = false` and the value it does achieve.
pub fn saturating_frame(rho: &DensityMatrix, c_star: &BlochVector) -> Result<SaturatingFrame> {
    let t = CorrelationTensor::of(rho)?;
    Ok(saturating_frame_from_tensor(&t, c_star))
}

/// Classical (deterministic local strategy) analysis of the functional.
#[derive(Clone, Debug)]
pub struct LhvSummary {
    pub max: f64,
    pub min: f64,
    /// Sign tuples (a0, a1, b0, b1, c) attaining the maximum.
    pub maximizers: Vec<[i8; 5]>,
}

/// Exhausts all 32 deterministic strategies. Every strategy evaluates to
/// exactly +1 or -1 (integer arithmetic, no rounding), so max = 1, min = -1,
/// and exactly half the strategies maximize.
pub fn lhv_bound() -> LhvSummary {
    let signs = [1i8, -1i8];
    let mut max = i32::MIN;
    let mut min = i32::MAX;
    let mut maximizers = Vec::new();
    for &a0 in &signs {
        for &a1 in &signs {
            for &b0 in &signs {
                for &b1 in &signs {
                    for &c in &signs {
                        // Twice the Bell value, exactly: a1 c (b0 - b1) + a0 (b0 + b1).
                        let twice = i32::from(a1) * i32::from(c) * (i32::from(b0) - i32::from(b1))
                            + i32::from(a0) * (i32::from(b0) + i32::from(b1));
                        max = max.max(twice);
                        min = min.min(twice);
                        if twice == 2 {
                            maximizers.push([a0, a1, b0, b1, c]);
                        }
                    }
                }
            }
        }
    }
    debug_assert_eq!(max, 2);
    LhvSummary {
        max: f64::from(max) / 2.0,
        min: f64::from(min) / 2.0,
        maximizers,
    }
}

/// Independent lower-bound oracle: direct maximization of the Bell value
/// over the ten spherical angles of the five directions.
#[derive(Clone, Debug)]
pub struct SeeSawResult {
    pub value: f64,
    pub frame: MeasurementFrame,
}

fn frame_from_angles(x: &[f64]) -> MeasurementFrame {
    MeasurementFrame {
        a: BlochVector::from_angles(x[0], x[1]),
        a_prime: BlochVector::from_angles(x[2], x[3]),
        b: BlochVector::from_angles(x[4], x[5]),
        b_prime: BlochVector::from_angles(x[6], x[7]),
        c: BlochVector::from_angles(x[8], x[9]),
    }
}

/// Maximizes the Bell value by seeded multi-start Nelder-Mead over
/// measurement angles. Deterministic for a fixed seed; restarts explore, a
/// final small-simplex polish from the best point sharpens the optimum.
pub fn see_saw_maximize(rho: &DensityMatrix, restarts: usize, seed: u64) -> Result<SeeSawResult> {
    if restarts == 0 {
        return Err(Error::InvalidInput("restarts must be at least 1".into()));
    }
    let t = CorrelationTensor::of(rho)?;
    let objective = |x: &[f64]| bell_value_from_tensor(&t, &frame_from_angles(x));

    let nm = NelderMead {
        max_evals: 2500,
        ..Default::default()
    };
    let mut best: Option<(f64, Vec<f64>)> = None;
    for i in 0..restarts {
        let mut rng = ChaCha8Rng::seed_from_u64(
            seed.wrapping_add((i as u64).wrapping_mul(0x9E37_79B9_7F4A_7C15)),
        );
        let mut x0 = Vec::with_capacity(10);
        for _ in 0..5 {
            let u: f64 = rng.gen();
            let v: f64 = rng.gen();
            x0.push((1.0 - 2.0 * u).clamp(-1.0, 1.0).acos());
            x0.push(std::f64::consts::TAU * v);
        }
        let (x, value) = nm.maximize(objective, &x0, 0.7);
        if best.as_ref().is_none_or(|(bv, _)| value > *bv) {
            best = Some((value, x));
        }
    }
    let (_, best_x) = best.expect("at least one restart ran");
    let polish = NelderMead {
        max_evals: 1500,
        ..Default::default()
    };
    let (x, value) = polish.maximize(objective, &best_x, 0.01);
    Ok(SeeSawResult {
        value,
        frame: frame_from_angles(&x),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::Mat3;
    use crate::pauli::{random_bloch_vector, random_mixed_state, white_noise_state};

    const SQRT2: f64 = std::f64::consts::SQRT_2;

    fn z_frame() -> MeasurementFrame {
        white_noise_optimal_frame(BlochVector::new([0.0, 0.0, 1.0]).unwrap())
    }

    fn maximally_mixed() -> DensityMatrix {
        white_noise_state(0.0).unwrap()
    }

    #[test]
    fn bell_value_on_benchmark_frame() {
        let rho1 = white_noise_state(1.0).unwrap();
        assert!((bell_value(&rho1, &z_frame()).unwrap() - SQRT2).abs() < 1e-12);
        let rho06 = white_noise_state(0.6).unwrap();
        assert!((bell_value(&rho06, &z_frame()).unwrap() - 0.6 * SQRT2).abs() < 1e-12);
        assert!(bell_value(&maximally_mixed(), &z_frame()).unwrap().abs() < 1e-14);
    }

    #[test]
    fn tensor_route_matches_operator_route() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rho = random_mixed_state(&mut rng);
            let t = CorrelationTensor::of(&rho).unwrap();
            let frame = MeasurementFrame {
                a: random_bloch_vector(&mut rng),
                a_prime: random_bloch_vector(&mut rng),
                b: random_bloch_vector(&mut rng),
                b_prime: random_bloch_vector(&mut rng),
                c: random_bloch_vector(&mut rng),
            };
            let via_op = bell_value(&rho, &frame).unwrap();
            let via_tensor = bell_value_from_tensor(&t, &frame);
            assert!((via_op - via_tensor).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_sums_to_bell_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..300 {
            let rho = random_mixed_state(&mut rng);
            let frame = MeasurementFrame {
                a: random_bloch_vector(&mut rng),
                a_prime: random_bloch_vector(&mut rng),
                b: random_bloch_vector(&mut rng),
                b_prime: random_bloch_vector(&mut rng),
                c: random_bloch_vector(&mut rng),
            };
            let (abc, ab) = bell_value_decomposed(&rho, &frame).unwrap();
            let whole = bell_value(&rho, &frame).unwrap();
            assert!((abc + ab - whole).abs() < 1e-12);
        }
    }

    #[test]
    fn decomposition_on_benchmark_is_symmetric() {
        let rho = white_noise_state(1.0).unwrap();
        let (abc, ab) = bell_value_decomposed(&rho, &z_frame()).unwrap();
        assert!((abc - SQRT2 / 2.0).abs() < 1e-12);
        assert!((ab - SQRT2 / 2.0).abs() < 1e-12);
    }

    #[test]
    fn degenerate_bob_pair_uses_theta_convention() {
        // b = b' means theta_b = 0: the conditional term is weighted by
        // sin 0 = 0 and the marginal term carries everything.
        let z = BlochVector::new([0.0, 0.0, 1.0]).unwrap();
        let x = BlochVector::new([1.0, 0.0, 0.0]).unwrap();
        let frame = MeasurementFrame::new(z, x, z, z, z);
        let bf = frame.bob_frame();
        assert_eq!(bf.theta_b, 0.0);
        let mut amps = vec![C64::new(0.0, 0.0); 8];
        amps[0] = C64::new(1.0, 0.0);
        let rho = DensityMatrix::pure_state(&amps).unwrap();
        let (abc, ab) = bell_value_decomposed(&rho, &frame).unwrap();
        assert_eq!(abc, 0.0);
        assert!((ab - 1.0).abs() < 1e-12);
        // Opposite degeneracy: b = -b' gives theta_b = pi/2.
        let minus_z = BlochVector::new([0.0, 0.0, -1.0]).unwrap();
        let frame2 = MeasurementFrame::new(z, x, z, minus_z, z);
        assert!((frame2.bob_frame().theta_b - std::f64::consts::FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn bob_axes_are_orthogonal_for_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..200 {
            let frame = MeasurementFrame {
                a: random_bloch_vector(&mut rng),
                a_prime: random_bloch_vector(&mut rng),
                b: random_bloch_vector(&mut rng),
                b_prime: random_bloch_vector(&mut rng),
                c: random_bloch_vector(&mut rng),
            };
            let bf = frame.bob_frame();
            assert!(dot3(&bf.m, &bf.m_prime).abs() < 1e-10);
            assert!(bf.theta_b >= 0.0 && bf.theta_b <= std::f64::consts::FRAC_PI_2);
        }
    }

    #[test]
    fn quantum_bound_on_white_noise_family() {
        for p in [0.0, 0.25, 0.5, 0.75, 1.0] {
            let rho = white_noise_state(p).unwrap();
            let qb = quantum_bound(&rho).unwrap();
            assert!(
                (qb.bound - SQRT2 * p).abs() < 1e-9,
                "p = {p}: bound = {}",
                qb.bound
            );
            assert!((qb.bound - qb.lambda1.hypot(qb.lambda2)).abs() < 1e-12);
        }
    }

    #[test]
    fn quantum_bound_on_ghz_reduction() {
        let rho4 = crate::pauli::ghz_class_state(std::f64::consts::FRAC_PI_4, 0.0);
        let rho3 = rho4.partial_trace(3).unwrap();
        let qb = quantum_bound(&rho3).unwrap();
        assert!((qb.bound - SQRT2).abs() < 1e-9, "bound = {}", qb.bound);
        assert!((qb.lambda1 - 1.0).abs() < 1e-9);
        assert!((qb.lambda2 - 1.0).abs() < 1e-9);
        // The contracted block is maximized on the equator (the direction
        // within the equator is free, so only the z component is pinned).
        assert!(qb.c_star.components()[2].abs() < 1e-4);
    }

    #[test]
    fn quantum_bound_invariant_under_third_party_rotation() {
        // Rotating the third qubit only relabels the c sphere, so the bound
        // must not move.
        let rho = white_noise_state(0.8).unwrap();
        let before = quantum_bound(&rho).unwrap().bound;
        let alpha: f64 = 0.7;
        let axis = [0.6, 0.0, 0.8];
        let n_sigma = BlochVector::new(axis).unwrap().observable();
        let u2 = CMatrix::identity(2)
            .scale(C64::new((alpha / 2.0).cos(), 0.0))
            .sub(&n_sigma.scale(C64::new(0.0, (alpha / 2.0).sin())));
        let u = CMatrix::identity(4).kron(&u2);
        let rotated = u.mul(rho.matrix()).mul(&u.adjoint());
        let rho_rot = DensityMatrix::new(3, rotated).unwrap();
        let after = quantum_bound(&rho_rot).unwrap().bound;
        assert!(
            (before - after).abs() < 1e-9,
            "before {before}, after {after}"
        );
    }

    #[test]
    fn saturating_frame_achieves_bound_on_benchmark() {
        let c = BlochVector::new([0.0, 0.0, 1.0]).unwrap();
        for p in [0.3, 1.0] {
            let rho = white_noise_state(p).unwrap();
            let sat = saturating_frame(&rho, &c).unwrap();
            assert!(sat.saturated, "p = {p}: overlap {}", sat.bob_overlap);
            assert!(sat.bob_overlap < 1e-10);
            assert!((sat.achieved - SQRT2 * p).abs() < 1e-9);
        }
    }

    #[test]
    fn saturating_frame_flags_zero_state() {
        let c = BlochVector::new([0.0, 0.0, 1.0]).unwrap();
        let sat = saturating_frame(&maximally_mixed(), &c).unwrap();
        assert!(!sat.saturated);
        assert!(sat.achieved.abs() < 1e-12);
    }

    #[test]
    fn saturating_frame_flags_incompatible_axes() {
        // A pure product state forces m = m' (both equal Bob's Bloch vector),
        // so the construction cannot saturate.
        let amps: Vec<C64> = {
            let q = [C64::new(0.8, 0.0), C64::new(0.6, 0.0)];
            let r = [C64::new(1.0, 0.0), C64::new(0.0, 0.0)];
            let s = [C64::new(0.6, 0.0), C64::new(0.8, 0.0)];
            let mut v = Vec::with_capacity(8);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        v.push(q[i] * r[j] * s[k]);
                    }
                }
            }
            v
        };
        let rho = DensityMatrix::pure_state(&amps).unwrap();
        let qb = quantum_bound(&rho).unwrap();
        let sat = saturating_frame(&rho, &qb.c_star).unwrap();
        assert!(!sat.saturated, "overlap = {}", sat.bob_overlap);
        assert!(sat.achieved <= qb.bound + 1e-9);
    }

    #[test]
    fn lhv_enumeration() {
        let summary = lhv_bound();
        assert_eq!(summary.max, 1.0);
        assert_eq!(summary.min, -1.0);
        assert_eq!(summary.maximizers.len(), 16);
        // Spot-check one maximizer: all-plus strategy gives +1.
        assert!(summary.maximizers.contains(&[1, 1, 1, 1, 1]));
    }

    #[test]
    fn bell_coefficients_recover_lhv_value() {
        // For the all-plus deterministic strategy the alpha-weighted sum over
        // its (deterministic) distribution is the strategy's Bell value.
        let mut total = 0.0;
        for x in 0..2u8 {
            for y in 0..2u8 {
                total += bell_coefficient(1, 1, 1, x, y);
            }
        }
        assert!((total - 1.0).abs() < 1e-15);
    }

    #[test]
    fn see_saw_reaches_bound_on_benchmark() {
        let rho = white_noise_state(1.0).unwrap();
        let res = see_saw_maximize(&rho, 6, 1).unwrap();
        assert!(res.value >= SQRT2 - 1e-6, "value = {}", res.value);
    }

    #[test]
    fn see_saw_on_mixed_and_product_states() {
        let res = see_saw_maximize(&maximally_mixed(), 2, 5).unwrap();
        assert!(res.value.abs() < 1e-9);

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..3 {
            // Pure product state: the achievable maximum cannot exceed the
            // classical bound 1.
            let qa = random_bloch_vector(&mut rng).components();
            let qb = random_bloch_vector(&mut rng).components();
            let qc = random_bloch_vector(&mut rng).components();
            let ket = |v: [f64; 3]| -> Vec<C64> {
                let theta = v[2].clamp(-1.0, 1.0).acos();
                let phi = v[1].atan2(v[0]);
                vec![
                    C64::new((theta / 2.0).cos(), 0.0),
                    C64::from_polar((theta / 2.0).sin(), phi),
                ]
            };
            let (ka, kb, kc) = (ket(qa), ket(qb), ket(qc));
            let mut amps = Vec::with_capacity(8);
            for i in 0..2 {
                for j in 0..2 {
                    for k in 0..2 {
                        amps.push(ka[i] * kb[j] * kc[k]);
                    }
                }
            }
            let rho = DensityMatrix::pure_state(&amps).unwrap();
            let res = see_saw_maximize(&rho, 4, 23).unwrap();
            assert!(
                res.value <= 1.0 + 1e-6,
                "product state beat 1: {}",
                res.value
            );
        }
    }

    #[test]
    fn see_saw_never_exceeds_quantum_bound() {
        let mut rng = ChaCha8Rng::seed_from_u64(29);
        for _ in 0..25 {
            let rho = random_mixed_state(&mut rng);
            let qb = quantum_bound(&rho).unwrap();
            let ss = see_saw_maximize(&rho, 2, 31).unwrap();
            assert!(ss.value <= qb.bound + 1e-6);
            assert!(qb.bound <= SQRT2 + 1e-9);
        }
    }

    #[test]
    fn matrix_contraction_respects_singular_value_bound() {
        // |x^T G y| <= sigma_max(G) for unit x, y.
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for _ in 0..1000 {
            let mut g = [[0.0; 3]; 3];
            for row in &mut g {
                for v in row.iter_mut() {
                    *v = rng.gen_range(-2.0..2.0);
                }
            }
            let m = Mat3(g);
            let x = random_bloch_vector(&mut rng).components();
            let y = random_bloch_vector(&mut rng).components();
            let lhs = dot3(&x, &m.mul_vec(&y)).abs();
            assert!(lhs <= sigma_max3(&m) + 1e-12);
        }
    }

    #[test]
    fn bell_operator_is_hermitian_and_traceless() {
        let op = z_frame().bell_operator();
        assert_eq!(op.dim(), 8);
        let (dev, _) = op.hermiticity_violation();
        assert!(dev < 1e-15);
        // Every term contains a traceless Pauli factor.
        assert!(op.trace().norm() < 1e-15);
    }
}

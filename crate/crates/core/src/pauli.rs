//! Qubit states, Pauli observables, and three-qubit correlation tensors.
//!
//! Conventions fixed here and relied on everywhere else:
//! * qubit 0 is the leftmost tensor factor and owns the most significant bit
//!   of a basis index;
//! * |0> = (1, 0)^T, so sigma_z |0> = +|0>;
//! * the correlation tensor is t_{ijk} = Tr(rho sigma_i x sigma_j x sigma_k)
//!   with index 0 meaning the identity.

use std::fmt::Write as _;
use std::path::Path;
use std::sync::OnceLock;

use rand::Rng;
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::linalg::{eigh, CMatrix, Mat3, Vec3, C64};

/// Allowed deviation from exact Hermiticity on input density matrices.
pub const HERMITICITY_TOL: f64 = 1e-12;
/// Allowed deviation of the trace from 1 on input density matrices.
pub const TRACE_TOL: f64 = 1e-12;
/// Eigenvalues above this floor count as nonnegative.
pub const EIGENVALUE_FLOOR: f64 = -1e-10;
/// Allowed deviation from unit norm on input Bloch vectors.
pub const BLOCH_NORM_TOL: f64 = 1e-9;
/// Imaginary residue beyond this in a should-be-real quantity is an error.
pub const IMAG_RESIDUE_TOL: f64 = 1e-9;
/// Largest register size accepted; keeps dense matrices small.
pub const MAX_QUBITS: usize = 6;

/// The Pauli basis: index 0 is the identity, 1..=3 are sigma_x, sigma_y,
/// sigma_z.
pub fn pauli(i: usize) -> CMatrix {
    let c = C64::new;
    match i {
        0 => CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]),
        1 => CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ]),
        2 => CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]),
        3 => CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(-1.0, 0.0)],
        ]),
        _ => panic!("Pauli index must be 0..=3, got {i}"),
    }
}

/// Sparse form of sigma_i x sigma_j x sigma_k: eight (row, col, value)
/// entries. Precomputed once; the correlation tensor is evaluated hundreds of
/// thousands of times in the sampling loops.
fn sparse_pauli3(i: usize, j: usize, k: usize) -> &'static [(usize, usize, C64)] {
    static TABLE: OnceLock<Vec<Vec<(usize, usize, C64)>>> = OnceLock::new();
    let table = TABLE.get_or_init(|| {
        let mut all = Vec::with_capacity(64);
        for a in 0..4 {
            for b in 0..4 {
                for c in 0..4 {
                    let (pa, pb, pc) = (pauli(a), pauli(b), pauli(c));
                    let mut entries = Vec::with_capacity(8);
                    for r in 0..8usize {
                        for col in 0..8usize {
                            let v = pa.get(r >> 2, col >> 2)
                                * pb.get((r >> 1) & 1, (col >> 1) & 1)
                                * pc.get(r & 1, col & 1);
                            if v.norm_sqr() > 0.0 {
                                entries.push((r, col, v));
                            }
                        }
                    }
                    all.push(entries);
                }
            }
        }
        all
    });
    &table[(i << 4) | (j << 2) | k]
}

/// Validated density matrix on `num_qubits` qubits.
#[derive(Clone, Debug)]
pub struct DensityMatrix {
    num_qubits: usize,
    mat: CMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, unit trace, and positive semidefiniteness, then
    /// stores the symmetrized, exactly-normalized matrix.
    pub fn new(num_qubits: usize, mat: CMatrix) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::InvalidInput(format!(
                "num_qubits must be 1..={MAX_QUBITS}, got {num_qubits}"
            )));
        }
        let dim = 1usize << num_qubits;
        if mat.dim() != dim {
            return Err(Error::InvalidInput(format!(
                "matrix dimension {} does not match 2^{num_qubits} = {dim}",
                mat.dim()
            )));
        }
        let (herm_dev, (hi, hj)) = mat.hermiticity_violation();
        if herm_dev > HERMITICITY_TOL {
            return Err(Error::Validation(format!(
                "matrix is not Hermitian: |A[{hi}][{hj}] - conj(A[{hj}][{hi}])| = {herm_dev:.3e} exceeds {HERMITICITY_TOL:.0e}"
            )));
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::Validation(format!(
                "trace must be 1, got {} + {}i (tolerance {TRACE_TOL:.0e})",
                tr.re, tr.im
            )));
        }
        let mut m = mat;
        m.hermitize();
        let eigs = eigh(&m).values;
        if eigs[0] < EIGENVALUE_FLOOR {
            return Err(Error::Validation(format!(
                "matrix is not positive semidefinite: smallest eigenvalue {:.3e} is below {EIGENVALUE_FLOOR:.0e}",
                eigs[0]
            )));
        }
        let m = m.scale(C64::new(1.0 / tr.re, 0.0));
        Ok(DensityMatrix { num_qubits, mat: m })
    }

    /// Internal constructor for matrices produced from already-validated
    /// states (partial traces, convex mixtures). Symmetrizes but skips the
    /// eigenvalue check, which would dominate the sampling loops.
    pub(crate) fn from_valid(num_qubits: usize, mut mat: CMatrix) -> Self {
        debug_assert_eq!(mat.dim(), 1usize << num_qubits);
        mat.hermitize();
        DensityMatrix { num_qubits, mat }
    }

    /// Density matrix |psi><psi| of a pure state given by its amplitudes.
    /// The amplitude vector must have length 2^n and norm within
    /// `BLOCH_NORM_TOL` of 1; it is renormalized before the projector forms.
    pub fn pure_state(amplitudes: &[C64]) -> Result<Self> {
        let dim = amplitudes.len();
        if !dim.is_power_of_two() || !(2..=1 << MAX_QUBITS).contains(&dim) {
            return Err(Error::InvalidInput(format!(
                "amplitude vector length must be a power of two in 2..={}, got {dim}",
                1 << MAX_QUBITS
            )));
        }
        let num_qubits = dim.trailing_zeros() as usize;
        let norm = amplitudes.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > BLOCH_NORM_TOL {
            return Err(Error::Validation(format!(
                "state vector norm must be 1 within {BLOCH_NORM_TOL:.0e}, got {norm}"
            )));
        }
        let v: Vec<C64> = amplitudes.iter().map(|z| z / norm).collect();
        Ok(DensityMatrix {
            num_qubits,
            mat: CMatrix::outer(&v),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn dim(&self) -> usize {
        1 << self.num_qubits
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Tr(rho^2); 1 for pure states, 1/dim for the maximally mixed state.
    pub fn purity(&self) -> f64 {
        self.mat.trace_product(&self.mat).re
    }

    /// Spectrum, ascending.
    pub fn eigenvalues(&self) -> Vec<f64> {
        eigh(&self.mat).values
    }

    /// <O> = Tr(rho O) for a Hermitian observable.
    pub fn expectation(&self, observable: &CMatrix) -> f64 {
        let z = self.mat.trace_product(observable);
        debug_assert!(
            z.im.abs() <= IMAG_RESIDUE_TOL,
            "expectation of a Hermitian observable must be real, got imaginary part {:.3e}",
            z.im
        );
        z.re
    }

    /// Traces out one qubit, returning the reduced state on the rest.
    pub fn partial_trace(&self, qubit: usize) -> Result<DensityMatrix> {
        if self.num_qubits < 2 {
            return Err(Error::InvalidInput(
                "cannot trace a qubit out of a single-qubit state".into(),
            ));
        }
        if qubit >= self.num_qubits {
            return Err(Error::InvalidInput(format!(
                "qubit index {qubit} out of range for {} qubits",
                self.num_qubits
            )));
        }
        let n_out = self.num_qubits - 1;
        let dim_out = 1usize << n_out;
        // Bit position (from the least significant end) of the traced qubit.
        let pos = self.num_qubits - 1 - qubit;
        let low_mask = (1usize << pos) - 1;
        let insert = |idx: usize, bit: usize| -> usize {
            ((idx >> pos) << (pos + 1)) | (bit << pos) | (idx & low_mask)
        };
        let mut out = CMatrix::zeros(dim_out);
        for i in 0..dim_out {
            for j in 0..dim_out {
                let mut acc = C64::new(0.0, 0.0);
                for s in 0..2 {
                    acc += self.mat.get(insert(i, s), insert(j, s));
                }
                out.set(i, j, acc);
            }
        }
        Ok(DensityMatrix::from_valid(n_out, out))
    }
}

/// The three-qubit benchmark family: visibility `p` of the state
/// (|000> + |110>)/sqrt(2) mixed with white noise.
///
/// rho(p) = p |psi><psi| + (1 - p) I/8.
pub fn white_noise_state(p: f64) -> Result<DensityMatrix> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "noise parameter p must lie in [0, 1], got {p}"
        )));
    }
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![C64::new(0.0, 0.0); 8];
    amps[0b000] = C64::new(s, 0.0);
    amps[0b110] = C64::new(s, 0.0);
    let pure = CMatrix::outer(&amps);
    let mixed = CMatrix::identity(8).scale(C64::new((1.0 - p) / 8.0, 0.0));
    Ok(DensityMatrix::from_valid(
        3,
        pure.scale(C64::new(p, 0.0)).add(&mixed),
    ))
}

/// Four-qubit family cos(theta)|0000> + sin(theta)cos(phi)|1110> plus
/// sin(theta)sin(phi)|1111>, the GHZ-like states used in the monogamy
/// analysis.
pub fn ghz_class_state(theta: f64, phi: f64) -> DensityMatrix {
    let mut amps = vec![C64::new(0.0, 0.0); 16];
    amps[0b0000] = C64::new(theta.cos(), 0.0);
    amps[0b1110] = C64::new(theta.sin() * phi.cos(), 0.0);
    amps[0b1111] = C64::new(theta.sin() * phi.sin(), 0.0);
    DensityMatrix::pure_state(&amps).expect("amplitudes are normalized by construction")
}

fn gauss_pair(rng: &mut impl Rng) -> (f64, f64) {
    // Box-Muller; u is bounded away from zero so the log is finite.
    let u: f64 = rng.gen_range(f64::MIN_POSITIVE..1.0);
    let v: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    let r = (-2.0 * u.ln()).sqrt();
    (r * v.cos(), r * v.sin())
}

/// Random three-qubit mixed state, Hilbert-Schmidt measure: G G^dagger / Tr
/// for a complex Gaussian 8x8 matrix G.
pub fn random_mixed_state(rng: &mut impl Rng) -> DensityMatrix {
    let n = 8;
    let mut g = CMatrix::zeros(n);
    for i in 0..n {
        for j in 0..n {
            let (re, im) = gauss_pair(rng);
            g.set(i, j, C64::new(re, im));
        }
    }
    let gg = g.mul(&g.adjoint());
    let tr = gg.trace().re;
    DensityMatrix::from_valid(3, gg.scale(C64::new(1.0 / tr, 0.0)))
}

/// Uniformly random direction on the Bloch sphere.
pub fn random_bloch_vector(rng: &mut impl Rng) -> BlochVector {
    let u: f64 = rng.gen();
    let v: f64 = rng.gen();
    let theta = (1.0 - 2.0 * u).clamp(-1.0, 1.0).acos();
    BlochVector::from_angles(theta, std::f64::consts::TAU * v)
}

/// Unit vector on the Bloch sphere defining the observable v . sigma.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BlochVector(Vec3);

impl BlochVector {
    /// Accepts vectors within `BLOCH_NORM_TOL` of unit length and stores the
    /// exactly normalized direction.
    pub fn new(v: Vec3) -> Result<Self> {
        let n = crate::linalg::norm3(&v);
        if (n - 1.0).abs() > BLOCH_NORM_TOL {
            return Err(Error::Validation(format!(
                "Bloch vector must be unit length within {BLOCH_NORM_TOL:.0e}, got norm {n}"
            )));
        }
        Ok(BlochVector(crate::linalg::scale3(&v, 1.0 / n)))
    }

    pub fn from_angles(theta: f64, phi: f64) -> Self {
        BlochVector([
            theta.sin() * phi.cos(),
            theta.sin() * phi.sin(),
            theta.cos(),
        ])
    }

    pub fn components(&self) -> Vec3 {
        self.0
    }

    /// The 2x2 observable v . sigma (eigenvalues +1 and -1).
    pub fn observable(&self) -> CMatrix {
        let [x, y, z] = self.0;
        CMatrix::from_rows(&[
            vec![C64::new(z, 0.0), C64::new(x, -y)],
            vec![C64::new(x, y), C64::new(-z, 0.0)],
        ])
    }
}

/// Full correlation tensor t_{ijk} of a three-qubit state, indices 0..=3
/// with 0 the identity slot.
#[derive(Clone, Debug)]
pub struct CorrelationTensor {
    t: [[[f64; 4]; 4]; 4],
}

impl CorrelationTensor {
    pub fn of(rho: &DensityMatrix) -> Result<Self> {
        if rho.num_qubits() != 3 {
            return Err(Error::InvalidInput(format!(
                "correlation tensor requires a three-qubit state, got {} qubits",
                rho.num_qubits()
            )));
        }
        let m = rho.matrix();
        let mut t = [[[0.0f64; 4]; 4]; 4];
        for i in 0..4 {
            for j in 0..4 {
                for k in 0..4 {
                    let mut acc = C64::new(0.0, 0.0);
                    for &(r, c, v) in sparse_pauli3(i, j, k) {
                        // Tr(rho P) = sum_{r,c} P[r][c] rho[c][r]
                        acc += v * m.get(c, r);
                    }
                    if acc.im.abs() > IMAG_RESIDUE_TOL {
                        return Err(Error::NumericalConsistency(format!(
                            "t[{i}][{j}][{k}] has imaginary residue {:.3e}",
                            acc.im
                        )));
                    }
                    t[i][j][k] = acc.re;
                }
            }
        }
        if (t[0][0][0] - 1.0).abs() > TRACE_TOL {
            return Err(Error::NumericalConsistency(format!(
                "t[0][0][0] must be 1, got {}",
                t[0][0][0]
            )));
        }
        for (i, ti) in t.iter().enumerate() {
            for (j, tij) in ti.iter().enumerate() {
                for (k, &v) in tij.iter().enumerate() {
                    if v.abs() > 1.0 + 1e-10 {
                        return Err(Error::NumericalConsistency(format!(
                            "|t[{i}][{j}][{k}]| = {} exceeds 1",
                            v.abs()
                        )));
                    }
                }
            }
        }
        Ok(CorrelationTensor { t })
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        self.t[i][j][k]
    }

    /// The 3x3 block (T_0)_{ij} = t_{ij0}: Alice-Bob correlations with the
    /// third party ignored.
    pub fn t0(&self) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = self.t[i + 1][j + 1][0];
            }
        }
        Mat3(m)
    }

    /// The 3x3 block sum_k c_k t_{ijk}: Alice-Bob correlations conditioned on
    /// the third party measuring along `c`.
    pub fn contracted(&self, c: &Vec3) -> Mat3 {
        let mut m = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                m[i][j] = c[0] * self.t[i + 1][j + 1][1]
                    + c[1] * self.t[i + 1][j + 1][2]
                    + c[2] * self.t[i + 1][j + 1][3];
            }
        }
        Mat3(m)
    }
}

// ---------------------------------------------------------------------------
// State file I/O.
// ---------------------------------------------------------------------------

#[derive(Deserialize)]
struct StateFile {
    num_qubits: usize,
    re: Vec<Vec<f64>>,
    im: Vec<Vec<f64>>,
}

/// Writes a density matrix as JSON with 17 significant digits, enough to
/// round-trip f64 exactly.
pub fn save_state(rho: &DensityMatrix, path: &Path) -> Result<()> {
    let dim = rho.dim();
    let mut out = String::new();
    let _ = writeln!(out, "{{");
    let _ = writeln!(out, "  \"num_qubits\": {},", rho.num_qubits());
    for (field, pick) in [("re", 0usize), ("im", 1usize)] {
        let _ = writeln!(out, "  \"{field}\": [");
        for i in 0..dim {
            let row: Vec<String> = (0..dim)
                .map(|j| {
                    let z = rho.matrix().get(i, j);
                    format!("{:.16e}", if pick == 0 { z.re } else { z.im })
                })
                .collect();
            let comma = if i + 1 < dim { "," } else { "" };
            let _ = writeln!(out, "    [{}]{comma}", row.join(", "));
        }
        let comma = if field == "re" { "," } else { "" };
        let _ = writeln!(out, "  ]{comma}");
    }
    let _ = writeln!(out, "}}");
    std::fs::write(path, out)?;
    Ok(())
}

/// Reads a density matrix written by `save_state` (or any JSON file with the
/// same shape) and runs full validation on it.
pub fn load_state(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path)?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    let dim = 1usize
        .checked_shl(file.num_qubits as u32)
        .filter(|_| file.num_qubits >= 1 && file.num_qubits <= MAX_QUBITS)
        .ok_or_else(|| {
            Error::InvalidInput(format!(
                "num_qubits must be 1..={MAX_QUBITS}, got {}",
                file.num_qubits
            ))
        })?;
    let shape_ok = |m: &Vec<Vec<f64>>| m.len() == dim && m.iter().all(|r| r.len() == dim);
    if !shape_ok(&file.re) || !shape_ok(&file.im) {
        return Err(Error::Parse(format!(
            "re and im must both be {dim}x{dim} arrays"
        )));
    }
    let mat = CMatrix::from_fn(dim, |i, j| C64::new(file.re[i][j], file.im[i][j]));
    DensityMatrix::new(file.num_qubits, mat)
}

//! Dense complex matrices and a cyclic Jacobi Hermitian eigensolver.
//!
//! Every matrix in this crate is at most 64 x 64, so a row-major
//! `Vec<Complex64>` with textbook O(n^3) routines is the right tool; no
//! external LAPACK/BLAS backend is linked. The Jacobi method is used for all
//! eigendecompositions because it is simple, unconditionally stable on
//! Hermitian input, and deterministic (fixed sweep order, no pivot
//! heuristics).

use num_complex::Complex64;

pub type C64 = Complex64;

/// Jacobi sweeps stop once the off-diagonal Frobenius norm falls below this.
pub const JACOBI_OFF_DIAG_TOL: f64 = 1e-13;
/// Hard cap on Jacobi sweeps. Convergence is quadratic; typical matrices
/// here finish in fewer than ten sweeps.
pub const JACOBI_MAX_SWEEPS: usize = 100;

/// Square complex matrix, row-major storage.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    n: usize,
    data: Vec<C64>,
}

impl CMatrix {
    pub fn zeros(n: usize) -> Self {
        CMatrix {
            n,
            data: vec![C64::new(0.0, 0.0); n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            m.set(i, i, C64::new(1.0, 0.0));
        }
        m
    }

    pub fn from_rows(rows: &[Vec<C64>]) -> Self {
        let n = rows.len();
        assert!(
            rows.iter().all(|r| r.len() == n),
            "rows must form a square matrix"
        );
        let mut data = Vec::with_capacity(n * n);
        for r in rows {
            data.extend_from_slice(r);
        }
        CMatrix { n, data }
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m.set(i, j, f(i, j));
            }
        }
        m
    }

    /// Projector |v><v| for a (not necessarily normalized) state vector.
    pub fn outer(v: &[C64]) -> Self {
        let n = v.len();
        CMatrix::from_fn(n, |i, j| v[i] * v[j].conj())
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[i * self.n + j] = v;
    }

    pub fn add(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a + b)
            .collect();
        CMatrix { n: self.n, data }
    }

    pub fn sub(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let data = self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a - b)
            .collect();
        CMatrix { n: self.n, data }
    }

    pub fn scale(&self, s: C64) -> CMatrix {
        CMatrix {
            n: self.n,
            data: self.data.iter().map(|a| a * s).collect(),
        }
    }

    pub fn mul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.n, other.n);
        let n = self.n;
        let mut out = CMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let aik = self.get(i, k);
                if aik.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    let v = out.get(i, j) + aik * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    /// Kronecker product; the left factor owns the most significant index
    /// bits, matching the qubit-0-is-leftmost convention used throughout.
    pub fn kron(&self, other: &CMatrix) -> CMatrix {
        let (na, nb) = (self.n, other.n);
        let n = na * nb;
        let mut out = CMatrix::zeros(n);
        for i1 in 0..na {
            for j1 in 0..na {
                let a = self.get(i1, j1);
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for i2 in 0..nb {
                    for j2 in 0..nb {
                        out.set(i1 * nb + i2, j1 * nb + j2, a * other.get(i2, j2));
                    }
                }
            }
        }
        out
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.n, |i, j| self.get(j, i).conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.n).map(|i| self.get(i, i)).sum()
    }

    /// Tr(self * other) without forming the product.
    pub fn trace_product(&self, other: &CMatrix) -> C64 {
        assert_eq!(self.n, other.n);
        let mut acc = C64::new(0.0, 0.0);
        for i in 0..self.n {
            for k in 0..self.n {
                acc += self.get(i, k) * other.get(k, i);
            }
        }
        acc
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn frobenius_distance(&self, other: &CMatrix) -> f64 {
        assert_eq!(self.n, other.n);
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    /// Largest |A[i][j] - conj(A[j][i])| together with its index.
    pub fn hermiticity_violation(&self) -> (f64, (usize, usize)) {
        let mut worst = 0.0;
        let mut at = (0, 0);
        for i in 0..self.n {
            for j in i..self.n {
                let dev = (self.get(i, j) - self.get(j, i).conj()).norm();
                if dev > worst {
                    worst = dev;
                    at = (i, j);
                }
            }
        }
        (worst, at)
    }

    /// Replace A by (A + A^dagger)/2.
    pub fn hermitize(&mut self) {
        for i in 0..self.n {
            for j in i..self.n {
                let avg = 0.5 * (self.get(i, j) + self.get(j, i).conj());
                self.set(i, j, avg);
                self.set(j, i, avg.conj());
            }
        }
    }
}

/// Eigendecomposition of a Hermitian matrix: `values` ascending, column k of
/// `vectors` is the eigenvector for `values[k]`.
pub struct Eigh {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

fn off_diag_norm(m: &CMatrix) -> f64 {
    let n = m.dim();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += m.get(i, j).norm_sqr();
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigendecomposition for Hermitian matrices.
///
/// Each pivot (p, q) is annihilated by the unitary
///   U[p][p] = c, U[p][q] = -s e^{i phi}, U[q][p] = s e^{-i phi}, U[q][q] = c
/// where phi is the phase of A[p][q], and (c, s) solve the usual real Jacobi
/// 2x2 problem for |A[p][q]|. Input is symmetrized first; the asymmetric part
/// of anything passed in here is numerical noise by construction.
pub fn eigh(a: &CMatrix) -> Eigh {
    let n = a.dim();
    let mut m = a.clone();
    m.hermitize();
    let mut v = CMatrix::identity(n);

    for _ in 0..JACOBI_MAX_SWEEPS {
        if off_diag_norm(&m) <= JACOBI_OFF_DIAG_TOL {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                let abs = apq.norm();
                if abs < 1e-300 {
                    continue;
                }
                let phase = apq / abs;
                let app = m.get(p, p).re;
                let aqq = m.get(q, q).re;
                let tau = (app - aqq) / (2.0 * abs);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let se_pos = s * phase; // s e^{i phi}
                let se_neg = se_pos.conj(); // s e^{-i phi}

                // A <- A U (column update)
                for k in 0..n {
                    let akp = m.get(k, p);
                    let akq = m.get(k, q);
                    m.set(k, p, akp * c + akq * se_neg);
                    m.set(k, q, akq * c - akp * se_pos);
                }
                // A <- U^dagger A (row update)
                for l in 0..n {
                    let apl = m.get(p, l);
                    let aql = m.get(q, l);
                    m.set(p, l, apl * c + aql * se_pos);
                    m.set(q, l, aql * c - apl * se_neg);
                }
                // Exact values of the rotated pivot block.
                m.set(p, p, C64::new(app + t * abs, 0.0));
                m.set(q, q, C64::new(aqq - t * abs, 0.0));
                m.set(p, q, C64::new(0.0, 0.0));
                m.set(q, p, C64::new(0.0, 0.0));

                // V <- V U
                for k in 0..n {
                    let vkp = v.get(k, p);
                    let vkq = v.get(k, q);
                    v.set(k, p, vkp * c + vkq * se_neg);
                    v.set(k, q, vkq * c - vkp * se_pos);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    let diag: Vec<f64> = (0..n).map(|i| m.get(i, i).re).collect();
    order.sort_by(|&i, &j| {
        diag[i]
            .partial_cmp(&diag[j])
            .expect("eigenvalues are finite")
    });

    let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new_col, &old_col) in order.iter().enumerate() {
        // Fix the overall phase: largest-magnitude component made real
        // positive. Keeps degenerate-subspace output deterministic and turns
        // real-symmetric input into real eigenvectors.
        let mut best = 0.0;
        let mut ph = C64::new(1.0, 0.0);
        for k in 0..n {
            let z = v.get(k, old_col);
            if z.norm() > best {
                best = z.norm();
                ph = z / z.norm();
            }
        }
        for k in 0..n {
            vectors.set(k, new_col, v.get(k, old_col) * ph.conj());
        }
    }

    Eigh { values, vectors }
}

/// Eigendecomposition for a real symmetric matrix stored row-major in a flat
/// slice: Householder reduction to tridiagonal form followed by the implicit
/// QL iteration, with eigenvectors accumulated throughout. Returns
/// eigenvalues ascending and the eigenvector matrix row-major (column k
/// pairs with value k).
///
/// This is the hot path of the alternating-projections solver, which calls
/// it once per iteration; at this size it runs several times faster than the
/// cyclic Jacobi used for the complex Hermitian case.
pub fn eigh_real(n: usize, a: &[f64]) -> (Vec<f64>, Vec<f64>) {
    assert_eq!(a.len(), n * n, "matrix must be n x n");
    let mut z = a.to_vec();
    // Symmetrize; callers pass matrices that are symmetric up to rounding.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (z[i * n + j] + z[j * n + i]);
            z[i * n + j] = avg;
            z[j * n + i] = avg;
        }
    }
    let mut d = vec![0.0; n];
    let mut e = vec![0.0; n];
    householder_tridiagonalize(n, &mut z, &mut d, &mut e);
    tridiagonal_ql(n, &mut d, &mut e, &mut z);

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| d[i].partial_cmp(&d[j]).expect("eigenvalues are finite"));
    let values: Vec<f64> = order.iter().map(|&i| d[i]).collect();
    let mut vectors = vec![0.0; n * n];
    for (new_col, &old_col) in order.iter().enumerate() {
        for k in 0..n {
            vectors[k * n + new_col] = z[k * n + old_col];
        }
    }
    (values, vectors)
}

/// Reduces the symmetric matrix in `z` to tridiagonal form (diagonal in `d`,
/// subdiagonal in `e[1..]`) by Householder reflections, leaving the
/// accumulated orthogonal transformation in `z`.
fn householder_tridiagonalize(n: usize, z: &mut [f64], d: &mut [f64], e: &mut [f64]) {
    for i in (1..n).rev() {
        let l = i - 1;
        let mut h = 0.0;
        if i > 1 {
            let scale: f64 = (0..i).map(|k| z[i * n + k].abs()).sum();
            if scale == 0.0 {
                e[i] = z[i * n + l];
            } else {
                for k in 0..i {
                    z[i * n + k] /= scale;
                    h += z[i * n + k] * z[i * n + k];
                }
                let f = z[i * n + l];
                let g = if f >= 0.0 { -h.sqrt() } else { h.sqrt() };
                e[i] = scale * g;
                h -= f * g;
                z[i * n + l] = f - g;
                let mut f_sum = 0.0;
                for j in 0..i {
                    // Column i of z holds u/h for the eigenvector update.
                    z[j * n + i] = z[i * n + j] / h;
                    let mut g = 0.0;
                    for k in 0..=j {
                        g += z[j * n + k] * z[i * n + k];
                    }
                    for k in (j + 1)..i {
                        g += z[k * n + j] * z[i * n + k];
                    }
                    e[j] = g / h;
                    f_sum += e[j] * z[i * n + j];
                }
                let hh = f_sum / (h + h);
                for j in 0..i {
                    let f = z[i * n + j];
                    let g = e[j] - hh * f;
                    e[j] = g;
                    for k in 0..=j {
                        z[j * n + k] -= f * e[k] + g * z[i * n + k];
                    }
                }
            }
        } else {
            e[i] = z[i * n + l];
        }
        d[i] = h;
    }
    d[0] = 0.0;
    e[0] = 0.0;
    for i in 0..n {
        if d[i] != 0.0 {
            for j in 0..i {
                let mut g = 0.0;
                for k in 0..i {
                    g += z[i * n + k] * z[k * n + j];
                }
                for k in 0..i {
                    z[k * n + j] -= g * z[k * n + i];
                }
            }
        }
        d[i] = z[i * n + i];
        z[i * n + i] = 1.0;
        for j in 0..i {
            z[j * n + i] = 0.0;
            z[i * n + j] = 0.0;
        }
    }
}

/// Implicit-shift QL iteration on a tridiagonal matrix, rotating the columns
/// of `z` along with it so they end up as the eigenvectors.
fn tridiagonal_ql(n: usize, d: &mut [f64], e: &mut [f64], z: &mut [f64]) {
    for i in 1..n {
        e[i - 1] = e[i];
    }
    e[n - 1] = 0.0;
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            assert!(iter <= 50, "QL iteration failed to converge");
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let mut s = 1.0;
            let mut c = 1.0;
            let mut p = 0.0;
            let mut underflow = false;
            for i in (l..m).rev() {
                let mut f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    // The subdiagonal split; restart the search for m.
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    underflow = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
                for k in 0..n {
                    f = z[k * n + i + 1];
                    z[k * n + i + 1] = s * z[k * n + i] + c * f;
                    z[k * n + i] = c * z[k * n + i] - s * f;
                }
            }
            if underflow {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
}

// ---------------------------------------------------------------------------
// Real 3-vector and 3x3 helpers for the correlation-tensor geometry.
// ---------------------------------------------------------------------------

pub type Vec3 = [f64; 3];

pub fn dot3(a: &Vec3, b: &Vec3) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub fn cross3(a: &Vec3, b: &Vec3) -> Vec3 {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn norm3(a: &Vec3) -> f64 {
    dot3(a, a).sqrt()
}

pub fn scale3(a: &Vec3, s: f64) -> Vec3 {
    [a[0] * s, a[1] * s, a[2] * s]
}

pub fn add3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] + b[0], a[1] + b[1], a[2] + b[2]]
}

pub fn sub3(a: &Vec3, b: &Vec3) -> Vec3 {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

pub fn normalize3(a: &Vec3) -> Vec3 {
    let n = norm3(a);
    assert!(n > 0.0, "cannot normalize the zero vector");
    scale3(a, 1.0 / n)
}

/// A unit vector orthogonal to `a` (which must be unit).
pub fn any_orthogonal3(a: &Vec3) -> Vec3 {
    // Cross with the axis least aligned with `a`.
    let axis = if a[0].abs() <= a[1].abs() && a[0].abs() <= a[2].abs() {
        [1.0, 0.0, 0.0]
    } else if a[1].abs() <= a[2].abs() {
        [0.0, 1.0, 0.0]
    } else {
        [0.0, 0.0, 1.0]
    };
    normalize3(&cross3(a, &axis))
}

/// Real 3x3 matrix, row-major.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Mat3(pub [[f64; 3]; 3]);

impl Mat3 {
    pub fn mul_vec(&self, v: &Vec3) -> Vec3 {
        let m = &self.0;
        [
            m[0][0] * v[0] + m[0][1] * v[1] + m[0][2] * v[2],
            m[1][0] * v[0] + m[1][1] * v[1] + m[1][2] * v[2],
            m[2][0] * v[0] + m[2][1] * v[1] + m[2][2] * v[2],
        ]
    }

    fn gram(&self) -> [[f64; 3]; 3] {
        // M^T M
        let m = &self.0;
        let mut g = [[0.0; 3]; 3];
        for i in 0..3 {
            for j in 0..3 {
                g[i][j] = (0..3).map(|k| m[k][i] * m[k][j]).sum();
            }
        }
        g
    }
}

/// Eigendecomposition of a real symmetric 3x3 matrix by cyclic Jacobi.
/// Returns eigenvalues ascending with eigenvectors as columns.
fn eigh3(a: [[f64; 3]; 3]) -> ([f64; 3], [[f64; 3]; 3]) {
    let mut m = a;
    let mut v = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];
    for _ in 0..JACOBI_MAX_SWEEPS {
        let off = (m[0][1] * m[0][1] + m[0][2] * m[0][2] + m[1][2] * m[1][2]).sqrt();
        if off <= JACOBI_OFF_DIAG_TOL {
            break;
        }
        for (p, q) in [(0usize, 1usize), (0, 2), (1, 2)] {
            let apq = m[p][q];
            if apq.abs() < 1e-300 {
                continue;
            }
            let tau = (m[p][p] - m[q][q]) / (2.0 * apq);
            let t = if tau >= 0.0 {
                1.0 / (tau + (1.0 + tau * tau).sqrt())
            } else {
                -1.0 / (-tau + (1.0 + tau * tau).sqrt())
            };
            let c = 1.0 / (1.0 + t * t).sqrt();
            let s = t * c;
            for k in 0..3 {
                let mkp = m[k][p];
                let mkq = m[k][q];
                m[k][p] = mkp * c + mkq * s;
                m[k][q] = mkq * c - mkp * s;
            }
            for l in 0..3 {
                let mpl = m[p][l];
                let mql = m[q][l];
                m[p][l] = mpl * c + mql * s;
                m[q][l] = mql * c - mpl * s;
            }
            m[p][q] = 0.0;
            m[q][p] = 0.0;
            for k in 0..3 {
                let vkp = v[k][p];
                let vkq = v[k][q];
                v[k][p] = vkp * c + vkq * s;
                v[k][q] = vkq * c - vkp * s;
            }
        }
    }
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| m[i][i].partial_cmp(&m[j][j]).expect("finite eigenvalues"));
    let values = [
        m[order[0]][order[0]],
        m[order[1]][order[1]],
        m[order[2]][order[2]],
    ];
    let mut vecs = [[0.0; 3]; 3];
    for (new, &old) in order.iter().enumerate() {
        // Sign convention: largest-magnitude component positive.
        let col = [v[0][old], v[1][old], v[2][old]];
        let mut idx = 0;
        for k in 1..3 {
            if col[k].abs() > col[idx].abs() {
                idx = k;
            }
        }
        let sign = if col[idx] < 0.0 { -1.0 } else { 1.0 };
        for k in 0..3 {
            vecs[k][new] = col[k] * sign;
        }
    }
    (values, vecs)
}

/// Singular value decomposition of a real 3x3 matrix.
/// `sigma` is descending; `right[k]` and `left[k]` are the singular-vector
/// pairs, with left vectors completed orthonormally where sigma vanishes.
#[derive(Clone, Debug)]
pub struct Svd3 {
    pub sigma: [f64; 3],
    pub right: [Vec3; 3],
    pub left: [Vec3; 3],
}

pub fn svd3(m: &Mat3) -> Svd3 {
    let (vals, vecs) = eigh3(m.gram());
    // Ascending eigenvalues of M^T M -> descending singular values.
    let mut sigma = [0.0; 3];
    let mut right = [[0.0; 3]; 3];
    for k in 0..3 {
        let src = 2 - k;
        sigma[k] = vals[src].max(0.0).sqrt();
        right[k] = [vecs[0][src], vecs[1][src], vecs[2][src]];
    }
    let tiny = 1e-13 * sigma[0].max(1.0);
    let mut left = [[0.0; 3]; 3];
    for k in 0..3 {
        if sigma[k] > tiny {
            left[k] = normalize3(&m.mul_vec(&right[k]));
        } else {
            left[k] = match k {
                0 => [1.0, 0.0, 0.0],
                1 => any_orthogonal3(&left[0]),
                _ => cross3(&left[0], &left[1]),
            };
        }
    }
    Svd3 { sigma, right, left }
}

/// Largest singular value of a real 3x3 matrix.
pub fn sigma_max3(m: &Mat3) -> f64 {
    let (vals, _) = eigh3(m.gram());
    vals[2].max(0.0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn eigh_known_hermitian_2x2() {
        // [[2, 1-i], [1+i, 3]] has eigenvalues 1 and 4.
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, -1.0)],
            vec![c(1.0, 1.0), c(3.0, 0.0)],
        ]);
        let e = eigh(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-13, "got {:?}", e.values);
        assert!((e.values[1] - 4.0).abs() < 1e-13);
        // Residual check A v = lambda v.
        for k in 0..2 {
            for i in 0..2 {
                let av: C64 = (0..2).map(|j| m.get(i, j) * e.vectors.get(j, k)).sum();
                let lv = e.vectors.get(i, k) * e.values[k];
                assert!((av - lv).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn eigh_pauli_y() {
        let m = CMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(0.0, -1.0)],
            vec![c(0.0, 1.0), c(0.0, 0.0)],
        ]);
        let e = eigh(&m);
        assert!((e.values[0] + 1.0).abs() < 1e-14);
        assert!((e.values[1] - 1.0).abs() < 1e-14);
    }

    #[test]
    fn eigh_real_symmetric_3x3() {
        let m = CMatrix::from_rows(&[
            vec![c(2.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
            vec![c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0), c(5.0, 0.0)],
        ]);
        let e = eigh(&m);
        assert!((e.values[0] - 1.0).abs() < 1e-13);
        assert!((e.values[1] - 3.0).abs() < 1e-13);
        assert!((e.values[2] - 5.0).abs() < 1e-13);
    }

    #[test]
    fn eigh_random_hermitian_reconstructs() {
        // Deterministic pseudo-random Hermitian 8x8; checks V Lambda V^dag = A
        // and orthonormal columns.
        let n = 8;
        let mut seed = 0x2545F4914F6CDD1Du64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = CMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                a.set(i, j, c(next(), next()));
            }
        }
        let mut h = a.clone();
        h.hermitize();
        let e = eigh(&h);
        // Columns orthonormal.
        for p in 0..n {
            for q in 0..n {
                let ip: C64 = (0..n)
                    .map(|k| e.vectors.get(k, p).conj() * e.vectors.get(k, q))
                    .sum();
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((ip - c(expect, 0.0)).norm() < 1e-12);
            }
        }
        // Reconstruction.
        let mut recon = CMatrix::zeros(n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    let v = recon.get(i, j)
                        + e.vectors.get(i, k) * e.vectors.get(j, k).conj() * e.values[k];
                    recon.set(i, j, v);
                }
            }
        }
        assert!(recon.frobenius_distance(&h) < 1e-11);
    }

    #[test]
    fn eigh_real_matches_known_spectrum_and_reconstructs() {
        // Same 3x3 as the complex test, plus a reconstruction check on a
        // deterministic pseudo-random 12x12.
        let a3 = [2.0, 1.0, 0.0, 1.0, 2.0, 0.0, 0.0, 0.0, 5.0];
        let (vals, _) = eigh_real(3, &a3);
        assert!((vals[0] - 1.0).abs() < 1e-13);
        assert!((vals[1] - 3.0).abs() < 1e-13);
        assert!((vals[2] - 5.0).abs() < 1e-13);

        let n = 12;
        let mut seed = 0x9E3779B97F4A7C15u64;
        let mut next = move || {
            seed ^= seed << 13;
            seed ^= seed >> 7;
            seed ^= seed << 17;
            (seed >> 11) as f64 / (1u64 << 53) as f64 - 0.5
        };
        let mut a = vec![0.0; n * n];
        for i in 0..n {
            for j in i..n {
                let x = next();
                a[i * n + j] = x;
                a[j * n + i] = x;
            }
        }
        let (vals, vecs) = eigh_real(n, &a);
        // Ascending order.
        for k in 1..n {
            assert!(vals[k] >= vals[k - 1]);
        }
        // Orthonormal columns and A v = lambda v.
        for p in 0..n {
            for q in 0..n {
                let ip: f64 = (0..n).map(|k| vecs[k * n + p] * vecs[k * n + q]).sum();
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-12);
            }
            for i in 0..n {
                let av: f64 = (0..n).map(|j| a[i * n + j] * vecs[j * n + p]).sum();
                assert!((av - vals[p] * vecs[i * n + p]).abs() < 1e-11);
            }
        }
    }

    #[test]
    fn svd3_permutation_with_scales() {
        // M maps e1->3*e3, e2->(-1)*e2... columns chosen so M^T M = diag(9,1,4).
        let m = Mat3([[0.0, 1.0, 0.0], [0.0, 0.0, 2.0], [3.0, 0.0, 0.0]]);
        let s = svd3(&m);
        assert!((s.sigma[0] - 3.0).abs() < 1e-12);
        assert!((s.sigma[1] - 2.0).abs() < 1e-12);
        assert!((s.sigma[2] - 1.0).abs() < 1e-12);
        // sigma_max path agrees.
        assert!((sigma_max3(&m) - 3.0).abs() < 1e-12);
        // M * right = sigma * left for all three pairs.
        for k in 0..3 {
            let mv = m.mul_vec(&s.right[k]);
            let sl = scale3(&s.left[k], s.sigma[k]);
            for i in 0..3 {
                assert!((mv[i] - sl[i]).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn svd3_zero_matrix_completes_orthonormal_left() {
        let s = svd3(&Mat3([[0.0; 3]; 3]));
        assert_eq!(s.sigma, [0.0; 3]);
        for k in 0..3 {
            assert!((norm3(&s.left[k]) - 1.0).abs() < 1e-12);
            assert!((norm3(&s.right[k]) - 1.0).abs() < 1e-12);
        }
        assert!(dot3(&s.left[0], &s.left[1]).abs() < 1e-12);
        assert!(dot3(&s.left[0], &s.left[2]).abs() < 1e-12);
        assert!(dot3(&s.left[1], &s.left[2]).abs() < 1e-12);
    }

    #[test]
    fn kron_matches_block_structure() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(0.0, 0.0), c(1.0, 0.0)],
        ]);
        let b = CMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(0.0, 0.0)],
            vec![c(0.0, 0.0), c(3.0, 0.0)],
        ]);
        let k = a.kron(&b);
        assert_eq!(k.dim(), 4);
        assert_eq!(k.get(0, 0), c(0.0, 1.0));
        assert_eq!(k.get(0, 2), c(0.0, 2.0));
        assert_eq!(k.get(1, 3), c(6.0, 0.0));
        assert_eq!(k.get(2, 0), c(0.0, 0.0));
    }

    #[test]
    fn trace_product_matches_explicit_product() {
        let a = CMatrix::from_rows(&[
            vec![c(1.0, 2.0), c(0.5, 0.0)],
            vec![c(0.0, -1.0), c(2.0, 0.0)],
        ]);
        let b = CMatrix::from_rows(&[
            vec![c(0.0, 1.0), c(1.0, 0.0)],
            vec![c(2.0, 0.0), c(0.0, 0.0)],
        ]);
        let direct = a.mul(&b).trace();
        let fused = a.trace_product(&b);
        assert!((direct - fused).norm() < 1e-14);
    }
}

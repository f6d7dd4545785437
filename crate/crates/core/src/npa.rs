//! Level-2 moment-matrix relaxation of the guessing-probability problem.
//!
//! The question answered here: given an observed parity-CHSH value, how large
//! can any single outcome probability P(abc|xy) be for *some* quantum
//! realization? An upper bound comes from relaxing "quantum realization" to
//! "positive semidefinite moment matrix": variables are expectations of words
//! of measurement projectors (one projector per binary measurement, length
//! up to 2, so products of up to 4 letters appear as matrix entries), and the
//! constraints are the word-equivalence relations, normalization, the Bell
//! value, and the objective entry. Feasibility of each candidate objective
//! value is decided by alternating projections between the affine constraint
//! set and the PSD cone; the upper bound is then located by bisection.

use std::collections::BTreeMap;

use crate::bell::{bell_coefficient, white_noise_optimal_frame};
use crate::error::{Error, Result};
use crate::linalg::{eigh_real, CMatrix, C64};
use crate::pauli::{white_noise_state, BlochVector};

const SQRT2: f64 = std::f64::consts::SQRT_2;
/// Moment-matrix side length at level 2: identity, 5 single-letter words,
/// 12 two-letter words.
pub const BASIS_SIZE: usize = 18;

/// Measurement-projector letters: Alice's two settings, Bob's two, Charlie's
/// one. Each is the outcome +1 projector; outcome -1 enters as I minus the
/// letter.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Op {
    E0,
    E1,
    F0,
    F1,
    G,
}

impl Op {
    pub const ALL: [Op; 5] = [Op::E0, Op::E1, Op::F0, Op::F1, Op::G];

    fn party(self) -> usize {
        match self {
            Op::E0 | Op::E1 => 0,
            Op::F0 | Op::F1 => 1,
            Op::G => 2,
        }
    }
}

pub type Word = Vec<Op>;

/// Canonical form of a projector word: letters of different parties commute,
/// so the word is stably partitioned by party (preserving the order of
/// same-party letters, which do not commute), then runs of a repeated letter
/// collapse by idempotence.
pub fn canonicalize(word: &[Op]) -> Word {
    let mut out = Vec::with_capacity(word.len());
    for party in 0..3 {
        for &op in word.iter().filter(|o| o.party() == party) {
            if out.last() != Some(&op) {
                out.push(op);
            }
        }
    }
    out
}

fn reversed_canonical(word: &[Op]) -> Word {
    let rev: Vec<Op> = word.iter().rev().copied().collect();
    canonicalize(&rev)
}

/// Class key: a word and its reversal carry conjugate (here: equal, real)
/// moments, so both map to the lexicographically smaller of the two
/// canonical forms.
fn class_key(word: &[Op]) -> Word {
    let w = canonicalize(word);
    let r = reversed_canonical(&w);
    if r < w {
        r
    } else {
        w
    }
}

/// The fixed level-2 word structure: basis, entry-word classes and their
/// multiplicities.
pub struct Level2 {
    basis: Vec<Word>,
    /// Class index of each (i, j) entry, flattened row-major.
    entry_class: Vec<usize>,
    /// Entries belonging to each class.
    class_entries: Vec<Vec<(usize, usize)>>,
    key_to_class: BTreeMap<Word, usize>,
}

impl Level2 {
    pub fn new() -> Self {
        let mut basis: Vec<Word> = vec![vec![]];
        for op in Op::ALL {
            basis.push(vec![op]);
        }
        for a in Op::ALL {
            for b in Op::ALL {
                let w = canonicalize(&[a, b]);
                if w.len() == 2 && !basis.contains(&w) {
                    basis.push(w);
                }
            }
        }
        assert_eq!(basis.len(), BASIS_SIZE);

        let n = basis.len();
        let mut key_to_class: BTreeMap<Word, usize> = BTreeMap::new();
        let mut entry_class = vec![0usize; n * n];
        let mut class_entries: Vec<Vec<(usize, usize)>> = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let mut word: Word = basis[i].iter().rev().copied().collect();
                word.extend_from_slice(&basis[j]);
                let key = class_key(&word);
                let class = *key_to_class.entry(key).or_insert_with(|| {
                    class_entries.push(Vec::new());
                    class_entries.len() - 1
                });
                entry_class[i * n + j] = class;
                class_entries[class].push((i, j));
            }
        }
        Level2 {
            basis,
            entry_class,
            class_entries,
            key_to_class,
        }
    }

    pub fn basis(&self) -> &[Word] {
        &self.basis
    }

    pub fn num_classes(&self) -> usize {
        self.class_entries.len()
    }

    /// Class index of an arbitrary word, if the word occurs among the level-2
    /// matrix entries.
    pub fn class_of_word(&self, word: &[Op]) -> Option<usize> {
        self.key_to_class.get(&class_key(word)).copied()
    }

    /// Moment class of entry (i, j).
    pub fn entry_class(&self, i: usize, j: usize) -> usize {
        self.entry_class[i * BASIS_SIZE + j]
    }

    fn multiplicity(&self, class: usize) -> f64 {
        self.class_entries[class].len() as f64
    }
}

impl Default for Level2 {
    fn default() -> Self {
        Level2::new()
    }
}

/// One of the 32 outcome/input combinations whose probability can be the
/// optimization objective.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TargetOutcome {
    pub a: i8,
    pub b: i8,
    pub c: i8,
    pub x: u8,
    pub y: u8,
}

impl TargetOutcome {
    pub fn all() -> Vec<TargetOutcome> {
        let mut v = Vec::with_capacity(32);
        for x in 0..2u8 {
            for y in 0..2u8 {
                for &a in &[1i8, -1] {
                    for &b in &[1i8, -1] {
                        for &c in &[1i8, -1] {
                            v.push(TargetOutcome { a, b, c, x, y });
                        }
                    }
                }
            }
        }
        v
    }
}

/// Sparse row over class variables: P(abc|xy) as a signed sum of word
/// moments, from expanding (I +- E)(I +- F)(I +- G) / outcome bookkeeping.
fn expand_probability(structure: &Level2, t: TargetOutcome) -> Vec<(usize, f64)> {
    let letters = [
        if t.x == 0 { Op::E0 } else { Op::E1 },
        if t.y == 0 { Op::F0 } else { Op::F1 },
        Op::G,
    ];
    let signs = [t.a, t.b, t.c];
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for mask in 0..8usize {
        let mut coeff = 1.0f64;
        let mut word: Word = Vec::with_capacity(3);
        for k in 0..3 {
            if mask & (1 << k) != 0 {
                coeff *= if signs[k] == 1 { 1.0 } else { -1.0 };
                word.push(letters[k]);
            } else if signs[k] == 1 {
                coeff = 0.0;
            }
        }
        if coeff != 0.0 {
            let class = structure
                .class_of_word(&word)
                .expect("probability words occur in the level-2 matrix");
            *acc.entry(class).or_insert(0.0) += coeff;
        }
    }
    acc.into_iter().filter(|(_, v)| *v != 0.0).collect()
}

fn row_dot(row: &[(usize, f64)], values: &[f64]) -> f64 {
    row.iter().map(|(c, w)| w * values[*c]).sum()
}

/// Feasibility problem: does a PSD level-2 moment matrix exist with the given
/// Bell value and with the target probability at least some threshold?
pub struct MomentProblem<'a> {
    structure: &'a Level2,
    pub bell: f64,
    pub target: TargetOutcome,
    unit_row: Vec<(usize, f64)>,
    bell_row: Vec<(usize, f64)>,
    obj_row: Vec<(usize, f64)>,
    /// Gram matrices of the constraint rows in the multiplicity metric, for
    /// the equality-only stage (top-left 2x2 block used) and the
    /// active-objective stage (full 3x3).
    gram2: [[f64; 3]; 3],
    gram3: [[f64; 3]; 3],
}

/// The Bell functional as a row over class moments.
fn bell_row(structure: &Level2) -> Vec<(usize, f64)> {
    let mut acc: BTreeMap<usize, f64> = BTreeMap::new();
    for t in TargetOutcome::all() {
        let alpha = bell_coefficient(t.a, t.b, t.c, t.x, t.y);
        for (class, w) in expand_probability(structure, t) {
            *acc.entry(class).or_insert(0.0) += alpha * w;
        }
    }
    acc.into_iter().filter(|(_, v)| v.abs() > 1e-15).collect()
}

fn gram_entry(structure: &Level2, r: &[(usize, f64)], s: &[(usize, f64)]) -> f64 {
    // Rows are sparse and short; a merge over the smaller one suffices.
    let map: BTreeMap<usize, f64> = s.iter().copied().collect();
    r.iter()
        .filter_map(|(c, w)| map.get(c).map(|v| w * v / structure.multiplicity(*c)))
        .sum()
}

/// Builds the feasibility problem for one target outcome at a given Bell
/// value. Bell values beyond the quantum maximum are rejected outright.
pub fn build_moment_problem<'a>(
    structure: &'a Level2,
    target: TargetOutcome,
    bell: f64,
) -> Result<MomentProblem<'a>> {
    if bell.abs() > SQRT2 + 1e-9 {
        return Err(Error::Infeasible(format!(
            "Bell value {bell} exceeds the quantum maximum sqrt(2)"
        )));
    }
    let bell = bell.clamp(-SQRT2, SQRT2);
    let unit_class = structure
        .class_of_word(&[])
        .expect("empty word is an entry");
    let unit_row = vec![(unit_class, 1.0)];
    let bell_row = bell_row(structure);
    let obj_row = expand_probability(structure, target);

    let rows = [&unit_row, &bell_row, &obj_row];
    let mut gram3 = [[0.0; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            gram3[i][j] = gram_entry(structure, rows[i], rows[j]);
        }
    }
    let mut gram2 = [[0.0; 3]; 3];
    for i in 0..2 {
        for j in 0..2 {
            gram2[i][j] = gram3[i][j];
        }
    }

    Ok(MomentProblem {
        structure,
        bell,
        target,
        unit_row,
        bell_row,
        obj_row,
        gram2,
        gram3,
    })
}

/// Solves the small positive-definite system G d = rhs in place (Gaussian
/// elimination with partial pivoting; G is 2x2 or 3x3).
fn solve_small(n: usize, g: &[[f64; 3]; 3], rhs: &[f64; 3]) -> [f64; 3] {
    let mut a = [[0.0f64; 4]; 3];
    for i in 0..n {
        for j in 0..n {
            a[i][j] = g[i][j];
        }
        a[i][n] = rhs[i];
    }
    for col in 0..n {
        let piv = (col..n)
            .max_by(|&r, &s| {
                a[r][col]
                    .abs()
                    .partial_cmp(&a[s][col].abs())
                    .expect("finite")
            })
            .expect("nonempty");
        a.swap(col, piv);
        let d = a[col][col];
        assert!(d.abs() > 1e-14, "constraint rows are linearly dependent");
        for j in col..=n {
            a[col][j] /= d;
        }
        for r in 0..n {
            if r != col && a[r][col] != 0.0 {
                let f = a[r][col];
                for j in col..=n {
                    a[r][j] -= f * a[col][j];
                }
            }
        }
    }
    let mut out = [0.0; 3];
    for i in 0..n {
        out[i] = a[i][n];
    }
    out
}

impl MomentProblem<'_> {
    /// Class means of a matrix: the orthogonal projection onto the
    /// "equivalent entries are equal and real" subspace, expressed as one
    /// value per class.
    fn class_means(&self, x: &[f64]) -> Vec<f64> {
        let n = BASIS_SIZE;
        let s = self.structure;
        let mut means = vec![0.0; s.num_classes()];
        for (class, entries) in s.class_entries.iter().enumerate() {
            let sum: f64 = entries.iter().map(|&(i, j)| x[i * n + j]).sum();
            means[class] = sum / entries.len() as f64;
        }
        means
    }

    /// Least-squares correction of class means onto the scalar equality
    /// constraints, in the multiplicity-weighted metric (which makes the
    /// combined map the exact orthogonal projection in matrix space).
    fn correct(
        &self,
        means: &[f64],
        rows: &[&Vec<(usize, f64)>],
        gram: &[[f64; 3]; 3],
        b: &[f64; 3],
    ) -> Vec<f64> {
        let k = rows.len();
        let mut resid = [0.0f64; 3];
        for (r, row) in rows.iter().enumerate() {
            resid[r] = row_dot(row, means) - b[r];
        }
        let d = solve_small(k, gram, &resid);
        let mut out = means.to_vec();
        for (r, row) in rows.iter().enumerate() {
            if d[r] == 0.0 {
                continue;
            }
            for (c, w) in row.iter() {
                out[*c] -= d[r] * w / self.structure.multiplicity(*c);
            }
        }
        out
    }

    /// Orthogonal projection onto the affine constraint set
    /// { class-equal, unit = 1, Bell row = bell, objective >= q }.
    fn project_affine(&self, x: &[f64], q: f64) -> Vec<f64> {
        let means = self.class_means(x);
        let rows2 = [&self.unit_row, &self.bell_row];
        let y2 = self.correct(&means, &rows2, &self.gram2, &[1.0, self.bell, 0.0]);
        let y = if row_dot(&self.obj_row, &y2) >= q {
            y2
        } else {
            // The probability floor is active; project with it as equality.
            let rows3 = [&self.unit_row, &self.bell_row, &self.obj_row];
            self.correct(&means, &rows3, &self.gram3, &[1.0, self.bell, q])
        };
        let n = BASIS_SIZE;
        let mut out = vec![0.0; n * n];
        for (class, entries) in self.structure.class_entries.iter().enumerate() {
            for &(i, j) in entries {
                out[i * n + j] = y[class];
            }
        }
        out
    }

    /// Objective value a matrix's class means imply.
    pub fn objective_value(&self, x: &CMatrix) -> f64 {
        let flat = flatten_real(x);
        row_dot(&self.obj_row, &self.class_means(&flat))
    }

    /// Bell value a matrix's class means imply.
    pub fn bell_of(&self, x: &CMatrix) -> f64 {
        let flat = flatten_real(x);
        row_dot(&self.bell_row, &self.class_means(&flat))
    }
}

fn flatten_real(x: &CMatrix) -> Vec<f64> {
    let n = x.dim();
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = x.get(i, j).re;
        }
    }
    out
}

fn unflatten(x: &[f64]) -> CMatrix {
    let n = BASIS_SIZE;
    CMatrix::from_fn(n, |i, j| C64::new(x[i * n + j], 0.0))
}

fn psd_project(x: &[f64]) -> Vec<f64> {
    let n = BASIS_SIZE;
    let (vals, vecs) = eigh_real(n, x);
    if vals[0] >= 0.0 {
        return x.to_vec();
    }
    let mut out = vec![0.0; n * n];
    for (k, &lam) in vals.iter().enumerate() {
        if lam <= 0.0 {
            continue;
        }
        for i in 0..n {
            let vik = vecs[i * n + k] * lam;
            if vik == 0.0 {
                continue;
            }
            for j in 0..n {
                out[i * n + j] += vik * vecs[j * n + k];
            }
        }
    }
    out
}

fn frob_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// Verdict of one feasibility solve.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Feasibility {
    Feasible,
    Infeasible,
    Inconclusive,
}

#[derive(Clone, Copy, Debug)]
pub struct SolverParams {
    /// Residual below which the iterate counts as a feasible point.
    pub tol: f64,
    pub max_iters: usize,
}

impl Default for SolverParams {
    fn default() -> Self {
        SolverParams {
            tol: 1e-7,
            max_iters: 20_000,
        }
    }
}

/// Iterations between stagnation checks.
const STAGNATION_STRIDE: usize = 250;
/// First iteration at which a stagnation check runs (its lookbacks at k/2
/// and k/4 need a meaningful history).
const STAGNATION_MIN_ITER: usize = 2000;
/// The residual must exceed this multiple of tol before an extrapolated
/// positive limit counts as an infeasibility verdict.
const STAGNATION_RESIDUAL_FACTOR: f64 = 100.0;
/// Fraction of the current residual the extrapolated limit must reach.
const STAGNATION_GAP_FRACTION: f64 = 0.8;

#[derive(Clone, Debug)]
pub struct SolveReport {
    pub status: Feasibility,
    pub iterations: usize,
    /// Final distance between the PSD iterate and its affine projection.
    pub residual: f64,
    /// Final affine-side iterate; a near-feasible witness when status is
    /// Feasible, and a useful warm start for nearby solves either way.
    pub matrix: CMatrix,
}

/// Estimated limit of the residual sequence from three samples at k, k/2,
/// k/4 under a power-law model r_k = g + C / k^alpha. Returns None when the
/// samples do not fit a decaying power law (then no verdict is drawn).
fn extrapolated_residual_limit(r_quarter: f64, r_half: f64, r_full: f64) -> Option<f64> {
    let d1 = r_half - r_full;
    let d2 = r_quarter - r_half;
    if d1 <= 1e-12 * r_full.max(1e-300) {
        // Flat within rounding: the limit is the current residual itself.
        return Some(r_full);
    }
    let ratio = d2 / d1; // equals 2^alpha under the model
    if ratio <= 1.0 + 1e-6 {
        return None;
    }
    Some(r_full - d1 / (ratio - 1.0))
}

/// Alternating projections between the PSD cone and the affine constraint
/// set, at objective threshold `q`.
///
/// The distance between successive projections is nonincreasing; it falls
/// under `tol` when the sets intersect (feasible) and approaches the gap
/// between the sets when they do not. The gap case is recognized by
/// extrapolating the residual tail: when the extrapolated limit accounts for
/// most of a residual that still dwarfs tol, the verdict is infeasible.
/// Hitting the iteration cap before either signal is inconclusive. Only a
/// feasible verdict carries a certificate (the near-feasible iterate);
/// infeasible and inconclusive verdicts both act as "not shown feasible".
pub fn solve_feasibility(
    problem: &MomentProblem<'_>,
    q: f64,
    warm: Option<&CMatrix>,
    params: &SolverParams,
) -> SolveReport {
    let n = BASIS_SIZE;
    let start: Vec<f64> = match warm {
        Some(m) => {
            assert_eq!(m.dim(), n, "warm start has the wrong dimension");
            flatten_real(m)
        }
        None => {
            let mut ident = vec![0.0; n * n];
            for i in 0..n {
                ident[i * n + i] = 1.0;
            }
            ident
        }
    };
    let mut x = problem.project_affine(&start, q);
    let mut history: Vec<f64> = Vec::with_capacity(params.max_iters.min(4096));
    let mut last_residual = f64::INFINITY;
    for k in 1..=params.max_iters {
        let y = psd_project(&x);
        let xp = problem.project_affine(&y, q);
        let r = frob_dist(&xp, &y);
        last_residual = r;
        x = xp;
        if r < params.tol {
            return SolveReport {
                status: Feasibility::Feasible,
                iterations: k,
                residual: r,
                matrix: unflatten(&x),
            };
        }
        history.push(r);
        if r > STAGNATION_RESIDUAL_FACTOR * params.tol
            && k >= STAGNATION_MIN_ITER
            && k % STAGNATION_STRIDE == 0
        {
            let limit = extrapolated_residual_limit(history[k / 4 - 1], history[k / 2 - 1], r);
            if matches!(limit, Some(g) if g > STAGNATION_GAP_FRACTION * r) {
                return SolveReport {
                    status: Feasibility::Infeasible,
                    iterations: k,
                    residual: r,
                    matrix: unflatten(&x),
                };
            }
        }
    }
    SolveReport {
        status: Feasibility::Inconclusive,
        iterations: params.max_iters,
        residual: last_residual,
        matrix: unflatten(&x),
    }
}

/// Moment matrix of the explicit optimal strategy for the white-noise family
/// at visibility `p`: entries Tr(rho w), computed from the actual projectors.
/// It is feasible by construction for its own Bell value sqrt(2) p, which
/// makes it the canonical warm start and feasibility witness.
pub fn explicit_moment_matrix(p: f64) -> Result<CMatrix> {
    let (gamma, _) = explicit_strategy(p)?;
    Ok(gamma)
}

fn explicit_strategy(p: f64) -> Result<(CMatrix, Vec<(TargetOutcome, f64)>)> {
    let rho = white_noise_state(p)?;
    let frame = white_noise_optimal_frame(BlochVector::new([0.0, 0.0, 1.0]).expect("unit"));
    let proj = |v: &BlochVector| -> CMatrix {
        CMatrix::identity(2)
            .add(&v.observable())
            .scale(C64::new(0.5, 0.0))
    };
    let i2 = CMatrix::identity(2);
    let lift = |m: &CMatrix, slot: usize| -> CMatrix {
        match slot {
            0 => m.kron(&i2).kron(&i2),
            1 => i2.kron(m).kron(&i2),
            _ => i2.kron(&i2).kron(m),
        }
    };
    let op_matrix = |op: Op| -> CMatrix {
        match op {
            Op::E0 => lift(&proj(&frame.a), 0),
            Op::E1 => lift(&proj(&frame.a_prime), 0),
            Op::F0 => lift(&proj(&frame.b), 1),
            Op::F1 => lift(&proj(&frame.b_prime), 1),
            Op::G => lift(&proj(&frame.c), 2),
        }
    };
    let ops: Vec<CMatrix> = Op::ALL.iter().map(|&o| op_matrix(o)).collect();
    let word_matrix = |w: &[Op]| -> CMatrix {
        let mut m = CMatrix::identity(8);
        for &op in w {
            m = m.mul(&ops[op as usize]);
        }
        m
    };

    let structure = Level2::new();
    let n = BASIS_SIZE;
    let mut gamma = CMatrix::zeros(n);
    for i in 0..n {
        let left: Word = structure.basis[i].iter().rev().copied().collect();
        let lm = word_matrix(&left);
        for j in 0..n {
            let wm = lm.mul(&word_matrix(&structure.basis[j]));
            let z = rho.matrix().trace_product(&wm);
            if z.im.abs() > 1e-9 {
                return Err(Error::NumericalConsistency(format!(
                    "moment ({i},{j}) has imaginary residue {:.3e}",
                    z.im
                )));
            }
            gamma.set(i, j, C64::new(z.re, 0.0));
        }
    }

    let eye8 = CMatrix::identity(8);
    let mut probs = Vec::with_capacity(32);
    for t in TargetOutcome::all() {
        let pick = |plus: &CMatrix, sign: i8| -> CMatrix {
            if sign == 1 {
                plus.clone()
            } else {
                eye8.sub(plus)
            }
        };
        let ma = pick(&ops[t.x as usize], t.a);
        let mb = pick(&ops[2 + t.y as usize], t.b);
        let mc = pick(&ops[4], t.c);
        let prob = rho.matrix().trace_product(&ma.mul(&mb).mul(&mc)).re;
        probs.push((t, prob));
    }
    Ok((gamma, probs))
}

/// Values of all basis words under a deterministic 0/1 assignment to the
/// five letters; the box's moment matrix is the rank-1 outer product of this
/// vector with itself.
fn box_word_values(structure: &Level2, assign: [f64; 5]) -> Vec<f64> {
    structure
        .basis
        .iter()
        .map(|w| w.iter().map(|&op| assign[op as usize]).product())
        .collect()
}

/// Exact feasibility witness for objective 1 at |bell| <= 1: a mixture of
/// two deterministic boxes that both emit the target outcome on its input
/// pair while violating the inequality in opposite directions. Every
/// deterministic box has Bell value +1 or -1, and fixing the three letters
/// the target reads still leaves both signs reachable, so the mixture exists
/// for every target.
/// Word-value vector of some deterministic box that emits the target outcome
/// on the target's input pair and has the requested Bell value sign. Fixing
/// the three letters the target reads leaves both Bell signs reachable
/// through the two free letters, so the box exists for every target.
fn target_box(
    structure: &Level2,
    bell_row: &[(usize, f64)],
    target: TargetOutcome,
    sign: f64,
) -> Vec<f64> {
    for bits in 0..32u32 {
        let assign: [f64; 5] =
            std::array::from_fn(|k| if bits & (1 << k) != 0 { 1.0 } else { 0.0 });
        let want = |s: i8| if s == 1 { 1.0 } else { 0.0 };
        if assign[target.x as usize] != want(target.a)
            || assign[2 + target.y as usize] != want(target.b)
            || assign[4] != want(target.c)
        {
            continue;
        }
        let v = box_word_values(structure, assign);
        // Bell value of the box, read off its class moments v_i v_j.
        let value: f64 = bell_row
            .iter()
            .map(|&(class, w)| {
                let (i, j) = structure.class_entries[class][0];
                w * v[i] * v[j]
            })
            .sum();
        if value * sign > 0.5 {
            return v;
        }
    }
    unreachable!("both Bell signs occur among boxes emitting any fixed outcome");
}

/// Exact feasibility witness for objective 1 at |bell| <= 1: a mixture of
/// two deterministic boxes that both emit the target outcome on its input
/// pair while violating the inequality in opposite directions.
fn box_mixture_matrix(
    structure: &Level2,
    bell_row: &[(usize, f64)],
    target: TargetOutcome,
    bell: f64,
) -> Vec<f64> {
    let n = BASIS_SIZE;
    let vp = target_box(structure, bell_row, target, 1.0);
    let vm = target_box(structure, bell_row, target, -1.0);
    let (wp, wm) = (0.5 * (1.0 + bell), 0.5 * (1.0 - bell));
    let mut out = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            out[i * n + j] = wp * vp[i] * vp[j] + wm * vm[i] * vm[j];
        }
    }
    out
}

#[derive(Clone, Copy, Debug)]
pub struct NpaParams {
    /// Bisection bracket width at which a target's search stops.
    pub bisect_tol: f64,
    pub solver: SolverParams,
}

impl Default for NpaParams {
    fn default() -> Self {
        NpaParams {
            bisect_tol: 1e-3,
            solver: SolverParams::default(),
        }
    }
}

/// Upper bound on the guessing probability at a given Bell value.
#[derive(Clone, Debug)]
pub struct NpaBound {
    /// max over the 32 targets of that target's bisection upper bracket.
    pub upper: f64,
    /// Largest objective value the solver actually certified feasible, if
    /// any; the true optimum lies in [best_feasible, upper].
    pub best_feasible: Option<f64>,
    /// Bracket width at the target attaining `upper` (wider than the
    /// bisection tolerance when solves came back inconclusive).
    pub uncertainty: f64,
    /// Number of bisection steps decided by an inconclusive solve.
    pub inconclusive_steps: usize,
    pub basis_size: usize,
    pub num_classes: usize,
}

/// Bisection floor: the maximum outcome probability is at least 1/8 because
/// the 8 outcomes of any input pair sum to 1.
const PROB_FLOOR: f64 = 0.125;

/// Upper bound on any outcome probability compatible with the given Bell
/// value, at the level-2 relaxation.
///
/// Per target: bisection over the objective threshold in [1/8, 1]. Feasible
/// verdicts raise the lower bracket and refresh the warm start; infeasible
/// and inconclusive verdicts both lower the upper bracket (inconclusive ones
/// are counted and reported). Targets run in descending order of their
/// explicit-strategy probability, and a target is abandoned once its upper
/// bracket falls below an objective already certified feasible elsewhere,
/// which cannot change the overall maximum.
pub fn npa_upper_bound(bell: f64, params: &NpaParams) -> Result<NpaBound> {
    if !(0.0..=SQRT2 + 1e-9).contains(&bell) {
        return Err(Error::InvalidInput(format!(
            "Bell value must lie in [0, sqrt(2)], got {bell}"
        )));
    }
    let bell = bell.min(SQRT2);
    let structure = Level2::new();
    let brow = bell_row(&structure);

    // Up to Bell value 1 every outcome probability can reach 1 exactly:
    // mixtures of two deterministic boxes witness it. Verify the witnesses
    // and return the exact answer without running the solver.
    if bell <= 1.0 + 1e-12 {
        for target in TargetOutcome::all() {
            let problem = build_moment_problem(&structure, target, bell)?;
            let witness = box_mixture_matrix(&structure, &brow, target, bell.min(1.0));
            let means = problem.class_means(&witness);
            if (row_dot(&problem.unit_row, &means) - 1.0).abs() > 1e-12
                || (row_dot(&problem.bell_row, &means) - bell).abs() > 1e-9
                || (row_dot(&problem.obj_row, &means) - 1.0).abs() > 1e-12
            {
                return Err(Error::NumericalConsistency(
                    "deterministic witness violates its own constraints".into(),
                ));
            }
        }
        return Ok(NpaBound {
            upper: 1.0,
            best_feasible: Some(1.0),
            uncertainty: 0.0,
            inconclusive_steps: 0,
            basis_size: BASIS_SIZE,
            num_classes: structure.num_classes(),
        });
    }

    let (explicit, mut probs) = explicit_strategy(bell / SQRT2)?;
    // Vertices for the quantum-box mixture certificates: the maximally
    // violating strategy, weighted to land exactly on the requested value.
    let (explicit_max, probs_max) = explicit_strategy(1.0)?;
    let explicit_max_flat = flatten_real(&explicit_max);
    let mu = (bell - 1.0) / (SQRT2 - 1.0);
    probs.sort_by(|a, b| b.1.partial_cmp(&a.1).expect("probabilities are finite"));

    let mut best_verified: Option<f64> = None;
    let mut inconclusive_steps = 0usize;
    let mut results: Vec<(f64, Option<f64>)> = Vec::with_capacity(32);

    for &(target, explicit_prob) in &probs {
        let problem = build_moment_problem(&structure, target, bell)?;
        let mut warm = explicit.clone();
        let mut lo = PROB_FLOOR;
        let mut hi = 1.0f64;
        let mut verified: Option<f64> = None;

        // Mixing the maximal-violation strategy with a Bell +1 box that
        // emits this target gives a second exact feasible point; its
        // objective usually beats the plain explicit strategy's.
        let prob_max = probs_max
            .iter()
            .find(|(t, _)| *t == target)
            .expect("all targets enumerated")
            .1;
        let mix_prob = mu * prob_max + (1.0 - mu);
        let (cert_prob, cert_matrix) = if mix_prob > explicit_prob {
            let vp = target_box(&structure, &brow, target, 1.0);
            let n = BASIS_SIZE;
            let mut mix = vec![0.0; n * n];
            for i in 0..n {
                for j in 0..n {
                    mix[i * n + j] = mu * explicit_max_flat[i * n + j] + (1.0 - mu) * vp[i] * vp[j];
                }
            }
            (mix_prob, unflatten(&mix))
        } else {
            (explicit_prob, explicit.clone())
        };

        // Certify the starting point; the witness is exact, so the solver
        // accepts it within a couple of iterations.
        if cert_prob > lo + 1e-12 {
            let rep = solve_feasibility(&problem, cert_prob, Some(&cert_matrix), &params.solver);
            if rep.status == Feasibility::Feasible {
                lo = cert_prob;
                verified = Some(cert_prob);
                warm = rep.matrix;
            }
        }

        while hi - lo > params.bisect_tol {
            if let Some(bv) = best_verified {
                // This target can no longer influence the maximum.
                if hi <= bv {
                    break;
                }
            }
            let mid = 0.5 * (lo + hi);
            let rep = solve_feasibility(&problem, mid, Some(&warm), &params.solver);
            match rep.status {
                Feasibility::Feasible => {
                    lo = mid;
                    verified = Some(mid);
                    warm = rep.matrix;
                }
                Feasibility::Infeasible => hi = mid,
                Feasibility::Inconclusive => {
                    hi = mid;
                    inconclusive_steps += 1;
                }
            }
        }
        if let Some(v) = verified {
            best_verified = Some(best_verified.map_or(v, |bv: f64| bv.max(v)));
        }
        results.push((hi, verified));
    }

    let (upper, verified_at_max) = results
        .iter()
        .cloned()
        .max_by(|a, b| a.0.partial_cmp(&b.0).expect("finite"))
        .expect("at least one target");
    Ok(NpaBound {
        upper,
        best_feasible: best_verified,
        uncertainty: upper - verified_at_max.unwrap_or(PROB_FLOOR),
        inconclusive_steps,
        basis_size: BASIS_SIZE,
        num_classes: structure.num_classes(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn word(ops: &[Op]) -> Word {
        ops.to_vec()
    }

    #[test]
    fn canonicalization_examples_and_involution() {
        use Op::*;
        assert_eq!(canonicalize(&[E0, E0]), word(&[E0]));
        assert_eq!(canonicalize(&[F0, E0]), word(&[E0, F0]));
        assert_eq!(canonicalize(&[G, F1, E1]), word(&[E1, F1, G]));
        // Same-party order is preserved: E0 E1 stays distinct from E1 E0.
        assert_eq!(canonicalize(&[E0, E1]), word(&[E0, E1]));
        assert_eq!(canonicalize(&[E1, E0]), word(&[E1, E0]));
        // Products can produce length-3 same-party runs that do not shrink.
        assert_eq!(canonicalize(&[E1, E0, E1, F0]), word(&[E1, E0, E1, F0]));
        // Involution: canonicalizing twice changes nothing.
        let structure = Level2::new();
        for i in 0..BASIS_SIZE {
            for j in 0..BASIS_SIZE {
                let mut w: Word = structure.basis[i].iter().rev().copied().collect();
                w.extend_from_slice(&structure.basis[j]);
                let once = canonicalize(&w);
                assert_eq!(canonicalize(&once), once);
            }
        }
    }

    #[test]
    fn structure_shape() {
        let s = Level2::new();
        assert_eq!(s.basis().len(), 18);
        assert_eq!(s.basis()[0], word(&[]));
        // The 324 entries collapse to 50 distinct moments; pinned so that a
        // change in word handling cannot slip by unnoticed.
        assert_eq!(s.num_classes(), 50);
        // Every entry is classed; transpose entries share a class.
        for i in 0..BASIS_SIZE {
            for j in 0..BASIS_SIZE {
                assert_eq!(
                    s.entry_class[i * BASIS_SIZE + j],
                    s.entry_class[j * BASIS_SIZE + i]
                );
            }
        }
        // All probability words of the objective rows exist.
        use Op::*;
        for x in [E0, E1] {
            for y in [F0, F1] {
                assert!(s.class_of_word(&[x, y, G]).is_some());
                assert!(s.class_of_word(&[x, y]).is_some());
                assert!(s.class_of_word(&[x, G]).is_some());
                assert!(s.class_of_word(&[y, G]).is_some());
            }
        }
        let total: usize = s.class_entries.iter().map(Vec::len).sum();
        assert_eq!(total, BASIS_SIZE * BASIS_SIZE);
    }

    #[test]
    fn bell_row_matches_hand_expansion() {
        // Expanding A1 (B0-B1)/2 C0 + A0 (B0+B1)/2 with A = 2E - I etc. gives
        //   4 E1F0G - 4 E1F1G - 2 F0G + 2 F1G - 2 E1F0 + 2 E1F1
        //   + 2 E0F0 + 2 E0F1 - 2 E0 - 2 F1 + 1.
        use Op::*;
        let s = Level2::new();
        let row = bell_row(&s);
        let expected: Vec<(Word, f64)> = vec![
            (word(&[]), 1.0),
            (word(&[E0]), -2.0),
            (word(&[F1]), -2.0),
            (word(&[E0, F0]), 2.0),
            (word(&[E0, F1]), 2.0),
            (word(&[E1, F0]), -2.0),
            (word(&[E1, F1]), 2.0),
            (word(&[F0, G]), -2.0),
            (word(&[F1, G]), 2.0),
            (word(&[E1, F0, G]), 4.0),
            (word(&[E1, F1, G]), -4.0),
        ];
        assert_eq!(row.len(), expected.len());
        for (w, coeff) in expected {
            let class = s.class_of_word(&w).unwrap();
            let found = row.iter().find(|(c, _)| *c == class);
            assert!(
                matches!(found, Some((_, v)) if (v - coeff).abs() < 1e-12),
                "word {w:?} expected {coeff}, row {row:?}"
            );
        }
    }

    #[test]
    fn explicit_matrix_is_consistent() {
        let p = 0.6;
        let s = Level2::new();
        let (gamma, probs) = explicit_strategy(p).unwrap();
        // Unit entry.
        assert!((gamma.get(0, 0).re - 1.0).abs() < 1e-12);
        // Frozen single-letter moments: <E0> = <F0> = <F1> = 1/2,
        // <G> = (1+p)/2, and the pair moment <E1 F0> = (1 + p/sqrt2)/4.
        use Op::*;
        let entry = |w: &[Op]| -> f64 {
            let class = s.class_of_word(w).unwrap();
            let (i, j) = s.class_entries[class][0];
            gamma.get(i, j).re
        };
        assert!((entry(&[E0]) - 0.5).abs() < 1e-12);
        assert!((entry(&[F0]) - 0.5).abs() < 1e-12);
        assert!((entry(&[F1]) - 0.5).abs() < 1e-12);
        assert!((entry(&[G]) - (1.0 + p) / 2.0).abs() < 1e-12);
        assert!((entry(&[E1, F0]) - (1.0 + p / SQRT2) / 4.0).abs() < 1e-12);
        // Class consistency: equivalent entries agree.
        for entries in &s.class_entries {
            let v0 = gamma.get(entries[0].0, entries[0].1).re;
            for &(i, j) in entries {
                assert!((gamma.get(i, j).re - v0).abs() < 1e-12);
            }
        }
        // The matrix is PSD.
        let flat = flatten_real(&gamma);
        let (vals, _) = eigh_real(BASIS_SIZE, &flat);
        assert!(vals[0] > -1e-10, "min eigenvalue {}", vals[0]);
        // Bell row evaluates to sqrt(2) p.
        let t = TargetOutcome {
            a: 1,
            b: 1,
            c: 1,
            x: 0,
            y: 0,
        };
        let problem = build_moment_problem(&s, t, SQRT2 * p).unwrap();
        assert!((problem.bell_of(&gamma) - SQRT2 * p).abs() < 1e-10);
        // Objective rows match the directly computed probabilities.
        for &(t, prob) in &probs {
            let prob_problem = build_moment_problem(&s, t, SQRT2 * p).unwrap();
            assert!((prob_problem.objective_value(&gamma) - prob).abs() < 1e-12);
        }
        // Probabilities per input pair sum to 1.
        for x in 0..2u8 {
            for y in 0..2u8 {
                let sum: f64 = probs
                    .iter()
                    .filter(|(t, _)| t.x == x && t.y == y)
                    .map(|(_, p)| p)
                    .sum();
                assert!((sum - 1.0).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn explicit_matrix_is_feasible_witness() {
        // The strategy's own maximum probability must be certified feasible
        // almost immediately at the matching Bell value.
        let p = 0.9;
        let s = Level2::new();
        let (gamma, probs) = explicit_strategy(p).unwrap();
        let (&(target, max_prob), _) = probs
            .iter()
            .map(|e| (e, e.1))
            .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
            .unwrap();
        let problem = build_moment_problem(&s, target, SQRT2 * p).unwrap();
        let rep = solve_feasibility(
            &problem,
            max_prob - 1e-9,
            Some(&gamma),
            &SolverParams::default(),
        );
        assert_eq!(
            rep.status,
            Feasibility::Feasible,
            "residual {}",
            rep.residual
        );
        assert!(rep.iterations < 50, "took {} iterations", rep.iterations);
    }

    #[test]
    fn probability_one_is_infeasible_at_maximal_violation() {
        let s = Level2::new();
        let target = TargetOutcome {
            a: 1,
            b: 1,
            c: 1,
            x: 0,
            y: 0,
        };
        let problem = build_moment_problem(&s, target, SQRT2).unwrap();
        let explicit = explicit_moment_matrix(1.0).unwrap();
        let rep = solve_feasibility(&problem, 1.0, Some(&explicit), &SolverParams::default());
        assert_eq!(
            rep.status,
            Feasibility::Infeasible,
            "residual {}",
            rep.residual
        );
    }

    #[test]
    fn below_classical_threshold_probability_one_is_exact() {
        // Any outcome can be deterministic while the Bell value stays at or
        // below 1, so the bound door slams shut only past the classical
        // boundary.
        for bell in [0.0, 0.4, 1.0] {
            let b = npa_upper_bound(bell, &NpaParams::default()).unwrap();
            assert_eq!(b.upper, 1.0);
            assert_eq!(b.best_feasible, Some(1.0));
            assert_eq!(b.uncertainty, 0.0);
            assert_eq!(b.inconclusive_steps, 0);
        }
    }

    #[test]
    fn box_mixture_witnesses_are_positive_semidefinite() {
        let s = Level2::new();
        let brow = bell_row(&s);
        for target in [
            TargetOutcome {
                a: 1,
                b: 1,
                c: 1,
                x: 0,
                y: 0,
            },
            TargetOutcome {
                a: -1,
                b: 1,
                c: -1,
                x: 1,
                y: 0,
            },
            TargetOutcome {
                a: -1,
                b: -1,
                c: -1,
                x: 1,
                y: 1,
            },
        ] {
            let w = box_mixture_matrix(&s, &brow, target, 0.6);
            let (vals, _) = eigh_real(BASIS_SIZE, &w);
            assert!(vals[0] > -1e-12, "min eigenvalue {}", vals[0]);
            // Rank at most 2: two boxes in the mixture.
            assert!(vals[BASIS_SIZE - 3] < 1e-12, "rank exceeds 2");
        }
    }

    #[test]
    fn bell_beyond_quantum_maximum_is_rejected() {
        let s = Level2::new();
        let t = TargetOutcome {
            a: 1,
            b: 1,
            c: 1,
            x: 0,
            y: 0,
        };
        assert!(matches!(
            build_moment_problem(&s, t, 1.5),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            npa_upper_bound(1.5, &NpaParams::default()),
            Err(Error::InvalidInput(_))
        ));
    }

    #[test]
    fn affine_projection_is_idempotent_and_feasible() {
        let s = Level2::new();
        let t = TargetOutcome {
            a: 1,
            b: -1,
            c: 1,
            x: 1,
            y: 0,
        };
        let problem = build_moment_problem(&s, t, 0.7).unwrap();
        // Start from a deterministic non-symmetric mess.
        let mut x = vec![0.0; BASIS_SIZE * BASIS_SIZE];
        for (k, v) in x.iter_mut().enumerate() {
            *v = ((k * 2654435761) % 97) as f64 / 97.0 - 0.3;
        }
        let q = 0.4;
        let p1 = problem.project_affine(&x, q);
        let p2 = problem.project_affine(&p1, q);
        assert!(frob_dist(&p1, &p2) < 1e-10, "projection must be idempotent");
        // Constraints hold on the projected point.
        let means = problem.class_means(&p1);
        assert!((row_dot(&problem.unit_row, &means) - 1.0).abs() < 1e-10);
        assert!((row_dot(&problem.bell_row, &means) - 0.7).abs() < 1e-10);
        assert!(row_dot(&problem.obj_row, &means) >= q - 1e-10);
        // Symmetry of the rebuilt matrix.
        for i in 0..BASIS_SIZE {
            for j in 0..BASIS_SIZE {
                assert!((p1[i * BASIS_SIZE + j] - p1[j * BASIS_SIZE + i]).abs() < 1e-12);
            }
        }
    }
}

//! Brute-force reference implementations.
//!
//! Everything here works with explicit state vectors and matrices: graph
//! states on `n` qubits, and matching states on the `2n`-qubit space that
//! carries the `4n` Majoranas of a tour. None of it uses the covariance
//! formulas of [`crate::gaussian`] except as the other side of a comparison.

pub mod pauli;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::circlegraph::{alternance_graph, SimpleGraph};
use crate::error::{Error, Result};
use crate::gaussian::{BlochVector, Outcome, SkewMatrix};
use crate::multigraph::{Cycle, CycleSplit, EulerTour, HalfEdge};
use pauli::{majorana, majorana_product, PauliString};

pub const STATEVECTOR_LIMIT: usize = 14;
pub const MATCHING_VECTOR_LIMIT: usize = 6;
pub const DENSE_LIMIT: usize = 4;
pub const MARGINAL_LIMIT: usize = 10;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

fn too_large(what: &'static str, size: usize, limit: usize) -> Result<()> {
    if size > limit {
        return Err(Error::TooLarge { what, size, limit });
    }
    Ok(())
}

/// A pure state on `n` qubits; qubit `q` is bit `q` of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    pub n: usize,
    pub amplitudes: Vec<Complex64>,
}

impl StateVector {
    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn inner(&self, other: &StateVector) -> Complex64 {
        self.amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    /// Tensor product of single-qubit states, qubit `q` taken from `factors[q]`.
    pub fn product(factors: &[[Complex64; 2]]) -> Self {
        let n = factors.len();
        let amplitudes = (0..1usize << n)
            .map(|k| {
                (0..n)
                    .map(|q| factors[q][(k >> q) & 1])
                    .product::<Complex64>()
            })
            .collect();
        Self { n, amplitudes }
    }

    /// Applies `(I + b·σ)/2` to qubit `q`.
    pub fn project(&mut self, q: usize, b: BlochVector) {
        let m = 1usize << q;
        let old = self.amplitudes.clone();
        for (k, a) in self.amplitudes.iter_mut().enumerate() {
            let flipped = old[k ^ m];
            let up = k & m == 0;
            let y = if up {
                Complex64::new(0.0, -1.0)
            } else {
                Complex64::new(0.0, 1.0)
            };
            let z = if up { 1.0 } else { -1.0 };
            *a = 0.5 * (old[k] + b.x * flipped + b.y * y * flipped + b.z * z * old[k]);
        }
    }
}

/// `Π CZ |+⟩^n`: amplitude `(-1)^{edges inside x} / 2^{n/2}`.
pub fn graph_state_vector(g: &SimpleGraph) -> Result<StateVector> {
    let n = g.vertex_count();
    too_large("graph state vector", n, STATEVECTOR_LIMIT)?;
    let edges = g.edges();
    let norm = 0.5f64.powf(n as f64 / 2.0);
    let amplitudes = (0..1usize << n)
        .map(|x| {
            let inside = edges
                .iter()
                .filter(|&&(i, j)| (x >> i) & 1 == 1 && (x >> j) & 1 == 1)
                .count();
            Complex64::new(if inside % 2 == 0 { norm } else { -norm }, 0.0)
        })
        .collect();
    Ok(StateVector { n, amplitudes })
}

const SCHMIDT_ZERO: f64 = 1e-9;

/// Number of Schmidt coefficients above `1e-9` times the largest, for the cut
/// between the qubits in `side` and the rest.
pub fn schmidt_count(psi: &StateVector, side: &[usize]) -> usize {
    let n = psi.n;
    let other: Vec<usize> = (0..n).filter(|q| !side.contains(q)).collect();
    let gather = |bits: usize, qubits: &[usize]| {
        qubits
            .iter()
            .enumerate()
            .fold(0usize, |acc, (pos, &q)| acc | (((bits >> pos) & 1) << q))
    };
    let rows = 1usize << side.len();
    let cols = 1usize << other.len();
    let m = DMatrix::from_fn(rows, cols, |r, c| {
        psi.amplitudes[gather(r, side) | gather(c, &other)]
    });
    let sv = m.singular_values();
    let top = sv.iter().cloned().fold(0.0, f64::max);
    sv.iter().filter(|&&s| s > SCHMIDT_ZERO * top).count()
}

/// Probability of the listed single-qubit outcomes on `|G⟩`, by projection.
pub fn brute_marginal(g: &SimpleGraph, measured: &[(usize, BlochVector, Outcome)]) -> Result<f64> {
    too_large("brute-force marginal", g.vertex_count(), MARGINAL_LIMIT)?;
    let mut psi = graph_state_vector(g)?;
    for &(q, b, outcome) in measured {
        if q >= psi.n {
            return Err(Error::UnknownVertex(q.to_string()));
        }
        psi.project(q, b.scaled(outcome.sign()));
    }
    Ok(psi.norm_sqr())
}

/// `|⟨Φ|G⟩|²` for the product state with the given pure Bloch vectors.
pub fn brute_overlap(g: &SimpleGraph, blochs: &[BlochVector]) -> Result<f64> {
    let measured: Vec<_> = blochs
        .iter()
        .enumerate()
        .map(|(q, &b)| (q, b, Outcome::Plus))
        .collect();
    brute_marginal(g, &measured)
}

/// The `4n` Majoranas on `2n` qubits as dense `4^n x 4^n` matrices.
pub fn majorana_matrices(n: usize) -> Result<Vec<DMatrix<Complex64>>> {
    too_large("dense Majorana matrices", n, DENSE_LIMIT)?;
    let dim = 1usize << (2 * n);
    Ok((0..4 * n).map(|j| majorana(j).to_dense(dim)).collect())
}

fn c(h: HalfEdge) -> usize {
    h.majorana_index()
}

/// Stabilizers of the matching state: `+i c c` for the first tour edge and
/// `-i c c` for every other one.
pub fn matching_stabilizers(tour: &EulerTour) -> Vec<PauliString> {
    tour.directed_edges()
        .into_iter()
        .enumerate()
        .map(|(k, (a, b))| edge_operator(a, b, k == 0))
        .collect()
}

fn edge_operator(a: HalfEdge, b: HalfEdge, first: bool) -> PauliString {
    let phase = if first { 1 } else { 3 };
    majorana_product(&[c(a), c(b)]).scaled_by_i(phase)
}

/// Gauge operator `D_v = -c¹c²c³c⁴`.
pub fn gauge_operator(v: usize) -> PauliString {
    majorana_product(&[4 * v, 4 * v + 1, 4 * v + 2, 4 * v + 3]).neg()
}

/// Encoded Paulis `X̃ = -i c¹c⁴`, `Z̃ = -i c³c⁴`.
pub fn encoded_x(v: usize) -> PauliString {
    majorana_product(&[4 * v, 4 * v + 3]).scaled_by_i(3)
}

pub fn encoded_z(v: usize) -> PauliString {
    majorana_product(&[4 * v + 2, 4 * v + 3]).scaled_by_i(3)
}

/// Normalised joint `+1` eigenvector of independent commuting Paulis whose
/// joint eigenspace is one-dimensional.
fn joint_eigenvector(stabilizers: &[PauliString], dim: usize) -> DVector<Complex64> {
    for k in 0..dim {
        let mut v = vec![ZERO; dim];
        v[k] = ONE;
        for &s in stabilizers {
            let applied = s.apply(&v);
            for (a, b) in v.iter_mut().zip(applied) {
                *a = 0.5 * (*a + b);
            }
        }
        let norm: f64 = v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm > 1e-6 {
            return DVector::from_iterator(dim, v.into_iter().map(|a| a / norm));
        }
    }
    unreachable!("stabilizers have a common +1 eigenvector")
}

/// Matching state of a tour as a vector on `2n` qubits (global phase arbitrary).
pub fn matching_state_vector(tour: &EulerTour) -> Result<DVector<Complex64>> {
    let n = tour.vertex_count();
    too_large("matching state vector", n, MATCHING_VECTOR_LIMIT)?;
    Ok(joint_eigenvector(&matching_stabilizers(tour), 1 << (2 * n)))
}

/// Matching state of a tour as the product of its stabilizer projectors,
/// starting from the identity.
pub fn build_matching_state_dense(tour: &EulerTour) -> Result<DMatrix<Complex64>> {
    let n = tour.vertex_count();
    too_large("dense matching state", n, DENSE_LIMIT)?;
    let dim = 1usize << (2 * n);
    let mut rho = DMatrix::<Complex64>::identity(dim, dim);
    for s in matching_stabilizers(tour) {
        rho = (&rho + s.left_mul(&rho)) * Complex64::new(0.5, 0.0);
    }
    Ok(rho)
}

/// `Γ_jk = -(i/2) tr([c_j, c_k] ρ)` from a dense state.
pub fn covariance_of_dense(rho: &DMatrix<Complex64>, majoranas: usize) -> DMatrix<f64> {
    DMatrix::from_fn(majoranas, majoranas, |j, k| {
        if j == k {
            return 0.0;
        }
        // [c_j, c_k] = 2 c_j c_k for j != k
        let t = majorana_product(&[j, k]).trace_with(rho);
        (Complex64::new(0.0, -1.0) * t).re
    })
}

/// Gauge sector: bit `v` set means `D_v = -1`.
pub type Sector = usize;

pub fn sector_is_even(s: Sector) -> bool {
    s.count_ones() % 2 == 0
}

/// Isometry from `n` logical qubits onto the Fock space of gauge sector `s`:
/// `|0⟩` is the joint `+1` state of every `±D_v` and `Z̃_v`, and
/// `|x⟩ = Π X̃_v^{x_v} |0⟩`.
pub fn sector_isometry(n: usize, s: Sector) -> Result<DMatrix<Complex64>> {
    too_large("sector isometry", n, MATCHING_VECTOR_LIMIT)?;
    let dim = 1usize << (2 * n);
    let mut stabs: Vec<PauliString> = Vec::new();
    for v in 0..n {
        let d = gauge_operator(v);
        stabs.push(if (s >> v) & 1 == 1 { d.neg() } else { d });
        stabs.push(encoded_z(v));
    }
    let zero = joint_eigenvector(&stabs, dim);
    let zero: Vec<Complex64> = zero.iter().cloned().collect();
    let mut w = DMatrix::zeros(dim, 1 << n);
    for x in 0..1usize << n {
        let mut col = zero.clone();
        for v in (0..n).filter(|v| (x >> v) & 1 == 1) {
            col = encoded_x(v).apply(&col);
        }
        w.set_column(x, &DVector::from_vec(col));
    }
    Ok(w)
}

/// `W† P W` for a Pauli operator on Fock space.
fn restrict(w: &DMatrix<Complex64>, p: PauliString) -> DMatrix<Complex64> {
    w.adjoint() * p.left_mul(w)
}

/// Graph-state stabilizer `X_v Π_{w ~ v} Z_w` on `n` qubits.
pub fn graph_stabilizer(g: &SimpleGraph, v: usize) -> PauliString {
    g.neighbours(v)
        .into_iter()
        .fold(PauliString::x(v), |acc, w| acc.mul(PauliString::z(w)))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub max_deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Report {
    pub checks: Vec<Check>,
}

impl Report {
    pub fn push(&mut self, name: impl Into<String>, deviation: f64, tolerance: f64) {
        self.checks.push(Check {
            name: name.into(),
            passed: deviation <= tolerance,
            max_deviation: deviation,
        });
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn extend(&mut self, other: Report) {
        self.checks.extend(other.checks);
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.max_deviation).fold(0.0, f64::max)
    }
}

fn max_abs(m: &DMatrix<Complex64>) -> f64 {
    m.iter().map(|a| a.norm()).fold(0.0, f64::max)
}

/// Two-Majorana products on the `D = +1` subspace of one vertex, compared with
/// the multiplication table `c¹c² ↦ iZ, c¹c³ ↦ -iY, c¹c⁴ ↦ iX, c²c³ ↦ iX,
/// c²c⁴ ↦ iY, c³c⁴ ↦ iZ` (transposed entries negated, squares the identity).
pub fn verify_table1() -> Report {
    let w = sector_isometry(1, 0).expect("one vertex is small");
    let i = Complex64::new(0.0, 1.0);
    let table = |j: usize, k: usize| -> DMatrix<Complex64> {
        let (x, y, z) = (
            PauliString::x(0).to_dense(2),
            PauliString::y(0).to_dense(2),
            PauliString::z(0).to_dense(2),
        );
        let (a, b, flip) = if j < k { (j, k, 1.0) } else { (k, j, -1.0) };
        let entry = match (a, b) {
            (0, 1) => z * i,
            (0, 2) => -y * i,
            (0, 3) => x * i,
            (1, 2) => x * i,
            (1, 3) => y * i,
            (2, 3) => z * i,
            _ => unreachable!(),
        };
        entry * Complex64::new(flip, 0.0)
    };
    let mut report = Report::default();
    for j in 0..4 {
        for k in 0..4 {
            let expected = if j == k {
                DMatrix::identity(2, 2)
            } else {
                table(j, k)
            };
            let got = restrict(&w, majorana_product(&[j, k]));
            report.push(
                format!("c{}c{}", j + 1, k + 1),
                max_abs(&(got - expected)),
                1e-12,
            );
        }
    }
    report
}

/// How a cycle passes through one vertex: which transitions it uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Passage {
    /// Transition `1 -> 2`, read as `-i c¹c² ≅ Z`.
    Low,
    /// Transition `3 -> 4`, read as `-i c³c⁴ = Z̃`.
    High,
    /// Both transitions, reading `D`.
    Both,
}

/// The simplified form of a cycle operator: a pivot factor `-i c^a c^b` times one
/// factor per other vertex the cycle passes through.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleForm {
    pub pivot: usize,
    /// Slots of the pivot factor, in the order they enter the product.
    pub pivot_slots: (u8, u8),
    pub passages: Vec<(usize, Passage)>,
    /// Overall sign from a flipped first edge inside the cycle.
    pub negated: bool,
}

impl CycleForm {
    pub fn from_split(split: &CycleSplit, which: Cycle) -> Self {
        let cycle = split.cycle(which);
        let pivot_slots = (cycle[0].slot, cycle[cycle.len() - 1].slot);
        let mut passages: Vec<(usize, Passage)> = Vec::new();
        for (enter, _) in split.transitions(which) {
            if enter.vertex == split.pivot {
                continue;
            }
            let this = if enter.slot == 1 {
                Passage::Low
            } else {
                Passage::High
            };
            match passages.iter_mut().find(|(v, _)| *v == enter.vertex) {
                Some(entry) => entry.1 = Passage::Both,
                None => passages.push((enter.vertex, this)),
            }
        }
        passages.sort_by_key(|&(v, _)| v);
        let first = |h: &HalfEdge| h.vertex == 0 && h.slot == 4;
        let negated = cycle.chunks_exact(2).any(|pair| first(&pair[0]));
        Self {
            pivot: split.pivot,
            pivot_slots,
            passages,
            negated,
        }
    }

    pub fn operator(&self) -> PauliString {
        let v = self.pivot;
        let (a, b) = self.pivot_slots;
        let mut op = majorana_product(&[4 * v + a as usize - 1, 4 * v + b as usize - 1]).scaled_by_i(3);
        for &(w, passage) in &self.passages {
            let factor = match passage {
                Passage::Low => majorana_product(&[4 * w, 4 * w + 1]).scaled_by_i(3),
                Passage::High => encoded_z(w),
                Passage::Both => gauge_operator(w),
            };
            op = op.mul(factor);
        }
        if self.negated {
            op = op.neg();
        }
        op
    }

    /// Qubit-level reading such as `X_a Z_b Z_d D_c`: `X` on the pivot, `Z` on
    /// vertices passed once and `D` on vertices passed twice.
    pub fn label(&self, names: &[String]) -> String {
        let mut parts = vec![format!("X_{}", names[self.pivot])];
        let mut passages = self.passages.clone();
        passages.sort_by(|a, b| names[a.0].cmp(&names[b.0]));
        for &(w, p) in &passages {
            if p != Passage::Both {
                parts.push(format!("Z_{}", names[w]));
            }
        }
        for &(w, p) in &passages {
            if p == Passage::Both {
                parts.push(format!("D_{}", names[w]));
            }
        }
        let body = parts.join(" ");
        if self.negated {
            format!("-{body}")
        } else {
            body
        }
    }
}

/// Ordered product of the edge stabilizers along one cycle of a split.
pub fn cycle_operator(split: &CycleSplit, which: Cycle) -> PauliString {
    split
        .edges(which)
        .into_iter()
        .fold(PauliString::IDENTITY, |acc, (a, b)| {
            let first = a.vertex == 0 && a.slot == 4;
            acc.mul(edge_operator(a, b, first))
        })
}

/// For every vertex: the second-cycle operator equals its simplified form
/// exactly, restricts to `X_v Π Z_w` on the all-`+1` gauge sector, and agrees
/// with the first-cycle operator up to sign in every sector.
pub fn verify_cycle_stabilizers(tour: &EulerTour) -> Result<Report> {
    let n = tour.vertex_count();
    too_large("cycle stabilizer check", n, DENSE_LIMIT)?;
    let names = tour.word().vertices();
    let g = alternance_graph(tour.word());
    let qubit_dim = 1usize << n;
    let sectors: Vec<DMatrix<Complex64>> = (0..1usize << n)
        .map(|s| sector_isometry(n, s))
        .collect::<Result<_>>()?;
    let mut report = Report::default();
    for v in 0..n {
        let split = tour.split_at_index(v);
        let s2 = cycle_operator(&split, Cycle::Second);
        let s1 = cycle_operator(&split, Cycle::First);
        let form = CycleForm::from_split(&split, Cycle::Second);
        let dim = 1usize << (2 * n);
        let form_dev = max_abs(&(s2.to_dense(dim) - form.operator().to_dense(dim)));
        report.push(format!("{}: S2 = {}", names[v], form.label(names)), form_dev, 1e-10);

        let expected = graph_stabilizer(&g, v).to_dense(qubit_dim);
        let restricted = restrict(&sectors[0], s2);
        report.push(
            format!("{}: S2 on gauge +1 = stabilizer", names[v]),
            max_abs(&(restricted - expected)),
            1e-10,
        );

        let mut worst: f64 = 0.0;
        for w in &sectors {
            let a = restrict(w, s1);
            let b = restrict(w, s2);
            let dev = max_abs(&(&a - &b)).min(max_abs(&(&a + &b)));
            worst = worst.max(dev);
        }
        report.push(format!("{}: S1 = ±S2 in every sector", names[v]), worst, 1e-10);
    }
    Ok(report)
}

/// Sector weights of the matching state and the identity of its all-`+1`
/// sector with the circle graph state.
pub fn verify_embedding(tour: &EulerTour) -> Result<Report> {
    let n = tour.vertex_count();
    too_large("embedding check", n, DENSE_LIMIT)?;
    let psi = matching_state_vector(tour)?;
    let mut report = Report::default();
    let target = 0.5f64.powi(n as i32 - 1);
    let mut even_dev: f64 = 0.0;
    let mut odd_dev: f64 = 0.0;
    let mut encoded = None;
    for s in 0..1usize << n {
        let w = sector_isometry(n, s)?;
        let amps = w.adjoint() * &psi;
        let weight: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if sector_is_even(s) {
            even_dev = even_dev.max((weight - target).abs());
        } else {
            odd_dev = odd_dev.max(weight);
        }
        if s == 0 {
            encoded = Some(amps);
        }
    }
    report.push("even sectors carry 2^-(n-1)", even_dev, 1e-10);
    report.push("odd sectors carry 0", odd_dev, 1e-12);

    let amps = encoded.expect("sector 0 exists");
    let norm = amps.norm();
    let graph = graph_state_vector(&alternance_graph(tour.word()))?;
    let overlap: Complex64 = graph
        .amplitudes
        .iter()
        .zip(amps.iter())
        .map(|(g, a)| g.conj() * a)
        .sum();
    report.push(
        "all-+1 sector is the circle graph state",
        (1.0 - overlap.norm() / norm).abs(),
        1e-10,
    );
    Ok(report)
}

/// Covariance of the dense matching state against a given covariance matrix.
pub fn verify_covariance(tour: &EulerTour, gamma: &SkewMatrix) -> Result<Report> {
    let rho = build_matching_state_dense(tour)?;
    let n = tour.vertex_count();
    let mut report = Report::default();
    let trace: Complex64 = rho.trace();
    report.push("trace 1", (trace - ONE).norm(), 1e-12);
    report.push("idempotent", max_abs(&(&rho * &rho - &rho)), 1e-12);
    let hermitian = max_abs(&(&rho - rho.adjoint()));
    report.push("hermitian", hermitian, 1e-12);
    let parity = (0..n).fold(PauliString::IDENTITY, |acc, v| acc.mul(gauge_operator(v)));
    report.push("global parity +1", (parity.trace_with(&rho) - ONE).norm(), 1e-12);
    let cov = covariance_of_dense(&rho, 4 * n);
    report.push(
        "covariance matches",
        (cov - gamma.matrix()).amax(),
        1e-12,
    );
    Ok(report)
}

/// `tr(c_Q ρ)` against `i^{|Q|/2} pf(Γ[Q])` for every even subset `Q`, where the
/// right-hand side is supplied by `wick`.
pub fn verify_wick(
    tour: &EulerTour,
    wick: impl Fn(&[usize]) -> Result<Complex64>,
) -> Result<Report> {
    let n = tour.vertex_count();
    too_large("Wick check", n, 3)?;
    let rho = build_matching_state_dense(tour)?;
    let m = 4 * n;
    let mut worst: f64 = 0.0;
    let mut count = 0usize;
    for mask in 0u32..1 << m {
        if mask.count_ones() % 2 == 1 {
            continue;
        }
        let q: Vec<usize> = (0..m).filter(|&j| (mask >> j) & 1 == 1).collect();
        let direct = majorana_product(&q).trace_with(&rho);
        worst = worst.max((direct - wick(&q)?).norm());
        count += 1;
    }
    let mut report = Report::default();
    report.push(format!("Wick rule on {count} even subsets"), worst, 1e-10);
    Ok(report)
}

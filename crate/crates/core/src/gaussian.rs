//! Covariance matrices of fermionic Gaussian states: matching states of tours,
//! lifts of single-qubit product states, Wick expectations, overlaps and
//! measurement marginals.
//!
//! Majorana `(v, slot)` sits at row `4 v + slot - 1`. A covariance matrix is
//! `Γ_jk = -(i/2) tr([c_j, c_k] ρ)`.

use nalgebra::{DMatrix, Matrix2, Matrix4, SymmetricEigen};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::bits::BitRow;
use crate::error::{Error, Result};
use crate::multigraph::EulerTour;
use crate::pfaffian::pfaffian_unchecked;
use crate::sector;

/// Relative tolerance for accepting a matrix as skew-symmetric.
pub const SKEW_TOLERANCE: f64 = 1e-12;
/// Tolerance on `|b| = 1` for a Bloch vector to count as pure.
pub const PURITY_TOLERANCE: f64 = 1e-12;
/// Tolerance on `U†U = I`.
pub const UNITARY_TOLERANCE: f64 = 1e-12;
/// Largest negative value a probability formula may return before it is an error.
pub const NEGATIVE_PROBABILITY_TOLERANCE: f64 = 1e-9;

/// A real skew-symmetric matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SkewMatrix {
    m: DMatrix<f64>,
}

impl SkewMatrix {
    /// Accepts `m` if `|m + mᵀ|` is within `1e-12` of its largest entry, then
    /// stores the exactly antisymmetric part.
    pub fn new(m: DMatrix<f64>) -> Result<Self> {
        if m.nrows() != m.ncols() {
            return Err(Error::NotSquare {
                rows: m.nrows(),
                cols: m.ncols(),
            });
        }
        let scale = m.amax().max(1.0);
        let deviation = (&m + m.transpose()).amax();
        if deviation > SKEW_TOLERANCE * scale {
            return Err(Error::NotSkew { deviation });
        }
        Ok(Self {
            m: (&m - m.transpose()) * 0.5,
        })
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            m: DMatrix::zeros(dim, dim),
        }
    }

    /// Builds from strict upper-triangle entries `(j, k, value)` with `j < k`.
    pub fn from_upper(dim: usize, upper: &[(usize, usize, f64)]) -> Result<Self> {
        let mut m = DMatrix::zeros(dim, dim);
        for &(j, k, v) in upper {
            for index in [j, k] {
                if index >= dim {
                    return Err(Error::IndexOutOfRange { index, dim });
                }
            }
            if j >= k {
                return Err(Error::Parse(format!(
                    "upper-triangle entry ({j}, {k}) must have row < column"
                )));
            }
            m[(j, k)] = v;
            m[(k, j)] = -v;
        }
        Ok(Self { m })
    }

    pub fn dim(&self) -> usize {
        self.m.nrows()
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.m
    }

    pub fn into_matrix(self) -> DMatrix<f64> {
        self.m
    }

    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.m[(j, k)]
    }

    pub fn pfaffian(&self) -> f64 {
        pfaffian_unchecked(&self.m)
    }

    pub fn add(&self, other: &SkewMatrix) -> Result<SkewMatrix> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(SkewMatrix {
            m: &self.m + &other.m,
        })
    }

    /// Principal submatrix on `indices`, in the order given.
    pub fn principal(&self, indices: &[usize]) -> SkewMatrix {
        let k = indices.len();
        SkewMatrix {
            m: DMatrix::from_fn(k, k, |a, b| self.m[(indices[a], indices[b])]),
        }
    }

    /// Strict upper-triangle entries that are nonzero.
    pub fn upper_entries(&self) -> Vec<(usize, usize, f64)> {
        let n = self.dim();
        (0..n)
            .flat_map(|j| (j + 1..n).map(move |k| (j, k)))
            .filter_map(|(j, k)| {
                let v = self.m[(j, k)];
                (v != 0.0).then_some((j, k, v))
            })
            .collect()
    }
}

#[derive(Serialize, Deserialize)]
struct MatrixJson {
    dim: usize,
    upper: Vec<(usize, usize, f64)>,
}

impl Serialize for SkewMatrix {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            dim: self.dim(),
            upper: self.upper_entries(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for SkewMatrix {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(deserializer)?;
        SkewMatrix::from_upper(raw.dim, &raw.upper).map_err(serde::de::Error::custom)
    }
}

/// Pfaffian of a skew-symmetric matrix, validating skewness first.
pub fn pfaffian(m: &DMatrix<f64>) -> Result<f64> {
    Ok(SkewMatrix::new(m.clone())?.pfaffian())
}

/// Covariance matrix of the matching state of a tour.
#[derive(Debug, Clone, PartialEq)]
pub struct MatchingCovariance {
    pub gamma: SkewMatrix,
    pub tour: EulerTour,
}

impl MatchingCovariance {
    pub fn vertex_count(&self) -> usize {
        self.tour.vertex_count()
    }
}

/// Skew adjacency of the tour's directed edges: `+1` at `(from, to)` for every
/// edge except the first, which gets `-1`.
pub fn matching_covariance(tour: &EulerTour) -> MatchingCovariance {
    let dim = 4 * tour.vertex_count();
    let mut m = DMatrix::zeros(dim, dim);
    for (k, (from, to)) in tour.directed_edges().into_iter().enumerate() {
        let sign = if k == 0 { -1.0 } else { 1.0 };
        let (j, l) = (from.majorana_index(), to.majorana_index());
        m[(j, l)] = sign;
        m[(l, j)] = -sign;
    }
    MatchingCovariance {
        gamma: SkewMatrix { m },
        tour: tour.clone(),
    }
}

/// Expectation values `(⟨X⟩, ⟨Y⟩, ⟨Z⟩)` of a single-qubit state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "[f64; 3]", into = "[f64; 3]")]
pub struct BlochVector {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl From<[f64; 3]> for BlochVector {
    fn from([x, y, z]: [f64; 3]) -> Self {
        Self { x, y, z }
    }
}

impl From<BlochVector> for [f64; 3] {
    fn from(b: BlochVector) -> Self {
        [b.x, b.y, b.z]
    }
}

impl BlochVector {
    pub const PLUS_X: Self = Self::new(1.0, 0.0, 0.0);
    pub const PLUS_Y: Self = Self::new(0.0, 1.0, 0.0);
    pub const PLUS_Z: Self = Self::new(0.0, 0.0, 1.0);
    pub const ZERO: Self = Self::new(0.0, 0.0, 0.0);

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn norm(self) -> f64 {
        (self.x * self.x + self.y * self.y + self.z * self.z).sqrt()
    }

    pub fn is_pure(self) -> bool {
        (self.norm() - 1.0).abs() <= PURITY_TOLERANCE
    }

    pub fn scaled(self, s: f64) -> Self {
        Self::new(s * self.x, s * self.y, s * self.z)
    }

    pub fn to_array(self) -> [f64; 3] {
        self.into()
    }

    /// Bloch vector of a normalised qubit state `a|0⟩ + b|1⟩`.
    pub fn of_state(a: Complex64, b: Complex64) -> Self {
        let ab = a.conj() * b;
        Self::new(
            2.0 * ab.re,
            2.0 * ab.im,
            a.norm_sqr() - b.norm_sqr(),
        )
    }

    /// Rotates the vector by a real 3x3 matrix.
    pub fn rotated(self, r: &nalgebra::Matrix3<f64>) -> Self {
        let v = r * nalgebra::Vector3::new(self.x, self.y, self.z);
        Self::new(v[0], v[1], v[2])
    }
}

/// The 4x4 covariance of the two-mode encoding of a qubit with Bloch vector `b`.
pub fn bloch_lift(b: BlochVector) -> SkewMatrix {
    let BlochVector { x, y, z } = b;
    #[rustfmt::skip]
    let m = DMatrix::from_row_slice(4, 4, &[
        0.0, z, -y, x,
        -z, 0.0, x, y,
        y, -x, 0.0, z,
        -x, -y, -z, 0.0,
    ]);
    SkewMatrix { m }
}

/// Block-diagonal covariance of a product state, one Bloch lift per qubit.
#[derive(Debug, Clone, PartialEq)]
pub struct ProductCovariance {
    pub gamma: SkewMatrix,
    pub blochs: Vec<BlochVector>,
}

impl ProductCovariance {
    pub fn is_pure(&self) -> bool {
        self.blochs.iter().all(|b| b.is_pure())
    }
}

pub fn product_covariance(blochs: &[BlochVector]) -> ProductCovariance {
    let n = blochs.len();
    let mut m = DMatrix::zeros(4 * n, 4 * n);
    for (j, &b) in blochs.iter().enumerate() {
        m.view_mut((4 * j, 4 * j), (4, 4))
            .copy_from(bloch_lift(b).matrix());
    }
    ProductCovariance {
        gamma: SkewMatrix { m },
        blochs: blochs.to_vec(),
    }
}

/// `tr(c_Q ρ) = i^{|Q|/2} pf(Γ[Q])` where `c_Q` is the product of the Majoranas
/// in `support`, taken in increasing index order.
pub fn wick_expectation(gamma: &SkewMatrix, support: &[usize]) -> Result<Complex64> {
    if support.len() % 2 == 1 {
        return Err(Error::OddSupport(support.len()));
    }
    let mut q = support.to_vec();
    q.sort_unstable();
    for w in q.windows(2) {
        if w[0] == w[1] {
            return Err(Error::RepeatedIndex(w[0]));
        }
    }
    if let Some(&index) = q.last().filter(|&&i| i >= gamma.dim()) {
        return Err(Error::IndexOutOfRange {
            index,
            dim: gamma.dim(),
        });
    }
    let pf = gamma.principal(&q).pfaffian();
    Ok(Complex64::i().powu((q.len() / 2) as u32) * pf)
}

/// Majoranas of a single vertex's two modes: `X⊗I, Y⊗I, Z⊗X, Z⊗Y` with the first
/// tensor factor on bit 0 of the basis index.
fn vertex_majoranas() -> [Matrix4<Complex64>; 4] {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let x = Matrix2::new(o, l, l, o);
    let y = Matrix2::new(o, -i, i, o);
    let z = Matrix2::new(l, o, o, -l);
    let id = Matrix2::identity();
    // bit 0 is the low factor of the Kronecker product
    let kron = |hi: &Matrix2<Complex64>, lo: &Matrix2<Complex64>| {
        Matrix4::from_fn(|r, c| hi[(r / 2, c / 2)] * lo[(r % 2, c % 2)])
    };
    [kron(&id, &x), kron(&id, &y), kron(&x, &z), kron(&y, &z)]
}

/// The two-qubit matchgate that acts as `U` on the encoded qubit, in the basis
/// `|00⟩, |01⟩, |10⟩, |11⟩` (basis index order).
pub fn matchgate(u: &Matrix2<Complex64>) -> Matrix4<Complex64> {
    let o = Complex64::new(0.0, 0.0);
    #[rustfmt::skip]
    let m = Matrix4::new(
        u[(0, 0)], o, o, u[(0, 1)],
        o, u[(0, 0)], u[(0, 1)], o,
        o, u[(1, 0)], u[(1, 1)], o,
        u[(1, 0)], o, o, u[(1, 1)],
    );
    m
}

pub fn check_unitary(u: &Matrix2<Complex64>) -> Result<()> {
    let deviation = (u.adjoint() * u - Matrix2::identity())
        .iter()
        .map(|a| a.norm())
        .fold(0.0, f64::max);
    if deviation > UNITARY_TOLERANCE {
        return Err(Error::NotUnitary { deviation });
    }
    Ok(())
}

/// The rotation `O` with `M† c_j M = Σ_k O_jk c_k` for the matchgate of `U`.
pub fn matchgate_orthogonal(u: &Matrix2<Complex64>) -> Result<Matrix4<f64>> {
    check_unitary(u)?;
    let m = matchgate(u);
    let c = vertex_majoranas();
    let md = m.adjoint();
    Ok(Matrix4::from_fn(|j, k| {
        (c[k] * md * c[j] * m).trace().re / 4.0
    }))
}

/// A probability produced by an exact formula, with its pre-clamping value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Probability {
    pub value: f64,
    pub raw: f64,
}

impl Probability {
    pub fn from_raw(raw: f64) -> Result<Self> {
        if raw.is_nan() || raw < -NEGATIVE_PROBABILITY_TOLERANCE {
            return Err(Error::NegativeProbability(raw));
        }
        Ok(Self {
            value: raw.clamp(0.0, 1.0),
            raw,
        })
    }

    pub fn clamp_distance(self) -> f64 {
        (self.value - self.raw).abs()
    }
}

/// `±1` measurement outcome; `+1` projects onto the measured Bloch direction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Outcome {
    Plus,
    Minus,
}

impl Outcome {
    pub fn sign(self) -> f64 {
        match self {
            Outcome::Plus => 1.0,
            Outcome::Minus => -1.0,
        }
    }

    pub fn as_i64(self) -> i64 {
        match self {
            Outcome::Plus => 1,
            Outcome::Minus => -1,
        }
    }

    pub fn from_i64(v: i64) -> Result<Self> {
        match v {
            1 => Ok(Outcome::Plus),
            -1 => Ok(Outcome::Minus),
            other => Err(Error::InvalidOutcome(other)),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Outcome::Plus => '+',
            Outcome::Minus => '-',
        }
    }
}

impl Serialize for Outcome {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_i64(self.as_i64())
    }
}

impl<'de> Deserialize<'de> for Outcome {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        Outcome::from_i64(i64::deserialize(deserializer)?).map_err(serde::de::Error::custom)
    }
}

/// `|⟨Φ|G⟩|² = 2^{-(n+1)} pf(Γ_Φ + Γ_Ψ)` for a pure product state `Φ`.
pub fn overlap_full(phi: &ProductCovariance, psi: &MatchingCovariance) -> Result<Probability> {
    let n = psi.vertex_count();
    if phi.gamma.dim() != 4 * n {
        return Err(Error::DimensionMismatch {
            expected: 4 * n,
            found: phi.gamma.dim(),
        });
    }
    if let Some((index, b)) = phi.blochs.iter().enumerate().find(|(_, b)| !b.is_pure()) {
        return Err(Error::MixedProductState {
            index,
            norm: b.norm(),
        });
    }
    let pf = phi.gamma.add(&psi.gamma)?.pfaffian();
    Probability::from_raw(pf * 0.5f64.powi(n as i32 + 1))
}

/// One measured qubit: vertex index, measured Bloch direction and outcome.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Measured {
    pub vertex: usize,
    pub direction: BlochVector,
    pub outcome: Outcome,
}

impl Measured {
    pub fn new(vertex: usize, direction: BlochVector, outcome: Outcome) -> Self {
        Self {
            vertex,
            direction,
            outcome,
        }
    }

    /// Bloch vector of the projector onto this outcome.
    pub fn effective(&self) -> BlochVector {
        self.direction.scaled(self.outcome.sign())
    }
}

/// Probability of the given outcomes when the listed qubits of the circle
/// graph state are measured.
///
/// For `t < n` measured qubits this is `2^{-t} pf` of the `4t x 4t` principal
/// block of `Γ_Φ + Γ_Ψ` on the measured vertices, taken on the given tour when
/// it is sector-safe for the measured set and on a reduced tour otherwise (see
/// [`crate::sector`]). Measuring every qubit falls back to [`overlap_full`].
pub fn marginal_prob(psi: &MatchingCovariance, measured: &[Measured]) -> Result<Probability> {
    let n = psi.vertex_count();
    let mut seen = vec![false; n];
    for m in measured {
        if m.vertex >= n {
            return Err(Error::UnknownVertex(m.vertex.to_string()));
        }
        if std::mem::replace(&mut seen[m.vertex], true) {
            let name = psi.tour.word().vertices()[m.vertex].clone();
            return Err(Error::DuplicateVertex(name));
        }
        if !m.direction.is_pure() {
            return Err(Error::MixedProductState {
                index: m.vertex,
                norm: m.direction.norm(),
            });
        }
    }
    let t = measured.len();
    if t == 0 {
        return Probability::from_raw(1.0);
    }
    if t == n {
        let mut blochs = vec![BlochVector::ZERO; n];
        for m in measured {
            blochs[m.vertex] = m.effective();
        }
        return overlap_full(&product_covariance(&blochs), psi);
    }
    let vertices: Vec<usize> = measured.iter().map(|m| m.vertex).collect();
    if sector::is_sector_safe(&psi.tour, &vertices) {
        return block_marginal(psi, measured);
    }
    let real = sector::realise(psi.tour.word(), &vertices);
    let reduced = matching_covariance(&real.tour);
    let mut total = 0.0;
    let terms = 1usize << real.shifts.len();
    for mask in 0..terms {
        let mut flip = BitRow::zeros(t);
        for (k, shift) in real.shifts.iter().enumerate() {
            if (mask >> k) & 1 == 1 {
                flip.xor_assign(shift);
            }
        }
        let moved: Vec<Measured> = measured
            .iter()
            .zip(&real.index)
            .enumerate()
            .map(|(i, (m, &v))| {
                let d = m.direction;
                let d = if flip.get(i) { BlochVector::new(-d.x, -d.y, d.z) } else { d };
                Measured::new(v, d, m.outcome)
            })
            .collect();
        total += if reduced.vertex_count() == t {
            let mut blochs = vec![BlochVector::ZERO; t];
            for m in &moved {
                blochs[m.vertex] = m.effective();
            }
            overlap_full(&product_covariance(&blochs), &reduced)?.value
        } else {
            block_marginal(&reduced, &moved)?.value
        };
    }
    Probability::from_raw(total / terms as f64)
}

/// `2^{-t} pf((Γ_Φ + Γ_Ψ)[S])` over the measured vertex blocks, with no check
/// that the tour is sector-safe for them.
pub fn block_marginal(psi: &MatchingCovariance, measured: &[Measured]) -> Result<Probability> {
    let rows: Vec<usize> = measured
        .iter()
        .flat_map(|m| (0..4).map(move |a| 4 * m.vertex + a))
        .collect();
    let blochs: Vec<BlochVector> = measured.iter().map(Measured::effective).collect();
    let sum = product_covariance(&blochs)
        .gamma
        .add(&psi.gamma.principal(&rows))?;
    Probability::from_raw(sum.pfaffian() * 0.5f64.powi(measured.len() as i32))
}

/// Eigenvalues of `-Γ²` below this fraction of the largest count as zero.
const RANGE_TOLERANCE: f64 = 1e-10;

/// `tr(ρ₁ ρ₂)` for Gaussian states on `N` modes with covariances `g1`, `g2`.
///
/// With `V` an orthonormal basis of the range of `g1` and `Γ' = Vᵀ g1 V`
/// (invertible, of size `2r`), this is `2^{-N} pf(Γ') pf(-Γ'⁻¹ + Vᵀ g2 V)`.
pub fn mixed_overlap(g1: &SkewMatrix, g2: &SkewMatrix) -> Result<f64> {
    let dim = g1.dim();
    if g2.dim() != dim {
        return Err(Error::DimensionMismatch {
            expected: dim,
            found: g2.dim(),
        });
    }
    let modes = dim / 2;
    let neg_sq = -(g1.matrix() * g1.matrix());
    let eig = SymmetricEigen::new((&neg_sq + neg_sq.transpose()) * 0.5);
    let top = eig.eigenvalues.iter().cloned().fold(0.0, f64::max);
    let keep: Vec<usize> = (0..dim)
        .filter(|&i| top > 0.0 && eig.eigenvalues[i] > RANGE_TOLERANCE * top)
        .collect();
    let scale = 0.5f64.powi(modes as i32);
    if keep.is_empty() {
        return Ok(scale);
    }
    let v = DMatrix::from_fn(dim, keep.len(), |r, c| eig.eigenvectors[(r, keep[c])]);
    let reduced = SkewMatrix::new(v.transpose() * g1.matrix() * &v)?;
    let inverse = reduced
        .matrix()
        .clone()
        .try_inverse()
        .ok_or(Error::NotSkew { deviation: f64::NAN })?;
    let other = SkewMatrix::new(-inverse + v.transpose() * g2.matrix() * &v)?;
    Ok(scale * reduced.pfaffian() * other.pfaffian())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multigraph::{tour_from_word, DoubleOccurrenceWord};

    fn psi(word: &str) -> MatchingCovariance {
        let w: DoubleOccurrenceWord = word.parse().unwrap();
        matching_covariance(&tour_from_word(&w).unwrap())
    }

    #[test]
    fn vwvw_entries() {
        let g = psi("vwvw").gamma;
        // v = vertex 0, w = vertex 1
        assert_eq!(g.get(3, 4), -1.0);
        assert_eq!(g.get(5, 0), 1.0);
        assert_eq!(g.get(1, 6), 1.0);
        assert_eq!(g.get(7, 2), 1.0);
        assert_eq!(g.pfaffian(), 1.0);
    }

    #[test]
    fn skew_validation() {
        let bad = DMatrix::from_row_slice(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        assert!(matches!(SkewMatrix::new(bad), Err(Error::NotSkew { .. })));
        let rect = DMatrix::zeros(2, 3);
        assert!(matches!(SkewMatrix::new(rect), Err(Error::NotSquare { .. })));
    }

    #[test]
    fn matrix_json() {
        let m = SkewMatrix::from_upper(2, &[(0, 1, 3.0)]).unwrap();
        assert_eq!(serde_json::to_string(&m).unwrap(), r#"{"dim":2,"upper":[[0,1,3.0]]}"#);
        let back: SkewMatrix = serde_json::from_str(r#"{"dim":2,"upper":[[0,1,3]]}"#).unwrap();
        assert_eq!(back.pfaffian(), 3.0);
        assert!(serde_json::from_str::<SkewMatrix>(r#"{"dim":2,"upper":[[0,2,3]]}"#).is_err());
    }

    #[test]
    fn lifts() {
        let z = bloch_lift(BlochVector::PLUS_Z);
        #[rustfmt::skip]
        let expected = DMatrix::from_row_slice(4, 4, &[
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, -1.0, 0.0,
        ]);
        assert_eq!(z.matrix(), &expected);
        let x = bloch_lift(BlochVector::PLUS_X);
        let xtx = x.matrix().transpose() * x.matrix();
        assert_eq!(xtx, DMatrix::identity(4, 4));
        let b = BlochVector::new(0.6, 0.0, 0.8);
        assert!((bloch_lift(b).pfaffian() - 1.0).abs() < 1e-15);
        let p = product_covariance(&[BlochVector::PLUS_Z, BlochVector::ZERO]);
        assert_eq!(p.gamma.matrix().rank(1e-12), 4);
        assert_eq!(product_covariance(&[BlochVector::PLUS_Z]).gamma, z);
    }

    #[test]
    fn wick_small() {
        let z = bloch_lift(BlochVector::PLUS_Z);
        assert_eq!(wick_expectation(&z, &[]).unwrap(), Complex64::new(1.0, 0.0));
        assert_eq!(wick_expectation(&z, &[0, 1]).unwrap(), Complex64::new(0.0, 1.0));
        assert!(matches!(wick_expectation(&z, &[0]), Err(Error::OddSupport(1))));
        assert!(matches!(wick_expectation(&z, &[1, 1]), Err(Error::RepeatedIndex(1))));
        let g = psi("adbacbdc").gamma;
        let all: Vec<usize> = (0..16).collect();
        // i^8 * pf = 1
        assert_eq!(wick_expectation(&g, &all).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn matchgate_rotations() {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let id = matchgate_orthogonal(&Matrix2::identity()).unwrap();
        assert!((id - Matrix4::identity()).abs().max() < 1e-15);
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let h = Matrix2::new(l * s, l * s, l * s, -l * s);
        let oh = matchgate_orthogonal(&h).unwrap();
        let dm = |m: Matrix4<f64>| DMatrix::from_fn(4, 4, |r, c| m[(r, c)]);
        let rotated = dm(oh) * bloch_lift(BlochVector::PLUS_Z).matrix() * dm(oh).transpose();
        assert!((rotated - bloch_lift(BlochVector::PLUS_X).matrix()).amax() < 1e-14);
        assert!((oh.determinant() - 1.0).abs() < 1e-14);
        let not_unitary = Matrix2::new(l, l, o, l);
        assert!(matches!(matchgate_orthogonal(&not_unitary), Err(Error::NotUnitary { .. })));
    }

    #[test]
    fn probabilities_clamp() {
        assert_eq!(Probability::from_raw(-1e-10).unwrap().value, 0.0);
        assert!(Probability::from_raw(-1e-8).is_err());
        assert_eq!(Probability::from_raw(0.3).unwrap().value, 0.3);
    }

    #[test]
    fn c4_marginals() {
        let g = psi("adbacbdc");
        let plus = [BlochVector::PLUS_X; 4];
        let p = overlap_full(&product_covariance(&plus), &g).unwrap();
        assert!((p.value - 0.25).abs() < 1e-12);
        let a = Measured::new(0, BlochVector::PLUS_Z, Outcome::Plus);
        assert!((marginal_prob(&g, &[a]).unwrap().value - 0.5).abs() < 1e-12);
        let dup = marginal_prob(&g, &[a, a]);
        assert!(matches!(dup, Err(Error::DuplicateVertex(_))));
        let far = Measured::new(9, BlochVector::PLUS_Z, Outcome::Plus);
        assert!(matches!(marginal_prob(&g, &[far]), Err(Error::UnknownVertex(_))));
        let mut total = 0.0;
        for oa in [Outcome::Plus, Outcome::Minus] {
            for ob in [Outcome::Plus, Outcome::Minus] {
                let ms = [
                    Measured::new(0, BlochVector::PLUS_Z, oa),
                    Measured::new(1, BlochVector::PLUS_Z, ob),
                ];
                total += marginal_prob(&g, &ms).unwrap().value;
            }
        }
        assert!((total - 1.0).abs() < 1e-12);
        let two = psi("vwvw");
        let p = overlap_full(&product_covariance(&[BlochVector::PLUS_X; 2]), &two).unwrap();
        assert!((p.value - 0.25).abs() < 1e-12);
    }

    #[test]
    fn mixed_overlap_extremes() {
        let g = psi("vwvw").gamma;
        let zero = SkewMatrix::zeros(8);
        assert!((mixed_overlap(&zero, &g).unwrap() - 1.0 / 16.0).abs() < 1e-15);
        // pure-pure: 2^{-N} pf(Γ1) pf(Γ1 + Γ2)
        let phi = product_covariance(&[BlochVector::PLUS_X; 2]).gamma;
        let direct = phi.add(&g).unwrap().pfaffian() / 16.0;
        assert!((mixed_overlap(&phi, &g).unwrap() - direct).abs() < 1e-12);
    }
}

//! Pauli strings `i^phase · X^x · Z^z` on up to 64 qubits, with qubit `q` on
//! bit `q` of the basis index. Products are exact, so operator identities on
//! Majorana monomials can be checked without rounding.

use nalgebra::DMatrix;
use num_complex::Complex64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    pub x: u64,
    pub z: u64,
    /// Power of `i`, modulo 4.
    pub phase: u8,
}

fn i_pow(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

impl PauliString {
    pub const IDENTITY: Self = Self {
        x: 0,
        z: 0,
        phase: 0,
    };

    pub fn x(q: usize) -> Self {
        Self {
            x: 1 << q,
            z: 0,
            phase: 0,
        }
    }

    pub fn z(q: usize) -> Self {
        Self {
            x: 0,
            z: 1 << q,
            phase: 0,
        }
    }

    /// `Y = i X Z`.
    pub fn y(q: usize) -> Self {
        Self {
            x: 1 << q,
            z: 1 << q,
            phase: 1,
        }
    }

    pub fn scaled_by_i(self, k: u8) -> Self {
        Self {
            phase: (self.phase + k) % 4,
            ..self
        }
    }

    pub fn neg(self) -> Self {
        self.scaled_by_i(2)
    }

    /// `self · other`.
    pub fn mul(self, other: Self) -> Self {
        let swap = (self.z & other.x).count_ones() as u8 % 2;
        Self {
            x: self.x ^ other.x,
            z: self.z ^ other.z,
            phase: (self.phase + other.phase + 2 * swap) % 4,
        }
    }

    pub fn commutes_with(self, other: Self) -> bool {
        ((self.z & other.x).count_ones() + (self.x & other.z).count_ones()) % 2 == 0
    }

    pub fn is_hermitian(self) -> bool {
        // (X^x Z^z)† = Z^z X^x = (-1)^{|x & z|} X^x Z^z
        let reorder = (self.x & self.z).count_ones() as u8 % 2;
        (2 * self.phase + 2 * reorder) % 4 == 0
    }

    /// Scalar factor at basis state `k`: `(P|k⟩) = coefficient(k) |k ⊕ x⟩`.
    pub fn coefficient(self, k: usize) -> Complex64 {
        let sign = ((self.z as usize & k).count_ones() % 2) as u8;
        i_pow(self.phase + 2 * sign)
    }

    pub fn apply(self, v: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); v.len()];
        for (k, &a) in v.iter().enumerate() {
            out[k ^ self.x as usize] = self.coefficient(k) * a;
        }
        out
    }

    /// `P · A` for a dense matrix `A`.
    pub fn left_mul(self, a: &DMatrix<Complex64>) -> DMatrix<Complex64> {
        let mut out = DMatrix::zeros(a.nrows(), a.ncols());
        for k in 0..a.nrows() {
            let c = self.coefficient(k);
            let target = k ^ self.x as usize;
            for col in 0..a.ncols() {
                out[(target, col)] = c * a[(k, col)];
            }
        }
        out
    }

    /// `tr(P ρ)`.
    pub fn trace_with(self, rho: &DMatrix<Complex64>) -> Complex64 {
        (0..rho.nrows())
            .map(|k| self.coefficient(k) * rho[(k, k ^ self.x as usize)])
            .sum()
    }

    /// `⟨v|P|v⟩`.
    pub fn expectation(self, v: &[Complex64]) -> Complex64 {
        v.iter()
            .enumerate()
            .map(|(k, &a)| v[k ^ self.x as usize].conj() * self.coefficient(k) * a)
            .sum()
    }

    pub fn to_dense(self, dim: usize) -> DMatrix<Complex64> {
        let mut m = DMatrix::zeros(dim, dim);
        for k in 0..dim {
            m[(k ^ self.x as usize, k)] = self.coefficient(k);
        }
        m
    }
}

/// Majorana `c_j` on `modes` qubits by sequential pairing:
/// `c_{2k} = Z_{<k} X_k`, `c_{2k+1} = Z_{<k} Y_k`.
pub fn majorana(j: usize) -> PauliString {
    let k = j / 2;
    let string = (1u64 << k) - 1;
    let base = PauliString {
        x: 0,
        z: string,
        phase: 0,
    };
    let local = if j % 2 == 0 {
        PauliString::x(k)
    } else {
        PauliString::y(k)
    };
    base.mul(local)
}

/// Ordered product `c_{j1} c_{j2} ...`.
pub fn majorana_product(indices: &[usize]) -> PauliString {
    indices
        .iter()
        .fold(PauliString::IDENTITY, |acc, &j| acc.mul(majorana(j)))
}

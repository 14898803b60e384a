//! Pfaffian of a real skew-symmetric matrix by pivoted skew-symmetric
//! Gaussian elimination (Parlett–Reid, `A = L T Lᵀ` form).

use nalgebra::DMatrix;

/// Pfaffian of `a`, which is assumed skew-symmetric and is not checked.
///
/// Odd dimensions give 0 and the empty matrix gives 1.
pub fn pfaffian_unchecked(a: &DMatrix<f64>) -> f64 {
    let n = a.nrows();
    if n % 2 == 1 {
        return 0.0;
    }
    let mut a = a.clone();
    let mut pf = 1.0;
    let mut tau = vec![0.0; n];
    let mut col = vec![0.0; n];
    for k in (0..n.saturating_sub(1)).step_by(2) {
        let mut kp = k + 1;
        let mut best = a[(k + 1, k)].abs();
        for i in k + 2..n {
            let v = a[(i, k)].abs();
            if v > best {
                best = v;
                kp = i;
            }
        }
        if kp != k + 1 {
            a.swap_rows(k + 1, kp);
            a.swap_columns(k + 1, kp);
            pf = -pf;
        }
        let pivot = a[(k, k + 1)];
        if pivot == 0.0 {
            return 0.0;
        }
        pf *= pivot;
        if k + 2 < n {
            for i in k + 2..n {
                tau[i] = a[(k, i)] / pivot;
                col[i] = a[(i, k + 1)];
            }
            for j in k + 2..n {
                for i in k + 2..n {
                    a[(i, j)] += tau[i] * col[j] - col[i] * tau[j];
                }
            }
        }
    }
    pf
}

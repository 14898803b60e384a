//! Reference computations that share no code with the library.
#![allow(dead_code)]

use std::collections::HashMap;

use num_complex::Complex64;

/// Edges of the interlace graph read straight off the letter positions.
pub fn interlace_edges(letters: &[char]) -> Vec<(char, char)> {
    let mut names: Vec<char> = Vec::new();
    for &c in letters {
        if !names.contains(&c) {
            names.push(c);
        }
    }
    let pos = |c: char| -> (usize, usize) {
        let mut it = letters.iter().enumerate().filter(|(_, &x)| x == c).map(|(i, _)| i);
        (it.next().unwrap(), it.next().unwrap())
    };
    let mut out = Vec::new();
    for (i, &u) in names.iter().enumerate() {
        for &v in &names[i + 1..] {
            let (a, b) = pos(u);
            let (c, d) = pos(v);
            let inside = |x: usize| a < x && x < b;
            if inside(c) != inside(d) {
                out.push((u, v));
            }
        }
    }
    out
}

/// GF(2) rank of row bitmasks.
pub fn rank_gf2(mut rows: Vec<u64>) -> usize {
    let mut rank = 0;
    for bit in 0..64 {
        let Some(p) = (rank..rows.len()).find(|&r| (rows[r] >> bit) & 1 == 1) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..rows.len() {
            if r != rank && (rows[r] >> bit) & 1 == 1 {
                rows[r] ^= rows[rank];
            }
        }
        rank += 1;
    }
    rank
}

/// Adjacency as neighbour bitmasks over vertex indices.
pub fn adjacency(n: usize, edges: &[(usize, usize)]) -> Vec<u64> {
    let mut adj = vec![0u64; n];
    for &(a, b) in edges {
        adj[a] |= 1 << b;
        adj[b] |= 1 << a;
    }
    adj
}

pub fn cut_rank_mask(adj: &[u64], side: u64) -> usize {
    let all = (1u64 << adj.len()) - 1;
    let rows = (0..adj.len())
        .filter(|&v| (side >> v) & 1 == 1)
        .map(|v| adj[v] & all & !side)
        .collect();
    rank_gf2(rows)
}

/// Rank width by recursion over rooted binary splits of vertex sets.
pub fn rank_width_by_partition(adj: &[u64]) -> usize {
    let n = adj.len();
    if n <= 1 {
        return 0;
    }
    let all = (1u64 << n) - 1;
    let mut memo: HashMap<u64, usize> = HashMap::new();
    fn best(s: u64, adj: &[u64], memo: &mut HashMap<u64, usize>) -> usize {
        if s.count_ones() <= 1 {
            return 0;
        }
        if let Some(&w) = memo.get(&s) {
            return w;
        }
        let low = s & s.wrapping_neg();
        let mut result = usize::MAX;
        // Proper subsets containing the lowest element, so each split is seen once.
        let rest = s & !low;
        let mut sub = rest;
        loop {
            let a = sub | low;
            if a != s {
                let b = s & !a;
                let w = cut_rank_mask(adj, a)
                    .max(cut_rank_mask(adj, b))
                    .max(best(a, adj, memo))
                    .max(best(b, adj, memo));
                result = result.min(w);
            }
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & rest;
        }
        memo.insert(s, result);
        result
    }
    best(all, adj, &mut memo)
}

/// Graph state amplitudes, qubit `q` on bit `q`.
pub fn graph_state(n: usize, edges: &[(usize, usize)]) -> Vec<Complex64> {
    let amp = 0.5f64.powf(n as f64 / 2.0);
    (0..1usize << n)
        .map(|x| {
            let ones = edges
                .iter()
                .filter(|&&(a, b)| (x >> a) & 1 == 1 && (x >> b) & 1 == 1)
                .count();
            Complex64::new(if ones % 2 == 0 { amp } else { -amp }, 0.0)
        })
        .collect()
}

/// `‖Π_q (I + s_q b_q·σ)/2 |ψ⟩‖²` over the listed `(qubit, [x,y,z], s)`.
pub fn projected_weight(psi: &[Complex64], measured: &[(usize, [f64; 3], f64)]) -> f64 {
    let mut v = psi.to_vec();
    for &(q, [x, y, z], s) in measured {
        let bit = 1usize << q;
        for i in 0..v.len() {
            if i & bit != 0 {
                continue;
            }
            let (a0, a1) = (v[i], v[i | bit]);
            // (I + s (xX + yY + zZ)) / 2
            let m00 = Complex64::new(1.0 + s * z, 0.0);
            let m01 = Complex64::new(s * x, -s * y);
            let m10 = Complex64::new(s * x, s * y);
            let m11 = Complex64::new(1.0 - s * z, 0.0);
            v[i] = (m00 * a0 + m01 * a1) * 0.5;
            v[i | bit] = (m10 * a0 + m11 * a1) * 0.5;
        }
    }
    v.iter().map(|a| a.norm_sqr()).sum()
}

/// Uniform point on the sphere from two uniforms in [0, 1).
pub fn sphere_point(u: f64, w: f64) -> [f64; 3] {
    let z = 2.0 * u - 1.0;
    let r = (1.0 - z * z).max(0.0).sqrt();
    let phi = 2.0 * std::f64::consts::PI * w;
    [r * phi.cos(), r * phi.sin(), z]
}

/// Determinant by Gaussian elimination with partial pivoting.
pub fn determinant(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut a: Vec<Vec<f64>> = m.to_vec();
    let mut det = 1.0;
    for c in 0..n {
        let p = (c..n)
            .max_by(|&i, &j| a[i][c].abs().total_cmp(&a[j][c].abs()))
            .unwrap();
        if a[p][c] == 0.0 {
            return 0.0;
        }
        if p != c {
            a.swap(p, c);
            det = -det;
        }
        det *= a[c][c];
        for r in c + 1..n {
            let f = a[r][c] / a[c][c];
            for k in c..n {
                a[r][k] -= f * a[c][k];
            }
        }
    }
    det
}

mod support;

use circle_mbqc::gaussian::{
    block_marginal, matchgate_orthogonal, mixed_overlap, pfaffian, wick_expectation, Measured,
    Outcome,
};
use circle_mbqc::multigraph::random_connected_word;
use circle_mbqc::{oracle, sector};
use circle_mbqc::{
    alternance_graph, bloch_lift, marginal_prob, matching_covariance, overlap_full,
    product_covariance, tour_from_word, BlochVector, SkewMatrix,
};
use nalgebra::{DMatrix, Matrix2};
use num_complex::Complex64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_skew(dim: usize, rng: &mut ChaCha8Rng) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(dim, dim);
    for j in 0..dim {
        for k in j + 1..dim {
            let x: f64 = rng.random_range(-1.0..1.0);
            m[(j, k)] = x;
            m[(k, j)] = -x;
        }
    }
    m
}

fn random_bloch(rng: &mut ChaCha8Rng) -> BlochVector {
    let [x, y, z] = support::sphere_point(rng.random(), rng.random());
    BlochVector::new(x, y, z)
}

fn random_unitary(rng: &mut ChaCha8Rng) -> Matrix2<Complex64> {
    let (a, b, c, d): (f64, f64, f64, f64) = (rng.random(), rng.random(), rng.random(), rng.random());
    let tau = std::f64::consts::TAU;
    let (t, p, q, g) = (a * tau, b * tau, c * tau, d * tau);
    let e = |x: f64| Complex64::from_polar(1.0, x);
    Matrix2::new(
        e(g) * e(p) * t.cos(),
        e(g) * e(q) * t.sin(),
        -e(g) * e(-q) * t.sin(),
        e(g) * e(-p) * t.cos(),
    )
}

fn random_subset(n: usize, t: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    let mut vs: Vec<usize> = (0..n).collect();
    for i in (1..n).rev() {
        vs.swap(i, rng.random_range(0..=i));
    }
    vs.truncate(t);
    vs
}

fn random_measurement(vertices: &[usize], rng: &mut ChaCha8Rng) -> Vec<Measured> {
    vertices
        .iter()
        .map(|&v| {
            let o = if rng.random::<bool>() { Outcome::Plus } else { Outcome::Minus };
            Measured::new(v, random_bloch(rng), o)
        })
        .collect()
}

fn statevector_marginal(w: &circle_mbqc::DoubleOccurrenceWord, measured: &[Measured]) -> f64 {
    let state = support::graph_state(w.vertex_count(), &alternance_graph(w).edges());
    let items: Vec<_> = measured
        .iter()
        .map(|m| (m.vertex, m.direction.to_array(), m.outcome.sign()))
        .collect();
    support::projected_weight(&state, &items)
}

fn rows(m: &DMatrix<f64>) -> Vec<Vec<f64>> {
    (0..m.nrows()).map(|r| m.row(r).iter().copied().collect()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn pfaffian_squares_to_determinant(half in 0usize..16, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let s = random_skew(2 * half, &mut rng);
        let pf = pfaffian(&s).unwrap();
        let det = support::determinant(&rows(&s));
        prop_assert!((pf * pf - det).abs() <= 1e-8 * det.abs().max(1e-300));
    }

    #[test]
    fn pfaffian_congruence(half in 1usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let dim = 2 * half;
        let s = random_skew(dim, &mut rng);
        let b = DMatrix::from_fn(dim, dim, |_, _| rng.random_range(-1.0..1.0));
        let lhs = pfaffian(&(&b * &s * b.transpose())).unwrap();
        let rhs = support::determinant(&rows(&b)) * pfaffian(&s).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * rhs.abs().max(1e-12));
    }

    #[test]
    fn odd_dimension_is_zero(half in 0usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        prop_assert_eq!(pfaffian(&random_skew(2 * half + 1, &mut rng)).unwrap(), 0.0);
    }

    #[test]
    fn block_swaps_keep_the_pfaffian(n in 2usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let blochs: Vec<_> = (0..n).map(|_| random_bloch(&mut rng)).collect();
        let sum = product_covariance(&blochs).gamma.add(&psi.gamma).unwrap();
        let mut order: Vec<usize> = (0..n).collect();
        for i in (1..n).rev() {
            order.swap(i, rng.random_range(0..=i));
        }
        let rows: Vec<usize> = order.iter().flat_map(|&v| (0..4).map(move |a| 4 * v + a)).collect();
        let permuted = sum.principal(&rows);
        prop_assert!((permuted.pfaffian() - sum.pfaffian()).abs() < 1e-10);
    }

    #[test]
    fn marginal_chain_sums(n in 2usize..8, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let dirs: Vec<_> = (0..n).map(|_| random_bloch(&mut rng)).collect();
        let outcomes: Vec<Outcome> = (0..n)
            .map(|_| if rng.random::<bool>() { Outcome::Plus } else { Outcome::Minus })
            .collect();
        let prefix = |t: usize, last: Option<Outcome>| -> Vec<Measured> {
            (0..t)
                .map(|v| Measured::new(v, dirs[v], if v + 1 == t { last.unwrap_or(outcomes[v]) } else { outcomes[v] }))
                .collect()
        };
        for t in 1..n {
            let p = marginal_prob(&psi, &prefix(t, None)).unwrap().value;
            let plus = marginal_prob(&psi, &prefix(t + 1, Some(Outcome::Plus))).unwrap().value;
            let minus = marginal_prob(&psi, &prefix(t + 1, Some(Outcome::Minus))).unwrap().value;
            prop_assert!((plus + minus - p).abs() < 1e-10, "t={} {} vs {}", t, plus + minus, p);
        }
        let single_plus = marginal_prob(&psi, &[Measured::new(0, dirs[0], Outcome::Plus)]).unwrap().value;
        let single_minus = marginal_prob(&psi, &[Measured::new(0, dirs[0], Outcome::Minus)]).unwrap().value;
        prop_assert!((single_plus + single_minus - 1.0).abs() < 1e-10);
    }

    #[test]
    fn overlap_matches_statevector(n in 2usize..9, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let blochs: Vec<_> = (0..n).map(|_| random_bloch(&mut rng)).collect();
        let exact = overlap_full(&product_covariance(&blochs), &psi).unwrap().value;
        let g = alternance_graph(&w);
        let state = support::graph_state(n, &g.edges());
        let measured: Vec<_> = blochs.iter().enumerate().map(|(q, b)| (q, b.to_array(), 1.0)).collect();
        prop_assert!((exact - support::projected_weight(&state, &measured)).abs() < 1e-9);
        prop_assert!((exact - oracle::brute_overlap(&g, &blochs).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn block_formula_is_a_mixed_overlap(n in 2usize..7, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let t = rng.random_range(1..=n);
        let measured = random_measurement(&random_subset(n, t, &mut rng), &mut rng);
        let p = if t < n {
            block_marginal(&psi, &measured).unwrap().value
        } else {
            marginal_prob(&psi, &measured).unwrap().value
        };
        // Measured blocks carry the projector's lift; the rest are maximally mixed.
        let mut blochs = vec![BlochVector::ZERO; n];
        for m in &measured {
            blochs[m.vertex] = m.effective();
        }
        let partial = product_covariance(&blochs).gamma;
        let tr = mixed_overlap(&partial, &psi.gamma).unwrap();
        let expected = if t < n { 2f64.powi(2 * n as i32 - t as i32) * tr } else { 2f64.powi(n as i32 - 1) * tr };
        prop_assert!((p - expected).abs() < 1e-9, "p={} expected={}", p, expected);
    }

    #[test]
    fn marginals_on_random_subsets(n in 2usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let t = rng.random_range(1..=n);
        let measured = random_measurement(&random_subset(n, t, &mut rng), &mut rng);
        let p = marginal_prob(&psi, &measured).unwrap().value;
        let expected = statevector_marginal(&w, &measured);
        prop_assert!((p - expected).abs() < 1e-9, "{} {:?}: {} vs {}", w, measured, p, expected);
    }

    #[test]
    fn safe_sets_need_no_reduction(n in 3usize..10, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let tour = tour_from_word(&w).unwrap();
        let t = rng.random_range(1..n);
        let vertices = random_subset(n, t, &mut rng);
        let measured = random_measurement(&vertices, &mut rng);
        let expected = statevector_marginal(&w, &measured);
        if sector::is_sector_safe(&tour, &vertices) {
            let p = block_marginal(&matching_covariance(&tour), &measured).unwrap().value;
            prop_assert!((p - expected).abs() < 1e-9);
        }
        // Every tour is safe once a single vertex is left.
        let mut all_but_one = vertices.clone();
        all_but_one.extend((0..n).filter(|v| !vertices.contains(v)).skip(1));
        prop_assert!(sector::is_sector_safe(&tour, &all_but_one));
    }

    #[test]
    fn realisation_keeps_the_measured_subgraph(n in 3usize..12, seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = random_connected_word(n, &mut rng);
        let t = rng.random_range(1..n);
        let vertices = random_subset(n, t, &mut rng);
        let real = sector::realise(&w, &vertices);
        let reduced = real.tour.word();
        for (i, &u) in vertices.iter().enumerate() {
            for (j, &v) in vertices.iter().enumerate() {
                prop_assert_eq!(reduced.alternates(real.index[i], real.index[j]), w.alternates(u, v));
            }
        }
        prop_assert!(sector::is_sector_safe(&real.tour, &real.index));
        // Shifts are independent and never exceed the unmeasured neighbourhood rank.
        let unmeasured: Vec<usize> = (0..n).filter(|v| !vertices.contains(v)).collect();
        let cols: Vec<u64> = unmeasured
            .iter()
            .map(|&u| (0..t).filter(|&i| w.alternates(vertices[i], u)).fold(0u64, |m, i| m | 1 << i))
            .collect();
        let mut shifts: Vec<u64> = real
            .shifts
            .iter()
            .map(|s| (0..t).filter(|&i| s.get(i)).fold(0u64, |m, i| m | 1 << i))
            .collect();
        prop_assert_eq!(support::rank_gf2(shifts.clone()), shifts.len());
        let y = support::rank_gf2(cols.clone());
        shifts.extend(cols);
        prop_assert_eq!(support::rank_gf2(shifts), y);
    }

    #[test]
    fn matchgate_rotates_the_bloch_lift(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let u = random_unitary(&mut rng);
        let o = matchgate_orthogonal(&u).unwrap();
        prop_assert!((o * o.transpose() - nalgebra::Matrix4::identity()).amax() < 1e-12);
        let zero = bloch_lift(BlochVector::PLUS_Z);
        let z4 = nalgebra::Matrix4::from_fn(|r, c| zero.get(r, c));
        let rotated = o * z4 * o.transpose();
        let image = BlochVector::of_state(u[(0, 0)], u[(1, 0)]);
        let lift = bloch_lift(image);
        let l4 = nalgebra::Matrix4::from_fn(|r, c| lift.get(r, c));
        prop_assert!((rotated - l4).amax() < 1e-12);
    }
}

#[test]
fn marginals_against_dense_oracle_on_every_four_letter_word() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for w in circle_mbqc::multigraph::enumerate_words(4) {
        let psi = matching_covariance(&tour_from_word(&w).unwrap());
        let g = alternance_graph(&w);
        for subset in 1u32..16 {
            let vs: Vec<usize> = (0..4).filter(|v| (subset >> v) & 1 == 1).collect();
            let dirs: Vec<_> = vs.iter().map(|_| random_bloch(&mut rng)).collect();
            let coded: Vec<_> = vs
                .iter()
                .zip(&dirs)
                .map(|(&v, &d)| Measured::new(v, d, Outcome::Minus))
                .collect();
            let brute: Vec<_> = coded.iter().map(|m| (m.vertex, m.direction, m.outcome)).collect();
            let exact = marginal_prob(&psi, &coded).unwrap().value;
            assert!((exact - oracle::brute_marginal(&g, &brute).unwrap()).abs() < 1e-10);
        }
    }
}

#[test]
fn wick_rule_on_small_states() {
    for n in 2..=3 {
        for w in circle_mbqc::multigraph::enumerate_words(n) {
            let tour = tour_from_word(&w).unwrap();
            let gamma = matching_covariance(&tour).gamma;
            let report = oracle::verify_wick(&tour, |q| wick_expectation(&gamma, q)).unwrap();
            assert!(report.passed(), "{w}: {:?}", report.checks);
        }
    }
}

#[test]
fn product_covariance_is_block_diagonal() {
    let blochs = [BlochVector::PLUS_X, BlochVector::new(0.0, -1.0, 0.0)];
    let pc = product_covariance(&blochs);
    for j in 0..8 {
        for k in 0..8 {
            if j / 4 != k / 4 {
                assert_eq!(pc.gamma.get(j, k), 0.0);
            } else {
                assert_eq!(pc.gamma.get(j, k), bloch_lift(blochs[j / 4]).get(j % 4, k % 4));
            }
        }
    }
    assert!(pc.is_pure());
    let s = SkewMatrix::new(pc.gamma.matrix().clone()).unwrap();
    assert_eq!(s, pc.gamma);
}

/// The block Pfaffian on the word's own tour, read as a marginal of the leading
/// vertices. Kept red on purpose: it misses gauge-sector flips on some words.
#[test]
#[ignore = "known to fail; marginal_prob reduces the tour instead"]
fn unreduced_block_formula_on_prefixes() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut off = Vec::new();
    for n in 3..=6 {
        for w in circle_mbqc::multigraph::enumerate_words(n) {
            let psi = matching_covariance(&tour_from_word(&w).unwrap());
            for t in 1..n - 1 {
                let prefix: Vec<usize> = (0..t).collect();
                let measured = random_measurement(&prefix, &mut rng);
                let literal = block_marginal(&psi, &measured).unwrap().value;
                let expected = statevector_marginal(&w, &measured);
                if (literal - expected).abs() > 1e-9 {
                    off.push(format!("{w} t={t}: {literal} vs {expected}"));
                }
            }
        }
    }
    assert!(off.is_empty(), "{} mismatches, first {}", off.len(), off[0]);
}

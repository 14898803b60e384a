//! Choosing a tour on which the block Pfaffian gives exact marginals.
//!
//! Conjugating by the gauge projectors of the measured vertices leaves the
//! matching state summed over every even gauge sector of the unmeasured ones.
//! In sector `s` the encoded state is `Z^{a(s)} |G⟩`, where `a_v(s)` is the
//! parity of `s` over the vertices whose `1 -> 2` transition lies on the second
//! cycle at `v`. The block Pfaffian therefore returns the measured probability
//! averaged over those `Z` flips. It is exact when every flip it averages over
//! is one the reduced state on the measured set already absorbs.
//!
//! A marginal on `S` depends only on `G[S]` and on the span `Y` of the columns
//! of the `S x U` adjacency block. When the given tour is unsafe we rebuild a
//! small word from the letters of `S` plus auxiliary chords whose
//! neighbourhoods lie in `Y`. Each auxiliary chord has one endpoint right after
//! the tour start, so its `1 -> 2` transition never lies on a second cycle of a
//! measured vertex. The other endpoint must sit in a gap whose separating set
//! is in `Y`; when those gaps cannot reach all of `Y`, the missing directions
//! are returned as explicit flips to average over.

use crate::bits::BitRow;
use crate::multigraph::{trace_tour, Cycle, DoubleOccurrenceWord, EulerTour};

/// Row-echelon basis of a GF(2) subspace, keyed by lowest set bit.
#[derive(Debug, Clone)]
struct Span {
    len: usize,
    rows: Vec<(usize, BitRow)>,
}

impl Span {
    fn new(len: usize) -> Self {
        Self { len, rows: Vec::new() }
    }

    fn reduce(&self, v: &BitRow) -> BitRow {
        let mut v = v.clone();
        for (pivot, row) in &self.rows {
            if v.get(*pivot) {
                v.xor_assign(row);
            }
        }
        v
    }

    fn contains(&self, v: &BitRow) -> bool {
        self.reduce(v).is_zero()
    }

    /// Adds `v`, returning whether the span grew.
    fn insert(&mut self, v: &BitRow) -> bool {
        let r = self.reduce(v);
        let Some(pivot) = r.lowest() else {
            return false;
        };
        for (_, row) in self.rows.iter_mut() {
            if row.get(pivot) {
                row.xor_assign(&r);
            }
        }
        self.rows.push((pivot, r));
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }

    fn zero(&self) -> BitRow {
        BitRow::zeros(self.len)
    }
}

/// Column span of the adjacency block between `measured` (indexed by position)
/// and the rest.
fn neighbourhood_span(word: &DoubleOccurrenceWord, measured: &[usize], in_s: &[bool]) -> Span {
    let mut span = Span::new(measured.len());
    for u in (0..word.vertex_count()).filter(|&u| !in_s[u]) {
        let col = BitRow::from_indices(
            measured.len(),
            (0..measured.len()).filter(|&i| word.alternates(measured[i], u)),
        );
        span.insert(&col);
    }
    span
}

/// Whether the block Pfaffian of `tour` is exact for every measurement of the
/// vertices in `measured`.
pub fn is_sector_safe(tour: &EulerTour, measured: &[usize]) -> bool {
    let n = tour.vertex_count();
    let t = measured.len();
    if t + 1 >= n {
        return true;
    }
    let mut in_s = vec![false; n];
    for &v in measured {
        in_s[v] = true;
    }
    let y = neighbourhood_span(tour.word(), measured, &in_s);
    // Column w of the flip matrix: measured vertices whose second cycle holds w's 1 -> 2.
    let mut cols: Vec<BitRow> = vec![BitRow::zeros(t); n];
    for (i, &v) in measured.iter().enumerate() {
        let split = tour.split_at_index(v);
        for (into, out) in split.transitions(Cycle::Second) {
            if (into.slot, out.slot) == (1, 2) && !in_s[into.vertex] {
                cols[into.vertex].set(i, true);
            }
        }
    }
    let unmeasured: Vec<usize> = (0..n).filter(|&u| !in_s[u]).collect();
    let base = &cols[unmeasured[0]];
    unmeasured[1..].iter().all(|&w| {
        let mut d = cols[w].clone();
        d.xor_assign(base);
        y.contains(&d)
    })
}

/// A reduced tour for marginals on a measured set, together with the `Z`-flip
/// shifts the auxiliary chords could not absorb.
#[derive(Debug, Clone)]
pub struct Realisation {
    pub tour: EulerTour,
    /// Vertex index of each measured vertex in `tour`.
    pub index: Vec<usize>,
    /// Basis of a complement of the absorbed span inside `Y`, over measured
    /// positions. The marginal is the average over every sum of these flips.
    pub shifts: Vec<BitRow>,
}

/// Rebuilds a word from the letters of `measured` (keeping their names) plus
/// unnamed auxiliary chords, choosing the gap class whose differences cover the
/// most of `Y`. An isolated measured chord may end up as a loop `vv`, which the
/// encoding handles like any other chord.
pub fn realise(word: &DoubleOccurrenceWord, measured: &[usize]) -> Realisation {
    let n = word.vertex_count();
    let t = measured.len();
    let mut in_s = vec![false; n];
    let mut slot = vec![usize::MAX; n];
    for (i, &v) in measured.iter().enumerate() {
        in_s[v] = true;
        slot[v] = i;
    }
    let y = neighbourhood_span(word, measured, &in_s);
    // The measured letters in word order; gap g sits after position g.
    let restricted: Vec<usize> = word.ranks().iter().copied().filter(|&v| in_s[v]).collect();
    let len = restricted.len();

    let candidates = (0..len)
        .map(|start| {
            // N(g): measured chords separating gap `start` from gap g.
            let mut chosen = Vec::new();
            let mut span = Span::new(t);
            let mut sep = y.zero();
            for step in 1..len {
                if span.dim() == y.dim() {
                    break;
                }
                let g = (start + step) % len;
                sep.flip(slot[restricted[g]]);
                if y.contains(&sep) && span.insert(&sep) {
                    chosen.push(g);
                }
            }
            (start, chosen, span)
        });
    let (start, chosen, mut grown) = candidates
        .into_iter()
        .min_by_key(|(start, _, span)| (std::cmp::Reverse(span.dim()), *start))
        .expect("at least one measured letter");

    let aux = |j: usize| format!("\u{0}{j}");
    {
        let mut letters: Vec<String> = Vec::with_capacity(len + 2 * chosen.len());
        for step in 0..len {
            let g = (start + step) % len;
            letters.push(word.vertices()[restricted[g]].clone());
            if step == 0 {
                letters.extend((0..chosen.len()).map(aux));
            }
            for (j, _) in chosen.iter().enumerate().filter(|(_, &c)| c == g) {
                letters.push(aux(j));
            }
        }
        let reduced = DoubleOccurrenceWord::new(letters).expect("every letter appears twice");
        let shifts = y.rows.iter().filter(|(_, row)| grown.insert(row)).map(|(_, row)| row.clone()).collect();
        let tour = trace_tour(&reduced);
        let index = measured
            .iter()
            .map(|&v| reduced.index_of(&word.vertices()[v]).expect("measured letter kept"))
            .collect();
        Realisation { tour, index, shifts }
    }
}

//! Double-occurrence words, the Eulerian tours they describe on 4-regular
//! multigraphs, and splits of those tours.
//!
//! A word `w_0 w_1 ... w_{2n-1}` is read as a closed walk on a 4-regular
//! multigraph whose edges join cyclically consecutive letters. Every visit to
//! a vertex enters through one half-edge and leaves through another, so the
//! tour is a sequence of `4n` half-edges in which positions `2k, 2k+1` form a
//! directed edge and positions `2k+1, 2k+2` form a transition through a vertex.
//!
//! Half-edges are labelled as follows. The first letter is the start vertex:
//! it leaves through slot 4, re-enters on its second visit through slot 1 and
//! leaves through slot 2, and the tour finally returns through slot 3. Every
//! other vertex is labelled 1, 2 on its first visit and 3, 4 on its second.
//! Consequently every transition is `1 -> 2` or `3 -> 4`.

use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A word in which every letter occurs exactly twice.
///
/// Letters are numbered by first appearance; that rank is the vertex index used
/// everywhere else in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DoubleOccurrenceWord {
    letters: Vec<String>,
    vertices: Vec<String>,
    ranks: Vec<usize>,
    positions: Vec<[usize; 2]>,
}

impl DoubleOccurrenceWord {
    pub fn new<S: Into<String>>(letters: impl IntoIterator<Item = S>) -> Result<Self> {
        let letters: Vec<String> = letters.into_iter().map(Into::into).collect();
        let mut vertices: Vec<String> = Vec::new();
        let mut ranks = Vec::with_capacity(letters.len());
        let mut counts: Vec<usize> = Vec::new();
        let mut positions: Vec<[usize; 2]> = Vec::new();
        for (pos, letter) in letters.iter().enumerate() {
            let rank = match vertices.iter().position(|v| v == letter) {
                Some(r) => r,
                None => {
                    vertices.push(letter.clone());
                    counts.push(0);
                    positions.push([usize::MAX; 2]);
                    vertices.len() - 1
                }
            };
            if counts[rank] < 2 {
                positions[rank][counts[rank]] = pos;
            }
            counts[rank] += 1;
            ranks.push(rank);
        }
        if let Some((rank, &count)) = counts.iter().enumerate().find(|(_, &c)| c != 2) {
            return Err(Error::NotDoubleOccurrence {
                letter: vertices[rank].clone(),
                count,
            });
        }
        Ok(Self {
            letters,
            vertices,
            ranks,
            positions,
        })
    }

    /// Builds a word from vertex ranks `0..n`, naming them `a`, `b`, ... (or
    /// `v0`, `v1`, ... past 26 letters).
    pub fn from_ranks(ranks: &[usize]) -> Result<Self> {
        let n = ranks.iter().map(|&r| r + 1).max().unwrap_or(0);
        let name = |r: usize| {
            if n <= 26 {
                char::from(b'a' + r as u8).to_string()
            } else {
                format!("v{r}")
            }
        };
        Self::new(ranks.iter().map(|&r| name(r)))
    }

    pub fn letters(&self) -> &[String] {
        &self.letters
    }

    /// Distinct letters in order of first appearance.
    pub fn vertices(&self) -> &[String] {
        &self.vertices
    }

    /// Vertex rank of every position.
    pub fn ranks(&self) -> &[usize] {
        &self.ranks
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    pub fn index_of(&self, letter: &str) -> Option<usize> {
        self.vertices.iter().position(|v| v == letter)
    }

    /// The two positions of vertex `rank`, in increasing order.
    pub fn occurrences(&self, rank: usize) -> [usize; 2] {
        self.positions[rank]
    }

    /// True iff the occurrences of `u` and `v` interleave (`u..v..u..v` up to
    /// rotation and reversal).
    pub fn alternates(&self, u: usize, v: usize) -> bool {
        if u == v {
            return false;
        }
        let [p0, p1] = self.positions[u];
        let inside = self.positions[v]
            .iter()
            .filter(|&&q| p0 < q && q < p1)
            .count();
        inside == 1
    }

    /// First position `i` such that letters `i` and `i + 1` (cyclically) coincide.
    pub fn self_loop(&self) -> Option<usize> {
        let len = self.ranks.len();
        (0..len).find(|&i| self.ranks[i] == self.ranks[(i + 1) % len])
    }

    /// Whether the alternance graph of the word is connected.
    pub fn is_alternance_connected(&self) -> bool {
        let n = self.vertex_count();
        if n <= 1 {
            return true;
        }
        let mut seen = vec![false; n];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(u) = stack.pop() {
            for v in 0..n {
                if !seen[v] && self.alternates(u, v) {
                    seen[v] = true;
                    stack.push(v);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Canonical representative of the word's class under rotation, reversal
    /// and renaming of letters, expressed as first-appearance ranks.
    pub fn canonical_ranks(&self) -> Vec<usize> {
        let len = self.ranks.len();
        let mut best: Option<Vec<usize>> = None;
        for reversed in [false, true] {
            for shift in 0..len {
                let seq = (0..len).map(|i| {
                    let j = if reversed {
                        (shift + len - i) % len
                    } else {
                        (shift + i) % len
                    };
                    self.ranks[j]
                });
                let relabelled = relabel_by_first_appearance(seq, self.vertex_count());
                if best.as_ref().is_none_or(|b| relabelled < *b) {
                    best = Some(relabelled);
                }
            }
        }
        best.unwrap_or_default()
    }
}

fn relabel_by_first_appearance(seq: impl Iterator<Item = usize>, n: usize) -> Vec<usize> {
    let mut map = vec![usize::MAX; n];
    let mut next = 0;
    seq.map(|r| {
        if map[r] == usize::MAX {
            map[r] = next;
            next += 1;
        }
        map[r]
    })
    .collect()
}

impl FromStr for DoubleOccurrenceWord {
    type Err = Error;

    /// Every non-whitespace character is one letter, so `"adbacbdc"` parses to
    /// the 4-letter word a d b a c b d c.
    fn from_str(s: &str) -> Result<Self> {
        Self::new(s.chars().filter(|c| !c.is_whitespace()).map(String::from))
    }
}

impl fmt::Display for DoubleOccurrenceWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let single = self.letters.iter().all(|l| l.chars().count() == 1);
        let sep = if single { "" } else { " " };
        write!(f, "{}", self.letters.join(sep))
    }
}

#[derive(Serialize, Deserialize)]
struct WordJson {
    letters: Vec<String>,
}

impl Serialize for DoubleOccurrenceWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        WordJson {
            letters: self.letters.clone(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for DoubleOccurrenceWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let raw = WordJson::deserialize(deserializer)?;
        DoubleOccurrenceWord::new(raw.letters).map_err(serde::de::Error::custom)
    }
}

/// An incidence of an edge on a vertex; `slot` is in `1..=4`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct HalfEdge {
    pub vertex: usize,
    pub slot: u8,
}

impl HalfEdge {
    pub fn new(vertex: usize, slot: u8) -> Self {
        debug_assert!((1..=4).contains(&slot));
        Self { vertex, slot }
    }

    /// Row of this half-edge in a `4n x 4n` covariance matrix.
    pub fn majorana_index(self) -> usize {
        4 * self.vertex + (self.slot as usize - 1)
    }
}

/// An Eulerian tour of the 4-regular multigraph described by a word, with the
/// half-edge labelling described at module level.
#[derive(Debug, Clone, PartialEq)]
pub struct EulerTour {
    word: DoubleOccurrenceWord,
    half_edges: Vec<HalfEdge>,
    positions: Vec<usize>,
}

/// Builds the labelled tour traced out by `word`, starting at its first letter.
pub fn tour_from_word(word: &DoubleOccurrenceWord) -> Result<EulerTour> {
    if word.is_empty() {
        return Err(Error::EmptyWord);
    }
    if let Some(position) = word.self_loop() {
        return Err(Error::SelfLoop {
            letter: word.letters()[position].clone(),
            position,
        });
    }
    if !word.is_alternance_connected() {
        return Err(Error::Disconnected);
    }
    Ok(trace_tour(word))
}

/// The labelled tour of any word, including loops and disconnected alternance graphs.
pub(crate) fn trace_tour(word: &DoubleOccurrenceWord) -> EulerTour {
    let n = word.vertex_count();
    let ranks = word.ranks();
    let mut half_edges = Vec::with_capacity(4 * n);
    let mut visits = vec![0u8; n];
    half_edges.push(HalfEdge::new(0, 4));
    for &v in &ranks[1..] {
        let (enter, leave) = if v == 0 {
            (1, 2)
        } else if visits[v] == 0 {
            (1, 2)
        } else {
            (3, 4)
        };
        visits[v] += 1;
        half_edges.push(HalfEdge::new(v, enter));
        half_edges.push(HalfEdge::new(v, leave));
    }
    half_edges.push(HalfEdge::new(0, 3));

    let mut positions = vec![usize::MAX; 4 * n];
    for (pos, h) in half_edges.iter().enumerate() {
        positions[h.majorana_index()] = pos;
    }
    EulerTour {
        word: word.clone(),
        half_edges,
        positions,
    }
}

impl EulerTour {
    pub fn word(&self) -> &DoubleOccurrenceWord {
        &self.word
    }

    pub fn vertex_count(&self) -> usize {
        self.word.vertex_count()
    }

    pub fn start_vertex(&self) -> usize {
        0
    }

    pub fn half_edges(&self) -> &[HalfEdge] {
        &self.half_edges
    }

    /// Directed edges in tour order; the first is `(h_1^4, h_2^1)`.
    pub fn directed_edges(&self) -> Vec<(HalfEdge, HalfEdge)> {
        self.half_edges
            .chunks_exact(2)
            .map(|pair| (pair[0], pair[1]))
            .collect()
    }

    /// Vertex transitions `(enter, leave)`, including the closing `h_1^3 -> h_1^4`.
    pub fn transitions(&self) -> Vec<(HalfEdge, HalfEdge)> {
        let len = self.half_edges.len();
        (0..len / 2)
            .map(|k| (self.half_edges[2 * k + 1], self.half_edges[(2 * k + 2) % len]))
            .collect()
    }

    /// Position of a half-edge in the tour.
    pub fn position(&self, h: HalfEdge) -> usize {
        self.positions[h.majorana_index()]
    }

    /// Vertex sequence read off the tour; equals the generating word's ranks.
    pub fn vertex_sequence(&self) -> Vec<usize> {
        let mut seq = vec![self.half_edges[0].vertex];
        let len = self.half_edges.len();
        seq.extend((0..len / 2 - 1).map(|k| self.half_edges[2 * k + 1].vertex));
        seq
    }

    pub fn split_at(&self, vertex: &str) -> Result<CycleSplit> {
        let v = self
            .word
            .index_of(vertex)
            .ok_or_else(|| Error::UnknownVertex(vertex.to_string()))?;
        Ok(self.split_at_index(v))
    }

    /// Reroutes the tour at `v` through `1 -> 4` and `3 -> 2`, yielding two
    /// edge-disjoint cycles.
    pub fn split_at_index(&self, v: usize) -> CycleSplit {
        let arc = |from: u8, to: u8| {
            let start = self.position(HalfEdge::new(v, from));
            let end = self.position(HalfEdge::new(v, to));
            let len = self.half_edges.len();
            let count = (end + len - start) % len + 1;
            (0..count)
                .map(|i| self.half_edges[(start + i) % len])
                .collect::<Vec<_>>()
        };
        CycleSplit {
            pivot: v,
            cycle1: arc(4, 1),
            cycle2: arc(2, 3),
        }
    }

    pub fn dump(&self) -> TourDump {
        let named = |h: HalfEdge| NamedHalfEdge {
            v: self.word.vertices()[h.vertex].clone(),
            slot: h.slot,
        };
        TourDump {
            half_edges: self.half_edges.iter().map(|&h| named(h)).collect(),
            edges: self
                .directed_edges()
                .into_iter()
                .map(|(a, b)| [named(a), named(b)])
                .collect(),
        }
    }
}

/// The two cycles obtained by splitting a tour at `pivot`.
///
/// Each cycle is stored as a half-edge subsequence of the tour that starts
/// with an outgoing half-edge of the pivot and ends with an incoming one:
/// `cycle1` runs from `h^4` to `h^1` and `cycle2` from `h^2` to `h^3`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CycleSplit {
    pub pivot: usize,
    pub cycle1: Vec<HalfEdge>,
    pub cycle2: Vec<HalfEdge>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Cycle {
    First,
    Second,
}

impl CycleSplit {
    pub fn cycle(&self, which: Cycle) -> &[HalfEdge] {
        match which {
            Cycle::First => &self.cycle1,
            Cycle::Second => &self.cycle2,
        }
    }

    pub fn edges(&self, which: Cycle) -> Vec<(HalfEdge, HalfEdge)> {
        self.cycle(which)
            .chunks_exact(2)
            .map(|pair| (pair[0], pair[1]))
            .collect()
    }

    /// Transitions of the cycle, ending with the rerouted pivot transition.
    pub fn transitions(&self, which: Cycle) -> Vec<(HalfEdge, HalfEdge)> {
        let c = self.cycle(which);
        let len = c.len();
        (0..len / 2)
            .map(|k| (c[2 * k + 1], c[(2 * k + 2) % len]))
            .collect()
    }

    /// Number of times the cycle passes through `vertex`.
    pub fn visits(&self, which: Cycle, vertex: usize) -> usize {
        self.transitions(which)
            .iter()
            .filter(|(h, _)| h.vertex == vertex)
            .count()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedHalfEdge {
    pub v: String,
    pub slot: u8,
}

/// JSON form of a tour: `{"half_edges": [...], "edges": [[from, to], ...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TourDump {
    pub half_edges: Vec<NamedHalfEdge>,
    pub edges: Vec<[NamedHalfEdge; 2]>,
}

/// Every loop-free word on `n` letters with a connected alternance graph, one
/// per class under rotation, reversal and renaming.
pub fn enumerate_words(n: usize) -> Vec<DoubleOccurrenceWord> {
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let mut seen = HashSet::new();
    let mut word = Vec::with_capacity(2 * n);
    let mut counts = vec![0u8; n];
    enumerate_rgs(n, &mut word, &mut counts, 0, &mut |ranks| {
        let Ok(w) = DoubleOccurrenceWord::from_ranks(ranks) else {
            return;
        };
        if w.self_loop().is_some() || !w.is_alternance_connected() {
            return;
        }
        let canonical = w.canonical_ranks();
        if seen.insert(canonical.clone()) {
            if let Ok(c) = DoubleOccurrenceWord::from_ranks(&canonical) {
                out.push(c);
            }
        }
    });
    out
}

fn enumerate_rgs(
    n: usize,
    word: &mut Vec<usize>,
    counts: &mut [u8],
    opened: usize,
    emit: &mut dyn FnMut(&[usize]),
) {
    if word.len() == 2 * n {
        emit(word);
        return;
    }
    let limit = (opened + 1).min(n);
    for r in 0..limit {
        if counts[r] == 2 || word.last() == Some(&r) {
            continue;
        }
        counts[r] += 1;
        word.push(r);
        enumerate_rgs(n, word, counts, opened.max(r + 1), emit);
        word.pop();
        counts[r] -= 1;
    }
}

/// Draws a uniformly shuffled loop-free word on `n >= 2` letters with a
/// connected alternance graph, by rejection.
pub fn random_connected_word<R: Rng + ?Sized>(n: usize, rng: &mut R) -> DoubleOccurrenceWord {
    assert!(n >= 2, "a connected loop-free word needs at least two letters");
    let mut ranks: Vec<usize> = (0..n).flat_map(|r| [r, r]).collect();
    loop {
        ranks.shuffle(rng);
        let w = DoubleOccurrenceWord::from_ranks(&relabel_by_first_appearance(ranks.iter().copied(), n))
            .expect("every rank occurs twice");
        if w.self_loop().is_none() && w.is_alternance_connected() {
            return w;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn labels(tour: &EulerTour, seq: &[HalfEdge]) -> String {
        seq.iter()
            .map(|h| format!("{}{}", tour.word().vertices()[h.vertex], h.slot))
            .collect::<Vec<_>>()
            .join(" ")
    }

    #[test]
    fn vwvw_labelling() {
        let word: DoubleOccurrenceWord = "vwvw".parse().unwrap();
        let tour = tour_from_word(&word).unwrap();
        assert_eq!(labels(&tour, tour.half_edges()), "v4 w1 w2 v1 v2 w3 w4 v3");
    }

    #[test]
    fn c4_labelling() {
        let word: DoubleOccurrenceWord = "adbacbdc".parse().unwrap();
        let tour = tour_from_word(&word).unwrap();
        assert_eq!(
            labels(&tour, tour.half_edges()),
            "a4 d1 d2 b1 b2 a1 a2 c1 c2 b3 b4 d3 d4 c3 c4 a3"
        );
        assert_eq!(tour.vertex_sequence(), word.ranks());
    }

    #[test]
    fn c4_splits() {
        let word: DoubleOccurrenceWord = "adbacbdc".parse().unwrap();
        let tour = tour_from_word(&word).unwrap();
        let b = tour.split_at("b").unwrap();
        assert_eq!(labels(&tour, &b.cycle2), "b2 a1 a2 c1 c2 b3");
        let a = tour.split_at("a").unwrap();
        assert_eq!(labels(&tour, &a.cycle2), "a2 c1 c2 b3 b4 d3 d4 c3 c4 a3");
        let c = tour.split_at("c").unwrap();
        assert_eq!(labels(&tour, &c.cycle2), "c2 b3 b4 d3 d4 c3");
        let d = tour.split_at("d").unwrap();
        assert_eq!(labels(&tour, &d.cycle2), "d2 b1 b2 a1 a2 c1 c2 b3 b4 d3");
        assert_eq!(tour.split_at("z").unwrap_err(), Error::UnknownVertex("z".into()));
    }

    #[test]
    fn vwvw_split_visits_each_once() {
        let tour = tour_from_word(&"vwvw".parse().unwrap()).unwrap();
        let split = tour.split_at("v").unwrap();
        for which in [Cycle::First, Cycle::Second] {
            assert_eq!(split.visits(which, 0), 1);
            assert_eq!(split.visits(which, 1), 1);
        }
    }

    #[test]
    fn rejects_bad_words() {
        assert_eq!(
            "abca".parse::<DoubleOccurrenceWord>().unwrap_err(),
            Error::NotDoubleOccurrence {
                letter: "b".into(),
                count: 1
            }
        );
        let vvww: DoubleOccurrenceWord = "vvww".parse().unwrap();
        assert!(matches!(tour_from_word(&vvww), Err(Error::SelfLoop { .. })));
        // wraparound pair (last, first)
        let wrap: DoubleOccurrenceWord = "abcbca".parse().unwrap();
        assert!(matches!(
            tour_from_word(&wrap),
            Err(Error::SelfLoop { position: 5, .. })
        ));
        let two_blocks: DoubleOccurrenceWord = "ababcdcd".parse().unwrap();
        assert_eq!(tour_from_word(&two_blocks).unwrap_err(), Error::Disconnected);
        let empty = DoubleOccurrenceWord::new(Vec::<String>::new()).unwrap();
        assert_eq!(tour_from_word(&empty).unwrap_err(), Error::EmptyWord);
    }

    #[test]
    fn multi_character_letters() {
        let w = DoubleOccurrenceWord::new(["q1", "q2", "q1", "q2"]).unwrap();
        assert_eq!(w.vertices(), ["q1", "q2"]);
        assert_eq!(w.to_string(), "q1 q2 q1 q2");
        let json = serde_json::to_string(&w).unwrap();
        assert_eq!(json, r#"{"letters":["q1","q2","q1","q2"]}"#);
        let back: DoubleOccurrenceWord = serde_json::from_str(&json).unwrap();
        assert_eq!(back, w);
        assert!(serde_json::from_str::<DoubleOccurrenceWord>(r#"{"letters":["a"]}"#).is_err());
    }

    #[test]
    fn tour_dump_json() {
        let tour = tour_from_word(&"vwvw".parse().unwrap()).unwrap();
        let json = serde_json::to_value(tour.dump()).unwrap();
        assert_eq!(json["half_edges"][0], serde_json::json!({"v": "v", "slot": 4}));
        assert_eq!(
            json["edges"][0],
            serde_json::json!([{"v": "v", "slot": 4}, {"v": "w", "slot": 1}])
        );
        assert_eq!(json["edges"].as_array().unwrap().len(), 4);
    }

    #[test]
    fn enumeration_counts() {
        // n = 2 has only abab; n = 3 has abcabc and abacbc up to symmetry.
        assert_eq!(enumerate_words(1).len(), 0);
        assert_eq!(enumerate_words(2).len(), 1);
        let three: Vec<String> = enumerate_words(3).iter().map(|w| w.to_string()).collect();
        assert_eq!(three.len(), 2, "{three:?}");
        for w in enumerate_words(4) {
            assert!(tour_from_word(&w).is_ok());
        }
    }

    #[test]
    fn canonical_form_is_class_invariant() {
        let w: DoubleOccurrenceWord = "adbacbdc".parse().unwrap();
        let rotated: DoubleOccurrenceWord = "bacbdcad".parse().unwrap();
        let reversed: DoubleOccurrenceWord = "cdbcabda".parse().unwrap();
        assert_eq!(w.canonical_ranks(), rotated.canonical_ranks());
        assert_eq!(w.canonical_ranks(), reversed.canonical_ranks());
    }
}

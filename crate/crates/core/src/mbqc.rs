//! Adaptive single-qubit measurements on circle graph states.
//!
//! A step's outcome is drawn from its exact two-outcome conditional, which is a
//! ratio of two marginals; no rejection sampling is involved.

use std::collections::{BTreeMap, HashSet};

use nalgebra::{Matrix2, Matrix3};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gaussian::{
    check_unitary, marginal_prob, matching_covariance, BlochVector, MatchingCovariance, Measured,
    Outcome,
};
use crate::multigraph::{tour_from_word, DoubleOccurrenceWord};

/// Direction tolerance: measurement directions must have `| |b| - 1 | <= 1e-9`.
pub const DIRECTION_TOLERANCE: f64 = 1e-9;
/// A prefix whose probability is at most this is treated as impossible.
pub const ZERO_PREFIX: f64 = 1e-12;
pub const DISTRIBUTION_LIMIT: usize = 20;

/// How a step picks its measurement direction.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BasisResolver {
    Static(BlochVector),
    /// Keyed by the outcomes of all earlier steps, as a string over `+`/`-`.
    Adaptive(BTreeMap<String, BlochVector>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PlanStep {
    pub qubit: String,
    pub basis: BasisResolver,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct MeasurementPlan {
    pub steps: Vec<PlanStep>,
}

pub fn prefix_key(prefix: &[Outcome]) -> String {
    prefix.iter().map(|o| o.symbol()).collect()
}

impl MeasurementPlan {
    /// All steps with fixed directions.
    pub fn static_plan<S: Into<String>>(steps: impl IntoIterator<Item = (S, BlochVector)>) -> Self {
        Self {
            steps: steps
                .into_iter()
                .map(|(q, b)| PlanStep {
                    qubit: q.into(),
                    basis: BasisResolver::Static(b),
                })
                .collect(),
        }
    }
}

/// A measurement schedule: which qubit each step measures, and the direction
/// for a given history of outcomes. Implementations must be deterministic.
pub trait Schedule {
    fn len(&self) -> usize;
    fn qubit(&self, step: usize) -> &str;
    fn direction(&self, step: usize, prefix: &[Outcome]) -> Result<BlochVector>;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

impl Schedule for MeasurementPlan {
    fn len(&self) -> usize {
        self.steps.len()
    }

    fn qubit(&self, step: usize) -> &str {
        &self.steps[step].qubit
    }

    fn direction(&self, step: usize, prefix: &[Outcome]) -> Result<BlochVector> {
        match &self.steps[step].basis {
            BasisResolver::Static(b) => Ok(*b),
            BasisResolver::Adaptive(table) => {
                let key = prefix_key(prefix);
                table
                    .get(&key)
                    .copied()
                    .ok_or(Error::UnreachablePrefix(key))
            }
        }
    }
}

/// A schedule whose directions come from a function of the step and prefix.
pub struct FnSchedule<F> {
    pub qubits: Vec<String>,
    pub resolve: F,
}

impl<F: Fn(usize, &[Outcome]) -> BlochVector> Schedule for FnSchedule<F> {
    fn len(&self) -> usize {
        self.qubits.len()
    }

    fn qubit(&self, step: usize) -> &str {
        &self.qubits[step]
    }

    fn direction(&self, step: usize, prefix: &[Outcome]) -> Result<BlochVector> {
        Ok((self.resolve)(step, prefix))
    }
}

/// Local unitaries applied to the resource state, keyed by qubit.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct LocalFrame {
    pub unitaries: BTreeMap<String, Matrix2<Complex64>>,
}

impl LocalFrame {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with(mut self, qubit: impl Into<String>, u: Matrix2<Complex64>) -> Result<Self> {
        check_unitary(&u)?;
        self.unitaries.insert(qubit.into(), u);
        Ok(self)
    }

    pub fn hadamard() -> Matrix2<Complex64> {
        let s = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        Matrix2::new(s, s, s, -s)
    }
}

#[derive(Serialize, Deserialize)]
struct FrameJson(BTreeMap<String, [[[f64; 2]; 2]; 2]>);

impl Serialize for LocalFrame {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let map = self
            .unitaries
            .iter()
            .map(|(q, u)| {
                let entry = |r: usize, c: usize| [u[(r, c)].re, u[(r, c)].im];
                (q.clone(), [[entry(0, 0), entry(0, 1)], [entry(1, 0), entry(1, 1)]])
            })
            .collect();
        FrameJson(map).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for LocalFrame {
    /// `{"qubit": [[[re, im], [re, im]], [[re, im], [re, im]]]}`, row-major.
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let FrameJson(map) = FrameJson::deserialize(deserializer)?;
        let mut frame = LocalFrame::new();
        for (q, rows) in map {
            let e = |r: usize, c: usize| Complex64::new(rows[r][c][0], rows[r][c][1]);
            let u = Matrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1));
            frame = frame.with(q, u).map_err(serde::de::Error::custom)?;
        }
        Ok(frame)
    }
}

/// `R_ij = ½ tr(σ_i U σ_j U†)`, so that `U (b·σ) U† = (R b)·σ`.
pub fn bloch_rotation(u: &Matrix2<Complex64>) -> Matrix3<f64> {
    let o = Complex64::new(0.0, 0.0);
    let l = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let sigma = [
        Matrix2::new(o, l, l, o),
        Matrix2::new(o, -i, i, o),
        Matrix2::new(l, o, o, -l),
    ];
    Matrix3::from_fn(|r, c| (sigma[r] * u * sigma[c] * u.adjoint()).trace().re / 2.0)
}

/// One resolved and sampled step.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TranscriptStep {
    pub qubit: String,
    pub direction: BlochVector,
    pub outcome: Outcome,
    /// Conditional probability of this outcome given the earlier ones.
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Transcript {
    pub steps: Vec<TranscriptStep>,
    pub joint_probability: f64,
    pub seed: u64,
    pub stream: u64,
}

/// Exact measurement engine for the circle graph state of one word, optionally
/// rotated by a local frame.
#[derive(Debug, Clone)]
pub struct Simulator {
    word: DoubleOccurrenceWord,
    psi: MatchingCovariance,
    /// Per vertex: rotation taking a lab-frame direction to the unrotated state's frame.
    pullback: Vec<Option<Matrix3<f64>>>,
}

impl Simulator {
    pub fn new(word: &DoubleOccurrenceWord) -> Result<Self> {
        Self::with_frame(word, None)
    }

    pub fn with_frame(word: &DoubleOccurrenceWord, frame: Option<&LocalFrame>) -> Result<Self> {
        let tour = tour_from_word(word)?;
        let psi = matching_covariance(&tour);
        let mut pullback = vec![None; word.vertex_count()];
        if let Some(frame) = frame {
            for (q, u) in &frame.unitaries {
                let v = word
                    .index_of(q)
                    .ok_or_else(|| Error::UnknownQubit(q.clone()))?;
                pullback[v] = Some(bloch_rotation(u).transpose());
            }
        }
        Ok(Self {
            word: word.clone(),
            psi,
            pullback,
        })
    }

    pub fn word(&self) -> &DoubleOccurrenceWord {
        &self.word
    }

    pub fn covariance(&self) -> &MatchingCovariance {
        &self.psi
    }

    pub fn num_qubits(&self) -> usize {
        self.word.vertex_count()
    }

    pub fn qubit_index(&self, qubit: &str) -> Result<usize> {
        self.word
            .index_of(qubit)
            .ok_or_else(|| Error::UnknownQubit(qubit.to_string()))
    }

    fn check_direction(qubit: &str, b: BlochVector) -> Result<()> {
        if (b.norm() - 1.0).abs() > DIRECTION_TOLERANCE {
            return Err(Error::InvalidDirection {
                qubit: qubit.to_string(),
                norm: b.norm(),
            });
        }
        // renormalised below; the Gaussian formulas want exactly unit vectors
        Ok(())
    }

    fn resolve(&self, qubit: &str, direction: BlochVector, outcome: Outcome) -> Result<Measured> {
        Self::check_direction(qubit, direction)?;
        let v = self.qubit_index(qubit)?;
        let unit = direction.scaled(1.0 / direction.norm());
        let pulled = match &self.pullback[v] {
            Some(r) => {
                let b = unit.rotated(r);
                b.scaled(1.0 / b.norm())
            }
            None => unit,
        };
        Ok(Measured::new(v, pulled, outcome))
    }

    /// Probability that the listed qubits give the listed outcomes.
    pub fn marginal(&self, measured: &[(&str, BlochVector, Outcome)]) -> Result<f64> {
        let resolved: Vec<Measured> = measured
            .iter()
            .map(|&(q, b, o)| self.resolve(q, b, o))
            .collect::<Result<_>>()?;
        Ok(marginal_prob(&self.psi, &resolved)?.value)
    }

    /// `(p(+ | prefix), p(- | prefix))` for measuring `next` along `direction`.
    pub fn conditional(
        &self,
        prefix: &[(&str, BlochVector, Outcome)],
        next: (&str, BlochVector),
    ) -> Result<(f64, f64)> {
        let mut resolved: Vec<Measured> = prefix
            .iter()
            .map(|&(q, b, o)| self.resolve(q, b, o))
            .collect::<Result<_>>()?;
        self.conditional_resolved(&mut resolved, next.0, next.1)
    }

    fn conditional_resolved(
        &self,
        prefix: &mut Vec<Measured>,
        qubit: &str,
        direction: BlochVector,
    ) -> Result<(f64, f64)> {
        let base = marginal_prob(&self.psi, prefix)?.value;
        if base <= ZERO_PREFIX {
            return Err(Error::ZeroPrefixProbability);
        }
        let mut branch = |outcome| -> Result<f64> {
            prefix.push(self.resolve(qubit, direction, outcome)?);
            let p = marginal_prob(&self.psi, prefix);
            prefix.pop();
            Ok(p?.value / base)
        };
        let plus = branch(Outcome::Plus)?;
        let minus = branch(Outcome::Minus)?;
        Ok((plus, minus))
    }

    fn validate(&self, schedule: &dyn Schedule) -> Result<()> {
        let mut seen = HashSet::new();
        for step in 0..schedule.len() {
            let q = schedule.qubit(step);
            self.qubit_index(q)?;
            if !seen.insert(q.to_string()) {
                return Err(Error::DuplicateVertex(q.to_string()));
            }
        }
        Ok(())
    }

    /// One run of the schedule with outcomes drawn from `ChaCha8Rng` seeded by
    /// `seed` on stream `stream`: each step draws one `f64` `u` in `[0, 1)` and
    /// records `+1` iff `u < p(+)`.
    pub fn sample_run(&self, schedule: &dyn Schedule, seed: u64, stream: u64) -> Result<Transcript> {
        self.validate(schedule)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        rng.set_stream(stream);
        let mut prefix: Vec<Measured> = Vec::with_capacity(schedule.len());
        let mut outcomes: Vec<Outcome> = Vec::with_capacity(schedule.len());
        let mut steps = Vec::with_capacity(schedule.len());
        let mut joint = 1.0;
        for step in 0..schedule.len() {
            let qubit = schedule.qubit(step);
            let direction = schedule.direction(step, &outcomes)?;
            let (plus, minus) = self.conditional_resolved(&mut prefix, qubit, direction)?;
            let p_plus = plus / (plus + minus);
            let u: f64 = rng.random();
            let (outcome, probability) = if u < p_plus {
                (Outcome::Plus, plus)
            } else {
                (Outcome::Minus, minus)
            };
            prefix.push(self.resolve(qubit, direction, outcome)?);
            outcomes.push(outcome);
            joint *= probability;
            steps.push(TranscriptStep {
                qubit: qubit.to_string(),
                direction,
                outcome,
                probability,
            });
        }
        Ok(Transcript {
            steps,
            joint_probability: joint,
            seed,
            stream,
        })
    }

    /// Joint distribution over all outcome strings (`+`/`-` in step order).
    /// Outcomes below a zero-probability prefix get probability 0 and their
    /// adaptive entries are not consulted.
    pub fn exact_distribution(&self, schedule: &dyn Schedule) -> Result<BTreeMap<String, f64>> {
        self.validate(schedule)?;
        if schedule.len() > DISTRIBUTION_LIMIT {
            return Err(Error::TooLarge {
                what: "exact distribution",
                size: schedule.len(),
                limit: DISTRIBUTION_LIMIT,
            });
        }
        let mut out = BTreeMap::new();
        let mut prefix = Vec::new();
        let mut outcomes = Vec::new();
        self.distribution_rec(schedule, &mut prefix, &mut outcomes, 1.0, &mut out)?;
        Ok(out)
    }

    fn distribution_rec(
        &self,
        schedule: &dyn Schedule,
        prefix: &mut Vec<Measured>,
        outcomes: &mut Vec<Outcome>,
        p: f64,
        out: &mut BTreeMap<String, f64>,
    ) -> Result<()> {
        let step = outcomes.len();
        if step == schedule.len() {
            out.insert(prefix_key(outcomes), p);
            return Ok(());
        }
        if p <= ZERO_PREFIX {
            for tail in 0..1usize << (schedule.len() - step) {
                let mut key = prefix_key(outcomes);
                key.extend((0..schedule.len() - step).map(|k| if (tail >> k) & 1 == 0 { '+' } else { '-' }));
                out.insert(key, 0.0);
            }
            return Ok(());
        }
        let qubit = schedule.qubit(step);
        let direction = schedule.direction(step, outcomes)?;
        for outcome in [Outcome::Plus, Outcome::Minus] {
            prefix.push(self.resolve(qubit, direction, outcome)?);
            outcomes.push(outcome);
            let joint = marginal_prob(&self.psi, prefix)?.value;
            self.distribution_rec(schedule, prefix, outcomes, joint, out)?;
            outcomes.pop();
            prefix.pop();
        }
        Ok(())
    }
}

/// Convenience wrapper: one run on `word` under `plan`.
pub fn sample_run(
    word: &DoubleOccurrenceWord,
    plan: &MeasurementPlan,
    frame: Option<&LocalFrame>,
    seed: u64,
) -> Result<Transcript> {
    Simulator::with_frame(word, frame)?.sample_run(plan, seed, 0)
}

pub fn exact_distribution(
    word: &DoubleOccurrenceWord,
    plan: &MeasurementPlan,
) -> Result<BTreeMap<String, f64>> {
    Simulator::new(word)?.exact_distribution(plan)
}

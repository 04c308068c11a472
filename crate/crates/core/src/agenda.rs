//! Agendas, credence functions, weights and profiles.
//!
//! An agenda is a finite set of propositions evaluated at finitely many
//! possible worlds. It is stored as a truth table whose columns are the
//! worlds; the coherent credence functions over it are exactly the convex
//! combinations of those columns. On a partition this reduces to the usual
//! sum-to-one test.

use std::ops::Deref;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hull::{project_onto_hull, HullProjection};

/// Default tolerance for coherence membership.
pub const DEFAULT_COHERENCE_TOL: f64 = 1e-9;

/// Tolerance for the sum of a [`WeightVector`].
pub const WEIGHT_SUM_TOL: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Agenda {
    propositions: Vec<String>,
    /// `worlds[t][j]` is the truth value of proposition `j` at world `t`.
    worlds: Vec<Vec<bool>>,
    partition: bool,
}

impl Agenda {
    /// Builds an agenda from labels and an `m × w` truth table (rows are
    /// propositions, columns are worlds).
    ///
    /// Worlds are put in canonical order: columns sorted in descending
    /// lexicographic order, so that on a partition world `t` is the world in
    /// which proposition `t` is true.
    pub fn new(propositions: Vec<String>, truth_table: &[Vec<u8>]) -> Result<Self> {
        let m = truth_table.len();
        if m == 0 {
            return Err(Error::InvalidAgenda("truth table has no rows".into()));
        }
        if propositions.len() != m {
            return Err(Error::InvalidAgenda(format!(
                "{} labels for {} truth-table rows",
                propositions.len(),
                m
            )));
        }
        let w = truth_table[0].len();
        if w == 0 {
            return Err(Error::InvalidAgenda("truth table has no worlds".into()));
        }
        for (j, row) in truth_table.iter().enumerate() {
            if row.len() != w {
                return Err(Error::InvalidAgenda(format!("row {j} has {} entries, expected {w}", row.len())));
            }
            if let Some(bad) = row.iter().find(|&&v| v > 1) {
                return Err(Error::InvalidAgenda(format!("row {j} contains non-binary entry {bad}")));
            }
        }
        let mut worlds: Vec<Vec<bool>> =
            (0..w).map(|t| truth_table.iter().map(|row| row[t] == 1).collect()).collect();
        worlds.sort_by(|a, b| b.cmp(a));
        if let Some(pos) = worlds.windows(2).position(|p| p[0] == p[1]) {
            return Err(Error::DegenerateAgenda(format!(
                "worlds {} and {} have identical truth values",
                pos,
                pos + 1
            )));
        }
        let partition = worlds.iter().all(|col| col.iter().filter(|&&v| v).count() == 1)
            && (0..m).all(|j| worlds.iter().any(|col| col[j]));
        Ok(Agenda { propositions, worlds, partition })
    }

    /// Builds an agenda with default labels `X1, X2, …`.
    pub fn from_truth_table(truth_table: &[Vec<u8>]) -> Result<Self> {
        let labels = (1..=truth_table.len()).map(|j| format!("X{j}")).collect();
        Agenda::new(labels, truth_table)
    }

    /// The `m`-cell partition with labels `X1, …, Xm`.
    pub fn partition(m: usize) -> Self {
        assert!(m >= 1, "a partition needs at least one cell");
        let table: Vec<Vec<u8>> = (0..m).map(|i| (0..m).map(|j| u8::from(i == j)).collect()).collect();
        Agenda::from_truth_table(&table).expect("identity table is a valid agenda")
    }

    /// A partition with the given cell labels.
    pub fn labelled_partition<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Self {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut agenda = Agenda::partition(labels.len());
        agenda.propositions = labels;
        agenda
    }

    pub fn propositions(&self) -> &[String] {
        &self.propositions
    }

    pub fn num_propositions(&self) -> usize {
        self.propositions.len()
    }

    pub fn num_worlds(&self) -> usize {
        self.worlds.len()
    }

    pub fn is_partition(&self) -> bool {
        self.partition
    }

    /// Truth value of proposition `prop` at world `world`.
    pub fn truth(&self, prop: usize, world: usize) -> bool {
        self.worlds[world][prop]
    }

    /// Truth table in row-major form (propositions × worlds), canonical order.
    pub fn truth_table(&self) -> Vec<Vec<u8>> {
        (0..self.num_propositions())
            .map(|j| self.worlds.iter().map(|col| u8::from(col[j])).collect())
            .collect()
    }

    /// The columns of the truth table as real vectors.
    pub fn world_vectors(&self) -> Vec<Vec<f64>> {
        self.worlds.iter().map(|col| col.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()).collect()
    }

    /// Maps a distribution over worlds to the credence it induces.
    pub fn credence_from_worlds(&self, q: &[f64]) -> Result<Credence> {
        check_len(self.num_worlds(), q.len())?;
        let values = (0..self.num_propositions())
            .map(|j| self.worlds.iter().zip(q).filter(|(col, _)| col[j]).map(|(_, &p)| p).sum())
            .collect();
        Ok(Credence::clamped(values))
    }

    /// The omniscient credence function at `world`.
    pub fn omniscient(&self, world: usize) -> Result<Credence> {
        let col = self.worlds.get(world).ok_or(Error::InvalidWorld { world, worlds: self.num_worlds() })?;
        Ok(Credence(col.iter().map(|&b| if b { 1.0 } else { 0.0 }).collect()))
    }

    /// Whether `c` is coherent within `tol`.
    ///
    /// On partitions this is `|Σ c − 1| ≤ tol`. Otherwise `c` must lie within
    /// `tol` (max-norm) of the convex hull of the omniscient credences.
    pub fn is_coherent(&self, c: &Credence, tol: f64) -> Result<bool> {
        check_len(self.num_propositions(), c.len())?;
        if self.partition {
            let total: f64 = c.iter().sum();
            return Ok((total - 1.0).abs() <= tol);
        }
        let proj = self.coherent_projection(c)?;
        let gap = proj.point.iter().zip(c.iter()).map(|(p, v)| (p - v).abs()).fold(0.0, f64::max);
        Ok(gap <= tol)
    }

    /// Euclidean projection of `c` onto the coherent credences, computed on
    /// the world representation for any agenda.
    pub fn coherent_projection(&self, c: &[f64]) -> Result<HullProjection> {
        check_len(self.num_propositions(), c.len())?;
        Ok(project_onto_hull(&self.world_vectors(), c))
    }

    pub(crate) fn require_partition(&self) -> Result<()> {
        if self.partition {
            Ok(())
        } else {
            Err(Error::NotPartition)
        }
    }
}

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Shape { expected, found })
    }
}

/// A credence function: one value in `[0, 1]` per agenda proposition.
/// Values need not be coherent.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct Credence(Vec<f64>);

impl Credence {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidCredence("no values".into()));
        }
        if let Some((j, v)) = values.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(Error::InvalidCredence(format!("value {v} at position {j} is outside [0, 1]")));
        }
        Ok(Credence(values))
    }

    /// Clamps numerically computed values into `[0, 1]`.
    pub(crate) fn clamped(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| !v.is_nan()));
        Credence(values.into_iter().map(|v| v.clamp(0.0, 1.0)).collect())
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.0
    }

    /// Largest coordinatewise absolute difference.
    pub fn max_gap(&self, other: &Credence) -> f64 {
        self.0.iter().zip(&other.0).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
    }
}

impl Deref for Credence {
    type Target = [f64];

    fn deref(&self) -> &[f64] {
        &self.0
    }
}

impl TryFrom<Vec<f64>> for Credence {
    type Error = Error;

    fn try_from(values: Vec<f64>) -> Result<Self> {
        Credence::new(values)
    }
}

impl From<Credence> for Vec<f64> {
    fn from(c: Credence) -> Self {
        c.0
    }
}

/// Nonnegative agent weights summing to one.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightVector(Vec<f64>);

impl WeightVector {
    pub fn new(weights: Vec<f64>) -> Result<Self> {
        if weights.is_empty() {
            return Err(Error::InvalidWeights("no weights".into()));
        }
        if let Some(w) = weights.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = weights.iter().sum();
        if (total - 1.0).abs() > WEIGHT_SUM_TOL {
            return Err(Error::InvalidWeights(format!("weights sum to {total}, not 1")));
        }
        Ok(WeightVector(weights))
    }

    /// Rescales nonnegative weights to sum to one.
    pub fn normalized(raw: Vec<f64>) -> Result<Self> {
        if let Some(w) = raw.iter().find(|w| !w.is_finite() || **w < 0.0) {
            return Err(Error::InvalidWeights(format!("weight {w} is negative or not finite")));
        }
        let total: f64 = raw.iter().sum();
        if raw.is_empty() || total <= 0.0 {
            return Err(Error::InvalidWeights("weights must have a positive sum".into()));
        }
        Ok(WeightVector(raw.into_iter().map(|w| w / total).collect()))
    }

    pub fn uniform(n: usize) -> Self {
        assert!(n >= 1);
        WeightVector(vec![1.0 / n as f64; n])
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Agent {
    pub name: String,
    pub credence: Credence,
}

/// `n` agents over a shared agenda, with weights.
#[derive(Debug, Clone, PartialEq)]
pub struct Profile {
    agenda: Agenda,
    agents: Vec<Agent>,
    weights: WeightVector,
}

impl Profile {
    pub fn new(agenda: Agenda, agents: Vec<Agent>, weights: WeightVector) -> Result<Self> {
        if agents.is_empty() {
            return Err(Error::InvalidProfile("a profile needs at least one agent".into()));
        }
        if agents.len() != weights.len() {
            return Err(Error::InvalidProfile(format!(
                "{} agents but {} weights",
                agents.len(),
                weights.len()
            )));
        }
        for agent in &agents {
            check_len(agenda.num_propositions(), agent.credence.len())?;
        }
        Ok(Profile { agenda, agents, weights })
    }

    /// Builds a profile with generated names `agent-1, agent-2, …`.
    pub fn from_credences(agenda: Agenda, credences: Vec<Credence>, weights: WeightVector) -> Result<Self> {
        let agents = credences
            .into_iter()
            .enumerate()
            .map(|(k, credence)| Agent { name: format!("agent-{}", k + 1), credence })
            .collect();
        Profile::new(agenda, agents, weights)
    }

    pub fn agenda(&self) -> &Agenda {
        &self.agenda
    }

    pub fn agents(&self) -> &[Agent] {
        &self.agents
    }

    pub fn weights(&self) -> &WeightVector {
        &self.weights
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn credences(&self) -> impl Iterator<Item = &Credence> {
        self.agents.iter().map(|a| &a.credence)
    }

    /// Same agents, different weights.
    pub fn with_weights(&self, weights: WeightVector) -> Result<Self> {
        Profile::new(self.agenda.clone(), self.agents.clone(), weights)
    }

    /// Replaces every agent's credence by `f(credence)`.
    pub fn try_map<F>(&self, mut f: F) -> Result<Self>
    where
        F: FnMut(&Credence) -> Result<Credence>,
    {
        let agents = self
            .agents
            .iter()
            .map(|a| Ok(Agent { name: a.name.clone(), credence: f(&a.credence)? }))
            .collect::<Result<Vec<_>>>()?;
        Profile::new(self.agenda.clone(), agents, self.weights.clone())
    }
}

/// Outcome of a numeric minimization.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SolveReport {
    pub argmin: Credence,
    pub objective: f64,
    pub iterations: usize,
    /// Largest violated first-order or feasibility condition.
    pub residual: f64,
}

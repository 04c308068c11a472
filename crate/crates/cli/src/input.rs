//! Profile files: parsing with field-level diagnostics, and the emitted form.

use std::fs;
use std::path::Path;

use credpool::{Agenda, Agent, Credence, Profile, WeightVector};
use serde::{Deserialize, Serialize};

use crate::CliError;

/// Weight sums further than this from 1 are normalized with a warning.
const WEIGHT_WARN_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileFile {
    /// Set on emitted files to record what produced them.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub method: Option<String>,
    pub agenda: AgendaSpec,
    pub agents: Vec<AgentSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgendaSpec {
    pub propositions: Vec<PropositionSpec>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PropositionSpec {
    pub name: String,
    pub truth: Vec<u8>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AgentSpec {
    pub name: String,
    pub credences: Vec<f64>,
    pub weight: f64,
}

pub struct Loaded {
    pub file: ProfileFile,
    pub profile: Profile,
}

pub fn load(path: &Path, weights: Option<&[f64]>) -> Result<Loaded, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CliError::Input(format!("cannot read {}: {e}", path.display())))?;
    let file: ProfileFile =
        serde_json::from_str(&text).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    let profile = build(&file, weights).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    Ok(Loaded { file, profile })
}

fn build(file: &ProfileFile, weights: Option<&[f64]>) -> Result<Profile, String> {
    let props = &file.agenda.propositions;
    if props.is_empty() {
        return Err("agenda.propositions: no propositions".into());
    }
    let worlds = props[0].truth.len();
    for (i, p) in props.iter().enumerate() {
        if p.truth.len() != worlds {
            return Err(format!(
                "agenda.propositions[{i}].truth: expected {worlds} entries, found {}",
                p.truth.len()
            ));
        }
        if let Some(j) = p.truth.iter().position(|&t| t > 1) {
            return Err(format!("agenda.propositions[{i}].truth[{j}]: must be 0 or 1"));
        }
    }
    let table: Vec<Vec<u8>> = props.iter().map(|p| p.truth.clone()).collect();
    let agenda = Agenda::new(props.iter().map(|p| p.name.clone()).collect(), &table)
        .map_err(|e| format!("agenda: {e}"))?;

    if file.agents.is_empty() {
        return Err("agents: no agents".into());
    }
    let mut agents = Vec::with_capacity(file.agents.len());
    for (k, a) in file.agents.iter().enumerate() {
        if a.credences.len() != props.len() {
            return Err(format!(
                "agents[{k}].credences: expected {} values, found {}",
                props.len(),
                a.credences.len()
            ));
        }
        if let Some((j, v)) = a.credences.iter().enumerate().find(|(_, v)| !(0.0..=1.0).contains(*v)) {
            return Err(format!(
                "agents[{k}].credences[{j}]: {v} is outside [0, 1] (percentages are not accepted)"
            ));
        }
        let credence =
            Credence::new(a.credences.clone()).map_err(|e| format!("agents[{k}].credences: {e}"))?;
        agents.push(Agent { name: a.name.clone(), credence });
    }

    let (raw, source) = match weights {
        Some(w) => {
            if w.len() != agents.len() {
                return Err(format!("--weights: expected {} values, found {}", agents.len(), w.len()));
            }
            (w.to_vec(), "--weights")
        }
        None => (file.agents.iter().map(|a| a.weight).collect(), "agent weights"),
    };
    for (k, w) in raw.iter().enumerate() {
        if !w.is_finite() || *w < 0.0 {
            let field =
                if weights.is_some() { format!("--weights[{k}]") } else { format!("agents[{k}].weight") };
            return Err(format!("{field}: {w} is not a nonnegative number"));
        }
    }
    let weights = normalize_weights(raw, source)?;
    Profile::new(agenda, agents, weights).map_err(|e| e.to_string())
}

fn normalize_weights(raw: Vec<f64>, source: &str) -> Result<WeightVector, String> {
    let total: f64 = raw.iter().sum();
    if total <= 0.0 {
        return Err(format!("{source}: weights must have a positive sum"));
    }
    if let Ok(w) = WeightVector::new(raw.clone()) {
        return Ok(w);
    }
    if (total - 1.0).abs() > WEIGHT_WARN_TOL {
        eprintln!("warning: {source} sum to {total}; normalizing");
    }
    WeightVector::normalized(raw).map_err(|e| e.to_string())
}

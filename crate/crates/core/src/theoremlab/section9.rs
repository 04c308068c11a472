//! Pooling beyond partitions: two coherent agents with credences over three
//! atoms and the disjunction of the first two.

use serde::Serialize;

use crate::agenda::{Agenda, Credence, Profile, WeightVector};
use crate::divergence::{Direction, Generator};
use crate::error::Result;
use crate::pooling::{geometric_pool, linear_pool};
use crate::wcap::{pool_on_worlds, wcap_general, WorldPool};

/// Rows `X1`, `X2`, `X3` and `X1 ∨ X2` over three worlds.
pub fn disjunction_agenda() -> Agenda {
    Agenda::new(
        vec!["X1".into(), "X2".into(), "X3".into(), "X1 or X2".into()],
        &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1], vec![1, 1, 0]],
    )
    .expect("fixed agenda is valid")
}

/// Carmen and Donal, equally weighted.
pub fn carmen_donal() -> Profile {
    Profile::new(
        disjunction_agenda(),
        vec![
            crate::agenda::Agent {
                name: "Carmen".into(),
                credence: Credence::new(vec![0.2, 0.3, 0.5, 0.5]).expect("valid"),
            },
            crate::agenda::Agent {
                name: "Donal".into(),
                credence: Credence::new(vec![0.6, 0.3, 0.1, 0.9]).expect("valid"),
            },
        ],
        WeightVector::uniform(2),
    )
    .expect("fixed profile is valid")
}

/// The reported values, for comparison.
pub const LP_ROW: [f64; 4] = [0.4, 0.3, 0.3, 0.7];
pub const GP1_ROW: [f64; 4] = [0.398, 0.345, 0.257, 0.743];
pub const GP3_ROW: [f64; 4] = [0.390, 0.338, 0.272, 0.728];

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Section9Table {
    /// Linear pooling of the distributions over atoms.
    pub lp1: Credence,
    /// Linear pooling on the agenda itself.
    pub lp2: Credence,
    /// Coherent approximation under squared Euclidean distance.
    pub lp3: Credence,
    /// Geometric pooling of the distributions over atoms.
    pub gp1: Credence,
    /// Coherent approximation under KL divergence (first direction).
    pub gp3: Credence,
    /// Why normalized geometric pooling on the agenda itself is undefined.
    pub gp2_error: String,
}

pub fn run_section9() -> Result<Section9Table> {
    let profile = carmen_donal();
    let gp2_error = match geometric_pool(&profile) {
        Err(e) => e.to_string(),
        Ok(c) => format!("unexpectedly defined: {:?}", c.values()),
    };
    Ok(Section9Table {
        lp1: pool_on_worlds(&profile, WorldPool::Linear)?,
        lp2: linear_pool(&profile),
        lp3: wcap_general(&Generator::Sed, &profile, Direction::From)?.argmin,
        gp1: pool_on_worlds(&profile, WorldPool::Geometric)?,
        gp3: wcap_general(&Generator::Gkl, &profile, Direction::From)?.argmin,
        gp2_error,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64], tol: f64) -> bool {
        a.iter().zip(b).all(|(x, y)| (x - y).abs() <= tol)
    }

    #[test]
    fn agents_are_coherent() {
        let p = carmen_donal();
        for c in p.credences() {
            assert!(p.agenda().is_coherent(c, 1e-12).unwrap());
        }
    }

    #[test]
    fn table_rows() {
        let t = run_section9().unwrap();
        assert!(close(&t.lp1, &LP_ROW, 1e-6));
        assert!(close(&t.lp2, &LP_ROW, 1e-6));
        assert!(close(&t.lp3, &LP_ROW, 1e-6));
        assert!(close(&t.gp1, &GP1_ROW, 1e-3));
        assert!(close(&t.gp3, &GP3_ROW, 1e-3));
        assert!(t.gp2_error.contains("non-partition"));
    }
}

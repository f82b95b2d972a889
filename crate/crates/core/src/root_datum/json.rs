use serde::{Deserialize, Serialize};

use super::{DatumError, DatumKind, DiagramAutomorphism, RootDatum};

/// User-defined root datum document:
/// `{ "rank": m, "simple_roots": [[…]], "simple_coroots": [[…]], "sigma": [perm] }`.
///
/// `sigma_matrix` is needed for a nontrivial `sigma` unless the simple coroots
/// form a `Z`-basis of the lattice.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UserDatumSpec {
    pub rank: usize,
    pub simple_roots: Vec<Vec<i64>>,
    pub simple_coroots: Vec<Vec<i64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sigma_matrix: Option<Vec<Vec<i64>>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
}

impl UserDatumSpec {
    pub fn from_json(text: &str) -> Result<Self, DatumError> {
        serde_json::from_str(text).map_err(|e| DatumError::BadDocument(e.to_string()))
    }

    pub fn build(&self) -> Result<(RootDatum, DiagramAutomorphism), DatumError> {
        if self.rank == 0 {
            return Err(DatumError::BadDocument("rank must be positive".into()));
        }
        let datum = RootDatum::new(
            self.name.clone().unwrap_or_else(|| "custom".into()),
            DatumKind::Custom,
            self.rank,
            self.simple_roots.clone(),
            self.simple_coroots.clone(),
            None,
            false,
        )?;
        let sigma = match (&self.sigma, &self.sigma_matrix) {
            (None, None) => DiagramAutomorphism::identity(&datum),
            (Some(p), Some(m)) => DiagramAutomorphism::new(&datum, p.clone(), m.clone())?,
            (None, Some(m)) => {
                DiagramAutomorphism::new(&datum, (0..datum.semisimple_rank()).collect(), m.clone())?
            }
            (Some(p), None) => DiagramAutomorphism::from_permutation(&datum, p.clone())?,
        };
        Ok((datum, sigma))
    }
}

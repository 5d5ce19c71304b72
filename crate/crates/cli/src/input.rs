//! Input document schema.
//!
//! Inputs are JSON; complex numbers are [re, im] pairs. Exactly one of
//! `action` (concrete mode) or `symbolic` (symbolic mode) must be
//! populated.

use serde::Deserialize;

use crossedk::kgroup::{FgAbelianGroup, KPair};
use crossedk::{samples, ActionSpec, ComplexMatrix, FiniteAlgebra, ZnAction};

use crate::CliError;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputDocument {
    pub algebra: Option<AlgebraInput>,
    pub action: Option<ActionInput>,
    pub n: Option<usize>,
    pub mode: Mode,
    pub symbolic: Option<SymbolicInput>,
    pub tol: Option<f64>,
    pub seed: Option<u64>,
    pub xi_exponent: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Concrete,
    Symbolic,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AlgebraInput {
    pub blocks: Vec<usize>,
}

#[derive(Debug, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum ActionInput {
    Builtin {
        builtin: String,
    },
    Explicit {
        /// Rows of [re, im] entry pairs.
        unitary: Vec<Vec<[f64; 2]>>,
        block_permutation: Vec<usize>,
    },
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolicInput {
    pub a0: KPairInput,
    pub quotients: Vec<KPairInput>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KPairInput {
    pub k0: GroupInput,
    pub k1: GroupInput,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupInput {
    pub rank: usize,
    #[serde(default)]
    pub torsion: Vec<u64>,
}

impl GroupInput {
    pub fn to_group(&self) -> FgAbelianGroup {
        FgAbelianGroup::new(self.rank, &self.torsion)
    }
}

impl KPairInput {
    pub fn to_pair(&self) -> KPair {
        KPair::new(self.k0.to_group(), self.k1.to_group())
    }
}

impl InputDocument {
    pub fn parse(text: &str) -> Result<InputDocument, CliError> {
        let doc: InputDocument = serde_json::from_str(text)
            .map_err(|e| CliError::Usage(format!("malformed input document: {e}")))?;
        match doc.mode {
            Mode::Concrete => {
                if doc.action.is_none() {
                    return Err(CliError::Usage("concrete mode requires an action".into()));
                }
                if doc.symbolic.is_some() {
                    return Err(CliError::Usage(
                        "concrete mode must not carry symbolic inputs".into(),
                    ));
                }
            }
            Mode::Symbolic => {
                if doc.symbolic.is_none() {
                    return Err(CliError::Usage(
                        "symbolic mode requires symbolic inputs".into(),
                    ));
                }
                if doc.action.is_some() {
                    return Err(CliError::Usage(
                        "symbolic mode must not carry an action".into(),
                    ));
                }
            }
        }
        Ok(doc)
    }

    /// Builds the validated action for concrete mode. Validation failures
    /// of a well-formed document are mathematical errors (exit 1), not
    /// usage errors.
    pub fn build_action(&self, tol: f64, xi_exponent: usize) -> Result<ZnAction, CliError> {
        let action = self.action.as_ref().expect("checked in parse");
        match action {
            ActionInput::Builtin { builtin } => {
                let blocks = self.algebra.as_ref().map(|a| a.blocks.as_slice());
                samples::by_name(builtin, blocks, self.n, tol, xi_exponent)
                    .map_err(|e| CliError::Math(e.to_string()))
            }
            ActionInput::Explicit {
                unitary,
                block_permutation,
            } => {
                let algebra = self
                    .algebra
                    .as_ref()
                    .ok_or_else(|| CliError::Usage("explicit actions require an algebra".into()))?;
                let n = self
                    .n
                    .ok_or_else(|| CliError::Usage("explicit actions require n".into()))?;
                let alg = FiniteAlgebra::multimatrix(&algebra.blocks, tol)
                    .map_err(|e| CliError::Usage(e.to_string()))?;
                let rows = unitary
                    .iter()
                    .map(|row| {
                        row.iter()
                            .map(|&[re, im]| crossedk::num_complex::Complex64::new(re, im))
                            .collect()
                    })
                    .collect();
                let u =
                    ComplexMatrix::from_rows(rows).map_err(|e| CliError::Usage(e.to_string()))?;
                let spec = ActionSpec {
                    unitary: u,
                    block_permutation: block_permutation.clone(),
                };
                ZnAction::new(alg, spec, n, xi_exponent).map_err(|e| CliError::Math(e.to_string()))
            }
        }
    }
}

//! JSON documents exchanged by the command-line tool.
//!
//! Serialization is canonical: keys appear in declaration order, output is
//! compact, and every document ends with a single newline. Writing a parsed
//! document back therefore reproduces the original bytes.

use std::path::Path;

use blindfold_core::{
    GameSpec, GeneratorSet, ModVector, Permutation, SolvabilityVerdict, Strategy, Synthesis,
    UnsolvabilityCertificate, Verdict,
};
use serde::{de::DeserializeOwned, Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct StrategyFile {
    pub n: usize,
    pub m: u64,
    pub generators: Vec<Vec<usize>>,
    pub moves: Vec<Vec<u64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub basis: Vec<Vec<u64>>,
    pub construction: String,
    pub p: Option<u64>,
    pub a: Option<u32>,
    pub b: Option<u32>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerdictFile {
    pub wins: bool,
    pub steps_checked: usize,
    pub witness: Option<WitnessFile>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessFile {
    pub start: Vec<u64>,
    pub perms: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CertificateFile {
    pub p: u64,
    pub q: u64,
    pub c: Vec<usize>,
    pub blocks: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecisionFile {
    pub solvable: bool,
    pub group_order: u64,
    pub reason: String,
    pub p: Option<u64>,
    pub a: Option<u32>,
    pub b: Option<u32>,
}

fn entries(v: &ModVector) -> Vec<u64> {
    v.entries().to_vec()
}

impl StrategyFile {
    pub fn from_strategy(strategy: &Strategy) -> Self {
        let spec = strategy.spec();
        StrategyFile {
            n: spec.n(),
            m: spec.m(),
            generators: spec.gens().perms().iter().map(|p| p.images().to_vec()).collect(),
            moves: strategy.moves().iter().map(entries).collect(),
            metadata: None,
        }
    }

    pub fn from_synthesis(syn: &Synthesis) -> Self {
        let mut file = Self::from_strategy(&syn.strategy);
        file.metadata = Some(Metadata {
            basis: syn.basis.iter().map(entries).collect(),
            construction: syn.construction.as_str().to_owned(),
            p: syn.p,
            a: syn.a,
            b: syn.b,
        });
        file
    }

    pub fn spec(&self) -> Result<GameSpec, CliError> {
        let perms = self
            .generators
            .iter()
            .map(|g| Permutation::new(g.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        let gens = GeneratorSet::new(self.n, perms)?.with_identity();
        Ok(GameSpec::new(self.m, gens)?)
    }

    pub fn to_strategy(&self) -> Result<Strategy, CliError> {
        let spec = self.spec()?;
        let moves = self
            .moves
            .iter()
            .map(|y| ModVector::new(self.m, y.clone()))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Strategy::new(spec, moves)?)
    }
}

impl From<&Verdict> for VerdictFile {
    fn from(v: &Verdict) -> Self {
        VerdictFile {
            wins: v.wins,
            steps_checked: v.steps_checked,
            witness: v.witness.as_ref().map(|w| WitnessFile {
                start: entries(&w.start),
                perms: w.perms.clone(),
            }),
        }
    }
}

impl From<&UnsolvabilityCertificate> for CertificateFile {
    fn from(c: &UnsolvabilityCertificate) -> Self {
        CertificateFile {
            p: c.p,
            q: c.q,
            c: c.c.images().to_vec(),
            blocks: c.blocks.clone(),
        }
    }
}

impl CertificateFile {
    pub fn to_certificate(&self) -> Result<UnsolvabilityCertificate, CliError> {
        Ok(UnsolvabilityCertificate {
            p: self.p,
            q: self.q,
            c: Permutation::new(self.c.clone())?,
            blocks: self.blocks.clone(),
        })
    }
}

impl From<&SolvabilityVerdict> for DecisionFile {
    fn from(v: &SolvabilityVerdict) -> Self {
        DecisionFile {
            solvable: v.solvable,
            group_order: v.group_order,
            reason: v.reason.as_str().to_owned(),
            p: v.p,
            a: v.a,
            b: v.b,
        }
    }
}

/// Compact JSON followed by a newline.
pub fn to_canonical<T: Serialize>(doc: &T) -> String {
    let mut s = serde_json::to_string(doc).expect("documents always serialize");
    s.push('\n');
    s
}

pub fn parse<T: DeserializeOwned>(text: &str) -> Result<T, CliError> {
    Ok(serde_json::from_str(text)?)
}

pub fn read<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    parse(&text)
}

pub fn write<T: Serialize>(path: &Path, doc: &T) -> Result<(), CliError> {
    std::fs::write(path, to_canonical(doc)).map_err(|e| CliError::io(path, e))
}

/// Parses a generator list given inline (`[[1,0,2],[0,2,1]]`) or as a path to such a file.
pub fn parse_generators(arg: &str) -> Result<Vec<Vec<usize>>, CliError> {
    if arg.trim_start().starts_with('[') {
        parse(arg)
    } else {
        read(Path::new(arg))
    }
}

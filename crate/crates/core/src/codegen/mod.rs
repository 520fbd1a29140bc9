//! Model-to-text transformation into platform sources.
//!
//! | platform | artifacts |
//! |----------|-----------|
//! | ethereum | `contracts/<Contract>.sol`, `README.md` |
//! | hyperledger-fabric | `models/model.cto`, `lib/logic.js`, `permissions.acl` |
//! | azure | `contracts/<Contract>.sol`, `workbench/<Contract>.json`, `README.md` |
//!
//! Every artifact starts with a generated-file header naming the tool and the
//! SHA-256 of the model's canonical DSL text. Output is a pure function of the
//! model.

mod azure;
mod composer;
mod ethereum;
pub mod mangle;
mod readme;

use std::collections::HashMap;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::dsl::serialize;
use crate::model::*;
use crate::validator::{is_generatable, validate, ValidationIssue};

use mangle::ManglingTable;

pub const TOOL_NAME: &str = "icb";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ArtifactKind {
    ContractSource,
    ModelDefinition,
    AccessControl,
    PlatformConfig,
    Readme,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct GeneratedArtifact {
    /// Forward-slash relative path.
    pub rel_path: String,
    pub content: String,
    pub kind: ArtifactKind,
}

impl GeneratedArtifact {
    fn new(rel_path: impl Into<String>, kind: ArtifactKind, content: String) -> Self {
        let mut content = content.replace("\r\n", "\n");
        while content.ends_with("\n\n") {
            content.pop();
        }
        if !content.ends_with('\n') {
            content.push('\n');
        }
        GeneratedArtifact { rel_path: rel_path.into(), content, kind }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum CodegenError {
    #[error("model has {} validation error(s); fix them before generating", .0.iter().filter(|i| i.severity == crate::validator::Severity::Error).count())]
    InvalidModel(Vec<ValidationIssue>),
}

/// Hex SHA-256 of the canonical DSL text.
pub fn model_hash(model: &IntentionModel) -> String {
    let digest = Sha256::digest(serialize(model).as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

fn banner(model: &IntentionModel) -> String {
    format!("Generated by {TOOL_NAME} from intention model sha256:{}. Do not edit.", model_hash(model))
}

/// Generates the artifact set for the model's platform.
pub fn generate(model: &IntentionModel) -> Result<Vec<GeneratedArtifact>, CodegenError> {
    let issues = validate(model);
    if !is_generatable(&issues) {
        return Err(CodegenError::InvalidModel(issues));
    }
    let ctx = Context::new(model);
    Ok(match model.contract.platform.expect("V1 guarantees a platform") {
        Platform::Ethereum => ethereum::generate(&ctx),
        Platform::HyperledgerFabric => composer::generate(&ctx),
        Platform::Azure => azure::generate(&ctx),
    })
}

/// Same as [`generate`] with the platform replaced first.
pub fn generate_for(model: &IntentionModel, platform: Platform) -> Result<Vec<GeneratedArtifact>, CodegenError> {
    let mut m = model.clone();
    m.contract.platform = Some(platform);
    generate(&m)
}

/// Identifiers for one validated model.
pub(crate) struct Context<'m> {
    pub model: &'m IntentionModel,
    pub banner: String,
    pub contract: String,
    names: ManglingTable,
    /// Per owner (participant/asset/transaction display name) param idents.
    params: HashMap<String, ManglingTable>,
}

impl<'m> Context<'m> {
    pub(crate) fn new(model: &'m IntentionModel) -> Self {
        let mut names = ManglingTable::new();
        let contract = names.insert(&model.contract.name);
        let mut params = HashMap::new();
        let mut owner = |name: &str, list: &[Param]| {
            names.insert(name);
            params
                .entry(name.to_string())
                .or_insert_with(|| ManglingTable::build(list.iter().map(|p| p.name.as_str())));
        };
        for p in &model.participants {
            owner(&p.name, &p.params);
        }
        for a in &model.assets {
            owner(&a.name, &a.fields);
        }
        for t in &model.transactions {
            owner(&t.name, &t.params);
        }
        Context { model, banner: banner(model), contract, names, params }
    }

    pub(crate) fn ident(&self, name: &str) -> &str {
        self.names.ident(name)
    }

    pub(crate) fn param_ident(&self, owner: &str, param: &str) -> &str {
        self.params[owner].ident(param)
    }

    /// Participants allowed to invoke a transaction, one entry per TranRel.
    pub(crate) fn callers(&self, tx: &str) -> Vec<&'m Participant> {
        self.model
            .relationships_of(tx)
            .filter(|r| r.kind == RelKind::TranRel)
            .filter_map(|r| self.model.participant(&r.target))
            .collect()
    }

    /// Assets a transaction needs a handle on: AssetRel targets, then assets
    /// read by its conditions; first-reference order, no repeats.
    pub(crate) fn touched_assets(&self, tx: &str) -> Vec<&'m Asset> {
        let mut out: Vec<&Asset> = Vec::new();
        let mut push = |a: &'m Asset| {
            if !out.iter().any(|x| x.name == a.name) {
                out.push(a);
            }
        };
        for r in self.model.relationships_of(tx).filter(|r| r.kind == RelKind::AssetRel) {
            if let Some(a) = self.model.asset(&r.target) {
                push(a);
            }
        }
        for c in self.model.conditions_of(tx) {
            for operand in [&c.guard.lhs, &c.guard.rhs] {
                if let Operand::Path(p) = operand {
                    if let Some(PathTarget::Asset(a, _)) = self.model.resolve_path(p, tx) {
                        push(a);
                    }
                }
            }
        }
        out
    }

    /// Whether the AssetRel set of `tx` includes `asset`.
    pub(crate) fn modifies(&self, tx: &str, asset: &str) -> bool {
        self.model.relationships_of(tx).any(|r| r.kind == RelKind::AssetRel && r.target == asset)
    }
}

/// Fixed-point rendering of a numeric literal scaled by 10^18; fractional
/// digits past the 18th are dropped.
pub(crate) fn scale_1e18(text: &str) -> String {
    let (neg, digits) = match text.strip_prefix('-') {
        Some(rest) => (true, rest),
        None => (false, text),
    };
    let (int, frac) = digits.split_once('.').unwrap_or((digits, ""));
    let mut frac: String = frac.chars().take(18).collect();
    while frac.len() < 18 {
        frac.push('0');
    }
    let joined = format!("{int}{frac}");
    let trimmed = joined.trim_start_matches('0');
    let body = if trimmed.is_empty() { "0" } else { trimmed };
    if neg && body != "0" {
        format!("-{body}")
    } else {
        body.to_string()
    }
}

#[cfg(test)]
mod tests;

//! Consistency rules over an [`IntentionModel`].
//!
//! | rule | severity | checks |
//! |------|----------|--------|
//! | V1 | error | contract has a name and a supported platform |
//! | V2 | error | at least one participant, at least one creator |
//! | V3 | error | names unique after mangling (contract, participants, assets, transactions; params per owner) |
//! | V4 | error | every transaction has at least one relationship |
//! | V5 | error | relationships reference an existing transaction and a target of the right kind |
//! | V6 | error | conditions reference an existing transaction, their paths resolve and the operand types compare |
//! | V7 | error | every name mangles to an identifier that is not reserved on the platform |
//! | V8 | error | every param type is in the supported set |
//! | V9 | warning | transaction touches no asset (no AssetRel) |

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::codegen::mangle::{is_reserved, mangle};
use crate::model::*;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Rule {
    V1,
    V2,
    V3,
    V4,
    V5,
    V6,
    V7,
    V8,
    V9,
}

impl fmt::Display for Rule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "ERROR",
            Severity::Warning => "WARNING",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidationIssue {
    pub rule: Rule,
    pub severity: Severity,
    /// Location such as `transactions["Place-bid"]` or `relationships[1]`.
    pub path: String,
    pub message: String,
}

impl fmt::Display for ValidationIssue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}: {}", self.severity, self.rule, self.path, self.message)
    }
}

pub fn participant_path(name: &str) -> String {
    format!("participants[{}]", quote(name))
}

pub fn asset_path(name: &str) -> String {
    format!("assets[{}]", quote(name))
}

pub fn transaction_path(name: &str) -> String {
    format!("transactions[{}]", quote(name))
}

struct Issues(Vec<ValidationIssue>);

impl Issues {
    fn error(&mut self, rule: Rule, path: impl Into<String>, message: impl Into<String>) {
        self.push(rule, Severity::Error, path, message);
    }

    fn push(&mut self, rule: Rule, severity: Severity, path: impl Into<String>, message: impl Into<String>) {
        self.0.push(ValidationIssue { rule, severity, path: path.into(), message: message.into() });
    }
}

/// Runs every rule and returns all issues, sorted by (severity, rule, path).
pub fn validate(model: &IntentionModel) -> Vec<ValidationIssue> {
    let mut out = Issues(Vec::new());
    header(model, &mut out);
    participants(model, &mut out);
    unique_names(model, &mut out);
    relationships(model, &mut out);
    conditions(model, &mut out);
    identifiers(model, &mut out);
    param_types(model, &mut out);
    asset_links(model, &mut out);
    let mut issues = out.0;
    // stable: issues sharing a key keep rule-evaluation order
    issues.sort_by(|a, b| (a.severity, a.rule, &a.path).cmp(&(b.severity, b.rule, &b.path)));
    issues
}

/// True iff no issue has Error severity.
pub fn is_generatable(issues: &[ValidationIssue]) -> bool {
    issues.iter().all(|i| i.severity != Severity::Error)
}

fn header(m: &IntentionModel, out: &mut Issues) {
    if m.contract.name.trim().is_empty() {
        out.error(Rule::V1, "contract.name", "the contract has no name");
    }
    if m.contract.platform.is_none() {
        out.error(
            Rule::V1,
            "contract.platform",
            format!("contract {} has no platform (azure, hyperledger-fabric or ethereum)", quote(&m.contract.name)),
        );
    }
}

fn participants(m: &IntentionModel, out: &mut Issues) {
    if m.participants.is_empty() {
        out.error(Rule::V2, "participants", format!("contract {} declares no participants", quote(&m.contract.name)));
    } else if !m.participants.iter().any(|p| p.creator) {
        out.error(
            Rule::V2,
            "participants",
            format!("no participant of contract {} is marked as the creator", quote(&m.contract.name)),
        );
    }
}

fn unique_names(m: &IntentionModel, out: &mut Issues) {
    let mut seen: HashMap<String, String> = HashMap::new();
    let mut claim = |what: String, name: &str, path: String, out: &mut Issues| {
        let Some(id) = mangle(name) else { return };
        match seen.get(&id) {
            Some(first) => out.error(Rule::V3, path, format!("{what} clashes with {first} (both become `{id}`)")),
            None => {
                seen.insert(id, what);
            }
        }
    };
    claim(format!("contract {}", quote(&m.contract.name)), &m.contract.name, "contract.name".into(), out);
    for p in &m.participants {
        claim(format!("participant {}", quote(&p.name)), &p.name, participant_path(&p.name), out);
    }
    for a in &m.assets {
        claim(format!("asset {}", quote(&a.name)), &a.name, asset_path(&a.name), out);
    }
    for t in &m.transactions {
        claim(format!("transaction {}", quote(&t.name)), &t.name, transaction_path(&t.name), out);
    }

    let params = |owner: &str, base: String, list: &[Param], out: &mut Issues| {
        let mut seen = HashMap::new();
        for p in list {
            let Some(id) = mangle(&p.name) else { continue };
            if let Some(first) = seen.insert(id.clone(), p.name.clone()) {
                out.error(
                    Rule::V3,
                    format!("{base}.params[{}]", quote(&p.name)),
                    format!("param `{}` of {owner} clashes with `{first}` (both become `{id}`)", p.name),
                );
            }
        }
    };
    for p in &m.participants {
        params(&format!("participant {}", quote(&p.name)), participant_path(&p.name), &p.params, out);
    }
    for a in &m.assets {
        params(&format!("asset {}", quote(&a.name)), asset_path(&a.name), &a.fields, out);
    }
    for t in &m.transactions {
        params(&format!("transaction {}", quote(&t.name)), transaction_path(&t.name), &t.params, out);
    }
}

fn relationships(m: &IntentionModel, out: &mut Issues) {
    for t in &m.transactions {
        if m.relationships_of(&t.name).next().is_none() {
            out.error(
                Rule::V4,
                transaction_path(&t.name),
                format!("transaction {} has no relationship to a participant or asset", quote(&t.name)),
            );
        }
    }
    for (i, r) in m.relationships.iter().enumerate() {
        let path = format!("relationships[{i}]");
        if m.transaction(&r.transaction).is_none() {
            out.error(
                Rule::V5,
                path.clone(),
                format!("{} references unknown transaction {}", r.kind.keyword(), quote(&r.transaction)),
            );
        }
        let (found, what) = match r.kind {
            RelKind::TranRel => (m.participant(&r.target).is_some(), "participant"),
            RelKind::AssetRel => (m.asset(&r.target).is_some(), "asset"),
        };
        if !found {
            out.error(
                Rule::V5,
                path,
                format!(
                    "{} from {} targets {}, which is not a declared {what}",
                    r.kind.keyword(),
                    quote(&r.transaction),
                    quote(&r.target)
                ),
            );
        }
    }
}

fn conditions(m: &IntentionModel, out: &mut Issues) {
    for (i, c) in m.conditions.iter().enumerate() {
        let path = format!("conditions[{i}]");
        if m.transaction(&c.transaction).is_none() {
            out.error(Rule::V6, path, format!("condition on unknown transaction {}", quote(&c.transaction)));
            continue;
        }
        let mut typed = Vec::new();
        for operand in [&c.guard.lhs, &c.guard.rhs] {
            match operand {
                Operand::Literal(l) => typed.push(Some((l.ptype(), true))),
                Operand::Path(p) => match m.resolve_path(p, &c.transaction) {
                    Some(target) => typed.push(Some((target.param().ptype.clone(), false))),
                    None => {
                        out.error(
                            Rule::V6,
                            path.clone(),
                            format!(
                                "condition on {}: `{p}` is not a declared param of a participant, an asset or the transaction",
                                quote(&c.transaction)
                            ),
                        );
                        typed.push(None);
                    }
                },
            }
        }
        if let [Some((lt, l_lit)), Some((rt, r_lit))] = &typed[..] {
            if let Some(problem) = type_problem(lt, *l_lit, c.guard.op, rt, *r_lit) {
                out.error(Rule::V6, path, format!("condition on {}: `{}` {problem}", quote(&c.transaction), c.guard));
            }
        }
    }
}

/// Why two operand types cannot be compared with `op`, if they cannot.
pub(crate) fn type_problem(lt: &ParamType, l_lit: bool, op: CompareOp, rt: &ParamType, r_lit: bool) -> Option<String> {
    if !lt.is_supported() || !rt.is_supported() {
        // reported by V8
        return None;
    }
    let mixed_ok = (*lt == ParamType::Decimal && *rt == ParamType::Integer && r_lit)
        || (*rt == ParamType::Decimal && *lt == ParamType::Integer && l_lit);
    if lt != rt && !mixed_ok {
        return Some(format!("compares {lt} with {rt}"));
    }
    if op.is_ordering() && !lt.is_numeric() {
        return Some(format!("uses `{op}` on {lt} values; only == and != apply"));
    }
    None
}

fn identifiers(m: &IntentionModel, out: &mut Issues) {
    let platform = m.contract.platform;
    let check = |what: String, name: &str, path: String, out: &mut Issues| match mangle(name) {
        None => {
            out.error(Rule::V7, path, format!("{what} does not yield a code identifier (it needs a leading letter)"))
        }
        Some(id) => {
            if let Some(p) = platform.filter(|p| is_reserved(&id, *p)) {
                out.error(Rule::V7, path, format!("{what} becomes `{id}`, a reserved word on {}", p.display_name()));
            }
        }
    };
    if !m.contract.name.trim().is_empty() {
        check(format!("contract {}", quote(&m.contract.name)), &m.contract.name, "contract.name".into(), out);
    }
    let with_params = |what: String, name: &str, base: String, params: &[Param], out: &mut Issues| {
        check(what.clone(), name, base.clone(), out);
        for p in params {
            check(format!("param `{}` of {what}", p.name), &p.name, format!("{base}.params[{}]", quote(&p.name)), out);
        }
    };
    for p in &m.participants {
        with_params(format!("participant {}", quote(&p.name)), &p.name, participant_path(&p.name), &p.params, out);
    }
    for a in &m.assets {
        with_params(format!("asset {}", quote(&a.name)), &a.name, asset_path(&a.name), &a.fields, out);
    }
    for t in &m.transactions {
        with_params(format!("transaction {}", quote(&t.name)), &t.name, transaction_path(&t.name), &t.params, out);
    }
}

fn param_types(m: &IntentionModel, out: &mut Issues) {
    let check = |owner: String, base: String, params: &[Param], out: &mut Issues| {
        for p in params {
            if let ParamType::Unsupported(ty) = &p.ptype {
                out.error(
                    Rule::V8,
                    format!("{base}.params[{}]", quote(&p.name)),
                    format!(
                        "param `{}` of {owner} has unsupported type `{ty}` (use text, integer, decimal, boolean or identity)",
                        p.name
                    ),
                );
            }
        }
    };
    for p in &m.participants {
        check(format!("participant {}", quote(&p.name)), participant_path(&p.name), &p.params, out);
    }
    for a in &m.assets {
        check(format!("asset {}", quote(&a.name)), asset_path(&a.name), &a.fields, out);
    }
    for t in &m.transactions {
        check(format!("transaction {}", quote(&t.name)), transaction_path(&t.name), &t.params, out);
    }
}

fn asset_links(m: &IntentionModel, out: &mut Issues) {
    for t in &m.transactions {
        let touches_asset =
            m.relationships_of(&t.name).any(|r| r.kind == RelKind::AssetRel && m.asset(&r.target).is_some());
        if !touches_asset {
            out.push(
                Rule::V9,
                Severity::Warning,
                transaction_path(&t.name),
                format!("transaction {} does not modify any asset (no assetrel)", quote(&t.name)),
            );
        }
    }
}

//! Single-defect mutants of the vehicle-auction model.
//!
//! Each mutation kind is built so that exactly one rule fires as an Error;
//! the harness compares the full set of Error rules against that designation.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;
use crate::codegen::mangle::{is_reserved, mangle};
use crate::model::*;
use crate::validator::{validate, Rule, Severity};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum MutationKind {
    DropRelationship,
    UnlinkedTransaction,
    DanglingTarget,
    DanglingTransaction,
    WrongKindTarget,
    DuplicateName,
    DuplicateParam,
    BlankPlatform,
    BlankName,
    NoCreator,
    ConditionOnUnknownTransaction,
    ConditionUnresolvedPath,
    ConditionTypeMismatch,
    ReservedName,
    UnmangleableName,
    UnsupportedType,
}

impl MutationKind {
    pub const ALL: [MutationKind; 16] = [
        MutationKind::DropRelationship,
        MutationKind::UnlinkedTransaction,
        MutationKind::DanglingTarget,
        MutationKind::DanglingTransaction,
        MutationKind::WrongKindTarget,
        MutationKind::DuplicateName,
        MutationKind::DuplicateParam,
        MutationKind::BlankPlatform,
        MutationKind::BlankName,
        MutationKind::NoCreator,
        MutationKind::ConditionOnUnknownTransaction,
        MutationKind::ConditionUnresolvedPath,
        MutationKind::ConditionTypeMismatch,
        MutationKind::ReservedName,
        MutationKind::UnmangleableName,
        MutationKind::UnsupportedType,
    ];

    /// The rule that must catch this defect.
    pub fn designated(self) -> Rule {
        use MutationKind::*;
        match self {
            BlankPlatform | BlankName => Rule::V1,
            NoCreator => Rule::V2,
            DuplicateName | DuplicateParam => Rule::V3,
            DropRelationship | UnlinkedTransaction => Rule::V4,
            DanglingTarget | DanglingTransaction | WrongKindTarget => Rule::V5,
            ConditionOnUnknownTransaction | ConditionUnresolvedPath | ConditionTypeMismatch => Rule::V6,
            ReservedName | UnmangleableName => Rule::V7,
            UnsupportedType => Rule::V8,
        }
    }
}

#[derive(Debug, Clone)]
pub struct Mutant {
    pub seed: u64,
    pub kind: MutationKind,
    pub description: String,
    pub model: IntentionModel,
}

impl Mutant {
    pub fn expected(&self) -> BTreeSet<Rule> {
        BTreeSet::from([self.kind.designated()])
    }
}

/// Rules with at least one Error in the model.
pub fn error_rules(m: &IntentionModel) -> BTreeSet<Rule> {
    validate(m).into_iter().filter(|i| i.severity == Severity::Error).map(|i| i.rule).collect()
}

const SYLLABLES: &[&str] =
    &["ka", "lo", "mi", "ren", "zu", "tor", "vel", "bim", "sa", "dor", "nix", "qua", "pe", "jun"];

/// A capitalized word that mangles to a fresh identifier.
pub(crate) fn fresh_name(rng: &mut Rng, taken: &[String]) -> String {
    loop {
        let mut w: String = (0..rng.gen_range(2..4)).map(|_| *SYLLABLES.choose(rng).unwrap()).collect();
        w[..1].make_ascii_uppercase();
        let id = mangle(&w).unwrap();
        let clash = taken.iter().any(|t| mangle(t).as_deref() == Some(id.as_str()));
        if !clash && !Platform::ALL.iter().any(|p| is_reserved(&id, *p)) {
            return w;
        }
    }
}

/// A lowercase word usable as a fresh param name.
fn fresh_field(rng: &mut Rng, taken: &[String]) -> String {
    loop {
        let f = fresh_name(rng, taken).to_lowercase();
        if !Platform::ALL.iter().any(|p| is_reserved(&f, *p)) {
            return f;
        }
    }
}

fn names(m: &IntentionModel) -> Vec<String> {
    let mut v = vec![m.contract.name.clone()];
    v.extend(m.participants.iter().map(|p| p.name.clone()));
    v.extend(m.assets.iter().map(|a| a.name.clone()));
    v.extend(m.transactions.iter().map(|t| t.name.clone()));
    v
}

/// A name that differs from `name` but mangles to the same identifier.
fn mangled_twin(rng: &mut Rng, name: &str) -> String {
    let variants = [
        format!(" {name} "),
        format!("{name}-"),
        name.replace(['-', ' '], "_"),
        name.replace(['-', '_'], " "),
        format!("{name}!"),
        format!("_{name}"),
    ];
    let options: Vec<&String> = variants.iter().filter(|v| *v != name).collect();
    options.choose(rng).unwrap().to_string()
}

/// Renames an entity together with every reference to it.
fn rename_everywhere(m: &mut IntentionModel, old: &str, new: &str) {
    for p in m.participants.iter_mut().filter(|p| p.name == old) {
        p.name = new.into();
    }
    for a in m.assets.iter_mut().filter(|a| a.name == old) {
        a.name = new.into();
    }
    for t in m.transactions.iter_mut().filter(|t| t.name == old) {
        t.name = new.into();
    }
    for r in &mut m.relationships {
        if r.transaction == old {
            r.transaction = new.into();
        }
        if r.target == old {
            r.target = new.into();
        }
    }
    for c in &mut m.conditions {
        if c.transaction == old {
            c.transaction = new.into();
        }
    }
}

const SOLIDITY_WORDS: &[&str] = &["mapping", "contract", "address", "event", "struct", "uint256", "emit", "require"];

fn mutate(rng: &mut Rng, kind: MutationKind) -> (String, IntentionModel) {
    let mut m = vehicle_auction();
    let taken = names(&m);
    let entity = |rng: &mut Rng| -> String { taken[1..].choose(rng).unwrap().clone() };
    let desc = match kind {
        MutationKind::DropRelationship => {
            let i = rng.gen_range(0..m.relationships.len());
            let r = m.relationships.remove(i);
            format!("drop relationship {} -> {}", r.transaction, r.target)
        }
        MutationKind::UnlinkedTransaction => {
            let name = fresh_name(rng, &taken);
            m.transactions.insert(rng.gen_range(0..=m.transactions.len()), Transaction::new(name.clone()));
            format!("add unlinked transaction {name}")
        }
        MutationKind::DanglingTarget => {
            let i = rng.gen_range(0..m.relationships.len());
            let name = fresh_name(rng, &taken);
            m.relationships[i].target = name.clone();
            format!("point relationship {i} at unknown {name}")
        }
        MutationKind::DanglingTransaction => {
            let name = fresh_name(rng, &taken);
            let target = m.participants.choose(rng).unwrap().name.clone();
            m.relationships.push(Relationship::tran(name.clone(), target));
            format!("add relationship from unknown transaction {name}")
        }
        MutationKind::WrongKindTarget => {
            if rng.gen() {
                let i = rng.gen_range(0..m.relationships.len());
                m.relationships[i].target = "Vehicle".into();
                format!("tranrel {i} targets the asset")
            } else {
                let t = m.transactions.choose(rng).unwrap().name.clone();
                let p = m.participants.choose(rng).unwrap().name.clone();
                m.relationships.push(Relationship::asset(t.clone(), p.clone()));
                format!("assetrel {t} -> participant {p}")
            }
        }
        MutationKind::DuplicateName => {
            let base = taken.choose(rng).unwrap().clone();
            let twin = mangled_twin(rng, &base);
            if rng.gen() {
                m.participants.push(Participant::new(twin.clone(), false));
            } else {
                m.assets.push(Asset::new(twin.clone()));
            }
            format!("add entity {twin:?} clashing after mangling")
        }
        MutationKind::DuplicateParam => {
            let field = fresh_field(rng, &taken);
            let twin = mangled_twin(rng, &field);
            let t = ParamType::SUPPORTED.choose(rng).unwrap().clone();
            let list = match rng.gen_range(0..3) {
                0 => &mut m.participants.choose_mut(rng).unwrap().params,
                1 => &mut m.assets[0].fields,
                _ => &mut m.transactions.choose_mut(rng).unwrap().params,
            };
            list.push(Param::new(field.clone(), t.clone()));
            list.push(Param::new(twin.clone(), t));
            format!("params {field:?} and {twin:?} clash")
        }
        MutationKind::BlankPlatform => {
            m.contract.platform = None;
            "remove the platform".into()
        }
        MutationKind::BlankName => {
            m.contract.name = [" ", "", "\t", "   "].choose(rng).unwrap().to_string();
            "blank the contract name".into()
        }
        MutationKind::NoCreator => {
            m.participants.iter_mut().for_each(|p| p.creator = false);
            "clear every creator flag".into()
        }
        MutationKind::ConditionOnUnknownTransaction => {
            let name = fresh_name(rng, &taken);
            m.assets[0].fields.push(Param::new("price", ParamType::Integer));
            m.conditions.push(Condition {
                transaction: name.clone(),
                guard: Comparison {
                    lhs: Operand::Path(FieldPath::new("Vehicle", "price")),
                    op: CompareOp::Gt,
                    rhs: Operand::Literal(Literal::Integer(rng.gen_range(-100..100))),
                },
            });
            format!("condition on unknown transaction {name}")
        }
        MutationKind::ConditionUnresolvedPath => {
            let owner = entity(rng);
            let field = fresh_field(rng, &taken);
            let t = m.transactions.choose(rng).unwrap().name.clone();
            m.conditions.push(Condition {
                transaction: t,
                guard: Comparison {
                    lhs: Operand::Path(FieldPath::new(owner.clone(), field.clone())),
                    op: CompareOp::Eq,
                    rhs: Operand::Literal(Literal::Boolean(true)),
                },
            });
            format!("condition reads missing {owner}.{field}")
        }
        MutationKind::ConditionTypeMismatch => {
            let field = fresh_field(rng, &taken);
            let (ft, lit, op) = match rng.gen_range(0..4) {
                0 => (ParamType::Text, Literal::Integer(3), CompareOp::Eq),
                1 => (ParamType::Boolean, Literal::Text("yes".into()), CompareOp::Ne),
                2 => (ParamType::Text, Literal::Text("a".into()), CompareOp::Lt),
                _ => (ParamType::Integer, Literal::Decimal("1.5".into()), CompareOp::Ge),
            };
            m.assets[0].fields.push(Param::new(field.clone(), ft.clone()));
            let t = m.transactions.choose(rng).unwrap().name.clone();
            m.conditions.push(Condition {
                transaction: t,
                guard: Comparison {
                    lhs: Operand::Path(FieldPath::new("Vehicle", field.clone())),
                    op,
                    rhs: Operand::Literal(lit.clone()),
                },
            });
            format!("condition compares {ft} field {field} {op} {lit}")
        }
        MutationKind::ReservedName => {
            let word = SOLIDITY_WORDS.choose(rng).unwrap().to_string();
            if rng.gen() {
                let old = entity(rng);
                rename_everywhere(&mut m, &old, &word);
                format!("rename {old} to reserved {word}")
            } else {
                let t = ParamType::SUPPORTED.choose(rng).unwrap().clone();
                m.participants.choose_mut(rng).unwrap().params.push(Param::new(word.clone(), t));
                format!("add param named reserved {word}")
            }
        }
        MutationKind::UnmangleableName => {
            let bad = ["123", "-", "9lives", "é", "__", "#!", "2 Fast"].choose(rng).unwrap().to_string();
            let old = entity(rng);
            rename_everywhere(&mut m, &old, &bad);
            format!("rename {old} to {bad:?}")
        }
        MutationKind::UnsupportedType => {
            let t = ["money", "date", "uint", "string", "float", "list"].choose(rng).unwrap().to_string();
            let field = fresh_field(rng, &taken);
            m.assets[0].fields.push(Param::new(field.clone(), ParamType::Unsupported(t.clone())));
            format!("field {field} of unsupported type {t}")
        }
    };
    (desc, m)
}

/// `n` mutants cycling through every kind, each with its own seed.
pub fn mutants(seed: u64, n: usize) -> Vec<Mutant> {
    (0..n)
        .map(|i| {
            let kind = MutationKind::ALL[i % MutationKind::ALL.len()];
            let s = seed.wrapping_mul(1_000_003).wrapping_add(i as u64);
            let mut rng = super::rng(s);
            let (description, model) = mutate(&mut rng, kind);
            Mutant { seed: s, kind, description, model }
        })
        .collect()
}

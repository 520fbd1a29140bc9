//! Random complete conversations that walk the dialogue flow.

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::mutants::fresh_name;
use super::Rng;
use crate::codegen::mangle::{is_reserved, mangle};
use crate::intent::{IntentId, IntentTable, SlotType};
use crate::model::*;

/// User lines and the model they are expected to build.
#[derive(Debug, Clone)]
pub struct Conversation {
    pub lines: Vec<String>,
    pub expected: IntentionModel,
}

impl Conversation {
    /// Participants, assets, transactions, params, relationships and conditions.
    pub fn entity_count(&self) -> usize {
        let m = &self.expected;
        m.participants.len()
            + m.assets.len()
            + m.transactions.len()
            + m.relationships.len()
            + m.conditions.len()
            + m.participants.iter().map(|p| p.params.len()).sum::<usize>()
            + m.assets.iter().map(|a| a.fields.len()).sum::<usize>()
            + m.transactions.iter().map(|t| t.params.len()).sum::<usize>()
    }
}

/// Renders one shipped expression of `id` with the given slot values.
fn say(rng: &mut Rng, id: IntentId, values: &[(&str, &str)]) -> String {
    let def = IntentTable::shipped().get(id).expect("shipped intent");
    let expr = def.expressions.choose(rng).unwrap();
    let mut out = expr.clone();
    for (k, v) in values {
        out = out.replace(&format!("{{{k}}}"), v);
    }
    out
}

/// A surface form of an enum value: the value itself or one of its aliases.
fn enum_form(rng: &mut Rng, id: IntentId, slot: &str, value: &str) -> String {
    let def = IntentTable::shipped().get(id).unwrap();
    let s = def.slots.iter().find(|s| s.name == slot).unwrap();
    match &s.ty {
        SlotType::Enum(options) => {
            let o = options.iter().find(|o| o.value == value).expect("known enum value");
            let mut forms = vec![o.value.clone()];
            forms.extend(o.aliases.iter().cloned());
            forms.choose(rng).unwrap().clone()
        }
        _ => value.to_string(),
    }
}

struct Names {
    taken: Vec<String>,
    platform: Platform,
}

impl Names {
    fn entity(&mut self, rng: &mut Rng) -> String {
        loop {
            let n = if rng.gen_bool(0.3) {
                format!("{} {}", fresh_name(rng, &[]), fresh_name(rng, &[]))
            } else {
                fresh_name(rng, &[])
            };
            let id = mangle(&n).expect("syllable names mangle");
            let clash = self.taken.iter().any(|t| mangle(t).as_deref() == Some(id.as_str()));
            if !clash && !is_reserved(&id, self.platform) {
                self.taken.push(n.clone());
                return n;
            }
        }
    }

    fn param(&self, rng: &mut Rng, used: &[Param]) -> String {
        loop {
            let p = fresh_name(rng, &[]).to_lowercase();
            let id = mangle(&p).unwrap();
            let clash = used.iter().any(|u| mangle(&u.name).as_deref() == Some(id.as_str()));
            if !clash && !is_reserved(&id, self.platform) {
                return p;
            }
        }
    }
}

fn random_params(rng: &mut Rng, names: &Names) -> Vec<Param> {
    let mut ps = Vec::new();
    for _ in 0..rng.gen_range(0..3) {
        let name = names.param(rng, &ps);
        ps.push(Param::new(name, ParamType::SUPPORTED.choose(rng).unwrap().clone()));
    }
    ps
}

fn param_lines(rng: &mut Rng, params: &[Param], lines: &mut Vec<String>) {
    for p in params {
        let t = enum_form(rng, IntentId::AddParam, "ptype", p.ptype.keyword());
        lines.push(say(rng, IntentId::AddParam, &[("name", &p.name), ("ptype", &t)]));
    }
}

/// A literal of the given type, or None when the type has no literal form.
fn literal_for(rng: &mut Rng, t: &ParamType) -> Option<Literal> {
    Some(match t {
        ParamType::Integer => Literal::Integer(rng.gen_range(-50..1000)),
        ParamType::Decimal if rng.gen() => Literal::Integer(rng.gen_range(0..100)),
        ParamType::Decimal => Literal::Decimal(format!("{}.{}", rng.gen_range(0..100), rng.gen_range(1..100))),
        ParamType::Boolean => Literal::Boolean(rng.gen()),
        ParamType::Text => Literal::Text(fresh_name(rng, &[]).to_lowercase()),
        _ => return None,
    })
}

fn random_condition(rng: &mut Rng, m: &IntentionModel, tx: &Transaction) -> Option<Condition> {
    let mut fields: Vec<(String, &Param)> = Vec::new();
    fields.extend(m.participants.iter().flat_map(|p| p.params.iter().map(|f| (p.name.clone(), f))));
    fields.extend(m.assets.iter().flat_map(|a| a.fields.iter().map(|f| (a.name.clone(), f))));
    fields.extend(tx.params.iter().map(|f| (tx.name.clone(), f)));
    fields.retain(|(_, f)| f.ptype != ParamType::Identity);
    let (owner, field) = fields.choose(rng)?;
    let lit = literal_for(rng, &field.ptype)?;
    let ops: &[CompareOp] = if field.ptype.is_numeric() { &CompareOp::ALL } else { &[CompareOp::Eq, CompareOp::Ne] };
    let path = Operand::Path(FieldPath::new(owner.clone(), field.name.clone()));
    Some(Condition {
        transaction: tx.name.clone(),
        guard: Comparison { lhs: path, op: *ops.choose(rng).unwrap(), rhs: Operand::Literal(lit) },
    })
}

/// A conversation that ends in `Done` with a model free of Errors.
pub fn random_conversation(rng: &mut Rng) -> Conversation {
    let platform = *Platform::ALL.choose(rng).unwrap();
    let mut names = Names { taken: Vec::new(), platform };
    let mut m = IntentionModel::new(names.entity(rng), platform);
    let form = enum_form(rng, IntentId::ChoosePlatform, "platform", platform.keyword());
    let mut lines = vec![
        say(rng, IntentId::CreateContract, &[("name", &m.contract.name)]),
        say(rng, IntentId::ChoosePlatform, &[("platform", &form)]),
    ];

    for i in 0..rng.gen_range(1..4) {
        let name = names.entity(rng);
        lines.push(say(rng, IntentId::AddParticipant, &[("name", &name)]));
        // the first participant always creates; others may leave the question open
        let creator = i == 0 || rng.gen_bool(0.3);
        if creator || rng.gen() {
            let answer = if creator { "yes" } else { "no" };
            lines.push(say(rng, IntentId::MarkCreator, &[("creator", answer)]));
        }
        let params = random_params(rng, &names);
        param_lines(rng, &params, &mut lines);
        m.participants.push(Participant { name, creator, params });
    }
    // sections close either with `done` or by moving on directly
    let assets = rng.gen_range(0..3);
    if assets == 0 || rng.gen() {
        lines.push(say(rng, IntentId::DoneSection, &[]));
    }
    for _ in 0..assets {
        let name = names.entity(rng);
        lines.push(say(rng, IntentId::AddAsset, &[("name", &name)]));
        let fields = random_params(rng, &names);
        param_lines(rng, &fields, &mut lines);
        m.assets.push(Asset { name, fields });
    }
    if assets > 0 && rng.gen() {
        lines.push(say(rng, IntentId::DoneSection, &[]));
    }
    for _ in 0..rng.gen_range(1..4) {
        let name = names.entity(rng);
        lines.push(say(rng, IntentId::AddTransaction, &[("name", &name)]));
        let params = random_params(rng, &names);
        param_lines(rng, &params, &mut lines);
        m.transactions.push(Transaction { name, params });
    }
    if rng.gen() {
        lines.push(say(rng, IntentId::DoneSection, &[]));
    }

    let mut rels = Vec::new();
    for t in &m.transactions {
        let p = m.participants.choose(rng).unwrap();
        rels.push(Relationship::tran(t.name.clone(), p.name.clone()));
        if let Some(a) = m.assets.choose(rng).filter(|_| rng.gen()) {
            rels.push(Relationship::asset(t.name.clone(), a.name.clone()));
        }
    }
    rels.shuffle(rng);
    for r in &rels {
        let kind = enum_form(rng, IntentId::AddRelationship, "kind", r.kind.keyword());
        lines.push(say(
            rng,
            IntentId::AddRelationship,
            &[("transaction", &r.transaction), ("kind", &kind), ("target", &r.target)],
        ));
    }
    m.relationships = rels;

    // the flow now sits in Relationships
    let mut in_conditions = false;
    let conditions = rng.gen_range(0..3);
    if conditions == 0 || rng.gen() {
        lines.push(say(rng, IntentId::DoneSection, &[]));
        in_conditions = true;
    }
    for _ in 0..conditions {
        let tx = m.transactions.choose(rng).unwrap().clone();
        let Some(c) = random_condition(rng, &m, &tx) else { continue };
        let op = enum_form(rng, IntentId::AddCondition, "op", c.guard.op.symbol());
        lines.push(say(
            rng,
            IntentId::AddCondition,
            &[
                ("transaction", &c.transaction),
                ("lhs", &c.guard.lhs.to_string()),
                ("op", &op),
                ("rhs", &c.guard.rhs.to_string()),
            ],
        ));
        m.conditions.push(c);
        in_conditions = true;
    }
    if !in_conditions {
        lines.push(say(rng, IntentId::DoneSection, &[]));
    }
    lines.push(say(rng, IntentId::DoneSection, &[]));
    lines.push(say(rng, IntentId::Confirm, &[("answer", "yes")]));
    Conversation { lines, expected: m }
}

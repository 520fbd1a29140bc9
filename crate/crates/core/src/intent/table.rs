//! The declarative intent table and its text format.
//!
//! ```text
//! # comment
//! intent = add_param
//! slot = name : text
//! slot = ptype : enum(integer|int|number; text|string)
//! expr = add a parameter {name} of type {ptype}
//! ```
//!
//! Slot types are `text`, `operand`, `yes-no` and `enum(...)`. An `operand`
//! is one word, or a double-quoted run of words optionally followed by
//! `.field`, matching how the DSL writes comparison operands. Enum options are separated
//! by `;`, and each option lists its canonical value first, then aliases,
//! separated by `|`. Every intent the dialogue uses must be present with
//! exactly its expected slot names, and every expression must place each of
//! its intent's slots once, as whole words.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap, HashSet};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::Serialize;

use super::matcher::{align, score_bound, Span};
use super::{tokenize, IntentId, IntentMatch, Token, MAX_TOKENS, THRESHOLD};

const SHIPPED: &str = include_str!("intents.txt");

const YES: &[&str] = &["yes", "y", "yeah", "yep", "sure", "ok", "okay", "correct", "right"];
const NO: &[&str] = &["no", "n", "nope", "nah", "not really"];

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EnumOption {
    pub value: String,
    pub aliases: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case", tag = "type", content = "options")]
pub enum SlotType {
    Text,
    Operand,
    YesNo,
    Enum(Vec<EnumOption>),
}

impl SlotType {
    /// The value a token span denotes, if this type accepts it.
    fn value(&self, toks: &[Token]) -> Option<String> {
        match self {
            SlotType::Text => Some(toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")),
            SlotType::Operand => {
                let text = toks.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ");
                crate::dsl::parse_operand(&text).is_ok().then_some(text)
            }
            SlotType::YesNo => {
                let said = folded(toks, " ");
                if YES.contains(&said.as_str()) {
                    Some("yes".into())
                } else if NO.contains(&said.as_str()) {
                    Some("no".into())
                } else {
                    None
                }
            }
            SlotType::Enum(options) => {
                let spaced = folded(toks, " ");
                let dashed = folded(toks, "-");
                options
                    .iter()
                    .find(|o| std::iter::once(&o.value).chain(&o.aliases).any(|f| *f == spaced || *f == dashed))
                    .map(|o| o.value.clone())
            }
        }
    }
}

/// `"a b"` or `"a b".field`, with no other quotes.
fn folded(toks: &[Token], sep: &str) -> String {
    toks.iter().map(|t| t.folded.as_str()).collect::<Vec<_>>().join(sep)
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SlotDef {
    pub name: String,
    #[serde(flatten)]
    pub ty: SlotType,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub(super) enum Part {
    /// Case-folded literal word.
    Lit(String),
    /// Index into the intent's slots.
    Slot(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
struct Template {
    parts: Vec<Part>,
    literals: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct IntentDef {
    pub id: IntentId,
    pub expressions: Vec<String>,
    pub slots: Vec<SlotDef>,
    #[serde(skip)]
    templates: Vec<Template>,
}

impl IntentDef {
    /// Expression with slots kept as `{name}` and words normalized.
    pub fn normalized_expressions(&self) -> impl Iterator<Item = String> + '_ {
        self.expressions.iter().map(|e| super::normalize(e))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct TableError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntentTable {
    intents: Vec<IntentDef>,
}

impl IntentTable {
    pub fn shipped() -> &'static IntentTable {
        static TABLE: OnceLock<IntentTable> = OnceLock::new();
        TABLE.get_or_init(|| SHIPPED.parse().expect("shipped intent table is valid"))
    }

    /// The source text of the shipped table, a starting point for custom ones.
    pub fn shipped_source() -> &'static str {
        SHIPPED
    }

    pub fn intents(&self) -> &[IntentDef] {
        &self.intents
    }

    pub fn get(&self, id: IntentId) -> Option<&IntentDef> {
        self.intents.iter().find(|d| d.id == id)
    }

    /// Best match among `candidates` plus the global intents.
    pub fn classify(&self, utterance: &str, candidates: &[IntentId]) -> IntentMatch {
        let toks = tokenize(utterance);
        if toks.is_empty() || toks.len() > MAX_TOKENS {
            return IntentMatch::unrecognized();
        }
        // (score, intent, slot spans)
        let mut best: Option<(f64, &IntentDef, Vec<Span>)> = None;
        for def in self.intents.iter().filter(|d| d.id.is_global() || candidates.contains(&d.id)) {
            // spans repeat across the templates of one intent
            let seen: RefCell<HashMap<(usize, usize, usize), bool>> = RefCell::default();
            let accepts = |slot: usize, start: usize, end: usize| {
                *seen
                    .borrow_mut()
                    .entry((slot, start, end))
                    .or_insert_with(|| def.slots[slot].ty.value(&toks[start..end]).is_some())
            };
            for tpl in &def.templates {
                let bound = score_bound(&tpl.parts, &toks);
                if bound < THRESHOLD || best.as_ref().is_some_and(|(b, _, _)| bound <= *b) {
                    continue;
                }
                for a in align(&tpl.parts, &toks, &accepts) {
                    let score = a.score(tpl.literals);
                    if best.as_ref().is_none_or(|(b, _, _)| score > *b) {
                        best = Some((score, def, a.spans));
                    }
                }
            }
        }
        match best {
            Some((score, def, spans)) if score >= THRESHOLD => {
                let slots: BTreeMap<String, String> = spans
                    .into_iter()
                    .map(|(i, s, e)| {
                        let slot = &def.slots[i];
                        (slot.name.clone(), slot.ty.value(&toks[s..e]).expect("aligned spans are accepted"))
                    })
                    .collect();
                IntentMatch { intent: def.id, slots, score }
            }
            _ => IntentMatch::unrecognized(),
        }
    }
}

impl FromStr for IntentTable {
    type Err = TableError;

    fn from_str(src: &str) -> Result<Self, TableError> {
        let mut intents: Vec<IntentDef> = Vec::new();
        let mut starts: Vec<usize> = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = i + 1;
            let err = |message: String| TableError { line, message };
            let text = raw.trim();
            if text.is_empty() || text.starts_with('#') {
                continue;
            }
            let (key, value) = text.split_once('=').ok_or_else(|| err("expected `key = value`".into()))?;
            let (key, value) = (key.trim(), value.trim());
            if key == "intent" {
                let id: IntentId = value.parse().map_err(err)?;
                if id == IntentId::Unrecognized {
                    return Err(err("`unrecognized` is the fallback and cannot be defined".into()));
                }
                if intents.iter().any(|d| d.id == id) {
                    return Err(err(format!("intent `{id}` defined twice")));
                }
                intents.push(IntentDef { id, expressions: Vec::new(), slots: Vec::new(), templates: Vec::new() });
                starts.push(line);
                continue;
            }
            let def = intents.last_mut().ok_or_else(|| err(format!("`{key}` before any `intent`")))?;
            match key {
                "slot" => {
                    if !def.expressions.is_empty() {
                        return Err(err("slots must be declared before expressions".into()));
                    }
                    let slot = parse_slot(value).map_err(err)?;
                    if !def.id.slot_names().contains(&slot.name.as_str()) {
                        return Err(err(format!("intent `{}` has no slot `{}`", def.id, slot.name)));
                    }
                    if def.slots.iter().any(|s| s.name == slot.name) {
                        return Err(err(format!("slot `{}` declared twice", slot.name)));
                    }
                    def.slots.push(slot);
                }
                "expr" => {
                    let missing: Vec<&str> = def
                        .id
                        .slot_names()
                        .iter()
                        .copied()
                        .filter(|n| !def.slots.iter().any(|s| s.name == *n))
                        .collect();
                    if !missing.is_empty() {
                        return Err(err(format!("intent `{}` lacks slot(s) {}", def.id, missing.join(", "))));
                    }
                    let tpl = compile(value, &def.slots).map_err(err)?;
                    def.expressions.push(value.to_string());
                    def.templates.push(tpl);
                }
                other => return Err(err(format!("unknown key `{other}`"))),
            }
        }

        let last = src.lines().count().max(1);
        for id in IntentId::TABLE {
            if !intents.iter().any(|d| d.id == id) {
                return Err(TableError { line: last, message: format!("intent `{id}` is missing") });
            }
        }
        let mut seen: HashSet<String> = HashSet::new();
        for (def, line) in intents.iter().zip(&starts) {
            if def.expressions.is_empty() {
                return Err(TableError { line: *line, message: format!("intent `{}` has no expressions", def.id) });
            }
            for e in def.normalized_expressions() {
                if !seen.insert(e.clone()) {
                    return Err(TableError { line: *line, message: format!("expression `{e}` appears twice") });
                }
            }
        }
        Ok(IntentTable { intents })
    }
}

fn parse_slot(value: &str) -> Result<SlotDef, String> {
    let (name, ty) = value.split_once(':').ok_or("expected `slot = name : type`")?;
    let name = name.trim();
    if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
        return Err(format!("bad slot name `{name}`"));
    }
    let ty = ty.trim();
    let ty = match ty {
        "text" => SlotType::Text,
        "operand" => SlotType::Operand,
        "yes-no" => SlotType::YesNo,
        _ => {
            let body = ty
                .strip_prefix("enum(")
                .and_then(|b| b.strip_suffix(')'))
                .ok_or_else(|| format!("unknown slot type `{ty}`"))?;
            let mut seen = HashSet::new();
            let mut options = Vec::new();
            for opt in body.split(';') {
                let mut forms =
                    opt.split('|').map(|f| f.split_whitespace().collect::<Vec<_>>().join(" ").to_lowercase());
                let value = forms.next().filter(|v| !v.is_empty()).ok_or("empty enum option")?;
                let aliases: Vec<String> = forms.collect();
                for f in std::iter::once(&value).chain(&aliases) {
                    if f.is_empty() || !seen.insert(f.clone()) {
                        return Err(format!("empty or repeated enum form `{f}`"));
                    }
                }
                options.push(EnumOption { value, aliases });
            }
            SlotType::Enum(options)
        }
    };
    Ok(SlotDef { name: name.to_string(), ty })
}

fn compile(expr: &str, slots: &[SlotDef]) -> Result<Template, String> {
    let toks = tokenize(expr);
    if toks.is_empty() {
        return Err("empty expression".into());
    }
    if toks.len() > MAX_TOKENS {
        return Err("expression too long".into());
    }
    let mut used = vec![false; slots.len()];
    let mut parts = Vec::new();
    for t in toks {
        if let Some(name) = t.text.strip_prefix('{').and_then(|s| s.strip_suffix('}')) {
            let i = slots.iter().position(|s| s.name == name).ok_or_else(|| format!("undeclared slot `{{{name}}}`"))?;
            if std::mem::replace(&mut used[i], true) {
                return Err(format!("slot `{{{name}}}` used twice"));
            }
            parts.push(Part::Slot(i));
        } else if t.text.contains(['{', '}']) {
            return Err(format!("slot placeholders must be whole words: `{}`", t.text));
        } else {
            parts.push(Part::Lit(t.folded));
        }
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(format!("expression does not use slot `{{{}}}`", slots[i].name));
    }
    let literals = parts.iter().filter(|p| matches!(p, Part::Lit(_))).count();
    Ok(Template { parts, literals })
}

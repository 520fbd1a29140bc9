//! Filled-in table expressions and surface perturbations of them.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng as _;

use super::Rng;
use crate::dialogue::{candidates, start, Phase};
use crate::intent::{IntentDef, IntentId, SlotType};

/// One expression with its slots filled.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Sample {
    pub intent: IntentId,
    pub expression: String,
    /// Words, each flagged when its case may change without changing the
    /// expected slots (template literals and enum or yes/no values).
    pub words: Vec<(String, bool)>,
    pub slots: BTreeMap<String, String>,
}

impl Sample {
    pub fn text(&self) -> String {
        self.words.iter().map(|(w, _)| w.as_str()).collect::<Vec<_>>().join(" ")
    }
}

fn sample_value(slot: &str) -> &'static str {
    match slot {
        "transaction" => "Place-bid",
        "target" => "Bidder",
        "lhs" => "Vehicle.price",
        "rhs" => "10",
        _ => "Vehicle Auction",
    }
}

/// Fills every slot of `expression` with a fixed value its type accepts.
pub fn sample_utterance(def: &IntentDef, expression: &str) -> Sample {
    let mut words = Vec::new();
    let mut slots = BTreeMap::new();
    for w in expression.split_whitespace() {
        let Some(name) = w.strip_prefix('{').and_then(|s| s.strip_suffix('}')) else {
            words.push((w.to_string(), true));
            continue;
        };
        let slot = def.slots.iter().find(|s| s.name == name).expect("declared slot");
        match &slot.ty {
            SlotType::Text | SlotType::Operand => {
                let v = sample_value(name);
                words.extend(v.split(' ').map(|p| (p.to_string(), false)));
                slots.insert(name.to_string(), v.to_string());
            }
            SlotType::YesNo => {
                words.push(("yes".into(), true));
                slots.insert(name.to_string(), "yes".into());
            }
            SlotType::Enum(options) => {
                let o = &options[0];
                words.extend(o.value.split(' ').map(|p| (p.to_string(), true)));
                slots.insert(name.to_string(), o.value.clone());
            }
        }
    }
    Sample { intent: def.id, expression: expression.to_string(), words, slots }
}

const GAPS: &[&str] = &[" ", "  ", "\t", " \t ", "   ", "\n"];
const ENDINGS: &[&str] = &[".", "!", "?", "...", "?!", " .", " !!"];

fn recase(rng: &mut Rng, w: &str) -> String {
    match rng.gen_range(0..4) {
        0 => w.to_uppercase(),
        1 => {
            let mut c = w.chars();
            c.next().map(|f| f.to_uppercase().chain(c).collect()).unwrap_or_default()
        }
        2 => w.chars().map(|c| if rng.gen() { c.to_ascii_uppercase() } else { c }).collect(),
        _ => w.to_string(),
    }
}

/// `n` variants of the sample differing in case, spacing and terminal
/// punctuation; the first few each exercise one kind of change.
pub fn perturbations(sample: &Sample, rng: &mut Rng, n: usize) -> Vec<String> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let (case, space, punct) = match i {
            0 => (true, false, false),
            1 => (false, true, false),
            2 => (false, false, true),
            3 => (true, true, false),
            _ => (true, true, true),
        };
        let mut s = String::new();
        if space && rng.gen() {
            s.push_str(GAPS.choose(rng).unwrap());
        }
        for (k, (w, may_recase)) in sample.words.iter().enumerate() {
            if k > 0 {
                s.push_str(if space { GAPS.choose(rng).unwrap() } else { " " });
            }
            if case && *may_recase {
                s.push_str(&recase(rng, w));
            } else {
                s.push_str(w);
            }
        }
        if punct || (i >= 4 && rng.gen()) {
            s.push_str(ENDINGS.choose(rng).unwrap());
        }
        if space && rng.gen() {
            s.push_str(GAPS.choose(rng).unwrap());
        }
        out.push(s);
    }
    out
}

/// The candidate set of a dialogue phase where the intent is expected.
pub fn context_for(id: IntentId) -> Vec<IntentId> {
    let (mut s, _) = start();
    let (phase, focus, pending) = match id {
        IntentId::CreateContract => (Phase::ContractName, None, false),
        IntentId::ChoosePlatform => (Phase::Platform, None, false),
        IntentId::AddParticipant | IntentId::DoneSection => (Phase::Participants, None, false),
        IntentId::MarkCreator => (Phase::ParticipantParams, Some("Owner"), true),
        IntentId::AddParam => (Phase::ParticipantParams, Some("Owner"), false),
        IntentId::AddAsset => (Phase::Assets, None, false),
        IntentId::AddTransaction => (Phase::Transactions, None, false),
        IntentId::AddRelationship => (Phase::Relationships, None, false),
        IntentId::AddCondition => (Phase::Conditions, None, false),
        IntentId::Confirm => (Phase::Review, None, false),
        IntentId::Restart | IntentId::Help | IntentId::Unrecognized => (Phase::Done, None, false),
    };
    s.phase = phase;
    s.focus = focus.map(String::from);
    s.creator_pending = pending;
    candidates(&s)
}

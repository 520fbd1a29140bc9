//! Rule-based utterance classification.
//!
//! An utterance is normalized, then aligned against every expression of the
//! candidate intents. Template literals must line up with utterance tokens in
//! order; each `{slot}` binds a contiguous run of tokens its type accepts. The
//! score of an alignment is
//!
//! ```text
//! matched literals / (template literals + unmatched utterance tokens)
//! ```
//!
//! so an exact match scores 1. The best scoring expression wins, ties going to
//! table order; anything under [`THRESHOLD`] is `unrecognized`.

mod matcher;
mod table;

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use table::{IntentDef, IntentTable, SlotDef, SlotType, TableError};

pub const THRESHOLD: f64 = 0.6;

/// Longer utterances are not aligned at all.
pub const MAX_TOKENS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IntentId {
    CreateContract,
    ChoosePlatform,
    AddParticipant,
    MarkCreator,
    AddParam,
    AddAsset,
    AddTransaction,
    AddRelationship,
    AddCondition,
    DoneSection,
    Confirm,
    Restart,
    Help,
    Unrecognized,
}

impl IntentId {
    /// Every id a table must define, in shipped table order.
    pub const TABLE: [IntentId; 13] = [
        IntentId::CreateContract,
        IntentId::ChoosePlatform,
        IntentId::AddParticipant,
        IntentId::MarkCreator,
        IntentId::AddParam,
        IntentId::AddAsset,
        IntentId::AddTransaction,
        IntentId::AddRelationship,
        IntentId::AddCondition,
        IntentId::DoneSection,
        IntentId::Confirm,
        IntentId::Restart,
        IntentId::Help,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            IntentId::CreateContract => "create_contract",
            IntentId::ChoosePlatform => "choose_platform",
            IntentId::AddParticipant => "add_participant",
            IntentId::MarkCreator => "mark_creator",
            IntentId::AddParam => "add_param",
            IntentId::AddAsset => "add_asset",
            IntentId::AddTransaction => "add_transaction",
            IntentId::AddRelationship => "add_relationship",
            IntentId::AddCondition => "add_condition",
            IntentId::DoneSection => "done_section",
            IntentId::Confirm => "confirm",
            IntentId::Restart => "restart",
            IntentId::Help => "help",
            IntentId::Unrecognized => "unrecognized",
        }
    }

    /// Slot names the dialogue reads; a table must declare exactly these.
    pub fn slot_names(self) -> &'static [&'static str] {
        match self {
            IntentId::CreateContract | IntentId::AddParticipant | IntentId::AddAsset | IntentId::AddTransaction => {
                &["name"]
            }
            IntentId::ChoosePlatform => &["platform"],
            IntentId::MarkCreator => &["creator"],
            IntentId::AddParam => &["name", "ptype"],
            IntentId::AddRelationship => &["transaction", "kind", "target"],
            IntentId::AddCondition => &["transaction", "lhs", "op", "rhs"],
            IntentId::Confirm => &["answer"],
            IntentId::DoneSection | IntentId::Restart | IntentId::Help | IntentId::Unrecognized => &[],
        }
    }

    /// Intents accepted in every dialogue context.
    pub fn is_global(self) -> bool {
        matches!(self, IntentId::Restart | IntentId::Help)
    }
}

impl fmt::Display for IntentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for IntentId {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        IntentId::TABLE
            .into_iter()
            .chain([IntentId::Unrecognized])
            .find(|i| i.as_str() == s)
            .ok_or_else(|| format!("unknown intent `{s}`"))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IntentMatch {
    pub intent: IntentId,
    /// Free-text values keep the user's casing; enum and yes-no values are
    /// canonical.
    pub slots: BTreeMap<String, String>,
    pub score: f64,
}

impl IntentMatch {
    pub fn unrecognized() -> Self {
        IntentMatch { intent: IntentId::Unrecognized, slots: BTreeMap::new(), score: 0.0 }
    }

    pub fn slot(&self, name: &str) -> Option<&str> {
        self.slots.get(name).map(String::as_str)
    }
}

/// One utterance token, as typed and case-folded.
#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) struct Token {
    pub text: String,
    pub folded: String,
}

const TERMINAL: &[char] = &['.', '!', '?', ',', ';', ':'];

/// Splits on whitespace, drops trailing `,`/`;` from each token and terminal
/// punctuation from the utterance.
pub(crate) fn tokenize(text: &str) -> Vec<Token> {
    let mut words: Vec<&str> =
        text.split_whitespace().map(|w| w.trim_end_matches([',', ';'])).filter(|w| !w.is_empty()).collect();
    while let Some(last) = words.pop() {
        let t = last.trim_end_matches(TERMINAL);
        if !t.is_empty() {
            words.push(t);
            break;
        }
    }
    words.into_iter().map(|w| Token { text: w.to_string(), folded: w.to_lowercase() }).collect()
}

/// The normalized form used for comparisons.
pub fn normalize(text: &str) -> String {
    tokenize(text).into_iter().map(|t| t.folded).collect::<Vec<_>>().join(" ")
}

/// Classifies against the shipped table.
pub fn classify(utterance: &str, candidates: &[IntentId]) -> IntentMatch {
    IntentTable::shipped().classify(utterance, candidates)
}

/// The shipped table's definitions.
pub fn shipped_intent_table() -> &'static [IntentDef] {
    IntentTable::shipped().intents()
}

#[cfg(test)]
mod tests;

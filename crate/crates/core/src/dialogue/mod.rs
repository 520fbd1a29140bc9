//! The elicitation conversation as a state machine.
//!
//! ```text
//! ContractName -> Platform -> Participants <-> ParticipantParams
//!   -> Assets <-> AssetFields -> Transactions -> Relationships
//!   -> Conditions -> Review -> (Generate) -> Done
//! ```
//!
//! Loop phases are left with `done`, or by asking for something that belongs
//! to a later phase ("add an asset ..." while listing participants). Each
//! turn is checked against the validator on the spot, so names that clash or
//! references to unknown entities are refused when typed. Completeness
//! (creators, relationships) is checked at Review, which routes back to the
//! phase that can fix the first problem.

mod prompts;

use serde::{Deserialize, Serialize};

use crate::codegen::{generate, GeneratedArtifact};
use crate::dsl::parse_operand;
use crate::intent::{IntentId, IntentMatch, IntentTable};
use crate::model::*;
use crate::validator::{is_generatable, validate, Rule, Severity, ValidationIssue};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phase {
    Greeting,
    ContractName,
    Platform,
    Participants,
    ParticipantParams,
    Assets,
    AssetFields,
    Transactions,
    Relationships,
    Conditions,
    Review,
    Generate,
    Done,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Speaker {
    User,
    Bot,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Utterance {
    pub speaker: Speaker,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DialogueState {
    pub phase: Phase,
    pub draft: IntentionModel,
    /// Entity whose params are being filled.
    pub focus: Option<String>,
    /// The creator question for `focus` is open.
    pub creator_pending: bool,
    pub transcript: Vec<Utterance>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct BotTurn {
    pub prompt: String,
    /// Set when the bot waits for an enum or yes/no answer.
    pub quick_replies: Option<Vec<String>>,
    pub artifact_offer: Option<Vec<GeneratedArtifact>>,
    /// Validation findings reported with this turn.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub issues: Vec<ValidationIssue>,
}

impl DialogueState {
    fn say(mut self, user: &str, turn: BotTurn) -> (DialogueState, BotTurn) {
        self.transcript.push(Utterance { speaker: Speaker::User, text: user.to_string() });
        self.transcript.push(Utterance { speaker: Speaker::Bot, text: turn.prompt.clone() });
        (self, turn)
    }

    pub fn is_done(&self) -> bool {
        self.phase == Phase::Done
    }

    /// Artifacts for a finished conversation.
    pub fn artifacts(&self) -> Option<Vec<GeneratedArtifact>> {
        if self.is_done() {
            generate(&self.draft).ok()
        } else {
            None
        }
    }
}

pub fn start() -> (DialogueState, BotTurn) {
    let mut state = DialogueState {
        phase: Phase::ContractName,
        draft: IntentionModel::default(),
        focus: None,
        creator_pending: false,
        transcript: Vec::new(),
    };
    let turn = turn_for(&state, prompts::WELCOME.to_string());
    state.transcript.push(Utterance { speaker: Speaker::Bot, text: turn.prompt.clone() });
    (state, turn)
}

/// Intents the phase accepts besides the global ones.
pub fn candidates(state: &DialogueState) -> Vec<IntentId> {
    use IntentId::*;
    let later = |from: Phase| -> Vec<IntentId> {
        let chain = [
            (Phase::Assets, AddAsset),
            (Phase::Transactions, AddTransaction),
            (Phase::Relationships, AddRelationship),
            (Phase::Conditions, AddCondition),
        ];
        chain.iter().filter(|(p, _)| phase_rank(*p) > phase_rank(from)).map(|(_, i)| *i).collect()
    };
    let mut c = match state.phase {
        Phase::ContractName => vec![CreateContract],
        Phase::Platform => vec![ChoosePlatform],
        Phase::Participants => vec![AddParticipant, DoneSection],
        Phase::ParticipantParams if state.creator_pending => vec![MarkCreator, AddParam, AddParticipant, DoneSection],
        Phase::ParticipantParams => vec![AddParam, AddParticipant, DoneSection],
        Phase::Assets => vec![AddAsset, DoneSection],
        Phase::AssetFields => vec![AddParam, AddAsset, DoneSection],
        Phase::Transactions if state.focus.is_some() => vec![AddTransaction, AddParam, DoneSection],
        Phase::Transactions => vec![AddTransaction, DoneSection],
        Phase::Relationships => vec![AddRelationship, DoneSection],
        Phase::Conditions => vec![AddCondition, DoneSection],
        Phase::Review => vec![Confirm],
        Phase::Greeting | Phase::Generate | Phase::Done => vec![],
    };
    if !c.is_empty() && phase_rank(state.phase) >= phase_rank(Phase::Participants) {
        c.extend(later(state.phase).into_iter().filter(|i| !c.contains(i)).collect::<Vec<_>>());
    }
    c
}

/// Loop phases share the rank of their section.
fn phase_rank(p: Phase) -> u8 {
    match p {
        Phase::Greeting => 0,
        Phase::ContractName => 1,
        Phase::Platform => 2,
        Phase::Participants | Phase::ParticipantParams => 3,
        Phase::Assets | Phase::AssetFields => 4,
        Phase::Transactions => 5,
        Phase::Relationships => 6,
        Phase::Conditions => 7,
        Phase::Review => 8,
        Phase::Generate => 9,
        Phase::Done => 10,
    }
}

/// One user turn, classified with the shipped intent table.
pub fn step(state: &DialogueState, text: &str) -> (DialogueState, BotTurn) {
    step_with(IntentTable::shipped(), state, text)
}

pub fn step_with(table: &IntentTable, state: &DialogueState, text: &str) -> (DialogueState, BotTurn) {
    let m = table.classify(text, &candidates(state));
    match m.intent {
        IntentId::Restart => return start(),
        IntentId::Help => {
            let t = turn_for(state, prompts::help(state, &candidates(state)));
            return state.clone().say(text, t);
        }
        _ => {}
    }
    if state.is_done() {
        return state.clone().say(text, BotTurn { prompt: prompts::FINISHED.into(), ..BotTurn::default() });
    }
    if m.intent == IntentId::Unrecognized {
        let t = turn_for(state, prompts::not_understood(&candidates(state)));
        return state.clone().say(text, t);
    }
    let mut next = state.clone();
    match apply(&mut next, &m) {
        Ok(turn) => next.say(text, turn),
        Err(reason) => {
            let t = turn_for(state, format!("Sorry, {reason}. {}", prompts::phase_prompt(state)));
            state.clone().say(text, t)
        }
    }
}

/// The prompt for the first thing the draft still needs, if anything.
pub fn missing_next(state: &DialogueState) -> Option<String> {
    let issues = validate(&state.draft);
    let first = issues.iter().find(|i| i.severity == Severity::Error)?;
    Some(prompts::requirement(&state.draft, first))
}

fn turn_for(state: &DialogueState, prompt: String) -> BotTurn {
    BotTurn { prompt, quick_replies: quick_replies(state), artifact_offer: None, issues: Vec::new() }
}

fn quick_replies(state: &DialogueState) -> Option<Vec<String>> {
    let yes_no = || Some(vec!["yes".to_string(), "no".to_string()]);
    match state.phase {
        Phase::Platform => Some(Platform::ALL.iter().map(|p| p.keyword().to_string()).collect()),
        Phase::ParticipantParams if state.creator_pending => yes_no(),
        Phase::Review => yes_no(),
        _ => None,
    }
}

fn slot<'m>(m: &'m IntentMatch, name: &str) -> &'m str {
    m.slot(name).expect("matched intents bind all their slots")
}

/// Errors the draft must never gain mid-conversation.
fn is_turn_rule(r: Rule) -> bool {
    matches!(r, Rule::V3 | Rule::V5 | Rule::V6 | Rule::V7 | Rule::V8)
}

/// Applies `change` to the draft unless it introduces new per-turn errors.
fn guarded(state: &mut DialogueState, change: impl FnOnce(&mut IntentionModel)) -> Result<(), String> {
    let before: Vec<ValidationIssue> = validate(&state.draft).into_iter().filter(|i| is_turn_rule(i.rule)).collect();
    let mut draft = state.draft.clone();
    change(&mut draft);
    let fresh: Vec<String> = validate(&draft)
        .into_iter()
        .filter(|i| is_turn_rule(i.rule) && !before.contains(i))
        .map(|i| i.message)
        .collect();
    if !fresh.is_empty() {
        return Err(fresh.join("; "));
    }
    state.draft = draft;
    Ok(())
}

fn enter(state: &mut DialogueState, phase: Phase, focus: Option<String>) {
    state.phase = phase;
    state.focus = focus;
    state.creator_pending = false;
}

fn apply(state: &mut DialogueState, m: &IntentMatch) -> Result<BotTurn, String> {
    let prompt = match m.intent {
        IntentId::CreateContract => {
            let name = slot(m, "name").to_string();
            guarded(state, |d| d.contract.name = name.clone())?;
            enter(state, Phase::Platform, None);
            prompts::named(&name)
        }
        IntentId::ChoosePlatform => {
            let p: Platform = slot(m, "platform").parse().map_err(|e| format!("{e}"))?;
            guarded(state, |d| d.contract.platform = Some(p))?;
            enter(state, Phase::Participants, None);
            prompts::platform_chosen(p)
        }
        IntentId::AddParticipant => {
            let name = slot(m, "name").to_string();
            guarded(state, |d| d.participants.push(Participant::new(name.clone(), false)))?;
            enter(state, Phase::ParticipantParams, Some(name.clone()));
            state.creator_pending = true;
            prompts::participant_added(&name)
        }
        IntentId::MarkCreator => {
            let name = state.focus.clone().ok_or("there is no participant to mark")?;
            let yes = slot(m, "creator") == "yes";
            if let Some(p) = state.draft.participants.iter_mut().find(|p| p.name == name) {
                p.creator = yes;
            }
            state.creator_pending = false;
            prompts::creator_answered(&name, yes)
        }
        IntentId::AddParam => {
            let owner = state.focus.clone().ok_or("add a participant, asset or transaction first")?;
            let name = slot(m, "name").to_string();
            let ptype = ParamType::from_keyword(slot(m, "ptype"));
            let param = Param::new(name.clone(), ptype.clone());
            let phase = state.phase;
            guarded(state, |d| match phase {
                Phase::ParticipantParams => {
                    d.participants.iter_mut().filter(|p| p.name == owner).for_each(|p| p.params.push(param.clone()))
                }
                Phase::AssetFields => {
                    d.assets.iter_mut().filter(|a| a.name == owner).for_each(|a| a.fields.push(param.clone()))
                }
                _ => d.transactions.iter_mut().filter(|t| t.name == owner).for_each(|t| t.params.push(param.clone())),
            })?;
            state.creator_pending = false;
            prompts::param_added(&owner, &name, &ptype)
        }
        IntentId::AddAsset => {
            let name = slot(m, "name").to_string();
            guarded(state, |d| d.assets.push(Asset::new(name.clone())))?;
            enter(state, Phase::AssetFields, Some(name.clone()));
            prompts::asset_added(&name)
        }
        IntentId::AddTransaction => {
            let name = slot(m, "name").to_string();
            guarded(state, |d| d.transactions.push(Transaction::new(name.clone())))?;
            enter(state, Phase::Transactions, Some(name.clone()));
            prompts::transaction_added(&name)
        }
        IntentId::AddRelationship => {
            let kind = if slot(m, "kind") == "assetrel" { RelKind::AssetRel } else { RelKind::TranRel };
            let rel =
                Relationship { kind, transaction: slot(m, "transaction").into(), target: slot(m, "target").into() };
            if state.draft.relationships.contains(&rel) {
                return Err(format!("{} is already linked to {}", quote(&rel.transaction), quote(&rel.target)));
            }
            guarded(state, |d| d.relationships.push(rel.clone()))?;
            enter(state, Phase::Relationships, None);
            prompts::linked(&rel)
        }
        IntentId::AddCondition => {
            let operand = |which: &str| {
                parse_operand(slot(m, which))
                    .map_err(|_| format!("`{}` is neither a field path nor a value", slot(m, which)))
            };
            let (lhs, rhs) = (operand("lhs")?, operand("rhs")?);
            let op = CompareOp::from_symbol(slot(m, "op")).ok_or("that comparison is not supported")?;
            let cond = Condition { transaction: slot(m, "transaction").into(), guard: Comparison { lhs, op, rhs } };
            if !cond.guard.has_path() {
                return Err("a condition must mention at least one field, such as `Car.price`".into());
            }
            guarded(state, |d| d.conditions.push(cond.clone()))?;
            enter(state, Phase::Conditions, None);
            prompts::condition_added(&cond)
        }
        IntentId::DoneSection => {
            let next = match state.phase {
                Phase::Participants | Phase::ParticipantParams => Phase::Assets,
                Phase::Assets | Phase::AssetFields => Phase::Transactions,
                Phase::Transactions => Phase::Relationships,
                Phase::Relationships => Phase::Conditions,
                _ => Phase::Review,
            };
            enter(state, next, None);
            if next == Phase::Review {
                return Ok(review(state));
            }
            prompts::phase_prompt(state)
        }
        IntentId::Confirm => {
            if slot(m, "answer") == "no" {
                enter(state, Phase::Participants, None);
                return Ok(turn_for(state, prompts::KEEP_EDITING.into()));
            }
            let turn = review(state);
            if state.phase != Phase::Review {
                return Ok(turn);
            }
            state.phase = Phase::Generate;
            let artifacts = generate(&state.draft).map_err(|e| e.to_string())?;
            state.phase = Phase::Done;
            return Ok(BotTurn {
                prompt: prompts::generated(&state.draft, &artifacts),
                quick_replies: None,
                artifact_offer: Some(artifacts),
                issues: turn.issues,
            });
        }
        IntentId::Restart | IntentId::Help | IntentId::Unrecognized => unreachable!("handled by step"),
    };
    Ok(turn_for(state, prompt))
}

/// Enters Review, or routes to the phase that can fix the first error.
fn review(state: &mut DialogueState) -> BotTurn {
    let issues = validate(&state.draft);
    if is_generatable(&issues) {
        state.phase = Phase::Review;
        let mut t = turn_for(state, prompts::summary(&state.draft, &issues));
        t.issues = issues;
        return t;
    }
    let first = issues.iter().find(|i| i.severity == Severity::Error).expect("not generatable");
    let target = route(first);
    enter(state, target, None);
    let mut t = turn_for(state, prompts::must_fix(&state.draft, &issues, first));
    t.issues = issues;
    t
}

fn route(issue: &ValidationIssue) -> Phase {
    match issue.rule {
        Rule::V1 if issue.path == "contract.platform" => Phase::Platform,
        Rule::V1 => Phase::ContractName,
        Rule::V2 => Phase::Participants,
        Rule::V4 | Rule::V5 => Phase::Relationships,
        Rule::V6 => Phase::Conditions,
        _ if issue.path.starts_with("participants") => Phase::Participants,
        _ if issue.path.starts_with("assets") => Phase::Assets,
        _ if issue.path.starts_with("transactions") => Phase::Transactions,
        _ => Phase::ContractName,
    }
}

#[cfg(test)]
mod tests;

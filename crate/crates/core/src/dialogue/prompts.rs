//! Bot wording.

use super::{DialogueState, Phase};
use crate::codegen::GeneratedArtifact;
use crate::intent::IntentId;
use crate::model::*;
use crate::validator::{Rule, Severity, ValidationIssue};

pub(super) const WELCOME: &str =
    "Hi! Let's describe your smart contract. What should the contract be called? (e.g. \"create a contract called Vehicle Auction\")";
pub(super) const FINISHED: &str = "This contract is already generated. Say \"restart\" to describe a new one.";
pub(super) const KEEP_EDITING: &str =
    "OK, let's keep going. Add participants, assets, transactions, links or conditions, then say \"done\" until we are back at the review.";

/// A canonical utterance for each intent.
pub(crate) fn example(id: IntentId) -> &'static str {
    match id {
        IntentId::CreateContract => "create a contract called Vehicle Auction",
        IntentId::ChoosePlatform => "ethereum",
        IntentId::AddParticipant => "add a participant named Buyer",
        IntentId::MarkCreator | IntentId::Confirm => "yes",
        IntentId::AddParam => "add a parameter price of type decimal",
        IntentId::AddAsset => "add an asset named Car",
        IntentId::AddTransaction => "add a transaction named Buy",
        IntentId::AddRelationship => "link Buy to participant Buyer",
        IntentId::AddCondition => "add a condition on Buy that Car.price > 10",
        IntentId::DoneSection => "done",
        IntentId::Restart => "restart",
        IntentId::Help => "help",
        IntentId::Unrecognized => "",
    }
}

fn examples(candidates: &[IntentId], limit: usize) -> String {
    let mut out: Vec<String> = candidates.iter().take(limit).map(|i| format!("\"{}\"", example(*i))).collect();
    out.dedup();
    out.join(", ")
}

pub(super) fn not_understood(candidates: &[IntentId]) -> String {
    format!("Sorry, I didn't understand that. You can say {}, or \"help\".", examples(candidates, 3))
}

pub(super) fn help(state: &DialogueState, candidates: &[IntentId]) -> String {
    let list = if candidates.is_empty() { "\"restart\"".to_string() } else { examples(candidates, candidates.len()) };
    format!("{} Things you can say here: {list}. \"restart\" starts over at any time.", phase_prompt(state))
}

pub(super) fn phase_prompt(state: &DialogueState) -> String {
    let focus = state.focus.as_deref().map(quote).unwrap_or_default();
    match state.phase {
        Phase::Greeting | Phase::ContractName => "What should the contract be called?".into(),
        Phase::Platform => "Which platform should it target: azure, hyperledger-fabric or ethereum?".into(),
        Phase::Participants => {
            "Who takes part in the contract? (e.g. \"add a participant named Buyer\") Say \"done\" when everyone is listed."
                .into()
        }
        Phase::ParticipantParams if state.creator_pending => format!("Does {focus} create the contract? (yes/no)"),
        Phase::ParticipantParams => format!(
            "Add parameters for {focus} (e.g. \"add a parameter balance of type integer\"), another participant, or say \"done\"."
        ),
        Phase::Assets => "Now the assets: what objects of value does the contract track? (e.g. \"add an asset named Car\") Say \"done\" if there are none.".into(),
        Phase::AssetFields => {
            format!("Add fields to {focus} (e.g. \"add a field price of type decimal\"), another asset, or say \"done\".")
        }
        Phase::Transactions if state.focus.is_some() => {
            format!("Add parameters to {focus} (e.g. \"add a parameter amount of type decimal\"), another transaction, or say \"done\".")
        }
        Phase::Transactions => {
            "Now the transactions: what can participants do? (e.g. \"add a transaction named Buy\")".into()
        }
        Phase::Relationships => "Now link each transaction to who may perform it (e.g. \"link Buy to participant Buyer\") or to the asset it changes (e.g. \"link Buy to asset Car\"). Say \"done\" when finished.".into(),
        Phase::Conditions => "Any conditions? (e.g. \"add a condition on Buy that Car.price > 10\") Say \"done\" if there are none.".into(),
        Phase::Review | Phase::Generate => "Shall I generate the code? (yes/no)".into(),
        Phase::Done => FINISHED.into(),
    }
}

pub(super) fn named(name: &str) -> String {
    format!("Contract {} it is. Which platform should it target: azure, hyperledger-fabric or ethereum?", quote(name))
}

pub(super) fn platform_chosen(p: Platform) -> String {
    format!(
        "Targeting {}. Now the participants: who takes part? (e.g. \"add a participant named Buyer\")",
        p.display_name()
    )
}

pub(super) fn participant_added(name: &str) -> String {
    format!("Added participant {}. Does {name} create the contract? (yes/no)", quote(name))
}

pub(super) fn creator_answered(name: &str, yes: bool) -> String {
    let what = if yes { "creates" } else { "does not create" };
    format!(
        "Noted: {name} {what} the contract. Add parameters for {name} (e.g. \"add a parameter balance of type integer\"), another participant, or say \"done\"."
    )
}

pub(super) fn param_added(owner: &str, name: &str, ptype: &ParamType) -> String {
    format!("Added {name} ({ptype}) to {}. Add more, or say \"done\".", quote(owner))
}

pub(super) fn asset_added(name: &str) -> String {
    format!(
        "Added asset {}. Add fields (e.g. \"add a field price of type decimal\"), another asset, or say \"done\".",
        quote(name)
    )
}

pub(super) fn transaction_added(name: &str) -> String {
    format!("Added transaction {}. Add parameters, another transaction, or say \"done\".", quote(name))
}

pub(super) fn linked(r: &Relationship) -> String {
    let what = match r.kind {
        RelKind::TranRel => "participant",
        RelKind::AssetRel => "asset",
    };
    format!("Linked {} to {what} {}. Add another link or say \"done\".", quote(&r.transaction), quote(&r.target))
}

pub(super) fn condition_added(c: &Condition) -> String {
    format!("Added condition on {}: {}. Add another or say \"done\".", quote(&c.transaction), c.guard)
}

fn count(n: usize, what: &str) -> String {
    format!("{n} {what}{}", if n == 1 { "" } else { "s" })
}

pub(super) fn summary(m: &IntentionModel, issues: &[ValidationIssue]) -> String {
    let platform = m.contract.platform.map(Platform::display_name).unwrap_or("?");
    let mut s = format!(
        "Review: {} on {platform} with {}, {}, {}, {} and {}.",
        quote(&m.contract.name),
        count(m.participants.len(), "participant"),
        count(m.assets.len(), "asset"),
        count(m.transactions.len(), "transaction"),
        count(m.relationships.len(), "relationship"),
        count(m.conditions.len(), "condition"),
    );
    for w in issues.iter().filter(|i| i.severity == Severity::Warning) {
        s.push_str(&format!(" Note: {}.", w.message));
    }
    s.push_str(&format!(" Generate the {platform} code now? (yes/no)"));
    s
}

pub(super) fn must_fix(m: &IntentionModel, issues: &[ValidationIssue], first: &ValidationIssue) -> String {
    let errors: Vec<&str> =
        issues.iter().filter(|i| i.severity == Severity::Error).map(|i| i.message.as_str()).collect();
    format!("Before generating, please fix: {}. {}", errors.join("; "), requirement(m, first))
}

/// What to ask for to clear one validation error.
pub(super) fn requirement(m: &IntentionModel, issue: &ValidationIssue) -> String {
    match issue.rule {
        Rule::V1 if issue.path == "contract.name" => {
            "What should the contract be called? (e.g. \"create a contract called Vehicle Auction\")".into()
        }
        Rule::V1 => {
            format!("Which platform should {} target: azure, hyperledger-fabric or ethereum?", quote(&m.contract.name))
        }
        Rule::V2 if m.participants.is_empty() => {
            "Who takes part in the contract? (e.g. \"add a participant named Buyer\")".into()
        }
        Rule::V2 => "Which participant creates the contract? Add it and answer \"yes\" when asked.".into(),
        Rule::V4 => {
            let t = m
                .transactions
                .iter()
                .find(|t| m.relationships_of(&t.name).next().is_none())
                .map(|t| t.name.as_str())
                .unwrap_or("?");
            format!(
                "Transaction {} is not linked to anything yet. Which participant may perform it, or which asset does it change? (e.g. \"link {t} to participant Buyer\")",
                quote(t)
            )
        }
        _ => format!("Please fix: {}.", issue.message),
    }
}

pub(super) fn generated(m: &IntentionModel, artifacts: &[GeneratedArtifact]) -> String {
    let platform = m.contract.platform.map(Platform::display_name).unwrap_or("?");
    let files: Vec<&str> = artifacts.iter().map(|a| a.rel_path.as_str()).collect();
    format!("Generated {} for {platform}: {}.", count(artifacts.len(), "file"), files.join(", "))
}

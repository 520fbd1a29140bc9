use super::*;
use crate::dsl::serialize;

const GOLDEN: &str = include_str!("../../../../fixtures/vehicle_auction.icb");

pub(crate) const SCRIPT: [&str; 14] = [
    "create a contract called Vehicle Auction",
    "ethereum",
    "add a participant named Owner",
    "yes",
    "add a participant named Bidder",
    "no",
    "add an asset named Vehicle",
    "add a transaction named Place-bid",
    "add a transaction named Withdraw",
    "link Place-bid to participant Bidder",
    "link Withdraw to participant Owner",
    "done",
    "done",
    "yes",
];

fn run(lines: &[&str]) -> (DialogueState, Vec<BotTurn>) {
    let (mut s, first) = start();
    let mut turns = vec![first];
    for l in lines {
        let (n, t) = step(&s, l);
        s = n;
        turns.push(t);
    }
    (s, turns)
}

#[test]
fn start_asks_for_a_name() {
    let (s, t) = start();
    assert_eq!(s.phase, Phase::ContractName);
    assert!(t.prompt.contains("contract be called"));
    assert!(s.draft.participants.is_empty() && s.draft.assets.is_empty() && s.draft.transactions.is_empty());
    assert_eq!(start(), start());
}

#[test]
fn vehicle_auction_in_fourteen_turns() {
    let (s, turns) = run(&SCRIPT);
    assert_eq!(s.phase, Phase::Done);
    assert_eq!(serialize(&s.draft), GOLDEN);
    let last = turns.last().unwrap();
    let files: Vec<&str> = last.artifact_offer.as_ref().unwrap().iter().map(|a| a.rel_path.as_str()).collect();
    assert_eq!(files, ["contracts/Vehicle_Auction.sol", "README.md"]);
    assert_eq!(s.artifacts().unwrap(), *last.artifact_offer.as_ref().unwrap());
    // the review before the last turn offers yes/no and carries the V9 notes
    let review = &turns[13];
    assert_eq!(review.quick_replies.as_deref(), Some(&["yes".to_string(), "no".to_string()][..]));
    assert!(review.prompt.starts_with("Review: \"Vehicle Auction\" on Ethereum with 2 participants"));
    assert_eq!(s.transcript.len(), 1 + 2 * SCRIPT.len());
}

#[test]
fn phases_along_the_script() {
    let (mut s, _) = start();
    let mut phases = Vec::new();
    for l in SCRIPT {
        s = step(&s, l).0;
        phases.push(s.phase);
    }
    use Phase::*;
    assert_eq!(
        phases,
        [
            Platform,
            Participants,
            ParticipantParams,
            ParticipantParams,
            ParticipantParams,
            ParticipantParams,
            AssetFields,
            Transactions,
            Transactions,
            Relationships,
            Relationships,
            Conditions,
            Review,
            Done
        ]
    );
}

#[test]
fn quick_replies_follow_the_awaited_slot() {
    let (_, turns) = run(&SCRIPT[..4]);
    assert!(turns[0].quick_replies.is_none());
    assert_eq!(turns[1].quick_replies.as_ref().unwrap(), &["azure", "hyperledger-fabric", "ethereum"]);
    assert!(turns[2].quick_replies.is_none());
    assert_eq!(turns[3].quick_replies.as_ref().unwrap(), &["yes", "no"]);
    assert!(turns[4].quick_replies.is_none());
}

#[test]
fn restart_anywhere_gives_the_start_state() {
    for k in 0..SCRIPT.len() {
        let (s, _) = run(&SCRIPT[..k]);
        let (r, t) = step(&s, "restart");
        assert_eq!((r, t), start(), "after {k} turns");
    }
    let (done, _) = run(&SCRIPT);
    assert_eq!(step(&done, "start over").0, start().0);
}

#[test]
fn unrecognized_changes_nothing_but_the_transcript() {
    let (s, _) = run(&SCRIPT[..3]);
    let (n, t) = step(&s, "the weather is nice");
    assert!(t.prompt.starts_with("Sorry, I didn't understand that."));
    assert_eq!((n.phase, &n.draft, &n.focus, n.creator_pending), (s.phase, &s.draft, &s.focus, s.creator_pending));
    assert_eq!(n.transcript.len(), s.transcript.len() + 2);
    assert_eq!(n.transcript[..s.transcript.len()], s.transcript[..]);
}

#[test]
fn help_lists_phase_examples() {
    let (s, _) = run(&SCRIPT[..2]);
    let (n, t) = step(&s, "help");
    assert!(t.prompt.contains("\"add a participant named Buyer\""));
    assert_eq!(n.draft, s.draft);
}

#[test]
fn rejects_unknown_references_on_the_spot() {
    let (s, _) = run(&SCRIPT[..9]);
    let (n, t) = step(&s, "link Bid to participant Bidder");
    assert!(t.prompt.starts_with("Sorry, tranrel references unknown transaction \"Bid\""), "{}", t.prompt);
    assert_eq!(n.draft, s.draft);
    let (_, t) = step(&s, "link Withdraw to asset Bidder");
    assert!(t.prompt.contains("not a declared asset"), "{}", t.prompt);
}

#[test]
fn rejects_clashing_and_reserved_names() {
    let (s, _) = run(&SCRIPT[..4]);
    // mangling keeps case, so `owner` is a distinct name
    let (n, t) = step(&s, "add a participant named owner!");
    assert_eq!(n.draft.participants.len(), 2, "{}", t.prompt);
    let (_, t) = step(&s, "add a participant named Owner");
    assert!(t.prompt.contains("clashes with participant \"Owner\""), "{}", t.prompt);
    let (_, t) = step(&s, "add an asset named mapping");
    assert!(t.prompt.contains("reserved word on Ethereum"), "{}", t.prompt);
    let (_, t) = step(&s, "add an asset named 42");
    assert!(t.prompt.contains("does not yield a code identifier"), "{}", t.prompt);
}

#[test]
fn conditions_are_parsed_and_type_checked() {
    let (s, _) = run(&[
        "create a contract called Shop",
        "azure",
        "add a participant named Buyer",
        "yes",
        "add a parameter budget of type decimal",
        "add an asset named Car",
        "add a field price of type decimal",
        "add a field model of type text",
        "add a transaction named Buy",
        "link Buy to participant Buyer",
        "link Buy to asset Car",
    ]);
    let (n, t) = step(&s, "add a condition on Buy that Buyer.budget >= Car.price");
    assert!(t.prompt.starts_with("Added condition on \"Buy\": Buyer.budget >= Car.price"), "{}", t.prompt);
    assert_eq!(n.phase, Phase::Conditions);
    let (_, t) = step(&n, "Buy requires Car.model > 3");
    assert!(t.prompt.starts_with("Sorry,") && t.prompt.contains("compares text with integer"), "{}", t.prompt);
    let (_, t) = step(&n, "Buy requires Car.colour == \"red\"");
    assert!(t.prompt.starts_with("Sorry,"), "{}", t.prompt);
    let (_, t) = step(&n, "Buy requires 1 < 2");
    assert!(t.prompt.contains("at least one field"), "{}", t.prompt);
    let (_, t) = step(&n, "Buy requires Car.model == \"big.red\"");
    assert!(t.prompt.starts_with("Added condition"), "{}", t.prompt);
}

#[test]
fn review_routes_back_to_the_missing_piece() {
    let (s, _) = run(&[
        "create a contract called Shop",
        "ethereum",
        "add a participant named Buyer",
        "no",
        "add a transaction named Buy",
        "done",
        "done",
        "done",
    ]);
    // no creator and an unlinked transaction: the creator comes first
    assert_eq!(s.phase, Phase::Participants);
    let last = s.transcript.last().unwrap();
    assert!(last.text.starts_with("Before generating, please fix:"), "{}", last.text);
    let (s, _) = {
        let (mut s, mut t) = (s, BotTurn::default());
        for l in ["add a participant named Seller", "yes", "done", "done", "done", "done", "done"] {
            (s, t) = step(&s, l);
        }
        (s, t)
    };
    assert_eq!(s.phase, Phase::Relationships);
    let (s, _) = step(&s, "link Buy to participant Buyer");
    let (s, _) = step(&s, "done");
    let (s, t) = step(&s, "done");
    assert_eq!(s.phase, Phase::Review, "{}", t.prompt);
}

#[test]
fn confirm_no_goes_back_to_editing() {
    let (s, _) = run(&SCRIPT[..13]);
    let (n, t) = step(&s, "no");
    assert_eq!(n.phase, Phase::Participants);
    assert!(t.artifact_offer.is_none());
    assert_eq!(n.draft, s.draft);
}

#[test]
fn done_state_only_restarts() {
    let (s, _) = run(&SCRIPT);
    let (n, t) = step(&s, "add a participant named Eve");
    assert_eq!(n.draft, s.draft);
    assert_eq!(n.phase, Phase::Done);
    assert!(t.prompt.contains("restart"));
}

#[test]
fn missing_next_examples() {
    let (s, _) = start();
    assert!(missing_next(&s).unwrap().contains("contract be called"));
    let mut s2 = s.clone();
    s2.draft = vehicle_auction();
    assert_eq!(missing_next(&s2), None);
    s2.draft.relationships.clear();
    let p = missing_next(&s2).unwrap();
    assert!(p.contains("\"Place-bid\"") && p.contains("participant") && p.contains("asset"), "{p}");
}

#[test]
fn forward_skip_is_one_way() {
    let (s, _) = run(&SCRIPT[..8]);
    assert_eq!(s.phase, Phase::Transactions);
    // a one-word substitution of a 4-word template still scores 3/5 = 0.6
    let (n, t) = step(&s, "new participant Late");
    assert!(t.prompt.starts_with("Sorry, I didn't understand"), "{}", t.prompt);
    assert_eq!(n.draft, s.draft);
}

#[test]
fn params_attach_to_the_focus() {
    let (s, _) = run(&[
        "create a contract called Shop",
        "ethereum",
        "add a participant named Buyer",
        "add a parameter wallet of type address",
        "add an asset named Car",
        "add a field sold of type bool",
        "add a transaction named Buy",
        "add a parameter amount of type money",
    ]);
    assert_eq!(s.draft.participants[0].params, [Param::new("wallet", ParamType::Identity)]);
    assert!(!s.draft.participants[0].creator, "answering with a param leaves creator unset");
    assert_eq!(s.draft.assets[0].fields, [Param::new("sold", ParamType::Boolean)]);
    assert_eq!(s.draft.transactions[0].params, [Param::new("amount", ParamType::Decimal)]);
}

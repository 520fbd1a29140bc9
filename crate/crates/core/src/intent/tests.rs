use std::collections::{BTreeMap, HashSet};

use proptest::prelude::*;

use super::*;

fn slots(pairs: &[(&str, &str)]) -> BTreeMap<String, String> {
    pairs.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect()
}

#[test]
fn create_contract_exact() {
    let m = classify("create a contract called Vehicle Auction", &[IntentId::CreateContract]);
    assert_eq!(
        m,
        IntentMatch { intent: IntentId::CreateContract, slots: slots(&[("name", "Vehicle Auction")]), score: 1.0 }
    );
}

#[test]
fn empty_is_unrecognized() {
    assert_eq!(classify("", &IntentId::TABLE), IntentMatch::unrecognized());
    assert_eq!(classify("  \t ", &IntentId::TABLE), IntentMatch::unrecognized());
    assert_eq!(classify("?!", &IntentId::TABLE), IntentMatch::unrecognized());
}

#[test]
fn platform_enum() {
    let m = classify("ethereum", &[IntentId::ChoosePlatform]);
    assert_eq!(
        m,
        IntentMatch { intent: IntentId::ChoosePlatform, slots: slots(&[("platform", "ethereum")]), score: 1.0 }
    );
    assert_eq!(
        classify("Hyperledger Fabric", &[IntentId::ChoosePlatform]).slot("platform"),
        Some("hyperledger-fabric")
    );
    assert_eq!(classify("deploy it on azure", &[IntentId::ChoosePlatform]).slot("platform"), Some("azure"));
    assert_eq!(classify("solana", &[IntentId::ChoosePlatform]).intent, IntentId::Unrecognized);
}

#[test]
fn platform_options_are_the_three_targets() {
    let def = IntentTable::shipped().get(IntentId::ChoosePlatform).unwrap();
    let SlotType::Enum(opts) = &def.slots[0].ty else { panic!("platform is an enum") };
    let values: HashSet<&str> = opts.iter().map(|o| o.value.as_str()).collect();
    assert_eq!(values, HashSet::from(["azure", "hyperledger-fabric", "ethereum"]));
}

#[test]
fn shipped_table_shape() {
    let table = shipped_intent_table();
    let ids: Vec<IntentId> = table.iter().map(|d| d.id).collect();
    assert_eq!(ids, IntentId::TABLE);
    for d in table {
        assert!(d.expressions.len() >= 3, "{}", d.id);
        let names: HashSet<&str> = d.slots.iter().map(|s| s.name.as_str()).collect();
        assert_eq!(names, d.id.slot_names().iter().copied().collect(), "{}", d.id);
        for e in &d.expressions {
            for s in &d.slots {
                assert_eq!(e.matches(&format!("{{{}}}", s.name)).count(), 1, "{e}");
            }
        }
    }
}

#[test]
fn normalized_expressions_are_unique() {
    let all: Vec<(IntentId, String)> =
        shipped_intent_table().iter().flat_map(|d| d.normalized_expressions().map(move |e| (d.id, e))).collect();
    for (i, a) in all.iter().enumerate() {
        for b in &all[i + 1..] {
            assert_ne!(a.1, b.1, "{} and {} share an expression", a.0, b.0);
        }
    }
}

#[test]
fn every_expression_matches_itself_exactly() {
    // Fill each slot with a value its type accepts and expect score 1.
    for d in shipped_intent_table() {
        for e in &d.expressions {
            let mut u = e.clone();
            let mut want = BTreeMap::new();
            for s in &d.slots {
                let (typed, canon) = match &s.ty {
                    SlotType::Text => ("Zork".to_string(), "Zork".to_string()),
                    SlotType::Operand => ("Zork.size".to_string(), "Zork.size".to_string()),
                    SlotType::YesNo => ("yes".into(), "yes".into()),
                    SlotType::Enum(o) => (o[0].value.clone(), o[0].value.clone()),
                };
                u = u.replace(&format!("{{{}}}", s.name), &typed);
                want.insert(s.name.clone(), canon);
            }
            let m = classify(&u, &[d.id]);
            assert_eq!((m.intent, m.score), (d.id, 1.0), "{u}");
            assert_eq!(m.slots, want, "{u}");
        }
    }
}

#[test]
fn greedy_capture_of_multiword_names() {
    let m = classify("add a transaction named Place a bid now", &[IntentId::AddTransaction]);
    assert_eq!(m.slot("name"), Some("Place a bid now"));
}

#[test]
fn relationship_and_condition_slots() {
    let m = classify("link Place-bid to participant Bidder", &[IntentId::AddRelationship]);
    assert_eq!(m.slots, slots(&[("kind", "tranrel"), ("target", "Bidder"), ("transaction", "Place-bid")]));
    let m =
        classify("add a condition on Place-bid that Place-bid.amount is greater than 10", &[IntentId::AddCondition]);
    assert_eq!(m.score, 1.0);
    assert_eq!(
        m.slots,
        slots(&[("lhs", "Place-bid.amount"), ("op", ">"), ("rhs", "10"), ("transaction", "Place-bid")])
    );
}

#[test]
fn operands_are_single_terms() {
    let m = classify("only allow Withdraw when \"Vehicle Auction\".open is true", &[IntentId::AddCondition]);
    assert_eq!(m.slot("lhs"), Some("\"Vehicle Auction\".open"));
    assert_eq!((m.slot("op"), m.slot("rhs")), (Some("=="), Some("true")));
    let m = classify("Withdraw requires Car.x == \"two words\"", &[IntentId::AddCondition]);
    assert_eq!(m.slot("rhs"), Some("\"two words\""));
    // the text slot cannot swallow half of a quoted owner
    let m = classify("condition on Place bid \"Place bid\".kind != \"x\"", &[IntentId::AddCondition]);
    assert_eq!((m.slot("transaction"), m.slot("lhs")), (Some("Place bid"), Some("\"Place bid\".kind")));
    // bare words are not operands
    assert_eq!(classify("Withdraw requires x == 1", &[IntentId::AddCondition]).intent, IntentId::Unrecognized);
}

#[test]
fn similarity_fallback() {
    let m = classify("please add participant Carol", &[IntentId::AddParticipant]);
    assert_eq!(m.intent, IntentId::AddParticipant);
    assert_eq!(m.slot("name"), Some("Carol"));
    assert!(m.score >= THRESHOLD && m.score < 1.0);
    // 2 of 3 literals of `add a participant called {name}` and no extras
    let m = classify("add participant called Dave", &[IntentId::AddParticipant]);
    assert_eq!(m.intent, IntentId::AddParticipant);
    assert_eq!(m.score, 1.0, "`add participant {{name}}` absorbs `called Dave`");
}

#[test]
fn below_threshold_is_unrecognized() {
    let m = classify("what is the weather like today", &[IntentId::AddAsset, IntentId::DoneSection]);
    assert_eq!(m, IntentMatch::unrecognized());
}

#[test]
fn context_restricts_results() {
    let m = classify("add an asset named Car", &[IntentId::AddParticipant]);
    assert_ne!(m.intent, IntentId::AddAsset);
    assert_eq!(classify("restart", &[IntentId::AddAsset]).intent, IntentId::Restart);
    assert_eq!(classify("help", &[]).intent, IntentId::Help);
}

#[test]
fn yes_no_canonicalizes() {
    assert_eq!(classify("Yep", &[IntentId::Confirm]).slot("answer"), Some("yes"));
    assert_eq!(classify("nope.", &[IntentId::MarkCreator]).slot("creator"), Some("no"));
}

#[test]
fn ties_go_to_table_order() {
    // `{creator}` and `{answer}` accept the same words; mark_creator is first.
    let m = classify("yes", &[IntentId::Confirm, IntentId::MarkCreator]);
    assert_eq!(m.intent, IntentId::MarkCreator);
}

#[test]
fn tokenize_strips_terminal_punctuation() {
    assert_eq!(normalize("  Add   an Asset, named Car!! "), "add an asset named car");
    assert_eq!(normalize("x > 1.5."), "x > 1.5");
    assert_eq!(normalize("done . ?"), "done");
}

fn table_err(src: &str) -> String {
    src.parse::<IntentTable>().unwrap_err().to_string()
}

#[test]
fn loader_round_trips_the_shipped_source() {
    let t: IntentTable = IntentTable::shipped_source().parse().unwrap();
    assert_eq!(&t, IntentTable::shipped());
}

#[test]
fn loader_accepts_extra_expressions() {
    let src = format!("{}\nexpr = mint a token named {{name}}\n", IntentTable::shipped_source().trim_end());
    // the appended line lands in the last intent, `help`, which has no slots
    assert!(table_err(&src).contains("undeclared slot"));
    let src = IntentTable::shipped_source().replace(
        "intent = add_asset\nslot = name : text\n",
        "intent = add_asset\nslot = name : text\nexpr = mint a token named {name}\n",
    );
    let t: IntentTable = src.parse().unwrap();
    assert_eq!(t.classify("mint a token named Coin", &[IntentId::AddAsset]).slot("name"), Some("Coin"));
}

#[test]
fn loader_errors_carry_lines() {
    assert_eq!(table_err("expr = x"), "line 1: `expr` before any `intent`");
    assert_eq!(table_err("intent = nope"), "line 1: unknown intent `nope`");
    assert_eq!(table_err("intent = help\n\nfoo"), "line 3: expected `key = value`");
    assert!(table_err("intent = help\nexpr = help").contains("intent `create_contract` is missing"));
    assert!(table_err("intent = add_asset\nslot = name : text\nexpr = asset").contains("does not use slot `{name}`"));
    assert!(table_err("intent = add_asset\nslot = name : blob").contains("unknown slot type"));
    assert!(table_err("intent = add_asset\nslot = color : text").contains("has no slot `color`"));
    assert!(table_err("intent = add_asset\nexpr = asset").contains("lacks slot(s) name"));
    let dup = IntentTable::shipped_source().replace("expr = show help", "expr = Help!");
    assert!(table_err(&dup).contains("appears twice"));
}

proptest! {
    #[test]
    fn normalization_invariance(
        idx in 0usize..40,
        ws in prop::collection::vec(prop::sample::select(vec![" ", "  ", "\t", " \n "]), 12),
        lead in prop::sample::select(vec!["", " ", "\t"]),
        tail in prop::sample::select(vec!["", ".", "!", "?", "...", " ?", "!!"]),
        upper in prop::collection::vec(any::<bool>(), 12),
    ) {
        let base = [
            "create a contract called Vehicle Auction",
            "ethereum",
            "add a participant named Owner",
            "yes",
            "add an asset named Vehicle",
            "link Withdraw to participant Owner",
            "add a parameter Price of type decimal",
            "Place-bid requires Place-bid.amount >= 5",
            "done",
            "start over",
        ];
        let u = base[idx % base.len()];
        let words: Vec<&str> = u.split(' ').collect();
        let mut v = lead.to_string();
        for (i, w) in words.iter().enumerate() {
            if i > 0 {
                v.push_str(ws[i % ws.len()]);
            }
            // case changes on the words the template owns
            let lit = !w.chars().next().unwrap().is_uppercase() && !w.contains('.');
            if lit && upper[i % upper.len()] { v.push_str(&w.to_uppercase()) } else { v.push_str(w) }
        }
        v.push_str(tail);
        prop_assert_eq!(classify(&v, &IntentId::TABLE), classify(u, &IntentId::TABLE));
    }

    #[test]
    fn whole_case_changes_only_fold_slots(idx in 0usize..5) {
        let u = ["create a contract called Vehicle Auction", "add a participant named Owner",
                 "link Withdraw to participant Owner", "ethereum", "done"][idx];
        let a = classify(u, &IntentId::TABLE);
        let b = classify(&u.to_uppercase(), &IntentId::TABLE);
        prop_assert_eq!(a.intent, b.intent);
        prop_assert_eq!(a.score, b.score);
        let fold = |m: &IntentMatch| m.slots.iter().map(|(k, v)| (k.clone(), v.to_lowercase())).collect::<Vec<_>>();
        prop_assert_eq!(fold(&a), fold(&b));
    }

    #[test]
    fn results_respect_candidates(
        u in "[a-zA-Z .!?-]{0,40}",
        mask in prop::collection::vec(any::<bool>(), 13),
    ) {
        let cands: Vec<IntentId> = IntentId::TABLE.iter().zip(&mask).filter(|(_, m)| **m).map(|(i, _)| *i).collect();
        let m = classify(&u, &cands);
        prop_assert!(m.intent == IntentId::Unrecognized || m.intent.is_global() || cands.contains(&m.intent));
        if m.intent == IntentId::Unrecognized {
            prop_assert!(m.slots.is_empty() && m.score == 0.0);
        } else {
            prop_assert!(m.score >= THRESHOLD && m.score <= 1.0);
            let names: Vec<&str> = m.slots.keys().map(String::as_str).collect();
            let mut want = m.intent.slot_names().to_vec();
            want.sort();
            prop_assert_eq!(names, want);
        }
        prop_assert_eq!(classify(&u, &cands), m);
    }
}

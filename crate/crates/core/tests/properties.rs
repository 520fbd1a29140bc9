//! Seeded property suites over the public API.

use icb_core::codegen::generate_for;
use icb_core::dialogue::{candidates, start, step};
use icb_core::intent::{classify, IntentTable};
use icb_core::model::{vehicle_auction, Platform};
use icb_core::testkit::{
    check_structure, context_for, error_rules, mutants, perturbations, random_conversation, random_model, rng,
    sample_utterance,
};
use icb_core::{generate, parse, serialize, validate, Severity};

#[test]
fn random_models_round_trip() {
    let mut r = rng(7);
    for i in 0..200 {
        let m = random_model(&mut r);
        let text = serialize(&m);
        let back = parse(&text).unwrap_or_else(|e| panic!("model {i} failed to parse: {e:?}\n{text}"));
        assert_eq!(back, m, "model {i}:\n{text}");
        assert_eq!(serialize(&back), text, "model {i} not idempotent");
    }
}

#[test]
fn every_mutant_is_caught_by_its_rule_only() {
    assert!(error_rules(&vehicle_auction()).is_empty());
    for mutant in mutants(42, 1000) {
        let got = error_rules(&mutant.model);
        assert_eq!(
            got,
            mutant.expected(),
            "seed {} kind {:?}: {}\n{}",
            mutant.seed,
            mutant.kind,
            mutant.description,
            serialize(&mutant.model)
        );
    }
}

#[test]
fn random_conversations_build_the_expected_model() {
    let mut r = rng(11);
    for i in 0..500 {
        let conv = random_conversation(&mut r);
        let (mut state, _) = start();
        for line in &conv.lines {
            let (next, turn) = step(&state, line);
            assert!(
                !turn.prompt.starts_with("Sorry"),
                "conversation {i} rejected {line:?}: {}\n{:#?}",
                turn.prompt,
                conv.lines
            );
            state = next;
        }
        assert!(state.is_done(), "conversation {i} ended in {:?}\n{:#?}", state.phase, conv.lines);
        assert_eq!(state.draft, conv.expected, "conversation {i}\n{:#?}", conv.lines);
        let errors = validate(&state.draft).into_iter().filter(|x| x.severity == Severity::Error).count();
        assert_eq!(errors, 0, "conversation {i}");
        assert!(conv.lines.len() <= 3 + 4 * conv.entity_count(), "conversation {i} too long");

        let arts = state.artifacts().expect("artifacts after done");
        let report = check_structure(&state.draft, &arts);
        assert!(report.ok(), "conversation {i}\n{report}");
    }
}

#[test]
fn perturbed_expressions_keep_intent_and_slots() {
    let mut r = rng(3);
    let mut total = 0;
    for def in IntentTable::shipped().intents() {
        let ctx = context_for(def.id);
        for expr in &def.expressions {
            let sample = sample_utterance(def, expr);
            let exact = classify(&sample.text(), &ctx);
            assert_eq!((exact.intent, &exact.slots), (def.id, &sample.slots), "{expr:?}");
            for v in perturbations(&sample, &mut r, 6) {
                let got = classify(&v, &ctx);
                assert_eq!(got.intent, def.id, "{v:?} from {expr:?}");
                assert_eq!(got.slots, sample.slots, "{v:?} from {expr:?}");
                total += 1;
            }
        }
    }
    assert!(total >= 5 * 50);
}

#[test]
fn initial_context_contains_contract_naming() {
    let (s, _) = start();
    assert_eq!(candidates(&s), context_for(icb_core::IntentId::CreateContract));
}

#[test]
fn generation_is_stable_and_structurally_sound() {
    for p in Platform::ALL {
        let mut m = vehicle_auction();
        m.contract.platform = Some(p);
        let runs: Vec<_> = (0..3).map(|_| generate_for(&m, p).unwrap()).collect();
        assert_eq!(runs[0], runs[1]);
        assert_eq!(runs[1], runs[2]);
        let report = check_structure(&m, &runs[0]);
        assert!(report.ok(), "{p:?}\n{report}");
    }
}

#[test]
fn structure_checker_notices_a_missing_function() {
    let m = vehicle_auction();
    let mut arts = generate(&m).unwrap();
    let sol = arts.iter_mut().find(|a| a.rel_path.ends_with(".sol")).unwrap();
    sol.content = sol.content.replacen("function ", "// function ", 1);
    let report = check_structure(&m, &arts);
    assert!(!report.ok());
    assert!(report.failures().iter().any(|c| c.what == "functions"));
}

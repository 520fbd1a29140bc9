use proptest::prelude::*;

use super::*;
use crate::model::*;

const GOLDEN: &str = include_str!("../../../../fixtures/vehicle_auction.icb");

#[test]
fn parses_vehicle_auction_golden() {
    let m = parse(GOLDEN).unwrap();
    assert_eq!(m, vehicle_auction());
    assert_eq!(m.contract.name, "Vehicle Auction");
    assert_eq!(m.contract.platform, Some(Platform::Ethereum));
    assert!(m.participants[0].creator && !m.participants[1].creator);
}

#[test]
fn serializes_vehicle_auction_byte_identical() {
    assert_eq!(serialize(&vehicle_auction()), GOLDEN);
}

#[test]
fn minimal_contract() {
    let m = parse(r#"contract "X" on ethereum { }"#).unwrap();
    assert_eq!(m, IntentionModel::new("X", Platform::Ethereum));
    assert_eq!(serialize(&m), "contract \"X\" on ethereum {\n}\n");
}

#[test]
fn header_without_block_or_platform() {
    let m = parse("contract \"X\"").unwrap();
    assert_eq!(m.contract.platform, None);
    assert_eq!(serialize(&m), "contract \"X\" {\n}\n");
    assert_eq!(parse(&serialize(&m)).unwrap(), m);
}

#[test]
fn comments_and_params() {
    let src = r#"
# an auction
contract "A" on hyperledger-fabric {
  participant "Owner" creator {
    balance: integer   # trailing comment
    wallet: identity
  }
  asset "Car" {
    price: decimal
  }
  transaction "Buy" {
    amount: decimal
  }
  assetrel "Buy" -> "Car"
  condition on "Buy": Car.price <= Buy.amount
  condition on "Buy": "Owner".balance != -5
  condition on "Buy": true == Owner.flag
}
"#;
    let m = parse(src).unwrap();
    assert_eq!(m.participants[0].params[1], Param::new("wallet", ParamType::Identity));
    assert_eq!(m.relationships[0], Relationship::asset("Buy", "Car"));
    assert_eq!(
        m.conditions[0].guard,
        Comparison {
            lhs: Operand::Path(FieldPath::new("Car", "price")),
            op: CompareOp::Le,
            rhs: Operand::Path(FieldPath::new("Buy", "amount")),
        }
    );
    assert_eq!(m.conditions[1].guard.rhs, Operand::Literal(Literal::Integer(-5)));
    assert_eq!(m.conditions[2].guard.lhs, Operand::Literal(Literal::Boolean(true)));
    assert_eq!(parse(&serialize(&m)).unwrap(), m);
}

#[test]
fn unknown_param_type_is_kept_for_the_validator() {
    let m = parse("contract \"A\" on azure {\n  asset \"C\" {\n    price: money\n  }\n}\n").unwrap();
    assert_eq!(m.assets[0].fields[0].ptype, ParamType::Unsupported("money".into()));
}

#[test]
fn reports_line_and_column() {
    let errs = parse("contract \"A\" on ethereum {\n  asset Car { }\n}\n").unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!((errs[0].line, errs[0].column), (2, 9));
    assert_eq!(errs[0].expected, "quoted asset name");
    assert_eq!(errs[0].found, "`Car`");
}

#[test]
fn unknown_platform_is_an_error() {
    let errs = parse("contract \"A\" on solana { }").unwrap_err();
    assert_eq!(errs[0].column, 17);
    assert!(errs[0].expected.contains("platform"));
}

#[test]
fn literal_only_guard_is_rejected() {
    let errs = parse("contract \"A\" {\n  condition on \"T\": 1 < 2\n}\n").unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].line, 2);
}

#[test]
fn recovers_across_blocks() {
    let src = "contract \"A\" on ethereum {\n  participant \"P\" { x text }\n  asset { }\n  transaction \"T\" { }\n  tranrel \"T\" \"P\"\n}\n";
    let errs = parse(src).unwrap_err();
    let lines: Vec<_> = errs.iter().map(|e| e.line).collect();
    assert_eq!(lines, vec![2, 3, 5]);
}

#[test]
fn unclosed_block_is_reported_inside_it() {
    let src = "contract \"A\" on ethereum {\n  participant \"P\" {\n    x: text\n  transaction \"T\" { }\n}\n";
    let errs = parse(src).unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].line, 3);
}

#[test]
fn missing_contract_brace_at_eof() {
    let errs = parse("contract \"A\" on ethereum {\n  asset \"V\" { }\n").unwrap_err();
    assert_eq!(errs.len(), 1);
    assert_eq!(errs[0].line, 2);
}

#[test]
fn empty_source() {
    let errs = parse("").unwrap_err();
    assert_eq!(errs[0].expected, "`contract`");
}

#[test]
fn string_escapes_round_trip() {
    let mut m = IntentionModel::new("Say \"hi\"\\now\n", Platform::Azure);
    m.assets.push(Asset::new("tab\there"));
    assert_eq!(parse(&serialize(&m)).unwrap(), m);
}

// ---- properties -------------------------------------------------------

fn display_name() -> impl Strategy<Value = String> {
    "[A-Za-z0-9 _\\-\"\\\\.é]{0,12}"
}

fn bare_name() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9_-]{0,8}"
}

fn ptype() -> impl Strategy<Value = ParamType> {
    prop_oneof![
        Just(ParamType::Text),
        Just(ParamType::Integer),
        Just(ParamType::Decimal),
        Just(ParamType::Boolean),
        Just(ParamType::Identity),
        bare_name().prop_map(|n| ParamType::from_keyword(&n)),
    ]
}

fn params() -> impl Strategy<Value = Vec<Param>> {
    prop::collection::vec((bare_name(), ptype()).prop_map(|(n, t)| Param::new(n, t)), 0..3)
}

fn literal() -> impl Strategy<Value = Literal> {
    prop_oneof![
        display_name().prop_map(Literal::Text),
        any::<i64>().prop_map(Literal::Integer),
        (any::<i32>(), 0u32..10_000).prop_map(|(i, f)| Literal::Decimal(format!("{i}.{f}"))),
        any::<bool>().prop_map(Literal::Boolean),
    ]
}

fn path() -> impl Strategy<Value = FieldPath> {
    (display_name(), bare_name()).prop_map(|(o, f)| FieldPath::new(o, f))
}

fn comparison() -> impl Strategy<Value = Comparison> {
    let op = prop::sample::select(CompareOp::ALL.to_vec());
    let other = prop_oneof![path().prop_map(Operand::Path), literal().prop_map(Operand::Literal)];
    (path(), op, other, any::<bool>()).prop_map(|(p, op, other, flip)| {
        let p = Operand::Path(p);
        if flip {
            Comparison { lhs: other, op, rhs: p }
        } else {
            Comparison { lhs: p, op, rhs: other }
        }
    })
}

prop_compose! {
    fn model()(
        name in display_name(),
        platform in prop::option::of(prop::sample::select(Platform::ALL.to_vec())),
        participants in prop::collection::vec((display_name(), any::<bool>(), params()), 0..4),
        assets in prop::collection::vec((display_name(), params()), 0..3),
        transactions in prop::collection::vec((display_name(), params()), 0..4),
        relationships in prop::collection::vec((any::<bool>(), display_name(), display_name()), 0..4),
        conditions in prop::collection::vec((display_name(), comparison()), 0..3),
    ) -> IntentionModel {
        IntentionModel {
            contract: ContractHeader { name, platform },
            participants: participants.into_iter().map(|(name, creator, params)| Participant { name, creator, params }).collect(),
            assets: assets.into_iter().map(|(name, fields)| Asset { name, fields }).collect(),
            transactions: transactions.into_iter().map(|(name, params)| Transaction { name, params }).collect(),
            relationships: relationships
                .into_iter()
                .map(|(tran, transaction, target)| Relationship {
                    kind: if tran { RelKind::TranRel } else { RelKind::AssetRel },
                    transaction,
                    target,
                })
                .collect(),
            conditions: conditions.into_iter().map(|(transaction, guard)| Condition { transaction, guard }).collect(),
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn round_trip(m in model()) {
        let text = serialize(&m);
        prop_assert_eq!(parse(&text).unwrap(), m);
    }

    #[test]
    fn serialization_is_a_fixpoint(m in model()) {
        let once = serialize(&m);
        let twice = serialize(&parse(&once).unwrap());
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn declaration_order_is_preserved(mut names in prop::collection::vec("[a-z]{1,6}", 1..6), seed in any::<u64>()) {
        names.dedup();
        let mut src = String::from("contract \"X\" on azure {\n");
        let mut rotated = names.clone();
        let k = (seed as usize) % rotated.len();
        rotated.rotate_left(k);
        for n in &rotated {
            src.push_str(&format!("  asset \"{n}\" {{ }}\n"));
        }
        src.push_str("}\n");
        let m = parse(&src).unwrap();
        let got: Vec<_> = m.assets.iter().map(|a| a.name.clone()).collect();
        prop_assert_eq!(got, rotated);
    }

    /// Corrupting one declaration yields errors only inside its lines.
    #[test]
    fn errors_stay_inside_the_corrupted_block(m in model(), pick in any::<prop::sample::Index>(), col in any::<prop::sample::Index>()) {
        let text = serialize(&m);
        let lines: Vec<&str> = text.lines().collect();
        // declaration spans: [start, end] line numbers (1-based)
        let mut spans = Vec::new();
        let mut i = 1;
        while i < lines.len() - 1 {
            let start = i;
            if lines[i].ends_with('{') {
                while !lines[i].trim_start().starts_with('}') { i += 1; }
            }
            spans.push((start + 1, i + 1));
            i += 1;
        }
        prop_assume!(!spans.is_empty());
        let (start, end) = spans[pick.index(spans.len())];
        let victim = start - 1 + col.index(end - start + 1);
        let line = lines[victim];
        let indent = line.len() - line.trim_start().len();
        let mut corrupted: Vec<String> = lines.iter().map(|s| s.to_string()).collect();
        corrupted[victim] = format!("{}@{}", &line[..indent], &line[indent..]);
        let errs = parse(&(corrupted.join("\n") + "\n")).unwrap_err();
        prop_assert!(!errs.is_empty());
        for e in &errs {
            prop_assert!(e.line >= start && e.line <= end, "error {} outside {}..={}\n{}", e, start, end, corrupted.join("\n"));
        }
    }
}

#[test]
fn single_operands() {
    assert_eq!(parse_operand("Vehicle.price"), Ok(Operand::Path(FieldPath::new("Vehicle", "price"))));
    assert_eq!(parse_operand("\"Vehicle Auction\".open"), Ok(Operand::Path(FieldPath::new("Vehicle Auction", "open"))));
    assert_eq!(parse_operand("-2.5"), Ok(Operand::Literal(Literal::Decimal("-2.5".into()))));
    assert_eq!(parse_operand("true"), Ok(Operand::Literal(Literal::Boolean(true))));
    assert!(parse_operand("Vehicle").is_err());
    assert!(parse_operand("1 2").is_err());
    assert!(parse_operand("").is_err());
}

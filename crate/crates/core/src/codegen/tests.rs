use std::path::PathBuf;

use super::*;
use crate::validator::Rule;

fn snapshot_dir(platform: Platform) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/snapshots").join(platform.keyword())
}

/// Compares against frozen files; `ICB_BLESS=1` rewrites them.
fn assert_snapshot(platform: Platform, artifacts: &[GeneratedArtifact]) {
    let dir = snapshot_dir(platform);
    let bless = std::env::var_os("ICB_BLESS").is_some();
    for a in artifacts {
        let path = dir.join(&a.rel_path);
        if bless {
            std::fs::create_dir_all(path.parent().unwrap()).unwrap();
            std::fs::write(&path, &a.content).unwrap();
        }
        let frozen = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        assert_eq!(a.content, frozen, "snapshot mismatch for {}", path.display());
    }
}

fn paths(a: &[GeneratedArtifact]) -> Vec<&str> {
    a.iter().map(|a| a.rel_path.as_str()).collect()
}

fn rich_model() -> IntentionModel {
    let mut m = vehicle_auction();
    m.participants[0].params.push(Param::new("balance", ParamType::Integer));
    m.participants[1].params.push(Param::new("wallet", ParamType::Identity));
    m.participants[1].params.push(Param::new("deposit", ParamType::Decimal));
    m.assets[0].fields.push(Param::new("price", ParamType::Decimal));
    m.assets[0].fields.push(Param::new("plate", ParamType::Text));
    m.transactions[0].params.push(Param::new("amount", ParamType::Decimal));
    m.relationships.push(Relationship::asset("Place-bid", "Vehicle"));
    let cond = |lhs, op, rhs| Condition { transaction: "Place-bid".into(), guard: Comparison { lhs, op, rhs } };
    m.conditions = vec![
        cond(
            Operand::Path(FieldPath::new("Place-bid", "amount")),
            CompareOp::Gt,
            Operand::Path(FieldPath::new("Vehicle", "price")),
        ),
        cond(Operand::Path(FieldPath::new("Bidder", "deposit")), CompareOp::Ge, Operand::Literal(Literal::Integer(1))),
        cond(
            Operand::Path(FieldPath::new("Vehicle", "plate")),
            CompareOp::Ne,
            Operand::Literal(Literal::Text("\"stolen\"".into())),
        ),
    ];
    m
}

#[test]
fn ethereum_vehicle_auction() {
    let out = generate(&vehicle_auction()).unwrap();
    assert_eq!(paths(&out), ["contracts/Vehicle_Auction.sol", "README.md"]);
    let sol = &out[0].content;
    assert!(sol.contains("contract Vehicle_Auction {"));
    assert!(sol.contains("function Place_bid() external {\n        require(Bidder__role[msg.sender]"));
    assert!(sol.contains("function Withdraw() external {\n        require(Owner__role[msg.sender]"));
    assert!(sol.contains("constructor() {\n        Owner__role[msg.sender] = true;\n    }"));
    assert_snapshot(Platform::Ethereum, &out);
}

#[test]
fn composer_vehicle_auction() {
    let out = generate_for(&vehicle_auction(), Platform::HyperledgerFabric).unwrap();
    assert_eq!(paths(&out), ["models/model.cto", "lib/logic.js", "permissions.acl"]);
    let acl = &out[2].content;
    assert_eq!(acl.matches("action: ALLOW").count(), 2);
    assert_eq!(acl.matches("action: DENY").count(), 1);
    assert_snapshot(Platform::HyperledgerFabric, &out);
}

#[test]
fn azure_vehicle_auction() {
    let out = generate_for(&vehicle_auction(), Platform::Azure).unwrap();
    assert_eq!(paths(&out), ["contracts/Vehicle_Auction.sol", "workbench/Vehicle_Auction.json", "README.md"]);
    let cfg: serde_json::Value = serde_json::from_str(&out[1].content).unwrap();
    let roles: Vec<&str> =
        cfg["ApplicationRoles"].as_array().unwrap().iter().map(|r| r["Name"].as_str().unwrap()).collect();
    assert_eq!(roles, ["Owner", "Bidder"]);
    let wf = &cfg["Workflows"][0];
    let fns: Vec<&str> = wf["Functions"].as_array().unwrap().iter().map(|f| f["Name"].as_str().unwrap()).collect();
    assert_eq!(fns, ["Place_bid", "Withdraw"]);
    let allowed: Vec<Vec<&str>> = wf["States"][0]["Transitions"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["AllowedRoles"].as_array().unwrap().iter().map(|r| r.as_str().unwrap()).collect())
        .collect();
    assert_eq!(allowed, vec![vec!["Bidder"], vec!["Owner"]]);
    assert_snapshot(Platform::Azure, &out);
}

#[test]
fn generation_is_deterministic() {
    for p in Platform::ALL {
        let a = generate_for(&rich_model(), p).unwrap();
        let b = generate_for(&rich_model(), p).unwrap();
        assert_eq!(a, b);
    }
}

#[test]
fn artifacts_end_with_one_newline() {
    for p in Platform::ALL {
        for a in generate_for(&rich_model(), p).unwrap() {
            assert!(a.content.ends_with('\n') && !a.content.ends_with("\n\n"), "{}", a.rel_path);
            assert!(!a.content.contains('\r'));
            assert!(!a.rel_path.contains('\\'));
        }
    }
}

#[test]
fn header_carries_tool_and_hash() {
    let m = vehicle_auction();
    let hash = model_hash(&m);
    assert_eq!(hash.len(), 64);
    for p in Platform::ALL {
        for a in generate_for(&m, p).unwrap() {
            let first = a.content.lines().take(3).collect::<Vec<_>>().join("\n");
            assert!(first.contains("Generated by icb"), "{}", a.rel_path);
            // the hash covers the model as generated, platform included
            let mut mm = m.clone();
            mm.contract.platform = Some(p);
            assert!(first.contains(&model_hash(&mm)), "{}", a.rel_path);
        }
    }
}

#[test]
fn rejects_models_with_errors() {
    let mut m = vehicle_auction();
    m.relationships.clear();
    match generate(&m) {
        Err(CodegenError::InvalidModel(issues)) => assert!(issues.iter().any(|i| i.rule == Rule::V4)),
        other => panic!("expected rejection, got {other:?}"),
    }
}

#[test]
fn zero_transactions_gives_constructor_only() {
    let mut m = vehicle_auction();
    m.transactions.clear();
    m.relationships.clear();
    let sol = &generate(&m).unwrap()[0].content;
    assert!(sol.contains("constructor()"));
    assert!(!sol.contains("function "));
    assert!(!sol.contains("event "));
}

#[test]
fn participant_integer_param_in_cto() {
    let mut m = vehicle_auction();
    m.participants[0].params.push(Param::new("balance", ParamType::Integer));
    let cto = &generate_for(&m, Platform::HyperledgerFabric).unwrap()[0].content;
    assert!(cto.contains("participant Owner identified by id__ {\n  o String id__\n  o Integer balance\n}"));
}

#[test]
fn identity_param_becomes_the_composer_key() {
    let cto = &generate_for(&rich_model(), Platform::HyperledgerFabric).unwrap()[0].content;
    assert!(cto.contains("participant Bidder identified by wallet {\n  o String wallet\n  o Double deposit\n}"));
    assert!(cto.contains("transaction Place_bid {\n  o Double amount\n  --> Vehicle Vehicle__ref\n}"));
}

#[test]
fn conditions_render_as_single_guards() {
    let m = rich_model();
    let sol = &generate(&m).unwrap()[0].content;
    assert!(sol.contains("function Place_bid(int256 amount, uint256 Vehicle__id) external {"));
    assert!(sol.contains("require(amount > Vehicle__records[Vehicle__id].price, \"Place-bid: requires Place-bid.amount > Vehicle.price\");"));
    assert!(sol.contains("require(Bidder__deposit[msg.sender] >= 1000000000000000000,"));
    assert!(
        sol.contains("keccak256(bytes(Vehicle__records[Vehicle__id].plate)) != keccak256(bytes(\"\\\"stolen\\\"\"))")
    );
    assert!(sol.contains("Vehicle__records[Vehicle__id].exists__ = true;"));
    let js = &generate_for(&m, Platform::HyperledgerFabric).unwrap()[1].content;
    assert_eq!(js.matches("throw new Error").count(), 3);
    assert!(js.contains("if (!(tx.amount > tx.Vehicle__ref.price))"));
    assert!(js.contains("if (!(tx.Vehicle__ref.plate !== \"\\\"stolen\\\"\"))"));
    assert!(js.contains("if (!(getCurrentParticipant().deposit >= 1))"));
}

#[test]
fn several_callers_share_one_role_check() {
    let mut m = vehicle_auction();
    m.relationships.push(Relationship::tran("Withdraw", "Bidder"));
    let sol = &generate(&m).unwrap()[0].content;
    assert!(sol.contains("require(Owner__role[msg.sender] || Bidder__role[msg.sender], \"Withdraw: caller is not registered as Owner or Bidder\");"));
    let acl = &generate_for(&m, Platform::HyperledgerFabric).unwrap()[2].content;
    assert_eq!(acl.matches("action: ALLOW").count(), 3);
}

#[test]
fn fixed_point_scaling() {
    assert_eq!(scale_1e18("1"), "1000000000000000000");
    assert_eq!(scale_1e18("0.5"), "500000000000000000");
    assert_eq!(scale_1e18("-2.25"), "-2250000000000000000");
    assert_eq!(scale_1e18("0.0"), "0");
    assert_eq!(scale_1e18("-0.0"), "0");
    assert_eq!(scale_1e18("0.0000000000000000019"), "1");
}

#[test]
fn non_ascii_names_are_escaped_in_solidity_strings() {
    let mut m = vehicle_auction();
    m.transactions[1].name = "Retirer é".into();
    m.relationships[1].transaction = "Retirer é".into();
    let sol = &generate(&m).unwrap()[0].content;
    assert!(sol.contains("function Retirer() external"));
    assert!(sol.contains("\"Retirer \\xc3\\xa9: caller is not registered as Owner\""));
}

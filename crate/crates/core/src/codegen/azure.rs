use serde_json::{json, Value};

use super::{ethereum, readme, ArtifactKind, Context, GeneratedArtifact};
use crate::model::*;

pub(super) fn generate(ctx: &Context<'_>) -> Vec<GeneratedArtifact> {
    let sol = ethereum::contract_path(ctx);
    let config = config_path(ctx);
    vec![
        GeneratedArtifact::new(sol.clone(), ArtifactKind::ContractSource, ethereum::contract_source(ctx)),
        GeneratedArtifact::new(config.clone(), ArtifactKind::PlatformConfig, config_file(ctx)),
        GeneratedArtifact::new("README.md", ArtifactKind::Readme, readme::render(ctx, &[sol, config])),
    ]
}

fn config_path(ctx: &Context<'_>) -> String {
    format!("workbench/{}.json", ctx.contract)
}

fn workbench_type(t: &ParamType) -> &'static str {
    match t {
        ParamType::Text => "string",
        ParamType::Integer => "int",
        ParamType::Decimal => "money",
        ParamType::Boolean => "bool",
        ParamType::Identity => "user",
        ParamType::Unsupported(_) => unreachable!("V8 rejects unsupported types"),
    }
}

/// Workbench-style application descriptor: one role per participant and a
/// single workflow whose functions mirror the transactions.
fn config(ctx: &Context<'_>) -> Value {
    let m = ctx.model;
    let roles: Vec<Value> =
        m.participants.iter().map(|p| json!({ "Name": ctx.ident(&p.name), "Description": p.name })).collect();
    let initiators: Vec<&str> = m.participants.iter().filter(|p| p.creator).map(|p| ctx.ident(&p.name)).collect();
    let functions: Vec<Value> = m
        .transactions
        .iter()
        .map(|t| {
            let params: Vec<Value> = t
                .params
                .iter()
                .map(|p| {
                    json!({
                        "Name": ctx.param_ident(&t.name, &p.name),
                        "DisplayName": p.name,
                        "Type": { "Name": workbench_type(&p.ptype) },
                    })
                })
                .collect();
            json!({ "Name": ctx.ident(&t.name), "DisplayName": t.name, "Parameters": params })
        })
        .collect();
    let transitions: Vec<Value> = m
        .transactions
        .iter()
        .map(|t| {
            let allowed: Vec<&str> = ctx.callers(&t.name).iter().map(|p| ctx.ident(&p.name)).collect();
            json!({
                "Function": ctx.ident(&t.name),
                "DisplayName": t.name,
                "AllowedRoles": allowed,
                "NextStates": ["Active"],
            })
        })
        .collect();
    json!({
        "Generated": ctx.banner,
        "ApplicationName": ctx.contract,
        "DisplayName": m.contract.name,
        "ApplicationRoles": roles,
        "Workflows": [{
            "Name": ctx.contract,
            "DisplayName": m.contract.name,
            "Initiators": initiators,
            "StartState": "Active",
            "Constructor": { "Parameters": [] },
            "Functions": functions,
            "States": [{ "Name": "Active", "DisplayName": "Active", "Transitions": transitions }],
        }],
    })
}

fn config_file(ctx: &Context<'_>) -> String {
    serde_json::to_string_pretty(&config(ctx)).expect("json values always serialize")
}

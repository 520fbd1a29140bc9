use std::fmt::Write;

use super::{ArtifactKind, Context, GeneratedArtifact};
use crate::model::*;

pub(super) fn generate(ctx: &Context<'_>) -> Vec<GeneratedArtifact> {
    vec![
        GeneratedArtifact::new("models/model.cto", ArtifactKind::ModelDefinition, model_file(ctx)),
        GeneratedArtifact::new("lib/logic.js", ArtifactKind::ContractSource, logic_file(ctx)),
        GeneratedArtifact::new("permissions.acl", ArtifactKind::AccessControl, acl_file(ctx)),
    ]
}

fn namespace(ctx: &Context<'_>) -> String {
    format!("org.icb.{}", ctx.contract.to_ascii_lowercase())
}

fn cto_type(t: &ParamType) -> &'static str {
    match t {
        ParamType::Text | ParamType::Identity => "String",
        ParamType::Integer => "Integer",
        ParamType::Decimal => "Double",
        ParamType::Boolean => "Boolean",
        ParamType::Unsupported(_) => unreachable!("V8 rejects unsupported types"),
    }
}

/// Identifying field: the first identity-typed param, else an added `id__`.
fn key<'a>(ctx: &'a Context<'_>, owner: &str, params: &[Param]) -> (&'a str, bool) {
    match params.iter().find(|p| p.ptype == ParamType::Identity) {
        Some(p) => (ctx.param_ident(owner, &p.name), false),
        None => ("id__", true),
    }
}

fn comment_header(ctx: &Context<'_>) -> String {
    format!("/*\n * {}\n */\n", ctx.banner)
}

fn model_file(ctx: &Context<'_>) -> String {
    let m = ctx.model;
    let mut s = comment_header(ctx);
    let _ = writeln!(s, "\nnamespace {}", namespace(ctx));

    let entity = |kind: &str, name: &str, params: &[Param], s: &mut String| {
        let id = ctx.ident(name);
        let (key, added) = key(ctx, name, params);
        let _ = writeln!(s, "\n{kind} {id} identified by {key} {{");
        if added {
            let _ = writeln!(s, "  o String {key}");
        }
        for p in params {
            let _ = writeln!(s, "  o {} {}", cto_type(&p.ptype), ctx.param_ident(name, &p.name));
        }
        s.push_str("}\n");
    };
    for p in &m.participants {
        entity("participant", &p.name, &p.params, &mut s);
    }
    for a in &m.assets {
        entity("asset", &a.name, &a.fields, &mut s);
    }
    for t in &m.transactions {
        let _ = writeln!(s, "\ntransaction {} {{", ctx.ident(&t.name));
        for p in &t.params {
            let _ = writeln!(s, "  o {} {}", cto_type(&p.ptype), ctx.param_ident(&t.name, &p.name));
        }
        for a in ctx.touched_assets(&t.name) {
            let id = ctx.ident(&a.name);
            let _ = writeln!(s, "  --> {id} {id}__ref");
        }
        s.push_str("}\n");
    }
    s
}

fn js_string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}

fn js_operand(ctx: &Context<'_>, tx: &str, o: &Operand) -> String {
    match o {
        Operand::Path(p) => match ctx.model.resolve_path(p, tx).expect("V6 resolves paths") {
            PathTarget::Participant(owner, param) => {
                format!("getCurrentParticipant().{}", ctx.param_ident(&owner.name, &param.name))
            }
            PathTarget::Asset(owner, param) => {
                format!("tx.{}__ref.{}", ctx.ident(&owner.name), ctx.param_ident(&owner.name, &param.name))
            }
            PathTarget::Transaction(owner, param) => format!("tx.{}", ctx.param_ident(&owner.name, &param.name)),
        },
        Operand::Literal(Literal::Text(t)) => js_string(t),
        Operand::Literal(l) => l.to_string(),
    }
}

fn js_op(op: CompareOp) -> &'static str {
    match op {
        CompareOp::Eq => "===",
        CompareOp::Ne => "!==",
        other => other.symbol(),
    }
}

fn logic_file(ctx: &Context<'_>) -> String {
    let m = ctx.model;
    let ns = namespace(ctx);
    let mut s = comment_header(ctx);
    s.push_str("\n'use strict';\n");
    let _ = writeln!(s, "\nconst NS = '{ns}';");
    for t in &m.transactions {
        let id = ctx.ident(&t.name);
        let _ = writeln!(s, "\n/**\n * {}", t.name.replace('\n', " "));
        let _ = writeln!(s, " * @param {{{ns}.{id}}} tx\n * @transaction\n */");
        let _ = writeln!(s, "async function {id}__process(tx) {{");
        for c in m.conditions_of(&t.name) {
            let _ = writeln!(
                s,
                "    if (!({} {} {})) {{\n        throw new Error({});\n    }}",
                js_operand(ctx, &t.name, &c.guard.lhs),
                js_op(c.guard.op),
                js_operand(ctx, &t.name, &c.guard.rhs),
                js_string(&format!("{}: requires {}", t.name, c.guard))
            );
        }
        for a in ctx.touched_assets(&t.name).into_iter().filter(|a| ctx.modifies(&t.name, &a.name)) {
            let a_id = ctx.ident(&a.name);
            let _ = writeln!(s, "    const {a_id}__registry = await getAssetRegistry(NS + '.{a_id}');");
            let _ = writeln!(s, "    await {a_id}__registry.update(tx.{a_id}__ref);");
        }
        s.push_str("}\n");
    }
    s
}

fn acl_file(ctx: &Context<'_>) -> String {
    let m = ctx.model;
    let ns = namespace(ctx);
    let mut s = comment_header(ctx);
    let mut n = 0;
    for r in m.relationships.iter().filter(|r| r.kind == RelKind::TranRel) {
        n += 1;
        let p = ctx.ident(&r.target);
        let t = ctx.ident(&r.transaction);
        let _ = writeln!(s, "\nrule R{n}__{p}__{t} {{");
        let _ = writeln!(s, "    description: {}", js_string(&format!("{} may submit {}", r.target, r.transaction)));
        let _ = writeln!(s, "    participant: \"{ns}.{p}\"");
        s.push_str("    operation: CREATE\n");
        let _ = writeln!(s, "    resource: \"{ns}.{t}\"");
        s.push_str("    action: ALLOW\n}\n");
    }
    s.push_str("\nrule DefaultDeny {\n    description: \"Deny every other operation\"\n    participant: \"ANY\"\n    operation: ALL\n");
    let _ = writeln!(s, "    resource: \"{ns}.**\"");
    s.push_str("    action: DENY\n}\n");
    s
}

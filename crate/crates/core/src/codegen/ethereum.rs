use std::fmt::Write;

use super::{readme, scale_1e18, ArtifactKind, Context, GeneratedArtifact};
use crate::model::*;

pub(super) const PRAGMA: &str = "pragma solidity ^0.8.19;";

pub(super) fn generate(ctx: &Context<'_>) -> Vec<GeneratedArtifact> {
    let sol = contract_path(ctx);
    vec![
        GeneratedArtifact::new(sol.clone(), ArtifactKind::ContractSource, contract_source(ctx)),
        GeneratedArtifact::new("README.md", ArtifactKind::Readme, readme::render(ctx, &[sol])),
    ]
}

pub(super) fn contract_path(ctx: &Context<'_>) -> String {
    format!("contracts/{}.sol", ctx.contract)
}

fn sol_type(t: &ParamType) -> &'static str {
    match t {
        ParamType::Text => "string",
        ParamType::Integer | ParamType::Decimal => "int256",
        ParamType::Boolean => "bool",
        ParamType::Identity => "address",
        ParamType::Unsupported(_) => unreachable!("V8 rejects unsupported types"),
    }
}

fn param_decl(t: &ParamType, ident: &str) -> String {
    match t {
        ParamType::Text => format!("string calldata {ident}"),
        t => format!("{} {ident}", sol_type(t)),
    }
}

/// Solidity string literal; bytes outside printable ASCII become `\xNN`.
fn sol_string(s: &str) -> String {
    let mut out = String::from("\"");
    for b in s.bytes() {
        match b {
            b'"' => out.push_str("\\\""),
            b'\\' => out.push_str("\\\\"),
            0x20..=0x7e => out.push(b as char),
            _ => {
                let _ = write!(out, "\\x{b:02x}");
            }
        }
    }
    out.push('"');
    out
}

pub(super) fn contract_source(ctx: &Context<'_>) -> String {
    let m = ctx.model;
    let mut s = String::new();
    let _ = writeln!(s, "// {}", ctx.banner);
    s.push_str("// SPDX-License-Identifier: UNLICENSED\n");
    s.push_str(PRAGMA);
    s.push_str("\n\n");
    let _ = writeln!(s, "/// @title {}", m.contract.name.replace('\n', " "));
    let _ = writeln!(s, "contract {} {{", ctx.contract);

    for a in &m.assets {
        let id = ctx.ident(&a.name);
        let _ = writeln!(s, "    struct {id} {{");
        s.push_str("        bool exists__;\n");
        for f in &a.fields {
            let _ = writeln!(s, "        {} {};", sol_type(&f.ptype), ctx.param_ident(&a.name, &f.name));
        }
        s.push_str("    }\n\n");
        let _ = writeln!(s, "    mapping(uint256 => {id}) public {id}__records;\n");
    }

    for p in &m.participants {
        let id = ctx.ident(&p.name);
        let _ = writeln!(s, "    mapping(address => bool) public {id}__role;");
        for f in &p.params {
            let _ = writeln!(
                s,
                "    mapping(address => {}) public {id}__{};",
                sol_type(&f.ptype),
                ctx.param_ident(&p.name, &f.name)
            );
        }
    }
    if !m.participants.is_empty() {
        s.push('\n');
    }

    for t in &m.transactions {
        let _ = writeln!(s, "    event {}__done(address indexed caller);", ctx.ident(&t.name));
    }
    if !m.transactions.is_empty() {
        s.push('\n');
    }

    s.push_str("    constructor() {\n");
    for p in m.participants.iter().filter(|p| p.creator) {
        let _ = writeln!(s, "        {}__role[msg.sender] = true;", ctx.ident(&p.name));
    }
    s.push_str("    }\n");

    for t in &m.transactions {
        s.push('\n');
        function(ctx, t, &mut s);
    }
    s.push_str("}\n");
    s
}

fn function(ctx: &Context<'_>, t: &Transaction, s: &mut String) {
    let id = ctx.ident(&t.name);
    let mut params: Vec<String> =
        t.params.iter().map(|p| param_decl(&p.ptype, ctx.param_ident(&t.name, &p.name))).collect();
    let touched = ctx.touched_assets(&t.name);
    for a in &touched {
        params.push(format!("uint256 {}__id", ctx.ident(&a.name)));
    }
    let _ = writeln!(s, "    /// {}", t.name.replace('\n', " "));
    let _ = writeln!(s, "    function {id}({}) external {{", params.join(", "));

    let callers = ctx.callers(&t.name);
    if !callers.is_empty() {
        let checks: Vec<String> = callers.iter().map(|p| format!("{}__role[msg.sender]", ctx.ident(&p.name))).collect();
        let names: Vec<&str> = callers.iter().map(|p| p.name.as_str()).collect();
        let _ = writeln!(
            s,
            "        require({}, {});",
            checks.join(" || "),
            sol_string(&format!("{}: caller is not registered as {}", t.name, names.join(" or ")))
        );
    }
    for c in ctx.model.conditions_of(&t.name) {
        let _ = writeln!(
            s,
            "        require({}, {});",
            guard(ctx, &t.name, &c.guard),
            sol_string(&format!("{}: requires {}", t.name, c.guard))
        );
    }
    for a in touched.iter().filter(|a| ctx.modifies(&t.name, &a.name)) {
        let a_id = ctx.ident(&a.name);
        let _ = writeln!(s, "        {a_id}__records[{a_id}__id].exists__ = true;");
    }
    let _ = writeln!(s, "        emit {id}__done(msg.sender);");
    s.push_str("    }\n");
}

fn operand_type(ctx: &Context<'_>, tx: &str, o: &Operand) -> ParamType {
    match o {
        Operand::Literal(l) => l.ptype(),
        Operand::Path(p) => ctx.model.resolve_path(p, tx).expect("V6 resolves paths").param().ptype.clone(),
    }
}

fn operand(ctx: &Context<'_>, tx: &str, o: &Operand, other: &ParamType) -> String {
    match o {
        Operand::Path(p) => match ctx.model.resolve_path(p, tx).expect("V6 resolves paths") {
            PathTarget::Participant(owner, param) => {
                format!("{}__{}[msg.sender]", ctx.ident(&owner.name), ctx.param_ident(&owner.name, &param.name))
            }
            PathTarget::Asset(owner, param) => {
                let a = ctx.ident(&owner.name);
                format!("{a}__records[{a}__id].{}", ctx.param_ident(&owner.name, &param.name))
            }
            PathTarget::Transaction(owner, param) => ctx.param_ident(&owner.name, &param.name).to_string(),
        },
        Operand::Literal(Literal::Integer(i)) if *other == ParamType::Decimal => scale_1e18(&i.to_string()),
        Operand::Literal(Literal::Integer(i)) => i.to_string(),
        Operand::Literal(Literal::Decimal(d)) => scale_1e18(d),
        Operand::Literal(Literal::Boolean(b)) => b.to_string(),
        Operand::Literal(Literal::Text(t)) => sol_string(t),
    }
}

fn guard(ctx: &Context<'_>, tx: &str, g: &Comparison) -> String {
    let lt = operand_type(ctx, tx, &g.lhs);
    let rt = operand_type(ctx, tx, &g.rhs);
    let lhs = operand(ctx, tx, &g.lhs, &rt);
    let rhs = operand(ctx, tx, &g.rhs, &lt);
    if lt == ParamType::Text {
        format!("keccak256(bytes({lhs})) {} keccak256(bytes({rhs}))", g.op)
    } else {
        format!("{lhs} {} {rhs}", g.op)
    }
}

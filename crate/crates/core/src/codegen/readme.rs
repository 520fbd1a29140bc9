use std::fmt::Write;

use super::Context;
use crate::model::*;

fn cell(s: &str) -> String {
    s.replace('|', "\\|").replace('\n', " ")
}

fn params(list: &[Param]) -> String {
    if list.is_empty() {
        return "-".into();
    }
    list.iter().map(|p| format!("{}: {}", p.name, p.ptype)).collect::<Vec<_>>().join(", ")
}

pub(super) fn render(ctx: &Context<'_>, files: &[String]) -> String {
    let m = ctx.model;
    let platform = m.contract.platform.expect("V1 guarantees a platform");
    let mut s = String::new();
    let _ = writeln!(s, "<!-- {} -->", ctx.banner);
    let _ = writeln!(s, "# {}\n", cell(&m.contract.name));
    let _ = writeln!(s, "Smart contract `{}` generated for {}.\n", ctx.contract, platform.display_name());
    s.push_str("## Files\n\n");
    for f in files {
        let _ = writeln!(s, "- `{f}`");
    }
    s.push_str("\n## Participants\n\n| Name | Identifier | Creator | Params |\n|---|---|---|---|\n");
    for p in &m.participants {
        let _ = writeln!(
            s,
            "| {} | `{}` | {} | {} |",
            cell(&p.name),
            ctx.ident(&p.name),
            if p.creator { "yes" } else { "no" },
            params(&p.params)
        );
    }
    if !m.assets.is_empty() {
        s.push_str("\n## Assets\n\n| Name | Identifier | Fields |\n|---|---|---|\n");
        for a in &m.assets {
            let _ = writeln!(s, "| {} | `{}` | {} |", cell(&a.name), ctx.ident(&a.name), params(&a.fields));
        }
    }
    if !m.transactions.is_empty() {
        s.push_str("\n## Transactions\n\n| Name | Function | Callers | Assets | Conditions |\n|---|---|---|---|---|\n");
        for t in &m.transactions {
            let callers: Vec<&str> = ctx.callers(&t.name).iter().map(|p| p.name.as_str()).collect();
            let assets: Vec<&str> = m
                .relationships_of(&t.name)
                .filter(|r| r.kind == RelKind::AssetRel)
                .map(|r| r.target.as_str())
                .collect();
            let conds: Vec<String> = m.conditions_of(&t.name).map(|c| format!("`{}`", c.guard)).collect();
            let join = |v: Vec<String>| if v.is_empty() { "-".to_string() } else { v.join(", ") };
            let _ = writeln!(
                s,
                "| {} | `{}` | {} | {} | {} |",
                cell(&t.name),
                ctx.ident(&t.name),
                join(callers.iter().map(|c| cell(c)).collect()),
                join(assets.iter().map(|c| cell(c)).collect()),
                cell(&join(conds))
            );
        }
    }
    s
}

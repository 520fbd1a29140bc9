use std::fmt::Write;

use crate::model::*;

/// Canonical text: fixed block order, two-space indentation, one declaration
/// per line, LF line endings.
pub fn serialize(model: &IntentionModel) -> String {
    let mut out = String::new();
    out.push_str("contract ");
    out.push_str(&quote(&model.contract.name));
    if let Some(platform) = model.contract.platform {
        out.push_str(" on ");
        out.push_str(platform.keyword());
    }
    out.push_str(" {\n");

    for p in &model.participants {
        out.push_str("  participant ");
        out.push_str(&quote(&p.name));
        if p.creator {
            out.push_str(" creator");
        }
        block(&mut out, &p.params);
    }
    for a in &model.assets {
        out.push_str("  asset ");
        out.push_str(&quote(&a.name));
        block(&mut out, &a.fields);
    }
    for t in &model.transactions {
        out.push_str("  transaction ");
        out.push_str(&quote(&t.name));
        block(&mut out, &t.params);
    }
    for r in &model.relationships {
        let _ = writeln!(out, "  {} {} -> {}", r.kind.keyword(), quote(&r.transaction), quote(&r.target));
    }
    for c in &model.conditions {
        let _ = writeln!(out, "  condition on {}: {}", quote(&c.transaction), c.guard);
    }
    out.push_str("}\n");
    out
}

fn block(out: &mut String, params: &[Param]) {
    if params.is_empty() {
        out.push_str(" { }\n");
        return;
    }
    out.push_str(" {\n");
    for p in params {
        let _ = writeln!(out, "    {}: {}", p.name, p.ptype);
    }
    out.push_str("  }\n");
}

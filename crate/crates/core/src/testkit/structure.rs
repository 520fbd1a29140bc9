//! Token-level structural checks over generated sources.
//!
//! The checker only scans text; it shares nothing with the generators
//! beyond the documented artifact layout.

use std::fmt;

use crate::codegen::GeneratedArtifact;
use crate::model::*;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub what: String,
    pub expected: String,
    pub found: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct StructureReport {
    pub checks: Vec<Check>,
}

impl StructureReport {
    pub fn ok(&self) -> bool {
        self.checks.iter().all(|c| c.ok)
    }

    pub fn failures(&self) -> Vec<&Check> {
        self.checks.iter().filter(|c| !c.ok).collect()
    }

    fn exactly(&mut self, what: impl Into<String>, expected: usize, found: usize) {
        self.checks.push(Check { what: what.into(), expected: expected.to_string(), found, ok: found == expected });
    }

    fn at_least(&mut self, what: impl Into<String>, expected: usize, found: usize) {
        self.checks.push(Check { what: what.into(), expected: format!(">= {expected}"), found, ok: found >= expected });
    }
}

impl fmt::Display for StructureReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for c in &self.checks {
            writeln!(
                f,
                "{} {}: expected {}, found {}",
                if c.ok { "ok  " } else { "FAIL" },
                c.what,
                c.expected,
                c.found
            )?;
        }
        Ok(())
    }
}

fn lines_starting(text: &str, prefix: &str) -> usize {
    text.lines().filter(|l| l.trim_start().starts_with(prefix)).count()
}

fn find(artifacts: &[GeneratedArtifact], pred: impl Fn(&str) -> bool) -> Option<&GeneratedArtifact> {
    artifacts.iter().find(|a| pred(&a.rel_path))
}

fn brace_balance(text: &str) -> bool {
    let mut depth: i64 = 0;
    let mut in_str = false;
    let mut escaped = false;
    for c in text.chars() {
        if in_str {
            match (escaped, c) {
                (true, _) => escaped = false,
                (false, '\\') => escaped = true,
                (false, '"') => in_str = false,
                _ => {}
            }
            continue;
        }
        match c {
            '"' => in_str = true,
            '{' => depth += 1,
            '}' => depth -= 1,
            _ => {}
        }
        if depth < 0 {
            return false;
        }
    }
    depth == 0
}

fn solidity(r: &mut StructureReport, m: &IntentionModel, sol: &str) {
    let tranrels = m.relationships.iter().filter(|x| x.kind == RelKind::TranRel).count();
    r.exactly("pragma lines", 1, lines_starting(sol, "pragma solidity "));
    r.exactly("contract declarations", 1, lines_starting(sol, "contract "));
    r.exactly("constructors", 1, lines_starting(sol, "constructor("));
    r.exactly("functions", m.transactions.len(), lines_starting(sol, "function "));
    r.exactly("events", m.transactions.len(), lines_starting(sol, "event "));
    r.exactly("asset structs", m.assets.len(), lines_starting(sol, "struct "));
    let requires: Vec<&str> = sol.lines().map(str::trim_start).filter(|l| l.starts_with("require(")).collect();
    let role_checks: usize = requires.iter().map(|l| l.matches("__role[msg.sender]").count()).sum();
    r.at_least("role checks", tranrels, role_checks);
    let guards = requires.iter().filter(|l| !l.contains("__role[msg.sender]")).count();
    r.exactly("condition guards", m.conditions.len(), guards);
    r.exactly("balanced braces", 1, brace_balance(sol) as usize);
}

/// Checks the artifact set of `model` on its platform.
pub fn check_structure(m: &IntentionModel, artifacts: &[GeneratedArtifact]) -> StructureReport {
    let mut r = StructureReport::default();
    for a in artifacts {
        let head: String = a.content.lines().take(3).collect::<Vec<_>>().join("\n");
        r.exactly(format!("{}: generated header", a.rel_path), 1, head.contains("Generated by icb") as usize);
        r.exactly(
            format!("{}: LF endings", a.rel_path),
            1,
            (!a.content.contains('\r') && a.content.ends_with('\n')) as usize,
        );
    }
    let tranrels = m.relationships.iter().filter(|x| x.kind == RelKind::TranRel).count();
    match m.contract.platform {
        Some(Platform::Ethereum) => {
            let sol = find(artifacts, |p| p.ends_with(".sol")).map(|a| a.content.as_str()).unwrap_or("");
            r.exactly("artifacts", 2, artifacts.len());
            solidity(&mut r, m, sol);
        }
        Some(Platform::Azure) => {
            let sol = find(artifacts, |p| p.ends_with(".sol")).map(|a| a.content.as_str()).unwrap_or("");
            r.exactly("artifacts", 3, artifacts.len());
            solidity(&mut r, m, sol);
            let cfg: serde_json::Value = find(artifacts, |p| p.ends_with(".json"))
                .and_then(|a| serde_json::from_str(&a.content).ok())
                .unwrap_or_default();
            let len = |v: &serde_json::Value| v.as_array().map(Vec::len).unwrap_or(0);
            r.exactly("application roles", m.participants.len(), len(&cfg["ApplicationRoles"]));
            r.exactly("workflows", 1, len(&cfg["Workflows"]));
            r.exactly("workflow functions", m.transactions.len(), len(&cfg["Workflows"][0]["Functions"]));
            let transitions = &cfg["Workflows"][0]["States"][0]["Transitions"];
            r.exactly("transitions", m.transactions.len(), len(transitions));
            let allowed: usize =
                transitions.as_array().map(|t| t.iter().map(|x| len(&x["AllowedRoles"])).sum()).unwrap_or(0);
            let distinct: usize = m
                .transactions
                .iter()
                .map(|t| {
                    let mut ps: Vec<&str> = m
                        .relationships_of(&t.name)
                        .filter(|x| x.kind == RelKind::TranRel)
                        .map(|x| x.target.as_str())
                        .collect();
                    ps.sort();
                    ps.dedup();
                    ps.len()
                })
                .sum();
            r.exactly("allowed roles", distinct, allowed);
        }
        Some(Platform::HyperledgerFabric) => {
            r.exactly("artifacts", 3, artifacts.len());
            let text =
                |suffix: &str| find(artifacts, |p| p.ends_with(suffix)).map(|a| a.content.as_str()).unwrap_or("");
            let (cto, js, acl) = (text(".cto"), text(".js"), text(".acl"));
            r.exactly("namespaces", 1, lines_starting(cto, "namespace "));
            r.exactly("participant declarations", m.participants.len(), lines_starting(cto, "participant "));
            r.exactly("asset declarations", m.assets.len(), lines_starting(cto, "asset "));
            r.exactly("transaction declarations", m.transactions.len(), lines_starting(cto, "transaction "));
            r.exactly("transaction processors", m.transactions.len(), lines_starting(js, "async function "));
            r.exactly("processor annotations", m.transactions.len(), js.matches("@transaction").count());
            r.exactly("condition guards", m.conditions.len(), js.matches("throw new Error").count());
            r.exactly("ACL grant rules", tranrels, acl.matches("action: ALLOW").count());
            r.exactly("ACL deny rules", 1, acl.matches("action: DENY").count());
            r.exactly("balanced braces", 1, (brace_balance(cto) && brace_balance(js)) as usize);
        }
        None => r.exactly("platform", 1, 0),
    }
    r
}

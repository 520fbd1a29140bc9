//! Display names to code identifiers.
//!
//! `"Vehicle Auction"` becomes `Vehicle_Auction` and `"Place-bid"` becomes
//! `Place_bid`. A mangled identifier never contains `__`; generators use
//! `__` in every helper identifier they invent so the two cannot collide.

use std::collections::{HashMap, HashSet};

use crate::model::Platform;

/// Mangles a display name, or `None` when nothing code-safe is left or the
/// result does not start with an ASCII letter.
pub fn mangle(name: &str) -> Option<String> {
    let mut out = String::with_capacity(name.len());
    let mut pending_sep = false;
    for c in name.trim().chars() {
        if c.is_ascii_alphanumeric() {
            if pending_sep && !out.is_empty() {
                out.push('_');
            }
            pending_sep = false;
            out.push(c);
        } else if c == ' ' || c == '-' || c == '_' {
            pending_sep = true;
        }
    }
    match out.chars().next() {
        Some(c) if c.is_ascii_alphabetic() => Some(out),
        _ => None,
    }
}

/// Injective display-name to identifier map. Names that mangle to an
/// identifier already taken get `_2`, `_3`, ... in declaration order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ManglingTable {
    map: HashMap<String, String>,
    taken: HashSet<String>,
}

impl ManglingTable {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn build<'a>(names: impl IntoIterator<Item = &'a str>) -> Self {
        let mut t = Self::new();
        for n in names {
            t.insert(n);
        }
        t
    }

    /// Registers a name (idempotent) and returns its identifier.
    pub fn insert(&mut self, name: &str) -> String {
        if let Some(id) = self.map.get(name) {
            return id.clone();
        }
        let base = mangle(name).unwrap_or_else(|| "x".to_string());
        let mut id = base.clone();
        let mut n = 2;
        while self.taken.contains(&id) {
            id = format!("{base}_{n}");
            n += 1;
        }
        self.taken.insert(id.clone());
        self.map.insert(name.to_string(), id.clone());
        id
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.map.get(name).map(String::as_str)
    }

    /// Identifier for a registered name.
    ///
    /// Panics on names that were never inserted; generators register every
    /// model name up front.
    pub fn ident(&self, name: &str) -> &str {
        self.get(name).unwrap_or_else(|| panic!("name {name:?} missing from mangling table"))
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }
}

const SOLIDITY_RESERVED: &[&str] = &[
    "abstract",
    "address",
    "after",
    "alias",
    "anonymous",
    "apply",
    "assembly",
    "auto",
    "block",
    "bool",
    "break",
    "byte",
    "bytes",
    "calldata",
    "case",
    "catch",
    "constant",
    "constructor",
    "continue",
    "contract",
    "copyof",
    "default",
    "define",
    "delete",
    "do",
    "else",
    "emit",
    "enum",
    "error",
    "event",
    "external",
    "fallback",
    "false",
    "final",
    "fixed",
    "for",
    "function",
    "gasleft",
    "global",
    "if",
    "immutable",
    "implements",
    "import",
    "in",
    "indexed",
    "inline",
    "int",
    "int256",
    "interface",
    "internal",
    "is",
    "let",
    "library",
    "macro",
    "mapping",
    "match",
    "memory",
    "modifier",
    "msg",
    "mutable",
    "new",
    "now",
    "null",
    "of",
    "override",
    "partial",
    "payable",
    "pragma",
    "private",
    "promise",
    "public",
    "pure",
    "receive",
    "reference",
    "relocatable",
    "require",
    "return",
    "returns",
    "revert",
    "sealed",
    "selfdestruct",
    "sizeof",
    "static",
    "storage",
    "string",
    "struct",
    "super",
    "supports",
    "switch",
    "this",
    "throw",
    "true",
    "try",
    "tx",
    "type",
    "typedef",
    "typeof",
    "ufixed",
    "uint",
    "uint256",
    "unchecked",
    "using",
    "var",
    "view",
    "virtual",
    "while",
    "wei",
    "gwei",
    "ether",
    "seconds",
    "minutes",
    "hours",
    "days",
    "weeks",
    "years",
    "keccak256",
    "assert",
    "abi",
];

const COMPOSER_RESERVED: &[&str] = &[
    "namespace",
    "import",
    "asset",
    "participant",
    "transaction",
    "event",
    "concept",
    "enum",
    "abstract",
    "extends",
    "identified",
    "by",
    "o",
    "optional",
    "default",
    "range",
    "regex",
    "String",
    "Integer",
    "Long",
    "Double",
    "Boolean",
    "DateTime",
    "rule",
    "description",
    "operation",
    "resource",
    "action",
    "condition",
    "ALLOW",
    "DENY",
    "ALL",
    "ANY",
    "CREATE",
    "READ",
    "UPDATE",
    "DELETE",
    "true",
    "false",
    "null",
    "function",
    "return",
    "var",
    "let",
    "const",
    "class",
    "new",
    "this",
    "await",
    "async",
    "tx",
];

/// Whether an identifier is reserved in the sources generated for `platform`.
/// Azure output embeds the Ethereum contract, so it shares Solidity's words.
pub fn is_reserved(ident: &str, platform: Platform) -> bool {
    match platform {
        Platform::Ethereum | Platform::Azure => SOLIDITY_RESERVED.contains(&ident),
        Platform::HyperledgerFabric => COMPOSER_RESERVED.contains(&ident),
    }
}

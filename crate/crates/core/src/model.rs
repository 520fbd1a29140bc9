//! Abstract syntax of the intention DSL.
//!
//! An [`IntentionModel`] is a plain value: it may be incomplete (a dialogue
//! draft) and it may violate the consistency rules checked by
//! [`crate::validator`]. The types here only guarantee well-formed shape.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// Root of a contract specification.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntentionModel {
    pub contract: ContractHeader,
    pub participants: Vec<Participant>,
    pub assets: Vec<Asset>,
    pub transactions: Vec<Transaction>,
    pub relationships: Vec<Relationship>,
    pub conditions: Vec<Condition>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ContractHeader {
    pub name: String,
    /// `None` only while a dialogue draft has not chosen a platform yet.
    pub platform: Option<Platform>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Platform {
    Azure,
    HyperledgerFabric,
    Ethereum,
}

impl Platform {
    pub const ALL: [Platform; 3] = [Platform::Azure, Platform::HyperledgerFabric, Platform::Ethereum];

    /// Keyword used in DSL sources, CLI flags and chat replies.
    pub fn keyword(self) -> &'static str {
        match self {
            Platform::Azure => "azure",
            Platform::HyperledgerFabric => "hyperledger-fabric",
            Platform::Ethereum => "ethereum",
        }
    }

    pub fn display_name(self) -> &'static str {
        match self {
            Platform::Azure => "Azure",
            Platform::HyperledgerFabric => "Hyperledger Fabric",
            Platform::Ethereum => "Ethereum",
        }
    }
}

impl fmt::Display for Platform {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown platform `{0}` (expected azure, hyperledger-fabric or ethereum)")]
pub struct UnknownPlatform(pub String);

impl FromStr for Platform {
    type Err = UnknownPlatform;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Platform::ALL
            .into_iter()
            .find(|p| p.keyword().eq_ignore_ascii_case(s.trim()))
            .ok_or_else(|| UnknownPlatform(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Participant {
    pub name: String,
    pub creator: bool,
    pub params: Vec<Param>,
}

impl Participant {
    pub fn new(name: impl Into<String>, creator: bool) -> Self {
        Participant { name: name.into(), creator, params: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Asset {
    pub name: String,
    pub fields: Vec<Param>,
}

impl Asset {
    pub fn new(name: impl Into<String>) -> Self {
        Asset { name: name.into(), fields: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transaction {
    pub name: String,
    pub params: Vec<Param>,
}

impl Transaction {
    pub fn new(name: impl Into<String>) -> Self {
        Transaction { name: name.into(), params: Vec::new() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub name: String,
    pub ptype: ParamType,
}

impl Param {
    pub fn new(name: impl Into<String>, ptype: ParamType) -> Self {
        Param { name: name.into(), ptype }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ParamType {
    Text,
    Integer,
    Decimal,
    Boolean,
    /// A platform account or address.
    Identity,
    /// A type name outside the supported set; only the validator accepts it
    /// (rule V8) and the generators never see it.
    Unsupported(String),
}

impl ParamType {
    pub const SUPPORTED: [ParamType; 5] =
        [ParamType::Text, ParamType::Integer, ParamType::Decimal, ParamType::Boolean, ParamType::Identity];

    pub fn keyword(&self) -> &str {
        match self {
            ParamType::Text => "text",
            ParamType::Integer => "integer",
            ParamType::Decimal => "decimal",
            ParamType::Boolean => "boolean",
            ParamType::Identity => "identity",
            ParamType::Unsupported(name) => name,
        }
    }

    /// Maps a keyword onto the closed set, falling back to `Unsupported`.
    pub fn from_keyword(word: &str) -> ParamType {
        ParamType::SUPPORTED
            .into_iter()
            .find(|t| t.keyword() == word)
            .unwrap_or_else(|| ParamType::Unsupported(word.to_string()))
    }

    pub fn is_supported(&self) -> bool {
        !matches!(self, ParamType::Unsupported(_))
    }

    pub fn is_numeric(&self) -> bool {
        matches!(self, ParamType::Integer | ParamType::Decimal)
    }
}

impl fmt::Display for ParamType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RelKind {
    /// Transaction to participant: the participant may invoke it.
    TranRel,
    /// Transaction to asset: the transaction modifies that asset.
    AssetRel,
}

impl RelKind {
    pub fn keyword(self) -> &'static str {
        match self {
            RelKind::TranRel => "tranrel",
            RelKind::AssetRel => "assetrel",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Relationship {
    pub kind: RelKind,
    pub transaction: String,
    pub target: String,
}

impl Relationship {
    pub fn tran(transaction: impl Into<String>, participant: impl Into<String>) -> Self {
        Relationship { kind: RelKind::TranRel, transaction: transaction.into(), target: participant.into() }
    }

    pub fn asset(transaction: impl Into<String>, asset: impl Into<String>) -> Self {
        Relationship { kind: RelKind::AssetRel, transaction: transaction.into(), target: asset.into() }
    }
}

/// An access condition: a single comparison guarding a transaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Condition {
    pub transaction: String,
    pub guard: Comparison,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Comparison {
    pub lhs: Operand,
    pub op: CompareOp,
    pub rhs: Operand,
}

impl Comparison {
    pub fn has_path(&self) -> bool {
        matches!(self.lhs, Operand::Path(_)) || matches!(self.rhs, Operand::Path(_))
    }
}

impl fmt::Display for Comparison {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.lhs, self.op, self.rhs)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Operand {
    Path(FieldPath),
    Literal(Literal),
}

impl fmt::Display for Operand {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operand::Path(p) => p.fmt(f),
            Operand::Literal(l) => l.fmt(f),
        }
    }
}

/// `Owner.balance`: a param of a participant, asset field, or param of the
/// guarded transaction.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldPath {
    pub owner: String,
    pub field: String,
}

impl FieldPath {
    pub fn new(owner: impl Into<String>, field: impl Into<String>) -> Self {
        FieldPath { owner: owner.into(), field: field.into() }
    }
}

impl fmt::Display for FieldPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if is_bare_name(&self.owner) && !is_bool_word(&self.owner) {
            write!(f, "{}.{}", self.owner, self.field)
        } else {
            write!(f, "{}.{}", quote(&self.owner), self.field)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Literal {
    Text(String),
    Integer(i64),
    /// Source digits, e.g. `12.50`; kept verbatim so printing is exact.
    Decimal(String),
    Boolean(bool),
}

impl Literal {
    pub fn ptype(&self) -> ParamType {
        match self {
            Literal::Text(_) => ParamType::Text,
            Literal::Integer(_) => ParamType::Integer,
            Literal::Decimal(_) => ParamType::Decimal,
            Literal::Boolean(_) => ParamType::Boolean,
        }
    }
}

impl fmt::Display for Literal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Literal::Text(s) => f.write_str(&quote(s)),
            Literal::Integer(i) => write!(f, "{i}"),
            Literal::Decimal(d) => f.write_str(d),
            Literal::Boolean(b) => write!(f, "{b}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum CompareOp {
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = ">")]
    Gt,
    #[serde(rename = ">=")]
    Ge,
}

impl CompareOp {
    pub const ALL: [CompareOp; 6] =
        [CompareOp::Eq, CompareOp::Ne, CompareOp::Lt, CompareOp::Le, CompareOp::Gt, CompareOp::Ge];

    pub fn symbol(self) -> &'static str {
        match self {
            CompareOp::Eq => "==",
            CompareOp::Ne => "!=",
            CompareOp::Lt => "<",
            CompareOp::Le => "<=",
            CompareOp::Gt => ">",
            CompareOp::Ge => ">=",
        }
    }

    pub fn from_symbol(s: &str) -> Option<CompareOp> {
        CompareOp::ALL.into_iter().find(|op| op.symbol() == s)
    }

    pub fn is_ordering(self) -> bool {
        !matches!(self, CompareOp::Eq | CompareOp::Ne)
    }
}

impl fmt::Display for CompareOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

/// Bare DSL name: `[A-Za-z][A-Za-z0-9_-]*`.
pub fn is_bare_name(s: &str) -> bool {
    let mut chars = s.chars();
    matches!(chars.next(), Some(c) if c.is_ascii_alphabetic())
        && chars.all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-')
}

pub(crate) fn is_bool_word(s: &str) -> bool {
    s == "true" || s == "false"
}

/// Renders a DSL string literal.
pub fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

impl IntentionModel {
    pub fn new(name: impl Into<String>, platform: Platform) -> Self {
        IntentionModel {
            contract: ContractHeader { name: name.into(), platform: Some(platform) },
            ..Default::default()
        }
    }

    pub fn participant(&self, name: &str) -> Option<&Participant> {
        self.participants.iter().find(|p| p.name == name)
    }

    pub fn asset(&self, name: &str) -> Option<&Asset> {
        self.assets.iter().find(|a| a.name == name)
    }

    pub fn transaction(&self, name: &str) -> Option<&Transaction> {
        self.transactions.iter().find(|t| t.name == name)
    }

    pub fn relationships_of<'a>(&'a self, transaction: &'a str) -> impl Iterator<Item = &'a Relationship> + 'a {
        self.relationships.iter().filter(move |r| r.transaction == transaction)
    }

    pub fn conditions_of<'a>(&'a self, transaction: &'a str) -> impl Iterator<Item = &'a Condition> + 'a {
        self.conditions.iter().filter(move |c| c.transaction == transaction)
    }

    /// Type of the param a field path designates, looked up from the point of
    /// view of `transaction` (whose own params are addressable too).
    pub fn resolve_path(&self, path: &FieldPath, transaction: &str) -> Option<PathTarget<'_>> {
        let find = |params: &'_ [Param]| params.iter().position(|p| p.name == path.field);
        if let Some(p) = self.participant(&path.owner) {
            return find(&p.params).map(|i| PathTarget::Participant(p, &p.params[i]));
        }
        if let Some(a) = self.asset(&path.owner) {
            return find(&a.fields).map(|i| PathTarget::Asset(a, &a.fields[i]));
        }
        if path.owner == transaction {
            if let Some(t) = self.transaction(transaction) {
                return find(&t.params).map(|i| PathTarget::Transaction(t, &t.params[i]));
            }
        }
        None
    }
}

/// What a resolved [`FieldPath`] points at.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PathTarget<'a> {
    Participant(&'a Participant, &'a Param),
    Asset(&'a Asset, &'a Param),
    Transaction(&'a Transaction, &'a Param),
}

impl<'a> PathTarget<'a> {
    pub fn param(&self) -> &'a Param {
        match *self {
            PathTarget::Participant(_, p) | PathTarget::Asset(_, p) | PathTarget::Transaction(_, p) => p,
        }
    }
}

/// The vehicle-auction model used throughout tests and docs.
pub fn vehicle_auction() -> IntentionModel {
    IntentionModel {
        contract: ContractHeader { name: "Vehicle Auction".into(), platform: Some(Platform::Ethereum) },
        participants: vec![Participant::new("Owner", true), Participant::new("Bidder", false)],
        assets: vec![Asset::new("Vehicle")],
        transactions: vec![Transaction::new("Place-bid"), Transaction::new("Withdraw")],
        relationships: vec![Relationship::tran("Place-bid", "Bidder"), Relationship::tran("Withdraw", "Owner")],
        conditions: vec![],
    }
}

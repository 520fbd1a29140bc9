//! Conversational smart-contract specification toolkit.
//!
//! The pipeline: a user talks to the [`dialogue`] state machine, whose turns
//! are classified by the rule-based [`intent`] matcher and folded into an
//! [`IntentionModel`]. The model has a textual form ([`dsl`]), is checked by
//! the [`validator`], and is rendered into platform sources by [`codegen`].

pub mod codegen;
pub mod dialogue;
pub mod dsl;
pub mod intent;
pub mod model;
pub mod validator;

#[cfg(feature = "testkit")]
pub mod testkit;

pub use codegen::{generate, ArtifactKind, GeneratedArtifact};
pub use dialogue::{BotTurn, DialogueState, Phase};
pub use dsl::{parse, serialize, SyntaxError};
pub use intent::{classify, IntentId, IntentMatch};
pub use model::IntentionModel;
pub use validator::{is_generatable, validate, Severity, ValidationIssue};

//! Seeded generators and oracles for property and acceptance tests.
//!
//! Everything here is deterministic for a given seed.

mod converse;
mod models;
mod mutants;
mod perturb;
mod structure;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub use converse::{random_conversation, Conversation};
pub use models::random_model;
pub use mutants::{error_rules, mutants, Mutant, MutationKind};
pub use perturb::{context_for, perturbations, sample_utterance, Sample};
pub use structure::{check_structure, StructureReport};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

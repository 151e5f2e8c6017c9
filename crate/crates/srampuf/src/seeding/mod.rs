//! Seed generation from uninitialized SRAM: budgets, the two seed
//! extractors, soft-reset handling, and region planning.

mod budget;
mod regions;
mod reset;
mod seeds;

pub use budget::{naive_key_budget, seed_budget, SeedBudget};
pub use regions::{plan_regions, PlannerConfig, Region, RegionPlan};
pub use reset::{Boot, PmIndication, ResetError, ResetState, DEFAULT_MARKER};
pub use seeds::{dek_hash, secure_seed, simple_seed, SeedConfig};

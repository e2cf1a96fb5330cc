//! Baseline heuristics: SPT list scheduling and a genetic algorithm.

mod ga;
mod spt;

pub use ga::{crossover_at, crossover_tsx_lox, ga_schedule, mutate, Chromosome, GaConfig, GaOutcome};
pub use spt::{list_schedule, spt_order, spt_schedule};

use std::time::{Duration, Instant};

use serde::{Deserialize, Serialize};

/// Search limits shared by the tree-search solvers.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Budget {
    pub max_nodes: u64,
    /// Wall-clock limit in seconds; `None` means unlimited.
    pub time_limit: Option<f64>,
}

impl Default for Budget {
    fn default() -> Self {
        Self { max_nodes: 10_000_000, time_limit: Some(60.0) }
    }
}

impl Budget {
    pub fn nodes(max_nodes: u64) -> Self {
        Self { max_nodes, time_limit: None }
    }

    pub fn unlimited() -> Self {
        Self { max_nodes: u64::MAX, time_limit: None }
    }
}

/// Node counter plus clock, polled by the search loops.
pub(crate) struct Meter {
    budget: Budget,
    started: Instant,
    pub nodes: u64,
    pub exhausted: bool,
}

impl Meter {
    pub fn new(budget: Budget) -> Self {
        Self { budget, started: Instant::now(), nodes: 0, exhausted: false }
    }

    /// Counts a node; returns false once the budget is spent.
    pub fn tick(&mut self) -> bool {
        if self.exhausted {
            return false;
        }
        if self.nodes >= self.budget.max_nodes {
            self.exhausted = true;
            return false;
        }
        self.nodes += 1;
        if self.nodes.is_multiple_of(4096) {
            if let Some(limit) = self.budget.time_limit {
                if self.started.elapsed() >= Duration::from_secs_f64(limit) {
                    self.exhausted = true;
                    return false;
                }
            }
        }
        true
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }
}

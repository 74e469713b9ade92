//! Resource limits and the parallel/sequential switch shared by the
//! enumeration-heavy routines.

use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::time::{Duration, Instant};

use crate::error::{Error, Result};

pub const DEFAULT_MAX_FACETS: usize = 1_000_000;
pub const DEFAULT_MAX_SECONDS: u64 = 60;

/// How data-parallel loops are executed.
///
/// `Parallel` only has an effect when the crate is built with the `parallel`
/// feature; otherwise it runs the same code sequentially.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Parallelism {
    Sequential,
    Parallel,
}

impl Default for Parallelism {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Parallelism::Parallel
        } else {
            Parallelism::Sequential
        }
    }
}

impl Parallelism {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Parallelism::Parallel
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub max_facets: usize,
    pub max_duration: Duration,
    pub parallelism: Parallelism,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            max_facets: DEFAULT_MAX_FACETS,
            max_duration: Duration::from_secs(DEFAULT_MAX_SECONDS),
            parallelism: Parallelism::default(),
        }
    }
}

impl Budget {
    pub fn with_parallelism(mut self, parallelism: Parallelism) -> Self {
        self.parallelism = parallelism;
        self
    }

    pub fn with_max_facets(mut self, max_facets: usize) -> Self {
        self.max_facets = max_facets;
        self
    }

    pub fn with_max_duration(mut self, max_duration: Duration) -> Self {
        self.max_duration = max_duration;
        self
    }

    pub(crate) fn start(&self) -> BudgetGuard {
        BudgetGuard {
            max_facets: self.max_facets,
            deadline: Instant::now() + self.max_duration,
            emitted: AtomicUsize::new(0),
            aborted: AtomicBool::new(false),
            overrun: AtomicUsize::new(0),
        }
    }
}

/// Shared, thread-safe accounting for one enumeration run.
pub(crate) struct BudgetGuard {
    max_facets: usize,
    deadline: Instant,
    emitted: AtomicUsize,
    aborted: AtomicBool,
    // 1 = facet count, 2 = time
    overrun: AtomicUsize,
}

impl BudgetGuard {
    /// Records one emitted item. Returns false once the run must stop.
    pub fn emit(&self) -> bool {
        let n = self.emitted.fetch_add(1, Ordering::Relaxed) + 1;
        if n > self.max_facets {
            self.overrun.store(1, Ordering::Relaxed);
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        !self.aborted.load(Ordering::Relaxed)
    }

    /// Polled periodically from the search loops.
    pub fn tick(&self) -> bool {
        if self.aborted.load(Ordering::Relaxed) {
            return false;
        }
        if Instant::now() > self.deadline {
            self.overrun.store(2, Ordering::Relaxed);
            self.aborted.store(true, Ordering::Relaxed);
            return false;
        }
        true
    }

    pub fn is_aborted(&self) -> bool {
        self.aborted.load(Ordering::Relaxed)
    }

    pub fn finish(&self) -> Result<()> {
        match self.overrun.load(Ordering::Relaxed) {
            0 => Ok(()),
            1 => Err(Error::Budget(format!("more than {} facets", self.max_facets))),
            _ => Err(Error::Budget("time limit reached".to_string())),
        }
    }
}

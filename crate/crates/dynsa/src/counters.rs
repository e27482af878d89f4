//! Per-thread operation counters.
//!
//! The engines are measured by how many LCE queries and range-structure node
//! visits they perform rather than by wall time. Counters are thread-local so
//! parallel tests do not disturb each other.

use std::cell::Cell;

thread_local! {
    static LCE: Cell<u64> = const { Cell::new(0) };
    static VISITS: Cell<u64> = const { Cell::new(0) };
}

/// A snapshot of the counters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Cost {
    pub lce: u64,
    pub range_visits: u64,
}

impl Cost {
    pub fn total(&self) -> u64 {
        self.lce + self.range_visits
    }

    pub fn since(&self, earlier: Cost) -> Cost {
        Cost {
            lce: self.lce - earlier.lce,
            range_visits: self.range_visits - earlier.range_visits,
        }
    }
}

#[inline]
pub(crate) fn lce_call() {
    LCE.with(|c| c.set(c.get() + 1));
}

#[inline]
pub(crate) fn range_visits(k: u64) {
    VISITS.with(|c| c.set(c.get() + k));
}

pub fn snapshot() -> Cost {
    Cost {
        lce: LCE.with(|c| c.get()),
        range_visits: VISITS.with(|c| c.get()),
    }
}

/// Runs `f` and returns its result with the cost it incurred on this thread.
pub fn measure<R>(f: impl FnOnce() -> R) -> (R, Cost) {
    let before = snapshot();
    let out = f();
    (out, snapshot().since(before))
}

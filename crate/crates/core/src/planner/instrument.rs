// SPDX-License-Identifier: Apache-2.0

use std::sync::atomic::{AtomicU64, Ordering};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use super::{PlanResult, Planner, PlannerQuery, QueryError};

/// Planner call accounting.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PlannerStats {
    pub calls: u64,
    /// Wall time spent inside the wrapped planner, seconds.
    pub total_time: f64,
    /// Calls that did not return a path (failures and rejected queries).
    pub failures: u64,
}

/// Transparent wrapper counting calls and accumulating planning time.
///
/// Counters are atomic so one instance can be shared across threads.
#[derive(Debug, Default)]
pub struct Instrumented<P> {
    inner: P,
    calls: AtomicU64,
    failures: AtomicU64,
    nanos: AtomicU64,
}

impl<P: Planner> Instrumented<P> {
    pub fn new(inner: P) -> Self {
        Self {
            inner,
            calls: AtomicU64::new(0),
            failures: AtomicU64::new(0),
            nanos: AtomicU64::new(0),
        }
    }

    pub fn stats(&self) -> PlannerStats {
        PlannerStats {
            calls: self.calls.load(Ordering::SeqCst),
            total_time: self.nanos.load(Ordering::SeqCst) as f64 * 1e-9,
            failures: self.failures.load(Ordering::SeqCst),
        }
    }

    pub fn inner(&self) -> &P {
        &self.inner
    }

    pub fn into_inner(self) -> P {
        self.inner
    }
}

impl<P: Planner> Planner for Instrumented<P> {
    fn name(&self) -> &'static str {
        self.inner.name()
    }

    fn plan(&self, query: &PlannerQuery<'_>) -> Result<PlanResult, QueryError> {
        let started = Instant::now();
        let result = self.inner.plan(query);
        let elapsed = started.elapsed().as_nanos() as u64;
        self.nanos.fetch_add(elapsed, Ordering::SeqCst);
        self.calls.fetch_add(1, Ordering::SeqCst);
        if !matches!(result, Ok(PlanResult::Success(_))) {
            self.failures.fetch_add(1, Ordering::SeqCst);
        }
        result
    }
}

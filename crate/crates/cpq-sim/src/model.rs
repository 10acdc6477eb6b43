use serde::{Deserialize, Serialize};

/// Ceiling of log2, with `ceil_log2(0) = ceil_log2(1) = 0`.
pub fn ceil_log2(n: u64) -> u64 {
    if n <= 1 {
        0
    } else {
        64 - (n - 1).leading_zeros() as u64
    }
}

/// Parameters of the charged query-cost model.
///
/// A search over a space of size `n` charges
/// `ceil(c * sqrt(n / max(t, 1)))` oracle queries (with `t` the marked
/// count), multiplied by the repetition factor `max(1, ceil(log2 n))`
/// that models the repeated runs needed for a polynomially small error
/// rate. Memory access is charged separately: linear initialization
/// (`m * ceil(log2 n)`) and logarithmic per-query cost.
///
/// `fail_prob` injects failures: each atomic search independently fails
/// with this probability, returning an arbitrary item and raising the
/// failure flag of the enclosing subroutine.
#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct CostModel {
    pub grover_constant: f64,
    pub fail_prob: f64,
    pub seed: u64,
}

impl CostModel {
    pub fn exact(seed: u64) -> Self {
        CostModel {
            grover_constant: std::f64::consts::FRAC_PI_4,
            fail_prob: 0.0,
            seed,
        }
    }

    pub fn with_fail_prob(fail_prob: f64, seed: u64) -> Self {
        assert!((0.0..1.0).contains(&fail_prob));
        CostModel {
            fail_prob,
            ..CostModel::exact(seed)
        }
    }

    /// Per-search repetition factor over a space of size `n`.
    pub fn repetitions(&self, n: u64) -> u64 {
        ceil_log2(n).max(1)
    }

    /// Oracle queries charged for one search over `n` items with `marked`
    /// of them marked.
    pub fn grover_queries(&self, n: u64, marked: u64) -> u64 {
        let base = self.grover_constant * ((n as f64) / (marked.max(1) as f64)).sqrt();
        (base.ceil() as u64) * self.repetitions(n)
    }

    pub fn qram_query_cost(&self, n: u64) -> u64 {
        ceil_log2(n)
    }

    pub fn qram_init_cost(&self, m: u64, n: u64) -> u64 {
        m * ceil_log2(n)
    }
}

impl Default for CostModel {
    fn default() -> Self {
        CostModel::exact(0)
    }
}

/// Monotone counters attributing costs to a run. Oracle queries, memory
/// costs, and walk-operator calls are tracked separately so reports can
/// compare them against closed forms independently.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct QueryLedger {
    pub oracle_queries: u64,
    pub qram_init: u64,
    pub qram_query: u64,
    pub classical_steps: u64,
    pub searches_attempted: u64,
    pub searches_failed: u64,
    pub walk_calls: u64,
}

impl QueryLedger {
    /// Counterwise difference since `earlier` (counters are monotone).
    pub fn delta_since(&self, earlier: &QueryLedger) -> QueryLedger {
        QueryLedger {
            oracle_queries: self.oracle_queries - earlier.oracle_queries,
            qram_init: self.qram_init - earlier.qram_init,
            qram_query: self.qram_query - earlier.qram_query,
            classical_steps: self.classical_steps - earlier.classical_steps,
            searches_attempted: self.searches_attempted - earlier.searches_attempted,
            searches_failed: self.searches_failed - earlier.searches_failed,
            walk_calls: self.walk_calls - earlier.walk_calls,
        }
    }

    pub fn absorb(&mut self, other: &QueryLedger) {
        self.oracle_queries += other.oracle_queries;
        self.qram_init += other.qram_init;
        self.qram_query += other.qram_query;
        self.classical_steps += other.classical_steps;
        self.searches_attempted += other.searches_attempted;
        self.searches_failed += other.searches_failed;
        self.walk_calls += other.walk_calls;
    }
}

/// Payload of a simulated subroutine plus its failure flag. A raised
/// flag means the payload must not be trusted by exact-mode callers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SubroutineResult<T> {
    pub payload: T,
    pub failed: bool,
}

impl<T> SubroutineResult<T> {
    pub fn ok(payload: T) -> Self {
        SubroutineResult {
            payload,
            failed: false,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ceil_log2_values() {
        assert_eq!(ceil_log2(0), 0);
        assert_eq!(ceil_log2(1), 0);
        assert_eq!(ceil_log2(2), 1);
        assert_eq!(ceil_log2(3), 2);
        assert_eq!(ceil_log2(4), 2);
        assert_eq!(ceil_log2(5), 3);
        assert_eq!(ceil_log2(1024), 10);
        assert_eq!(ceil_log2(1025), 11);
    }

    #[test]
    fn grover_charge_closed_form() {
        let m = CostModel::exact(0);
        // 1024 items, one marked: ceil(pi/4 * 32) * 10 = 26 * 10.
        assert_eq!(m.grover_queries(1024, 1), 260);
        // Singleton space.
        assert_eq!(m.grover_queries(1, 1), 1);
        // Nothing marked charges the full-width search.
        assert_eq!(m.grover_queries(16, 0), 4 * 4);
    }
}

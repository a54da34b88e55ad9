/// Size caps for the exponential solvers.
///
/// These are configuration, not correctness limits: raising a cap only
/// trades time for reach. [`Limits::unbounded`] lifts all of them.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    /// Largest `m` for enumeration over candidate matchings (m! branches).
    pub max_brute_candidates: usize,
    /// Largest `n` for enumeration over voter matchings (n! branches).
    pub max_brute_voters: usize,
    /// Largest budget `k` for the adjacent-swap search when `k ≥ n`.
    pub max_search_budget: u64,
    /// Largest `c` accepted by the `(m - c)`-approximation.
    pub max_approx_c: usize,
    /// Largest `m` for brute-force Kemeny aggregation.
    pub max_kemeny_candidates: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_brute_candidates: 10,
            max_brute_voters: 8,
            max_search_budget: 6,
            max_approx_c: 1,
            max_kemeny_candidates: 8,
        }
    }
}

impl Limits {
    pub fn unbounded() -> Self {
        Limits {
            max_brute_candidates: usize::MAX,
            max_brute_voters: usize::MAX,
            max_search_budget: u64::MAX,
            max_approx_c: usize::MAX,
            max_kemeny_candidates: usize::MAX,
        }
    }
}

//! Deciders parameterized by the distance bound `k`.
//!
//! When `k < n` an optimal solution leaves at least one voter pair at
//! distance zero, and that pair alone fixes the candidate matching, so it
//! suffices to try the `n²` pair-induced matchings. For larger `k` the
//! Spearman decider falls back to enumerating voter matchings, while the
//! swap decider runs a bounded search over adjacent swaps guided by "sad"
//! candidates: those whose position vector across the (matched) votes is
//! not shared by any candidate of the target election.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::exact::{id_exact_brute_n_spear, id_with_candidate_matching, next_permutation};
use crate::limits::Limits;
use crate::metrics::MetricKind;
use crate::model::{induced_distance, CandidateMatching, DistanceResult, Election, VoterMatching};
use crate::pairing::{pair_matchings, PairTable};

/// Distance budget `k` of a decision query "is the distance at most `k`?".
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Budget(pub u64);

impl From<u64> for Budget {
    fn from(k: u64) -> Self {
        Budget(k)
    }
}

/// Exchange of the candidates at `position` and `position + 1` in the vote
/// of `voter` (both 0-based, in the first election).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct AdjacentSwap {
    pub voter: usize,
    pub position: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FptWitness {
    /// Matchings with distance at most `k`.
    pub result: DistanceResult,
    /// At most `k` adjacent swaps turning the first election into one that
    /// the witness matchings map exactly onto the second.
    pub swaps: Vec<AdjacentSwap>,
    /// Number of sad candidates in each state along the accepted search
    /// path; empty when no search was needed.
    pub sad_counts: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Decision {
    Yes(Box<FptWitness>),
    No,
}

impl Decision {
    pub fn is_yes(&self) -> bool {
        matches!(self, Decision::Yes(_))
    }
}

/// Decides whether the Spearman isomorphic distance is at most `k`.
pub fn fpt_spear_decide(
    e: &Election,
    f: &Election,
    k: Budget,
    limits: &Limits,
) -> Result<Decision> {
    e.check_same_shape(f)?;
    if k.0 < e.num_voters() as u64 {
        return guess_zero_pair(e, f, k.0, MetricKind::Spearman);
    }
    let r = id_exact_brute_n_spear(e, f, limits)?;
    if r.value > k.0 {
        return Ok(Decision::No);
    }
    let swaps = swap_path(e, f, &r.candidate_matching, &r.voter_matching);
    Ok(yes(r, swaps, Vec::new()))
}

/// Decides whether the swap isomorphic distance is at most `k`.
///
/// With `k ≥ n` this enumerates all `n!` voter matchings and searches at
/// most `k` swaps deep under each, so `k` is capped by
/// [`Limits::max_search_budget`].
pub fn fpt_swap_decide(e: &Election, f: &Election, k: Budget, limits: &Limits) -> Result<Decision> {
    e.check_same_shape(f)?;
    let k = k.0;
    let n = e.num_voters();
    if k < n as u64 {
        return guess_zero_pair(e, f, k, MetricKind::Swap);
    }
    if k > limits.max_search_budget {
        return Err(Error::BudgetTooLargeForSearch {
            k,
            cap: limits.max_search_budget,
        });
    }
    // distances below n are settled exactly by the pair guess
    if let yes @ Decision::Yes(_) = guess_zero_pair(e, f, n as u64 - 1, MetricKind::Swap)? {
        return Ok(yes);
    }
    let mut nu: Vec<usize> = (0..n).collect();
    loop {
        let mut search = SwapSearch::new(e, f, &nu, k);
        if search.run() {
            let nu = VoterMatching::from_vec_unchecked(nu);
            let sigma = search.candidate_matching();
            let value = induced_distance(e, f, &sigma, &nu, MetricKind::Swap)?;
            debug_assert!(value <= search.path.len() as u64);
            let result = DistanceResult {
                value,
                candidate_matching: sigma,
                voter_matching: nu,
                exact: false,
                guarantee: None,
                solver: "swap-search",
            };
            return Ok(yes(result, search.path, search.sad_counts));
        }
        if !next_permutation(&mut nu) {
            return Ok(Decision::No);
        }
    }
}

/// Smallest `k ≤ k_max` for which the decider accepts, with its witness;
/// `None` when the distance exceeds `k_max`.
pub fn fpt_value(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    k_max: u64,
    limits: &Limits,
) -> Result<Option<DistanceResult>> {
    e.check_same_shape(f)?;
    let decide = match metric {
        MetricKind::Swap => fpt_swap_decide,
        MetricKind::Spearman => fpt_spear_decide,
        MetricKind::Discrete => {
            return Err(Error::UnsupportedMetric {
                metric: "disc",
                operation: "distance-parameterized search",
            })
        }
    };
    for k in 0..=k_max {
        if let Decision::Yes(w) = decide(e, f, Budget(k), limits)? {
            let mut r = w.result;
            debug_assert_eq!(r.value, k);
            r.exact = true;
            r.guarantee = None;
            return Ok(Some(r));
        }
    }
    Ok(None)
}

fn yes(result: DistanceResult, swaps: Vec<AdjacentSwap>, sad_counts: Vec<usize>) -> Decision {
    Decision::Yes(Box::new(FptWitness {
        result,
        swaps,
        sad_counts,
    }))
}

/// `k < n`: some optimal voter pair is at distance zero, so the optimal
/// candidate matching is one of the pair-induced ones. Matchings leaving
/// too many votes without an identical partner are skipped: each such
/// vote costs at least 1 (swap) or 2 (Spearman).
fn guess_zero_pair(e: &Election, f: &Election, k: u64, metric: MetricKind) -> Result<Decision> {
    let min_cost = if metric == MetricKind::Spearman { 2 } else { 1 };
    let table = PairTable::new(e, f);
    let mut best: Option<DistanceResult> = None;
    for (i, j, sigma) in pair_matchings(e, f) {
        if min_cost * table.unmatched(i, j) as u64 > k {
            continue;
        }
        let r = id_with_candidate_matching(e, f, &sigma, metric)?;
        if r.value <= k && best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    Ok(match best {
        Some(mut r) => {
            r.solver = "zero-pair";
            let swaps = swap_path(e, f, &r.candidate_matching, &r.voter_matching);
            yes(r, swaps, Vec::new())
        }
        None => Decision::No,
    })
}

/// Adjacent swaps (bubble sort per vote) turning each `e_i` into
/// `σ⁻¹(f_ν(i))`; their number is the induced swap distance.
pub fn swap_path(
    e: &Election,
    f: &Election,
    sigma: &CandidateMatching,
    nu: &VoterMatching,
) -> Vec<AdjacentSwap> {
    let inv = sigma.inverse();
    let mut swaps = Vec::new();
    for (i, v) in e.votes().iter().enumerate() {
        let target = f.vote(nu.target(i)).renamed(&inv);
        let mut keys: Vec<usize> = v.ranking().iter().map(|&c| target.index_of(c)).collect();
        let len = keys.len();
        for pass in 0..len {
            for p in 0..len - 1 - pass {
                if keys[p] > keys[p + 1] {
                    keys.swap(p, p + 1);
                    swaps.push(AdjacentSwap {
                        voter: i,
                        position: p,
                    });
                }
            }
        }
    }
    swaps
}

/// Applies swaps to the votes of `e`.
pub fn apply_swaps(e: &Election, swaps: &[AdjacentSwap]) -> Election {
    let mut votes = e.votes().to_vec();
    for s in swaps {
        votes[s.voter] = votes[s.voter].with_adjacent_swap(s.position);
    }
    e.with_votes(votes)
}

/// Bounded search for at most `k` adjacent swaps that make every candidate
/// happy under a fixed voter matching.
struct SwapSearch {
    k: u64,
    m: usize,
    // current rankings and positions of e's votes
    ranking: Vec<Vec<usize>>,
    position: Vec<Vec<usize>>,
    // target votes f_ν(i)
    target_ranking: Vec<Vec<usize>>,
    target_position: Vec<Vec<usize>>,
    // best remaining budget with which a state has already failed
    failed: HashMap<Vec<usize>, u64>,
    path: Vec<AdjacentSwap>,
    sad_counts: Vec<usize>,
}

impl SwapSearch {
    fn new(e: &Election, f: &Election, nu: &[usize], k: u64) -> Self {
        SwapSearch {
            k,
            m: e.num_candidates(),
            ranking: e.votes().iter().map(|v| v.ranking().to_vec()).collect(),
            position: e.votes().iter().map(|v| v.positions().to_vec()).collect(),
            target_ranking: nu.iter().map(|&j| f.vote(j).ranking().to_vec()).collect(),
            target_position: nu.iter().map(|&j| f.vote(j).positions().to_vec()).collect(),
            failed: HashMap::new(),
            path: Vec::new(),
            sad_counts: Vec::new(),
        }
    }

    fn run(&mut self) -> bool {
        self.descend(self.k)
    }

    // the only possible partner of c is whoever sits at c's position in the
    // first target vote
    fn partner(&self, c: usize) -> usize {
        self.target_ranking[0][self.position[0][c]]
    }

    fn sad_candidates(&self) -> Vec<usize> {
        (0..self.m)
            .filter(|&c| {
                let partner = self.partner(c);
                self.position
                    .iter()
                    .zip(&self.target_position)
                    .any(|(pos, tpos)| pos[c] != tpos[partner])
            })
            .collect()
    }

    fn candidate_matching(&self) -> CandidateMatching {
        CandidateMatching::from_vec_unchecked((0..self.m).map(|c| self.partner(c)).collect())
    }

    fn swap(&mut self, voter: usize, p: usize) {
        let r = &mut self.ranking[voter];
        r.swap(p, p + 1);
        self.position[voter][r[p]] = p;
        self.position[voter][r[p + 1]] = p + 1;
    }

    fn descend(&mut self, remaining: u64) -> bool {
        let sad = self.sad_candidates();
        self.sad_counts.push(sad.len());
        if sad.is_empty() {
            return true;
        }
        // one swap changes the happiness of at most its two candidates
        if sad.len() as u64 > 2 * remaining {
            self.sad_counts.pop();
            return false;
        }
        assert!(sad.len() as u64 <= 2 * self.k);
        let key: Vec<usize> = self.ranking.concat();
        if self.failed.get(&key).is_some_and(|&r| r >= remaining) {
            self.sad_counts.pop();
            return false;
        }

        let n = self.ranking.len();
        let reach = usize::try_from(self.k).unwrap_or(usize::MAX);
        let mut tried = vec![false; n * self.m];
        for voter in 0..n {
            for &d in &sad {
                let pd = self.position[voter][d];
                for offset in 0..=reach.min(self.m) {
                    let spots = [pd.checked_sub(offset), Some(pd + offset)];
                    for p in spots.into_iter().flatten() {
                        if p >= self.m {
                            continue;
                        }
                        // swap c at p with its predecessor, then its successor
                        for s in [p.checked_sub(1), Some(p)].into_iter().flatten() {
                            if s + 1 >= self.m || tried[voter * self.m + s] {
                                continue;
                            }
                            tried[voter * self.m + s] = true;
                            self.swap(voter, s);
                            self.path.push(AdjacentSwap { voter, position: s });
                            if self.descend(remaining - 1) {
                                return true;
                            }
                            self.path.pop();
                            self.swap(voter, s);
                        }
                    }
                }
            }
        }
        self.failed.insert(key, remaining);
        self.sad_counts.pop();
        false
    }
}

//! Exact isomorphic distances.
//!
//! The polynomial subproblems (one side of the matching fixed) reduce to a
//! single assignment problem. The full problem is solved by enumerating the
//! other side: all `m!` candidate matchings, or for Spearman all `n!` voter
//! matchings. Both enumerations are depth-first in lexicographic order with
//! a lower bound on partially fixed cost matrices.

use std::collections::{HashMap, VecDeque};
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::assignment::{min_cost_perfect_matching, CostMatrix};
use crate::error::{Error, Result};
use crate::isomorphism::id_distance_disc;
use crate::limits::Limits;
use crate::metrics::MetricKind;
use crate::model::{CandidateMatching, DistanceResult, Election, PreferenceOrder, VoterMatching};

/// Optimal voter matching for a fixed candidate matching `sigma`.
pub fn id_with_candidate_matching(
    e: &Election,
    f: &Election,
    sigma: &CandidateMatching,
    metric: MetricKind,
) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    if sigma.len() != e.num_candidates() {
        return Err(Error::size(
            "candidate matching",
            sigma.len(),
            e.num_candidates(),
        ));
    }
    let renamed: Vec<PreferenceOrder> = e.votes().iter().map(|v| v.renamed(sigma)).collect();
    let (value, nu) = match_votes(&renamed, f.votes(), metric)?;
    Ok(DistanceResult::exact(
        value,
        sigma.clone(),
        nu,
        "candidate-matching",
    ))
}

/// Best voter matching between two vote lists over the same candidates.
pub(crate) fn match_votes(
    left: &[PreferenceOrder],
    right: &[PreferenceOrder],
    metric: MetricKind,
) -> Result<(u64, VoterMatching)> {
    if metric == MetricKind::Discrete {
        return Ok(equal_vote_matching(left, right));
    }
    let cost = CostMatrix::from_fn(left.len(), |i, j| {
        metric.distance_unchecked(&left[i], &right[j])
    })?;
    let solved = min_cost_perfect_matching(&cost)?;
    Ok((
        solved.total,
        VoterMatching::from_vec_unchecked(solved.assignment),
    ))
}

/// With 0/1 costs the optimum pairs up as many identical votes as possible;
/// the remaining voters are matched in ascending order.
fn equal_vote_matching(
    left: &[PreferenceOrder],
    right: &[PreferenceOrder],
) -> (u64, VoterMatching) {
    let mut by_vote: HashMap<&[usize], VecDeque<usize>> = HashMap::new();
    for (j, v) in right.iter().enumerate() {
        by_vote.entry(v.ranking()).or_default().push_back(j);
    }
    let mut map = vec![usize::MAX; left.len()];
    let mut taken = vec![false; right.len()];
    let mut unmatched = Vec::new();
    for (i, v) in left.iter().enumerate() {
        match by_vote.get_mut(v.ranking()).and_then(|q| q.pop_front()) {
            Some(j) => {
                map[i] = j;
                taken[j] = true;
            }
            None => unmatched.push(i),
        }
    }
    let free = (0..right.len()).filter(|&j| !taken[j]);
    for (i, j) in unmatched.iter().zip(free) {
        map[*i] = j;
    }
    (
        unmatched.len() as u64,
        VoterMatching::from_vec_unchecked(map),
    )
}

/// Exact Spearman distance for a fixed voter matching `nu`: an assignment
/// problem over candidate pairs with weight
/// `w(c, c') = Σ_i |pos_{e_i}(c) - pos_{f_ν(i)}(c')|`.
pub fn id_with_voter_matching_spear(
    e: &Election,
    f: &Election,
    nu: &VoterMatching,
) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    if nu.len() != e.num_voters() {
        return Err(Error::size("voter matching", nu.len(), e.num_voters()));
    }
    let m = e.num_candidates();
    let mut w = vec![0u64; m * m];
    for (i, &j) in nu.as_slice().iter().enumerate() {
        add_positional_cost(&mut w, m, e.vote(i).positions(), f.vote(j).positions());
    }
    let solved = min_cost_perfect_matching(&CostMatrix::from_flat(m, w)?)?;
    Ok(DistanceResult::exact(
        solved.total,
        CandidateMatching::from_vec_unchecked(solved.assignment),
        nu.clone(),
        "voter-matching",
    ))
}

fn add_positional_cost(w: &mut [u64], m: usize, left: &[usize], right: &[usize]) {
    for (c, &p) in left.iter().enumerate() {
        let row = &mut w[c * m..(c + 1) * m];
        for (cell, &q) in row.iter_mut().zip(right) {
            *cell += p.abs_diff(q) as u64;
        }
    }
}

/// Exact distance by enumerating all candidate matchings.
pub fn id_exact_brute_m(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    limits: &Limits,
) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    let (m, n) = (e.num_candidates(), e.num_voters());
    if m > limits.max_brute_candidates {
        return Err(Error::CapExceeded {
            what: "candidates",
            value: m as u64,
            cap: limits.max_brute_candidates as u64,
        });
    }
    let pe: Vec<&[usize]> = e.votes().iter().map(|v| v.positions()).collect();
    let pf: Vec<&[usize]> = f.votes().iter().map(|v| v.positions()).collect();

    // partial cost of every voter pair (i, j) given σ on candidates 0..=c
    let extend = |cost: &mut [u64], prefix: &[usize]| {
        let c = prefix.len() - 1;
        let t = prefix[c];
        for i in 0..n {
            let row = &mut cost[i * n..(i + 1) * n];
            let pi = pe[i];
            for (j, cell) in row.iter_mut().enumerate() {
                let pj = pf[j];
                match metric {
                    MetricKind::Discrete => {
                        if pi[c] != pj[t] {
                            *cell = 1;
                        }
                    }
                    MetricKind::Swap => {
                        *cell += prefix[..c]
                            .iter()
                            .enumerate()
                            .filter(|&(c2, &t2)| (pi[c] < pi[c2]) != (pj[t] < pj[t2]))
                            .count() as u64;
                    }
                    MetricKind::Spearman => *cell += pi[c].abs_diff(pj[t]) as u64,
                }
            }
        }
    };
    let best = minimize_over_permutations(m, n, &extend)?;
    Ok(DistanceResult::exact(
        best.value,
        CandidateMatching::from_vec_unchecked(best.permutation),
        VoterMatching::from_vec_unchecked(best.assignment),
        "brute-candidates",
    ))
}

/// Exact Spearman distance by enumerating all voter matchings.
pub fn id_exact_brute_n_spear(
    e: &Election,
    f: &Election,
    limits: &Limits,
) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    let (m, n) = (e.num_candidates(), e.num_voters());
    if n > limits.max_brute_voters {
        return Err(Error::CapExceeded {
            what: "voters",
            value: n as u64,
            cap: limits.max_brute_voters as u64,
        });
    }
    let extend = |w: &mut [u64], prefix: &[usize]| {
        let i = prefix.len() - 1;
        add_positional_cost(w, m, e.vote(i).positions(), f.vote(prefix[i]).positions());
    };
    let best = minimize_over_permutations(n, m, &extend)?;
    Ok(DistanceResult::exact(
        best.value,
        CandidateMatching::from_vec_unchecked(best.assignment),
        VoterMatching::from_vec_unchecked(best.permutation),
        "brute-voters",
    ))
}

/// Exact distance with the cheapest applicable exact algorithm.
///
/// Discrete is polynomial. Swap needs candidate enumeration. Spearman uses
/// candidate enumeration when `m` is within its cap and voter enumeration
/// otherwise.
pub fn id_exact(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    limits: &Limits,
) -> Result<DistanceResult> {
    match metric {
        MetricKind::Discrete => id_distance_disc(e, f),
        MetricKind::Swap => id_exact_brute_m(e, f, metric, limits),
        MetricKind::Spearman => {
            e.check_same_shape(f)?;
            let m_ok = e.num_candidates() <= limits.max_brute_candidates;
            let n_ok = e.num_voters() <= limits.max_brute_voters;
            // enumerate whichever side has fewer permutations
            if m_ok && (!n_ok || e.num_candidates() <= e.num_voters()) {
                id_exact_brute_m(e, f, metric, limits)
            } else if n_ok {
                id_exact_brute_n_spear(e, f, limits)
            } else {
                id_exact_brute_m(e, f, metric, limits)
            }
        }
    }
}

/// Minimal Kemeny score of `e` and the lexicographically first consensus
/// ranking attaining it.
pub fn kemeny_score_brute(e: &Election, limits: &Limits) -> Result<(u64, PreferenceOrder)> {
    let m = e.num_candidates();
    if m > limits.max_kemeny_candidates {
        return Err(Error::CapExceeded {
            what: "candidates",
            value: m as u64,
            cap: limits.max_kemeny_candidates as u64,
        });
    }
    // before[a][b] = number of votes ranking a above b
    let mut before = vec![vec![0u64; m]; m];
    for v in e.votes() {
        let r = v.ranking();
        for p in 0..m {
            for q in p + 1..m {
                before[r[p]][r[q]] += 1;
            }
        }
    }
    let mut ranking: Vec<usize> = (0..m).collect();
    let mut best = (u64::MAX, ranking.clone());
    loop {
        let mut score = 0;
        for p in 0..m {
            for q in p + 1..m {
                score += before[ranking[q]][ranking[p]];
            }
        }
        if score < best.0 {
            best = (score, ranking.clone());
        }
        if !next_permutation(&mut ranking) {
            break;
        }
    }
    Ok((best.0, PreferenceOrder::from_ranking_unchecked(best.1)))
}

/// Advances `perm` to its lexicographic successor; `false` once it was the last.
pub(crate) fn next_permutation(perm: &mut [usize]) -> bool {
    let n = perm.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && perm[i - 1] >= perm[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while perm[j] <= perm[i - 1] {
        j -= 1;
    }
    perm.swap(i - 1, j);
    perm[i..].reverse();
    true
}

struct Best {
    value: u64,
    permutation: Vec<usize>,
    assignment: Vec<usize>,
}

type Extend<'a> = dyn Fn(&mut [u64], &[usize]) + Sync + 'a;

/// Minimizes, over every permutation `π` of `0..levels`, the assignment
/// optimum of the `dim × dim` cost matrix obtained by calling `extend` once
/// per level. Each call only adds to entries (or raises 0/1 indicators), so
/// a partially built matrix bounds every completion from below.
///
/// Returns the first optimum in lexicographic order of `π`.
fn minimize_over_permutations(levels: usize, dim: usize, extend: &Extend<'_>) -> Result<Best> {
    let incumbent = AtomicU64::new(u64::MAX);
    let branches: Vec<Result<Option<Best>>> = (0..levels)
        .into_par_iter()
        .map(|first| {
            let mut search = Branch {
                levels,
                dim,
                extend,
                incumbent: &incumbent,
                prefix: Vec::with_capacity(levels),
                used: vec![false; levels],
                buffers: vec![vec![0u64; dim * dim]; levels + 1],
                best: None,
            };
            search.descend(first, 0)?;
            Ok(search.best)
        })
        .collect();
    let mut best: Option<Best> = None;
    for branch in branches {
        if let Some(b) = branch? {
            if best.as_ref().is_none_or(|cur| b.value < cur.value) {
                best = Some(b);
            }
        }
    }
    // levels >= 1 for any valid election, so some leaf was reached
    best.ok_or(Error::EmptyElection)
}

struct Branch<'a, 'b> {
    levels: usize,
    dim: usize,
    extend: &'a Extend<'b>,
    incumbent: &'a AtomicU64,
    prefix: Vec<usize>,
    used: Vec<bool>,
    buffers: Vec<Vec<u64>>,
    best: Option<Best>,
}

impl Branch<'_, '_> {
    fn descend(&mut self, choice: usize, depth: usize) -> Result<()> {
        self.prefix.push(choice);
        self.used[choice] = true;
        let (head, tail) = self.buffers.split_at_mut(depth + 1);
        let cost = &mut tail[0];
        cost.copy_from_slice(&head[depth]);
        (self.extend)(cost, &self.prefix);

        let bound = lower_bound(cost, self.dim);
        let local = self.best.as_ref().map_or(u64::MAX, |b| b.value);
        // equal values may still come earlier in another branch, so the
        // shared incumbent only prunes strictly
        let prune = bound >= local || bound > self.incumbent.load(Ordering::Relaxed);
        if !prune {
            if depth + 1 == self.levels {
                let matrix = CostMatrix::from_flat(self.dim, cost.clone())?;
                let solved = min_cost_perfect_matching(&matrix)?;
                if solved.total < local {
                    self.incumbent.fetch_min(solved.total, Ordering::Relaxed);
                    self.best = Some(Best {
                        value: solved.total,
                        permutation: self.prefix.clone(),
                        assignment: solved.assignment,
                    });
                }
            } else {
                for next in 0..self.levels {
                    if !self.used[next] {
                        self.descend(next, depth + 1)?;
                    }
                }
            }
        }
        self.used[choice] = false;
        self.prefix.pop();
        Ok(())
    }
}

fn lower_bound(cost: &[u64], dim: usize) -> u64 {
    let rows: u64 = cost
        .chunks(dim)
        .map(|r| r.iter().copied().min().unwrap_or(0))
        .sum();
    let mut col_min = vec![u64::MAX; dim];
    for r in cost.chunks(dim) {
        for (m, &x) in col_min.iter_mut().zip(r) {
            *m = (*m).min(x);
        }
    }
    let cols: u64 = col_min.iter().sum();
    rows.max(cols)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn el(m: usize, votes: &[&[usize]]) -> Election {
        Election::new(m, votes.iter().map(|v| v.to_vec()).collect()).unwrap()
    }

    fn example_pair() -> (Election, Election) {
        (
            el(3, &[&[0, 1, 2], &[1, 0, 2], &[2, 0, 1]]),
            el(3, &[&[1, 0, 2], &[0, 1, 2], &[2, 0, 1]]),
        )
    }

    #[test]
    fn next_permutation_walks_lexicographically() {
        let mut p = vec![0, 1, 2];
        let mut seen = vec![p.clone()];
        while next_permutation(&mut p) {
            seen.push(p.clone());
        }
        assert_eq!(
            seen,
            vec![
                vec![0, 1, 2],
                vec![0, 2, 1],
                vec![1, 0, 2],
                vec![1, 2, 0],
                vec![2, 0, 1],
                vec![2, 1, 0]
            ]
        );
    }

    #[test]
    fn candidate_matching_examples() {
        let (e, f) = example_pair();
        let r =
            id_with_candidate_matching(&e, &f, &CandidateMatching::identity(3), MetricKind::Swap)
                .unwrap();
        assert_eq!(r.value, 0);
        assert_eq!(r.voter_matching.as_slice(), &[1, 0, 2]);

        let e = el(3, &[&[0, 1, 2]]);
        let f = el(3, &[&[1, 0, 2]]);
        let r =
            id_with_candidate_matching(&e, &f, &CandidateMatching::identity(3), MetricKind::Swap)
                .unwrap();
        assert_eq!(r.value, 1);
        assert!(r.is_witness_consistent(&e, &f, MetricKind::Swap));
    }

    #[test]
    fn discrete_matching_pairs_identical_votes_first() {
        let e = el(2, &[&[0, 1], &[1, 0], &[0, 1]]);
        let f = el(2, &[&[1, 0], &[1, 0], &[0, 1]]);
        let r = id_with_candidate_matching(
            &e,
            &f,
            &CandidateMatching::identity(2),
            MetricKind::Discrete,
        )
        .unwrap();
        assert_eq!(r.value, 1);
        assert_eq!(r.voter_matching.as_slice(), &[2, 0, 1]);
        assert!(r.is_witness_consistent(&e, &f, MetricKind::Discrete));
    }

    #[test]
    fn voter_matching_examples() {
        let (e, f) = example_pair();
        let r = id_with_voter_matching_spear(&e, &f, &VoterMatching::new(vec![1, 0, 2]).unwrap())
            .unwrap();
        assert_eq!(r.value, 0);

        let e = el(3, &[&[0, 1, 2], &[0, 1, 2]]);
        let f = el(3, &[&[0, 1, 2], &[0, 2, 1]]);
        let r = id_with_voter_matching_spear(&e, &f, &VoterMatching::identity(2)).unwrap();
        assert_eq!(r.value, 2);
        assert!(r.is_witness_consistent(&e, &f, MetricKind::Spearman));
    }

    #[test]
    fn brute_force_examples() {
        let (e, f) = example_pair();
        for metric in MetricKind::ALL {
            let r = id_exact_brute_m(&e, &f, metric, &Limits::default()).unwrap();
            assert_eq!(r.value, 0);
            assert!(r.is_witness_consistent(&e, &f, metric));
        }
        assert_eq!(
            id_exact_brute_n_spear(&e, &f, &Limits::default())
                .unwrap()
                .value,
            0
        );

        let voters = el(3, &[&[0, 1, 2], &[0, 1, 2], &[1, 0, 2]]);
        let unanimous = Election::unanimous(3, 3).unwrap();
        let r =
            id_exact_brute_m(&voters, &unanimous, MetricKind::Swap, &Limits::default()).unwrap();
        assert_eq!(r.value, 1);
    }

    #[test]
    fn caps_are_enforced() {
        let e = Election::unanimous(4, 3).unwrap();
        let tight = Limits {
            max_brute_candidates: 3,
            max_brute_voters: 2,
            max_kemeny_candidates: 3,
            ..Limits::default()
        };
        assert!(matches!(
            id_exact_brute_m(&e, &e, MetricKind::Swap, &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            id_exact_brute_n_spear(&e, &e, &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(matches!(
            kemeny_score_brute(&e, &tight),
            Err(Error::CapExceeded { .. })
        ));
        assert!(id_exact_brute_m(&e, &e, MetricKind::Swap, &Limits::unbounded()).is_ok());
    }

    #[test]
    fn size_mismatch_is_reported() {
        let a = Election::unanimous(3, 2).unwrap();
        let b = Election::unanimous(3, 3).unwrap();
        assert!(matches!(
            id_exact_brute_m(&a, &b, MetricKind::Swap, &Limits::default()),
            Err(Error::SizeMismatch { .. })
        ));
        assert!(matches!(
            id_with_voter_matching_spear(&a, &b, &VoterMatching::identity(2)),
            Err(Error::SizeMismatch { .. })
        ));
    }

    #[test]
    fn kemeny_examples() {
        let l = Limits::default();
        let (s, c) = kemeny_score_brute(&el(3, &[&[2, 0, 1], &[2, 0, 1]]), &l).unwrap();
        assert_eq!((s, c.ranking()), (0, &[2usize, 0, 1][..]));
        assert_eq!(
            kemeny_score_brute(&el(2, &[&[0, 1], &[1, 0]]), &l)
                .unwrap()
                .0,
            1
        );
        let (s, c) = kemeny_score_brute(&el(3, &[&[0, 1, 2], &[0, 1, 2], &[1, 0, 2]]), &l).unwrap();
        assert_eq!((s, c.ranking()), (1, &[0usize, 1, 2][..]));
    }
}

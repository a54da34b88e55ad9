//! Approximation algorithms for swap and Spearman isomorphic distances.
//!
//! All of them evaluate a polynomial family of candidate matchings exactly
//! (voter matching solved optimally) and return the best one. Results carry
//! their ratio guarantee as an exact rational.

use std::collections::HashSet;
use std::sync::atomic::{AtomicU64, Ordering};

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::exact::{id_with_candidate_matching, id_with_voter_matching_spear, next_permutation};
use crate::limits::Limits;
use crate::metrics::MetricKind;
use crate::model::{CandidateMatching, DistanceResult, Election, Guarantee, VoterMatching};
use crate::pairing::{pair_matchings, PairTable};

fn require_positional(metric: MetricKind, operation: &'static str) -> Result<()> {
    if metric == MetricKind::Discrete {
        return Err(Error::UnsupportedMetric {
            metric: "disc",
            operation,
        });
    }
    Ok(())
}

/// Spearman is approximated within `factor`; swap within twice that, since
/// footrule is at most twice the swap distance.
fn ratio(metric: MetricKind, factor: u64) -> Guarantee {
    match metric {
        MetricKind::Swap => Guarantee::from_integer(2 * factor),
        _ => Guarantee::from_integer(factor),
    }
}

/// Best of the `n²` matchings sending one vote of `e` exactly onto one vote
/// of `f`: an `m`-approximation for Spearman and `2m` for swap.
pub fn approx_c(e: &Election, f: &Election, metric: MetricKind) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    require_positional(metric, "the m-approximation")?;
    let table = PairTable::new(e, f);
    let per_vote = if metric == MetricKind::Spearman { 2 } else { 1 };
    let pairs = pair_matchings(e, f);
    let candidates: Vec<(u64, CandidateMatching)> = pairs
        .into_iter()
        .map(|(i, j, sigma)| (per_vote * table.unmatched(i, j) as u64, sigma))
        .collect();
    let best = best_candidate_matching(e, f, metric, &candidates)?;
    let m = e.num_candidates() as u64;
    Ok(DistanceResult::bounded(
        best.value,
        best.candidate_matching,
        best.voter_matching,
        ratio(metric, m),
        "approx-c",
    ))
}

/// Evaluates every matching and returns the first minimum in list order.
/// Each entry carries a lower bound on its value; entries whose bound
/// exceeds the incumbent are skipped.
fn best_candidate_matching(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    candidates: &[(u64, CandidateMatching)],
) -> Result<DistanceResult> {
    let incumbent = AtomicU64::new(u64::MAX);
    let evaluated: Vec<Option<Result<DistanceResult>>> = candidates
        .par_iter()
        .map(|(bound, sigma)| {
            if *bound > incumbent.load(Ordering::Relaxed) {
                return None;
            }
            let r = id_with_candidate_matching(e, f, sigma, metric);
            if let Ok(r) = &r {
                incumbent.fetch_min(r.value, Ordering::Relaxed);
            }
            Some(r)
        })
        .collect();
    let mut best: Option<DistanceResult> = None;
    for r in evaluated.into_iter().flatten() {
        let r = r?;
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
    }
    best.ok_or(Error::EmptyElection)
}

/// `(m - c)`-approximation (Spearman; `2(m - c)` for swap): on top of each
/// pair-induced matching, force every choice of `2c + 2` candidate
/// assignments and repair the rest into a bijection.
pub fn approx_c_minus(
    e: &Election,
    f: &Election,
    metric: MetricKind,
    c: usize,
    limits: &Limits,
) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    require_positional(metric, "the (m - c)-approximation")?;
    if c > limits.max_approx_c {
        return Err(Error::CapExceeded {
            what: "c",
            value: c as u64,
            cap: limits.max_approx_c as u64,
        });
    }
    let m = e.num_candidates();
    if c >= m {
        return Err(Error::InvalidParameter(format!(
            "c = {c} must be smaller than the number of candidates ({m})"
        )));
    }
    let forced = (2 * c + 2).min(m);

    let mut seen: HashSet<CandidateMatching> = HashSet::new();
    let mut family: Vec<(u64, CandidateMatching)> = Vec::new();
    let mut sources: Vec<usize> = (0..forced).collect();
    let pairs = pair_matchings(e, f);
    for (_, _, base) in &pairs {
        loop {
            for_each_arrangement(m, forced, |targets| {
                let sigma = override_matching(base, &sources, targets);
                if seen.insert(sigma.clone()) {
                    family.push((0, sigma));
                }
            });
            if !next_combination(&mut sources, m) {
                break;
            }
        }
        sources = (0..forced).collect();
    }
    let best = best_candidate_matching(e, f, metric, &family)?;
    // forcing every candidate reaches all m! matchings
    let factor = if forced == m { 1 } else { (m - c) as u64 };
    let ratio = if factor == 1 {
        Guarantee::from_integer(1)
    } else {
        ratio(metric, factor)
    };
    Ok(DistanceResult::bounded(
        best.value,
        best.candidate_matching,
        best.voter_matching,
        ratio,
        "approx-c-minus",
    ))
}

/// `sources[t] ↦ targets[t]` for every `t`; the other candidates keep their
/// image under `base` unless it was taken, and displaced candidates fill
/// the freed images, both in ascending order.
fn override_matching(
    base: &CandidateMatching,
    sources: &[usize],
    targets: &[usize],
) -> CandidateMatching {
    let m = base.len();
    let mut map = vec![usize::MAX; m];
    let mut image_taken = vec![false; m];
    let mut is_source = vec![false; m];
    for (&s, &t) in sources.iter().zip(targets) {
        map[s] = t;
        image_taken[t] = true;
        is_source[s] = true;
    }
    let mut displaced = Vec::new();
    for x in 0..m {
        if is_source[x] {
            continue;
        }
        let t = base.image(x);
        if image_taken[t] {
            displaced.push(x);
        } else {
            map[x] = t;
        }
    }
    for x in 0..m {
        if map[x] != usize::MAX && !is_source[x] {
            image_taken[map[x]] = true;
        }
    }
    let free = (0..m).filter(|&t| !image_taken[t]);
    for (x, t) in displaced.into_iter().zip(free) {
        map[x] = t;
    }
    CandidateMatching::from_vec_unchecked(map)
}

/// Calls `visit` with every ordered selection of `k` distinct values from `0..m`.
fn for_each_arrangement(m: usize, k: usize, mut visit: impl FnMut(&[usize])) {
    fn rec(
        m: usize,
        k: usize,
        cur: &mut Vec<usize>,
        used: &mut [bool],
        visit: &mut dyn FnMut(&[usize]),
    ) {
        if cur.len() == k {
            visit(cur);
            return;
        }
        for t in 0..m {
            if !used[t] {
                used[t] = true;
                cur.push(t);
                rec(m, k, cur, used, visit);
                cur.pop();
                used[t] = false;
            }
        }
    }
    rec(
        m,
        k,
        &mut Vec::with_capacity(k),
        &mut vec![false; m],
        &mut visit,
    );
}

/// Next `k`-subset of `0..m` in lexicographic order.
fn next_combination(comb: &mut [usize], m: usize) -> bool {
    let k = comb.len();
    for i in (0..k).rev() {
        if comb[i] < m - k + i {
            comb[i] += 1;
            for j in i + 1..k {
                comb[j] = comb[j - 1] + 1;
            }
            return true;
        }
    }
    false
}

/// When `m ≤ n!` this is [`approx_c`]. Otherwise `n!` is small enough to
/// enumerate every voter matching and solve each optimally for Spearman,
/// which is exact for Spearman and a 2-approximation for swap.
pub fn approx_auto(e: &Election, f: &Election, metric: MetricKind) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    require_positional(metric, "the n!-approximation")?;
    let (m, n) = (e.num_candidates(), e.num_voters());
    if !factorial_below(n, m) {
        return approx_c(e, f, metric);
    }
    let mut nu: Vec<usize> = (0..n).collect();
    let mut best: Option<DistanceResult> = None;
    loop {
        let spear =
            id_with_voter_matching_spear(e, f, &VoterMatching::from_vec_unchecked(nu.clone()))?;
        let r = match metric {
            MetricKind::Spearman => spear,
            _ => id_with_candidate_matching(e, f, &spear.candidate_matching, metric)?,
        };
        if best.as_ref().is_none_or(|b| r.value < b.value) {
            best = Some(r);
        }
        if !next_permutation(&mut nu) {
            break;
        }
    }
    let best = best.expect("at least one voter matching");
    Ok(DistanceResult::bounded(
        best.value,
        best.candidate_matching,
        best.voter_matching,
        ratio(metric, 1),
        "approx-voters",
    ))
}

// n! < m
fn factorial_below(n: usize, m: usize) -> bool {
    let mut fact: usize = 1;
    for i in 2..=n {
        fact = fact.saturating_mul(i);
        if fact >= m {
            return false;
        }
    }
    fact < m
}

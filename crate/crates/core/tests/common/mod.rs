//! Brute-force reference implementations shared by the integration tests.
//! They only use the public `Election` accessors, never the solvers.
#![allow(dead_code)]

use eliso::metrics::MetricKind;
use eliso::model::Election;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_election<R: Rng>(rng: &mut R, m: usize, n: usize) -> Election {
    let votes = (0..n)
        .map(|_| {
            let mut v: Vec<usize> = (0..m).collect();
            v.shuffle(rng);
            v
        })
        .collect();
    Election::new(m, votes).unwrap()
}

/// Random `(m, n)` with `1 ≤ m ≤ max_m`, `1 ≤ n ≤ max_n`.
pub fn random_dims<R: Rng>(rng: &mut R, max_m: usize, max_n: usize) -> (usize, usize) {
    (rng.gen_range(1..=max_m), rng.gen_range(1..=max_n))
}

/// A random election with its candidates renamed and voters shuffled.
pub fn scrambled<R: Rng>(rng: &mut R, e: &Election) -> Election {
    let mut sigma: Vec<usize> = (0..e.num_candidates()).collect();
    sigma.shuffle(rng);
    let mut votes: Vec<Vec<usize>> = e
        .votes()
        .iter()
        .map(|v| v.ranking().iter().map(|&c| sigma[c]).collect())
        .collect();
    votes.shuffle(rng);
    Election::new(e.num_candidates(), votes).unwrap()
}

fn position_table(v: &[usize]) -> Vec<usize> {
    let mut pos = vec![0; v.len()];
    for (i, &c) in v.iter().enumerate() {
        pos[c] = i;
    }
    pos
}

/// Pairs ranked in opposite orders, counted pair by pair.
pub fn naive_swap(u: &[usize], v: &[usize]) -> u64 {
    let (pu, pv) = (position_table(u), position_table(v));
    let m = u.len();
    let mut count = 0;
    for a in 0..m {
        for b in a + 1..m {
            if (pu[a] < pu[b]) != (pv[a] < pv[b]) {
                count += 1;
            }
        }
    }
    count
}

pub fn naive_spear(u: &[usize], v: &[usize]) -> u64 {
    let (pu, pv) = (position_table(u), position_table(v));
    pu.iter()
        .zip(&pv)
        .map(|(&a, &b)| a.abs_diff(b) as u64)
        .sum()
}

pub fn naive_disc(u: &[usize], v: &[usize]) -> u64 {
    u64::from(u != v)
}

pub fn naive(metric: MetricKind, u: &[usize], v: &[usize]) -> u64 {
    match metric {
        MetricKind::Discrete => naive_disc(u, v),
        MetricKind::Swap => naive_swap(u, v),
        MetricKind::Spearman => naive_spear(u, v),
    }
}

/// All permutations of `0..k`, in no particular order.
pub fn permutations(k: usize) -> Vec<Vec<usize>> {
    fn rec(cur: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if cur.len() == used.len() {
            out.push(cur.clone());
            return;
        }
        for c in 0..used.len() {
            if !used[c] {
                used[c] = true;
                cur.push(c);
                rec(cur, used, out);
                cur.pop();
                used[c] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; k], &mut out);
    out
}

fn rename(e: &Election, sigma: &[usize]) -> Vec<Vec<usize>> {
    e.votes()
        .iter()
        .map(|v| v.ranking().iter().map(|&c| sigma[c]).collect())
        .collect()
}

fn min_over_voter_matchings(
    left: &[Vec<usize>],
    f: &Election,
    metric: MetricKind,
    perms: &[Vec<usize>],
) -> u64 {
    let cost: Vec<Vec<u64>> = left
        .iter()
        .map(|u| {
            f.votes()
                .iter()
                .map(|v| naive(metric, u, v.ranking()))
                .collect()
        })
        .collect();
    brute_assignment(&cost, perms)
}

/// Minimum of the summed cost over every candidate matching and every
/// voter matching.
pub fn joint_brute(e: &Election, f: &Election, metric: MetricKind) -> u64 {
    let voter_perms = permutations(e.num_voters());
    permutations(e.num_candidates())
        .iter()
        .map(|sigma| min_over_voter_matchings(&rename(e, sigma), f, metric, &voter_perms))
        .min()
        .unwrap()
}

pub fn brute_with_candidate_matching(
    e: &Election,
    f: &Election,
    sigma: &[usize],
    metric: MetricKind,
) -> u64 {
    min_over_voter_matchings(&rename(e, sigma), f, metric, &permutations(e.num_voters()))
}

pub fn brute_with_voter_matching(
    e: &Election,
    f: &Election,
    nu: &[usize],
    metric: MetricKind,
) -> u64 {
    permutations(e.num_candidates())
        .iter()
        .map(|sigma| {
            rename(e, sigma)
                .iter()
                .enumerate()
                .map(|(i, u)| naive(metric, u, f.vote(nu[i]).ranking()))
                .sum::<u64>()
        })
        .min()
        .unwrap()
}

/// Minimum over the given permutations of `Σ cost[i][p[i]]`.
pub fn brute_assignment(cost: &[Vec<u64>], perms: &[Vec<usize>]) -> u64 {
    perms
        .iter()
        .map(|p| p.iter().enumerate().map(|(i, &j)| cost[i][j]).sum::<u64>())
        .min()
        .unwrap()
}

pub fn brute_kemeny(e: &Election) -> u64 {
    permutations(e.num_candidates())
        .iter()
        .map(|r| {
            e.votes()
                .iter()
                .map(|v| naive_swap(r, v.ranking()))
                .sum::<u64>()
        })
        .min()
        .unwrap()
}

/// The two maximal single-crossing domains over four candidates whose
/// sets of top choices differ in size, columns in the listed order.
pub fn single_crossing_pair() -> (Election, Election) {
    let first = vec![
        vec![0, 1, 2, 3],
        vec![1, 0, 2, 3],
        vec![1, 2, 0, 3],
        vec![1, 2, 3, 0],
        vec![1, 3, 2, 0],
        vec![3, 1, 2, 0],
        vec![3, 2, 1, 0],
    ];
    let second = vec![
        vec![3, 2, 1, 0],
        vec![3, 2, 0, 1],
        vec![3, 0, 2, 1],
        vec![0, 3, 2, 1],
        vec![0, 2, 3, 1],
        vec![0, 2, 1, 3],
        vec![0, 1, 2, 3],
    ];
    (
        Election::new(4, first).unwrap(),
        Election::new(4, second).unwrap(),
    )
}

//! Election isomorphism, a canonical form, and the discrete isomorphic
//! distance.
//!
//! Any isomorphism has to send `e_0` onto some vote `f_j`, and a vote
//! determines the candidate matching completely. Trying every `j` therefore
//! decides isomorphism in polynomial time.

use crate::error::Result;
use crate::exact::match_votes;
use crate::metrics::MetricKind;
use crate::model::{CandidateMatching, DistanceResult, Election, PreferenceOrder, VoterMatching};
use crate::pairing::PairTable;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IsomorphismWitness {
    pub candidate_matching: CandidateMatching,
    pub voter_matching: VoterMatching,
}

/// Decides whether `f` is `e` with candidates renamed and voters reordered.
///
/// Elections of different sizes are an error, not a negative answer.
pub fn are_isomorphic(e: &Election, f: &Election) -> Result<Option<IsomorphismWitness>> {
    e.check_same_shape(f)?;
    let target = sorted_indices(f.votes());
    let mut tried: Vec<&PreferenceOrder> = Vec::new();
    for candidate in f.votes() {
        if tried.contains(&candidate) {
            continue;
        }
        tried.push(candidate);
        let sigma = CandidateMatching::between(e.vote(0), candidate);
        let renamed: Vec<PreferenceOrder> = e.votes().iter().map(|v| v.renamed(&sigma)).collect();
        let source = sorted_indices(&renamed);
        let same = source
            .iter()
            .zip(&target)
            .all(|(&a, &b)| renamed[a] == *f.vote(b));
        if same {
            let mut nu = vec![0; e.num_voters()];
            for (&a, &b) in source.iter().zip(&target) {
                nu[a] = b;
            }
            return Ok(Some(IsomorphismWitness {
                candidate_matching: sigma,
                voter_matching: VoterMatching::from_vec_unchecked(nu),
            }));
        }
    }
    Ok(None)
}

pub fn is_isomorphic(e: &Election, f: &Election) -> Result<bool> {
    Ok(are_isomorphic(e, f)?.is_some())
}

// stable, so equal votes keep their voter order
fn sorted_indices(votes: &[PreferenceOrder]) -> Vec<usize> {
    let mut idx: Vec<usize> = (0..votes.len()).collect();
    idx.sort_by(|&a, &b| votes[a].ranking().cmp(votes[b].ranking()));
    idx
}

/// A representative shared by exactly the elections isomorphic to `e`.
///
/// For each voter, rename candidates so that voter's order becomes
/// `0 ≻ 1 ≻ … ≻ m-1`, then sort the votes; the lexicographically smallest
/// resulting vote list is the canonical form.
pub fn canonical_form(e: &Election) -> Election {
    let identity = PreferenceOrder::identity(e.num_candidates());
    let mut best: Option<Vec<PreferenceOrder>> = None;
    for pivot in e.votes() {
        let sigma = CandidateMatching::between(pivot, &identity);
        let mut votes: Vec<PreferenceOrder> = e.votes().iter().map(|v| v.renamed(&sigma)).collect();
        votes.sort_by(|a, b| a.ranking().cmp(b.ranking()));
        let smaller = best.as_ref().is_none_or(|cur| {
            votes
                .iter()
                .map(|v| v.ranking())
                .lt(cur.iter().map(|v| v.ranking()))
        });
        if smaller {
            best = Some(votes);
        }
    }
    e.with_votes(best.expect("elections have at least one vote"))
}

/// Exact discrete isomorphic distance.
///
/// Either no vote can be matched perfectly (distance `n`), or an optimal
/// candidate matching sends some `e_i` onto some `f_j` and is therefore one
/// of the `n²` matchings `σ_{ij}`. For each of them the best voter matching
/// pairs up as many identical votes as possible.
pub fn id_distance_disc(e: &Election, f: &Election) -> Result<DistanceResult> {
    e.check_same_shape(f)?;
    let n = e.num_voters();
    let table = PairTable::new(e, f);
    let mut best = (usize::MAX, 0, 0);
    for i in 0..n {
        for j in 0..n {
            let unmatched = table.unmatched(i, j);
            if unmatched < best.0 {
                best = (unmatched, i, j);
            }
        }
    }
    let sigma = CandidateMatching::between(e.vote(best.1), f.vote(best.2));
    let renamed: Vec<PreferenceOrder> = e.votes().iter().map(|v| v.renamed(&sigma)).collect();
    let (value, nu) = match_votes(&renamed, f.votes(), MetricKind::Discrete)?;
    debug_assert_eq!(value, best.0 as u64);
    Ok(DistanceResult::exact(value, sigma, nu, "disc-pairs"))
}

//! Elections, preference orders and the matchings between them.
//!
//! Candidates and voters are 0-based indices throughout. The only place a
//! 1-based value leaves this module is [`PreferenceOrder::position_of`],
//! which reports positions the way they are usually written down: the top
//! candidate has position 1.

use std::fmt;

use num_rational::Ratio;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metrics::MetricKind;

pub(crate) fn is_permutation(items: &[usize]) -> bool {
    let mut seen = vec![false; items.len()];
    for &x in items {
        if x >= items.len() || seen[x] {
            return false;
        }
        seen[x] = true;
    }
    true
}

fn inverse_of(perm: &[usize]) -> Vec<usize> {
    let mut inv = vec![0; perm.len()];
    for (i, &x) in perm.iter().enumerate() {
        inv[x] = i;
    }
    inv
}

/// A strict linear order over `0..m`, most preferred first.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PreferenceOrder {
    ranking: Vec<usize>,
    // inverse of `ranking`; determined by it, so derived comparisons agree
    positions: Vec<usize>,
}

impl PreferenceOrder {
    pub fn new(ranking: Vec<usize>) -> Result<Self> {
        if ranking.is_empty() {
            return Err(Error::EmptyElection);
        }
        if !is_permutation(&ranking) {
            return Err(Error::NotAPermutation { vote: 0 });
        }
        Ok(Self::from_ranking_unchecked(ranking))
    }

    pub(crate) fn from_ranking_unchecked(ranking: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&ranking));
        let positions = inverse_of(&ranking);
        PreferenceOrder { ranking, positions }
    }

    pub fn identity(m: usize) -> Self {
        Self::from_ranking_unchecked((0..m).collect())
    }

    pub fn len(&self) -> usize {
        self.ranking.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranking.is_empty()
    }

    pub fn ranking(&self) -> &[usize] {
        &self.ranking
    }

    /// 0-based position of each candidate, indexed by candidate.
    pub fn positions(&self) -> &[usize] {
        &self.positions
    }

    pub fn candidate_at(&self, index: usize) -> usize {
        self.ranking[index]
    }

    /// 0-based position of `candidate`.
    pub fn index_of(&self, candidate: usize) -> usize {
        self.positions[candidate]
    }

    /// 1-based position of `candidate`; the top candidate has position 1.
    pub fn position_of(&self, candidate: usize) -> usize {
        self.positions[candidate] + 1
    }

    /// Renames every candidate through `sigma`, keeping the order.
    pub fn renamed(&self, sigma: &CandidateMatching) -> Self {
        debug_assert_eq!(sigma.len(), self.len());
        Self::from_ranking_unchecked(self.ranking.iter().map(|&c| sigma.map[c]).collect())
    }

    /// Order obtained by exchanging the candidates at `index` and `index + 1`.
    pub fn with_adjacent_swap(&self, index: usize) -> Self {
        let mut ranking = self.ranking.clone();
        ranking.swap(index, index + 1);
        Self::from_ranking_unchecked(ranking)
    }
}

impl fmt::Debug for PreferenceOrder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.ranking).finish()
    }
}

/// Checks raw vote data against the election invariants.
///
/// Every vote must rank each of `0..num_candidates` exactly once and there
/// must be at least one candidate and one vote. Errors carry the index of
/// the first offending vote.
pub fn validate(num_candidates: usize, votes: &[Vec<usize>]) -> Result<()> {
    if num_candidates == 0 || votes.is_empty() {
        return Err(Error::EmptyElection);
    }
    for (i, v) in votes.iter().enumerate() {
        if v.len() != num_candidates {
            return Err(Error::VoteLengthMismatch {
                vote: i,
                expected: num_candidates,
                found: v.len(),
            });
        }
        if !is_permutation(v) {
            return Err(Error::NotAPermutation { vote: i });
        }
    }
    Ok(())
}

/// An ordinal election: `num_candidates` candidates and a list of votes.
///
/// Votes form a sequence, so duplicates are allowed and voter `i` is the
/// `i`-th entry.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Election {
    num_candidates: usize,
    votes: Vec<PreferenceOrder>,
}

impl Election {
    pub fn new(num_candidates: usize, votes: Vec<Vec<usize>>) -> Result<Self> {
        validate(num_candidates, &votes)?;
        Ok(Election {
            num_candidates,
            votes: votes
                .into_iter()
                .map(PreferenceOrder::from_ranking_unchecked)
                .collect(),
        })
    }

    pub fn from_orders(num_candidates: usize, votes: Vec<PreferenceOrder>) -> Result<Self> {
        if num_candidates == 0 || votes.is_empty() {
            return Err(Error::EmptyElection);
        }
        if let Some((i, v)) = votes
            .iter()
            .enumerate()
            .find(|(_, v)| v.len() != num_candidates)
        {
            return Err(Error::VoteLengthMismatch {
                vote: i,
                expected: num_candidates,
                found: v.len(),
            });
        }
        Ok(Election {
            num_candidates,
            votes,
        })
    }

    /// `n` copies of the identity order over `m` candidates.
    pub fn unanimous(m: usize, n: usize) -> Result<Self> {
        Self::from_orders(m, vec![PreferenceOrder::identity(m); n])
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn num_voters(&self) -> usize {
        self.votes.len()
    }

    pub fn votes(&self) -> &[PreferenceOrder] {
        &self.votes
    }

    pub fn vote(&self, i: usize) -> &PreferenceOrder {
        &self.votes[i]
    }

    pub fn rankings(&self) -> Vec<Vec<usize>> {
        self.votes.iter().map(|v| v.ranking.clone()).collect()
    }

    /// Fails unless `self` and `other` have the same candidate and voter counts.
    pub fn check_same_shape(&self, other: &Election) -> Result<()> {
        if self.num_candidates != other.num_candidates {
            return Err(Error::size(
                "candidate count",
                self.num_candidates,
                other.num_candidates,
            ));
        }
        if self.votes.len() != other.votes.len() {
            return Err(Error::size(
                "voter count",
                self.votes.len(),
                other.votes.len(),
            ));
        }
        Ok(())
    }

    /// The election `sigma(E)`: every vote renamed through `sigma`.
    pub fn apply_candidate_matching(&self, sigma: &CandidateMatching) -> Result<Election> {
        if sigma.len() != self.num_candidates {
            return Err(Error::size(
                "candidate matching",
                sigma.len(),
                self.num_candidates,
            ));
        }
        Ok(Election {
            num_candidates: self.num_candidates,
            votes: self.votes.iter().map(|v| v.renamed(sigma)).collect(),
        })
    }

    pub(crate) fn with_votes(&self, votes: Vec<PreferenceOrder>) -> Election {
        Election {
            num_candidates: self.num_candidates,
            votes,
        }
    }
}

impl fmt::Debug for Election {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Election(m={}, ", self.num_candidates)?;
        f.debug_list().entries(&self.votes).finish()?;
        write!(f, ")")
    }
}

/// A bijection between two candidate sets of equal size; `map[c]` is the
/// image of source candidate `c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct CandidateMatching {
    map: Vec<usize>,
}

impl CandidateMatching {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        if !is_permutation(&map) {
            return Err(Error::NotAPermutation { vote: 0 });
        }
        Ok(CandidateMatching { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&map));
        CandidateMatching { map }
    }

    pub fn identity(m: usize) -> Self {
        CandidateMatching {
            map: (0..m).collect(),
        }
    }

    /// The unique matching that renames order `from` into order `to`.
    pub fn between(from: &PreferenceOrder, to: &PreferenceOrder) -> Self {
        debug_assert_eq!(from.len(), to.len());
        let mut map = vec![0; from.len()];
        for (&a, &b) in from.ranking.iter().zip(&to.ranking) {
            map[a] = b;
        }
        CandidateMatching { map }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn image(&self, candidate: usize) -> usize {
        self.map[candidate]
    }

    pub fn inverse(&self) -> Self {
        CandidateMatching {
            map: inverse_of(&self.map),
        }
    }

    /// `other ∘ self`: first rename through `self`, then through `other`.
    pub fn then(&self, other: &CandidateMatching) -> Self {
        CandidateMatching {
            map: self.map.iter().map(|&c| other.map[c]).collect(),
        }
    }
}

/// A permutation of voters; source voter `i` is matched to target voter `map[i]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(transparent)]
pub struct VoterMatching {
    map: Vec<usize>,
}

impl VoterMatching {
    pub fn new(map: Vec<usize>) -> Result<Self> {
        if !is_permutation(&map) {
            return Err(Error::NotAPermutation { vote: 0 });
        }
        Ok(VoterMatching { map })
    }

    pub(crate) fn from_vec_unchecked(map: Vec<usize>) -> Self {
        debug_assert!(is_permutation(&map));
        VoterMatching { map }
    }

    pub fn identity(n: usize) -> Self {
        VoterMatching {
            map: (0..n).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.map
    }

    pub fn target(&self, voter: usize) -> usize {
        self.map[voter]
    }

    pub fn inverse(&self) -> Self {
        VoterMatching {
            map: inverse_of(&self.map),
        }
    }
}

/// `Σ_i metric(σ(e_i), f_{ν(i)})` for fixed matchings.
pub fn induced_distance(
    e: &Election,
    f: &Election,
    sigma: &CandidateMatching,
    nu: &VoterMatching,
    metric: MetricKind,
) -> Result<u64> {
    e.check_same_shape(f)?;
    if sigma.len() != e.num_candidates() {
        return Err(Error::size(
            "candidate matching",
            sigma.len(),
            e.num_candidates(),
        ));
    }
    if nu.len() != e.num_voters() {
        return Err(Error::size("voter matching", nu.len(), e.num_voters()));
    }
    Ok(e.votes()
        .iter()
        .zip(nu.as_slice())
        .map(|(v, &j)| metric.distance_unchecked(&v.renamed(sigma), f.vote(j)))
        .sum())
}

/// Multiplicative approximation guarantee, kept exact.
pub type Guarantee = Ratio<u64>;

/// A distance value together with the matchings that realize it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistanceResult {
    pub value: u64,
    pub candidate_matching: CandidateMatching,
    pub voter_matching: VoterMatching,
    pub exact: bool,
    /// `value ≤ guarantee · optimum`; absent for exact results.
    pub guarantee: Option<Guarantee>,
    pub solver: &'static str,
}

impl DistanceResult {
    pub fn exact(
        value: u64,
        candidate_matching: CandidateMatching,
        voter_matching: VoterMatching,
        solver: &'static str,
    ) -> Self {
        DistanceResult {
            value,
            candidate_matching,
            voter_matching,
            exact: true,
            guarantee: None,
            solver,
        }
    }

    /// An upper bound within factor `ratio` of the optimum. A zero value is
    /// necessarily optimal and is reported as exact.
    pub fn bounded(
        value: u64,
        candidate_matching: CandidateMatching,
        voter_matching: VoterMatching,
        ratio: Guarantee,
        solver: &'static str,
    ) -> Self {
        if value == 0 || ratio == Ratio::from_integer(1) {
            return Self::exact(value, candidate_matching, voter_matching, solver);
        }
        DistanceResult {
            value,
            candidate_matching,
            voter_matching,
            exact: false,
            guarantee: Some(ratio),
            solver,
        }
    }

    /// Recomputes the distance induced by the witness matchings.
    pub fn witness_value(&self, e: &Election, f: &Election, metric: MetricKind) -> Result<u64> {
        induced_distance(e, f, &self.candidate_matching, &self.voter_matching, metric)
    }

    pub fn is_witness_consistent(&self, e: &Election, f: &Election, metric: MetricKind) -> bool {
        self.witness_value(e, f, metric).ok() == Some(self.value)
    }

    /// Short provenance tag: `exact` or `approx:<ratio>`.
    pub fn tag(&self) -> String {
        match self.guarantee {
            None => "exact".to_string(),
            Some(r) => format!("approx:{r}"),
        }
    }
}

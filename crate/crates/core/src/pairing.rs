//! Vote-pair normalization shared by the solvers that try every
//! `σ_{ij}` (the candidate matching sending `e_i` onto `f_j`).
//!
//! Renaming every vote of `e` so that `e_i` becomes the identity order, and
//! every vote of `f` so that `f_j` does, turns the question "how many votes
//! of `σ_{ij}(E)` coincide with votes of `F`" into a multiset intersection
//! of two lists of interned ids.

use std::collections::HashMap;

use crate::model::{CandidateMatching, Election, PreferenceOrder};

pub(crate) struct PairTable {
    n: usize,
    // normalized[i] = sorted ids of e's votes renamed so that e_i is the identity
    left: Vec<Vec<u32>>,
    right: Vec<Vec<u32>>,
}

impl PairTable {
    pub(crate) fn new(e: &Election, f: &Election) -> Self {
        let mut ids: HashMap<Vec<usize>, u32> = HashMap::new();
        let mut side = |el: &Election| -> Vec<Vec<u32>> {
            el.votes()
                .iter()
                .map(|pivot| {
                    let to_identity = CandidateMatching::between(
                        pivot,
                        &PreferenceOrder::identity(el.num_candidates()),
                    );
                    let mut row: Vec<u32> = el
                        .votes()
                        .iter()
                        .map(|v| {
                            let key: Vec<usize> =
                                v.ranking().iter().map(|&c| to_identity.image(c)).collect();
                            let next = ids.len() as u32;
                            *ids.entry(key).or_insert(next)
                        })
                        .collect();
                    row.sort_unstable();
                    row
                })
                .collect()
        };
        let left = side(e);
        let right = side(f);
        PairTable {
            n: e.num_voters(),
            left,
            right,
        }
    }

    /// Largest number of votes `σ_{ij}(E)` and `F` have in common (as multisets).
    pub(crate) fn common_votes(&self, i: usize, j: usize) -> usize {
        let (a, b) = (&self.left[i], &self.right[j]);
        let (mut x, mut y, mut count) = (0, 0, 0);
        while x < a.len() && y < b.len() {
            match a[x].cmp(&b[y]) {
                std::cmp::Ordering::Less => x += 1,
                std::cmp::Ordering::Greater => y += 1,
                std::cmp::Ordering::Equal => {
                    count += 1;
                    x += 1;
                    y += 1;
                }
            }
        }
        count
    }

    /// Number of votes that cannot be matched at zero cost under `σ_{ij}`.
    pub(crate) fn unmatched(&self, i: usize, j: usize) -> usize {
        self.n - self.common_votes(i, j)
    }
}

/// All pair-induced matchings `σ_{ij}` in row-major `(i, j)` order,
/// skipping repeats of an already listed matching.
pub(crate) fn pair_matchings(e: &Election, f: &Election) -> Vec<(usize, usize, CandidateMatching)> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    for (i, u) in e.votes().iter().enumerate() {
        for (j, v) in f.votes().iter().enumerate() {
            let sigma = CandidateMatching::between(u, v);
            if seen.insert(sigma.clone()) {
                out.push((i, j, sigma));
            }
        }
    }
    out
}

//! Single-peaked and single-crossing preference domains, seeded election
//! samplers, and the Kemeny instance generator.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::model::{is_permutation, Election, PreferenceOrder};

/// Largest candidate count for which a maximal single-peaked domain is built.
pub const MAX_DOMAIN_CANDIDATES: usize = 20;

/// A set of distinct preference orders over the same candidates, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Domain {
    num_candidates: usize,
    orders: Vec<PreferenceOrder>,
}

impl Domain {
    pub fn new(num_candidates: usize, mut orders: Vec<PreferenceOrder>) -> Result<Self> {
        if let Some((i, v)) = orders
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
        orders.sort();
        orders.dedup();
        Ok(Domain {
            num_candidates,
            orders,
        })
    }

    pub fn num_candidates(&self) -> usize {
        self.num_candidates
    }

    pub fn orders(&self) -> &[PreferenceOrder] {
        &self.orders
    }

    pub fn len(&self) -> usize {
        self.orders.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orders.is_empty()
    }
}

/// A societal axis: `order[0] < order[1] < … < order[m-1]`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Axis {
    order: Vec<usize>,
    // place[c] = index of candidate c on the axis
    place: Vec<usize>,
}

impl Axis {
    pub fn new(order: Vec<usize>) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::EmptyElection);
        }
        if !is_permutation(&order) {
            return Err(Error::NotAPermutation { vote: 0 });
        }
        let mut place = vec![0; order.len()];
        for (i, &c) in order.iter().enumerate() {
            place[c] = i;
        }
        Ok(Axis { order, place })
    }

    pub fn natural(m: usize) -> Self {
        Axis {
            order: (0..m).collect(),
            place: (0..m).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.order.len()
    }

    pub fn is_empty(&self) -> bool {
        self.order.is_empty()
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }
}

/// Every order single-peaked with respect to `axis`; there are `2^(m-1)`.
///
/// The last-ranked candidate must sit at one end of the axis; removing it
/// leaves a shorter axis interval, and so on up to the top candidate.
pub fn maximal_single_peaked_domain(axis: &Axis) -> Result<Domain> {
    let m = axis.len();
    if m > MAX_DOMAIN_CANDIDATES {
        return Err(Error::DomainTooLarge { m });
    }
    let mut orders = Vec::with_capacity(1 << (m - 1));
    let mut ranking = vec![0; m];
    fill_from_bottom(axis, 0, m - 1, &mut ranking, &mut orders);
    Domain::new(m, orders)
}

fn fill_from_bottom(
    axis: &Axis,
    lo: usize,
    hi: usize,
    ranking: &mut Vec<usize>,
    out: &mut Vec<PreferenceOrder>,
) {
    // the interval [lo, hi] of the axis fills positions 0..=hi-lo
    let pos = hi - lo;
    if lo == hi {
        ranking[0] = axis.order[lo];
        out.push(PreferenceOrder::from_ranking_unchecked(ranking.clone()));
        return;
    }
    ranking[pos] = axis.order[lo];
    fill_from_bottom(axis, lo + 1, hi, ranking, out);
    ranking[pos] = axis.order[hi];
    fill_from_bottom(axis, lo, hi - 1, ranking, out);
}

/// Whether every top-`j` prefix of every order is an interval of the axis.
pub fn is_single_peaked(domain: &Domain, axis: &Axis) -> Result<bool> {
    if domain.num_candidates() != axis.len() {
        return Err(Error::size(
            "axis length",
            axis.len(),
            domain.num_candidates(),
        ));
    }
    Ok(domain
        .orders()
        .iter()
        .all(|v| order_is_single_peaked(v, axis)))
}

pub(crate) fn order_is_single_peaked(v: &PreferenceOrder, axis: &Axis) -> bool {
    let mut lo = usize::MAX;
    let mut hi = 0;
    v.ranking().iter().enumerate().all(|(len, &c)| {
        let p = axis.place[c];
        lo = lo.min(p);
        hi = hi.max(p);
        hi - lo == len
    })
}

/// Whether, along the given sequence, the relative order of every pair of
/// candidates changes at most once.
pub fn is_single_crossing_order(orders: &[PreferenceOrder]) -> Result<bool> {
    let Some(first) = orders.first() else {
        return Ok(true);
    };
    let m = first.len();
    if let Some(v) = orders.iter().find(|v| v.len() != m) {
        return Err(Error::size("preference order length", v.len(), m));
    }
    for a in 0..m {
        for b in a + 1..m {
            let flips = orders
                .windows(2)
                .filter(|w| {
                    (w[0].index_of(a) < w[0].index_of(b)) != (w[1].index_of(a) < w[1].index_of(b))
                })
                .count();
            if flips > 1 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// One voter per order of the domain, in sorted order.
pub fn domain_as_election(domain: &Domain) -> Result<Election> {
    if domain.is_empty() {
        return Err(Error::EmptyDomain);
    }
    Election::from_orders(domain.num_candidates(), domain.orders().to_vec())
}

/// Statistical culture used by [`sample_election`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SamplingModel {
    /// Every order equally likely, independently per voter.
    ImpartialCulture,
    /// Every voter reports `0 ≻ 1 ≻ … ≻ m-1`.
    Identity,
    /// Uniform over the orders single-peaked with respect to the axis.
    SinglePeakedUniform(Axis),
}

/// Samples an election; the result is a pure function of the arguments.
///
/// The random stream is ChaCha8 seeded from `seed`.
pub fn sample_election(model: &SamplingModel, m: usize, n: usize, seed: u64) -> Result<Election> {
    if m == 0 || n == 0 {
        return Err(Error::EmptyElection);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let votes = match model {
        SamplingModel::Identity => vec![PreferenceOrder::identity(m); n],
        SamplingModel::ImpartialCulture => (0..n)
            .map(|_| {
                let mut r: Vec<usize> = (0..m).collect();
                r.shuffle(&mut rng);
                PreferenceOrder::from_ranking_unchecked(r)
            })
            .collect(),
        SamplingModel::SinglePeakedUniform(axis) => {
            if axis.len() != m {
                return Err(Error::size("axis length", axis.len(), m));
            }
            if m > MAX_DOMAIN_CANDIDATES {
                return Err(Error::DomainTooLarge { m });
            }
            (0..n)
                .map(|_| sample_single_peaked(axis, &mut rng))
                .collect()
        }
    };
    Election::from_orders(m, votes)
}

// one fair coin per position from the bottom up: a bijection onto the domain
fn sample_single_peaked<R: Rng>(axis: &Axis, rng: &mut R) -> PreferenceOrder {
    let m = axis.len();
    let mut ranking = vec![0; m];
    let (mut lo, mut hi) = (0, m - 1);
    for pos in (1..m).rev() {
        if rng.gen::<bool>() {
            ranking[pos] = axis.order[lo];
            lo += 1;
        } else {
            ranking[pos] = axis.order[hi];
            hi -= 1;
        }
    }
    ranking[0] = axis.order[lo];
    PreferenceOrder::from_ranking_unchecked(ranking)
}

/// `e` paired with a unanimous election of the same size. Their swap
/// isomorphic distance is the Kemeny score of `e`.
pub fn kemeny_reduction_instance(e: &Election) -> (Election, Election) {
    let unanimous = Election::unanimous(e.num_candidates(), e.num_voters())
        .expect("a valid election has m, n >= 1");
    (e.clone(), unanimous)
}

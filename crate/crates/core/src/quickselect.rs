//! Hoare's partition (CLRS version) and Quickselect, instrumented to count
//! key exchanges.
//!
//! The partition takes the leftmost key as pivot, scans with `j` descending
//! to a key `<= pivot` and `i` ascending to a key `>= pivot`, swaps while
//! `i < j` and otherwise returns `j`. Every swap is one key exchange. Small-n
//! exact laws depend on this precise variant.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// A nonempty sequence of pairwise distinct keys.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct KeyArray<K> {
    items: Vec<K>,
}

impl<K: Ord + Clone> KeyArray<K> {
    pub fn new(items: Vec<K>) -> Result<Self> {
        if items.is_empty() {
            return Err(Error::Contract("a key array needs at least one key".into()));
        }
        check_distinct(&items)?;
        Ok(Self { items })
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn as_slice(&self) -> &[K] {
        &self.items
    }

    pub fn into_inner(self) -> Vec<K> {
        self.items
    }

    /// Partitions the whole array in place.
    pub fn partition(&mut self) -> Result<PartitionOutcome> {
        if self.items.len() < 2 {
            return Err(Error::Contract("partition needs a segment of length >= 2".into()));
        }
        Ok(partition_unchecked(&mut self.items))
    }

    /// Runs Quickselect in place for the 1-based `rank`.
    pub fn select(&mut self, rank: usize) -> Result<RunRecord<K>> {
        let n = self.items.len();
        if rank == 0 || rank > n {
            return Err(Error::RankOutOfRange { rank, n });
        }
        Ok(select_unchecked(&mut self.items, rank))
    }
}

impl KeyArray<u32> {
    /// The identity permutation `1..=n`.
    pub fn identity(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Contract("a key array needs at least one key".into()));
        }
        Ok(Self { items: (1..=n as u32).collect() })
    }

    /// A uniformly random permutation of `1..=n` (Fisher–Yates).
    pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<Self> {
        let mut array = Self::identity(n)?;
        array.items.shuffle(rng);
        Ok(array)
    }
}

fn check_distinct<K: Ord>(items: &[K]) -> Result<()> {
    let mut order: Vec<usize> = (0..items.len()).collect();
    order.sort_by(|&a, &b| items[a].cmp(&items[b]));
    for pair in order.windows(2) {
        if items[pair[0]] == items[pair[1]] {
            let (first, second) = (pair[0].min(pair[1]) + 1, pair[0].max(pair[1]) + 1);
            return Err(Error::DuplicateKey { first, second });
        }
    }
    Ok(())
}

/// Result of one partitioning pass.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct PartitionOutcome {
    /// Size of the left sub-list; the split index `j` in 1-based positions.
    pub split_index: usize,
    /// Key exchanges performed.
    pub swaps: u64,
}

/// One Quickselect execution.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunRecord<K> {
    pub n: usize,
    pub rank: usize,
    pub exchanges: u64,
    /// `exchanges / n`.
    pub normalized: f64,
    pub selected_value: K,
}

/// Partitions `segment` around its first key.
///
/// Validates length and distinctness first; use [`KeyArray`] to pay the
/// distinctness check once.
pub fn hoare_partition<K: Ord + Clone>(segment: &mut [K]) -> Result<PartitionOutcome> {
    if segment.len() < 2 {
        return Err(Error::Contract(format!(
            "partition needs a segment of length >= 2, got {}",
            segment.len()
        )));
    }
    check_distinct(segment)?;
    Ok(partition_unchecked(segment))
}

/// Runs Quickselect on a copy-free slice of distinct keys.
pub fn quickselect<K: Ord + Clone>(keys: &mut [K], rank: usize) -> Result<RunRecord<K>> {
    let n = keys.len();
    if n == 0 {
        return Err(Error::Contract("quickselect needs at least one key".into()));
    }
    if rank == 0 || rank > n {
        return Err(Error::RankOutOfRange { rank, n });
    }
    check_distinct(keys)?;
    Ok(select_unchecked(keys, rank))
}

/// Draws a uniform permutation of `1..=n` and an independent uniform rank and
/// runs Quickselect on it.
pub fn run_random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Result<RunRecord<u32>> {
    let mut buffer = Vec::with_capacity(n);
    run_random_in(n, rng, &mut buffer)
}

/// As [`run_random`], reusing `buffer` for the permutation.
pub fn run_random_in<R: Rng + ?Sized>(
    n: usize,
    rng: &mut R,
    buffer: &mut Vec<u32>,
) -> Result<RunRecord<u32>> {
    if n == 0 {
        return Err(Error::Contract("n must be at least 1".into()));
    }
    buffer.clear();
    buffer.extend(1..=n as u32);
    buffer.shuffle(rng);
    let rank = rng.random_range(1..=n);
    Ok(select_unchecked(buffer, rank))
}

pub(crate) fn partition_unchecked<K: Ord + Clone>(a: &mut [K]) -> PartitionOutcome {
    debug_assert!(a.len() >= 2);
    let pivot = a[0].clone();
    // i and j are one step outside the segment before the first scan.
    let mut i = 0usize;
    let mut j = a.len();
    let mut first_scan = true;
    let mut swaps = 0u64;
    loop {
        loop {
            j -= 1;
            if a[j] <= pivot {
                break;
            }
        }
        if first_scan {
            // The pivot itself stops the first ascending scan at position 0.
            first_scan = false;
        } else {
            loop {
                i += 1;
                if a[i] >= pivot {
                    break;
                }
            }
        }
        if i < j {
            a.swap(i, j);
            swaps += 1;
        } else {
            return PartitionOutcome { split_index: j + 1, swaps };
        }
    }
}

pub(crate) fn select_unchecked<K: Ord + Clone>(a: &mut [K], rank: usize) -> RunRecord<K> {
    let n = a.len();
    let (mut lo, mut hi) = (0usize, n);
    let mut exchanges = 0u64;
    while hi - lo > 1 {
        let outcome = partition_unchecked(&mut a[lo..hi]);
        exchanges += outcome.swaps;
        let boundary = lo + outcome.split_index;
        if rank <= boundary {
            hi = boundary;
        } else {
            lo = boundary;
        }
    }
    RunRecord {
        n,
        rank,
        exchanges,
        normalized: exchanges as f64 / n as f64,
        selected_value: a[lo].clone(),
    }
}

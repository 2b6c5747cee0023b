//! In-place order statistics and three-way partitioning over real keys.
//!
//! [`select_nth_by_key`] is an introspective selection: it starts with
//! randomized median-of-three pivots and switches to median-of-medians
//! pivots (groups of five) once either the recursion depth exceeds
//! `2·log2(n)` or the elements scanned exceed `4·n`. Either limit bounds the
//! randomized phase by `O(n)` work, so the whole selection is worst-case
//! linear. The pseudo-random pivot stream is seeded from the input length,
//! so results are deterministic.

use crate::error::{Error, Result};

/// A real key with an attached payload.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KeyedEntry<T> {
    pub key: f64,
    pub payload: T,
}

impl<T> KeyedEntry<T> {
    pub const fn new(key: f64, payload: T) -> Self {
        Self { key, payload }
    }
}

/// Region sizes produced by [`three_way_partition`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PartitionCounts {
    pub below: usize,
    pub equal: usize,
    pub above: usize,
}

impl PartitionCounts {
    pub fn below_range(&self) -> std::ops::Range<usize> {
        0..self.below
    }

    pub fn equal_range(&self) -> std::ops::Range<usize> {
        self.below..self.below + self.equal
    }

    pub fn above_range(&self) -> std::ops::Range<usize> {
        self.below + self.equal..self.below + self.equal + self.above
    }
}

/// Selects the entry of 0-based rank `k` by key; see [`select_nth_by_key`].
pub fn select_nth<T>(buffer: &mut [KeyedEntry<T>], k: usize) -> Result<&KeyedEntry<T>> {
    select_nth_by_key(buffer, k, |e| e.key)
}

/// Permutes `buffer` so that position `k` holds the element of rank `k`,
/// everything before it has key `<=` and everything after key `>=`.
///
/// Keys must be finite; ties are broken arbitrarily.
pub fn select_nth_by_key<T, F>(buffer: &mut [T], k: usize, mut key: F) -> Result<&T>
where
    F: FnMut(&T) -> f64,
{
    let len = buffer.len();
    if k >= len {
        return Err(Error::IndexOutOfRange { index: k, len });
    }
    select_in_place(buffer, k, &mut key);
    Ok(&buffer[k])
}

/// Partitions `buffer` into `[below | equal | above]` by exact comparison
/// of keys with `pivot`.
pub fn three_way_partition<T>(buffer: &mut [KeyedEntry<T>], pivot: f64) -> PartitionCounts {
    three_way_partition_by_key(buffer, pivot, |e| e.key)
}

pub fn three_way_partition_by_key<T, F>(buffer: &mut [T], pivot: f64, mut key: F) -> PartitionCounts
where
    F: FnMut(&T) -> f64,
{
    let (lt, gt) = dutch_flag(buffer, pivot, &mut key);
    PartitionCounts {
        below: lt,
        equal: gt - lt,
        above: buffer.len() - gt,
    }
}

const SMALL: usize = 10;

fn select_in_place<T, F>(buffer: &mut [T], k: usize, key: &mut F)
where
    F: FnMut(&T) -> f64,
{
    let n = buffer.len();
    let mut lo = 0;
    let mut hi = n;
    let mut depth_budget = 2 * (usize::BITS - n.leading_zeros()) as usize;
    let mut work_budget = 4 * n;
    let mut rng = SplitMix64::new(0x9E37_79B9_7F4A_7C15 ^ n as u64);

    loop {
        let slice = &mut buffer[lo..hi];
        let len = slice.len();
        if len <= SMALL {
            insertion_sort(slice, key);
            return;
        }
        let pivot = if depth_budget > 0 && work_budget >= len {
            depth_budget -= 1;
            work_budget -= len;
            random_median_of_three(slice, &mut rng, key)
        } else {
            median_of_medians(slice, key)
        };
        let (lt, gt) = dutch_flag(slice, pivot, key);
        let rel = k - lo;
        if rel < lt {
            hi = lo + lt;
        } else if rel >= gt {
            lo += gt;
        } else {
            return;
        }
    }
}

fn random_median_of_three<T, F>(slice: &[T], rng: &mut SplitMix64, key: &mut F) -> f64
where
    F: FnMut(&T) -> f64,
{
    let n = slice.len() as u64;
    let a = key(&slice[(rng.next() % n) as usize]);
    let b = key(&slice[(rng.next() % n) as usize]);
    let c = key(&slice[(rng.next() % n) as usize]);
    median3(a, b, c)
}

fn median3(a: f64, b: f64, c: f64) -> f64 {
    if a < b {
        if b < c {
            b
        } else if a < c {
            c
        } else {
            a
        }
    } else if a < c {
        a
    } else if b < c {
        c
    } else {
        b
    }
}

/// Pivot value guaranteed to have at least ~30% of the slice on each side.
fn median_of_medians<T, F>(slice: &mut [T], key: &mut F) -> f64
where
    F: FnMut(&T) -> f64,
{
    let groups = slice.len() / 5;
    for g in 0..groups {
        let group = &mut slice[5 * g..5 * g + 5];
        insertion_sort(group, key);
        slice.swap(g, 5 * g + 2);
    }
    let medians = &mut slice[..groups];
    let mid = groups / 2;
    select_in_place(medians, mid, key);
    key(&medians[mid])
}

fn insertion_sort<T, F>(slice: &mut [T], key: &mut F)
where
    F: FnMut(&T) -> f64,
{
    for i in 1..slice.len() {
        let mut j = i;
        while j > 0 && key(&slice[j]) < key(&slice[j - 1]) {
            slice.swap(j, j - 1);
            j -= 1;
        }
    }
}

/// Returns `(lt, gt)` such that `[..lt] < pivot`, `[lt..gt] == pivot` and
/// `[gt..] > pivot`. Each key is read once.
fn dutch_flag<T, F>(slice: &mut [T], pivot: f64, key: &mut F) -> (usize, usize)
where
    F: FnMut(&T) -> f64,
{
    let mut lt = 0;
    let mut i = 0;
    let mut gt = slice.len();
    while i < gt {
        let k = key(&slice[i]);
        if k < pivot {
            slice.swap(lt, i);
            lt += 1;
            i += 1;
        } else if k > pivot {
            gt -= 1;
            slice.swap(i, gt);
        } else {
            i += 1;
        }
    }
    (lt, gt)
}

struct SplitMix64(u64);

impl SplitMix64 {
    fn new(seed: u64) -> Self {
        Self(seed)
    }

    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E37_79B9_7F4A_7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
        z ^ (z >> 31)
    }
}

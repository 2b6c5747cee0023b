//! Continuous equality knapsack:
//! maximize (or minimize) `Σ β_i·v_i` subject to `Σ β_i = C`, `β ∈ [0,1]^n`.
//!
//! The greedy solution fills the `⌊C⌋` best values completely, gives the
//! next one weight `C − ⌊C⌋` and leaves the rest empty. Locating that pivot
//! is a single selection, so the solve is linear time and in place.

use crate::error::{Error, Result};
use crate::kbn::KbnSumExt;
use crate::selection::select_nth_by_key;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sense {
    Maximize,
    Minimize,
}

/// Maximizes `Σ β_i·v_i`. `values` is permuted.
pub fn solve_knapsack(values: &mut [f64], capacity: f64) -> Result<f64> {
    knapsack_by_key(values, capacity, Sense::Maximize, |v| *v)
}

/// Minimizes `Σ β_i·v_i`. `values` is permuted.
pub fn solve_knapsack_min(values: &mut [f64], capacity: f64) -> Result<f64> {
    knapsack_by_key(values, capacity, Sense::Minimize, |v| *v)
}

pub fn knapsack_by_key<T, F>(items: &mut [T], capacity: f64, sense: Sense, key: F) -> Result<f64>
where
    F: Fn(&T) -> f64,
{
    let n = items.len();
    if !(capacity >= 0.0 && capacity <= n as f64) {
        return Err(Error::CapacityOutOfRange { capacity, len: n });
    }
    if capacity == 0.0 {
        return Ok(0.0);
    }
    let full = capacity.floor() as usize;
    if full == n {
        return Ok(items.iter().map(&key).kbn_sum());
    }
    let fraction = capacity - full as f64;
    match sense {
        Sense::Maximize => select_nth_by_key(items, full, |t| -key(t))?,
        Sense::Minimize => select_nth_by_key(items, full, &key)?,
    };
    let filled = items[..full].iter().map(&key);
    let pivot = fraction * key(&items[full]);
    Ok(filled.chain(std::iter::once(pivot)).kbn_sum())
}

/// Range `[min, max]` of `Σ α_i·x_i` over `α ∈ [-1,1]^n` with `Σ α_i = -balance`.
///
/// Substituting `β = (α + 1)/2` turns both bounds into knapsacks with
/// capacity `(n − balance)/2`; the optimum maps back as `2·O_β − Σ x_i`.
pub fn alpha_range<T, F>(items: &mut [T], balance: i64, key: F) -> Result<(f64, f64)>
where
    F: Fn(&T) -> f64,
{
    let n = items.len() as i64;
    if balance.abs() > n {
        return Err(Error::Invariant(
            "knapsack capacity outside [0, |I0|]; partition is inconsistent",
        ));
    }
    if n == 0 {
        return Ok((0.0, 0.0));
    }
    let capacity = (n - balance) as f64 / 2.0;
    let total = items.iter().map(&key).kbn_sum();
    let hi = knapsack_by_key(items, capacity, Sense::Maximize, &key)?;
    let lo = knapsack_by_key(items, capacity, Sense::Minimize, &key)?;
    Ok((2.0 * lo - total, 2.0 * hi - total))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        assert_eq!(solve_knapsack(&mut [5.0], 1.0).unwrap(), 5.0);
        assert_eq!(solve_knapsack(&mut [3.0, 1.0, 2.0], 1.5).unwrap(), 4.0);
        assert_eq!(solve_knapsack(&mut [3.0, -1.0, 2.0], 0.0).unwrap(), 0.0);
        assert_eq!(solve_knapsack_min(&mut [3.0, 1.0, 2.0], 1.5).unwrap(), 2.0);
        assert_eq!(solve_knapsack(&mut [3.0, 1.0, 2.0], 3.0).unwrap(), 6.0);
    }

    #[test]
    fn capacity_out_of_range() {
        assert!(matches!(
            solve_knapsack(&mut [1.0, 2.0], 2.5),
            Err(Error::CapacityOutOfRange { .. })
        ));
        assert!(solve_knapsack(&mut [1.0], -0.5).is_err());
        assert!(solve_knapsack(&mut [1.0], f64::NAN).is_err());
    }

    #[test]
    fn alpha_range_small() {
        // two free coefficients summing to zero: α = (a, -a), a ∈ [-1, 1]
        let mut xs = [1.0, 3.0];
        assert_eq!(alpha_range(&mut xs, 0, |v| *v).unwrap(), (-2.0, 2.0));
        // Σα = -1 with one item forces α = -1
        let mut xs = [4.0];
        assert_eq!(alpha_range(&mut xs, 1, |v| *v).unwrap(), (-4.0, -4.0));
        let mut xs: [f64; 0] = [];
        assert_eq!(alpha_range(&mut xs, 0, |v| *v).unwrap(), (0.0, 0.0));
        let mut xs = [1.0];
        assert!(matches!(alpha_range(&mut xs, 2, |v| *v), Err(Error::Invariant(_))));
    }
}

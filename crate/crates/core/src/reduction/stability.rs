//! The leading-term stability constant `N_{n,r}`.
//!
//! `N_{n,r,δ}` is the least integer meeting three lower bounds: one from the
//! regular-singular branch and two from recursing after a shear, either into
//! smaller rank or into a larger orbit at the sheared pole order
//! `(j_δ + 2)(r - 1) + 1`.

use std::collections::HashMap;

use super::sl2::{j_delta, realized_deltas};
use crate::algebra::field::Q;

/// Known sharp values that improve on the recursion.
pub const KNOWN_SHARP: &[(usize, i64, i64)] = &[(2, 2, 1)];

pub fn known_sharp(n: usize, r: i64) -> Option<i64> {
    KNOWN_SHARP.iter().find(|&&(a, b, _)| a == n && b == r).map(|&(_, _, v)| v)
}

/// Nonzero orbit dimensions of nilpotents in `gl_n`.
pub fn nonzero_orbits(n: usize) -> Vec<usize> {
    realized_deltas(n).into_iter().filter(|&d| d > 0).collect()
}

#[derive(Default)]
pub struct StabilityTable {
    full: HashMap<(usize, i64), i64>,
    by_orbit: HashMap<(usize, i64, usize), i64>,
}

fn ceil_clamped(x: Q) -> i64 {
    let c: i64 = x.ceil().to_integer().try_into().expect("stability constant fits in i64");
    c.max(0)
}

impl StabilityTable {
    pub fn new() -> Self {
        Self::default()
    }

    /// `N_{n,r}`.
    pub fn n(&mut self, n: usize, r: i64) -> i64 {
        assert!(n >= 1 && r >= 1);
        if n == 1 || r == 1 {
            return 0;
        }
        if let Some(&v) = self.full.get(&(n, r)) {
            return v;
        }
        let mut best = 0;
        for m in 1..n {
            best = best.max(self.n(m, r));
        }
        for d in nonzero_orbits(n) {
            best = best.max(self.n_delta(n, r, d));
        }
        self.full.insert((n, r), best);
        best
    }

    /// `N_{n,r,δ}`.
    pub fn n_delta(&mut self, n: usize, r: i64, delta: usize) -> i64 {
        if n == 1 || r == 1 {
            return 0;
        }
        if let Some(&v) = self.by_orbit.get(&(n, r, delta)) {
            return v;
        }
        let j = j_delta(n, delta).expect("realized orbit");
        let half = Q::new((r - 1).into(), 2.into());
        let jq = Q::from_integer(j.into());
        let rs_bound = ceil_clamped(&jq * &half - Q::from_integer(1.into()));
        let shift = ceil_clamped((&jq + Q::from_integer(2.into())) * &jq * &half);
        let r_next = (j + 2) * (r - 1) + 1;
        let mut best = rs_bound;
        for m in 1..n {
            best = best.max(shift + self.n(m, r_next));
        }
        for d in nonzero_orbits(n).into_iter().filter(|&d| d > delta) {
            best = best.max(shift + self.n_delta(n, r_next, d));
        }
        self.by_orbit.insert((n, r, delta), best);
        best
    }
}

pub fn stability_constant(n: usize, r: i64) -> i64 {
    StabilityTable::new().n(n, r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        for r in 1..=10 {
            assert_eq!(stability_constant(1, r), 0);
        }
        for n in 1..=4 {
            assert_eq!(stability_constant(n, 1), 0);
        }
    }

    #[test]
    fn rank_two_pole_two() {
        assert_eq!(stability_constant(2, 2), 4);
        assert_eq!(known_sharp(2, 2), Some(1));
    }

    #[test]
    fn monotone_in_rank() {
        let mut t = StabilityTable::new();
        for r in 1..=3 {
            for n in 1..3 {
                assert!(t.n(n, r) <= t.n(n + 1, r));
            }
        }
    }
}

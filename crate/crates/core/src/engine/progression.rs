//! Almost arithmetical progressions and multiprogressions.

use std::collections::BTreeSet;

use serde::Serialize;

use crate::error::{Error, Result};

use super::LengthSet;

/// A decomposition `L = y + (L′ ∪ L* ∪ L″)` with `L*` an arithmetical
/// progression of difference `d` starting at 0.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AapFit {
    pub shift: i64,
    pub difference: u64,
    pub bound: u64,
    pub initial: Vec<i64>,
    pub core: Vec<i64>,
    pub tail: Vec<i64>,
}

impl AapFit {
    pub fn reassemble(&self) -> LengthSet {
        self.initial.iter().chain(&self.core).chain(&self.tail).map(|x| (x + self.shift) as u64).collect()
    }
}

/// Finds the AAP decomposition of `l` with difference `d` and least bound,
/// preferring a longer core on ties. `None` when `l` is not contained in a
/// single residue class modulo `d`.
pub fn fit_aap(l: &LengthSet, d: u64) -> Option<AapFit> {
    let (lo, hi) = (l.min()?, l.max()?);
    if d == 0 || l.iter().any(|x| (x - lo) % d != 0) {
        return None;
    }
    let mut best: Option<(u64, u64, u64, u64)> = None; // (bound, core len, y, steps)
    for y in l.iter() {
        let mut steps = 0;
        loop {
            let end = y + steps * d;
            let bound = (y - lo).max(hi - end);
            let cand = (bound, steps + 1, y, steps);
            let better = match best {
                None => true,
                Some((bb, bl, by, _)) => (bound, std::cmp::Reverse(steps + 1), y) < (bb, std::cmp::Reverse(bl), by),
            };
            if better {
                best = Some(cand);
            }
            if !l.contains(end + d) {
                break;
            }
            steps += 1;
        }
    }
    let (bound, _, y, steps) = best?;
    let end = y + steps * d;
    let rel = |x: u64| x as i64 - y as i64;
    Some(AapFit {
        shift: y as i64,
        difference: d,
        bound,
        initial: l.iter().filter(|&x| x < y).map(rel).collect(),
        core: l.iter().filter(|&x| x >= y && x <= end).map(rel).collect(),
        tail: l.iter().filter(|&x| x > end).map(rel).collect(),
    })
}

/// Whether `l` is an AAMP with difference `d`, period `period` and bound `bound`.
pub fn fit_aamp(l: &LengthSet, d: u64, period: &BTreeSet<u64>, bound: u64) -> Result<bool> {
    if d == 0 || !period.contains(&0) || !period.contains(&d) || period.iter().any(|&p| p > d) {
        return Err(Error::InvalidParameter(format!("period {period:?} must satisfy {{0,{d}}} ⊆ D ⊆ [0,{d}]")));
    }
    if l.is_empty() {
        return Err(Error::InvalidParameter("AAMP fit of an empty set".into()));
    }
    let d_i = d as i64;
    let residues: BTreeSet<i64> = period.iter().map(|&p| p as i64 % d_i).collect();
    let in_pattern = |x: i64| residues.contains(&x.rem_euclid(d_i));
    let bound = bound as i64;

    for y in l.iter() {
        let rel: Vec<i64> = l.iter().map(|x| x as i64 - y as i64).collect();
        if !rel.iter().all(|&x| in_pattern(x)) {
            continue;
        }
        if rel.iter().any(|&x| x < -bound) {
            continue;
        }
        for &top in rel.iter().filter(|&&x| x >= 0) {
            let core_ok = (0..=top).all(|x| in_pattern(x) == rel.binary_search(&x).is_ok());
            let tail_ok = rel.iter().all(|&x| x <= top + bound);
            if core_ok && tail_ok {
                return Ok(true);
            }
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    /// Every `(y, L*)` choice, scored by the bound it forces.
    fn brute_force_min_bound(l: &LengthSet, d: u64) -> Option<u64> {
        let lo = l.min()?;
        if l.iter().any(|x| (x - lo) % d != 0) {
            return None;
        }
        let mut best = None;
        for y in l.iter() {
            for steps in 0..=l.max()? {
                if (0..=steps).all(|i| l.contains(y + i * d)) {
                    let end = y + steps * d;
                    let need_lo = l.iter().filter(|&x| x < y).map(|x| y - x).max().unwrap_or(0);
                    let need_hi = l.iter().filter(|&x| x > end).map(|x| x - end).max().unwrap_or(0);
                    let m = need_lo.max(need_hi);
                    best = Some(best.map_or(m, |b: u64| b.min(m)));
                }
            }
        }
        best
    }

    #[test]
    fn aap_examples() {
        let ap = LengthSet::new([3, 5, 7, 9]);
        let fit = fit_aap(&ap, 2).unwrap();
        assert_eq!(fit.bound, 0);
        assert_eq!(fit.core, vec![0, 2, 4, 6]);

        // {2,3,5}: the core {2,3} leaves 5 two steps beyond the core's end
        let l = LengthSet::new([2, 3, 5]);
        let fit = fit_aap(&l, 1).unwrap();
        assert_eq!(brute_force_min_bound(&l, 1), Some(2));
        assert_eq!((fit.shift, fit.bound), (2, 2));
        assert_eq!(fit.core, vec![0, 1]);
        assert_eq!(fit.tail, vec![3]);

        assert_eq!(fit_aap(&LengthSet::new([2, 5]), 2), None);
    }

    #[test]
    fn aamp_examples() {
        let period = BTreeSet::from([0, 2]);
        assert!(fit_aamp(&LengthSet::new([4, 6, 8]), 2, &period, 0).unwrap());
        // y + 2k + {2ν : ν ∈ [0,k]} with y = 1, k = 3
        let l: LengthSet = (0..=3).map(|nu| 1 + 6 + 2 * nu).collect();
        assert!(fit_aamp(&l, 2, &period, 0).unwrap());
        assert!(!fit_aamp(&LengthSet::new([0, 1, 3]), 3, &BTreeSet::from([0, 3]), 0).unwrap());
        // a genuine multiprogression: period {0,1,3} with difference 3
        let l = LengthSet::new([10, 11, 13, 14, 16]);
        assert!(fit_aamp(&l, 3, &BTreeSet::from([0, 1, 3]), 0).unwrap());
        assert!(fit_aamp(&l, 3, &BTreeSet::from([0, 3]), 0).is_ok());
        assert!(fit_aamp(&l, 3, &BTreeSet::from([0, 2]), 0).is_err());
    }

    proptest! {
        #[test]
        fn aap_fit_reassembles_and_is_minimal(v in prop::collection::btree_set(0u64..30, 1..8), d in 1u64..4) {
            let l: LengthSet = v.into_iter().collect();
            match fit_aap(&l, d) {
                Some(fit) => {
                    prop_assert_eq!(fit.reassemble(), l.clone());
                    prop_assert_eq!(Some(fit.bound), brute_force_min_bound(&l, d));
                    prop_assert!(fit.initial.iter().all(|&x| x < 0 && x >= -(fit.bound as i64)));
                    let top = *fit.core.last().unwrap();
                    prop_assert!(fit.tail.iter().all(|&x| x > top && x <= top + fit.bound as i64));
                    prop_assert!(fit.core.iter().enumerate().all(|(i, &x)| x == (i as i64) * d as i64));
                }
                None => prop_assert_eq!(brute_force_min_bound(&l, d), None),
            }
        }

        #[test]
        fn aap_fits_are_aamps(v in prop::collection::btree_set(0u64..30, 1..8), d in 1u64..4) {
            let l: LengthSet = v.into_iter().collect();
            if let Some(fit) = fit_aap(&l, d) {
                prop_assert!(fit_aamp(&l, d, &BTreeSet::from([0, d]), fit.bound).unwrap());
            }
        }
    }
}

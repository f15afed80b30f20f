use std::fmt;

use serde::{Deserialize, Serialize};

use super::AtomId;

/// A multiset of atom ids, sorted by id with no zero counts.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factorization {
    counts: Vec<(AtomId, u64)>,
}

impl Factorization {
    pub fn empty() -> Self {
        Factorization::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (AtomId, u64)>) -> Self {
        let mut counts: Vec<(AtomId, u64)> = pairs.into_iter().filter(|(_, m)| *m > 0).collect();
        counts.sort_unstable();
        let mut merged: Vec<(AtomId, u64)> = Vec::with_capacity(counts.len());
        for (id, m) in counts {
            match merged.last_mut() {
                Some((last, lm)) if *last == id => *lm += m,
                _ => merged.push((id, m)),
            }
        }
        Factorization { counts: merged }
    }

    /// Builds from a dense count vector indexed by atom id.
    pub fn from_dense(dense: &[u64]) -> Self {
        Factorization { counts: dense.iter().enumerate().filter(|(_, &m)| m > 0).map(|(i, &m)| (i, m)).collect() }
    }

    pub fn with_atom(&self, id: AtomId) -> Self {
        let mut counts = self.counts.clone();
        match counts.binary_search_by(|(a, _)| a.cmp(&id)) {
            Ok(i) => counts[i].1 += 1,
            Err(i) => counts.insert(i, (id, 1)),
        }
        Factorization { counts }
    }

    pub fn iter(&self) -> impl Iterator<Item = (AtomId, u64)> + '_ {
        self.counts.iter().copied()
    }

    pub fn count(&self, id: AtomId) -> u64 {
        self.counts.binary_search_by(|(a, _)| a.cmp(&id)).map_or(0, |i| self.counts[i].1)
    }

    pub fn contains(&self, id: AtomId) -> bool {
        self.count(id) > 0
    }

    /// `|z|`.
    pub fn len(&self) -> u64 {
        self.counts.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Size of the common part `gcd(z, z')`.
    fn common_len(&self, other: &Factorization) -> u64 {
        let (mut i, mut j, mut common) = (0, 0, 0);
        while i < self.counts.len() && j < other.counts.len() {
            let (a, ma) = self.counts[i];
            let (b, mb) = other.counts[j];
            match a.cmp(&b) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    common += ma.min(mb);
                    i += 1;
                    j += 1;
                }
            }
        }
        common
    }

    /// `[[atom_id, multiplicity], …]`.
    pub fn to_pairs(&self) -> Vec<[u64; 2]> {
        self.counts.iter().map(|&(id, m)| [id as u64, m]).collect()
    }
}

impl fmt::Display for Factorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.counts.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.counts.iter().map(|(id, m)| if *m == 1 { format!("u{id}") } else { format!("u{id}^{m}") }).collect();
        write!(f, "{}", parts.join("·"))
    }
}

/// `d(z, z')`: after removing the common part, the larger remaining length.
pub fn distance(z: &Factorization, other: &Factorization) -> u64 {
    let common = z.common_len(other);
    (z.len() - common).max(other.len() - common)
}

/// A finite set of nonnegative integers, sorted and distinct.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LengthSet(Vec<u64>);

impl LengthSet {
    pub fn new(values: impl IntoIterator<Item = u64>) -> Self {
        let mut v: Vec<u64> = values.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        LengthSet(v)
    }

    /// `[lo, hi]`, empty when `lo > hi`.
    pub fn interval(lo: u64, hi: u64) -> Self {
        LengthSet((lo..=hi).collect())
    }

    pub fn as_slice(&self) -> &[u64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn min(&self) -> Option<u64> {
        self.0.first().copied()
    }

    pub fn max(&self) -> Option<u64> {
        self.0.last().copied()
    }

    pub fn contains(&self, x: u64) -> bool {
        self.0.binary_search(&x).is_ok()
    }

    pub fn is_subset(&self, other: &LengthSet) -> bool {
        self.0.iter().all(|&x| other.contains(x))
    }

    pub fn union(&self, other: &LengthSet) -> LengthSet {
        LengthSet::new(self.0.iter().chain(&other.0).copied())
    }

    /// The sumset `A + B`.
    pub fn sumset(&self, other: &LengthSet) -> LengthSet {
        LengthSet::new(self.0.iter().flat_map(|a| other.0.iter().map(move |b| a + b)))
    }

    pub fn shift(&self, by: u64) -> LengthSet {
        LengthSet(self.0.iter().map(|x| x + by).collect())
    }

    pub fn iter(&self) -> impl Iterator<Item = u64> + '_ {
        self.0.iter().copied()
    }
}

impl FromIterator<u64> for LengthSet {
    fn from_iter<I: IntoIterator<Item = u64>>(iter: I) -> Self {
        LengthSet::new(iter)
    }
}

impl fmt::Display for LengthSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(u64::to_string).collect();
        write!(f, "{{{}}}", parts.join(","))
    }
}

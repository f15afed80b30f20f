//! Sequences over a subset `G₀` of a finite abelian group, minimal zero-sum
//! sequences and the Davenport constant.

use std::fmt;

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};

/// A finite multiset of group elements, stored as sorted `(element, multiplicity)` pairs.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Sequence {
    entries: Vec<(GroupElement, u64)>,
}

impl Sequence {
    pub fn empty() -> Self {
        Sequence::default()
    }

    /// Normalizes arbitrary pairs: merges repeated elements and drops zero multiplicities.
    pub fn new(pairs: impl IntoIterator<Item = (GroupElement, u64)>) -> Self {
        let mut entries: Vec<(GroupElement, u64)> = pairs.into_iter().filter(|(_, m)| *m > 0).collect();
        entries.sort();
        let mut merged: Vec<(GroupElement, u64)> = Vec::with_capacity(entries.len());
        for (g, m) in entries {
            match merged.last_mut() {
                Some((last, lm)) if *last == g => *lm += m,
                _ => merged.push((g, m)),
            }
        }
        Sequence { entries: merged }
    }

    /// `g^k`.
    pub fn power(g: GroupElement, k: u64) -> Self {
        Sequence::new([(g, k)])
    }

    pub fn entries(&self) -> &[(GroupElement, u64)] {
        &self.entries
    }

    /// `|S|`.
    pub fn len(&self) -> u64 {
        self.entries.iter().map(|(_, m)| m).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn support(&self) -> Vec<GroupElement> {
        self.entries.iter().map(|(g, _)| g.clone()).collect()
    }

    /// `v_g(S)`.
    pub fn valuation(&self, g: &GroupElement) -> u64 {
        self.entries.binary_search_by(|(h, _)| h.cmp(g)).map_or(0, |i| self.entries[i].1)
    }

    /// The product `S·T` in the free abelian monoid.
    pub fn concat(&self, other: &Sequence) -> Sequence {
        Sequence::new(self.entries.iter().chain(&other.entries).cloned())
    }

    pub fn negate(&self, group: &AbelianGroup) -> Sequence {
        Sequence::new(self.entries.iter().map(|(g, m)| (group.neg(g), *m)))
    }

    pub fn validate(&self, group: &AbelianGroup) -> Result<()> {
        self.entries.iter().try_for_each(|(g, _)| group.validate(g))
    }

    /// Literal form `[[coords, multiplicity], …]`.
    pub fn to_json(&self) -> Value {
        Value::Array(self.entries.iter().map(|(g, m)| json!([g.coords, m])).collect())
    }

    pub fn from_json(group: &AbelianGroup, value: &Value) -> Result<Sequence> {
        let bad = || Error::InvalidElement(format!("sequence literal expected, got {value}"));
        let items = value.as_array().ok_or_else(bad)?;
        let mut pairs = Vec::with_capacity(items.len());
        for item in items {
            let pair = item.as_array().filter(|p| p.len() == 2).ok_or_else(bad)?;
            let coords: Vec<i64> = pair[0]
                .as_array()
                .ok_or_else(bad)?
                .iter()
                .map(|c| c.as_i64().ok_or_else(bad))
                .collect::<Result<_>>()?;
            let mult = pair[1].as_u64().ok_or_else(bad)?;
            let g = group.element(&coords).map_err(|e| Error::InvalidElement(e.to_string()))?;
            pairs.push((g, mult));
        }
        Ok(Sequence::new(pairs))
    }
}

impl fmt::Display for Sequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.entries.is_empty() {
            return write!(f, "1");
        }
        let parts: Vec<String> =
            self.entries.iter().map(|(g, m)| if *m == 1 { g.to_string() } else { format!("{g}^{m}") }).collect();
        write!(f, "{}", parts.join(""))
    }
}

/// A nonempty subset `G₀ ⊂ G`, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct G0Subset {
    group: AbelianGroup,
    elements: Vec<GroupElement>,
}

impl G0Subset {
    pub fn new(group: AbelianGroup, elements: Vec<GroupElement>) -> Result<Self> {
        let mut elements = elements;
        for g in &elements {
            group.validate(g)?;
        }
        elements.sort();
        elements.dedup();
        if elements.is_empty() {
            return Err(Error::InvalidSpec("G0 must be nonempty".into()));
        }
        Ok(G0Subset { group, elements })
    }

    pub fn all(group: &AbelianGroup, cap: u64) -> Result<Self> {
        Self::new(group.clone(), group.enumerate_elements(cap)?)
    }

    pub fn nonzero(group: &AbelianGroup, cap: u64) -> Result<Self> {
        let zero = group.zero();
        let elems = group.enumerate_elements(cap)?.into_iter().filter(|g| *g != zero).collect();
        Self::new(group.clone(), elems)
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn elements(&self) -> &[GroupElement] {
        &self.elements
    }

    pub fn position(&self, g: &GroupElement) -> Option<usize> {
        self.elements.binary_search(g).ok()
    }

    /// Multiplicity vector of `s` indexed by positions in `G₀`.
    pub fn to_counts(&self, s: &Sequence) -> Result<Vec<u64>> {
        let mut counts = vec![0; self.elements.len()];
        for (g, m) in s.entries() {
            let i = self.position(g).ok_or_else(|| Error::InvalidElement(format!("{g} is not in G0")))?;
            counts[i] = *m;
        }
        Ok(counts)
    }

    pub fn from_counts(&self, counts: &[u64]) -> Sequence {
        Sequence::new(self.elements.iter().cloned().zip(counts.iter().copied()))
    }
}

/// `σ(S)`, the sum of all terms.
pub fn sigma(group: &AbelianGroup, s: &Sequence) -> GroupElement {
    s.entries().iter().fold(group.zero(), |acc, (g, m)| group.add_unchecked(&acc, &group.scale(g, *m)))
}

/// Decides minimality by scanning every proper nonempty divisor of the multiset.
pub fn is_minimal_zero_sum(group: &AbelianGroup, s: &Sequence) -> bool {
    if s.is_empty() || sigma(group, s) != group.zero() {
        return false;
    }
    let terms = s.entries();
    let mut pick = vec![0u64; terms.len()];
    loop {
        // odometer over all sub-multiplicity vectors
        let mut i = 0;
        while i < terms.len() {
            if pick[i] < terms[i].1 {
                pick[i] += 1;
                break;
            }
            pick[i] = 0;
            i += 1;
        }
        if i == terms.len() {
            return true;
        }
        let proper = pick.iter().zip(terms).any(|(p, (_, m))| p < m);
        if !proper {
            continue;
        }
        let sum = terms
            .iter()
            .zip(&pick)
            .fold(group.zero(), |acc, ((g, _), &p)| group.add_unchecked(&acc, &group.scale(g, p)));
        if sum == group.zero() {
            return false;
        }
    }
}

/// Bitset of subsums over the group's lexicographic element indices.
#[derive(Clone)]
struct SubsumSet {
    words: Vec<u64>,
}

impl SubsumSet {
    fn new(order: usize) -> Self {
        SubsumSet { words: vec![0; order.div_ceil(64)] }
    }

    fn contains(&self, i: usize) -> bool {
        self.words[i / 64] >> (i % 64) & 1 == 1
    }

    fn insert(&mut self, i: usize) {
        self.words[i / 64] |= 1 << (i % 64);
    }

    fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.words
            .iter()
            .enumerate()
            .flat_map(|(w, &bits)| (0..64).filter(move |b| bits >> b & 1 == 1).map(move |b| w * 64 + b))
    }
}

/// Depth-first walk over zero-sum free sequences in nondecreasing `G₀` order.
///
/// `visit` receives the chosen `G₀` indices and the current sum; it is called
/// for the empty sequence too.
fn walk_zero_sum_free(g0: &G0Subset, visit: &mut dyn FnMut(&[usize], &GroupElement)) {
    let group = g0.group();
    let zero_index = group.index_of(&group.zero());
    let elems = g0.elements();
    let idx: Vec<usize> = elems.iter().map(|g| group.index_of(g)).collect();

    #[allow(clippy::too_many_arguments)]
    fn rec(
        group: &AbelianGroup,
        elems: &[GroupElement],
        idx: &[usize],
        zero_index: usize,
        chosen: &mut Vec<usize>,
        sum: GroupElement,
        subsums: &SubsumSet,
        visit: &mut dyn FnMut(&[usize], &GroupElement),
    ) {
        visit(chosen, &sum);
        let start = chosen.last().copied().unwrap_or(0);
        for j in start..elems.len() {
            if idx[j] == zero_index {
                continue;
            }
            let h = &elems[j];
            let mut next = subsums.clone();
            next.insert(idx[j]);
            for s in subsums.members() {
                let t = group.add_unchecked(&group.element_at(s), h);
                next.insert(group.index_of(&t));
            }
            if next.contains(zero_index) {
                continue;
            }
            chosen.push(j);
            rec(group, elems, idx, zero_index, chosen, group.add_unchecked(&sum, h), &next, visit);
            chosen.pop();
        }
    }

    let start = SubsumSet::new(group.order() as usize);
    rec(group, elems, &idx, zero_index, &mut Vec::new(), group.zero(), &start, visit);
}

/// All minimal zero-sum sequences over `G₀`, sorted by length then terms.
///
/// Each atom `U` is produced exactly once as `T·g` where `g` is its largest
/// term and `T = U g⁻¹` is zero-sum free with `σ(T) = −g`.
pub fn enumerate_atoms(g0: &G0Subset, cap: u64) -> Result<Vec<Sequence>> {
    let group = g0.group();
    group.check_cap(cap)?;
    let mut atoms = Vec::new();
    walk_zero_sum_free(g0, &mut |chosen, sum| {
        let closing = group.neg(sum);
        if let Some(j) = g0.position(&closing) {
            if chosen.last().is_none_or(|&last| j >= last) {
                let mut counts = vec![0u64; g0.elements().len()];
                for &c in chosen {
                    counts[c] += 1;
                }
                counts[j] += 1;
                atoms.push(g0.from_counts(&counts));
            }
        }
    });
    atoms.sort_by(|a, b| (a.len(), a).cmp(&(b.len(), b)));
    Ok(atoms)
}

/// `D(G) = max { |U| : U ∈ A(G) }`, computed as one more than the longest
/// zero-sum free sequence.
pub fn davenport(group: &AbelianGroup, cap: u64) -> Result<u64> {
    let g0 = G0Subset::all(group, cap)?;
    let mut longest = 0;
    walk_zero_sum_free(&g0, &mut |chosen, _| longest = longest.max(chosen.len() as u64));
    Ok(longest + 1)
}

/// Multiplicity vectors (indexed by `elems`) of every zero-sum sequence with
/// `|S| ≤ max_len`, ordered by length and then lexicographically descending
/// on the vector.
pub(crate) fn zero_sum_counts(group: &AbelianGroup, elems: &[GroupElement], max_len: u64) -> Vec<Vec<u64>> {
    let mut out = Vec::new();

    fn rec(
        group: &AbelianGroup,
        elems: &[GroupElement],
        pos: usize,
        remaining: u64,
        sum: &GroupElement,
        counts: &mut Vec<u64>,
        out: &mut Vec<Vec<u64>>,
    ) {
        if pos == elems.len() {
            if sum.coords.iter().all(|&c| c == 0) {
                out.push(counts.clone());
            }
            return;
        }
        let mut acc = sum.clone();
        for m in 0..=remaining {
            counts[pos] = m;
            rec(group, elems, pos + 1, remaining - m, &acc, counts, out);
            acc = group.add_unchecked(&acc, &elems[pos]);
        }
        counts[pos] = 0;
    }

    let mut counts = vec![0; elems.len()];
    rec(group, elems, 0, max_len, &group.zero(), &mut counts, &mut out);
    out.sort_by(|a, b| {
        let (la, lb) = (a.iter().sum::<u64>(), b.iter().sum::<u64>());
        la.cmp(&lb).then_with(|| b.cmp(a))
    });
    out
}

/// Every zero-sum sequence over `G₀` with `|S| ≤ max_len`, each exactly once,
/// shortest first.
pub fn enumerate_zero_sum(g0: &G0Subset, max_len: u64) -> Vec<Sequence> {
    zero_sum_counts(g0.group(), g0.elements(), max_len).iter().map(|c| g0.from_counts(c)).collect()
}

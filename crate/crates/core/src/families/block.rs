//! Monoids of zero-sum sequences `B(G₀)`.

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};
use crate::group::AbelianGroup;
use crate::zerosum::{enumerate_atoms, sigma, zero_sum_counts, G0Subset, Sequence};

/// `B(G₀)`, with elements stored as multiplicity vectors indexed by `G₀`.
#[derive(Clone, Debug)]
pub struct BlockMonoid {
    g0: G0Subset,
    atom_sequences: Vec<Sequence>,
    atoms: Vec<Element>,
    max_atom_len: u64,
}

pub(crate) fn sub_counts(a: &[u64], u: &[u64]) -> Option<Vec<u64>> {
    a.iter().zip(u).map(|(x, y)| x.checked_sub(*y)).collect()
}

impl BlockMonoid {
    pub fn new(g0: G0Subset, cap: u64) -> Result<Self> {
        let atom_sequences = enumerate_atoms(&g0, cap)?;
        let atoms = atom_sequences.iter().map(|s| g0.to_counts(s).map(Element::Flat)).collect::<Result<Vec<_>>>()?;
        let max_atom_len = atom_sequences.iter().map(Sequence::len).max().unwrap_or(0);
        Ok(BlockMonoid { g0, atom_sequences, atoms, max_atom_len })
    }

    /// `B(G)` over the whole group.
    pub fn full(group: &AbelianGroup, cap: u64) -> Result<Self> {
        Self::new(G0Subset::all(group, cap)?, cap)
    }

    /// A copy with one atom deleted from the atom table; used to check that
    /// verifications notice a corrupted atom table.
    pub fn without_atom(&self, id: AtomId) -> Self {
        let mut out = self.clone();
        if id < out.atoms.len() {
            out.atoms.remove(id);
            out.atom_sequences.remove(id);
        }
        out
    }

    pub fn g0(&self) -> &G0Subset {
        &self.g0
    }

    pub fn group(&self) -> &AbelianGroup {
        self.g0.group()
    }

    pub fn atom_sequences(&self) -> &[Sequence] {
        &self.atom_sequences
    }

    /// Longest atom, i.e. `D(G₀)`.
    pub fn max_atom_len(&self) -> u64 {
        self.max_atom_len
    }

    pub fn sequence_of(&self, a: &Element) -> Result<Sequence> {
        Ok(self.g0.from_counts(a.as_flat()?))
    }

    /// Encodes a zero-sum sequence over `G₀` as an element.
    pub fn element_of(&self, s: &Sequence) -> Result<Element> {
        let a = Element::Flat(self.g0.to_counts(s)?);
        self.validate(&a)?;
        Ok(a)
    }
}

impl PresentedMonoid for BlockMonoid {
    fn describe(&self) -> String {
        let n = self.g0.elements().len();
        let order = self.group().order();
        if n as u64 == order {
            format!("B({})", self.group())
        } else {
            format!("B(G0) with |G0| = {n} in {}", self.group())
        }
    }

    fn identity(&self) -> Element {
        Element::Flat(vec![0; self.g0.elements().len()])
    }

    fn is_cancellative(&self) -> bool {
        true
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let counts = a.as_flat()?;
        if counts.len() != self.g0.elements().len() {
            return Err(Error::InvalidElement(format!(
                "expected {} multiplicities, got {}",
                self.g0.elements().len(),
                counts.len()
            )));
        }
        let s = self.g0.from_counts(counts);
        let group = self.group();
        if sigma(group, &s) != group.zero() {
            return Err(Error::InvalidElement(format!("{s} is not a zero-sum sequence")));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Ok(a) = a.as_flat() else { return Vec::new() };
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, u)| matches!(u, Element::Flat(u) if u.iter().zip(a).all(|(x, y)| x <= y)))
            .map(|(i, _)| i)
            .collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        match (a, self.atoms.get(atom)) {
            (Element::Flat(a), Some(Element::Flat(u))) => sub_counts(a, u).map(Element::Flat).into_iter().collect(),
            _ => Vec::new(),
        }
    }

    fn element_size(&self, a: &Element) -> u64 {
        a.as_flat().map_or(0, |v| v.iter().sum())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let (a, b) = (a.as_flat()?, b.as_flat()?);
        if a.len() != b.len() {
            return Err(Error::InvalidElement("length mismatch".into()));
        }
        Ok(Element::Flat(a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        Ok(zero_sum_counts(self.group(), self.g0.elements(), bound).into_iter().map(Element::Flat).collect())
    }

    /// A product of `k` atoms has length at most `k·D(G₀)`.
    fn uk_witness_bound(&self, k: u64) -> Option<u64> {
        Some(k * self.max_atom_len)
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let s = Sequence::from_json(self.group(), literal)?;
        self.element_of(&s)
    }

    fn render_element(&self, a: &Element) -> Value {
        self.sequence_of(a).map_or(Value::Null, |s| s.to_json())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{catenary, factorizations, lengths, LengthSet};
    use crate::group::DEFAULT_ORDER_CAP;

    fn block(moduli: &[i64]) -> BlockMonoid {
        BlockMonoid::full(&AbelianGroup::new(moduli).unwrap(), DEFAULT_ORDER_CAP).unwrap()
    }

    fn seq(m: &BlockMonoid, pairs: &[(&[i64], u64)]) -> Element {
        let g = m.group();
        m.element_of(&Sequence::new(pairs.iter().map(|(c, k)| (g.element(c).unwrap(), *k)))).unwrap()
    }

    #[test]
    fn atom_tables() {
        assert_eq!(block(&[2]).atoms().len(), 2);
        assert_eq!(block(&[3]).atoms().len(), 4);
        let triv = block(&[1]);
        assert_eq!(triv.atoms(), &[Element::Flat(vec![1])]);
        let a = Element::Flat(vec![5]);
        assert_eq!(factorizations(&triv, &a).unwrap().len(), 1);
    }

    #[test]
    fn c3_relation() {
        let m = block(&[3]);
        // g³(−g)³ = U·(−U) = V³
        let a = seq(&m, &[(&[1], 3), (&[2], 3)]);
        let zs = factorizations(&m, &a).unwrap();
        assert_eq!(zs.len(), 2);
        assert_eq!(lengths(&m, &a).unwrap(), LengthSet::new([2, 3]));
        assert_eq!(catenary(&m, &a).unwrap(), 3);
        let v = seq(&m, &[(&[1], 1), (&[2], 1)]);
        assert_eq!(lengths(&m, &v).unwrap(), LengthSet::new([1]));
        assert_eq!(catenary(&m, &v).unwrap(), 0);
    }

    #[test]
    fn klein_four_relation() {
        let m = block(&[2, 2]);
        // V² with V = e0e1e2
        let a = seq(&m, &[(&[0, 1], 2), (&[1, 0], 2), (&[1, 1], 2)]);
        assert_eq!(lengths(&m, &a).unwrap(), LengthSet::new([2, 3]));
    }

    #[test]
    fn divisibility_is_multiset_containment() {
        let m = block(&[4]);
        for a in m.elements_up_to(8).unwrap() {
            let dividing = m.atoms_dividing(&a);
            for (id, u) in m.atoms().iter().enumerate() {
                // definitional: u | a iff a = u·b for some zero-sum b
                let definitional = m.elements_up_to(8).unwrap().iter().any(|b| m.multiply(u, b).unwrap() == a);
                assert_eq!(dividing.contains(&id), definitional);
            }
        }
    }

    #[test]
    fn parse_rejects_non_zero_sum() {
        let m = block(&[3]);
        let ok = serde_json::json!([[[1], 3], [[2], 3]]);
        assert!(m.parse_element(&ok).is_ok());
        let bad = serde_json::json!([[[1], 2]]);
        assert!(matches!(m.parse_element(&bad), Err(Error::InvalidElement(_))));
    }

    #[test]
    fn scope_lists_zero_sums() {
        let m = block(&[2]);
        assert_eq!(m.elements_up_to(2).unwrap().len(), 1 + 2 + 1);
    }
}

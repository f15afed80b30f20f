//! Affine monoids generated by finitely many vectors of `ℕ₀^s`.

use std::collections::{BTreeSet, HashMap};

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};

use super::block::sub_counts;

#[derive(Clone, Debug)]
pub struct AffineMonoid {
    dim: usize,
    atom_vectors: Vec<Vec<u64>>,
    atoms: Vec<Element>,
}

/// Membership of `v` in the monoid generated by `gens`; generators above `v`
/// in any coordinate are pruned by componentwise dominance.
fn generated(v: &[u64], gens: &[Vec<u64>], memo: &mut HashMap<Vec<u64>, bool>) -> bool {
    if v.iter().all(|&x| x == 0) {
        return true;
    }
    if let Some(&hit) = memo.get(v) {
        return hit;
    }
    let found = gens.iter().filter_map(|g| sub_counts(v, g)).any(|rest| generated(&rest, gens, memo));
    memo.insert(v.to_vec(), found);
    found
}

impl AffineMonoid {
    pub fn new(generators: &[Vec<u64>]) -> Result<Self> {
        let dim = generators.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::InvalidSpec("affine monoid needs generators in N0^s with s >= 1".into()));
        }
        if generators.iter().any(|g| g.len() != dim) {
            return Err(Error::InvalidSpec("affine generators have different dimensions".into()));
        }
        if generators.iter().any(|g| g.iter().all(|&x| x == 0)) {
            return Err(Error::InvalidSpec("the zero vector cannot be a generator".into()));
        }
        let gens: Vec<Vec<u64>> = generators.iter().cloned().collect::<BTreeSet<_>>().into_iter().collect();
        let atom_vectors: Vec<Vec<u64>> = gens
            .iter()
            .filter(|&g| {
                let others: Vec<Vec<u64>> = gens.iter().filter(|h| *h != g).cloned().collect();
                !generated(g, &others, &mut HashMap::new())
            })
            .cloned()
            .collect();
        let atoms = atom_vectors.iter().cloned().map(Element::Flat).collect();
        Ok(AffineMonoid { dim, atom_vectors, atoms })
    }

    pub fn atom_vectors(&self) -> &[Vec<u64>] {
        &self.atom_vectors
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        v.len() == self.dim && generated(v, &self.atom_vectors, &mut HashMap::new())
    }
}

impl PresentedMonoid for AffineMonoid {
    fn describe(&self) -> String {
        let gens: Vec<String> = self
            .atom_vectors
            .iter()
            .map(|v| format!("({})", v.iter().map(u64::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        format!("affine<{}>", gens.join(","))
    }

    fn identity(&self) -> Element {
        Element::Flat(vec![0; self.dim])
    }

    fn is_cancellative(&self) -> bool {
        true
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let v = a.as_flat()?;
        if !self.contains(v) {
            return Err(Error::InvalidElement(format!("{a} is not in {}", self.describe())));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Ok(v) = a.as_flat() else { return Vec::new() };
        let mut memo = HashMap::new();
        self.atom_vectors
            .iter()
            .enumerate()
            .filter(|(_, u)| sub_counts(v, u).is_some_and(|rest| generated(&rest, &self.atom_vectors, &mut memo)))
            .map(|(i, _)| i)
            .collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        let (Ok(v), Some(u)) = (a.as_flat(), self.atom_vectors.get(atom)) else { return Vec::new() };
        sub_counts(v, u).filter(|rest| self.contains(rest)).map(Element::Flat).into_iter().collect()
    }

    fn element_size(&self, a: &Element) -> u64 {
        a.as_flat().map_or(0, |v| v.iter().sum())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let (a, b) = (a.as_flat()?, b.as_flat()?);
        Ok(Element::Flat(a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        let mut seen = BTreeSet::from([vec![0; self.dim]]);
        let mut frontier = vec![vec![0; self.dim]];
        while let Some(v) = frontier.pop() {
            let size: u64 = v.iter().sum();
            for u in &self.atom_vectors {
                if size + u.iter().sum::<u64>() <= bound {
                    let w: Vec<u64> = v.iter().zip(u).map(|(x, y)| x + y).collect();
                    if seen.insert(w.clone()) {
                        frontier.push(w);
                    }
                }
            }
        }
        let mut out: Vec<Vec<u64>> = seen.into_iter().collect();
        out.sort_by_key(|v| (v.iter().sum::<u64>(), v.clone()));
        Ok(out.into_iter().map(Element::Flat).collect())
    }

    fn uk_witness_bound(&self, k: u64) -> Option<u64> {
        self.atom_vectors.iter().map(|u| u.iter().sum::<u64>()).max().map(|s| k * s)
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let bad = || Error::InvalidElement(format!("vector literal expected, got {literal}"));
        let v = literal
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_u64().ok_or_else(bad))
            .collect::<Result<Vec<u64>>>()?;
        let a = Element::Flat(v);
        self.validate(&a)?;
        Ok(a)
    }

    fn render_element(&self, a: &Element) -> Value {
        a.as_flat().map_or(Value::Null, |v| Value::from(v.to_vec()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{factorizations, lengths, LengthSet};
    use crate::families::NumericalMonoid;

    #[test]
    fn construction() {
        let free = AffineMonoid::new(&[vec![1, 0], vec![0, 1]]).unwrap();
        assert_eq!(free.atoms().len(), 2);
        for a in free.elements_up_to(6).unwrap() {
            assert_eq!(factorizations(&free, &a).unwrap().len(), 1);
        }
        assert!(AffineMonoid::new(&[vec![0, 0], vec![1, 0]]).is_err());
        assert!(AffineMonoid::new(&[]).is_err());
        let redundant = AffineMonoid::new(&[vec![1, 1], vec![2, 2], vec![1, 2]]).unwrap();
        assert_eq!(redundant.atom_vectors(), &[vec![1, 1], vec![1, 2]]);
    }

    #[test]
    fn examples() {
        let m = AffineMonoid::new(&[vec![2, 0], vec![3, 0]]).unwrap();
        assert_eq!(lengths(&m, &Element::Flat(vec![6, 0])).unwrap(), LengthSet::new([2, 3]));
        let m = AffineMonoid::new(&[vec![1, 1], vec![1, 2], vec![2, 1]]).unwrap();
        let a = Element::Flat(vec![3, 3]);
        assert_eq!(factorizations(&m, &a).unwrap().len(), 2);
        assert_eq!(lengths(&m, &a).unwrap(), LengthSet::new([2, 3]));
    }

    #[test]
    fn agrees_with_numerical_on_embedded_copies() {
        for gens in [vec![2, 3], vec![3, 5, 7], vec![4, 6, 9], vec![5, 7, 8, 9]] {
            let num = NumericalMonoid::new(&gens).unwrap();
            let lifted: Vec<Vec<u64>> = gens.iter().map(|&g| vec![g, 0]).collect();
            let aff = AffineMonoid::new(&lifted).unwrap();
            for n in 0..=60 {
                let a = Element::Flat(vec![n, 0]);
                let in_num = num.contains(n);
                assert_eq!(aff.contains(&[n, 0]), in_num, "{gens:?} {n}");
                if in_num {
                    assert_eq!(lengths(&num, &Element::int(n)).unwrap(), lengths(&aff, &a).unwrap(), "{gens:?} {n}");
                    assert_eq!(
                        factorizations(&num, &Element::int(n)).unwrap().len(),
                        factorizations(&aff, &a).unwrap().len()
                    );
                }
            }
        }
    }
}

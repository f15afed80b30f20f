//! Krull monoids presented by a finite set of primes with class data, and the
//! block homomorphism `β` into `B(G₀)`.

use std::collections::{BTreeMap, BTreeSet};

use serde_json::{json, Map, Value};

use crate::engine::{lengths, AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, GroupElement};
use crate::zerosum::{davenport, enumerate_zero_sum, zero_sum_counts, G0Subset, Sequence};

use super::block::{sub_counts, BlockMonoid};

/// Named primes `P` with their classes in `G`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KrullPresentation {
    group: AbelianGroup,
    primes: Vec<(String, GroupElement)>,
}

impl KrullPresentation {
    pub fn new(group: AbelianGroup, primes: impl IntoIterator<Item = (String, GroupElement)>) -> Result<Self> {
        let mut by_name = BTreeMap::new();
        for (name, class) in primes {
            group.validate(&class)?;
            if by_name.insert(name.clone(), class).is_some() {
                return Err(Error::InvalidSpec(format!("prime {name} listed twice")));
            }
        }
        if by_name.is_empty() {
            return Err(Error::InvalidSpec("a Krull presentation needs at least one prime".into()));
        }
        Ok(KrullPresentation { group, primes: by_name.into_iter().collect() })
    }

    pub fn group(&self) -> &AbelianGroup {
        &self.group
    }

    pub fn primes(&self) -> &[(String, GroupElement)] {
        &self.primes
    }

    fn classes(&self) -> Vec<GroupElement> {
        self.primes.iter().map(|(_, g)| g.clone()).collect()
    }

    /// `G₀`: the classes containing primes.
    pub fn g0(&self) -> Result<G0Subset> {
        let classes: BTreeSet<GroupElement> = self.classes().into_iter().collect();
        G0Subset::new(self.group.clone(), classes.into_iter().collect())
    }
}

/// `β(a)`: the sequence of classes of the primes dividing `a`.
pub fn beta(pres: &KrullPresentation, a: &[u64]) -> Sequence {
    Sequence::new(pres.primes.iter().zip(a).map(|((_, g), &k)| (g.clone(), k)))
}

#[derive(Clone, Debug)]
pub struct KrullMonoid {
    pres: KrullPresentation,
    atom_vectors: Vec<Vec<u64>>,
    atoms: Vec<Element>,
    davenport: u64,
}

/// Calls `f` on every `v ≤ a` componentwise.
fn for_each_subvector(a: &[u64], f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
    fn rec(a: &[u64], pos: usize, v: &mut Vec<u64>, f: &mut dyn FnMut(&[u64]) -> bool) -> bool {
        if pos == a.len() {
            return f(v);
        }
        for k in 0..=a[pos] {
            v[pos] = k;
            if !rec(a, pos + 1, v, f) {
                return false;
            }
        }
        v[pos] = 0;
        true
    }
    rec(a, 0, &mut vec![0; a.len()], f)
}

impl KrullMonoid {
    pub fn new(pres: KrullPresentation, cap: u64) -> Result<Self> {
        let davenport = davenport(&pres.group, cap)?;
        let classes = pres.classes();
        let group = &pres.group;
        let is_zero_class = |v: &[u64]| {
            classes.iter().zip(v).fold(group.zero(), |acc, (g, &k)| group.add_unchecked(&acc, &group.scale(g, k)))
                == group.zero()
        };
        // atoms are the minimal nonempty zero-class vectors; their images are
        // atoms of B(G₀), so their length is at most D(G)
        let atom_vectors: Vec<Vec<u64>> = zero_sum_counts(group, &classes, davenport)
            .into_iter()
            .filter(|v| v.iter().any(|&k| k > 0))
            .filter(|v| {
                let total: u64 = v.iter().sum();
                for_each_subvector(v, &mut |w| {
                    let s: u64 = w.iter().sum();
                    s == 0 || s == total || !is_zero_class(w)
                })
            })
            .collect();
        let atoms = atom_vectors.iter().cloned().map(Element::Flat).collect();
        Ok(KrullMonoid { pres, atom_vectors, atoms, davenport })
    }

    pub fn presentation(&self) -> &KrullPresentation {
        &self.pres
    }

    pub fn atom_vectors(&self) -> &[Vec<u64>] {
        &self.atom_vectors
    }
}

impl PresentedMonoid for KrullMonoid {
    fn describe(&self) -> String {
        let primes: Vec<String> = self.pres.primes.iter().map(|(p, g)| format!("{p}:{g}")).collect();
        format!("Krull monoid over {} with primes {{{}}}", self.pres.group, primes.join(", "))
    }

    fn identity(&self) -> Element {
        Element::Flat(vec![0; self.pres.primes.len()])
    }

    fn is_cancellative(&self) -> bool {
        true
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let v = a.as_flat()?;
        if v.len() != self.pres.primes.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} exponents, got {}",
                self.pres.primes.len(),
                v.len()
            )));
        }
        let group = &self.pres.group;
        let s = beta(&self.pres, v);
        if crate::zerosum::sigma(group, &s) != group.zero() {
            return Err(Error::InvalidElement(format!("{a} has nonzero class")));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Ok(v) = a.as_flat() else { return Vec::new() };
        (0..self.atom_vectors.len()).filter(|&i| sub_counts(v, &self.atom_vectors[i]).is_some()).collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        match (a.as_flat(), self.atom_vectors.get(atom)) {
            (Ok(v), Some(u)) => sub_counts(v, u).map(Element::Flat).into_iter().collect(),
            _ => Vec::new(),
        }
    }

    fn element_size(&self, a: &Element) -> u64 {
        a.as_flat().map_or(0, |v| v.iter().sum())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let (a, b) = (a.as_flat()?, b.as_flat()?);
        Ok(Element::Flat(a.iter().zip(b).map(|(x, y)| x + y).collect()))
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        Ok(zero_sum_counts(&self.pres.group, &self.pres.classes(), bound).into_iter().map(Element::Flat).collect())
    }

    fn uk_witness_bound(&self, k: u64) -> Option<u64> {
        Some(k * self.davenport)
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let obj = literal
            .as_object()
            .ok_or_else(|| Error::InvalidElement(format!("expected an object of prime exponents, got {literal}")))?;
        let mut v = vec![0; self.pres.primes.len()];
        for (name, k) in obj {
            let pos = self
                .pres
                .primes
                .iter()
                .position(|(p, _)| p == name)
                .ok_or_else(|| Error::InvalidElement(format!("unknown prime {name}")))?;
            v[pos] = k
                .as_u64()
                .ok_or_else(|| Error::InvalidElement(format!("exponent of {name} must be a nonnegative integer")))?;
        }
        let a = Element::Flat(v);
        self.validate(&a)?;
        Ok(a)
    }

    fn render_element(&self, a: &Element) -> Value {
        let Ok(v) = a.as_flat() else { return Value::Null };
        let map: Map<String, Value> = self
            .pres
            .primes
            .iter()
            .zip(v)
            .filter(|(_, &k)| k > 0)
            .map(|((p, _), &k)| (p.clone(), Value::from(k)))
            .collect();
        Value::Object(map)
    }
}

/// Outcome of [`verify_transfer`].
#[derive(Clone, Debug, PartialEq)]
pub struct TransferReport {
    pub elements_checked: u64,
    pub splits_checked: u64,
    pub sequences_checked: u64,
    /// First failing assertion, with its data.
    pub counterexample: Option<Value>,
}

impl TransferReport {
    pub fn passed(&self) -> bool {
        self.counterexample.is_none()
    }
}

/// Checks that `β` is a transfer homomorphism on the elements of size at most
/// `bound`: lengths are preserved, zero-sum sequences lift (T1), splits of
/// `β(a)` lift to splits of `a` (T2), and atoms map to atoms.
pub fn verify_transfer(pres: &KrullPresentation, bound: u64, cap: u64) -> Result<TransferReport> {
    let h = KrullMonoid::new(pres.clone(), cap)?;
    let g0 = pres.g0()?;
    let b = BlockMonoid::new(g0.clone(), cap)?;
    let mut report =
        TransferReport { elements_checked: 0, splits_checked: 0, sequences_checked: 0, counterexample: None };

    for (u, v) in h.atoms().iter().zip(h.atom_vectors()) {
        let image = b.element_of(&beta(pres, v))?;
        if lengths(&b, &image)?.as_slice() != [1] {
            report.counterexample = Some(json!({
                "assertion": "atoms map to atoms",
                "atom": h.render_element(u),
            }));
            return Ok(report);
        }
    }

    // T1: one prime per class gives a preimage
    for s in enumerate_zero_sum(&g0, bound) {
        report.sequences_checked += 1;
        let mut pre = vec![0; pres.primes.len()];
        for (g, k) in s.entries() {
            if let Some(i) = pres.primes.iter().position(|(_, c)| c == g) {
                pre[i] += k;
            }
        }
        let lifted = Element::Flat(pre.clone());
        if h.validate(&lifted).is_err() || beta(pres, &pre) != s {
            report.counterexample = Some(json!({"assertion": "T1", "sequence": s.to_json()}));
            return Ok(report);
        }
    }

    for a in h.elements_up_to(bound)? {
        report.elements_checked += 1;
        let v = a.as_flat()?;
        let image_seq = beta(pres, v);
        let image = b.element_of(&image_seq)?;
        let (lh, lb) = (lengths(&h, &a)?, lengths(&b, &image)?);
        if lh != lb {
            report.counterexample = Some(json!({
                "assertion": "L_H(a) = L_B(beta(a))",
                "element": h.render_element(&a),
                "lengths_h": lh,
                "lengths_b": lb,
            }));
            return Ok(report);
        }
        // T2: images of sub-vectors of a versus zero-sum divisors of β(a)
        let image_counts = image.as_flat()?.to_vec();
        let mut lifted = BTreeSet::new();
        for_each_subvector(v, &mut |w| {
            if let Ok(c) = g0.to_counts(&beta(pres, w)) {
                lifted.insert(c);
            }
            true
        });
        let mut failure = None;
        for_each_subvector(&image_counts, &mut |s| {
            if b.validate(&Element::Flat(s.to_vec())).is_err() {
                return true;
            }
            report.splits_checked += 1;
            if lifted.contains(s) {
                true
            } else {
                failure = Some(s.to_vec());
                false
            }
        });
        if let Some(s) = failure {
            report.counterexample = Some(json!({
                "assertion": "T2",
                "element": h.render_element(&a),
                "divisor": g0.from_counts(&s).to_json(),
            }));
            return Ok(report);
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::{factorizations, LengthSet};

    fn pres(moduli: &[i64], primes: &[(&str, &[i64])]) -> KrullPresentation {
        let g = AbelianGroup::new(moduli).unwrap();
        KrullPresentation::new(g.clone(), primes.iter().map(|(p, c)| (p.to_string(), g.element(c).unwrap()))).unwrap()
    }

    #[test]
    fn single_prime_of_class_zero_is_free() {
        let p = pres(&[3], &[("p", &[0])]);
        let h = KrullMonoid::new(p.clone(), 1000).unwrap();
        assert_eq!(h.atoms(), &[Element::Flat(vec![1])]);
        for a in h.elements_up_to(6).unwrap() {
            assert_eq!(factorizations(&h, &a).unwrap().len(), 1);
        }
        assert!(verify_transfer(&p, 6, 1000).unwrap().passed());
    }

    #[test]
    fn opposite_classes_in_c3() {
        let p = pres(&[3], &[("p", &[1]), ("q", &[2])]);
        let h = KrullMonoid::new(p.clone(), 1000).unwrap();
        let mut atoms = h.atom_vectors().to_vec();
        atoms.sort();
        assert_eq!(atoms, vec![vec![0, 3], vec![1, 1], vec![3, 0]]);
        let a = h.parse_element(&json!({"p": 3, "q": 3})).unwrap();
        assert_eq!(lengths(&h, &a).unwrap(), LengthSet::new([2, 3]));
        assert!(h.parse_element(&json!({"p": 1})).is_err());
        assert!(h.parse_element(&json!({"r": 1})).is_err());
        assert!(verify_transfer(&p, 8, 1000).unwrap().passed());
    }

    #[test]
    fn two_primes_in_one_class() {
        let p = pres(&[2], &[("p1", &[1]), ("p2", &[1])]);
        let h = KrullMonoid::new(p, 1000).unwrap();
        let mut atoms = h.atom_vectors().to_vec();
        atoms.sort();
        assert_eq!(atoms, vec![vec![0, 2], vec![1, 1], vec![2, 0]]);
        let a = Element::Flat(vec![2, 2]);
        assert_eq!(lengths(&h, &a).unwrap(), LengthSet::new([2]));
        assert_eq!(factorizations(&h, &a).unwrap().len(), 2);
    }

    #[test]
    fn beta_examples() {
        let p = pres(&[2], &[("p1", &[1]), ("p2", &[1])]);
        assert!(beta(&p, &[0, 0]).is_empty());
        let g = p.group().element(&[1]).unwrap();
        assert_eq!(beta(&p, &[1, 1]), Sequence::power(g, 2));
        let p = pres(&[3], &[("p", &[1])]);
        let g = p.group().element(&[1]).unwrap();
        assert_eq!(beta(&p, &[3]), Sequence::power(g, 3));
    }

    #[test]
    fn render_round_trip() {
        let p = pres(&[3], &[("p", &[1]), ("q", &[2])]);
        let h = KrullMonoid::new(p, 1000).unwrap();
        let a = Element::Flat(vec![2, 2]);
        assert_eq!(h.parse_element(&h.render_element(&a)).unwrap(), a);
    }
}

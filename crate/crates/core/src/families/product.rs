//! Direct products of reduced monoids.

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};

pub struct ProductMonoid {
    factors: Vec<Box<dyn PresentedMonoid>>,
    /// `offsets[i]` is the id of factor `i`'s first atom in the joint table.
    offsets: Vec<usize>,
    atoms: Vec<Element>,
}

impl ProductMonoid {
    pub fn new(factors: Vec<Box<dyn PresentedMonoid>>) -> Result<Self> {
        if factors.len() < 2 {
            return Err(Error::InvalidSpec("a product needs at least two factors".into()));
        }
        let identities: Vec<Element> = factors.iter().map(|f| f.identity()).collect();
        let mut offsets = Vec::with_capacity(factors.len());
        let mut atoms = Vec::new();
        for (i, f) in factors.iter().enumerate() {
            offsets.push(atoms.len());
            for u in f.atoms() {
                let mut parts = identities.clone();
                parts[i] = u.clone();
                atoms.push(Element::Tuple(parts));
            }
        }
        Ok(ProductMonoid { factors, offsets, atoms })
    }

    pub fn factors(&self) -> &[Box<dyn PresentedMonoid>] {
        &self.factors
    }

    /// Factor index and local atom id of a joint atom id.
    fn locate(&self, atom: AtomId) -> Option<(usize, AtomId)> {
        if atom >= self.atoms.len() {
            return None;
        }
        let i = self.offsets.partition_point(|&o| o <= atom) - 1;
        Some((i, atom - self.offsets[i]))
    }

    fn parts<'a>(&self, a: &'a Element) -> Result<&'a [Element]> {
        let parts = a.as_tuple()?;
        if parts.len() != self.factors.len() {
            return Err(Error::InvalidElement(format!(
                "expected {} components, got {}",
                self.factors.len(),
                parts.len()
            )));
        }
        Ok(parts)
    }
}

impl PresentedMonoid for ProductMonoid {
    fn describe(&self) -> String {
        let parts: Vec<String> = self.factors.iter().map(|f| f.describe()).collect();
        parts.join(" x ")
    }

    fn identity(&self) -> Element {
        Element::Tuple(self.factors.iter().map(|f| f.identity()).collect())
    }

    fn is_cancellative(&self) -> bool {
        self.factors.iter().all(|f| f.is_cancellative())
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        self.parts(a)?.iter().zip(&self.factors).try_for_each(|(x, f)| f.validate(x))
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Ok(parts) = self.parts(a) else { return Vec::new() };
        parts
            .iter()
            .zip(&self.factors)
            .zip(&self.offsets)
            .flat_map(|((x, f), &off)| f.atoms_dividing(x).into_iter().map(move |u| u + off))
            .collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        let (Ok(parts), Some((i, local))) = (self.parts(a), self.locate(atom)) else {
            return Vec::new();
        };
        self.factors[i]
            .cofactors(&parts[i], local)
            .into_iter()
            .map(|b| {
                let mut out = parts.to_vec();
                out[i] = b;
                Element::Tuple(out)
            })
            .collect()
    }

    fn element_size(&self, a: &Element) -> u64 {
        self.parts(a).map_or(0, |parts| parts.iter().zip(&self.factors).map(|(x, f)| f.element_size(x)).sum())
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let (a, b) = (self.parts(a)?, self.parts(b)?);
        Ok(Element::Tuple(
            a.iter().zip(b).zip(&self.factors).map(|((x, y), f)| f.multiply(x, y)).collect::<Result<_>>()?,
        ))
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        let per_factor = self
            .factors
            .iter()
            .map(|f| {
                Ok(f.elements_up_to(bound)?
                    .into_iter()
                    .map(|x| {
                        let s = f.element_size(&x);
                        (x, s)
                    })
                    .collect::<Vec<_>>())
            })
            .collect::<Result<Vec<_>>>()?;
        let mut out: Vec<(Vec<Element>, u64)> = vec![(Vec::new(), 0)];
        for choices in &per_factor {
            out = out
                .into_iter()
                .flat_map(|(prefix, size)| {
                    choices.iter().filter(move |(_, s)| size + s <= bound).map(move |(x, s)| {
                        let mut next = prefix.clone();
                        next.push(x.clone());
                        (next, size + s)
                    })
                })
                .collect();
        }
        Ok(out.into_iter().map(|(parts, _)| Element::Tuple(parts)).collect())
    }

    /// An element with `k ∈ L(a)` splits as `k = Σ kᵢ` with `kᵢ ∈ L(aᵢ)`, so
    /// its size is bounded by the largest sum of per-factor bounds.
    fn uk_witness_bound(&self, k: u64) -> Option<u64> {
        let per_factor: Vec<Vec<u64>> = self
            .factors
            .iter()
            .map(|f| {
                let base = f.element_size(&f.identity());
                (0..=k).map(|j| if j == 0 { Some(base) } else { f.uk_witness_bound(j) }).collect::<Option<Vec<u64>>>()
            })
            .collect::<Option<_>>()?;
        // best[j]: largest bound over the factors so far with total length j
        let mut best: Vec<Option<u64>> = (0..=k).map(|j| (j == 0).then_some(0)).collect();
        for bounds in &per_factor {
            best = (0..=k as usize).map(|j| (0..=j).filter_map(|i| best[j - i].map(|b| b + bounds[i])).max()).collect();
        }
        best[k as usize]
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let parts = literal
            .as_array()
            .filter(|v| v.len() == self.factors.len())
            .ok_or_else(|| Error::InvalidElement(format!("expected an array of {} components", self.factors.len())))?;
        Ok(Element::Tuple(parts.iter().zip(&self.factors).map(|(x, f)| f.parse_element(x)).collect::<Result<_>>()?))
    }

    fn render_element(&self, a: &Element) -> Value {
        self.parts(a).map_or(Value::Null, |parts| {
            Value::Array(parts.iter().zip(&self.factors).map(|(x, f)| f.render_element(x)).collect())
        })
    }
}

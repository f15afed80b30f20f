//! Numerical monoids `⟨g_1, …, g_n⟩ ⊂ (ℕ₀, +)`.

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};
use crate::group::gcd;

#[derive(Clone, Debug)]
pub struct NumericalMonoid {
    generators: Vec<u64>,
    atoms: Vec<Element>,
    /// `member[n]` for `n` below the conductor; everything from the conductor on is in the monoid.
    member: Vec<bool>,
    conductor: u64,
}

/// Membership of `0..limit` in the monoid generated by `gens`.
fn representable(gens: &[u64], limit: u64) -> Vec<bool> {
    let mut table = vec![false; limit as usize];
    if let Some(first) = table.first_mut() {
        *first = true;
    }
    for n in 1..limit as usize {
        table[n] = gens.iter().any(|&g| g as usize <= n && table[n - g as usize]);
    }
    table
}

impl NumericalMonoid {
    pub fn new(generators: &[u64]) -> Result<Self> {
        if generators.is_empty() || generators.contains(&0) {
            return Err(Error::InvalidSpec("numerical monoid generators must be positive".into()));
        }
        if generators.iter().fold(0, |acc, &g| gcd(acc, g)) != 1 {
            return Err(Error::InvalidSpec(format!("generators {generators:?} do not have gcd 1")));
        }
        let mut gens = generators.to_vec();
        gens.sort_unstable();
        gens.dedup();
        // drop generators representable by the others
        let minimal: Vec<u64> = gens
            .iter()
            .copied()
            .filter(|&g| {
                let others: Vec<u64> = gens.iter().copied().filter(|&h| h != g).collect();
                !representable(&others, g + 1)[g as usize]
            })
            .collect();

        let smallest = minimal[0];
        let mut member = vec![true];
        let mut run = 1;
        // grow the table until `smallest` consecutive members appear
        while run < smallest {
            let n = member.len();
            let is_member = minimal.iter().any(|&g| g as usize <= n && member[n - g as usize]);
            member.push(is_member);
            run = if is_member { run + 1 } else { 0 };
        }
        let conductor = member.len() as u64 - smallest;
        member.truncate(conductor as usize);
        let atoms = minimal.iter().map(|&g| Element::int(g)).collect();
        Ok(NumericalMonoid { generators: minimal, atoms, member, conductor })
    }

    pub fn generators(&self) -> &[u64] {
        &self.generators
    }

    pub fn conductor(&self) -> u64 {
        self.conductor
    }

    pub fn contains(&self, n: u64) -> bool {
        n >= self.conductor || self.member[n as usize]
    }

    fn value(a: &Element) -> Option<u64> {
        match a {
            Element::Flat(v) if v.len() == 1 => Some(v[0]),
            _ => None,
        }
    }
}

impl PresentedMonoid for NumericalMonoid {
    fn describe(&self) -> String {
        let gens: Vec<String> = self.generators.iter().map(u64::to_string).collect();
        format!("<{}>", gens.join(","))
    }

    fn identity(&self) -> Element {
        Element::int(0)
    }

    fn is_cancellative(&self) -> bool {
        true
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let n = Self::value(a).ok_or_else(|| Error::InvalidElement(format!("{a} is not an integer")))?;
        if !self.contains(n) {
            return Err(Error::InvalidElement(format!("{n} is not in {}", self.describe())));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Some(n) = Self::value(a) else { return Vec::new() };
        self.generators.iter().enumerate().filter(|(_, &g)| g <= n && self.contains(n - g)).map(|(i, _)| i).collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        match (Self::value(a), self.generators.get(atom)) {
            (Some(n), Some(&g)) if g <= n && self.contains(n - g) => vec![Element::int(n - g)],
            _ => Vec::new(),
        }
    }

    fn element_size(&self, a: &Element) -> u64 {
        Self::value(a).unwrap_or(0)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        match (Self::value(a), Self::value(b)) {
            (Some(x), Some(y)) => Ok(Element::int(x + y)),
            _ => Err(Error::InvalidElement("integers expected".into())),
        }
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        Ok((0..=bound).filter(|&n| self.contains(n)).map(Element::int).collect())
    }

    fn uk_witness_bound(&self, k: u64) -> Option<u64> {
        self.generators.last().map(|g| k * g)
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let n = literal
            .as_u64()
            .ok_or_else(|| Error::InvalidElement(format!("integer literal expected, got {literal}")))?;
        let a = Element::int(n);
        self.validate(&a)?;
        Ok(a)
    }

    fn render_element(&self, a: &Element) -> Value {
        Self::value(a).map_or(Value::Null, Value::from)
    }
}

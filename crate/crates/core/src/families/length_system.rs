//! The systems of sets of lengths `L(G)` for the groups with small Davenport
//! constant, as monoids under set addition.

use std::fmt;
use std::str::FromStr;

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};

use super::power::sumset;

/// Smallest cap for which the atom lists are complete.
pub const MIN_ATOM_CAP: u64 = 10;
/// Default cap of the monoid adapter.
pub const DEFAULT_SYSTEM_CAP: u64 = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Descriptor {
    C1,
    C2,
    C3,
    C22,
    C4,
    C23,
    C33,
}

impl Descriptor {
    pub const ALL: [Descriptor; 7] = [
        Descriptor::C1,
        Descriptor::C2,
        Descriptor::C3,
        Descriptor::C22,
        Descriptor::C4,
        Descriptor::C23,
        Descriptor::C33,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Descriptor::C1 => "C1",
            Descriptor::C2 => "C2",
            Descriptor::C3 => "C3",
            Descriptor::C22 => "C22",
            Descriptor::C4 => "C4",
            Descriptor::C23 => "C23",
            Descriptor::C33 => "C33",
        }
    }

    pub fn is_cancellative(self) -> bool {
        !matches!(self, Descriptor::C4 | Descriptor::C23)
    }
}

impl fmt::Display for Descriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Descriptor {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Descriptor::ALL.into_iter().find(|d| d.name() == s).ok_or_else(|| Error::UnknownDescriptor(s.to_string()))
    }
}

/// `[lo, hi]` when `l` is an interval.
fn as_interval(l: &[u64]) -> Option<(u64, u64)> {
    let (&lo, &hi) = (l.first()?, l.last()?);
    (hi - lo + 1 == l.len() as u64).then_some((lo, hi))
}

/// `(lo, k)` when `l = lo + {2ν : ν ∈ [0,k]}`.
fn as_even_progression(l: &[u64]) -> Option<(u64, u64)> {
    let &lo = l.first()?;
    l.iter().enumerate().all(|(i, &x)| x == lo + 2 * i as u64).then_some((lo, l.len() as u64 - 1))
}

/// `y + 2k + [0, k]` for some `y, k ≥ 0`.
fn in_system2(l: &[u64]) -> bool {
    as_interval(l).is_some_and(|(lo, hi)| lo >= 2 * (hi - lo))
}

/// `y + 2k + {2ν : ν ∈ [0,k]}` for some `y, k ≥ 0`.
fn in_even_family(l: &[u64]) -> bool {
    as_even_progression(l).is_some_and(|(lo, k)| lo >= 2 * k)
}

/// Whether `l` belongs to the system described by `desc`; `l` must be sorted
/// and duplicate-free.
pub fn lg_member(desc: Descriptor, l: &[u64]) -> bool {
    if l.is_empty() || l.windows(2).any(|w| w[0] >= w[1]) {
        return false;
    }
    match desc {
        Descriptor::C1 | Descriptor::C2 => l.len() == 1,
        Descriptor::C3 | Descriptor::C22 => in_system2(l),
        // y + k+1 + [0,k]  or the even family
        Descriptor::C4 => as_interval(l).is_some_and(|(lo, hi)| lo > hi - lo) || in_even_family(l),
        // y + (k+1) + [0,k] with k ≤ 2, y + k + [0,k] with k ≥ 3, or the even family
        Descriptor::C23 => {
            as_interval(l).is_some_and(|(lo, hi)| {
                let k = hi - lo;
                if k <= 2 {
                    lo > k
                } else {
                    lo >= k
                }
            }) || in_even_family(l)
        }
        // {1} ∪ {[2k, ν] : ν ∈ [2k, 5k]} ∪ {[2k+1, ν] : k ≥ 1, ν ∈ [2k+1, 5k+2]}
        Descriptor::C33 => match as_interval(l) {
            Some((1, 1)) => true,
            Some((lo, hi)) if lo % 2 == 0 => hi <= 5 * (lo / 2),
            Some((lo, hi)) => lo >= 3 && hi <= 5 * (lo / 2) + 2,
            None => false,
        },
    }
}

/// All members with maximum at most `cap`, ordered by `(max, set)`.
///
/// Every system here consists of intervals and progressions with difference
/// 2, so those are the only candidates tested.
pub fn lg_members(desc: Descriptor, cap: u64) -> Vec<Vec<u64>> {
    let mut candidates: Vec<Vec<u64>> = Vec::new();
    for lo in 0..=cap {
        for hi in lo..=cap {
            candidates.push((lo..=hi).collect());
            if hi >= lo + 2 && (hi - lo) % 2 == 0 {
                candidates.push((lo..=hi).step_by(2).collect());
            }
        }
    }
    candidates.push(vec![]);
    candidates.retain(|l| lg_member(desc, l));
    candidates.sort_by(|a, b| (a.last(), a).cmp(&(b.last(), b)));
    candidates.dedup();
    candidates
}

/// Atoms of the sumset monoid among members with maximum at most `cap`.
pub fn lg_atoms(desc: Descriptor, cap: u64) -> Result<Vec<Vec<u64>>> {
    if cap < MIN_ATOM_CAP {
        return Err(Error::CapTooSmall { cap, min: MIN_ATOM_CAP });
    }
    let members = lg_members(desc, cap);
    Ok(atoms_among(&members))
}

fn atoms_among(members: &[Vec<u64>]) -> Vec<Vec<u64>> {
    let identity = vec![0];
    let proper: Vec<&Vec<u64>> = members.iter().filter(|l| **l != identity).collect();
    proper
        .iter()
        .filter(|l| {
            let top = *l.last().unwrap_or(&0);
            // a split L = A + B has max A + max B = max L and both sides ≠ {0}
            !proper.iter().any(|a| {
                let a_top = *a.last().unwrap_or(&0);
                a_top < top && proper.iter().any(|b| b.last() == Some(&(top - a_top)) && sumset(a, b) == ***l)
            })
        })
        .map(|l| (*l).clone())
        .collect()
}

/// `L(G)` as a monoid under set addition, truncated to sets with maximum at
/// most `cap`.
#[derive(Clone, Debug)]
pub struct LengthSystem {
    descriptor: Descriptor,
    cap: u64,
    members: Vec<Vec<u64>>,
    atom_sets: Vec<Vec<u64>>,
    atoms: Vec<Element>,
}

impl LengthSystem {
    pub fn new(descriptor: Descriptor, cap: u64) -> Result<Self> {
        let atom_sets = lg_atoms(descriptor, cap)?;
        let atoms = atom_sets.iter().cloned().map(Element::Flat).collect();
        Ok(LengthSystem { descriptor, cap, members: lg_members(descriptor, cap), atom_sets, atoms })
    }

    pub fn descriptor(&self) -> Descriptor {
        self.descriptor
    }
}

impl PresentedMonoid for LengthSystem {
    fn describe(&self) -> String {
        format!("L({}) with max <= {}", self.descriptor, self.cap)
    }

    fn identity(&self) -> Element {
        Element::Flat(vec![0])
    }

    fn is_cancellative(&self) -> bool {
        self.descriptor.is_cancellative()
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let l = a.as_flat()?;
        if !lg_member(self.descriptor, l) {
            return Err(Error::InvalidElement(format!("{a} is not in L({})", self.descriptor)));
        }
        if l.last().is_some_and(|&m| m > self.cap) {
            return Err(Error::ScopeOverflow(format!("{a} exceeds the cap {}", self.cap)));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        (0..self.atom_sets.len()).filter(|&u| !self.cofactors(a, u).is_empty()).collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        let (Ok(l), Some(u)) = (a.as_flat(), self.atom_sets.get(atom)) else { return Vec::new() };
        let (Some(&top), Some(&u_top)) = (l.last(), u.last()) else { return Vec::new() };
        if u_top > top {
            return Vec::new();
        }
        self.members
            .iter()
            .filter(|c| c.last() == Some(&(top - u_top)) && sumset(u, c) == l)
            .cloned()
            .map(Element::Flat)
            .collect()
    }

    fn element_size(&self, a: &Element) -> u64 {
        a.as_flat().ok().and_then(|l| l.last().copied()).unwrap_or(0)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let c = Element::Flat(sumset(a.as_flat()?, b.as_flat()?));
        self.validate(&c)?;
        Ok(c)
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        if bound > self.cap {
            return Err(Error::ScopeOverflow(format!("bound {bound} exceeds the cap {}", self.cap)));
        }
        Ok(self.members.iter().filter(|l| l.last().is_some_and(|&m| m <= bound)).cloned().map(Element::Flat).collect())
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let bad = || Error::InvalidElement(format!("set literal expected, got {literal}"));
        let mut v = literal
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_u64().ok_or_else(bad))
            .collect::<Result<Vec<u64>>>()?;
        v.sort_unstable();
        v.dedup();
        let a = Element::Flat(v);
        self.validate(&a)?;
        Ok(a)
    }

    fn render_element(&self, a: &Element) -> Value {
        a.as_flat().map_or(Value::Null, |v| Value::from(v.to_vec()))
    }
}

//! The restricted power monoid: finite subsets of `ℕ₀` containing 0 under
//! set addition, truncated to subsets of `[0, N]`.

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};

/// Largest supported `N`; elements are bitmasks and atom search is exponential in `N`.
pub const MAX_POWER_VALUE: u64 = 16;

type Mask = u64;

fn to_mask(set: &[u64]) -> Mask {
    set.iter().fold(0, |m, &x| m | 1 << x)
}

fn from_mask(mut m: Mask) -> Vec<u64> {
    let mut out = Vec::new();
    while m != 0 {
        out.push(u64::from(m.trailing_zeros()));
        m &= m - 1;
    }
    out
}

fn mask_max(m: Mask) -> u64 {
    63 - u64::from(m.leading_zeros())
}

fn mask_sum(a: Mask, b: Mask) -> Mask {
    from_mask(b).into_iter().fold(0, |acc, shift| acc | a << shift)
}

/// Sumset `A + B`, sorted.
pub fn sumset(a: &[u64], b: &[u64]) -> Vec<u64> {
    let mut out: Vec<u64> = a.iter().flat_map(|x| b.iter().map(move |y| x + y)).collect();
    out.sort_unstable();
    out.dedup();
    out
}

/// Submasks of `free` unioned with `fixed`, each exactly once.
fn submasks(free: Mask, fixed: Mask) -> impl Iterator<Item = Mask> {
    let mut sub = Some(free);
    std::iter::from_fn(move || {
        let s = sub?;
        sub = if s == 0 { None } else { Some((s - 1) & free) };
        Some(s | fixed)
    })
}

/// Every `C ∋ 0` with `U + C = A`.
fn complements(a: Mask, u: Mask) -> Vec<Mask> {
    let (max_a, max_u) = (mask_max(a), mask_max(u));
    if max_u > max_a || u & !a != 0 {
        return Vec::new();
    }
    // C ⊆ {c : U + c ⊆ A}, and must contain 0 and max A − max U
    let cmax: Mask = (0..=max_a - max_u).filter(|&c| (u << c) & !a == 0).fold(0, |m, c| m | 1 << c);
    let fixed = 1 | 1 << (max_a - max_u);
    if cmax & fixed != fixed {
        return Vec::new();
    }
    let mut out: Vec<Mask> = submasks(cmax & !fixed, fixed).filter(|&c| mask_sum(u, c) == a).collect();
    out.sort_unstable();
    out
}

fn is_power_atom(a: Mask) -> bool {
    if a == 1 {
        return false;
    }
    let max_a = mask_max(a);
    // B ranges over proper summands: 0 ∈ B ⊆ A, B ≠ {0}, max B < max A
    let below = (a & ((1 << max_a) - 1)) & !1;
    !submasks(below, 1).filter(|&b| b != 1).any(|b| complements(a, b).iter().any(|&c| c != 1))
}

#[derive(Clone, Debug)]
pub struct PowerMonoid0 {
    max_value: u64,
    atom_masks: Vec<Mask>,
    atoms: Vec<Element>,
}

impl PowerMonoid0 {
    pub fn new(max_value: u64) -> Result<Self> {
        if max_value == 0 || max_value > MAX_POWER_VALUE {
            return Err(Error::InvalidSpec(format!(
                "power0 max_value must lie in [1, {MAX_POWER_VALUE}], got {max_value}"
            )));
        }
        let mut atom_masks: Vec<Mask> =
            (0..1u64 << max_value).map(|rest| 1 | rest << 1).filter(|&m| is_power_atom(m)).collect();
        atom_masks.sort_by_key(|&m| (mask_max(m), from_mask(m)));
        let atoms = atom_masks.iter().map(|&m| Element::Flat(from_mask(m))).collect();
        Ok(PowerMonoid0 { max_value, atom_masks, atoms })
    }

    pub fn max_value(&self) -> u64 {
        self.max_value
    }

    fn mask_of(&self, a: &Element) -> Result<Mask> {
        let v = a.as_flat()?;
        if v.first() != Some(&0) || v.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::InvalidElement(format!("{a} is not a sorted set containing 0")));
        }
        if let Some(&top) = v.last().filter(|&&t| t > self.max_value) {
            return Err(Error::ScopeOverflow(format!("{top} exceeds power0 bound {}", self.max_value)));
        }
        Ok(to_mask(v))
    }
}

/// A witness of non-cancellativity `A + C = B + C` with `A ≠ B`, all
/// subsets of `[0, n]` containing 0; the first found in mask order.
pub fn non_cancellative_witness(n: u64) -> Option<[Vec<u64>; 3]> {
    let n = n.min(MAX_POWER_VALUE);
    let sets: Vec<Mask> = (0..1u64 << n).map(|rest| 1 | rest << 1).collect();
    for &c in &sets {
        for (i, &a) in sets.iter().enumerate() {
            for &b in &sets[i + 1..] {
                if mask_sum(a, c) == mask_sum(b, c) {
                    return Some([from_mask(a), from_mask(b), from_mask(c)]);
                }
            }
        }
    }
    None
}

impl PresentedMonoid for PowerMonoid0 {
    fn describe(&self) -> String {
        format!("P_fin,0(N0) restricted to [0,{}]", self.max_value)
    }

    fn identity(&self) -> Element {
        Element::Flat(vec![0])
    }

    fn is_cancellative(&self) -> bool {
        false
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        self.mask_of(a).map(|_| ())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Ok(a) = self.mask_of(a) else { return Vec::new() };
        (0..self.atom_masks.len()).filter(|&i| !complements(a, self.atom_masks[i]).is_empty()).collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        match (self.mask_of(a), self.atom_masks.get(atom)) {
            (Ok(a), Some(&u)) => complements(a, u).into_iter().map(|c| Element::Flat(from_mask(c))).collect(),
            _ => Vec::new(),
        }
    }

    fn element_size(&self, a: &Element) -> u64 {
        a.as_flat().ok().and_then(|v| v.last().copied()).unwrap_or(0)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let s = sumset(a.as_flat()?, b.as_flat()?);
        let out = Element::Flat(s);
        self.validate(&out)?;
        Ok(out)
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        if bound > self.max_value {
            return Err(Error::ScopeOverflow(format!("bound {bound} exceeds power0 bound {}", self.max_value)));
        }
        let mut masks: Vec<Mask> = (0..1u64 << bound).map(|rest| 1 | rest << 1).collect();
        masks.sort_by_key(|&m| (mask_max(m), from_mask(m)));
        Ok(masks.into_iter().map(|m| Element::Flat(from_mask(m))).collect())
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

//! The strongly primary monoid `ℕ² ∪ {(0,0)}`, truncated to the box `[1,B]²`.

use serde_json::Value;

use crate::engine::{AtomId, Element, PresentedMonoid};
use crate::error::{Error, Result};

#[derive(Clone, Debug)]
pub struct BoxPrimary {
    bound: u64,
    atoms: Vec<Element>,
}

/// `M(a)` as computed inside the box.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MValue {
    pub value: u64,
    /// True when the box also settles the products reaching outside it.
    pub certified: bool,
}

fn point(a: &Element) -> Option<(u64, u64)> {
    match a {
        Element::Flat(v) if v.len() == 2 => Some((v[0], v[1])),
        _ => None,
    }
}

fn pt(x: u64, y: u64) -> Element {
    Element::Flat(vec![x, y])
}

impl BoxPrimary {
    pub fn new(bound: u64) -> Result<Self> {
        if bound < 2 {
            return Err(Error::InvalidSpec(format!("box bound must be at least 2, got {bound}")));
        }
        // (1,y) and (x,1): any split of these has a zero coordinate
        let mut atoms: Vec<Element> = (1..=bound).map(|y| pt(1, y)).collect();
        atoms.extend((2..=bound).map(|x| pt(x, 1)));
        Ok(BoxPrimary { bound, atoms })
    }

    pub fn bound(&self) -> u64 {
        self.bound
    }

    fn in_box(&self, (x, y): (u64, u64)) -> bool {
        (x, y) == (0, 0) || (1..=self.bound).contains(&x) && (1..=self.bound).contains(&y)
    }

    /// `c ∈ a + H`.
    pub fn divides(a: (u64, u64), c: (u64, u64)) -> bool {
        c == a || (c.0 > a.0 && c.1 > a.1)
    }

    /// The least `n` with every product of `n` non-units inside `a + H`.
    ///
    /// Products of `n` non-units are exactly the points with both
    /// coordinates at least `n`; the box decides `n` when `n < B`, since
    /// `a + H` is then closed under moving away from `(n, n)`.
    pub fn m_of(&self, a: &Element) -> Result<MValue> {
        self.validate(a)?;
        let a = point(a).unwrap_or((0, 0));
        if a == (0, 0) {
            return Err(Error::InvalidElement("M(a) is defined for non-units only".into()));
        }
        for n in 1..=self.bound {
            let all = (n..=self.bound).all(|x| (n..=self.bound).all(|y| Self::divides(a, (x, y))));
            if all {
                return Ok(MValue { value: n, certified: n < self.bound });
            }
        }
        Err(Error::ScopeOverflow(format!("box bound {} too small to determine M({},{})", self.bound, a.0, a.1)))
    }
}

impl PresentedMonoid for BoxPrimary {
    fn describe(&self) -> String {
        format!("N^2 u {{(0,0)}} within [1,{}]^2", self.bound)
    }

    fn identity(&self) -> Element {
        pt(0, 0)
    }

    fn is_cancellative(&self) -> bool {
        true
    }

    fn atoms(&self) -> &[Element] {
        &self.atoms
    }

    fn validate(&self, a: &Element) -> Result<()> {
        let p = point(a).ok_or_else(|| Error::InvalidElement(format!("{a} is not a pair")))?;
        if p != (0, 0) && (p.0 == 0 || p.1 == 0) {
            return Err(Error::InvalidElement(format!("{a} is not in N^2 u {{(0,0)}}")));
        }
        if !self.in_box(p) {
            return Err(Error::ScopeOverflow(format!("{a} lies outside the box [1,{}]^2", self.bound)));
        }
        Ok(())
    }

    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId> {
        let Some(a) = point(a) else { return Vec::new() };
        self.atoms
            .iter()
            .enumerate()
            .filter(|(_, u)| point(u).is_some_and(|u| Self::divides(u, a)))
            .map(|(i, _)| i)
            .collect()
    }

    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element> {
        match (point(a), self.atoms.get(atom).and_then(point)) {
            (Some(a), Some(u)) if Self::divides(u, a) => vec![pt(a.0 - u.0, a.1 - u.1)],
            _ => Vec::new(),
        }
    }

    fn element_size(&self, a: &Element) -> u64 {
        point(a).map_or(0, |(x, y)| x + y)
    }

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element> {
        let (Some(a), Some(b)) = (point(a), point(b)) else {
            return Err(Error::InvalidElement("pairs expected".into()));
        };
        let c = pt(a.0 + b.0, a.1 + b.1);
        self.validate(&c)?;
        Ok(c)
    }

    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>> {
        let mut out = vec![pt(0, 0)];
        for s in 2..=bound.min(2 * self.bound) {
            for x in 1..s {
                if self.in_box((x, s - x)) {
                    out.push(pt(x, s - x));
                }
            }
        }
        Ok(out)
    }

    fn parse_element(&self, literal: &Value) -> Result<Element> {
        let bad = || Error::InvalidElement(format!("pair literal expected, got {literal}"));
        let v = literal
            .as_array()
            .filter(|v| v.len() == 2)
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

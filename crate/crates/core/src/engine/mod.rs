//! The generic factorization engine.
//!
//! Every monoid family implements [`PresentedMonoid`]; the engine only talks
//! to that contract. Monoids are presented reduced (the identity is the only
//! unit), so a factorization is a plain multiset of atom ids.

mod factorization;
mod invariants;
mod progression;
mod scan;

use std::fmt;

use serde_json::Value;

use crate::error::{Error, Result};

pub use factorization::{distance, Factorization, LengthSet};
pub use invariants::{
    catenary, catenary_of, delta, elasticity, factorizations, is_interval, lengths, tame_degree, TameBound,
};
pub use progression::{fit_aamp, fit_aap, AapFit};
pub use scan::{par_map, rho_k, scan, union_k, InvariantReport, KReport, ScanOptions, Witnessed};

pub type AtomId = usize;

/// A monoid element in the engine's universal encoding.
///
/// Flat vectors carry numbers, coordinate vectors, multiplicity vectors and
/// sorted finite sets; tuples carry elements of product monoids.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Element {
    Flat(Vec<u64>),
    Tuple(Vec<Element>),
}

impl Element {
    pub fn int(n: u64) -> Self {
        Element::Flat(vec![n])
    }

    pub fn as_flat(&self) -> Result<&[u64]> {
        match self {
            Element::Flat(v) => Ok(v),
            Element::Tuple(_) => Err(Error::InvalidElement(format!("expected a flat element, got {self}"))),
        }
    }

    pub fn as_tuple(&self) -> Result<&[Element]> {
        match self {
            Element::Tuple(v) => Ok(v),
            Element::Flat(_) => Err(Error::InvalidElement(format!("expected a tuple element, got {self}"))),
        }
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Flat(v) => {
                let parts: Vec<String> = v.iter().map(u64::to_string).collect();
                write!(f, "[{}]", parts.join(","))
            }
            Element::Tuple(v) => {
                let parts: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// The contract each monoid family satisfies.
///
/// `atoms()` is the adapter's atom table; ids index into it. For truncated
/// adapters it lists the atoms inside the adapter's bounded universe.
pub trait PresentedMonoid: Send + Sync {
    /// Short description of the family and its bounds.
    fn describe(&self) -> String;

    fn identity(&self) -> Element;

    fn is_cancellative(&self) -> bool;

    fn atoms(&self) -> &[Element];

    /// Checks that `a` is an element of the monoid inside the adapter's scope.
    fn validate(&self, a: &Element) -> Result<()>;

    /// Ids of the atoms `u` with `u | a`, ascending.
    fn atoms_dividing(&self, a: &Element) -> Vec<AtomId>;

    /// Every `b` with `u·b = a` for the atom `u`.
    fn cofactors(&self, a: &Element, atom: AtomId) -> Vec<Element>;

    /// Termination measure: strictly smaller on every proper cofactor.
    fn element_size(&self, a: &Element) -> u64;

    fn multiply(&self, a: &Element, b: &Element) -> Result<Element>;

    /// All elements with `element_size ≤ bound`, identity included, in a
    /// deterministic order.
    fn elements_up_to(&self, bound: u64) -> Result<Vec<Element>>;

    /// A size bound covering every element whose length set contains `k`,
    /// when the family can certify one.
    fn uk_witness_bound(&self, _k: u64) -> Option<u64> {
        None
    }

    fn parse_element(&self, literal: &Value) -> Result<Element>;

    fn render_element(&self, a: &Element) -> Value;

    fn is_identity(&self, a: &Element) -> bool {
        *a == self.identity()
    }

    /// Multiplies out a factorization.
    fn evaluate(&self, z: &Factorization) -> Result<Element> {
        let atoms = self.atoms();
        let mut acc = self.identity();
        for (id, mult) in z.iter() {
            let u = atoms.get(id).ok_or(Error::NotAnAtom(id))?;
            for _ in 0..mult {
                acc = self.multiply(&acc, u)?;
            }
        }
        Ok(acc)
    }
}

//! Finite abelian groups in invariant-factor form.
//!
//! A group `C_{n_1} ⊕ … ⊕ C_{n_r}` with `1 < n_1 | n_2 | … | n_r` is stored as
//! its factor list; the trivial group has no factors. Elements are coordinate
//! vectors and carry no reference to their group, so every binary operation
//! takes the group as context and validates its arguments.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Default cap on the group order for anything that enumerates elements.
pub const DEFAULT_ORDER_CAP: u64 = 10_000;

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AbelianGroup {
    factors: Vec<u64>,
}

/// An element of a finite abelian group, ordered lexicographically by coordinates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct GroupElement {
    pub coords: Vec<u64>,
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        0
    } else {
        a / gcd(a, b) * b
    }
}

fn prime_powers(mut n: u64) -> Vec<(u64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            let mut e = 0;
            while n.is_multiple_of(p) {
                n /= p;
                e += 1;
            }
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

impl AbelianGroup {
    /// Builds the invariant-factor form of `⊕ C_{m_i}`.
    ///
    /// Each cyclic factor is split into its primary components, which are then
    /// recombined largest-with-largest; the result is the unique divisor chain.
    pub fn new(moduli: &[i64]) -> Result<Self> {
        let mut by_prime: BTreeMap<u64, Vec<u32>> = BTreeMap::new();
        for &m in moduli {
            if m <= 0 {
                return Err(Error::InvalidModulus(m));
            }
            for (p, e) in prime_powers(m as u64) {
                by_prime.entry(p).or_default().push(e);
            }
        }
        let rank = by_prime.values().map(Vec::len).max().unwrap_or(0);
        let mut factors = vec![1u64; rank];
        for (p, exps) in by_prime.iter_mut() {
            exps.sort_unstable_by(|a, b| b.cmp(a));
            // the i-th largest power goes into the i-th largest factor
            for (i, &e) in exps.iter().enumerate() {
                factors[rank - 1 - i] *= p.pow(e);
            }
        }
        Ok(AbelianGroup { factors })
    }

    pub fn trivial() -> Self {
        AbelianGroup { factors: Vec::new() }
    }

    pub fn cyclic(n: u64) -> Self {
        Self::new(&[n as i64]).expect("positive modulus")
    }

    pub fn factors(&self) -> &[u64] {
        &self.factors
    }

    pub fn rank(&self) -> usize {
        self.factors.len()
    }

    pub fn order(&self) -> u64 {
        self.factors.iter().product()
    }

    pub fn exponent(&self) -> u64 {
        self.factors.last().copied().unwrap_or(1)
    }

    pub fn is_cyclic(&self) -> bool {
        self.factors.len() <= 1
    }

    /// True when the order is a prime power (the trivial group counts).
    pub fn is_p_group(&self) -> bool {
        prime_powers(self.order()).len() <= 1
    }

    /// `1 + Σ (n_i − 1)`, the standard lower bound for the Davenport constant.
    pub fn davenport_lower_bound(&self) -> u64 {
        1 + self.factors.iter().map(|n| n - 1).sum::<u64>()
    }

    pub fn check_cap(&self, cap: u64) -> Result<()> {
        let order = self.order();
        if order > cap {
            return Err(Error::CapExceeded { order, cap });
        }
        Ok(())
    }

    pub fn zero(&self) -> GroupElement {
        GroupElement { coords: vec![0; self.rank()] }
    }

    /// Builds an element, reducing coordinates modulo the factors.
    pub fn element(&self, coords: &[i64]) -> Result<GroupElement> {
        if coords.len() != self.rank() {
            return Err(Error::GroupMismatch(format!(
                "element has {} coordinates, group {} has rank {}",
                coords.len(),
                self,
                self.rank()
            )));
        }
        let coords = coords.iter().zip(&self.factors).map(|(&c, &n)| c.rem_euclid(n as i64) as u64).collect();
        Ok(GroupElement { coords })
    }

    pub fn validate(&self, g: &GroupElement) -> Result<()> {
        if g.coords.len() != self.rank() {
            return Err(Error::GroupMismatch(format!("element {g} does not belong to {self}")));
        }
        if let Some((c, n)) = g.coords.iter().zip(&self.factors).find(|(c, n)| *c >= *n) {
            return Err(Error::GroupMismatch(format!("coordinate {c} not reduced modulo {n} in {g}")));
        }
        Ok(())
    }

    pub fn add(&self, g: &GroupElement, h: &GroupElement) -> Result<GroupElement> {
        self.validate(g)?;
        self.validate(h)?;
        Ok(self.add_unchecked(g, h))
    }

    pub(crate) fn add_unchecked(&self, g: &GroupElement, h: &GroupElement) -> GroupElement {
        let coords = g.coords.iter().zip(&h.coords).zip(&self.factors).map(|((a, b), n)| (a + b) % n).collect();
        GroupElement { coords }
    }

    pub fn neg(&self, g: &GroupElement) -> GroupElement {
        let coords = g.coords.iter().zip(&self.factors).map(|(&c, &n)| (n - c % n) % n).collect();
        GroupElement { coords }
    }

    /// `k · g`.
    pub fn scale(&self, g: &GroupElement, k: u64) -> GroupElement {
        let coords =
            g.coords.iter().zip(&self.factors).map(|(&c, &n)| ((c as u128 * k as u128) % n as u128) as u64).collect();
        GroupElement { coords }
    }

    /// Least `k ≥ 1` with `k·g = 0`.
    pub fn order_of(&self, g: &GroupElement) -> u64 {
        g.coords.iter().zip(&self.factors).map(|(&c, &n)| n / gcd(c, n)).fold(1, lcm)
    }

    /// Position of `g` in the lexicographic enumeration.
    pub fn index_of(&self, g: &GroupElement) -> usize {
        g.coords.iter().zip(&self.factors).fold(0usize, |acc, (&c, &n)| acc * n as usize + c as usize)
    }

    pub fn element_at(&self, mut index: usize) -> GroupElement {
        let mut coords = vec![0; self.rank()];
        for (slot, &n) in coords.iter_mut().zip(&self.factors).rev() {
            *slot = (index % n as usize) as u64;
            index /= n as usize;
        }
        GroupElement { coords }
    }

    /// All elements in lexicographic coordinate order.
    pub fn enumerate_elements(&self, cap: u64) -> Result<Vec<GroupElement>> {
        self.check_cap(cap)?;
        Ok((0..self.order() as usize).map(|i| self.element_at(i)).collect())
    }
}

impl fmt::Display for AbelianGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "C1");
        }
        let parts: Vec<String> = self.factors.iter().map(|n| format!("C{n}")).collect();
        write!(f, "{}", parts.join("+"))
    }
}

impl fmt::Display for GroupElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.coords.iter().map(u64::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Every group of order at most `max_order`, in invariant-factor form.
pub fn groups_up_to(max_order: u64) -> Vec<AbelianGroup> {
    fn extend(prefix: &mut Vec<u64>, product: u64, max: u64, out: &mut Vec<AbelianGroup>) {
        out.push(AbelianGroup { factors: prefix.clone() });
        let last = prefix.last().copied();
        let mut next = last.unwrap_or(2);
        while product * next <= max {
            if last.is_none_or(|l| next % l == 0) {
                prefix.push(next);
                extend(prefix, product * next, max, out);
                prefix.pop();
            }
            next += 1;
        }
    }
    let mut out = Vec::new();
    extend(&mut Vec::new(), 1, max_order, &mut out);
    out.sort_by(|a, b| (a.order(), &a.factors).cmp(&(b.order(), &b.factors)));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn element_orders(g: &AbelianGroup) -> Vec<u64> {
        let mut orders: Vec<u64> = g
            .enumerate_elements(DEFAULT_ORDER_CAP)
            .unwrap()
            .iter()
            .map(|e| {
                // repeated addition, independent of the gcd formula
                let mut acc = e.clone();
                let mut k = 1;
                while acc != g.zero() {
                    acc = g.add(&acc, e).unwrap();
                    k += 1;
                }
                k
            })
            .collect();
        orders.sort_unstable();
        orders
    }

    /// Element-order multiset of `⊕ C_{m_i}` computed over the raw product.
    fn raw_element_orders(moduli: &[u64]) -> Vec<u64> {
        let total: u64 = moduli.iter().product();
        let mut orders = Vec::new();
        for mut idx in 0..total {
            let mut ord = 1;
            for &m in moduli.iter().rev() {
                let c = idx % m;
                idx /= m;
                ord = lcm(ord, m / gcd(c, m));
            }
            orders.push(ord);
        }
        orders.sort_unstable();
        orders
    }

    #[test]
    fn canonical_forms() {
        assert_eq!(AbelianGroup::new(&[2, 2]).unwrap().factors(), &[2, 2]);
        assert_eq!(AbelianGroup::new(&[1]).unwrap().factors(), &[] as &[u64]);
        assert_eq!(AbelianGroup::new(&[2, 3]).unwrap().factors(), &[6]);
        assert_eq!(AbelianGroup::new(&[4, 6]).unwrap().factors(), &[2, 12]);
        assert_eq!(AbelianGroup::new(&[]).unwrap(), AbelianGroup::trivial());
        assert_eq!(AbelianGroup::new(&[0]), Err(Error::InvalidModulus(0)));
        assert_eq!(AbelianGroup::new(&[3, -1]), Err(Error::InvalidModulus(-1)));
    }

    #[test]
    fn crt_merge_preserves_element_orders() {
        for moduli in [vec![2, 3], vec![4, 6], vec![2, 2, 3], vec![6, 10], vec![9, 3, 2]] {
            let signed: Vec<i64> = moduli.iter().map(|&m| m as i64).collect();
            let g = AbelianGroup::new(&signed).unwrap();
            assert_eq!(element_orders(&g), raw_element_orders(&moduli), "{moduli:?}");
        }
    }

    #[test]
    fn arithmetic_examples() {
        let c3 = AbelianGroup::cyclic(3);
        let one = c3.element(&[1]).unwrap();
        let two = c3.element(&[2]).unwrap();
        assert_eq!(c3.add(&one, &two).unwrap(), c3.zero());
        assert_eq!(c3.add(&one, &c3.zero()).unwrap(), one);
        assert_eq!(c3.neg(&one), two);
        assert_eq!(c3.neg(&c3.zero()), c3.zero());
        let c4 = AbelianGroup::cyclic(4);
        assert_eq!(c4.neg(&c4.element(&[3]).unwrap()), c4.element(&[1]).unwrap());

        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        let sum = v4.add(&v4.element(&[1, 0]).unwrap(), &v4.element(&[0, 1]).unwrap()).unwrap();
        assert_eq!(sum, v4.element(&[1, 1]).unwrap());

        let c6 = AbelianGroup::cyclic(6);
        assert_eq!(c6.order_of(&c6.zero()), 1);
        assert_eq!(c6.order_of(&c6.element(&[1]).unwrap()), 6);
        assert_eq!(c6.order_of(&c6.element(&[3]).unwrap()), 2);
    }

    #[test]
    fn mismatched_elements_are_rejected() {
        let c3 = AbelianGroup::cyclic(3);
        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        let g = v4.element(&[1, 1]).unwrap();
        assert!(matches!(c3.add(&g, &g), Err(Error::GroupMismatch(_))));
        let bad = GroupElement { coords: vec![5] };
        assert!(c3.validate(&bad).is_err());
    }

    #[test]
    fn enumeration() {
        let c2 = AbelianGroup::cyclic(2);
        let elems = c2.enumerate_elements(DEFAULT_ORDER_CAP).unwrap();
        assert_eq!(elems, vec![c2.zero(), c2.element(&[1]).unwrap()]);
        let triv = AbelianGroup::trivial();
        assert_eq!(triv.enumerate_elements(10).unwrap(), vec![GroupElement { coords: vec![] }]);
        let v4 = AbelianGroup::new(&[2, 2]).unwrap();
        assert_eq!(v4.enumerate_elements(10).unwrap().len(), 4);
        assert!(matches!(
            AbelianGroup::cyclic(20).enumerate_elements(10),
            Err(Error::CapExceeded { order: 20, cap: 10 })
        ));
    }

    #[test]
    fn group_listing() {
        let groups = groups_up_to(8);
        let names: Vec<String> = groups.iter().map(ToString::to_string).collect();
        assert_eq!(names, ["C1", "C2", "C3", "C2+C2", "C4", "C5", "C6", "C7", "C2+C2+C2", "C2+C4", "C8"]);
    }

    fn arb_group() -> impl Strategy<Value = AbelianGroup> {
        prop::collection::vec(1i64..7, 0..3).prop_map(|m| AbelianGroup::new(&m).unwrap())
    }

    proptest! {
        #[test]
        fn inverse_and_order(g in arb_group(), seed in any::<u64>()) {
            let x = g.element_at((seed % g.order()) as usize);
            prop_assert_eq!(g.add(&x, &g.neg(&x)).unwrap(), g.zero());
            prop_assert_eq!(g.order() % g.order_of(&x), 0);
            prop_assert_eq!(g.scale(&x, g.order_of(&x)), g.zero());
            prop_assert_eq!(g.element_at(g.index_of(&x)), x);
        }

        #[test]
        fn canonical_fixed_point(g in arb_group()) {
            let again: Vec<i64> = g.factors().iter().map(|&n| n as i64).collect();
            prop_assert_eq!(AbelianGroup::new(&again).unwrap(), g.clone());
            prop_assert!(g.factors().windows(2).all(|w| w[1] % w[0] == 0));
            prop_assert!(g.factors().iter().all(|&n| n >= 2));
            let elems = g.enumerate_elements(DEFAULT_ORDER_CAP).unwrap();
            prop_assert_eq!(elems.len() as u64, g.order());
            prop_assert!(elems.windows(2).all(|w| w[0] < w[1]));
        }
    }
}

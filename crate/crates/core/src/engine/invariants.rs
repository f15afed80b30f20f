use std::collections::{BTreeSet, HashMap};
use std::rc::Rc;

use crate::error::{Error, Result};
use crate::rational::Rational;

use super::{distance, AtomId, Element, Factorization, LengthSet, PresentedMonoid};

type FactorMemo = HashMap<(Element, AtomId), Rc<Vec<Factorization>>>;

fn factorizations_from<M: PresentedMonoid + ?Sized>(
    m: &M,
    a: &Element,
    min_atom: AtomId,
    memo: &mut FactorMemo,
) -> Rc<Vec<Factorization>> {
    if m.is_identity(a) {
        return Rc::new(vec![Factorization::empty()]);
    }
    let key = (a.clone(), min_atom);
    if let Some(hit) = memo.get(&key) {
        return Rc::clone(hit);
    }
    // atoms are taken in nondecreasing id order, so each multiset is built
    // along its canonical path; the set only collapses repeats that
    // non-cancellative cofactors can produce
    let mut found = BTreeSet::new();
    for u in m.atoms_dividing(a).into_iter().filter(|&u| u >= min_atom) {
        for b in m.cofactors(a, u) {
            for z in factorizations_from(m, &b, u, memo).iter() {
                found.insert(z.with_atom(u));
            }
        }
    }
    let out = Rc::new(found.into_iter().collect::<Vec<_>>());
    memo.insert(key, Rc::clone(&out));
    out
}

/// `Z(a)`, sorted. Empty only for a non-identity element with no
/// decomposition into the adapter's atoms.
pub fn factorizations<M: PresentedMonoid + ?Sized>(m: &M, a: &Element) -> Result<Vec<Factorization>> {
    m.validate(a)?;
    let mut memo = FactorMemo::new();
    let out = factorizations_from(m, a, 0, &mut memo);
    Ok(out.as_ref().clone())
}

fn lengths_memo<M: PresentedMonoid + ?Sized>(m: &M, a: &Element, memo: &mut HashMap<Element, LengthSet>) -> LengthSet {
    if m.is_identity(a) {
        return LengthSet::new([0]);
    }
    if let Some(hit) = memo.get(a) {
        return hit.clone();
    }
    let mut acc = Vec::new();
    for u in m.atoms_dividing(a) {
        for b in m.cofactors(a, u) {
            acc.extend(lengths_memo(m, &b, memo).iter().map(|l| l + 1));
        }
    }
    let out = LengthSet::new(acc);
    memo.insert(a.clone(), out.clone());
    out
}

/// `L(a)`, computed by a memoized recursion over cofactors without listing
/// factorizations.
pub fn lengths<M: PresentedMonoid + ?Sized>(m: &M, a: &Element) -> Result<LengthSet> {
    m.validate(a)?;
    Ok(lengths_memo(m, a, &mut HashMap::new()))
}

/// Catenary degree of a set of factorizations of one element: the largest
/// edge of a minimax spanning tree of the complete distance graph.
pub fn catenary_of(zs: &[Factorization]) -> u64 {
    let n = zs.len();
    if n <= 1 {
        return 0;
    }
    // Prim's algorithm on the dense graph
    let mut in_tree = vec![false; n];
    let mut best = vec![u64::MAX; n];
    best[0] = 0;
    let mut bottleneck = 0;
    for _ in 0..n {
        let v = (0..n).filter(|&i| !in_tree[i]).min_by_key(|&i| best[i]).expect("a vertex remains");
        in_tree[v] = true;
        bottleneck = bottleneck.max(best[v]);
        for w in 0..n {
            if !in_tree[w] {
                best[w] = best[w].min(distance(&zs[v], &zs[w]));
            }
        }
    }
    bottleneck
}

/// `c(a)`.
pub fn catenary<M: PresentedMonoid + ?Sized>(m: &M, a: &Element) -> Result<u64> {
    Ok(catenary_of(&factorizations(m, a)?))
}

/// `Δ(L)`: gaps between consecutive elements.
pub fn delta(l: &LengthSet) -> BTreeSet<u64> {
    l.as_slice().windows(2).map(|w| w[1] - w[0]).collect()
}

/// `ρ(L) = max L⁺ / min L⁺`, and `1` when `L` has no positive element.
pub fn elasticity(l: &LengthSet) -> Rational {
    let mut positive = l.iter().filter(|&x| x > 0);
    match (positive.next(), l.max()) {
        (Some(lo), Some(hi)) => Rational::new(hi, lo).expect("positive denominator"),
        _ => Rational::integer(1),
    }
}

/// `L = [min L, max L]`; the empty set counts as an interval.
pub fn is_interval(l: &LengthSet) -> bool {
    match (l.min(), l.max()) {
        (Some(lo), Some(hi)) => (hi - lo + 1) as usize == l.len(),
        _ => true,
    }
}

/// A scoped lower bound for the local tame degree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TameBound {
    pub value: u64,
    /// Element attaining `value`, if any.
    pub witness: Option<Element>,
    /// Always true: elements outside the scope can only raise the degree.
    pub partial: bool,
}

/// Lower bound for `t(H, u)` over the given elements.
pub fn tame_degree<M: PresentedMonoid + ?Sized>(m: &M, atom: AtomId, scope: &[Element]) -> Result<TameBound> {
    if atom >= m.atoms().len() {
        return Err(Error::NotAnAtom(atom));
    }
    let mut bound = TameBound { value: 0, witness: None, partial: true };
    for a in scope {
        let zs = factorizations(m, a)?;
        let with_u: Vec<&Factorization> = zs.iter().filter(|z| z.contains(atom)).collect();
        if with_u.is_empty() {
            continue;
        }
        for z in &zs {
            let nearest = with_u.iter().map(|w| distance(z, w)).min().unwrap_or(0);
            if nearest > bound.value {
                bound.value = nearest;
                bound.witness = Some(a.clone());
            }
        }
    }
    Ok(bound)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::engine::distance;

    /// Least N such that the ≤N distance graph is connected, by union-find.
    fn catenary_by_threshold(zs: &[Factorization]) -> u64 {
        fn find(p: &mut Vec<usize>, x: usize) -> usize {
            if p[x] != x {
                let r = find(p, p[x]);
                p[x] = r;
            }
            p[x]
        }
        let n = zs.len();
        if n <= 1 {
            return 0;
        }
        let max_d =
            (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).map(|(i, j)| distance(&zs[i], &zs[j])).max().unwrap();
        for threshold in 0..=max_d {
            let mut parent: Vec<usize> = (0..n).collect();
            for i in 0..n {
                for j in i + 1..n {
                    if distance(&zs[i], &zs[j]) <= threshold {
                        let (a, b) = (find(&mut parent, i), find(&mut parent, j));
                        parent[a] = b;
                    }
                }
            }
            let root = find(&mut parent, 0);
            if (0..n).all(|i| find(&mut parent, i) == root) {
                return threshold;
            }
        }
        unreachable!()
    }

    #[test]
    fn minimax_tree_matches_threshold_connectivity() {
        use proptest::prelude::*;
        use proptest::test_runner::TestRunner;
        let mut runner = TestRunner::default();
        let strat = prop::collection::vec(prop::collection::vec(0u64..3, 4), 1..9);
        runner
            .run(&strat, |dense| {
                let mut zs: Vec<Factorization> = dense.iter().map(|d| Factorization::from_dense(d)).collect();
                zs.sort();
                zs.dedup();
                prop_assert_eq!(catenary_of(&zs), catenary_by_threshold(&zs));
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn set_invariants() {
        assert_eq!(delta(&LengthSet::new([2, 3])), BTreeSet::from([1]));
        assert!(delta(&LengthSet::new([5])).is_empty());
        assert!(delta(&LengthSet::default()).is_empty());
        assert_eq!(delta(&LengthSet::new([2, 4, 7])), BTreeSet::from([2, 3]));

        assert_eq!(elasticity(&LengthSet::new([2, 7])), Rational::new(7, 2).unwrap());
        assert_eq!(elasticity(&LengthSet::new([0])), Rational::integer(1));
        assert_eq!(elasticity(&LengthSet::new([3])), Rational::integer(1));

        assert!(is_interval(&LengthSet::new([2, 3, 4])));
        assert!(!is_interval(&LengthSet::new([2, 4])));
        assert!(is_interval(&LengthSet::new([9])));
    }
}

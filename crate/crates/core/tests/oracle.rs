mod common;

use std::collections::BTreeMap;

use common::oracle;
use facto::engine::{factorizations, lengths, Element, PresentedMonoid};
use facto::families::{AffineMonoid, BlockMonoid, NumericalMonoid};
use facto::group::{AbelianGroup, DEFAULT_ORDER_CAP};

/// Engine elements of `B(G)` re-encoded as oracle count vectors.
fn oracle_vector(m: &BlockMonoid, moduli: &[u64], a: &Element) -> Vec<u64> {
    let mut v = vec![0; moduli.iter().product::<u64>() as usize];
    for (g, k) in m.sequence_of(a).unwrap().entries() {
        v[oracle::index_of(moduli, &g.coords)] += k;
    }
    v
}

fn check_block(moduli: &[u64], bound: u64) -> usize {
    let group = AbelianGroup::new(&moduli.iter().map(|&n| n as i64).collect::<Vec<_>>()).unwrap();
    let m = BlockMonoid::full(&group, DEFAULT_ORDER_CAP).unwrap();
    let atoms = oracle::block_atoms(moduli);
    assert_eq!(atoms.len(), m.atoms().len(), "atom count over {moduli:?}");

    let engine: BTreeMap<Vec<u64>, Element> =
        m.elements_up_to(bound).unwrap().into_iter().map(|a| (oracle_vector(&m, moduli, &a), a)).collect();
    let expected = oracle::zero_sum_vectors(moduli, bound);
    assert_eq!(engine.len(), expected.len(), "scope size over {moduli:?}");
    for v in &expected {
        let a = &engine[v];
        let zs = factorizations(&m, a).unwrap();
        assert_eq!(zs.len() as u64, oracle::count_solutions(&atoms, v), "{moduli:?} {v:?}");
        let l: Vec<u64> = lengths(&m, a).unwrap().iter().collect();
        let want: Vec<u64> = oracle::solution_lengths(&atoms, v).into_iter().collect();
        assert_eq!(l, want, "{moduli:?} {v:?}");
    }
    expected.len()
}

#[test]
fn block_counts_match_nested_loops() {
    assert!(check_block(&[3], 12) > 100);
    assert!(check_block(&[2, 2], 12) > 400);
    assert!(check_block(&[4], 12) > 400);
    check_block(&[1], 10);
    check_block(&[2], 10);
    check_block(&[5], 8);
}

#[test]
fn numerical_counts_match_nested_loops() {
    for gens in [vec![2, 3], vec![3, 5, 7], vec![4, 6, 9], vec![5, 7, 8, 9]] {
        let m = NumericalMonoid::new(&gens).unwrap();
        let atoms: Vec<Vec<u64>> = oracle::numerical_atoms(&gens).into_iter().map(|g| vec![g]).collect();
        assert_eq!(m.atoms().len(), atoms.len());
        for n in 0..=60 {
            let count = oracle::count_solutions(&atoms, &[n]);
            let a = Element::int(n);
            if count == 0 {
                assert!(m.validate(&a).is_err() || factorizations(&m, &a).unwrap().is_empty(), "{gens:?} {n}");
                continue;
            }
            assert_eq!(factorizations(&m, &a).unwrap().len() as u64, count, "{gens:?} {n}");
            let l: Vec<u64> = lengths(&m, &a).unwrap().iter().collect();
            assert_eq!(l, oracle::solution_lengths(&atoms, &[n]).into_iter().collect::<Vec<_>>());
        }
    }
}

#[test]
fn affine_counts_match_nested_loops() {
    let gens = vec![vec![1, 1], vec![1, 2], vec![2, 1], vec![3, 3]];
    let m = AffineMonoid::new(&gens).unwrap();
    let atoms = vec![vec![1, 1], vec![1, 2], vec![2, 1]];
    assert_eq!(m.atom_vectors().len(), 3);
    for a in m.elements_up_to(14).unwrap() {
        let v = a.as_flat().unwrap().to_vec();
        assert_eq!(factorizations(&m, &a).unwrap().len() as u64, oracle::count_solutions(&atoms, &v), "{v:?}");
    }
}

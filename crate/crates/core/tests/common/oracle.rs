//! Brute-force reference computations sharing no code with the engine.

#![allow(dead_code)]

/// Elements of `Z/n1 ⊕ … ⊕ Z/nr` as coordinate vectors in mixed-radix order,
/// first coordinate most significant.
pub fn group_elements(moduli: &[u64]) -> Vec<Vec<u64>> {
    let mut out = vec![Vec::new()];
    for &n in moduli {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                (0..n).map(move |c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn index_of(moduli: &[u64], coords: &[u64]) -> usize {
    moduli.iter().zip(coords).fold(0, |acc, (&n, &c)| acc * n as usize + c as usize)
}

fn is_zero_sum(moduli: &[u64], elements: &[Vec<u64>], counts: &[u64]) -> bool {
    (0..moduli.len()).all(|j| {
        let s: u64 = elements.iter().zip(counts).map(|(g, &c)| g[j] * c).sum();
        s.is_multiple_of(moduli[j])
    })
}

/// Every count vector `v ≤ bound` componentwise with total at most `max_total`.
fn count_vectors(dims: usize, max_total: u64, bound: Option<&[u64]>) -> Vec<Vec<u64>> {
    fn rec(i: usize, left: u64, cur: &mut Vec<u64>, bound: Option<&[u64]>, out: &mut Vec<Vec<u64>>, dims: usize) {
        if i == dims {
            out.push(cur.clone());
            return;
        }
        let cap = bound.map_or(left, |b| b[i].min(left));
        for c in 0..=cap {
            cur.push(c);
            rec(i + 1, left - c, cur, bound, out, dims);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(0, max_total, &mut Vec::new(), bound, &mut out, dims);
    out
}

/// Zero-sum count vectors over the whole group with total length at most `bound`.
pub fn zero_sum_vectors(moduli: &[u64], bound: u64) -> Vec<Vec<u64>> {
    let elements = group_elements(moduli);
    count_vectors(elements.len(), bound, None).into_iter().filter(|v| is_zero_sum(moduli, &elements, v)).collect()
}

/// Minimal zero-sum count vectors; their length never exceeds the group order.
pub fn block_atoms(moduli: &[u64]) -> Vec<Vec<u64>> {
    let elements = group_elements(moduli);
    let order = elements.len() as u64;
    zero_sum_vectors(moduli, order)
        .into_iter()
        .filter(|v| v.iter().sum::<u64>() > 0)
        .filter(|v| {
            count_vectors(v.len(), order, Some(v)).iter().all(|w| {
                let total: u64 = w.iter().sum();
                total == 0 || w == v || !is_zero_sum(moduli, &elements, w)
            })
        })
        .collect()
}

/// Number of ways to write `target` as a nonnegative combination of `atoms`.
pub fn count_solutions(atoms: &[Vec<u64>], target: &[u64]) -> u64 {
    fn rec(atoms: &[Vec<u64>], target: &mut Vec<u64>) -> u64 {
        let Some((first, rest)) = atoms.split_first() else {
            return u64::from(target.iter().all(|&t| t == 0));
        };
        let mut total = 0;
        let mut taken = 0u64;
        loop {
            total += rec(rest, target);
            if first.iter().zip(target.iter()).any(|(&a, &t)| a > t) {
                break;
            }
            for (t, &a) in target.iter_mut().zip(first) {
                *t -= a;
            }
            taken += 1;
        }
        for (t, &a) in target.iter_mut().zip(first) {
            *t += a * taken;
        }
        total
    }
    rec(atoms, &mut target.to_vec())
}

/// Sets of lengths of `target` over `atoms`, by the same nested loops.
pub fn solution_lengths(atoms: &[Vec<u64>], target: &[u64]) -> std::collections::BTreeSet<u64> {
    fn rec(atoms: &[Vec<u64>], target: &mut Vec<u64>, len: u64, out: &mut std::collections::BTreeSet<u64>) {
        let Some((first, rest)) = atoms.split_first() else {
            if target.iter().all(|&t| t == 0) {
                out.insert(len);
            }
            return;
        };
        let mut taken = 0u64;
        loop {
            rec(rest, target, len + taken, out);
            if first.iter().zip(target.iter()).any(|(&a, &t)| a > t) {
                break;
            }
            for (t, &a) in target.iter_mut().zip(first) {
                *t -= a;
            }
            taken += 1;
        }
        for (t, &a) in target.iter_mut().zip(first) {
            *t += a * taken;
        }
    }
    let mut out = std::collections::BTreeSet::new();
    rec(atoms, &mut target.to_vec(), 0, &mut out);
    out
}

/// Minimal generators of the numerical monoid generated by `gens`.
pub fn numerical_atoms(gens: &[u64]) -> Vec<u64> {
    let mut sorted = gens.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    sorted
        .iter()
        .copied()
        .filter(|&g| {
            let others: Vec<Vec<u64>> = sorted.iter().filter(|&&h| h != g).map(|&h| vec![h]).collect();
            count_solutions(&others, &[g]) == 0
        })
        .collect()
}

/// `M(a)` in the box `[1,b]²` of `ℕ² ∪ {0}`, by iterating sumsets of non-units.
pub fn box_m(b: u64, a: (u64, u64)) -> Option<u64> {
    let non_units: Vec<(u64, u64)> = (1..=b).flat_map(|x| (1..=b).map(move |y| (x, y))).collect();
    let divides = |c: (u64, u64)| c == a || non_units.iter().any(|&d| (a.0 + d.0, a.1 + d.1) == c);
    let mut products: std::collections::BTreeSet<(u64, u64)> = non_units.iter().copied().collect();
    for n in 1..=b {
        if products.iter().all(|&c| divides(c)) {
            return Some(n);
        }
        products = products
            .iter()
            .flat_map(|&c| non_units.iter().map(move |&d| (c.0 + d.0, c.1 + d.1)))
            .filter(|&(x, y)| x <= b && y <= b)
            .collect();
    }
    None
}

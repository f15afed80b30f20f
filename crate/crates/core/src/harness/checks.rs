use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::engine::{
    catenary_of, delta, distance, factorizations, fit_aamp, is_interval, lengths, par_map, rho_k, scan, union_k,
    Element, InvariantReport, LengthSet, PresentedMonoid, ScanOptions,
};
use crate::error::Result;
use crate::families::{
    lg_atoms, lg_member, lg_members, non_cancellative_witness, sumset, verify_transfer, AffineMonoid, BlockMonoid,
    BoxPrimary, Descriptor, KrullMonoid, KrullPresentation, LengthSystem, NumericalMonoid, PowerMonoid0, ProductMonoid,
};
use crate::group::{groups_up_to, AbelianGroup};
use crate::rational::Rational;
use crate::zerosum::{davenport, Sequence};

use super::{Outcome, Params, RunContext};

fn block(moduli: &[i64], ctx: &RunContext) -> Result<BlockMonoid> {
    let group = AbelianGroup::new(moduli)?;
    let m = BlockMonoid::full(&group, ctx.cap_order)?;
    Ok(match ctx.drop_atom {
        Some(i) => m.without_atom(i % m.atoms().len()),
        None => m,
    })
}

/// The default block scope `|B| ≤ max(9, 2·D(G))`.
fn block_bound(m: &BlockMonoid) -> u64 {
    9.max(2 * m.max_atom_len())
}

fn all_lengths<M: PresentedMonoid + ?Sized>(m: &M, elements: &[Element], workers: usize) -> Result<Vec<LengthSet>> {
    par_map(workers, elements, |a| lengths(m, a)).into_iter().collect()
}

fn rational(r: &Rational) -> Value {
    json!({"num": r.num(), "den": r.den()})
}

fn full_scan<M: PresentedMonoid + ?Sized>(m: &M, bound: u64, ctx: &RunContext) -> Result<InvariantReport> {
    scan(m, &ScanOptions { bound, workers: ctx.workers, ks: Vec::new(), catenary: true })
}

/// `L(a)` for every element of `B(G)` up to the bound must satisfy `accept`.
fn scan_length_sets(
    m: &BlockMonoid,
    bound: u64,
    ctx: &RunContext,
    accept: impl Fn(&LengthSet) -> bool,
) -> Result<(u64, BTreeSet<LengthSet>, Option<Value>)> {
    let elements = m.elements_up_to(bound)?;
    let ls = all_lengths(m, &elements, ctx.workers)?;
    let mut seen = BTreeSet::new();
    for (a, l) in elements.iter().zip(&ls) {
        if !accept(l) {
            let counterexample = json!({
                "group": m.group().to_string(),
                "element": m.render_element(a),
                "lengths": l,
            });
            return Ok((elements.len() as u64, seen, Some(counterexample)));
        }
        seen.insert(l.clone());
    }
    Ok((elements.len() as u64, seen, None))
}

/// The explicit non-half-factorial element for `|G| ≥ 3`: `g^n (−g)^n` with
/// `ord(g) = n ≥ 3`, or `(e₀e₁e₂)²` in an elementary 2-group.
fn carlitz_witness(group: &AbelianGroup, cap: u64) -> Result<(Sequence, LengthSet)> {
    let n = group.exponent();
    if n >= 3 {
        let g = group
            .enumerate_elements(cap)?
            .into_iter()
            .find(|g| group.order_of(g) == n)
            .expect("an element of maximal order exists");
        let s = Sequence::new([(g.clone(), n), (group.neg(&g), n)]);
        Ok((s, LengthSet::new([2, n])))
    } else {
        let unit = |i: usize| {
            let coords: Vec<i64> = (0..group.rank()).map(|j| i64::from(i == j)).collect();
            group.element(&coords)
        };
        let (e1, e2) = (unit(0)?, unit(1)?);
        let e0 = group.add(&e1, &e2)?;
        let s = Sequence::new([(e0, 2), (e1, 2), (e2, 2)]);
        Ok((s, LengthSet::new([2, 3])))
    }
}

pub(super) fn carlitz(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let bound: u64 = p.get("bound")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        let group = m.group().clone();
        if group.order() <= 2 {
            scopes.push(format!("B({group}) with |B| <= {bound}"));
            let (count, _, bad) = scan_length_sets(&m, bound, ctx, |l| l.len() == 1)?;
            if let Some(c) = bad {
                return Ok(Outcome::fail(
                    scopes.join("; "),
                    "half-factoriality for |G| <= 2",
                    Value::Array(witnesses),
                    c,
                ));
            }
            witnesses.push(json!({"group": group.to_string(), "half_factorial": true, "elements": count}));
        } else {
            scopes.push(format!("explicit witness in B({group})"));
            let (s, expected) = carlitz_witness(&group, ctx.cap_order)?;
            let a = m.element_of(&s)?;
            let l = lengths(&m, &a)?;
            if l != expected {
                return Ok(Outcome::fail(
                    scopes.join("; "),
                    "non-singleton witness for |G| >= 3",
                    Value::Array(witnesses),
                    json!({"group": group.to_string(), "element": s.to_json(), "lengths": l, "expected": expected}),
                ));
            }
            witnesses.push(json!({"group": group.to_string(), "element": s.to_json(), "lengths": l}));
        }
    }
    Ok(Outcome::pass(
        scopes.join("; "),
        "length sets are singletons for |G| <= 2 and a non-singleton one exists for |G| >= 3",
        Value::Array(witnesses),
    ))
}

pub(super) fn sys2(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let bound: u64 = p.get("bound")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let (count, seen, bad) = scan_length_sets(&m, bound, ctx, |l| lg_member(Descriptor::C3, l.as_slice()))?;
        if let Some(c) = bad {
            return Ok(Outcome::fail(scopes.join("; "), "membership in y + 2k + [0,k]", Value::Array(witnesses), c));
        }
        witnesses.push(json!({"group": m.group().to_string(), "elements": count, "distinct_length_sets": seen}));
    }
    Ok(Outcome::pass(scopes.join("; "), "every scoped length set has the form y + 2k + [0,k]", Value::Array(witnesses)))
}

fn iv(lo: u64, hi: u64) -> Vec<u64> {
    (lo..=hi).collect()
}

fn sum_of(parts: &[(&[u64], u64)]) -> Vec<u64> {
    parts.iter().fold(vec![0], |acc, (set, times)| (0..*times).fold(acc, |acc, _| sumset(&acc, set)))
}

pub(super) fn thm62_atoms(p: &mut Params, _ctx: &RunContext) -> Result<Outcome> {
    let cap: u64 = p.get("cap")?;
    let closure_cap: u64 = p.get("closure_cap")?;
    let scope = format!("member sets with max <= {cap} (atoms), <= {closure_cap} (generation, containment)");
    let expected: [(Descriptor, Vec<Vec<u64>>); 3] = [
        (Descriptor::C4, vec![vec![1], iv(2, 3), iv(3, 5), vec![2, 4]]),
        (Descriptor::C23, vec![vec![1], iv(2, 3), iv(3, 5), iv(3, 6), iv(4, 8), vec![2, 4]]),
        (Descriptor::C33, vec![vec![1], iv(2, 3), iv(2, 4), iv(2, 5), iv(3, 7)]),
    ];
    let mut witnesses = serde_json::Map::new();
    for (desc, want) in &expected {
        let got: BTreeSet<Vec<u64>> = lg_atoms(*desc, cap)?.into_iter().collect();
        let want: BTreeSet<Vec<u64>> = want.iter().cloned().collect();
        if got != want {
            return Ok(Outcome::fail(
                scope,
                "atom lists",
                Value::Object(witnesses),
                json!({"descriptor": desc.name(), "computed": got, "expected": want}),
            ));
        }
        witnesses.insert(desc.name().to_string(), json!(got));
    }

    // generator identities, re-derived by evaluating sumsets
    let one: &[u64] = &[1];
    let mut identities = 0u64;
    let mut bad = None;
    let mut check = |name: &str, lhs: Vec<u64>, rhs: Vec<u64>| {
        identities += 1;
        if lhs != rhs && bad.is_none() {
            bad = Some(json!({"identity": name, "lhs": lhs, "rhs": rhs}));
        }
    };
    for y in 0..=4u64 {
        for k in 0..=4u64 {
            let even: Vec<u64> = (0..=k).map(|nu| y + 2 * k + 2 * nu).collect();
            check("y+2k+[0,k] = y{1} + k[2,3]", iv(y + 2 * k, y + 3 * k), sum_of(&[(one, y), (&iv(2, 3), k)]));
            check("y+2k+{2v} = y{1} + k{2,4}", even, sum_of(&[(one, y), (&[2, 4], k)]));
            let t = k / 2;
            let shifted = iv(y + k + 1, y + 2 * k + 1);
            if k == 0 {
                check("y+1 = (y+1){1}", shifted, sum_of(&[(one, y + 1)]));
            } else if k % 2 == 1 {
                check(
                    "y+k+1+[0,k] = y{1} + [2,3] + t{2,4}",
                    shifted,
                    sum_of(&[(one, y), (&iv(2, 3), 1), (&[2, 4], t)]),
                );
            } else {
                check(
                    "y+k+1+[0,k] = y{1} + [3,5] + t{2,4}",
                    shifted,
                    sum_of(&[(one, y), (&iv(3, 5), 1), (&[2, 4], t - 1)]),
                );
            }
            check("y+2k+[0,3k] = y{1} + k[2,5]", iv(y + 2 * k, y + 5 * k), sum_of(&[(one, y), (&iv(2, 5), k)]));
            check(
                "y+2k+2+[0,3k+2] = y{1} + [2,4] + k[2,5]",
                iv(y + 2 * k + 2, y + 5 * k + 4),
                sum_of(&[(one, y), (&iv(2, 4), 1), (&iv(2, 5), k)]),
            );
            if k >= 1 {
                check(
                    "y+2k+1+[0,3k+1] = y{1} + [3,7] + (k-1)[2,5]",
                    iv(y + 2 * k + 1, y + 5 * k + 2),
                    sum_of(&[(one, y), (&iv(3, 7), 1), (&iv(2, 5), k - 1)]),
                );
            }
        }
    }
    if let Some(c) = bad {
        return Ok(Outcome::fail(scope, "generator identities", Value::Object(witnesses), c));
    }
    witnesses.insert("identities_checked".into(), json!(identities));

    // every member up to the closure cap is a sum of atoms
    for desc in Descriptor::ALL {
        let m = LengthSystem::new(desc, closure_cap)?;
        for a in m.elements_up_to(closure_cap)? {
            if lengths(&m, &a)?.is_empty() {
                return Ok(Outcome::fail(
                    scope,
                    "generation by the atoms",
                    Value::Object(witnesses),
                    json!({"descriptor": desc.name(), "member": m.render_element(&a)}),
                ));
            }
        }
    }
    for l in lg_members(Descriptor::C4, closure_cap) {
        if !lg_member(Descriptor::C23, &l) {
            return Ok(Outcome::fail(
                scope,
                "L(C4) inside L(C2^3)",
                Value::Object(witnesses),
                json!({"member_of_c4_only": l}),
            ));
        }
    }
    witnesses.insert("c4_members_checked".into(), json!(lg_members(Descriptor::C4, closure_cap).len()));
    Ok(Outcome::pass(
        scope,
        "atom lists equal; generator identities hold; members are sums of atoms; L(C4) is contained in L(C2^3)",
        Value::Object(witnesses),
    ))
}

pub(super) fn thm62_crosscheck(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let moduli: Vec<i64> = p.get("group")?;
    let desc: Descriptor = p.get::<String>("descriptor")?.parse()?;
    let bound: u64 = p.get("bound")?;
    let m = block(&moduli, ctx)?;
    let scope = format!("B({}) with |B| <= {bound}", m.group());
    let (count, seen, bad) = scan_length_sets(&m, bound, ctx, |l| lg_member(desc, l.as_slice()))?;
    let witnesses = json!({"elements": count, "distinct_length_sets": seen});
    match bad {
        Some(c) => Ok(Outcome::fail(scope, format!("membership in L({desc})"), witnesses, c)),
        None => Ok(Outcome::pass(scope, format!("every scoped length set lies in L({desc})"), witnesses)),
    }
}

pub(super) fn dav_formula(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let max_order: u64 = p.get("max_order")?;
    let scope = format!("p-groups and groups of rank <= 2 with order <= {max_order}");
    let mut witnesses = Vec::new();
    for group in groups_up_to(max_order) {
        if !(group.rank() <= 2 || group.is_p_group()) {
            continue;
        }
        let d = davenport(&group, ctx.cap_order)?;
        let formula = group.davenport_lower_bound();
        let cyclic_ok = !group.is_cyclic() || d == group.order();
        if d != formula || !cyclic_ok {
            return Ok(Outcome::fail(
                scope,
                "Davenport constant formula",
                Value::Array(witnesses),
                json!({"group": group.to_string(), "davenport": d, "formula": formula}),
            ));
        }
        witnesses.push(json!({"group": group.to_string(), "davenport": d}));
    }
    Ok(Outcome::pass(scope, "D(G) = 1 + sum(n_i - 1) on every listed group", Value::Array(witnesses)))
}

pub(super) fn rho_dav(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        let d = m.max_atom_len();
        let bound = block_bound(&m);
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let report = full_scan(&m, bound, ctx)?;
        let half_d = Rational::new(d, 2)?;
        let fail = |what: &str, c: Value| {
            Ok(Outcome::fail(scopes.join("; "), what.to_string(), Value::Array(witnesses.clone()), c))
        };
        if let Some(w) = report.max_elasticity.as_ref().filter(|w| w.value > half_d) {
            return fail(
                "rho(L) <= D(G)/2",
                json!({"group": m.group().to_string(), "element": m.render_element(&w.witness), "elasticity": rational(&w.value)}),
            );
        }
        if let Some((c, a)) = report.catenary.iter().next_back().filter(|(&c, _)| c > d) {
            return fail(
                "c(a) <= D(G)",
                json!({"group": m.group().to_string(), "element": m.render_element(a), "catenary": c}),
            );
        }
        // equality at U(−U) for a longest atom U
        let u = m.atom_sequences().iter().find(|s| s.len() == d).expect("atom table is nonempty").clone();
        let a = m.element_of(&u.concat(&u.negate(m.group())))?;
        let l = lengths(&m, &a)?;
        let rho = crate::engine::elasticity(&l);
        if rho != half_d {
            return fail(
                "rho(L(U(-U))) = D(G)/2",
                json!({"group": m.group().to_string(), "atom": u.to_json(), "lengths": l}),
            );
        }
        witnesses.push(json!({
            "group": m.group().to_string(),
            "davenport": d,
            "elements": report.element_count,
            "max_elasticity": report.max_elasticity.as_ref().map(|w| rational(&w.value)),
            "max_catenary": report.catenary.keys().next_back(),
            "equality_atom": u.to_json(),
            "equality_lengths": l,
        }));
    }
    Ok(Outcome::pass(
        scopes.join("; "),
        "scoped rho(L) <= D(G)/2 with equality at U(-U), and scoped c(a) <= D(G)",
        Value::Array(witnesses),
    ))
}

pub(super) fn rho2k(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let cases: Vec<(Vec<i64>, u64)> = p.get("cases")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for (moduli, k) in &cases {
        let m = block(moduli, ctx)?;
        let d = m.max_atom_len();
        let bound = 2 * k * d;
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let (rho, exact) = rho_k(&m, 2 * k, bound, ctx.workers)?;
        let entry = json!({"group": m.group().to_string(), "k": k, "rho": rho, "exact": exact, "expected": k * d});
        if !exact || rho != Some(k * d) {
            return Ok(Outcome::fail(scopes.join("; "), "rho_2k(G) = k D(G)", Value::Array(witnesses), entry));
        }
        witnesses.push(entry);
    }
    Ok(Outcome::pass(scopes.join("; "), "certified rho_2k(G) = k D(G) on every case", Value::Array(witnesses)))
}

pub(super) fn uk_interval(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let ks: Vec<u64> = p.get("ks")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        for &k in &ks {
            let bound = k * m.max_atom_len();
            scopes.push(format!("U_{k}(B({})) with |B| <= {bound}", m.group()));
            let (u, exact) = union_k(&m, k, bound, ctx.workers)?;
            let entry = json!({"group": m.group().to_string(), "k": k, "union": u, "exact": exact});
            if !exact || !is_interval(&u) {
                return Ok(Outcome::fail(scopes.join("; "), "U_k(G) is an interval", Value::Array(witnesses), entry));
            }
            witnesses.push(entry);
        }
    }
    Ok(Outcome::pass(scopes.join("; "), "every certified U_k(G) is an interval", Value::Array(witnesses)))
}

/// Per-element distance and catenary inequalities; `gap` is 2 for
/// cancellative monoids and 1 otherwise.
fn dist_scan<M: PresentedMonoid + ?Sized>(
    m: &M,
    bound: u64,
    catenary_cap: Option<u64>,
    ctx: &RunContext,
) -> Result<std::result::Result<Value, Value>> {
    let gap = if m.is_cancellative() { 2 } else { 1 };
    let elements = m.elements_up_to(bound)?;
    let per_element = par_map(ctx.workers, &elements, |a| -> Result<(u64, Option<Value>)> {
        let zs = factorizations(m, a)?;
        let mut pairs = 0;
        for (i, z) in zs.iter().enumerate() {
            for w in &zs[i + 1..] {
                pairs += 1;
                let d = distance(z, w);
                if d < gap + z.len().abs_diff(w.len()) {
                    return Ok((
                        pairs,
                        Some(json!({
                            "element": m.render_element(a),
                            "factorizations": [z.to_string(), w.to_string()],
                            "distance": d,
                        })),
                    ));
                }
            }
        }
        let l: LengthSet = zs.iter().map(|z| z.len()).collect();
        let c = catenary_of(&zs);
        if let Some(&max_delta) = delta(&l).iter().next_back() {
            if c < gap + max_delta {
                return Ok((pairs, Some(json!({"element": m.render_element(a), "catenary": c, "lengths": l}))));
            }
        }
        if catenary_cap.is_some_and(|cap| c > cap) {
            return Ok((pairs, Some(json!({"element": m.render_element(a), "catenary": c, "bound": catenary_cap}))));
        }
        Ok((pairs, None))
    });
    let mut pairs = 0;
    for r in per_element {
        let (n, bad) = r?;
        pairs += n;
        if let Some(mut c) = bad {
            c["monoid"] = json!(m.describe());
            return Ok(Err(c));
        }
    }
    Ok(Ok(json!({
        "monoid": m.describe(),
        "cancellative": m.is_cancellative(),
        "elements": elements.len(),
        "factorization_pairs": pairs,
    })))
}

pub(super) fn dist_ineqs(_p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let num = |g: &[u64]| -> Result<Box<dyn PresentedMonoid>> { Ok(Box::new(NumericalMonoid::new(g)?)) };
    let c3 = AbelianGroup::new(&[3])?;
    let krull = KrullPresentation::new(
        c3.clone(),
        [("p".to_string(), c3.element(&[1])?), ("q".to_string(), c3.element(&[2])?)],
    )?;
    let mut battery: Vec<(Box<dyn PresentedMonoid>, u64, Option<u64>)> = Vec::new();
    for moduli in [&[3][..], &[2, 2], &[4]] {
        let m = block(moduli, ctx)?;
        let (bound, d) = (block_bound(&m), m.max_atom_len());
        battery.push((Box::new(m), bound, Some(d)));
    }
    battery.push((num(&[2, 3])?, 60, None));
    battery.push((num(&[3, 5, 7])?, 60, None));
    battery.push((Box::new(AffineMonoid::new(&[vec![1, 1], vec![1, 2], vec![2, 1]])?), 12, None));
    battery.push((Box::new(KrullMonoid::new(krull, ctx.cap_order)?), 9, None));
    battery.push((Box::new(BoxPrimary::new(6)?), 12, None));
    battery.push((Box::new(ProductMonoid::new(vec![num(&[2, 3])?, num(&[3, 5])?])?), 20, None));
    battery.push((Box::new(LengthSystem::new(Descriptor::C33, 20)?), 20, None));
    battery.push((Box::new(PowerMonoid0::new(8)?), 8, None));
    battery.push((Box::new(LengthSystem::new(Descriptor::C4, 20)?), 20, None));

    let scope =
        battery.iter().map(|(m, b, _)| format!("{} (size <= {b})", m.describe())).collect::<Vec<_>>().join("; ");
    let mut witnesses = Vec::new();
    for (m, bound, cap) in &battery {
        match dist_scan(m.as_ref(), *bound, *cap, ctx)? {
            Ok(w) => witnesses.push(w),
            Err(c) => {
                return Ok(Outcome::fail(scope, "distance and catenary inequalities", Value::Array(witnesses), c))
            }
        }
    }
    p_set_battery(_p, &battery);
    Ok(Outcome::pass(
        scope,
        "for z != z' with the same product: d(z,z') >= 2 + ||z|-|z'|| (cancellative) resp. 1 + ||z|-|z'||; \
         c(a) >= 2 + max Delta(L(a)) resp. 1 + max Delta(L(a)); c(a) <= D(G) on block monoids",
        Value::Array(witnesses),
    ))
}

fn p_set_battery(p: &mut Params, battery: &[(Box<dyn PresentedMonoid>, u64, Option<u64>)]) {
    p.set(
        "battery",
        Value::Array(battery.iter().map(|(m, b, _)| json!({"monoid": m.describe(), "bound": b})).collect()),
    );
}

pub(super) fn min_delta_ca(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        let d = m.max_atom_len();
        let bound = block_bound(&m);
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let report = full_scan(&m, bound, ctx)?;
        let delta_one = report.delta.get(&1);
        let ca_two = report.catenary.get(&2);
        let needs_delta = m.group().order() >= 3;
        let needs_ca = d >= 4;
        let entry = json!({
            "group": m.group().to_string(),
            "davenport": d,
            "delta_1_witness": delta_one.map(|a| m.render_element(a)),
            "catenary_2_witness": ca_two.map(|a| m.render_element(a)),
            "observed_delta": report.delta.keys().collect::<Vec<_>>(),
            "observed_catenary": report.catenary.keys().collect::<Vec<_>>(),
        });
        if (needs_delta && delta_one.is_none()) || (needs_ca && ca_two.is_none()) {
            return Ok(Outcome::fail(
                scopes.join("; "),
                "witnesses for min Delta, min Ca",
                Value::Array(witnesses),
                entry,
            ));
        }
        witnesses.push(entry);
    }
    Ok(Outcome::pass(
        scopes.join("; "),
        "1 in Delta(G) for |G| >= 3 and 2 in Ca(G) for D(G) >= 4, by explicit witnesses; both are the least possible values",
        Value::Array(witnesses),
    ))
}

pub(super) fn transfer_lengths(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let random: usize = p.get("random")?;
    let max_primes: usize = p.get("max_primes")?;
    let max_order: u64 = p.get("max_order")?;
    let bound: u64 = p.get("bound")?;
    p.set("seed", json!(ctx.seed));

    let named = |group: &AbelianGroup, classes: &[&[i64]]| -> Result<KrullPresentation> {
        let primes = classes
            .iter()
            .enumerate()
            .map(|(i, c)| Ok((format!("p{}", i + 1), group.element(c)?)))
            .collect::<Result<Vec<_>>>()?;
        KrullPresentation::new(group.clone(), primes)
    };
    let c1 = AbelianGroup::trivial();
    let c2 = AbelianGroup::new(&[2])?;
    let c3 = AbelianGroup::new(&[3])?;
    let v4 = AbelianGroup::new(&[2, 2])?;
    let mut battery = vec![
        named(&c3, &[&[0]])?,
        named(&c1, &[&[], &[]])?,
        named(&c3, &[&[1], &[2]])?,
        named(&c2, &[&[1], &[1]])?,
        named(&v4, &[&[0, 1], &[1, 0], &[1, 1], &[1, 1]])?,
    ];
    let groups = groups_up_to(max_order);
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    for _ in 0..random {
        let group = groups[rng.gen_range(0..groups.len())].clone();
        let count = rng.gen_range(1..=max_primes);
        let primes: Vec<(String, _)> = (0..count)
            .map(|i| (format!("p{}", i + 1), group.element_at(rng.gen_range(0..group.order() as usize))))
            .collect();
        battery.push(KrullPresentation::new(group, primes)?);
    }

    let scope = format!(
        "{} fixed and {random} random presentations (|P| <= {max_primes}, |G| <= {max_order}), |a| <= {bound}",
        battery.len() - random
    );
    let reports = par_map(ctx.workers, &battery, |pres| verify_transfer(pres, bound, ctx.cap_order));
    let mut witnesses = Vec::new();
    for (pres, r) in battery.iter().zip(reports) {
        let r = r?;
        let classes: serde_json::Map<String, Value> =
            pres.primes().iter().map(|(n, g)| (n.clone(), json!(g.coords))).collect();
        let entry = json!({
            "group": pres.group().to_string(),
            "primes": classes,
            "elements": r.elements_checked,
            "splits": r.splits_checked,
            "sequences": r.sequences_checked,
        });
        if let Some(c) = r.counterexample {
            return Ok(Outcome::fail(
                scope,
                "transfer properties",
                Value::Array(witnesses),
                json!({"presentation": entry, "failure": c}),
            ));
        }
        witnesses.push(entry);
    }
    Ok(Outcome::pass(
        scope,
        "L_H(a) = L_B(beta(a)) for every scoped a; T1 on zero-sum sequences; T2 on all splits; atoms map to atoms",
        Value::Array(witnesses),
    ))
}

pub(super) fn product_unions(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let g1: Vec<u64> = p.get("h1")?;
    let g2: Vec<u64> = p.get("h2")?;
    let max_k: u64 = p.get("max_k")?;
    let (h1, h2) = (NumericalMonoid::new(&g1)?, NumericalMonoid::new(&g2)?);
    let prod = ProductMonoid::new(vec![Box::new(h1.clone()), Box::new(h2.clone())])?;
    let scope = format!("{} with certified bounds, k <= {max_k}", prod.describe());

    let certified = |m: &dyn PresentedMonoid, k: u64| -> Result<(LengthSet, bool)> {
        if k == 0 {
            return Ok((LengthSet::new([0]), true));
        }
        let bound = m.uk_witness_bound(k).unwrap_or(0);
        union_k(m, k, bound, ctx.workers)
    };
    let mut witnesses = Vec::new();
    for k in 1..=max_k {
        let (u, exact) = certified(&prod, k)?;
        let mut composed = LengthSet::default();
        let mut rho_composed = 0;
        for nu in 0..=k {
            let (a, ea) = certified(&h1, k - nu)?;
            let (b, eb) = certified(&h2, nu)?;
            if !(ea && eb) {
                return Ok(Outcome::fail(
                    scope,
                    "certified factor unions",
                    Value::Array(witnesses),
                    json!({"k": k, "nu": nu}),
                ));
            }
            composed = composed.union(&a.sumset(&b));
            rho_composed = rho_composed.max(LengthSet::max(&a).unwrap_or(0) + LengthSet::max(&b).unwrap_or(0));
        }
        let entry = json!({"k": k, "union": u, "composed": composed, "rho": LengthSet::max(&u), "rho_composed": rho_composed, "exact": exact});
        if !exact || u != composed || LengthSet::max(&u) != Some(rho_composed) {
            return Ok(Outcome::fail(scope, "product union formulas", Value::Array(witnesses), entry));
        }
        witnesses.push(entry);
    }
    Ok(Outcome::pass(
        scope,
        "U_k(H1 x H2) = union over nu of U_{k-nu}(H1) + U_nu(H2), and rho_k is the maximum of the sums",
        Value::Array(witnesses),
    ))
}

pub(super) fn primary_uk(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let bound: u64 = p.get("bound")?;
    let h = BoxPrimary::new(bound)?;
    let scope = h.describe();
    let elements = h.elements_up_to(2 * bound)?;
    let ls = all_lengths(&h, &elements, ctx.workers)?;
    let mut witnesses = serde_json::Map::new();
    let mut union = LengthSet::default();
    for (a, l) in elements.iter().zip(&ls).filter(|(_, l)| l.contains(2)) {
        for m in l.iter().filter(|&m| m >= 2 && m <= bound) {
            witnesses.entry(m.to_string()).or_insert_with(|| h.render_element(a));
        }
        union = union.union(l);
    }
    let target = LengthSet::interval(2, bound);
    let witnesses = json!({"union_2": union, "witnesses": witnesses});
    if !target.is_subset(&union) {
        return Ok(Outcome::fail(scope, format!("[2,{bound}] inside U_2"), witnesses.clone(), witnesses));
    }
    Ok(Outcome::partial(
        scope,
        format!("[2,{bound}] is contained in U_2 (the full claim U_2 = N_>=2 needs unbounded elements)"),
        witnesses,
    ))
}

pub(super) fn primary_m(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let bound: u64 = p.get("bound")?;
    let max_c: u64 = p.get("max_coordinate")?;
    let h = BoxPrimary::new(bound)?;
    let scope = format!("{} at elements with coordinates <= {max_c}", h.describe());
    let elements: Vec<Element> =
        (1..=max_c).flat_map(|x| (1..=max_c).map(move |y| Element::Flat(vec![x, y]))).collect();
    let results = par_map(ctx.workers, &elements, |a| -> Result<(LengthSet, crate::families::MValue)> {
        Ok((lengths(&h, a)?, h.m_of(a)?))
    });
    let mut largest_gap = 0;
    for (a, r) in elements.iter().zip(results) {
        let (l, m) = r?;
        let xy = a.as_flat()?;
        let sup = LengthSet::max(&l).unwrap_or(0);
        if !m.certified || m.value != xy[0].max(xy[1]) + 1 || sup > m.value {
            return Ok(Outcome::fail(
                scope,
                "sup L(a) <= M(a)",
                json!({}),
                json!({"element": h.render_element(a), "lengths": l, "m": m.value, "certified": m.certified}),
            ));
        }
        largest_gap = largest_gap.max(m.value - sup);
    }
    Ok(Outcome::pass(
        scope,
        "M(a) = max(a1,a2) + 1 certified inside the box and sup L(a) <= M(a)",
        json!({"elements": elements.len(), "max_slack": largest_gap}),
    ))
}

pub(super) fn power_delta(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let n: u64 = p.get("max_value")?;
    let m = PowerMonoid0::new(n)?;
    let scope = format!("{}, all {} elements", m.describe(), 1u64 << n);
    // catenary degrees are reported on small scopes only; lengths decide the claim
    let catenary = n <= 10;
    let report = scan(&m, &ScanOptions { bound: n, workers: ctx.workers, ks: Vec::new(), catenary })?;
    let needed = [1u64, 2];
    let found: Vec<Value> = needed
        .iter()
        .filter_map(|d| {
            report
                .delta
                .get(d)
                .map(|a| json!({"distance": d, "element": m.render_element(a), "lengths": lengths(&m, a).ok()}))
        })
        .collect();
    let missing: Vec<u64> = needed.iter().copied().filter(|d| !report.delta.contains_key(d)).collect();
    let nc = non_cancellative_witness(n);
    let witnesses = json!({
        "delta": found,
        "observed_delta": report.delta.keys().collect::<Vec<_>>(),
        "observed_catenary": catenary.then(|| report.catenary.keys().collect::<Vec<_>>()),
        "non_cancellative": nc.as_ref().map(|[a, b, c]| json!({"a": a, "b": b, "c": c, "sum": sumset(a, c)})),
    });
    if !missing.is_empty() || nc.is_none() {
        let counterexample = json!({
            "missing_distances": missing,
            "observed_delta": report.delta.keys().collect::<Vec<_>>(),
            "exhaustive": true,
            "non_cancellative_found": nc.is_some(),
        });
        return Ok(Outcome::fail(
            scope,
            "exhaustive scan: some of {1,2} are absent from the observed Delta, or no A+C = B+C with A != B exists",
            witnesses,
            counterexample,
        ));
    }
    Ok(Outcome::partial(
        scope,
        "{1,2} is contained in Delta (lower bound only; the full set is N) and A+C = B+C with A != B",
        witnesses,
    ))
}

/// Least `M ≤ max_bound` for which `l` is an AAMP with difference in `ds`.
fn aamp_bound(l: &LengthSet, ds: &BTreeSet<u64>, max_bound: u64) -> Result<Option<(u64, u64, Vec<u64>)>> {
    for bound in 0..=max_bound {
        for &d in ds {
            let inner: Vec<u64> = (1..d).collect();
            for mask in 0u64..1 << inner.len() {
                let period: BTreeSet<u64> = [0, d]
                    .into_iter()
                    .chain(inner.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &x)| x))
                    .collect();
                if fit_aamp(l, d, &period, bound)? {
                    return Ok(Some((bound, d, period.into_iter().collect())));
                }
            }
        }
    }
    Ok(None)
}

pub(super) fn aamp_structure(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let max_bound: u64 = p.get("max_bound")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        let bound = block_bound(&m);
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let elements = m.elements_up_to(bound)?;
        let sets: BTreeSet<LengthSet> = all_lengths(&m, &elements, ctx.workers)?.into_iter().collect();
        let mut ds: BTreeSet<u64> = sets.iter().flat_map(delta).collect();
        ds.insert(1);
        let mut observed = 0;
        for l in sets.iter().filter(|l| !l.is_empty()) {
            match aamp_bound(l, &ds, max_bound)? {
                Some((b, _, _)) => observed = observed.max(b),
                None => {
                    return Ok(Outcome::fail(
                        scopes.join("; "),
                        "AAMP structure",
                        Value::Array(witnesses),
                        json!({"group": m.group().to_string(), "lengths": l, "differences": ds, "max_bound": max_bound}),
                    ))
                }
            }
        }
        witnesses.push(json!({
            "group": m.group().to_string(),
            "distinct_length_sets": sets.len(),
            "differences": ds,
            "least_bound": observed,
        }));
    }
    Ok(Outcome::partial(
        scopes.join("; "),
        format!("every scoped length set is an AAMP with difference in the observed Delta or 1 and bound <= {max_bound}; no uniform bound is certified beyond the scope"),
        Value::Array(witnesses),
    ))
}

fn is_interval_set(s: &BTreeSet<u64>) -> bool {
    is_interval(&s.iter().copied().collect())
}

pub(super) fn delta_ca_interval(p: &mut Params, ctx: &RunContext) -> Result<Outcome> {
    let groups: Vec<Vec<i64>> = p.get("groups")?;
    let mut witnesses = Vec::new();
    let mut scopes = Vec::new();
    for moduli in &groups {
        let m = block(moduli, ctx)?;
        let bound = block_bound(&m);
        scopes.push(format!("B({}) with |B| <= {bound}", m.group()));
        let report = full_scan(&m, bound, ctx)?;
        let ds: BTreeSet<u64> = report.delta.keys().copied().collect();
        let cs: BTreeSet<u64> = report.catenary.keys().copied().collect();
        let entry = json!({"group": m.group().to_string(), "observed_delta": ds, "observed_catenary": cs});
        if !is_interval_set(&ds) || !is_interval_set(&cs) {
            return Ok(Outcome::fail(scopes.join("; "), "observed sets are intervals", Value::Array(witnesses), entry));
        }
        witnesses.push(entry);
    }
    Ok(Outcome::partial(
        scopes.join("; "),
        "the observed scoped Delta and Ca are intervals; the full sets are not bounded by any certified scope",
        Value::Array(witnesses),
    ))
}

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::Result;
use crate::rational::Rational;

use super::{catenary_of, delta, elasticity, factorizations, lengths, Element, LengthSet, PresentedMonoid};

/// Maps `f` over `items` on a pool of `workers` threads; output order follows input order.
pub fn par_map<T, R, F>(workers: usize, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    if workers <= 1 {
        return items.iter().map(f).collect();
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(workers).build().expect("thread pool");
    pool.install(|| items.par_iter().map(f).collect())
}

#[derive(Clone, Debug)]
pub struct ScanOptions {
    pub bound: u64,
    pub workers: usize,
    pub ks: Vec<u64>,
    /// Catenary degrees need full factorization sets; off means lengths only.
    pub catenary: bool,
}

impl Default for ScanOptions {
    fn default() -> Self {
        ScanOptions { bound: 9, workers: 1, ks: Vec::new(), catenary: true }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witnessed<T> {
    pub value: T,
    pub witness: Element,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct KReport {
    pub k: u64,
    pub union: LengthSet,
    pub rho: Option<u64>,
    pub exact: bool,
}

/// Invariants observed over every element of a bounded scope.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvariantReport {
    pub scope: String,
    pub bound: u64,
    pub element_count: u64,
    /// Non-identity elements without a factorization inside the adapter's universe.
    pub undecided: Vec<Element>,
    /// Each observed distance with the first element exhibiting it.
    pub delta: BTreeMap<u64, Element>,
    /// Each observed positive catenary degree with its first witness.
    pub catenary: BTreeMap<u64, Element>,
    pub catenary_computed: bool,
    pub elasticities: BTreeSet<Rational>,
    pub max_elasticity: Option<Witnessed<Rational>>,
    pub unions: Vec<KReport>,
}

impl InvariantReport {
    pub fn to_json<M: PresentedMonoid + ?Sized>(&self, m: &M) -> Value {
        let rational = |r: &Rational| json!({"num": r.num(), "den": r.den()});
        let witnesses = |map: &BTreeMap<u64, Element>| {
            Value::Array(map.iter().map(|(v, w)| json!({"value": v, "witness": m.render_element(w)})).collect())
        };
        json!({
            "scope": self.scope,
            "bound": self.bound,
            "element_count": self.element_count,
            "undecided": self.undecided.iter().map(|a| m.render_element(a)).collect::<Vec<_>>(),
            "delta": self.delta.keys().collect::<Vec<_>>(),
            "delta_witnesses": witnesses(&self.delta),
            "catenary_computed": self.catenary_computed,
            "catenary_degrees": self.catenary.keys().collect::<Vec<_>>(),
            "catenary_witnesses": witnesses(&self.catenary),
            "elasticities": self.elasticities.iter().map(rational).collect::<Vec<_>>(),
            "max_elasticity": self.max_elasticity.as_ref().map(|w| json!({
                "value": rational(&w.value),
                "witness": m.render_element(&w.witness),
            })),
            "unions": self.unions.iter().map(|u| json!({
                "k": u.k,
                "union": u.union,
                "rho": u.rho,
                "exact": u.exact,
            })).collect::<Vec<_>>(),
        })
    }
}

struct ElementData {
    lengths: LengthSet,
    catenary: Option<u64>,
}

fn examine<M: PresentedMonoid + ?Sized>(m: &M, a: &Element, with_catenary: bool) -> Result<ElementData> {
    if with_catenary {
        let zs = factorizations(m, a)?;
        Ok(ElementData { lengths: zs.iter().map(|z| z.len()).collect(), catenary: Some(catenary_of(&zs)) })
    } else {
        Ok(ElementData { lengths: lengths(m, a)?, catenary: None })
    }
}

fn union_from(data: &[(Element, LengthSet)], k: u64) -> LengthSet {
    data.iter().filter(|(_, l)| l.contains(k)).fold(LengthSet::default(), |acc, (_, l)| acc.union(l))
}

fn certified<M: PresentedMonoid + ?Sized>(m: &M, k: u64, bound: u64) -> bool {
    m.uk_witness_bound(k).is_some_and(|b| b <= bound)
}

/// Scans every element of size at most `opts.bound`.
pub fn scan<M: PresentedMonoid + ?Sized>(m: &M, opts: &ScanOptions) -> Result<InvariantReport> {
    let elements = m.elements_up_to(opts.bound)?;
    let results = par_map(opts.workers, &elements, |a| examine(m, a, opts.catenary));

    let mut report = InvariantReport {
        scope: format!("{} with size <= {}", m.describe(), opts.bound),
        bound: opts.bound,
        element_count: 0,
        undecided: Vec::new(),
        delta: BTreeMap::new(),
        catenary: BTreeMap::new(),
        catenary_computed: opts.catenary,
        elasticities: BTreeSet::new(),
        max_elasticity: None,
        unions: Vec::new(),
    };
    let mut all_lengths = Vec::with_capacity(elements.len());
    for (a, data) in elements.iter().zip(results) {
        let data = data?;
        all_lengths.push((a.clone(), data.lengths.clone()));
        if m.is_identity(a) {
            continue;
        }
        report.element_count += 1;
        if data.lengths.is_empty() {
            report.undecided.push(a.clone());
            continue;
        }
        for d in delta(&data.lengths) {
            report.delta.entry(d).or_insert_with(|| a.clone());
        }
        if let Some(c) = data.catenary.filter(|&c| c > 0) {
            report.catenary.entry(c).or_insert_with(|| a.clone());
        }
        let rho = elasticity(&data.lengths);
        report.elasticities.insert(rho);
        if report.max_elasticity.as_ref().is_none_or(|w| rho > w.value) {
            report.max_elasticity = Some(Witnessed { value: rho, witness: a.clone() });
        }
    }
    for &k in &opts.ks {
        let union = union_from(&all_lengths, k);
        report.unions.push(KReport { k, rho: LengthSet::max(&union), exact: certified(m, k, opts.bound), union });
    }
    Ok(report)
}

/// `U_k` over the elements of size at most `bound`, with its exactness flag.
pub fn union_k<M: PresentedMonoid + ?Sized>(m: &M, k: u64, bound: u64, workers: usize) -> Result<(LengthSet, bool)> {
    let elements = m.elements_up_to(bound)?;
    let ls = par_map(workers, &elements, |a| lengths(m, a));
    let data = elements.into_iter().zip(ls).map(|(a, l)| l.map(|l| (a, l))).collect::<Result<Vec<_>>>()?;
    Ok((union_from(&data, k), certified(m, k, bound)))
}

/// `ρ_k = max U_k` with the same exactness flag; `None` when no scoped
/// element has `k` in its length set.
pub fn rho_k<M: PresentedMonoid + ?Sized>(m: &M, k: u64, bound: u64, workers: usize) -> Result<(Option<u64>, bool)> {
    let (u, exact) = union_k(m, k, bound, workers)?;
    Ok((LengthSet::max(&u), exact))
}

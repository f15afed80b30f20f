//! Desk-scale verification of checkable statements about factorizations.
//!
//! Each check runs on an explicit finite scope and reports PASS, FAIL or
//! PARTIAL. PARTIAL marks claims about infinite objects where only one
//! direction (or a lower bound) can be observed; the report says which.

mod checks;

use std::time::{Duration, Instant};

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::error::{Error, Result};
use crate::group::DEFAULT_ORDER_CAP;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Status {
    Pass,
    Partial,
    Fail,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Partial => "PARTIAL",
            Status::Fail => "FAIL",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Value,
    pub status: Status,
    pub scope: String,
    /// What exactly was established; for PARTIAL, the verified direction.
    pub verified: String,
    pub witnesses: Value,
    /// Present exactly when the status is FAIL.
    pub counterexample: Option<Value>,
    #[serde(skip)]
    pub elapsed: Duration,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckInfo {
    pub id: &'static str,
    pub description: &'static str,
    pub defaults: Value,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunContext {
    pub workers: usize,
    pub seed: u64,
    pub cap_order: u64,
    /// Deletes the atom with this index (mod the table size) from every block
    /// monoid a check builds; used to confirm that checks detect corruption.
    pub drop_atom: Option<usize>,
}

impl Default for RunContext {
    fn default() -> Self {
        RunContext { workers: 1, seed: 0, cap_order: DEFAULT_ORDER_CAP, drop_atom: None }
    }
}

/// Parameters of one run: defaults overlaid with the caller's values.
pub(crate) struct Params {
    id: &'static str,
    merged: Map<String, Value>,
}

impl Params {
    fn new(info: &CheckInfo, overrides: &Value) -> Result<Self> {
        let mut merged = match &info.defaults {
            Value::Object(m) => m.clone(),
            _ => Map::new(),
        };
        match overrides {
            Value::Null => {}
            Value::Object(m) => {
                for (k, v) in m {
                    if !merged.contains_key(k) {
                        return Err(Error::InvalidParameter(format!("{}: unknown parameter {k:?}", info.id)));
                    }
                    merged.insert(k.clone(), v.clone());
                }
            }
            other => {
                return Err(Error::InvalidParameter(format!("{}: parameters must be an object, got {other}", info.id)))
            }
        }
        Ok(Params { id: info.id, merged })
    }

    pub(crate) fn get<T: DeserializeOwned>(&self, key: &str) -> Result<T> {
        let v = self.merged.get(key).cloned().unwrap_or(Value::Null);
        serde_json::from_value(v).map_err(|e| Error::InvalidParameter(format!("{}.{key}: {e}", self.id)))
    }

    pub(crate) fn set(&mut self, key: &str, value: Value) {
        self.merged.insert(key.to_string(), value);
    }

    fn into_value(self) -> Value {
        Value::Object(self.merged)
    }
}

/// What a check function returns; the runner adds id, params and timing.
pub(crate) struct Outcome {
    pub status: Status,
    pub scope: String,
    pub verified: String,
    pub witnesses: Value,
    pub counterexample: Option<Value>,
}

impl Outcome {
    pub(crate) fn pass(scope: String, verified: impl Into<String>, witnesses: Value) -> Self {
        Outcome { status: Status::Pass, scope, verified: verified.into(), witnesses, counterexample: None }
    }

    pub(crate) fn partial(scope: String, verified: impl Into<String>, witnesses: Value) -> Self {
        Outcome { status: Status::Partial, scope, verified: verified.into(), witnesses, counterexample: None }
    }

    pub(crate) fn fail(scope: String, verified: impl Into<String>, witnesses: Value, counterexample: Value) -> Self {
        Outcome {
            status: Status::Fail,
            scope,
            verified: verified.into(),
            witnesses,
            counterexample: Some(counterexample),
        }
    }
}

type CheckFn = fn(&mut Params, &RunContext) -> Result<Outcome>;

fn catalog() -> Vec<(CheckInfo, CheckFn)> {
    let entry = |id, description, defaults: Value, f: CheckFn| (CheckInfo { id, description, defaults }, f);
    vec![
        entry(
            "carlitz",
            "B(G) is half-factorial iff |G| <= 2: singleton length sets over C1, C2 and explicit non-singleton witnesses otherwise",
            json!({"groups": [[1], [2], [3], [2, 2], [4], [2, 2, 2], [3, 3]], "bound": 10}),
            checks::carlitz,
        ),
        entry(
            "sys2",
            "every length set over C3 and C2+C2 has the form y + 2k + [0,k]",
            json!({"groups": [[3], [2, 2]], "bound": 12}),
            checks::sys2,
        ),
        entry(
            "thm62_atoms",
            "atoms of the sumset monoids L(C4), L(C2^3), L(C3^2) and their generator identities",
            json!({"cap": 10, "closure_cap": 20}),
            checks::thm62_atoms,
        ),
        entry(
            "thm62_crosscheck",
            "every length set over C4 belongs to the closed-form description of L(C4)",
            json!({"group": [4], "descriptor": "C4", "bound": 12}),
            checks::thm62_crosscheck,
        ),
        entry(
            "dav_formula",
            "D(G) = 1 + sum(n_i - 1) for p-groups and groups of rank <= 2; D(C_n) = n",
            json!({"max_order": 12}),
            checks::dav_formula,
        ),
        entry(
            "rho_dav",
            "rho(L) <= D(G)/2 with equality at U(-U), and c(a) <= D(G), over scoped zero-sum sequences",
            json!({"groups": [[3], [2, 2], [4], [2, 2, 2], [3, 3]]}),
            checks::rho_dav,
        ),
        entry(
            "rho2k",
            "rho_2k(G) = k D(G) from certified unions of sets of lengths",
            json!({"cases": [[[3], 1], [[4], 1], [[5], 1], [[6], 1], [[3], 2]]}),
            checks::rho2k,
        ),
        entry(
            "uk_interval",
            "certified unions U_k(G) are intervals",
            json!({"groups": [[3], [4], [2, 2]], "ks": [1, 2, 3]}),
            checks::uk_interval,
        ),
        entry(
            "dist_ineqs",
            "distance and catenary inequalities on every scanned element of a battery of monoids",
            json!({}),
            checks::dist_ineqs,
        ),
        entry(
            "min_delta_ca",
            "1 lies in the observed set of distances when |G| >= 3, and 2 in the observed catenary degrees when D(G) >= 4",
            json!({"groups": [[3], [2, 2], [4], [5], [2, 4], [2, 2, 2]]}),
            checks::min_delta_ca,
        ),
        entry(
            "transfer_lengths",
            "the block homomorphism of presented Krull monoids preserves sets of lengths and satisfies T1, T2",
            json!({"random": 25, "max_primes": 6, "max_order": 8, "bound": 8}),
            checks::transfer_lengths,
        ),
        entry(
            "product_unions",
            "U_k and rho_k of a product of numerical monoids from those of the factors",
            json!({"h1": [2, 3], "h2": [3, 5], "max_k": 4}),
            checks::product_unions,
        ),
        entry(
            "primary_uk",
            "U_2 of the boxed N^2 u {0} contains [2, B]",
            json!({"bound": 12}),
            checks::primary_uk,
        ),
        entry(
            "primary_M",
            "sup L(a) <= M(a) on the boxed N^2 u {0}",
            json!({"bound": 12, "max_coordinate": 8}),
            checks::primary_m,
        ),
        entry(
            "power_delta",
            "witnesses for 1, 2 in the set of distances of the restricted power monoid, and non-cancellativity",
            json!({"max_value": 8}),
            checks::power_delta,
        ),
        entry(
            "aamp_structure",
            "every scoped length set is an AAMP with difference in the observed distances",
            json!({"groups": [[3], [2, 2], [4], [5], [2, 4], [2, 2, 2]], "max_bound": 2}),
            checks::aamp_structure,
        ),
        entry(
            "delta_ca_interval",
            "observed sets of distances and catenary degrees are intervals",
            json!({"groups": [[3], [2, 2], [4], [5], [2, 4], [2, 2, 2]]}),
            checks::delta_ca_interval,
        ),
    ]
}

/// The check catalog in its fixed order.
pub fn list_checks() -> Vec<CheckInfo> {
    catalog().into_iter().map(|(info, _)| info).collect()
}

/// Runs one check; `params` overrides the check's defaults key by key.
pub fn run_check(id: &str, params: &Value, ctx: &RunContext) -> Result<CheckReport> {
    let (info, f) =
        catalog().into_iter().find(|(info, _)| info.id == id).ok_or_else(|| Error::UnknownCheck(id.to_string()))?;
    let mut params = Params::new(&info, params)?;
    let start = Instant::now();
    let outcome = f(&mut params, ctx)?;
    Ok(CheckReport {
        id: info.id.to_string(),
        params: params.into_value(),
        status: outcome.status,
        scope: outcome.scope,
        verified: outcome.verified,
        witnesses: outcome.witnesses,
        counterexample: outcome.counterexample,
        elapsed: start.elapsed(),
    })
}

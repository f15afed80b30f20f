//! Concrete monoid families and the JSON monoid specs that build them.

mod affine;
mod block;
mod krull;
mod length_system;
mod numerical;
mod power;
mod primary;
mod product;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::engine::PresentedMonoid;
use crate::error::{Error, Result};
use crate::group::{AbelianGroup, DEFAULT_ORDER_CAP};
use crate::zerosum::G0Subset;

pub use affine::AffineMonoid;
pub use block::BlockMonoid;
pub use krull::{beta, verify_transfer, KrullMonoid, KrullPresentation, TransferReport};
pub use length_system::{lg_atoms, lg_member, lg_members, Descriptor, LengthSystem, DEFAULT_SYSTEM_CAP, MIN_ATOM_CAP};
pub use numerical::NumericalMonoid;
pub use power::{non_cancellative_witness, sumset, PowerMonoid0, MAX_POWER_VALUE};
pub use primary::{BoxPrimary, MValue};
pub use product::ProductMonoid;

/// `G₀` in a block spec: a keyword or an explicit list of coordinate vectors.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum G0Spec {
    Keyword(String),
    Elements(Vec<Vec<i64>>),
}

impl Default for G0Spec {
    fn default() -> Self {
        G0Spec::Keyword("all".into())
    }
}

/// One monoid, as written in spec files.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MonoidSpec {
    Block {
        group: Vec<i64>,
        #[serde(default)]
        g0: G0Spec,
    },
    Numerical {
        generators: Vec<u64>,
    },
    Affine {
        generators: Vec<Vec<u64>>,
    },
    Power0 {
        max_value: u64,
    },
    Product {
        factors: Vec<MonoidSpec>,
    },
    Krull {
        group: Vec<i64>,
        primes: BTreeMap<String, Vec<i64>>,
    },
    BoxPrimary {
        bound: u64,
    },
    LengthSystem {
        descriptor: String,
        #[serde(default)]
        cap: Option<u64>,
    },
}

impl MonoidSpec {
    pub fn from_json(value: &serde_json::Value) -> Result<Self> {
        serde_json::from_value(value.clone()).map_err(|e| Error::InvalidSpec(e.to_string()))
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct BuildOptions {
    /// Largest group order any construction may enumerate.
    pub cap_order: u64,
}

impl Default for BuildOptions {
    fn default() -> Self {
        BuildOptions { cap_order: DEFAULT_ORDER_CAP }
    }
}

pub fn g0_subset(group: &AbelianGroup, g0: &G0Spec, cap: u64) -> Result<G0Subset> {
    match g0 {
        G0Spec::Keyword(k) if k == "all" => G0Subset::all(group, cap),
        G0Spec::Keyword(k) if k == "nonzero" => G0Subset::nonzero(group, cap),
        G0Spec::Keyword(k) => Err(Error::InvalidSpec(format!("unknown g0 keyword {k:?}"))),
        G0Spec::Elements(coords) => {
            group.check_cap(cap)?;
            let mut elements = coords.iter().map(|c| strict_element(group, c)).collect::<Result<Vec<_>>>()?;
            elements.sort();
            elements.dedup();
            G0Subset::new(group.clone(), elements)
        }
    }
}

/// Coordinates given in a spec must already be reduced.
fn strict_element(group: &AbelianGroup, coords: &[i64]) -> Result<crate::group::GroupElement> {
    let in_range =
        coords.len() == group.rank() && coords.iter().zip(group.factors()).all(|(&c, &n)| c >= 0 && (c as u64) < n);
    if !in_range {
        return Err(Error::InvalidSpec(format!("{coords:?} is not a reduced element of {group}")));
    }
    group.element(coords)
}

/// Builds the adapter described by `spec`.
pub fn build(spec: &MonoidSpec, opts: &BuildOptions) -> Result<Box<dyn PresentedMonoid>> {
    let cap = opts.cap_order;
    Ok(match spec {
        MonoidSpec::Block { group, g0 } => {
            let group = AbelianGroup::new(group)?;
            group.check_cap(cap)?;
            Box::new(BlockMonoid::new(g0_subset(&group, g0, cap)?, cap)?)
        }
        MonoidSpec::Numerical { generators } => Box::new(NumericalMonoid::new(generators)?),
        MonoidSpec::Affine { generators } => Box::new(AffineMonoid::new(generators)?),
        MonoidSpec::Power0 { max_value } => Box::new(PowerMonoid0::new(*max_value)?),
        MonoidSpec::Product { factors } => {
            Box::new(ProductMonoid::new(factors.iter().map(|f| build(f, opts)).collect::<Result<_>>()?)?)
        }
        MonoidSpec::Krull { group, primes } => {
            let group = AbelianGroup::new(group)?;
            group.check_cap(cap)?;
            let primes =
                primes.iter().map(|(p, c)| Ok((p.clone(), strict_element(&group, c)?))).collect::<Result<Vec<_>>>()?;
            Box::new(KrullMonoid::new(KrullPresentation::new(group, primes)?, cap)?)
        }
        MonoidSpec::BoxPrimary { bound } => Box::new(BoxPrimary::new(*bound)?),
        MonoidSpec::LengthSystem { descriptor, cap } => {
            Box::new(LengthSystem::new(descriptor.parse()?, cap.unwrap_or(DEFAULT_SYSTEM_CAP))?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    fn built(v: serde_json::Value) -> Result<Box<dyn PresentedMonoid>> {
        build(&MonoidSpec::from_json(&v)?, &BuildOptions::default())
    }

    #[test]
    fn every_kind_builds() {
        let specs = [
            json!({"kind": "block", "group": [2, 2], "g0": "nonzero"}),
            json!({"kind": "block", "group": [3]}),
            json!({"kind": "block", "group": [4], "g0": [[1], [3]]}),
            json!({"kind": "numerical", "generators": [2, 3, 4]}),
            json!({"kind": "affine", "generators": [[1, 1], [1, 2], [2, 1]]}),
            json!({"kind": "power0", "max_value": 4}),
            json!({"kind": "product", "factors": [
                {"kind": "numerical", "generators": [2, 3]},
                {"kind": "block", "group": [3]}
            ]}),
            json!({"kind": "krull", "group": [3], "primes": {"p": [1], "q": [2]}}),
            json!({"kind": "box_primary", "bound": 5}),
            json!({"kind": "length_system", "descriptor": "C4"}),
        ];
        let atom_counts: Vec<usize> = specs.iter().map(|s| built(s.clone()).unwrap().atoms().len()).collect();
        assert_eq!(atom_counts[0], 4);
        assert_eq!(atom_counts[3], 2);
        assert_eq!(atom_counts[9], 4);
    }

    #[test]
    fn bad_specs_are_rejected() {
        for v in [
            json!({"kind": "bogus"}),
            json!({"kind": "block", "group": [0]}),
            json!({"kind": "block", "group": [3], "g0": "some"}),
            json!({"kind": "block", "group": [3], "g0": [[5]]}),
            json!({"kind": "numerical", "generators": [4, 6]}),
            json!({"kind": "affine", "generators": [[0, 0]]}),
            json!({"kind": "product", "factors": [{"kind": "numerical", "generators": [1]}]}),
            json!({"kind": "length_system", "descriptor": "C5"}),
            json!({"kind": "box_primary", "bound": 1}),
        ] {
            assert!(built(v.clone()).is_err(), "{v}");
        }
        let huge = json!({"kind": "block", "group": [101, 101]});
        assert!(matches!(built(huge), Err(Error::CapExceeded { .. })));
    }
}

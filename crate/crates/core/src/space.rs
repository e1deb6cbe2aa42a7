//! Categorical feature spaces and points in them.

use num_bigint::BigUint;

use crate::error::{Error, Result};

/// Index of a feature within its [`FeatureSpace`].
pub type FeatureId = usize;

/// Index of a value within a feature's domain.
pub type ValueId = usize;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Feature {
    pub name: String,
    pub domain: Vec<String>,
}

impl Feature {
    pub fn value_index(&self, value: &str) -> Option<ValueId> {
        self.domain.iter().position(|v| v == value)
    }
}

/// Ordered list of categorical features; the cartesian product of their
/// domains is the space a tree classifies.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct FeatureSpace {
    features: Vec<Feature>,
}

impl FeatureSpace {
    /// Validates names and domains: unique feature names, at least two
    /// distinct values per domain.
    pub fn new(features: Vec<Feature>) -> Result<Self> {
        for (i, f) in features.iter().enumerate() {
            if features[..i].iter().any(|g| g.name == f.name) {
                return Err(Error::DuplicateFeature(f.name.clone()));
            }
            if f.domain.len() < 2 {
                return Err(Error::DomainTooSmall(f.name.clone()));
            }
            for (j, v) in f.domain.iter().enumerate() {
                if f.domain[..j].contains(v) {
                    return Err(Error::DuplicateValue {
                        feature: f.name.clone(),
                        value: v.clone(),
                    });
                }
            }
        }
        Ok(Self { features })
    }

    pub fn len(&self) -> usize {
        self.features.len()
    }

    pub fn is_empty(&self) -> bool {
        self.features.is_empty()
    }

    pub fn features(&self) -> &[Feature] {
        &self.features
    }

    pub fn feature(&self, id: FeatureId) -> &Feature {
        &self.features[id]
    }

    pub fn domain_size(&self, id: FeatureId) -> usize {
        self.features[id].domain.len()
    }

    pub fn feature_index(&self, name: &str) -> Option<FeatureId> {
        self.features.iter().position(|f| f.name == name)
    }

    pub fn resolve_feature(&self, name: &str) -> Result<FeatureId> {
        self.feature_index(name)
            .ok_or_else(|| Error::UnknownFeature(name.to_string()))
    }

    pub fn resolve_value(&self, feature: FeatureId, value: &str) -> Result<ValueId> {
        let f = &self.features[feature];
        f.value_index(value).ok_or_else(|| Error::UnknownValue {
            feature: f.name.clone(),
            value: value.to_string(),
        })
    }

    /// Exact number of points, `|D_1| * ... * |D_n|`.
    pub fn point_count(&self) -> BigUint {
        self.features
            .iter()
            .map(|f| BigUint::from(f.domain.len()))
            .product()
    }

    /// Builds an instance from value names given in feature order.
    pub fn instance_from_names<S: AsRef<str>>(&self, values: &[S]) -> Result<Instance> {
        if values.len() != self.len() {
            return Err(Error::InstanceLength {
                expected: self.len(),
                got: values.len(),
            });
        }
        let values = values
            .iter()
            .enumerate()
            .map(|(i, v)| self.resolve_value(i, v.as_ref()))
            .collect::<Result<Vec<_>>>()?;
        Ok(Instance { values })
    }
}

/// A concrete point of a feature space: one value index per feature.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Instance {
    values: Vec<ValueId>,
}

impl Instance {
    pub fn new(space: &FeatureSpace, values: Vec<ValueId>) -> Result<Self> {
        if values.len() != space.len() {
            return Err(Error::InstanceLength {
                expected: space.len(),
                got: values.len(),
            });
        }
        for (i, &v) in values.iter().enumerate() {
            if v >= space.domain_size(i) {
                return Err(Error::Instance(format!(
                    "value index {v} out of range for feature `{}`",
                    space.feature(i).name
                )));
            }
        }
        Ok(Self { values })
    }

    pub fn values(&self) -> &[ValueId] {
        &self.values
    }

    pub fn value(&self, feature: FeatureId) -> ValueId {
        self.values[feature]
    }

    pub fn names<'s>(&self, space: &'s FeatureSpace) -> Vec<&'s str> {
        self.values
            .iter()
            .enumerate()
            .map(|(i, &v)| space.feature(i).domain[v].as_str())
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binary(name: &str) -> Feature {
        Feature {
            name: name.into(),
            domain: vec!["0".into(), "1".into()],
        }
    }

    #[test]
    fn rejects_bad_domains() {
        let one = Feature {
            name: "a".into(),
            domain: vec!["x".into()],
        };
        assert_eq!(
            FeatureSpace::new(vec![one]),
            Err(Error::DomainTooSmall("a".into()))
        );
        let dup = Feature {
            name: "a".into(),
            domain: vec!["x".into(), "x".into()],
        };
        assert!(matches!(
            FeatureSpace::new(vec![dup]),
            Err(Error::DuplicateValue { .. })
        ));
        assert_eq!(
            FeatureSpace::new(vec![binary("a"), binary("a")]),
            Err(Error::DuplicateFeature("a".into()))
        );
    }

    #[test]
    fn point_count_is_product() {
        let space = FeatureSpace::new(vec![
            binary("a"),
            Feature {
                name: "b".into(),
                domain: vec!["p".into(), "q".into(), "r".into()],
            },
            binary("c"),
        ])
        .unwrap();
        assert_eq!(space.point_count(), BigUint::from(12u32));
        assert_eq!(FeatureSpace::default().point_count(), BigUint::from(1u32));
    }

    #[test]
    fn instance_validation() {
        let space = FeatureSpace::new(vec![binary("a"), binary("b")]).unwrap();
        assert!(Instance::new(&space, vec![0, 1]).is_ok());
        assert!(Instance::new(&space, vec![0, 2]).is_err());
        assert!(matches!(
            space.instance_from_names(&["1"]),
            Err(Error::InstanceLength { expected: 2, got: 1 })
        ));
        assert!(matches!(
            space.instance_from_names(&["1", "7"]),
            Err(Error::UnknownValue { .. })
        ));
    }
}

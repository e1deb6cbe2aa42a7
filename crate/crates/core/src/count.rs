//! Exact counting of feature-space points.

use num_bigint::BigUint;

use crate::literal::LiteralSet;
use crate::space::FeatureSpace;

/// Number of points of `space` consistent with a literal set: the product
/// of allowed-set sizes over constrained features and of domain sizes over
/// the rest.
///
/// [`LiteralSet`] already guarantees one non-empty literal per feature, so
/// inconsistent inputs are rejected when the set is built.
pub fn path_point_count(space: &FeatureSpace, literals: &LiteralSet) -> BigUint {
    (0..space.len())
        .map(|f| match literals.get(f) {
            Some(lit) => BigUint::from(lit.allowed.count()),
            None => BigUint::from(space.domain_size(f)),
        })
        .product()
}

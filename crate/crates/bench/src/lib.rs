//! Shared fixtures for the benchmarks.

use regmap::{build_group, FiniteGroup, Limits};

/// Groups small enough to enumerate in well under a second.
pub const ENUMERATION_GROUPS: [&str; 5] = ["psl2:7", "sym:5", "sl2:8", "agl1:32", "psl2:13"];

/// Groups whose full subgroup lattice is cheap to build.
pub const LATTICE_GROUPS: [&str; 3] = ["sym:4", "alt:5", "psl2:7"];

pub fn group(spec: &str) -> FiniteGroup {
    build_group(spec, &Limits::default()).unwrap_or_else(|e| panic!("{spec}: {e}"))
}

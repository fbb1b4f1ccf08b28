//! Group spec strings: `psl2:q`, `sl2:q`, `pgl2:q`, `agl1:q` (each with an
//! optional `:c0,c1,...` modulus), `sym:n`, `alt:n`, `dihedral:n`,
//! `cyclic:n` and `perm:<cycles>;<cycles>;...`.

use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use super::backend::{self, MatrixKind};
use super::{Family, FiniteGroup, Limits};
use crate::error::{Error, Result};
use crate::field::{prime_power, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FieldGroupKind {
    Psl2,
    Sl2,
    Pgl2,
    Agl1,
}

impl FieldGroupKind {
    fn tag(self) -> &'static str {
        match self {
            FieldGroupKind::Psl2 => "psl2",
            FieldGroupKind::Sl2 => "sl2",
            FieldGroupKind::Pgl2 => "pgl2",
            FieldGroupKind::Agl1 => "agl1",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum GroupSpec {
    Field { kind: FieldGroupKind, q: u32, modulus: Option<Vec<u32>> },
    Symmetric(u32),
    Alternating(u32),
    Dihedral(u32),
    Cyclic(u32),
    Permutation(Vec<String>),
}

fn factorial(n: u32) -> u64 {
    (1..=n as u64).try_fold(1u64, |acc, k| acc.checked_mul(k)).unwrap_or(u64::MAX)
}

impl GroupSpec {
    /// The order the group will have once built (permutation specs excepted).
    pub fn expected_order(&self) -> Option<u64> {
        Some(match *self {
            GroupSpec::Field { kind, q, .. } => {
                let q = q as u64;
                match kind {
                    FieldGroupKind::Sl2 | FieldGroupKind::Pgl2 => q * (q * q - 1),
                    FieldGroupKind::Psl2 => q * (q * q - 1) / if q.is_multiple_of(2) { 1 } else { 2 },
                    FieldGroupKind::Agl1 => q * (q - 1),
                }
            }
            GroupSpec::Symmetric(n) => factorial(n),
            GroupSpec::Alternating(n) => (factorial(n) / 2).max(1),
            GroupSpec::Dihedral(n) => 2 * n as u64,
            GroupSpec::Cyclic(n) => n as u64,
            GroupSpec::Permutation(_) => return None,
        })
    }

    pub fn build(&self, limits: &Limits) -> Result<FiniteGroup> {
        if let Some(order) = self.expected_order() {
            if order > limits.group_order as u64 {
                return Err(Error::CapExceeded { what: "group order", size: order, cap: limits.group_order as u64 });
            }
        }
        let label = self.to_string();
        Ok(match self {
            GroupSpec::Field { kind, q, modulus } => {
                let (p, e) = prime_power(*q as u64)?;
                let field = Arc::new(FiniteField::new(p, e, modulus.as_deref())?);
                match kind {
                    FieldGroupKind::Psl2 => {
                        FiniteGroup::matrices(label, Family::Psl2(*q), field, MatrixKind::Projective)
                    }
                    FieldGroupKind::Sl2 => FiniteGroup::matrices(label, Family::Sl2(*q), field, MatrixKind::Special),
                    FieldGroupKind::Pgl2 => {
                        FiniteGroup::matrices(label, Family::Pgl2(*q), field, MatrixKind::ProjectiveGeneral)
                    }
                    FieldGroupKind::Agl1 => FiniteGroup::affine_group(label, Family::Agl1(*q), field),
                }
            }
            GroupSpec::Symmetric(n) => FiniteGroup::permutations(
                label,
                Family::Symmetric(*n),
                *n as usize,
                backend::all_permutations(*n as usize, false),
            ),
            GroupSpec::Alternating(n) => FiniteGroup::permutations(
                label,
                Family::Alternating(*n),
                *n as usize,
                backend::all_permutations(*n as usize, true),
            ),
            GroupSpec::Dihedral(n) => FiniteGroup::dihedral(*n),
            GroupSpec::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupSpec::Permutation(cycles) => {
                let degree = cycles.iter().map(|c| backend::max_point(c)).max().unwrap_or(1);
                let gens = cycles
                    .iter()
                    .map(|c| backend::parse_cycles(c, degree))
                    .collect::<std::result::Result<Vec<_>, _>>()
                    .map_err(|reason| Error::Spec { spec: label.clone(), reason })?;
                let elems = backend::perm_closure(degree, &gens, limits.group_order)?;
                FiniteGroup::permutations(label, Family::Permutation, degree, elems)
            }
        })
    }
}

impl FromStr for GroupSpec {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let err = |reason: &str| Error::Spec { spec: s.to_string(), reason: reason.to_string() };
        let (tag, rest) = s.split_once(':').ok_or_else(|| err("expected `<family>:<parameter>`"))?;
        let parse_n = |t: &str| t.parse::<u32>().map_err(|_| err("expected a positive integer"));
        match tag {
            "psl2" | "sl2" | "pgl2" | "agl1" => {
                let kind = match tag {
                    "psl2" => FieldGroupKind::Psl2,
                    "sl2" => FieldGroupKind::Sl2,
                    "pgl2" => FieldGroupKind::Pgl2,
                    _ => FieldGroupKind::Agl1,
                };
                let (q, modulus) = match rest.split_once(':') {
                    Some((q, m)) => {
                        let coeffs = m
                            .split(',')
                            .map(|c| c.trim().parse::<u32>().map_err(|_| err("bad modulus coefficient")))
                            .collect::<Result<Vec<_>>>()?;
                        (parse_n(q)?, Some(coeffs))
                    }
                    None => (parse_n(rest)?, None),
                };
                prime_power(q as u64)?;
                Ok(GroupSpec::Field { kind, q, modulus })
            }
            "sym" | "alt" | "dihedral" | "cyclic" => {
                let n = parse_n(rest)?;
                if n == 0 {
                    return Err(err("parameter must be positive"));
                }
                Ok(match tag {
                    "sym" => GroupSpec::Symmetric(n),
                    "alt" => GroupSpec::Alternating(n),
                    "dihedral" => GroupSpec::Dihedral(n),
                    _ => GroupSpec::Cyclic(n),
                })
            }
            "perm" => {
                let gens: Vec<String> =
                    rest.split(';').map(|c| c.chars().filter(|c| !c.is_whitespace()).collect()).collect();
                if gens.iter().any(|g: &String| g.is_empty() || !g.starts_with('(')) {
                    return Err(err("expected cycles such as (1,2,3)(4,5)"));
                }
                Ok(GroupSpec::Permutation(gens))
            }
            _ => Err(err("unknown family")),
        }
    }
}

impl fmt::Display for GroupSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSpec::Field { kind, q, modulus } => {
                write!(f, "{}:{q}", kind.tag())?;
                if let Some(m) = modulus {
                    let m: Vec<String> = m.iter().map(|c| c.to_string()).collect();
                    write!(f, ":{}", m.join(","))?;
                }
                Ok(())
            }
            GroupSpec::Symmetric(n) => write!(f, "sym:{n}"),
            GroupSpec::Alternating(n) => write!(f, "alt:{n}"),
            GroupSpec::Dihedral(n) => write!(f, "dihedral:{n}"),
            GroupSpec::Cyclic(n) => write!(f, "cyclic:{n}"),
            GroupSpec::Permutation(g) => write!(f, "perm:{}", g.join(";")),
        }
    }
}

//! Duality and hole operations on triples.

use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::map::MapTriple;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum Operation {
    Dual,
    /// `H_j`; `H_{-1}` is the mirror.
    Hole(i64),
}

pub const DEFAULT_OPS: [Operation; 4] = [Operation::Dual, Operation::Hole(2), Operation::Hole(3), Operation::Hole(-1)];

impl Operation {
    /// Whether the operation applies to maps of valency `q`.
    pub fn applies(self, q: u32) -> bool {
        match self {
            Operation::Dual => true,
            Operation::Hole(j) => (j.rem_euclid(q as i64) as u64).gcd(&(q as u64)) == 1,
        }
    }

    /// Operations that are involutions on every map.
    pub fn is_involutory(self) -> bool {
        matches!(self, Operation::Dual | Operation::Hole(-1))
    }

    pub fn apply<'g>(self, m: &MapTriple<'g>) -> Result<MapTriple<'g>> {
        match self {
            Operation::Dual => Ok(dual(m)),
            Operation::Hole(j) => hole(m, j),
        }
    }
}

impl fmt::Display for Operation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Operation::Dual => f.write_str("D"),
            Operation::Hole(j) => write!(f, "H{j}"),
        }
    }
}

impl FromStr for Operation {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim();
        if t == "D" {
            return Ok(Operation::Dual);
        }
        match t.strip_prefix('H').map(str::parse::<i64>) {
            Some(Ok(j)) if j != 0 => Ok(Operation::Hole(j)),
            _ => Err(Error::Operation(t.to_string())),
        }
    }
}

impl TryFrom<String> for Operation {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        s.parse()
    }
}

impl From<Operation> for String {
    fn from(op: Operation) -> String {
        op.to_string()
    }
}

/// Parses `D,H2,H3,H-1`.
pub fn parse_ops(s: &str) -> Result<Vec<Operation>> {
    let ops: Vec<Operation> = s.split(',').filter(|t| !t.trim().is_empty()).map(str::parse).collect::<Result<_>>()?;
    if ops.is_empty() {
        return Err(Error::Operation(s.to_string()));
    }
    Ok(ops)
}

/// Parses an operator word such as `DH2DH3` or `H3 D H-1`. The result is in
/// written order; [`apply_word`] applies it right to left.
pub fn parse_word(s: &str) -> Result<Vec<Operation>> {
    let t: String = s.chars().filter(|c| !c.is_whitespace() && *c != '*').collect();
    let mut ops = Vec::new();
    let mut rest = t.as_str();
    while !rest.is_empty() {
        if let Some(r) = rest.strip_prefix('D') {
            ops.push(Operation::Dual);
            rest = r;
            continue;
        }
        let body = rest.strip_prefix('H').ok_or_else(|| Error::Operation(rest.to_string()))?;
        let sign = usize::from(body.starts_with('-'));
        let end = sign + body[sign..].find(|c: char| !c.is_ascii_digit()).unwrap_or(body.len() - sign);
        ops.push(rest[..end + 1].parse()?);
        rest = &body[end..];
    }
    Ok(ops)
}

/// Applies `ops` right to left, so `[H2, D]` is `H2(D(m))`.
pub fn apply_word<'g>(m: &MapTriple<'g>, ops: &[Operation]) -> Result<MapTriple<'g>> {
    ops.iter().rev().try_fold(*m, |acc, op| op.apply(&acc))
}

/// `(x, y, z) ↦ (z, y, x^y)`.
pub fn dual<'g>(m: &MapTriple<'g>) -> MapTriple<'g> {
    MapTriple::from_pair(m.group(), m.z, m.y)
}

/// `(x, y, z) ↦ (x^j, y, (x^j y)⁻¹)`, for `j` coprime to the valency.
pub fn hole<'g>(m: &MapTriple<'g>, j: i64) -> Result<MapTriple<'g>> {
    let q = m.valency();
    if !Operation::Hole(j).applies(q) {
        return Err(Error::HoleNotCoprime { j, q });
    }
    Ok(MapTriple::from_pair(m.group(), m.group().pow(m.x, j), m.y))
}

/// `H_{-1}`.
pub fn mirror<'g>(m: &MapTriple<'g>) -> MapTriple<'g> {
    MapTriple::from_pair(m.group(), m.group().inv(m.x), m.y)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::compute_aut;
    use crate::group::{build_group, Limits};
    use crate::map::make_map;

    #[test]
    fn operation_syntax() {
        let ops = parse_ops("D,H2,H3,H-1").unwrap();
        assert_eq!(ops, DEFAULT_OPS.to_vec());
        assert_eq!(ops.iter().map(|o| o.to_string()).collect::<Vec<_>>().join(","), "D,H2,H3,H-1");
        for bad in ["", "H0", "X", "H", "Hx"] {
            assert!(parse_ops(bad).is_err(), "{bad}");
        }
        assert!(Operation::Hole(2).applies(7));
        assert!(!Operation::Hole(2).applies(4));
        assert!(Operation::Hole(-1).applies(2));
    }

    #[test]
    fn klein_orbit_under_operations() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let k = make_map(&g, g.parse_element("[[1,1],[0,1]]").unwrap(), g.standard_involution().unwrap()).unwrap();
        let canon = |m: &MapTriple| {
            let c = a.pair_orbit_canon(m.x, m.y);
            (c.0, c.1)
        };

        let d = dual(&k);
        assert_eq!(d.invariants(&a).extended_type(), "{7,3}_8");
        assert_eq!(canon(&dual(&d)), canon(&k));

        let h2 = hole(&k, 2).unwrap();
        let inv = h2.invariants(&a);
        assert_eq!((inv.extended_type().as_str(), inv.genus), ("{7,7}_6", 19));
        assert_eq!(canon(&dual(&h2)), canon(&h2));

        let h4 = hole(&h2, 2).unwrap();
        let inv = h4.invariants(&a);
        assert_eq!((inv.extended_type().as_str(), inv.genus), ("{4,7}_8", 10));
        assert_eq!(canon(&h4), canon(&hole(&k, 3).unwrap()));
        assert_eq!(canon(&hole(&h4, 2).unwrap()), canon(&k));
        assert_eq!(canon(&mirror(&k)), canon(&k));
        assert_eq!(hole(&k, 1).unwrap(), k);
        assert!(hole(&k, 14).is_err());
    }

    #[test]
    fn hole_of_fricke_macbeath() {
        let g = build_group("sl2:8:1,1,0,1", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let f = make_map(&g, g.parse_element("[[t,1],[0,t^2+1]]").unwrap(), g.standard_involution().unwrap()).unwrap();
        let h2 = hole(&f, 2).unwrap();
        let inv = h2.invariants(&a);
        assert_eq!((inv.extended_type().as_str(), inv.genus), ("{7,7}_18", 55));
        assert_eq!(h2.x, g.parse_element("[[t^2,t^2+t+1],[0,t^2+t+1]]").unwrap());
    }

    #[test]
    fn words() {
        use Operation::*;
        assert_eq!(parse_word("DH2DH3").unwrap(), vec![Dual, Hole(2), Dual, Hole(3)]);
        assert_eq!(parse_word("H3 D H-1").unwrap(), vec![Hole(3), Dual, Hole(-1)]);
        assert_eq!(parse_word("").unwrap(), vec![]);
        assert_eq!(parse_word("H12").unwrap(), vec![Hole(12)]);
        for bad in ["X", "H", "H-", "DH0", "2"] {
            assert!(parse_word(bad).is_err(), "{bad}");
        }
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let k = make_map(&g, g.parse_element("[[1,1],[0,1]]").unwrap(), g.standard_involution().unwrap()).unwrap();
        let m = apply_word(&k, &parse_word("H2D").unwrap()).unwrap();
        assert_eq!(m, hole(&dual(&k), 2).unwrap());
        assert!(apply_word(&k, &parse_word("H7").unwrap()).is_err());
    }

    #[test]
    fn serde_labels() {
        let ops = DEFAULT_OPS.to_vec();
        let text = serde_json::to_string(&ops).unwrap();
        assert_eq!(text, r#"["D","H2","H3","H-1"]"#);
        let back: Vec<Operation> = serde_json::from_str(&text).unwrap();
        assert_eq!(back, ops);
    }
}

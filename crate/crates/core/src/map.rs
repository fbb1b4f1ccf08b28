//! Orientably regular maps as generating triples `(x, y, z)` with
//! `x^q = y^2 = z^p = xyz = 1`.

use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::automorphism::AutGroup;
use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, TracePair};

#[derive(Clone, Copy)]
pub struct MapTriple<'g> {
    group: &'g FiniteGroup,
    pub x: Elem,
    pub y: Elem,
    pub z: Elem,
}

impl fmt::Debug for MapTriple<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "MapTriple({}, {}, {})", self.x, self.y, self.z)
    }
}

impl PartialEq for MapTriple<'_> {
    fn eq(&self, other: &Self) -> bool {
        std::ptr::eq(self.group, other.group) && (self.x, self.y) == (other.x, other.y)
    }
}

impl Eq for MapTriple<'_> {}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Reflexibility {
    Chiral,
    InnerRegular,
    OuterRegular,
}

impl Reflexibility {
    pub fn is_regular(self) -> bool {
        self != Reflexibility::Chiral
    }
}

impl fmt::Display for Reflexibility {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Reflexibility::Chiral => "chiral",
            Reflexibility::InnerRegular => "inner-regular",
            Reflexibility::OuterRegular => "outer-regular",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapInvariants {
    /// Face length, the order of `z`.
    pub p: u32,
    /// Valency, the order of `x`.
    pub q: u32,
    /// Petrie length `2·ord([x, y])`.
    pub r: u32,
    pub genus: u64,
    pub reflexibility: Reflexibility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cotrace: Option<String>,
    /// Genus of the non-orientable quotient, for inner-regular maps of
    /// centreless groups.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quotient_genus: Option<u64>,
}

impl MapInvariants {
    /// `{p,q}_r`.
    pub fn extended_type(&self) -> String {
        format!("{{{},{}}}_{}", self.p, self.q, self.r)
    }
}

/// Genus from Euler's formula with `V = n/q`, `E = n/2`, `F = n/p`.
/// Returns `None` if the counts are not integral or the genus is negative
/// or fractional.
pub fn genus_of(n: u64, p: u32, q: u32) -> Option<u64> {
    let (p, q) = (p as u64, q as u64);
    if p == 0 || q == 0 || !n.is_multiple_of(p) || !n.is_multiple_of(q) || !n.is_multiple_of(2) {
        return None;
    }
    let chi = (n / q + n / p) as i64 - (n / 2) as i64;
    let twice = 2 - chi;
    (twice >= 0 && twice % 2 == 0).then_some((twice / 2) as u64)
}

/// Builds the triple `(x, y, (xy)⁻¹)`.
pub fn make_map(g: &FiniteGroup, x: Elem, y: Elem) -> Result<MapTriple<'_>> {
    if g.element_order(y) != 2 {
        return Err(Error::NotInvolution(y.0));
    }
    if !g.generates(&[x, y]) {
        return Err(Error::NotGenerating { x: x.0, y: y.0 });
    }
    Ok(MapTriple::from_pair(g, x, y))
}

impl<'g> MapTriple<'g> {
    /// A triple from a pair already known to be valid.
    pub(crate) fn from_pair(group: &'g FiniteGroup, x: Elem, y: Elem) -> Self {
        let z = group.inv(group.mul(x, y));
        MapTriple { group, x, y, z }
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    /// Valency `q = ord(x)`.
    pub fn valency(&self) -> u32 {
        self.group.element_order(self.x)
    }

    pub fn face_length(&self) -> u32 {
        self.group.element_order(self.z)
    }

    pub fn petrie_length(&self) -> u32 {
        2 * self.group.element_order(self.group.commutator(self.x, self.y))
    }

    pub fn genus(&self) -> u64 {
        genus_of(self.group.order() as u64, self.face_length(), self.valency())
            .expect("a generating triple has integral genus")
    }

    /// Chiral, or which kind of automorphism inverts `x` and fixes `y`.
    pub fn reflexibility(&self, aut: &AutGroup<'_>) -> Reflexibility {
        let g = self.group;
        match aut.find_mapping(self.x, self.y, g.inv(self.x), self.y) {
            None => Reflexibility::Chiral,
            Some(a) if aut.is_inner(a).is_some() => Reflexibility::InnerRegular,
            Some(_) => Reflexibility::OuterRegular,
        }
    }

    pub fn invariants(&self, aut: &AutGroup<'_>) -> MapInvariants {
        let genus = self.genus();
        let reflexibility = self.reflexibility(aut);
        let (trace, cotrace) = match self.reported_traces() {
            Some((t, c)) => (Some(t.label), Some(c.label)),
            None => (None, None),
        };
        let centreless = aut.inner_order() == self.group.order();
        let quotient_genus = (reflexibility == Reflexibility::InnerRegular && centreless).then_some(genus + 1);
        MapInvariants {
            p: self.face_length(),
            q: self.valency(),
            r: self.petrie_length(),
            genus,
            reflexibility,
            trace,
            cotrace,
            quotient_genus,
        }
    }

    /// Trace and cotrace when `y` is conjugate to the standard involution.
    fn reported_traces(&self) -> Option<(TracePair, TracePair)> {
        let g = self.group;
        let s = g.standard_involution()?;
        let classes = g.classes();
        (classes.class_of(s) == classes.class_of(self.y)).then(|| self.trace_cotrace().ok()).flatten()
    }

    /// Trace-pairs of `x` and `z`. Both are conjugation invariants, so they
    /// agree with the values for the conjugate triple whose `y` is standard.
    pub fn trace_cotrace(&self) -> Result<(TracePair, TracePair)> {
        Ok((self.group.trace_pair(self.x)?, self.group.trace_pair(self.z)?))
    }

    /// Length of the `j`-holes: the order of `(x^j y)⁻¹`.
    pub fn hole_length(&self, j: i64) -> Result<u32> {
        let q = self.valency();
        if (j.rem_euclid(q as i64) as u64).gcd(&(q as u64)) != 1 {
            return Err(Error::HoleNotCoprime { j, q });
        }
        let g = self.group;
        Ok(g.element_order(g.mul(g.pow(self.x, j), self.y)))
    }

    /// Order of `x^{d1} y x^{d2} y ··· x^{dm} y`.
    pub fn word_order(&self, exponents: &[i64]) -> u32 {
        let g = self.group;
        let w = exponents.iter().fold(Elem::IDENTITY, |acc, &d| g.mul(acc, g.mul(g.pow(self.x, d), self.y)));
        g.element_order(w)
    }

    /// Evaluates each relator with `R = x` and `S = z`; true where it is the
    /// identity.
    pub fn check_relators<S: AsRef<str>>(&self, relators: &[S]) -> Result<Vec<bool>> {
        relators
            .iter()
            .map(|w| Ok(Word::parse(w.as_ref())?.eval(self.group, self.x, self.z) == Elem::IDENTITY))
            .collect()
    }
}

/// A word in `R`, `S` with integer exponents and parenthesised powers,
/// e.g. `(R*S^-3*R^2)^2` or `(RS)^2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Word(Vec<(Atom, i64)>);

#[derive(Clone, Debug, PartialEq, Eq)]
enum Atom {
    R,
    S,
    Group(Word),
}

impl Word {
    pub fn parse(src: &str) -> Result<Word> {
        let text: String = src.chars().filter(|c| !c.is_whitespace()).collect();
        let text = text.strip_suffix("=1").unwrap_or(&text);
        let err = |reason: &str| Error::Word { word: src.to_string(), reason: reason.to_string() };
        let chars: Vec<char> = text.chars().collect();
        let mut pos = 0;
        let word = Self::parse_seq(&chars, &mut pos).map_err(|r| err(&r))?;
        if pos != chars.len() {
            return Err(err(&format!("unexpected `{}`", chars[pos])));
        }
        Ok(word)
    }

    fn parse_seq(c: &[char], pos: &mut usize) -> std::result::Result<Word, String> {
        let mut items = Vec::new();
        while *pos < c.len() {
            let atom = match c[*pos] {
                'R' => Atom::R,
                'S' => Atom::S,
                '(' => {
                    *pos += 1;
                    let inner = Self::parse_seq(c, pos)?;
                    if c.get(*pos) != Some(&')') {
                        return Err("unbalanced parenthesis".into());
                    }
                    Atom::Group(inner)
                }
                '*' if !items.is_empty() && matches!(c.get(*pos + 1), Some('R' | 'S' | '(')) => {
                    *pos += 1;
                    continue;
                }
                ')' => break,
                ch => return Err(format!("unexpected `{ch}`")),
            };
            *pos += 1;
            let mut exp = 1i64;
            if c.get(*pos) == Some(&'^') {
                *pos += 1;
                let start = *pos;
                if c.get(*pos) == Some(&'-') {
                    *pos += 1;
                }
                while c.get(*pos).is_some_and(|d| d.is_ascii_digit()) {
                    *pos += 1;
                }
                let s: String = c[start..*pos].iter().collect();
                exp = s.parse().map_err(|_| "bad exponent".to_string())?;
            }
            items.push((atom, exp));
        }
        Ok(Word(items))
    }

    pub fn eval(&self, g: &FiniteGroup, r: Elem, s: Elem) -> Elem {
        self.0.iter().fold(Elem::IDENTITY, |acc, (atom, e)| {
            let base = match atom {
                Atom::R => r,
                Atom::S => s,
                Atom::Group(w) => w.eval(g, r, s),
            };
            g.mul(acc, g.pow(base, *e))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::compute_aut;
    use crate::group::{build_group, Limits};

    fn klein(g: &FiniteGroup) -> MapTriple<'_> {
        let x = g.parse_element("[[1,1],[0,1]]").unwrap();
        make_map(g, x, g.standard_involution().unwrap()).unwrap()
    }

    fn fricke_macbeath(g: &FiniteGroup) -> MapTriple<'_> {
        let x = g.parse_element("[[t,1],[0,t^2+1]]").unwrap();
        make_map(g, x, g.standard_involution().unwrap()).unwrap()
    }

    #[test]
    fn klein_map() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let k = klein(&g);
        assert_eq!(k.z, g.parse_element("[[0,-1],[1,-1]]").unwrap());
        let inv = k.invariants(&a);
        assert_eq!((inv.p, inv.q, inv.r, inv.genus), (3, 7, 8, 3));
        assert_eq!(inv.reflexibility, Reflexibility::OuterRegular);
        assert_eq!(inv.quotient_genus, None);
        assert_eq!((inv.trace.as_deref(), inv.cotrace.as_deref()), (Some("±2"), Some("±1")));
        assert_eq!(k.hole_length(3).unwrap(), 4);
        assert_eq!(k.hole_length(1).unwrap(), 3);
        assert!(k.hole_length(7).is_err());
        assert_eq!(k.word_order(&[2, 4]), 3);
        assert_eq!(k.word_order(&[1]), 3);
    }

    #[test]
    fn make_map_errors() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let x = g.parse_element("[[1,1],[0,1]]").unwrap();
        assert!(matches!(make_map(&g, x, Elem::IDENTITY), Err(Error::NotInvolution(0))));
        let y = g.standard_involution().unwrap();
        let y2 = g.elements().find(|&h| g.is_involution(h) && g.mul(h, y) == g.mul(y, h) && h != y).unwrap();
        assert!(matches!(make_map(&g, y2, y), Err(Error::NotGenerating { .. })));
    }

    #[test]
    fn fricke_macbeath_map() {
        let g = build_group("sl2:8:1,1,0,1", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let f = fricke_macbeath(&g);
        let inv = f.invariants(&a);
        assert_eq!(inv.extended_type(), "{3,7}_18");
        assert_eq!(inv.genus, 7);
        assert_eq!(inv.reflexibility, Reflexibility::InnerRegular);
        assert_eq!(inv.quotient_genus, Some(8));
        assert_eq!((inv.trace.as_deref(), inv.cotrace.as_deref()), (Some("t^2+t+1"), Some("1")));
        assert_eq!(f.hole_length(3).unwrap(), 9);
        assert_eq!(f.word_order(&[2, 4, 4]), 2);
    }

    #[test]
    fn relator_words() {
        let g = build_group("sl2:8:1,1,0,1", &Limits::default()).unwrap();
        let x = g.parse_element("[[t^2+t,t],[0,t+1]]").unwrap();
        let m = make_map(&g, x, g.standard_involution().unwrap()).unwrap();
        assert_eq!(m.z, g.parse_element("[[0,t^2+t],[t+1,t]]").unwrap());
        let ok = m.check_relators(&["R^-7", "S^-9", "(RS)^2", "(S^-1R)^3", "(RS^-3R^2)^2", ""]).unwrap();
        assert!(ok.iter().all(|&b| b));
        assert_eq!(m.check_relators(&["(R*S^-2*R)^2"]).unwrap(), vec![false]);
        assert!(m.check_relators(&["(RS"]).is_err());
        assert!(m.check_relators(&["RX"]).is_err());
        assert!(m.check_relators(&["R^"]).is_err());
    }

    #[test]
    fn word_grammar() {
        assert_eq!(Word::parse("(R*S)^2").unwrap(), Word::parse("(RS)^2").unwrap());
        assert_eq!(Word::parse("R^-7=1").unwrap(), Word::parse("R^-7").unwrap());
        assert!(Word::parse("*R").is_err());
    }

    #[test]
    fn euler_genus() {
        assert_eq!(genus_of(168, 3, 7), Some(3));
        assert_eq!(genus_of(168, 7, 7), Some(19));
        assert_eq!(genus_of(12, 3, 3), Some(0));
        assert_eq!(genus_of(504, 9, 9), Some(71));
        assert_eq!(genus_of(12, 2, 2), None);
    }
}

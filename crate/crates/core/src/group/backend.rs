//! Concrete element payloads and their products.

use std::collections::{HashMap, HashSet, VecDeque};
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MatrixKind {
    /// SL₂(q).
    Special,
    /// PSL₂(q): matrices modulo ±I.
    Projective,
    /// PGL₂(q): invertible matrices modulo scalars.
    ProjectiveGeneral,
}

pub type Matrix = [Fe; 4];

#[derive(Clone, Debug)]
pub struct MatrixData {
    pub field: Arc<FiniteField>,
    pub kind: MatrixKind,
    pub mats: Vec<Matrix>,
    lookup: Vec<u32>,
}

impl MatrixData {
    pub fn build(field: Arc<FiniteField>, kind: MatrixKind) -> Self {
        let q = field.order();
        let mut mats = Vec::new();
        let identity = [1, 0, 0, 1];
        mats.push(identity);
        for key in 0..q.pow(4) {
            let m = [key / (q * q * q), key / (q * q) % q, key / q % q, key % q];
            if m == identity {
                continue;
            }
            let det = det(&field, &m);
            let valid = match kind {
                MatrixKind::Special | MatrixKind::Projective => det == 1,
                MatrixKind::ProjectiveGeneral => det != 0,
            };
            if valid && canonical(&field, kind, m) == m {
                mats.push(m);
            }
        }
        let mut lookup = vec![u32::MAX; q.pow(4) as usize];
        for (i, m) in mats.iter().enumerate() {
            lookup[key(q, m)] = i as u32;
        }
        MatrixData { field, kind, mats, lookup }
    }

    /// Index of a matrix, after reducing it to canonical form. `None` if it
    /// is not in the group.
    pub fn index_of(&self, m: Matrix) -> Option<u32> {
        let f = &self.field;
        let d = det(f, &m);
        let ok = match self.kind {
            MatrixKind::Special | MatrixKind::Projective => d == 1,
            MatrixKind::ProjectiveGeneral => d != 0,
        };
        if !ok {
            return None;
        }
        let c = canonical(f, self.kind, m);
        let i = self.lookup[key(f.order(), &c)];
        (i != u32::MAX).then_some(i)
    }

    pub fn product(&self, a: u32, b: u32) -> u32 {
        let m = mat_mul(&self.field, &self.mats[a as usize], &self.mats[b as usize]);
        let c = canonical(&self.field, self.kind, m);
        self.lookup[key(self.field.order(), &c)]
    }
}

fn key(q: u32, m: &Matrix) -> usize {
    (((m[0] * q + m[1]) * q + m[2]) * q + m[3]) as usize
}

pub fn det(f: &FiniteField, m: &Matrix) -> Fe {
    f.sub(f.mul(m[0], m[3]), f.mul(m[1], m[2]))
}

pub fn mat_mul(f: &FiniteField, x: &Matrix, y: &Matrix) -> Matrix {
    [
        f.add(f.mul(x[0], y[0]), f.mul(x[1], y[2])),
        f.add(f.mul(x[0], y[1]), f.mul(x[1], y[3])),
        f.add(f.mul(x[2], y[0]), f.mul(x[3], y[2])),
        f.add(f.mul(x[2], y[1]), f.mul(x[3], y[3])),
    ]
}

/// Canonical representative: for PSL the lexicographically smaller of ±A,
/// for PGL the scalar multiple whose first nonzero entry is 1.
pub fn canonical(f: &FiniteField, kind: MatrixKind, m: Matrix) -> Matrix {
    match kind {
        MatrixKind::Special => m,
        MatrixKind::Projective => {
            let neg = m.map(|a| f.neg(a));
            neg.min(m)
        }
        MatrixKind::ProjectiveGeneral => {
            let lead = m.iter().copied().find(|&a| a != 0).expect("invertible matrix");
            let s = f.inv(lead).unwrap();
            m.map(|a| f.mul(a, s))
        }
    }
}

#[derive(Clone, Debug)]
pub struct PermData {
    pub degree: usize,
    pub perms: Vec<Box<[u8]>>,
    lookup: HashMap<Box<[u8]>, u32>,
}

impl PermData {
    /// Sorts the permutations lexicographically, so the identity comes first.
    pub fn new(degree: usize, mut perms: Vec<Box<[u8]>>) -> Self {
        perms.sort();
        let lookup = perms.iter().enumerate().map(|(i, p)| (p.clone(), i as u32)).collect();
        PermData { degree, perms, lookup }
    }

    pub fn index_of(&self, p: &[u8]) -> Option<u32> {
        self.lookup.get(p).copied()
    }

    pub fn product(&self, a: u32, b: u32) -> u32 {
        let p = perm_mul(&self.perms[a as usize], &self.perms[b as usize]);
        self.lookup[&p]
    }
}

/// Product acting on the right: `i^(ab) = (i^a)^b`.
pub fn perm_mul(a: &[u8], b: &[u8]) -> Box<[u8]> {
    a.iter().map(|&i| b[i as usize]).collect()
}

/// All permutations of `0..n` in lexicographic order, optionally only the even ones.
pub fn all_permutations(n: usize, even_only: bool) -> Vec<Box<[u8]>> {
    let mut out = Vec::new();
    let mut cur: Vec<u8> = (0..n as u8).collect();
    loop {
        if !even_only || parity(&cur) == 0 {
            out.push(cur.clone().into_boxed_slice());
        }
        // next permutation
        let Some(i) = (1..n).rev().find(|&i| cur[i - 1] < cur[i]) else { break };
        let j = (i..n).rev().find(|&j| cur[j] > cur[i - 1]).unwrap();
        cur.swap(i - 1, j);
        cur[i..].reverse();
    }
    out
}

pub fn parity(p: &[u8]) -> usize {
    let mut seen = vec![false; p.len()];
    let mut transpositions = 0;
    for start in 0..p.len() {
        if seen[start] {
            continue;
        }
        let mut len = 0;
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            i = p[i] as usize;
            len += 1;
        }
        transpositions += len - 1;
    }
    transpositions % 2
}

/// Closure of a set of permutations, failing once it exceeds `cap` elements.
pub fn perm_closure(degree: usize, gens: &[Box<[u8]>], cap: usize) -> Result<Vec<Box<[u8]>>> {
    let identity: Box<[u8]> = (0..degree as u8).collect();
    let mut seen: HashSet<Box<[u8]>> = HashSet::new();
    let mut queue = VecDeque::new();
    seen.insert(identity.clone());
    queue.push_back(identity);
    while let Some(h) = queue.pop_front() {
        for s in gens {
            let k = perm_mul(&h, s);
            if seen.insert(k.clone()) {
                if seen.len() > cap {
                    return Err(Error::CapExceeded { what: "group order", size: seen.len() as u64, cap: cap as u64 });
                }
                queue.push_back(k);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

pub fn format_cycles(p: &[u8]) -> String {
    let mut seen = vec![false; p.len()];
    let mut out = String::new();
    for start in 0..p.len() {
        if seen[start] || p[start] as usize == start {
            continue;
        }
        let mut cycle = Vec::new();
        let mut i = start;
        while !seen[i] {
            seen[i] = true;
            cycle.push((i + 1).to_string());
            i = p[i] as usize;
        }
        out.push('(');
        out.push_str(&cycle.join(","));
        out.push(')');
    }
    if out.is_empty() {
        "()".into()
    } else {
        out
    }
}

/// Parses 1-based cycle notation such as `(1,5,3)(2,4)` on `degree` points.
pub fn parse_cycles(s: &str, degree: usize) -> std::result::Result<Box<[u8]>, String> {
    let mut perm: Vec<u8> = (0..degree as u8).collect();
    let s: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    if s == "()" || s.is_empty() {
        return Ok(perm.into_boxed_slice());
    }
    let mut rest = s.as_str();
    let mut moved = vec![false; degree];
    while !rest.is_empty() {
        let body = rest.strip_prefix('(').ok_or_else(|| format!("expected `(` in `{s}`"))?;
        let end = body.find(')').ok_or_else(|| format!("unclosed cycle in `{s}`"))?;
        let points: Vec<usize> = body[..end]
            .split(',')
            .map(|t| t.parse::<usize>().map_err(|_| format!("bad point `{t}`")))
            .collect::<std::result::Result<_, _>>()?;
        for (k, &a) in points.iter().enumerate() {
            if a == 0 || a > degree {
                return Err(format!("point {a} outside 1..={degree}"));
            }
            if moved[a - 1] {
                return Err(format!("point {a} repeated"));
            }
            moved[a - 1] = true;
            let b = points[(k + 1) % points.len()];
            perm[a - 1] = (b - 1) as u8;
        }
        rest = &body[end + 1..];
    }
    Ok(perm.into_boxed_slice())
}

/// Largest point mentioned in a cycle string.
pub fn max_point(s: &str) -> usize {
    s.split(|c: char| !c.is_ascii_digit()).filter_map(|t| t.parse::<usize>().ok()).max().unwrap_or(1)
}

#[derive(Clone, Debug)]
pub struct AffineData {
    pub field: Arc<FiniteField>,
    /// `(a, b)` encodes `t ↦ a t + b`.
    pub maps: Vec<(Fe, Fe)>,
    lookup: Vec<u32>,
}

impl AffineData {
    pub fn build(field: Arc<FiniteField>) -> Self {
        let q = field.order();
        let mut maps = vec![(1, 0)];
        for a in 1..q {
            for b in 0..q {
                if (a, b) != (1, 0) {
                    maps.push((a, b));
                }
            }
        }
        let mut lookup = vec![u32::MAX; (q * q) as usize];
        for (i, &(a, b)) in maps.iter().enumerate() {
            lookup[(a * q + b) as usize] = i as u32;
        }
        AffineData { field, maps, lookup }
    }

    pub fn index_of(&self, a: Fe, b: Fe) -> Option<u32> {
        let q = self.field.order();
        if a == 0 || a >= q || b >= q {
            return None;
        }
        Some(self.lookup[(a * q + b) as usize])
    }

    /// Apply the first map, then the second.
    pub fn product(&self, x: u32, y: u32) -> u32 {
        let f = &self.field;
        let (a, b) = self.maps[x as usize];
        let (c, d) = self.maps[y as usize];
        self.lookup[(f.mul(c, a) * f.order() + f.add(f.mul(c, b), d)) as usize]
    }
}

#[derive(Clone, Debug)]
pub enum Backend {
    /// `Z/n`, element `i` is `g^i`.
    Cyclic {
        n: u32,
    },
    /// Order `2n`; index `s·n + i` is `r^i s^s`.
    Dihedral {
        n: u32,
    },
    Perm(PermData),
    Matrix(MatrixData),
    Affine(AffineData),
    /// Products come only from the Cayley table.
    Table,
}

impl Backend {
    pub fn product(&self, a: u32, b: u32) -> u32 {
        match self {
            Backend::Cyclic { n } => (a + b) % n,
            Backend::Dihedral { n } => {
                let (i, s) = (a % n, a / n);
                let (j, t) = (b % n, b / n);
                let rot = if s == 0 { (i + j) % n } else { (i + n - j) % n };
                (s ^ t) * n + rot
            }
            Backend::Perm(d) => d.product(a, b),
            Backend::Matrix(d) => d.product(a, b),
            Backend::Affine(d) => d.product(a, b),
            Backend::Table => unreachable!("table groups always carry a Cayley table"),
        }
    }

    pub fn format(&self, g: u32) -> String {
        match self {
            Backend::Cyclic { .. } => format!("g^{g}"),
            Backend::Dihedral { n } => match (g % n, g / n) {
                (0, 0) => "1".into(),
                (i, 0) => format!("r^{i}"),
                (0, _) => "s".into(),
                (i, _) => format!("r^{i}s"),
            },
            Backend::Perm(d) => format_cycles(&d.perms[g as usize]),
            Backend::Matrix(d) => {
                let m = d.mats[g as usize];
                let f = &d.field;
                format!("[[{},{}],[{},{}]]", f.format(m[0]), f.format(m[1]), f.format(m[2]), f.format(m[3]))
            }
            Backend::Affine(d) => {
                let (a, b) = d.maps[g as usize];
                format!("t->({})t+({})", d.field.format(a), d.field.format(b))
            }
            Backend::Table => format!("#{g}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cycles_round_trip() {
        let p = parse_cycles("(1,5,3)(2,4)", 5).unwrap();
        assert_eq!(&*p, &[4, 3, 0, 1, 2]);
        assert_eq!(format_cycles(&p), "(1,5,3)(2,4)");
        assert!(parse_cycles("(1,1)", 3).is_err());
        assert!(parse_cycles("(1,4)", 3).is_err());
    }

    #[test]
    fn lexicographic_permutations() {
        let all = all_permutations(4, false);
        assert_eq!(all.len(), 24);
        assert!(all.windows(2).all(|w| w[0] < w[1]));
        assert_eq!(all_permutations(4, true).len(), 12);
    }

    #[test]
    fn dihedral_relations() {
        let b = Backend::Dihedral { n: 5 };
        let r = 1;
        let s = 5;
        // s r s = r^-1
        assert_eq!(b.product(b.product(s, r), s), 4);
        assert_eq!(b.product(s, s), 0);
    }
}

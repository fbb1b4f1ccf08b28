//! Finite groups materialized as indexed element tables.
//!
//! Every group is fully enumerated; element `0` is the identity. Small
//! groups also carry a Cayley table, larger ones multiply payloads
//! (matrices, permutations, affine maps) and look the result up.

pub mod backend;
mod classes;
mod spec;

use std::fmt;
use std::sync::{Arc, OnceLock};

pub use backend::{Matrix, MatrixKind};
pub use classes::{ClassData, ConjugacyClass};
pub use spec::GroupSpec;

use backend::{AffineData, Backend, MatrixData, PermData};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::field::{Fe, FiniteField};

/// Groups up to this order get a full Cayley table.
pub const TABLE_LIMIT: usize = 6000;

/// Index of an element in its group's element table.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, serde::Serialize, serde::Deserialize)]
#[serde(transparent)]
pub struct Elem(pub u32);

impl Elem {
    pub const IDENTITY: Elem = Elem(0);

    #[inline]
    pub fn idx(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Resource caps shared by the group, automorphism and lattice code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(default)]
pub struct Limits {
    pub group_order: usize,
    /// Largest order for which Aut(G) may be found by brute-force search.
    pub generic_aut_order: usize,
    pub lattice_order: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits { group_order: 20_000, generic_aut_order: 1200, lattice_order: 1200 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Family {
    Symmetric(u32),
    Alternating(u32),
    Dihedral(u32),
    Cyclic(u32),
    Psl2(u32),
    Sl2(u32),
    Pgl2(u32),
    Agl1(u32),
    Permutation,
    Table,
}

/// Trace label of a matrix element: `±tr` for PSL₂ in odd characteristic,
/// the trace itself for SL₂ and characteristic 2, `tr²/det` for PGL₂.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
pub struct TracePair {
    pub value: Fe,
    pub label: String,
}

impl fmt::Display for TracePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label)
    }
}

pub struct FiniteGroup {
    label: String,
    family: Family,
    backend: Backend,
    n: usize,
    table: Option<Vec<u16>>,
    inverse: Vec<Elem>,
    orders: Vec<u32>,
    generators: Vec<Elem>,
    classes: OnceLock<ClassData>,
}

impl fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FiniteGroup").field("label", &self.label).field("order", &self.n).finish()
    }
}

/// Parses a group spec and materializes the group.
pub fn build_group(spec: &str, limits: &Limits) -> Result<FiniteGroup> {
    spec.parse::<GroupSpec>()?.build(limits)
}

impl FiniteGroup {
    fn from_backend(label: String, family: Family, backend: Backend, n: usize) -> Self {
        let table = (n <= TABLE_LIMIT).then(|| {
            let mut t = vec![0u16; n * n];
            for a in 0..n {
                for b in 0..n {
                    t[a * n + b] = backend.product(a as u32, b as u32) as u16;
                }
            }
            t
        });
        let mut group = FiniteGroup {
            label,
            family,
            backend,
            n,
            table,
            inverse: Vec::new(),
            orders: Vec::new(),
            generators: Vec::new(),
            classes: OnceLock::new(),
        };
        group.finish();
        group
    }

    /// A group given directly by its Cayley table (row `a`, column `b` holds
    /// the index of `a·b`). Element 0 must be the identity. The table is not
    /// validated; see [`FiniteGroup::check_axioms`].
    pub fn from_cayley_table(label: impl Into<String>, n: usize, table: Vec<u32>) -> Result<Self> {
        if table.len() != n * n || n > u16::MAX as usize + 1 || table.iter().any(|&v| v as usize >= n) {
            return Err(Error::Spec { spec: "table".into(), reason: format!("expected {n}x{n} entries in 0..{n}") });
        }
        let mut group = FiniteGroup {
            label: label.into(),
            family: Family::Table,
            backend: Backend::Table,
            n,
            table: Some(table.into_iter().map(|v| v as u16).collect()),
            inverse: Vec::new(),
            orders: Vec::new(),
            generators: Vec::new(),
            classes: OnceLock::new(),
        };
        group.finish();
        Ok(group)
    }

    fn finish(&mut self) {
        let n = self.n;
        // Orders are bounded by n so a broken table cannot loop forever; 0
        // marks an element whose powers never reach the identity.
        let mut orders = vec![0u32; n];
        let mut inverse = vec![Elem::IDENTITY; n];
        for g in 0..n {
            let g = Elem(g as u32);
            let mut k = 1;
            let mut prev = Elem::IDENTITY;
            let mut x = g;
            while x != Elem::IDENTITY && k <= n {
                prev = x;
                x = self.mul(x, g);
                k += 1;
            }
            if x == Elem::IDENTITY {
                orders[g.idx()] = k as u32;
                inverse[g.idx()] = if k == 1 { g } else { prev };
            }
        }
        self.orders = orders;
        self.inverse = inverse;
        self.generators = self.find_generators();
    }

    /// A small generating set: a pair if one is found among elements of
    /// large order, otherwise a greedy set.
    fn find_generators(&self) -> Vec<Elem> {
        let n = self.n;
        if n == 1 {
            return Vec::new();
        }
        let mut by_order: Vec<Elem> = (1..n as u32).map(Elem).collect();
        by_order.sort_by_key(|g| (std::cmp::Reverse(self.orders[g.idx()]), *g));
        if let Some(&g) = by_order.first() {
            if self.orders[g.idx()] as usize == n {
                return vec![g];
            }
        }
        let mut budget = 2000;
        for &g in by_order.iter().take(4) {
            for &h in &by_order {
                if budget == 0 {
                    break;
                }
                budget -= 1;
                if h != g && self.generates(&[g, h]) {
                    return vec![g, h];
                }
            }
        }
        let mut gens = Vec::new();
        let mut inside = vec![false; n];
        inside[0] = true;
        for &g in &by_order {
            if !inside[g.idx()] {
                gens.push(g);
                for h in self.closure(&gens) {
                    inside[h.idx()] = true;
                }
                if inside.iter().all(|&b| b) {
                    break;
                }
            }
        }
        gens
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn elements(&self) -> impl ExactSizeIterator<Item = Elem> + Clone {
        (0..self.n as u32).map(Elem)
    }

    pub fn generators(&self) -> &[Elem] {
        &self.generators
    }

    pub fn has_table(&self) -> bool {
        self.table.is_some()
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        match &self.table {
            Some(t) => Elem(t[a.idx() * self.n + b.idx()] as u32),
            None => Elem(self.backend.product(a.0, b.0)),
        }
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a.idx()]
    }

    /// `g^c = c⁻¹ g c`.
    #[inline]
    pub fn conj(&self, g: Elem, c: Elem) -> Elem {
        self.mul(self.mul(self.inv(c), g), c)
    }

    /// `[a, b] = a⁻¹ b⁻¹ a b`.
    pub fn commutator(&self, a: Elem, b: Elem) -> Elem {
        self.mul(self.mul(self.inv(a), self.inv(b)), self.mul(a, b))
    }

    /// Least `k ≥ 1` with `g^k = 1`.
    #[inline]
    pub fn element_order(&self, g: Elem) -> u32 {
        self.orders[g.idx()]
    }

    /// `g^k` for any integer `k`, reduced modulo the order of `g`.
    pub fn pow(&self, g: Elem, k: i64) -> Elem {
        let ord = self.element_order(g).max(1) as i64;
        let mut e = k.rem_euclid(ord) as u64;
        let mut result = Elem::IDENTITY;
        let mut base = g;
        while e > 0 {
            if e & 1 == 1 {
                result = self.mul(result, base);
            }
            base = self.mul(base, base);
            e >>= 1;
        }
        result
    }

    pub fn is_involution(&self, g: Elem) -> bool {
        self.element_order(g) == 2
    }

    pub fn involutions(&self) -> impl Iterator<Item = Elem> + '_ {
        self.elements().filter(move |&g| self.is_involution(g))
    }

    /// Whether `gens` generate the whole group. Stops as soon as the closure
    /// passes half the group order.
    pub fn generates(&self, gens: &[Elem]) -> bool {
        if self.n == 1 {
            return true;
        }
        let mut seen = vec![false; self.n];
        let mut queue = Vec::with_capacity(self.n);
        seen[0] = true;
        queue.push(Elem::IDENTITY);
        let half = self.n / 2;
        let mut head = 0;
        while head < queue.len() {
            let h = queue[head];
            head += 1;
            for &s in gens {
                let k = self.mul(h, s);
                if !seen[k.idx()] {
                    seen[k.idx()] = true;
                    queue.push(k);
                    if queue.len() > half {
                        return true;
                    }
                }
            }
        }
        queue.len() == self.n
    }

    /// Elements of the subgroup generated by `gens`, in discovery order.
    pub fn closure(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.n];
        let mut queue = vec![Elem::IDENTITY];
        seen[0] = true;
        let mut head = 0;
        while head < queue.len() {
            let h = queue[head];
            head += 1;
            for &s in gens {
                let k = self.mul(h, s);
                if !seen[k.idx()] {
                    seen[k.idx()] = true;
                    queue.push(k);
                }
            }
        }
        queue
    }

    pub fn classes(&self) -> &ClassData {
        self.classes.get_or_init(|| ClassData::compute(self))
    }

    /// Elements commuting with every generator.
    pub fn center(&self) -> Vec<Elem> {
        self.elements().filter(|&g| self.generators.iter().all(|&s| self.mul(g, s) == self.mul(s, g))).collect()
    }

    /// The concrete payload of an element, as text.
    pub fn format_element(&self, g: Elem) -> String {
        self.backend.format(g.0)
    }

    pub fn field(&self) -> Option<&FiniteField> {
        match &self.backend {
            Backend::Matrix(d) => Some(&d.field),
            Backend::Affine(d) => Some(&d.field),
            _ => None,
        }
    }

    pub fn matrix_kind(&self) -> Option<MatrixKind> {
        match &self.backend {
            Backend::Matrix(d) => Some(d.kind),
            _ => None,
        }
    }

    pub fn matrix(&self, g: Elem) -> Option<Matrix> {
        match &self.backend {
            Backend::Matrix(d) => Some(d.mats[g.idx()]),
            _ => None,
        }
    }

    pub fn element_from_matrix(&self, m: Matrix) -> Option<Elem> {
        match &self.backend {
            Backend::Matrix(d) => d.index_of(m).map(Elem),
            _ => None,
        }
    }

    pub fn affine(&self, g: Elem) -> Option<(Fe, Fe)> {
        match &self.backend {
            Backend::Affine(d) => Some(d.maps[g.idx()]),
            _ => None,
        }
    }

    pub fn element_from_affine(&self, a: Fe, b: Fe) -> Option<Elem> {
        match &self.backend {
            Backend::Affine(d) => d.index_of(a, b).map(Elem),
            _ => None,
        }
    }

    pub fn permutation(&self, g: Elem) -> Option<&[u8]> {
        match &self.backend {
            Backend::Perm(d) => Some(&d.perms[g.idx()]),
            _ => None,
        }
    }

    pub fn element_from_permutation(&self, p: &[u8]) -> Option<Elem> {
        match &self.backend {
            Backend::Perm(d) => d.index_of(p).map(Elem),
            _ => None,
        }
    }

    pub fn degree(&self) -> Option<usize> {
        match &self.backend {
            Backend::Perm(d) => Some(d.degree),
            _ => None,
        }
    }

    /// Parses an element in the group's native notation: cycles like
    /// `(1,5,3)(2,4)`, matrices like `[[1,1],[0,1]]` or `[[t,1],[0,t^2+1]]`,
    /// affine maps as `a,b` or `t->(a)t+(b)`, `r^ks` in dihedral groups,
    /// `g^k` in cyclic ones, or a bare `#index`.
    pub fn parse_element(&self, s: &str) -> Result<Elem> {
        let bad = |reason: &str| Error::Spec { spec: s.to_string(), reason: reason.to_string() };
        let s = s.trim();
        if let Some(idx) = s.strip_prefix('#') {
            let i: usize = idx.parse().map_err(|_| bad("bad index"))?;
            return if i < self.n { Ok(Elem(i as u32)) } else { Err(bad("index out of range")) };
        }
        match &self.backend {
            Backend::Perm(d) => {
                let p = backend::parse_cycles(s, d.degree).map_err(|e| bad(&e))?;
                d.index_of(&p).map(Elem).ok_or_else(|| bad("permutation not in group"))
            }
            Backend::Matrix(d) => {
                let inner: String = s.chars().filter(|c| !matches!(c, '[' | ']' | ' ')).collect();
                let entries: Vec<Fe> = inner.split(',').map(|t| d.field.parse(t)).collect::<Result<_>>()?;
                let m: Matrix = entries.try_into().map_err(|_| bad("expected four entries"))?;
                d.index_of(m).map(Elem).ok_or_else(|| bad("matrix not in group"))
            }
            Backend::Affine(d) => {
                let printed =
                    s.strip_prefix("t->(").and_then(|r| r.strip_suffix(')')).and_then(|r| r.split_once(")t+("));
                let parts: Vec<Fe> = match printed {
                    Some((a, b)) => vec![d.field.parse(a)?, d.field.parse(b)?],
                    None => s.split(',').map(|t| d.field.parse(t)).collect::<Result<_>>()?,
                };
                match parts.as_slice() {
                    [a, b] => d.index_of(*a, *b).map(Elem).ok_or_else(|| bad("not an affine map")),
                    _ => Err(bad("expected `a,b`")),
                }
            }
            Backend::Cyclic { n } => {
                let k = parse_power(s, "g").ok_or_else(|| bad("expected `g^k`"))?;
                Ok(Elem(k.rem_euclid(*n as i64) as u32))
            }
            Backend::Dihedral { n } => {
                let (rot, refl) = match s.strip_suffix('s') {
                    Some(r) => (r, 1),
                    None => (s, 0),
                };
                let k = if rot.is_empty() {
                    0
                } else {
                    parse_power(rot, "r").ok_or_else(|| bad("expected `r^k` or `r^ks`"))?
                };
                Ok(Elem(refl * n + k.rem_euclid(*n as i64) as u32))
            }
            _ => Err(bad("use #index for this group")),
        }
    }

    /// Trace label of a matrix element.
    pub fn trace_pair(&self, g: Elem) -> Result<TracePair> {
        let Backend::Matrix(d) = &self.backend else { return Err(Error::NotMatrixGroup) };
        let f = &d.field;
        let m = d.mats[g.idx()];
        let tr = f.add(m[0], m[3]);
        let odd = f.characteristic() != 2;
        Ok(match d.kind {
            MatrixKind::Projective if odd => {
                let value = tr.min(f.neg(tr));
                let label = if value == 0 { "0".to_string() } else { format!("±{}", f.format(value)) };
                TracePair { value, label }
            }
            MatrixKind::ProjectiveGeneral => {
                let det = backend::det(f, &m);
                let value = f.mul(f.mul(tr, tr), f.inv(det).unwrap());
                TracePair { value, label: format!("tr²/det={}", f.format(value)) }
            }
            _ => TracePair { value: tr, label: f.format(tr) },
        })
    }

    /// The standard involution `[[0,1],[-1,0]]` of SL₂/PSL₂.
    pub fn standard_involution(&self) -> Option<Elem> {
        let Backend::Matrix(d) = &self.backend else { return None };
        let y = d.index_of([0, 1, d.field.neg(1), 0]).map(Elem)?;
        self.is_involution(y).then_some(y)
    }

    /// Exhaustive identity and inverse checks plus associativity on a
    /// deterministic sample of triples. Returns a description of the first
    /// violation.
    pub fn check_axioms(&self) -> std::result::Result<(), String> {
        let n = self.n;
        for g in self.elements() {
            if self.mul(Elem::IDENTITY, g) != g || self.mul(g, Elem::IDENTITY) != g {
                return Err(format!("element 0 is not an identity for {g}"));
            }
            if self.element_order(g) == 0 {
                return Err(format!("powers of {g} never reach the identity"));
            }
            let gi = self.inv(g);
            if self.mul(g, gi) != Elem::IDENTITY || self.mul(gi, g) != Elem::IDENTITY {
                return Err(format!("{gi} is not an inverse of {g}"));
            }
        }
        let samples = 20_000usize.min(n * n * n);
        let mut rng = ChaCha8Rng::seed_from_u64(n as u64);
        for _ in 0..samples {
            let mut next = || Elem(rng.random_range(0..n as u32));
            let (a, b, c) = (next(), next(), next());
            if self.mul(self.mul(a, b), c) != self.mul(a, self.mul(b, c)) {
                return Err(format!("associativity fails on ({a}, {b}, {c})"));
            }
        }
        Ok(())
    }

    /// Applies a field automorphism entrywise (matrix and affine backends).
    pub(crate) fn map_entries(&self, g: Elem, f: impl Fn(Fe) -> Fe) -> Option<Elem> {
        match &self.backend {
            Backend::Matrix(d) => d.index_of(d.mats[g.idx()].map(&f)).map(Elem),
            Backend::Affine(d) => {
                let (a, b) = d.maps[g.idx()];
                d.index_of(f(a), f(b)).map(Elem)
            }
            _ => None,
        }
    }

    pub(crate) fn cyclic(n: u32) -> Self {
        Self::from_backend(format!("cyclic:{n}"), Family::Cyclic(n), Backend::Cyclic { n }, n as usize)
    }

    pub(crate) fn dihedral(n: u32) -> Self {
        Self::from_backend(format!("dihedral:{n}"), Family::Dihedral(n), Backend::Dihedral { n }, 2 * n as usize)
    }

    pub(crate) fn permutations(label: String, family: Family, degree: usize, perms: Vec<Box<[u8]>>) -> Self {
        let data = PermData::new(degree, perms);
        let n = data.perms.len();
        Self::from_backend(label, family, Backend::Perm(data), n)
    }

    pub(crate) fn matrices(label: String, family: Family, field: Arc<FiniteField>, kind: MatrixKind) -> Self {
        let data = MatrixData::build(field, kind);
        let n = data.mats.len();
        Self::from_backend(label, family, Backend::Matrix(data), n)
    }

    pub(crate) fn affine_group(label: String, family: Family, field: Arc<FiniteField>) -> Self {
        let data = AffineData::build(field);
        let n = data.maps.len();
        Self::from_backend(label, family, Backend::Affine(data), n)
    }
}

/// `1`, `g`, `g^k` (with `g` the given letter).
fn parse_power(s: &str, letter: &str) -> Option<i64> {
    if s == "1" {
        return Some(0);
    }
    let rest = s.strip_prefix(letter)?;
    if rest.is_empty() {
        return Some(1);
    }
    rest.strip_prefix('^')?.parse().ok()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(spec: &str) -> FiniteGroup {
        build_group(spec, &Limits::default()).unwrap()
    }

    #[test]
    fn orders_of_families() {
        assert_eq!(g("psl2:7").order(), 168);
        assert_eq!(g("sl2:8").order(), 504);
        assert_eq!(g("psl2:13").order(), 1092);
        assert_eq!(g("sl2:3").order(), 24);
        assert_eq!(g("pgl2:5").order(), 120);
        assert_eq!(g("sym:4").order(), 24);
        assert_eq!(g("alt:5").order(), 60);
        assert_eq!(g("dihedral:5").order(), 10);
        assert_eq!(g("cyclic:12").order(), 12);
        assert_eq!(g("agl1:32").order(), 992);
    }

    #[test]
    fn group_axioms_hold_for_every_backend() {
        for spec in [
            "psl2:7",
            "sl2:8",
            "sl2:5",
            "pgl2:5",
            "sym:5",
            "alt:4",
            "dihedral:6",
            "cyclic:9",
            "agl1:9",
            "perm:(1,2,3);(1,2)",
        ] {
            let grp = g(spec);
            grp.check_axioms().unwrap();
            for x in grp.elements() {
                assert_eq!(grp.mul(x, grp.inv(x)), Elem::IDENTITY);
                assert_eq!(grp.order() % grp.element_order(x) as usize, 0, "{spec}");
            }
        }
    }

    #[test]
    fn table_free_multiplication_agrees() {
        // psl2:29 is above TABLE_LIMIT and multiplies matrices directly.
        let big = g("psl2:29");
        assert!(!big.has_table());
        assert_eq!(big.order(), 12180);
        let x = big.parse_element("[[1,1],[0,1]]").unwrap();
        assert_eq!(big.element_order(x), 29);
        let y = big.standard_involution().unwrap();
        assert_eq!(big.element_order(y), 2);
    }

    #[test]
    fn element_orders_in_psl2_7() {
        let grp = g("psl2:7");
        let x = grp.parse_element("[[1,1],[0,1]]").unwrap();
        assert_eq!(grp.element_order(x), 7);
        assert_eq!(grp.element_order(Elem::IDENTITY), 1);
        assert_eq!(grp.involutions().count(), 21);
        assert_eq!(g("sl2:8").involutions().count(), 63);
    }

    #[test]
    fn generation() {
        let grp = g("psl2:7");
        let x = grp.parse_element("[[1,1],[0,1]]").unwrap();
        let y = grp.parse_element("[[0,1],[-1,0]]").unwrap();
        assert!(grp.generates(&[x, y]));
        assert!(!grp.generates(&[Elem::IDENTITY]));
        assert!(!grp.generates(&[x]));

        let s5 = g("sym:5");
        let x = s5.parse_element("(1,5,3)(2,4)").unwrap();
        let y = s5.parse_element("(1,2)(3,4)").unwrap();
        assert!(s5.generates(&[x, y]));
    }

    #[test]
    fn trace_pairs() {
        let grp = g("psl2:7");
        let x = grp.parse_element("[[1,1],[0,1]]").unwrap();
        assert_eq!(grp.trace_pair(x).unwrap().label, "±2");
        assert_eq!(grp.trace_pair(Elem::IDENTITY).unwrap().label, "±2");

        let sl = g("sl2:8:1,1,0,1");
        let x = sl.parse_element("[[t,1],[0,t^2+1]]").unwrap();
        assert_eq!(sl.trace_pair(x).unwrap().label, "t^2+t+1");
        assert!(g("sym:3").trace_pair(Elem::IDENTITY).is_err());
    }

    #[test]
    fn affine_group_structure() {
        let grp = g("agl1:32");
        // translations t -> t + b form a normal subgroup of order 32
        let translations: Vec<Elem> = grp.elements().filter(|&h| grp.affine(h).unwrap().0 == 1).collect();
        assert_eq!(translations.len(), 32);
        for c in grp.elements() {
            for &tr in &translations {
                assert_eq!(grp.affine(grp.conj(tr, c)).unwrap().0, 1);
            }
        }
    }

    #[test]
    fn cayley_table_groups() {
        let src = g("sym:3");
        let n = src.order();
        let table: Vec<u32> = (0..n)
            .flat_map(|a| (0..n).map(move |b| (a, b)))
            .map(|(a, b)| src.mul(Elem(a as u32), Elem(b as u32)).0)
            .collect();
        let copy = FiniteGroup::from_cayley_table("s3", n, table.clone()).unwrap();
        assert!(copy.check_axioms().is_ok());
        assert_eq!(copy.generators().len(), 2);

        let mut broken = table;
        broken.swap(n + 1, n + 2);
        let bad = FiniteGroup::from_cayley_table("broken", n, broken).unwrap();
        assert!(bad.check_axioms().is_err());
    }
}

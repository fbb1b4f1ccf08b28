//! Counting maps without enumerating orbits: class triple counts, the
//! subgroup lattice with its Möbius function, and closed formulas.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::group::{Elem, FiniteGroup, Limits, MatrixKind};
use crate::map::{MapTriple, Reflexibility};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TripleCount {
    pub x_class: String,
    pub y_class: String,
    pub z_class: String,
    /// Triples `(x, y, z)` in the three classes with `xyz = 1`.
    pub total: u64,
    /// Those with `⟨x, y⟩ = G`.
    pub generating: u64,
}

/// Counts `x ∈ X`, `y ∈ Y` with `(xy)⁻¹ ∈ Z`, by direct search.
pub fn count_triples(g: &FiniteGroup, x: usize, y: usize, z: usize) -> TripleCount {
    let cd = g.classes();
    let ys = &cd.class(y).elements;
    let (total, generating) = cd
        .class(x)
        .elements
        .par_iter()
        .map(|&a| {
            let mut t = (0u64, 0u64);
            for &b in ys {
                let c = g.inv(g.mul(a, b));
                if cd.class_of(c) == z {
                    t.0 += 1;
                    if g.generates(&[a, b]) {
                        t.1 += 1;
                    }
                }
            }
            t
        })
        .reduce(|| (0, 0), |p, q| (p.0 + q.0, p.1 + q.1));
    TripleCount {
        x_class: cd.class(x).name.clone(),
        y_class: cd.class(y).name.clone(),
        z_class: cd.class(z).name.clone(),
        total,
        generating,
    }
}

/// [`count_triples`] with classes given by name, e.g. `("7A", "2A", "7B")`.
pub fn count_triples_by_name(g: &FiniteGroup, x: &str, y: &str, z: &str) -> Result<TripleCount> {
    let cd = g.classes();
    let find = |n: &str| cd.by_name(n).ok_or_else(|| Error::UnknownClass(n.to_string()));
    Ok(count_triples(g, find(x)?, find(y)?, find(z)?))
}

/// Fixed-width bitset over element indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }

    fn subset_of(&self, other: &Bits) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a & !b == 0)
    }
}

#[derive(Clone, Debug)]
pub struct Subgroup {
    /// Sorted element indices.
    pub elements: Vec<Elem>,
    /// A generating set.
    pub generators: Vec<Elem>,
    pub involutions: usize,
    bits: Bits,
}

impl Subgroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: Elem) -> bool {
        self.bits.get(g.idx())
    }

    pub fn is_subgroup_of(&self, other: &Subgroup) -> bool {
        other.order().is_multiple_of(self.order()) && self.bits.subset_of(&other.bits)
    }
}

/// σ(H) = |H|·(number of involutions in H + 1), the number of pairs
/// `(x, y)` in H with `y² = 1`.
pub fn sigma(h: &Subgroup) -> u64 {
    h.order() as u64 * (h.involutions as u64 + 1)
}

#[derive(Clone, Debug)]
pub struct SubgroupLattice {
    /// Sorted by order, then elements; the last entry is G.
    pub subgroups: Vec<Subgroup>,
    pub mu: Vec<i64>,
}

impl SubgroupLattice {
    pub fn len(&self) -> usize {
        self.subgroups.len()
    }

    pub fn is_empty(&self) -> bool {
        self.subgroups.is_empty()
    }

    /// Σ_H μ(H)·σ(H).
    pub fn phi(&self) -> i64 {
        self.subgroups.iter().zip(&self.mu).map(|(h, &m)| m * sigma(h) as i64).sum()
    }
}

fn make_subgroup(g: &FiniteGroup, generators: Vec<Elem>, stop_above: usize) -> Option<Subgroup> {
    let n = g.order();
    let mut bits = Bits::new(n);
    bits.set(0);
    let mut elements = vec![Elem::IDENTITY];
    let mut head = 0;
    while head < elements.len() {
        let h = elements[head];
        head += 1;
        for &s in &generators {
            let k = g.mul(h, s);
            if !bits.get(k.idx()) {
                bits.set(k.idx());
                elements.push(k);
                if elements.len() > stop_above {
                    return None;
                }
            }
        }
    }
    elements.sort();
    let involutions = elements.iter().filter(|&&e| g.is_involution(e)).count();
    Some(Subgroup { elements, generators, involutions, bits })
}

/// All subgroups of G and their Möbius values. Subgroups are found by
/// joining cyclic subgroups of prime-power order until nothing new appears.
pub fn subgroup_lattice(g: &FiniteGroup, limits: &Limits) -> Result<SubgroupLattice> {
    let n = g.order();
    if n > limits.lattice_order {
        return Err(Error::CapExceeded { what: "subgroup lattice", size: n as u64, cap: limits.lattice_order as u64 });
    }
    let whole = make_subgroup(g, g.generators().to_vec(), n).unwrap();
    let is_prime_power = |k: u32| k > 1 && crate::field::prime_power(k as u64).is_ok();
    let mut seen: HashMap<Bits, usize> = HashMap::new();
    let mut subs: Vec<Subgroup> = Vec::new();
    let mut insert = |h: Subgroup, subs: &mut Vec<Subgroup>| -> bool {
        if seen.contains_key(&h.bits) {
            return false;
        }
        seen.insert(h.bits.clone(), subs.len());
        subs.push(h);
        true
    };
    insert(make_subgroup(g, vec![], n).unwrap(), &mut subs);
    let mut atoms: Vec<Subgroup> = Vec::new();
    for e in g.elements() {
        if is_prime_power(g.element_order(e)) {
            let c = make_subgroup(g, vec![e], n).unwrap();
            if insert(c.clone(), &mut subs) {
                atoms.push(c);
            }
        }
    }
    insert(whole.clone(), &mut subs);
    // Join every subgroup with every atom it does not contain; process in
    // order of size so that small joins are found first.
    let mut frontier: Vec<usize> = (0..subs.len()).collect();
    while !frontier.is_empty() {
        frontier.sort_by_key(|&i| subs[i].order());
        let joins: Vec<Subgroup> = frontier
            .par_iter()
            .flat_map_iter(|&i| {
                let h = &subs[i];
                atoms
                    .iter()
                    .filter(|a| !h.contains(a.generators[0]))
                    .filter_map(|a| {
                        let mut gens = h.generators.clone();
                        gens.push(a.generators[0]);
                        make_subgroup(g, gens, n / 2)
                    })
                    .collect::<Vec<_>>()
            })
            .collect();
        let mut next = Vec::new();
        for j in joins {
            let idx = subs.len();
            if insert(j, &mut subs) {
                next.push(idx);
            }
        }
        frontier = next;
    }
    subs.sort_by(|a, b| (a.order(), &a.elements).cmp(&(b.order(), &b.elements)));
    let mu = moebius(&subs);
    Ok(SubgroupLattice { subgroups: subs, mu })
}

/// μ(G) = 1 and Σ_{K ≥ H} μ(K) = 0 for H < G; `subs` sorted by order
/// with G last.
fn moebius(subs: &[Subgroup]) -> Vec<i64> {
    let s = subs.len();
    let mut mu = vec![0i64; s];
    mu[s - 1] = 1;
    for i in (0..s - 1).rev() {
        let h = &subs[i];
        let sum: i64 = (i + 1..s).filter(|&k| mu[k] != 0 && h.is_subgroup_of(&subs[k])).map(|k| mu[k]).sum();
        mu[i] = -sum;
    }
    mu
}

/// φ(G) via Möbius inversion over the subgroup lattice.
pub fn phi_moebius(g: &FiniteGroup, limits: &Limits) -> Result<i64> {
    Ok(subgroup_lattice(g, limits)?.phi())
}

/// φ(G): pairs `(x, y)` with `y² = 1` (including `y = 1`) and
/// `⟨x, y⟩ = G`, counted directly one conjugacy class of `y` at a time.
pub fn phi_direct(g: &FiniteGroup) -> u64 {
    let cd = g.classes();
    cd.classes()
        .iter()
        .filter(|c| c.order <= 2)
        .map(|c| {
            let y = c.representative;
            let partners = g.elements().collect::<Vec<_>>().into_par_iter().filter(|&x| g.generates(&[x, y])).count();
            partners as u64 * c.size() as u64
        })
        .sum()
}

/// |𝒪(G)| = φ(G) / |Aut(G)|.
pub fn order_of_o(phi: u64, aut_order: usize) -> Result<u64> {
    let aut = aut_order as u64;
    if !phi.is_multiple_of(aut) {
        return Err(Error::Divisibility { phi, aut });
    }
    Ok(phi / aut)
}

/// The number-theoretic Möbius function.
pub fn number_moebius(mut n: u64) -> i64 {
    let mut result = 1;
    let mut p = 2;
    while p * p <= n {
        if n.is_multiple_of(p) {
            n /= p;
            if n.is_multiple_of(p) {
                return 0;
            }
            result = -result;
        }
        p += 1;
    }
    if n > 1 {
        result = -result;
    }
    result
}

/// |𝒪(PSL₂(2^e))| = (1/e) Σ_{f | e} μ(e/f)(2^f − 1)(2^f − 2).
pub fn psl2_even_closed_form(e: u32) -> u64 {
    let e64 = e as u64;
    let sum: i64 = (1..=e64)
        .filter(|f| e64.is_multiple_of(*f))
        .map(|f| number_moebius(e64 / f) * ((1i64 << f) - 1) * ((1i64 << f) - 2))
        .sum();
    (sum / e as i64) as u64
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HallVerdict {
    /// Trace of the order-7 generator `x`, up to sign.
    pub tau: String,
    /// `3 − τ²`.
    pub value: String,
    pub square: bool,
    /// Whether `3 − τ³` is a square, for either sign of `τ`.
    pub cubic_square: [bool; 2],
    pub verdict: Reflexibility,
}

/// Predicts whether a map of type {3,7} for PSL₂(q) is inner or outer
/// regular: inner exactly when `3 − τ²` is a square in 𝔽_q.
pub fn hall_square_criterion(m: &MapTriple<'_>) -> Result<HallVerdict> {
    let g = m.group();
    let (p, q) = (m.face_length(), m.valency());
    if (p, q) != (3, 7) {
        return Err(Error::WrongType { p, q });
    }
    if g.matrix_kind() != Some(MatrixKind::Projective) {
        return Err(Error::NotMatrixGroup);
    }
    let f = g.field().unwrap();
    let [a, _, _, d] = g.matrix(m.x).unwrap();
    let tau = f.add(a, d);
    let three = f.from_int(3);
    let value = f.sub(three, f.mul(tau, tau));
    let cube = f.pow(tau, 3);
    let square = f.is_square(value);
    Ok(HallVerdict {
        tau: f.format(tau),
        value: f.format(value),
        square,
        cubic_square: [f.is_square(f.sub(three, cube)), f.is_square(f.add(three, cube))],
        verdict: if square { Reflexibility::InnerRegular } else { Reflexibility::OuterRegular },
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn group(spec: &str) -> FiniteGroup {
        build_group(spec, &Limits::default()).unwrap()
    }

    #[test]
    fn hurwitz_triples_in_psl2_7() {
        let g = group("psl2:7");
        assert_eq!(count_triples_by_name(&g, "7A", "2A", "7B").unwrap().total, 0);
        assert_eq!(count_triples_by_name(&g, "7B", "2A", "7A").unwrap().total, 0);
        let a = count_triples_by_name(&g, "7A", "2A", "7A").unwrap();
        let b = count_triples_by_name(&g, "7B", "2A", "7B").unwrap();
        assert_eq!(a.total + b.total, 336);
        assert_eq!(a.generating + b.generating, 336);
        assert!(count_triples_by_name(&g, "7C", "2A", "7A").is_err());
    }

    #[test]
    fn small_lattices() {
        let c5 = group("cyclic:5");
        let l = subgroup_lattice(&c5, &Limits::default()).unwrap();
        assert_eq!(l.len(), 2);
        assert_eq!(l.mu, vec![-1, 1]);

        let s3 = group("sym:3");
        let l = subgroup_lattice(&s3, &Limits::default()).unwrap();
        let by_order: Vec<(usize, i64)> = l.subgroups.iter().zip(&l.mu).map(|(h, &m)| (h.order(), m)).collect();
        assert_eq!(by_order, vec![(1, 3), (2, -1), (2, -1), (2, -1), (3, -1), (6, 1)]);
    }

    #[test]
    fn sigma_values() {
        let g = group("psl2:7");
        let l = subgroup_lattice(&g, &Limits::default()).unwrap();
        assert_eq!(sigma(&l.subgroups[0]), 1);
        assert_eq!(sigma(&l.subgroups[1]), 4);
        assert_eq!(sigma(l.subgroups.last().unwrap()), 168 * 22);
    }

    #[test]
    fn phi_of_c2() {
        let g = group("cyclic:2");
        assert_eq!(phi_direct(&g), 3);
        assert_eq!(phi_moebius(&g, &Limits::default()).unwrap(), 3);
    }

    #[test]
    fn closed_form() {
        let v: Vec<u64> = (2..=5).map(psl2_even_closed_form).collect();
        assert_eq!(v, vec![3, 14, 51, 186]);
        assert_eq!(number_moebius(1), 1);
        assert_eq!(number_moebius(12), 0);
        assert_eq!(number_moebius(30), -1);
    }

    #[test]
    fn divisibility() {
        assert_eq!(order_of_o(1680, 336).unwrap(), 5);
        assert!(matches!(order_of_o(1681, 336), Err(Error::Divisibility { .. })));
    }

    #[test]
    fn lattice_cap() {
        let g = group("psl2:13");
        let small = Limits { lattice_order: 1000, ..Limits::default() };
        assert!(matches!(subgroup_lattice(&g, &small), Err(Error::CapExceeded { .. })));
    }

    #[test]
    fn hall_agrees_with_aut_on_small_hurwitz_groups() {
        use crate::atlas::enumerate_maps;
        use crate::automorphism::compute_aut;
        for (spec, inner) in [("psl2:7", 0), ("psl2:13", 1)] {
            let g = group(spec);
            let a = compute_aut(&g, &Limits::default()).unwrap();
            let mut seen = 0;
            let mut inner_seen = 0;
            for m in enumerate_maps(&a).iter().filter(|m| (m.invariants.p, m.invariants.q) == (3, 7)) {
                let v = hall_square_criterion(&m.triple(&a)).unwrap();
                assert_eq!(v.verdict, m.invariants.reflexibility, "{spec} {}", m.invariants.extended_type());
                seen += 1;
                inner_seen += (v.verdict == Reflexibility::InnerRegular) as usize;
            }
            assert_eq!((seen, inner_seen), (if spec == "psl2:7" { 1 } else { 3 }, inner));
        }
    }

    #[test]
    fn hall_rejects_other_types() {
        use crate::map::make_map;
        let g = group("psl2:7");
        let k = make_map(&g, g.parse_element("[[1,1],[0,1]]").unwrap(), g.standard_involution().unwrap()).unwrap();
        let d = crate::ops::dual(&k);
        assert!(matches!(hall_square_criterion(&d), Err(Error::WrongType { p: 7, q: 3 })));
        let s = group("sym:5");
        let x = s.parse_element("(1,2,3,4)").unwrap();
        let y = s.parse_element("(4,5)").unwrap();
        let m = make_map(&s, x, y).unwrap();
        assert!(hall_square_criterion(&m).is_err());
    }
}

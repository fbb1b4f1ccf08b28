//! Aut(G) as a set of generator images.
//!
//! An automorphism is stored by its images of the group's generating set;
//! the image of an arbitrary element is recovered by walking a spanning tree
//! of the Cayley graph. Full index permutations are built only on demand.

use std::collections::{HashMap, VecDeque};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::group::{Elem, Family, FiniteGroup, Limits};

/// Index of an automorphism inside its [`AutGroup`]. Id 0 is the identity.
pub type AutId = usize;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automorphism {
    pub id: AutId,
    /// Images of the group's generators, in order.
    pub images: Vec<Elem>,
    /// Least element `c` such that this automorphism is `g ↦ g^c`.
    pub inner: Option<Elem>,
}

impl Automorphism {
    pub fn is_inner(&self) -> bool {
        self.inner.is_some()
    }
}

/// Aut(G)-orbit of involutions.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct InvolutionOrbit {
    pub representative: Elem,
    pub size: usize,
    /// Least `x` with `⟨x, representative⟩ = G`, if any.
    pub witness: Option<Elem>,
}

impl InvolutionOrbit {
    pub fn useful(&self) -> bool {
        self.witness.is_some()
    }
}

/// Spanning tree of the Cayley graph on generators and their inverses.
#[derive(Clone, Debug)]
struct Tree {
    /// `letters[2i] = s_i`, `letters[2i+1] = s_i⁻¹`.
    letters: Vec<Elem>,
    /// `(parent, letter)` with `g = parent · letters[letter]`; identity has `u32::MAX`.
    parent: Vec<(u32, u8)>,
    /// Elements in BFS order, identity first.
    order: Vec<Elem>,
}

impl Tree {
    fn new(g: &FiniteGroup, gens: &[Elem]) -> Self {
        let letters: Vec<Elem> = gens.iter().flat_map(|&s| [s, g.inv(s)]).collect();
        let n = g.order();
        let mut parent = vec![(u32::MAX, 0u8); n];
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        seen[0] = true;
        order.push(Elem::IDENTITY);
        let mut head = 0;
        while head < order.len() {
            let h = order[head];
            head += 1;
            for (li, &s) in letters.iter().enumerate() {
                let k = g.mul(h, s);
                if !seen[k.idx()] {
                    seen[k.idx()] = true;
                    parent[k.idx()] = (h.0, li as u8);
                    order.push(k);
                }
            }
        }
        Tree { letters, parent, order }
    }

    fn spans(&self) -> bool {
        self.order.len() == self.parent.len()
    }

    /// Image of `h` under the homomorphism sending `letters[2i]` to `img[i]`.
    fn eval(&self, g: &FiniteGroup, img: &[Elem], mut h: Elem) -> Elem {
        let mut acc = Elem::IDENTITY;
        while h != Elem::IDENTITY {
            let (p, l) = self.parent[h.idx()];
            let s = img[l as usize / 2];
            let s = if l % 2 == 0 { s } else { g.inv(s) };
            acc = g.mul(s, acc);
            h = Elem(p);
        }
        acc
    }

    /// Extends `img` to a map on all of G along the tree. Returns `None`
    /// unless the result is a bijective homomorphism.
    fn extend(&self, g: &FiniteGroup, img: &[Elem]) -> Option<Vec<Elem>> {
        let n = g.order();
        let mut perm = vec![Elem::IDENTITY; n];
        let letter_img: Vec<Elem> = img.iter().flat_map(|&s| [s, g.inv(s)]).collect();
        for &h in &self.order[1..] {
            let (p, l) = self.parent[h.idx()];
            perm[h.idx()] = g.mul(perm[p as usize], letter_img[l as usize]);
        }
        let mut hit = vec![false; n];
        for &v in &perm {
            if std::mem::replace(&mut hit[v.idx()], true) {
                return None;
            }
        }
        for h in g.elements() {
            for (li, &s) in self.letters.iter().enumerate().step_by(2) {
                if perm[g.mul(h, s).idx()] != g.mul(perm[h.idx()], letter_img[li]) {
                    return None;
                }
            }
        }
        Some(perm)
    }
}

pub struct AutGroup<'g> {
    group: &'g FiniteGroup,
    base: Vec<Elem>,
    tree: Tree,
    /// Flat `len × base.len()` image table.
    images: Vec<Elem>,
    index: HashMap<Box<[Elem]>, u32>,
    inner: Vec<Option<Elem>>,
    inner_order: usize,
    generators: Vec<AutId>,
    /// Full permutations of the generators.
    generator_perms: Vec<Vec<Elem>>,
}

impl std::fmt::Debug for AutGroup<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AutGroup")
            .field("group", &self.group.label())
            .field("order", &self.order())
            .field("inner", &self.inner_order)
            .finish()
    }
}

fn base_key(v: &[Elem]) -> Box<[Elem]> {
    v.to_vec().into_boxed_slice()
}

/// Computes Aut(G): family shortcuts where the answer is known, otherwise a
/// search over generator images (bounded by `limits.generic_aut_order`).
pub fn compute_aut<'g>(g: &'g FiniteGroup, limits: &Limits) -> Result<AutGroup<'g>> {
    let base = g.generators().to_vec();
    let tree = Tree::new(g, &base);
    debug_assert!(tree.spans());
    let mut aut = AutGroup {
        group: g,
        base,
        tree,
        images: Vec::new(),
        index: HashMap::new(),
        inner: Vec::new(),
        inner_order: 0,
        generators: Vec::new(),
        generator_perms: Vec::new(),
    };
    match family_generators(g) {
        Some(extra) => aut.close(extra),
        None => {
            if g.order() > limits.generic_aut_order {
                return Err(Error::CapExceeded {
                    what: "automorphism search",
                    size: g.order() as u64,
                    cap: limits.generic_aut_order as u64,
                });
            }
            aut.search();
        }
    }
    aut.mark_inner();
    aut.generator_perms = aut.generators.iter().map(|&a| aut.permutation(a)).collect();
    Ok(aut)
}

/// Outer generators for families with a known automorphism group, as maps
/// on elements. `None` means no shortcut applies.
#[allow(clippy::type_complexity)]
fn family_generators(g: &FiniteGroup) -> Option<Vec<Box<dyn Fn(Elem) -> Elem + '_>>> {
    let mut extra: Vec<Box<dyn Fn(Elem) -> Elem + '_>> = Vec::new();
    match g.family() {
        Family::Symmetric(n) if n != 6 => {}
        Family::Alternating(n) if n != 6 => {
            if n >= 3 {
                extra.push(Box::new(move |h| {
                    let p = g.permutation(h).unwrap();
                    let mut q = p.to_vec();
                    // conjugate by the transposition (1 2): swap labels 0 and 1
                    let sw = |i: u8| match i {
                        0 => 1,
                        1 => 0,
                        i => i,
                    };
                    for i in 0..p.len() {
                        q[sw(i as u8) as usize] = sw(p[i]);
                    }
                    g.element_from_permutation(&q).unwrap()
                }));
            }
        }
        Family::Psl2(_) | Family::Sl2(_) | Family::Pgl2(_) | Family::Agl1(_) => {
            let f = g.field().unwrap();
            if f.degree() > 1 {
                extra.push(Box::new(move |h| g.map_entries(h, |a| f.frobenius(a, 1)).unwrap()));
            }
            if matches!(g.family(), Family::Psl2(_) | Family::Sl2(_)) && f.characteristic() != 2 {
                let w = f.primitive_element();
                let wi = f.inv(w).unwrap();
                extra.push(Box::new(move |h| {
                    let [a, b, c, d] = g.matrix(h).unwrap();
                    g.element_from_matrix([a, f.mul(wi, b), f.mul(w, c), d]).unwrap()
                }));
            }
        }
        _ => return None,
    }
    Some(extra)
}

impl<'g> AutGroup<'g> {
    fn insert(&mut self, img: &[Elem]) -> (AutId, bool) {
        if let Some(&id) = self.index.get(img) {
            return (id as usize, false);
        }
        let id = self.len();
        self.images.extend_from_slice(img);
        self.index.insert(base_key(img), id as u32);
        (id, true)
    }

    fn close(&mut self, extra: Vec<Box<dyn Fn(Elem) -> Elem + 'g>>) {
        let g = self.group;
        let k = self.base.len();
        let base = self.base.clone();
        self.insert(&base);
        let mut gens: Vec<Vec<Elem>> = base.iter().map(|&c| base.iter().map(|&s| g.conj(s, c)).collect()).collect();
        gens.extend(extra.iter().map(|f| base.iter().map(|&s| f(s)).collect()));
        let mut gen_ids = Vec::new();
        for img in &gens {
            let (id, _) = self.insert(img);
            if id != 0 && !gen_ids.contains(&id) {
                gen_ids.push(id);
            }
        }
        self.generators = gen_ids.clone();
        // BFS over the Cayley graph of Aut(G): next = γ ∘ current.
        let mut queue: VecDeque<AutId> = (0..self.len()).collect();
        let mut buf = vec![Elem::IDENTITY; k];
        while let Some(cur) = queue.pop_front() {
            for &gid in &gen_ids {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = self.apply(gid, self.images[cur * k + i]);
                }
                let (id, new) = self.insert(&buf);
                if new {
                    queue.push_back(id);
                }
            }
        }
    }

    fn search(&mut self) {
        let g = self.group;
        let classes = g.classes();
        let k = self.base.len();
        let sig = |h: Elem| (g.element_order(h), classes.class(classes.class_of(h)).size());
        let cands: Vec<Vec<Elem>> =
            self.base.iter().map(|&s| g.elements().filter(|&h| sig(h) == sig(s)).collect()).collect();
        let pair_orders: Vec<(usize, usize, u32)> = (0..k)
            .flat_map(|i| (i + 1..k).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, g.element_order(g.mul(self.base[i], self.base[j]))))
            .collect();
        let total: usize = cands.iter().map(|c| c.len()).product();
        let tree = &self.tree;
        let found: Vec<Vec<Elem>> = (0..total)
            .into_par_iter()
            .filter_map(|mut code| {
                let mut img = Vec::with_capacity(k);
                for c in &cands {
                    img.push(c[code % c.len()]);
                    code /= c.len();
                }
                if pair_orders.iter().any(|&(i, j, o)| g.element_order(g.mul(img[i], img[j])) != o) {
                    return None;
                }
                tree.extend(g, &img).map(|_| img)
            })
            .collect();
        let mut found = found;
        found.sort_by_key(|img| (img != &self.base, img.clone()));
        for img in &found {
            self.insert(img);
        }
        // Generators: conjugations by the base, then outer elements until
        // the whole group is reached.
        let base = self.base.clone();
        let mut candidates: Vec<AutId> = base
            .iter()
            .map(|&c| self.index[base.iter().map(|&s| g.conj(s, c)).collect::<Vec<_>>().as_slice()] as usize)
            .collect();
        candidates.extend(1..self.len());
        let mut gens: Vec<AutId> = Vec::new();
        let mut reached = vec![false; self.len()];
        reached[0] = true;
        let mut count = 1;
        for c in candidates {
            if count == self.len() {
                break;
            }
            if reached[c] {
                continue;
            }
            gens.push(c);
            reached = self.subgroup_marks(&gens);
            count = reached.iter().filter(|&&b| b).count();
        }
        self.generators = gens;
    }

    fn subgroup_marks(&self, gens: &[AutId]) -> Vec<bool> {
        let k = self.base.len();
        let mut seen = vec![false; self.len()];
        seen[0] = true;
        let mut queue = vec![0usize];
        let mut head = 0;
        let mut buf = vec![Elem::IDENTITY; k];
        while head < queue.len() {
            let cur = queue[head];
            head += 1;
            for &gid in gens {
                for (i, b) in buf.iter_mut().enumerate() {
                    *b = self.apply(gid, self.images[cur * k + i]);
                }
                let id = self.index[buf.as_slice()] as usize;
                if !seen[id] {
                    seen[id] = true;
                    queue.push(id);
                }
            }
        }
        seen
    }

    fn mark_inner(&mut self) {
        let g = self.group;
        let mut inner = vec![None; self.len()];
        let mut count = 0;
        for c in g.elements() {
            let img: Vec<Elem> = self.base.iter().map(|&s| g.conj(s, c)).collect();
            let id = self.index[img.as_slice()] as usize;
            if inner[id].is_none() {
                inner[id] = Some(c);
                count += 1;
            }
        }
        self.inner = inner;
        self.inner_order = count;
    }

    pub fn group(&self) -> &'g FiniteGroup {
        self.group
    }

    pub fn len(&self) -> usize {
        if self.base.is_empty() {
            1
        } else {
            self.images.len() / self.base.len()
        }
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// |Aut(G)|.
    pub fn order(&self) -> usize {
        self.len()
    }

    /// |Inn(G)| = |G| / |Z(G)|.
    pub fn inner_order(&self) -> usize {
        self.inner_order
    }

    pub fn generators(&self) -> &[AutId] {
        &self.generators
    }

    fn images_of(&self, a: AutId) -> &[Elem] {
        let k = self.base.len();
        &self.images[a * k..(a + 1) * k]
    }

    pub fn automorphism(&self, a: AutId) -> Automorphism {
        Automorphism { id: a, images: self.images_of(a).to_vec(), inner: self.inner[a] }
    }

    /// `α(h)`.
    #[inline]
    pub fn apply(&self, a: AutId, h: Elem) -> Elem {
        if self.base.is_empty() {
            return h;
        }
        self.tree.eval(self.group, self.images_of(a), h)
    }

    /// The full permutation `h ↦ α(h)` of element indices.
    pub fn permutation(&self, a: AutId) -> Vec<Elem> {
        let g = self.group;
        let img: Vec<Elem> = self.images_of(a).iter().flat_map(|&s| [s, g.inv(s)]).collect();
        let mut perm = vec![Elem::IDENTITY; g.order()];
        for &h in &self.tree.order[1..] {
            let (p, l) = self.tree.parent[h.idx()];
            perm[h.idx()] = g.mul(perm[p as usize], img[l as usize]);
        }
        perm
    }

    /// `α ∘ β`.
    pub fn compose(&self, a: AutId, b: AutId) -> AutId {
        let img: Vec<Elem> = self.images_of(b).iter().map(|&v| self.apply(a, v)).collect();
        self.index[img.as_slice()] as usize
    }

    pub fn inverse(&self, a: AutId) -> AutId {
        let perm = self.permutation(a);
        let mut inv = vec![Elem::IDENTITY; perm.len()];
        for (i, &v) in perm.iter().enumerate() {
            inv[v.idx()] = Elem(i as u32);
        }
        let img: Vec<Elem> = self.base.iter().map(|&s| inv[s.idx()]).collect();
        self.index[img.as_slice()] as usize
    }

    /// The automorphism `h ↦ h^c`.
    pub fn conjugation(&self, c: Elem) -> AutId {
        let g = self.group;
        let img: Vec<Elem> = self.base.iter().map(|&s| g.conj(s, c)).collect();
        self.index[img.as_slice()] as usize
    }

    /// Whether `α` is inner, with the least conjugating element.
    pub fn is_inner(&self, a: AutId) -> Option<Elem> {
        self.inner[a]
    }

    /// The automorphism sending `x ↦ x2` and `y ↦ y2`, if one exists.
    /// Requires `⟨x, y⟩ = G`.
    pub fn find_mapping(&self, x: Elem, y: Elem, x2: Elem, y2: Elem) -> Option<AutId> {
        let g = self.group;
        if self.base.is_empty() {
            return (x == x2 && y == y2).then_some(0);
        }
        let tree = Tree::new(g, &[x, y]);
        if !tree.spans() {
            return None;
        }
        let img: Vec<Elem> = self.base.iter().map(|&s| tree.eval(g, &[x2, y2], s)).collect();
        let id = *self.index.get(img.as_slice())? as usize;
        (self.apply(id, x) == x2 && self.apply(id, y) == y2).then_some(id)
    }

    /// Lexicographically least `(α(x), α(y))` over all of Aut(G), with an
    /// automorphism attaining it.
    pub fn pair_orbit_canon(&self, x: Elem, y: Elem) -> (Elem, Elem, AutId) {
        (0..self.len())
            .into_par_iter()
            .fold(
                || (Elem(u32::MAX), Elem(u32::MAX), 0),
                |best, a| {
                    let ax = self.apply(a, x);
                    if ax > best.0 {
                        return best;
                    }
                    let ay = self.apply(a, y);
                    if (ax, ay) < (best.0, best.1) {
                        (ax, ay, a)
                    } else {
                        best
                    }
                },
            )
            .reduce(
                || (Elem(u32::MAX), Elem(u32::MAX), 0),
                |p, q| if (q.0, q.1, q.2) < (p.0, p.1, p.2) { q } else { p },
            )
    }

    /// Aut(G)-orbit id of every element; ids are numbered by least member.
    pub fn element_orbits(&self) -> Vec<u32> {
        let n = self.group.order();
        let mut orbit = vec![u32::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if orbit[start] != u32::MAX {
                continue;
            }
            orbit[start] = next;
            let mut stack = vec![start];
            while let Some(h) = stack.pop() {
                for p in &self.generator_perms {
                    let k = p[h].idx();
                    if orbit[k] == u32::MAX {
                        orbit[k] = next;
                        stack.push(k);
                    }
                }
            }
            next += 1;
        }
        orbit
    }

    /// All automorphisms fixing `h`.
    pub fn stabilizer(&self, h: Elem) -> Vec<AutId> {
        (0..self.len()).into_par_iter().filter(|&a| self.apply(a, h) == h).collect()
    }

    /// Orbits on G of the subgroup whose full element list is `auts`, each
    /// listed with its least element first.
    pub fn orbits_of(&self, auts: &[AutId]) -> Vec<Vec<Elem>> {
        let n = self.group.order();
        let perms: Vec<Vec<Elem>> = auts.par_iter().filter(|&&a| a != 0).map(|&a| self.permutation(a)).collect();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in self.group.elements() {
            if seen[start.idx()] {
                continue;
            }
            seen[start.idx()] = true;
            let mut orbit = vec![start];
            for p in &perms {
                let k = p[start.idx()];
                if !seen[k.idx()] {
                    seen[k.idx()] = true;
                    orbit.push(k);
                }
            }
            out.push(orbit);
        }
        out
    }

    /// Aut(G)-orbits of involutions, with a generating partner for each
    /// useful orbit. Matrix groups use the standard involution as the
    /// representative of its orbit.
    pub fn involution_orbits(&self) -> Vec<InvolutionOrbit> {
        let g = self.group;
        let orbit = self.element_orbits();
        let std_inv = g.standard_involution();
        let mut reps: Vec<(u32, Elem, usize)> = Vec::new();
        for y in g.involutions() {
            let o = orbit[y.idx()];
            match reps.iter_mut().find(|r| r.0 == o) {
                Some(r) => r.2 += 1,
                None => reps.push((o, y, 1)),
            }
        }
        if let Some(s) = std_inv {
            if let Some(r) = reps.iter_mut().find(|r| r.0 == orbit[s.idx()]) {
                r.1 = s;
            }
        }
        reps.into_iter()
            .map(|(_, y, size)| {
                let witness = g.elements().collect::<Vec<_>>().into_par_iter().find_first(|&x| g.generates(&[x, y]));
                InvolutionOrbit { representative: y, size, witness }
            })
            .collect()
    }

    /// Checks `α(ab) = α(a)α(b)` on every pair (or a deterministic sample of
    /// `samples` pairs when `|G|²` is larger).
    pub fn check_homomorphism(&self, a: AutId, samples: usize) -> bool {
        let g = self.group;
        let n = g.order();
        let perm = self.permutation(a);
        let mut hit = vec![false; n];
        for &v in &perm {
            if std::mem::replace(&mut hit[v.idx()], true) {
                return false;
            }
        }
        let ok = |u: usize, v: usize| perm[g.mul(Elem(u as u32), Elem(v as u32)).idx()] == g.mul(perm[u], perm[v]);
        if n * n <= samples {
            (0..n).all(|u| (0..n).all(|v| ok(u, v)))
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(a as u64);
            (0..samples).all(|_| ok(rng.random_range(0..n), rng.random_range(0..n)))
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::group::build_group;

    fn aut_order(spec: &str) -> usize {
        let g = build_group(spec, &Limits::default()).unwrap();
        compute_aut(&g, &Limits::default()).unwrap().order()
    }

    #[test]
    fn orders_of_family_automorphism_groups() {
        assert_eq!(aut_order("psl2:7"), 336);
        assert_eq!(aut_order("sl2:8"), 1512);
        assert_eq!(aut_order("psl2:13"), 2184);
        assert_eq!(aut_order("cyclic:2"), 1);
        assert_eq!(aut_order("sym:5"), 120);
        assert_eq!(aut_order("alt:5"), 120);
        assert_eq!(aut_order("alt:4"), 24);
        for e in 2..=5u32 {
            let q = 1usize << e;
            assert_eq!(aut_order(&format!("agl1:{q}")), e as usize * q * (q - 1));
        }
    }

    #[test]
    fn exceptional_outer_automorphism_of_s6() {
        let g = build_group("sym:6", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        assert_eq!(a.order(), 1440);
        assert_eq!(a.inner_order(), 720);
    }

    #[test]
    fn shortcuts_agree_with_search() {
        // Force the generic search on groups that have a family shortcut.
        for spec in ["psl2:5", "sl2:5", "pgl2:5", "agl1:9", "alt:5", "sym:4", "psl2:9", "agl1:8"] {
            let fam = build_group(spec, &Limits::default()).unwrap();
            let a = compute_aut(&fam, &Limits::default()).unwrap();
            let n = fam.order();
            let table: Vec<u32> = (0..n)
                .flat_map(|u| (0..n).map(move |v| (u, v)))
                .map(|(u, v)| fam.mul(Elem(u as u32), Elem(v as u32)).0)
                .collect();
            let plain = FiniteGroup::from_cayley_table("copy", n, table).unwrap();
            let b = compute_aut(&plain, &Limits::default()).unwrap();
            assert_eq!(a.order(), b.order(), "{spec}");
            assert_eq!(a.inner_order(), b.inner_order(), "{spec}");
        }
    }

    #[test]
    fn automorphisms_are_homomorphisms() {
        for spec in ["psl2:7", "sl2:8", "agl1:8", "dihedral:6", "alt:5", "sym:6", "cyclic:9"] {
            let g = build_group(spec, &Limits::default()).unwrap();
            let a = compute_aut(&g, &Limits::default()).unwrap();
            for id in (0..a.order()).step_by(1 + a.order() / 40) {
                assert!(a.check_homomorphism(id, 1_000_000), "{spec} #{id}");
                assert_eq!(a.apply(id, Elem::IDENTITY), Elem::IDENTITY);
            }
            assert_eq!(a.order() % a.inner_order(), 0);
            assert_eq!(a.inner_order() * g.center().len(), g.order());
        }
    }

    #[test]
    fn group_operations() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        for x in [1usize, 17, 200, 335] {
            let inv = a.inverse(x);
            assert_eq!(a.compose(x, inv), 0);
            assert_eq!(a.compose(inv, x), 0);
            for y in [3usize, 100] {
                let xy = a.compose(x, y);
                for h in g.elements().step_by(7) {
                    assert_eq!(a.apply(xy, h), a.apply(x, a.apply(y, h)));
                }
            }
        }
        for c in g.elements().step_by(11) {
            let id = a.conjugation(c);
            let w = a.is_inner(id).unwrap();
            assert_eq!(a.conjugation(w), id);
        }
    }

    #[test]
    fn frobenius_is_outer_in_sl2_8() {
        let g = build_group("sl2:8:1,1,0,1", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let f = g.field().unwrap();
        let frob: Vec<Elem> =
            g.generators().iter().map(|&s| g.map_entries(s, |v| f.frobenius(v, 1)).unwrap()).collect();
        let id = (0..a.order()).find(|&i| a.automorphism(i).images == frob).unwrap();
        assert!(a.is_inner(id).is_none());

        // The reflection of the genus-7 Hurwitz map is conjugation by this matrix.
        let x = g.parse_element("[[t,1],[0,t^2+1]]").unwrap();
        let y = g.standard_involution().unwrap();
        let c = g.parse_element("[[t+1,t],[t,t+1]]").unwrap();
        let alpha = a.find_mapping(x, y, g.inv(x), y).unwrap();
        assert_eq!(a.is_inner(alpha), Some(c));
        assert_eq!(a.conjugation(c), alpha);
    }

    #[test]
    fn canonical_pairs() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let x = g.parse_element("[[1,1],[0,1]]").unwrap();
        let y = g.standard_involution().unwrap();
        let (cx, cy, id) = a.pair_orbit_canon(x, y);
        assert_eq!((a.apply(id, x), a.apply(id, y)), (cx, cy));
        let (cx2, cy2, _) = a.pair_orbit_canon(cx, cy);
        assert_eq!((cx, cy), (cx2, cy2));

        // All (7,2,7) generating triples form one orbit.
        let canon: std::collections::BTreeSet<_> = g
            .elements()
            .filter(|&u| g.element_order(u) == 7)
            .flat_map(|u| g.involutions().map(move |v| (u, v)))
            .filter(|&(u, v)| g.element_order(g.inv(g.mul(u, v))) == 7 && g.generates(&[u, v]))
            .map(|(u, v)| {
                let c = a.pair_orbit_canon(u, v);
                (c.0, c.1)
            })
            .collect();
        assert_eq!(canon.len(), 1);
    }

    #[test]
    fn involution_classes_of_small_groups() {
        let g = build_group("sym:4", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let orbits = a.involution_orbits();
        assert_eq!(orbits.len(), 2);
        let useful: Vec<usize> = orbits.iter().filter(|o| o.useful()).map(|o| o.size).collect();
        assert_eq!(useful, vec![6]);

        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let orbits = a.involution_orbits();
        assert_eq!(orbits.len(), 1);
        assert!(orbits[0].useful());
        assert_eq!(Some(orbits[0].representative), g.standard_involution());

        let g = build_group("sym:5", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let orbits = a.involution_orbits();
        assert_eq!(orbits.iter().filter(|o| o.useful()).count(), 2);
    }

    #[test]
    fn generic_search_respects_the_cap() {
        let g = build_group("dihedral:700", &Limits::default()).unwrap();
        let r = compute_aut(&g, &Limits::default());
        assert!(matches!(r, Err(Error::CapExceeded { .. })));
    }
}

//! 𝒪(G): the maps of G up to isomorphism, joined by operation edges.

use std::collections::{BTreeMap, HashMap};
use std::fmt::Write as _;
use std::io::Write;

use petgraph::unionfind::UnionFind;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automorphism::AutGroup;
use crate::error::Result;
use crate::group::Elem;
use crate::map::{MapInvariants, MapTriple, Reflexibility};
use crate::ops::Operation;

pub const FORMAT_VERSION: u32 = 1;

/// One isomorphism class of maps.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MapClass {
    pub id: usize,
    /// Least `(α(x), α(y))` over Aut(G).
    pub canonical: (Elem, Elem),
    /// Representative pair; `y` is the chosen representative of its
    /// involution orbit.
    pub x: Elem,
    pub y: Elem,
    /// Index into [`AutGroup::involution_orbits`].
    pub y_orbit: usize,
    pub invariants: MapInvariants,
}

impl MapClass {
    pub fn triple<'g>(&self, aut: &AutGroup<'g>) -> MapTriple<'g> {
        MapTriple::from_pair(aut.group(), self.x, self.y)
    }
}

/// Every map of G, one per Aut(G)-orbit of generating pairs `(x, y)` with
/// `y` an involution, sorted by `(q, p, r, genus, canonical pair)`.
pub fn enumerate_maps(aut: &AutGroup<'_>) -> Vec<MapClass> {
    let g = aut.group();
    let orbits = aut.involution_orbits();
    let mut found: Vec<MapClass> = Vec::new();
    for (oi, orbit) in orbits.iter().enumerate() {
        if !orbit.useful() {
            continue;
        }
        let y = orbit.representative;
        let stab = aut.stabilizer(y);
        let reps: Vec<Elem> = aut.orbits_of(&stab).into_iter().map(|o| o[0]).collect();
        let classes: Vec<MapClass> = reps
            .into_par_iter()
            .filter(|&x| g.generates(&[x, y]))
            .map(|x| {
                let (cx, cy, _) = aut.pair_orbit_canon(x, y);
                let m = MapTriple::from_pair(g, x, y);
                MapClass { id: 0, canonical: (cx, cy), x, y, y_orbit: oi, invariants: m.invariants(aut) }
            })
            .collect();
        found.extend(classes);
    }
    found.sort_by_key(|c| (c.invariants.q, c.invariants.p, c.invariants.r, c.invariants.genus, c.canonical));
    for w in found.windows(2) {
        assert_ne!(w[0].canonical, w[1].canonical, "two enumerated pairs lie in one Aut-orbit");
    }
    for (i, c) in found.iter_mut().enumerate() {
        c.id = i;
    }
    found
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Edge {
    pub src: usize,
    pub dst: usize,
    pub label: Operation,
    /// False for involutory operations and for 2-cycles of a hole operation.
    pub directed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Component {
    pub members: Vec<usize>,
    /// Shared by all members; `None` would mean an inconsistency.
    pub reflexibility: Option<Reflexibility>,
    pub y_orbit: Option<usize>,
}

#[derive(Clone, Debug)]
pub struct AtlasGraph {
    pub group: String,
    pub aut_order: usize,
    pub ops: Vec<Operation>,
    pub maps: Vec<MapClass>,
    pub edges: Vec<Edge>,
}

/// Applies each operation to each map. Loops are dropped, involutory edges
/// and 2-cycles become single undirected edges.
pub fn build_atlas(aut: &AutGroup<'_>, maps: Vec<MapClass>, ops: &[Operation]) -> AtlasGraph {
    let by_canon: HashMap<(Elem, Elem), usize> = maps.iter().map(|c| (c.canonical, c.id)).collect();
    let raw: Vec<(usize, usize, usize)> = maps
        .par_iter()
        .flat_map_iter(|c| {
            let m = c.triple(aut);
            ops.iter()
                .enumerate()
                .filter(|(_, op)| op.applies(c.invariants.q))
                .map(|(k, op)| {
                    let image = op.apply(&m).expect("applicability checked");
                    let (x, y, _) = aut.pair_orbit_canon(image.x, image.y);
                    (k, c.id, by_canon[&(x, y)])
                })
                .collect::<Vec<_>>()
        })
        .collect();
    let mut arcs: BTreeMap<(usize, usize, usize), ()> = BTreeMap::new();
    for &(k, s, d) in &raw {
        if s != d {
            arcs.insert((k, s, d), ());
        }
    }
    let mut edges = Vec::new();
    for &(k, s, d) in arcs.keys() {
        let op = ops[k];
        let reverse = arcs.contains_key(&(k, d, s));
        if op.is_involutory() || reverse {
            if s < d {
                edges.push((k, Edge { src: s, dst: d, label: op, directed: false }));
            }
        } else {
            edges.push((k, Edge { src: s, dst: d, label: op, directed: true }));
        }
    }
    edges.sort_by_key(|(k, e)| (*k, e.src, e.dst));
    AtlasGraph {
        group: aut.group().label().to_string(),
        aut_order: aut.order(),
        ops: ops.to_vec(),
        maps,
        edges: edges.into_iter().map(|(_, e)| e).collect(),
    }
}

impl AtlasGraph {
    /// Connected components, ignoring edge directions, ordered by least member.
    pub fn components(&self) -> Vec<Component> {
        let n = self.maps.len();
        let mut uf = UnionFind::<usize>::new(n);
        for e in &self.edges {
            uf.union(e.src, e.dst);
        }
        let mut groups: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        for v in 0..n {
            groups.entry(uf.find(v)).or_default().push(v);
        }
        let mut comps: Vec<Component> = groups
            .into_values()
            .map(|members| {
                let shared = |f: &dyn Fn(&MapClass) -> usize| {
                    let first = f(&self.maps[members[0]]);
                    members.iter().all(|&m| f(&self.maps[m]) == first).then_some(first)
                };
                let refl = shared(&|c| c.invariants.reflexibility as usize);
                Component {
                    reflexibility: refl.map(|_| self.maps[members[0]].invariants.reflexibility),
                    y_orbit: shared(&|c| c.y_orbit),
                    members,
                }
            })
            .collect();
        comps.sort_by_key(|c| c.members[0]);
        comps
    }

    pub fn to_document(&self) -> AtlasDocument {
        AtlasDocument {
            version: FORMAT_VERSION,
            group: self.group.clone(),
            aut_order: self.aut_order,
            ops: self.ops.clone(),
            maps: self
                .maps
                .iter()
                .map(|c| MapRecord {
                    id: c.id,
                    p: c.invariants.p,
                    q: c.invariants.q,
                    r: c.invariants.r,
                    genus: c.invariants.genus,
                    reflexibility: c.invariants.reflexibility,
                    trace: c.invariants.trace.clone(),
                    cotrace: c.invariants.cotrace.clone(),
                    x_index: c.x.0,
                    y_index: c.y.0,
                })
                .collect(),
            edges: self.edges.clone(),
            components: self.components().into_iter().map(|c| c.members).collect(),
        }
    }

    pub fn write_json<W: Write>(&self, mut out: W) -> Result<()> {
        serde_json::to_writer_pretty(&mut out, &self.to_document())?;
        writeln!(out)?;
        Ok(())
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "digraph \"O({})\" {{", self.group);
        let ops: Vec<String> = self.ops.iter().map(Operation::to_string).collect();
        let _ = writeln!(s, "  // format {FORMAT_VERSION}, |Aut| = {}, ops {}", self.aut_order, ops.join(","));
        let _ = writeln!(s, "  node [shape=box];");
        for c in &self.maps {
            let inv = &c.invariants;
            let _ = writeln!(s, "  m{} [label=\"{}: {{{},{}}}_{} g={}\"];", c.id, c.id, inv.p, inv.q, inv.r, inv.genus);
        }
        for e in &self.edges {
            let style = match e.label {
                Operation::Dual => "style=dashed, ",
                Operation::Hole(-1) => "style=dotted, ",
                _ => "",
            };
            let dir = if e.directed { "" } else { ", dir=none" };
            let _ = writeln!(s, "  m{} -> m{} [{}label=\"{}\"{}];", e.src, e.dst, style, e.label, dir);
        }
        s.push_str("}\n");
        s
    }

    pub fn write_dot<W: Write>(&self, mut out: W) -> Result<()> {
        out.write_all(self.to_dot().as_bytes())?;
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MapRecord {
    pub id: usize,
    pub p: u32,
    pub q: u32,
    pub r: u32,
    pub genus: u64,
    pub reflexibility: Reflexibility,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cotrace: Option<String>,
    pub x_index: u32,
    pub y_index: u32,
}

/// The JSON form of an [`AtlasGraph`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AtlasDocument {
    #[serde(default = "default_version")]
    pub version: u32,
    pub group: String,
    pub aut_order: usize,
    pub ops: Vec<Operation>,
    pub maps: Vec<MapRecord>,
    pub edges: Vec<Edge>,
    pub components: Vec<Vec<usize>>,
}

fn default_version() -> u32 {
    FORMAT_VERSION
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::automorphism::compute_aut;
    use crate::group::{build_group, Limits};
    use crate::ops::{parse_ops, DEFAULT_OPS};

    fn types(maps: &[MapClass]) -> Vec<String> {
        let mut v: Vec<String> = maps.iter().map(|c| c.invariants.extended_type()).collect();
        v.sort();
        v
    }

    #[test]
    fn psl2_7_atlas() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let maps = enumerate_maps(&a);
        assert_eq!(types(&maps), ["{3,7}_8", "{4,7}_8", "{7,3}_8", "{7,4}_8", "{7,7}_6"]);
        let atlas = build_atlas(&a, maps, &parse_ops("D,H2").unwrap());
        let h2: Vec<&Edge> = atlas.edges.iter().filter(|e| e.label == Operation::Hole(2)).collect();
        let d: Vec<&Edge> = atlas.edges.iter().filter(|e| e.label == Operation::Dual).collect();
        assert_eq!((h2.len(), d.len()), (3, 2));
        assert!(h2.iter().all(|e| e.directed) && d.iter().all(|e| !e.directed));
        assert_eq!(atlas.components().len(), 1);
        let genera: Vec<u64> = atlas.maps.iter().map(|c| c.invariants.genus).collect();
        let mut sorted = genera.clone();
        sorted.sort();
        assert_eq!(sorted, [3, 3, 10, 10, 19]);
    }

    #[test]
    fn single_map_groups() {
        let g = build_group("alt:4", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let atlas = build_atlas(&a, enumerate_maps(&a), &DEFAULT_OPS);
        assert_eq!(atlas.maps.len(), 1);
        assert!(atlas.edges.is_empty());
        assert_eq!(atlas.maps[0].invariants.extended_type(), "{3,3}_4");
        assert_eq!(atlas.maps[0].invariants.genus, 0);
    }

    #[test]
    fn exports() {
        let g = build_group("psl2:7", &Limits::default()).unwrap();
        let a = compute_aut(&g, &Limits::default()).unwrap();
        let atlas = build_atlas(&a, enumerate_maps(&a), &DEFAULT_OPS);
        let mut buf = Vec::new();
        atlas.write_json(&mut buf).unwrap();
        let doc: AtlasDocument = serde_json::from_slice(&buf).unwrap();
        assert_eq!(doc, atlas.to_document());
        assert_eq!(doc.maps.len(), 5);
        let dot = atlas.to_dot();
        assert!(dot.starts_with("digraph"));
        assert_eq!(dot.matches("style=dashed").count(), 2);

        let empty = AtlasGraph { group: "none".into(), aut_order: 1, ops: vec![], maps: vec![], edges: vec![] };
        assert_eq!(empty.to_dot(), "digraph \"O(none)\" {\n  // format 1, |Aut| = 1, ops \n  node [shape=box];\n}\n");
        assert!(dot.contains("ops D,H2,H3,H-1"));
        assert!(empty.components().is_empty());
    }
}

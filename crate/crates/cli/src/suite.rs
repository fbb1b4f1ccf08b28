//! Verification suites: expected facts about one group, stored as JSON.

use std::collections::BTreeMap;
use std::fmt::{self, Debug};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use regmap::census::phi_direct;
use regmap::{
    apply_word, build_atlas, build_group, compute_aut, count_triples_by_name, enumerate_maps, order_of_o, parse_ops,
    parse_word, FiniteGroup, Limits, MapClass, Operation,
};
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Suite {
    pub name: String,
    #[serde(default)]
    pub description: String,
    pub group: GroupSource,
    /// Operations for the atlas facts; defaults to `D,H2,H3,H-1`.
    pub ops: Option<String>,
    #[serde(default)]
    pub expect: Expectations,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(untagged)]
pub enum GroupSource {
    Spec(String),
    /// Row `a`, column `b` holds the index of `a·b`; 0 is the identity.
    Table {
        label: String,
        order: usize,
        table: Vec<u32>,
    },
}

impl fmt::Display for GroupSource {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            GroupSource::Spec(s) => f.write_str(s),
            GroupSource::Table { label, order, .. } => write!(f, "{label} (table of order {order})"),
        }
    }
}

#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Expectations {
    pub group_order: Option<usize>,
    pub aut_order: Option<usize>,
    pub map_count: Option<usize>,
    /// Multiset of `{p,q}_r`.
    pub extended_types: Option<Vec<String>>,
    /// Multiset of `{p,q}`.
    pub types: Option<Vec<String>>,
    pub genera: Option<Vec<u64>>,
    /// Count of maps per reflexibility class, e.g. `{"inner-regular": 14}`.
    pub reflexibility: Option<BTreeMap<String, usize>>,
    pub components: Option<usize>,
    pub component_sizes: Option<Vec<usize>>,
    /// φ(G)/|Aut G| from the direct pair count.
    pub order_of_o: Option<u64>,
    pub useful_involution_orbits: Option<usize>,
    #[serde(default)]
    pub triples: Vec<TripleFact>,
    /// Pairs of operator words that agree on every map where both apply.
    #[serde(default)]
    pub equal: Vec<[String; 2]>,
    /// Operator words that fix every map they apply to.
    #[serde(default)]
    pub fixes: Vec<String>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TripleFact {
    pub x: String,
    pub y: String,
    pub z: String,
    pub total: Option<u64>,
    pub generating: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FactResult {
    pub fact: String,
    pub expected: String,
    pub computed: String,
    pub pass: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub name: String,
    pub group: String,
    pub facts: Vec<FactResult>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.facts.iter().all(|f| f.pass)
    }
}

fn fact<T: Debug + PartialEq>(name: impl Into<String>, expected: T, computed: T) -> FactResult {
    FactResult {
        fact: name.into(),
        pass: expected == computed,
        expected: format!("{expected:?}"),
        computed: format!("{computed:?}"),
    }
}

fn sorted<T: Ord + Clone>(v: &[T]) -> Vec<T> {
    let mut v = v.to_vec();
    v.sort();
    v
}

pub fn default_suites_dir() -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/suites"))
}

/// All `*.json` suites in `dir`, sorted by name.
pub fn load_suites(dir: &Path) -> Result<Vec<Suite>> {
    let mut paths: Vec<PathBuf> = std::fs::read_dir(dir)
        .with_context(|| format!("reading suites from {}", dir.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();
    let mut suites = Vec::new();
    for p in paths {
        let text = std::fs::read_to_string(&p).with_context(|| format!("reading {}", p.display()))?;
        let suite: Suite = serde_json::from_str(&text).with_context(|| format!("parsing {}", p.display()))?;
        suites.push(suite);
    }
    suites.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(suites)
}

pub fn select<'s>(suites: &'s [Suite], name: &str) -> Result<Vec<&'s Suite>> {
    if name == "all" {
        return Ok(suites.iter().collect());
    }
    match suites.iter().find(|s| s.name == name) {
        Some(s) => Ok(vec![s]),
        None => {
            let known: Vec<&str> = suites.iter().map(|s| s.name.as_str()).collect();
            bail!(regmap::Error::Spec {
                spec: name.into(),
                reason: format!("unknown suite; known: {}", known.join(", "))
            })
        }
    }
}

fn build(source: &GroupSource, limits: &Limits) -> Result<FiniteGroup> {
    Ok(match source {
        GroupSource::Spec(s) => build_group(s, limits)?,
        GroupSource::Table { label, order, table } => {
            FiniteGroup::from_cayley_table(label.clone(), *order, table.clone())?
        }
    })
}

pub fn run_suite(suite: &Suite, limits: &Limits) -> Result<SuiteReport> {
    let mut facts = Vec::new();
    let report = |facts| SuiteReport { name: suite.name.clone(), group: suite.group.to_string(), facts };
    let g = build(&suite.group, limits)?;
    if let GroupSource::Table { .. } = suite.group {
        let axioms = g.check_axioms();
        let ok = axioms.is_ok();
        facts.push(FactResult {
            fact: "group axioms".into(),
            expected: "group".into(),
            computed: axioms.err().unwrap_or_else(|| "group".into()),
            pass: ok,
        });
        if !ok {
            return Ok(report(facts));
        }
    }
    let e = &suite.expect;
    if let Some(n) = e.group_order {
        facts.push(fact("group order", n, g.order()));
    }
    let aut = compute_aut(&g, limits)?;
    if let Some(n) = e.aut_order {
        facts.push(fact("|Aut G|", n, aut.order()));
    }
    let maps = enumerate_maps(&aut);
    if let Some(n) = e.map_count {
        facts.push(fact("map count", n, maps.len()));
    }
    if let Some(t) = &e.extended_types {
        let got: Vec<String> = maps.iter().map(|m| m.invariants.extended_type()).collect();
        facts.push(fact("extended types", sorted(t), sorted(&got)));
    }
    if let Some(t) = &e.types {
        let got: Vec<String> = maps.iter().map(|m| format!("{{{},{}}}", m.invariants.p, m.invariants.q)).collect();
        facts.push(fact("types", sorted(t), sorted(&got)));
    }
    if let Some(t) = &e.genera {
        let got: Vec<u64> = maps.iter().map(|m| m.invariants.genus).collect();
        facts.push(fact("genera", sorted(t), sorted(&got)));
    }
    if let Some(r) = &e.reflexibility {
        let mut got: BTreeMap<String, usize> = BTreeMap::new();
        for m in &maps {
            *got.entry(m.invariants.reflexibility.to_string()).or_default() += 1;
        }
        facts.push(fact("reflexibility", r.clone(), got));
    }
    if let Some(n) = e.useful_involution_orbits {
        facts.push(fact("useful involution orbits", n, aut.involution_orbits().iter().filter(|o| o.useful()).count()));
    }
    if let Some(n) = e.order_of_o {
        let got = order_of_o(phi_direct(&g), aut.order())?;
        facts.push(fact("phi / |Aut G|", n, got));
    }
    for t in &e.triples {
        let c = count_triples_by_name(&g, &t.x, &t.y, &t.z)?;
        let label = format!("triples ({},{},{})", t.x, t.y, t.z);
        if let Some(n) = t.total {
            facts.push(fact(format!("{label} total"), n, c.total));
        }
        if let Some(n) = t.generating {
            facts.push(fact(format!("{label} generating"), n, c.generating));
        }
    }
    for [lhs, rhs] in &e.equal {
        let (l, r) = (parse_word(lhs)?, parse_word(rhs)?);
        let bad = count_failures(&aut, &maps, |m| Some((apply_word(m, &l).ok()?, apply_word(m, &r).ok()?)));
        facts.push(fact(format!("{lhs} = {rhs}"), 0, bad));
    }
    for w in &e.fixes {
        let ops = parse_word(w)?;
        let bad = count_failures(&aut, &maps, |m| Some((apply_word(m, &ops).ok()?, *m)));
        facts.push(fact(format!("{w} fixes every map"), 0, bad));
    }
    if e.components.is_some() || e.component_sizes.is_some() {
        let ops: Vec<Operation> = match &suite.ops {
            Some(s) => parse_ops(s)?,
            None => regmap::DEFAULT_OPS.to_vec(),
        };
        let atlas = build_atlas(&aut, maps, &ops);
        let comps = atlas.components();
        if let Some(n) = e.components {
            facts.push(fact("components", n, comps.len()));
        }
        if let Some(s) = &e.component_sizes {
            let mut got: Vec<usize> = comps.iter().map(|c| c.members.len()).collect();
            got.sort_unstable_by(|a, b| b.cmp(a));
            let mut want = s.clone();
            want.sort_unstable_by(|a, b| b.cmp(a));
            facts.push(fact("component sizes", want, got));
        }
    }
    Ok(report(facts))
}

/// Number of maps whose two images (when both exist) lie in different orbits.
fn count_failures<'g>(
    aut: &regmap::AutGroup<'g>,
    maps: &[MapClass],
    images: impl Fn(&regmap::MapTriple<'g>) -> Option<(regmap::MapTriple<'g>, regmap::MapTriple<'g>)>,
) -> usize {
    maps.iter()
        .filter(|m| {
            let t = m.triple(aut);
            match images(&t) {
                Some((a, b)) => {
                    let (ca, cb) = (aut.pair_orbit_canon(a.x, a.y), aut.pair_orbit_canon(b.x, b.y));
                    (ca.0, ca.1) != (cb.0, cb.1)
                }
                None => false,
            }
        })
        .count()
}

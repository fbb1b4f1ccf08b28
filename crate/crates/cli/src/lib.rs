//! Command-line front end for `regmap`.

pub mod config;
pub mod suite;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use regmap::{
    apply_word, build_atlas, build_group, compute_aut, count_triples, count_triples_by_name, enumerate_maps, make_map,
    order_of_o, parse_ops, parse_word, phi_direct, phi_moebius, psl2_even_closed_form, AutGroup, Family, FiniteGroup,
    MapTriple, Operation, Reflexibility,
};
use serde::Serialize;

use config::Config;

/// Exit status for a failed verification.
pub const EXIT_VERIFY: u8 = 1;
/// Exit status for malformed input: bad flags, specs, words or files.
pub const EXIT_USAGE: u8 = 2;
/// Exit status when a configured size cap is hit.
pub const EXIT_CAP: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "regmap", version, about = "Orientably regular maps of finite groups")]
pub struct Cli {
    /// Worker threads for parallel sweeps.
    #[arg(short, long, env = "REGMAP_JOBS", global = true)]
    pub jobs: Option<usize>,
    /// TOML file with caps and default operations.
    #[arg(long, global = true, value_name = "FILE")]
    pub config: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// List every map of a group with its invariants.
    Enumerate {
        /// Group spec, e.g. `psl2:7`, `sym:5`, `agl1:32`.
        spec: String,
        #[arg(long, value_enum, default_value_t = TableFormat::Table)]
        format: TableFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Build the operation graph.
    Graph {
        spec: String,
        /// Comma-separated operations, e.g. `D,H2,H3,H-1`.
        #[arg(long)]
        ops: Option<String>,
        #[arg(long, value_enum, default_value_t = GraphFormat::Dot)]
        format: GraphFormat,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Count maps independently of the enumerator.
    Count {
        spec: String,
        #[arg(long, value_enum, default_value_t = CountMethod::Direct)]
        method: CountMethod,
        /// Add triple counts for every class triple `(X, Y, Z)` with `Y` of order 2.
        #[arg(long)]
        per_class: bool,
    },
    /// Count triples `xyz = 1` in three conjugacy classes, or list the classes.
    Triples {
        spec: String,
        /// Class names such as `7A 2A 7B`.
        #[arg(num_args = 3, value_names = ["X", "Y", "Z"])]
        classes: Vec<String>,
    },
    /// Hole, Petrie and isotactic lengths of one map.
    Holes {
        spec: String,
        /// Map id as printed by `enumerate`.
        #[arg(long, conflicts_with_all = ["x", "y"], required_unless_present_all = ["x", "y"])]
        map: Option<usize>,
        /// Vertex rotation, in the group's element syntax.
        #[arg(short, long, requires = "y", allow_hyphen_values = true)]
        x: Option<String>,
        /// Edge involution.
        #[arg(short, long, requires = "x", allow_hyphen_values = true)]
        y: Option<String>,
        /// Operator word applied first, e.g. `DH2DH3`.
        #[arg(long)]
        word: Option<String>,
        /// Isotactic type as comma-separated exponents, e.g. `2,4,4`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        isotactic: Vec<String>,
        /// Relator in `R = x`, `S = z`, e.g. `(R*S^-2*R)^2`; repeatable.
        #[arg(long, allow_hyphen_values = true)]
        relator: Vec<String>,
    },
    /// Check stored facts against fresh computation.
    Verify {
        /// Suite name, or `all`.
        suite: String,
        /// Directory of `*.json` suites.
        #[arg(long, env = "REGMAP_SUITES")]
        suites: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum TableFormat {
    Table,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphFormat {
    Dot,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CountMethod {
    Direct,
    Moebius,
    Formula,
}

/// Process exit status for an error: 3 when a size cap was hit, else 2.
pub fn exit_code(err: &anyhow::Error) -> u8 {
    let cap = err.chain().any(|e| matches!(e.downcast_ref::<regmap::Error>(), Some(regmap::Error::CapExceeded { .. })));
    if cap {
        EXIT_CAP
    } else {
        EXIT_USAGE
    }
}

/// Runs one command, writing to `out` unless an output file is given.
/// `Ok(false)` means a verification failed.
pub fn run(cli: Cli, out: &mut dyn Write) -> Result<bool> {
    let cfg = match &cli.config {
        Some(p) => Config::load(p)?,
        None => Config::default(),
    };
    if let Some(n) = cli.jobs.or(cfg.jobs) {
        // a pool may already exist when called repeatedly in one process
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
    match cli.command {
        Command::Enumerate { spec, format, output } => {
            let g = build_group(&spec, &cfg.limits)?;
            let aut = compute_aut(&g, &cfg.limits)?;
            let rows = map_rows(&aut);
            with_output(output, out, |w| match format {
                TableFormat::Json => {
                    serde_json::to_writer_pretty(&mut *w, &rows)?;
                    writeln!(w)?;
                    Ok(())
                }
                TableFormat::Table => write_table(w, &rows),
            })?;
        }
        Command::Graph { spec, ops, format, output } => {
            let ops = match ops {
                Some(s) => parse_ops(&s)?,
                None => cfg.ops()?,
            };
            let g = build_group(&spec, &cfg.limits)?;
            let aut = compute_aut(&g, &cfg.limits)?;
            let atlas = build_atlas(&aut, enumerate_maps(&aut), &ops);
            with_output(output, out, |w| {
                match format {
                    GraphFormat::Dot => atlas.write_dot(w)?,
                    GraphFormat::Json => atlas.write_json(w)?,
                }
                Ok(())
            })?;
        }
        Command::Count { spec, method, per_class } => {
            let g = build_group(&spec, &cfg.limits)?;
            let aut = compute_aut(&g, &cfg.limits)?;
            let report = count_report(&spec, &g, &aut, method, per_class, &cfg)?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Command::Triples { spec, classes } => {
            let g = build_group(&spec, &cfg.limits)?;
            if let [x, y, z] = classes.as_slice() {
                serde_json::to_writer_pretty(&mut *out, &count_triples_by_name(&g, x, y, z)?)?;
                writeln!(out)?;
            } else {
                write_classes(out, &g)?;
            }
        }
        Command::Holes { spec, map, x, y, word, isotactic, relator } => {
            let g = build_group(&spec, &cfg.limits)?;
            let aut = compute_aut(&g, &cfg.limits)?;
            let m = match (map, x, y) {
                (Some(id), _, _) => {
                    let maps = enumerate_maps(&aut);
                    match maps.get(id) {
                        Some(c) => c.triple(&aut),
                        None => bail!(regmap::Error::Spec {
                            spec: id.to_string(),
                            reason: format!("{} has {} maps", g.label(), maps.len())
                        }),
                    }
                }
                (None, Some(x), Some(y)) => make_map(&g, g.parse_element(&x)?, g.parse_element(&y)?)?,
                _ => bail!(regmap::Error::Spec { spec: spec.clone(), reason: "give --map or both --x and --y".into() }),
            };
            let m = match &word {
                Some(w) => apply_word(&m, &parse_word(w)?)?,
                None => m,
            };
            let report = holes_report(&aut, &m, &isotactic, &relator)?;
            serde_json::to_writer_pretty(&mut *out, &report)?;
            writeln!(out)?;
        }
        Command::Verify { suite, suites } => {
            let dir = suites.unwrap_or_else(suite::default_suites_dir);
            let all = suite::load_suites(&dir)?;
            let mut ok = true;
            for s in suite::select(&all, &suite)? {
                let report = match suite::run_suite(s, &cfg.limits) {
                    Ok(r) => r,
                    Err(e) => {
                        writeln!(out, "FAIL  {}  {}: {e:#}", s.name, s.group)?;
                        ok = false;
                        continue;
                    }
                };
                let status = if report.passed() { "PASS" } else { "FAIL" };
                writeln!(out, "{status}  {}  {}", report.name, report.group)?;
                for f in &report.facts {
                    let mark = if f.pass { "ok  " } else { "FAIL" };
                    writeln!(out, "    {mark} {}: expected {}, computed {}", f.fact, f.expected, f.computed)?;
                }
                ok &= report.passed();
            }
            return Ok(ok);
        }
    }
    Ok(true)
}

fn with_output(path: Option<PathBuf>, out: &mut dyn Write, f: impl FnOnce(&mut dyn Write) -> Result<()>) -> Result<()> {
    match path {
        Some(p) => {
            let file = File::create(&p).with_context(|| format!("creating {}", p.display()))?;
            let mut w = BufWriter::new(file);
            f(&mut w)?;
            w.flush()?;
            Ok(())
        }
        None => f(out),
    }
}

#[derive(Debug, Serialize)]
pub struct MapRow {
    pub id: usize,
    pub extended_type: String,
    pub genus: u64,
    pub reflexibility: Reflexibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cotrace: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub quotient_genus: Option<u64>,
    pub y_orbit: usize,
    pub x: String,
    pub y: String,
}

fn map_rows(aut: &AutGroup<'_>) -> Vec<MapRow> {
    let g = aut.group();
    enumerate_maps(aut)
        .into_iter()
        .map(|c| MapRow {
            id: c.id,
            extended_type: c.invariants.extended_type(),
            genus: c.invariants.genus,
            reflexibility: c.invariants.reflexibility,
            trace: c.invariants.trace.clone(),
            cotrace: c.invariants.cotrace.clone(),
            quotient_genus: c.invariants.quotient_genus,
            y_orbit: c.y_orbit,
            x: g.format_element(c.x),
            y: g.format_element(c.y),
        })
        .collect()
}

fn write_table(w: &mut dyn Write, rows: &[MapRow]) -> Result<()> {
    let dash = |s: &Option<String>| s.clone().unwrap_or_else(|| "-".into());
    let mut cells: Vec<[String; 10]> =
        vec![["id", "type", "genus", "reflexibility", "trace", "cotrace", "quotient", "y-orbit", "x", "y"]
            .map(String::from)];
    for r in rows {
        cells.push([
            r.id.to_string(),
            r.extended_type.clone(),
            r.genus.to_string(),
            r.reflexibility.to_string(),
            dash(&r.trace),
            dash(&r.cotrace),
            dash(&r.quotient_genus.map(|q| q.to_string())),
            r.y_orbit.to_string(),
            r.x.clone(),
            r.y.clone(),
        ]);
    }
    let widths: Vec<usize> = (0..10).map(|i| cells.iter().map(|c| c[i].chars().count()).max().unwrap_or(0)).collect();
    for row in &cells {
        let line: Vec<String> = row.iter().zip(&widths).map(|(c, &n)| format!("{c:<n$}")).collect();
        writeln!(w, "{}", line.join("  ").trim_end())?;
    }
    Ok(())
}

fn write_classes(w: &mut dyn Write, g: &FiniteGroup) -> io::Result<()> {
    writeln!(w, "{}: order {}, {} classes", g.label(), g.order(), g.classes().len())?;
    for c in g.classes().classes() {
        let trace = c.trace.as_ref().map(|t| format!("  trace {t}")).unwrap_or_default();
        writeln!(
            w,
            "  {:<5} order {:<4} size {:<6} rep {}{trace}",
            c.name,
            c.order,
            c.size(),
            g.format_element(c.representative)
        )?;
    }
    Ok(())
}

#[derive(Debug, Serialize)]
pub struct CountReport {
    pub group: String,
    pub method: CountMethod,
    pub phi: u64,
    pub aut_order: usize,
    pub o_size: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub per_class_triples: Option<Vec<regmap::TripleCount>>,
    /// Maps found by the enumerator, reported when it counts differently.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub enumerated: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

fn count_report(
    spec: &str,
    g: &FiniteGroup,
    aut: &AutGroup<'_>,
    method: CountMethod,
    per_class: bool,
    cfg: &Config,
) -> Result<CountReport> {
    let (phi, o_size) = match method {
        CountMethod::Direct => {
            let phi = phi_direct(g);
            (phi, order_of_o(phi, aut.order())?)
        }
        CountMethod::Moebius => {
            let phi = u64::try_from(phi_moebius(g, &cfg.limits)?).context("negative phi")?;
            (phi, order_of_o(phi, aut.order())?)
        }
        CountMethod::Formula => {
            let q = match g.family() {
                Family::Psl2(q) | Family::Sl2(q) if q.is_power_of_two() && q >= 4 => q,
                _ => bail!(regmap::Error::Spec {
                    spec: spec.into(),
                    reason: "the closed formula covers psl2:q and sl2:q with q = 2^e, e >= 2".into()
                }),
            };
            let o = psl2_even_closed_form(q.trailing_zeros());
            (o * aut.order() as u64, o)
        }
    };
    let per_class_triples = per_class.then(|| {
        let cd = g.classes();
        let mut v = Vec::new();
        for y in (0..cd.len()).filter(|&i| cd.class(i).order == 2) {
            for x in 0..cd.len() {
                for z in 0..cd.len() {
                    let t = count_triples(g, x, y, z);
                    if t.total > 0 {
                        v.push(t);
                    }
                }
            }
        }
        v
    });
    let (enumerated, note) = if matches!(g.family(), Family::Cyclic(_)) {
        (
            Some(enumerate_maps(aut).len()),
            Some("phi counts pairs with y = 1; the enumerator only takes y of order 2".into()),
        )
    } else {
        (None, None)
    };
    Ok(CountReport {
        group: g.label().to_string(),
        method,
        phi,
        aut_order: aut.order(),
        o_size,
        per_class_triples,
        enumerated,
        note,
    })
}

#[derive(Debug, Serialize)]
pub struct HolesReport {
    pub x: String,
    pub y: String,
    pub extended_type: String,
    pub genus: u64,
    /// Every `1 <= j < q` coprime to `q`.
    pub holes: Vec<Hole>,
    pub petrie_length: u32,
    pub isotactic: Vec<Isotactic>,
    pub relators: Vec<(String, bool)>,
}

#[derive(Debug, Serialize)]
pub struct Hole {
    pub j: i64,
    pub length: u32,
}

#[derive(Debug, Serialize)]
pub struct Isotactic {
    pub exponents: Vec<i64>,
    /// Period `n` of the type `(d1..dm)^n`.
    pub period: u32,
    pub length: u64,
}

fn holes_report(
    aut: &AutGroup<'_>,
    m: &MapTriple<'_>,
    isotactic: &[String],
    relators: &[String],
) -> Result<HolesReport> {
    let g = aut.group();
    let q = m.valency();
    let holes = (1..q.max(2) as i64)
        .filter(|&j| Operation::Hole(j).applies(q))
        .map(|j| Ok(Hole { j, length: m.hole_length(j)? }))
        .collect::<regmap::Result<Vec<_>>>()?;
    let isotactic = isotactic
        .iter()
        .map(|s| {
            let exponents = s
                .split(',')
                .map(|d| d.trim().parse::<i64>())
                .collect::<std::result::Result<Vec<_>, _>>()
                .map_err(|e| regmap::Error::Word { word: s.clone(), reason: e.to_string() })?;
            let period = m.word_order(&exponents);
            Ok(Isotactic { length: exponents.len() as u64 * period as u64, exponents, period })
        })
        .collect::<Result<Vec<_>>>()?;
    let checks = m.check_relators(relators)?;
    let inv = m.invariants(aut);
    Ok(HolesReport {
        x: g.format_element(m.x),
        y: g.format_element(m.y),
        extended_type: inv.extended_type(),
        genus: inv.genus,
        holes,
        petrie_length: m.petrie_length(),
        isotactic,
        relators: relators.iter().cloned().zip(checks).collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (Result<bool>, String) {
        let cli = Cli::try_parse_from(std::iter::once("regmap").chain(args.iter().copied())).unwrap();
        let mut buf = Vec::new();
        let r = run(cli, &mut buf);
        (r, String::from_utf8(buf).unwrap())
    }

    #[test]
    fn cap_errors_map_to_three() {
        let e = anyhow::Error::new(regmap::Error::CapExceeded { what: "group", size: 10, cap: 5 }).context("building");
        assert_eq!(exit_code(&e), EXIT_CAP);
        assert_eq!(exit_code(&anyhow::anyhow!("nope")), EXIT_USAGE);
    }

    #[test]
    fn enumerate_table_has_header_and_rows() {
        let (r, s) = run_args(&["enumerate", "sym:4"]);
        assert!(r.unwrap());
        let lines: Vec<&str> = s.lines().collect();
        assert_eq!(lines.len(), 3);
        assert!(lines[0].starts_with("id  type"));
    }

    #[test]
    fn count_methods_agree() {
        for method in ["direct", "moebius", "formula"] {
            let (r, s) = run_args(&["count", "sl2:8", "--method", method]);
            r.unwrap();
            let v: serde_json::Value = serde_json::from_str(&s).unwrap();
            assert_eq!(v["o_size"], 14, "{method}");
            assert_eq!(v["phi"], 14 * 1512, "{method}");
        }
        assert!(run_args(&["count", "psl2:7", "--method", "formula"]).0.is_err());
    }

    #[test]
    fn cyclic_count_carries_a_note() {
        let (r, s) = run_args(&["count", "cyclic:5"]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["o_size"], 1);
        assert_eq!(v["enumerated"], 0);
        assert!(v["note"].is_string());
    }

    #[test]
    fn holes_of_the_klein_map() {
        let (r, s) = run_args(&["holes", "psl2:7", "--map", "2", "--isotactic", "2,4"]);
        r.unwrap();
        let v: serde_json::Value = serde_json::from_str(&s).unwrap();
        assert_eq!(v["extended_type"], "{3,7}_8");
        assert_eq!(v["holes"][2], serde_json::json!({"j": 3, "length": 4}));
        assert_eq!(v["isotactic"][0]["period"], 3);
        assert_eq!(v["isotactic"][0]["length"], 6);
        assert_eq!(v["petrie_length"], 8);
    }
}

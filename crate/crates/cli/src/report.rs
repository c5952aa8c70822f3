//! Table, CSV and JSON renderings of every report.
//!
//! Output is deterministic: maps are ordered by key (canonical type strings for
//! the census), half-integers are written as `k` or `k/2`, CSV uses `,` and LF
//! and starts with a `# schema=1` comment line.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use sce_core::bounds::{BoundReport, Root};
use sce_core::prime_table::PrimeTable;
use sce_core::type_space::{self, StructuralType};
use sce_core::verify::{DusartScan, ScanReport};
use sce_core::{Decomposition, HalfValue};

pub const CSV_SCHEMA: &str = "# schema=1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Table,
    Csv,
    Json,
}

/// Interchange form of a decomposition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DecompositionRecord {
    #[serde(rename = "E")]
    pub e: u64,
    pub a: HalfValue,
    pub b: u64,
    pub c: u64,
    pub d: HalfValue,
    #[serde(rename = "L1")]
    pub l1: HalfValue,
    #[serde(rename = "L2")]
    pub l2: HalfValue,
    #[serde(rename = "R1")]
    pub r1: HalfValue,
    #[serde(rename = "R2")]
    pub r2: HalfValue,
}

impl From<&Decomposition> for DecompositionRecord {
    fn from(d: &Decomposition) -> Self {
        DecompositionRecord {
            e: d.e,
            a: d.a,
            b: d.b,
            c: d.c,
            d: d.d,
            l1: d.l1,
            l2: d.l2,
            r1: d.r1,
            r2: d.r2,
        }
    }
}

fn json_line<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string(value).expect("report types always serialize");
    s.push('\n');
    s
}

fn csv(header: &str, rows: impl IntoIterator<Item = String>) -> String {
    let mut out = format!("{CSV_SCHEMA}\n{header}\n");
    for row in rows {
        out.push_str(&row);
        out.push('\n');
    }
    out
}

pub fn decomposition(dec: &Decomposition, format: Format) -> String {
    let rec = DecompositionRecord::from(dec);
    match format {
        Format::Json => json_line(&rec),
        Format::Csv => csv(
            "E,a,b,c,d,L1,L2,R1,R2",
            [format!(
                "{},{},{},{},{},{},{},{},{}",
                rec.e, rec.a, rec.b, rec.c, rec.d, rec.l1, rec.l2, rec.r1, rec.r2
            )],
        ),
        Format::Table => {
            let ty = type_space::classify(dec);
            format!(
                "E = {}\n(a, b, c, d)     = ({}, {}, {}, {})\n(L1, L2, R1, R2) = ({}, {}, {}, {})\ntype             = {} (id {}, category {})\n",
                rec.e, rec.a, rec.b, rec.c, rec.d, rec.l1, rec.l2, rec.r1, rec.r2,
                ty.canonical(), ty.type_id, ty.category
            )
        }
    }
}

#[derive(Serialize)]
struct InteractionRow {
    x: u64,
    y: u64,
    class: &'static str,
}

/// Quadruple element an interaction feeds; a self pair has equal primality on both sides.
fn class_of(x_prime: bool, y_prime: bool) -> &'static str {
    match (x_prime, y_prime) {
        (false, false) => "a",
        (false, true) => "b",
        (true, false) => "c",
        (true, true) => "d",
    }
}

/// The pairs of `e` with the quadruple element each one feeds.
pub fn interactions(e: u64, table: &PrimeTable, format: Format) -> sce_core::Result<String> {
    let mut rows = Vec::new();
    for (x, y) in sce_core::interactions(e)? {
        let class = class_of(table.is_prime(x)?, table.is_prime(y)?);
        rows.push(InteractionRow { x, y, class });
    }
    Ok(match format {
        Format::Json => json_line(&rows),
        Format::Csv => csv("x,y,class", rows.iter().map(|r| format!("{},{},{}", r.x, r.y, r.class))),
        Format::Table => {
            let mut s = format!("additive interactions of {e}\n");
            for r in &rows {
                let _ = writeln!(s, "{:>8} ~ {:<8} {}", r.x, r.y, r.class);
            }
            s
        }
    })
}

#[derive(Serialize)]
struct TypeRow<'a> {
    type_id: u8,
    canonical: &'a str,
    category: u8,
    excluded: bool,
}

impl<'a> From<&'a StructuralType> for TypeRow<'a> {
    fn from(t: &'a StructuralType) -> Self {
        TypeRow {
            type_id: t.type_id,
            canonical: t.canonical(),
            category: t.category,
            excluded: t.excluded,
        }
    }
}

pub fn types(format: Format) -> String {
    let rows: Vec<TypeRow> = type_space::enumerate_types().iter().map(TypeRow::from).collect();
    match format {
        Format::Json => json_line(&rows),
        Format::Csv => csv(
            "type_id,canonical,category,excluded",
            rows.iter()
                .map(|r| format!("{},{},{},{}", r.type_id, r.canonical, r.category, r.excluded)),
        ),
        Format::Table => {
            let mut s = String::from("  id  type         cat  excluded\n");
            for r in &rows {
                let _ = writeln!(
                    s,
                    "{:>4}  {:<12} {:>3}  {}",
                    r.type_id,
                    r.canonical,
                    r.category,
                    if r.excluded { "yes" } else { "" }
                );
            }
            s
        }
    }
}

/// Census counts, one row per type that occurred.
pub fn census(report: &ScanReport, format: Format) -> String {
    let rows = || {
        report.type_census.iter().map(|(name, &count)| {
            let t = type_space::parse_type(name).expect("census keys are canonical types");
            (t, count)
        })
    };
    match format {
        Format::Json => json_line(report),
        Format::Csv => csv(
            "type_id,canonical,category,excluded,count",
            rows().map(|(t, n)| format!("{},{},{},{},{n}", t.type_id, t.canonical(), t.category, t.excluded)),
        ),
        Format::Table => {
            let mut s = format!(
                "census of even E in [{}, {}]: {} numbers, {} types seen\n",
                report.range.0,
                report.range.1,
                report.evens_scanned,
                report.type_census.len()
            );
            for (t, n) in rows() {
                let _ = writeln!(
                    s,
                    "{:>4}  {:<12} cat {}  {:>10}{}",
                    t.type_id,
                    t.canonical(),
                    t.category,
                    n,
                    if t.excluded { "  (excluded)" } else { "" }
                );
            }
            let _ = writeln!(s, "excluded-structure hits: {}", report.excluded_hits.len());
            s
        }
    }
}

/// `section,key,value` rows covering every populated field of a scan report.
fn scan_rows(report: &ScanReport) -> Vec<String> {
    let mut rows = vec![
        format!("range,lo,{}", report.range.0),
        format!("range,hi,{}", report.range.1),
        format!("summary,evens_scanned,{}", report.evens_scanned),
    ];
    for e in &report.goldbach_failures {
        rows.push(format!("goldbach_failure,E,{e}"));
    }
    if let Some(m) = report.min_d {
        rows.push(format!("min_d,E,{}", m.e));
        rows.push(format!("min_d,d,{}", m.d));
    }
    for (k, v) in &report.type_census {
        rows.push(format!("census,{k},{v}"));
    }
    for h in &report.excluded_hits {
        rows.push(format!("excluded_hit,{},{}", h.e, h.type_name));
    }
    for e in &report.theorem_violations {
        rows.push(format!("theorem_violation,E,{e}"));
    }
    for (k, v) in &report.bound_checked {
        rows.push(format!("bound_checked,{k},{v}"));
    }
    for (k, list) in &report.bound_failures {
        for e in list {
            rows.push(format!("bound_failure,{k},{e}"));
        }
    }
    for (k, v) in &report.marginal {
        rows.push(format!("marginal,{k},{v}"));
    }
    for f in &report.identity_failures {
        rows.push(format!("identity_failure,{},{}", f.id, f.e));
    }
    rows
}

fn preview(list: &[u64]) -> String {
    const SHOWN: usize = 10;
    let head: Vec<String> = list.iter().take(SHOWN).map(u64::to_string).collect();
    if list.len() > SHOWN {
        format!("{} ... ({} total)", head.join(", "), list.len())
    } else {
        head.join(", ")
    }
}

pub fn scan(report: &ScanReport, format: Format) -> String {
    match format {
        Format::Json => json_line(report),
        Format::Csv => csv("section,key,value", scan_rows(report)),
        Format::Table => {
            let mut s = format!(
                "even E in [{}, {}]: {} scanned\n",
                report.range.0, report.range.1, report.evens_scanned
            );
            let _ = writeln!(s, "goldbach failures (d_E = 0): [{}]", preview(&report.goldbach_failures));
            if let Some(m) = report.min_d {
                let _ = writeln!(s, "smallest d_E: {} at E = {}", m.d, m.e);
            }
            if !report.type_census.is_empty() {
                let _ = writeln!(s, "types seen: {}", report.type_census.len());
                let _ = writeln!(s, "excluded-structure hits: {}", report.excluded_hits.len());
                for h in report.excluded_hits.iter().take(10) {
                    let _ = writeln!(s, "  E = {}  {}  d = {}", h.e, h.type_name, h.d);
                }
            }
            if !report.bound_checked.is_empty() {
                let _ = writeln!(s, "theorem violations: [{}]", preview(&report.theorem_violations));
                let _ = writeln!(s, "{:<14} {:>10} {:>10} {:>9}", "bound", "checked", "failed", "marginal");
                for (k, n) in &report.bound_checked {
                    let failed = report.bound_failures.get(k).map_or(0, Vec::len);
                    let marginal = report.marginal.get(k).copied().unwrap_or(0);
                    let _ = writeln!(s, "{k:<14} {n:>10} {failed:>10} {marginal:>9}");
                }
                let mut by_id: std::collections::BTreeMap<&str, Vec<u64>> = Default::default();
                for f in &report.identity_failures {
                    by_id.entry(&f.id).or_default().push(f.e);
                }
                let _ = writeln!(s, "identity failures: {}", report.identity_failures.len());
                for (id, es) in by_id {
                    let _ = writeln!(s, "  {id}: [{}]", preview(&es));
                }
            }
            s
        }
    }
}

pub fn bound_reports(reports: &[BoundReport], format: Format) -> String {
    let ids: Vec<&str> = sce_core::Inequality::SUITE.iter().map(|i| i.id()).collect();
    let outcome = |o: sce_core::Outcome| -> &'static str {
        match o {
            sce_core::Outcome::Holds => "holds",
            sce_core::Outcome::Fails => "fails",
            sce_core::Outcome::Marginal => "marginal",
            sce_core::Outcome::NotApplicable => "n/a",
        }
    };
    match format {
        Format::Json => json_line(&reports),
        Format::Csv => csv(
            &format!("E,{}", ids.join(",")),
            reports.iter().map(|r| {
                let cells: Vec<&str> = r.entries().iter().map(|&(_, o)| outcome(o)).collect();
                format!("{},{}", r.e, cells.join(","))
            }),
        ),
        Format::Table => {
            let mut s = format!("{:>10}", "E");
            for id in &ids {
                let _ = write!(s, " {id:>8}");
            }
            s.push('\n');
            for r in reports {
                let _ = write!(s, "{:>10}", r.e);
                for (_, o) in r.entries() {
                    let _ = write!(s, " {:>8}", outcome(o));
                }
                s.push('\n');
            }
            s
        }
    }
}

pub fn dusart(scan: &DusartScan, format: Format) -> String {
    match format {
        Format::Json => json_line(scan),
        Format::Csv => {
            let mut rows = vec![
                format!("range,from,{}", scan.range.0),
                format!("range,to,{}", scan.range.1),
                format!("summary,constant,{}", scan.constant.value()),
                format!("summary,checked,{}", scan.checked),
                format!("marginal,dusart_lower,{}", scan.lower_marginal),
                format!("marginal,dusart_upper,{}", scan.upper_marginal),
            ];
            rows.extend(scan.lower_failures.iter().map(|x| format!("bound_failure,dusart_lower,{x}")));
            rows.extend(scan.upper_failures.iter().map(|x| format!("bound_failure,dusart_upper,{x}")));
            csv("section,key,value", rows)
        }
        Format::Table => {
            let mut s = format!(
                "x in [{}, {}], c = {}: {} checked\n",
                scan.range.0,
                scan.range.1,
                scan.constant.value(),
                scan.checked
            );
            let _ = writeln!(
                s,
                "x/ln x <= pi(x) (x >= 17): {} failures [{}], {} marginal",
                scan.lower_failures.len(),
                preview(&scan.lower_failures),
                scan.lower_marginal
            );
            let _ = writeln!(
                s,
                "pi(x) <= c x/ln x: {} failures [{}], {} marginal",
                scan.upper_failures.len(),
                preview(&scan.upper_failures),
                scan.upper_marginal
            );
            if let Some(x) = scan.first_upper_violation() {
                let _ = writeln!(s, "first upper violation: x = {x}");
            }
            s
        }
    }
}

/// A located (or unlocatable) root next to the printed value.
#[derive(Debug, Clone, Serialize)]
pub struct ThresholdRow {
    pub id: String,
    pub lo: f64,
    pub hi: f64,
    pub printed: f64,
    pub root: Option<Root>,
    /// Why no root was returned.
    pub error: Option<String>,
}

pub fn thresholds(rows: &[ThresholdRow], format: Format) -> String {
    match format {
        Format::Json => json_line(&rows),
        Format::Csv => csv(
            "id,lo,hi,printed,root,iterations,status",
            rows.iter().map(|r| match &r.root {
                Some(root) => format!(
                    "{},{},{},{},{},{},ok",
                    r.id, r.lo, r.hi, r.printed, root.root, root.iterations
                ),
                None => format!("{},{},{},{},,,no_sign_change", r.id, r.lo, r.hi, r.printed),
            }),
        ),
        Format::Table => {
            let mut s = String::new();
            for r in rows {
                match &r.root {
                    Some(root) => {
                        let _ = writeln!(
                            s,
                            "{:<14} root {:.9} on [{}, {}] ({} halvings); printed {}",
                            r.id, root.root, r.lo, r.hi, root.iterations, r.printed
                        );
                    }
                    None => {
                        let _ = writeln!(
                            s,
                            "{:<14} no root on [{}, {}]: {}; printed {}",
                            r.id,
                            r.lo,
                            r.hi,
                            r.error.as_deref().unwrap_or("no sign change"),
                            r.printed
                        );
                    }
                }
            }
            s
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn twenty_as_json() {
        let t = PrimeTable::build(20).unwrap();
        let dec = sce_core::decompose(20, &t).unwrap();
        assert_eq!(
            decomposition(&dec, Format::Json),
            "{\"E\":20,\"a\":\"0\",\"b\":2,\"c\":1,\"d\":\"2\",\"L1\":\"2\",\"L2\":\"3\",\"R1\":\"1\",\"R2\":\"4\"}\n"
        );
    }

    #[test]
    fn half_values_stay_exact_in_csv() {
        let t = PrimeTable::build(10).unwrap();
        let dec = sce_core::decompose(10, &t).unwrap();
        let out = decomposition(&dec, Format::Csv);
        assert_eq!(out, "# schema=1\nE,a,b,c,d,L1,L2,R1,R2\n10,1,0,0,3/2,1,3/2,1,3/2\n");
    }

    #[test]
    fn single_e_census_is_one_row() {
        let t = PrimeTable::build(20).unwrap();
        let r = sce_core::verify::census(20, 20, &t).unwrap();
        let out = census(&r, Format::Csv);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[0], CSV_SCHEMA);
        assert!(lines[2].contains(",a<c<b=d,4,false,1"), "{}", lines[2]);
    }

    #[test]
    fn interaction_classes() {
        let t = PrimeTable::build(20).unwrap();
        let out = interactions(20, &t, Format::Csv).unwrap();
        assert_eq!(
            out,
            "# schema=1\nx,y,class\n1,19,b\n3,17,d\n5,15,c\n7,13,d\n9,11,b\n"
        );
        let out = interactions(10, &t, Format::Csv).unwrap();
        assert!(out.ends_with("5,5,d\n"));
    }
}

//! Text file formats.
//!
//! * complex: one simplex per line, `v0 v1 ... vk g`, any order.
//! * cover: one patch per line, `id : v0 v1 ...`.
//! * points: CSV, one point per row, no header.
//! * barcode: `q birth death` per line, `inf` for an infinite death,
//!   sorted by `(q, birth, death)`.
//! * ledger: CSV with header `page,sender,receiver,count`.
//!
//! Blank lines and lines starting with `#` are ignored in the
//! whitespace formats.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use mvss_core::algebra::Death;
use mvss_core::complex::{Cover, FilteredComplex, Simplex};
use mvss_core::parallel::{MessageLedger, TaskPlan};
use mvss_core::persistence::{Bar, Barcode};

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub fn read_file(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

pub fn parse_complex(text: &str) -> Result<FilteredComplex> {
    let mut simplices = Vec::new();
    for (n, line) in content_lines(text) {
        let nums = line
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("line {n}: expected integers"))?;
        if nums.len() < 2 {
            bail!("line {n}: expected vertices followed by a grade");
        }
        let (grade, verts) = nums.split_last().unwrap();
        let s = Simplex::new(verts.to_vec()).with_context(|| format!("line {n}"))?;
        simplices.push((s, *grade));
    }
    Ok(FilteredComplex::new(simplices)?)
}

pub fn format_complex(x: &FilteredComplex) -> String {
    let mut s = String::new();
    for (simplex, g) in x.simplices() {
        for v in simplex.vertices() {
            let _ = write!(s, "{v} ");
        }
        let _ = writeln!(s, "{g}");
    }
    s
}

/// Patches are ordered by id; ids must be distinct.
pub fn parse_cover(text: &str) -> Result<Cover> {
    let mut patches: BTreeMap<u64, BTreeSet<u32>> = BTreeMap::new();
    for (n, line) in content_lines(text) {
        let (id, rest) = line.split_once(':').ok_or_else(|| anyhow!("line {n}: missing ':'"))?;
        let id: u64 = id.trim().parse().with_context(|| format!("line {n}: bad patch id"))?;
        let verts = rest
            .split_whitespace()
            .map(|t| t.parse::<u32>())
            .collect::<Result<BTreeSet<_>, _>>()
            .with_context(|| format!("line {n}: bad vertex"))?;
        if patches.insert(id, verts).is_some() {
            bail!("line {n}: duplicate patch id {id}");
        }
    }
    Ok(Cover::new(patches.into_values().collect()))
}

pub fn format_cover(cover: &Cover) -> String {
    let mut s = String::new();
    for (i, p) in cover.patches().iter().enumerate() {
        let _ = write!(s, "{i} :");
        for v in p {
            let _ = write!(s, " {v}");
        }
        s.push('\n');
    }
    s
}

pub fn parse_points(text: &str) -> Result<Vec<Vec<f64>>> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(text.as_bytes());
    let mut out = Vec::new();
    for (n, rec) in rdr.records().enumerate() {
        let rec = rec.with_context(|| format!("point row {}", n + 1))?;
        let p = rec
            .iter()
            .map(|f| f.parse::<f64>())
            .collect::<Result<Vec<_>, _>>()
            .with_context(|| format!("point row {}: bad coordinate", n + 1))?;
        out.push(p);
    }
    Ok(out)
}

pub fn format_points(points: &[Vec<f64>]) -> Result<String> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    for p in points {
        w.write_record(p.iter().map(|x| x.to_string()))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

/// Whitespace-separated vertex ids.
pub fn parse_vertex_ids(text: &str) -> Result<Vec<u32>> {
    content_lines(text)
        .flat_map(|(_, l)| l.split_whitespace())
        .map(|t| t.parse::<u32>().with_context(|| format!("bad vertex id {t:?}")))
        .collect()
}

pub fn format_barcode(b: &Barcode) -> String {
    b.to_string()
}

pub fn parse_barcode(text: &str) -> Result<Barcode> {
    let mut bars = Vec::new();
    for (n, line) in content_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 3 {
            bail!("line {n}: expected `q birth death`");
        }
        let death = if f[2] == "inf" {
            Death::Infinite
        } else {
            Death::Finite(f[2].parse().with_context(|| format!("line {n}: bad death"))?)
        };
        bars.push(Bar {
            dim: f[0].parse().with_context(|| format!("line {n}: bad degree"))?,
            birth: f[1].parse().with_context(|| format!("line {n}: bad birth"))?,
            death,
        });
    }
    Ok(Barcode::new(bars))
}

/// Senders and receivers are written as patch lists joined by `-`.
pub fn format_ledger(ledger: &MessageLedger, plan: &TaskPlan) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["page", "sender", "receiver", "count"])?;
    let name = |t: usize| plan.tasks[t].iter().map(|v| v.to_string()).collect::<Vec<_>>().join("-");
    for ((r, s, t), c) in ledger.entries() {
        w.write_record([r.to_string(), name(s), name(t), c.to_string()])?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_round_trip() {
        let x = parse_complex("# edge\n0 1 2\n0 0\n1 1\n").unwrap();
        assert_eq!(x.len(), 3);
        assert_eq!(parse_complex(&format_complex(&x)).unwrap(), x);
        assert!(parse_complex("0 1 2\n0 0\n").is_err());
    }

    #[test]
    fn cover_round_trip() {
        let c = parse_cover("1 : 2 3\n0 : 0 1 2\n").unwrap();
        assert_eq!(format_cover(&c), "0 : 0 1 2\n1 : 2 3\n");
        assert!(parse_cover("0 : 1\n0 : 2\n").is_err());
    }

    #[test]
    fn barcode_round_trip() {
        let text = "0 0 inf\n0 0 1\n1 2 inf\n";
        let b = parse_barcode(text).unwrap();
        assert_eq!(format_barcode(&b), "0 0 1\n0 0 inf\n1 2 inf\n");
    }

    #[test]
    fn points_csv() {
        let p = parse_points("0.5, 1\n2,3\n").unwrap();
        assert_eq!(p, vec![vec![0.5, 1.0], vec![2.0, 3.0]]);
        assert_eq!(parse_points(&format_points(&p).unwrap()).unwrap(), p);
    }
}

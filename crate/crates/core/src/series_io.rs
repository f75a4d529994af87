//! Polygon-count tables: `q_L` (circuits surrounding a fixed triangular
//! vertex) and optionally `p_L` (circuits modulo translation).
//!
//! Two text formats are read. The canonical one is `L,q_L` (optionally
//! `L,q_L,p_L`) per line, sorted, no header. The moment-series one is the
//! whitespace-separated `L value` layout of published enumeration files; it
//! skips blank lines, `#` comments and any line that does not start with an
//! integer, and drops odd `L` entries whose value is zero.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Provenance {
    Enumerated,
    Ingested,
    Merged,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Canonical,
    MomentSeries,
}

impl FromStr for Format {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "canonical" | "csv" => Ok(Format::Canonical),
            "moment-series" | "moment" | "ser" => Ok(Format::MomentSeries),
            _ => Err(Error::InvalidInput(format!("unknown table format `{s}`"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PolygonTable {
    q: BTreeMap<u32, BigUint>,
    p: BTreeMap<u32, BigUint>,
    provenance: Provenance,
}

fn check_entry(l: u32, q: &BigUint) -> std::result::Result<(), String> {
    if l % 2 == 1 {
        return Err(format!(
            "odd length {l}: honeycomb circuits have even length"
        ));
    }
    if l < 6 {
        return Err(format!("length {l} below 6"));
    }
    if l == 6 && !q.is_one() {
        return Err(format!("q_6 must be 1, found {q}"));
    }
    if l == 8 && !q.is_zero() {
        return Err(format!("q_8 must be 0, found {q}"));
    }
    Ok(())
}

impl PolygonTable {
    pub fn new(provenance: Provenance) -> Self {
        PolygonTable {
            q: BTreeMap::new(),
            p: BTreeMap::new(),
            provenance,
        }
    }

    /// Builds a validated table from `q_L` and optional `p_L` maps.
    pub fn from_maps(
        q: BTreeMap<u32, BigUint>,
        p: BTreeMap<u32, BigUint>,
        provenance: Provenance,
    ) -> Result<Self> {
        for (&l, v) in &q {
            check_entry(l, v).map_err(Error::InvalidInput)?;
        }
        for &l in p.keys() {
            if !q.contains_key(&l) {
                return Err(Error::InvalidInput(format!("p_{l} given without q_{l}")));
            }
        }
        Ok(PolygonTable { q, p, provenance })
    }

    pub fn q(&self) -> &BTreeMap<u32, BigUint> {
        &self.q
    }

    pub fn p(&self) -> &BTreeMap<u32, BigUint> {
        &self.p
    }

    pub fn q_at(&self, l: u32) -> Option<&BigUint> {
        self.q.get(&l)
    }

    pub fn p_at(&self, l: u32) -> Option<&BigUint> {
        self.p.get(&l)
    }

    pub fn provenance(&self) -> Provenance {
        self.provenance
    }

    pub fn max_l(&self) -> Option<u32> {
        self.q.keys().next_back().copied()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    /// Largest `M` such that every even `6 ≤ L ≤ M` is present, treating a
    /// missing `L = 8` as the known value 0.
    pub fn contiguous_max(&self) -> Option<u32> {
        let mut m = None;
        let mut l = 6;
        while self.q.contains_key(&l) || l == 8 {
            if self.q.contains_key(&l) {
                m = Some(l);
            }
            l += 2;
        }
        m
    }

    /// `q_L` for `L ≤ max`, with the gap at 8 filled; errors if a length is missing.
    pub fn q_prefix(&self, max: u32) -> Result<Vec<(u32, BigUint)>> {
        let mut out = Vec::new();
        for l in (6..=max).step_by(2) {
            match self.q.get(&l) {
                Some(v) => out.push((l, v.clone())),
                None if l == 8 => out.push((8, BigUint::zero())),
                None => {
                    return Err(Error::InvalidInput(format!(
                        "table has no entry for L = {l}"
                    )))
                }
            }
        }
        Ok(out)
    }

    /// Table restricted to `L ≤ max`.
    pub fn truncated(&self, max: u32) -> PolygonTable {
        PolygonTable {
            q: self.q.range(..=max).map(|(&l, v)| (l, v.clone())).collect(),
            p: self.p.range(..=max).map(|(&l, v)| (l, v.clone())).collect(),
            provenance: self.provenance,
        }
    }
}

fn parse_uint(tok: &str, line: usize) -> Result<BigUint> {
    tok.trim().parse::<BigUint>().map_err(|_| Error::Parse {
        line,
        msg: format!("`{}` is not a nonnegative integer", tok.trim()),
    })
}

fn parse_len(tok: &str, line: usize) -> Result<u32> {
    tok.trim().parse::<u32>().map_err(|_| Error::Parse {
        line,
        msg: format!("`{}` is not a length", tok.trim()),
    })
}

/// Parses a table in the given format.
pub fn parse_polygon_table(text: &str, format: Format) -> Result<PolygonTable> {
    if text.trim().is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "empty input".into(),
        });
    }
    let mut q = BTreeMap::new();
    let mut p = BTreeMap::new();
    let insert = |q: &mut BTreeMap<u32, BigUint>, l: u32, v: BigUint, line: usize| -> Result<()> {
        check_entry(l, &v).map_err(|msg| Error::Parse { line, msg })?;
        if q.insert(l, v).is_some() {
            return Err(Error::Parse {
                line,
                msg: format!("duplicate length {l}"),
            });
        }
        Ok(())
    };
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let s = raw.trim();
        match format {
            Format::Canonical => {
                if s.is_empty() {
                    continue;
                }
                let cols: Vec<&str> = s.split(',').collect();
                if !(2..=3).contains(&cols.len()) {
                    return Err(Error::Parse {
                        line,
                        msg: "expected `L,q_L` or `L,q_L,p_L`".into(),
                    });
                }
                let l = parse_len(cols[0], line)?;
                insert(&mut q, l, parse_uint(cols[1], line)?, line)?;
                if let Some(c) = cols.get(2) {
                    p.insert(l, parse_uint(c, line)?);
                }
            }
            Format::MomentSeries => {
                let toks: Vec<&str> = s.split_whitespace().collect();
                if toks.is_empty() || s.starts_with('#') || toks[0].parse::<i64>().is_err() {
                    continue;
                }
                if toks.len() < 2 {
                    return Err(Error::Parse {
                        line,
                        msg: "expected `L value`".into(),
                    });
                }
                let l = parse_len(toks[0], line)?;
                let v = parse_uint(toks[1], line)?;
                if l % 2 == 1 && v.is_zero() {
                    continue;
                }
                // published files may start at small L with zero rows
                if l < 6 && v.is_zero() {
                    continue;
                }
                insert(&mut q, l, v, line)?;
            }
        }
    }
    if q.is_empty() {
        return Err(Error::Parse {
            line: 0,
            msg: "no entries".into(),
        });
    }
    Ok(PolygonTable {
        q,
        p,
        provenance: Provenance::Ingested,
    })
}

/// Canonical CSV, sorted by `L`; a third column is written when `p_L` is known.
pub fn write_polygon_table(table: &PolygonTable) -> String {
    let mut out = String::new();
    for (l, v) in &table.q {
        match table.p.get(l) {
            Some(p) => writeln!(out, "{l},{v},{p}").unwrap(),
            None => writeln!(out, "{l},{v}").unwrap(),
        }
    }
    out
}

/// Combines two tables; shared lengths must agree exactly.
pub fn merge(a: &PolygonTable, b: &PolygonTable) -> Result<PolygonTable> {
    let mut bad: Vec<u32> = Vec::new();
    let mut q = a.q.clone();
    for (&l, v) in &b.q {
        match q.get(&l) {
            Some(w) if w != v => bad.push(l),
            Some(_) => {}
            None => {
                q.insert(l, v.clone());
            }
        }
    }
    let mut p = a.p.clone();
    for (&l, v) in &b.p {
        match p.get(&l) {
            Some(w) if w != v => bad.push(l),
            Some(_) => {}
            None => {
                p.insert(l, v.clone());
            }
        }
    }
    if !bad.is_empty() {
        bad.sort_unstable();
        bad.dedup();
        return Err(Error::MergeConflict(bad));
    }
    Ok(PolygonTable {
        q,
        p,
        provenance: Provenance::Merged,
    })
}

/// Environment variable naming an external series file.
pub const SERIES_ENV: &str = "AFPOTTS_SERIES";

/// Location of the external `q_L` series: `$AFPOTTS_SERIES` if set, else the
/// first existing of `data/hcsapmom1.ser` and `data/hcsapmom1.csv` under `root`.
pub fn locate_series(root: &Path) -> Option<PathBuf> {
    if let Some(p) = std::env::var_os(SERIES_ENV) {
        return Some(PathBuf::from(p));
    }
    ["data/hcsapmom1.ser", "data/hcsapmom1.csv"]
        .iter()
        .map(|f| root.join(f))
        .find(|p| p.exists())
}

/// Reads a series file, choosing the format from its extension (`.csv` is
/// canonical, anything else moment-series).
pub fn read_series(path: &Path) -> Result<PolygonTable> {
    let text = std::fs::read_to_string(path)?;
    let format = match path.extension().and_then(|e| e.to_str()) {
        Some("csv") => Format::Canonical,
        _ => Format::MomentSeries,
    };
    parse_polygon_table(&text, format)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn table(entries: &[(u32, u64)]) -> PolygonTable {
        let q = entries
            .iter()
            .map(|&(l, v)| (l, BigUint::from(v)))
            .collect();
        PolygonTable::from_maps(q, BTreeMap::new(), Provenance::Enumerated).unwrap()
    }

    #[test]
    fn canonical_parse() {
        let t = parse_polygon_table("6,1\n10,6\n", Format::Canonical).unwrap();
        assert_eq!(
            t,
            PolygonTable {
                provenance: Provenance::Ingested,
                ..table(&[(6, 1), (10, 6)])
            }
        );
        assert_eq!(t.max_l(), Some(10));
        assert_eq!(t.contiguous_max(), Some(10));
    }

    #[test]
    fn parse_errors_name_the_line() {
        assert!(matches!(
            parse_polygon_table("", Format::Canonical),
            Err(Error::Parse { line: 0, .. })
        ));
        assert!(matches!(
            parse_polygon_table("7,3\n", Format::Canonical),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_polygon_table("6,1\n6,1\n", Format::Canonical),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_polygon_table("6,2\n", Format::Canonical),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_polygon_table("6,1\n10,x\n", Format::Canonical),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_polygon_table("6,1\n10,-6\n", Format::Canonical),
            Err(Error::Parse { line: 2, .. })
        ));
    }

    #[test]
    fn write_sorted() {
        assert_eq!(write_polygon_table(&table(&[(6, 1)])), "6,1\n");
        assert_eq!(
            write_polygon_table(&table(&[(12, 6), (6, 1), (10, 6)])),
            "6,1\n10,6\n12,6\n"
        );
    }

    #[test]
    fn moment_series_is_tolerant() {
        let text = "# honeycomb polygons, first moment\nN  coefficient\n\n 6 1\n7 0\n8 0\n10\t6\n12 6 extra\n";
        let t = parse_polygon_table(text, Format::MomentSeries).unwrap();
        assert_eq!(t.q().len(), 4);
        assert_eq!(t.q_at(12), Some(&BigUint::from(6u32)));
        assert!(parse_polygon_table("6 1\n9 4\n", Format::MomentSeries).is_err());
    }

    #[test]
    fn merge_reports_conflicts() {
        let a = table(&[(6, 1), (10, 6)]);
        let b = table(&[(6, 1), (10, 7), (12, 6)]);
        match merge(&a, &b) {
            Err(Error::MergeConflict(ls)) => assert_eq!(ls, vec![10]),
            other => panic!("{other:?}"),
        }
        let m = merge(&a, &table(&[(12, 6)])).unwrap();
        assert_eq!(m.provenance(), Provenance::Merged);
        assert_eq!(m.len(), 3);
    }

    #[test]
    fn gap_at_eight() {
        let t = table(&[(6, 1), (10, 6), (12, 6), (16, 9)]);
        assert_eq!(t.contiguous_max(), Some(12));
        assert_eq!(t.q_prefix(12).unwrap()[1], (8, BigUint::zero()));
        assert!(t.q_prefix(14).is_err());
    }

    proptest! {
        #[test]
        fn round_trip(vals in proptest::collection::btree_map(5u32..60, 0u64..u64::MAX, 0..20), with_p in any::<bool>()) {
            let mut q: BTreeMap<u32, BigUint> = vals.iter().map(|(&h, &v)| (2 * h, BigUint::from(v) * BigUint::from(v))).collect();
            q.insert(6, BigUint::one());
            q.remove(&8);
            let p = if with_p { q.iter().map(|(&l, v)| (l, v / 2u32)).collect() } else { BTreeMap::new() };
            let t = PolygonTable::from_maps(q, p, Provenance::Ingested).unwrap();
            let back = parse_polygon_table(&write_polygon_table(&t), Format::Canonical).unwrap();
            prop_assert_eq!(back, t);
        }
    }
}

//! Fixture loading shared by the integration tests.

#![allow(dead_code)]

use std::fmt;
use std::path::PathBuf;

use air_index::table::{plan_document, PlanDocument, PlanRow};
use air_index::{build_air, build_plan};

pub fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name].iter().collect();
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

/// A matrix fixture as rows of 0/1 bytes.
pub fn matrix_fixture(name: &str) -> Vec<Vec<u8>> {
    fixture(name)
        .lines()
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.trim().bytes().map(|b| b - b'0').collect())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Cell {
    /// Printed as blank or "-".
    Absent,
    /// Column not present in that table.
    NotListed,
    Value(Vec<usize>),
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Absent => f.write_str("-"),
            Cell::NotListed => f.write_str("*"),
            Cell::Value(v) => {
                let s: Vec<String> = v.iter().map(ToString::to_string).collect();
                write!(f, "{{{}}}", s.join(","))
            }
        }
    }
}

fn parse_cell(s: &str) -> Cell {
    match s.trim() {
        "-" | "" => Cell::Absent,
        "*" => Cell::NotListed,
        s => {
            let mut v: Vec<usize> = s.split_whitespace().map(|x| x.parse().unwrap()).collect();
            v.sort_unstable();
            Cell::Value(v)
        }
    }
}

pub const COLUMNS: [&str; 7] = ["d_max", "mu_k", "mu_kp", "t_k1", "t_kp1", "tau", "gamma"];

/// Rows of a decoding-table fixture: receiver index and one cell per column.
pub fn table_fixture(name: &str) -> Vec<(usize, Vec<Cell>)> {
    let text = fixture(name);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(header, "k,d_max,mu_k,mu_kp,t_k1,t_kp1,tau,gamma");
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| {
            let fields: Vec<&str> = l.split(',').collect();
            assert_eq!(fields.len(), 8, "{l}");
            (fields[0].parse().unwrap(), fields[1..].iter().map(|s| parse_cell(s)).collect())
        })
        .collect()
}

fn one(v: Option<usize>) -> Cell {
    v.map_or(Cell::Absent, |x| Cell::Value(vec![x]))
}

fn set(v: &[usize]) -> Cell {
    if v.is_empty() {
        Cell::Absent
    } else {
        Cell::Value(v.to_vec())
    }
}

pub fn cells_of(row: &PlanRow) -> Vec<Cell> {
    vec![
        one(row.d_max),
        one(row.mu),
        one(row.mu_prime),
        one(row.t.first().copied()),
        one(row.t_prime.first().copied()),
        set(&row.tau),
        set(&row.gamma),
    ]
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Mismatch {
    pub k: usize,
    pub column: &'static str,
    pub reference: Cell,
    pub ours: Cell,
}

impl fmt::Display for Mismatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "R_{} {}: reference {} vs {}", self.k, self.column, self.reference, self.ours)
    }
}

pub fn plan_doc(k: usize, d: usize) -> PlanDocument {
    let m = build_air(k, d).unwrap();
    plan_document(&m, &build_plan(&m).unwrap()).unwrap()
}

/// Every cell where the document disagrees with the fixture.
pub fn table_mismatches(doc: &PlanDocument, fixture_name: &str) -> Vec<Mismatch> {
    let rows = table_fixture(fixture_name);
    assert_eq!(rows.len(), doc.receivers.len());
    let mut out = Vec::new();
    for (k, reference) in rows {
        let ours = cells_of(&doc.receivers[k]);
        for ((column, p), o) in COLUMNS.iter().zip(reference).zip(ours) {
            if p != Cell::NotListed && p != o {
                out.push(Mismatch {
                    k,
                    column,
                    reference: p,
                    ours: o,
                });
            }
        }
    }
    out
}

/// The (12,7) reference lists `c_8 .. c_11` for receivers 8-11; only
/// `c_0 .. c_7` exist.
pub fn sanctioned(table: &str, m: &Mismatch) -> bool {
    table == "plan_12_7.csv" && m.column == "tau" && (8..=11).contains(&m.k)
}

//! Reference tables shipped as CSV, and comparison of computed values
//! against them.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::hft::state_report;
use crate::molecule::MoleculeParams;
use crate::spectrum::{QuantumState, StateReport};

/// Environment variable overriding the fixture directory.
pub const FIXTURE_ENV: &str = "DFSPEC_FIXTURES";

/// Fixtures bundled with this crate.
pub fn default_fixture_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

/// Explicit path, then `DFSPEC_FIXTURES`, then the bundled directory.
pub fn resolve_fixture_dir(explicit: Option<&Path>) -> PathBuf {
    explicit
        .map(Path::to_path_buf)
        .or_else(|| std::env::var_os(FIXTURE_ENV).map(PathBuf::from))
        .unwrap_or_else(default_fixture_dir)
}

pub fn fixture_path(dir: &Path, molecule: &str) -> PathBuf {
    dir.join(format!("{molecule}.csv"))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub molecule: String,
    pub n: u32,
    pub l: u32,
    #[serde(rename = "r2_invA2")]
    pub r2: f64,
    #[serde(rename = "V_eV")]
    pub potential: f64,
    #[serde(rename = "T_eV")]
    pub kinetic: f64,
    #[serde(rename = "E_eV")]
    pub energy: f64,
    pub p2_paper: f64,
}

impl FixtureRow {
    pub fn state(&self) -> QuantumState {
        QuantumState::new(self.n, self.l)
    }
}

pub fn parse_fixture(text: &str) -> Result<Vec<FixtureRow>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());
    reader
        .deserialize()
        .map(|row| {
            row.map_err(|e| {
                let line = e.position().map_or(0, |p| p.line());
                Error::Parse {
                    line,
                    message: e.to_string(),
                }
            })
        })
        .collect()
}

pub fn load_fixture(dir: &Path, molecule: &str) -> Result<Vec<FixtureRow>> {
    let path = fixture_path(dir, molecule);
    let text = match std::fs::read_to_string(&path) {
        Ok(t) => t,
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            return Err(Error::MissingFixture {
                molecule: molecule.to_string(),
                path,
            })
        }
        Err(e) => return Err(e.into()),
    };
    let rows = parse_fixture(&text)?;
    if let Some(bad) = rows.iter().find(|r| r.molecule != molecule) {
        return Err(Error::Parse {
            line: 0,
            message: format!("{} holds a row for {}", path.display(), bad.molecule),
        });
    }
    Ok(rows)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Column {
    #[serde(rename = "r2_invA2")]
    R2,
    #[serde(rename = "V_eV")]
    Potential,
    #[serde(rename = "T_eV")]
    Kinetic,
    #[serde(rename = "E_eV")]
    Energy,
    #[serde(rename = "p2_paper")]
    P2,
}

impl Column {
    pub const ALL: [Column; 5] = [
        Column::R2,
        Column::Potential,
        Column::Kinetic,
        Column::Energy,
        Column::P2,
    ];

    pub fn header(self) -> &'static str {
        match self {
            Column::R2 => "r2_invA2",
            Column::Potential => "V_eV",
            Column::Kinetic => "T_eV",
            Column::Energy => "E_eV",
            Column::P2 => "p2_paper",
        }
    }

    pub fn is_relative(self) -> bool {
        matches!(self, Column::R2 | Column::P2)
    }

    fn computed(self, r: &StateReport) -> f64 {
        match self {
            Column::R2 => r.r2,
            Column::Potential => r.potential,
            Column::Kinetic => r.kinetic,
            Column::Energy => r.energy,
            Column::P2 => r.p2_paper,
        }
    }

    fn expected(self, r: &FixtureRow) -> f64 {
        match self {
            Column::R2 => r.r2,
            Column::Potential => r.potential,
            Column::Kinetic => r.kinetic,
            Column::Energy => r.energy,
            Column::P2 => r.p2_paper,
        }
    }
}

impl fmt::Display for Column {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.header())
    }
}

/// Absolute tolerances for energies, relative for `<r^-2>` and `<p^2>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerances {
    pub energy_abs: f64,
    pub potential_abs: f64,
    pub kinetic_abs: f64,
    pub r2_rel: f64,
    pub p2_rel: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            energy_abs: 1e-6,
            potential_abs: 1e-6,
            kinetic_abs: 1e-6,
            r2_rel: 1e-6,
            p2_rel: 2e-3,
        }
    }
}

impl Tolerances {
    pub fn get(&self, column: Column) -> f64 {
        match column {
            Column::R2 => self.r2_rel,
            Column::Potential => self.potential_abs,
            Column::Kinetic => self.kinetic_abs,
            Column::Energy => self.energy_abs,
            Column::P2 => self.p2_rel,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Offender {
    pub molecule: String,
    pub n: u32,
    pub l: u32,
    pub column: Column,
    pub computed: f64,
    pub expected: f64,
    pub deviation: f64,
    pub tolerance: f64,
}

impl fmt::Display for Offender {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = if self.column.is_relative() { "rel" } else { "abs" };
        write!(
            f,
            "{} n={} l={} {}: computed {:.10e}, table {:.10e}, {kind} dev {:.3e} > {:.1e}",
            self.molecule, self.n, self.l, self.column, self.computed, self.expected, self.deviation, self.tolerance
        )
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ValidationReport {
    pub rows: usize,
    /// Largest deviation per column, in [`Column::ALL`] order.
    #[serde(serialize_with = "as_map")]
    pub max_deviation: Vec<(Column, f64)>,
    pub offenders: Vec<Offender>,
}

fn as_map<S: serde::Serializer>(v: &[(Column, f64)], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_map(v.iter().map(|(c, d)| (c, d)))
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.offenders.is_empty()
    }

    pub fn max_for(&self, column: Column) -> f64 {
        self.max_deviation
            .iter()
            .find(|(c, _)| *c == column)
            .map_or(0.0, |(_, d)| *d)
    }

    pub fn offenders_in(&self, column: Column) -> impl Iterator<Item = &Offender> {
        self.offenders.iter().filter(move |o| o.column == column)
    }

    pub fn merge(&mut self, other: ValidationReport) {
        self.rows += other.rows;
        for (col, dev) in other.max_deviation {
            match self.max_deviation.iter_mut().find(|(c, _)| *c == col) {
                Some(entry) => entry.1 = entry.1.max(dev),
                None => self.max_deviation.push((col, dev)),
            }
        }
        self.offenders.extend(other.offenders);
    }

    pub fn empty() -> Self {
        Self {
            rows: 0,
            max_deviation: Column::ALL.iter().map(|&c| (c, 0.0)).collect(),
            offenders: Vec::new(),
        }
    }
}

fn deviation(column: Column, computed: f64, expected: f64) -> f64 {
    if column.is_relative() {
        ((computed - expected) / expected).abs()
    } else {
        (computed - expected).abs()
    }
}

/// Compares only the listed columns.
pub fn compare_columns(
    params: &MoleculeParams,
    rows: &[FixtureRow],
    tol: &Tolerances,
    columns: &[Column],
) -> Result<ValidationReport> {
    let mut report = ValidationReport {
        rows: rows.len(),
        max_deviation: columns.iter().map(|&c| (c, 0.0)).collect(),
        offenders: Vec::new(),
    };
    for row in rows {
        let computed = state_report(params, row.state())?;
        for (i, &column) in columns.iter().enumerate() {
            let c = column.computed(&computed);
            let e = column.expected(row);
            let dev = deviation(column, c, e);
            let slot = &mut report.max_deviation[i].1;
            // NaN must register as a failure, so compare negated
            if !(dev <= *slot) {
                *slot = dev;
            }
            let limit = tol.get(column);
            if !(dev <= limit) {
                report.offenders.push(Offender {
                    molecule: params.name.clone(),
                    n: row.n,
                    l: row.l,
                    column,
                    computed: c,
                    expected: e,
                    deviation: dev,
                    tolerance: limit,
                });
            }
        }
    }
    Ok(report)
}

pub fn compare(params: &MoleculeParams, rows: &[FixtureRow], tol: &Tolerances) -> Result<ValidationReport> {
    compare_columns(params, rows, tol, &Column::ALL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::molecule::builtin_registry;

    #[test]
    fn every_builtin_has_a_full_fixture() {
        let dir = default_fixture_dir();
        for m in &builtin_registry() {
            let rows = load_fixture(&dir, &m.name).unwrap();
            assert_eq!(rows.len(), 24, "{}", m.name);
            let mut states: Vec<_> = rows.iter().map(FixtureRow::state).collect();
            states.sort();
            states.dedup();
            assert_eq!(states.len(), 24);
            assert!(states.iter().all(|s| s.n <= 3 && s.l <= 5));
        }
    }

    #[test]
    fn sch_rows_match() {
        let m = builtin_registry().get("ScH").unwrap().clone();
        let rows = load_fixture(&default_fixture_dir(), "ScH").unwrap();
        let report = compare(&m, &rows, &Tolerances::default()).unwrap();
        assert!(report.passed(), "{:?}", report.offenders);
        assert!(report.max_for(Column::Energy) <= 1e-6);
    }

    #[test]
    fn perturbed_cell_is_named() {
        let m = builtin_registry().get("ScH").unwrap().clone();
        let mut rows = load_fixture(&default_fixture_dir(), "ScH").unwrap();
        rows[5].energy += 1e-4;
        let report = compare(&m, &rows, &Tolerances::default()).unwrap();
        assert_eq!(report.offenders.len(), 1);
        let o = &report.offenders[0];
        assert_eq!((o.n, o.l, o.column), (rows[5].n, rows[5].l, Column::Energy));
    }

    #[test]
    fn missing_fixture() {
        let err = load_fixture(Path::new("/nonexistent"), "ScH").unwrap_err();
        assert!(matches!(err, Error::MissingFixture { .. }));
    }

    #[test]
    fn parse_reports_line() {
        let text = "# c\nmolecule,n,l,r2_invA2,V_eV,T_eV,E_eV,p2_paper\nX,0,0,1,2,3,x,5\n";
        assert!(matches!(parse_fixture(text), Err(Error::Parse { line: 3, .. })));
    }

    #[test]
    fn merge_keeps_maxima() {
        let mut a = ValidationReport::empty();
        let mut b = ValidationReport::empty();
        b.rows = 3;
        b.max_deviation[0].1 = 0.5;
        a.merge(b);
        assert_eq!(a.rows, 3);
        assert_eq!(a.max_for(Column::R2), 0.5);
    }
}

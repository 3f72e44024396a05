//! Molecule parameters: the built-in set and a CSV loader for user files.
//!
//! File format (UTF-8, comma separated, `#` starts a comment line):
//!
//! ```text
//! name,De_eV,re_angstrom,a_per_angstrom,mu_amu
//! HCl,4.619030905,1.2746,1.8677,0.9801045
//! ```

use std::io;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::units;

pub const CSV_HEADER: [&str; 5] = ["name", "De_eV", "re_angstrom", "a_per_angstrom", "mu_amu"];

/// Parameters of one diatomic molecule in the shifted Deng-Fan model.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MoleculeParams {
    pub name: String,
    /// Dissociation energy D in eV.
    pub depth: f64,
    /// Equilibrium bond length in Å.
    pub r_e: f64,
    /// Range parameter a in 1/Å.
    pub a: f64,
    /// Reduced mass in amu.
    pub mu: f64,
}

impl MoleculeParams {
    pub fn new(name: impl Into<String>, depth: f64, r_e: f64, a: f64, mu: f64) -> Result<Self> {
        let params = Self {
            name: name.into(),
            depth,
            r_e,
            a,
            mu,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn validate(&self) -> Result<()> {
        if self.name.trim().is_empty() {
            return Err(Error::Domain("molecule name must be non-empty".into()));
        }
        for (field, value) in [
            ("De_eV", self.depth),
            ("re_angstrom", self.r_e),
            ("a_per_angstrom", self.a),
            ("mu_amu", self.mu),
        ] {
            if !(value > 0.0 && value.is_finite()) {
                return Err(Error::InvalidParameter {
                    name: self.name.clone(),
                    field,
                    value,
                });
            }
        }
        Ok(())
    }

    /// ħ²/2μ for this molecule, eV·Å².
    pub fn kappa(&self) -> Result<f64> {
        units::kappa(self.mu)
    }

    pub fn with_depth(&self, depth: f64) -> Self {
        Self { depth, ..self.clone() }
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }
}

// name, D (eV), r_e (Å), a (1/Å), μ (amu)
#[allow(clippy::approx_constant)] // CO r_e happens to be close to 2/sqrt(pi)
const BUILTIN: [(&str, f64, f64, f64, f64); 14] = [
    ("HCl", 4.619030905, 1.2746, 1.8677, 0.9801045),
    ("LiH", 2.5152672118, 1.5956, 1.1280, 0.8801221),
    ("H2", 4.7446, 0.7416, 1.9426, 0.50391),
    ("ScH", 2.25, 1.776, 1.41113, 0.986040),
    ("ScN", 4.56, 1.768, 1.50680, 10.682771),
    ("TiH", 2.05, 1.781, 1.32408, 0.987371),
    ("VH", 2.33, 1.719, 1.44370, 0.988005),
    ("CrH", 2.13, 1.694, 1.52179, 0.988976),
    ("NiC", 2.76, 1.621, 2.25297, 9.974265),
    ("CuLi", 1.74, 2.310, 1.00818, 6.259494),
    ("TiC", 2.66, 1.790, 1.52550, 9.606079),
    ("ScF", 5.85, 1.794, 1.46102, 13.358942),
    ("CO", 11.2256, 1.1283, 2.2994, 6.8606719),
    ("I2", 1.5556, 2.662, 1.8643, 63.45223502),
];

/// An ordered set of molecules with unique names.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Registry {
    molecules: Vec<MoleculeParams>,
}

impl Registry {
    pub fn new(molecules: Vec<MoleculeParams>) -> Result<Self> {
        let mut registry = Self::default();
        for m in molecules {
            registry.insert(m)?;
        }
        Ok(registry)
    }

    pub fn insert(&mut self, molecule: MoleculeParams) -> Result<()> {
        molecule.validate()?;
        if self.get(&molecule.name).is_some() {
            return Err(Error::DuplicateName(molecule.name));
        }
        self.molecules.push(molecule);
        Ok(())
    }

    pub fn get(&self, name: &str) -> Option<&MoleculeParams> {
        self.molecules.iter().find(|m| m.name == name)
    }

    pub fn lookup(&self, name: &str) -> Result<&MoleculeParams> {
        self.get(name).ok_or_else(|| Error::UnknownMolecule(name.to_string()))
    }

    /// Resolves a list of names; the single name `all` selects everything
    /// in registry order.
    pub fn select<S: AsRef<str>>(&self, names: &[S]) -> Result<Vec<&MoleculeParams>> {
        if names.iter().any(|n| n.as_ref() == "all") {
            return Ok(self.molecules.iter().collect());
        }
        names.iter().map(|n| self.lookup(n.as_ref())).collect()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, MoleculeParams> {
        self.molecules.iter()
    }

    pub fn len(&self) -> usize {
        self.molecules.len()
    }

    pub fn is_empty(&self) -> bool {
        self.molecules.is_empty()
    }

    pub fn into_vec(self) -> Vec<MoleculeParams> {
        self.molecules
    }
}

impl<'a> IntoIterator for &'a Registry {
    type Item = &'a MoleculeParams;
    type IntoIter = std::slice::Iter<'a, MoleculeParams>;

    fn into_iter(self) -> Self::IntoIter {
        self.iter()
    }
}

/// The fourteen reference molecules.
pub fn builtin_registry() -> Registry {
    let molecules = BUILTIN
        .iter()
        .map(|&(name, depth, r_e, a, mu)| MoleculeParams {
            name: name.to_string(),
            depth,
            r_e,
            a,
            mu,
        })
        .collect();
    Registry::new(molecules).expect("builtin table is valid")
}

/// Parses a molecule CSV file. Errors carry the 1-based line number.
pub fn parse_params_file(text: &str) -> Result<Vec<MoleculeParams>> {
    let mut reader = csv::ReaderBuilder::new()
        .comment(Some(b'#'))
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes());

    let header = reader.headers()?.clone();
    let header_line = header.position().map_or(1, |p| p.line());
    if header.is_empty() {
        return Err(Error::Parse {
            line: header_line,
            message: "missing header line".into(),
        });
    }
    if header.iter().ne(CSV_HEADER.iter().copied()) {
        return Err(Error::Parse {
            line: header_line,
            message: format!("expected header `{}`", CSV_HEADER.join(",")),
        });
    }

    let mut registry = Registry::default();
    for record in reader.records() {
        let record = record?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != CSV_HEADER.len() {
            return Err(Error::Parse {
                line,
                message: format!("expected {} fields, found {}", CSV_HEADER.len(), record.len()),
            });
        }
        let number = |idx: usize| -> Result<f64> {
            record[idx].parse::<f64>().map_err(|e| Error::Parse {
                line,
                message: format!("{}: {e} ({:?})", CSV_HEADER[idx], &record[idx]),
            })
        };
        let molecule = MoleculeParams {
            name: record[0].to_string(),
            depth: number(1)?,
            r_e: number(2)?,
            a: number(3)?,
            mu: number(4)?,
        };
        registry.insert(molecule)?;
    }
    Ok(registry.into_vec())
}

/// Writes molecules in the format accepted by [`parse_params_file`].
pub fn write_params_csv<'a, W, I>(writer: W, molecules: I) -> Result<()>
where
    W: io::Write,
    I: IntoIterator<Item = &'a MoleculeParams>,
{
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(CSV_HEADER)?;
    for m in molecules {
        w.write_record([
            m.name.clone(),
            m.depth.to_string(),
            m.r_e.to_string(),
            m.a.to_string(),
            m.mu.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;

use dfspec::fixtures::{compare, load_fixture, resolve_fixture_dir, Column, Tolerances, ValidationReport};
use dfspec::hft::{hft_fd_check, state_report, HftResiduals, StepPolicy};
use dfspec::oracle::{solve_potential, solve_radial, RadialGrid, RadialSolution};
use dfspec::quantize::proper_rule_residual;
use dfspec::spectrum::energy;
use dfspec::{CentrifugalMode, MoleculeParams, QuantumState};

use crate::args::{Format, OracleArgs, OracleMode, RuleArgs, TableArgs, ValidateArgs};
use crate::error::{CliError, CliResult};
use crate::output::{with_output, Cell, Table};
use crate::selection::{parse_indices, select_molecules};

/// Process exit status for commands that completed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Ok,
    CheckFailed,
}

impl Status {
    pub fn code(self) -> u8 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
        }
    }
}

pub const EXPECT_HEADERS: [&str; 9] = [
    "molecule",
    "n",
    "l",
    "r2_invA2",
    "V_eV",
    "T_eV",
    "E_eV",
    "p2_paper",
    "p2_natural_eVc2",
];

fn lattice(molecules: &[MoleculeParams], ns: &[u32], ls: &[u32]) -> Vec<(usize, QuantumState)> {
    let mut cells = Vec::with_capacity(molecules.len() * ns.len() * ls.len());
    for i in 0..molecules.len() {
        for &n in ns {
            for &l in ls {
                cells.push((i, QuantumState::new(n, l)));
            }
        }
    }
    cells
}

fn not_bound_notice(m: &MoleculeParams, s: QuantumState, err: &dfspec::Error, action: &str) {
    eprintln!("note: {} n={} l={} {action}: {err}", m.name, s.n, s.l);
}

fn is_not_bound(err: &dfspec::Error) -> bool {
    matches!(err, dfspec::Error::NotBound { .. })
}

fn key_cells(m: &MoleculeParams, s: QuantumState) -> Vec<Cell> {
    vec![Cell::Text(m.name.clone()), Cell::Int(s.n.into()), Cell::Int(s.l.into())]
}

pub fn energies(args: &TableArgs) -> CliResult<Status> {
    let molecules = select_molecules(&args.molecules)?;
    let ns = parse_indices(&args.n, "n")?;
    let ls = parse_indices(&args.l, "l")?;
    let cells = lattice(&molecules, &ns, &ls);

    let rows = cells
        .par_iter()
        .map(|&(i, s)| {
            let m = &molecules[i];
            let mut row = key_cells(m, s);
            match energy(m, s) {
                Ok(e) => row.push(Cell::Num(e)),
                Err(e) if is_not_bound(&e) => {
                    not_bound_notice(m, s, &e, "flagged");
                    row.push(Cell::Missing("unbound"));
                }
                Err(e) => return Err(CliError::from(e)),
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(vec!["molecule", "n", "l", "E_eV"]);
    rows.into_iter().for_each(|r| table.push(r));
    with_output(args.output.out.as_deref(), |w| table.write(args.output.format, w))?;
    Ok(Status::Ok)
}

pub fn expect(args: &TableArgs) -> CliResult<Status> {
    let molecules = select_molecules(&args.molecules)?;
    let ns = parse_indices(&args.n, "n")?;
    let ls = parse_indices(&args.l, "l")?;
    let cells = lattice(&molecules, &ns, &ls);

    let rows = cells
        .par_iter()
        .map(|&(i, s)| {
            let m = &molecules[i];
            let mut row = key_cells(m, s);
            match state_report(m, s) {
                Ok(r) => row.extend([r.r2, r.potential, r.kinetic, r.energy, r.p2_paper, r.p2_natural].map(Cell::Num)),
                Err(e) if is_not_bound(&e) => {
                    not_bound_notice(m, s, &e, "flagged");
                    row.extend(std::iter::repeat_n(Cell::Missing("unbound"), 6));
                }
                Err(e) => return Err(CliError::from(e)),
            }
            Ok(row)
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut table = Table::new(EXPECT_HEADERS.to_vec());
    rows.into_iter().for_each(|r| table.push(r));
    with_output(args.output.out.as_deref(), |w| table.write(args.output.format, w))?;
    Ok(Status::Ok)
}

#[derive(Serialize)]
struct ValidationSummary<'a> {
    passed: bool,
    fixture_dir: String,
    tolerances: Tolerances,
    per_molecule: BTreeMap<&'a str, &'a ValidationReport>,
    overall: &'a ValidationReport,
}

fn write_validation_text(
    w: &mut dyn Write,
    dir: &Path,
    per_molecule: &[(String, ValidationReport)],
    overall: &ValidationReport,
) -> std::io::Result<()> {
    writeln!(w, "fixtures: {}", dir.display())?;
    let mut table = Table::new(vec![
        "molecule",
        "rows",
        "r2_invA2",
        "V_eV",
        "T_eV",
        "E_eV",
        "p2_paper",
        "offenders",
    ]);
    let row = |name: &str, rep: &ValidationReport| {
        let mut cells = vec![Cell::Text(name.to_string()), Cell::Int(rep.rows as u64)];
        cells.extend(
            Column::ALL
                .iter()
                .map(|&c| Cell::Text(format!("{:.2e}", rep.max_for(c)))),
        );
        cells.push(Cell::Int(rep.offenders.len() as u64));
        cells
    };
    for (name, rep) in per_molecule {
        table.push(row(name, rep));
    }
    table.push(row("all", overall));
    writeln!(w, "max deviation per column (r2 and p2 relative, others eV):")?;
    table.write(Format::Pretty, &mut *w)?;
    if !overall.offenders.is_empty() {
        writeln!(w, "offenders:")?;
        for o in &overall.offenders {
            writeln!(w, "  {o}")?;
        }
    }
    let verdict = if overall.passed() { "PASS" } else { "FAIL" };
    writeln!(
        w,
        "{verdict}: {} rows, {} cells out of tolerance",
        overall.rows,
        overall.offenders.len()
    )
}

pub fn validate(args: &ValidateArgs) -> CliResult<Status> {
    let molecules = select_molecules(&args.molecules)?;
    let dir = resolve_fixture_dir(args.fixtures.as_deref());
    let tol = Tolerances {
        energy_abs: args.tol_energy,
        potential_abs: args.tol_potential,
        kinetic_abs: args.tol_kinetic,
        r2_rel: args.tol_r2,
        p2_rel: args.tol_p2,
    };

    let per_molecule = molecules
        .par_iter()
        .map(|m| {
            let rows = load_fixture(&dir, &m.name)?;
            Ok((m.name.clone(), compare(m, &rows, &tol)?))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut overall = ValidationReport::empty();
    for (_, rep) in &per_molecule {
        overall.merge(rep.clone());
    }

    with_output(args.out.as_deref(), |w| match args.format {
        Format::Json => {
            let summary = ValidationSummary {
                passed: overall.passed(),
                fixture_dir: dir.display().to_string(),
                tolerances: tol,
                per_molecule: per_molecule.iter().map(|(n, r)| (n.as_str(), r)).collect(),
                overall: &overall,
            };
            serde_json::to_writer_pretty(&mut *w, &summary)?;
            writeln!(w)
        }
        _ => write_validation_text(w, &dir, &per_molecule, &overall),
    })?;
    Ok(if overall.passed() {
        Status::Ok
    } else {
        Status::CheckFailed
    })
}

fn oracle_grid(args: &OracleArgs, m: &MoleculeParams) -> CliResult<RadialGrid> {
    let d = RadialGrid::default_for(m);
    Ok(RadialGrid::new(
        args.rmin.unwrap_or(d.r_min),
        args.rmax.unwrap_or(d.r_max),
        args.grid_count.unwrap_or(d.count),
    )?)
}

fn dump_wavefunction(
    dir: &Path,
    m: &MoleculeParams,
    l: u32,
    mode: CentrifugalMode,
    n: usize,
    sol: &RadialSolution,
) -> CliResult<()> {
    let path = dir.join(format!("{}_n{n}_l{l}_{mode}.csv", m.name));
    let file = std::fs::File::create(&path).map_err(|e| CliError::io(&path, e))?;
    sol.write_csv(std::io::BufWriter::new(file)).map_err(|e| match e {
        dfspec::Error::Io(io) => CliError::io(&path, io),
        other => other.into(),
    })
}

pub fn oracle(args: &OracleArgs) -> CliResult<Status> {
    if args.box_test {
        return box_test(args);
    }
    let molecules = select_molecules(&args.molecules)?;
    let ns = parse_indices(&args.n, "n")?;
    let ls = parse_indices(&args.l, "l")?;
    let modes: Vec<CentrifugalMode> = match args.mode {
        OracleMode::Exact => vec![CentrifugalMode::Exact],
        OracleMode::Approx => vec![CentrifugalMode::Approx],
        OracleMode::Both => vec![CentrifugalMode::Approx, CentrifugalMode::Exact],
    };
    if let Some(dir) = &args.dump_dir {
        std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    let n_states = *ns.last().expect("non-empty") as usize + 1;

    let mut jobs = Vec::new();
    for i in 0..molecules.len() {
        for &l in &ls {
            for &mode in &modes {
                jobs.push((i, l, mode));
            }
        }
    }
    let solved = jobs
        .par_iter()
        .map(|&(i, l, mode)| {
            let m = &molecules[i];
            let grid = oracle_grid(args, m)?;
            let spec = solve_radial(m, l, mode, &grid, n_states)?;
            if !spec.complete {
                eprintln!(
                    "note: {} l={l} {mode}: only {} of {n_states} states are bound on this grid",
                    m.name,
                    spec.solutions.len()
                );
            }
            if let Some(dir) = &args.dump_dir {
                for &n in &ns {
                    if let Some(sol) = spec.solutions.get(n as usize) {
                        dump_wavefunction(dir, m, l, mode, n as usize, sol)?;
                    }
                }
            }
            Ok((
                (i, l, mode),
                spec.solutions.iter().map(|s| s.eigenvalue).collect::<Vec<_>>(),
            ))
        })
        .collect::<CliResult<Vec<_>>>()?;
    let eigen = |i: usize, l: u32, mode: CentrifugalMode, n: u32| {
        solved
            .iter()
            .find(|(k, _)| *k == (i, l, mode))
            .and_then(|(_, v)| v.get(n as usize).copied())
    };

    let mut table = Table::new(vec![
        "molecule",
        "n",
        "l",
        "E_closed_eV",
        "E_approx_eV",
        "E_exact_eV",
        "dE_approx_eV",
        "dE_exact_eV",
    ]);
    for (i, m) in molecules.iter().enumerate() {
        for &n in &ns {
            for &l in &ls {
                let s = QuantumState::new(n, l);
                let closed = match energy(m, s) {
                    Ok(e) => Some(e),
                    Err(e) if is_not_bound(&e) => None,
                    Err(e) => return Err(e.into()),
                };
                let mut row = key_cells(m, s);
                row.push(closed.map_or(Cell::Missing("unbound"), Cell::Num));
                let numeric: Vec<Option<f64>> = [CentrifugalMode::Approx, CentrifugalMode::Exact]
                    .iter()
                    .map(|&mode| {
                        if modes.contains(&mode) {
                            eigen(i, l, mode, n)
                        } else {
                            None
                        }
                    })
                    .collect();
                for v in &numeric {
                    row.push(v.map_or(Cell::Missing("-"), Cell::Num));
                }
                for v in &numeric {
                    row.push(match (closed, v) {
                        (Some(c), Some(v)) => Cell::Num(v - c),
                        _ => Cell::Missing("-"),
                    });
                }
                table.push(row);
            }
        }
    }
    with_output(args.output.out.as_deref(), |w| table.write(args.output.format, w))?;
    Ok(Status::Ok)
}

const BOX_KAPPA: f64 = 0.5;

fn box_test(args: &OracleArgs) -> CliResult<Status> {
    let r_min = args.rmin.unwrap_or(1.0);
    let r_max = args.rmax.unwrap_or(r_min + 2.0);
    let count = args.grid_count.unwrap_or(1000);
    let grid = RadialGrid::new(r_min, r_max, count)?;
    let length = r_max - r_min;
    let levels = 3;

    let mut table = Table::new(vec![
        "level",
        "count",
        "h_A",
        "E_numeric_eV",
        "E_exact_eV",
        "error_eV",
        "order",
    ]);
    let mut previous: Option<Vec<f64>> = None;
    for g in [grid, grid.refined()] {
        let sols = solve_potential(&g, BOX_KAPPA, |_| 0.0, levels)?;
        let mut errors = Vec::new();
        for (k, sol) in sols.iter().enumerate() {
            let q = (k + 1) as f64;
            let exact = q * q * std::f64::consts::PI.powi(2) * BOX_KAPPA / (length * length);
            let err = sol.eigenvalue - exact;
            errors.push(err.abs());
            let order = previous
                .as_ref()
                .map_or(Cell::Missing("-"), |p| Cell::Num((p[k] / err.abs()).log2()));
            table.push(vec![
                Cell::Int(k as u64 + 1),
                Cell::Int(g.count as u64),
                Cell::Num(g.spacing()),
                Cell::Num(sol.eigenvalue),
                Cell::Num(exact),
                Cell::Num(err),
                order,
            ]);
        }
        previous = Some(errors);
    }
    with_output(args.output.out.as_deref(), |w| table.write(args.output.format, w))?;
    Ok(Status::Ok)
}

pub fn verify_rule(args: &RuleArgs) -> CliResult<Status> {
    let molecules = select_molecules(&args.molecules)?;
    let ns = parse_indices(&args.n, "n")?;
    let ls = parse_indices(&args.l, "l")?;
    let cells = lattice(&molecules, &ns, &ls);
    let policy = StepPolicy::default();

    type Checked = Option<(f64, Option<HftResiduals>)>;
    let results = cells
        .par_iter()
        .map(|&(i, s)| -> CliResult<Checked> {
            let m = &molecules[i];
            let residual = match proper_rule_residual(m, s.n, s.l) {
                Ok(r) => r,
                Err(e) if is_not_bound(&e) => {
                    not_bound_notice(m, s, &e, "skipped");
                    return Ok(None);
                }
                Err(e) => return Err(e.into()),
            };
            let hft = if args.hft {
                Some(hft_fd_check(m, s, &policy)?)
            } else {
                None
            };
            Ok(Some((residual, hft)))
        })
        .collect::<CliResult<Vec<_>>>()?;

    let mut headers = vec!["molecule", "n", "l", "rule_residual"];
    if args.hft {
        headers.extend(["res_V", "res_T", "res_r2"]);
    }
    let mut table = Table::new(headers);
    let mut failures = 0;
    for (&(i, s), result) in cells.iter().zip(&results) {
        let Some((residual, hft)) = result else { continue };
        if residual.is_nan() || residual.abs() > args.tol_rule {
            failures += 1;
        }
        let mut row = key_cells(&molecules[i], s);
        row.push(Cell::Num(*residual));
        if let Some(h) = hft {
            if h.max().is_nan() || h.max() > args.tol_hft {
                failures += 1;
            }
            row.extend([h.res_v, h.res_t, h.res_r2].map(Cell::Num));
        }
        table.push(row);
    }
    with_output(args.output.out.as_deref(), |w| table.write(args.output.format, w))?;
    if failures > 0 {
        eprintln!("{failures} checks exceeded tolerance");
        Ok(Status::CheckFailed)
    } else {
        Ok(Status::Ok)
    }
}

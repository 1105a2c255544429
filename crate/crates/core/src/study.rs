//! Convergence studies: minimum basis size per element count, and
//! parameter sweeps on a single entry.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::dense::{max_abs_diff, ComplexMatrix};
use crate::error::{Error, Result};
use crate::oracles::NamedMatrix;
use crate::propagator::expm_fete;

pub const DEFAULT_TOLERANCE: f64 = 1e-14;
pub const DEFAULT_MAX_BASIS: usize = 40;

/// Element counts studied for each matrix with a closed-form exponential.
pub fn table1_time_steps(which: NamedMatrix) -> Option<&'static [usize]> {
    match which {
        NamedMatrix::Unit2 => Some(&[1, 2, 4, 8, 16, 58]),
        NamedMatrix::M1 => Some(&[5, 8, 16, 50, 256]),
        NamedMatrix::M2 => Some(&[1, 2, 4, 8, 15, 40]),
        NamedMatrix::M3 | NamedMatrix::M4 => None,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Table1Row {
    pub time_steps: usize,
    /// `None` when no basis size up to the search limit met the tolerance.
    pub min_basis_functions: Option<usize>,
}

/// Smallest `m` in `1..=max_basis` whose run on `num_elements` elements is
/// within `tolerance` of `exact` in every entry.
pub fn min_basis_functions(
    a: &ComplexMatrix,
    exact: &ComplexMatrix,
    num_elements: usize,
    tolerance: f64,
    max_basis: usize,
) -> Result<Option<usize>> {
    for m in 1..=max_basis {
        let report = match expm_fete(a, num_elements, m) {
            Ok(r) => r,
            // A singular Omega at small m just means this size is unusable.
            Err(Error::SingularMatrix { .. }) => continue,
            Err(e) => return Err(e),
        };
        if max_abs_diff(&report.result, exact)? <= tolerance {
            return Ok(Some(m));
        }
    }
    Ok(None)
}

pub fn table1(which: NamedMatrix, tolerance: f64, max_basis: usize) -> Result<Vec<Table1Row>> {
    let (steps, exact) = match (table1_time_steps(which), which.exact()) {
        (Some(steps), Some(exact)) => (steps, exact.value),
        _ => {
            return Err(Error::invalid(
                "which",
                format!("{} has no closed-form exponential", which.name()),
            ))
        }
    };
    let a = which.matrix();
    steps
        .iter()
        .map(|&time_steps| {
            Ok(Table1Row {
                time_steps,
                min_basis_functions: min_basis_functions(&a, &exact, time_steps, tolerance, max_basis)?,
            })
        })
        .collect()
}

pub fn table1_csv(rows: &[Table1Row]) -> String {
    let mut out = String::from("time_steps,min_basis_functions\n");
    for row in rows {
        match row.min_basis_functions {
            Some(m) => writeln!(out, "{},{}", row.time_steps, m),
            None => writeln!(out, "{},-", row.time_steps),
        }
        .expect("writing to a String");
    }
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    Elements,
    Basis,
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    /// Zero-based `(row, col)` of the reported entry.
    pub entry: (usize, usize),
    pub vary: SweepAxis,
    /// Value held for the other parameter.
    pub fixed: usize,
    pub values: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StudyRow {
    pub num_elements: usize,
    pub num_basis: usize,
    pub max_abs_error: f64,
    pub selected_entry: Option<Complex64>,
}

/// Runs `expm_fete` once per swept value and compares with `reference`.
pub fn sweep(a: &ComplexMatrix, reference: &ComplexMatrix, spec: &SweepSpec) -> Result<Vec<StudyRow>> {
    let n = a.square_dim()?;
    let (i, j) = spec.entry;
    if i >= n || j >= n {
        return Err(Error::invalid(
            "entry",
            format!("({}, {}) outside a {n}x{n} matrix", i + 1, j + 1),
        ));
    }
    spec.values
        .iter()
        .map(|&v| {
            let (num_elements, num_basis) = match spec.vary {
                SweepAxis::Elements => (v, spec.fixed),
                SweepAxis::Basis => (spec.fixed, v),
            };
            let report = expm_fete(a, num_elements, num_basis)?;
            Ok(StudyRow {
                num_elements,
                num_basis,
                max_abs_error: max_abs_diff(&report.result, reference)?,
                selected_entry: report.result.get(i, j),
            })
        })
        .collect()
}

pub fn sweep_csv(rows: &[StudyRow]) -> String {
    let mut out = String::from("time_steps,basis_functions,entry_re,entry_im,max_abs_error\n");
    for row in rows {
        let (re, im) = row
            .selected_entry
            .map_or((String::new(), String::new()), |z| (format!("{:e}", z.re), format!("{:e}", z.im)));
        writeln!(
            out,
            "{},{},{},{},{:e}",
            row.num_elements, row.num_basis, re, im, row.max_abs_error
        )
        .expect("writing to a String");
    }
    out
}

//! Real-submatrix obstruction for complex Hadamard matrices.
//!
//! A CHM with a real `2×3` submatrix cannot belong to an MUB trio, and a CHM
//! belongs to one iff its transpose does. Right multiplication by a diagonal
//! unitary keeps trio membership, so the useful test is whether some column
//! dephasing produces a real `2×3` block: on a fixed row pair that happens iff
//! at least three columns have `arg W[r1][c] - arg W[r2][c] ≡ 0 (mod π)`.

use alloc::format;
use alloc::vec::Vec;

use crate::construct::catalog;
use crate::error::{Error, Result};
use crate::math;
use crate::matspace::{is_unitary, ComplexMatrix, C64};
use crate::verify::{VerificationReport, VerifyConfig};

/// Where and how a real `2×(≥3)` block was found.
#[derive(Clone, Debug, PartialEq)]
pub struct ObstructionFinding {
    pub obstructed: bool,
    /// The block lives in the transpose of the input.
    pub on_transpose: bool,
    pub row_pair: (usize, usize),
    pub columns: Vec<usize>,
    /// Unit phases for `columns`, in the same order.
    pub phases: Vec<C64>,
}

impl ObstructionFinding {
    fn none() -> Self {
        Self {
            obstructed: false,
            on_transpose: false,
            row_pair: (0, 0),
            columns: Vec::new(),
            phases: Vec::new(),
        }
    }

    /// Applies the witness phases to the indicated block of `w` (or `wᵀ`)
    /// and confirms it is real. Returns false for an unobstructed finding.
    pub fn validate(&self, w: &ComplexMatrix, cfg: &VerifyConfig) -> bool {
        if !self.obstructed || self.columns.len() < 3 || self.phases.len() != self.columns.len() {
            return false;
        }
        let m = if self.on_transpose { w.transpose() } else { w.clone() };
        let (r1, r2) = self.row_pair;
        if r1 >= m.rows() || r2 >= m.rows() || self.columns.iter().any(|&c| c >= m.cols()) {
            return false;
        }
        let block = m
            .select(&[r1, r2], &self.columns)
            .mul_diag_right(&self.phases)
            .expect("one phase per column");
        has_real_2x3(&block, cfg).obstructed
    }
}

/// Unitary with every entry of modulus `1/√n`.
pub fn is_chm(w: &ComplexMatrix, cfg: &VerifyConfig) -> Result<bool> {
    if !is_unitary(w, cfg)? {
        return Ok(false);
    }
    let target = 1.0 / math::sqrt(w.rows() as f64);
    Ok(w.entries().iter().all(|z| (z.norm() - target).abs() <= cfg.tol_abs))
}

/// Scans row pairs for at least three columns that are real in both rows.
pub fn has_real_2x3(w: &ComplexMatrix, cfg: &VerifyConfig) -> ObstructionFinding {
    if w.rows() < 2 || w.cols() < 3 {
        return ObstructionFinding::none();
    }
    for r1 in 0..w.rows() {
        for r2 in r1 + 1..w.rows() {
            let columns: Vec<usize> = (0..w.cols())
                .filter(|&c| w.get(r1, c).im.abs() <= cfg.tol_abs && w.get(r2, c).im.abs() <= cfg.tol_abs)
                .collect();
            if columns.len() >= 3 {
                let phases = alloc::vec![C64::new(1.0, 0.0); columns.len()];
                return ObstructionFinding {
                    obstructed: true,
                    on_transpose: false,
                    row_pair: (r1, r2),
                    columns,
                    phases,
                };
            }
        }
    }
    ObstructionFinding::none()
}

// |sin(arg a - arg b)|, zero when either entry vanishes
fn phase_gap_sin(a: C64, b: C64) -> f64 {
    let denom = a.norm() * b.norm();
    if denom == 0.0 {
        return 0.0;
    }
    (a * b.conj()).im.abs() / denom
}

fn scan_dephased(w: &ComplexMatrix, cfg: &VerifyConfig) -> Option<ObstructionFinding> {
    for r1 in 0..w.rows() {
        for r2 in r1 + 1..w.rows() {
            let columns: Vec<usize> = (0..w.cols())
                .filter(|&c| phase_gap_sin(w.get(r1, c), w.get(r2, c)) <= cfg.tol_abs)
                .collect();
            if columns.len() >= 3 {
                let phases = columns
                    .iter()
                    .map(|&c| C64::from_polar(1.0, -w.get(r1, c).arg()))
                    .collect();
                return Some(ObstructionFinding {
                    obstructed: true,
                    on_transpose: false,
                    row_pair: (r1, r2),
                    columns,
                    phases,
                });
            }
        }
    }
    None
}

/// Column-dephasing obstruction on `w`, then on `wᵀ`.
pub fn dephased_obstruction(w: &ComplexMatrix, cfg: &VerifyConfig) -> Result<ObstructionFinding> {
    if !is_chm(w, cfg)? {
        return Err(Error::NotChm);
    }
    if let Some(f) = scan_dephased(w, cfg) {
        return Ok(f);
    }
    if let Some(mut f) = scan_dephased(&w.transpose(), cfg) {
        f.on_transpose = true;
        return Ok(f);
    }
    Ok(ObstructionFinding::none())
}

/// Normalized `n×n` Fourier matrix.
pub fn fourier(n: usize) -> ComplexMatrix {
    let s = 1.0 / math::sqrt(n as f64);
    ComplexMatrix::from_fn(n, n, |r, c| crate::construct::root_of_unity(r * c, n) * s)
}

/// Expected lower-left `2×3` block of `U†VQ`.
pub fn theorem2_expected_block() -> ComplexMatrix {
    let s = 1.0 / math::sqrt(6.0);
    let (p, m) = (C64::new(s, 0.0), C64::new(-s, 0.0));
    ComplexMatrix::from_rows(&[[m, m, p], [p, p, p]]).expect("2x3")
}

/// Rebuilds the obstruction for the printed `C² ⊗ C³` MUMEB pair.
///
/// Checks: `U`, `V` unitary; `U` and `V` unbiased, equivalently `I` and `U†V`
/// unbiased after the frame change `U†`; `U†V` is a CHM; the lower-left
/// block of `U†VQ` matches within `1e-10`; and `U†V` is obstructed with a
/// self-validating witness.
pub fn theorem2_reproduce() -> VerificationReport {
    let cfg = VerifyConfig::default();
    let mut report = VerificationReport::empty();
    let (u, v, q) = (catalog::u(), catalog::v(), catalog::q());
    let target = 1.0 / math::sqrt(6.0);

    for (name, m) in [("U", &u), ("V", &v)] {
        let dev = m
            .adjoint()
            .matmul(m)
            .and_then(|g| g.max_abs_diff(&ComplexMatrix::identity(6)))
            .unwrap_or(f64::INFINITY);
        report.require(dev <= cfg.tol_abs, dev, format!("{name} is unitary (deviation {dev:.2e})"));
    }

    let w = u.adjoint().matmul(&v).expect("6x6 product");
    // |⟨u_i|v_j⟩| = |(U†V)_ij| = |⟨e_i|U†V e_j⟩|: one check covers both readings
    let mu_dev = w
        .entries()
        .iter()
        .map(|z| (z.norm() - target).abs())
        .fold(0.0, f64::max);
    report.require(
        mu_dev <= cfg.tol_overlap,
        mu_dev,
        format!("{{U, V}} mutually unbiased, i.e. {{I, U†V}} after the frame change U† (deviation {mu_dev:.2e})"),
    );

    let chm = is_chm(&w, &cfg).unwrap_or(false);
    report.require(chm, 0.0, "U†V is a complex Hadamard matrix");

    let wq = w.matmul(&q).expect("6x6 product");
    let block = wq.select(&[4, 5], &[0, 1, 2]);
    let block_dev = block.max_abs_diff(&theorem2_expected_block()).expect("2x3 blocks");
    report.require(
        block_dev <= 1e-10,
        block_dev,
        format!("lower-left 2x3 block of U†VQ matches (deviation {block_dev:.2e})"),
    );
    report.require(
        has_real_2x3(&wq, &cfg).obstructed,
        0.0,
        "U†VQ has a real 2x3 submatrix",
    );

    match dephased_obstruction(&w, &cfg) {
        Ok(f) => {
            let valid = f.validate(&w, &cfg);
            report.require(
                f.obstructed && valid,
                0.0,
                format!(
                    "U†V dephased obstruction on rows {:?}, columns {:?}{} (witness valid: {valid})",
                    f.row_pair,
                    f.columns,
                    if f.on_transpose { " of the transpose" } else { "" }
                ),
            );
        }
        Err(e) => report.require(false, 0.0, format!("dephased obstruction failed: {e}")),
    }
    report.notes.push(
        "column dephasing and transposition preserve MUB-trio membership, so U†V is excluded from every trio".into(),
    );
    report
}

//! Verbatim transcriptions of the printed families and matrices.
//!
//! Matrices are typed in exactly as printed; the state-form families `eq16`,
//! `eq17` are typed as kets and reshaped with the global `p·d' + p'` index.

use alloc::string::ToString;
use alloc::vec::Vec;

use super::{meb_from_left_unitary, root_of_unity};
use crate::error::{Error, Result};
use crate::math::sqrt;
use crate::matspace::{ComplexMatrix, StateVector, C64};
use crate::verify::{BasisFamily, FamilySet};

/// Names accepted by [`catalog`].
pub const NAMES: [&str; 14] = [
    "R1", "R2", "S1", "S2", "S3", "T1", "T2", "T3", "U", "V", "Q", "eq16", "eq17", "othermu",
];

#[derive(Clone, Debug, PartialEq)]
pub enum CatalogEntry {
    Family(BasisFamily),
    Matrix(ComplexMatrix),
}

impl CatalogEntry {
    pub fn into_family(self) -> Option<BasisFamily> {
        match self {
            CatalogEntry::Family(f) => Some(f),
            CatalogEntry::Matrix(_) => None,
        }
    }

    pub fn into_matrix(self) -> Option<ComplexMatrix> {
        match self {
            CatalogEntry::Matrix(m) => Some(m),
            CatalogEntry::Family(_) => None,
        }
    }
}

/// Looks up a printed object by name (ASCII case-insensitive).
pub fn catalog(name: &str) -> Result<CatalogEntry> {
    let key = NAMES
        .iter()
        .find(|n| n.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::UnknownName(name.to_string()))?;
    Ok(match *key {
        "R1" => CatalogEntry::Family(r1()),
        "R2" => CatalogEntry::Family(r2()),
        "S1" => CatalogEntry::Family(s1()),
        "S2" => CatalogEntry::Family(s2()),
        "S3" => CatalogEntry::Family(s3()),
        "T1" => CatalogEntry::Family(t1()),
        "T2" => CatalogEntry::Family(t2()),
        "T3" => CatalogEntry::Family(t3()),
        "U" => CatalogEntry::Matrix(u()),
        "V" => CatalogEntry::Matrix(v()),
        "Q" => CatalogEntry::Matrix(q()),
        "eq16" => CatalogEntry::Family(eq16()),
        "eq17" => CatalogEntry::Family(eq17()),
        "othermu" => CatalogEntry::Family(othermu()),
        _ => unreachable!("every catalog name is handled"),
    })
}

fn re(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn im(x: f64) -> C64 {
    C64::new(0.0, x)
}

fn matrix<const R: usize, const C: usize>(scale: f64, rows: [[C64; C]; R]) -> ComplexMatrix {
    ComplexMatrix::from_fn(R, C, |r, c| rows[r][c] * scale)
}

fn family(d: usize, dprime: usize, k: usize, elements: Vec<ComplexMatrix>, label: &str) -> BasisFamily {
    BasisFamily::new(d, dprime, k, elements, label).expect("catalog family is well formed")
}

/// The MEB of eq16 as `2×3` matrices.
pub fn r1() -> BasisFamily {
    let s = 1.0 / sqrt(2.0);
    let (o, z) = (re(1.0), re(0.0));
    let elements = alloc::vec![
        matrix(s, [[o, z, z], [z, o, z]]),
        matrix(s, [[o, z, z], [z, -o, z]]),
        matrix(s, [[z, o, z], [z, z, o]]),
        matrix(s, [[z, o, z], [z, z, -o]]),
        matrix(s, [[z, z, o], [o, z, z]]),
        matrix(s, [[z, z, o], [-o, z, z]]),
    ];
    family(2, 3, 2, elements, "R1")
}

/// The partner MEB of eq17 as `2×3` matrices.
pub fn r2() -> BasisFamily {
    let s = 1.0 / sqrt(6.0);
    let r2 = sqrt(2.0);
    let (o, z, i) = (re(1.0), re(0.0), im(1.0));
    let (p, ri) = (re(r2), im(r2));
    let elements = alloc::vec![
        matrix(s, [[o, p, z], [-ri, i, z]]),
        matrix(s, [[o, -p, z], [-ri, -i, z]]),
        matrix(s, [[z, o, p], [z, -ri, i]]),
        matrix(s, [[z, o, -p], [z, -ri, -i]]),
        matrix(s, [[p, z, o], [i, z, -ri]]),
        matrix(s, [[-p, z, o], [-i, z, -ri]]),
    ];
    family(2, 3, 2, elements, "R2")
}

fn kets(dim_a: usize, dim_b: usize, scale: f64, states: &[&[(usize, usize, C64)]]) -> Vec<ComplexMatrix> {
    states
        .iter()
        .map(|terms| {
            StateVector::from_terms(dim_a, dim_b, scale, terms)
                .expect("catalog ket is well formed")
                .to_matrix()
        })
        .collect()
}

/// `φ_{m,n}` in state form, listed in the printed order.
pub fn eq16() -> BasisFamily {
    let o = re(1.0);
    let elements = kets(
        2,
        3,
        1.0 / sqrt(2.0),
        &[
            &[(0, 0, o), (1, 1, o)],
            &[(0, 0, o), (1, 1, -o)],
            &[(0, 1, o), (1, 2, o)],
            &[(0, 1, o), (1, 2, -o)],
            &[(0, 2, o), (1, 0, o)],
            &[(0, 2, o), (1, 0, -o)],
        ],
    );
    family(2, 3, 2, elements, "eq16")
}

/// `ψ_{m,n}` in state form, listed in the printed order.
pub fn eq17() -> BasisFamily {
    let r2 = sqrt(2.0);
    let (o, i, p, ri) = (re(1.0), im(1.0), re(r2), im(r2));
    let elements = kets(
        2,
        3,
        1.0 / sqrt(6.0),
        &[
            &[(0, 0, o), (0, 1, p), (1, 0, -ri), (1, 1, i)],
            &[(0, 0, o), (0, 1, -p), (1, 0, -ri), (1, 1, -i)],
            &[(0, 1, o), (0, 2, p), (1, 1, -ri), (1, 2, i)],
            &[(0, 1, o), (0, 2, -p), (1, 1, -ri), (1, 2, -i)],
            &[(0, 2, o), (0, 0, p), (1, 2, -ri), (1, 0, i)],
            &[(0, 2, o), (0, 0, -p), (1, 2, -ri), (1, 0, -i)],
        ],
    );
    family(2, 3, 2, elements, "eq17")
}

/// The printed mixing matrix of the alternative partner, `(|a0⟩, |a1⟩)` as rows.
pub fn othermu_mixing() -> ComplexMatrix {
    let h = sqrt(2.0) / 2.0;
    matrix(
        1.0 / sqrt(3.0),
        [
            [C64::new(h, h), C64::new(-1.0, 1.0)],
            [C64::new(-1.0, -1.0), C64::new(-h, h)],
        ],
    )
}

/// The alternative partner basis built from the printed `|a0⟩`, `|a1⟩`.
pub fn othermu() -> BasisFamily {
    meb_from_left_unitary(&othermu_mixing(), 3)
        .expect("printed mixing matrix is 2x2")
        .with_label("othermu")
}

// Example entries w+2, 2w²+1, w²+2w (all of modulus √3).
fn s1_entry(token: char) -> C64 {
    let w = root_of_unity(1, 3);
    match token {
        'a' => w + 2.0,
        'b' => w * w * 2.0 + 1.0,
        'c' => w * w + w * 2.0,
        _ => unreachable!(),
    }
}

fn lettered(scale: f64, rows: [&str; 3], entry: fn(char) -> C64) -> ComplexMatrix {
    let cells: Vec<Vec<C64>> = rows
        .iter()
        .map(|r| r.chars().filter(|ch| !ch.is_whitespace()).map(entry).collect())
        .collect();
    ComplexMatrix::from_fn(3, 3, |r, c| cells[r][c] * scale)
}

pub fn s1() -> BasisFamily {
    let s = 1.0 / (3.0 * sqrt(3.0));
    let grids = [
        ["aaa", "bac", "cab"],
        ["acb", "bca", "ccc"],
        ["abc", "bbb", "cba"],
        ["aaa", "acb", "abc"],
        ["acb", "abc", "aaa"],
        ["abc", "aaa", "acb"],
        ["aaa", "cba", "bca"],
        ["acb", "cab", "bbb"],
        ["abc", "ccc", "bac"],
    ];
    let elements = grids.iter().map(|g| lettered(s, *g, s1_entry)).collect();
    family(3, 3, 3, elements, "S1")
}

// '0', '1', 'w' (ω) and 'v' (ω²).
fn phase_entry(token: char) -> C64 {
    match token {
        '0' => re(0.0),
        '1' => re(1.0),
        'w' => root_of_unity(1, 3),
        'v' => root_of_unity(2, 3),
        _ => unreachable!(),
    }
}

pub fn s2() -> BasisFamily {
    // printed as (1/(3√3))·3·(...)
    let s = 3.0 / (3.0 * sqrt(3.0));
    let grids = [
        ["0v0", "w00", "001"],
        ["010", "w00", "00v"],
        ["0w0", "w00", "00w"],
        ["v00", "00w", "010"],
        ["v00", "001", "0w0"],
        ["v00", "00v", "0v0"],
        ["00v", "0w0", "100"],
        ["00w", "0v0", "100"],
        ["001", "010", "100"],
    ];
    let elements = grids.iter().map(|g| lettered(s, *g, phase_entry)).collect();
    family(3, 3, 3, elements, "S2")
}

pub fn s3() -> BasisFamily {
    let s = 1.0 / sqrt(3.0);
    let grids = [
        ["100", "010", "001"],
        ["100", "0w0", "00v"],
        ["100", "0v0", "00w"],
        ["001", "100", "010"],
        ["00v", "100", "0w0"],
        ["00w", "100", "0v0"],
        ["010", "001", "100"],
        ["0w0", "00v", "100"],
        ["0v0", "00w", "100"],
    ];
    let elements = grids.iter().map(|g| lettered(s, *g, phase_entry)).collect();
    family(3, 3, 3, elements, "S3")
}

fn row_vectors(scale: f64, vectors: &[[C64; 2]], label: &str) -> BasisFamily {
    let elements = vectors.iter().map(|v| matrix(scale, [*v])).collect();
    family(1, 2, 1, elements, label)
}

pub fn t1() -> BasisFamily {
    row_vectors(1.0, &[[re(0.0), re(1.0)], [re(1.0), re(0.0)]], "T1")
}

pub fn t2() -> BasisFamily {
    row_vectors(1.0 / sqrt(2.0), &[[re(1.0), re(1.0)], [re(1.0), re(-1.0)]], "T2")
}

pub fn t3() -> BasisFamily {
    row_vectors(1.0 / sqrt(2.0), &[[re(1.0), im(1.0)], [re(1.0), im(-1.0)]], "T3")
}

/// Columns are the eq16 states in the `p·3 + p'` ordering.
pub fn u() -> ComplexMatrix {
    let s = re(1.0 / sqrt(2.0));
    let z = re(0.0);
    ComplexMatrix::from_rows(&[
        [s, s, z, z, z, z],
        [z, z, s, s, z, z],
        [z, z, z, z, s, s],
        [z, z, z, z, s, -s],
        [s, -s, z, z, z, z],
        [z, z, s, -s, z, z],
    ])
    .expect("U is 6x6")
}

/// Columns are the eq17 states in the `p·3 + p'` ordering.
pub fn v() -> ComplexMatrix {
    let a = 1.0 / sqrt(6.0);
    let b = sqrt(2.0) / sqrt(6.0);
    let (ar, br, ai, bi, z) = (re(a), re(b), im(a), im(b), re(0.0));
    ComplexMatrix::from_rows(&[
        [ar, ar, z, z, br, -br],
        [br, -br, ar, ar, z, z],
        [z, z, br, -br, ar, ar],
        [-bi, -bi, z, z, ai, -ai],
        [ai, -ai, -bi, -bi, z, z],
        [z, z, ai, -ai, -bi, -bi],
    ])
    .expect("V is 6x6")
}

/// `diag(-i, -i, 1, 1, 1, 1)`.
pub fn q() -> ComplexMatrix {
    ComplexMatrix::diag(&[im(-1.0), im(-1.0), re(1.0), re(1.0), re(1.0), re(1.0)])
}

pub fn r_set() -> FamilySet {
    FamilySet::new(alloc::vec![r1(), r2()]).expect("R1, R2 share dimensions")
}

pub fn s_set() -> FamilySet {
    FamilySet::new(alloc::vec![s1(), s2(), s3()]).expect("S families share dimensions")
}

pub fn t_set() -> FamilySet {
    FamilySet::new(alloc::vec![t1(), t2(), t3()]).expect("T families share dimensions")
}

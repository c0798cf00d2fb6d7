//! Certification of SEBk bases and mutually unbiased family sets.
//!
//! Every check reports rather than throws: a [`VerificationReport`] carries
//! the verdict, the exact worst deviation seen, and up to
//! [`MAX_OFFENDERS`] offending index tuples.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::math;
use crate::matspace::{hs_inner_unchecked, singular_values, ComplexMatrix};

/// Offender lists are truncated to this many entries.
pub const MAX_OFFENDERS: usize = 32;

/// Tolerances for every approximate decision.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VerifyConfig {
    /// Singular values, orthonormality, unitarity and Schmidt rank cutoff.
    pub tol_abs: f64,
    /// Deviation of an overlap modulus from `1/√(d·d')`.
    pub tol_overlap: f64,
}

impl VerifyConfig {
    /// Both tolerances must lie in `[0, 1e-3)`.
    pub fn new(tol_abs: f64, tol_overlap: f64) -> Result<Self> {
        for (name, t) in [("tol_abs", tol_abs), ("tol_overlap", tol_overlap)] {
            if !(0.0..1e-3).contains(&t) {
                return Err(Error::InvalidParameter(format!("{name} = {t} must lie in [0, 1e-3)")));
            }
        }
        Ok(Self { tol_abs, tol_overlap })
    }

    /// Same tolerance for both checks.
    pub fn uniform(tol: f64) -> Result<Self> {
        Self::new(tol, tol)
    }
}

impl Default for VerifyConfig {
    fn default() -> Self {
        Self {
            tol_abs: 1e-9,
            tol_overlap: 1e-9,
        }
    }
}

/// One basis of `d·d'` matrices of shape `d × d'` with declared Schmidt number `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisFamily {
    d: usize,
    dprime: usize,
    k: usize,
    elements: Vec<ComplexMatrix>,
    label: String,
}

impl BasisFamily {
    pub fn new(d: usize, dprime: usize, k: usize, elements: Vec<ComplexMatrix>, label: impl Into<String>) -> Result<Self> {
        if d == 0 || dprime == 0 {
            return Err(Error::InvalidFamily(format!("dimensions {d}x{dprime} must be positive")));
        }
        if k == 0 || k > d.min(dprime) {
            return Err(Error::InvalidFamily(format!(
                "Schmidt number {k} outside 1..={}",
                d.min(dprime)
            )));
        }
        if elements.len() != d * dprime {
            return Err(Error::InvalidFamily(format!(
                "expected {} elements, found {}",
                d * dprime,
                elements.len()
            )));
        }
        if let Some(bad) = elements.iter().find(|m| m.shape() != (d, dprime)) {
            return Err(Error::ShapeMismatch {
                expected: (d, dprime),
                found: bad.shape(),
            });
        }
        Ok(Self {
            d,
            dprime,
            k,
            elements,
            label: label.into(),
        })
    }

    #[inline]
    pub fn d(&self) -> usize {
        self.d
    }

    #[inline]
    pub fn dprime(&self) -> usize {
        self.dprime
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    #[inline]
    pub fn elements(&self) -> &[ComplexMatrix] {
        &self.elements
    }

    #[inline]
    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    /// Same elements with a different declared Schmidt number.
    pub fn with_k(self, k: usize) -> Result<Self> {
        Self::new(self.d, self.dprime, k, self.elements, self.label)
    }

    /// Replaces one element; shape must match.
    pub fn replace(&self, index: usize, m: ComplexMatrix) -> Result<Self> {
        let mut elements = self.elements.clone();
        if index >= elements.len() {
            return Err(Error::InvalidParameter(format!("element index {index} out of range")));
        }
        elements[index] = m;
        Self::new(self.d, self.dprime, self.k, elements, self.label.clone())
    }

    pub fn into_elements(self) -> Vec<ComplexMatrix> {
        self.elements
    }
}

/// Ordered collection of families sharing `(d, d', k)`, claimed pairwise unbiased.
#[derive(Clone, Debug, PartialEq, Default)]
pub struct FamilySet {
    families: Vec<BasisFamily>,
}

impl FamilySet {
    pub fn new(families: Vec<BasisFamily>) -> Result<Self> {
        if let Some(first) = families.first() {
            let key = (first.d, first.dprime, first.k);
            if let Some(bad) = families.iter().find(|f| (f.d, f.dprime, f.k) != key) {
                return Err(Error::InvalidFamily(format!(
                    "family {:?} has (d, d', k) = {:?}, expected {key:?}",
                    bad.label,
                    (bad.d, bad.dprime, bad.k)
                )));
            }
        }
        Ok(Self { families })
    }

    #[inline]
    pub fn families(&self) -> &[BasisFamily] {
        &self.families
    }

    pub fn into_families(self) -> Vec<BasisFamily> {
        self.families
    }

    /// Number of families: the witnessed lower bound.
    #[inline]
    pub fn witness_count(&self) -> usize {
        self.families.len()
    }

    pub fn is_empty(&self) -> bool {
        self.families.is_empty()
    }

    /// `(d, d', k)` of the members, if any.
    pub fn dims(&self) -> Option<(usize, usize, usize)> {
        self.families.first().map(|f| (f.d, f.dprime, f.k))
    }

    /// First `n` families (or all if fewer).
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            families: self.families.iter().take(n).cloned().collect(),
        }
    }
}

/// One failed comparison.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Offender {
    pub family_a: usize,
    pub family_b: usize,
    pub element_a: usize,
    pub element_b: usize,
    /// The measured quantity (overlap modulus, Gram entry modulus, or worst
    /// singular value deviation for spectrum checks).
    pub measured: f64,
    /// Distance from the target value.
    pub deviation: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    pub worst_violation: f64,
    pub offenders: Vec<Offender>,
    pub checks_run: usize,
    pub notes: Vec<String>,
}

impl VerificationReport {
    pub fn empty() -> Self {
        Self {
            passed: true,
            worst_violation: 0.0,
            offenders: Vec::new(),
            checks_run: 0,
            notes: Vec::new(),
        }
    }

    /// Records one comparison against a tolerance.
    pub fn record(&mut self, deviation: f64, tol: f64, offender: Offender) {
        self.checks_run += 1;
        // NaN must not pass
        if deviation.is_nan() || deviation > tol {
            self.passed = false;
            self.push_offender(offender);
        }
        if deviation > self.worst_violation || deviation.is_nan() {
            self.worst_violation = deviation;
        }
    }

    /// Records a named boolean condition with its measured deviation.
    pub fn require(&mut self, ok: bool, deviation: f64, note: impl Into<String>) {
        self.checks_run += 1;
        if !ok {
            self.passed = false;
        }
        if deviation > self.worst_violation {
            self.worst_violation = deviation;
        }
        let status = if ok { "ok" } else { "FAILED" };
        self.notes.push(format!("[{status}] {}", note.into()));
    }

    fn push_offender(&mut self, offender: Offender) {
        self.offenders.push(offender);
        if self.offenders.len() > MAX_OFFENDERS {
            self.sort_offenders();
            self.offenders.truncate(MAX_OFFENDERS);
        }
    }

    fn sort_offenders(&mut self) {
        self.offenders.sort_by(|a, b| {
            b.deviation
                .total_cmp(&a.deviation)
                .then((a.family_a, a.family_b, a.element_a, a.element_b).cmp(&(
                    b.family_a,
                    b.family_b,
                    b.element_a,
                    b.element_b,
                )))
        });
    }

    /// Combines two reports; associative and commutative in verdict, worst
    /// violation, check count and retained offenders.
    pub fn merge(mut self, other: Self) -> Self {
        self.passed &= other.passed;
        self.worst_violation = self.worst_violation.max(other.worst_violation);
        self.checks_run += other.checks_run;
        self.offenders.extend(other.offenders);
        self.sort_offenders();
        self.offenders.truncate(MAX_OFFENDERS);
        self.notes.extend(other.notes);
        self
    }

    fn relabel_families(mut self, fa: usize, fb: usize) -> Self {
        for o in &mut self.offenders {
            o.family_a = fa;
            o.family_b = fb;
        }
        self
    }
}

/// Number of singular values above `cfg.tol_abs`.
pub fn schmidt_number(a: &ComplexMatrix, cfg: &VerifyConfig) -> Result<usize> {
    Ok(singular_values(a)?.into_iter().filter(|&s| s > cfg.tol_abs).count())
}

/// Checks that `f` is an SEBk: every element has `k` singular values `1/√k`
/// and the rest zero, and the elements are Hilbert–Schmidt orthonormal.
pub fn check_sebk(f: &BasisFamily, cfg: &VerifyConfig) -> VerificationReport {
    check_sebk_indexed(f, 0, cfg)
}

fn check_sebk_indexed(f: &BasisFamily, index: usize, cfg: &VerifyConfig) -> VerificationReport {
    let mut report = VerificationReport::empty();
    let target = 1.0 / math::sqrt(f.k as f64);
    for (i, m) in f.elements.iter().enumerate() {
        let offender = |measured, deviation| Offender {
            family_a: index,
            family_b: index,
            element_a: i,
            element_b: i,
            measured,
            deviation,
        };
        match singular_values(m) {
            Ok(sv) => {
                // sorted descending: first k should be 1/√k, the rest 0
                let deviation = sv
                    .iter()
                    .enumerate()
                    .map(|(j, &s)| (s - if j < f.k { target } else { 0.0 }).abs())
                    .fold(0.0, f64::max);
                report.record(deviation, cfg.tol_abs, offender(deviation, deviation));
            }
            Err(_) => report.record(f64::INFINITY, cfg.tol_abs, offender(f64::NAN, f64::INFINITY)),
        }
    }
    for i in 0..f.elements.len() {
        for j in i..f.elements.len() {
            let g = hs_inner_unchecked(&f.elements[i], &f.elements[j]);
            let expected = if i == j { 1.0 } else { 0.0 };
            let deviation = (g - expected).norm();
            report.record(
                deviation,
                cfg.tol_abs,
                Offender {
                    family_a: index,
                    family_b: index,
                    element_a: i,
                    element_b: j,
                    measured: g.norm(),
                    deviation,
                },
            );
        }
    }
    report
}

/// Checks `|Tr(F_i† G_j)| = 1/√(d·d')` for all element pairs.
pub fn check_mu_pair(f: &BasisFamily, g: &BasisFamily, cfg: &VerifyConfig) -> Result<VerificationReport> {
    if (f.d, f.dprime) != (g.d, g.dprime) {
        return Err(Error::ShapeMismatch {
            expected: (f.d, f.dprime),
            found: (g.d, g.dprime),
        });
    }
    let target = 1.0 / math::sqrt((f.d * f.dprime) as f64);
    let mut report = VerificationReport::empty();
    for (i, a) in f.elements.iter().enumerate() {
        for (j, b) in g.elements.iter().enumerate() {
            let measured = hs_inner_unchecked(a, b).norm();
            let deviation = (measured - target).abs();
            report.record(
                deviation,
                cfg.tol_overlap,
                Offender {
                    family_a: 0,
                    family_b: 1,
                    element_a: i,
                    element_b: j,
                    measured,
                    deviation,
                },
            );
        }
    }
    Ok(report)
}

/// Every family is an SEBk and every unordered pair is mutually unbiased.
pub fn check_museb_set(s: &FamilySet, cfg: &VerifyConfig) -> VerificationReport {
    let fams = s.families();
    let mut report = VerificationReport::empty();
    for (i, f) in fams.iter().enumerate() {
        report = report.merge(check_sebk_indexed(f, i, cfg));
    }
    for i in 0..fams.len() {
        for j in i + 1..fams.len() {
            // FamilySet guarantees shared dimensions
            let pair = check_mu_pair(&fams[i], &fams[j], cfg).expect("family set members share dimensions");
            report = report.merge(pair.relabel_families(i, j));
        }
    }
    report
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::C64;
    use alloc::vec;

    fn computational(n: usize) -> BasisFamily {
        let elements = (0..n)
            .map(|j| ComplexMatrix::from_fn(1, n, |_, c| C64::new(if c == j { 1.0 } else { 0.0 }, 0.0)))
            .collect();
        BasisFamily::new(1, n, 1, elements, "computational").unwrap()
    }

    fn fourier(n: usize) -> BasisFamily {
        let elements = (0..n)
            .map(|j| {
                ComplexMatrix::from_fn(1, n, |_, c| {
                    C64::from_polar(1.0 / math::sqrt(n as f64), math::TAU * (j * c) as f64 / n as f64)
                })
            })
            .collect();
        BasisFamily::new(1, n, 1, elements, "fourier").unwrap()
    }

    #[test]
    fn config_rejects_vacuous_tolerances() {
        assert!(VerifyConfig::new(1e-3, 1e-9).is_err());
        assert!(VerifyConfig::new(1e-9, -1.0).is_err());
        assert!(VerifyConfig::new(0.0, 1e-4).is_ok());
    }

    #[test]
    fn family_invariants() {
        let m = ComplexMatrix::zeros(1, 2);
        assert!(BasisFamily::new(1, 2, 1, vec![m.clone()], "x").is_err());
        assert!(BasisFamily::new(1, 2, 2, vec![m.clone(), m.clone()], "x").is_err());
        assert!(BasisFamily::new(1, 2, 1, vec![m.clone(), ComplexMatrix::zeros(2, 1)], "x").is_err());
        let a = computational(2);
        let b = computational(3);
        assert!(FamilySet::new(vec![a, b]).is_err());
    }

    #[test]
    fn fourier_and_computational_are_unbiased() {
        let cfg = VerifyConfig::default();
        let set = FamilySet::new(vec![computational(5), fourier(5)]).unwrap();
        let report = check_museb_set(&set, &cfg);
        assert!(report.passed, "{report:?}");
        // 2 spectra × 5 + 2 Gram triangles × 15 + 25 cross overlaps
        assert_eq!(report.checks_run, 10 + 30 + 25);
    }

    #[test]
    fn basis_is_not_unbiased_with_itself() {
        let cfg = VerifyConfig::default();
        let f = fourier(3);
        let report = check_mu_pair(&f, &f, &cfg).unwrap();
        assert!(!report.passed);
        // zero overlaps deviate by 1/√3, more than the unit ones
        assert!((report.worst_violation - 1.0 / math::sqrt(3.0)).abs() < 1e-12);
        assert!(!report.offenders.is_empty());
    }

    #[test]
    fn mu_pair_shape_mismatch() {
        let cfg = VerifyConfig::default();
        assert!(matches!(
            check_mu_pair(&computational(2), &computational(3), &cfg),
            Err(Error::ShapeMismatch { .. })
        ));
    }

    #[test]
    fn offender_list_is_bounded_but_worst_is_exact() {
        let cfg = VerifyConfig::default();
        let f = computational(8);
        let report = check_mu_pair(&f, &f, &cfg).unwrap();
        assert_eq!(report.offenders.len(), MAX_OFFENDERS);
        assert!((report.worst_violation - (1.0 - 1.0 / math::sqrt(8.0))).abs() < 1e-15);
        assert_eq!(report.offenders[0].deviation, report.worst_violation);
    }

    #[test]
    fn merge_is_commutative() {
        let cfg = VerifyConfig::default();
        let a = check_mu_pair(&computational(6), &computational(6), &cfg).unwrap();
        let b = check_sebk(&fourier(6).replace(0, ComplexMatrix::zeros(1, 6)).unwrap(), &cfg);
        let ab = a.clone().merge(b.clone());
        let ba = b.merge(a);
        assert_eq!(ab.passed, ba.passed);
        assert_eq!(ab.worst_violation, ba.worst_violation);
        assert_eq!(ab.checks_run, ba.checks_run);
        assert_eq!(ab.offenders, ba.offenders);
    }

    #[test]
    fn nan_never_passes() {
        let mut r = VerificationReport::empty();
        r.record(
            f64::NAN,
            1e-9,
            Offender {
                family_a: 0,
                family_b: 0,
                element_a: 0,
                element_b: 0,
                measured: f64::NAN,
                deviation: f64::NAN,
            },
        );
        assert!(!r.passed);
    }
}

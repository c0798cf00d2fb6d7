//! Explicit families: the shift-and-phase MEB, the θ-parameterized partner
//! basis in `C² ⊗ C³`, prime-dimension MUBs, and the qubit MUMEB triple.

pub mod catalog;

use alloc::format;
use alloc::vec::Vec;

use crate::compose::tensor_families;
use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};
use crate::matspace::{ComplexMatrix, C64};
use crate::verify::{BasisFamily, FamilySet};

pub use catalog::{catalog, CatalogEntry};

/// Absolute tolerance on the wrapped angle constraint residual.
pub const ADMISSIBILITY_TOL: f64 = 1e-9;

/// `exp(2πi·num/den)`, exact at quarter turns.
pub(crate) fn root_of_unity(num: usize, den: usize) -> C64 {
    let num = num % den;
    if (4 * num).is_multiple_of(den) {
        return match 4 * num / den {
            0 => C64::new(1.0, 0.0),
            1 => C64::new(0.0, 1.0),
            2 => C64::new(-1.0, 0.0),
            _ => C64::new(0.0, -1.0),
        };
    }
    C64::from_polar(1.0, TAU * num as f64 / den as f64)
}

/// Angles of the `C² ⊗ C³` mixing matrix
/// `(1/√3)[[e^{iθ1}, √2 e^{iθ2}], [√2 e^{iθ3}, e^{i(θ1+π/2)}]]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaParams {
    pub theta1: f64,
    pub theta2: f64,
    pub theta3: f64,
}

impl ThetaParams {
    pub fn new(theta1: f64, theta2: f64, theta3: f64) -> Self {
        Self { theta1, theta2, theta3 }
    }

    /// Completes `(θ1, θ2)` with [`solve_theta`].
    pub fn completed(theta1: f64, theta2: f64) -> Self {
        Self::new(theta1, theta2, solve_theta(theta1, theta2))
    }

    /// `|θ2 + θ3 - 2θ1 - 3π/2|` reduced into `[0, π]`.
    pub fn residual(&self) -> f64 {
        math::wrap_pi(self.theta2 + self.theta3 - 2.0 * self.theta1 - 1.5 * PI).abs()
    }

    pub fn is_admissible(&self) -> bool {
        self.residual() <= ADMISSIBILITY_TOL
    }

    /// Errors with `NotAdmissible` unless the constraint holds.
    pub fn check(&self) -> Result<()> {
        let residual = self.residual();
        if residual <= ADMISSIBILITY_TOL {
            Ok(())
        } else {
            Err(Error::NotAdmissible { residual })
        }
    }

    /// The `2×2` mixing matrix; unitary exactly when admissible.
    pub fn matrix(&self) -> ComplexMatrix {
        let s = 1.0 / math::sqrt(3.0);
        let r2 = math::sqrt(2.0);
        let entries = [
            C64::from_polar(s, self.theta1),
            C64::from_polar(s * r2, self.theta2),
            C64::from_polar(s * r2, self.theta3),
            C64::from_polar(s, self.theta1 + 0.5 * PI),
        ];
        ComplexMatrix::new(2, 2, entries.to_vec()).expect("finite angles give finite entries")
    }
}

/// `θ3 = 3π/2 + 2θ1 - θ2` reduced to `[0, 2π)`.
pub fn solve_theta(theta1: f64, theta2: f64) -> f64 {
    math::wrap_tau(1.5 * PI + 2.0 * theta1 - theta2)
}

/// The MEB `φ_{m,n} = (1/√d) Σ_p ω_d^{np} |p⟩|p+m mod d'⟩`, ordered by `m·d + n`.
pub fn weyl_meb(d: usize, dprime: usize) -> Result<BasisFamily> {
    if d == 0 || dprime == 0 {
        return Err(Error::InvalidParameter(format!("dimensions {d}x{dprime} must be positive")));
    }
    if d > dprime {
        return Err(Error::DimensionOrder { d, dprime });
    }
    Ok(meb_from_left_unitary(&ComplexMatrix::identity(d), dprime)?.with_label(format!("weyl({d},{dprime})")))
}

/// Same template with the left factor mixed by a `d×d` matrix `a`:
/// `ψ_{m,n} = (1/√d) Σ_p ω_d^{np} |a_p⟩|p+m mod d'⟩`, `|a_p⟩ = Σ_r a[p][r] |r⟩`.
///
/// The declared Schmidt number is `d`; the result is an SEB only when `a` is unitary.
pub fn meb_from_left_unitary(a: &ComplexMatrix, dprime: usize) -> Result<BasisFamily> {
    let d = a.rows();
    if !a.is_square() {
        return Err(Error::ShapeMismatch {
            expected: (d, d),
            found: a.shape(),
        });
    }
    if d > dprime {
        return Err(Error::DimensionOrder { d, dprime });
    }
    let norm = 1.0 / math::sqrt(d as f64);
    let mut elements = Vec::with_capacity(d * dprime);
    for m in 0..dprime {
        for n in 0..d {
            let mut data = alloc::vec![C64::new(0.0, 0.0); d * dprime];
            for p in 0..d {
                let coeff = root_of_unity(n * p, d) * norm;
                let col = (p + m) % dprime;
                for r in 0..d {
                    data[r * dprime + col] += coeff * a.get(p, r);
                }
            }
            elements.push(ComplexMatrix::new(d, dprime, data)?);
        }
    }
    BasisFamily::new(d, dprime, d, elements, "meb")
}

/// The MEB pair `(Φ, Ψ)` in `C² ⊗ C³`, Ψ mixed by the θ matrix.
pub fn c23_partner(theta: &ThetaParams) -> Result<(BasisFamily, BasisFamily)> {
    theta.check()?;
    let phi = weyl_meb(2, 3)?.with_label("phi");
    let psi = meb_from_left_unitary(&theta.matrix(), 3)?.with_label(format!(
        "psi(θ1={:.6}, θ2={:.6}, θ3={:.6})",
        theta.theta1, theta.theta2, theta.theta3
    ));
    Ok((phi, psi))
}

/// Prime factorization, factors ordered by increasing prime power.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IntFactorization {
    pub value: usize,
    pub factors: Vec<(usize, u32)>,
}

impl IntFactorization {
    pub fn new(value: usize) -> Result<Self> {
        if value == 0 {
            return Err(Error::InvalidParameter("cannot factor zero".into()));
        }
        let mut factors = Vec::new();
        let mut n = value;
        let mut p = 2;
        while p * p <= n {
            if n.is_multiple_of(p) {
                let mut e = 0;
                while n.is_multiple_of(p) {
                    n /= p;
                    e += 1;
                }
                factors.push((p, e));
            }
            p += 1;
        }
        if n > 1 {
            factors.push((n, 1));
        }
        factors.sort_by_key(|&(p, e)| p.pow(e));
        Ok(Self { value, factors })
    }

    pub fn product(&self) -> usize {
        self.factors.iter().map(|&(p, e)| p.pow(e)).product()
    }

    /// Primes with multiplicity, ascending.
    pub fn primes(&self) -> Vec<usize> {
        let mut out: Vec<usize> = self
            .factors
            .iter()
            .flat_map(|&(p, e)| core::iter::repeat_n(p, e as usize))
            .collect();
        out.sort_unstable();
        out
    }
}

pub fn is_prime(n: usize) -> bool {
    n >= 2 && (2..).take_while(|p| p * p <= n).all(|p| !n.is_multiple_of(p))
}

/// `p + 1` MUBs of `C^p` as `1×p` families.
///
/// `p = 2` returns the printed qubit triple. Odd `p` returns the computational
/// basis followed by the quadratic-phase bases
/// `|b, j⟩ = (1/√p) Σ_s ω_p^{b s² + j s} |s⟩`, `b = 0..p`.
pub fn mub_prime(p: usize) -> Result<FamilySet> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if p == 2 {
        return Ok(catalog::t_set());
    }
    let mut families = Vec::with_capacity(p + 1);
    let computational = (0..p)
        .map(|j| ComplexMatrix::from_fn(1, p, |_, s| C64::new(if s == j { 1.0 } else { 0.0 }, 0.0)))
        .collect();
    families.push(BasisFamily::new(1, p, 1, computational, format!("mub{p}/z"))?);
    let norm = 1.0 / math::sqrt(p as f64);
    for b in 0..p {
        let vectors = (0..p)
            .map(|j| ComplexMatrix::from_fn(1, p, |_, s| root_of_unity((b * s * s + j * s) % p, p) * norm))
            .collect();
        families.push(BasisFamily::new(1, p, 1, vectors, format!("mub{p}/b{b}"))?);
    }
    FamilySet::new(families)
}

/// MUBs of `C^q` by tensoring one prime-dimension basis per prime factor.
///
/// Yields `min_p (p + 1)` bases over the distinct primes of `q`; prime powers
/// are not given their full `p^a + 1`.
pub fn mub_composite(q: usize) -> Result<FamilySet> {
    if q < 2 {
        return Err(Error::InvalidParameter(format!("MUB dimension {q} must be at least 2")));
    }
    if is_prime(q) {
        return mub_prime(q);
    }
    let primes = IntFactorization::new(q)?.primes();
    let mut acc = mub_prime(primes[0])?;
    for &p in &primes[1..] {
        acc = tensor_families(&acc, &mub_prime(p)?)?;
    }
    let families = acc
        .into_families()
        .into_iter()
        .enumerate()
        .map(|(i, f)| f.with_label(format!("mub{q}/{i}")))
        .collect();
    FamilySet::new(families)
}

/// Three MEBs of `C² ⊗ C²`: `B_t = {(1/√2) D^t P : P ∈ {I, X, Y, Z}}` with
/// `D = exp(i(π/3)(X+Y+Z)/√3)`.
pub fn mumeb_qubit() -> FamilySet {
    let (o, z, i) = (C64::new(1.0, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 1.0));
    let paulis = [
        ComplexMatrix::identity(2),
        ComplexMatrix::from_rows(&[[z, o], [o, z]]).expect("2x2"),
        ComplexMatrix::from_rows(&[[z, -i], [i, z]]).expect("2x2"),
        ComplexMatrix::from_rows(&[[o, z], [z, -o]]).expect("2x2"),
    ];
    // exp(iα n·σ) = cos α I + i sin α n·σ for a unit vector n
    let alpha = PI / 3.0;
    let n_sigma = paulis[1]
        .add(&paulis[2])
        .and_then(|m| m.add(&paulis[3]))
        .expect("2x2")
        .scale(C64::new(1.0 / math::sqrt(3.0), 0.0));
    let d = ComplexMatrix::identity(2)
        .scale(C64::new(math::cos(alpha), 0.0))
        .add(&n_sigma.scale(C64::new(0.0, math::sin(alpha))))
        .expect("2x2");

    let scale = C64::new(1.0 / math::sqrt(2.0), 0.0);
    let mut power = ComplexMatrix::identity(2);
    let mut families = Vec::with_capacity(3);
    for t in 0..3 {
        let elements = paulis
            .iter()
            .map(|p| power.matmul(p).expect("2x2").scale(scale))
            .collect();
        families.push(BasisFamily::new(2, 2, 2, elements, format!("qubit-meb/{t}")).expect("four 2x2 elements"));
        power = power.matmul(&d).expect("2x2");
    }
    FamilySet::new(families).expect("same dimensions")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matspace::{is_unitary, matrix_to_state, state_to_matrix};
    use crate::verify::{check_museb_set, check_sebk, schmidt_number, VerifyConfig};
    use alloc::vec;

    #[test]
    fn solve_theta_values() {
        assert_eq!(solve_theta(0.0, 1.5 * PI), 0.0);
        assert!((solve_theta(PI / 4.0, 3.0 * PI / 4.0) - 5.0 * PI / 4.0).abs() < 1e-14);
        let t = ThetaParams::completed(6.0, 0.1);
        assert!((0.0..TAU).contains(&t.theta3));
        assert!(t.is_admissible());
    }

    #[test]
    fn admissibility_wraps_around() {
        assert!(ThetaParams::new(0.0, 1.5 * PI + TAU, -TAU).is_admissible());
        assert!(ThetaParams::new(PI, 1.5 * PI, 2.0 * PI - 1e-12).is_admissible());
        assert!(!ThetaParams::new(0.0, 0.0, 0.0).is_admissible());
        assert!(matches!(
            c23_partner(&ThetaParams::new(0.0, 0.0, 0.0)),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn theta_matrix_is_unitary_at_printed_choice() {
        let a = ThetaParams::new(0.0, 1.5 * PI, 0.0).matrix();
        assert!(is_unitary(&a, &VerifyConfig::default()).unwrap());
        let s = 1.0 / math::sqrt(3.0);
        let r2 = math::sqrt(2.0);
        let printed = ComplexMatrix::from_rows(&[
            [C64::new(s, 0.0), C64::new(0.0, -r2 * s)],
            [C64::new(r2 * s, 0.0), C64::new(0.0, s)],
        ])
        .unwrap();
        assert!(a.max_abs_diff(&printed).unwrap() < 1e-15);
    }

    #[test]
    fn weyl_meb_23_matches_first_printed_basis() {
        let w = weyl_meb(2, 3).unwrap();
        let printed = catalog::eq16();
        for (x, y) in w.elements().iter().zip(printed.elements()) {
            assert!(x.max_abs_diff(y).unwrap() < 1e-15);
        }
    }

    #[test]
    fn weyl_meb_trivial_and_order() {
        let w = weyl_meb(1, 4).unwrap();
        for (j, m) in w.elements().iter().enumerate() {
            assert_eq!(m.shape(), (1, 4));
            assert_eq!(m.get(0, j), C64::new(1.0, 0.0));
        }
        assert!(matches!(weyl_meb(3, 2), Err(Error::DimensionOrder { d: 3, dprime: 2 })));
    }

    #[test]
    fn weyl_meb_is_sebk_for_small_dimensions() {
        let cfg = VerifyConfig::default();
        for d in 1..=6 {
            for dp in d..=6 {
                let f = weyl_meb(d, dp).unwrap();
                let r = check_sebk(&f, &cfg);
                assert!(r.passed, "weyl({d},{dp}) worst {}", r.worst_violation);
            }
        }
    }

    #[test]
    fn scaled_square_weyl_elements_are_unitary() {
        let cfg = VerifyConfig::default();
        for d in 1..=5 {
            let scale = C64::new(math::sqrt(d as f64), 0.0);
            for m in weyl_meb(d, d).unwrap().elements() {
                assert!(is_unitary(&m.scale(scale), &cfg).unwrap());
            }
        }
    }

    #[test]
    fn partner_at_printed_angles_matches_second_basis() {
        let (phi, psi) = c23_partner(&ThetaParams::new(0.0, 1.5 * PI, 0.0)).unwrap();
        for (x, y) in phi.elements().iter().zip(catalog::eq16().elements()) {
            assert!(x.max_abs_diff(y).unwrap() < 1e-15);
        }
        for (x, y) in psi.elements().iter().zip(catalog::eq17().elements()) {
            assert!(x.max_abs_diff(y).unwrap() < 1e-15);
        }
    }

    #[test]
    fn partner_at_alternative_angles_is_othermu() {
        let (_, psi) = c23_partner(&ThetaParams::new(PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0)).unwrap();
        let a = ThetaParams::new(PI / 4.0, 3.0 * PI / 4.0, 5.0 * PI / 4.0).matrix();
        assert!(a.max_abs_diff(&catalog::othermu_mixing()).unwrap() < 1e-15);
        for (x, y) in psi.elements().iter().zip(catalog::othermu().elements()) {
            assert!(x.max_abs_diff(y).unwrap() < 1e-15);
        }
    }

    #[test]
    fn mub_prime_counts_and_errors() {
        let cfg = VerifyConfig::default();
        for p in [2, 3, 5, 7] {
            let set = mub_prime(p).unwrap();
            assert_eq!(set.witness_count(), p + 1);
            let r = check_museb_set(&set, &cfg);
            assert!(r.passed, "p = {p}: {}", r.worst_violation);
        }
        assert_eq!(mub_prime(4), Err(Error::NotPrime(4)));
        assert_eq!(mub_prime(1), Err(Error::NotPrime(1)));
    }

    #[test]
    fn qubit_mubs_are_the_printed_triple() {
        let set = mub_prime(2).unwrap();
        assert_eq!(set.families()[1], catalog::t2());
        assert_eq!(set.families()[2], catalog::t3());
    }

    #[test]
    fn mub_composite_counts() {
        let cfg = VerifyConfig::default();
        for (q, count) in [(6, 3), (4, 3), (3, 4), (10, 3), (15, 4), (9, 4)] {
            let set = mub_composite(q).unwrap();
            assert_eq!(set.witness_count(), count, "q = {q}");
            assert_eq!(set.dims(), Some((1, q, 1)));
            assert!(check_museb_set(&set, &cfg).passed, "q = {q}");
        }
        assert!(mub_composite(1).is_err());
    }

    #[test]
    fn factorization_orders_by_prime_power() {
        let f = IntFactorization::new(2 * 2 * 2 * 3 * 5 * 5).unwrap();
        assert_eq!(f.factors, vec![(3, 1), (2, 3), (5, 2)]);
        assert_eq!(f.product(), 600);
        assert_eq!(f.primes(), vec![2, 2, 2, 3, 5, 5]);
        assert_eq!(IntFactorization::new(1).unwrap().factors, vec![]);
    }

    #[test]
    fn qubit_mumebs() {
        let cfg = VerifyConfig::default();
        let set = mumeb_qubit();
        assert_eq!(set.witness_count(), 3);
        let r = check_museb_set(&set, &cfg);
        assert!(r.passed, "{}", r.worst_violation);
    }

    #[test]
    fn catalog_lookup() {
        let q = catalog("Q").unwrap().into_matrix().unwrap();
        for r in 0..6 {
            for c in 0..6 {
                let expected = match (r == c, r < 2) {
                    (false, _) => C64::new(0.0, 0.0),
                    (true, true) => C64::new(0.0, -1.0),
                    (true, false) => C64::new(1.0, 0.0),
                };
                assert_eq!(q.get(r, c), expected);
            }
        }
        let r1 = catalog("R1").unwrap().into_family().unwrap();
        let s = 1.0 / math::sqrt(2.0);
        let last = ComplexMatrix::from_rows(&[
            [C64::new(0.0, 0.0), C64::new(0.0, 0.0), C64::new(s, 0.0)],
            [C64::new(-s, 0.0), C64::new(0.0, 0.0), C64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert_eq!(r1.elements()[5], last);
        assert!(matches!(catalog("R3"), Err(Error::UnknownName(_))));
        assert!(catalog("r1").is_ok());
    }

    #[test]
    fn state_forms_match_matrix_forms() {
        for (states, matrices) in [(catalog::eq16(), catalog::r1()), (catalog::eq17(), catalog::r2())] {
            for (x, y) in states.elements().iter().zip(matrices.elements()) {
                assert!(state_to_matrix(&matrix_to_state(x)).max_abs_diff(y).unwrap() < 1e-15);
            }
        }
    }

    #[test]
    fn catalog_unitaries_have_eq_states_as_columns() {
        let u = catalog::u();
        let v = catalog::v();
        for (j, m) in catalog::eq16().elements().iter().enumerate() {
            let col = u.column(j);
            assert!(col.iter().zip(m.entries()).all(|(a, b)| (a - b).norm() < 1e-15));
        }
        for (j, m) in catalog::eq17().elements().iter().enumerate() {
            let col = v.column(j);
            assert!(col.iter().zip(m.entries()).all(|(a, b)| (a - b).norm() < 1e-15));
        }
    }

    #[test]
    fn schmidt_numbers_of_printed_elements() {
        let cfg = VerifyConfig::default();
        assert_eq!(schmidt_number(&catalog::r1().elements()[0], &cfg).unwrap(), 2);
        for m in catalog::s1().elements() {
            assert_eq!(schmidt_number(m, &cfg).unwrap(), 3);
        }
        let product = ComplexMatrix::from_fn(2, 3, |r, c| C64::new(if r == 0 && c == 0 { 1.0 } else { 0.0 }, 0.0));
        assert_eq!(schmidt_number(&product, &cfg).unwrap(), 1);
    }
}

//! Numerical probes of the `C² ⊗ C³` mixing-matrix parameterization.

use alloc::format;
use alloc::vec::Vec;

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::construct::{catalog, meb_from_left_unitary, solve_theta, ThetaParams};
use crate::error::{Error, Result};
use crate::math::{self, PI, TAU};
use crate::matspace::{hs_inner_unchecked, ComplexMatrix, C64};
use crate::verify::BasisFamily;

/// Tolerance for the closure conditions.
pub const CLOSURE_TOL: f64 = 1e-9;

/// Penalty at or below this counts as an exact third basis.
pub const ZERO_COST: f64 = 1e-8;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ClosureCondition {
    /// Entry moduli `(1/√3, √2/√3; √2/√3, 1/√3)`.
    ModulusPattern,
    /// `arg M11 - arg M00 ≡ π/2`.
    DiagonalPhase,
    /// `θ2 + θ3 - 2θ1 ≡ 3π/2` for the angles read off the entries.
    AngleConstraint,
}

impl ClosureCondition {
    pub fn name(self) -> &'static str {
        match self {
            ClosureCondition::ModulusPattern => "modulus-pattern",
            ClosureCondition::DiagonalPhase => "diagonal-phase",
            ClosureCondition::AngleConstraint => "angle-constraint",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureReport {
    pub product: ComplexMatrix,
    pub modulus_deviation: f64,
    pub diagonal_phase_deviation: f64,
    pub constraint_deviation: f64,
    pub violated: Vec<ClosureCondition>,
}

impl ClosureReport {
    /// At least one condition fails, so the product leaves the family.
    pub fn failed(&self) -> bool {
        !self.violated.is_empty()
    }
}

/// Tests whether `A(θa)·A(θb)` is again of the admissible mixing form.
pub fn closure_failure_probe(a: &ThetaParams, b: &ThetaParams) -> Result<ClosureReport> {
    a.check()?;
    b.check()?;
    let m = a.matrix().matmul(&b.matrix())?;
    let small = 1.0 / math::sqrt(3.0);
    let large = math::sqrt(2.0) * small;
    let pattern = [small, large, large, small];
    let modulus_deviation = m
        .entries()
        .iter()
        .zip(pattern)
        .map(|(z, p)| (z.norm() - p).abs())
        .fold(0.0, f64::max);
    let (m00, m01, m10, m11) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    let diagonal_phase_deviation = math::wrap_pi(m11.arg() - m00.arg() - 0.5 * PI).abs();
    let constraint_deviation = ThetaParams::new(m00.arg(), m01.arg(), m10.arg()).residual();

    let mut violated = Vec::new();
    for (cond, dev) in [
        (ClosureCondition::ModulusPattern, modulus_deviation),
        (ClosureCondition::DiagonalPhase, diagonal_phase_deviation),
        (ClosureCondition::AngleConstraint, constraint_deviation),
    ] {
        if dev.is_nan() || dev > CLOSURE_TOL {
            violated.push(cond);
        }
    }
    Ok(ClosureReport {
        product: m,
        modulus_deviation,
        diagonal_phase_deviation,
        constraint_deviation,
        violated,
    })
}

/// Uniform `(θ1, θ2)` in `[0, 2π)²`, completed to an admissible triple.
pub fn random_admissible<R: Rng + ?Sized>(rng: &mut R) -> ThetaParams {
    let t1 = rng.gen::<f64>() * TAU;
    let t2 = rng.gen::<f64>() * TAU;
    ThetaParams::new(t1, t2, solve_theta(t1, t2))
}

#[derive(Clone, Debug, PartialEq)]
pub struct ClosureSweep {
    pub pairs: usize,
    pub failures: usize,
    /// Products that satisfied every condition.
    pub exceptions: usize,
    /// Failures per condition, in [`ClosureCondition`] order.
    pub per_condition: [usize; 3],
    pub min_modulus_deviation: f64,
}

/// Runs [`closure_failure_probe`] on `pairs` seeded random admissible pairs.
pub fn closure_sweep(pairs: usize, seed: u64) -> ClosureSweep {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut sweep = ClosureSweep {
        pairs,
        failures: 0,
        exceptions: 0,
        per_condition: [0; 3],
        min_modulus_deviation: f64::INFINITY,
    };
    for _ in 0..pairs {
        let a = random_admissible(&mut rng);
        let b = random_admissible(&mut rng);
        let report = closure_failure_probe(&a, &b).expect("completed angles are admissible");
        if report.failed() {
            sweep.failures += 1;
        } else {
            sweep.exceptions += 1;
        }
        for cond in &report.violated {
            sweep.per_condition[*cond as usize] += 1;
        }
        sweep.min_modulus_deviation = sweep.min_modulus_deviation.min(report.modulus_deviation);
    }
    sweep
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SearchConfig {
    pub seed: u64,
    pub max_iterations: usize,
    pub step_scale: f64,
    pub restarts: usize,
}

impl SearchConfig {
    pub fn new(seed: u64, max_iterations: usize, step_scale: f64, restarts: usize) -> Result<Self> {
        if restarts == 0 {
            return Err(Error::InvalidParameter("restarts must be positive".into()));
        }
        if !(step_scale.is_finite() && step_scale > 0.0) {
            return Err(Error::InvalidParameter(format!("step scale {step_scale} must be positive")));
        }
        Ok(Self {
            seed,
            max_iterations,
            step_scale,
            restarts,
        })
    }
}

impl Default for SearchConfig {
    fn default() -> Self {
        Self {
            seed: 0,
            max_iterations: 2000,
            step_scale: 0.3,
            restarts: 4,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SearchOutcome {
    pub best_cost: f64,
    /// The `2×2` unitary mixing the left factor of the shift-and-phase template.
    pub best_candidate: ComplexMatrix,
    pub iterations_used: usize,
    pub converged_to_zero: bool,
    pub best_restart: usize,
    pub restart_costs: Vec<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RestartResult {
    pub restart: usize,
    pub best_cost: f64,
    pub best_candidate: ComplexMatrix,
    /// Best cost after the initial candidate and after each iteration.
    pub trace: Vec<f64>,
}

/// `Σ (|Tr(F_i† G_j)| - 1/√(d·d'))²` over every target family `G`.
pub fn penalty_against(candidate: &BasisFamily, targets: &[BasisFamily]) -> f64 {
    let target = 1.0 / math::sqrt((candidate.d() * candidate.dprime()) as f64);
    targets
        .iter()
        .flat_map(|g| {
            candidate.elements().iter().flat_map(move |a| {
                g.elements().iter().map(move |b| {
                    let dev = hs_inner_unchecked(a, b).norm() - target;
                    dev * dev
                })
            })
        })
        .sum()
}

/// Penalty of the MEB mixed by `w` against `eq16` and `eq17`.
pub fn third_basis_penalty(w: &ComplexMatrix) -> Result<f64> {
    let family = meb_from_left_unitary(w, 3)?;
    Ok(penalty_against(&family, &[catalog::eq16(), catalog::eq17()]))
}

/// Row Gram–Schmidt; returns a unitary spanning the same flag.
fn reunitarize(m: &ComplexMatrix) -> ComplexMatrix {
    let n = m.rows();
    let mut rows: Vec<Vec<C64>> = (0..n).map(|r| (0..m.cols()).map(|c| m.get(r, c)).collect()).collect();
    for i in 0..n {
        for j in 0..i {
            let proj: C64 = rows[j].iter().zip(&rows[i]).map(|(a, b)| a.conj() * b).sum();
            let prev = rows[j].clone();
            for (x, p) in rows[i].iter_mut().zip(prev) {
                *x -= proj * p;
            }
        }
        let norm = math::sqrt(rows[i].iter().map(|z| z.norm_sqr()).sum());
        for x in rows[i].iter_mut() {
            *x /= norm;
        }
    }
    ComplexMatrix::from_rows(&rows).expect("square rows")
}

fn random_unitary2<R: Rng + ?Sized>(rng: &mut R) -> ComplexMatrix {
    // polar angle with cos² uniform, i.e. Haar on SU(2) up to the global phase
    let theta = libm::acos(math::sqrt(rng.gen::<f64>()));
    let (psi, chi, alpha) = (rng.gen::<f64>() * TAU, rng.gen::<f64>() * TAU, rng.gen::<f64>() * TAU);
    let g = C64::from_polar(1.0, alpha);
    let (c, s) = (math::cos(theta), math::sin(theta));
    ComplexMatrix::new(
        2,
        2,
        alloc::vec![
            g * C64::from_polar(c, psi),
            g * C64::from_polar(s, chi),
            -g * C64::from_polar(s, -chi),
            g * C64::from_polar(c, -psi),
        ],
    )
    .expect("finite entries")
}

fn perturb<R: Rng + ?Sized>(w: &ComplexMatrix, step: f64, rng: &mut R) -> ComplexMatrix {
    // K = iεH with H Hermitian; W(I + K) then back onto the unitary group
    let n = w.rows();
    let mut h = alloc::vec![C64::new(0.0, 0.0); n * n];
    for r in 0..n {
        h[r * n + r] = C64::new(2.0 * rng.gen::<f64>() - 1.0, 0.0);
        for c in r + 1..n {
            let z = C64::new(2.0 * rng.gen::<f64>() - 1.0, 2.0 * rng.gen::<f64>() - 1.0);
            h[r * n + c] = z;
            h[c * n + r] = z.conj();
        }
    }
    let k = ComplexMatrix::new(n, n, h).expect("finite").scale(C64::new(0.0, step));
    let moved = w.add(&w.matmul(&k).expect("square")).expect("same shape");
    reunitarize(&moved)
}

/// One restart of the random-direction descent; its RNG stream is
/// `(cfg.seed, restart)`.
pub fn search_restart(cfg: &SearchConfig, restart: usize) -> Result<RestartResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    rng.set_stream(restart as u64);
    let mut best = random_unitary2(&mut rng);
    let mut best_cost = third_basis_penalty(&best)?;
    let mut trace = Vec::with_capacity(cfg.max_iterations + 1);
    trace.push(best_cost);
    let mut step = cfg.step_scale;
    for _ in 0..cfg.max_iterations {
        let cand = perturb(&best, step, &mut rng);
        let cost = third_basis_penalty(&cand)?;
        if cost < best_cost {
            best = cand;
            best_cost = cost;
            step = (step * 1.2).min(4.0 * cfg.step_scale);
        } else {
            step *= 0.9;
            if step < 1e-9 * cfg.step_scale {
                step = cfg.step_scale;
            }
        }
        trace.push(best_cost);
        if best_cost <= ZERO_COST * 1e-4 {
            break;
        }
    }
    Ok(RestartResult {
        restart,
        best_cost,
        best_candidate: best,
        trace,
    })
}

/// Multi-restart search for a third MEB unbiased to both `eq16` and `eq17`
/// among the left-mixed shift-and-phase template. Makes no existence claim.
pub fn third_basis_search(cfg: &SearchConfig) -> Result<SearchOutcome> {
    let mut restart_costs = Vec::with_capacity(cfg.restarts);
    let mut best: Option<RestartResult> = None;
    let mut iterations_used = 0;
    for r in 0..cfg.restarts {
        let result = search_restart(cfg, r)?;
        iterations_used += result.trace.len() - 1;
        restart_costs.push(result.best_cost);
        // strict comparison keeps the lowest restart index on ties
        if best.as_ref().is_none_or(|b| result.best_cost < b.best_cost) {
            best = Some(result);
        }
    }
    let best = best.expect("at least one restart");
    let best_cost = third_basis_penalty(&best.best_candidate)?;
    Ok(SearchOutcome {
        best_cost,
        best_candidate: best.best_candidate,
        iterations_used,
        converged_to_zero: best_cost <= ZERO_COST,
        best_restart: best.restart,
        restart_costs,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::c23_partner;
    use crate::verify::{check_museb_set, FamilySet, VerifyConfig};
    use alloc::vec;
    use proptest::prelude::*;

    fn printed() -> ThetaParams {
        ThetaParams::new(0.0, 1.5 * PI, 0.0)
    }

    #[test]
    fn printed_square_leaves_the_family() {
        let r = closure_failure_probe(&printed(), &printed()).unwrap();
        assert!(r.failed());
        assert!(r.violated.contains(&ClosureCondition::ModulusPattern));
        // A² = (1/3)[[1 - 2i, -√2 i + ...]]: |A²₀₀| = √5/3
        assert!((r.product.get(0, 0).norm() - math::sqrt(5.0) / 3.0).abs() < 1e-14);
    }

    #[test]
    fn probe_rejects_inadmissible() {
        assert!(matches!(
            closure_failure_probe(&printed(), &ThetaParams::new(0.0, 0.0, 0.0)),
            Err(Error::NotAdmissible { .. })
        ));
    }

    #[test]
    fn hundred_random_pairs_all_fail() {
        let s = closure_sweep(100, 3);
        assert_eq!((s.failures, s.exceptions), (100, 0));
    }

    #[test]
    fn zero_iterations_returns_initial_penalty() {
        let cfg = SearchConfig::new(11, 0, 0.3, 1).unwrap();
        let out = third_basis_search(&cfg).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        rng.set_stream(0);
        let initial = random_unitary2(&mut rng);
        assert_eq!(out.best_candidate, initial);
        assert_eq!(out.best_cost, third_basis_penalty(&initial).unwrap());
        assert_eq!(out.iterations_used, 0);
    }

    #[test]
    fn identical_seeds_identical_outcomes() {
        let cfg = SearchConfig::new(5, 150, 0.3, 2).unwrap();
        assert_eq!(third_basis_search(&cfg).unwrap(), third_basis_search(&cfg).unwrap());
    }

    #[test]
    fn self_overlap_penalty() {
        let a = printed().matrix();
        let fam = meb_from_left_unitary(&a, 3).unwrap();
        let got = penalty_against(&fam, &[catalog::eq17()]);
        // six unit overlaps and thirty zero overlaps against the target 1/√6
        let t = 1.0 / 6f64.sqrt();
        let expected = 6.0 * (1.0 - t) * (1.0 - t) + 30.0 * t * t;
        assert!((got - expected).abs() < 1e-12, "{got} vs {expected}");
        // against eq16 the partner is unbiased
        assert!(penalty_against(&fam, &[catalog::eq16()]) < 1e-28);
    }

    #[test]
    fn trace_is_monotone() {
        let cfg = SearchConfig::new(9, 300, 0.5, 1).unwrap();
        let r = search_restart(&cfg, 0).unwrap();
        assert!(r.trace.windows(2).all(|w| w[1] <= w[0]));
        assert_eq!(*r.trace.last().unwrap(), r.best_cost);
    }

    #[test]
    fn config_validation() {
        assert!(SearchConfig::new(0, 10, 0.0, 1).is_err());
        assert!(SearchConfig::new(0, 10, 0.1, 0).is_err());
    }

    #[test]
    fn reunitarize_yields_unitary() {
        let m = ComplexMatrix::new(
            2,
            2,
            vec![C64::new(1.0, 0.2), C64::new(0.3, -0.1), C64::new(-0.4, 0.5), C64::new(0.9, 0.0)],
        )
        .unwrap();
        let u = reunitarize(&m);
        assert!(crate::matspace::is_unitary(&u, &VerifyConfig::default()).unwrap());
    }

    proptest! {
        #[test]
        fn penalty_ignores_global_phase(seed in 0u64..1000, phase in 0.0f64..TAU) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let w = random_unitary2(&mut rng);
            let p0 = third_basis_penalty(&w).unwrap();
            let p1 = third_basis_penalty(&w.scale(C64::from_polar(1.0, phase))).unwrap();
            prop_assert!((p0 - p1).abs() < 1e-12);
        }

        #[test]
        fn completed_angles_give_unbiased_pairs(t1 in 0.0f64..TAU, t2 in 0.0f64..TAU) {
            let theta = ThetaParams::completed(t1, t2);
            let (phi, psi) = c23_partner(&theta).unwrap();
            let set = FamilySet::new(vec![phi, psi]).unwrap();
            prop_assert!(check_museb_set(&set, &VerifyConfig::default()).passed);
        }
    }
}

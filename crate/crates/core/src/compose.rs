//! Kronecker composition of family sets and the witness recipes built on it.
//!
//! Composing `t1` MUSEBk1s of `(d, d')` with `t2` MUSEBk2s of `(p, q)` pairs
//! family `i` with family `i` and yields `min(t1, t2)` MUSEB(k1·k2)s of
//! `(d·p, d'·q)`; overlaps multiply, so unbiasedness carries over.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::construct::{catalog, mub_composite, mumeb_qubit, weyl_meb, IntFactorization};
use crate::error::{Error, Result};
use crate::matspace::{kron, ComplexMatrix};
use crate::verify::{check_museb_set, BasisFamily, FamilySet, VerifyConfig};

/// `{kron(A, C)}` over `A ∈ s`, `C ∈ t`, `s` index outer.
pub fn tensor_family(s: &BasisFamily, t: &BasisFamily) -> BasisFamily {
    let mut elements = Vec::with_capacity(s.len() * t.len());
    for a in s.elements() {
        for c in t.elements() {
            elements.push(kron(a, c));
        }
    }
    BasisFamily::new(
        s.d() * t.d(),
        s.dprime() * t.dprime(),
        s.k() * t.k(),
        elements,
        format!("{}⊗{}", s.label(), t.label()),
    )
    .expect("Kronecker products of well-formed families are well formed")
}

/// Pairs `s[i]` with `t[i]` for `i < min(|s|, |t|)`.
pub fn tensor_families(s: &FamilySet, t: &FamilySet) -> Result<FamilySet> {
    if s.is_empty() || t.is_empty() {
        return Err(Error::EmptyInput);
    }
    let families = s
        .families()
        .iter()
        .zip(t.families())
        .map(|(a, c)| tensor_family(a, c))
        .collect();
    FamilySet::new(families)
}

/// Transposes every element, swapping `(d, d')`.
pub fn transpose_family(s: &FamilySet) -> FamilySet {
    let families = s
        .families()
        .iter()
        .map(|f| {
            let elements = f.elements().iter().map(ComplexMatrix::transpose).collect();
            BasisFamily::new(f.dprime(), f.d(), f.k(), elements, format!("{}ᵀ", f.label()))
                .expect("transposition preserves well-formedness")
        })
        .collect();
    FamilySet::new(families).expect("transposition preserves shared dimensions")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Recipe {
    /// Best available sets for `(d, d')` and `(p, q)`, composed.
    Theorem3,
    /// `M_k(d, q·d') ≥ min(N(q), M_k(d, d'))`.
    Corollary1Right,
    /// `M_d(p·d, d') ≥ min(N(p), M_d(d, d'))`.
    Corollary1Left,
    /// Three MUMEBs in `C⁴ ⊗ C²⁴`.
    Example1,
    /// `{Tᵢᵀ ⊗ Sᵢ ⊗ Tᵢ}`: three MUSEB3s in `C⁶ ⊗ C⁶`.
    Example3,
    /// `M_{2d}(2d, 3qd) ≥ 2`.
    Cor21kMumeb,
    /// `M_2(3, 2k) ≥ 2`.
    Cor21kSeb2,
    /// `{R1 ⊗ S1, R2 ⊗ S2}` in `C⁶ ⊗ C⁹`.
    M69,
}

impl Recipe {
    pub const ALL: [Recipe; 8] = [
        Recipe::Theorem3,
        Recipe::Corollary1Right,
        Recipe::Corollary1Left,
        Recipe::Example1,
        Recipe::Example3,
        Recipe::Cor21kMumeb,
        Recipe::Cor21kSeb2,
        Recipe::M69,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Recipe::Theorem3 => "theorem3",
            Recipe::Corollary1Right => "corollary1_right",
            Recipe::Corollary1Left => "corollary1_left",
            Recipe::Example1 => "example1",
            Recipe::Example3 => "example3",
            Recipe::Cor21kMumeb => "cor21k_mumeb",
            Recipe::Cor21kSeb2 => "cor21k_seb2",
            Recipe::M69 => "m69",
        }
    }

    /// Integer parameters the recipe reads.
    pub fn parameters(self) -> &'static [&'static str] {
        match self {
            Recipe::Theorem3 => &["d", "dprime", "p", "q"],
            Recipe::Corollary1Right => &["d", "dprime", "q"],
            Recipe::Corollary1Left => &["p", "d", "dprime"],
            Recipe::Cor21kMumeb => &["d", "q"],
            Recipe::Cor21kSeb2 => &["k"],
            Recipe::Example1 | Recipe::Example3 | Recipe::M69 => &[],
        }
    }
}

impl fmt::Display for Recipe {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Recipe {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Recipe::ALL
            .into_iter()
            .find(|r| r.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::UnknownName(s.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RecipeSpec {
    pub recipe: Recipe,
    pub params: BTreeMap<String, usize>,
}

impl RecipeSpec {
    pub fn new(recipe: Recipe) -> Self {
        Self {
            recipe,
            params: BTreeMap::new(),
        }
    }

    pub fn with(mut self, key: &str, value: usize) -> Self {
        self.params.insert(key.to_string(), value);
        self
    }

    /// All declared parameters present and positive, no unknown ones.
    pub fn validate(&self) -> Result<()> {
        let wanted = self.recipe.parameters();
        for key in self.params.keys() {
            if !wanted.contains(&key.as_str()) {
                return Err(Error::InvalidParameter(format!(
                    "recipe {} takes no parameter {key:?}",
                    self.recipe
                )));
            }
        }
        for key in wanted {
            match self.params.get(*key) {
                None => {
                    return Err(Error::InvalidParameter(format!(
                        "recipe {} needs parameter {key:?}",
                        self.recipe
                    )))
                }
                Some(0) => return Err(Error::InvalidParameter(format!("parameter {key:?} must be positive"))),
                Some(_) => {}
            }
        }
        Ok(())
    }

    fn get(&self, key: &str) -> usize {
        self.params[key]
    }
}

/// A witness supply: either a verified family set or the trivial `1×1` basis,
/// which is unbiased with itself and so supplies any number of copies.
enum Supply {
    Trivial,
    Set(FamilySet),
}

impl Supply {
    fn tensor(self, rhs: Supply) -> Result<Supply> {
        Ok(match (self, rhs) {
            (Supply::Trivial, x) | (x, Supply::Trivial) => x,
            (Supply::Set(a), Supply::Set(b)) => Supply::Set(tensor_families(&a, &b)?),
        })
    }

    fn transpose(self) -> Supply {
        match self {
            Supply::Trivial => Supply::Trivial,
            Supply::Set(s) => Supply::Set(transpose_family(&s)),
        }
    }

    fn into_set(self, recipe: Recipe) -> Result<FamilySet> {
        match self {
            Supply::Set(s) => Ok(s),
            Supply::Trivial => Err(Error::InvalidParameter(format!(
                "recipe {recipe} degenerates to the 1x1 space"
            ))),
        }
    }
}

fn unsupported(recipe: Recipe, missing: impl Into<String>) -> Error {
    Error::UnsupportedParameters {
        recipe: recipe.name().to_string(),
        missing: missing.into(),
    }
}

/// MUBs of `C^q` as `1×q` families.
fn mubs(q: usize) -> Result<Supply> {
    if q == 1 {
        Ok(Supply::Trivial)
    } else {
        Ok(Supply::Set(mub_composite(q)?))
    }
}

/// MUMEBs of `C^d ⊗ C^d` from the qubit triple and the printed qutrit triple.
fn square_mumebs(recipe: Recipe, d: usize) -> Result<Supply> {
    if d == 1 {
        return Ok(Supply::Trivial);
    }
    let mut acc = Supply::Trivial;
    for p in IntFactorization::new(d)?.primes() {
        let factor = match p {
            2 => mumeb_qubit(),
            3 => catalog::s_set(),
            _ => {
                return Err(unsupported(
                    recipe,
                    format!("MUMEBs in C^{p}⊗C^{p} (prime {p} ≥ 5 needs an external construction)"),
                ))
            }
        };
        acc = acc.tensor(Supply::Set(factor))?;
    }
    Ok(acc)
}

/// Largest witness set this crate can assemble for MEBs of `(d, d')`.
fn known_mumebs(recipe: Recipe, d: usize, dprime: usize) -> Result<Supply> {
    if d > dprime {
        return Ok(known_mumebs(recipe, dprime, d)?.transpose());
    }
    if d == 1 {
        return mubs(dprime);
    }
    if (d, dprime) == (2, 3) {
        return Ok(Supply::Set(catalog::r_set()));
    }
    if dprime.is_multiple_of(d) {
        if let Ok(square) = square_mumebs(recipe, d) {
            return square.tensor(mubs(dprime / d)?);
        }
    }
    Ok(Supply::Set(FamilySet::new(alloc::vec![weyl_meb(d, dprime)?])?))
}

fn preverified(recipe: Recipe, what: &str, supply: Supply, cfg: &VerifyConfig) -> Result<Supply> {
    if let Supply::Set(set) = &supply {
        let report = check_museb_set(set, cfg);
        if !report.passed {
            return Err(Error::VerificationFailed {
                what: format!("{recipe}: {what}"),
                worst: report.worst_violation,
            });
        }
    }
    Ok(supply)
}

/// Assembles the witness set named by `spec`. Every input set is verified
/// with [`check_museb_set`] before composition.
pub fn run_recipe(spec: &RecipeSpec) -> Result<FamilySet> {
    run_recipe_with(spec, &VerifyConfig::default())
}

pub fn run_recipe_with(spec: &RecipeSpec, cfg: &VerifyConfig) -> Result<FamilySet> {
    spec.validate()?;
    let recipe = spec.recipe;
    let check = |what: &str, s: Supply| preverified(recipe, what, s, cfg);
    let set = |s: FamilySet| Supply::Set(s);

    let out = match recipe {
        Recipe::Theorem3 => {
            let left = check("(d, d') input", known_mumebs(recipe, spec.get("d"), spec.get("dprime"))?)?;
            let right = check("(p, q) input", known_mumebs(recipe, spec.get("p"), spec.get("q"))?)?;
            left.tensor(right)?
        }
        Recipe::Corollary1Right => {
            let left = check("(d, d') input", known_mumebs(recipe, spec.get("d"), spec.get("dprime"))?)?;
            let right = check("MUBs of C^q", mubs(spec.get("q"))?)?;
            left.tensor(right)?
        }
        Recipe::Corollary1Left => {
            let left = check("MUBs of C^p", mubs(spec.get("p"))?)?.transpose();
            let right = check("(d, d') input", known_mumebs(recipe, spec.get("d"), spec.get("dprime"))?)?;
            left.tensor(right)?
        }
        Recipe::Example1 => {
            let a = check("MUMEBs of C²⊗C⁴", known_mumebs(recipe, 2, 4)?)?;
            let b = check("MUMEBs of C²⊗C⁶", known_mumebs(recipe, 2, 6)?)?;
            a.tensor(b)?
        }
        Recipe::Example3 => {
            let t = check("T1..T3", set(catalog::t_set()))?;
            let s = check("S1..S3", set(catalog::s_set()))?;
            let tt = check("T1..T3", set(catalog::t_set()))?.transpose();
            tt.tensor(s)?.tensor(t)?
        }
        Recipe::Cor21kMumeb => {
            let (d, q) = (spec.get("d"), spec.get("q"));
            let r = check("R1, R2", set(catalog::r_set()))?;
            let square = check("MUMEBs of C^d⊗C^d", square_mumebs(recipe, d)?)?;
            let inner = square.tensor(check("MUBs of C^q", mubs(q)?)?)?;
            r.tensor(inner)?
        }
        Recipe::Cor21kSeb2 => {
            let r = check("R1, R2", set(catalog::r_set()))?.transpose();
            r.tensor(check("MUBs of C^k", mubs(spec.get("k"))?)?)?
        }
        Recipe::M69 => {
            let r = check("R1, R2", set(catalog::r_set()))?;
            let s = check("S1, S2", set(catalog::s_set().truncated(2)))?;
            r.tensor(s)?
        }
    };
    out.into_set(recipe)
}

//! Declarations of free vertex superalgebras: βγ, bc and Heisenberg generators
//! together with their scalar contraction table.

use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GenKind {
    Beta,
    Gamma,
    B,
    C,
    Heis,
}

impl GenKind {
    pub fn prefix(self) -> &'static str {
        match self {
            GenKind::Beta => "beta",
            GenKind::Gamma => "gamma",
            GenKind::B => "b",
            GenKind::C => "c",
            GenKind::Heis => "j",
        }
    }

    pub fn is_odd(self) -> bool {
        matches!(self, GenKind::B | GenKind::C)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Generator {
    pub name: String,
    pub kind: GenKind,
    /// 0-based index of the pair (or Heisenberg field) this generator belongs to.
    pub pair: usize,
}

impl Generator {
    pub fn is_odd(&self) -> bool {
        self.kind.is_odd()
    }

    /// Twice the internal α* = 1/2 weight: 1 for β, γ, b, c and 2 for j.
    pub fn twice_weight(&self) -> i64 {
        if self.kind == GenKind::Heis {
            2
        } else {
            1
        }
    }
}

/// A free vertex superalgebra with `bg_pairs` βγ pairs, `bc_pairs` bc pairs and
/// one Heisenberg field per entry of `heis_levels`.
///
/// Generators are ordered betas, gammas, b's, c's, j's; that order is the
/// canonical factor order of monomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FreeAlgebraSpec {
    bg_pairs: usize,
    bc_pairs: usize,
    heis_levels: Vec<Scalar>,
    generators: Vec<Generator>,
    /// (i, j) → [(k, a_i ∘_k a_j)], nonzero entries only.
    contractions: BTreeMap<(usize, usize), Vec<(u32, Scalar)>>,
}

pub type Algebra = Arc<FreeAlgebraSpec>;

impl FreeAlgebraSpec {
    pub fn new(bg_pairs: usize, bc_pairs: usize, heis_levels: Vec<Scalar>) -> Self {
        let mut generators = Vec::new();
        let mut push = |kind: GenKind, count: usize| {
            for pair in 0..count {
                generators.push(Generator { name: format!("{}{}", kind.prefix(), pair + 1), kind, pair });
            }
        };
        push(GenKind::Beta, bg_pairs);
        push(GenKind::Gamma, bg_pairs);
        push(GenKind::B, bc_pairs);
        push(GenKind::C, bc_pairs);
        push(GenKind::Heis, heis_levels.len());

        let mut spec = FreeAlgebraSpec {
            bg_pairs,
            bc_pairs,
            heis_levels,
            generators,
            contractions: BTreeMap::new(),
        };
        for i in 0..bg_pairs {
            let (b, g) = (spec.beta(i), spec.gamma(i));
            spec.contractions.insert((b, g), vec![(0, Scalar::one())]);
            spec.contractions.insert((g, b), vec![(0, -Scalar::one())]);
        }
        for i in 0..bc_pairs {
            let (b, c) = (spec.b(i), spec.c(i));
            spec.contractions.insert((b, c), vec![(0, Scalar::one())]);
            spec.contractions.insert((c, b), vec![(0, Scalar::one())]);
        }
        for i in 0..spec.heis_levels.len() {
            let j = spec.heis(i);
            let level = spec.heis_levels[i].clone();
            if !level.is_zero() {
                spec.contractions.insert((j, j), vec![(1, level)]);
            }
        }
        spec
    }

    pub fn shared(self) -> Algebra {
        Arc::new(self)
    }

    /// `n` βγ pairs and nothing else.
    pub fn beta_gamma(n: usize) -> Algebra {
        FreeAlgebraSpec::new(n, 0, vec![]).shared()
    }

    pub fn bc(p: usize) -> Algebra {
        FreeAlgebraSpec::new(0, p, vec![]).shared()
    }

    pub fn heisenberg(levels: Vec<Scalar>) -> Algebra {
        FreeAlgebraSpec::new(0, 0, levels).shared()
    }

    pub fn bg_pairs(&self) -> usize {
        self.bg_pairs
    }

    pub fn bc_pairs(&self) -> usize {
        self.bc_pairs
    }

    pub fn heis_levels(&self) -> &[Scalar] {
        &self.heis_levels
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn generator(&self, i: usize) -> &Generator {
        &self.generators[i]
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_pure_beta_gamma(&self) -> bool {
        self.bc_pairs == 0 && self.heis_levels.is_empty()
    }

    pub fn beta(&self, i: usize) -> usize {
        assert!(i < self.bg_pairs, "beta index out of range");
        i
    }

    pub fn gamma(&self, i: usize) -> usize {
        assert!(i < self.bg_pairs, "gamma index out of range");
        self.bg_pairs + i
    }

    pub fn b(&self, i: usize) -> usize {
        assert!(i < self.bc_pairs, "b index out of range");
        2 * self.bg_pairs + i
    }

    pub fn c(&self, i: usize) -> usize {
        assert!(i < self.bc_pairs, "c index out of range");
        2 * self.bg_pairs + self.bc_pairs + i
    }

    pub fn heis(&self, i: usize) -> usize {
        assert!(i < self.heis_levels.len(), "heisenberg index out of range");
        2 * self.bg_pairs + 2 * self.bc_pairs + i
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.generators.iter().position(|g| g.name == name)
    }

    /// `a_i ∘_k a_j` as a multiple of the vacuum.
    pub fn contraction(&self, i: usize, j: usize, k: u32) -> Scalar {
        self.contractions
            .get(&(i, j))
            .and_then(|v| v.iter().find(|(kk, _)| *kk == k))
            .map(|(_, s)| s.clone())
            .unwrap_or_default()
    }

    pub fn contractions(&self, i: usize, j: usize) -> &[(u32, Scalar)] {
        self.contractions.get(&(i, j)).map(Vec::as_slice).unwrap_or(&[])
    }

    /// Checks `a∘_k b = (−1)^{|a||b|} (−1)^{k+1} b∘_k a` on the whole table
    /// (the scalar case of skew symmetry).
    pub fn check_skew_symmetry(&self) -> bool {
        (0..self.len()).all(|i| {
            (0..self.len()).all(|j| {
                let sign = if self.generators[i].is_odd() && self.generators[j].is_odd() { -1 } else { 1 };
                self.contractions(i, j).iter().chain(self.contractions(j, i)).all(|(k, _)| {
                    let ksign = if (k + 1) % 2 == 0 { 1 } else { -1 };
                    self.contraction(i, j, *k) == &Scalar::from_int(sign * ksign) * &self.contraction(j, i, *k)
                })
            })
        })
    }

    pub fn from_json(text: &str) -> Result<Algebra> {
        let file: AlgebraFile = serde_json::from_str(text)?;
        Ok(file.into_spec().shared())
    }

    pub fn from_path(path: &Path) -> Result<Algebra> {
        FreeAlgebraSpec::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&AlgebraFile {
            bg_pairs: self.bg_pairs,
            bc_pairs: self.bc_pairs,
            heisenberg_levels: self.heis_levels.clone(),
        })
        .expect("algebra serialization")
    }

    pub(crate) fn check_same(&self, other: &FreeAlgebraSpec) -> Result<()> {
        if std::ptr::eq(self, other) || self == other {
            Ok(())
        } else {
            Err(Error::MismatchedAlgebras)
        }
    }
}

/// On-disk algebra declaration.
#[derive(Debug, Serialize, Deserialize)]
pub struct AlgebraFile {
    #[serde(default)]
    pub bg_pairs: usize,
    #[serde(default)]
    pub bc_pairs: usize,
    #[serde(default)]
    pub heisenberg_levels: Vec<Scalar>,
}

impl AlgebraFile {
    pub fn into_spec(self) -> FreeAlgebraSpec {
        FreeAlgebraSpec::new(self.bg_pairs, self.bc_pairs, self.heisenberg_levels)
    }
}

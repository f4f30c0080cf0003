//! Canonical states: Q(√6)-linear combinations of normally ordered monomials
//! in derivatives of the free generators.
//!
//! A monomial with factors `(a₁,k₁), …, (a_r,k_r)` (sorted, with multiplicity)
//! stands for the right-nested Wick product `:∂^{k₁}a₁(:∂^{k₂}a₂(⋯):):`,
//! which equals `∏ kᵢ! · a₁(−k₁−1)⋯a_r(−k_r−1)|0⟩`. Creation modes of free
//! fields supercommute, so the sorted word is well defined up to the Koszul
//! sign applied by [`State::normalize`].

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::algebra::{Algebra, FreeAlgebraSpec, GenKind};
use crate::error::{Error, Result};
use crate::scalar::{factorial, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Factor {
    pub gen: usize,
    pub deriv: u32,
    pub mult: u32,
}

/// Sorted factor list; the empty monomial is the vacuum.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<Factor>);

impl Ord for Monomial {
    /// Higher degree first, then lexicographic on factors.
    fn cmp(&self, other: &Self) -> Ordering {
        other.degree().cmp(&self.degree()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Monomial {
    pub fn vacuum() -> Self {
        Monomial(Vec::new())
    }

    /// Builds a monomial from factors that are already sorted and merged.
    pub(crate) fn from_sorted(factors: Vec<Factor>) -> Self {
        debug_assert!(factors.windows(2).all(|w| (w[0].gen, w[0].deriv) < (w[1].gen, w[1].deriv)));
        Monomial(factors)
    }

    pub fn factors(&self) -> &[Factor] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|f| f.mult).sum()
    }

    pub fn level(&self) -> u32 {
        self.0.iter().map(|f| f.deriv * f.mult).sum()
    }

    /// Factors expanded by multiplicity, in canonical order.
    pub fn expanded(&self) -> impl Iterator<Item = (usize, u32)> + '_ {
        self.0.iter().flat_map(|f| std::iter::repeat_n((f.gen, f.deriv), f.mult as usize))
    }

    /// `∏ (kᵢ!)^{multᵢ}`: the ratio between the monomial and its bare mode word.
    pub fn factorial_weight(&self) -> BigInt {
        self.0
            .iter()
            .filter(|f| f.deriv > 1)
            .fold(BigInt::one(), |acc, f| acc * factorial(f.deriv).pow(f.mult))
    }

    pub fn is_odd(&self, alg: &FreeAlgebraSpec) -> bool {
        self.0.iter().filter(|f| alg.generator(f.gen).is_odd()).map(|f| f.mult).sum::<u32>() % 2 == 1
    }

    /// Twice the α*-weight (β, γ, b, c weigh 1/2 and j weighs 1).
    pub fn twice_weight(&self, alg: &FreeAlgebraSpec) -> i64 {
        self.0
            .iter()
            .map(|f| (alg.generator(f.gen).twice_weight() + 2 * f.deriv as i64) * f.mult as i64)
            .sum()
    }

    fn grade(&self, alg: &FreeAlgebraSpec, which: &Grading) -> Scalar {
        let mut total = Scalar::zero();
        for f in &self.0 {
            let g = alg.generator(f.gen);
            let unit = match which {
                Grading::Degree => Scalar::one(),
                Grading::Level => Scalar::from_int(f.deriv as i64),
                Grading::BgCharge => match g.kind {
                    GenKind::Beta => Scalar::from_int(-1),
                    GenKind::Gamma => Scalar::one(),
                    _ => Scalar::zero(),
                },
                Grading::BcCharge => match g.kind {
                    GenKind::B => Scalar::from_int(-1),
                    GenKind::C => Scalar::one(),
                    _ => Scalar::zero(),
                },
                Grading::Weight(alpha) => {
                    let base = match g.kind {
                        GenKind::Beta => alpha[g.pair].clone(),
                        GenKind::Gamma => Scalar::one() - &alpha[g.pair],
                        GenKind::B => alpha[alg.bg_pairs() + g.pair].clone(),
                        GenKind::C => Scalar::one() - &alpha[alg.bg_pairs() + g.pair],
                        GenKind::Heis => Scalar::one(),
                    };
                    base + Scalar::from_int(f.deriv as i64)
                }
            };
            total += &(&unit * &Scalar::from_int(f.mult as i64));
        }
        total
    }
}

/// The gradings a state can be tested against.
#[derive(Clone, Debug, PartialEq)]
pub enum Grading {
    /// Conformal weight for α over the βγ pairs followed by the bc pairs.
    Weight(Vec<Scalar>),
    BgCharge,
    BcCharge,
    /// Number of generator factors.
    Degree,
    /// Total derivative order.
    Level,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Grade {
    /// The zero state is homogeneous of every grade.
    Zero,
    Homogeneous(Scalar),
    Inhomogeneous,
}

impl Grade {
    pub fn value(&self) -> Option<&Scalar> {
        match self {
            Grade::Homogeneous(s) => Some(s),
            _ => None,
        }
    }
}

#[derive(Clone, PartialEq, Eq)]
pub struct State {
    alg: Algebra,
    terms: BTreeMap<Monomial, Scalar>,
}

impl std::fmt::Debug for State {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "State({})", self)
    }
}

impl State {
    pub fn zero(alg: &Algebra) -> Self {
        State { alg: alg.clone(), terms: BTreeMap::new() }
    }

    pub fn vacuum(alg: &Algebra) -> Self {
        State::scalar(alg, Scalar::one())
    }

    pub fn scalar(alg: &Algebra, c: Scalar) -> Self {
        State::monomial(alg, Monomial::vacuum(), c)
    }

    pub fn monomial(alg: &Algebra, m: Monomial, c: Scalar) -> Self {
        let mut s = State::zero(alg);
        s.add_term(m, c);
        s
    }

    /// The generator `a` itself.
    pub fn generator(alg: &Algebra, gen: usize) -> Self {
        State::derivative_of_generator(alg, gen, 0)
    }

    /// `∂^k a` as a single-factor monomial.
    pub fn derivative_of_generator(alg: &Algebra, gen: usize, k: u32) -> Self {
        assert!(gen < alg.len(), "generator index out of range");
        State::monomial(alg, Monomial(vec![Factor { gen, deriv: k, mult: 1 }]), Scalar::one())
    }

    /// Builds a state from factor sequences `(generator, derivative order)` in
    /// arbitrary order, reordering into canonical form with the Koszul sign.
    /// A repeated odd factor annihilates its term.
    pub fn normalize(alg: &Algebra, raw: Vec<(Vec<(usize, u32)>, Scalar)>) -> Result<State> {
        let mut out = State::zero(alg);
        for (mut factors, coeff) in raw {
            if let Some(&(g, _)) = factors.iter().find(|(g, _)| *g >= alg.len()) {
                return Err(Error::IndexOutOfRange { what: "generator", index: g, len: alg.len() });
            }
            // insertion sort tracking transpositions of odd factors
            let mut odd_swaps = 0usize;
            for i in 1..factors.len() {
                let mut j = i;
                while j > 0 && factors[j - 1] > factors[j] {
                    if alg.generator(factors[j - 1].0).is_odd() && alg.generator(factors[j].0).is_odd() {
                        odd_swaps += 1;
                    }
                    factors.swap(j - 1, j);
                    j -= 1;
                }
            }
            let mut merged: Vec<Factor> = Vec::new();
            let mut dead = false;
            for (gen, deriv) in factors {
                match merged.last_mut() {
                    Some(f) if f.gen == gen && f.deriv == deriv => {
                        if alg.generator(gen).is_odd() {
                            dead = true;
                            break;
                        }
                        f.mult += 1;
                    }
                    _ => merged.push(Factor { gen, deriv, mult: 1 }),
                }
            }
            if dead {
                continue;
            }
            let c = if odd_swaps % 2 == 1 { -coeff } else { coeff };
            out.add_term(Monomial(merged), c);
        }
        Ok(out)
    }

    /// Same as [`State::normalize`] for a single product of factors.
    pub fn product_of(alg: &Algebra, factors: &[(usize, u32)]) -> State {
        State::normalize(alg, vec![(factors.to_vec(), Scalar::one())]).expect("valid generator indices")
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Scalar> {
        &self.terms
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// The coefficient of the vacuum if the state is a scalar multiple of it.
    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::vacuum()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, m: Monomial, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(m) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                *e.get_mut() += &c;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub(crate) fn from_terms(alg: &Algebra, terms: BTreeMap<Monomial, Scalar>) -> State {
        debug_assert!(terms.values().all(|c| !c.is_zero()));
        State { alg: alg.clone(), terms }
    }

    pub fn scale(&self, c: &Scalar) -> State {
        if c.is_zero() {
            return State::zero(&self.alg);
        }
        State {
            alg: self.alg.clone(),
            terms: self.terms.iter().map(|(m, x)| (m.clone(), x * c)).collect(),
        }
    }

    pub fn checked_add(&self, other: &State) -> Result<State> {
        self.alg.check_same(&other.alg)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(m.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn same_algebra(&self, other: &State) -> bool {
        self.alg.check_same(&other.alg).is_ok()
    }

    /// Translation operator ∂, by the Leibniz rule over Wick factors.
    pub fn derive(&self) -> State {
        let mut out = State::zero(&self.alg);
        for (m, c) in &self.terms {
            for (idx, f) in m.0.iter().enumerate() {
                // replace one copy of ∂^k a by ∂^{k+1} a
                let mut raw: Vec<(usize, u32)> = Vec::with_capacity(m.degree() as usize);
                for (jdx, g) in m.0.iter().enumerate() {
                    let copies = if jdx == idx { g.mult - 1 } else { g.mult };
                    for _ in 0..copies {
                        raw.push((g.gen, g.deriv));
                    }
                    if jdx == idx {
                        raw.push((g.gen, g.deriv + 1));
                    }
                }
                let piece = State::normalize(&self.alg, vec![(raw, c * &Scalar::from_int(f.mult as i64))])
                    .expect("indices come from a valid state");
                for (pm, pc) in piece.terms {
                    out.add_term(pm, pc);
                }
            }
        }
        out
    }

    /// `∂^k u`.
    pub fn derive_n(&self, k: u32) -> State {
        (0..k).fold(self.clone(), |acc, _| acc.derive())
    }

    pub fn grading(&self, which: &Grading) -> Grade {
        if let Grading::Weight(alpha) = which {
            assert_eq!(
                alpha.len(),
                self.alg.bg_pairs() + self.alg.bc_pairs(),
                "weight vector must cover every βγ and bc pair"
            );
        }
        let mut grades = self.terms.keys().map(|m| m.grade(&self.alg, which));
        let Some(first) = grades.next() else {
            return Grade::Zero;
        };
        if grades.all(|g| g == first) {
            Grade::Homogeneous(first)
        } else {
            Grade::Inhomogeneous
        }
    }

    /// Largest twice-α*-weight among the terms (0 for the zero state).
    pub fn max_twice_weight(&self) -> i64 {
        self.terms.keys().map(|m| m.twice_weight(&self.alg)).max().unwrap_or(0)
    }

    /// Twice the α*-weight if homogeneous.
    pub fn twice_weight(&self) -> Option<i64> {
        let mut it = self.terms.keys().map(|m| m.twice_weight(&self.alg));
        let first = it.next()?;
        it.all(|w| w == first).then_some(first)
    }

    /// Parity if homogeneous (`true` = odd).
    pub fn parity(&self) -> Option<bool> {
        let mut it = self.terms.keys().map(|m| m.is_odd(&self.alg));
        let first = it.next().unwrap_or(false);
        it.all(|p| p == first).then_some(first)
    }

    pub fn max_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// Keeps only the terms accepted by `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&Monomial) -> bool) -> State {
        State {
            alg: self.alg.clone(),
            terms: self.terms.iter().filter(|(m, _)| keep(m)).map(|(m, c)| (m.clone(), c.clone())).collect(),
        }
    }
}

/// `{"text": …, "terms": [{"monomial": [{"gen", "deriv", "mult"}], "coeff"}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateJson {
    #[serde(default)]
    pub text: String,
    pub terms: Vec<StateTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateTermJson {
    pub monomial: Vec<FactorJson>,
    pub coeff: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FactorJson {
    pub gen: String,
    pub deriv: u32,
    pub mult: u32,
}

impl State {
    pub fn to_json_value(&self) -> StateJson {
        let terms = self
            .terms
            .iter()
            .map(|(m, c)| StateTermJson {
                monomial: m
                    .factors()
                    .iter()
                    .map(|f| FactorJson { gen: self.alg.generator(f.gen).name.clone(), deriv: f.deriv, mult: f.mult })
                    .collect(),
                coeff: c.clone(),
            })
            .collect();
        StateJson { text: self.to_string(), terms }
    }

    /// Reads the term list; `text` is informational and ignored.
    pub fn from_json_value(v: &StateJson, alg: &Algebra) -> Result<State> {
        let mut raw = Vec::new();
        for t in &v.terms {
            let mut word = Vec::new();
            for f in &t.monomial {
                let gen = alg
                    .index_of(&f.gen)
                    .ok_or_else(|| Error::InvalidInput(format!("unknown generator '{}'", f.gen)))?;
                word.extend(std::iter::repeat_n((gen, f.deriv), f.mult as usize));
            }
            raw.push((word, t.coeff.clone()));
        }
        State::normalize(alg, raw)
    }
}

impl Add for &State {
    type Output = State;
    /// Panics if the states live in different algebras; use
    /// [`State::checked_add`] to get an error instead.
    fn add(self, rhs: &State) -> State {
        self.checked_add(rhs).expect("adding states of different algebras")
    }
}

impl Add for State {
    type Output = State;
    fn add(self, rhs: State) -> State {
        &self + &rhs
    }
}

impl Sub for &State {
    type Output = State;
    fn sub(self, rhs: &State) -> State {
        self + &(-rhs)
    }
}

impl Sub for State {
    type Output = State;
    fn sub(self, rhs: State) -> State {
        &self - &rhs
    }
}

impl Neg for &State {
    type Output = State;
    fn neg(self) -> State {
        self.scale(&-Scalar::one())
    }
}

impl Neg for State {
    type Output = State;
    fn neg(self) -> State {
        -&self
    }
}

impl Mul<&State> for &Scalar {
    type Output = State;
    fn mul(self, rhs: &State) -> State {
        rhs.scale(self)
    }
}

impl Mul<State> for Scalar {
    type Output = State;
    fn mul(self, rhs: State) -> State {
        rhs.scale(&self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn half() -> Scalar {
        Scalar::from_ratio(1, 2)
    }

    #[test]
    fn normalize_reorders_even_factors() {
        let a = FreeAlgebraSpec::beta_gamma(1);
        let s = State::normalize(&a, vec![(vec![(1, 0), (0, 0)], Scalar::one())]).unwrap();
        let t = State::product_of(&a, &[(0, 0), (1, 0)]);
        assert_eq!(s, t);
        assert_eq!(t.terms().keys().next().unwrap().factors()[0].gen, 0);
    }

    #[test]
    fn odd_square_vanishes() {
        let a = FreeAlgebraSpec::bc(1);
        let s = State::normalize(&a, vec![(vec![(0, 0), (0, 0)], Scalar::one())]).unwrap();
        assert!(s.is_zero());
        // distinct derivative orders survive
        let s = State::normalize(&a, vec![(vec![(0, 0), (0, 1)], Scalar::one())]).unwrap();
        assert_eq!(s.len(), 1);
    }

    #[test]
    fn koszul_sign_on_reorder() {
        let a = FreeAlgebraSpec::bc(1);
        let cb = State::normalize(&a, vec![(vec![(1, 0), (0, 0)], Scalar::one())]).unwrap();
        let bc = State::product_of(&a, &[(0, 0), (1, 0)]);
        assert_eq!(cb, -&bc);
    }

    #[test]
    fn normalize_rejects_bad_index() {
        let a = FreeAlgebraSpec::beta_gamma(1);
        assert!(State::normalize(&a, vec![(vec![(5, 0)], Scalar::one())]).is_err());
    }

    #[test]
    fn normalize_is_idempotent() {
        let a = FreeAlgebraSpec::new(1, 1, vec![]).shared();
        let raw = vec![
            (vec![(3, 1), (1, 0), (2, 0), (0, 2)], Scalar::from_int(3)),
            (vec![(2, 0), (3, 0)], Scalar::one()),
        ];
        let once = State::normalize(&a, raw).unwrap();
        let again_raw: Vec<_> = once
            .terms()
            .iter()
            .map(|(m, c)| (m.expanded().collect::<Vec<_>>(), c.clone()))
            .collect();
        assert_eq!(State::normalize(&a, again_raw).unwrap(), once);
    }

    #[test]
    fn derivative_leibniz() {
        let a = FreeAlgebraSpec::beta_gamma(1);
        assert!(State::vacuum(&a).derive().is_zero());
        let d_beta = State::generator(&a, 0).derive();
        assert_eq!(d_beta, State::derivative_of_generator(&a, 0, 1));
        let bg = State::product_of(&a, &[(0, 0), (1, 0)]);
        let expected = State::product_of(&a, &[(0, 1), (1, 0)]) + State::product_of(&a, &[(0, 0), (1, 1)]);
        assert_eq!(bg.derive(), expected);
        // ∂(β²) = 2 :β ∂β:
        let bb = State::product_of(&a, &[(0, 0), (0, 0)]);
        assert_eq!(bb.derive(), State::product_of(&a, &[(0, 0), (0, 1)]).scale(&Scalar::from_int(2)));
    }

    #[test]
    fn odd_derivative_collision() {
        let a = FreeAlgebraSpec::bc(1);
        // ∂(:b ∂b:) = :b ∂²b: (the :∂b ∂b: term vanishes)
        let s = State::product_of(&a, &[(0, 0), (0, 1)]);
        assert_eq!(s.derive(), State::product_of(&a, &[(0, 0), (0, 2)]));
    }

    #[test]
    fn gradings() {
        let a = FreeAlgebraSpec::beta_gamma(1);
        let dbg = State::product_of(&a, &[(0, 1), (1, 0)]);
        assert_eq!(dbg.grading(&Grading::Weight(vec![half()])), Grade::Homogeneous(Scalar::from_int(2)));
        assert_eq!(State::generator(&a, 0).grading(&Grading::BgCharge), Grade::Homogeneous(Scalar::from_int(-1)));
        assert_eq!(dbg.grading(&Grading::Degree), Grade::Homogeneous(Scalar::from_int(2)));
        assert_eq!(dbg.grading(&Grading::Level), Grade::Homogeneous(Scalar::one()));
        let mixed = &dbg + &State::generator(&a, 0);
        assert_eq!(mixed.grading(&Grading::Degree), Grade::Inhomogeneous);
        assert_eq!(State::zero(&a).grading(&Grading::Level), Grade::Zero);
    }

    #[test]
    fn factorial_weight_counts_multiplicity() {
        let a = FreeAlgebraSpec::beta_gamma(1);
        let s = State::product_of(&a, &[(0, 2), (0, 2), (1, 3)]);
        let m = s.terms().keys().next().unwrap();
        assert_eq!(m.factorial_weight(), BigInt::from(2 * 2 * 6));
    }

    #[test]
    fn json_round_trip() {
        let alg = FreeAlgebraSpec::new(1, 1, vec![Scalar::one()]).shared();
        let s = &State::product_of(&alg, &[(alg.beta(0), 2), (alg.beta(0), 2), (alg.c(0), 0)]).scale(&Scalar::sqrt6())
            + &State::scalar(&alg, Scalar::from_ratio(-1, 3));
        let text = serde_json::to_string(&s.to_json_value()).unwrap();
        assert!(text.contains(r#""gen":"beta1","deriv":2,"mult":2"#));
        let back: StateJson = serde_json::from_str(&text).unwrap();
        assert_eq!(State::from_json_value(&back, &alg).unwrap(), s);
    }
}

//! Transvectants on `Sym(V⊕V*)` and the products `*_k` on level-zero states
//! and on the Weyl algebra.
//!
//! Polynomials use variables `x1…xn` (the β side) followed by `xp1…xpn`
//! (the γ side). With
//! `Γ = Σ_i ∂/∂x_i ⊗ ∂/∂xp_i − ∂/∂xp_i ⊗ ∂/∂x_i` the k-th transvectant is
//! `[p, q]_k = (1/k!) m∘Γ^k (p ⊗ q)`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::commutant::{omega_name, unit_contraction, UnitExtraction};
use crate::error::{Error, Result};
use crate::linalg::ActionMatrix;
use crate::ope::circle;
use crate::poly::Poly;
use crate::scalar::{factorial, Scalar};
use crate::state::{Factor, Monomial, State};
use crate::weyl::{classical_invariant, WeylElement};

/// Commutative polynomial in `x1…xn, xp1…xpn`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyElement {
    n: usize,
    poly: Poly,
}

impl PolyElement {
    pub fn zero(n: usize) -> Self {
        PolyElement { n, poly: Poly::zero(2 * n) }
    }

    pub fn from_poly(n: usize, poly: Poly) -> Result<Self> {
        if poly.nvars() != 2 * n {
            return Err(Error::InvalidInput(format!("polynomial has {} variables, expected {}", poly.nvars(), 2 * n)));
        }
        Ok(PolyElement { n, poly })
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        PolyElement { n, poly: Poly::constant(2 * n, c) }
    }

    /// `x_i` (0-based), the β-side variable.
    pub fn x(n: usize, i: usize) -> Self {
        PolyElement { n, poly: Poly::var(2 * n, i) }
    }

    /// `xp_i`, the γ-side variable.
    pub fn xp(n: usize, i: usize) -> Self {
        PolyElement { n, poly: Poly::var(2 * n, n + i) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn poly(&self) -> &Poly {
        &self.poly
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn degree(&self) -> Option<u32> {
        self.poly.degree()
    }

    pub fn scale(&self, c: &Scalar) -> Self {
        PolyElement { n: self.n, poly: self.poly.scale(c) }
    }

    pub fn add(&self, other: &PolyElement) -> Self {
        PolyElement { n: self.n, poly: &self.poly + &other.poly }
    }

    pub fn mul(&self, other: &PolyElement) -> Self {
        PolyElement { n: self.n, poly: &self.poly * &other.poly }
    }

    pub fn names(n: usize) -> Vec<String> {
        (1..=n).map(|i| format!("x{i}")).chain((1..=n).map(|i| format!("xp{i}"))).collect()
    }
}

/// `{"terms": [{"x": [..], "xp": [..], "coeff": ..}]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyJson {
    pub terms: Vec<PolyTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolyTermJson {
    pub x: Vec<u32>,
    pub xp: Vec<u32>,
    pub coeff: Scalar,
}

impl PolyElement {
    pub fn to_json_value(&self) -> PolyJson {
        let n = self.n;
        PolyJson {
            terms: self
                .poly
                .terms()
                .iter()
                .map(|(e, c)| PolyTermJson { x: e[..n].to_vec(), xp: e[n..].to_vec(), coeff: c.clone() })
                .collect(),
        }
    }

    pub fn from_json_value(v: &PolyJson, n: usize) -> Result<Self> {
        let mut poly = Poly::zero(2 * n);
        for t in &v.terms {
            if t.x.len() != n || t.xp.len() != n {
                return Err(Error::InvalidInput(format!("polynomial term has exponent vectors of length {}/{}, expected {n}", t.x.len(), t.xp.len())));
            }
            poly.add_term(t.x.iter().chain(&t.xp).copied().collect(), t.coeff.clone());
        }
        Ok(PolyElement { n, poly })
    }
}

impl fmt::Display for PolyElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.poly.display_with(&PolyElement::names(self.n)))
    }
}

/// `x′^K ∂^L ↦ xp^K x^L`.
pub fn sigma(w: &WeylElement) -> PolyElement {
    let n = w.n();
    let mut poly = Poly::zero(2 * n);
    for ((k, l), c) in w.terms() {
        let exps = l.iter().chain(k.iter()).copied().collect();
        poly.add_term(exps, c.clone());
    }
    PolyElement { n, poly }
}

pub fn sigma_inv(p: &PolyElement) -> WeylElement {
    let n = p.n;
    let mut w = WeylElement::zero(n);
    for (e, c) in p.poly.terms() {
        w.add_term((e[n..].to_vec(), e[..n].to_vec()), c.clone());
    }
    w
}

/// `x_i ↦ β_i`, `xp_i ↦ γ_i`, no derivatives.
pub fn fmap(p: &PolyElement, alg: &Algebra) -> Result<State> {
    if !alg.is_pure_beta_gamma() || alg.bg_pairs() != p.n {
        return Err(Error::InvalidInput(format!("target algebra must consist of exactly {} βγ pairs", p.n)));
    }
    let mut out = State::zero(alg);
    for (e, c) in p.poly.terms() {
        let factors: Vec<Factor> = e
            .iter()
            .enumerate()
            .filter(|(_, &m)| m > 0)
            .map(|(v, &mult)| Factor { gen: if v < p.n { alg.beta(v) } else { alg.gamma(v - p.n) }, deriv: 0, mult })
            .collect();
        out.add_term(Monomial::from_sorted(factors), c.clone());
    }
    Ok(out)
}

/// Inverse of [`fmap`] on level-zero states.
pub fn fmap_inv(u: &State) -> Result<PolyElement> {
    let alg = u.algebra();
    let n = alg.bg_pairs();
    let mut poly = Poly::zero(2 * n);
    for (m, c) in u.terms() {
        let mut e = vec![0u32; 2 * n];
        for f in m.factors() {
            if f.deriv != 0 {
                return Err(Error::InvalidInput("state has positive level".into()));
            }
            let g = alg.generator(f.gen);
            let slot = if f.gen == alg.beta(g.pair) { g.pair } else { n + g.pair };
            e[slot] += f.mult;
        }
        poly.add_term(e, c.clone());
    }
    Ok(PolyElement { n, poly })
}

/// Drops every monomial containing a derivative.
pub fn level_zero_projection(u: &State) -> State {
    u.filter(|m| m.level() == 0)
}

/// `u *_k v = p(u ∘_k v)` for level-zero states.
pub fn star_k(u: &State, v: &State, k: i64) -> Result<State> {
    if k < -1 {
        return Err(Error::InvalidInput(format!("star product index {k} below -1")));
    }
    if u.terms().keys().chain(v.terms().keys()).any(|m| m.level() > 0) {
        return Err(Error::InvalidInput("star products are defined on level-zero states".into()));
    }
    Ok(level_zero_projection(&circle(u, v, k)?))
}

/// `[p, q]_k = (1/k!) m∘Γ^k(p ⊗ q)`.
pub fn transvectant(p: &PolyElement, q: &PolyElement, k: u32) -> Result<PolyElement> {
    if p.n != q.n {
        return Err(Error::InvalidInput("transvectant of polynomials in different rings".into()));
    }
    let n = p.n;
    // Γ = Σ_t c_t D_t ⊗ E_t; the D_t ⊗ E_t commute, so
    // Γ^k / k! = Σ_{|μ|=k} ∏ c_t^{μ_t} / μ_t! · (∏ D_t^{μ_t}) ⊗ (∏ E_t^{μ_t})
    let parts: Vec<(usize, usize, bool)> =
        (0..n).flat_map(|i| [(i, n + i, false), (n + i, i, true)]).collect();
    let mut out = Poly::zero(2 * n);
    let mut mu = vec![0u32; parts.len()];
    compositions(k, 0, &mut mu, &mut |mu| {
        let mut left = p.poly.clone();
        let mut right = q.poly.clone();
        let mut coef = Scalar::one();
        for (t, &m) in mu.iter().enumerate() {
            let (dl, dr, neg) = parts[t];
            for _ in 0..m {
                left = left.partial(dl);
                right = right.partial(dr);
            }
            coef = &coef / &Scalar::from_bigint(factorial(m));
            if neg && m % 2 == 1 {
                coef = -coef;
            }
        }
        if !left.is_zero() && !right.is_zero() {
            out = &out + &(&left * &right).scale(&coef);
        }
    });
    Ok(PolyElement { n, poly: out })
}

fn compositions(k: u32, idx: usize, mu: &mut Vec<u32>, f: &mut impl FnMut(&[u32])) {
    if idx == mu.len() - 1 {
        mu[idx] = k;
        f(mu);
        mu[idx] = 0;
        return;
    }
    for m in 0..=k {
        mu[idx] = m;
        compositions(k - m, idx + 1, mu, f);
    }
    mu[idx] = 0;
}

/// `a *_k b = σ⁻¹[σa, σb]_{k+1}` on the Weyl algebra.
pub fn star_k_weyl(a: &WeylElement, b: &WeylElement, k: i64) -> Result<WeylElement> {
    if k < -1 {
        return Err(Error::InvalidInput(format!("star product index {k} below -1")));
    }
    Ok(sigma_inv(&transvectant(&sigma(a), &sigma(b), (k + 1) as u32)?))
}

/// Splits a Weyl element into `Σ (Euler monomial) · lattice part`, keyed by
/// the lattice vector `l = K − L` and the Euler exponents `min(K, L)`.
fn weyl_lattice_terms(w: &WeylElement) -> Vec<(Vec<i64>, Vec<u32>, Scalar)> {
    w.terms()
        .iter()
        .map(|((k, l), c)| {
            let lat = k.iter().zip(l).map(|(&a, &b)| a as i64 - b as i64).collect();
            let e = k.iter().zip(l).map(|(&a, &b)| a.min(b)).collect();
            (lat, e, c.clone())
        })
        .collect()
}

/// Strips Euler coefficients with `e_i *₁` and contracts the top lattice
/// term: returns `l`, `d` and `c` with `c·(ω_{−l} *_{d−1} ω') = 1`, where
/// `ω'` is `ω` after the reductions.
///
/// The Euler exponent vector that is lexicographically largest is stripped
/// one variable at a time, so exactly the terms sharing it survive.
pub fn star_extract_lattice_unit(w: &WeylElement) -> Result<UnitExtraction> {
    if w.is_zero() {
        return Err(Error::InvalidInput("cannot extract a unit from zero".into()));
    }
    let n = w.n();
    let top = weyl_lattice_terms(w).into_iter().map(|(_, e, _)| e).max().expect("nonzero");
    let mut cur = w.clone();
    for (i, &times) in top.iter().enumerate() {
        let e = WeylElement::euler(n, i);
        for _ in 0..times {
            cur = star_k_weyl(&e, &cur, 1)?;
        }
    }
    let terms = weyl_lattice_terms(&cur);
    if terms.iter().any(|(_, e, _)| e.iter().any(|&x| x > 0)) {
        return Err(Error::NoSolution("Euler reduction left Euler factors behind".into()));
    }
    let (l, _, c_l) = terms
        .into_iter()
        .max_by(|(a, _, _), (b, _, _)| deg(a).cmp(&deg(b)).then_with(|| a.cmp(b)))
        .ok_or_else(|| Error::NoSolution("Euler reduction annihilated the element".into()))?;
    let d = deg(&l);
    let neg: Vec<i64> = l.iter().map(|x| -x).collect();
    let contracted = star_k_weyl(&WeylElement::lattice(&neg), &cur, d as i64 - 1)?;
    let value = contracted
        .as_scalar()
        .filter(|v| !v.is_zero())
        .ok_or_else(|| Error::NoSolution(format!("contraction with {} gave {contracted}, not a nonzero constant", omega_name(&neg))))?;
    debug_assert_eq!(value, &c_l * &unit_contraction(&l));
    Ok(UnitExtraction { l, d, scale: value.inverse().expect("nonzero") })
}

/// [`star_extract_lattice_unit`] for elements invariant under the action.
pub fn star_extract_unit(act: &ActionMatrix, w: &WeylElement) -> Result<UnitExtraction> {
    if w.n() != act.n() {
        return Err(Error::InvalidInput(format!("element has rank {}, action has {} columns", w.n(), act.n())));
    }
    if !classical_invariant(w, act)? {
        return Err(Error::InvalidInput("element is not invariant under the action".into()));
    }
    star_extract_lattice_unit(w)
}

fn deg(l: &[i64]) -> u32 {
    l.iter().map(|x| x.unsigned_abs() as u32).sum()
}

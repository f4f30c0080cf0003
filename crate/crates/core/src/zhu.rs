//! The Zhu map from βγ states to the Weyl algebra and the cokernel probe
//! for the Euler subalgebra.
//!
//! Weights come from the conformal vector `L^α`: `wt β_i = α_i`,
//! `wt γ_i = 1 − α_i`, and `∂` raises weight by one. A monomial is peeled as
//! `:g v:` with `g = ∂^k a` its leading factor and
//!
//! ```text
//! [:g v:] = [g] * [v] − Σ_{j≥1} C(wt g, j) [g ∘_{j−1} v]
//! [∂^k a] = (−1)^k wt(a) (wt(a)+1) ⋯ (wt(a)+k−1) [a]
//! [γ_i] = x_i,  [β_i] = ∂_i
//! ```
//!
//! The sign `(−1)^k` in the derivative rule is the one for which
//! `[:γβ:] = x∂ + 1 − α` and `[L_S] = (e² + e)/2`.

use std::collections::HashMap;

use crate::algebra::{Algebra, GenKind};
use crate::commutant::DiagonalAction;
use crate::error::{Error, Result};
use crate::linalg::{rank, rref, Vector};
use crate::ope::{circle, pole_bound};
use crate::poly::{Exponents, Poly};
use crate::scalar::Scalar;
use crate::state::{Monomial, State};
use crate::weyl::WeylElement;

struct ZhuMap<'a> {
    alg: &'a Algebra,
    alpha: &'a [Scalar],
    memo: HashMap<Monomial, WeylElement>,
}

impl ZhuMap<'_> {
    fn weight(&self, gen: usize, deriv: u32) -> Scalar {
        let g = self.alg.generator(gen);
        let base = match g.kind {
            GenKind::Beta => self.alpha[g.pair].clone(),
            _ => &Scalar::one() - &self.alpha[g.pair],
        };
        &base + &Scalar::from_int(deriv as i64)
    }

    fn generator_image(&self, gen: usize, deriv: u32) -> WeylElement {
        let n = self.alg.bg_pairs();
        let g = self.alg.generator(gen);
        let base = match g.kind {
            GenKind::Beta => WeylElement::d(n, g.pair),
            _ => WeylElement::x(n, g.pair),
        };
        let w = self.weight(gen, 0);
        let mut c = Scalar::rising(&w, deriv);
        if deriv % 2 == 1 {
            c = -c;
        }
        base.scale(&c)
    }

    fn state(&mut self, u: &State) -> Result<WeylElement> {
        let mut out = WeylElement::zero(self.alg.bg_pairs());
        for (m, c) in u.terms() {
            out = &out + &self.monomial(m)?.scale(c);
        }
        Ok(out)
    }

    fn monomial(&mut self, m: &Monomial) -> Result<WeylElement> {
        if let Some(w) = self.memo.get(m) {
            return Ok(w.clone());
        }
        let n = self.alg.bg_pairs();
        let mut factors = m.expanded();
        let Some((gen, deriv)) = factors.next() else {
            return Ok(WeylElement::one(n));
        };
        let rest: Vec<(usize, u32)> = factors.collect();
        let v = State::product_of(self.alg, &rest);
        let g = State::derivative_of_generator(self.alg, gen, deriv);
        let wt = self.weight(gen, deriv);

        let mut out = self.generator_image(gen, deriv).product(&self.state(&v)?);
        for j in 1..=pole_bound(&g, &v) {
            let b = Scalar::binomial(&wt, j as u32);
            if b.is_zero() {
                continue;
            }
            let prod = circle(&g, &v, j - 1)?;
            if !prod.is_zero() {
                out = &out - &self.state(&prod)?.scale(&b);
            }
        }
        self.memo.insert(m.clone(), out.clone());
        Ok(out)
    }
}

/// Zhu image of a βγ state for the weight vector `α` (one entry per pair).
pub fn zhu_image(u: &State, alpha: &[Scalar]) -> Result<WeylElement> {
    let alg = u.algebra();
    if !alg.is_pure_beta_gamma() {
        return Err(Error::Unsupported("the Zhu map is implemented for βγ generators only".into()));
    }
    if alpha.len() != alg.bg_pairs() {
        return Err(Error::InvalidInput(format!("α has {} entries, expected {}", alpha.len(), alg.bg_pairs())));
    }
    ZhuMap { alg, alpha, memo: HashMap::new() }.state(u)
}

/// Result of comparing the image of the Zhu map inside `C[e_1…e_n]` with
/// the whole polynomial ring up to a degree bound.
#[derive(Clone, Debug)]
pub struct CokernelReport {
    pub degree: u32,
    /// `dim E_{≤D}`.
    pub ambient_dim: usize,
    pub image_dim: usize,
    pub codim: usize,
    /// Euler monomials spanning a complement, highest degree first.
    pub representatives: Vec<Poly>,
    /// Whether adding the images of the currents `θ_i` fills `E_{≤D}`.
    pub theta_covers: bool,
}

impl CokernelReport {
    pub fn representatives_weyl(&self) -> Vec<WeylElement> {
        self.representatives.iter().map(WeylElement::from_euler_poly).collect()
    }
}

/// Spans the degree-≤D part of the subalgebra of `E = C[e]` generated by
/// the Zhu images of the `φ_i`, `L_j`, `W_j` generators and reports its
/// codimension in `E_{≤D}`.
pub fn cokernel_probe(act: &DiagonalAction, alpha: &[Scalar], degree: u32) -> Result<CokernelReport> {
    if degree < 1 {
        return Err(Error::InvalidInput("degree bound must be at least 1".into()));
    }
    let n = act.n();
    let mut gens = Vec::new();
    for g in act.generator_set()? {
        if g.name.starts_with("omega") {
            continue;
        }
        let img = zhu_image(&g.state, alpha)?;
        let p = img
            .to_euler_poly()
            .ok_or_else(|| Error::NoSolution(format!("Zhu image of {} is not a polynomial in the Euler operators", g.name)))?;
        gens.push(p);
    }
    let mut with_theta = gens.clone();
    for t in act.thetas() {
        let img = zhu_image(&t, alpha)?;
        with_theta.push(img.to_euler_poly().expect("currents map to Euler polynomials"));
    }

    let columns = euler_monomials(n, degree);
    let image = span_products(&gens, degree);
    let rows: Vec<Vector> = image.iter().map(|p| coordinates(p, &columns)).collect();
    let (echelon, pivots) = rref(&rows);
    let representatives = (0..columns.len())
        .filter(|c| !pivots.contains(c))
        .map(|c| Poly::monomial(columns[c].clone(), Scalar::one()))
        .collect::<Vec<_>>();
    let augmented: Vec<Vector> = span_products(&with_theta, degree).iter().map(|p| coordinates(p, &columns)).collect();
    Ok(CokernelReport {
        degree,
        ambient_dim: columns.len(),
        image_dim: echelon.len(),
        codim: columns.len() - echelon.len(),
        representatives,
        theta_covers: rank(&augmented) == columns.len(),
    })
}

/// Exponent vectors of total degree ≤ D, highest degree first.
fn euler_monomials(n: usize, degree: u32) -> Vec<Exponents> {
    fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Exponents>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for e in 0..=left {
            cur.push(e);
            rec(n, left - e, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    rec(n, degree, &mut Vec::new(), &mut out);
    out.sort_by(|a, b| b.iter().sum::<u32>().cmp(&a.iter().sum::<u32>()).then_with(|| b.cmp(a)));
    out
}

fn coordinates(p: &Poly, columns: &[Exponents]) -> Vector {
    columns.iter().map(|e| p.coeff(e)).collect()
}

/// All products of the generators (with repetition) of total degree ≤ D,
/// the empty product included. Generators of degree 0 are skipped.
fn span_products(gens: &[Poly], degree: u32) -> Vec<Poly> {
    let n = gens.first().map(Poly::nvars).unwrap_or(1);
    let gens: Vec<(&Poly, u32)> = gens.iter().filter_map(|g| g.degree().filter(|&d| d > 0).map(|d| (g, d))).collect();
    let mut out = Vec::new();
    fn rec(gens: &[(&Poly, u32)], start: usize, left: u32, cur: Poly, out: &mut Vec<Poly>) {
        out.push(cur.clone());
        for i in start..gens.len() {
            let (g, d) = gens[i];
            if d <= left {
                rec(gens, i, left - d, &cur * g, out);
            }
        }
    }
    rec(&gens, 0, degree, Poly::one(n), &mut out);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::FreeAlgebraSpec;
    use crate::w3::{build_ls_ws, zhu_ideal_check};

    fn half() -> Scalar {
        Scalar::from_ratio(1, 2)
    }

    #[test]
    fn gamma_beta() {
        let alg = FreeAlgebraSpec::beta_gamma(1);
        let gb = State::product_of(&alg, &[(alg.gamma(0), 0), (alg.beta(0), 0)]);
        for a in [Scalar::zero(), half(), Scalar::one()] {
            let img = zhu_image(&gb, std::slice::from_ref(&a)).unwrap();
            let expected = &WeylElement::euler(1, 0) + &WeylElement::constant(1, &Scalar::one() - &a);
            assert_eq!(img, expected);
        }
    }

    #[test]
    fn ls_and_ws_images() {
        let alg = FreeAlgebraSpec::beta_gamma(1);
        let (l, w) = build_ls_ws(&alg, 0).unwrap();
        let e = Poly::var(1, 0);
        let l_expected = (&e.pow(2) + &e).scale(&half());
        for a in [Scalar::zero(), half(), Scalar::one()] {
            let lp = zhu_image(&l, std::slice::from_ref(&a)).unwrap().to_euler_poly().unwrap();
            let wp = zhu_image(&w, std::slice::from_ref(&a)).unwrap().to_euler_poly().unwrap();
            assert_eq!(lp, l_expected);
            assert!(zhu_ideal_check(&lp, &wp));
        }
    }

    #[test]
    fn rank_one_cokernel() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        for d in [3, 6] {
            let r = cokernel_probe(&act, &[half()], d).unwrap();
            assert_eq!(r.codim, 1);
            assert_eq!(r.representatives, vec![Poly::var(1, 0)]);
            assert!(r.theta_covers);
        }
    }
}

//! Commutative polynomials over Q(√6) in a fixed number of variables.
//!
//! Used for `Sym(V⊕V*)` (variables `x1…xn, xp1…xpn`), for the Euler
//! subalgebra `C[e1…en]` and for univariate identities such as the Zhu
//! ideal relation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::expr::scalar_coefficient;
use crate::scalar::Scalar;

/// Exponent vector; its length is the number of variables.
pub type Exponents = Vec<u32>;

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Poly {
    nvars: usize,
    terms: BTreeMap<Exponents, Scalar>,
}

impl Poly {
    pub fn zero(nvars: usize) -> Self {
        Poly { nvars, terms: BTreeMap::new() }
    }

    pub fn constant(nvars: usize, c: Scalar) -> Self {
        let mut p = Poly::zero(nvars);
        p.add_term(vec![0; nvars], c);
        p
    }

    pub fn one(nvars: usize) -> Self {
        Poly::constant(nvars, Scalar::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        Poly::monomial(e, Scalar::one())
    }

    pub fn monomial(exps: Exponents, c: Scalar) -> Self {
        let mut p = Poly::zero(exps.len());
        p.add_term(exps, c);
        p
    }

    /// Univariate polynomial from ascending coefficients.
    pub fn univariate(coeffs: &[Scalar]) -> Self {
        let mut p = Poly::zero(1);
        for (k, c) in coeffs.iter().enumerate() {
            p.add_term(vec![k as u32], c.clone());
        }
        p
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn terms(&self) -> &BTreeMap<Exponents, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, e: &[u32]) -> Scalar {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, e: Exponents, c: Scalar) {
        assert_eq!(e.len(), self.nvars, "exponent length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Total degree; `None` for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|e| e.iter().sum()).max()
    }

    pub fn scale(&self, c: &Scalar) -> Poly {
        if c.is_zero() {
            return Poly::zero(self.nvars);
        }
        Poly { nvars: self.nvars, terms: self.terms.iter().map(|(e, x)| (e.clone(), x * c)).collect() }
    }

    pub fn pow(&self, k: u32) -> Poly {
        (0..k).fold(Poly::one(self.nvars), |acc, _| &acc * self)
    }

    /// Partial derivative in variable `i`.
    pub fn partial(&self, i: usize) -> Poly {
        let mut out = Poly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[i] > 0 {
                let mut f = e.clone();
                f[i] -= 1;
                out.add_term(f, c * &Scalar::from_int(e[i] as i64));
            }
        }
        out
    }

    /// Substitutes polynomials (all in the same ring) for the variables.
    pub fn compose(&self, subs: &[Poly]) -> Poly {
        assert_eq!(subs.len(), self.nvars);
        let target = subs.first().map(Poly::nvars).unwrap_or(0);
        let mut out = Poly::zero(target);
        for (e, c) in &self.terms {
            let mut t = Poly::constant(target, c.clone());
            for (p, k) in subs.iter().zip(e) {
                t = &t * &p.pow(*k);
            }
            out = &out + &t;
        }
        out
    }

    /// Text with the given variable names, highest total degree first.
    pub fn display_with(&self, names: &[String]) -> String {
        let mut keys: Vec<&Exponents> = self.terms.keys().collect();
        keys.sort_by(|a, b| b.iter().sum::<u32>().cmp(&a.iter().sum::<u32>()).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (idx, e) in keys.into_iter().enumerate() {
            let c = &self.terms[e];
            let body: Vec<String> = e
                .iter()
                .zip(names)
                .filter(|(k, _)| **k > 0)
                .map(|(k, n)| if *k == 1 { n.clone() } else { format!("{n}^{k}") })
                .collect();
            write_term(&mut out, idx == 0, c, &body.join(" "));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

/// Appends `c·body` to a sum; an empty `body` is the constant monomial.
pub(crate) fn write_term(out: &mut String, first: bool, c: &Scalar, body: &str) {
    let (neg, mag) = if !c.is_compound() && c.is_negative() { (true, -c) } else { (false, c.clone()) };
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if body.is_empty() {
        out.push_str(&scalar_coefficient(&mag));
    } else {
        if !mag.is_one() {
            out.push_str(&scalar_coefficient(&mag));
            out.push('*');
        }
        out.push_str(body);
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let names: Vec<String> = if self.nvars == 1 {
            vec!["e".into()]
        } else {
            (1..=self.nvars).map(|i| format!("e{i}")).collect()
        };
        f.write_str(&self.display_with(&names))
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ring mismatch");
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        out
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        self + &(-rhs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        assert_eq!(self.nvars, rhs.nvars, "polynomial ring mismatch");
        let mut out = Poly::zero(self.nvars);
        for (a, x) in &self.terms {
            for (b, y) in &rhs.terms {
                let e = a.iter().zip(b).map(|(p, q)| p + q).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let e = Poly::var(1, 0);
        let one = Poly::one(1);
        let p = &(&e + &one) * &(&e - &one);
        assert_eq!(p, &e.pow(2) - &one);
        assert_eq!(p.degree(), Some(2));
        assert_eq!(p.partial(0), e.scale(&Scalar::from_int(2)));
        assert_eq!(p.to_string(), "e^2 - 1");
    }

    #[test]
    fn compose_substitutes() {
        let e = Poly::var(1, 0);
        let sq = e.pow(2);
        let shifted = sq.compose(&[&e + &Poly::one(1)]);
        assert_eq!(shifted.to_string(), "e^2 + 2*e + 1");
    }
}

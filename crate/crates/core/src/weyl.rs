//! The Weyl algebra `D(V)` of polynomial differential operators in normal
//! form `x^K ∂^L` (coordinates left of derivatives).

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{field_kernel_basis, integer_kernel_basis, ActionMatrix};
use crate::poly::{write_term, Poly};
use crate::scalar::{factorial, int_binomial, Scalar};

/// `(K, L)`: exponents of the coordinates and of the derivatives.
pub type WeylKey = (Vec<u32>, Vec<u32>);

#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct WeylElement {
    n: usize,
    terms: BTreeMap<WeylKey, Scalar>,
}

impl WeylElement {
    pub fn zero(n: usize) -> Self {
        WeylElement { n, terms: BTreeMap::new() }
    }

    pub fn constant(n: usize, c: Scalar) -> Self {
        WeylElement::monomial(vec![0; n], vec![0; n], c)
    }

    pub fn one(n: usize) -> Self {
        WeylElement::constant(n, Scalar::one())
    }

    pub fn monomial(k: Vec<u32>, l: Vec<u32>, c: Scalar) -> Self {
        assert_eq!(k.len(), l.len());
        let mut w = WeylElement::zero(k.len());
        w.add_term((k, l), c);
        w
    }

    /// The coordinate `x_i` (0-based).
    pub fn x(n: usize, i: usize) -> Self {
        let mut k = vec![0; n];
        k[i] = 1;
        WeylElement::monomial(k, vec![0; n], Scalar::one())
    }

    /// The derivative `∂_i`.
    pub fn d(n: usize, i: usize) -> Self {
        let mut l = vec![0; n];
        l[i] = 1;
        WeylElement::monomial(vec![0; n], l, Scalar::one())
    }

    /// The Euler operator `e_i = x_i ∂_i`.
    pub fn euler(n: usize, i: usize) -> Self {
        let mut k = vec![0; n];
        k[i] = 1;
        WeylElement::monomial(k.clone(), k, Scalar::one())
    }

    /// `x^{l⁺} ∂^{l⁻}`, the classical counterpart of the lattice monomial.
    pub fn lattice(l: &[i64]) -> Self {
        let k = l.iter().map(|&x| x.max(0) as u32).collect();
        let d = l.iter().map(|&x| (-x).max(0) as u32).collect();
        WeylElement::monomial(k, d, Scalar::one())
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<WeylKey, Scalar> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, k: &[u32], l: &[u32]) -> Scalar {
        self.terms.get(&(k.to_vec(), l.to_vec())).cloned().unwrap_or_default()
    }

    pub fn as_scalar(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => {
                let ((k, l), c) = self.terms.iter().next().expect("one term");
                (k.iter().chain(l).all(|&e| e == 0)).then(|| c.clone())
            }
            _ => None,
        }
    }

    pub fn add_term(&mut self, key: WeylKey, c: Scalar) {
        assert!(key.0.len() == self.n && key.1.len() == self.n, "Weyl exponent length mismatch");
        if c.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.terms.entry(key) {
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

    pub fn scale(&self, c: &Scalar) -> Self {
        if c.is_zero() {
            return WeylElement::zero(self.n);
        }
        WeylElement { n: self.n, terms: self.terms.iter().map(|(k, x)| (k.clone(), x * c)).collect() }
    }

    /// Bernstein degree `max(|K| + |L|)`; `None` for zero.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|(k, l)| k.iter().sum::<u32>() + l.iter().sum::<u32>()).max()
    }

    /// Associative product, normal ordered with `∂^l x^k = Σ_j C(l,j) k!/(k−j)! x^{k−j} ∂^{l−j}`
    /// in each variable.
    pub fn product(&self, other: &WeylElement) -> WeylElement {
        assert_eq!(self.n, other.n, "Weyl algebras of different rank");
        let mut out = WeylElement::zero(self.n);
        for ((k1, l1), c1) in &self.terms {
            for ((k2, l2), c2) in &other.terms {
                // per-variable expansions of ∂^{l1_i} x^{k2_i}
                let mut partial: Vec<(Vec<u32>, Vec<u32>, Scalar)> = vec![(k1.clone(), l2.clone(), c1 * c2)];
                for i in 0..self.n {
                    let (l, k) = (l1[i], k2[i]);
                    let mut next = Vec::new();
                    for (kk, ll, c) in &partial {
                        for j in 0..=l.min(k) {
                            let coef = Scalar::from_bigint(
                                int_binomial(l as i64, j) * (factorial(k) / factorial(k - j)),
                            );
                            let mut kk = kk.clone();
                            let mut ll = ll.clone();
                            kk[i] += k - j;
                            ll[i] += l - j;
                            next.push((kk, ll, c * &coef));
                        }
                    }
                    partial = next;
                }
                for (k, l, c) in partial {
                    out.add_term((k, l), c);
                }
            }
        }
        out
    }

    pub fn commutator(&self, other: &WeylElement) -> WeylElement {
        &self.product(other) - &other.product(self)
    }

    pub fn pow(&self, k: u32) -> WeylElement {
        (0..k).fold(WeylElement::one(self.n), |acc, _| acc.product(self))
    }

    /// Rewrites an element whose terms all have `K = L` as a polynomial in
    /// the Euler operators, using `x^k ∂^k = e(e−1)⋯(e−k+1)`.
    pub fn to_euler_poly(&self) -> Option<Poly> {
        let mut out = Poly::zero(self.n);
        for ((k, l), c) in &self.terms {
            if k != l {
                return None;
            }
            let mut t = Poly::constant(self.n, c.clone());
            for (i, &ki) in k.iter().enumerate() {
                t = &t * &falling(self.n, i, ki);
            }
            out = &out + &t;
        }
        Some(out)
    }

    /// Inverse of [`WeylElement::to_euler_poly`].
    pub fn from_euler_poly(p: &Poly) -> WeylElement {
        let n = p.nvars();
        let mut out = WeylElement::zero(n);
        for (exps, c) in p.terms() {
            let mut t = WeylElement::constant(n, c.clone());
            for (i, &e) in exps.iter().enumerate() {
                t = t.product(&WeylElement::euler(n, i).pow(e));
            }
            out = &out + &t;
        }
        out
    }

    /// Text with variables `x1…`, `d1…`; highest degree first.
    pub fn to_text(&self) -> String {
        let mut keys: Vec<&WeylKey> = self.terms.keys().collect();
        let deg = |(k, l): &WeylKey| k.iter().sum::<u32>() + l.iter().sum::<u32>();
        keys.sort_by(|a, b| deg(b).cmp(&deg(a)).then_with(|| b.cmp(a)));
        let mut out = String::new();
        for (idx, key) in keys.into_iter().enumerate() {
            let mut parts = Vec::new();
            for (prefix, exps) in [("x", &key.0), ("d", &key.1)] {
                for (i, &e) in exps.iter().enumerate() {
                    match e {
                        0 => {}
                        1 => parts.push(format!("{prefix}{}", i + 1)),
                        _ => parts.push(format!("{prefix}{}^{e}", i + 1)),
                    }
                }
            }
            write_term(&mut out, idx == 0, &self.terms[key], &parts.join(" "));
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }

    pub fn to_json_value(&self) -> WeylJson {
        WeylJson {
            terms: self
                .terms
                .iter()
                .map(|((k, l), c)| WeylTermJson { x: k.clone(), d: l.clone(), coeff: c.clone() })
                .collect(),
        }
    }

    /// Reads `{"terms": [{"x": [..], "d": [..], "coeff": ..}]}` in `n` variables.
    pub fn from_json_value(v: &WeylJson, n: usize) -> Result<WeylElement> {
        let mut out = WeylElement::zero(n);
        for t in &v.terms {
            if t.x.len() != n || t.d.len() != n {
                return Err(Error::InvalidInput(format!("Weyl term has exponent vectors of length {}/{}, expected {n}", t.x.len(), t.d.len())));
            }
            out.add_term((t.x.clone(), t.d.clone()), t.coeff.clone());
        }
        Ok(out)
    }
}

fn falling(n: usize, i: usize, k: u32) -> Poly {
    let e = Poly::var(n, i);
    (0..k).fold(Poly::one(n), |acc, j| &acc * &(&e - &Poly::constant(n, Scalar::from_int(j as i64))))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylJson {
    pub terms: Vec<WeylTermJson>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WeylTermJson {
    pub x: Vec<u32>,
    pub d: Vec<u32>,
    pub coeff: Scalar,
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl Add for &WeylElement {
    type Output = WeylElement;
    fn add(self, rhs: &WeylElement) -> WeylElement {
        assert_eq!(self.n, rhs.n, "Weyl algebras of different rank");
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        out
    }
}

impl Sub for &WeylElement {
    type Output = WeylElement;
    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self + &(-rhs)
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;
    fn neg(self) -> WeylElement {
        self.scale(&-Scalar::one())
    }
}

impl Mul for &WeylElement {
    type Output = WeylElement;
    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.product(rhs)
    }
}

/// `τ(ξ^i) = −Σ_j A_ij x_j ∂_j`.
pub fn build_tau(a: &ActionMatrix, i: usize) -> Result<WeylElement> {
    if i >= a.m() {
        return Err(Error::IndexOutOfRange { what: "action row", index: i, len: a.m() });
    }
    let n = a.n();
    Ok(a.row(i).iter().enumerate().fold(WeylElement::zero(n), |acc, (j, c)| &acc - &WeylElement::euler(n, j).scale(c)))
}

/// True iff `[τ(ξ^i), ω] = 0` for every row.
pub fn classical_invariant(w: &WeylElement, a: &ActionMatrix) -> Result<bool> {
    for i in 0..a.m() {
        if !build_tau(a, i)?.commutator(w).is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `ψ^k = Σ_j s^k_j e_j` for an orthogonal basis `s^k` of the vectors
/// orthogonal to both the action rows and the lattice `A⊥ ∩ Zⁿ`.
pub fn build_psi_classical(a: &ActionMatrix) -> Result<Vec<WeylElement>> {
    let n = a.n();
    let mut rows = a.rows().to_vec();
    for l in integer_kernel_basis(a)?.vectors {
        rows.push(l.iter().map(|&x| Scalar::from_int(x)).collect());
    }
    let stacked = ActionMatrix::new(rows)?;
    Ok(field_kernel_basis(&stacked)
        .into_iter()
        .map(|s| s.iter().enumerate().fold(WeylElement::zero(n), |acc, (j, c)| &acc + &WeylElement::euler(n, j).scale(c)))
        .collect())
}

//! Oracles shared by the integration tests. None of them goes through the
//! OPE engine: states are modelled in the Fock space of βγ modes, where
//! creation modes multiply and annihilation modes differentiate.
#![allow(dead_code)]

use std::collections::BTreeMap;

use freefield::linalg::ActionMatrix;
use freefield::scalar::factorial;
use freefield::{Algebra, GenKind, Scalar, State};

/// Creation variable: `B(j, k) = β_j(−k−1)` or `G(j, k) = γ_j(−k−1)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Var {
    B(usize, u32),
    G(usize, u32),
}

impl Var {
    fn twice_weight(self) -> u32 {
        match self {
            Var::B(_, k) | Var::G(_, k) => 2 * k + 1,
        }
    }
}

type Mono = BTreeMap<Var, u32>;

/// Commutative polynomial in the creation variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Fock(BTreeMap<Mono, Scalar>);

impl Fock {
    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, m: Mono, c: Scalar) {
        if c.is_zero() {
            return;
        }
        let slot = self.0.entry(m.clone()).or_default();
        *slot = &*slot + &c;
        if slot.is_zero() {
            self.0.remove(&m);
        }
    }

    pub fn add(&self, other: &Fock) -> Fock {
        let mut out = self.clone();
        for (m, c) in &other.0 {
            out.add_term(m.clone(), c.clone());
        }
        out
    }

    pub fn scale(&self, c: &Scalar) -> Fock {
        let mut out = Fock::default();
        for (m, d) in &self.0 {
            out.add_term(m.clone(), c * d);
        }
        out
    }

    pub fn monomial(vars: &[Var]) -> Fock {
        let mut m = Mono::new();
        for v in vars {
            *m.entry(*v).or_default() += 1;
        }
        let mut out = Fock::default();
        out.add_term(m, Scalar::one());
        out
    }

    fn times(&self, v: Var) -> Fock {
        let mut out = Fock::default();
        for (m, c) in &self.0 {
            let mut m = m.clone();
            *m.entry(v).or_default() += 1;
            out.add_term(m, c.clone());
        }
        out
    }

    fn diff(&self, v: Var) -> Fock {
        let mut out = Fock::default();
        for (m, c) in &self.0 {
            if let Some(&e) = m.get(&v) {
                let mut m = m.clone();
                if e == 1 {
                    m.remove(&v);
                } else {
                    m.insert(v, e - 1);
                }
                out.add_term(m, c * &Scalar::from_int(e as i64));
            }
        }
        out
    }

    fn max_mode(&self) -> u32 {
        self.0.keys().flat_map(|m| m.keys()).map(|v| match v {
            Var::B(_, k) | Var::G(_, k) => *k,
        })
        .max()
        .unwrap_or(0)
    }

    /// `β_j(p)` for `p ≥ 0`, which is `∂/∂γ_j(−p−1)`.
    pub fn beta_mode(&self, j: usize, p: u32) -> Fock {
        self.diff(Var::G(j, p))
    }

    /// `γ_j(p)` for `p ≥ 0`, which is `−∂/∂β_j(−p−1)`.
    pub fn gamma_mode(&self, j: usize, p: u32) -> Fock {
        self.diff(Var::B(j, p)).scale(&Scalar::from_int(-1))
    }

    /// Mode `m ≥ 0` of `−:γ_j β_j:`, the j-th current of the standard action.
    pub fn current_mode(&self, j: usize, m: u32) -> Fock {
        let mut inner = Fock::default();
        for p in 0..m {
            // γ(p) β(m−1−p), both annihilators
            inner = inner.add(&self.beta_mode(j, m - 1 - p).gamma_mode(j, p));
        }
        for k in 0..=self.max_mode() {
            // γ(−k−1) β(m+k) and β(−k−1) γ(m+k), creators on the left
            inner = inner.add(&self.beta_mode(j, m + k).times(Var::G(j, k)));
            inner = inner.add(&self.gamma_mode(j, m + k).times(Var::B(j, k)));
        }
        inner.scale(&Scalar::from_int(-1))
    }

    /// Mode `m ≥ 0` of `θ_i = −Σ_j A_ij :γ_j β_j:`.
    pub fn theta_mode(&self, row: &[Scalar], m: u32) -> Fock {
        let mut out = Fock::default();
        for (j, a) in row.iter().enumerate() {
            if !a.is_zero() {
                out = out.add(&self.current_mode(j, m).scale(a));
            }
        }
        out
    }

    pub fn max_twice_weight(&self) -> u32 {
        self.0.keys().map(|m| m.iter().map(|(v, e)| v.twice_weight() * e).sum()).max().unwrap_or(0)
    }

    /// Killed by every nonnegative mode of every row of `a`.
    pub fn is_invariant(&self, a: &ActionMatrix) -> bool {
        let top = self.max_twice_weight() / 2 + 1;
        a.rows().iter().all(|row| (0..=top).all(|m| self.theta_mode(row, m).is_zero()))
    }

    /// Coordinates against a fixed list of monomials.
    pub fn coordinates(&self, basis: &[Fock]) -> Vec<Scalar> {
        basis
            .iter()
            .map(|b| {
                let key = b.0.keys().next().expect("basis monomial");
                self.0.get(key).cloned().unwrap_or_default()
            })
            .collect()
    }
}

/// Image of a state of a pure βγ algebra, reading `∂^k a` as `k!·a(−k−1)`.
pub fn to_fock(u: &State) -> Fock {
    let alg: &Algebra = u.algebra();
    let mut out = Fock::default();
    for (m, c) in u.terms() {
        let mut vars = Vec::new();
        let mut coeff = c.clone();
        for f in m.factors() {
            let g = alg.generator(f.gen);
            let v = match g.kind {
                GenKind::Beta => Var::B(g.pair, f.deriv),
                GenKind::Gamma => Var::G(g.pair, f.deriv),
                other => panic!("no Fock model for {other:?}"),
            };
            for _ in 0..f.mult {
                vars.push(v);
                coeff = &coeff * &Scalar::from_bigint(factorial(f.deriv));
            }
        }
        out = out.add(&Fock::monomial(&vars).scale(&coeff));
    }
    out
}

/// All Fock monomials in one βγ pair with the given twice weight and
/// equal numbers of β and γ.
pub fn charge_zero_monomials(twice_weight: u32) -> Vec<Fock> {
    fn go(rest: u32, min: usize, vars: &[Var], acc: &mut Vec<Var>, out: &mut Vec<Vec<Var>>) {
        if rest == 0 {
            out.push(acc.clone());
            return;
        }
        for (i, v) in vars.iter().enumerate().skip(min) {
            if v.twice_weight() <= rest {
                acc.push(*v);
                go(rest - v.twice_weight(), i, vars, acc, out);
                acc.pop();
            }
        }
    }
    let vars: Vec<Var> = (0..=twice_weight / 2).flat_map(|k| [Var::B(0, k), Var::G(0, k)]).collect();
    let mut words = Vec::new();
    go(twice_weight, 0, &vars, &mut Vec::new(), &mut words);
    words
        .into_iter()
        .filter(|w| {
            let betas = w.iter().filter(|v| matches!(v, Var::B(..))).count();
            2 * betas == w.len()
        })
        .map(|w| Fock::monomial(&w))
        .collect()
}

/// Rank by plain Gaussian elimination.
pub fn rank(mut rows: Vec<Vec<Scalar>>) -> usize {
    let ncols = rows.first().map_or(0, Vec::len);
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inverse().expect("nonzero pivot");
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = &rows[i][col] * &inv;
                for c in col..ncols {
                    let d = &rows[i][c] - &(&f * &rows[r][c]);
                    rows[i][c] = d;
                }
            }
        }
        r += 1;
    }
    r
}

/// Dimension of the charge-0 invariants of twice weight `tw` for the action
/// `(1)` on one pair, as `#monomials − rank` of the stacked current modes.
pub fn brute_force_commutant_dim(tw: u32) -> usize {
    let monos = charge_zero_monomials(tw);
    if monos.is_empty() {
        return 0;
    }
    let row = [Scalar::one()];
    // each monomial gives one column; rows are the coefficients of all images
    let mut images: Vec<Vec<Fock>> = Vec::new();
    for m in 0..=tw / 2 + 1 {
        images.push(monos.iter().map(|f| f.theta_mode(&row, m)).collect());
    }
    let mut keys = std::collections::BTreeSet::new();
    for per_mode in &images {
        for f in per_mode {
            keys.extend(f.0.keys().cloned());
        }
    }
    let mut matrix = Vec::new();
    for per_mode in &images {
        for k in &keys {
            matrix.push(per_mode.iter().map(|f| f.0.get(k).cloned().unwrap_or_default()).collect());
        }
    }
    monos.len() - rank(matrix)
}

/// All integer vectors with entries in `[−bound, bound]` killed by `a`.
pub fn kernel_vectors_in_box(a: &ActionMatrix, bound: i64) -> Vec<Vec<i64>> {
    let n = a.n();
    let mut out = vec![vec![]];
    for _ in 0..n {
        out = out.into_iter().flat_map(|v: Vec<i64>| (-bound..=bound).map(move |x| [v.clone(), vec![x]].concat())).collect();
    }
    out.into_iter()
        .filter(|v| {
            a.rows().iter().all(|row| {
                row.iter().zip(v).fold(Scalar::zero(), |acc, (c, x)| &acc + &(c * &Scalar::from_int(*x))).is_zero()
            })
        })
        .collect()
}

/// Whether `v` is an integer combination of the linearly independent `basis`.
pub fn in_integer_span(basis: &[Vec<i64>], v: &[i64]) -> bool {
    if basis.is_empty() {
        return v.iter().all(|x| *x == 0);
    }
    // solve basisᵀ c = v over Q, then demand integer c
    let k = basis.len();
    let mut rows: Vec<Vec<Scalar>> = (0..v.len())
        .map(|i| basis.iter().map(|b| Scalar::from_int(b[i])).chain([Scalar::from_int(v[i])]).collect())
        .collect();
    let mut r = 0;
    for col in 0..k {
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][col].is_zero()) else { continue };
        rows.swap(r, p);
        let inv = rows[r][col].inverse().expect("nonzero");
        for c in 0..=k {
            rows[r][c] = &rows[r][c] * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][col].is_zero() {
                let f = rows[i][col].clone();
                for c in 0..=k {
                    let d = &rows[i][c] - &(&f * &rows[r][c]);
                    rows[i][c] = d;
                }
            }
        }
        r += 1;
    }
    let consistent = rows[r..].iter().all(|row| row[k].is_zero());
    consistent && (0..r).all(|i| rows[i][k].to_i64().is_some())
}

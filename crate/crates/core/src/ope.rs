//! n-th circle products of free-field states by mode calculus.
//!
//! States are converted to bare creation-mode words (dropping the `k!`
//! factors of the monomial dictionary). For `u = a(m)w` the modes of `u`
//! are expanded with the iterate formula
//!
//! ```text
//! (a(m)w)(n) = Σ_{j≥0} (−1)^j C(m,j) [ a(m−j) w(n+j) − (−1)^m (−1)^{|a||w|} w(m+n−j) a(j) ]
//! ```
//!
//! and single generator modes act on words through the scalar
//! (super)commutators of the contraction table. Both sums are finite on any
//! given state because every generator has strictly positive α*-weight.

use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;

use crate::algebra::{Algebra, FreeAlgebraSpec};
use crate::error::{Error, Result};
use crate::scalar::{int_binomial, Scalar};
use crate::state::{Factor, Monomial, State};

type Modes = BTreeMap<Monomial, Scalar>;

fn add_into(acc: &mut Modes, m: Monomial, c: Scalar) {
    if c.is_zero() {
        return;
    }
    use std::collections::btree_map::Entry;
    match acc.entry(m) {
        Entry::Vacant(e) => {
            e.insert(c);
        }
        Entry::Occupied(mut e) => {
            *e.get_mut() += &c;
            if e.get().is_zero() {
                e.remove();
            }
        }
    }
}

fn merge_scaled(acc: &mut Modes, src: Modes, c: &Scalar) {
    if c.is_zero() {
        return;
    }
    for (m, x) in src {
        let v = if c.is_one() { x } else { &x * c };
        add_into(acc, m, v);
    }
}

fn to_modes(s: &State) -> Modes {
    s.terms()
        .iter()
        .map(|(m, c)| {
            let w = m.factorial_weight();
            let c = if w == BigInt::from(1) { c.clone() } else { c * &Scalar::from_bigint(w) };
            (m.clone(), c)
        })
        .collect()
}

fn from_modes(alg: &crate::algebra::Algebra, modes: Modes) -> State {
    let terms = modes
        .into_iter()
        .map(|(m, c)| {
            let w = m.factorial_weight();
            let c = if w == BigInt::from(1) { c } else { &c / &Scalar::from_bigint(w) };
            (m, c)
        })
        .collect();
    State::from_terms(alg, terms)
}

fn sign(neg: bool) -> Scalar {
    if neg {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

struct Engine<'a> {
    alg: &'a FreeAlgebraSpec,
    /// `(suffix length, n) ↦ suffix(n) v` for the right-hand state `v` of
    /// the current call; only valid while the word is fixed.
    memo: RefCell<HashMap<(usize, i64), Modes>>,
}

impl<'a> Engine<'a> {
    fn twice_weight_gen(&self, gen: usize) -> i64 {
        self.alg.generator(gen).twice_weight()
    }

    fn max_twice_weight(&self, v: &Modes) -> Option<i64> {
        v.keys().map(|m| m.twice_weight(self.alg)).max()
    }

    /// The single generator mode `a(p)` acting on a mode-word state.
    fn apply_mode(&self, gen: usize, p: i64, v: &Modes) -> Modes {
        let odd = self.alg.generator(gen).is_odd();
        let mut out = Modes::new();
        if p < 0 {
            let k = (-p - 1) as u32;
            for (m, c) in v {
                let mut factors: Vec<Factor> = m.factors().to_vec();
                let pos = factors.partition_point(|f| (f.gen, f.deriv) < (gen, k));
                let odd_before: u32 = if odd {
                    factors[..pos].iter().filter(|f| self.alg.generator(f.gen).is_odd()).map(|f| f.mult).sum()
                } else {
                    0
                };
                if pos < factors.len() && factors[pos].gen == gen && factors[pos].deriv == k {
                    if odd {
                        continue;
                    }
                    factors[pos].mult += 1;
                } else {
                    factors.insert(pos, Factor { gen, deriv: k, mult: 1 });
                }
                let c = if odd_before % 2 == 1 { -c } else { c.clone() };
                add_into(&mut out, Monomial::from_sorted(factors), c);
            }
            return out;
        }
        for (m, c) in v {
            let factors = m.factors();
            let mut odd_before = 0u32;
            for (i, f) in factors.iter().enumerate() {
                let q = f.deriv as i64;
                if p >= q {
                    let kk = (p - q) as u32;
                    if let Some((_, val)) = self.alg.contractions(gen, f.gen).iter().find(|(k, _)| *k == kk) {
                        let mut coef = val * &Scalar::from_bigint(int_binomial(p, kk));
                        coef = &coef * &Scalar::from_int(f.mult as i64);
                        if odd && odd_before % 2 == 1 {
                            coef = -coef;
                        }
                        let mut rest = factors.to_vec();
                        if rest[i].mult == 1 {
                            rest.remove(i);
                        } else {
                            rest[i].mult -= 1;
                        }
                        add_into(&mut out, Monomial::from_sorted(rest), &coef * c);
                    }
                }
                if self.alg.generator(f.gen).is_odd() {
                    odd_before += f.mult;
                }
            }
        }
        out
    }

    /// [`Engine::apply_word`] on the fixed right-hand state, memoized.
    fn apply_word_base(&self, word: &[(usize, i64)], n: i64, v: &Modes) -> Modes {
        let key = (word.len(), n);
        if let Some(hit) = self.memo.borrow().get(&key) {
            return hit.clone();
        }
        let out = self.apply_word_with(word, n, v, true);
        self.memo.borrow_mut().insert(key, out.clone());
        out
    }

    /// `(word|0⟩)(n) v` where `word` lists creation modes `(generator, m<0)`.
    fn apply_word(&self, word: &[(usize, i64)], n: i64, v: &Modes) -> Modes {
        self.apply_word_with(word, n, v, false)
    }

    fn apply_word_with(&self, word: &[(usize, i64)], n: i64, v: &Modes, base: bool) -> Modes {
        if v.is_empty() {
            return Modes::new();
        }
        match word {
            [] => {
                if n == -1 {
                    v.clone()
                } else {
                    Modes::new()
                }
            }
            [(a, m)] => {
                // (a(−k−1)|0⟩)(n) = (−1)^k C(n,k) a(n−k)
                let k = (-m - 1) as u32;
                let coef = Scalar::from_bigint(int_binomial(n, k)) * sign(k % 2 == 1);
                if coef.is_zero() {
                    return Modes::new();
                }
                let mut out = self.apply_mode(*a, n - k as i64, v);
                if !coef.is_one() {
                    for c in out.values_mut() {
                        *c *= &coef;
                    }
                }
                out
            }
            [(a, m), rest @ ..] => {
                let (a, m) = (*a, *m);
                let tw_a = self.twice_weight_gen(a);
                let tw_w: i64 = rest.iter().map(|(g, mm)| self.twice_weight_gen(*g) + 2 * (-mm - 1)).sum();
                let odd_a = self.alg.generator(a).is_odd();
                let odd_w = rest.iter().filter(|(g, _)| self.alg.generator(*g).is_odd()).count() % 2 == 1;
                let tw_v = self.max_twice_weight(v).unwrap_or(0);
                let mut out = Modes::new();

                // Σ_j (−1)^j C(m,j) a(m−j) w(n+j) v, nonzero only while n+j < wt(w)+wt(v)
                let mut j = 0i64;
                while 2 * (n + j) < tw_w + tw_v {
                    let inner = if base { self.apply_word_base(rest, n + j, v) } else { self.apply_word(rest, n + j, v) };
                    if !inner.is_empty() {
                        let coef = Scalar::from_bigint(int_binomial(m, j as u32)) * sign(j % 2 == 1);
                        let term = self.apply_mode(a, m - j, &inner);
                        merge_scaled(&mut out, term, &coef);
                    }
                    j += 1;
                }

                // − (−1)^m ε Σ_j (−1)^j C(m,j) w(m+n−j) a(j) v, nonzero only while j < wt(a)+wt(v)
                let outer = sign((m.rem_euclid(2) == 1) ^ (odd_a && odd_w) ^ true);
                let mut j = 0i64;
                while 2 * j < tw_a + tw_v {
                    let inner = self.apply_mode(a, j, v);
                    if !inner.is_empty() {
                        let coef = &Scalar::from_bigint(int_binomial(m, j as u32)) * &sign(j % 2 == 1) * &outer;
                        let term = self.apply_word(rest, m + n - j, &inner);
                        merge_scaled(&mut out, term, &coef);
                    }
                    j += 1;
                }
                out
            }
        }
    }
}

/// The n-th product `u ∘_n v`; `n = −1` is the Wick product.
pub fn circle(u: &State, v: &State, n: i64) -> Result<State> {
    u.algebra().check_same(v.algebra())?;
    let alg = u.algebra();
    if u.is_zero() || v.is_zero() {
        return Ok(State::zero(alg));
    }
    // weight positivity: u∘_n v = 0 once n ≥ wt(u) + wt(v)
    if 2 * n >= u.max_twice_weight() + v.max_twice_weight() {
        return Ok(State::zero(alg));
    }
    let engine = Engine { alg, memo: RefCell::new(HashMap::new()) };
    let v_modes = to_modes(v);
    let mut acc = Modes::new();
    for (mono, c) in u.terms() {
        let word: Vec<(usize, i64)> = mono.expanded().map(|(g, k)| (g, -(k as i64) - 1)).collect();
        let coeff = c * &Scalar::from_bigint(mono.factorial_weight());
        engine.memo.borrow_mut().clear();
        let res = engine.apply_word_with(&word, n, &v_modes, true);
        merge_scaled(&mut acc, res, &coeff);
    }
    Ok(from_modes(alg, acc))
}

/// Normally ordered product `:uv:`.
pub fn wick(u: &State, v: &State) -> Result<State> {
    circle(u, v, -1)
}

/// Wick product of a list, nested to the right: `:a(:b(:c⋯:):):`.
pub fn wick_all(states: &[State]) -> Result<State> {
    let (last, init) = states.split_last().expect("at least one factor");
    init.iter().rev().try_fold(last.clone(), |acc, s| wick(s, &acc))
}

/// `:u^k:` as a right-nested Wick power (`k = 0` gives the vacuum).
pub fn wick_power(u: &State, k: u32) -> Result<State> {
    let mut acc = State::vacuum(u.algebra());
    for _ in 0..k {
        acc = wick(u, &acc)?;
    }
    Ok(acc)
}

/// Pole bound: products `u∘_n v` can be nonzero only for `n < wt*(u) + wt*(v)`.
pub fn pole_bound(u: &State, v: &State) -> i64 {
    let tw = u.max_twice_weight() + v.max_twice_weight();
    // smallest integer ≥ tw/2
    (tw + 1).div_euclid(2)
}

/// Singular part of `u(z)v(w)`: all `(n, u∘_n v)` with `n ≥ 0` and nonzero
/// product, in descending `n`.
pub fn ope_singular(u: &State, v: &State) -> Result<Vec<(u32, State)>> {
    u.algebra().check_same(v.algebra())?;
    let mut out = Vec::new();
    for n in (0..pole_bound(u, v)).rev() {
        let p = circle(u, v, n)?;
        if !p.is_zero() {
            out.push((n as u32, p));
        }
    }
    Ok(out)
}

/// True iff `u∘_n v = 0` for every `n ≥ 0`.
pub fn commutes(u: &State, v: &State) -> Result<bool> {
    first_obstruction(u, v).map(|o| o.is_none())
}

/// Smallest `n ≥ 0` with `u∘_n v ≠ 0`, if any.
pub fn first_obstruction(u: &State, v: &State) -> Result<Option<u32>> {
    u.algebra().check_same(v.algebra())?;
    for n in 0..pole_bound(u, v) {
        if !circle(u, v, n)?.is_zero() {
            return Ok(Some(n as u32));
        }
    }
    Ok(None)
}

/// Checks the Virasoro OPE `L(z)L(w) ∼ (c/2)(z−w)^{−4} + 2L(z−w)^{−2} + ∂L(z−w)^{−1}`.
pub fn verify_virasoro(l: &State, c: &Scalar) -> Result<bool> {
    let alg = l.algebra();
    let expected = |n: i64| -> State {
        match n {
            0 => l.derive(),
            1 => l.scale(&Scalar::from_int(2)),
            3 => State::scalar(alg, c / &Scalar::from_int(2)),
            _ => State::zero(alg),
        }
    };
    for n in 0..pole_bound(l, l).max(4) {
        if circle(l, l, n)? != expected(n) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// True iff `u` is primary of conformal weight `h` for `l`:
/// `l∘_0u = ∂u`, `l∘_1u = h·u`, `l∘_n u = 0` for `n ≥ 2`.
pub fn is_primary(l: &State, u: &State, h: &Scalar) -> Result<bool> {
    l.algebra().check_same(u.algebra())?;
    if circle(l, u, 0)? != u.derive() || circle(l, u, 1)? != u.scale(h) {
        return Ok(false);
    }
    for n in 2..pole_bound(l, u) {
        if !circle(l, u, n)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// Like [`is_primary`] but allows `l∘_n u` for `n ≥ 2` to be a multiple of
/// the vacuum. A stress tensor is primary of weight 2 only in this sense.
pub fn is_primary_up_to_central(l: &State, u: &State, h: &Scalar) -> Result<bool> {
    l.algebra().check_same(u.algebra())?;
    if circle(l, u, 0)? != u.derive() || circle(l, u, 1)? != u.scale(h) {
        return Ok(false);
    }
    for n in 2..pole_bound(l, u) {
        if circle(l, u, n)?.as_scalar().is_none() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `L^α = Σ_j α_j :β_j ∂γ_j: − (1−α_j) :∂β_j γ_j:` on the βγ pairs, with
/// central charge `Σ_j (12α_j² − 12α_j + 2)`.
pub fn conformal_vector(alg: &Algebra, alpha: &[Scalar]) -> Result<(State, Scalar)> {
    if alpha.len() != alg.bg_pairs() {
        return Err(Error::InvalidInput(format!("α has {} entries, expected {}", alpha.len(), alg.bg_pairs())));
    }
    let mut l = State::zero(alg);
    let mut c = Scalar::zero();
    for (j, a) in alpha.iter().enumerate() {
        let (b, g) = (alg.beta(j), alg.gamma(j));
        let dbg = State::product_of(alg, &[(b, 1), (g, 0)]);
        let bdg = State::product_of(alg, &[(b, 0), (g, 1)]);
        l = &(&l - &dbg.scale(&(&Scalar::one() - a))) + &bdg.scale(a);
        let twelve = Scalar::from_int(12);
        c = &(&c + &(&(&twelve * a) * a)) - &(&twelve * a);
        c = &c + &Scalar::from_int(2);
    }
    Ok((l, c))
}

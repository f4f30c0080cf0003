//! The W₃ algebra at central charge −2 and its three free-field realizations.
//!
//! The OPEs checked by [`verify_w3_ope`]:
//!
//! ```text
//! L(z)L(w) ∼ −(z−w)^{−4} + 2L(z−w)^{−2} + ∂L(z−w)^{−1}
//! L(z)W(w) ∼ 3W(z−w)^{−2} + ∂W(z−w)^{−1}
//! W(z)W(w) ∼ −2/3(z−w)^{−6} + 2L(z−w)^{−4} + ∂L(z−w)^{−3}
//!            + (8/3 :LL: − ½∂²L)(z−w)^{−2} + (4/3 ∂:LL: − ⅓∂³L)(z−w)^{−1}
//! ```

use crate::algebra::{Algebra, GenKind};
use crate::error::{Error, Result};
use crate::ope::{circle, wick};
use crate::poly::Poly;
use crate::scalar::Scalar;
use crate::state::State;

fn term(alg: &Algebra, c: Scalar, factors: &[(usize, u32)]) -> State {
    State::product_of(alg, factors).scale(&c)
}

fn sum(alg: &Algebra, parts: Vec<State>) -> State {
    parts.into_iter().fold(State::zero(alg), |acc, s| &acc + &s)
}

fn check_pair(alg: &Algebra, kind: GenKind, j: usize) -> Result<()> {
    let len = match kind {
        GenKind::Beta | GenKind::Gamma => alg.bg_pairs(),
        GenKind::B | GenKind::C => alg.bc_pairs(),
        GenKind::Heis => alg.heis_levels().len(),
    };
    if j >= len {
        return Err(Error::IndexOutOfRange { what: kind.prefix(), index: j, len });
    }
    Ok(())
}

/// `L_S` and `W_S` on βγ pair `j` (0-based):
///
/// ```text
/// L_S = ½:β²γ²: − :∂βγ: + :β∂γ:
/// W_S = √6/9 :β³γ³: − √6/2 :β∂βγ²: + √6/2 :β²γ∂γ: + √6/6 :∂²βγ: − 2√6/3 :∂β∂γ: + √6/6 :β∂²γ:
/// ```
pub fn build_ls_ws(alg: &Algebra, j: usize) -> Result<(State, State)> {
    check_pair(alg, GenKind::Beta, j)?;
    let (b, g) = (alg.beta(j), alg.gamma(j));
    let l = sum(
        alg,
        vec![
            term(alg, Scalar::from_ratio(1, 2), &[(b, 0), (b, 0), (g, 0), (g, 0)]),
            term(alg, Scalar::from_int(-1), &[(b, 1), (g, 0)]),
            term(alg, Scalar::one(), &[(b, 0), (g, 1)]),
        ],
    );
    let w = sum(
        alg,
        vec![
            term(alg, Scalar::sqrt6_ratio(1, 9), &[(b, 0), (b, 0), (b, 0), (g, 0), (g, 0), (g, 0)]),
            term(alg, Scalar::sqrt6_ratio(-1, 2), &[(b, 0), (b, 1), (g, 0), (g, 0)]),
            term(alg, Scalar::sqrt6_ratio(1, 2), &[(b, 0), (b, 0), (g, 0), (g, 1)]),
            term(alg, Scalar::sqrt6_ratio(1, 6), &[(b, 2), (g, 0)]),
            term(alg, Scalar::sqrt6_ratio(-2, 3), &[(b, 1), (g, 1)]),
            term(alg, Scalar::sqrt6_ratio(1, 6), &[(b, 0), (g, 2)]),
        ],
    );
    Ok((l, w))
}

/// `L_H = ½:j²: + ½∂j` and `W_H = √6/9 :j³: + √6/6 :j∂j: + √6/36 ∂²j` on a
/// level-1 Heisenberg field.
///
/// The `∂j` coefficient is ½: with coefficient λ the central charge is
/// `1 − 12λ²`, and c = −2 needs λ² = ¼.
pub fn build_heis_lw(alg: &Algebra, j: usize) -> Result<(State, State)> {
    check_pair(alg, GenKind::Heis, j)?;
    if !alg.heis_levels()[j].is_one() {
        return Err(Error::InvalidInput(format!(
            "Heisenberg field j{} has level {}, the realization needs level 1",
            j + 1,
            alg.heis_levels()[j]
        )));
    }
    let h = alg.heis(j);
    let l = sum(
        alg,
        vec![term(alg, Scalar::from_ratio(1, 2), &[(h, 0), (h, 0)]), term(alg, Scalar::from_ratio(1, 2), &[(h, 1)])],
    );
    let w = sum(
        alg,
        vec![
            term(alg, Scalar::sqrt6_ratio(1, 9), &[(h, 0), (h, 0), (h, 0)]),
            term(alg, Scalar::sqrt6_ratio(1, 6), &[(h, 0), (h, 1)]),
            term(alg, Scalar::sqrt6_ratio(1, 36), &[(h, 2)]),
        ],
    );
    Ok((l, w))
}

/// `L_E = :∂b c:` and `W_E = √6/6 (:∂²b c: − :∂b ∂c:)` on bc pair `j`.
pub fn build_bc_lw(alg: &Algebra, j: usize) -> Result<(State, State)> {
    check_pair(alg, GenKind::B, j)?;
    let (b, c) = (alg.b(j), alg.c(j));
    let l = term(alg, Scalar::one(), &[(b, 1), (c, 0)]);
    let w = sum(
        alg,
        vec![term(alg, Scalar::sqrt6_ratio(1, 6), &[(b, 2), (c, 0)]), term(alg, Scalar::sqrt6_ratio(-1, 6), &[(b, 1), (c, 1)])],
    );
    Ok((l, w))
}

/// One named coefficient of the W₃ OPEs.
#[derive(Clone, Debug)]
pub struct OpeCheck {
    pub label: String,
    pub expected: State,
    pub actual: State,
}

impl OpeCheck {
    pub fn holds(&self) -> bool {
        self.expected == self.actual
    }
}

/// Every coefficient of the three W₃ OPEs, expected against computed.
pub fn w3_ope_table(l: &State, w: &State) -> Result<Vec<OpeCheck>> {
    l.algebra().check_same(w.algebra())?;
    let alg = l.algebra();
    let s = |num, den| Scalar::from_ratio(num, den);
    let ll = wick(l, l)?;
    let zero = State::zero(alg);
    let mut rows: Vec<(&str, &State, &State, i64, State)> = vec![
        ("L∘₃L", l, l, 3, State::scalar(alg, s(-1, 1))),
        ("L∘₂L", l, l, 2, zero.clone()),
        ("L∘₁L", l, l, 1, l.scale(&s(2, 1))),
        ("L∘₀L", l, l, 0, l.derive()),
        ("L∘₄W", l, w, 4, zero.clone()),
        ("L∘₃W", l, w, 3, zero.clone()),
        ("L∘₂W", l, w, 2, zero.clone()),
        ("L∘₁W", l, w, 1, w.scale(&s(3, 1))),
        ("L∘₀W", l, w, 0, w.derive()),
        ("W∘₅W", w, w, 5, State::scalar(alg, s(-2, 3))),
        ("W∘₄W", w, w, 4, zero.clone()),
        ("W∘₃W", w, w, 3, l.scale(&s(2, 1))),
        ("W∘₂W", w, w, 2, l.derive()),
        ("W∘₁W", w, w, 1, &ll.scale(&s(8, 3)) - &l.derive_n(2).scale(&s(1, 2))),
        ("W∘₀W", w, w, 0, &ll.derive().scale(&s(4, 3)) - &l.derive_n(3).scale(&s(1, 3))),
    ];
    // no pole beyond the ones listed
    for n in 4..8 {
        rows.push(("L∘ₙL (n≥4)", l, l, n, zero.clone()));
    }
    for n in 5..8 {
        rows.push(("L∘ₙW (n≥5)", l, w, n, zero.clone()));
    }
    for n in 6..10 {
        rows.push(("W∘ₙW (n≥6)", w, w, n, zero.clone()));
    }
    rows.into_iter()
        .map(|(label, a, b, n, expected)| {
            let actual = circle(a, b, n)?;
            let label = if label.contains('ₙ') { format!("{label} at n={n}") } else { label.to_string() };
            Ok(OpeCheck { label, expected, actual })
        })
        .collect()
}

/// True iff `(L, W)` satisfy all W₃ OPEs at c = −2 exactly.
pub fn verify_w3_ope(l: &State, w: &State) -> Result<bool> {
    Ok(w3_ope_table(l, w)?.iter().all(OpeCheck::holds))
}

/// `(t, w)` for the highest-weight vector `v^d` together with the result of
/// checking it with the engine.
#[derive(Clone, Debug)]
pub struct HighestWeight {
    pub d: i64,
    pub alpha: i64,
    pub t: Scalar,
    pub w: Scalar,
    pub vector: State,
    pub verified: bool,
}

/// `t = ½α(α−1)`, `w = α(α−1)(2α−1)/(3√6)`.
pub fn highest_weight_formula(alpha: i64) -> (Scalar, Scalar) {
    let a = Scalar::from_int(alpha);
    let p = &a * &(&a - &Scalar::one());
    let t = &p * &Scalar::from_ratio(1, 2);
    // 1/(3√6) = √6/18
    let w = &(&p * &(&(&a * &Scalar::from_int(2)) - &Scalar::one())) * &Scalar::sqrt6_ratio(1, 18);
    (t, w)
}

/// `v^d = γ^d` for `d > 0`, `β^{−d}` for `d < 0`, the vacuum for `d = 0`.
pub fn highest_weight_vector(alg: &Algebra, d: i64) -> State {
    let gen = if d >= 0 { alg.gamma(0) } else { alg.beta(0) };
    let factors = vec![(gen, 0u32); d.unsigned_abs() as usize];
    State::product_of(alg, &factors)
}

/// Builds `v^d` in a single βγ pair and checks that it is a highest-weight
/// vector for `(L_S, W_S)` annihilated by the positive modes of `θ = −:γβ:`
/// with θ-charge `−d`.
pub fn highest_weight_data(d: i64) -> Result<HighestWeight> {
    let alg = crate::algebra::FreeAlgebraSpec::beta_gamma(1);
    let (l, w) = build_ls_ws(&alg, 0)?;
    let theta = term(&alg, Scalar::from_int(-1), &[(alg.gamma(0), 0), (alg.beta(0), 0)]);
    let alpha = if d <= 0 { d } else { d + 1 };
    let (t, wv) = highest_weight_formula(alpha);
    let v = highest_weight_vector(&alg, d);

    let mut ok = circle(&l, &v, 1)? == v.scale(&t) && circle(&w, &v, 2)? == v.scale(&wv);
    let bound = 4 + d.abs();
    for n in 2..bound {
        ok &= circle(&l, &v, n)?.is_zero();
    }
    for n in 3..bound + 1 {
        ok &= circle(&w, &v, n)?.is_zero();
    }
    for n in 1..bound {
        ok &= circle(&theta, &v, n)?.is_zero();
    }
    ok &= circle(&theta, &v, 0)? == v.scale(&Scalar::from_int(-d));
    Ok(HighestWeight { d, alpha, t, w: wv, vector: v, verified: ok })
}

/// True iff `w² − (2/27) l² (8l + 1) = 0` identically.
pub fn zhu_ideal_check(l: &Poly, w: &Poly) -> bool {
    zhu_ideal_residual(l, w).is_zero()
}

pub fn zhu_ideal_residual(l: &Poly, w: &Poly) -> Poly {
    let n = l.nvars();
    let eight_l_plus_one = &l.scale(&Scalar::from_int(8)) + &Poly::one(n);
    let rhs = (&l.pow(2) * &eight_l_plus_one).scale(&Scalar::from_ratio(2, 27));
    &w.pow(2) - &rhs
}

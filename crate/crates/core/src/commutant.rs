//! Commutants of diagonal abelian current actions inside βγ systems.
//!
//! A diagonal action of an m-dimensional abelian Lie algebra on n βγ pairs
//! is an m×n matrix `A`. Row `i` gives the current
//! `θ_i = −Σ_j A_ij :γ_j β_j:` and the invariants are the states `u` with
//! `θ_i ∘_n u = 0` for all `i` and `n ≥ 0`.

use std::collections::BTreeSet;

use crate::algebra::{Algebra, FreeAlgebraSpec};
use crate::error::{Error, Result};
use crate::linalg::{dot, dot_int, field_kernel_basis, integer_kernel_basis, nullspace, rref, solve, ActionMatrix, LatticeBasis, Vector};
use crate::ope::{circle, first_obstruction, is_primary, is_primary_up_to_central, pole_bound, wick, wick_power};
use crate::scalar::{factorial, Scalar};
use crate::state::{Factor, Monomial, State};
use crate::w3::build_ls_ws;

/// An action matrix together with the βγ algebra it acts on.
#[derive(Clone, Debug)]
pub struct DiagonalAction {
    alg: Algebra,
    matrix: ActionMatrix,
}

impl DiagonalAction {
    /// Rejects actions whose matrix does not have full row rank.
    pub fn new(matrix: ActionMatrix) -> Result<Self> {
        let alg = FreeAlgebraSpec::beta_gamma(matrix.n());
        DiagonalAction::with_algebra(alg, matrix)
    }

    pub fn with_algebra(alg: Algebra, matrix: ActionMatrix) -> Result<Self> {
        if !alg.is_pure_beta_gamma() || alg.bg_pairs() != matrix.n() {
            return Err(Error::InvalidInput(format!(
                "action with {} columns needs an algebra of exactly {} βγ pairs and nothing else",
                matrix.n(),
                matrix.n()
            )));
        }
        let rank = matrix.rank();
        if rank < matrix.m() {
            return Err(Error::RankDeficient { rank, rows: matrix.m() });
        }
        Ok(DiagonalAction { alg, matrix })
    }

    /// Shorthand for integer matrices.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        DiagonalAction::new(ActionMatrix::from_ints(rows)?)
    }

    pub fn algebra(&self) -> &Algebra {
        &self.alg
    }

    pub fn matrix(&self) -> &ActionMatrix {
        &self.matrix
    }

    pub fn n(&self) -> usize {
        self.matrix.n()
    }

    pub fn m(&self) -> usize {
        self.matrix.m()
    }

    /// `θ_i = −Σ_j A_ij :γ_j β_j:` for row `i` (0-based).
    pub fn theta(&self, i: usize) -> Result<State> {
        if i >= self.m() {
            return Err(Error::IndexOutOfRange { what: "action row", index: i, len: self.m() });
        }
        Ok(self.current(self.matrix.row(i)))
    }

    pub fn thetas(&self) -> Vec<State> {
        (0..self.m()).map(|i| self.current(self.matrix.row(i))).collect()
    }

    fn current(&self, coeffs: &[Scalar]) -> State {
        let alg = &self.alg;
        let mut s = State::zero(alg);
        for (j, a) in coeffs.iter().enumerate() {
            let gb = State::product_of(alg, &[(alg.gamma(j), 0), (alg.beta(j), 0)]);
            s = &s - &gb.scale(a);
        }
        s
    }

    /// `φ_b = −Σ_j b_j :γ_j β_j:` for a vector `b` orthogonal to every row.
    pub fn phi(&self, b: &[Scalar]) -> Result<State> {
        if b.len() != self.n() {
            return Err(Error::InvalidInput(format!("vector has length {}, expected {}", b.len(), self.n())));
        }
        if let Some(row) = (0..self.m()).find(|&i| !dot(self.matrix.row(i), b).is_zero()) {
            return Err(Error::NotInKernel { row });
        }
        Ok(self.current(b))
    }

    /// `ω_l = ∏_j β_j^{−l_j}` (for `l_j < 0`) `γ_j^{l_j}` (for `l_j > 0`).
    pub fn omega(&self, l: &[i64]) -> Result<State> {
        omega(&self.alg, l)
    }

    /// True iff `u` commutes with every current `θ_i`.
    pub fn is_invariant(&self, u: &State) -> Result<bool> {
        Ok(self.obstruction(u)?.is_none())
    }

    /// First `(row, n)` with `θ_row ∘_n u ≠ 0`, if any.
    pub fn obstruction(&self, u: &State) -> Result<Option<(usize, u32)>> {
        for (i, t) in self.thetas().iter().enumerate() {
            if let Some(n) = first_obstruction(t, u)? {
                return Ok(Some((i, n)));
            }
        }
        Ok(None)
    }

    pub fn field_kernel(&self) -> Vec<Vector> {
        field_kernel_basis(&self.matrix)
    }

    pub fn lattice(&self) -> Result<LatticeBasis> {
        integer_kernel_basis(&self.matrix)
    }

    /// Named generators of the commutant: `phi_i` for the orthogonal field
    /// kernel basis, `L_j`, `W_j` on every pair and `omega[±l]` for the
    /// lattice basis.
    pub fn generator_set(&self) -> Result<Vec<NamedState>> {
        let mut out = Vec::new();
        for (i, b) in self.field_kernel().iter().enumerate() {
            out.push(NamedState { name: format!("phi_{}", i + 1), state: self.phi(b)? });
        }
        for j in 0..self.n() {
            let (l, w) = build_ls_ws(&self.alg, j)?;
            out.push(NamedState { name: format!("L_{}", j + 1), state: l });
            out.push(NamedState { name: format!("W_{}", j + 1), state: w });
        }
        for l in self.lattice()?.vectors {
            let neg: Vec<i64> = l.iter().map(|x| -x).collect();
            out.push(NamedState { name: omega_name(&l), state: self.omega(&l)? });
            out.push(NamedState { name: omega_name(&neg), state: self.omega(&neg)? });
        }
        Ok(out)
    }

    /// Basis of the invariants of twice-α*-weight `twice_weight` and the
    /// given βγ charge, in reduced echelon form over the monomial basis.
    pub fn graded_commutant_basis(&self, twice_weight: u32, charge: &Charge) -> Result<Vec<State>> {
        let monos = weight_space(self.n(), twice_weight, charge, u32::MAX)?;
        let thetas = self.thetas();
        let max_n = 1 + twice_weight as i64 / 2;
        let columns = constraint_columns(&self.alg, &thetas, &monos, max_n)?;
        let rows = constraint_rows(&columns);
        let kernel = nullspace(&rows, monos.len());
        let (echelon, _) = rref(&kernel);
        Ok(echelon.iter().map(|v| combine(&self.alg, &monos, v)).collect())
    }

    /// `u = :θ^k: + ω` invariant with `ω` of degree at most `2k − 2`, for a
    /// single βγ pair. Lower-degree monomials are preferred and free
    /// coordinates of the correction are zero.
    pub fn quantum_correct(&self, k: u32) -> Result<State> {
        if self.n() != 1 || self.m() != 1 {
            return Err(Error::Unsupported("quantum corrections are computed for one βγ pair with a rank-1 action".into()));
        }
        if k < 2 {
            return Err(Error::InvalidInput("power must be at least 2".into()));
        }
        let theta = self.theta(0)?;
        let power = wick_power(&theta, k)?;
        let mut monos = weight_space(1, 2 * k, &Charge::Total(0), 2 * k - 2)?;
        monos.sort_by_key(|m| (m.degree(), m.clone()));
        let max_n = 1 + k as i64;
        let columns = constraint_columns(&self.alg, std::slice::from_ref(&theta), &monos, max_n)?;
        let mut keys: BTreeSet<(usize, i64, Monomial)> = columns.iter().flat_map(|c| c.keys().cloned()).collect();
        let target: Vec<((usize, i64), State)> =
            (0..max_n).map(|n| Ok(((0, n), circle(&theta, &power, n)?))).collect::<Result<_>>()?;
        for ((i, n), s) in &target {
            keys.extend(s.terms().keys().map(|m| (*i, *n, m.clone())));
        }
        let keys: Vec<_> = keys.into_iter().collect();
        let rows: Vec<Vector> = keys
            .iter()
            .map(|key| columns.iter().map(|c| c.get(key).cloned().unwrap_or_default()).collect())
            .collect();
        let rhs: Vec<Scalar> = keys.iter().map(|(_, n, m)| -target[*n as usize].1.coeff(m)).collect();
        let x = solve(&rows, &rhs, monos.len())
            .ok_or_else(|| Error::NoSolution(format!(":theta^{k}: has no invariant correction of degree ≤ {}", 2 * k - 2)))?;
        Ok(&power + &combine(&self.alg, &monos, &x))
    }

    /// Splits `u` into lattice components `c_l ω_l`; every `l` must be
    /// orthogonal to the action.
    pub fn lattice_components(&self, u: &State) -> Result<Vec<(Vec<i64>, Scalar)>> {
        let comps = lattice_decompose(u)?;
        for (l, _) in &comps {
            if let Some(row) = (0..self.m()).find(|&i| !dot_int(self.matrix.row(i), l).is_zero()) {
                return Err(Error::InvalidInput(format!("{} is not orthogonal to action row {}", omega_name(l), row + 1)));
            }
        }
        Ok(comps)
    }

    /// [`extract_lattice_unit`] restricted to invariant inputs.
    pub fn extract_unit(&self, u: &State) -> Result<UnitExtraction> {
        u.algebra().check_same(&self.alg)?;
        self.lattice_components(u)?;
        extract_lattice_unit(u)
    }

    /// `L = Σ_j L_j + Σ_i (−1/(2q_i) :φ_iφ_i: + λ_i ∂φ_i)` with
    /// `q_i = ⟨b_i, b_i⟩`; an empty `lambda` means all zeros.
    pub fn conformal_b_prime(&self, lambda: &[Scalar]) -> Result<ConformalStructure> {
        let basis = self.field_kernel();
        let lambda: Vec<Scalar> = if lambda.is_empty() { vec![Scalar::zero(); basis.len()] } else { lambda.to_vec() };
        if lambda.len() != basis.len() {
            return Err(Error::InvalidInput(format!(
                "λ has {} entries but the field kernel has dimension {}",
                lambda.len(),
                basis.len()
            )));
        }
        let mut l = State::zero(&self.alg);
        let mut c = Scalar::from_int(-2 * self.n() as i64);
        for j in 0..self.n() {
            l = &l + &build_ls_ws(&self.alg, j)?.0;
        }
        for (b, lam) in basis.iter().zip(&lambda) {
            let q = dot(b, b);
            if q.is_zero() {
                return Err(Error::InvalidInput("field kernel vector has zero norm".into()));
            }
            let phi = self.phi(b)?;
            let half_inv = (&q * &Scalar::from_int(-2)).inverse().expect("nonzero");
            l = &(&l + &wick(&phi, &phi)?.scale(&half_inv)) + &phi.derive().scale(lam);
            c = &c + &(&Scalar::one() + &(&Scalar::from_int(12) * &(&(lam * lam) * &q)));
        }
        Ok(ConformalStructure { state: l, central_charge: c })
    }

    /// Primarity of the `φ_i`, `L_j`, `W_j` generators with weights 1, 2, 3
    /// under `l`, both strictly and up to central terms.
    pub fn primary_report(&self, l: &State) -> Result<Vec<PrimaryCheck>> {
        let mut out = Vec::new();
        for g in self.generator_set()? {
            let weight = match g.name.chars().next() {
                Some('p') => 1,
                Some('L') => 2,
                Some('W') => 3,
                _ => continue,
            };
            let h = Scalar::from_int(weight);
            out.push(PrimaryCheck {
                strict: is_primary(l, &g.state, &h)?,
                up_to_central: is_primary_up_to_central(l, &g.state, &h)?,
                name: g.name,
                weight,
            });
        }
        Ok(out)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PrimaryCheck {
    pub name: String,
    pub weight: i64,
    pub strict: bool,
    pub up_to_central: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NamedState {
    pub name: String,
    pub state: State,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UnitExtraction {
    pub l: Vec<i64>,
    pub d: u32,
    pub scale: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalStructure {
    pub state: State,
    pub central_charge: Scalar,
}

/// βγ charge selector for graded probes.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Charge {
    Total(i64),
    PerPair(Vec<i64>),
}

/// Splits a state of level 0 into components `c_l ω_l`, `l ∈ Zⁿ`.
pub fn lattice_decompose(u: &State) -> Result<Vec<(Vec<i64>, Scalar)>> {
    let alg = u.algebra();
    if !alg.is_pure_beta_gamma() {
        return Err(Error::Unsupported("lattice monomials live in pure βγ algebras".into()));
    }
    let mut out = Vec::new();
    for (m, c) in u.terms() {
        let mut l = vec![0i64; alg.bg_pairs()];
        for f in m.factors() {
            let pair = alg.generator(f.gen).pair;
            let step = if f.gen == alg.gamma(pair) { f.mult as i64 } else { -(f.mult as i64) };
            if f.deriv != 0 || (l[pair] != 0 && l[pair].signum() != step.signum()) {
                return Err(Error::InvalidInput(format!(
                    "{} is not a lattice monomial",
                    State::monomial(alg, m.clone(), Scalar::one())
                )));
            }
            l[pair] += step;
        }
        out.push((l, c.clone()));
    }
    Ok(out)
}

/// For `u = Σ c_l ω_l ≠ 0`, picks `l` of maximal degree `d` (ties broken by
/// the lexicographically largest `l`) and the scale `c` with
/// `c·(ω_{−l} ∘_{d−1} u) = 1`, checked by evaluation.
pub fn extract_lattice_unit(u: &State) -> Result<UnitExtraction> {
    if u.is_zero() {
        return Err(Error::InvalidInput("cannot extract a unit from the zero state".into()));
    }
    let alg = u.algebra();
    let (l, c_l) = lattice_decompose(u)?
        .into_iter()
        .max_by(|(a, _), (b, _)| degree_of(a).cmp(&degree_of(b)).then_with(|| a.cmp(b)))
        .expect("nonzero state");
    let d = degree_of(&l);
    let scale = (&c_l * &unit_contraction(&l)).inverse().expect("nonzero");
    let neg: Vec<i64> = l.iter().map(|x| -x).collect();
    let result = circle(&omega(alg, &neg)?, u, d as i64 - 1)?.scale(&scale);
    if result != State::vacuum(alg) {
        return Err(Error::NoSolution(format!("contraction with {} gave {result}, not 1", omega_name(&neg))));
    }
    Ok(UnitExtraction { l, d, scale })
}

pub fn omega(alg: &Algebra, l: &[i64]) -> Result<State> {
    if l.len() != alg.bg_pairs() {
        return Err(Error::InvalidInput(format!("lattice vector has length {}, expected {}", l.len(), alg.bg_pairs())));
    }
    let mut factors = Vec::new();
    for (j, &x) in l.iter().enumerate() {
        let g = if x > 0 { alg.gamma(j) } else { alg.beta(j) };
        factors.extend(std::iter::repeat_n((g, 0u32), x.unsigned_abs() as usize));
    }
    Ok(State::product_of(alg, &factors))
}

pub fn omega_name(l: &[i64]) -> String {
    let parts: Vec<String> = l.iter().map(i64::to_string).collect();
    format!("omega[{}]", parts.join(","))
}

fn degree_of(l: &[i64]) -> u32 {
    l.iter().map(|x| x.unsigned_abs() as u32).sum()
}

/// `ω_{−l} ∘_{d−1} ω_l = ∏_j (−1)^{min(0,l_j)} |l_j|!`.
pub fn unit_contraction(l: &[i64]) -> Scalar {
    l.iter().fold(Scalar::one(), |acc, &x| {
        let f = Scalar::from_bigint(factorial(x.unsigned_abs() as u32));
        let f = if x < 0 && x % 2 != 0 { -f } else { f };
        &acc * &f
    })
}

/// Closed form `ω_l ∘_d ω_{l'} = coeff · ω_{l+l'}` with
/// `d = −1 + Σ d_j`, `d_j = min(|l_j|, |l'_j|)` and
/// `coeff = ∏ (−1)^{k_j} e_j!/(e_j − d_j)!` over pairs where the signs of
/// `l_j` and `l'_j` differ; `e_j = max(|l_j|, |l'_j|)` and `k_j = d_j` when
/// `l_j > 0`, else 0.
pub fn lattice_contraction(l: &[i64], lp: &[i64]) -> (i64, Scalar) {
    assert_eq!(l.len(), lp.len(), "lattice vectors of different lengths");
    let mut d = -1i64;
    let mut coeff = Scalar::one();
    for (&a, &b) in l.iter().zip(lp) {
        if a * b >= 0 {
            continue;
        }
        let dj = a.unsigned_abs().min(b.unsigned_abs()) as u32;
        let ej = a.unsigned_abs().max(b.unsigned_abs()) as u32;
        d += dj as i64;
        let ratio = Scalar::from_bigint(factorial(ej) / factorial(ej - dj));
        let kj = if a > 0 { dj } else { 0 };
        coeff = &coeff * &if kj % 2 == 1 { -ratio } else { ratio };
    }
    (d, coeff)
}

/// All monomials in `n` βγ pairs of the given twice-α*-weight and charge,
/// with degree at most `max_degree`.
pub fn weight_space(n: usize, twice_weight: u32, charge: &Charge, max_degree: u32) -> Result<Vec<Monomial>> {
    if let Charge::PerPair(v) = charge {
        if v.len() != n {
            return Err(Error::InvalidInput(format!("charge vector has length {}, expected {n}", v.len())));
        }
    }
    let alg = FreeAlgebraSpec::beta_gamma(n);
    // (generator, derivative) slots with twice-weight 1 + 2k
    let slots: Vec<(usize, u32)> =
        (0..2 * n).flat_map(|g| (0..=(twice_weight.saturating_sub(1) / 2)).map(move |k| (g, k))).collect();
    let mut out = Vec::new();
    let mut current: Vec<Factor> = Vec::new();
    enumerate(&slots, 0, twice_weight, max_degree, &mut current, &mut |fs| {
        let mut charges = vec![0i64; n];
        for f in fs {
            let pair = alg.generator(f.gen).pair;
            charges[pair] += if f.gen == alg.gamma(pair) { f.mult as i64 } else { -(f.mult as i64) };
        }
        let ok = match charge {
            Charge::Total(q) => charges.iter().sum::<i64>() == *q,
            Charge::PerPair(v) => &charges == v,
        };
        if ok {
            out.push(Monomial::from_sorted(fs.to_vec()));
        }
    });
    out.sort();
    Ok(out)
}

fn enumerate(
    slots: &[(usize, u32)],
    start: usize,
    remaining: u32,
    degree_left: u32,
    current: &mut Vec<Factor>,
    emit: &mut impl FnMut(&[Factor]),
) {
    if remaining == 0 {
        emit(current);
        return;
    }
    for idx in start..slots.len() {
        let (gen, deriv) = slots[idx];
        let w = 1 + 2 * deriv;
        let mut mult = 1;
        while mult * w <= remaining && mult <= degree_left {
            current.push(Factor { gen, deriv, mult });
            enumerate(slots, idx + 1, remaining - mult * w, degree_left - mult, current, emit);
            current.pop();
            mult += 1;
        }
    }
}

type Column = std::collections::BTreeMap<(usize, i64, Monomial), Scalar>;

/// For each basis monomial, the coefficients of `θ_i ∘_n m` for `0 ≤ n < max_n`,
/// evaluated on scoped worker threads.
fn constraint_columns(alg: &Algebra, thetas: &[State], monos: &[Monomial], max_n: i64) -> Result<Vec<Column>> {
    let column = |m: &Monomial| -> Result<Column> {
        let u = State::monomial(alg, m.clone(), Scalar::one());
        let mut col = Column::new();
        for (i, t) in thetas.iter().enumerate() {
            for n in 0..max_n.min(pole_bound(t, &u)) {
                for (mm, c) in circle(t, &u, n)?.terms() {
                    col.insert((i, n, mm.clone()), c.clone());
                }
            }
        }
        Ok(col)
    };
    let workers = std::thread::available_parallelism().map(|p| p.get()).unwrap_or(1).min(monos.len().max(1));
    let chunk = monos.len().div_ceil(workers.max(1)).max(1);
    std::thread::scope(|scope| {
        let handles: Vec<_> = monos
            .chunks(chunk)
            .map(|ms| scope.spawn(move || ms.iter().map(column).collect::<Result<Vec<_>>>()))
            .collect();
        let mut out = Vec::with_capacity(monos.len());
        for h in handles {
            out.extend(h.join().expect("constraint worker panicked")?);
        }
        Ok(out)
    })
}

fn constraint_rows(columns: &[Column]) -> Vec<Vector> {
    let keys: BTreeSet<&(usize, i64, Monomial)> = columns.iter().flat_map(|c| c.keys()).collect();
    keys.into_iter().map(|k| columns.iter().map(|c| c.get(k).cloned().unwrap_or_default()).collect()).collect()
}

fn combine(alg: &Algebra, monos: &[Monomial], coeffs: &[Scalar]) -> State {
    let mut s = State::zero(alg);
    for (m, c) in monos.iter().zip(coeffs) {
        s.add_term(m.clone(), c.clone());
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ope::verify_virasoro;

    fn s(x: i64) -> Scalar {
        Scalar::from_int(x)
    }

    #[test]
    fn theta_and_phi() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        let t = act.theta(0).unwrap();
        assert_eq!(t.to_string(), "-1*:beta1 gamma1:");
        assert_eq!(circle(&t, &t, 1).unwrap(), State::scalar(act.algebra(), s(-1)));
        assert!(act.theta(1).is_err());

        let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
        let phi = act.phi(&[s(1), s(1)]).unwrap();
        assert!(act.is_invariant(&phi).unwrap());
        assert_eq!(circle(&phi, &phi, 1).unwrap(), State::scalar(act.algebra(), s(-2)));
        assert!(matches!(act.phi(&[s(1), s(0)]), Err(Error::NotInKernel { row: 0 })));
    }

    #[test]
    fn rank_deficient_rejected() {
        let err = DiagonalAction::from_ints(&[&[1, 1], &[2, 2]]).unwrap_err();
        assert!(matches!(err, Error::RankDeficient { rank: 1, rows: 2 }));
    }

    #[test]
    fn omega_states() {
        let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
        let w = act.omega(&[2, -3]).unwrap();
        assert_eq!(w.to_string(), ":beta2 beta2 beta2 gamma1 gamma1:");
        assert_eq!(act.omega(&[0, 0]).unwrap(), State::vacuum(act.algebra()));
        let t = act.theta(0).unwrap();
        // θ∘₀ω_l = −⟨a,l⟩ω_l with ⟨(1,−1),(2,−3)⟩ = 5
        assert_eq!(circle(&t, &w, 0).unwrap(), w.scale(&s(-5)));
        assert!(!act.is_invariant(&w).unwrap());
        assert!(act.is_invariant(&act.omega(&[1, 1]).unwrap()).unwrap());
    }

    #[test]
    fn generator_sets() {
        let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
        let names: Vec<String> = act.generator_set().unwrap().into_iter().map(|g| g.name).collect();
        assert_eq!(names, ["phi_1", "L_1", "W_1", "L_2", "W_2", "omega[1,1]", "omega[-1,-1]"]);
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        assert_eq!(act.generator_set().unwrap().len(), 2);
    }

    #[test]
    fn closed_form_contractions() {
        assert_eq!(lattice_contraction(&[-2], &[3]), (1, s(6)));
        assert_eq!(lattice_contraction(&[2], &[-3]), (1, s(6)));
        assert_eq!(lattice_contraction(&[1], &[-3]), (0, s(-3)));
        assert_eq!(lattice_contraction(&[1, 2], &[0, 1]), (-1, s(1)));
    }

    #[test]
    fn weight_two_commutant_is_ls() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        let basis = act.graded_commutant_basis(4, &Charge::Total(0)).unwrap();
        assert_eq!(basis.len(), 1);
        let (l, _) = build_ls_ws(act.algebra(), 0).unwrap();
        assert_eq!(basis[0], l.scale(&s(2)));
    }

    #[test]
    fn quadratic_correction() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        let u = act.quantum_correct(2).unwrap();
        let (l, _) = build_ls_ws(act.algebra(), 0).unwrap();
        assert_eq!(u, l.scale(&s(2)));
        let u3 = act.quantum_correct(3).unwrap();
        assert!(act.is_invariant(&u3).unwrap());
    }

    #[test]
    fn unit_extraction() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        let beta2 = act.omega(&[-2]).unwrap();
        assert!(act.extract_unit(&beta2).is_err());
        let ex = extract_lattice_unit(&beta2).unwrap();
        assert_eq!((ex.l.clone(), ex.d, ex.scale.clone()), (vec![-2], 2, Scalar::from_ratio(1, 2)));
        let ex = act.extract_unit(&State::vacuum(act.algebra())).unwrap();
        assert_eq!((ex.d, ex.scale), (0, Scalar::one()));

        let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
        let u = &act.omega(&[1, 1]).unwrap() + &State::scalar(act.algebra(), s(5));
        let ex = act.extract_unit(&u).unwrap();
        assert_eq!((ex.l, ex.d), (vec![1, 1], 2));
        assert!(act.extract_unit(&act.omega(&[1, -1]).unwrap()).is_err());
        assert!(act.extract_unit(&State::zero(act.algebra())).is_err());
    }

    #[test]
    fn conformal_structure() {
        let act = DiagonalAction::from_ints(&[&[1]]).unwrap();
        let cs = act.conformal_b_prime(&[]).unwrap();
        assert_eq!(cs.central_charge, s(-2));
        assert!(verify_virasoro(&cs.state, &cs.central_charge).unwrap());

        let act = DiagonalAction::from_ints(&[&[1, -1]]).unwrap();
        let cs = act.conformal_b_prime(&[s(0)]).unwrap();
        assert_eq!(cs.central_charge, s(-3));
        assert!(verify_virasoro(&cs.state, &cs.central_charge).unwrap());
        let report = act.primary_report(&cs.state).unwrap();
        assert!(report.iter().all(|p| p.up_to_central));
        // L∘₃L = −1 keeps every L_j from being strictly primary
        let strict: Vec<bool> = report.iter().map(|p| p.strict).collect();
        assert_eq!(strict, [true, false, true, false, true]);

        let cs = act.conformal_b_prime(&[s(1)]).unwrap();
        assert_eq!(cs.central_charge, s(-3 + 24));
        assert!(verify_virasoro(&cs.state, &cs.central_charge).unwrap());
        let report = act.primary_report(&cs.state).unwrap();
        assert!(report.iter().all(|p| p.up_to_central));
        // the ∂φ term adds the anomaly φ∘₂ = 2λq
        assert!(!report[0].strict);
    }
}

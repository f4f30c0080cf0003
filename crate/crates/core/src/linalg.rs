//! Exact linear algebra over Q(√6) and integer lattice kernels.

use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::scalar::Scalar;

pub type Vector = Vec<Scalar>;

/// An m×n action matrix; row `i` lists the diagonal weights of `ξ^i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ActionMatrix {
    rows: Vec<Vector>,
}

#[derive(Serialize, Deserialize)]
struct ActionFile {
    rows: Vec<Vec<Scalar>>,
}

impl ActionMatrix {
    pub fn new(rows: Vec<Vector>) -> Result<Self> {
        let n = rows.first().map(Vec::len).unwrap_or(0);
        if rows.is_empty() || n == 0 {
            return Err(Error::InvalidInput("action matrix needs at least one row and one column".into()));
        }
        if rows.iter().any(|r| r.len() != n) {
            return Err(Error::InvalidInput("action matrix rows have different lengths".into()));
        }
        Ok(ActionMatrix { rows })
    }

    /// Integer entries, mostly for tests and examples.
    pub fn from_ints(rows: &[&[i64]]) -> Result<Self> {
        ActionMatrix::new(rows.iter().map(|r| r.iter().map(|&x| Scalar::from_int(x)).collect()).collect())
    }

    /// Parses `{"rows": [["1","-1"], …]}`; entries are scalar literals.
    pub fn from_json(text: &str) -> Result<Self> {
        let file: ActionFile = serde_json::from_str(text)?;
        ActionMatrix::new(file.rows)
    }

    pub fn from_path(path: &Path) -> Result<Self> {
        ActionMatrix::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&ActionFile { rows: self.rows.clone() }).expect("action serialization")
    }

    pub fn rows(&self) -> &[Vector] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &Vector {
        &self.rows[i]
    }

    /// Number of rows `m`.
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    /// Number of columns `n`.
    pub fn n(&self) -> usize {
        self.rows[0].len()
    }

    pub fn rank(&self) -> usize {
        rank(&self.rows)
    }

    pub fn is_full_rank(&self) -> bool {
        self.rank() == self.m()
    }
}

pub fn dot(a: &[Scalar], b: &[Scalar]) -> Scalar {
    a.iter().zip(b).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * y))
}

pub fn dot_int(a: &[Scalar], l: &[i64]) -> Scalar {
    a.iter().zip(l).fold(Scalar::zero(), |acc, (x, y)| &acc + &(x * &Scalar::from_int(*y)))
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
pub fn rref(rows: &[Vector]) -> (Vec<Vector>, Vec<usize>) {
    let mut m: Vec<Vector> = rows.to_vec();
    let ncols = m.first().map(Vec::len).unwrap_or(0);
    let mut pivots = Vec::new();
    let mut r = 0;
    for col in 0..ncols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][col].is_zero()) else { continue };
        m.swap(r, p);
        let inv = m[r][col].inverse().expect("nonzero pivot");
        for x in m[r].iter_mut() {
            *x *= &inv;
        }
        let pivot_row = m[r].clone();
        for (i, row) in m.iter_mut().enumerate() {
            if i != r && !row[col].is_zero() {
                let f = row[col].clone();
                for (x, y) in row.iter_mut().zip(&pivot_row) {
                    *x -= &(&f * y);
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

pub fn rank(rows: &[Vector]) -> usize {
    rref(rows).1.len()
}

/// Basis of `{v : row·v = 0 for every row}`; one vector per free column,
/// with a 1 in that column.
pub fn nullspace(rows: &[Vector], ncols: usize) -> Vec<Vector> {
    let (r, pivots) = rref(rows);
    (0..ncols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![Scalar::zero(); ncols];
            v[free] = Scalar::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -&row[free];
            }
            v
        })
        .collect()
}

/// A solution of `rows·x = rhs` with every free variable set to zero.
pub fn solve(rows: &[Vector], rhs: &[Scalar], ncols: usize) -> Option<Vector> {
    let aug: Vec<Vector> = rows
        .iter()
        .zip(rhs)
        .map(|(r, b)| {
            let mut r = r.clone();
            r.push(b.clone());
            r
        })
        .collect();
    let (r, pivots) = rref(&aug);
    if pivots.last() == Some(&ncols) {
        return None;
    }
    let mut x = vec![Scalar::zero(); ncols];
    for (row, &p) in r.iter().zip(&pivots) {
        x[p] = row[ncols].clone();
    }
    Some(x)
}

fn normalize_sign(v: &mut [Scalar]) {
    if let Some(first) = v.iter().find(|x| !x.is_zero()) {
        if first.is_negative() {
            for x in v.iter_mut() {
                *x = -&*x;
            }
        }
    }
}

/// Basis of the field kernel of `a`, orthogonalized (not normalized) for the
/// standard symmetric pairing; each vector's first nonzero entry is positive.
pub fn field_kernel_basis(a: &ActionMatrix) -> Vec<Vector> {
    gram_schmidt(nullspace(a.rows(), a.n()))
}

pub fn gram_schmidt(vectors: Vec<Vector>) -> Vec<Vector> {
    let mut out: Vec<Vector> = Vec::new();
    for v in vectors {
        let mut w = v;
        for u in &out {
            let f = &dot(&w, u) / &dot(u, u);
            for (x, y) in w.iter_mut().zip(u) {
                *x -= &(&f * y);
            }
        }
        if w.iter().all(Scalar::is_zero) {
            continue;
        }
        normalize_sign(&mut w);
        out.push(w);
    }
    out
}

/// Integer basis of `A⊥ ∩ Zⁿ` in canonical row Hermite normal form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LatticeBasis {
    pub vectors: Vec<Vec<i64>>,
}

impl LatticeBasis {
    pub fn rank(&self) -> usize {
        self.vectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vectors.is_empty()
    }
}

/// Integer constraint rows equivalent to `⟨a^i, l⟩ = 0` for integer `l`:
/// the rational and √6 parts of each row, denominators cleared.
fn integer_constraints(a: &ActionMatrix) -> Vec<Vec<BigInt>> {
    let mut out = Vec::new();
    for row in a.rows() {
        for part in [row.iter().map(|x| x.rat().clone()).collect::<Vec<_>>(), row.iter().map(|x| x.irr().clone()).collect()] {
            let den = part.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
            let ints: Vec<BigInt> = part.iter().map(|x| x.numer() * (&den / x.denom())).collect();
            if ints.iter().any(|x| !x.is_zero()) {
                out.push(ints);
            }
        }
    }
    out
}

/// Kernel of an integer matrix: column-reduce `c` while tracking the
/// unimodular transform; the transform columns above zero columns span the
/// kernel lattice.
fn integer_kernel(c: &[Vec<BigInt>], n: usize) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = c.to_vec();
    // u[j] is the j-th column of the transform, stored as a vector
    let mut u: Vec<Vec<BigInt>> = (0..n)
        .map(|j| (0..n).map(|i| if i == j { BigInt::one() } else { BigInt::zero() }).collect())
        .collect();
    let mut col = 0;
    for row in 0..m.len() {
        if col == n {
            break;
        }
        loop {
            // smallest nonzero |entry| among remaining columns of this row
            let Some(p) = (col..n).filter(|&j| !m[row][j].is_zero()).min_by_key(|&j| m[row][j].abs()) else { break };
            swap_cols(&mut m, &mut u, col, p);
            let mut done = true;
            for j in col + 1..n {
                if m[row][j].is_zero() {
                    continue;
                }
                let q = m[row][j].div_floor(&m[row][col]);
                add_col_multiple(&mut m, &mut u, j, col, &(-q));
                if !m[row][j].is_zero() {
                    done = false;
                }
            }
            if done {
                col += 1;
                break;
            }
        }
    }
    u.into_iter().skip(col).collect()
}

fn swap_cols(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], a: usize, b: usize) {
    if a == b {
        return;
    }
    for r in m.iter_mut() {
        r.swap(a, b);
    }
    u.swap(a, b);
}

/// column[dst] += f · column[src]
fn add_col_multiple(m: &mut [Vec<BigInt>], u: &mut [Vec<BigInt>], dst: usize, src: usize, f: &BigInt) {
    for r in m.iter_mut() {
        let add = &r[src] * f;
        r[dst] += add;
    }
    let add: Vec<BigInt> = u[src].iter().map(|x| x * f).collect();
    for (x, y) in u[dst].iter_mut().zip(add) {
        *x += y;
    }
}

/// Row Hermite normal form: positive pivots, entries above each pivot
/// reduced into `[0, pivot)`, zero rows dropped.
pub fn hermite_normal_form(rows: &[Vec<BigInt>]) -> Vec<Vec<BigInt>> {
    let mut m: Vec<Vec<BigInt>> = rows.to_vec();
    let ncols = m.first().map(Vec::len).unwrap_or(0);
    let mut r = 0;
    for col in 0..ncols {
        if r == m.len() {
            break;
        }
        loop {
            let Some(p) = (r..m.len()).filter(|&i| !m[i][col].is_zero()).min_by_key(|&i| m[i][col].abs()) else { break };
            m.swap(r, p);
            let mut done = true;
            for i in r + 1..m.len() {
                if m[i][col].is_zero() {
                    continue;
                }
                let q = m[i][col].div_floor(&m[r][col]);
                let pivot_row = m[r].clone();
                for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                    *x -= &q * y;
                }
                if !m[i][col].is_zero() {
                    done = false;
                }
            }
            if done {
                break;
            }
        }
        if r < m.len() && !m[r][col].is_zero() {
            if m[r][col].is_negative() {
                for x in m[r].iter_mut() {
                    *x = -&*x;
                }
            }
            let pivot_row = m[r].clone();
            for i in 0..r {
                let q = m[i][col].div_floor(&pivot_row[col]);
                if !q.is_zero() {
                    for (x, y) in m[i].iter_mut().zip(&pivot_row) {
                        *x -= &q * y;
                    }
                }
            }
            r += 1;
        }
    }
    m.truncate(r);
    m
}

/// Basis of the lattice `{l ∈ Zⁿ : ⟨a^i, l⟩ = 0 ∀i}`.
pub fn integer_kernel_basis(a: &ActionMatrix) -> Result<LatticeBasis> {
    let n = a.n();
    let c = integer_constraints(a);
    let kernel = integer_kernel(&c, n);
    let hnf = hermite_normal_form(&kernel);
    let vectors = hnf
        .into_iter()
        .map(|v| {
            v.iter()
                .map(|x| x.to_i64().ok_or_else(|| Error::Unsupported("lattice basis entry exceeds i64".into())))
                .collect::<Result<Vec<i64>>>()
        })
        .collect::<Result<_>>()?;
    Ok(LatticeBasis { vectors })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(v: &[i64]) -> Vector {
        v.iter().map(|&x| Scalar::from_int(x)).collect()
    }

    #[test]
    fn field_kernels() {
        let a = ActionMatrix::from_ints(&[&[1, 1]]).unwrap();
        assert_eq!(field_kernel_basis(&a), vec![ints(&[1, -1])]);
        let a = ActionMatrix::from_ints(&[&[1, 0, 0]]).unwrap();
        assert_eq!(field_kernel_basis(&a), vec![ints(&[0, 1, 0]), ints(&[0, 0, 1])]);
        let a = ActionMatrix::from_ints(&[&[1, 1], &[1, -1]]).unwrap();
        assert!(field_kernel_basis(&a).is_empty());
        let a = ActionMatrix::from_ints(&[&[1, 1, 1]]).unwrap();
        let b = field_kernel_basis(&a);
        assert_eq!(b.len(), 2);
        assert!(dot(&b[0], &b[1]).is_zero());
    }

    #[test]
    fn lattice_kernels() {
        let a = ActionMatrix::from_ints(&[&[1, -1]]).unwrap();
        assert_eq!(integer_kernel_basis(&a).unwrap().vectors, vec![vec![1, 1]]);
        let a = ActionMatrix::from_ints(&[&[1, 1, 1]]).unwrap();
        assert_eq!(integer_kernel_basis(&a).unwrap().vectors, vec![vec![1, 0, -1], vec![0, 1, -1]]);
        let a = ActionMatrix::new(vec![vec![Scalar::one(), Scalar::sqrt6()]]).unwrap();
        assert!(integer_kernel_basis(&a).unwrap().is_empty());
        let a = ActionMatrix::from_ints(&[&[2, 4, 6]]).unwrap();
        assert_eq!(integer_kernel_basis(&a).unwrap().vectors, vec![vec![1, 1, -1], vec![0, 3, -2]]);
    }

    #[test]
    fn solve_sets_free_variables_to_zero() {
        let rows = vec![ints(&[1, 1, 0])];
        assert_eq!(solve(&rows, &[Scalar::from_int(3)], 3), Some(ints(&[3, 0, 0])));
        let rows = vec![ints(&[1, 1]), ints(&[1, 1])];
        assert_eq!(solve(&rows, &[Scalar::one(), Scalar::from_int(2)], 2), None);
    }

    #[test]
    fn json_rows() {
        let a = ActionMatrix::from_json(r#"{"rows": [["1","-1"],["1/2","3"]]}"#).unwrap();
        assert_eq!(a.m(), 2);
        assert_eq!(a.row(1)[0], Scalar::from_ratio(1, 2));
        assert_eq!(ActionMatrix::from_json(&a.to_json()).unwrap(), a);
        assert!(ActionMatrix::from_json(r#"{"rows": [["1"],["1","2"]]}"#).is_err());
    }
}

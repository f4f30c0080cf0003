use freefield::commutant::{lattice_contraction, omega, omega_name};
use freefield::linalg::{hermite_normal_form, integer_kernel_basis, ActionMatrix};
use freefield::ope::circle;
use freefield::{FreeAlgebraSpec, Result, Scalar};
use num_bigint::BigInt;

fn main() -> Result<()> {
    let matrices = [
        ActionMatrix::from_ints(&[&[1, -1]])?,
        ActionMatrix::from_ints(&[&[1, 1, 1]])?,
        ActionMatrix::from_ints(&[&[2, 4, -6], &[0, 3, 3]])?,
        ActionMatrix::new(vec![vec![Scalar::one(), Scalar::sqrt6()]])?,
    ];
    for a in &matrices {
        println!("{} -> {:?}", a.to_json(), integer_kernel_basis(a)?.vectors);
    }
    let rows: Vec<Vec<BigInt>> = [[4, 6, 2], [2, 2, 0], [6, 9, 3]]
        .iter()
        .map(|r| r.iter().map(|&x| BigInt::from(x)).collect())
        .collect();
    println!("HNF: {:?}", hermite_normal_form(&rows));

    // closed-form contraction against the engine
    let alg = FreeAlgebraSpec::beta_gamma(2);
    for (l, lp) in [([1, 0], [-1, 0]), ([2, -1], [-1, 1]), ([-2, 1], [3, 0])] {
        let (d, c) = lattice_contraction(&l, &lp);
        let sum = [l[0] + lp[0], l[1] + lp[1]];
        let engine = circle(&omega(&alg, &l)?, &omega(&alg, &lp)?, d)?;
        let agrees = engine == omega(&alg, &sum)?.scale(&c);
        println!("{} o{d} {} = {c} {}  ({agrees})", omega_name(&l), omega_name(&lp), omega_name(&sum));
    }
    Ok(())
}

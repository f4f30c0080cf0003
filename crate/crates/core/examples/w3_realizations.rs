//! The three free field realizations of W3 at central charge -2.

use freefield::w3::{build_bc_lw, build_heis_lw, build_ls_ws, w3_ope_table};
use freefield::{FreeAlgebraSpec, Result, Scalar};

fn main() -> Result<()> {
    let pairs = [
        ("beta-gamma", build_ls_ws(&FreeAlgebraSpec::beta_gamma(1), 0)?),
        ("Heisenberg", build_heis_lw(&FreeAlgebraSpec::heisenberg(vec![Scalar::one()]), 0)?),
        ("bc", build_bc_lw(&FreeAlgebraSpec::bc(1), 0)?),
    ];
    for (name, (l, w)) in pairs {
        println!("{name}:\n  L = {l}\n  W = {w}");
        let table = w3_ope_table(&l, &w)?;
        let bad: Vec<_> = table.iter().filter(|r| !r.holds()).map(|r| r.label.clone()).collect();
        if bad.is_empty() {
            println!("  all {} coefficients agree", table.len());
        } else {
            println!("  mismatches: {}", bad.join(", "));
        }
    }
    Ok(())
}

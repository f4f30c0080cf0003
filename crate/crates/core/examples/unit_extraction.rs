//! Recovering a lattice unit from a level-zero combination on both the
//! vertex and the Weyl side.

use freefield::commutant::{extract_lattice_unit, omega};
use freefield::ope::circle;
use freefield::transvect::{star_extract_lattice_unit, star_k_weyl};
use freefield::weyl::WeylElement;
use freefield::{FreeAlgebraSpec, Result, Scalar, State};

fn main() -> Result<()> {
    let alg = FreeAlgebraSpec::beta_gamma(2);
    let terms: [(&[i64], Scalar); 3] =
        [(&[1, 1], Scalar::from_int(3)), (&[2, -1], Scalar::from_ratio(-1, 2)), (&[0, 0], Scalar::from_int(5))];
    let mut u = State::zero(&alg);
    let mut w = WeylElement::zero(2);
    for (l, c) in &terms {
        u = &u + &omega(&alg, l)?.scale(c);
        w = &w + &WeylElement::lattice(l).scale(c);
    }
    println!("u = {u}");
    let ex = extract_lattice_unit(&u)?;
    let neg: Vec<i64> = ex.l.iter().map(|x| -x).collect();
    let one = circle(&omega(&alg, &neg)?, &u, ex.d as i64 - 1)?.scale(&ex.scale);
    println!("vertex side: l = {:?}, d = {}, scale {} gives {one}", ex.l, ex.d, ex.scale);

    println!("w = {w}");
    let wx = star_extract_lattice_unit(&w)?;
    let wone = star_k_weyl(&WeylElement::lattice(&neg), &w, wx.d as i64 - 1)?.scale(&wx.scale);
    println!("Weyl side:   l = {:?}, d = {}, scale {} gives {wone}", wx.l, wx.d, wx.scale);
    Ok(())
}

//! Zhu images of the W3 fields and the cokernel of the Zhu map in degree
//! up to D.

use freefield::commutant::DiagonalAction;
use freefield::w3::{build_ls_ws, zhu_ideal_residual};
use freefield::zhu::{cokernel_probe, zhu_image};
use freefield::{Result, Scalar};

fn main() -> Result<()> {
    let act = DiagonalAction::from_ints(&[&[1]])?;
    let (l, w) = build_ls_ws(act.algebra(), 0)?;
    for a in ["0", "1/2", "1"] {
        let alpha = [a.parse::<Scalar>()?];
        let zl = zhu_image(&l, &alpha)?;
        let zw = zhu_image(&w, &alpha)?;
        println!("alpha = {a}: [L] = {zl}   [W] = {zw}");
        if let (Some(pl), Some(pw)) = (zl.to_euler_poly(), zw.to_euler_poly()) {
            println!("    in e: [L] = {pl}, [W] = {pw}, ideal residual {}", zhu_ideal_residual(&pl, &pw));
        }
    }
    for d in [3, 6] {
        let r = cokernel_probe(&act, &[Scalar::from_ratio(1, 2)], d)?;
        let reps: Vec<String> = r.representatives.iter().map(|p| p.to_string()).collect();
        println!("D = {d}: image {}/{}, complement [{}], theta fills it: {}", r.image_dim, r.ambient_dim, reps.join(", "), r.theta_covers);
    }
    Ok(())
}

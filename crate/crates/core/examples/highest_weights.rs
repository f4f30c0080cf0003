use freefield::w3::highest_weight_data;
use freefield::Result;

fn main() -> Result<()> {
    println!("{:>3} {:>6} {:>14}  verified", "d", "t", "w");
    for d in -4..=4 {
        let h = highest_weight_data(d)?;
        println!("{:>3} {:>6} {:>14}  {}", d, h.t.to_string(), h.w.to_string(), h.verified);
    }
    Ok(())
}

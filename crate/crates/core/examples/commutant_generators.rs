//! Generators of the commutant for several diagonal actions, each checked
//! for invariance.

use freefield::selftest::sample_actions;
use freefield::Result;

fn main() -> Result<()> {
    for act in sample_actions()? {
        let rows: Vec<String> = act.matrix().rows()[0].iter().map(|x| x.to_string()).collect();
        println!("action ({}) on {} pairs", rows.join(", "), act.n());
        for g in act.generator_set()? {
            let mark = if act.is_invariant(&g.state)? { "ok" } else { "NOT INVARIANT" };
            println!("  {:<14} {mark}", g.name);
        }
    }
    Ok(())
}

fn main() {
    let results = freefield::selftest::run(&[]);
    for r in &results {
        println!("{} {:>2} {}: {}", if r.passed { "PASS" } else { "FAIL" }, r.id, r.title, r.detail);
    }
    let failed = results.iter().filter(|r| !r.passed).count();
    println!("{} of {} checks pass", results.len() - failed, results.len());
}

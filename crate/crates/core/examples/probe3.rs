// Full validation harness at acceptance scale, timed.

use std::time::Instant;

fn main() {
    let t0 = Instant::now();
    let report = quditmem::analysis::validate(7, 1e-8, 20).unwrap();
    println!("{}", report.render_text());
    println!("elapsed: {:.1?}", t0.elapsed());
}

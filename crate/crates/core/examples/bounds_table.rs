//! Best known bounds for q = 2, 4 ≤ n ≤ 12, 2 ≤ t ≤ 4, with sources, plus
//! the comparison between the main theorem and the Drake–Freeman bound.
//!
//!     cargo run --example bounds_table

use spreadlab::bounds::{best_known, compare_bounds, main_bound, SpreadParams};

fn main() {
    println!("{:>3} {:>3} {:>3} {:>8} {:>8}  source", "q", "n", "t", "lower", "upper");
    for n in 4..=12 {
        for t in 2..=4 {
            if t >= n {
                continue;
            }
            let r = best_known(&SpreadParams::new(2, n, t).unwrap());
            let source = r.exact.as_ref().map_or("interval".to_string(), |e| e.source.to_string());
            println!("{:>3} {:>3} {:>3} {:>8} {:>8}  {source}", 2, n, t, r.lower, r.best_upper);
        }
    }

    println!();
    for (q, n, t) in [(2, 8, 3), (3, 10, 4), (2, 17, 13), (2, 18, 14), (2, 19, 15)] {
        let p = SpreadParams::new(q, n, t).unwrap();
        let diff = compare_bounds(&p).map_or("n/a (needs t ≥ 2r)".to_string(), |d| d.to_string());
        println!("({q},{n},{t}): main bound {}, main - drake_freeman = {diff}", main_bound(&p).unwrap());
    }
}

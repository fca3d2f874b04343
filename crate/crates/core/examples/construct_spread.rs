//! Builds partial spreads attaining the classical lower bound and verifies
//! them.
//!
//!     cargo run --example construct_spread [-- Q N T]

use spreadlab::bounds::{lower_bound, SpreadParams};
use spreadlab::construct::build_lower_bound_spread;

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let grid = match args[..] {
        [q, n, t] => vec![(q, n as u32, t as u32)],
        _ => vec![(2, 7, 3), (2, 8, 3), (3, 6, 2), (3, 7, 3), (4, 5, 2)],
    };
    for (q, n, t) in grid {
        let p = SpreadParams::new(q, n, t).unwrap();
        let s = build_lower_bound_spread(&p).unwrap();
        println!(
            "({q},{n},{t}): {} members (lower bound {}), {:?}",
            s.len(),
            lower_bound(&p),
            s.status()
        );
    }
    let s = build_lower_bound_spread(&SpreadParams::new(2, 4, 2).unwrap()).unwrap();
    println!("\nspread file for (2,4,2):\n{}", serde_json::to_string(&s).unwrap());
}

//! Exhaustive maximum partial spread search at small parameters, compared
//! against the best known values.
//!
//!     cargo run --release --example search_oracle [-- THREADS]

use spreadlab::bounds::{best_known, SpreadParams};
use spreadlab::search::{greedy_spread, max_partial_spread_threads, SearchBudget};

fn main() {
    let threads = std::env::args()
        .nth(1)
        .and_then(|s| s.parse().ok())
        .unwrap_or(1);
    let budget = SearchBudget::default();
    for (q, n, t) in [(2, 4, 2), (2, 5, 2), (2, 5, 3), (2, 6, 3), (3, 4, 2), (2, 6, 2)] {
        let p = SpreadParams::new(q, n, t).unwrap();
        let r = max_partial_spread_threads(&p, &budget, threads);
        let known = best_known(&p);
        let exact = known.exact.map(|e| e.value.to_string()).unwrap_or("-".into());
        println!(
            "({q},{n},{t})  search {:>3} {:<16} known {:>3}  nodes {:>9}  {:.3}s  greedy(seed 0) {}",
            r.best_size,
            format!("{:?}", r.status),
            exact,
            r.nodes_explored,
            r.wall_time,
            greedy_spread(&p, 0).len(),
        );
    }
}

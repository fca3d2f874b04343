//! Completes a constructed spread to a vector space partition and tallies
//! how many parts of each dimension every hyperplane contains.
//!
//!     cargo run --release --example hyperplane_profile [-- Q N T]

use spreadlab::bounds::SpreadParams;
use spreadlab::construct::build_lower_bound_spread;
use spreadlab::partition::{heden_check, hyperplane_profile, partition_from_spread, verify_partition, DEFAULT_POINT_BUDGET};

fn main() {
    let args: Vec<u64> = std::env::args().skip(1).filter_map(|s| s.parse().ok()).collect();
    let (q, n, t) = match args[..] {
        [q, n, t] => (q, n as u32, t as u32),
        _ => (2, 8, 3),
    };
    let spread = build_lower_bound_spread(&SpreadParams::new(q, n, t).unwrap()).unwrap();
    let part = partition_from_spread(&spread).unwrap();
    println!("partition type {}", part.type_string());
    println!("cover check: {:?}", verify_partition(&part, DEFAULT_POINT_BUDGET).unwrap());
    if let Some(v) = heden_check(&part) {
        println!("Heden case {:?}: need at least {}, satisfied {}", v.case, v.required_min, v.satisfied);
    }
    let prof = hyperplane_profile(&part).unwrap();
    let sum = prof.summary();
    println!("{} hyperplanes, b indexed by dims {:?}", sum.hyperplanes, sum.dims);
    for ty in sum.types {
        println!("  b = {:?} on {} hyperplanes", ty.b, ty.s);
    }
}

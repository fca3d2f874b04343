//! Emits the certificate for μ_2(8,3) ≤ 34, checks it, then shows that an
//! edited copy is rejected.
//!
//!     cargo run --example descent_certificate

use num_bigint::BigInt;
use spreadlab::bounds::SpreadParams;
use spreadlab::partition::{check_certificate, descent_certificate};

fn main() {
    let p = SpreadParams::new(2, 8, 3).unwrap();
    let cert = descent_certificate(&p, Some(BigInt::from(2))).unwrap();
    println!("{}", serde_json::to_string_pretty(&cert).unwrap());
    println!("check: {:?}", check_certificate(&cert));

    let mut bad = cert.clone();
    bad.claimed_bound = BigInt::from(33);
    println!("edited bound: {:?}", check_certificate(&bad));

    let p = SpreadParams::new(3, 10, 4).unwrap();
    let cert = descent_certificate(&p, None).unwrap();
    println!("(3,10,4) default x = {}: bound {}, {:?}", cert.x, cert.claimed_bound, check_certificate(&cert));
}

//! Canonical subspaces over GF(2): reduced row echelon bases, intersections,
//! joins, annihilators and counting by Gaussian binomials.
//!
//!     cargo run --example subspaces

use spreadlab::gf::Field;
use spreadlab::linalg::{enumerate_subspaces, gaussian_binomial, hyperplanes, contains, Subspace};

fn main() {
    let f = Field::new(2, 1).unwrap();
    let a = Subspace::span(&f, 4, &[vec![1, 1, 0, 0], vec![0, 1, 1, 0]]).unwrap();
    let b = Subspace::span(&f, 4, &[vec![0, 0, 1, 1], vec![1, 0, 0, 1]]).unwrap();
    println!("A = {:?}", a.rows());
    println!("B = {:?}", b.rows());
    println!("dim(A ∩ B) = {}", a.intersect_dim(&b).unwrap());
    println!("dim(A + B) = {}", a.join(&b).unwrap().dim());
    println!("A^⊥ = {:?}", a.annihilator().rows());
    let inside = hyperplanes(4, &f).filter(|h| contains(h, &a)).count();
    println!("hyperplanes containing A: {inside}");

    for k in 0..=4 {
        let listed = enumerate_subspaces(4, k, &f, 1 << 20).unwrap().count();
        println!("[4 choose {k}]_2 = {} (enumerated {listed})", gaussian_binomial(4, k as u32, 2));
    }
}

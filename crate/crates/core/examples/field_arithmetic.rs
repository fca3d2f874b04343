//! Arithmetic in GF(9) and in the extension GF(16) over GF(4).
//!
//!     cargo run --example field_arithmetic

use spreadlab::gf::{ExtField, Field};

fn main() {
    let f = Field::new(3, 2).unwrap();
    println!("GF(9) modulus (low to high): {:?}", f.modulus());
    let a = f.element(4).unwrap();
    let b = f.element(7).unwrap();
    println!("4 + 7 = {:?}", f.add(a, b).unwrap());
    println!("4 * 7 = {:?}", f.mul(a, b).unwrap());
    println!("4^-1 = {:?}", f.inv(a).unwrap());
    println!("4^8 = {:?}", f.pow(a, 8).unwrap());
    println!("1 / 0 -> {}", f.inv(f.zero()).unwrap_err());

    let base = Field::new(2, 2).unwrap();
    let ext = ExtField::new(&base, 2).unwrap();
    let g = ext.generator();
    println!("GF(16) over GF(4): modulus {:?}", ext.modulus());
    for k in 0..4 {
        let x = ext.pow(g, k).unwrap();
        println!("  g^{k} = {:?}", ext.coord(x).unwrap());
    }
}

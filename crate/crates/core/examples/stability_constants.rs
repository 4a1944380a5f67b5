//! Table of leading-term stability constants.

use meroconn::reduction::stability::{known_sharp, stability_constant};

fn main() {
    print!("n\\r");
    for r in 1..=5 {
        print!("{r:>8}");
    }
    println!();
    for n in 1..=4 {
        print!("{n:<3}");
        for r in 1..=5 {
            print!("{:>8}", stability_constant(n, r));
        }
        println!();
    }
    println!("sharp value known for (2, 2): {:?}", known_sharp(2, 2));
}

//! Seeded random generation is reproducible: the same seed and index always
//! give the same model.

use gtmodal::generate::{iteration_rng, random_gtf, random_gtn, Shape};
use gtmodal::gtn::validate_gtn;

fn main() {
    let shape = Shape::default().with_worlds(2, 5);
    let a = random_gtf(&mut iteration_rng(42, 0), &shape);
    let b = random_gtf(&mut iteration_rng(42, 0), &shape);
    assert_eq!(a, b);
    println!(
        "GTF model with {} worlds, {} opens, valid: {}",
        a.frame.universe(),
        a.topology().opens().len(),
        a.validate().valid()
    );

    let valid = (0..100)
        .filter(|i| validate_gtn(&random_gtn(&mut iteration_rng(42, *i), &shape)).valid())
        .count();
    println!("{valid}/100 random GTN-models are valid");
}

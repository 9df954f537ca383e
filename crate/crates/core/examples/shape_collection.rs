//! Analysing a collection of shapes in one shared feature space: distance
//! matrix, nearest neighbour and mean shape.
//!
//! `cargo run --release --example shape_collection`

use std::f64::consts::TAU;

use kdist::collection::{distance_matrix, mean_shape_embedding, nearest_neighbor, Embedding, ShapeCollection};
use kdist::{curve_atoms, embed_current, sample_feature_map, PolyCurve};

fn ellipse(a: f64, b: f64) -> PolyCurve {
    let pts = (0..=48)
        .map(|i| {
            let t = TAU * i as f64 / 48.0;
            vec![a * t.cos(), b * t.sin()]
        })
        .collect();
    PolyCurve::new(pts).expect("distinct vertices")
}

fn main() -> kdist::Result<()> {
    let f = sample_feature_map(0.5, 2, 1024, 42)?;
    let mut c = ShapeCollection::new(f.clone());
    for (name, a, b) in [
        ("circle", 1.0, 1.0),
        ("wide", 1.5, 0.7),
        ("tall", 0.7, 1.5),
        ("small", 0.5, 0.5),
    ] {
        c.push(name, embed_current(&f, &curve_atoms(&ellipse(a, b)))?)?;
    }

    let m = distance_matrix(&c);
    print!("{:>8}", "");
    for name in c.names() {
        print!("{name:>8}");
    }
    println!();
    for (name, row) in c.names().iter().zip(&m) {
        print!("{name:>8}");
        for v in row {
            print!("{v:>8.3}");
        }
        println!();
    }

    let query: Embedding = embed_current(&f, &curve_atoms(&ellipse(1.1, 0.9)))?.into();
    let (i, d) = nearest_neighbor(&c, &query)?;
    println!("nearest to a 1.1 x 0.9 ellipse: {} at {d:.4}", c.names()[i]);

    let mean = mean_shape_embedding(&c)?;
    let (i, d) = nearest_neighbor(&c, &mean)?;
    println!("closest to the mean shape: {} at {d:.4}", c.names()[i]);
    Ok(())
}

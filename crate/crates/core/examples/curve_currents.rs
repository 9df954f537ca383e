//! Polylines compared as currents: orientation matters, sampling density does not.
//!
//! `cargo run --example curve_currents`

use std::f64::consts::PI;

use kdist::currents::{current_distance_sq, curve_atoms, refine_curve};
use kdist::{KernelSpec, PolyCurve};

fn arc(start: f64, n: usize) -> PolyCurve {
    let pts = (0..n)
        .map(|i| {
            let t = start + PI * i as f64 / (n - 1) as f64;
            vec![t.cos(), t.sin()]
        })
        .collect();
    PolyCurve::new(pts).expect("distinct vertices")
}

fn main() -> kdist::Result<()> {
    let k = KernelSpec::gaussian(0.5)?;
    let a = arc(0.0, 32);
    let b = arc(0.3, 32);
    let (sa, sb) = (curve_atoms(&a), curve_atoms(&b));
    println!("D²(a, b)          = {:.6}", current_distance_sq(&k, &sa, &sb)?);
    println!(
        "D²(a, reversed a) = {:.6}",
        current_distance_sq(&k, &sa, &curve_atoms(&a.reversed()))?
    );

    for level in 0..=4 {
        let d2 = current_distance_sq(
            &k,
            &curve_atoms(&refine_curve(&a, level)?),
            &curve_atoms(&refine_curve(&b, level)?),
        )?;
        println!("refined x{:<3} D²(a, b) = {d2:.9}", 1 << level);
    }
    Ok(())
}

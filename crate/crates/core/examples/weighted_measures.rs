//! Exact kernel distance between weighted point sets, read from CSV text.
//!
//! `cargo run --example weighted_measures`

use kdist::io::{parse_points, serialize_points};
use kdist::ipm::tv_distance;
use kdist::{cross_similarity, kernel_distance, KernelSpec};

const P: &str = "\
# weighted
0,0,0.5
1,0,0.25
0,1,0.25
";

const Q: &str = "\
# weighted
0.1,0.1,0.6
0.9,0.2,0.4
";

fn main() -> kdist::Result<()> {
    let p = parse_points(P.as_bytes())?;
    let q = parse_points(Q.as_bytes())?;
    print!("Q re-serialized:\n{}", serialize_points(&q));

    for sigma in [0.25, 1.0, 4.0] {
        let k = KernelSpec::gaussian(sigma)?;
        let r = kernel_distance(&k, &p, &q, None)?;
        println!(
            "sigma {sigma:>4}: κ(P,Q) = {:.6}  D = {:.6}",
            cross_similarity(&k, &p, &q)?,
            r.d.unwrap()
        );
    }
    // Total variation ignores geometry entirely: disjoint supports are always at 2.
    println!("total variation: {}", tv_distance(&p, &q)?);
    Ok(())
}

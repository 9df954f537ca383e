//! Triangle meshes as currents: a closed surface has zero total area vector.
//!
//! `cargo run --example surface_currents`

use kdist::currents::{current_distance_sq, mesh_atoms};
use kdist::io::parse_mesh;
use kdist::{KernelSpec, TriMesh};

const TETRAHEDRON: &str = "\
OFF
4 4 0
0 0 0
1 0 0
0 1 0
0 0 1
3 0 2 1
3 0 1 3
3 0 3 2
3 1 2 3
";

fn main() -> kdist::Result<()> {
    let tet = parse_mesh(TETRAHEDRON.as_bytes())?;
    let atoms = mesh_atoms(&tet);
    println!(
        "tetrahedron area {:.6}, area vector sum {:?}",
        tet.area(),
        atoms.vector_sum()
    );

    let k = KernelSpec::gaussian(1.0)?;
    let flipped = mesh_atoms(&tet.flipped());
    let moved = tet.vertices().iter().map(|v| [v[0] + 0.5, v[1], v[2]]).collect();
    let shifted = mesh_atoms(&TriMesh::new(moved, tet.triangles().to_vec())?);
    println!("D²(T, flipped T) = {:.6}", current_distance_sq(&k, &atoms, &flipped)?);
    println!("D²(T, shifted T) = {:.6}", current_distance_sq(&k, &atoms, &shifted)?);
    Ok(())
}

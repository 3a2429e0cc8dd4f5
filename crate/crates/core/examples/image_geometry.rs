//! Boundary meshes of bounded images, distance to the boundary, radial
//! arclength and image diameters of Carleson boxes.

use harmonic_john::geometry::{boundary_mesh, diam_image_of_box, dist_to_boundary, radial_arclength, relative_box_clip};
use harmonic_john::{catalog_get, Params, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let cardioid = catalog_get("analytic", &Params::default().with("expr", "cardioid"))?;
    let geom = boundary_mesh(&cardioid, 1e-3, 4096)?;
    println!(
        "cardioid mesh: {} vertices, orientation {}, longest edge {:.2e}",
        geom.len(),
        geom.orientation,
        geom.max_edge()
    );

    for r in [0.0, 0.5, 0.9, 0.99] {
        let z = Complex64::new(-r, 0.0);
        let w = cardioid.eval(z)?;
        let d = dist_to_boundary(&geom, w)?;
        let box_diam = diam_image_of_box(&cardioid, z, 24, relative_box_clip(z))?;
        println!("z = {:>5}: d(f(z)) = {d:.6}  diam f(B(z)) = {box_diam:.6}", -r);
    }

    let len = radial_arclength(&cardioid, Complex64::new(-1.0, 0.0), 0.0, 0.999)?;
    println!("length of f([0, -0.999]) = {len:.9}");

    let path = std::env::temp_dir().join("cardioid_mesh.csv");
    std::fs::write(&path, geom.to_csv())?;
    println!("mesh written to {}", path.display());
    Ok(())
}

//! Build maps from the catalog and from a JSON series spec, then evaluate them.

use harmonic_john::mapcore::catalog::all_entries;
use harmonic_john::{load_map_spec, Result};
use num_complex::Complex64;

fn main() -> Result<()> {
    let z = Complex64::new(0.3, 0.4);
    for map in all_entries() {
        let (h, g) = map.jets(z)?;
        println!(
            "{:<28} f(z) = {:>22}  h' = {:>22}  g' = {:>22}  bounded: {}",
            map.label,
            format!("{:.6}", map.eval(z)?),
            format!("{:.6}", h.d1),
            format!("{:.6}", g.d1),
            map.flags.bounded_image
        );
    }

    // h = z, g = z^2/4: a shear with dilatation z/2
    let doc = br#"{"kind": "series", "name": "half-shear", "h": [[0,0],[1,0]], "g": [[0,0],[0,0],[0.25,0]]}"#;
    let f = load_map_spec(doc)?;
    println!("\n{}: in S_H^0 = {}, f(z) = {:.6}", f.label, f.flags.in_sh0, f.eval(z)?);
    println!("first coefficients of g: {:?}", f.g.taylor_coefficients(3)?);
    Ok(())
}

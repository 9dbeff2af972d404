//! Dual numbers and central differences on the same structure derivatives.

use framecurv::geometry::DerivativeEngine;
use framecurv::structure::structure_derivatives_along;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let ad = DerivativeEngine::dual();
    let fd = DerivativeEngine::central();
    for id in ["s2", "s3", "seven", "h2"] {
        let entry = zoo::lookup(id, None)?;
        let m = entry.chart().expect("chart entry");
        let mut worst = 0.0f64;
        for p in entry.sample_points(20, 1)? {
            for a in 0..m.dim() {
                let x = structure_derivatives_along(m, &ad, a, &p)?;
                let y = structure_derivatives_along(m, &fd, a, &p)?;
                worst = worst.max(x.max_abs_diff(&y));
            }
        }
        println!("{id:>6}: max |AD - FD| over e_a(c^k_ij) = {worst:.2e}");
    }
    Ok(())
}

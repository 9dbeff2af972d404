//! The frame formula against the coordinate computation on every built-in chart.

use framecurv::curvature::{scalar_curvature_frame, scalar_curvature_oracle};
use framecurv::geometry::DerivativeEngine;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let engine = DerivativeEngine::dual();
    println!("{:<8} {:>14} {:>14} {:>10}", "entry", "frame S", "coordinate S", "|diff|");
    for entry in zoo::all() {
        let Some(m) = entry.chart() else { continue };
        let source = entry.source(engine);
        let mut worst = 0.0f64;
        let mut last = (0.0, 0.0);
        for p in entry.sample_points(25, 42)? {
            let s = scalar_curvature_frame(source.as_ref(), &p)?;
            let o = scalar_curvature_oracle(m, &engine, &p)?;
            worst = worst.max((s - o).abs());
            last = (s, o);
        }
        println!("{:<8} {:>14.9} {:>14.9} {:>10.2e}", entry.id, last.0, last.1, worst);
    }
    Ok(())
}

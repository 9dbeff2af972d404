//! A chart built by hand: the hyperbolic plane e1 = y ∂x, e2 = y ∂y.

use framecurv::curvature::{scalar_curvature_frame, scalar_curvature_oracle};
use framecurv::geometry::{ChartManifold, DerivativeEngine, Interval};
use framecurv::structure::ChartFrame;

fn main() -> Result<(), framecurv::error::Error> {
    let frame = vec![
        vec!["y".to_string(), "0".to_string()],
        vec!["0".to_string(), "y".to_string()],
    ];
    let bx = vec![Interval::new(-2.0, 2.0)?, Interval::new(0.1, 3.0)?];
    let m = ChartManifold::parse("upper-half-plane", &["x", "y"], &frame, bx)?;

    let engine = DerivativeEngine::dual();
    for p in [[0.0, 1.0], [1.5, 0.2], [-1.0, 2.5]] {
        let g = m.metric_from_frame(&p)?;
        let s = scalar_curvature_frame(&ChartFrame::new(&m, engine), &p)?;
        let o = scalar_curvature_oracle(&m, &engine, &p)?;
        println!("({:+.1}, {:.1}): g_xx = {:.4}, S = {s:.12}, coordinate S = {o:.12}", p[0], p[1], g.get(0, 0));
    }

    // A frame that degenerates inside the box is reported, not silently used.
    let flat = vec![vec!["x".to_string()]];
    let bad = ChartManifold::parse("bad", &["x"], &flat, vec![Interval::new(-1.0, 1.0)?])?;
    if let Err(e) = scalar_curvature_frame(&ChartFrame::new(&bad, engine), &[0.0]) {
        println!("x ∂x at 0: {e}");
    }
    Ok(())
}

//! Lie brackets and structure functions of the unit 3-sphere frame (Z, X, Y)
//! in a stereographic chart.

use framecurv::geometry::DerivativeEngine;
use framecurv::structure::{lie_bracket, structure_tensor};
use framecurv::zoo::sphere3_chart;

fn main() -> Result<(), framecurv::error::Error> {
    let m = sphere3_chart();
    let engine = DerivativeEngine::dual();
    let p = [0.3, -0.2, 0.5];

    let xy = lie_bracket(&m, &engine, 1, 2, &p)?;
    let z = m.frame_matrix(&p)?.column(0);
    println!("[X, Y] = {xy:?}");
    println!("-2 Z   = {:?}", z.iter().map(|v| -2.0 * v).collect::<Vec<_>>());

    let c = structure_tensor(&m, &engine, &p)?;
    let labels = m.labels();
    for (k, i, j, v) in c.independent_nonzero(1e-12) {
        println!("c^{}_{{{},{}}} = {v:+.12}", labels[k], labels[i], labels[j]);
    }
    Ok(())
}

use framecurv::curvature::scalar_curvature_frame;
use framecurv::geometry::DerivativeEngine;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    for entry in zoo::all() {
        let p = entry.sample_points(1, 0)?.remove(0);
        let s = scalar_curvature_frame(entry.source(DerivativeEngine::dual()).as_ref(), &p)?;
        let split = entry.default_split.map_or("-".to_string(), |s| format!("r={}", s.r));
        println!("{:<16} dim {} split {:<4} S = {s:+.9}", entry.id, entry.dim(), split);
        for e in &entry.expected {
            println!("    {:<14} {:>+10.4} {:?}", e.quantity, e.value, e.provenance);
        }
    }
    Ok(())
}

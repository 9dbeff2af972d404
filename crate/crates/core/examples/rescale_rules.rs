//! Structure functions of {e_i, f e_α} from those of {e_i, e_α}, with a
//! non-constant f, against brackets of the rescaled frame.

use framecurv::collapse::{rescale_frame, transform_structure_functions, RescaleFactor};
use framecurv::geometry::DerivativeEngine;
use framecurv::structure::{structure_tensor, FrameSource, ChartFrame};
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let entry = zoo::seven_manifold(zoo::DEFAULT_K_H)?;
    let m = entry.chart().expect("chart entry");
    let split = entry.default_split.expect("default split");
    let engine = DerivativeEngine::dual();

    let f = RescaleFactor::Field(m.parse_expr("1 + t^2/4")?);
    let scaled = rescale_frame(m, split, &f)?;
    println!("rescaled frame: {}", scaled.name());

    for p in entry.sample_points(5, 9)? {
        let c = ChartFrame::new(m, engine).structure(&p)?;
        let grad = f.frame_gradient(m, &engine, &p)?;
        let predicted = transform_structure_functions(&c, split, f.value(&p)?, &grad)?;
        let direct = structure_tensor(&scaled, &engine, &p)?;
        println!("t = {:+.4}: max |predicted - direct| = {:.2e}", p.coords()[0], predicted.max_abs_diff(&direct));
    }
    Ok(())
}

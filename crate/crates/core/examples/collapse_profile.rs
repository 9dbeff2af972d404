//! Shrinking the Hopf fibres' complement on S³: S(f) = q4 f⁴ + q2 f² + q0 + qm2 f⁻².

use framecurv::collapse::{collapse_profile, rescale_constant, sign_thresholds};
use framecurv::curvature::scalar_curvature_frame;
use framecurv::geometry::DerivativeEngine;
use framecurv::structure::ChartFrame;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let entry = zoo::sphere3();
    let split = entry.default_split.expect("s3 has a split");
    let m = entry.chart().expect("chart entry");
    let engine = DerivativeEngine::dual();
    let p = [0.2, 0.1, -0.4];

    let profile = collapse_profile(&ChartFrame::new(m, engine), split, &p)?;
    println!("profile {:?}", profile.coefficients());
    let t = sign_thresholds(&profile)?;
    println!("sign changes at f = {:?}, then {:?}", t.critical_f, t.asymptotic_sign);

    println!("{:>5} {:>14} {:>14}", "f", "profile", "direct");
    for f in [0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0] {
        let scaled = rescale_constant(m, split, f)?;
        let direct = scalar_curvature_frame(&ChartFrame::new(&scaled, engine), &p)?;
        println!("{f:>5} {:>14.9} {direct:>14.9}", profile.evaluate(f)?);
    }
    Ok(())
}

//! Connection and curvature forms of the round 2-sphere frame {∂p, csc p ∂q}.

use framecurv::curvature::{connection_form, curvature_two_form, frame_christoffel};
use framecurv::geometry::DerivativeEngine;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let entry = zoo::sphere2();
    let source = entry.source(DerivativeEngine::dual());
    let p = [1.1, 0.4];

    let jet = source.jet(&p)?;
    let gamma = frame_christoffel(&jet.c);
    let omega = connection_form(&gamma);
    println!("Γ^1_(2,2) = {:.12}  (-cot p = {:.12})", gamma.get(0, 1, 1), -1.0 / p[0].tan());
    println!("ω^1_2(e2) = {:.12}", omega.get(0, 1, 1));
    println!("connection skew defect {:e}", omega.skew_defect());

    let big_omega = curvature_two_form(source.as_ref(), &p)?;
    println!("Ω^2_1(e2, e1) = {:.12}", big_omega.get(1, 0, 1, 0));
    println!("S = {:.12}", big_omega.scalar());
    Ok(())
}

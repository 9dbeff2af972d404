//! Parse a frame component, evaluate it, and differentiate it with dual numbers.

use framecurv::expr::parse;

fn main() -> Result<(), framecurv::error::Error> {
    let e = parse("csc(p) * exp(-q^2/2) + sqrt(1 + p*q)", &["p", "q"])?;
    println!("parsed:  {e}");

    let x = [0.7, 0.3];
    println!("value:   {}", e.eval(&x)?);
    for (axis, name) in ["p", "q"].iter().enumerate() {
        let mut dir = [0.0; 2];
        dir[axis] = 1.0;
        let d = e.eval_dual(&x, &dir)?;
        println!("d/d{name}:   {}", d.tangent);
    }

    // Domain errors carry the offending point.
    match parse("log(p - 1)", &["p"])?.eval(&[0.5]) {
        Ok(v) => println!("unexpected value {v}"),
        Err(err) => println!("log(p - 1) at p = 0.5: {err}"),
    }
    match parse("p +* q", &["p", "q"]) {
        Ok(_) => println!("unexpectedly parsed"),
        Err(err) => println!("bad input: {err}"),
    }
    Ok(())
}

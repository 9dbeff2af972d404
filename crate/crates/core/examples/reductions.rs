//! Special-case profiles: each checks its hypotheses before using a shorter formula.

use framecurv::collapse::{collapse_profile, specialized_profile, Reduction, SplitSpec};
use framecurv::geometry::DerivativeEngine;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    let engine = DerivativeEngine::dual();
    let cases = [
        ("s3", 1, Reduction::Codim1),
        ("seven", 4, Reduction::Involutive),
        ("seven", 4, Reduction::BundleLike),
        ("seven", 6, Reduction::OneDimFoliation),
        ("flat7", 6, Reduction::BundleLikeOneDim),
    ];
    for (id, r, case) in cases {
        let entry = zoo::lookup(id, None)?;
        let split = SplitSpec::with_rank(entry.dim(), r)?;
        let source = entry.source(engine);
        let p = entry.sample_points(1, 3)?.remove(0);
        let full = collapse_profile(source.as_ref(), split, &p)?;
        match specialized_profile(case, source.as_ref(), split, &p) {
            Ok(special) => println!(
                "{id:>6} r={r} {case:<20} agrees to {:.1e}",
                special.max_abs_diff(&full)
            ),
            Err(e) => println!("{id:>6} r={r} {case:<20} rejected: {e}"),
        }
    }
    Ok(())
}

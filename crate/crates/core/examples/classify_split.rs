//! Involutivity and the frame certificates for three splits.

use framecurv::collapse::classify;
use framecurv::geometry::DerivativeEngine;
use framecurv::zoo;

fn main() -> Result<(), framecurv::error::Error> {
    for id in ["s3", "seven", "flat7"] {
        let mut entry = zoo::lookup(id, None)?;
        if entry.default_split.is_none() {
            entry.default_split = entry.admissible_splits().get(3).copied();
        }
        let split = entry.default_split.expect("split");
        let samples = entry.sample_points(64, 5)?;
        let report = classify(entry.source(DerivativeEngine::dual()).as_ref(), split, &samples)?;
        println!("{id} (r = {}):", split.r);
        println!("  involutive                {}", report.involutive);
        println!("  everywhere non-involutive {}", report.everywhere_noninvolutive);
        println!(
            "  bundle-like               {} ({} = {:.3e})",
            report.bundle_like_certificate, report.bundle_like_witness.entry, report.bundle_like_witness.value
        );
        println!(
            "  positive indicator        {} (min {:.6})",
            report.npb_certificate, report.npb_min
        );
    }
    Ok(())
}

use framecurv::collapse::{profile_from_jet, rescale_constants, sign_thresholds, SplitSpec};
use framecurv::curvature::scalar_curvature_lie;
use framecurv::structure::{StructureJet, StructureTensor};
use framecurv::zoo::su2_constants;

fn main() -> Result<(), framecurv::error::Error> {
    let groups = [
        ("su2", su2_constants()),
        ("heisenberg", StructureTensor::from_entries(3, &[(2, 0, 1, 1.0)])?),
        ("aff(1) x R", StructureTensor::from_entries(3, &[(1, 0, 1, 1.0)])?),
    ];
    for (name, c) in groups {
        println!("{name}: S = {}", scalar_curvature_lie(&c));
        let split = SplitSpec::with_rank(3, 1)?;
        let profile = profile_from_jet(&StructureJet::constant(c.clone()), split)?;
        let t = sign_thresholds(&profile)?;
        println!("  profile {:?}, thresholds {:?}", profile.coefficients(), t.critical_f);
        let squashed = rescale_constants(&c, split, 3.0)?;
        println!("  f = 3: S = {} (profile {})", scalar_curvature_lie(&squashed), profile.evaluate(3.0)?);
    }
    Ok(())
}

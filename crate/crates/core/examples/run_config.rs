//! Drive a sweep from an inline configuration and print the CSV.

use framecurv::cli::{execute, Overrides, RunConfig};

const CONFIG: &str = r#"
[manifold]
id = "seven"
k_h = -2.0

[split]
r = 4

[sweep]
f_min = 1.0
f_max = 3.0
steps = 4

[samples]
count = 2
seed = 1
"#;

fn main() -> Result<(), framecurv::error::Error> {
    let config = RunConfig::from_toml(CONFIG)?;
    let (report, _) = execute("collapse", &config, &Overrides::default())?;
    print!("{}", report.to_csv());
    print!("{}", framecurv::cli::summary(&report));
    Ok(())
}

//! Full orchestrated run writing `report.json` and CSV plot data.

use harmonic_john::cli::{run, MapSource, RunConfig};
use harmonic_john::Result;

fn main() -> Result<()> {
    let map = std::env::args().nth(1).unwrap_or_else(|| "analytic:expr=cardioid".into());
    let out = std::env::temp_dir().join("hjohn-example");
    let cfg = RunConfig { out: out.clone(), ..RunConfig::new(MapSource::parse_catalog(&map)?) };
    let outcome = run(&cfg)?;
    if let Some(j) = &outcome.report.john {
        println!("verdict {} (c = {}, M1 = {})", j.report.verdict.as_str(), j.report.c, j.report.m1);
    }
    println!("exit code {}; files in {}: {:?}", outcome.exit_code, out.display(), outcome.report.files);
    Ok(())
}

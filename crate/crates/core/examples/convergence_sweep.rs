//! An eps-halving sweep, fitted orders and the two exterior scalings side by
//! side. Pass a config path to sweep something else.

use compound_robin::analysis::{estimate_orders, run_sweep, write_sweep_csv};
use compound_robin::config::Config;
use compound_robin::ExteriorScaling;

fn main() -> compound_robin::Result<()> {
    let path = std::env::args()
        .nth(1)
        .unwrap_or_else(|| concat!(env!("CARGO_MANIFEST_DIR"), "/configs/generic.toml").into());
    let cfg = Config::load(&path)?;
    for scaling in [ExteriorScaling::Rescaled, ExteriorScaling::Unscaled] {
        let mut sweep = cfg.sweep_config()?;
        sweep.solver.build.scaling = scaling;
        let records = run_sweep(&sweep)?;
        println!("## {scaling:?}");
        write_sweep_csv(std::io::stdout().lock(), &records).expect("stdout");
        match estimate_orders(&records) {
            Ok(est) => est
                .iter()
                .for_each(|e| println!("kappa {}: orders {:?}", e.kappa, e.orders)),
            Err(e) => println!("{e}"),
        }
    }
    Ok(())
}

//! Random entangled states against the analytic bounds on the optimal pure
//! state and on the Gaussian EoF at fixed negativity.
//!
//! ```text
//! cargo run --release --example bound_experiment [SAMPLES] [SEED]
//! ```

use gaussent::bounds::{bound_experiment, geof_bounds, SamplerConfig, SamplingMode};
use gaussent::gaussian_em::GemOptions;

fn main() -> gaussent::Result<()> {
    let mut args = std::env::args().skip(1);
    let count = args.next().and_then(|s| s.parse().ok()).unwrap_or(2000);
    let seed = args.next().and_then(|s| s.parse().ok()).unwrap_or(2024);

    for mode in [SamplingMode::ExtremalParams, SamplingMode::RawStandardForm] {
        let cfg = SamplerConfig { seed, count, s_max: 20.0, mode };
        let exp = bound_experiment(&cfg, &GemOptions::default())?;
        let summary = exp.summary();
        println!(
            "{mode:?}: {} samples, {} above the upper curve, {} below the lower curve, {} failures",
            summary.samples,
            summary.violations_42,
            summary.violations_46,
            summary.failures.len()
        );
        println!(
            "  smallest slacks: upper {:.3e}, lower {:.3e}, m_max {:.3e}",
            summary.min_upper_slack, summary.min_lower_slack, summary.min_m_max_slack
        );

        // how much of the allowed band the samples actually fill
        let mut worst = (0.0f64, 1.0f64);
        for r in exp.records.iter().filter(|r| r.point.log_negativity > 1e-6) {
            let (lo, hi) = geof_bounds(r.point.log_negativity)?;
            let t = (r.point.gaussian_eof - lo) / (hi - lo);
            worst = (worst.0.max(t), worst.1.min(t));
        }
        println!("  G_EoF position inside the band: min {:.4}, max {:.4}", worst.1, worst.0);
    }
    Ok(())
}

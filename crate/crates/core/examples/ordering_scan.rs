//! Ordering of GMEMS and GLEMS over the (b, g) plane at a = 5, drawn as a
//! character map, with the inversion boundary written to CSV.
//!
//! ```text
//! cargo run --release --example ordering_scan [OUT_DIR]
//! ```

use std::fs::File;
use std::path::PathBuf;

use gaussent::extremal::{scan_slice, write_boundary_csv, write_scan_csv, Regime};

fn glyph(r: Regime) -> char {
    match r {
        Regime::Unphysical => ' ',
        Regime::BothSeparable => '.',
        Regime::Coexistence => 'c',
        Regime::OrderingPreserved => '+',
        Regime::OrderingInverted => '#',
    }
}

fn main() -> gaussent::Result<()> {
    let out = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| std::env::temp_dir().display().to_string()));
    let (n, a) = (60, 5.0);
    let scan = scan_slice(a, (1.0, 10.0), (1.0, 15.0), n)?;

    // rows run over b, columns over g; print with g increasing upwards
    println!("g ^   (# inverted, + preserved, c coexistence, . separable, blank unphysical)");
    for j in (0..n).rev() {
        let line: String = (0..n).map(|i| glyph(scan.cells[i * n + j].regime)).collect();
        println!("  | {line}");
    }
    println!("  +-{}> b", "-".repeat(n));
    for r in [Regime::OrderingInverted, Regime::OrderingPreserved, Regime::Coexistence, Regime::BothSeparable, Regime::Unphysical] {
        println!("{:>20}: {}", r.as_str(), scan.count(r));
    }

    let io = |e: std::io::Error| gaussent::Error::Numerical(e.to_string());
    write_scan_csv(File::create(out.join("ordering_scan.csv")).map_err(io)?, &scan.cells)?;
    write_boundary_csv(File::create(out.join("ordering_boundary.csv")).map_err(io)?, &scan.boundary)?;
    println!("{} boundary points; CSV files in {}", scan.boundary.len(), out.display());
    Ok(())
}

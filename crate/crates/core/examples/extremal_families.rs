//! The (s, d, g, λ) parametrization: negativity is extremal at λ = ±1 while
//! the Gaussian EoF of the two families can come in either order.
//!
//! ```text
//! cargo run --example extremal_families
//! ```

use gaussent::extremal::{
    build_state, classify_entanglement, glems_separability_threshold, gmems_separability_threshold,
    m_opt_glems_detailed, m_opt_gmems, ordering_compare, ExtremalParams,
};
use gaussent::gaussian_em::{minimize_m, nu_tilde_from_m};
use gaussent::symplectic::symplectic_spectrum;

fn main() -> gaussent::Result<()> {
    let (s, d, g) = (2.0, 0.5, 2.5);
    println!("s = {s}, d = {d}, g = {g}");
    println!(
        "GMEMS separable from g = {}, GLEMS from g = {:.6}",
        gmems_separability_threshold(s),
        glems_separability_threshold(s, d)
    );
    println!("{:>6} {:>12} {:>12} {:>12}", "lambda", "nu_tilde", "m_opt", "entangled");
    for k in 0..=8 {
        let lambda = -1.0 + 0.25 * k as f64;
        let p = ExtremalParams::new(s, d, g, lambda)?;
        let sf = build_state(&p)?;
        let nu = symplectic_spectrum(&sf.to_cm())?.nu_tilde_minus;
        let m = minimize_m(&sf)?.m_opt;
        println!("{lambda:>6.2} {nu:>12.8} {m:>12.8} {:>12?}", classify_entanglement(&p)?);
    }

    let glems = m_opt_glems_detailed(s, d, g)?;
    println!("closed forms: GMEMS m = {:.10}, GLEMS m = {:.10} ({:?} branch)", m_opt_gmems(s, d, g)?, glems.m, glems.branch);
    println!("GMEMS optimal pure state nu_tilde = {:.10}", nu_tilde_from_m(m_opt_gmems(s, d, g)?));

    for (s, d, g) in [(3.0, 0.5, 3.0), (4.2, 0.8, 2.9), (6.0, -1.0, 3.0), (3.0, 1.0, 4.5), (3.0, 1.0, 5.5)] {
        let v = ordering_compare(s, d, g)?;
        println!(
            "(s, d, g) = ({s}, {d}, {g}): m_gmems = {:.8}, m_glems = {:.8} -> {}",
            v.m_gmems,
            v.m_glems,
            v.regime.as_str()
        );
    }
    Ok(())
}

//! The five-dimensional Einstein almost-cokähler example: rho*, tau*, norm
//! identities, ratio interval and the Reeb field.

use cokahler::almost_contact::AlmostContactStructure;
use cokahler::catalog::ContactData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = ContactData::einstein_example();
    let s = AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega)?;
    println!("classification: {}", s.classify(1e-9));
    println!("einstein constant: {:?}", s.einstein_constant(1e-9));
    let star = s.star_ricci();
    println!("rho* = {}\ntau* = {}", star.form, star.tau_star);

    let b = s.norm_bounds(1e-9)?;
    println!(
        "|∇alpha|^2 = {}, |∇omega|^2 = {}, -tau = {}, 2n(tau* - tau) = {}, equality: {}",
        b.nabla_alpha_squared, b.nabla_omega_squared, b.minus_tau, b.star_gap, b.equality
    );
    let r = s.ratio_bounds(1e-9)?;
    println!("ratio {:?} in [{}, {:?}]", r.ratio, r.lower, r.upper);
    let l = s.rough_laplacian_identities(1e-9)?;
    println!("rough Laplacian residuals: {:e} {:e}", l.alpha_residual, l.omega_residual);
    let k = s.reeb_killing(1e-9);
    println!("Reeb field Killing: {} (|S|^2 = {})", k.killing.is_killing, k.killing.norm_squared);
    Ok(())
}

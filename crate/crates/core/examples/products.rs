//! Almost Kähler products M x S^1 and M x M of the example.

use cokahler::almost_contact::AlmostContactStructure;
use cokahler::almost_kahler::{product_double, product_with_circle};
use cokahler::catalog::ContactData;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = ContactData::einstein_example();
    let s = AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega)?;

    let circle = product_with_circle(&s)?;
    let r = circle.report(&s, 1e-9)?;
    println!("M x S^1: s = {}, s* = {}, |∇Omega|^2 = {}", r.s, r.s_star, r.nabla_kahler_squared);
    println!("  <Omega, phi> = {}, |phi(xi, .)| = {:e}", r.phi_pairing, r.phi_reeb);
    println!("  |R'|^2 = {}, |R''|^2 = {}", r.r_prime_squared, r.r_double_prime_squared);

    let square = product_double(&s, &s)?;
    let a = square.analyze()?;
    println!("M x M: s = {}, s* = {}, |∇Omega|^2 = {}", a.s, a.s_star, a.nabla_kahler_squared);
    println!("  J-invariance of <∇Omega, ∇Omega>: {:e}", square.j_invariance_residual());
    Ok(())
}

//! Structure equations, brackets, d^2 = 0 and unimodularity.

use cokahler::catalog;
use cokahler::exterior::KForm;
use cokahler::lie_algebra::LieAlgebra;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alg = catalog::einstein_example();
    for (k, de) in alg.structure_equations().iter().enumerate() {
        println!("de^{} = {de}", k + 1);
    }
    println!("[e1, e4] = {:?}", alg.bracket_basis(0, 3).as_slice());
    let v = alg.validate(1e-12);
    println!("d^2 = {:e}, jacobi = {:e}, valid = {}", v.d_squared, v.jacobi, v.passed);
    let u = alg.unimodularity(1e-12);
    println!("tr ad = {:?}, unimodular = {}", u.traces, u.unimodular);

    // de1 = e23, de2 = e14 is not a Lie algebra: d(de1) = e143
    let bad = LieAlgebra::from_structure_equations(vec![
        KForm::basis(4, &[2, 3]),
        KForm::basis(4, &[1, 4]),
        KForm::zero(4, 2),
        KForm::zero(4, 2),
    ])?;
    let v = bad.validate(1e-12);
    println!("de1 = e23, de2 = e14: d^2 = {:e}, valid = {}", v.d_squared, v.passed);
    Ok(())
}

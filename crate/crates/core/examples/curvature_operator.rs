//! The curvature operator on 2-forms and its split along J.

use cokahler::almost_contact::AlmostContactStructure;
use cokahler::almost_kahler::{product_with_circle, CurvatureOperator};
use cokahler::catalog::{self, ContactData};
use cokahler::exterior::KForm;
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let c = ContactData::einstein_example();
    let s = AlmostContactStructure::build(&c.algebra, &c.metric, &c.alpha, &c.omega)?;
    let product = product_with_circle(&s)?.structure;
    let op = product.curvature_operator();
    println!("R(Omega) = {}", op.apply(product.kahler_frame()));
    let split = op.split(product.complex_structure());
    println!("J-commuting |R'|^2 = {}", split.commuting_norm_squared);
    println!("J-anticommuting |R''|^2 = {}", split.anticommuting_norm_squared);

    // a single block c = 1 on alpha ^ e^1 in R^4 with alpha = e^3, theta = e^4
    let j = catalog::standard_complex_structure(2);
    let op = CurvatureOperator::from_tensor(4, &[KForm::basis(4, &[3, 1])], &DMatrix::from_element(1, 1, 1.0));
    let split = op.split(&j);
    println!("block: |R'|^2 = {}, |R''|^2 = {}", split.commuting_norm_squared, split.anticommuting_norm_squared);
    Ok(())
}

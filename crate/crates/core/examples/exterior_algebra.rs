//! Wedge, interior product and Hodge star on R^4 with a non-diagonal metric.

use cokahler::exterior::{form_inner, hodge_star, volume_form, KForm, Orientation};
use cokahler::lie_algebra::Metric;
use nalgebra::DMatrix;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let a = KForm::basis(4, &[1]) + KForm::basis(4, &[2]) * 2.0;
    let b = KForm::basis(4, &[3, 4]);
    let ab = a.wedge(&b)?;
    println!("a = {a}\nb = {b}\na ^ b = {ab}");
    println!("i_(e1) (a ^ b) = {}", ab.interior(&[1.0, 0.0, 0.0, 0.0])?);

    let omega = KForm::basis(4, &[1, 2]) + KForm::basis(4, &[3, 4]);
    println!("omega ^ omega = {}", omega.power(2)?);

    let g = Metric::new(DMatrix::from_row_slice(4, 4, &[
        2.0, 0.5, 0.0, 0.0, //
        0.5, 1.0, 0.0, 0.0, //
        0.0, 0.0, 1.0, 0.0, //
        0.0, 0.0, 0.0, 3.0,
    ]))?;
    let vol = volume_form(&g, Orientation::Positive);
    let star = hodge_star(&a, &g, Orientation::Positive)?;
    println!("vol = {vol}\n*a = {star}");
    println!("a ^ *a = {}  <a, a> = {}", a.wedge(&star)?, form_inner(&a, &a, &g)?);
    Ok(())
}

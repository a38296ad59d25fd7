//! Hodge Laplacian = rough Laplacian + curvature term, on a random algebra.

use cokahler::catalog;
use cokahler::exterior::KForm;
use cokahler::riemannian::{ConnectionData, CurvatureData};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let alg = catalog::random_algebra(&mut rng, 5);
    let g = catalog::random_metric(&mut rng, 5);
    let conn = ConnectionData::new(&alg, &g)?;
    let curv = CurvatureData::new(&conn);
    for k in 0..=5 {
        let eta = if k == 0 {
            KForm::scalar(5, 1.0)
        } else {
            let first: Vec<usize> = (1..=k).collect();
            let last: Vec<usize> = (6 - k..=5).collect();
            KForm::basis(5, &first) + KForm::basis(5, &last) * 0.5
        };
        let delta = conn.codifferential(&eta).max_abs_diff(&conn.codifferential_via_hodge(&eta));
        println!(
            "degree {k}: weitzenboeck residual {:e}, codifferential paths differ by {:e}",
            conn.weitzenboeck_residual(&curv, &eta),
            delta
        );
    }
    Ok(())
}

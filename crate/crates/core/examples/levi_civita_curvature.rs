//! Levi-Civita connection, Ricci tensor and scalar curvature of a few metrics.

use cokahler::catalog;
use cokahler::lie_algebra::Metric;
use cokahler::riemannian::{ConnectionData, CurvatureData};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let cases = [
        ("example", catalog::einstein_example(), Metric::identity(5)),
        ("heisenberg + R^2", catalog::heisenberg_plus_r2(), Metric::identity(5)),
        ("su(2)", catalog::simple_rank_one(true), Metric::identity(3)),
        ("sl(2, R)", catalog::simple_rank_one(false), Metric::identity(3)),
    ];
    for (name, alg, g) in cases {
        let conn = ConnectionData::new(&alg, &g)?;
        let curv = CurvatureData::new(&conn);
        println!("{name}");
        println!("  torsion {:e}, metric {:e}", conn.torsion_residual(), conn.metric_compatibility_residual());
        println!("  symmetries {:e}, bianchi {:e}", curv.symmetry_residual(), curv.bianchi_residual());
        println!("  scalar {:.6}, einstein constant {:?}", curv.scalar(), curv.einstein_constant(1e-9));
        println!("  ricci diagonal {:?}", curv.ricci().diagonal().as_slice());
    }
    Ok(())
}

//! Multi-start Einstein metric search on the example algebra, then the
//! verification pipeline on the best metric.

use cokahler::catalog;
use cokahler::einstein_search::{multi_start, verify_candidate, FamilyKind, SearchConfig};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let alg = catalog::einstein_example();
    let config = SearchConfig { seed: 1, ..SearchConfig::default() };
    let ms = multi_start(&alg, FamilyKind::Diagonal, &config)?;
    for (i, r) in ms.runs.iter().enumerate() {
        println!(
            "start {i}: {:?} after {} iterations, residual {:e} (from {:e})",
            r.status, r.iterations, r.residual, r.initial_residual
        );
    }
    let best = ms.best();
    println!("best metric diagonal {:?}", best.metric.matrix().diagonal().as_slice());
    let (alpha, omega) = catalog::standard_contact_forms(2);
    let report = verify_candidate(&alg, &best.metric, Some((&alpha, &omega)), 1e-4)?;
    println!("einstein constant {:?}", report.einstein_constant);
    if let Some(c) = report.contact {
        println!("{} with ratio {:?}", c.classification, c.ratio.and_then(|r| r.ratio));
    }
    Ok(())
}

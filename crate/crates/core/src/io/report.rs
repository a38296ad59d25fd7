//! Structured reports for the command-line tool.
//!
//! Reports are plain serializable structs. [`to_json`] rounds every float to
//! 12 significant digits so output is byte-stable; [`to_text`] renders the
//! same tree for humans. Scalar measurements are [`Tagged`] with the
//! tolerance they were judged against.

use serde::Serialize;
use serde_json::{Map, Number, Value};

use crate::almost_contact::{AlmostContactStructure, Classification, RatioCase};
use crate::almost_kahler::{product_double, product_with_circle, AlmostHermitianStructure};
use crate::einstein_search::{CandidateReport, FamilyKind, MultiStart, SearchStatus};
use crate::error::Result;
use crate::exterior::KForm;
use crate::linalg;
use crate::riemannian::{ConnectionData, CurvatureData};

use super::document::LoadedDocument;

/// Components below this magnitude are left out of listed forms.
pub const FORM_DISPLAY_CUTOFF: f64 = 1e-13;

/// A value with the tolerance it is judged against.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Tagged {
    pub value: f64,
    pub tolerance: f64,
}

/// A residual or comparison that must be at most `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Check {
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    pub fn residual(value: f64, tolerance: f64) -> Self {
        Check {
            value,
            tolerance,
            passed: value.abs() <= tolerance,
        }
    }
}

fn tag(value: f64, tolerance: f64) -> Tagged {
    Tagged { value, tolerance }
}

/// Sign and normalization conventions, embedded in every report.
#[derive(Clone, Debug, Serialize)]
pub struct Conventions {
    pub structure_equations: &'static str,
    pub frame: &'static str,
    pub form_norm: &'static str,
    pub orientation: &'static str,
    pub curvature: &'static str,
    pub ricci: &'static str,
    pub almost_contact: &'static str,
    pub star_ricci: &'static str,
    pub kahler: &'static str,
    pub curvature_operator: &'static str,
}

pub const CONVENTIONS: Conventions = Conventions {
    structure_equations: "de^k(e_i, e_j) = -e^k([e_i, e_j]); [e_i, e_j] = sum_k c^k_ij e_k",
    frame: "curvature data and listed forms use the orthonormal frame f = e P, P upper triangular with P^T g P = 1",
    form_norm: "e^{i_1...i_k} with i_1 < ... < i_k are orthonormal; |∇η|^2 = sum_i |∇_{f_i} η|^2",
    orientation: "+1 means e^1 ^ ... ^ e^n is positive; a ^ *b = <a, b> vol",
    curvature: "R(X, Y) = ∇_X ∇_Y - ∇_Y ∇_X - ∇_[X,Y]",
    ricci: "ric(Y, Z) = sum_i <R(f_i, Y) Z, f_i>, positive on round spheres",
    almost_contact: "omega(X, Y) = g(phi X, Y), alpha(xi) = 1, phi^2 = -1 + xi ⊗ alpha",
    star_ricci: "rho*(X, Y) = sum_i <R(X, f_i) phi f_i, Y>, tau* = <omega, rho*> / n",
    kahler: "Omega(X, Y) = h(JX, Y); on M x S^1, Omega = omega + alpha ^ theta",
    curvature_operator: "R(b)(X, Y) = 1/2 sum_ij b(f_i, f_j) <R(f_i, f_j) X, Y>, so R(Omega) = -rho*^h; R' and R'' are the parts of its compression to J-anti-invariant 2-forms commuting and anticommuting with (Jb)(X, Y) = -b(JX, Y)",
};

/// One coefficient `value * e^{monomial}` of a form.
#[derive(Clone, Debug, Serialize)]
pub struct FormTerm {
    pub monomial: Vec<usize>,
    pub value: f64,
}

fn form_terms(form: &KForm) -> Vec<FormTerm> {
    form.pruned(FORM_DISPLAY_CUTOFF)
        .terms()
        .map(|(monomial, value)| FormTerm { monomial, value })
        .collect()
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidationSection {
    pub d_squared: Check,
    pub jacobi: Check,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct UnimodularitySection {
    pub ad_traces: Vec<f64>,
    pub unimodular: bool,
    pub tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct CurvatureSection {
    pub scalar: Tagged,
    pub einstein: bool,
    pub einstein_constant: Option<Tagged>,
    /// `max |ric - (s/n) g|`
    pub einstein_deviation: Check,
    pub symmetries: Check,
    pub bianchi: Check,
}

#[derive(Clone, Debug, Serialize)]
pub struct ParallelForms {
    /// Entry `k - 1` is the dimension of parallel invariant `k`-forms.
    pub dimensions: Vec<usize>,
    pub rank_tolerance: f64,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormTable {
    pub nabla_alpha_squared: Tagged,
    pub nabla_omega_squared: Tagged,
    /// On `M x S^1`.
    pub nabla_kahler_squared: Option<Tagged>,
}

#[derive(Clone, Debug, Serialize)]
pub struct IdentityResiduals {
    /// `∇*∇alpha = -tau alpha`
    pub rough_laplacian_alpha: Option<Check>,
    /// `∇*∇omega = 2(rho* - tau omega)`
    pub rough_laplacian_omega: Option<Check>,
    /// `Δ = ∇*∇ + curvature term` on alpha and omega.
    pub weitzenboeck_alpha: Check,
    pub weitzenboeck_omega: Check,
    /// `*alpha = omega^n / n!`
    pub hodge_alpha: Check,
    /// `s* - s = |∇Omega|^2` on `M x S^1`.
    pub star_gap: Option<Check>,
    /// `<Omega, phi> = 1/2 |∇Omega|^2` on `M x S^1`.
    pub phi_pairing: Option<Check>,
}

#[derive(Clone, Debug, Serialize)]
pub struct NormBoundCheck {
    /// `|∇alpha|^2 = -tau`
    pub alpha_identity: bool,
    /// `|∇omega|^2 = 2n(tau* - tau)`
    pub omega_identity: bool,
    /// `0 <= -tau <= 2n(tau* - tau)`
    pub inequality: bool,
    pub equality: bool,
    pub minus_tau: Tagged,
    pub star_gap: Tagged,
}

#[derive(Clone, Debug, Serialize)]
pub struct RatioCheck {
    pub case: RatioCase,
    pub ratio: Option<Tagged>,
    pub lower: f64,
    pub upper: Option<f64>,
    pub in_interval: Option<bool>,
    pub at_lower_endpoint: Option<bool>,
    pub note: Option<String>,
}

/// `|R''|^2 >= tau^2 / (16 n)` on `M x S^1`, with the commuting part for
/// comparison.
#[derive(Clone, Debug, Serialize)]
pub struct CurvatureOperatorBound {
    pub anticommuting_squared: Tagged,
    pub commuting_squared: Tagged,
    pub bound: f64,
    pub passed: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundChecks {
    pub norms: Option<NormBoundCheck>,
    pub ratio: Option<RatioCheck>,
    pub curvature_operator: Option<CurvatureOperatorBound>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ReebSection {
    pub killing_defect_squared: Tagged,
    pub killing: bool,
    pub alpha_closed: bool,
    /// Closed and Killing implies `∇alpha = 0`.
    pub implication_holds: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct ContactSection {
    pub classification: Classification,
    pub compatibility: Check,
    pub closedness: Tagged,
    pub parallelism: Tagged,
    pub tau: Option<Tagged>,
    pub tau_star: Tagged,
    pub ratio: Option<Tagged>,
    pub star_ricci_form: Vec<FormTerm>,
    pub norms: NormTable,
    pub identities: IdentityResiduals,
    pub bounds: BoundChecks,
    pub reeb: ReebSection,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleSummary {
    pub dimension: usize,
    pub s: Tagged,
    pub s_star: Tagged,
    pub nabla_kahler_squared: Tagged,
    pub j_invariance: Check,
    pub star_gap: Check,
    pub phi_pairing: Check,
    pub commuting_squared: Tagged,
    pub anticommuting_squared: Tagged,
    /// Only for Einstein factors.
    pub einstein_factor: Option<CircleEinstein>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CircleEinstein {
    /// `ric'' = 1/2 tau (alpha ⊗ alpha - theta ⊗ theta)`
    pub ric_double_prime: Check,
    /// `rho^h = tau (Omega - 1/2 alpha ^ theta)`
    pub rho_h: Check,
    /// `phi(xi, .) = 0`
    pub phi_reeb: Check,
    /// `<rho^h, phi> = 1/2 tau |∇Omega|^2`
    pub rho_h_phi: Check,
    pub trace_free_star_ricci_squared: Tagged,
    pub curvature_integrand: Check,
    pub bound: CurvatureOperatorBound,
}

#[derive(Clone, Debug, Serialize)]
pub struct AnalysisReport {
    pub name: String,
    pub dimension: usize,
    pub tolerance: f64,
    pub conventions: Conventions,
    pub validation: ValidationSection,
    pub unimodularity: UnimodularitySection,
    pub curvature: CurvatureSection,
    pub parallel_forms: ParallelForms,
    pub contact: Option<ContactSection>,
    pub circle_product: Option<CircleSummary>,
}

fn validation_section(doc: &LoadedDocument, tol: f64) -> ValidationSection {
    let v = doc.algebra.validate(tol);
    ValidationSection {
        d_squared: Check::residual(v.d_squared, tol),
        jacobi: Check::residual(v.jacobi, tol),
        passed: v.passed,
    }
}

fn unimodularity_section(doc: &LoadedDocument, tol: f64) -> UnimodularitySection {
    let u = doc.algebra.unimodularity(tol);
    UnimodularitySection {
        ad_traces: u.traces,
        unimodular: u.unimodular,
        tolerance: tol,
    }
}

fn curvature_section(curv: &CurvatureData, tol: f64) -> CurvatureSection {
    let constant = curv.einstein_constant(tol);
    CurvatureSection {
        scalar: tag(curv.scalar(), tol),
        einstein: constant.is_some(),
        einstein_constant: constant.map(|t| tag(t, tol)),
        einstein_deviation: Check::residual(curv.einstein_deviation(), tol),
        symmetries: Check::residual(curv.symmetry_residual(), tol),
        bianchi: Check::residual(curv.bianchi_residual(), tol),
    }
}

fn parallel_forms(conn: &ConnectionData) -> ParallelForms {
    let n = conn.dimension();
    ParallelForms {
        dimensions: (1..n).map(|k| conn.parallel_forms(k).len()).collect(),
        rank_tolerance: linalg::RANK_TOLERANCE,
    }
}

fn circle_summary(odd: &AlmostContactStructure, tol: f64) -> Result<Option<CircleSummary>> {
    if odd.closedness() > tol {
        return Ok(None);
    }
    let product = product_with_circle(odd)?;
    let a = product.structure.analyze_with_tolerance(tol)?;
    let einstein_factor = match odd.einstein_constant(tol) {
        None => None,
        Some(_) => {
            let r = product.report(odd, tol)?;
            Some(CircleEinstein {
                ric_double_prime: Check::residual(r.ric_double_prime_residual, tol),
                rho_h: Check::residual(r.rho_h_residual, tol),
                phi_reeb: Check::residual(r.phi_reeb, tol),
                rho_h_phi: Check::residual(r.rho_h_phi - r.rho_h_phi_predicted, tol),
                trace_free_star_ricci_squared: tag(r.trace_free_star_ricci_squared, tol),
                curvature_integrand: Check::residual(r.curvature_integrand, tol),
                bound: CurvatureOperatorBound {
                    anticommuting_squared: tag(r.r_double_prime_squared, tol),
                    commuting_squared: tag(r.r_prime_squared, tol),
                    bound: r.r_double_prime_bound,
                    passed: r.r_double_prime_squared >= r.r_double_prime_bound - tol,
                },
            })
        }
    };
    Ok(Some(CircleSummary {
        dimension: product.structure.dimension(),
        s: tag(a.s, tol),
        s_star: tag(a.s_star, tol),
        nabla_kahler_squared: tag(a.nabla_kahler_squared, tol),
        j_invariance: Check::residual(a.residuals.j_invariance, tol),
        star_gap: Check::residual(a.residuals.star_gap, tol),
        phi_pairing: Check::residual(a.residuals.phi_pairing, tol),
        commuting_squared: tag(a.r_prime_squared, tol),
        anticommuting_squared: tag(a.r_double_prime_squared, tol),
        einstein_factor,
    }))
}

fn contact_section(
    odd: &AlmostContactStructure,
    circle: Option<&CircleSummary>,
    doc: &LoadedDocument,
    tol: f64,
) -> ContactSection {
    let star = odd.star_ricci();
    let tau = odd.einstein_constant(tol);
    let curv = odd.curvature();
    let conn = odd.connection();
    let laplacians = odd.rough_laplacian_identities(tol).ok();
    let norms = odd.norm_bounds(tol).ok();
    let ratio = odd.ratio_bounds(tol).ok();
    let killing = odd.reeb_killing(tol);
    let wa = conn.weitzenboeck_residual(curv, odd.alpha_frame());
    let ww = conn.weitzenboeck_residual(curv, odd.omega_frame());
    ContactSection {
        classification: odd.classify(tol),
        compatibility: Check::residual(odd.compatibility().max(), tol),
        closedness: tag(odd.closedness(), tol),
        parallelism: tag(odd.parallelism(), tol),
        tau: tau.map(|t| tag(t, tol)),
        tau_star: tag(star.tau_star, tol),
        ratio: ratio.as_ref().and_then(|r| r.ratio).map(|r| tag(r, tol)),
        star_ricci_form: form_terms(&star.form),
        norms: NormTable {
            nabla_alpha_squared: tag(odd.nabla_alpha_squared(), tol),
            nabla_omega_squared: tag(odd.nabla_omega_squared(), tol),
            nabla_kahler_squared: circle.map(|c| c.nabla_kahler_squared),
        },
        identities: IdentityResiduals {
            rough_laplacian_alpha: laplacians.as_ref().map(|l| Check::residual(l.alpha_residual, tol)),
            rough_laplacian_omega: laplacians.as_ref().map(|l| Check::residual(l.omega_residual, tol)),
            weitzenboeck_alpha: Check::residual(wa, tol),
            weitzenboeck_omega: Check::residual(ww, tol),
            hodge_alpha: Check::residual(odd.hodge_alpha_residual(doc.orientation), tol),
            star_gap: circle.map(|c| c.star_gap),
            phi_pairing: circle.map(|c| c.phi_pairing),
        },
        bounds: BoundChecks {
            norms: norms.map(|b| NormBoundCheck {
                alpha_identity: b.alpha_identity,
                omega_identity: b.omega_identity,
                inequality: b.inequality,
                equality: b.equality,
                minus_tau: tag(b.minus_tau, tol),
                star_gap: tag(b.star_gap, tol),
            }),
            ratio: ratio.map(|r| RatioCheck {
                case: r.case,
                ratio: r.ratio.map(|x| tag(x, tol)),
                lower: r.lower,
                upper: r.upper,
                in_interval: r.in_interval,
                at_lower_endpoint: r.at_lower_endpoint,
                note: r.note,
            }),
            curvature_operator: circle
                .and_then(|c| c.einstein_factor.as_ref())
                .map(|e| e.bound.clone()),
        },
        reeb: ReebSection {
            killing_defect_squared: tag(killing.killing.norm_squared, tol),
            killing: killing.killing.is_killing,
            alpha_closed: killing.alpha_closed,
            implication_holds: killing.implication_holds,
        },
    }
}

/// Full analysis of a loaded document. The almost contact sections need
/// `alpha` and `omega` in the document and a compatible metric.
pub fn analysis_report(doc: &LoadedDocument, tol: f64) -> Result<AnalysisReport> {
    let conn = ConnectionData::new(&doc.algebra, &doc.metric)?;
    let curv = CurvatureData::new(&conn);
    let (contact, circle_product) = match doc.contact_forms() {
        None => (None, None),
        Some((alpha, omega)) => {
            let odd =
                AlmostContactStructure::build_with_tolerance(&doc.algebra, &doc.metric, alpha, omega, tol)?;
            let circle = circle_summary(&odd, tol)?;
            (Some(contact_section(&odd, circle.as_ref(), doc, tol)), circle)
        }
    };
    Ok(AnalysisReport {
        name: doc.name.clone(),
        dimension: doc.algebra.dimension(),
        tolerance: tol,
        conventions: CONVENTIONS,
        validation: validation_section(doc, tol),
        unimodularity: unimodularity_section(doc, tol),
        curvature: curvature_section(&curv, tol),
        parallel_forms: parallel_forms(&conn),
        contact,
        circle_product,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct ValidateReport {
    pub name: String,
    pub dimension: usize,
    pub tolerance: f64,
    pub validation: ValidationSection,
    pub unimodularity: UnimodularitySection,
    pub metric_positive_definite: bool,
    pub contact_forms: bool,
}

pub fn validate_report(doc: &LoadedDocument, tol: f64) -> ValidateReport {
    ValidateReport {
        name: doc.name.clone(),
        dimension: doc.algebra.dimension(),
        tolerance: tol,
        validation: validation_section(doc, tol),
        unimodularity: unimodularity_section(doc, tol),
        metric_positive_definite: true,
        contact_forms: doc.contact_forms().is_some(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ClassifyReport {
    pub name: String,
    pub tolerance: f64,
    pub classification: Classification,
    pub compatibility: Option<Check>,
    pub closedness: Option<Tagged>,
    pub parallelism: Option<Tagged>,
}

/// Classification of the document's `(alpha, omega, g)`; errors without forms.
pub fn classify_report(doc: &LoadedDocument, tol: f64) -> Result<ClassifyReport> {
    let (alpha, omega) = doc.contact_forms().ok_or_else(|| {
        crate::error::GeometryError::InvalidInput("document has no alpha and omega".into())
    })?;
    let built = AlmostContactStructure::build_with_tolerance(&doc.algebra, &doc.metric, alpha, omega, tol);
    Ok(match built {
        Ok(s) => ClassifyReport {
            name: doc.name.clone(),
            tolerance: tol,
            classification: s.classify(tol),
            compatibility: Some(Check::residual(s.compatibility().max(), tol)),
            closedness: Some(tag(s.closedness(), tol)),
            parallelism: Some(tag(s.parallelism(), tol)),
        },
        Err(crate::error::GeometryError::NotAlmostContact(_))
        | Err(crate::error::GeometryError::IncompatibleMetric(_)) => ClassifyReport {
            name: doc.name.clone(),
            tolerance: tol,
            classification: Classification::NotAlmostContactMetric,
            compatibility: None,
            closedness: None,
            parallelism: None,
        },
        Err(e) => return Err(e),
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ProductKind {
    WithCircle,
    Square,
}

#[derive(Clone, Debug, Serialize)]
pub struct ProductReport {
    pub name: String,
    pub kind: ProductKind,
    pub dimension: usize,
    pub tolerance: f64,
    pub conventions: Conventions,
    pub s: Tagged,
    pub s_star: Tagged,
    pub nabla_kahler_squared: Tagged,
    pub star_gap: Check,
    pub phi_pairing: Check,
    pub j_invariance: Check,
    pub star_ricci_operator: Check,
    pub einstein: bool,
    pub einstein_constant: Option<Tagged>,
    /// For the square of an Einstein factor: `s = (4n + 2) tau`.
    pub scalar_prediction: Option<Check>,
    /// For the square of an Einstein factor: `s* = 4n tau*`.
    pub star_scalar_prediction: Option<Check>,
    pub commuting_squared: Tagged,
    pub anticommuting_squared: Tagged,
    pub circle: Option<CircleEinstein>,
}

/// `M x S^1` or `M x M` for an almost cokähler document.
pub fn product_report(doc: &LoadedDocument, kind: ProductKind, tol: f64) -> Result<ProductReport> {
    let (alpha, omega) = doc.contact_forms().ok_or_else(|| {
        crate::error::GeometryError::InvalidInput("document has no alpha and omega".into())
    })?;
    let odd = AlmostContactStructure::build_with_tolerance(&doc.algebra, &doc.metric, alpha, omega, tol)?;
    let (structure, circle): (AlmostHermitianStructure, Option<CircleEinstein>) = match kind {
        ProductKind::WithCircle => {
            let p = product_with_circle(&odd)?;
            let circle = circle_summary(&odd, tol)?.and_then(|c| c.einstein_factor);
            (p.structure, circle)
        }
        ProductKind::Square => (product_double(&odd, &odd)?, None),
    };
    let a = structure.analyze_with_tolerance(tol)?;
    let einstein = structure.curvature().einstein_constant(tol);
    let factor_tau = odd.einstein_constant(tol);
    let nf = odd.n() as f64;
    let tau_star = odd.star_ricci().tau_star;
    let (scalar_prediction, star_scalar_prediction) = match (kind, factor_tau) {
        (ProductKind::Square, Some(tau)) => (
            Some(Check::residual(a.s - (4.0 * nf + 2.0) * tau, tol)),
            Some(Check::residual(a.s_star - 4.0 * nf * tau_star, tol)),
        ),
        _ => (None, None),
    };
    Ok(ProductReport {
        name: doc.name.clone(),
        kind,
        dimension: structure.dimension(),
        tolerance: tol,
        conventions: CONVENTIONS,
        s: tag(a.s, tol),
        s_star: tag(a.s_star, tol),
        nabla_kahler_squared: tag(a.nabla_kahler_squared, tol),
        star_gap: Check::residual(a.residuals.star_gap, tol),
        phi_pairing: Check::residual(a.residuals.phi_pairing, tol),
        j_invariance: Check::residual(a.residuals.j_invariance, tol),
        star_ricci_operator: Check::residual(a.residuals.star_ricci_operator, tol),
        einstein: einstein.is_some(),
        einstein_constant: einstein.map(|t| tag(t, tol)),
        scalar_prediction,
        star_scalar_prediction,
        commuting_squared: tag(a.r_prime_squared, tol),
        anticommuting_squared: tag(a.r_double_prime_squared, tol),
        circle,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct RunSummary {
    pub seed: u64,
    pub status: SearchStatus,
    pub residual: f64,
    pub initial_residual: f64,
    pub iterations: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct SearchReport {
    pub name: String,
    pub family: FamilyKind,
    pub parameters: usize,
    pub residual_tolerance: f64,
    pub runs: Vec<RunSummary>,
    pub converged: usize,
    pub best_residual: f64,
    pub best_status: SearchStatus,
    /// Best metric, normalized to `det = 1`, row by row.
    pub best_metric: Vec<Vec<f64>>,
    /// Checked at `max(tolerance, 10 sqrt(residual_tolerance))`.
    pub verification: CandidateReport,
}

pub fn search_report(
    doc: &LoadedDocument,
    family: FamilyKind,
    multi: &MultiStart,
    seed: u64,
    residual_tolerance: f64,
    tol: f64,
) -> Result<SearchReport> {
    let best = multi.best();
    // a residual r bounds |ric - tau g| only by about sqrt(r)
    let tol = tol.max(10.0 * residual_tolerance.sqrt());
    let m = best.metric.matrix();
    let rows = (0..m.nrows()).map(|i| m.row(i).iter().copied().collect()).collect();
    // the document's forms only apply if they are compatible with the new metric
    let forms = doc.contact_forms().filter(|(a, w)| {
        AlmostContactStructure::build_with_tolerance(&doc.algebra, &best.metric, a, w, tol).is_ok()
    });
    let verification = crate::einstein_search::verify_candidate(&doc.algebra, &best.metric, forms, tol)?;
    Ok(SearchReport {
        name: doc.name.clone(),
        family,
        parameters: best.parameterization.parameter_count(),
        residual_tolerance,
        runs: multi
            .runs
            .iter()
            .enumerate()
            .map(|(i, r)| RunSummary {
                seed: seed.wrapping_add(i as u64),
                status: r.status,
                residual: r.residual,
                initial_residual: r.initial_residual,
                iterations: r.iterations,
            })
            .collect(),
        converged: multi.converged(),
        best_residual: best.residual,
        best_status: best.status,
        best_metric: rows,
        verification,
    })
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub name: String,
    pub tolerance: f64,
    pub candidate: CandidateReport,
    /// Einstein, and every identity and bound that applies holds.
    pub passed: bool,
}

pub fn verify_report(doc: &LoadedDocument, tol: f64) -> Result<VerifyReport> {
    let candidate = crate::einstein_search::verify_candidate(&doc.algebra, &doc.metric, doc.contact_forms(), tol)?;
    let mut passed = candidate.einstein_constant.is_some();
    if let Some(c) = &candidate.contact {
        if let Some(l) = &c.rough_laplacian {
            passed &= l.passed;
        }
        if let Some(b) = &c.norm_bounds {
            passed &= b.alpha_identity && b.omega_identity && b.inequality;
        }
        if let Some(r) = &c.ratio {
            passed &= r.in_interval != Some(false) && r.case != RatioCase::Contradiction;
        }
    }
    Ok(VerifyReport {
        name: doc.name.clone(),
        tolerance: tol,
        candidate,
        passed,
    })
}

/// Rounds a float to 12 significant digits; `-0` becomes `0`.
pub fn round_significant(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn round_value(v: Value) -> Value {
    match v {
        Value::Number(n) if n.is_f64() => {
            let x = round_significant(n.as_f64().expect("f64"));
            Number::from_f64(x).map(Value::Number).unwrap_or(Value::Null)
        }
        Value::Array(items) => Value::Array(items.into_iter().map(round_value).collect()),
        Value::Object(map) => Value::Object(map.into_iter().map(|(k, v)| (k, round_value(v))).collect()),
        other => other,
    }
}

/// Pretty JSON with floats rounded to 12 significant digits and keys in
/// declaration order.
pub fn to_json<T: Serialize>(report: &T) -> String {
    let value = serde_json::to_value(report).expect("reports serialize");
    let mut s = serde_json::to_string_pretty(&round_value(value)).expect("values serialize");
    s.push('\n');
    s
}

fn scalar_text(v: &Value) -> String {
    match v {
        Value::Null => "-".into(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

fn tagged_text(map: &Map<String, Value>) -> Option<String> {
    let keys: Vec<&str> = map.keys().map(String::as_str).collect();
    let value = scalar_text(map.get("value")?);
    let tol = scalar_text(map.get("tolerance")?);
    match keys.as_slice() {
        ["value", "tolerance"] => Some(format!("{value} (tol {tol})")),
        ["value", "tolerance", "passed"] => {
            let verdict = if map["passed"] == Value::Bool(true) { "ok" } else { "FAIL" };
            Some(format!("{value} (tol {tol}) {verdict}"))
        }
        _ => None,
    }
}

fn is_flat_array(items: &[Value]) -> bool {
    items.iter().all(|v| !v.is_object() && !v.is_array())
}

fn render(out: &mut String, key: &str, v: &Value, depth: usize) {
    let pad = "  ".repeat(depth);
    match v {
        Value::Object(map) => {
            if let Some(line) = tagged_text(map) {
                out.push_str(&format!("{pad}{key}: {line}\n"));
                return;
            }
            if let (Some(Value::Array(m)), Some(val), 2) = (map.get("monomial"), map.get("value"), map.len()) {
                let idx: Vec<String> = m.iter().map(scalar_text).collect();
                out.push_str(&format!("{pad}e^{{{}}}: {}\n", idx.join(","), scalar_text(val)));
                return;
            }
            out.push_str(&format!("{pad}{key}:\n"));
            for (k, item) in map {
                render(out, k, item, depth + 1);
            }
        }
        Value::Array(items) if is_flat_array(items) => {
            let parts: Vec<String> = items.iter().map(scalar_text).collect();
            out.push_str(&format!("{pad}{key}: [{}]\n", parts.join(", ")));
        }
        Value::Array(items) => {
            out.push_str(&format!("{pad}{key}:\n"));
            for (i, item) in items.iter().enumerate() {
                render(out, &format!("[{i}]"), item, depth + 1);
            }
        }
        scalar => out.push_str(&format!("{pad}{key}: {}\n", scalar_text(scalar))),
    }
}

/// Indented `key: value` text of a report, with the same rounding as JSON.
pub fn to_text<T: Serialize>(report: &T) -> String {
    let value = round_value(serde_json::to_value(report).expect("reports serialize"));
    let mut out = String::new();
    match &value {
        Value::Object(map) => {
            for (k, v) in map {
                render(&mut out, k, v, 0);
            }
        }
        other => render(&mut out, "report", other, 0),
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::io::document::parse_document;

    #[test]
    fn rounding() {
        assert_eq!(round_significant(0.1 + 0.2), 0.3);
        assert_eq!(round_significant(-0.0), 0.0);
        assert_eq!(round_significant(3f64.sqrt() / 2.0), 0.866025403784);
        assert_eq!(round_significant(-1.4999999999999998), -1.5);
        assert_eq!(round_significant(1.2345678901234e-20), 1.23456789012e-20);
    }

    #[test]
    fn text_rendering() {
        let text = to_text(&Check::residual(2e-12, 1e-9));
        assert_eq!(text, "value: 2e-12\ntolerance: 1e-9\npassed: true\n");
        #[derive(Serialize)]
        struct Wrap {
            check: Check,
            terms: Vec<FormTerm>,
        }
        let text = to_text(&Wrap {
            check: Check::residual(1.0, 1e-9),
            terms: vec![FormTerm { monomial: vec![1, 2], value: -0.75 }],
        });
        assert!(text.contains("check: 1.0 (tol 1e-9) FAIL"));
        assert!(text.contains("e^{1,2}: -0.75"));
    }

    #[test]
    fn key_order_is_declaration_order() {
        let doc = parse_document(
            r#"{"name":"r","dimension":2,"differential":{},"metric":"identity"}"#,
            1e-9,
        )
        .unwrap();
        let json = to_json(&validate_report(&doc, 1e-9));
        let name = json.find("\"name\"").unwrap();
        let validation = json.find("\"validation\"").unwrap();
        let uni = json.find("\"unimodularity\"").unwrap();
        assert!(name < validation && validation < uni);
    }
}

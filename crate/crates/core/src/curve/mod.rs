//! Plane curves as ternary forms: evaluation, restriction to lines,
//! irreducibility over `F_q` and over its algebraic closure, and samplers for
//! families that are irreducible by construction.

mod form;
mod irreducible;
mod restrict;
mod sample;

pub use form::{divides, monomial_count, monomial_position, monomials, Monomial, PlaneCurve};
pub use irreducible::{
    family_certificate, fq_factor, geometric_irreducibility, is_irreducible_fq, line_factor,
    FamilyCertificate, IrreducibilityCertificate, IrreducibilityStatus, Witness,
    MAX_FQ_IRREDUCIBILITY_DEGREE,
};
pub use restrict::{line_basis, line_profile, restrict_to_line, BinaryForm, LineProfile};
pub use sample::{
    fermat_curve, graph_type_curve, pencil_curve, sample_certified_curve, CertifiedCurve,
    CurveFamily,
};

#[cfg(test)]
mod tests;

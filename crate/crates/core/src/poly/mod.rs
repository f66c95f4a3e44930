//! Multivariate polynomials over the rationals and Groebner-basis tools.

mod cache;
mod groebner;
mod ideal;
mod monomial;
mod order;
mod polynomial;
mod ringmap;
pub mod text;

pub use cache::{GbCache, CACHE_ENV, DEFAULT_CACHE_DIR};
pub use groebner::{
    buchberger, is_groebner_basis, leading_monomial, leading_term, normal_form, normal_form_by,
    GbCaps,
};
pub use ideal::{eliminate, ideal_equal, leading_monomials, monomial_dimension, Ideal};
pub use monomial::Monomial;
pub use order::TermOrder;
pub use polynomial::{Polynomial, VarTable};
pub use ringmap::RingMap;

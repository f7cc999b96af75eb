//! Exact arithmetic substrate: rationals, cyclotomic numbers, sparse
//! multivariate polynomials, truncated power and Laurent series, the Todd
//! series and dense linear algebra over `Q`.

mod cyclo;
pub mod linalg;
mod poly;
mod ring;
mod series;
mod todd;

pub use cyclo::{cyclotomic_polynomial, rela4_check, CycloNum};
pub use poly::{pairing, Bank, DiffOperator, Polynomial};
pub use ring::{format_rational, parse_rational, rat, Rational, Ring};
pub use series::{series_invert, LaurentSeries, PowerSeries};
pub use todd::{bernoulli, todd_inverse_series, todd_series};

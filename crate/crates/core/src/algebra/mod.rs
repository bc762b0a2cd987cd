//! Exact rational, polynomial and rational-function arithmetic.

pub mod cyclotomic;
pub mod linalg;
pub mod norm;
pub mod poly;
pub mod ratfunc;
pub mod rational;

pub use cyclotomic::{classify_unity_zeros, cyclotomic, cyclotomic_profile, CyclotomicProfile};
pub use norm::norm_over_kth_roots;
pub use poly::Poly;
pub use ratfunc::RationalFunction;
pub use rational::{frac, q, Rational};

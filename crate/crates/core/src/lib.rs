//! Reduction, quantitative typing, inhabitation and meaningfulness for the
//! distant bang calculus and its call-by-name and call-by-value fragments.

pub mod cbnv;
pub mod inhabitation;
pub mod meaning;
pub mod measures;
pub mod reduction;
pub mod suite;
pub mod syntax;
pub mod typesys;

pub mod cm_order;
pub mod finite_field;
pub mod fp_poly;
pub mod modclass;
pub mod weierstrass;
pub mod quadrature;
pub mod spherecurve;
pub mod hopfmap;
pub mod lift;
pub mod emit;
pub mod frobcheck;
pub mod selftest;

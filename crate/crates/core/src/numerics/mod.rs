pub mod bigfixed;
pub mod cheb;
pub mod gamma;
pub mod quad;
pub mod rk;
pub mod roots;
pub mod series;

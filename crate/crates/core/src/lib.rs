pub mod abelian;
pub mod freeness;
pub mod int;
pub mod lambda_core;
pub mod uniformization;
pub mod whitehead;

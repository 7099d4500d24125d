//! Exact symbolic kernel for the quantized coordinate ring of SL(n+1) and
//! its relatives: the quantum matrix bialgebra, the Borel and torus
//! quotients, the unipotent subalgebras, and U_q(sl_{n+1}) with its dual
//! pairing.
//!
//! Everything is computed over the exact coefficient ring Q[q, q^-1]; no
//! floating point anywhere. The crate is organized as:
//!
//! - [`coeff`] — Laurent polynomials in q with rational coefficients,
//!   specialization at rational q, and the cleared-denominator form used
//!   for pairing values (which live in q-hat^{-k} * Q[q, q^-1]).
//! - [`ncalg`] — words over indexed generators, noncommutative polynomials,
//!   tensor-product elements, the rewriting engine that produces canonical
//!   forms for each algebra kind, and homomorphisms given by generator
//!   images.
//! - [`qcoord`] — quantum determinant and minors, Hopf structure maps,
//!   transpose, unipotent generators and their presentations, coactions and
//!   coinvariants, the torus action, and smash products.
//! - [`uqrep`] — weight-lattice arithmetic, the U_q word calculus, the
//!   vector representation and its tensor powers, matrix-coefficient
//!   functionals, the dual pairing, and the phi/psi correspondence checks.
//! - [`verify`] — the named verification suites shared by the CLI and the
//!   acceptance tests, with JSON report types.

pub mod coeff;
pub mod ncalg;
pub mod qcoord;
pub mod uqrep;
pub mod verify;

//! Computational companion for the slice filtration of `C_{2^n}`-equivariant
//! quotient modules: markings and their orbits, associated-graded layers,
//! Hilbert series of `π_*^e`, `F_2` Gröbner machinery, derived relations in
//! the representation ring, and Euler-characteristic gates for Moore spaces.

pub mod cyclic2;
pub mod decimal;
pub mod f2poly;
pub mod hilbert;
pub mod koszul;
pub mod kzero;
pub mod moore;

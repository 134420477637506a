//! Biextraspecial groups `B^ε(m) = Q:L` with `Q` a special 2-group of order
//! `2^{2+2m}` and `L ≅ S3`: explicit construction, dent spaces and their
//! quadratic forms, composition and classification, the extraspecial
//! centralizer `R_t`, and the outer automorphism group.

pub mod algebra;
pub mod aut;
pub mod compose;
pub mod dentspace;
pub mod extraspecial;
pub mod groupmodel;
pub mod morphism;
pub mod suite;

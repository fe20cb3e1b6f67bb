//! Point-set constructions: sequential M-sequence generators, Sobol nets,
//! and the Halton and Faure baselines.

mod halton;
mod lfsr;
mod sequential;
mod sobol;

pub use halton::{faure_base, faure_points, first_primes, halton_points, radical_inverse};
pub use lfsr::{
    is_primitive, msequence, random_primitive_poly, PrimitivePoly, COEFF_ONE_BIAS, MAX_DEGREE,
};
pub use sequential::{generate_net, SequentialGenerator, SequentialPoints, GEN_FILE_HEADER};
pub use sobol::{
    sobol_net, sobol_net_with_dims, DirectionEntry, SobolTable, EMBEDDED_DIRECTION_NUMBERS,
    SOBOL_BITS,
};

pub(crate) use sequential::TransformTable;

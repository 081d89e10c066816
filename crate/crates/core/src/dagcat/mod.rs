//! `C_m`-colored DAGs: hypercubes, products, slim DAGs and their fragments,
//! the operations `H⁰` and `/∼`, and bilateral objects.

mod bits;
mod dag;
mod fragment;

pub use bits::{Bits, Color};
pub use dag::{ColoredDag, NodeKey, UNBOUNDED};
pub use fragment::{
    bilateral, fragment_family_right, fragment_left, fragment_right, left_inclusion, op_h0,
    op_quot, right_inclusion, BilateralObject, FragmentFamily,
};

//! Ordered ground sets, injective and increasing tuples, and coincidence kernels.

mod atom;
mod enumerate;
mod ground;
mod kernel;
mod tuple;

pub use atom::GroundAtom;
pub use enumerate::{binomial, enumerate_tuples, falling_factorial, position_tuples};
pub use ground::{Descriptor, GroundSet};
pub use kernel::{kernel_of, Kernel};
pub(crate) use kernel::{code_kernel, positional};
pub use tuple::{IndexSet, Label, Tuple};

/// `outer × inner` with the outer coordinate most significant.
pub fn lex_product(outer: &GroundSet, inner: &GroundSet) -> crate::Result<GroundSet> {
    GroundSet::lex_product(outer, inner)
}

/// The same atoms under the inverted order.
pub fn reverse(ground: &GroundSet) -> GroundSet {
    ground.reverse()
}

//! Exact integer and rational linear algebra for toric geometry: Smith and
//! Hermite normal forms, lattice arithmetic, simplicial fans on a fan matrix,
//! fan completion, class groups, Cartier/Picard lattices and the purity
//! decision (is the Picard group contained in a free part of the class group).
//!
//! All arithmetic is arbitrary precision; every operation is a pure function
//! on immutable values and safe to call from multiple threads.

pub mod abelian;
pub mod cli;
pub mod completion;
pub mod fans;
pub mod linalg;
pub mod toric;
pub mod util;

#[cfg(test)]
mod thread_safety {
    fn assert_send_sync<T: Send + Sync>() {}

    #[test]
    fn core_types_are_send_and_sync() {
        assert_send_sync::<crate::linalg::IntMatrix>();
        assert_send_sync::<crate::linalg::Lattice>();
        assert_send_sync::<crate::abelian::FgAbGroup>();
        assert_send_sync::<crate::abelian::GroupElement>();
        assert_send_sync::<crate::fans::FanMatrix>();
        assert_send_sync::<crate::fans::Fan>();
        assert_send_sync::<crate::toric::ClassGroupPresentation>();
        assert_send_sync::<crate::toric::PurityReport>();
    }
}

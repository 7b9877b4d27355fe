//! Exact arithmetic substrate: rationals, number fields given as towers of
//! simple algebraic extensions, sparse multivariate polynomials over them and
//! normalized fractions (optionally modulo one relation).

#![allow(clippy::needless_range_loop)]

pub mod numfield;
pub mod poly;
pub mod ratfn;

use core::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;

pub use numfield::{NfElem, NumberField};
pub use poly::{Monomial, Poly, MAX_VARS};
pub use ratfn::{Frac, FracField, Relation};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    BigRational::from_integer(BigInt::from(n))
}

pub fn qq(n: i64, d: i64) -> Q {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Commutative ring with elements handled through a context value.
pub trait Ring {
    type Elem: Clone + PartialEq + Debug;

    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;

    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem {
        self.add(a, &self.neg(b))
    }
}

/// Integral domain with exact division (used by fraction-free elimination).
pub trait Domain: Ring {
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem>;
}

pub trait Field: Ring {
    fn inv(&self, a: &Self::Elem) -> Option<Self::Elem>;

    fn div(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.inv(b).map(|bi| self.mul(a, &bi))
    }
}

impl<F: Field> Domain for F {
    fn div_exact(&self, a: &Self::Elem, b: &Self::Elem) -> Option<Self::Elem> {
        self.div(a, b)
    }
}

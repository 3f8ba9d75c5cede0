//! Scalar abstraction for the numerical core.
//!
//! Everything in this crate is generic over a floating-point scalar so the
//! same algorithms run in `f32` or `f64`. The acceptance tolerances quoted in
//! the documentation assume `f64`; `f32` instantiations work but reach far
//! coarser accuracy.

use std::fmt::{Debug, Display};

use num_traits::{Float, FromPrimitive, ToPrimitive};

/// Floating-point scalar usable by the polynomial machinery.
///
/// This is a bound alias: any type with the listed capabilities (in practice
/// `f32` and `f64`) implements it automatically.
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Lossless-enough conversion from an `f64` literal.
    fn from_f64_lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal must convert into the scalar type")
    }

    /// Conversion from a degree/index.
    fn from_index(n: usize) -> Self {
        Self::from_usize(n).expect("index must convert into the scalar type")
    }
}

impl<T> Real for T where
    T: Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
}

/// Compensated (Kahan) accumulator.
///
/// Used for kernel sums and quadrature dot products where plain summation
/// would lose digits against the tight consistency tolerances.
#[derive(Clone, Copy, Debug)]
pub struct KahanSum<R: Real> {
    sum: R,
    carry: R,
}

impl<R: Real> KahanSum<R> {
    pub fn new() -> Self {
        Self {
            sum: R::zero(),
            carry: R::zero(),
        }
    }

    #[inline]
    pub fn add(&mut self, term: R) {
        let y = term - self.carry;
        let t = self.sum + y;
        self.carry = (t - self.sum) - y;
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> R {
        self.sum
    }
}

impl<R: Real> Default for KahanSum<R> {
    fn default() -> Self {
        Self::new()
    }
}

/// Compensated sum of an iterator of terms.
pub fn kahan_sum<R: Real>(terms: impl IntoIterator<Item = R>) -> R {
    let mut acc = KahanSum::new();
    for t in terms {
        acc.add(t);
    }
    acc.value()
}

//! Dyadic interval arithmetic: the certified numeric layer under root
//! isolation, embeddings and the unit log-lattice.

mod complex;
mod dyadic;
pub mod elementary;
mod format;
mod real;

pub use complex::ComplexBox;
pub use dyadic::{Dyadic, Round};
pub use format::{decimal, decimal_up, Decimal, DecimalComplex, REPORT_DIGITS};
pub use real::Interval;

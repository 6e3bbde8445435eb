use num_bigint::BigInt;
use num_rational::BigRational;

/// Arbitrary-precision rational, always in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(numer: i64, denom: i64) -> Rational {
    BigRational::new(BigInt::from(numer), BigInt::from(denom))
}

pub fn int(n: i64) -> Rational {
    BigRational::from_integer(BigInt::from(n))
}

/// Exact rational value of a finite double. Returns `None` for NaN or infinities.
pub fn rational_from_f64(x: f64) -> Option<Rational> {
    BigRational::from_float(x)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::{Signed, Zero};

    #[test]
    fn lowest_terms_and_positive_denominator() {
        let r = rat(6, -4);
        assert_eq!(*r.numer(), BigInt::from(-3));
        assert_eq!(*r.denom(), BigInt::from(2));
        assert!(r.denom().is_positive());

        let z = rat(0, -7);
        assert!(z.is_zero());
        assert_eq!(*z.denom(), BigInt::from(1));
    }

    #[test]
    fn from_f64_is_exact() {
        assert_eq!(rational_from_f64(0.5), Some(rat(1, 2)));
        assert_eq!(rational_from_f64(-3.0), Some(int(-3)));
        assert!(rational_from_f64(f64::NAN).is_none());
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact coefficients. Always stored in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Parses `"n"`, `"-n"` or `"p/q"`. Returns `None` on malformed input or a
/// zero denominator.
pub fn parse_rational(s: &str) -> Option<Rational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if den.is_zero() {
        return None;
    }
    Some(Rational::new(num, den))
}

/// Formats as `"n"` for integers and `"p/q"` otherwise.
pub fn format_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// `(−1)^{pq}` as a rational.
pub fn koszul_sign(p: i64, q: i64) -> Rational {
    if koszul_odd(p, q) {
        -Rational::one()
    } else {
        Rational::one()
    }
}

/// True when `(−1)^{pq} = −1`.
pub fn koszul_odd(p: i64, q: i64) -> bool {
    p.rem_euclid(2) == 1 && q.rem_euclid(2) == 1
}

/// True when `(−1)^e = −1`.
pub fn odd(e: i64) -> bool {
    e.rem_euclid(2) == 1
}

/// `(−1)^e` as a rational.
pub fn sign(e: i64) -> Rational {
    if odd(e) {
        -Rational::one()
    } else {
        Rational::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn koszul_examples() {
        assert_eq!(koszul_sign(0, 5), rat(1));
        assert_eq!(koszul_sign(1, 1), rat(-1));
        assert_eq!(koszul_sign(-1, 3), rat(-1));
    }

    #[test]
    fn parse_and_format() {
        assert_eq!(parse_rational("-6/4"), Some(ratio(-3, 2)));
        assert_eq!(parse_rational("7"), Some(rat(7)));
        assert_eq!(parse_rational("1/0"), None);
        assert_eq!(parse_rational("x"), None);
        assert_eq!(format_rational(&ratio(4, -6)), "-2/3");
        assert_eq!(format_rational(&rat(-5)), "-5");
    }
}

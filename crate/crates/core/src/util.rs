use rug::{Complex, Float, Integer, Rational};

pub fn factorial(n: usize) -> Integer {
    Integer::from(Integer::factorial(n as u32))
}

pub fn binomial(n: usize, k: usize) -> Integer {
    if k > n {
        return Integer::ZERO;
    }
    Integer::from(Integer::binomial_u(n as u32, k as u32))
}

/// `n! / (n - k)!`, the falling factorial.
pub(crate) fn falling(n: usize, k: usize) -> Integer {
    let mut acc = Integer::from(1);
    for i in 0..k {
        acc *= (n - i) as u32;
    }
    acc
}

pub fn rational_string(r: &Rational) -> String {
    r.to_string()
}

/// Exact `p`-th root of a nonnegative rational, when one exists.
pub(crate) fn exact_root(r: &Rational, p: u32) -> Option<Rational> {
    if *r < 0 {
        return None;
    }
    let num = exact_int_root(r.numer(), p)?;
    let den = exact_int_root(r.denom(), p)?;
    Some(Rational::from((num, den)))
}

fn exact_int_root(n: &Integer, p: u32) -> Option<Integer> {
    let (root, rem) = n.clone().root_rem(Integer::new(), p);
    if rem == 0 {
        Some(root)
    } else {
        None
    }
}

pub(crate) fn cabs(z: &Complex) -> Float {
    Float::with_val(z.prec().0, z.abs_ref())
}

pub(crate) fn czero(prec: u32) -> Complex {
    Complex::new(prec)
}

pub(crate) mod serde_rational {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&r.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        s.trim()
            .parse::<Rational>()
            .map_err(serde::de::Error::custom)
    }
}

pub(crate) mod serde_rational_vec {
    use rug::Rational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &[Rational], s: S) -> Result<S::Ok, S::Error> {
        s.collect_seq(v.iter().map(|r| r.to_string()))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<Rational>, D::Error> {
        let v = Vec::<String>::deserialize(d)?;
        v.iter()
            .map(|s| s.trim().parse::<Rational>().map_err(serde::de::Error::custom))
            .collect()
    }
}

/// Complex numbers are written as a pair of decimal strings so that no
/// precision is lost on a round trip.
pub(crate) mod serde_complex {
    use rug::{Complex, Float};
    use serde::{Deserialize, Deserializer, Serialize, Serializer};

    #[derive(Serialize, Deserialize)]
    struct Pair {
        re: String,
        im: String,
    }

    pub fn serialize<S: Serializer>(z: &Complex, s: S) -> Result<S::Ok, S::Error> {
        Pair {
            re: z.real().to_string(),
            im: z.imag().to_string(),
        }
        .serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Complex, D::Error> {
        let pair = Pair::deserialize(d)?;
        let prec = crate::DEFAULT_PRECISION;
        let re = Float::with_val(prec, Float::parse(&pair.re).map_err(serde::de::Error::custom)?);
        let im = Float::with_val(prec, Float::parse(&pair.im).map_err(serde::de::Error::custom)?);
        Ok(Complex::with_val(prec, (re, im)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factorials_and_roots() {
        assert_eq!(factorial(0), 1);
        assert_eq!(factorial(21), Integer::from(51_090_942_171_709_440_000u128));
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(falling(5, 2), 20);
        assert_eq!(exact_root(&Rational::from((16, 81)), 4), Some(Rational::from((2, 3))));
        assert_eq!(exact_root(&Rational::from(2), 2), None);
        assert_eq!(exact_root(&Rational::from(-8), 3), None);
    }
}

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn qf(n: i64, d: i64) -> Q {
    Q::new(BigInt::from(n), BigInt::from(d))
}

pub fn zero() -> Q {
    Q::zero()
}

pub fn one() -> Q {
    Q::one()
}

/// Parses `7`, `-3/2` or `0.25` into an exact rational.
pub fn parse_q(s: &str) -> Option<Q> {
    let s = s.trim();
    if s.is_empty() {
        return None;
    }
    if let Some((a, b)) = s.split_once('/') {
        let n: BigInt = a.trim().parse().ok()?;
        let d: BigInt = b.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(Q::new(n, d));
    }
    if let Some((a, b)) = s.split_once('.') {
        let neg = a.trim_start().starts_with('-');
        let ip: BigInt = if a.is_empty() || a == "-" {
            BigInt::zero()
        } else {
            a.parse().ok()?
        };
        if !b.chars().all(|c| c.is_ascii_digit()) {
            return None;
        }
        let fp: BigInt = if b.is_empty() { BigInt::zero() } else { b.parse().ok()? };
        let den = num_traits::pow(BigInt::from(10), b.len());
        let frac = Q::new(fp, den);
        let ipq = Q::from_integer(ip);
        return Some(if neg { ipq - frac } else { ipq + frac });
    }
    let n: BigInt = s.parse().ok()?;
    Some(Q::from_integer(n))
}

pub fn parse_vec(s: &str) -> Option<Vec<Q>> {
    let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
    if s.trim().is_empty() {
        return Some(Vec::new());
    }
    s.split([',', '|', ' '])
        .filter(|t| !t.trim().is_empty())
        .map(parse_q)
        .collect()
}

pub fn fmt_q(x: &Q) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

pub fn fmt_vec(v: &[Q]) -> String {
    let parts: Vec<String> = v.iter().map(fmt_q).collect();
    format!("({})", parts.join(","))
}

pub fn is_nonneg_integer(x: &Q) -> bool {
    x.is_integer() && !x.is_negative()
}

pub fn to_i64(x: &Q) -> Option<i64> {
    if x.is_integer() {
        x.numer().to_i64()
    } else {
        None
    }
}

pub fn to_f64(x: &Q) -> f64 {
    x.numer().to_f64().unwrap_or(f64::NAN) / x.denom().to_f64().unwrap_or(f64::NAN)
}

pub fn factorial(n: u32) -> Q {
    let mut r = BigInt::one();
    for k in 2..=n {
        r *= BigInt::from(k);
    }
    Q::from_integer(r)
}

/// Serde helpers writing rationals as strings such as `-3/2`.
pub mod ser {
    use super::{fmt_q, Q};
    use serde::ser::SerializeSeq;
    use serde::Serializer;

    pub fn q<S: Serializer>(x: &Q, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&fmt_q(x))
    }

    pub fn vec<S: Serializer>(v: &[Q], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for x in v {
            seq.serialize_element(&fmt_q(x))?;
        }
        seq.end()
    }

    pub fn vecs<S: Serializer>(v: &[Vec<Q>], s: S) -> Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(v.len()))?;
        for w in v {
            let strs: Vec<String> = w.iter().map(fmt_q).collect();
            seq.serialize_element(&strs)?;
        }
        seq.end()
    }
}

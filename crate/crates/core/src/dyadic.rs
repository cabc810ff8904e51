use std::cmp::Ordering;

use num_bigint::BigUint;
use num_traits::{ToPrimitive, Zero};

/// Exact nonnegative dyadic rational `num / 2^exp`, kept canonical: the
/// numerator is odd, or the value is zero with `exp = 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Dyadic {
    num: BigUint,
    exp: u64,
}

impl Dyadic {
    pub fn zero() -> Dyadic {
        Dyadic { num: BigUint::zero(), exp: 0 }
    }

    /// `2^k` for any integer `k`.
    pub fn pow2(k: i64) -> Dyadic {
        if k >= 0 {
            Dyadic { num: BigUint::from(1u8) << (k as u64), exp: 0 }
        } else {
            Dyadic { num: BigUint::from(1u8), exp: k.unsigned_abs() }
        }
    }

    fn canonical(mut num: BigUint, mut exp: u64) -> Dyadic {
        if num.is_zero() {
            return Dyadic::zero();
        }
        let tz = num.trailing_zeros().unwrap_or(0).min(exp);
        num >>= tz;
        exp -= tz;
        Dyadic { num, exp }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn numerator(&self) -> &BigUint {
        &self.num
    }

    pub fn exponent(&self) -> u64 {
        self.exp
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        let e = self.exp.max(other.exp);
        let a = &self.num << (e - self.exp);
        let b = &other.num << (e - other.exp);
        Self::canonical(a + b, e)
    }

    pub fn half(&self) -> Dyadic {
        Self::canonical(self.num.clone(), self.exp + 1)
    }

    pub fn to_f64(&self) -> f64 {
        self.num.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(self.exp as i32)
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        let e = self.exp.max(other.exp);
        (&self.num << (e - self.exp)).cmp(&(&other.num << (e - other.exp)))
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl std::fmt::Display for Dyadic {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.exp == 0 {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/2^{}", self.num, self.exp)
        }
    }
}

impl std::iter::Sum for Dyadic {
    fn sum<I: Iterator<Item = Dyadic>>(iter: I) -> Dyadic {
        iter.fold(Dyadic::zero(), |a, b| a.add(&b))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let x = Dyadic::pow2(-1).add(&Dyadic::pow2(-1));
        assert_eq!(x, Dyadic::pow2(0));
        assert_eq!(x.exponent(), 0);
        assert_eq!(Dyadic::pow2(1).half().half(), Dyadic::pow2(-1));
        assert_eq!(Dyadic::zero().half(), Dyadic::zero());
    }

    #[test]
    fn ordering() {
        let three_quarters = Dyadic::pow2(-1).add(&Dyadic::pow2(-2));
        assert!(three_quarters < Dyadic::pow2(0));
        assert!(three_quarters > Dyadic::pow2(-1));
        assert_eq!(three_quarters.to_string(), "3/2^2");
        let deep = Dyadic::pow2(-300);
        assert!(deep > Dyadic::zero());
        assert!(deep.add(&deep) == Dyadic::pow2(-299));
    }
}

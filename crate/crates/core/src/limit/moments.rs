use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact moments `E[X^k]`, `k = 0..=k_max`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MomentTable {
    pub k_max: usize,
    pub moments: Vec<BigRational>,
}

impl MomentTable {
    pub fn get(&self, k: usize) -> &BigRational {
        &self.moments[k]
    }

    pub fn variance(&self) -> BigRational {
        self.get(2) - self.get(1) * self.get(1)
    }

    pub fn as_f64(&self) -> Vec<f64> {
        self.moments.iter().map(|m| m.to_f64().unwrap_or(f64::NAN)).collect()
    }
}

pub(crate) fn factorials(n: usize) -> Vec<BigUint> {
    let mut out = Vec::with_capacity(n + 1);
    out.push(BigUint::one());
    for k in 1..=n {
        let next = &out[k - 1] * BigUint::from(k);
        out.push(next);
    }
    out
}

fn big(n: &BigUint) -> BigRational {
    BigRational::from_integer(BigInt::from(n.clone()))
}

/// Raising the fixed-point equation to the `k`-th power and using
/// `E[sqrt(U)^k (1 - sqrt(U))^(k-i)] = 2 (k+1)! (k-i)! / (2k-i+2)!` gives a
/// linear relation in which `E[X^k]` appears on both sides; solved for it:
///
/// `E[X^k] = 2 (k+2)! (k-1)! sum_{i<k} E[X^i] / ((2k-i+2)! i!)`.
pub fn moments(k_max: usize) -> Result<MomentTable> {
    if k_max < 1 {
        return Err(Error::Domain("k_max must be at least 1".into()));
    }
    let fact = factorials(2 * k_max + 2);
    let mut moments = vec![BigRational::one()];
    for k in 1..=k_max {
        let mut sum = BigRational::zero();
        for (i, m) in moments.iter().enumerate() {
            sum += m / big(&(&fact[2 * k - i + 2] * &fact[i]));
        }
        let prefactor = big(&(&fact[k + 2] * &fact[k - 1])) * BigRational::from_integer(2.into());
        moments.push(prefactor * sum);
    }
    Ok(MomentTable { k_max, moments })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(p: i64, q: i64) -> BigRational {
        BigRational::new(p.into(), q.into())
    }

    #[test]
    fn low_moments() {
        let t = moments(3).unwrap();
        assert_eq!(t.get(0), &r(1, 1));
        assert_eq!(t.get(1), &r(1, 2));
        assert_eq!(t.get(2), &r(4, 15));
        assert_eq!(t.variance(), r(1, 60));
        assert_eq!(t.get(3), &r(187, 1260));
        assert!(moments(0).is_err());
    }

    #[test]
    fn unsolved_relation_closes() {
        // E[X^k] = 2 (k+1)! k! sum_{i<=k} E[X^i] / ((2k-i+2)! i!)
        let t = moments(25).unwrap();
        let fact = factorials(60);
        for k in 1..=25 {
            let mut sum = BigRational::zero();
            for i in 0..=k {
                sum += t.get(i) / big(&(&fact[2 * k - i + 2] * &fact[i]));
            }
            let rhs = big(&(&fact[k + 1] * &fact[k])) * BigRational::from_integer(2.into()) * sum;
            assert_eq!(&rhs, t.get(k), "k = {k}");
        }
    }

    #[test]
    fn moments_decrease_strictly_in_unit_interval() {
        let t = moments(40).unwrap();
        for k in 1..40 {
            assert!(t.get(k + 1) < t.get(k));
            assert!(t.get(k + 1) > &BigRational::zero());
        }
        assert!(t.get(1) < &BigRational::one());
    }
}

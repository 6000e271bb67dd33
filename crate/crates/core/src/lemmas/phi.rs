//! The phi partial products controlling the anticomplete-pair growth rates:
//! `phi_s(c) = prod_{i=1..s} (1 - c^(2^(i+1)))` and
//! `phi_{r,s}(c) = phi_s(c) / phi_r(c)`.

use crate::error::{Error, Result};
use crate::rat::Rat;

#[derive(Clone, Debug, PartialEq)]
pub struct PhiParams {
    pub c: Rat,
    pub r: u32,
    pub s: u32,
}

impl PhiParams {
    pub fn new(c: Rat, r: u32, s: u32) -> Result<Self> {
        if !(c.is_positive() && c <= Rat::pow2_neg(9)) {
            return Err(Error::RangeError {
                op: "phi_eval",
                param: "c",
                value: c.to_string(),
                range: "(0, 2^-9]",
            });
        }
        if r > s {
            return Err(Error::RangeError {
                op: "phi_eval",
                param: "r",
                value: format!("{r} > s = {s}"),
                range: "0 <= r <= s",
            });
        }
        Ok(PhiParams { c, r, s })
    }
}

/// Exact rational `phi_{r,s}(c) = prod_{r < i <= s} (1 - c^(2^(i+1)))`.
pub fn phi_eval(params: &PhiParams) -> Rat {
    phi_range(&params.c, params.r, params.s)
}

/// `phi_s(c) = phi_{0,s}(c)`.
pub fn phi(c: &Rat, s: u32) -> Rat {
    phi_range(c, 0, s)
}

fn phi_range(c: &Rat, r: u32, s: u32) -> Rat {
    let mut out = Rat::one();
    for i in r + 1..=s {
        let factor = Rat::one() - c.pow(1i64 << (i + 1));
        out = out * factor;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn base_cases() {
        // phi_0(c) = 1 for any valid c.
        let c = Rat::pow2_neg(9);
        assert_eq!(phi(&c, 0), Rat::one());
        // phi_{r,r}(c) = 1.
        assert_eq!(
            phi_eval(&PhiParams::new(c.clone(), 3, 3).unwrap()),
            Rat::one()
        );
    }

    #[test]
    fn direct_product_value() {
        // phi_1(c) = 1 - c^4 as a plain product: phi_1(1/2) = 15/16.
        assert_eq!(phi(&Rat::new(1, 2), 1), Rat::new(15, 16));
        // At c = 2^-9 that is 1 - 2^-36.
        let c = Rat::pow2_neg(9);
        assert_eq!(phi(&c, 1), Rat::one() - Rat::pow2_neg(36));
        // phi_2 = (1 - c^4)(1 - c^8).
        assert_eq!(
            phi(&c, 2),
            (Rat::one() - Rat::pow2_neg(36)) * (Rat::one() - Rat::pow2_neg(72))
        );
    }

    #[test]
    fn toobig_lower_bound() {
        // phi_{r,s}(c) >= 1 - 2 c^(2^(r+2)) >= 1/2 for c <= 2^-9.
        let c = Rat::pow2_neg(9);
        for r in 0..=4u32 {
            for s in r..=8u32 {
                let v = phi_eval(&PhiParams::new(c.clone(), r, s).unwrap());
                let bound = Rat::one() - Rat::from_int(2) * c.pow(1i64 << (r + 2));
                assert!(v >= bound);
                assert!(v <= Rat::one());
                assert!(v >= Rat::new(1, 2));
            }
        }
    }

    #[test]
    fn quotient_identity_and_monotonicity() {
        let c = Rat::new(1, 1000);
        for r in 0..=3u32 {
            for s in r..=6u32 {
                let lhs = phi_eval(&PhiParams::new(c.clone(), r, s).unwrap());
                assert_eq!(lhs * phi(&c, r), phi(&c, s));
            }
        }
        // monotone decreasing in s
        for s in 0..6u32 {
            assert!(phi(&c, s + 1) < phi(&c, s));
        }
    }

    #[test]
    fn range_errors() {
        assert!(PhiParams::new(Rat::new(1, 4), 0, 1).is_err()); // c too big
        assert!(PhiParams::new(Rat::pow2_neg(9), 3, 2).is_err()); // r > s
    }
}

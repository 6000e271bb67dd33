//! The exponent chain: the round-one constant feeds the midway constant,
//! which feeds the round-two constant, which feeds the final one.

use crate::rat::Rat;
use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantLedger {
    /// Round-one blockade exponent.
    pub a1: u64,
    /// Midway exponent, 6 a1^3.
    pub b_mid: u64,
    /// Round-two exponent, 16 b^2 + 24 b.
    pub a2: u64,
    /// Final exponent, 32 a2 + 96.
    pub d: u64,
    /// Erdos-Hajnal exponent for P5, exposed as a parameter (the source
    /// result does not pin a value); this is the desk-scale default.
    pub eh_exponent: Rat,
}

pub fn ledger() -> ConstantLedger {
    let a1: u64 = 200;
    let b_mid = 6 * a1 * a1 * a1;
    let a2 = 16 * b_mid * b_mid + 24 * b_mid;
    let d = 32 * a2 + 96;
    ConstantLedger {
        a1,
        b_mid,
        a2,
        d,
        eh_exponent: Rat::from_int(4),
    }
}

impl ConstantLedger {
    /// The chain restated, for verification against an independent
    /// recomputation.
    pub fn formulas_hold(&self) -> bool {
        self.b_mid == 6 * self.a1.pow(3)
            && self.a2 == 16 * self.b_mid * self.b_mid + 24 * self.b_mid
            && self.d == 32 * self.a2 + 96
            && self.d >= 160
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exact_values() {
        let l = ledger();
        assert_eq!(l.a1, 200);
        assert_eq!(l.b_mid, 48_000_000);
        assert_eq!(l.a2, 36_864_001_152_000_000);
        assert_eq!(l.d, 1_179_648_036_864_000_096);
        assert!(l.formulas_hold());
    }

    #[test]
    fn independent_recomputation_via_u128() {
        let a: u128 = 200;
        let b = 6 * a * a * a;
        let a2 = 16 * b * b + 24 * b;
        let d = 32 * a2 + 96;
        let l = ledger();
        assert_eq!(u128::from(l.b_mid), b);
        assert_eq!(u128::from(l.a2), a2);
        assert_eq!(u128::from(l.d), d);
        assert!(d >= 160);
    }
}

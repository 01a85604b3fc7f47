//! Binary fixed-point arithmetic on BigInt mantissas, used to diagonalise T₂
//! when double precision cannot resolve the eigenvectors.

use num_bigint::{BigInt, Sign};
use num_traits::{Signed, ToPrimitive, Zero};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fixed {
    pub m: BigInt,
}

#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    pub bits: u32,
}

impl Ctx {
    pub fn from_int(&self, v: &BigInt) -> Fixed {
        Fixed { m: v << self.bits }
    }

    pub fn from_f64(&self, v: f64) -> Fixed {
        // exact for the binary value of v
        let (mant, exp, sign) = decode(v);
        let mut m = BigInt::from(mant);
        let shift = exp + self.bits as i32;
        m = if shift >= 0 {
            m << shift as u32
        } else {
            m >> (-shift) as u32
        };
        if sign < 0 {
            m = -m;
        }
        Fixed { m }
    }

    pub fn add(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { m: &a.m + &b.m }
    }

    pub fn sub(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed { m: &a.m - &b.m }
    }

    pub fn mul(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            m: (&a.m * &b.m) >> self.bits,
        }
    }

    pub fn div(&self, a: &Fixed, b: &Fixed) -> Fixed {
        Fixed {
            m: (&a.m << self.bits) / &b.m,
        }
    }

    pub fn to_f64(&self, a: &Fixed) -> f64 {
        big_to_f64_scaled(&a.m, self.bits)
    }
}

impl Fixed {
    pub fn zero() -> Self {
        Fixed { m: BigInt::zero() }
    }

    pub fn abs_cmp(&self, other: &Fixed) -> std::cmp::Ordering {
        self.m.abs().cmp(&other.m.abs())
    }

    pub fn sign(&self) -> Sign {
        self.m.sign()
    }
}

fn decode(v: f64) -> (u64, i32, i8) {
    let bits = v.to_bits();
    let sign = if bits >> 63 == 0 { 1 } else { -1 };
    let exp = ((bits >> 52) & 0x7ff) as i32;
    let mant = if exp == 0 {
        (bits & 0xf_ffff_ffff_ffff) << 1
    } else {
        (bits & 0xf_ffff_ffff_ffff) | 0x10_0000_0000_0000
    };
    (mant, exp - 1075, sign)
}

/// v / 2^bits as f64, rounding the leading 64 bits.
pub fn big_to_f64_scaled(v: &BigInt, bits: u32) -> f64 {
    if v.is_zero() {
        return 0.0;
    }
    let len = v.bits() as i64;
    let drop = (len - 64).max(0);
    let top = (v.abs() >> drop as u64).to_u64().unwrap_or(u64::MAX) as f64;
    let s = if v.is_negative() { -1.0 } else { 1.0 };
    s * top * 2f64.powi((drop - bits as i64) as i32)
}

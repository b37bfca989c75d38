use std::sync::Arc;

use crate::error::{Error, Result};

/// Primitive polynomials for GF(2^b), indexed by b − 2 (b = 2..=16).
pub const PRIMITIVE_POLYNOMIALS: [u32; 15] = [
    0x7, 0xB, 0x13, 0x25, 0x43, 0x89, 0x11D, 0x211, 0x409, 0x805, 0x1053, 0x201B, 0x4443, 0x8003, 0x1100B,
];

/// GF(2^b) with log/antilog tables.
#[derive(Clone, Debug)]
pub struct Gf {
    bits: u32,
    exp: Arc<Vec<u16>>,
    log: Arc<Vec<u16>>,
}

impl Gf {
    pub fn new(bits: u32) -> Result<Self> {
        if !(2..=16).contains(&bits) {
            return Err(Error::Unsupported(format!("GF(2^{bits}) is outside 2..=16")));
        }
        let poly = PRIMITIVE_POLYNOMIALS[bits as usize - 2];
        let order = 1usize << bits;
        let mut exp = vec![0u16; 2 * (order - 1)];
        let mut log = vec![0u16; order];
        let mut x = 1u32;
        for (i, e) in exp.iter_mut().take(order - 1).enumerate() {
            *e = x as u16;
            log[x as usize] = i as u16;
            x <<= 1;
            if x & order as u32 != 0 {
                x ^= poly;
            }
        }
        for i in order - 1..2 * (order - 1) {
            exp[i] = exp[i - (order - 1)];
        }
        Ok(Gf { bits, exp: Arc::new(exp), log: Arc::new(log) })
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    /// 2^b.
    pub fn order(&self) -> usize {
        1 << self.bits
    }

    /// Multiplicative group order 2^b − 1.
    pub fn period(&self) -> usize {
        self.order() - 1
    }

    /// α^i.
    pub fn alpha_pow(&self, i: usize) -> u16 {
        self.exp[i % self.period()]
    }

    pub fn mul(&self, a: u16, b: u16) -> u16 {
        if a == 0 || b == 0 {
            return 0;
        }
        self.exp[self.log[a as usize] as usize + self.log[b as usize] as usize]
    }

    pub fn inv(&self, a: u16) -> u16 {
        assert!(a != 0, "zero has no inverse");
        self.exp[(self.period() - self.log[a as usize] as usize) % self.period()]
    }

    pub fn div(&self, a: u16, b: u16) -> u16 {
        self.mul(a, self.inv(b))
    }

    /// Evaluate a polynomial (lowest degree first) at x.
    pub fn eval(&self, poly: &[u16], x: u16) -> u16 {
        poly.iter().rev().fold(0, |acc, &c| self.mul(acc, x) ^ c)
    }

    /// Product of two polynomials (lowest degree first).
    pub fn poly_mul(&self, a: &[u16], b: &[u16]) -> Vec<u16> {
        let mut out = vec![0u16; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] ^= self.mul(x, y);
            }
        }
        out
    }
}

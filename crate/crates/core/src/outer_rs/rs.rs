use serde::{Deserialize, Serialize};

use super::gf::Gf;
use crate::error::{domain, Error, Result};

/// Narrow-sense shortened Reed-Solomon code with roots α¹..α^{n−k}.
///
/// Codeword position i carries the coefficient of x^{n−1−i}; the message
/// occupies positions 0..k and the parity the rest.
#[derive(Clone, Debug)]
pub struct RsCode {
    field: Gf,
    n: usize,
    k: usize,
    generator: Vec<u16>,
}

impl RsCode {
    pub fn new(bits: u32, n: usize, k: usize) -> Result<Self> {
        let field = Gf::new(bits)?;
        if n > field.period() {
            return domain(format!("length {n} exceeds 2^{bits} − 1 = {}", field.period()));
        }
        if k == 0 || k > n {
            return domain(format!("dimension must lie in 1..={n}, got {k}"));
        }
        let mut generator = vec![1u16];
        for i in 1..=n - k {
            generator = field.poly_mul(&generator, &[field.alpha_pow(i), 1]);
        }
        Ok(RsCode { field, n, k, generator })
    }

    pub fn field(&self) -> &Gf {
        &self.field
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// d = n − k + 1.
    pub fn distance(&self) -> usize {
        self.n - self.k + 1
    }

    /// k/n.
    pub fn rate(&self) -> f64 {
        self.k as f64 / self.n as f64
    }

    fn syndromes(&self, word: &[u16]) -> Vec<u16> {
        (1..=self.n - self.k)
            .map(|j| {
                let a = self.field.alpha_pow(j);
                word.iter().fold(0, |acc, &c| self.field.mul(acc, a) ^ c)
            })
            .collect()
    }

    /// X = α^{n−1−p} for codeword position p.
    fn locator(&self, p: usize) -> u16 {
        self.field.alpha_pow(self.n - 1 - p)
    }
}

/// Systematic encoding of k message symbols.
pub fn rs_encode(message: &[u16], code: &RsCode) -> Result<Vec<u16>> {
    if message.len() != code.k {
        return domain(format!("expected {} message symbols, got {}", code.k, message.len()));
    }
    if message.iter().any(|&s| s as usize >= code.field.order()) {
        return domain("message symbol outside the field");
    }
    let nsym = code.n - code.k;
    // remainder of m(x)·x^{nsym} modulo the monic generator, highest degree first
    let mut reg = vec![0u16; nsym];
    for &s in message {
        let fb = s ^ reg.first().copied().unwrap_or(0);
        reg.rotate_left(1.min(nsym));
        if let Some(last) = reg.last_mut() {
            *last = 0;
        }
        if fb != 0 {
            for (i, r) in reg.iter_mut().enumerate() {
                *r ^= code.field.mul(fb, code.generator[nsym - 1 - i]);
            }
        }
    }
    let mut word = message.to_vec();
    word.extend(reg);
    Ok(word)
}

/// A successful decode.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RsDecoded {
    pub message: Vec<u16>,
    pub codeword: Vec<u16>,
    /// Positions corrected outside the erasure set.
    pub errors: usize,
    pub erasures: usize,
}

/// Errors-and-erasures decoding; succeeds whenever 2e + s ≤ n − k.
pub fn rs_decode(received: &[u16], erased: &[bool], code: &RsCode) -> Result<RsDecoded> {
    let f = &code.field;
    let (n, nsym) = (code.n, code.n - code.k);
    if received.len() != n || erased.len() != n {
        return domain(format!("expected {n} symbols and erasure flags"));
    }
    let erasures: Vec<usize> = (0..n).filter(|&i| erased[i]).collect();
    let rho = erasures.len();
    if rho > nsym {
        return Err(Error::DecodeFailure(format!("{rho} erasures exceed n − k = {nsym}")));
    }
    let mut word: Vec<u16> = received.iter().zip(erased).map(|(&s, &e)| if e { 0 } else { s }).collect();
    if word.iter().any(|&s| s as usize >= f.order()) {
        return domain("received symbol outside the field");
    }
    let synd = code.syndromes(&word);
    if synd.iter().all(|&s| s == 0) {
        return Ok(RsDecoded { message: word[..code.k].to_vec(), codeword: word, errors: 0, erasures: rho });
    }
    // erasure locator Γ(x) = Π (1 − X_p x)
    let mut gamma = vec![1u16];
    for &p in &erasures {
        gamma = f.poly_mul(&gamma, &[1, code.locator(p)]);
    }
    // Berlekamp–Massey initialised with Γ
    let mut lambda = gamma.clone();
    let mut b = gamma;
    let mut len = rho;
    for r in rho + 1..=nsym {
        let mut delta = 0u16;
        for (i, &l) in lambda.iter().enumerate() {
            if i < r {
                delta ^= f.mul(l, synd[r - 1 - i]);
            }
        }
        let mut xb = vec![0u16];
        xb.extend_from_slice(&b);
        if delta == 0 {
            b = xb;
            continue;
        }
        let mut t = lambda.clone();
        t.resize(t.len().max(xb.len()), 0);
        for (i, &c) in xb.iter().enumerate() {
            t[i] ^= f.mul(delta, c);
        }
        if 2 * len < r + rho {
            let dinv = f.inv(delta);
            b = lambda.iter().map(|&c| f.mul(dinv, c)).collect();
            len = r + rho - len;
        } else {
            b = xb;
        }
        lambda = t;
    }
    while lambda.len() > 1 && *lambda.last().unwrap() == 0 {
        lambda.pop();
    }
    let degree = lambda.len() - 1;
    if degree != len || 2 * (degree - rho.min(degree)) + rho > nsym {
        return Err(Error::DecodeFailure("error locator degree beyond capability".into()));
    }
    // Ω = S Λ mod x^{nsym}
    let mut omega = f.poly_mul(&synd, &lambda);
    omega.truncate(nsym);
    let dlambda: Vec<u16> = lambda.iter().enumerate().skip(1).map(|(i, &c)| if i % 2 == 1 { c } else { 0 }).collect();
    let mut found = 0;
    for p in 0..n {
        let xinv = f.inv(code.locator(p));
        if f.eval(&lambda, xinv) != 0 {
            continue;
        }
        found += 1;
        let den = f.eval(&dlambda, xinv);
        if den == 0 {
            return Err(Error::DecodeFailure("repeated locator root".into()));
        }
        word[p] ^= f.div(f.eval(&omega, xinv), den);
    }
    if found != degree {
        return Err(Error::DecodeFailure(format!("{found} locator roots for degree {degree}")));
    }
    if code.syndromes(&word).iter().any(|&s| s != 0) {
        return Err(Error::DecodeFailure("corrected word is not a codeword".into()));
    }
    let errors = (0..n).filter(|&i| !erased[i] && word[i] != received[i]).count();
    Ok(RsDecoded { message: word[..code.k].to_vec(), codeword: word, errors, erasures: rho })
}

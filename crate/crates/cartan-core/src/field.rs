//! Exact arithmetic in `F_p` and its finite extensions `F_{p^k}`.
//!
//! Elements are stored packed: the coefficient vector `(c_0, …, c_{k-1})` of
//! `c_0 + c_1 X + … + c_{k-1} X^{k-1}` (reduced modulo the defining polynomial)
//! becomes the integer `Σ c_i p^i`. Multiplication goes through exp/log tables
//! built from a primitive element, so the field order is capped at
//! [`MAX_FIELD_ORDER`].

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Deref;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};

pub const MAX_FIELD_ORDER: u64 = 1 << 22;

/// An element of a finite field, packed as described in the module docs.
///
/// A `Scalar` means nothing without its [`Field`]; all arithmetic goes
/// through the field.
#[derive(Copy, Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(u32);

impl Scalar {
    pub const ZERO: Scalar = Scalar(0);
    pub const ONE: Scalar = Scalar(1);

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }

    pub fn packed(self) -> u32 {
        self.0
    }
}

pub struct FieldCtx {
    p: u32,
    k: u32,
    q: u32,
    modulus: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    small_binom: Vec<u32>,
}

/// Shared handle to a field context.
#[derive(Clone)]
pub struct Field(Arc<FieldCtx>);

impl Deref for Field {
    type Target = FieldCtx;
    fn deref(&self) -> &FieldCtx {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || (self.p == other.p && self.modulus == other.modulus)
    }
}
impl Eq for Field {}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{}{:?}", self.p, self.k, self.modulus)
    }
}

pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

pub fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

pub fn lcm(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return 0;
    }
    a / gcd(a, b) * b
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r
}

fn inv_mod_p(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

/// `C(a, b) mod p` by Lucas' theorem on base-`p` digits.
pub fn binom_mod_p(a: u64, b: u64, p: u32) -> u32 {
    let p = p as u64;
    if b > a {
        return 0;
    }
    let (mut a, mut b) = (a, b);
    let mut acc = 1u64;
    while a > 0 || b > 0 {
        let (ad, bd) = (a % p, b % p);
        if bd > ad {
            return 0;
        }
        acc = acc * small_binom(ad, bd, p) % p;
        a /= p;
        b /= p;
    }
    acc as u32
}

fn small_binom(a: u64, b: u64, p: u64) -> u64 {
    let b = b.min(a - b);
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..b {
        num = num * ((a - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    num * inv_mod_p(den, p) % p
}

/// `n! = p^v · u` with `u` coprime to `p`; returns `(v, u mod p)`.
///
/// Uses Legendre's formula for `v` and the Wilson-type identity
/// `n!/p^v ≡ (-1)^v · Π d_i!  (mod p)` over the base-`p` digits `d_i` of `n`.
pub fn factorial_p_adic(n: u64, p: u32) -> (u64, u32) {
    let p64 = p as u64;
    let mut v = 0u64;
    let mut t = n / p64;
    while t > 0 {
        v += t;
        t /= p64;
    }
    let mut unit = 1u64;
    let mut t = n;
    while t > 0 {
        let d = t % p64;
        for i in 2..=d {
            unit = unit * i % p64;
        }
        t /= p64;
    }
    if v % 2 == 1 {
        unit = (p64 - unit) % p64;
    }
    (v, unit as u32)
}

// Dense polynomials over F_p, lowest degree first, no trailing zeros.
mod poly {
    use super::inv_mod_p;
    use alloc::vec;
    use alloc::vec::Vec;

    pub fn trim(a: &mut Vec<u64>) {
        while a.last() == Some(&0) {
            a.pop();
        }
    }

    pub fn rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        let mut r: Vec<u64> = a.to_vec();
        trim(&mut r);
        let dm = m.len() - 1;
        let lead_inv = inv_mod_p(m[dm], p);
        while r.len() > dm {
            let dr = r.len() - 1;
            let c = r[dr] * lead_inv % p;
            for i in 0..=dm {
                let idx = dr - dm + i;
                r[idx] = (r[idx] + p - c * m[i] % p) % p;
            }
            trim(&mut r);
        }
        r
    }

    pub fn mul_mod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![0u64; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = (out[i + j] + x * y) % p;
            }
        }
        rem(&out, m, p)
    }

    pub fn pow_mod(base: &[u64], mut e: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut r = vec![1u64];
        let mut b = rem(base, m, p);
        while e > 0 {
            if e & 1 == 1 {
                r = mul_mod(&r, &b, m, p);
            }
            b = mul_mod(&b, &b, m, p);
            e >>= 1;
        }
        r
    }

    pub fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let n = a.len().max(b.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            out[i] = (x + p - y) % p;
        }
        trim(&mut out);
        out
    }

    pub fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut a = a.to_vec();
        let mut b = b.to_vec();
        trim(&mut a);
        trim(&mut b);
        while !b.is_empty() {
            let r = rem(&a, &b, p);
            a = b;
            b = r;
        }
        a
    }

    /// Rabin's test: `f` of degree `k` is irreducible iff `x^{p^k} ≡ x` and
    /// `gcd(x^{p^{k/r}} - x, f) = 1` for every prime `r | k`.
    pub fn is_irreducible(f: &[u64], p: u64) -> bool {
        let k = f.len() - 1;
        if k == 0 {
            return false;
        }
        if k == 1 {
            return true;
        }
        let x = vec![0u64, 1];
        let frob = |d: usize| {
            let mut r = x.clone();
            for _ in 0..d {
                r = pow_mod(&r, p, f, p);
            }
            r
        };
        if sub(&frob(k), &x, p) != Vec::<u64>::new() {
            return false;
        }
        for r in super::prime_factors(k as u64) {
            let h = sub(&frob(k / r as usize), &x, p);
            let g = gcd(f, &h, p);
            if g.len() != 1 {
                return false;
            }
        }
        true
    }
}

impl Field {
    /// The prime field `F_p`, `p` an odd prime.
    pub fn prime(p: u32) -> Result<Field> {
        Self::with_modulus(p, &[0, 1])
    }

    /// `F_{p^k}` with a modulus found by seeded random search (seed 0).
    pub fn extension(p: u32, k: u32) -> Result<Field> {
        Self::extension_seeded(p, k, 0)
    }

    pub fn extension_seeded(p: u32, k: u32, seed: u64) -> Result<Field> {
        check_char(p)?;
        if k == 0 {
            return Err(Error::InvalidInput("extension degree must be at least 1".into()));
        }
        if k == 1 {
            return Self::prime(p);
        }
        check_size(p, k)?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        loop {
            let mut f: Vec<u32> = (0..k).map(|_| rng.next_u32() % p).collect();
            f.push(1);
            if f[0] == 0 {
                continue;
            }
            let wide: Vec<u64> = f.iter().map(|&c| c as u64).collect();
            if poly::is_irreducible(&wide, p as u64) {
                return Self::build(p, f);
            }
        }
    }

    /// Field defined by an explicit monic modulus (coefficients lowest first).
    pub fn with_modulus(p: u32, modulus: &[u32]) -> Result<Field> {
        check_char(p)?;
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::InvalidInput("modulus must be monic of degree >= 1".into()));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::InvalidInput("modulus coefficients must be reduced mod p".into()));
        }
        let k = (modulus.len() - 1) as u32;
        check_size(p, k)?;
        let wide: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        if !poly::is_irreducible(&wide, p as u64) {
            return Err(Error::NotIrreducible);
        }
        Self::build(p, modulus.to_vec())
    }

    /// Smallest field `F_{p^k'}` with `k | k'` containing a primitive root of
    /// unity of order `e` (returns `self` when it already does).
    pub fn enlarged_for_order(&self, e: u64) -> Result<Field> {
        self.enlarged_for_order_seeded(e, 0)
    }

    pub fn enlarged_for_order_seeded(&self, e: u64, seed: u64) -> Result<Field> {
        if e == 0 || e.is_multiple_of(self.p as u64) {
            return Err(Error::OrderUnavailable { order: e, field_order: self.q as u64 });
        }
        if (self.q as u64 - 1).is_multiple_of(e) {
            return Ok(self.clone());
        }
        let mut k = self.k;
        loop {
            k += self.k;
            let q = (self.p as u64).checked_pow(k);
            match q {
                Some(q) if q <= MAX_FIELD_ORDER => {
                    if (q - 1) % e == 0 {
                        return Field::extension_seeded(self.p, k, seed);
                    }
                }
                _ => return Err(Error::FieldTooLarge { p: self.p, k }),
            }
        }
    }

    fn build(p: u32, modulus: Vec<u32>) -> Result<Field> {
        let k = (modulus.len() - 1) as u32;
        let q = p.pow(k);
        let pw: Vec<u64> = modulus.iter().map(|&c| c as u64).collect();
        let p64 = p as u64;
        let unpack = |mut v: u32| -> Vec<u64> {
            let mut c = Vec::with_capacity(k as usize);
            for _ in 0..k {
                c.push((v % p) as u64);
                v /= p;
            }
            poly::trim(&mut c);
            c
        };
        let pack = |c: &[u64]| -> u32 {
            let mut v = 0u64;
            for &d in c.iter().rev() {
                v = v * p64 + d;
            }
            v as u32
        };
        let order = (q - 1) as u64;
        let factors = prime_factors(order);
        let mut gen = None;
        for cand in 2..q.max(3) {
            if q == 3 {
                gen = Some(2);
                break;
            }
            let c = unpack(cand);
            let ok = factors.iter().all(|&r| poly::pow_mod(&c, order / r, &pw, p64) != vec![1u64]);
            if ok {
                gen = Some(cand);
                break;
            }
        }
        let g = unpack(gen.ok_or(Error::NotIrreducible)?);
        let n = order as usize;
        let mut exp = vec![0u32; 2 * n];
        let mut log = vec![0u32; q as usize];
        let mut cur = vec![1u64];
        for i in 0..n {
            let v = pack(&cur);
            exp[i] = v;
            exp[i + n] = v;
            log[v as usize] = i as u32;
            cur = poly::mul_mod(&cur, &g, &pw, p64);
        }
        let mut small_binom = vec![0u32; (p * p) as usize];
        for a in 0..p {
            for b in 0..=a {
                small_binom[(a * p + b) as usize] = small_binom_u32(a, b, p);
            }
        }
        Ok(Field(Arc::new(FieldCtx { p, k, q, modulus, exp, log, small_binom })))
    }
}

fn small_binom_u32(a: u32, b: u32, p: u32) -> u32 {
    small_binom(a as u64, b as u64, p as u64) as u32
}

fn check_char(p: u32) -> Result<()> {
    if !is_prime(p as u64) {
        return Err(Error::NotPrime(p as u64));
    }
    if p == 2 {
        return Err(Error::CharacteristicTwo);
    }
    Ok(())
}

fn check_size(p: u32, k: u32) -> Result<()> {
    match (p as u64).checked_pow(k) {
        Some(q) if q <= MAX_FIELD_ORDER => Ok(()),
        _ => Err(Error::FieldTooLarge { p, k }),
    }
}

impl FieldCtx {
    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.k
    }

    pub fn order(&self) -> u64 {
        self.q as u64
    }

    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn zero(&self) -> Scalar {
        Scalar::ZERO
    }

    pub fn one(&self) -> Scalar {
        Scalar::ONE
    }

    pub fn from_i64(&self, n: i64) -> Scalar {
        Scalar(n.rem_euclid(self.p as i64) as u32)
    }

    pub fn from_coeffs(&self, coeffs: &[u32]) -> Result<Scalar> {
        if coeffs.len() > self.k as usize {
            return Err(Error::ContextMismatch);
        }
        let mut v = 0u32;
        for &c in coeffs.iter().rev() {
            if c >= self.p {
                return Err(Error::ContextMismatch);
            }
            v = v * self.p + c;
        }
        Ok(Scalar(v))
    }

    pub fn coeffs(&self, a: Scalar) -> Vec<u32> {
        let mut v = a.0;
        let mut out = Vec::with_capacity(self.k as usize);
        for _ in 0..self.k {
            out.push(v % self.p);
            v /= self.p;
        }
        out
    }

    pub fn from_packed(&self, v: u32) -> Result<Scalar> {
        if v < self.q {
            Ok(Scalar(v))
        } else {
            Err(Error::ContextMismatch)
        }
    }

    /// Whether the scalar lies in the prime subfield.
    pub fn is_prime_subfield(&self, a: Scalar) -> bool {
        a.0 < self.p
    }

    pub fn add(&self, a: Scalar, b: Scalar) -> Scalar {
        if self.k == 1 {
            let s = a.0 + b.0;
            return Scalar(if s >= self.p { s - self.p } else { s });
        }
        let (mut x, mut y) = (a.0, b.0);
        let mut out = 0u32;
        let mut pw = 1u32;
        while x > 0 || y > 0 {
            let mut d = x % self.p + y % self.p;
            if d >= self.p {
                d -= self.p;
            }
            out += d * pw;
            x /= self.p;
            y /= self.p;
            pw = pw.wrapping_mul(self.p);
        }
        Scalar(out)
    }

    pub fn neg(&self, a: Scalar) -> Scalar {
        if self.k == 1 {
            return Scalar(if a.0 == 0 { 0 } else { self.p - a.0 });
        }
        let mut x = a.0;
        let mut out = 0u32;
        let mut pw = 1u32;
        while x > 0 {
            let d = x % self.p;
            if d != 0 {
                out += (self.p - d) * pw;
            }
            x /= self.p;
            pw = pw.wrapping_mul(self.p);
        }
        Scalar(out)
    }

    pub fn sub(&self, a: Scalar, b: Scalar) -> Scalar {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Scalar, b: Scalar) -> Scalar {
        if a.0 == 0 || b.0 == 0 {
            return Scalar::ZERO;
        }
        let l = self.log[a.0 as usize] + self.log[b.0 as usize];
        Scalar(self.exp[l as usize])
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(&self, a: Scalar) -> Option<Scalar> {
        if a.0 == 0 {
            return None;
        }
        let n = self.q - 1;
        let l = self.log[a.0 as usize];
        Some(Scalar(self.exp[((n - l) % n) as usize]))
    }

    pub fn div(&self, a: Scalar, b: Scalar) -> Option<Scalar> {
        self.inv(b).map(|bi| self.mul(a, bi))
    }

    /// `a^e` for any integer `e` (negative powers need `a ≠ 0`).
    pub fn pow(&self, a: Scalar, e: i64) -> Scalar {
        if e == 0 {
            return Scalar::ONE;
        }
        if a.0 == 0 {
            return Scalar::ZERO;
        }
        let n = (self.q - 1) as i64;
        let l = (self.log[a.0 as usize] as i64 * e.rem_euclid(n)).rem_euclid(n);
        Scalar(self.exp[l as usize])
    }

    /// Discrete logarithm to the fixed primitive element.
    pub fn dlog(&self, a: Scalar) -> Option<u32> {
        if a.0 == 0 {
            None
        } else {
            Some(self.log[a.0 as usize])
        }
    }

    pub fn primitive_element(&self) -> Scalar {
        Scalar(self.exp[1 % (self.q as usize - 1).max(1)])
    }

    /// Multiplicative order of a nonzero element.
    pub fn mult_order(&self, a: Scalar) -> Option<u64> {
        let l = self.dlog(a)? as u64;
        let n = self.q as u64 - 1;
        Some(n / gcd(l, n))
    }

    /// The fixed primitive `e`-th root of unity `g^{(q-1)/e}`.
    pub fn root_of_unity(&self, e: u64) -> Result<Scalar> {
        let n = self.q as u64 - 1;
        if e == 0 || gcd(e, self.p as u64) != 1 || !n.is_multiple_of(e) {
            return Err(Error::OrderUnavailable { order: e, field_order: self.q as u64 });
        }
        Ok(Scalar(self.exp[(n / e) as usize % n as usize]))
    }

    /// For `a` a power of the fixed primitive `e`-th root of unity, the exponent
    /// in `0..e`.
    pub fn root_log(&self, a: Scalar, e: u64) -> Option<u64> {
        let n = self.q as u64 - 1;
        if !n.is_multiple_of(e) {
            return None;
        }
        let l = self.dlog(a)? as u64;
        let step = n / e;
        if !l.is_multiple_of(step) {
            return None;
        }
        Some(l / step)
    }

    /// Square roots of `a`, sorted by discrete logarithm.
    pub fn sqrt(&self, a: Scalar) -> Option<[Scalar; 2]> {
        if a.0 == 0 {
            return Some([Scalar::ZERO, Scalar::ZERO]);
        }
        let l = self.log[a.0 as usize];
        if !l.is_multiple_of(2) {
            return None;
        }
        let n = self.q - 1;
        let r1 = l / 2;
        let r2 = (r1 + n / 2) % n;
        let (lo, hi) = if r1 < r2 { (r1, r2) } else { (r2, r1) };
        Some([Scalar(self.exp[lo as usize]), Scalar(self.exp[hi as usize])])
    }

    /// `C(a, b)` reduced mod `p`, embedded in the prime subfield.
    pub fn binom(&self, a: u32, b: u32) -> Scalar {
        if b > a {
            return Scalar::ZERO;
        }
        if a < self.p {
            return Scalar(self.small_binom[(a * self.p + b) as usize]);
        }
        let (mut a, mut b) = (a, b);
        let mut acc = 1u64;
        let p = self.p;
        while a > 0 || b > 0 {
            let (ad, bd) = (a % p, b % p);
            if bd > ad {
                return Scalar::ZERO;
            }
            acc = acc * self.small_binom[(ad * p + bd) as usize] as u64 % p as u64;
            a /= p;
            b /= p;
        }
        Scalar(acc as u32)
    }

    /// Iterates over all field elements in packed order.
    pub fn elements(&self) -> impl Iterator<Item = Scalar> {
        (0..self.q).map(Scalar)
    }

    pub fn display(&self, a: Scalar) -> ScalarDisplay<'_> {
        ScalarDisplay { ctx: self, value: a }
    }
}

pub struct ScalarDisplay<'a> {
    ctx: &'a FieldCtx,
    value: Scalar,
}

impl fmt::Display for ScalarDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.ctx.k == 1 {
            return write!(f, "{}", self.value.0);
        }
        let c = self.ctx.coeffs(self.value);
        let mut first = true;
        write!(f, "(")?;
        for (i, d) in c.iter().enumerate() {
            if *d == 0 {
                continue;
            }
            if !first {
                write!(f, "+")?;
            }
            first = false;
            match i {
                0 => write!(f, "{d}")?,
                1 => write!(f, "{d}a")?,
                _ => write!(f, "{d}a^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, ")")
    }
}

/// Embedding of a subfield `F_{p^k}` into `F_{p^{k'}}`, `k | k'`.
#[derive(Clone, Debug)]
pub struct FieldEmbedding {
    src: Field,
    dst: Field,
    powers: Vec<Scalar>,
}

impl FieldEmbedding {
    pub fn new(src: &Field, dst: &Field) -> Result<FieldEmbedding> {
        if src.p != dst.p || !dst.k.is_multiple_of(src.k) {
            return Err(Error::ContextMismatch);
        }
        let k = src.k as usize;
        let root = if src.k == 1 {
            Scalar::ZERO
        } else {
            // roots of the source modulus live in the subgroup of order q_src - 1
            let n_dst = dst.q as u64 - 1;
            let n_src = src.q as u64 - 1;
            let step = n_dst / n_src;
            let mut found = None;
            for j in 0..n_src {
                let cand = Scalar(dst.exp[(j * step) as usize]);
                let mut acc = Scalar::ZERO;
                for &c in src.modulus.iter().rev() {
                    acc = dst.add(dst.mul(acc, cand), dst.from_i64(c as i64));
                }
                if acc.is_zero() {
                    found = Some(cand);
                    break;
                }
            }
            found.ok_or(Error::ContextMismatch)?
        };
        let mut powers = Vec::with_capacity(k);
        let mut cur = Scalar::ONE;
        for _ in 0..k {
            powers.push(cur);
            cur = dst.mul(cur, root);
        }
        Ok(FieldEmbedding { src: src.clone(), dst: dst.clone(), powers })
    }

    pub fn source(&self) -> &Field {
        &self.src
    }

    pub fn target(&self) -> &Field {
        &self.dst
    }

    pub fn map(&self, a: Scalar) -> Scalar {
        if self.src.k == 1 {
            return a;
        }
        let c = self.src.coeffs(a);
        let mut acc = Scalar::ZERO;
        for (d, pw) in c.iter().zip(&self.powers) {
            if *d != 0 {
                acc = self.dst.add(acc, self.dst.mul(self.dst.from_i64(*d as i64), *pw));
            }
        }
        acc
    }
}

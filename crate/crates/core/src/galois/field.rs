use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use super::GaloisError;

/// Largest field (by element count) that gets log/antilog tables.
const TABLE_ORDER_LIMIT: u64 = 1 << 16;

/// Cap on the number of trial divisors enumerated when verifying a
/// modulus. Covers every field this crate materializes (m <= 16-ish).
const TRIAL_DIVISION_LIMIT: u64 = 1 << 22;

struct FieldInner {
    p: u64,
    m: usize,
    /// Monic modulus over GF(p), little-endian coefficients, length m + 1.
    modulus: Vec<u64>,
    order: u64,
    /// ceil(log2(order)): bits needed to store one element code.
    bits: usize,
    tables: Option<Tables>,
}

struct Tables {
    /// log[code] for nonzero codes; log[0] is unused.
    log: Vec<u32>,
    /// exp[i] = g^i for i in 0..2*(order-1), doubled to skip a reduction.
    exp: Vec<u64>,
}

/// Arithmetic context for GF(p^m): prime characteristic, extension
/// degree, and irreducible modulus. Cheap to clone and safe to share;
/// all operations are pure.
#[derive(Clone)]
pub struct FieldSpec {
    inner: Arc<FieldInner>,
}

impl PartialEq for FieldSpec {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.inner, &other.inner)
            || (self.inner.p == other.inner.p
                && self.inner.m == other.inner.m
                && self.inner.modulus == other.inner.modulus)
    }
}

impl Eq for FieldSpec {}

impl fmt::Debug for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "GF({}^{}) mod {:?}", self.inner.p, self.inner.m, self.inner.modulus)
    }
}

impl FieldSpec {
    /// Builds GF(p^m) with a caller-supplied modulus (little-endian
    /// coefficients, degree m, nonzero leading coefficient). The modulus
    /// is normalized to monic and verified irreducible by trial division
    /// against all monic polynomials of degree <= m/2.
    pub fn new(p: u64, m: usize, modulus: &[u64]) -> Result<Self, GaloisError> {
        Self::validate_pm(p, m)?;
        let mut coeffs: Vec<u64> = modulus.iter().map(|&c| c % p).collect();
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        if coeffs.len() != m + 1 {
            return Err(GaloisError::BadModulusShape { expected_degree: m });
        }
        let lead = coeffs[m];
        if lead != 1 {
            let inv = prime_inv(lead, p);
            for c in coeffs.iter_mut() {
                *c = mulmod_u64(*c, inv, p);
            }
        }
        if let Some(divisor) = reducible_witness(&coeffs, p)? {
            return Err(GaloisError::ReducibleModulus { divisor });
        }
        Ok(Self::build(p, m, coeffs))
    }

    /// Builds GF(p^m) with the canonical modulus: the lexicographically
    /// smallest monic irreducible, ordering coefficient vectors by their
    /// little-endian base-p value. Deterministic, so serialized artifacts
    /// referencing AUTO fields are reproducible.
    pub fn auto(p: u64, m: usize) -> Result<Self, GaloisError> {
        Self::validate_pm(p, m)?;
        let order = p.checked_pow(m as u32).ok_or(GaloisError::FieldTooLarge { p, m })?;
        for low in 0..order {
            let mut coeffs = code_digits(low, p, m);
            coeffs.push(1);
            if reducible_witness(&coeffs, p)?.is_none() {
                return Ok(Self::build(p, m, coeffs));
            }
        }
        Err(GaloisError::NoIrreducibleFound)
    }

    fn validate_pm(p: u64, m: usize) -> Result<(), GaloisError> {
        if !is_prime(p) {
            return Err(GaloisError::NotPrime(p));
        }
        if m == 0 {
            return Err(GaloisError::ZeroDegree);
        }
        let bits = (m as f64) * (p as f64).log2();
        if bits > 63.0 {
            return Err(GaloisError::FieldTooLarge { p, m });
        }
        Ok(())
    }

    fn build(p: u64, m: usize, modulus: Vec<u64>) -> Self {
        let order = p.pow(m as u32);
        let bits = 64 - (order - 1).leading_zeros() as usize;
        let mut inner = FieldInner { p, m, modulus, order, bits: bits.max(1), tables: None };
        if order <= TABLE_ORDER_LIMIT {
            inner.tables = Some(build_tables(&inner));
        }
        FieldSpec { inner: Arc::new(inner) }
    }

    pub fn p(&self) -> u64 {
        self.inner.p
    }

    pub fn m(&self) -> usize {
        self.inner.m
    }

    pub fn order(&self) -> u64 {
        self.inner.order
    }

    /// Monic modulus coefficients, little-endian, length m + 1.
    pub fn modulus(&self) -> &[u64] {
        &self.inner.modulus
    }

    /// Bits needed to represent one element code: ceil(log2(order)).
    pub fn element_bits(&self) -> usize {
        self.inner.bits
    }

    /// Bytes per element in serialized containers: ceil(element_bits / 8).
    pub fn element_bytes(&self) -> usize {
        self.inner.bits.div_ceil(8)
    }

    pub fn zero(&self) -> FieldElement {
        FieldElement { spec: self.clone(), code: 0 }
    }

    pub fn one(&self) -> FieldElement {
        FieldElement { spec: self.clone(), code: 1 }
    }

    /// Wraps a canonical code (base-p packed coefficient vector).
    pub fn element(&self, code: u64) -> Result<FieldElement, GaloisError> {
        if code >= self.inner.order {
            return Err(GaloisError::InvalidCode { code, order: self.inner.order });
        }
        Ok(FieldElement { spec: self.clone(), code })
    }

    /// Builds an element from its coefficient vector over GF(p)
    /// (little-endian; at most m entries, reduced mod p).
    pub fn from_coeffs(&self, coeffs: &[u64]) -> Result<FieldElement, GaloisError> {
        if coeffs.len() > self.inner.m {
            return Err(GaloisError::InvalidCode { code: u64::MAX, order: self.inner.order });
        }
        let mut code = 0u64;
        for &c in coeffs.iter().rev() {
            code = code * self.inner.p + (c % self.inner.p);
        }
        Ok(FieldElement { spec: self.clone(), code })
    }

    /// All field elements in code order (0, 1, ..., order-1).
    pub fn elements(&self) -> impl Iterator<Item = FieldElement> + '_ {
        (0..self.inner.order).map(move |code| FieldElement { spec: self.clone(), code })
    }

    // ---- code-level arithmetic (used by Poly / Matrix internals) ----

    pub(crate) fn add_code(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        if p == 2 {
            return a ^ b;
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let (mut a, mut b) = (a, b);
        for _ in 0..self.inner.m {
            let s = (a % p + b % p) % p;
            out += s * mult;
            a /= p;
            b /= p;
            mult *= p;
        }
        out
    }

    pub(crate) fn neg_code(&self, a: u64) -> u64 {
        let p = self.inner.p;
        if p == 2 {
            return a;
        }
        let mut out = 0u64;
        let mut mult = 1u64;
        let mut a = a;
        for _ in 0..self.inner.m {
            let d = a % p;
            out += if d == 0 { 0 } else { p - d } * mult;
            a /= p;
            mult *= p;
        }
        out
    }

    pub(crate) fn sub_code(&self, a: u64, b: u64) -> u64 {
        self.add_code(a, self.neg_code(b))
    }

    pub(crate) fn mul_code(&self, a: u64, b: u64) -> u64 {
        if a == 0 || b == 0 {
            return 0;
        }
        if let Some(t) = &self.inner.tables {
            let ia = t.log[a as usize] as usize;
            let ib = t.log[b as usize] as usize;
            return t.exp[ia + ib];
        }
        self.mul_raw(a, b)
    }

    pub(crate) fn inv_code(&self, a: u64) -> Result<u64, GaloisError> {
        if a == 0 {
            return Err(GaloisError::ZeroInverse);
        }
        if let Some(t) = &self.inner.tables {
            let n = self.inner.order - 1;
            let ia = t.log[a as usize] as u64;
            return Ok(t.exp[(n - ia) as usize]);
        }
        Ok(self.pow_code(a, self.inner.order - 2))
    }

    pub(crate) fn pow_code(&self, a: u64, mut e: u64) -> u64 {
        if e == 0 {
            return 1;
        }
        if a == 0 {
            return 0;
        }
        if let Some(t) = &self.inner.tables {
            let n = self.inner.order - 1;
            let ia = t.log[a as usize] as u64;
            let idx = mulmod_u64(ia % n, e % n, n);
            return t.exp[idx as usize];
        }
        let mut base = a;
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul_raw(acc, base);
            }
            base = self.mul_raw(base, base);
            e >>= 1;
        }
        acc
    }

    /// Square root of a code; only valid in characteristic 2, where the
    /// Frobenius is an automorphism and roots are unique.
    pub(crate) fn sqrt_code(&self, a: u64) -> u64 {
        debug_assert_eq!(self.inner.p, 2);
        self.pow_code(a, self.inner.order / 2)
    }

    fn mul_raw(&self, a: u64, b: u64) -> u64 {
        let p = self.inner.p;
        let m = self.inner.m;
        if p == 2 {
            // Carry-less multiply then reduce by the modulus bit pattern.
            let mut prod: u128 = 0;
            let mut bb = b as u128;
            let mut aa = a as u128;
            while bb != 0 {
                if bb & 1 == 1 {
                    prod ^= aa;
                }
                aa <<= 1;
                bb >>= 1;
            }
            let modulus_bits: u128 = {
                let mut v = 0u128;
                for (i, &c) in self.inner.modulus.iter().enumerate() {
                    if c == 1 {
                        v |= 1 << i;
                    }
                }
                v
            };
            let deg = m;
            let mut top = 127 - prod.leading_zeros() as i64;
            while prod != 0 && top >= deg as i64 {
                prod ^= modulus_bits << (top as usize - deg);
                if prod == 0 {
                    break;
                }
                top = 127 - prod.leading_zeros() as i64;
            }
            return prod as u64;
        }
        // Odd characteristic: schoolbook product of digit vectors, then
        // reduction by the monic modulus.
        let da = code_digits(a, p, m);
        let db = code_digits(b, p, m);
        let mut prod = vec![0u64; 2 * m - 1];
        for (i, &x) in da.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in db.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mulmod_u64(x, y, p)) % p;
            }
        }
        for i in (m..prod.len()).rev() {
            let c = prod[i];
            if c == 0 {
                continue;
            }
            prod[i] = 0;
            for (k, &mc) in self.inner.modulus.iter().enumerate().take(m) {
                let sub = mulmod_u64(c, mc, p);
                let idx = i - m + k;
                prod[idx] = (prod[idx] + p - sub) % p;
            }
        }
        let mut code = 0u64;
        for &d in prod[..m].iter().rev() {
            code = code * p + d;
        }
        code
    }

    /// Serialized header form: p (1 byte), m (2 bytes LE), then m + 1
    /// modulus coefficients, one byte each, little-endian coefficient
    /// order. Only fields with p < 256 are serializable.
    pub fn write_to(&self, out: &mut Vec<u8>) -> Result<(), GaloisError> {
        if self.inner.p > 255 || self.inner.m > u16::MAX as usize {
            return Err(GaloisError::FieldTooLarge { p: self.inner.p, m: self.inner.m });
        }
        out.push(self.inner.p as u8);
        out.extend_from_slice(&(self.inner.m as u16).to_le_bytes());
        for &c in &self.inner.modulus {
            out.push(c as u8);
        }
        Ok(())
    }

    /// Parses the form produced by [`FieldSpec::write_to`], advancing the
    /// cursor. Reconstructs and re-verifies the field.
    pub fn read_from(buf: &[u8], pos: &mut usize) -> Result<Self, GaloisError> {
        let need_prefix = 3usize;
        if buf.len() < *pos + need_prefix {
            return Err(GaloisError::BadModulusShape { expected_degree: 0 });
        }
        let p = buf[*pos] as u64;
        let m = u16::from_le_bytes([buf[*pos + 1], buf[*pos + 2]]) as usize;
        *pos += 3;
        if buf.len() < *pos + m + 1 {
            return Err(GaloisError::BadModulusShape { expected_degree: m });
        }
        let coeffs: Vec<u64> = buf[*pos..*pos + m + 1].iter().map(|&b| b as u64).collect();
        *pos += m + 1;
        FieldSpec::new(p, m, &coeffs)
    }
}

/// One element of a [`FieldSpec`], in canonical reduced form.
#[derive(Clone)]
pub struct FieldElement {
    spec: FieldSpec,
    code: u64,
}

impl FieldElement {
    /// Canonical base-p packed code in [0, p^m).
    pub fn code(&self) -> u64 {
        self.code
    }

    /// Coefficient vector over GF(p), little-endian, length m.
    pub fn coeffs(&self) -> Vec<u64> {
        code_digits(self.code, self.spec.inner.p, self.spec.inner.m)
    }

    pub fn field(&self) -> &FieldSpec {
        &self.spec
    }

    pub fn is_zero(&self) -> bool {
        self.code == 0
    }

    pub fn try_add(&self, other: &Self) -> Result<Self, GaloisError> {
        self.same_field(other)?;
        Ok(Self { spec: self.spec.clone(), code: self.spec.add_code(self.code, other.code) })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self, GaloisError> {
        self.same_field(other)?;
        Ok(Self { spec: self.spec.clone(), code: self.spec.sub_code(self.code, other.code) })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self, GaloisError> {
        self.same_field(other)?;
        Ok(Self { spec: self.spec.clone(), code: self.spec.mul_code(self.code, other.code) })
    }

    pub fn inv(&self) -> Result<Self, GaloisError> {
        Ok(Self { spec: self.spec.clone(), code: self.spec.inv_code(self.code)? })
    }

    pub fn pow(&self, e: u64) -> Self {
        Self { spec: self.spec.clone(), code: self.spec.pow_code(self.code, e) }
    }

    fn same_field(&self, other: &Self) -> Result<(), GaloisError> {
        if self.spec == other.spec {
            Ok(())
        } else {
            Err(GaloisError::FieldMismatch)
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.code == other.code && self.spec == other.spec
    }
}

impl Eq for FieldElement {}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.code)
    }
}

macro_rules! fe_binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl $trait for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.$checked(rhs).expect("field mismatch")
            }
        }
        impl $trait for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
    };
}

fe_binop!(Add, add, try_add);
fe_binop!(Sub, sub, try_sub);
fe_binop!(Mul, mul, try_mul);

impl Div for &FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: &FieldElement) -> FieldElement {
        self.try_mul(&rhs.inv().expect("division by zero")).expect("field mismatch")
    }
}

impl Div for FieldElement {
    type Output = FieldElement;
    fn div(self, rhs: FieldElement) -> FieldElement {
        &self / &rhs
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        FieldElement { spec: self.spec.clone(), code: self.spec.neg_code(self.code) }
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

// ---- helpers ----

fn code_digits(code: u64, p: u64, m: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(m);
    let mut c = code;
    for _ in 0..m {
        out.push(c % p);
        c /= p;
    }
    out
}

fn mulmod_u64(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

fn powmod_u64(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod_u64(acc, a, p);
        }
        a = mulmod_u64(a, a, p);
        e >>= 1;
    }
    acc
}

fn prime_inv(a: u64, p: u64) -> u64 {
    powmod_u64(a, p - 2, p)
}

/// Deterministic Miller-Rabin, valid for all u64.
fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &q in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n == q {
            return true;
        }
        if n.is_multiple_of(q) {
            return false;
        }
    }
    let mut d = n - 1;
    let mut r = 0;
    while d.is_multiple_of(2) {
        d /= 2;
        r += 1;
    }
    'witness: for &a in &[2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = powmod_u64(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 0..r - 1 {
            x = mulmod_u64(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// Trial division of a monic polynomial over GF(p) by every monic
/// polynomial of degree <= deg/2. Returns a witnessing divisor if one
/// exists.
fn reducible_witness(poly: &[u64], p: u64) -> Result<Option<Vec<u64>>, GaloisError> {
    let deg = poly.len() - 1;
    if deg <= 1 {
        return Ok(None);
    }
    let half = deg / 2;
    let mut total: u64 = 0;
    for d in 1..=half {
        total = total.saturating_add(p.saturating_pow(d as u32));
        if total > TRIAL_DIVISION_LIMIT {
            return Err(GaloisError::VerificationTooExpensive);
        }
    }
    for d in 1..=half {
        let count = p.pow(d as u32);
        for low in 0..count {
            let mut cand = code_digits(low, p, d);
            cand.push(1);
            if base_poly_rem_is_zero(poly, &cand, p) {
                return Ok(Some(cand));
            }
        }
    }
    Ok(None)
}

/// True when divisor | poly over GF(p). Both monic, little-endian.
fn base_poly_rem_is_zero(poly: &[u64], divisor: &[u64], p: u64) -> bool {
    let mut rem: Vec<u64> = poly.to_vec();
    let dd = divisor.len() - 1;
    while rem.len() > dd {
        let lead = *rem.last().unwrap();
        let shift = rem.len() - 1 - dd;
        if lead != 0 {
            for (k, &dc) in divisor.iter().enumerate() {
                let idx = shift + k;
                let sub = mulmod_u64(lead, dc, p);
                rem[idx] = (rem[idx] + p - sub) % p;
            }
        }
        rem.pop();
        while rem.len() > dd && rem.last() == Some(&0) {
            rem.pop();
        }
    }
    rem.iter().all(|&c| c == 0)
}

fn build_tables(inner: &FieldInner) -> Tables {
    let order = inner.order;
    let n = order - 1;
    // Prime factors of the multiplicative group order.
    let mut factors = Vec::new();
    let mut rem = n;
    let mut q = 2u64;
    while q * q <= rem {
        if rem.is_multiple_of(q) {
            factors.push(q);
            while rem.is_multiple_of(q) {
                rem /= q;
            }
        }
        q += 1;
    }
    if rem > 1 {
        factors.push(rem);
    }
    let spec_view = FieldInner {
        p: inner.p,
        m: inner.m,
        modulus: inner.modulus.clone(),
        order: inner.order,
        bits: inner.bits,
        tables: None,
    };
    let raw = FieldSpec { inner: Arc::new(spec_view) };
    let mut generator = 0u64;
    'search: for cand in 2..order {
        for &f in &factors {
            if raw.pow_code(cand, n / f) == 1 {
                continue 'search;
            }
        }
        generator = cand;
        break;
    }
    if generator == 0 {
        // order == 2: the group is trivial and 1 generates it.
        generator = 1;
    }
    let mut exp = vec![0u64; 2 * n as usize];
    let mut log = vec![0u32; order as usize];
    let mut acc = 1u64;
    for i in 0..n as usize {
        exp[i] = acc;
        exp[i + n as usize] = acc;
        log[acc as usize] = i as u32;
        acc = raw.mul_raw(acc, generator);
    }
    Tables { log, exp }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf8_construction_and_mul() {
        // x^3 + x + 1 over GF(2)
        let f = FieldSpec::new(2, 3, &[1, 1, 0, 1]).unwrap();
        assert_eq!(f.order(), 8);
        // x * x^2 = x^3 = x + 1
        let x = f.element(0b010).unwrap();
        let x2 = f.element(0b100).unwrap();
        let prod = x.try_mul(&x2).unwrap();
        assert_eq!(prod.code(), 0b011);
    }

    #[test]
    fn gf8_reducible_modulus_rejected() {
        // x^3 + 1 = (x + 1)(x^2 + x + 1)
        let err = FieldSpec::new(2, 3, &[1, 0, 0, 1]).unwrap_err();
        match err {
            GaloisError::ReducibleModulus { divisor } => {
                assert!(divisor == vec![1, 1] || divisor == vec![1, 1, 1]);
            }
            other => panic!("unexpected error {other:?}"),
        }
    }

    #[test]
    fn gf7_auto_is_x() {
        let f = FieldSpec::auto(7, 1).unwrap();
        assert_eq!(f.order(), 7);
        assert_eq!(f.modulus(), &[0, 1]);
    }

    #[test]
    fn gf7_inverse_of_three() {
        let f = FieldSpec::auto(7, 1).unwrap();
        let three = f.element(3).unwrap();
        let inv = three.inv().unwrap();
        // brute-force oracle: the k with 3k = 1 mod 7
        let expect = (1..7).find(|k| (3 * k) % 7 == 1).unwrap();
        assert_eq!(inv.code(), expect);
        assert_eq!(expect, 5);
    }

    #[test]
    fn non_prime_rejected() {
        assert!(matches!(FieldSpec::auto(6, 1), Err(GaloisError::NotPrime(6))));
        assert!(matches!(FieldSpec::auto(1, 1), Err(GaloisError::NotPrime(1))));
    }

    #[test]
    fn identity_multiplication() {
        for f in [FieldSpec::auto(2, 8).unwrap(), FieldSpec::auto(5, 2).unwrap()] {
            for code in 0..f.order().min(64) {
                let a = f.element(code).unwrap();
                assert_eq!(a.try_mul(&f.one()).unwrap(), a);
            }
        }
    }

    #[test]
    fn inverses_exhaustive_smaller_fields() {
        // fe_inv(a) * a = 1 for all nonzero a, fields of order <= 2^10.
        for f in [
            FieldSpec::auto(2, 10).unwrap(),
            FieldSpec::auto(2, 4).unwrap(),
            FieldSpec::auto(3, 4).unwrap(),
            FieldSpec::auto(7, 2).unwrap(),
            FieldSpec::auto(31, 1).unwrap(),
        ] {
            for code in 1..f.order() {
                let a = f.element(code).unwrap();
                let prod = a.inv().unwrap().try_mul(&a).unwrap();
                assert_eq!(prod.code(), 1, "inverse failed in {f:?} at {code}");
            }
        }
    }

    #[test]
    fn tableless_field_matches_table_semantics() {
        // GF(2^17) has no tables; cross-check raw multiplication against
        // the same modulus reduced by hand in a tabled subextension case:
        // here we just exercise field axioms at random points.
        let f = FieldSpec::auto(2, 17).unwrap();
        assert!(f.order() > TABLE_ORDER_LIMIT);
        let a = f.element(0x1_2345).unwrap();
        let b = f.element(0x0_fe21).unwrap();
        let c = f.element(0x1_ffff).unwrap();
        let left = a.try_mul(&b).unwrap().try_mul(&c).unwrap();
        let right = a.try_mul(&b.try_mul(&c).unwrap()).unwrap();
        assert_eq!(left, right);
        let ab = a.try_add(&b).unwrap().try_mul(&c).unwrap();
        let distributed = a.try_mul(&c).unwrap().try_add(&b.try_mul(&c).unwrap()).unwrap();
        assert_eq!(ab, distributed);
        let inv = a.inv().unwrap();
        assert_eq!(a.try_mul(&inv).unwrap().code(), 1);
    }

    #[test]
    fn table_limit_boundary() {
        // order exactly 2^16 still gets tables; spot-check against the
        // raw carry-less path through a square/sqrt pair
        let f = FieldSpec::auto(2, 16).unwrap();
        for code in [1u64, 2, 0x1234, 0xffff, 0x8001] {
            let sq = f.element(code).unwrap().pow(2);
            assert_eq!(f.sqrt_code(sq.code()), code);
        }
    }

    #[test]
    fn field_mismatch_detected() {
        let f1 = FieldSpec::auto(2, 3).unwrap();
        let f2 = FieldSpec::auto(2, 4).unwrap();
        let a = f1.element(1).unwrap();
        let b = f2.element(1).unwrap();
        assert!(matches!(a.try_add(&b), Err(GaloisError::FieldMismatch)));
    }

    #[test]
    fn serialization_roundtrip() {
        let f = FieldSpec::auto(7, 2).unwrap();
        let mut buf = Vec::new();
        f.write_to(&mut buf).unwrap();
        let mut pos = 0;
        let g = FieldSpec::read_from(&buf, &mut pos).unwrap();
        assert_eq!(pos, buf.len());
        assert_eq!(f, g);
    }

    #[test]
    fn element_bytes_match_bit_count() {
        let gf7 = FieldSpec::auto(7, 1).unwrap();
        assert_eq!(gf7.element_bits(), 3);
        assert_eq!(gf7.element_bytes(), 1);
        let gf1024 = FieldSpec::auto(2, 10).unwrap();
        assert_eq!(gf1024.element_bits(), 10);
        assert_eq!(gf1024.element_bytes(), 2);
    }
}

use super::field::{FieldElement, FieldSpec};
use super::GaloisError;

/// Polynomial over a [`FieldSpec`], little-endian coefficient codes with
/// no trailing zeros. The zero polynomial has an empty coefficient vector
/// and degree `None`.
#[derive(Clone, PartialEq, Eq)]
pub struct Poly {
    field: FieldSpec,
    coeffs: Vec<u64>,
}

impl std::fmt::Debug for Poly {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Poly{:?}", self.coeffs)
    }
}

impl Poly {
    pub fn new(field: &FieldSpec, coeffs: &[u64]) -> Result<Self, GaloisError> {
        for &c in coeffs {
            if c >= field.order() {
                return Err(GaloisError::InvalidCode { code: c, order: field.order() });
            }
        }
        Ok(Self::from_codes(field.clone(), coeffs.to_vec()))
    }

    pub(crate) fn from_codes(field: FieldSpec, mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: Vec::new() }
    }

    pub fn one(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: vec![1] }
    }

    /// The monomial x.
    pub fn x(field: &FieldSpec) -> Self {
        Poly { field: field.clone(), coeffs: vec![0, 1] }
    }

    pub fn constant(field: &FieldSpec, code: u64) -> Self {
        Poly::from_codes(field.clone(), vec![code])
    }

    pub fn field(&self) -> &FieldSpec {
        &self.field
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn leading(&self) -> u64 {
        self.coeffs.last().copied().unwrap_or(0)
    }

    pub fn add(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.add_code(self.coeff(i), other.coeff(i)));
        }
        Poly::from_codes(self.field.clone(), out)
    }

    pub fn sub(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            out.push(self.field.sub_code(self.coeff(i), other.coeff(i)));
        }
        Poly::from_codes(self.field.clone(), out)
    }

    pub fn mul(&self, other: &Poly) -> Poly {
        assert_eq!(self.field, other.field, "field mismatch");
        if self.is_zero() || other.is_zero() {
            return Poly::zero(&self.field);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                if b == 0 {
                    continue;
                }
                out[i + j] = self.field.add_code(out[i + j], self.field.mul_code(a, b));
            }
        }
        Poly::from_codes(self.field.clone(), out)
    }

    pub fn scale(&self, c: u64) -> Poly {
        let out = self.coeffs.iter().map(|&a| self.field.mul_code(a, c)).collect();
        Poly::from_codes(self.field.clone(), out)
    }

    /// Multiplication by x^k.
    pub fn shifted(&self, k: usize) -> Poly {
        if self.is_zero() {
            return self.clone();
        }
        let mut out = vec![0u64; k];
        out.extend_from_slice(&self.coeffs);
        Poly::from_codes(self.field.clone(), out)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divmod(&self, divisor: &Poly) -> (Poly, Poly) {
        assert_eq!(self.field, divisor.field, "field mismatch");
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let dd = divisor.degree().unwrap();
        let lead_inv = self.field.inv_code(divisor.leading()).unwrap();
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; self.coeffs.len().saturating_sub(dd)];
        while rem.len() > dd {
            let lead = *rem.last().unwrap();
            let shift = rem.len() - 1 - dd;
            if lead != 0 {
                let q = self.field.mul_code(lead, lead_inv);
                quot[shift] = q;
                for (k, &dc) in divisor.coeffs.iter().enumerate() {
                    let sub = self.field.mul_code(q, dc);
                    rem[shift + k] = self.field.sub_code(rem[shift + k], sub);
                }
            }
            rem.pop();
            while rem.len() > dd && rem.last() == Some(&0) {
                rem.pop();
            }
        }
        (
            Poly::from_codes(self.field.clone(), quot),
            Poly::from_codes(self.field.clone(), rem),
        )
    }

    pub fn rem(&self, divisor: &Poly) -> Poly {
        self.divmod(divisor).1
    }

    /// Monic greatest common divisor; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Poly {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn monic(&self) -> Poly {
        if self.is_zero() || self.leading() == 1 {
            return self.clone();
        }
        self.scale(self.field.inv_code(self.leading()).unwrap())
    }

    pub fn eval(&self, x: &FieldElement) -> Result<FieldElement, GaloisError> {
        if *x.field() != self.field {
            return Err(GaloisError::FieldMismatch);
        }
        Ok(x.field().element(self.eval_code(x.code())).unwrap())
    }

    pub(crate) fn eval_code(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = self.field.add_code(self.field.mul_code(acc, x), c);
        }
        acc
    }

    pub fn mul_mod(&self, other: &Poly, modulus: &Poly) -> Poly {
        self.mul(other).rem(modulus)
    }

    pub fn pow_mod(&self, mut e: u64, modulus: &Poly) -> Poly {
        let mut base = self.rem(modulus);
        let mut acc = Poly::one(&self.field);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&base, modulus);
            }
            base = base.mul_mod(&base, modulus);
            e >>= 1;
        }
        acc
    }

    /// Rabin irreducibility test over the coefficient field F_q:
    /// f of degree n is irreducible iff x^(q^n) = x (mod f) and, for every
    /// prime divisor r of n, gcd(x^(q^(n/r)) - x, f) = 1.
    pub fn is_irreducible(&self) -> bool {
        let n = match self.degree() {
            None | Some(0) => return false,
            Some(1) => return true,
            Some(n) => n,
        };
        let f = self.monic();
        let q = self.field.order();
        let mut prime_divs = Vec::new();
        let mut rem = n;
        let mut d = 2;
        while d * d <= rem {
            if rem % d == 0 {
                prime_divs.push(d);
                while rem % d == 0 {
                    rem /= d;
                }
            }
            d += 1;
        }
        if rem > 1 {
            prime_divs.push(rem);
        }
        let x = Poly::x(&self.field);
        let mut h = x.clone();
        for i in 1..=n {
            h = h.pow_mod(q, &f);
            if prime_divs.iter().any(|&r| i == n / r) {
                let g = h.sub(&x).gcd(&f);
                if g.degree() != Some(0) {
                    return false;
                }
            }
        }
        h == x
    }
}

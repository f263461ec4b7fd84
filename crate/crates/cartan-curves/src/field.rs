//! Exact arithmetic in prime fields `F_p`, extension fields `F_{p^r}`, and
//! univariate polynomials over them, plus quadratic-residue helpers.
//!
//! All values are reduced representatives in `u64`; there is no floating
//! point and no probabilistic arithmetic. Extension fields are built over a
//! deterministically chosen defining polynomial (the smallest irreducible in
//! lexicographic coefficient order), so element encodings are stable across
//! runs.

use std::fmt;
use std::sync::Arc;

use crate::{Error, Result};

/// Largest field size the element-enumeration routines accept.
pub const FIELD_ENUMERATION_BOUND: u64 = 1 << 20;

/// Deterministic trial-division primality test; fine at desk scale.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut d = 3u64;
    while d * d <= n {
        if n % d == 0 {
            return false;
        }
        d += 2;
    }
    true
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1u64 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % m;
        }
        base = base * base % m;
        exp >>= 1;
    }
    acc
}

pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}

/// Legendre symbol `(m/p)` for an odd prime `p`, by Euler's criterion.
///
/// Returns `0` iff `p | m`, `1` iff `m` is a nonzero square mod `p`, `-1`
/// otherwise.
pub fn legendre(m: i64, p: u64) -> Result<i8> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    let m = m.rem_euclid(p as i64) as u64;
    if m == 0 {
        return Ok(0);
    }
    Ok(if pow_mod(m, (p - 1) / 2, p) == 1 {
        1
    } else {
        -1
    })
}

/// Smallest positive quadratic non-residue modulo an odd prime `p`.
pub fn find_nonsquare(p: u64) -> Result<u64> {
    if p < 3 || !is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    (2..p)
        .find(|&a| pow_mod(a, (p - 1) / 2, p) == p - 1)
        .ok_or_else(|| Error::consistency(format!("no non-residue below {p}")))
}

/// An element of the prime field `F_p`, stored reduced.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fp {
    value: u64,
    modulus: u64,
}

impl Fp {
    pub fn new(value: i64, p: u64) -> Fp {
        debug_assert!(is_prime(p));
        Fp {
            value: value.rem_euclid(p as i64) as u64,
            modulus: p,
        }
    }

    pub fn zero(p: u64) -> Fp {
        Fp { value: 0, modulus: p }
    }

    pub fn one(p: u64) -> Fp {
        Fp::new(1, p)
    }

    pub fn value(&self) -> u64 {
        self.value
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn is_zero(&self) -> bool {
        self.value == 0
    }

    pub fn pow(&self, e: u64) -> Fp {
        Fp {
            value: pow_mod(self.value, e, self.modulus),
            modulus: self.modulus,
        }
    }

    pub fn inv(&self) -> Option<Fp> {
        if self.value == 0 {
            None
        } else {
            Some(Fp {
                value: inv_mod(self.value, self.modulus),
                modulus: self.modulus,
            })
        }
    }
}

impl fmt::Debug for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (mod {})", self.value, self.modulus)
    }
}

impl fmt::Display for Fp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.value)
    }
}

macro_rules! check_moduli {
    ($a:expr, $b:expr) => {
        debug_assert_eq!($a.modulus, $b.modulus, "mixed prime-field moduli");
    };
}

impl std::ops::Add for Fp {
    type Output = Fp;
    fn add(self, rhs: Fp) -> Fp {
        check_moduli!(self, rhs);
        Fp {
            value: (self.value + rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Sub for Fp {
    type Output = Fp;
    fn sub(self, rhs: Fp) -> Fp {
        check_moduli!(self, rhs);
        Fp {
            value: (self.value + self.modulus - rhs.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Mul for Fp {
    type Output = Fp;
    fn mul(self, rhs: Fp) -> Fp {
        check_moduli!(self, rhs);
        Fp {
            value: self.value * rhs.value % self.modulus,
            modulus: self.modulus,
        }
    }
}

impl std::ops::Neg for Fp {
    type Output = Fp;
    fn neg(self) -> Fp {
        Fp {
            value: (self.modulus - self.value) % self.modulus,
            modulus: self.modulus,
        }
    }
}

// ---------------------------------------------------------------------------
// Raw polynomials over F_p (coefficient vectors), used to build extensions.
// ---------------------------------------------------------------------------

fn raw_trim(v: &mut Vec<u64>) {
    while v.last() == Some(&0) {
        v.pop();
    }
}

fn raw_mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return vec![];
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
    raw_trim(&mut out);
    out
}

fn raw_rem(a: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    debug_assert!(!m.is_empty());
    let mut r = a.to_vec();
    raw_trim(&mut r);
    let dm = m.len() - 1;
    let lead_inv = inv_mod(*m.last().unwrap(), p);
    while r.len() > dm {
        let k = r.len() - 1 - dm;
        let c = *r.last().unwrap() * lead_inv % p;
        for (i, &mi) in m.iter().enumerate() {
            r[k + i] = (r[k + i] + p - c * mi % p) % p;
        }
        raw_trim(&mut r);
        if r.is_empty() {
            break;
        }
    }
    r
}

fn raw_gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let (mut a, mut b) = (a.to_vec(), b.to_vec());
    raw_trim(&mut a);
    raw_trim(&mut b);
    while !b.is_empty() {
        let r = raw_rem(&a, &b, p);
        a = b;
        b = r;
    }
    a
}

/// x^e mod m over F_p, by square and multiply.
fn raw_x_pow_mod(e: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut sq = raw_rem(&[0, 1], m, p);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = raw_rem(&raw_mul(&acc, &sq, p), m, p);
        }
        sq = raw_rem(&raw_mul(&sq, &sq, p), m, p);
        e >>= 1;
    }
    acc
}

/// Rabin irreducibility test for a monic polynomial of degree r over F_p.
fn raw_irreducible(f: &[u64], p: u64) -> bool {
    let r = (f.len() - 1) as u64;
    if r == 0 {
        return false;
    }
    if r == 1 {
        return true;
    }
    // x^(p^r) == x mod f
    let mut xq = raw_rem(&[0, 1], f, p);
    for _ in 0..r {
        // one p-power step
        let mut acc = vec![1u64];
        let mut sq = xq.clone();
        let mut e = p;
        while e > 0 {
            if e & 1 == 1 {
                acc = raw_rem(&raw_mul(&acc, &sq, p), f, p);
            }
            sq = raw_rem(&raw_mul(&sq, &sq, p), f, p);
            e >>= 1;
        }
        xq = acc;
    }
    let mut diff = xq.clone();
    while diff.len() < 2 {
        diff.push(0);
    }
    diff[1] = (diff[1] + p - 1) % p;
    raw_trim(&mut diff);
    if !diff.is_empty() {
        return false;
    }
    // gcd(x^(p^(r/s)) - x, f) == 1 for every prime s | r
    let mut s = 2u64;
    let mut rr = r;
    while s <= rr {
        if rr % s == 0 {
            let e = pow_checked(p, (r / s) as u32);
            let xe = match e {
                Some(e) => raw_x_pow_mod(e, f, p),
                // p^(r/s) overflowing u64 cannot happen within the bound
                None => return false,
            };
            let mut diff = xe;
            while diff.len() < 2 {
                diff.push(0);
            }
            diff[1] = (diff[1] + p - 1) % p;
            raw_trim(&mut diff);
            let g = raw_gcd(&diff, f, p);
            if g.len() != 1 {
                return false;
            }
            while rr % s == 0 {
                rr /= s;
            }
        }
        s += 1;
    }
    true
}

fn pow_checked(b: u64, e: u32) -> Option<u64> {
    let mut acc = 1u64;
    for _ in 0..e {
        acc = acc.checked_mul(b)?;
    }
    Some(acc)
}

// ---------------------------------------------------------------------------
// Extension fields
// ---------------------------------------------------------------------------

#[derive(Debug)]
struct FieldRepr {
    p: u64,
    r: u32,
    size: u64,
    /// Monic defining polynomial, length r + 1, coefficient of x^i at index i.
    modulus: Vec<u64>,
}

/// A handle to the finite field `F_{p^r}`, cheap to clone and shareable
/// across threads. Two handles are equal iff they carry the same
/// characteristic, degree and defining polynomial.
#[derive(Clone, Debug)]
pub struct ExtField(Arc<FieldRepr>);

impl PartialEq for ExtField {
    fn eq(&self, other: &Self) -> bool {
        self.0.p == other.0.p && self.0.r == other.0.r && self.0.modulus == other.0.modulus
    }
}
impl Eq for ExtField {}

impl ExtField {
    /// Builds `F_{p^r}` over the smallest irreducible defining polynomial in
    /// lexicographic coefficient order (constant coefficient least
    /// significant).
    pub fn new(p: u64, r: u32) -> Result<ExtField> {
        ExtField::with_bound(p, r, FIELD_ENUMERATION_BOUND)
    }

    pub fn with_bound(p: u64, r: u32, bound: u64) -> Result<ExtField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if r == 0 {
            return Err(Error::domain("extension degree must be at least 1"));
        }
        let size = pow_checked(p, r).ok_or(Error::FieldTooLarge {
            size: u64::MAX,
            bound,
        })?;
        if size > bound {
            return Err(Error::FieldTooLarge { size, bound });
        }
        if r == 1 {
            return Ok(ExtField(Arc::new(FieldRepr {
                p,
                r,
                size,
                modulus: vec![0, 1],
            })));
        }
        // Scan monic candidates x^r + c_{r-1} x^{r-1} + ... + c_0 by the
        // integer encoding sum c_i p^i.
        let lower = pow_checked(p, r - 1).unwrap();
        for code in 0..lower.saturating_mul(p) {
            let mut f = Vec::with_capacity(r as usize + 1);
            let mut c = code;
            for _ in 0..r {
                f.push(c % p);
                c /= p;
            }
            f.push(1);
            if raw_irreducible(&f, p) {
                return Ok(ExtField(Arc::new(FieldRepr { p, r, size, modulus: f })));
            }
        }
        Err(Error::consistency(format!(
            "no irreducible polynomial of degree {r} over F_{p}"
        )))
    }

    /// Builds `F_{p^r}` over a caller-supplied monic defining polynomial,
    /// rejecting reducible ones.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<ExtField> {
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if modulus.len() < 2 || *modulus.last().unwrap() != 1 {
            return Err(Error::domain("defining polynomial must be monic of degree >= 1"));
        }
        if modulus.iter().any(|&c| c >= p) {
            return Err(Error::domain("defining polynomial coefficients must be reduced"));
        }
        let r = (modulus.len() - 1) as u32;
        let size = pow_checked(p, r).ok_or(Error::FieldTooLarge {
            size: u64::MAX,
            bound: FIELD_ENUMERATION_BOUND,
        })?;
        if size > FIELD_ENUMERATION_BOUND {
            return Err(Error::FieldTooLarge {
                size,
                bound: FIELD_ENUMERATION_BOUND,
            });
        }
        if r > 1 && !raw_irreducible(&modulus, p) {
            return Err(Error::ReduciblePolynomial);
        }
        Ok(ExtField(Arc::new(FieldRepr { p, r, size, modulus })))
    }

    /// The prime field `F_p` as a degree-1 extension.
    pub fn prime(p: u64) -> Result<ExtField> {
        ExtField::new(p, 1)
    }

    pub fn characteristic(&self) -> u64 {
        self.0.p
    }

    pub fn degree(&self) -> u32 {
        self.0.r
    }

    pub fn size(&self) -> u64 {
        self.0.size
    }

    pub fn defining_polynomial(&self) -> &[u64] {
        &self.0.modulus
    }

    pub fn zero(&self) -> ExtElem {
        ExtElem {
            coeffs: vec![0; self.0.r as usize],
            field: self.clone(),
        }
    }

    pub fn one(&self) -> ExtElem {
        self.from_int(1)
    }

    /// The residue class of `x`, a generator of the field over `F_p` for
    /// degree at least 2.
    pub fn gen(&self) -> ExtElem {
        if self.0.r == 1 {
            // x reduces to 0 in F_p[x]/(x)
            return self.zero();
        }
        let mut coeffs = vec![0; self.0.r as usize];
        coeffs[1] = 1;
        ExtElem {
            coeffs,
            field: self.clone(),
        }
    }

    /// Embeds an integer as a constant.
    pub fn from_int(&self, n: i64) -> ExtElem {
        let mut coeffs = vec![0; self.0.r as usize];
        coeffs[0] = n.rem_euclid(self.0.p as i64) as u64;
        ExtElem {
            coeffs,
            field: self.clone(),
        }
    }

    pub fn elem_from_coeffs(&self, coeffs: &[i64]) -> ExtElem {
        assert!(coeffs.len() <= self.0.r as usize, "too many coefficients");
        let mut v: Vec<u64> = coeffs
            .iter()
            .map(|&c| c.rem_euclid(self.0.p as i64) as u64)
            .collect();
        v.resize(self.0.r as usize, 0);
        ExtElem {
            coeffs: v,
            field: self.clone(),
        }
    }

    /// Element with the given integer encoding `sum c_i p^i`.
    pub fn elem_from_encoding(&self, code: u64) -> ExtElem {
        debug_assert!(code < self.0.size);
        let mut coeffs = Vec::with_capacity(self.0.r as usize);
        let mut c = code;
        for _ in 0..self.0.r {
            coeffs.push(c % self.0.p);
            c /= self.0.p;
        }
        ExtElem {
            coeffs,
            field: self.clone(),
        }
    }

    /// All field elements in ascending encoding order.
    pub fn elements(&self) -> impl Iterator<Item = ExtElem> + '_ {
        (0..self.0.size).map(move |code| self.elem_from_encoding(code))
    }
}

impl fmt::Display for ExtField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.r == 1 {
            write!(f, "F_{}", self.0.p)
        } else {
            write!(f, "F_{}^{}", self.0.p, self.0.r)
        }
    }
}

/// An element of an [`ExtField`], stored as a reduced coefficient vector
/// over the prime subfield.
#[derive(Clone, PartialEq, Eq)]
pub struct ExtElem {
    coeffs: Vec<u64>,
    field: ExtField,
}

impl ExtElem {
    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn encoding(&self) -> u64 {
        let p = self.field.0.p;
        self.coeffs.iter().rev().fold(0, |acc, &c| acc * p + c)
    }

    pub fn pow(&self, mut e: u64) -> ExtElem {
        let mut acc = self.field.one();
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self) -> Option<ExtElem> {
        if self.is_zero() {
            return None;
        }
        // order of the multiplicative group
        Some(self.pow(self.field.0.size - 2))
    }

    /// The characteristic-power (Frobenius) map `x -> x^p`.
    pub fn frobenius(&self) -> ExtElem {
        self.pow(self.field.0.p)
    }

    /// Norm down to the prime subfield, as an element of `F_p`.
    pub fn norm(&self) -> Fp {
        let mut acc = self.field.one();
        let mut conj = self.clone();
        for _ in 0..self.field.0.r {
            acc = &acc * &conj;
            conj = conj.frobenius();
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        Fp::new(acc.coeffs[0] as i64, self.field.0.p)
    }

    /// Trace down to the prime subfield, as an element of `F_p`.
    pub fn trace(&self) -> Fp {
        let mut acc = self.field.zero();
        let mut conj = self.clone();
        for _ in 0..self.field.0.r {
            acc = &acc + &conj;
            conj = conj.frobenius();
        }
        debug_assert!(acc.coeffs[1..].iter().all(|&c| c == 0));
        Fp::new(acc.coeffs[0] as i64, self.field.0.p)
    }
}

impl fmt::Debug for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?} in {}", self.coeffs, self.field)
    }
}

impl fmt::Display for ExtElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.encoding())
    }
}

impl std::ops::Add for &ExtElem {
    type Output = ExtElem;
    fn add(self, rhs: &ExtElem) -> ExtElem {
        debug_assert_eq!(self.field, rhs.field, "mixed fields");
        let p = self.field.0.p;
        ExtElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| (a + b) % p)
                .collect(),
            field: self.field.clone(),
        }
    }
}

impl std::ops::Sub for &ExtElem {
    type Output = ExtElem;
    fn sub(self, rhs: &ExtElem) -> ExtElem {
        debug_assert_eq!(self.field, rhs.field, "mixed fields");
        let p = self.field.0.p;
        ExtElem {
            coeffs: self
                .coeffs
                .iter()
                .zip(&rhs.coeffs)
                .map(|(&a, &b)| (a + p - b) % p)
                .collect(),
            field: self.field.clone(),
        }
    }
}

impl std::ops::Mul for &ExtElem {
    type Output = ExtElem;
    fn mul(self, rhs: &ExtElem) -> ExtElem {
        debug_assert_eq!(self.field, rhs.field, "mixed fields");
        let p = self.field.0.p;
        let prod = raw_mul(&self.coeffs, &rhs.coeffs, p);
        let mut red = raw_rem(&prod, &self.field.0.modulus, p);
        red.resize(self.field.0.r as usize, 0);
        ExtElem {
            coeffs: red,
            field: self.field.clone(),
        }
    }
}

impl std::ops::Neg for &ExtElem {
    type Output = ExtElem;
    fn neg(self) -> ExtElem {
        let p = self.field.0.p;
        ExtElem {
            coeffs: self.coeffs.iter().map(|&c| (p - c) % p).collect(),
            field: self.field.clone(),
        }
    }
}

// ---------------------------------------------------------------------------
// Polynomials over an extension field
// ---------------------------------------------------------------------------

/// A univariate polynomial over an [`ExtField`], kept canonical: no trailing
/// zero coefficients, so the leading coefficient of a nonzero polynomial is
/// nonzero. The zero polynomial has an empty coefficient vector.
#[derive(Clone, PartialEq, Eq)]
pub struct Polynomial {
    coeffs: Vec<ExtElem>,
}

impl Polynomial {
    pub fn zero() -> Polynomial {
        Polynomial { coeffs: vec![] }
    }

    pub fn from_coeffs(mut coeffs: Vec<ExtElem>) -> Polynomial {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Polynomial { coeffs }
    }

    pub fn constant(c: ExtElem) -> Polynomial {
        Polynomial::from_coeffs(vec![c])
    }

    /// The monomial x over the given field.
    pub fn x(field: &ExtField) -> Polynomial {
        Polynomial::from_coeffs(vec![field.zero(), field.one()])
    }

    pub fn coeffs(&self) -> &[ExtElem] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Option<&ExtElem> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &ExtElem) -> ExtElem {
        let mut acc = x.field().zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn scale(&self, c: &ExtElem) -> Polynomial {
        Polynomial::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn monic(&self) -> Polynomial {
        match self.leading() {
            None => Polynomial::zero(),
            Some(l) => self.scale(&l.inv().expect("nonzero leading coefficient")),
        }
    }

    /// Division with remainder: `self = q*g + r` with `deg r < deg g`.
    pub fn divrem(&self, g: &Polynomial) -> Result<(Polynomial, Polynomial)> {
        let gl = g.leading().ok_or(Error::ZeroPolynomialDivision)?;
        let gl_inv = gl.inv().expect("nonzero leading coefficient");
        let dg = g.coeffs.len() - 1;
        let mut r = self.coeffs.clone();
        if r.len() <= dg {
            return Ok((Polynomial::zero(), self.clone()));
        }
        let mut q = vec![gl.field().zero(); r.len() - dg];
        while r.len() > dg {
            let c = &r.last().unwrap().clone() * &gl_inv;
            let k = r.len() - 1 - dg;
            q[k] = c.clone();
            for (i, gi) in g.coeffs.iter().enumerate() {
                let t = &r[k + i] - &(&c * gi);
                r[k + i] = t;
            }
            while r.last().map_or(false, |c| c.is_zero()) {
                r.pop();
            }
            if r.is_empty() {
                break;
            }
        }
        Ok((Polynomial::from_coeffs(q), Polynomial::from_coeffs(r)))
    }

    pub fn rem(&self, g: &Polynomial) -> Result<Polynomial> {
        Ok(self.divrem(g)?.1)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &Polynomial) -> Result<Polynomial> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn mul_mod(&self, other: &Polynomial, m: &Polynomial) -> Result<Polynomial> {
        (self * other).rem(m)
    }

    /// x^e mod m.
    pub fn x_pow_mod(e: u64, m: &Polynomial, field: &ExtField) -> Result<Polynomial> {
        let mut acc = Polynomial::constant(field.one()).rem(m)?;
        let mut sq = Polynomial::x(field).rem(m)?;
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_mod(&sq, m)?;
            }
            sq = sq.mul_mod(&sq, m)?;
            e >>= 1;
        }
        Ok(acc)
    }
}

impl fmt::Debug for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let terms: Vec<String> = self
            .coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, c)| match i {
                0 => format!("{c}"),
                1 => format!("{c}*x"),
                _ => format!("{c}*x^{i}"),
            })
            .collect();
        write!(f, "{}", terms.join(" + "))
    }
}

impl std::ops::Add for &Polynomial {
    type Output = Polynomial;
    fn add(self, rhs: &Polynomial) -> Polynomial {
        let (long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let mut out = long.coeffs.clone();
        for (i, c) in short.coeffs.iter().enumerate() {
            out[i] = &out[i] + c;
        }
        Polynomial::from_coeffs(out)
    }
}

impl std::ops::Sub for &Polynomial {
    type Output = Polynomial;
    fn sub(self, rhs: &Polynomial) -> Polynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        if n == 0 {
            return Polynomial::zero();
        }
        let field = self
            .coeffs
            .first()
            .or_else(|| rhs.coeffs.first())
            .unwrap()
            .field()
            .clone();
        let zero = field.zero();
        let mut out = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).unwrap_or(&zero);
            let b = rhs.coeffs.get(i).unwrap_or(&zero);
            out.push(a - b);
        }
        Polynomial::from_coeffs(out)
    }
}

impl std::ops::Mul for &Polynomial {
    type Output = Polynomial;
    fn mul(self, rhs: &Polynomial) -> Polynomial {
        if self.is_zero() || rhs.is_zero() {
            return Polynomial::zero();
        }
        let field = self.coeffs[0].field().clone();
        let zero = field.zero();
        let mut out = vec![zero; self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + &(a * b);
            }
        }
        Polynomial::from_coeffs(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn squares(p: u64) -> std::collections::BTreeSet<u64> {
        (1..p).map(|x| x * x % p).collect()
    }

    #[test]
    fn legendre_zero_case() {
        assert_eq!(legendre(0, 11).unwrap(), 0);
        assert_eq!(legendre(22, 11).unwrap(), 0);
    }

    #[test]
    fn legendre_nonresidue_by_enumeration() {
        // squares mod 7 are {1, 2, 4}
        assert_eq!(squares(7), [1, 2, 4].into_iter().collect());
        assert_eq!(legendre(3, 7).unwrap(), -1);
    }

    #[test]
    fn legendre_perfect_square() {
        assert_eq!(legendre(4, 13).unwrap(), 1);
    }

    #[test]
    fn legendre_rejects_bad_modulus() {
        assert!(legendre(1, 2).is_err());
        assert!(legendre(1, 15).is_err());
    }

    #[test]
    fn legendre_multiplicative_exhaustively() {
        for p in (3..=50).filter(|&p| is_prime(p)) {
            for m in 0..p as i64 {
                for n in 0..p as i64 {
                    let lhs = legendre(m, p).unwrap() * legendre(n, p).unwrap();
                    let rhs = legendre(m * n, p).unwrap();
                    assert_eq!(lhs, rhs, "p={p} m={m} n={n}");
                }
            }
        }
    }

    #[test]
    fn smallest_nonsquares() {
        assert_eq!(find_nonsquare(5).unwrap(), 2);
        assert_eq!(find_nonsquare(7).unwrap(), 3);
        assert_eq!(find_nonsquare(11).unwrap(), 2);
        assert_eq!(find_nonsquare(13).unwrap(), 2);
        // agree with direct enumeration
        for p in (3..60).filter(|&p| is_prime(p)) {
            let sq = squares(p);
            let expected = (2..p).find(|a| !sq.contains(a)).unwrap();
            assert_eq!(find_nonsquare(p).unwrap(), expected, "p={p}");
        }
    }

    #[test]
    fn f4_has_four_elements_and_frobenius_fixes_f2() {
        let f4 = ExtField::new(2, 2).unwrap();
        assert_eq!(f4.size(), 4);
        let fixed: Vec<u64> = f4
            .elements()
            .filter(|x| x.frobenius() == *x)
            .map(|x| x.encoding())
            .collect();
        assert_eq!(fixed, vec![0, 1]);
    }

    #[test]
    fn f4_norm_surjective_on_units() {
        let f4 = ExtField::new(2, 2).unwrap();
        let norms: std::collections::BTreeSet<u64> = f4
            .elements()
            .filter(|x| !x.is_zero())
            .map(|x| x.norm().value())
            .collect();
        assert_eq!(norms, [1].into_iter().collect());
    }

    #[test]
    fn with_modulus_rejects_reducible() {
        // x^2 + 1 = (x+1)^2 over F_2
        assert!(matches!(
            ExtField::with_modulus(2, vec![1, 0, 1]),
            Err(Error::ReduciblePolynomial)
        ));
        assert!(ExtField::with_modulus(2, vec![1, 1, 1]).is_ok());
    }

    #[test]
    fn rejects_sizes_above_bound() {
        assert!(matches!(
            ExtField::new(2, 21),
            Err(Error::FieldTooLarge { .. })
        ));
    }

    #[test]
    fn frobenius_is_field_automorphism_and_fixed_points_count() {
        for (p, r) in [(2u64, 4u32), (3, 3), (5, 2), (7, 2)] {
            let k = ExtField::new(p, r).unwrap();
            // r-fold characteristic power is the identity
            for x in k.elements() {
                let mut y = x.clone();
                for _ in 0..r {
                    y = y.frobenius();
                }
                assert_eq!(y, x);
            }
            // #{x : x^(p^r) = x} is the whole field, and the map respects + and *
            let a = k.elem_from_encoding(k.size() - 1);
            let b = k.gen();
            assert_eq!((&a + &b).frobenius(), &a.frobenius() + &b.frobenius());
            assert_eq!((&a * &b).frobenius(), &a.frobenius() * &b.frobenius());
        }
    }

    proptest! {
        #[test]
        fn field_axioms_randomized(pi in 0usize..4, ea in 0u64..625, eb in 0u64..625, ec in 0u64..625) {
            let (p, r) = [(2u64, 4u32), (3, 2), (5, 2), (13, 2)][pi];
            let k = ExtField::new(p, r).unwrap();
            let n = k.size();
            let a = k.elem_from_encoding(ea % n);
            let b = k.elem_from_encoding(eb % n);
            let c = k.elem_from_encoding(ec % n);
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            prop_assert_eq!(&a + &b, &b + &a);
            prop_assert_eq!(&a * &b, &b * &a);
            if !a.is_zero() && !b.is_zero() {
                let ab_inv = (&a * &b).inv().unwrap();
                prop_assert_eq!(ab_inv, &b.inv().unwrap() * &a.inv().unwrap());
            }
        }

        #[test]
        fn polynomial_division_randomized(
            fc in prop::collection::vec(0u64..25, 0..8),
            gc in prop::collection::vec(0u64..25, 1..5),
        ) {
            let k = ExtField::new(5, 2).unwrap();
            let f = Polynomial::from_coeffs(fc.iter().map(|&c| k.elem_from_encoding(c)).collect());
            let g = Polynomial::from_coeffs(gc.iter().map(|&c| k.elem_from_encoding(c)).collect());
            prop_assume!(!g.is_zero());
            let (q, r) = f.divrem(&g).unwrap();
            prop_assert_eq!(&(&(&q * &g) + &r), &f);
            if let Some(dr) = r.degree() {
                prop_assert!(dr < g.degree().unwrap());
            }
        }
    }

    #[test]
    fn poly_gcd_divides_both() {
        let k = ExtField::new(7, 1).unwrap();
        let c = |v: &[i64]| {
            Polynomial::from_coeffs(v.iter().map(|&x| k.from_int(x)).collect())
        };
        // (x+1)(x+2) and (x+1)(x+3)
        let f = c(&[2, 3, 1]);
        let g = c(&[3, 4, 1]);
        let d = f.gcd(&g).unwrap();
        assert_eq!(d, c(&[1, 1]));
    }
}

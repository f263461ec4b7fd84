//! Elliptic curves over small finite fields: exhaustive point counts,
//! supersingularity, automorphism groups, the Deuring–Eichler mass formula,
//! division polynomials, and the conjugacy class of Frobenius on p-torsion.
//!
//! Curves are carried in long Weierstrass form
//! `y^2 + a1 xy + a3 y = x^3 + a2 x^2 + a4 x + a6` so every characteristic,
//! including 2 and 3, is handled by the same code paths.

use num_rational::Ratio;

use crate::field::{legendre, ExtElem, ExtField, Polynomial};
use crate::gl2::{sqrt_mod, FrobeniusClass};
use crate::{Error, Result};

/// A nonsingular Weierstrass curve over a finite field.
#[derive(Clone, PartialEq, Eq)]
pub struct WeierstrassCurve {
    field: ExtField,
    a1: ExtElem,
    a2: ExtElem,
    a3: ExtElem,
    a4: ExtElem,
    a6: ExtElem,
}

/// An affine point or the point at infinity.
#[derive(Clone, PartialEq, Eq, Debug)]
pub enum Point {
    Infinity,
    Affine(ExtElem, ExtElem),
}

impl WeierstrassCurve {
    pub fn new(field: &ExtField, coeffs: [ExtElem; 5]) -> Result<WeierstrassCurve> {
        let [a1, a2, a3, a4, a6] = coeffs;
        let curve = WeierstrassCurve {
            field: field.clone(),
            a1,
            a2,
            a3,
            a4,
            a6,
        };
        if curve.discriminant().is_zero() {
            return Err(Error::SingularCurve);
        }
        Ok(curve)
    }

    /// Curve with integer coefficients reduced into the given field; this is
    /// how prime-field curves are base-changed to extensions.
    pub fn from_int_coeffs(field: &ExtField, coeffs: [i64; 5]) -> Result<WeierstrassCurve> {
        let c = |v: i64| field.from_int(v);
        WeierstrassCurve::new(
            field,
            [c(coeffs[0]), c(coeffs[1]), c(coeffs[2]), c(coeffs[3]), c(coeffs[4])],
        )
    }

    /// Short form `y^2 = x^3 + a x + b` (characteristic at least 5).
    pub fn short(field: &ExtField, a: ExtElem, b: ExtElem) -> Result<WeierstrassCurve> {
        let z = field.zero();
        WeierstrassCurve::new(field, [z.clone(), z.clone(), z, a, b])
    }

    pub fn field(&self) -> &ExtField {
        &self.field
    }

    pub fn coefficients(&self) -> [&ExtElem; 5] {
        [&self.a1, &self.a2, &self.a3, &self.a4, &self.a6]
    }

    /// The quantities b2, b4, b6, b8 attached to the Weierstrass equation.
    pub fn b_invariants(&self) -> (ExtElem, ExtElem, ExtElem, ExtElem) {
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let int = |n: i64| self.field.from_int(n);
        let b2 = &(a1 * a1) + &(&int(4) * a2);
        let b4 = &(&int(2) * a4) + &(a1 * a3);
        let b6 = &(a3 * a3) + &(&int(4) * a6);
        let b8 = &(&(&(&(a1 * a1) * a6) + &(&(&int(4) * a2) * a6)) - &(&(a1 * a3) * a4))
            + &(&(&(a2 * a3) * a3) - &(a4 * a4));
        (b2, b4, b6, b8)
    }

    pub fn discriminant(&self) -> ExtElem {
        let (b2, b4, b6, b8) = self.b_invariants();
        let int = |n: i64| self.field.from_int(n);
        let t1 = &(&(&b2 * &b2) * &b8);
        let t2 = &(&int(8) * &(&(&b4 * &b4) * &b4));
        let t3 = &(&int(27) * &(&b6 * &b6));
        let t4 = &(&int(9) * &(&(&b2 * &b4) * &b6));
        &(&(-t1) - t2) + &(&(-t3) + t4)
    }

    pub fn j_invariant(&self) -> ExtElem {
        let (b2, b4, _, _) = self.b_invariants();
        let c4 = &(&b2 * &b2) - &(&self.field.from_int(24) * &b4);
        let c4cubed = &(&c4 * &c4) * &c4;
        &c4cubed * &self.discriminant().inv().expect("nonsingular curve")
    }

    /// Whether `(x, y)` satisfies the curve equation.
    pub fn contains(&self, x: &ExtElem, y: &ExtElem) -> bool {
        let lhs = &(&(y * y) + &(&(&self.a1 * x) * y)) + &(&self.a3 * y);
        let rhs = &(&(&(&(x * x) * x) + &(&self.a2 * &(x * x))) + &(&self.a4 * x)) + &self.a6;
        lhs == rhs
    }

    /// Exact number of points over the field of definition including the
    /// point at infinity, by exhaustive scan over x with exact root counting
    /// in y. Asserts the Hasse bound.
    pub fn point_count(&self) -> u64 {
        let k = &self.field;
        let q = k.size();
        let mut count = 1u64; // infinity
        if k.characteristic() == 2 {
            for x in k.elements() {
                // y^2 + h y = f with h = a1 x + a3
                let h = &(&self.a1 * &x) + &self.a3;
                let f = &(&(&(&(&x * &x) * &x) + &(&self.a2 * &(&x * &x))) + &(&self.a4 * &x))
                    + &self.a6;
                if h.is_zero() {
                    // squaring is a bijection: exactly one y
                    count += 1;
                } else {
                    // substitute y = h z: z^2 + z = f / h^2, solvable iff the
                    // absolute trace vanishes, then exactly two roots
                    let h2 = (&h * &h).inv().unwrap();
                    let c = &f * &h2;
                    if c.trace().value() == 0 {
                        count += 2;
                    }
                }
            }
        } else {
            for x in k.elements() {
                // (2y + h)^2 = h^2 + 4 f: count quadratic-character solutions
                let h = &(&self.a1 * &x) + &self.a3;
                let f = &(&(&(&(&x * &x) * &x) + &(&self.a2 * &(&x * &x))) + &(&self.a4 * &x))
                    + &self.a6;
                let disc = &(&h * &h) + &(&k.from_int(4) * &f);
                count += match quadratic_character(&disc) {
                    0 => 1,
                    1 => 2,
                    _ => 0,
                };
            }
        }
        let t = q as i64 + 1 - count as i64;
        assert!(
            (t * t) as u64 <= 4 * q,
            "Hasse bound violated: q={q}, count={count}"
        );
        count
    }

    /// Trace of Frobenius over the field of definition.
    pub fn frobenius_trace(&self) -> i64 {
        self.field.size() as i64 + 1 - self.point_count() as i64
    }

    /// A curve is supersingular iff the characteristic divides the Frobenius
    /// trace.
    pub fn is_supersingular(&self) -> bool {
        self.frobenius_trace() % self.field.characteristic() as i64 == 0
    }

    /// Order of the automorphism group over the field of definition, by scan
    /// over coordinate substitutions `x = u^2 x' + r`, `y = u^3 y' + s u^2 x' + t`
    /// that fix the coefficient vector. The scan domain is pruned per
    /// characteristic by solving for the variables the linear coefficient
    /// relations determine; every candidate is verified against all five
    /// relations before being counted.
    pub fn automorphism_order(&self) -> u64 {
        let k = &self.field;
        let ch = k.characteristic();
        let units: Vec<ExtElem> = k.elements().filter(|u| !u.is_zero()).collect();
        let all: Vec<ExtElem> = k.elements().collect();
        let mut count = 0u64;
        match ch {
            2 => {
                // r is determined by the a2 relation: r = u^2 a2 + a2 + s a1 + s^2
                for u in &units {
                    let u2 = u * u;
                    for s in &all {
                        let r = &(&(&(&u2 * &self.a2) + &self.a2) + &(s * &self.a1))
                            + &(s * s);
                        for t in &all {
                            if self.is_automorphism(u, &r, s, t) {
                                count += 1;
                            }
                        }
                    }
                }
            }
            3 => {
                // s from the a1 relation, t from the a3 relation
                let half = k.from_int(2).inv().unwrap();
                for u in &units {
                    let s = &(&(u * &self.a1) - &self.a1) * &half;
                    for r in &all {
                        let u3 = &(u * u) * u;
                        let t = &(&(&(&u3 * &self.a3) - &self.a3) - &(r * &self.a1)) * &half;
                        if self.is_automorphism(u, r, &s, &t) {
                            count += 1;
                        }
                    }
                }
            }
            _ => {
                // r from the a2 relation, t from the a3 relation
                let half = k.from_int(2).inv().unwrap();
                let third = k.from_int(3).inv().unwrap();
                for u in &units {
                    let u2 = u * u;
                    let u3 = &u2 * u;
                    for s in &all {
                        let r = &(&(&(&u2 * &self.a2) - &self.a2) + &(s * &self.a1))
                            + &(s * s);
                        let r = &r * &third;
                        let t = &(&(&(&u3 * &self.a3) - &self.a3) - &(&r * &self.a1)) * &half;
                        if self.is_automorphism(u, &r, s, &t) {
                            count += 1;
                        }
                    }
                }
            }
        }
        debug_assert!(count % 2 == 0, "automorphism group always contains -1");
        count
    }

    /// Whether the substitution `(u, r, s, t)` maps the curve to itself.
    fn is_automorphism(&self, u: &ExtElem, r: &ExtElem, s: &ExtElem, t: &ExtElem) -> bool {
        let k = &self.field;
        let int = |n: i64| k.from_int(n);
        let (a1, a2, a3, a4, a6) = (&self.a1, &self.a2, &self.a3, &self.a4, &self.a6);
        let u2 = u * u;
        let u3 = &u2 * u;
        let u4 = &u2 * &u2;
        let u6 = &u3 * &u3;
        // u a1' = a1 + 2s
        if &(u * a1) != &(a1 + &(&int(2) * s)) {
            return false;
        }
        // u^2 a2' = a2 - s a1 + 3r - s^2
        let rhs2 = &(&(a2 - &(s * a1)) + &(&int(3) * r)) - &(s * s);
        if &(&u2 * a2) != &rhs2 {
            return false;
        }
        // u^3 a3' = a3 + r a1 + 2t
        let rhs3 = &(a3 + &(r * a1)) + &(&int(2) * t);
        if &(&u3 * a3) != &rhs3 {
            return false;
        }
        // u^4 a4' = a4 - s a3 + 2 r a2 - (t + r s) a1 + 3 r^2 - 2 s t
        let rhs4 = &(&(&(&(a4 - &(s * a3)) + &(&(&int(2) * r) * a2))
            - &(&(t + &(r * s)) * a1))
            + &(&int(3) * &(r * r)))
            - &(&(&int(2) * s) * t);
        if &(&u4 * a4) != &rhs4 {
            return false;
        }
        // u^6 a6' = a6 + r a4 + r^2 a2 + r^3 - t a3 - t^2 - r t a1
        let rhs6 = &(&(&(&(&(a6 + &(r * a4)) + &(&(r * r) * a2)) + &(&(r * r) * r))
            - &(t * a3))
            - &(t * t))
            - &(&(r * t) * a1);
        &(&u6 * a6) == &rhs6
    }

    // -- group law -----------------------------------------------------------

    pub fn negate(&self, pt: &Point) -> Point {
        match pt {
            Point::Infinity => Point::Infinity,
            Point::Affine(x, y) => {
                let ny = &(&(-y) - &(&self.a1 * x)) - &self.a3;
                Point::Affine(x.clone(), ny)
            }
        }
    }

    /// Chord-tangent addition in long Weierstrass form.
    pub fn add_points(&self, p1: &Point, p2: &Point) -> Point {
        let (x1, y1) = match p1 {
            Point::Infinity => return p2.clone(),
            Point::Affine(x, y) => (x, y),
        };
        let (x2, y2) = match p2 {
            Point::Infinity => return p1.clone(),
            Point::Affine(x, y) => (x, y),
        };
        debug_assert!(self.contains(x1, y1) && self.contains(x2, y2));
        let k = &self.field;
        let int = |n: i64| k.from_int(n);
        let (lambda, nu) = if x1 != x2 {
            let d = (x2 - x1).inv().unwrap();
            let lambda = &(y2 - y1) * &d;
            let nu = &(&(y1 * x2) - &(y2 * x1)) * &d;
            (lambda, nu)
        } else {
            // negatives of each other?
            let neg_y1 = &(&(-y1) - &(&self.a1 * x1)) - &self.a3;
            if *y2 == neg_y1 {
                return Point::Infinity;
            }
            let denom = &(&(&int(2) * y1) + &(&self.a1 * x1)) + &self.a3;
            let d = denom.inv().expect("tangent denominator vanishes only at 2-torsion");
            let num = &(&(&(&int(3) * &(x1 * x1)) + &(&(&int(2) * &self.a2) * x1))
                + &self.a4)
                - &(&self.a1 * y1);
            let lambda = &num * &d;
            let nu_num = &(&(&(-(&(&(x1 * x1) * x1))) + &(&self.a4 * x1)) + &(&int(2) * &self.a6))
                - &(&self.a3 * y1);
            let nu = &nu_num * &d;
            (lambda, nu)
        };
        let x3 = &(&(&(&lambda * &lambda) + &(&self.a1 * &lambda)) - &self.a2) - &(x1 + x2);
        let y3 = &(&(-(&(&lambda + &self.a1))) * &x3) - &(&nu + &self.a3);
        Point::Affine(x3, y3)
    }

    pub fn mul_point(&self, n: u64, pt: &Point) -> Point {
        let mut acc = Point::Infinity;
        let mut base = pt.clone();
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.add_points(&acc, &base);
            }
            base = self.add_points(&base, &base);
            n >>= 1;
        }
        acc
    }

    /// All rational points, for small-field oracles.
    pub fn points(&self) -> Vec<Point> {
        let mut out = vec![Point::Infinity];
        for x in self.field.elements() {
            for y in self.field.elements() {
                if self.contains(&x, &y) {
                    out.push(Point::Affine(x.clone(), y));
                }
            }
        }
        out
    }
}

impl std::fmt::Debug for WeierstrassCurve {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "y^2 + {}xy + {}y = x^3 + {}x^2 + {}x + {} over {}",
            self.a1, self.a3, self.a2, self.a4, self.a6, self.field
        )
    }
}

/// Quadratic character of a field element: 0 at zero, 1 on squares,
/// -1 otherwise.
fn quadratic_character(x: &ExtElem) -> i8 {
    if x.is_zero() {
        return 0;
    }
    let e = (x.field().size() - 1) / 2;
    if x.pow(e) == x.field().one() {
        1
    } else {
        -1
    }
}

/// A representative curve with the given j-invariant, canonical per
/// characteristic.
pub fn curve_for_j(field: &ExtField, j: &ExtElem) -> Result<WeierstrassCurve> {
    let ch = field.characteristic();
    if j.is_zero() {
        return match ch {
            2 => WeierstrassCurve::from_int_coeffs(field, [0, 0, 1, 0, 0]), // y^2 + y = x^3
            3 => WeierstrassCurve::from_int_coeffs(field, [0, 0, 0, -1, 0]), // y^2 = x^3 - x
            _ => WeierstrassCurve::from_int_coeffs(field, [0, 0, 0, 0, 1]), // y^2 = x^3 + 1
        };
    }
    match ch {
        2 => {
            // y^2 + xy = x^3 + 1/j
            let inv = j.inv().unwrap();
            WeierstrassCurve::new(
                field,
                [field.one(), field.zero(), field.zero(), field.zero(), inv],
            )
        }
        3 => {
            // y^2 = x^3 + x^2 - 1/j
            let inv = j.inv().unwrap();
            WeierstrassCurve::new(
                field,
                [field.zero(), field.one(), field.zero(), field.zero(), -&inv],
            )
        }
        _ => {
            if *j == field.from_int(1728) {
                return WeierstrassCurve::from_int_coeffs(field, [0, 0, 0, 1, 0]);
            }
            // y^2 = x^3 + 3j(1728-j) x + 2j(1728-j)^2
            let c = &field.from_int(1728) - j;
            let a = &(&field.from_int(3) * j) * &c;
            let b = &(&field.from_int(2) * j) * &(&c * &c);
            WeierstrassCurve::short(field, a, b)
        }
    }
}

/// One entry of the supersingular inventory: a geometric isomorphism class
/// identified by its j-invariant in `F_{q^2}` together with the order of its
/// automorphism group.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SupersingularClass {
    /// Encoding of the j-invariant in `F_{q^2}`.
    pub j_encoding: u64,
    pub automorphism_order: u64,
}

/// The supersingular isomorphism classes in characteristic q, with the mass
/// identity `sum 1/#Aut = (q-1)/24` checked exactly.
#[derive(Clone, Debug, serde::Serialize)]
pub struct SupersingularInventory {
    pub q: u64,
    pub classes: Vec<SupersingularClass>,
    /// The verified mass as an exact rational.
    pub mass: Ratio<i64>,
}

/// Enumerates supersingular j-invariants over `F_{q^2}` (every geometric
/// class lives there) and their geometric automorphism orders, and fails
/// loudly if the Deuring–Eichler mass identity is violated.
pub fn supersingular_inventory(q: u64) -> Result<SupersingularInventory> {
    if !crate::field::is_prime(q) {
        // The mass identity below is the characteristic-q statement; composite
        // field sizes would pair it with the wrong right-hand side.
        return Err(Error::NotPrime(q));
    }
    let k2 = ExtField::new(q, 2)?;
    let mut classes = Vec::new();
    let mut mass = Ratio::new(0i64, 1i64);
    for j in k2.elements() {
        let e = curve_for_j(&k2, &j)?;
        if !e.is_supersingular() {
            continue;
        }
        let aut = e.automorphism_order();
        mass += Ratio::new(1i64, aut as i64);
        classes.push(SupersingularClass {
            j_encoding: j.encoding(),
            automorphism_order: aut,
        });
    }
    let expected = Ratio::new(q as i64 - 1, 24i64);
    if mass != expected {
        return Err(Error::consistency(format!(
            "supersingular mass {mass} differs from (q-1)/24 = {expected} at q={q}"
        )));
    }
    Ok(SupersingularInventory { q, classes, mass })
}

/// The univariate division polynomials in the normalization
/// `psi_n = g_n * psi_2^(n mod 2 == 0)`: for odd n the returned polynomial
/// vanishes exactly on the x-coordinates of the nonzero n-torsion.
///
/// Returns `g_0..=g_nmax`. Works in every characteristic; even powers of
/// `psi_2` are folded through `psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6`.
pub(crate) fn division_poly_sequence(e: &WeierstrassCurve, nmax: u64) -> Vec<Polynomial> {
    let k = e.field();
    let int = |n: i64| k.from_int(n);
    let (b2, b4, b6, b8) = e.b_invariants();
    let poly = |coeffs: Vec<ExtElem>| Polynomial::from_coeffs(coeffs);
    // psi_2^2 as a polynomial in x
    let bpoly = poly(vec![b6.clone(), &int(2) * &b4, b2.clone(), int(4)]);
    let b2sq = &bpoly * &bpoly;

    let mut g: Vec<Polynomial> = Vec::with_capacity(nmax as usize + 1);
    g.push(Polynomial::zero());
    g.push(Polynomial::constant(k.one()));
    if nmax >= 2 {
        g.push(Polynomial::constant(k.one()));
    }
    if nmax >= 3 {
        g.push(poly(vec![
            b8.clone(),
            &int(3) * &b6,
            &int(3) * &b4,
            b2.clone(),
            int(3),
        ]));
    }
    if nmax >= 4 {
        let c0 = &(&b4 * &b8) - &(&b6 * &b6);
        let c1 = &(&b2 * &b8) - &(&b4 * &b6);
        g.push(poly(vec![
            c0,
            c1,
            &int(10) * &b8,
            &int(10) * &b6,
            &int(5) * &b4,
            b2.clone(),
            int(2),
        ]));
    }
    for n in 5..=nmax {
        let next = if n % 2 == 1 {
            let m = (n - 1) / 2;
            let (mu, md) = (m as usize, m as usize);
            let left = &(&g[mu + 2] * &g[mu]) * &(&g[md] * &g[md]);
            let right = &(&g[mu - 1] * &g[mu + 1]) * &(&g[mu + 1] * &g[mu + 1]);
            if m % 2 == 0 {
                &(&left * &b2sq) - &right
            } else {
                &left - &(&right * &b2sq)
            }
        } else {
            let m = n / 2;
            let mu = m as usize;
            let inner = &(&g[mu + 2] * &(&g[mu - 1] * &g[mu - 1]))
                - &(&g[mu - 2] * &(&g[mu + 1] * &g[mu + 1]));
            &g[mu] * &inner
        };
        g.push(next);
    }
    g
}

/// The m-th division polynomial for an odd prime m different from the
/// characteristic: degree `(m^2 - 1)/2` in x, vanishing exactly on the
/// x-coordinates of the nonzero m-torsion.
pub fn division_polynomial(e: &WeierstrassCurve, m: u64) -> Result<Polynomial> {
    if m < 3 || m % 2 == 0 || !crate::field::is_prime(m) {
        return Err(Error::domain(format!("{m} is not an odd prime")));
    }
    if e.field().characteristic() == m {
        return Err(Error::domain(
            "division polynomial index equals the characteristic",
        ));
    }
    let g = division_poly_sequence(e, m);
    let psi = g[m as usize].clone();
    debug_assert_eq!(psi.degree(), Some(((m * m - 1) / 2) as usize));
    Ok(psi)
}

/// Conjugacy class of the Frobenius endomorphism of `E` acting on the
/// p-torsion, as a matrix class in `GL_2(F_p)`.
///
/// The characteristic polynomial is `x^2 - t x + q` mod p with `t` the
/// Frobenius trace and `q` the field size. When the discriminant is a nonzero
/// residue or non-residue the class is split resp. non-split; when it
/// vanishes mod p, scalar and Jordan share the characteristic polynomial and
/// are separated by an exact identity in the coordinate ring: Frobenius is
/// the scalar `lambda` iff `x^q = x([lambda] P)` holds modulo the p-th
/// division polynomial. Matching x-coordinates forces `phi P = +-lambda P`
/// pointwise, and since `E[p]` is not a union of two proper subgroups and
/// `-lambda` has the wrong trace, the x-identity alone settles the question.
pub fn frobenius_matrix_class(e: &WeierstrassCurve, p: u64) -> Result<FrobeniusClass> {
    if p < 5 || !crate::field::is_prime(p) {
        return Err(Error::NotOddPrime(p));
    }
    if e.field().characteristic() == p {
        return Err(Error::domain("level equals the characteristic"));
    }
    let q = e.field().size();
    let t = e.frobenius_trace();
    let tp = t.rem_euclid(p as i64) as u64;
    let qp = q % p;
    let disc = (tp * tp % p + p - 4 * qp % p) % p;
    match legendre(disc as i64, p)? {
        -1 => Ok(FrobeniusClass::NonSplit { trace: tp, det: qp }),
        1 => {
            let s = sqrt_mod(disc, p).expect("residue has a root");
            let half = crate::field::inv_mod(2, p);
            let l1 = (tp + s) % p * half % p;
            let l2 = (tp + p - s) % p * half % p;
            Ok(FrobeniusClass::SplitDistinct(l1.min(l2), l1.max(l2)))
        }
        _ => {
            let lambda = tp * crate::field::inv_mod(2, p) % p;
            debug_assert_eq!(lambda * lambda % p, qp, "double root squares to det");
            if frobenius_is_scalar(e, p, lambda)? {
                Ok(FrobeniusClass::Scalar(lambda))
            } else {
                Ok(FrobeniusClass::Jordan(lambda))
            }
        }
    }
}

/// Exact test for `phi_q = [lambda]` on `E[p]`, through the x-coordinate
/// multiplication formula `x([n]P) = x - psi_{n-1} psi_{n+1} / psi_n^2`.
/// In the univariate normalization `psi_n = g_n psi_2^(n even)` the factor
/// `psi_2^2 = 4x^3 + b2 x^2 + 2 b4 x + b6` lands in the numerator for odd
/// lambda and in the denominator for even lambda, so the cleared identity is
///
/// ```text
///   odd  lambda: (x^q - x) g_l^2         + B g_{l-1} g_{l+1} = 0 (mod g_p)
///   even lambda: (x^q - x) g_l^2 B       +   g_{l-1} g_{l+1} = 0 (mod g_p)
/// ```
///
/// Division-free, so no zero-divisor fallback is ever needed.
fn frobenius_is_scalar(e: &WeierstrassCurve, p: u64, lambda: u64) -> Result<bool> {
    debug_assert!(lambda >= 1 && lambda < p);
    let k = e.field();
    let g = division_poly_sequence(e, lambda + 1);
    let gp = division_polynomial(e, p)?;
    let (b2, b4, b6, _) = e.b_invariants();
    let int = |n: i64| k.from_int(n);
    let bpoly = Polynomial::from_coeffs(vec![b6, &int(2) * &b4, b2, int(4)]);

    let xq = Polynomial::x_pow_mod(k.size(), &gp, k)?;
    let x = Polynomial::x(k).rem(&gp)?;
    let gl = g[lambda as usize].rem(&gp)?;
    let gl2 = gl.mul_mod(&gl, &gp)?;
    let neighbors = g[lambda as usize - 1]
        .rem(&gp)?
        .mul_mod(&g[lambda as usize + 1].rem(&gp)?, &gp)?;
    let shift = (&xq - &x).mul_mod(&gl2, &gp)?;
    let lhs = if lambda % 2 == 1 {
        &shift + &bpoly.mul_mod(&neighbors, &gp)?
    } else {
        &shift.mul_mod(&bpoly.rem(&gp)?, &gp)? + &neighbors
    };
    Ok(lhs.rem(&gp)?.is_zero())
}

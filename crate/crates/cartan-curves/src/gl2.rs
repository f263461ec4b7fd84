//! `GL_2(F_p)` arithmetic, a non-split Cartan subgroup `C` and its
//! normalizer `C+`, coset machinery, and conjugacy classification of
//! Frobenius matrices acting on p-torsion.
//!
//! The Cartan subgroup is the matrix model of `F_{p^2}^*`: with `alpha` a
//! fixed non-square mod p,
//!
//! ```text
//!   C  = { [[x, alpha*y], [y, x]] : (x, y) != (0, 0) },    |C|  = p^2 - 1
//!   C+ = C  union  C * [[1, 0], [0, -1]],                  |C+| = 2(p^2 - 1)
//! ```
//!
//! Member sets are stored as sorted integer encodings `a + p b + p^2 c + p^3 d`
//! so coset scans get cheap membership tests. Coset representatives are chosen
//! by a row-major scan of `GL_2` in ascending encoding order with greedy
//! new-coset selection, which keeps every downstream enumeration reproducible.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use crate::field::{find_nonsquare, inv_mod, is_prime, legendre};
use crate::{Error, Result};

/// Hard cap on the level prime, guarding the `p^4` enumeration.
pub const CARTAN_P_LIMIT: u64 = 257;

/// A 2x2 matrix over `F_p`, entries stored reduced, row-major
/// `[[a, b], [c, d]]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Mat2 {
    pub a: u64,
    pub b: u64,
    pub c: u64,
    pub d: u64,
    pub p: u64,
}

impl Mat2 {
    pub fn new(p: u64, entries: [i64; 4]) -> Mat2 {
        let r = |v: i64| v.rem_euclid(p as i64) as u64;
        Mat2 {
            a: r(entries[0]),
            b: r(entries[1]),
            c: r(entries[2]),
            d: r(entries[3]),
            p,
        }
    }

    pub fn identity(p: u64) -> Mat2 {
        Mat2 { a: 1, b: 0, c: 0, d: 1, p }
    }

    pub fn scalar(p: u64, lambda: u64) -> Mat2 {
        let l = lambda % p;
        Mat2 { a: l, b: 0, c: 0, d: l, p }
    }

    pub fn det(&self) -> u64 {
        let p = self.p;
        (self.a * self.d % p + p - self.b * self.c % p) % p
    }

    pub fn trace(&self) -> u64 {
        (self.a + self.d) % self.p
    }

    pub fn mul(&self, rhs: &Mat2) -> Mat2 {
        debug_assert_eq!(self.p, rhs.p);
        let p = self.p;
        Mat2 {
            a: (self.a * rhs.a + self.b * rhs.c) % p,
            b: (self.a * rhs.b + self.b * rhs.d) % p,
            c: (self.c * rhs.a + self.d * rhs.c) % p,
            d: (self.c * rhs.b + self.d * rhs.d) % p,
            p,
        }
    }

    pub fn neg(&self) -> Mat2 {
        let p = self.p;
        Mat2 {
            a: (p - self.a) % p,
            b: (p - self.b) % p,
            c: (p - self.c) % p,
            d: (p - self.d) % p,
            p,
        }
    }

    pub fn inv(&self) -> Option<Mat2> {
        let p = self.p;
        let det = self.det();
        if det == 0 {
            return None;
        }
        let di = inv_mod(det, p);
        Some(Mat2 {
            a: self.d * di % p,
            b: (p - self.b % p) % p * di % p,
            c: (p - self.c % p) % p * di % p,
            d: self.a * di % p,
            p,
        })
    }

    pub fn pow(&self, mut e: u64) -> Mat2 {
        let mut acc = Mat2::identity(self.p);
        let mut base = *self;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            e >>= 1;
        }
        acc
    }

    pub fn is_scalar(&self) -> bool {
        self.b == 0 && self.c == 0 && self.a == self.d
    }

    /// Integer encoding `a + p b + p^2 c + p^3 d`.
    pub fn encode(&self) -> u64 {
        self.a + self.p * (self.b + self.p * (self.c + self.p * self.d))
    }

    pub fn decode(p: u64, code: u64) -> Mat2 {
        let a = code % p;
        let b = code / p % p;
        let c = code / (p * p) % p;
        let d = code / (p * p * p) % p;
        Mat2 { a, b, c, d, p }
    }

    /// Multiplicative order; the matrix must be invertible.
    pub fn order(&self) -> u64 {
        debug_assert!(self.det() != 0);
        let mut k = 1;
        let mut m = *self;
        let id = Mat2::identity(self.p);
        while m != id {
            m = m.mul(self);
            k += 1;
        }
        k
    }
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]] (mod {})",
            self.a, self.b, self.c, self.d, self.p
        )
    }
}

/// Which subgroup a coset scan runs over.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SubgroupTag {
    /// The non-split Cartan subgroup `C`.
    Cartan,
    /// Its normalizer `C+`.
    Normalizer,
}

/// Conjugacy-class descriptor of an invertible matrix acting on p-torsion,
/// determined by the characteristic polynomial plus a scalar test.
#[derive(Clone, Copy, PartialEq, Eq, Debug, serde::Serialize)]
pub enum FrobeniusClass {
    /// `lambda * Id`.
    Scalar(u64),
    /// Irreducible characteristic polynomial `x^2 - trace x + det`.
    NonSplit { trace: u64, det: u64 },
    /// Two distinct eigenvalues over `F_p`, sorted.
    SplitDistinct(u64, u64),
    /// Double eigenvalue but not scalar.
    Jordan(u64),
}

impl FrobeniusClass {
    /// A concrete matrix in the class.
    pub fn representative(&self, p: u64) -> Mat2 {
        match *self {
            FrobeniusClass::Scalar(l) => Mat2::scalar(p, l),
            FrobeniusClass::NonSplit { trace, det } => {
                Mat2::new(p, [0, -(det as i64), 1, trace as i64])
            }
            FrobeniusClass::SplitDistinct(l1, l2) => {
                Mat2::new(p, [l1 as i64, 0, 0, l2 as i64])
            }
            FrobeniusClass::Jordan(l) => Mat2::new(p, [l as i64, 1, 0, l as i64]),
        }
    }

    /// Coefficients `(c1, c0)` of the characteristic polynomial
    /// `x^2 + c1 x + c0`.
    pub fn charpoly(&self, p: u64) -> (u64, u64) {
        self.representative(p).charpoly()
    }
}

impl fmt::Display for FrobeniusClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            FrobeniusClass::Scalar(l) => write!(f, "scalar({l})"),
            FrobeniusClass::NonSplit { trace, det } => {
                write!(f, "non-split(x^2 - {trace}x + {det})")
            }
            FrobeniusClass::SplitDistinct(l1, l2) => write!(f, "split({l1}, {l2})"),
            FrobeniusClass::Jordan(l) => write!(f, "jordan({l})"),
        }
    }
}

impl Mat2 {
    /// Coefficients `(c1, c0)` of `x^2 + c1 x + c0`.
    pub fn charpoly(&self) -> (u64, u64) {
        ((self.p - self.trace()) % self.p, self.det())
    }
}

/// Classifies an invertible matrix by the discriminant of its characteristic
/// polynomial plus a scalar test.
pub fn classify(m: &Mat2) -> Result<FrobeniusClass> {
    let p = m.p;
    if m.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    let t = m.trace();
    let d = m.det();
    let disc = (t * t % p + p - 4 * d % p) % p;
    match legendre(disc as i64, p)? {
        -1 => Ok(FrobeniusClass::NonSplit { trace: t, det: d }),
        1 => {
            let s = sqrt_mod(disc, p).expect("discriminant is a residue");
            let half = inv_mod(2, p);
            let l1 = (t + s) % p * half % p;
            let l2 = (t + p - s) % p * half % p;
            Ok(FrobeniusClass::SplitDistinct(l1.min(l2), l1.max(l2)))
        }
        _ => {
            let l = t * inv_mod(2, p) % p;
            if m.is_scalar() {
                Ok(FrobeniusClass::Scalar(l))
            } else {
                Ok(FrobeniusClass::Jordan(l))
            }
        }
    }
}

/// Square root mod an odd prime by direct scan; levels are small.
pub(crate) fn sqrt_mod(a: u64, p: u64) -> Option<u64> {
    let a = a % p;
    (0..p).find(|&x| x * x % p == a)
}

// ---------------------------------------------------------------------------
// F_{p^2} scratch arithmetic used for coset labels: u + v*theta, theta^2 = alpha
// ---------------------------------------------------------------------------

#[inline]
fn quad_mul(x: (u64, u64), y: (u64, u64), alpha: u64, p: u64) -> (u64, u64) {
    (
        (x.0 * y.0 + alpha * (x.1 * y.1 % p)) % p,
        (x.0 * y.1 + x.1 * y.0) % p,
    )
}

#[inline]
fn quad_inv(x: (u64, u64), alpha: u64, p: u64) -> (u64, u64) {
    // (u - v theta) / (u^2 - alpha v^2); the norm is nonzero off (0, 0)
    let n = (x.0 * x.0 % p + p - alpha * (x.1 * x.1 % p) % p) % p;
    let ni = inv_mod(n, p);
    ((x.0 * ni) % p, ((p - x.1) % p * ni) % p)
}

/// A fixed non-split Cartan subgroup of `GL_2(F_p)` with its normalizer and
/// deterministic coset machinery. Immutable after construction and shareable
/// across threads.
pub struct CartanContext {
    pub p: u64,
    /// The chosen non-square.
    pub alpha: u64,
    /// Sorted encodings of the members of `C`.
    c_members: Vec<u64>,
    /// Sorted encodings of the members of `C+`.
    cplus_members: Vec<u64>,
    c_reps: Vec<Mat2>,
    c_reps_inv: Vec<Mat2>,
    cplus_reps: Vec<Mat2>,
    cplus_reps_inv: Vec<Mat2>,
}

impl CartanContext {
    /// Builds the context for `p >= 5` with the smallest non-square `alpha`.
    pub fn build(p: u64) -> Result<CartanContext> {
        let alpha = find_nonsquare(p)?;
        CartanContext::build_with_alpha(p, alpha)
    }

    /// Builds the context with a caller-chosen non-square, used to check that
    /// nothing downstream depends on the choice.
    pub fn build_with_alpha(p: u64, alpha: u64) -> Result<CartanContext> {
        if p < 5 || p > CARTAN_P_LIMIT {
            return Err(Error::PrimeOutOfRange {
                p,
                min: 5,
                max: CARTAN_P_LIMIT,
            });
        }
        if !is_prime(p) {
            return Err(Error::NotPrime(p));
        }
        if legendre(alpha as i64, p)? != -1 {
            return Err(Error::domain(format!("{alpha} is a square mod {p}")));
        }

        let mut c_members = Vec::with_capacity((p * p - 1) as usize);
        let mut cplus_members = Vec::with_capacity(2 * (p * p - 1) as usize);
        for x in 0..p {
            for y in 0..p {
                if x == 0 && y == 0 {
                    continue;
                }
                let m = Mat2 {
                    a: x,
                    b: alpha * y % p,
                    c: y,
                    d: x,
                    p,
                };
                debug_assert!(m.det() != 0);
                debug_assert!(
                    m.is_scalar()
                        || matches!(classify(&m)?, FrobeniusClass::NonSplit { .. }),
                    "non-scalar Cartan element with reducible characteristic polynomial"
                );
                c_members.push(m.encode());
                cplus_members.push(m.encode());
                // m * [[1,0],[0,-1]] flips the signs of the second column
                let w = Mat2 {
                    a: m.a,
                    b: (p - m.b) % p,
                    c: m.c,
                    d: (p - m.d) % p,
                    p,
                };
                debug_assert_eq!(w.trace(), 0, "normalizer coset element with nonzero trace");
                cplus_members.push(w.encode());
            }
        }
        c_members.sort_unstable();
        cplus_members.sort_unstable();

        // Greedy transversal: scan GL_2 in ascending encoding order and keep a
        // matrix whenever its coset has not appeared yet. The coset of g is
        // labelled by the ratio of its columns read in F_{p^2} = F_p(theta):
        // col2/col1 determines Cg, and the pair {ratio, conjugate} determines
        // C+ g. Once every coset has a representative the remaining scan can
        // add nothing, so it stops early; the emitted list is identical to
        // the full scan's.
        let inv_table = {
            let mut t = vec![(0u64, 0u64); (p * p) as usize];
            for u in 0..p {
                for v in 0..p {
                    if u == 0 && v == 0 {
                        continue;
                    }
                    t[(u + p * v) as usize] = quad_inv((u, v), alpha, p);
                }
            }
            t
        };
        let n_c = (p * (p - 1)) as usize;
        let mut c_reps = Vec::with_capacity(n_c);
        let mut cplus_reps = Vec::with_capacity(n_c / 2);
        let mut seen_c = vec![false; (p * p) as usize];
        let mut seen_cplus = vec![false; (p * p) as usize];
        'scan: for d in 0..p {
            for c in 0..p {
                for b in 0..p {
                    for a in 0..p {
                        if (a * d % p + p - b * c % p) % p == 0 {
                            continue;
                        }
                        let ratio =
                            quad_mul((b, d), inv_table[(a + p * c) as usize], alpha, p);
                        debug_assert!(ratio.1 != 0);
                        let lab = (ratio.0 + p * ratio.1) as usize;
                        let m = Mat2 { a, b, c, d, p };
                        if !seen_c[lab] {
                            seen_c[lab] = true;
                            c_reps.push(m);
                        }
                        if !seen_cplus[lab] {
                            let conj = (ratio.0 + p * (p - ratio.1)) as usize;
                            seen_cplus[lab] = true;
                            seen_cplus[conj] = true;
                            cplus_reps.push(m);
                        }
                        if c_reps.len() == n_c && cplus_reps.len() == n_c / 2 {
                            break 'scan;
                        }
                    }
                }
            }
        }
        assert_eq!(c_reps.len(), n_c, "Cartan coset count");
        assert_eq!(cplus_reps.len(), n_c / 2, "normalizer coset count");

        let c_reps_inv = c_reps.iter().map(|m| m.inv().unwrap()).collect();
        let cplus_reps_inv = cplus_reps.iter().map(|m| m.inv().unwrap()).collect();

        Ok(CartanContext {
            p,
            alpha,
            c_members,
            cplus_members,
            c_reps,
            c_reps_inv,
            cplus_reps,
            cplus_reps_inv,
        })
    }

    pub fn cartan_order(&self) -> u64 {
        self.c_members.len() as u64
    }

    pub fn normalizer_order(&self) -> u64 {
        self.cplus_members.len() as u64
    }

    /// Index of `C` (resp. `C+`) in `GL_2(F_p)`.
    pub fn index(&self, tag: SubgroupTag) -> u64 {
        match tag {
            SubgroupTag::Cartan => self.c_reps.len() as u64,
            SubgroupTag::Normalizer => self.cplus_reps.len() as u64,
        }
    }

    pub fn contains(&self, tag: SubgroupTag, m: &Mat2) -> bool {
        let set = match tag {
            SubgroupTag::Cartan => &self.c_members,
            SubgroupTag::Normalizer => &self.cplus_members,
        };
        set.binary_search(&m.encode()).is_ok()
    }

    pub fn coset_representatives(&self, tag: SubgroupTag) -> &[Mat2] {
        match tag {
            SubgroupTag::Cartan => &self.c_reps,
            SubgroupTag::Normalizer => &self.cplus_reps,
        }
    }

    /// Members of `C` as matrices, in sorted encoding order.
    pub fn cartan_members(&self) -> impl Iterator<Item = Mat2> + '_ {
        self.c_members.iter().map(move |&e| Mat2::decode(self.p, e))
    }

    /// The norm-one subgroup `C` meet `SL_2`, i.e. pairs `(x, y)` with
    /// `x^2 - alpha y^2 = 1`, as matrices.
    pub fn norm_one_members(&self) -> Vec<Mat2> {
        let p = self.p;
        let mut out = Vec::with_capacity((p + 1) as usize);
        for x in 0..p {
            for y in 0..p {
                if (x == 0 && y == 0)
                    || (x * x % p + p - self.alpha * (y * y % p) % p) % p != 1
                {
                    continue;
                }
                out.push(Mat2 {
                    a: x,
                    b: self.alpha * y % p,
                    c: y,
                    d: x,
                    p,
                });
            }
        }
        out
    }
}

static CONTEXT_CACHE: OnceLock<Mutex<HashMap<u64, Arc<CartanContext>>>> = OnceLock::new();

/// Builds (or fetches from a process-wide cache) the Cartan context for `p`,
/// with the smallest non-square as `alpha`.
pub fn build_cartan(p: u64) -> Result<Arc<CartanContext>> {
    let cache = CONTEXT_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(ctx) = cache.lock().unwrap().get(&p) {
        return Ok(ctx.clone());
    }
    let ctx = Arc::new(CartanContext::build(p)?);
    cache.lock().unwrap().insert(p, ctx.clone());
    Ok(ctx)
}

/// Counts cosets `Hg` with `g x g^-1` in `H`, by exhaustive scan over the
/// stored representatives. The result is a class function of `x`.
pub fn count_fixed_cosets(x: &Mat2, tag: SubgroupTag, ctx: &CartanContext) -> Result<u64> {
    if x.det() == 0 {
        return Err(Error::SingularMatrix);
    }
    let (reps, reps_inv) = match tag {
        SubgroupTag::Cartan => (&ctx.c_reps, &ctx.c_reps_inv),
        SubgroupTag::Normalizer => (&ctx.cplus_reps, &ctx.cplus_reps_inv),
    };
    let mut n = 0;
    for (g, gi) in reps.iter().zip(reps_inv) {
        if ctx.contains(tag, &g.mul(x).mul(gi)) {
            n += 1;
        }
    }
    Ok(n)
}

/// Whether `C` meet `SL_2` contains an element with characteristic polynomial
/// `x^2 + 1` (order 4) resp. `x^2 + x + 1` (order 3), computed both by
/// exhaustive search and by the congruence conditions `p = 3 mod 4` resp.
/// `p = 2 mod 3`, with agreement asserted.
pub fn elliptic_element_existence(p: u64) -> Result<(bool, bool)> {
    let ctx = build_cartan(p)?;
    let mut order4 = false;
    let mut order3 = false;
    for m in ctx.norm_one_members() {
        let (c1, c0) = m.charpoly();
        if c0 != 1 {
            continue;
        }
        if c1 == 0 {
            order4 = true;
        }
        if c1 == 1 {
            order3 = true;
        }
    }
    let order4_congruence = p % 4 == 3;
    let order3_congruence = p % 3 == 2;
    if order4 != order4_congruence || order3 != order3_congruence {
        return Err(Error::consistency(format!(
            "elliptic-element search disagrees with congruence conditions at p={p}"
        )));
    }
    Ok((order4, order3))
}

/// Which special j-invariant an automorphism image is requested for.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SpecialJ {
    Zero,
    J1728,
}

/// A finite subgroup of `GL_2(F_p)` realizing the automorphism group of a
/// special-j elliptic curve on its p-torsion.
#[derive(Clone, Debug)]
pub struct AutomorphismImage {
    pub order: u64,
    pub members: Vec<Mat2>,
}

/// Order profile (order -> multiplicity) used as the isomorphism-type filter
/// in the subgroup searches.
fn order_profile(members: &[Mat2]) -> Vec<(u64, usize)> {
    let mut map: std::collections::BTreeMap<u64, usize> = Default::default();
    for m in members {
        *map.entry(m.order()).or_default() += 1;
    }
    map.into_iter().collect()
}

/// Closure of a generating set, aborting when the subgroup exceeds `cap`.
fn subgroup_closure(gens: &[Mat2], p: u64, cap: usize) -> Option<Vec<Mat2>> {
    let mut seen: std::collections::BTreeSet<u64> = Default::default();
    let mut members = vec![Mat2::identity(p)];
    seen.insert(Mat2::identity(p).encode());
    let mut frontier: Vec<Mat2> = gens.to_vec();
    while let Some(g) = frontier.pop() {
        if seen.contains(&g.encode()) {
            continue;
        }
        seen.insert(g.encode());
        members.push(g);
        if members.len() > cap {
            return None;
        }
        let snapshot = members.clone();
        for s in snapshot {
            frontier.push(s.mul(&g));
            frontier.push(g.mul(&s));
        }
    }
    Some(members)
}

/// Elements of `SL_2(F_p)` with the given trace, sorted by encoding.
fn sl2_elements_with_trace(p: u64, t: u64) -> Vec<Mat2> {
    let mut out = Vec::new();
    for a in 0..p {
        let d = (t + p - a) % p;
        // det = ad - bc = 1  =>  bc = ad - 1
        let target = (a * d % p + p - 1) % p;
        if target == 0 {
            // b = 0 (c free) or c = 0 (b free), minus double count of both zero
            for c in 0..p {
                out.push(Mat2 { a, b: 0, c, d, p });
            }
            for b in 1..p {
                out.push(Mat2 { a, b, c: 0, d, p });
            }
        } else {
            for b in 1..p {
                let c = target * inv_mod(b, p) % p;
                out.push(Mat2 { a, b, c, d, p });
            }
        }
    }
    out.sort_unstable_by_key(|m| m.encode());
    out
}

/// Returns the image in `GL_2(F_p)` (up to conjugacy) of the geometric
/// automorphism group of an elliptic curve with the given special j-invariant
/// in the given characteristic:
///
/// - cyclic of order 6 for `j = 0`, characteristic >= 5,
/// - cyclic of order 4 for `j = 1728`, characteristic >= 5,
/// - the order-24 group with a unique involution for characteristic 2,
/// - the order-12 group with a unique involution for characteristic 3.
///
/// Since automorphisms have degree 1, the image lies in `SL_2(F_p)` and
/// contains `-Id`. The group is found by exhaustive search over subgroups
/// generated by at most two elements, filtered by order and order profile,
/// first match in deterministic (encoding) order.
pub fn image_subgroups_for_special_j(char_q: u64, j: SpecialJ, p: u64) -> Result<AutomorphismImage> {
    if p < 5 || !is_prime(p) {
        return Err(Error::PrimeOutOfRange { p, min: 5, max: CARTAN_P_LIMIT });
    }
    if char_q == p {
        return Err(Error::domain("characteristic must differ from the level"));
    }
    match (char_q, j) {
        (2, _) => {
            // binary tetrahedral type: orders (1,2,3,4,6) with counts (1,1,8,6,8)
            search_two_generated(p, 24, &[(1, 1), (2, 1), (3, 8), (4, 6), (6, 8)])
        }
        (3, _) => {
            // dicyclic of order 12: orders (1,2,3,4,6) with counts (1,1,2,6,2)
            search_two_generated(p, 12, &[(1, 1), (2, 1), (3, 2), (4, 6), (6, 2)])
        }
        (_, SpecialJ::Zero) => cyclic_image(p, 6),
        (_, SpecialJ::J1728) => cyclic_image(p, 4),
    }
}

/// First element of `SL_2(F_p)` (by encoding) with the characteristic
/// polynomial of a primitive n-th root of unity, n in {4, 6}; it generates
/// the requested cyclic group, which contains `-Id` as its cube resp. square.
fn cyclic_image(p: u64, n: u64) -> Result<AutomorphismImage> {
    let trace = match n {
        4 => 0,
        6 => 1,
        _ => unreachable!(),
    };
    let g = sl2_elements_with_trace(p, trace)
        .into_iter()
        .next()
        .ok_or_else(|| Error::consistency(format!("no order-{n} element in SL_2(F_{p})")))?;
    debug_assert_eq!(g.order(), n);
    let mut members = Vec::with_capacity(n as usize);
    let mut m = Mat2::identity(p);
    for _ in 0..n {
        members.push(m);
        m = m.mul(&g);
    }
    debug_assert!(members.contains(&Mat2::identity(p).neg()));
    Ok(AutomorphismImage { order: n, members })
}

fn search_two_generated(
    p: u64,
    order: u64,
    profile: &[(u64, usize)],
) -> Result<AutomorphismImage> {
    // Any order-4 element of SL_2 works as first generator: they are all
    // conjugate, so restricting to the first one only moves the subgroup
    // within its conjugacy class.
    let order4 = sl2_elements_with_trace(p, 0);
    let order3 = sl2_elements_with_trace(p, p - 1);
    let x = *order4
        .first()
        .ok_or_else(|| Error::consistency(format!("no order-4 element in SL_2(F_{p})")))?;
    for y in &order3 {
        if let Some(members) = subgroup_closure(&[x, *y], p, order as usize) {
            if members.len() == order as usize && order_profile(&members) == profile {
                let mut members = members;
                members.sort_unstable_by_key(|m| m.encode());
                return Ok(AutomorphismImage { order, members });
            }
        }
    }
    Err(Error::consistency(format!(
        "no subgroup of order {order} with the required profile in SL_2(F_{p})"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn cartan_orders_and_indexes() {
        let c5 = build_cartan(5).unwrap();
        assert_eq!(c5.cartan_order(), 24);
        assert_eq!(c5.index(SubgroupTag::Cartan), 20); // |GL_2(F_5)| = 480
        let c7 = build_cartan(7).unwrap();
        assert_eq!(c7.index(SubgroupTag::Normalizer), 21); // 2016 / 96
        assert_eq!(c7.normalizer_order(), 96);
    }

    #[test]
    fn scalars_lie_in_cartan() {
        for p in [5u64, 7, 11, 13] {
            let ctx = build_cartan(p).unwrap();
            for l in 1..p {
                assert!(ctx.contains(SubgroupTag::Cartan, &Mat2::scalar(p, l)));
            }
        }
    }

    #[test]
    fn rejects_small_or_huge_primes() {
        assert!(CartanContext::build(3).is_err());
        assert!(CartanContext::build(4).is_err());
        assert!(CartanContext::build(263).is_err());
    }

    #[test]
    fn classify_examples() {
        assert_eq!(
            classify(&Mat2::identity(7)).unwrap(),
            FrobeniusClass::Scalar(1)
        );
        // [[0,-1],[1,0]] over F_7: x^2 + 1, and -1 is a non-residue mod 7
        assert_eq!(
            classify(&Mat2::new(7, [0, -1, 1, 0])).unwrap(),
            FrobeniusClass::NonSplit { trace: 0, det: 1 }
        );
        assert_eq!(
            classify(&Mat2::new(7, [1, 1, 0, 1])).unwrap(),
            FrobeniusClass::Jordan(1)
        );
        assert!(classify(&Mat2::new(7, [1, 1, 1, 1])).is_err());
    }

    #[test]
    fn fixed_coset_counts_examples() {
        // scalars fix every coset
        let ctx = build_cartan(7).unwrap();
        assert_eq!(
            count_fixed_cosets(&Mat2::scalar(7, 3), SubgroupTag::Cartan, &ctx).unwrap(),
            42
        );
        // non-split elements fix exactly two Cartan cosets
        let m = Mat2::new(7, [0, -1, 1, 0]);
        assert_eq!(
            count_fixed_cosets(&m, SubgroupTag::Cartan, &ctx).unwrap(),
            2
        );
        // no Cartan element is non-semisimple
        let ctx5 = build_cartan(5).unwrap();
        let j = Mat2::new(5, [1, 1, 0, 1]);
        assert_eq!(
            count_fixed_cosets(&j, SubgroupTag::Cartan, &ctx5).unwrap(),
            0
        );
    }

    #[test]
    fn fixed_coset_counts_by_class_for_small_primes() {
        // One representative per characteristic polynomial: NonSplit -> 2,
        // SplitDistinct and Jordan -> 0, Scalar -> p(p-1).
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = build_cartan(p).unwrap();
            for t in 0..p {
                for d in 1..p {
                    let m = Mat2::new(p, [0, -(d as i64), 1, t as i64]);
                    let class = classify(&m).unwrap();
                    let expect = match class {
                        FrobeniusClass::NonSplit { .. } => 2,
                        FrobeniusClass::SplitDistinct(..) | FrobeniusClass::Jordan(_) => 0,
                        FrobeniusClass::Scalar(_) => unreachable!("companion matrices are not scalar"),
                    };
                    assert_eq!(
                        count_fixed_cosets(&m, SubgroupTag::Cartan, &ctx).unwrap(),
                        expect,
                        "p={p} t={t} d={d} class={class}"
                    );
                }
            }
            for l in 1..p {
                assert_eq!(
                    count_fixed_cosets(&Mat2::scalar(p, l), SubgroupTag::Cartan, &ctx).unwrap(),
                    p * (p - 1)
                );
            }
        }
    }

    #[test]
    fn cartan_is_abelian_and_conjugation_flips_y() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = build_cartan(p).unwrap();
            let w = Mat2::new(p, [1, 0, 0, -1]);
            let members: Vec<Mat2> = ctx.cartan_members().collect();
            // abelian: check against a fixed non-scalar generator-ish element
            let g = Mat2::new(p, [0, ctx.alpha as i64, 1, 0]);
            for m in &members {
                assert_eq!(m.mul(&g), g.mul(m), "p={p}");
                // w m w^-1 has the y-coordinate negated
                let conj = w.mul(m).mul(&w.inv().unwrap());
                let expected = Mat2 {
                    a: m.a,
                    b: (p - m.b) % p,
                    c: (p - m.c) % p,
                    d: m.d,
                    p,
                };
                assert_eq!(conj, expected);
                // C+ normalizes C
                assert!(ctx.contains(SubgroupTag::Cartan, &conj));
            }
        }
    }

    #[test]
    fn nonscalar_cartan_members_are_nonsplit() {
        for p in [5u64, 7, 11, 13, 17, 19, 23, 29, 31] {
            let ctx = build_cartan(p).unwrap();
            for m in ctx.cartan_members() {
                if !m.is_scalar() {
                    assert!(matches!(
                        classify(&m).unwrap(),
                        FrobeniusClass::NonSplit { .. }
                    ));
                }
            }
        }
    }

    #[test]
    fn norm_one_subgroup_has_order_p_plus_one() {
        for p in [5u64, 7, 11, 13] {
            let ctx = build_cartan(p).unwrap();
            assert_eq!(ctx.norm_one_members().len() as u64, p + 1);
        }
    }

    #[test]
    fn elliptic_element_existence_examples() {
        assert_eq!(elliptic_element_existence(13).unwrap(), (false, false));
        assert_eq!(elliptic_element_existence(11).unwrap(), (true, true));
        assert_eq!(elliptic_element_existence(7).unwrap(), (true, false));
    }

    #[test]
    fn automorphism_images() {
        let im = image_subgroups_for_special_j(5, SpecialJ::Zero, 11).unwrap();
        assert_eq!(im.order, 6);
        let im = image_subgroups_for_special_j(2, SpecialJ::Zero, 11).unwrap();
        assert_eq!(im.order, 24);
        assert_eq!(im.members.len(), 24);
        let im = image_subgroups_for_special_j(3, SpecialJ::Zero, 13).unwrap();
        assert_eq!(im.order, 12);
        // all members have determinant 1 and -Id is present
        for m in &im.members {
            assert_eq!(m.det(), 1);
        }
        assert!(im.members.contains(&Mat2::identity(13).neg()));
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]
        #[test]
        fn count_is_class_function(code in 0u64..14641, seed in 0u64..14641) {
            let p = 11u64;
            let ctx = build_cartan(p).unwrap();
            let x = Mat2::decode(p, code % (p*p*p*p));
            prop_assume!(x.det() != 0);
            let g = Mat2::decode(p, seed % (p*p*p*p));
            prop_assume!(g.det() != 0);
            let conj = g.mul(&x).mul(&g.inv().unwrap());
            for tag in [SubgroupTag::Cartan, SubgroupTag::Normalizer] {
                prop_assert_eq!(
                    count_fixed_cosets(&x, tag, &ctx).unwrap(),
                    count_fixed_cosets(&conj, tag, &ctx).unwrap()
                );
            }
        }
    }
}

//! Two independent point-counting engines for `X_ns(p)` and `X_ns+(p)` over
//! `F_{q^2}`, plus cusp rationality and the supersingular lower bound.
//!
//! The moduli engine enumerates j-invariants of `F_{q^2}`, classifies the
//! Frobenius action on the p-torsion of a representative curve, and counts
//! Frobenius-stable level-structure classes coset by coset; special
//! j-invariants are handled by a Burnside average over the automorphism
//! image. The trace engine consumes newform Hecke data at `T_q` and turns it
//! into `#C(F_{q^r}) = q^r + 1 - sum alpha_i^r` through exact integer
//! power-sum recurrences. The two engines share no code past field
//! arithmetic, which is what makes their agreement on the bundled levels a
//! meaningful check.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;

use crate::ellcurve::{curve_for_j, frobenius_matrix_class, WeierstrassCurve};
use crate::field::{is_prime, ExtField};
use crate::gl2::{
    build_cartan, count_fixed_cosets, image_subgroups_for_special_j, AutomorphismImage,
    CartanContext, FrobeniusClass, Mat2, SpecialJ, SubgroupTag,
};
use crate::{Error, Result};

/// Which curve of the pair a count refers to.
#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
pub enum Variant {
    #[serde(rename = "ns")]
    Ns,
    #[serde(rename = "ns+")]
    NsPlus,
}

impl Variant {
    pub fn subgroup(self) -> SubgroupTag {
        match self {
            Variant::Ns => SubgroupTag::Cartan,
            Variant::NsPlus => SubgroupTag::Normalizer,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Variant::Ns => write!(f, "ns"),
            Variant::NsPlus => write!(f, "ns+"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Debug, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Moduli,
    Trace,
}

/// Per-j contribution of the moduli engine.
#[derive(Clone, Debug, Serialize)]
pub struct JContribution {
    /// Integer encoding of the j-invariant in `F_{q^r}`.
    pub j_encoding: u64,
    pub frobenius_class: FrobeniusClass,
    pub supersingular: bool,
    /// Whether the Burnside average over a nontrivial automorphism image was
    /// used.
    pub special: bool,
    pub points: u64,
}

/// A point count with method provenance.
#[derive(Clone, Debug, Serialize)]
pub struct PointCountReport {
    pub p: u64,
    pub q: u64,
    pub r: u32,
    pub variant: Variant,
    pub method: Method,
    pub noncuspidal: u64,
    pub rational_cusps: u64,
    pub total: u64,
    /// Present for the moduli method only, sorted by j encoding.
    pub per_j: Vec<JContribution>,
    /// Sum of the contributions over supersingular j, moduli method only.
    pub supersingular_subtotal: Option<u64>,
}

impl fmt::Display for PointCountReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "#X_{}({})(F_{}^{}) by the {} method",
            self.variant,
            self.p,
            self.q,
            self.r,
            match self.method {
                Method::Moduli => "moduli",
                Method::Trace => "trace",
            }
        )?;
        if !self.per_j.is_empty() {
            for c in &self.per_j {
                writeln!(
                    f,
                    "  j={:<6} {:<24} {}{}points: {}",
                    c.j_encoding,
                    c.frobenius_class.to_string(),
                    if c.supersingular { "supersingular " } else { "" },
                    if c.special { "special-j " } else { "" },
                    c.points
                )?;
            }
        }
        if let Some(ss) = self.supersingular_subtotal {
            writeln!(f, "  supersingular subtotal: {ss}")?;
        }
        writeln!(f, "  noncuspidal: {}", self.noncuspidal)?;
        writeln!(f, "  rational cusps: {}", self.rational_cusps)?;
        writeln!(f, "  total: {}", self.total)
    }
}

/// Number of rational cusps over `F_{q^r}` (`field_size = q^r`). The cusps
/// of `X_ns(p)` form a torsor under `(Z/p)^*` on which the field Frobenius
/// acts as multiplication by `q^r`: all `p - 1` are rational iff
/// `q^r = 1 mod p`, else none. Downstairs the cusps are the `+-` orbits, so
/// `(p-1)/2` are rational iff `q^r = +-1 mod p`.
pub fn rational_cusp_count(p: u64, field_size: u64, variant: Variant) -> Result<u64> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if field_size % p == 0 {
        return Err(Error::domain(
            "cusp count needs residue characteristic different from the level",
        ));
    }
    let m = field_size % p;
    Ok(match variant {
        Variant::Ns => {
            if m == 1 {
                p - 1
            } else {
                0
            }
        }
        Variant::NsPlus => {
            if m == 1 || m == p - 1 {
                (p - 1) / 2
            } else {
                0
            }
        }
    })
}

/// Moduli-side point count of `X_ns(p)` or `X_ns+(p)` over `F_{q^2}`.
pub fn count_points_moduli(p: u64, q: u64, variant: Variant) -> Result<PointCountReport> {
    let ctx = build_cartan(p)?;
    count_points_moduli_in_context(&ctx, q, variant)
}

/// Same engine against a caller-supplied context; lets the robustness tests
/// re-run with a different non-square or coset ordering.
pub fn count_points_moduli_in_context(
    ctx: &CartanContext,
    q: u64,
    variant: Variant,
) -> Result<PointCountReport> {
    let p = ctx.p;
    const R: u32 = 2; // the supersingular argument lives over F_{q^2}
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if q == p {
        return Err(Error::domain("q must differ from the level"));
    }
    let field = ExtField::new(q, R)?;
    let tag = variant.subgroup();

    let mut per_j = Vec::with_capacity(field.size() as usize);
    let mut noncuspidal = 0u64;
    let mut ss_subtotal = 0u64;
    for j in field.elements() {
        let e = curve_for_j(&field, &j)?;
        let class = frobenius_matrix_class(&e, p)?;
        let special = special_j_tag(&field, &j);
        let points = match special {
            None => count_fixed_cosets(&class.representative(p), tag, ctx)?,
            Some(tag_j) => {
                let image = automorphism_image_for(&e, &class, tag_j, p)?;
                burnside_average(&class.representative(p), &image, tag, ctx)?
            }
        };
        let supersingular = e.is_supersingular();
        if supersingular {
            ss_subtotal += points;
        }
        noncuspidal += points;
        per_j.push(JContribution {
            j_encoding: j.encoding(),
            frobenius_class: class,
            supersingular,
            special: special.is_some(),
            points,
        });
    }
    let rational_cusps = rational_cusp_count(p, field.size(), variant)?;

    // the supersingular classes alone already force this many points
    if variant == Variant::Ns {
        let bound = Ratio::new((p * (p - 1)) as i64 * (q as i64 - 1), 12);
        let actual = Ratio::from_integer(ss_subtotal as i64);
        if actual < bound {
            return Err(Error::consistency(format!(
                "supersingular subtotal {ss_subtotal} below p(p-1)(q-1)/12 = {bound} \
                 at p={p}, q={q}"
            )));
        }
    }

    Ok(PointCountReport {
        p,
        q,
        r: R,
        variant,
        method: Method::Moduli,
        noncuspidal,
        rational_cusps,
        total: noncuspidal + rational_cusps,
        per_j,
        supersingular_subtotal: Some(ss_subtotal),
    })
}

/// Whether j is one of the special values 0 / 1728 in its field.
fn special_j_tag(field: &ExtField, j: &crate::field::ExtElem) -> Option<SpecialJ> {
    if j.is_zero() {
        return Some(SpecialJ::Zero);
    }
    if field.characteristic() >= 5 && *j == field.from_int(1728) {
        return Some(SpecialJ::J1728);
    }
    None
}

/// The automorphism image paired with the Frobenius class at a special j.
///
/// For a scalar Frobenius the relative position is immaterial and the
/// deterministic subgroup search applies. Otherwise the curve is ordinary
/// with commutative endomorphisms, so the image must centralize the
/// Frobenius matrix: inside `F_p[rho]` for a non-split class, diagonal for a
/// split class. A Jordan class cannot occur here (the endomorphism ring is a
/// maximal quadratic order acting freely on the p-torsion).
fn automorphism_image_for(
    e: &WeierstrassCurve,
    class: &FrobeniusClass,
    tag: SpecialJ,
    p: u64,
) -> Result<AutomorphismImage> {
    let char_q = e.field().characteristic();
    match class {
        FrobeniusClass::Scalar(_) => image_subgroups_for_special_j(char_q, tag, p),
        FrobeniusClass::NonSplit { .. } | FrobeniusClass::SplitDistinct(..) => {
            debug_assert!(char_q >= 5, "wild special j has scalar Frobenius over F_{{q^2}}");
            let n = match tag {
                SpecialJ::Zero => 6,
                SpecialJ::J1728 => 4,
            };
            cyclic_in_centralizer(&class.representative(p), n, p)
        }
        FrobeniusClass::Jordan(_) => Err(Error::consistency(
            "special-j curve with non-semisimple Frobenius on p-torsion",
        )),
    }
}

/// The cyclic order-n group (n in {4, 6}) inside the centralizer of `rho`,
/// generated by the first element `a + b rho` with the characteristic
/// polynomial of a primitive n-th root of unity.
fn cyclic_in_centralizer(rho: &Mat2, n: u64, p: u64) -> Result<AutomorphismImage> {
    let want_trace = match n {
        4 => 0,
        6 => 1,
        _ => unreachable!(),
    };
    for a in 0..p {
        for b in 0..p {
            if a == 0 && b == 0 {
                continue;
            }
            let m = Mat2 {
                a: (a + b * rho.a) % p,
                b: b * rho.b % p,
                c: b * rho.c % p,
                d: (a + b * rho.d) % p,
                p,
            };
            if m.trace() == want_trace && m.det() == 1 {
                let mut members = Vec::with_capacity(n as usize);
                let mut acc = Mat2::identity(p);
                for _ in 0..n {
                    members.push(acc);
                    acc = acc.mul(&m);
                }
                debug_assert_eq!(acc, Mat2::identity(p));
                return Ok(AutomorphismImage { order: n, members });
            }
        }
    }
    Err(Error::consistency(format!(
        "no order-{n} element commuting with the Frobenius class at p={p}"
    )))
}

/// The number of Frobenius-stable orbits of the automorphism image on the
/// coset space: `(1/|A|) sum_a fixed(a rho)`. Orbit-stabilizer makes the sum
/// exactly divisible by |A|; anything else means a wrong embedding and fails
/// loudly.
fn burnside_average(
    rho: &Mat2,
    image: &AutomorphismImage,
    tag: SubgroupTag,
    ctx: &CartanContext,
) -> Result<u64> {
    let mut sum = 0u64;
    for a in &image.members {
        sum += count_fixed_cosets(&a.mul(rho), tag, ctx)?;
    }
    if sum % image.order != 0 {
        return Err(Error::consistency(format!(
            "Burnside sum {sum} not divisible by |A| = {}",
            image.order
        )));
    }
    Ok(sum / image.order)
}

// ---------------------------------------------------------------------------
// Newform records and the trace engine
// ---------------------------------------------------------------------------

/// Hecke data of one Galois-conjugacy class at one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum HeckeData {
    /// The eigenvalues of `T_l` on the individual forms of the class; the
    /// list length must equal the class dimension.
    Eigenvalues(Vec<i64>),
    /// Coefficients `c_0, ..., c_d` of the characteristic polynomial of `T_l`
    /// on the class, constant term first, monic.
    CharPoly(Vec<i64>),
}

/// One Galois-conjugacy class of weight-2 newforms.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NewformRecord {
    pub level: u64,
    pub dim: u32,
    /// Hecke data per prime l.
    pub hecke: BTreeMap<u64, HeckeData>,
}

impl NewformRecord {
    fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::domain("newform class of dimension zero"));
        }
        for (l, data) in &self.hecke {
            match data {
                HeckeData::Eigenvalues(v) => {
                    if v.len() != self.dim as usize {
                        return Err(Error::domain(format!(
                            "T{l} eigenvalue list length {} does not match dimension {}",
                            v.len(),
                            self.dim
                        )));
                    }
                }
                HeckeData::CharPoly(c) => {
                    if c.len() != self.dim as usize + 1 {
                        return Err(Error::domain(format!(
                            "T{l} characteristic polynomial degree {} does not match \
                             dimension {}",
                            c.len().saturating_sub(1),
                            self.dim
                        )));
                    }
                    if *c.last().unwrap() != 1 {
                        return Err(Error::domain(format!(
                            "T{l} characteristic polynomial is not monic"
                        )));
                    }
                }
            }
        }
        Ok(())
    }

    /// Power sums `p_1, ..., p_kmax` of the `T_l` eigenvalues, from either
    /// data form (Newton's identities for the characteristic polynomial).
    fn power_sums(&self, l: u64, kmax: u32) -> Result<Vec<i128>> {
        let data = self.hecke.get(&l).ok_or_else(|| {
            Error::domain(format!(
                "record at level {} carries no T{l} data",
                self.level
            ))
        })?;
        let d = self.dim as usize;
        match data {
            HeckeData::Eigenvalues(v) => Ok((1..=kmax)
                .map(|k| v.iter().map(|&a| (a as i128).pow(k)).sum())
                .collect()),
            HeckeData::CharPoly(c) => {
                // e_i = (-1)^i c_{d-i}; Newton: p_k = e_1 p_{k-1} - e_2 p_{k-2}
                // + ... + (-1)^{k-1} k e_k, extended by the linear recurrence
                // beyond the degree.
                let e: Vec<i128> = (0..=d)
                    .map(|i| {
                        let sign = if i % 2 == 0 { 1i128 } else { -1 };
                        sign * c[d - i] as i128
                    })
                    .collect();
                let mut p: Vec<i128> = vec![0; kmax as usize + 1];
                for k in 1..=kmax as usize {
                    let mut acc = 0i128;
                    for i in 1..=k.min(d) {
                        let sign = if (i - 1) % 2 == 0 { 1i128 } else { -1 };
                        if i == k {
                            acc += sign * (k as i128) * e[i];
                        } else {
                            acc += sign * e[i] * p[k - i];
                        }
                    }
                    p[k] = acc;
                }
                Ok(p[1..].to_vec())
            }
        }
    }
}

/// `sum_i (alpha_i^r + conj(alpha_i)^r)` over the Frobenius roots of one
/// record: each eigenvalue a of `T_q` contributes the power sum of the roots
/// of `x^2 - a x + q`, evaluated exactly through the recurrence
/// `s_k = a s_{k-1} - q s_{k-2}`, `s_0 = 2`, `s_1 = a`. Expanding `s_r` as an
/// integer polynomial in a turns the sum over the class into a combination
/// of eigenvalue power sums, so only the charpoly data is ever needed.
fn frobenius_power_sum(record: &NewformRecord, q: u64, r: u32) -> Result<i128> {
    // s_r as a polynomial in the eigenvalue
    let mut prev: Vec<i128> = vec![2]; // s_0
    let mut cur: Vec<i128> = vec![0, 1]; // s_1 = a
    for _ in 2..=r {
        // next = a*cur - q*prev
        let mut next = vec![0i128; cur.len() + 1];
        for (i, &c) in cur.iter().enumerate() {
            next[i + 1] += c;
        }
        for (i, &c) in prev.iter().enumerate() {
            next[i] -= q as i128 * c;
        }
        prev = std::mem::take(&mut cur);
        cur = next;
    }
    let s_r = if r == 0 { prev } else { cur };
    let kmax = (s_r.len() - 1) as u32;
    let sums = if kmax > 0 {
        record.power_sums(q, kmax)?
    } else {
        vec![]
    };
    let mut total = s_r[0] * record.dim as i128; // constant term times class size
    for (k, &coef) in s_r.iter().enumerate().skip(1) {
        total += coef * sums[k - 1];
    }
    Ok(total)
}

/// Trace-formula point count `q^r + 1 - sum_i alpha_i^r` for the curve whose
/// Jacobian decomposes into the given newform classes. All arithmetic is
/// exact integer; no floating point.
pub fn count_points_trace(records: &[NewformRecord], q: u64, r: u32) -> Result<u64> {
    if !is_prime(q) {
        return Err(Error::NotPrime(q));
    }
    if r == 0 {
        return Err(Error::domain("field degree must be positive"));
    }
    let mut frob_sum = 0i128;
    for rec in records {
        rec.validate()?;
        if rec.level % q == 0 {
            return Err(Error::domain(format!(
                "level {} is divisible by the counting prime {q}",
                rec.level
            )));
        }
        frob_sum += frobenius_power_sum(rec, q, r)?;
    }
    let qr = (q as i128).pow(r);
    let total = qr + 1 - frob_sum;
    u64::try_from(total)
        .map_err(|_| Error::consistency(format!("negative point count {total}")))
}

/// Verifies that a record set spans a Jacobian of the expected dimension.
pub fn validate_cover(records: &[NewformRecord], expected_dim: u64) -> Result<()> {
    let total: u64 = records.iter().map(|r| r.dim as u64).sum();
    if total != expected_dim {
        return Err(Error::domain(format!(
            "records span dimension {total}, expected {expected_dim}"
        )));
    }
    Ok(())
}

/// Whether a count is consistent with a hyperelliptic curve over `F_{q^r}`:
/// `count <= 2 (q^r + 1)`. A false return certifies non-hyperellipticity.
pub fn hyperelliptic_bound_check(count: u64, q: u64, r: u32) -> bool {
    count <= 2 * (q.pow(r) + 1)
}

// ---------------------------------------------------------------------------
// Newform record files
// ---------------------------------------------------------------------------

/// Parses newform records, one per line:
///
/// ```text
/// # comment
/// <level> <dim> T<l>:traces=[v1,...,vdim] ...
/// <level> <dim> T<l>:charpoly=[c0,...,cd] ...
/// ```
pub fn parse_newform_records(text: &str, source_name: &str) -> Result<Vec<NewformRecord>> {
    let err = |line: usize, msg: String| Error::Parse {
        source_name: source_name.to_string(),
        line,
        msg,
    };
    let mut out = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let mut tokens = line.split_whitespace();
        let level: u64 = tokens
            .next()
            .unwrap()
            .parse()
            .map_err(|_| err(line_no, "level is not an integer".into()))?;
        let dim: u32 = tokens
            .next()
            .ok_or_else(|| err(line_no, "missing dimension field".into()))?
            .parse()
            .map_err(|_| err(line_no, "dimension is not an integer".into()))?;
        let mut hecke = BTreeMap::new();
        let mut saw_any = false;
        for tok in tokens {
            saw_any = true;
            let (head, body) = tok
                .split_once(":")
                .ok_or_else(|| err(line_no, format!("malformed Hecke field '{tok}'")))?;
            let l: u64 = head
                .strip_prefix('T')
                .and_then(|s| s.parse().ok())
                .ok_or_else(|| err(line_no, format!("malformed Hecke operator tag '{head}'")))?;
            let (kind, list) = body
                .split_once('=')
                .ok_or_else(|| err(line_no, format!("malformed Hecke field '{tok}'")))?;
            let list = list
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| err(line_no, "expected a bracketed integer list".into()))?;
            let values: Vec<i64> = if list.is_empty() {
                vec![]
            } else {
                list.split(',')
                    .map(|s| s.trim().parse::<i64>())
                    .collect::<std::result::Result<_, _>>()
                    .map_err(|_| err(line_no, "non-integer entry in list".into()))?
            };
            let data = match kind {
                "traces" => HeckeData::Eigenvalues(values),
                "charpoly" => HeckeData::CharPoly(values),
                other => return Err(err(line_no, format!("unknown data kind '{other}'"))),
            };
            if hecke.insert(l, data).is_some() {
                return Err(err(line_no, format!("duplicate T{l} data")));
            }
        }
        if !saw_any {
            return Err(err(line_no, "record carries no Hecke data".into()));
        }
        let record = NewformRecord { level, dim, hecke };
        record
            .validate()
            .map_err(|e| err(line_no, e.to_string()))?;
        out.push(record);
    }
    Ok(out)
}

/// Loads newform records from a file.
pub fn load_newform_records(path: impl AsRef<Path>) -> Result<Vec<NewformRecord>> {
    let path = path.as_ref();
    let text = std::fs::read_to_string(path)?;
    parse_newform_records(&text, &path.display().to_string())
}

/// Bundled fixtures: level 121 (the Jacobian of `X_ns(11)`, four elliptic
/// factors) and level 169 (the Fricke-invariant part for `X_ns+(13)`, one
/// simple dimension-3 factor).
pub fn bundled_records(level: u64) -> Option<Vec<NewformRecord>> {
    let text = match level {
        121 => include_str!("../fixtures/level121.nf"),
        169 => include_str!("../fixtures/level169.nf"),
        _ => return None,
    };
    Some(parse_newform_records(text, &format!("bundled level {level}")).expect("bundled fixtures parse"))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cusp_counts() {
        assert_eq!(rational_cusp_count(11, 4, Variant::Ns).unwrap(), 0);
        assert_eq!(rational_cusp_count(13, 4, Variant::NsPlus).unwrap(), 0);
        assert_eq!(rational_cusp_count(5, 16, Variant::Ns).unwrap(), 4);
        assert_eq!(rational_cusp_count(5, 16, Variant::NsPlus).unwrap(), 2);
        // q^r = -1 mod p: only the quotient keeps its cusps
        assert_eq!(rational_cusp_count(5, 9, Variant::Ns).unwrap(), 0);
        assert_eq!(rational_cusp_count(5, 9, Variant::NsPlus).unwrap(), 2);
        assert!(rational_cusp_count(5, 25, Variant::Ns).is_err());
    }

    #[test]
    fn trace_engine_level_121() {
        let records = bundled_records(121).unwrap();
        assert_eq!(records.len(), 4);
        assert_eq!(count_points_trace(&records, 2, 2).unwrap(), 15);
    }

    #[test]
    fn trace_engine_level_169() {
        let records = bundled_records(169).unwrap();
        assert_eq!(records.len(), 1);
        assert_eq!(records[0].dim, 3);
        assert_eq!(count_points_trace(&records, 2, 2).unwrap(), 11);
    }

    #[test]
    fn trace_engine_genus_zero() {
        assert_eq!(count_points_trace(&[], 2, 2).unwrap(), 5);
    }

    #[test]
    fn trace_engine_charpoly_matches_eigenvalues() {
        // x^3 + 2x^2 - x - 1 has power sums p1 = -2, p2 = 6
        let rec = NewformRecord {
            level: 169,
            dim: 3,
            hecke: [(2u64, HeckeData::CharPoly(vec![-1, -1, 2, 1]))].into(),
        };
        assert_eq!(rec.power_sums(2, 2).unwrap(), vec![-2, 6]);
        // dimension-1 charpoly x - 3 behaves like the eigenvalue list [3]
        let a = NewformRecord {
            level: 11,
            dim: 1,
            hecke: [(3u64, HeckeData::CharPoly(vec![-3, 1]))].into(),
        };
        let b = NewformRecord {
            level: 11,
            dim: 1,
            hecke: [(3u64, HeckeData::Eigenvalues(vec![3]))].into(),
        };
        for r in 1..6 {
            assert_eq!(
                frobenius_power_sum(&a, 3, r).unwrap(),
                frobenius_power_sum(&b, 3, r).unwrap()
            );
        }
    }

    #[test]
    fn power_sum_recurrence_matches_direct_expansion() {
        // s_2 = a^2 - 2q for every |a| <= 2 sqrt(q)
        for q in [2u64, 3, 5, 7] {
            let amax = (2.0 * (q as f64).sqrt()) as i64;
            for a in -amax..=amax {
                let rec = NewformRecord {
                    level: 7,
                    dim: 1,
                    hecke: [(q, HeckeData::Eigenvalues(vec![a]))].into(),
                };
                assert_eq!(
                    frobenius_power_sum(&rec, q, 2).unwrap(),
                    (a * a) as i128 - 2 * q as i128,
                    "q={q} a={a}"
                );
                // s_3 = a^3 - 3qa
                assert_eq!(
                    frobenius_power_sum(&rec, q, 3).unwrap(),
                    (a * a * a) as i128 - 3 * (q as i128) * a as i128
                );
            }
        }
    }

    #[test]
    fn trace_engine_rejects_bad_records() {
        let bad_dim = NewformRecord {
            level: 121,
            dim: 2,
            hecke: [(2u64, HeckeData::Eigenvalues(vec![1]))].into(),
        };
        assert!(count_points_trace(&[bad_dim], 2, 2).is_err());
        let not_monic = NewformRecord {
            level: 169,
            dim: 3,
            hecke: [(2u64, HeckeData::CharPoly(vec![-1, -1, 2, 2]))].into(),
        };
        assert!(count_points_trace(&[not_monic], 2, 2).is_err());
        // missing data for the counting prime
        let wrong_l = NewformRecord {
            level: 121,
            dim: 1,
            hecke: [(3u64, HeckeData::Eigenvalues(vec![1]))].into(),
        };
        assert!(count_points_trace(&[wrong_l], 2, 2).is_err());
        // level divisible by q
        let bad_level = NewformRecord {
            level: 22,
            dim: 1,
            hecke: [(2u64, HeckeData::Eigenvalues(vec![1]))].into(),
        };
        assert!(count_points_trace(&[bad_level], 2, 2).is_err());
    }

    #[test]
    fn parser_reports_line_numbers() {
        let text = "121 1 T2:traces=[-1]\n121 x T2:traces=[0]\n";
        match parse_newform_records(text, "test") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 2),
            other => panic!("expected parse error, got {other:?}"),
        }
        let text = "121 2 T2:traces=[-1]\n";
        assert!(parse_newform_records(text, "test").is_err());
        let text = "121 1\n";
        assert!(parse_newform_records(text, "test").is_err());
    }

    #[test]
    fn moduli_count_xns11_over_f4() {
        let report = count_points_moduli(11, 2, Variant::Ns).unwrap();
        assert_eq!(report.total, 15);
        assert_eq!(report.rational_cusps, 0);
        // breakdown: 11 over j=0, then 2 + 2 + 0 over the ordinary j's
        let mut points: Vec<u64> = report.per_j.iter().map(|c| c.points).collect();
        assert_eq!(report.per_j[0].j_encoding, 0);
        assert_eq!(report.per_j[0].points, 11);
        assert!(report.per_j[0].special && report.per_j[0].supersingular);
        points.sort_unstable();
        assert_eq!(points, vec![0, 2, 2, 11]);
    }

    #[test]
    fn moduli_count_xns_plus_13_over_f4() {
        let report = count_points_moduli(13, 2, Variant::NsPlus).unwrap();
        assert_eq!(report.total, 11);
        assert_eq!(report.rational_cusps, 0);
        let points: Vec<u64> = report.per_j.iter().map(|c| c.points).collect();
        assert_eq!(points, vec![8, 1, 1, 1]);
    }

    #[test]
    fn cross_method_agreement() {
        let moduli = count_points_moduli(11, 2, Variant::Ns).unwrap();
        let trace = count_points_trace(&bundled_records(121).unwrap(), 2, 2).unwrap();
        assert_eq!(moduli.total, trace);
        let moduli = count_points_moduli(13, 2, Variant::NsPlus).unwrap();
        let trace = count_points_trace(&bundled_records(169).unwrap(), 2, 2).unwrap();
        assert_eq!(moduli.total, trace);
    }

    #[test]
    fn moduli_total_independent_of_alpha_and_ordering() {
        use crate::field::{is_prime as _, legendre};
        for (p, q, variant) in [(11u64, 2u64, Variant::Ns), (13, 2, Variant::NsPlus)] {
            let default = count_points_moduli(p, q, variant).unwrap();
            // second-smallest non-square
            let mut nonsquares = (2..p).filter(|&a| legendre(a as i64, p).unwrap() == -1);
            let _first = nonsquares.next().unwrap();
            let second = nonsquares.next().unwrap();
            let ctx = crate::gl2::CartanContext::build_with_alpha(p, second).unwrap();
            let alt = count_points_moduli_in_context(&ctx, q, variant).unwrap();
            assert_eq!(default.total, alt.total);
            assert_eq!(default.noncuspidal, alt.noncuspidal);
            let a: Vec<u64> = default.per_j.iter().map(|c| c.points).collect();
            let b: Vec<u64> = alt.per_j.iter().map(|c| c.points).collect();
            assert_eq!(a, b, "per-j breakdown depends on alpha at p={p}");
        }
    }

    #[test]
    fn quadratic_twist_insensitivity() {
        // replacing rho by -rho fixes every generic-j contribution
        let ctx = build_cartan(11).unwrap();
        let field = ExtField::new(2, 2).unwrap();
        for j in field.elements().filter(|j| !j.is_zero()) {
            let e = curve_for_j(&field, &j).unwrap();
            let class = frobenius_matrix_class(&e, 11).unwrap();
            let rho = class.representative(11);
            for tag in [SubgroupTag::Cartan, SubgroupTag::Normalizer] {
                assert_eq!(
                    count_fixed_cosets(&rho, tag, &ctx).unwrap(),
                    count_fixed_cosets(&rho.neg(), tag, &ctx).unwrap()
                );
            }
        }
    }

    #[test]
    fn supersingular_subtotal_exceeds_mass_bound() {
        for p in [11u64, 13, 17] {
            for q in [2u64, 3] {
                let report = count_points_moduli(p, q, Variant::Ns).unwrap();
                let ss = report.supersingular_subtotal.unwrap();
                let bound = Ratio::new((p * (p - 1)) as i64 * (q as i64 - 1), 12);
                assert!(
                    Ratio::from_integer(ss as i64) >= bound,
                    "p={p} q={q}: {ss} < {bound}"
                );
            }
        }
    }

    #[test]
    fn hyperelliptic_bound() {
        assert!(!hyperelliptic_bound_check(15, 2, 2));
        assert!(!hyperelliptic_bound_check(11, 2, 2));
        assert!(hyperelliptic_bound_check(10, 2, 2));
    }

    #[test]
    fn genus_one_count_matches_its_cm_jacobian() {
        // X_ns(7) has genus 1 and its Jacobian is the level-49 elliptic
        // curve with CM by Q(sqrt -7). Both 3 and 5 are inert there
        // (legendre(-7, 3) = legendre(-7, 5) = -1), so the reduction is
        // supersingular with trace 0 and the count over F_{q^2} is forced to
        // q^2 + 1 + 2q = (q + 1)^2, with no table lookup involved.
        assert_eq!(count_points_moduli(7, 3, Variant::Ns).unwrap().total, 16);
        assert_eq!(count_points_moduli(7, 5, Variant::Ns).unwrap().total, 36);
        // the same numbers through the trace engine, from the forced a_q = 0
        let rec = NewformRecord {
            level: 49,
            dim: 1,
            hecke: [
                (3u64, HeckeData::Eigenvalues(vec![0])),
                (5u64, HeckeData::Eigenvalues(vec![0])),
            ]
            .into(),
        };
        assert_eq!(count_points_trace(std::slice::from_ref(&rec), 3, 2).unwrap(), 16);
        assert_eq!(count_points_trace(std::slice::from_ref(&rec), 5, 2).unwrap(), 36);
    }

    #[test]
    fn ordinary_special_j_fibers_over_f25() {
        // at q = 5 the curve with j = 1728 is ordinary, so the automorphism
        // image must be built inside the centralizer of a non-scalar
        // Frobenius class: non-split at p = 11 (disc = -64 = 2, a
        // non-residue), split at p = 13 (disc = -64 = 1, a residue)
        let field = ExtField::new(5, 2).unwrap();
        let j1728 = field.from_int(1728);
        let e = curve_for_j(&field, &j1728).unwrap();
        assert!(!e.is_supersingular());
        assert_eq!(e.frobenius_trace(), -6);
        assert!(matches!(
            frobenius_matrix_class(&e, 11).unwrap(),
            FrobeniusClass::NonSplit { .. }
        ));
        assert!(matches!(
            frobenius_matrix_class(&e, 13).unwrap(),
            FrobeniusClass::SplitDistinct(3, 4)
        ));

        for p in [11u64, 13] {
            let ns = count_points_moduli(p, 5, Variant::Ns).unwrap();
            let ns_plus = count_points_moduli(p, 5, Variant::NsPlus).unwrap();
            let special: Vec<_> = ns
                .per_j
                .iter()
                .filter(|c| c.special && !c.supersingular)
                .collect();
            assert_eq!(special.len(), 1, "exactly the j = 1728 fiber at p={p}");
            // every rational point upstairs maps to one downstairs, fibers <= 2
            assert!(ns.total <= 2 * ns_plus.total, "p={p}");
            // the engine's internal mass-bound and Burnside-divisibility checks
            // already ran; totals must also survive a change of non-square
            let mut nonsquares =
                (2..p).filter(|&a| crate::field::legendre(a as i64, p).unwrap() == -1);
            nonsquares.next();
            let second = nonsquares.next().unwrap();
            let ctx = crate::gl2::CartanContext::build_with_alpha(p, second).unwrap();
            let alt = count_points_moduli_in_context(&ctx, 5, Variant::Ns).unwrap();
            assert_eq!(ns.total, alt.total, "p={p}");
        }
    }
}

//! The verdict engine: every inequality chain and hypothesis check behind
//! the automorphism-group statements, evaluated exactly, plus the full
//! verification manifest.
//!
//! Each gate lists the quantities it computed here and the facts it cites
//! from elsewhere, so a verdict is never silently stronger than its inputs.

use serde::Serialize;

use crate::counting::{
    bundled_records, count_points_moduli, count_points_trace, hyperelliptic_bound_check, Variant,
};
use crate::field::{is_prime, legendre};
use crate::invariants::{
    class_number, cm_split, fixed_points_of_w, genus_gap_holds, genus_ns, genus_x0,
    newpart_dim_check,
};
use crate::{Error, Result};

/// One gate evaluation: the computed hypothesis values, the verdict, and
/// provenance notes separating in-house computation from citation.
#[derive(Clone, Debug, Serialize)]
pub struct GateEntry {
    pub gate: String,
    pub values: Vec<(String, String)>,
    pub verdict: String,
    /// True iff the gate establishes its conclusion at this level.
    pub established: bool,
    pub citation: String,
    pub provenance: Vec<String>,
}

impl std::fmt::Display for GateEntry {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "[{}] {}", self.gate, self.verdict)?;
        for (k, v) in &self.values {
            writeln!(f, "    {k} = {v}")?;
        }
        writeln!(f, "    source: {}", self.citation)?;
        for p in &self.provenance {
            writeln!(f, "    note: {p}")?;
        }
        Ok(())
    }
}

/// All gate entries for one level.
#[derive(Clone, Debug, Serialize)]
pub struct GateReport {
    pub p: u64,
    pub entries: Vec<GateEntry>,
}

impl std::fmt::Display for GateReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "gate report for p = {}", self.p)?;
        for e in &self.entries {
            write!(f, "{e}")?;
        }
        Ok(())
    }
}

fn check_prime(p: u64, min: u64) -> Result<()> {
    if !is_prime(p) || p < min {
        return Err(Error::PrimeOutOfRange { p, min, max: crate::gl2::CARTAN_P_LIMIT });
    }
    Ok(())
}

/// Non-hyperellipticity gate. For levels past the boundary the supersingular
/// mass bound at q = 2 beats the hyperelliptic ceiling `2(q^2+1)` outright;
/// the boundary levels (11 upstairs, 13 downstairs) are settled by the
/// explicit F_4 point counts.
pub fn hyperelliptic_gate(p: u64, variant: Variant) -> Result<GateEntry> {
    let min = match variant {
        Variant::Ns => 11,
        Variant::NsPlus => 13,
    };
    check_prime(p, min)?;
    let ceiling = 2 * (4 + 1); // 2(q^2 + 1) at q = 2
    let boundary = p == min;
    let mut values = vec![("hyperelliptic ceiling over F_4".into(), ceiling.to_string())];
    let mut provenance = vec![];
    let established;
    let verdict;
    if boundary {
        let report = count_points_moduli(p, 2, variant)?;
        values.push((format!("#X_{variant}({p})(F_4), moduli engine"), report.total.to_string()));
        established = !hyperelliptic_bound_check(report.total, 2, 2);
        verdict = if established {
            format!("not hyperelliptic: {} > {ceiling}", report.total)
        } else {
            format!("inconclusive: count {} within ceiling", report.total)
        };
        provenance.push("point count computed here by the moduli engine".into());
    } else {
        // p(p-1)(q-1)/12 (resp. /24 downstairs) vs 2(q^2+1), exact integers
        let (num, den) = match variant {
            Variant::Ns => (p * (p - 1), 12),
            Variant::NsPlus => (p * (p - 1), 24),
        };
        values.push((
            format!("supersingular lower bound p(p-1)(q-1)/{den} at q=2"),
            format!("{num}/{den}"),
        ));
        established = num > ceiling * den;
        verdict = if established {
            format!("not hyperelliptic: {num}/{den} > {ceiling}")
        } else {
            "inconclusive: mass bound within ceiling".into()
        };
        provenance.push(
            "lower bound from the supersingular mass count; verified numerically by the \
             moduli engine at small levels"
                .into(),
        );
    }
    Ok(GateEntry {
        gate: format!("hyperelliptic/{variant}"),
        values,
        verdict,
        established,
        citation: "supersingular point bound and the 2(q^2+1) ceiling for hyperelliptic \
                   curves over F_{q^2}"
            .into(),
        provenance,
    })
}

/// Cusp-preservation gate: automorphisms are forced to preserve the cusps
/// once the involution has more than 16 fixed points. A cusp-moving
/// automorphism would yield a degree-8 map to the line not factoring through
/// the involution, and a degree-k map not invariant under an automorphism
/// caps its fixed points at 2k.
pub fn cusp_preservation_gate(p: u64) -> Result<GateEntry> {
    check_prime(p, 11)?;
    let w = fixed_points_of_w(p);
    let open = w > 16;
    Ok(GateEntry {
        gate: "cusp-preservation".into(),
        values: vec![
            ("fixed points of w".into(), w.to_string()),
            ("threshold".into(), "16".into()),
            (
                "field-of-definition hypothesis".into(),
                format!("p >= 11 holds ({p})"),
            ),
        ],
        verdict: if open {
            format!("all automorphisms preserve the cusps ({w} > 16)")
        } else {
            format!("gate closed ({w} <= 16)")
        },
        established: open,
        citation: "fixed-point count of w (cited), degree-8 quotient map bound, and the \
                   fixed-points-versus-degree lemma r <= 2k"
            .into(),
        provenance: vec![
            "fixed-point count (p-1)/2 or (p+1)/2 cited from the literature; cross-checked \
             against the double-cover genus relation"
                .into(),
        ],
    })
}

/// Smallest prime level at which the cusp-preservation gate opens.
pub fn minimal_cusp_preservation_prime(pmax: u64) -> Result<u64> {
    (11..=pmax)
        .filter(|&p| is_prime(p))
        .find(|&p| fixed_points_of_w(p) > 16)
        .ok_or_else(|| Error::domain(format!("gate never opens below {pmax}")))
}

/// Full automorphism-group gate: the group is generated by the involution
/// iff the cusp-preservation gate is open and there are no elliptic points,
/// i.e. `p = 1 mod 12`, with the level-13 exception excluded by name.
pub fn full_aut_gate(p: u64) -> Result<GateEntry> {
    check_prime(p, 11)?;
    let cusp = cusp_preservation_gate(p)?;
    let no_elliptic = p % 12 == 1;
    let excluded_13 = p == 13;
    let established = cusp.established && no_elliptic && !excluded_13;
    let verdict = if established {
        "automorphism group generated by the modular involution w".to_string()
    } else if p == 11 {
        "not established: the automorphism group at level 11 is the Klein four group, \
         generated by w and an exceptional involution (cited)"
            .to_string()
    } else {
        let mut reasons = vec![];
        if !cusp.established {
            reasons.push("cusp-preservation gate closed");
        }
        if !no_elliptic {
            reasons.push("elliptic points possible (p != 1 mod 12)");
        }
        if excluded_13 {
            reasons.push("level 13 excluded by hypothesis");
        }
        format!("not established: {}", reasons.join("; "))
    };
    Ok(GateEntry {
        gate: "full-automorphism-group".into(),
        values: vec![
            ("cusp-preservation open".into(), cusp.established.to_string()),
            ("p mod 12".into(), (p % 12).to_string()),
            ("p != 13".into(), (!excluded_13).to_string()),
        ],
        verdict,
        established,
        citation: "cusp-preserving automorphisms of the Cartan curve are modular when \
                   there are no elliptic points"
            .into(),
        provenance: vec![
            "elliptic-point criterion computed here (irreducible quadratics x^2+1, \
             x^2+x+1 in the Cartan subgroup)"
                .into(),
        ],
    })
}

/// Levels in `[11, pmax]` where the full gate opens.
pub fn full_aut_open_set(pmax: u64) -> Result<Vec<u64>> {
    let mut out = Vec::new();
    for p in (11..=pmax).filter(|&p| is_prime(p)) {
        if full_aut_gate(p)?.established {
            out.push(p);
        }
    }
    Ok(out)
}

/// Field-of-definition gate: the genus gap `g_ns(p) > p` together with the
/// class-number bound `2 h(-p) + 1 <= p` runs the quotient-genus estimate
/// into a contradiction, forcing every automorphism to be defined over the
/// quadratic field K(p). Levels 13 and 17 go through the trivial-CM-part
/// branch instead, and level 11 is the explicitly computed case.
pub fn thm1_contradiction_gate(p: u64) -> Result<GateEntry> {
    check_prime(p, 11)?;
    let g = genus_ns(p)?;
    let (g_cm, _) = cm_split(p)?;
    let kp = if p % 4 == 1 { "Q(sqrt p)" } else { "Q(sqrt -p)" };
    let mut values = vec![
        ("genus_ns".into(), g.to_string()),
        ("g_cm".into(), g_cm.to_string()),
        ("2 g_cm + 1".into(), (2 * g_cm + 1).to_string()),
        ("K(p)".into(), kp.to_string()),
    ];
    let (established, verdict, provenance) = if p == 11 {
        (
            true,
            format!("automorphisms defined over {kp}: explicitly computed case (cited)"),
            vec!["level-11 automorphism group cited from the literature".to_string()],
        )
    } else if p % 4 == 1 && g_cm == 0 {
        (
            true,
            format!(
                "automorphisms defined over {kp}: CM part trivial (p = 1 mod 4), \
                 endomorphism field argument applies directly"
            ),
            vec!["CM dimension computed here from the class-number split".to_string()],
        )
    } else if genus_gap_holds(p)? && 2 * g_cm + 1 <= p {
        values.push(("genus gap g_ns > p".into(), "true".into()));
        (
            true,
            format!(
                "automorphisms defined over {kp}: a non-trivial twist automorphism would \
                 force g_ns <= 2 g_cm + 1 <= p, contradicting g_ns = {g} > {p}"
            ),
            vec![
                "genus and class number computed here; quotient-genus estimate cited".to_string(),
            ],
        )
    } else {
        (
            false,
            "contradiction chain does not close at this level".to_string(),
            vec![],
        )
    };
    Ok(GateEntry {
        gate: "field-of-definition".into(),
        values,
        verdict,
        established,
        citation: "quotient-genus estimate and Dirichlet class-number bound".into(),
        provenance,
    })
}

/// Ray-class degree gate: `(p-1)^2 / w_K <= p - 1` iff `p <= w_K + 1`.
/// With at most six roots of unity in an imaginary quadratic field, no CM
/// point of the Cartan curve is defined over the p-th cyclotomic field once
/// `p > 7`.
pub fn ray_class_gate(p: u64, w_k: u64) -> Result<GateEntry> {
    if !is_prime(p) || p < 3 {
        return Err(Error::NotOddPrime(p));
    }
    if ![2, 4, 6].contains(&w_k) {
        return Err(Error::domain("the unit count w_K must be 2, 4 or 6"));
    }
    // (p-1)^2 <= w_K (p-1), exact integers
    let lhs = (p - 1) * (p - 1);
    let rhs = w_k * (p - 1);
    let holds = lhs <= rhs;
    Ok(GateEntry {
        gate: "ray-class-degree".into(),
        values: vec![
            ("(p-1)^2".into(), lhs.to_string()),
            ("w_K (p-1)".into(), rhs.to_string()),
            ("equivalent bound".into(), format!("p <= {}", w_k + 1)),
        ],
        verdict: if holds {
            format!("degree inequality admissible at p={p}, w_K={w_k}")
        } else {
            format!("degree inequality fails at p={p}, w_K={w_k}: no such CM point")
        },
        established: holds,
        citation: "ray-class-field degree [K_(p):K] = h_K #(O_K/p)^* / w_K against \
                   [K(zeta_p):K] <= p-1"
            .into(),
        provenance: vec!["inequality evaluated exactly here".into()],
    })
}

/// Largest odd prime admissible for some `w_K` in {2, 4, 6}.
pub fn ray_class_max_admissible() -> u64 {
    (3..100)
        .filter(|&p| is_prime(p))
        .filter(|&p| [2u64, 4, 6].iter().any(|&w| p <= w + 1))
        .max()
        .unwrap()
}

/// The fixed-points-versus-degree lemma: an automorphism with `r` fixed
/// points moved by a degree-k map to the line satisfies `r <= 2k`.
pub fn fixed_point_degree_check(r: u64, k: u64) -> bool {
    r <= 2 * k
}

/// Hypothesis check for the uniformity statement at `p >= 37`: whether p is
/// inert in at least one of the nine imaginary quadratic fields of class
/// number one. Only the hypothesis is evaluated; the Galois-theoretic
/// conclusion is cited, not re-derived.
pub fn unif_aut_hypotheses(p: u64) -> Result<GateEntry> {
    check_prime(p, 37)?;
    const DISCRIMINANTS: [i64; 9] = [-3, -4, -7, -8, -11, -19, -43, -67, -163];
    let mut values = Vec::new();
    let mut any_inert = false;
    for d in DISCRIMINANTS {
        let inert = legendre(d, p)? == -1;
        any_inert |= inert;
        values.push((
            format!("inert in Q(sqrt({d}))"),
            if inert { "yes".into() } else { "no".into() },
        ));
    }
    Ok(GateEntry {
        gate: "uniformity-hypotheses".into(),
        values,
        verdict: if any_inert {
            "CM-rational-point hypothesis met: p is inert in a class-number-one \
             imaginary quadratic field"
                .into()
        } else {
            "hypothesis not met at this level".into()
        },
        established: any_inert,
        citation: "a rational exceptional automorphism would hand the quotient curve a \
                   non-CM rational point (conclusion cited, hypothesis computed)"
            .into(),
        provenance: vec!["nine Legendre symbols evaluated exactly here".into()],
    })
}

/// All gates applicable at one level.
pub fn gate_report(p: u64) -> Result<GateReport> {
    check_prime(p, 11)?;
    let mut entries = vec![hyperelliptic_gate(p, Variant::Ns)?];
    if p >= 13 {
        entries.push(hyperelliptic_gate(p, Variant::NsPlus)?);
    }
    entries.push(thm1_contradiction_gate(p)?);
    entries.push(cusp_preservation_gate(p)?);
    entries.push(full_aut_gate(p)?);
    if p >= 37 {
        entries.push(unif_aut_hypotheses(p)?);
    }
    Ok(GateReport { p, entries })
}

// ---------------------------------------------------------------------------
// Verification manifest
// ---------------------------------------------------------------------------

/// One verified claim.
#[derive(Clone, Debug, Serialize)]
pub struct ManifestEntry {
    pub key: String,
    pub expected: String,
    pub actual: String,
    pub pass: bool,
}

/// The full manifest of checks the crate claims to reproduce.
#[derive(Clone, Debug, Serialize)]
pub struct VerificationManifest {
    pub entries: Vec<ManifestEntry>,
    pub passed: usize,
    pub failed: usize,
}

impl std::fmt::Display for VerificationManifest {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        for e in &self.entries {
            writeln!(
                f,
                "{} {:<44} expected {:<24} got {}",
                if e.pass { "PASS" } else { "FAIL" },
                e.key,
                e.expected,
                e.actual
            )?;
        }
        writeln!(f, "{} passed, {} failed", self.passed, self.failed)
    }
}

fn entry(key: &str, expected: impl std::fmt::Display, actual: impl std::fmt::Display) -> ManifestEntry {
    let expected = expected.to_string();
    let actual = actual.to_string();
    let pass = expected == actual;
    ManifestEntry { key: key.to_string(), expected, actual, pass }
}

/// Runs the whole battery of checks and returns the manifest, deterministic
/// across runs.
pub fn verification_manifest() -> Result<VerificationManifest> {
    let mut entries = Vec::new();

    // trace-formula counts from the bundled newform data
    let t121 = count_points_trace(&bundled_records(121).unwrap(), 2, 2)?;
    entries.push(entry("count.trace.xns11.f4", 15, t121));
    let t169 = count_points_trace(&bundled_records(169).unwrap(), 2, 2)?;
    entries.push(entry("count.trace.xns+13.f4", 11, t169));

    // moduli counts and the cross-method identity
    let m11 = count_points_moduli(11, 2, Variant::Ns)?;
    entries.push(entry("count.moduli.xns11.f4", 15, m11.total));
    let mut per_j: Vec<u64> = m11.per_j.iter().map(|c| c.points).collect();
    per_j.sort_unstable();
    entries.push(entry(
        "count.moduli.xns11.f4.breakdown",
        "[0, 2, 2, 11]+0 cusps",
        format!("{:?}+{} cusps", per_j, m11.rational_cusps),
    ));
    let m13 = count_points_moduli(13, 2, Variant::NsPlus)?;
    entries.push(entry("count.moduli.xns+13.f4", 11, m13.total));
    entries.push(entry(
        "count.cross-method",
        "equal",
        if m11.total == t121 && m13.total == t169 { "equal" } else { "differ" },
    ));

    // the genus-1 curve against its CM Jacobian: 3 and 5 are inert in the
    // CM field, so the counts over F_9 and F_25 are forced to (q+1)^2
    let c9 = count_points_moduli(7, 3, Variant::Ns)?;
    entries.push(entry("count.moduli.xns7.f9.cm-forced", 16, c9.total));
    let c25 = count_points_moduli(7, 5, Variant::Ns)?;
    entries.push(entry("count.moduli.xns7.f25.cm-forced", 36, c25.total));

    // Deuring–Eichler mass identity (checked inside the inventory builder)
    for q in [2u64, 3, 5, 7, 13] {
        let inv = crate::ellcurve::supersingular_inventory(q)?;
        entries.push(entry(
            &format!("mass-formula.q{q}"),
            format!("(q-1)/24 = {}", num_rational::Ratio::new(q as i64 - 1, 24)),
            format!("(q-1)/24 = {}", inv.mass),
        ));
    }

    // supersingular subtotal against p(p-1)(q-1)/12
    for p in [11u64, 13, 17] {
        for q in [2u64, 3] {
            let rep = count_points_moduli(p, q, Variant::Ns)?;
            let ss = rep.supersingular_subtotal.unwrap();
            let ok = (ss as u128) * 12 >= (p * (p - 1)) as u128 * (q as u128 - 1);
            entries.push(entry(
                &format!("supersingular-bound.p{p}.q{q}"),
                "subtotal >= p(p-1)(q-1)/12",
                if ok { "subtotal >= p(p-1)(q-1)/12" } else { "violated" },
            ));
        }
    }

    // genus suite
    entries.push(entry("genus.ns.5", 0, genus_ns(5)?));
    entries.push(entry("genus.ns.7", 1, genus_ns(7)?));
    entries.push(entry("genus.ns.11", 4, genus_ns(11)?));
    entries.push(entry("genus.ns.13", 8, genus_ns(13)?));
    entries.push(entry("genus.ns+.7", 0, crate::invariants::genus_ns_plus(7)?));
    entries.push(entry("genus.ns+.11", 1, crate::invariants::genus_ns_plus(11)?));
    entries.push(entry("genus.ns+.13", 3, crate::invariants::genus_ns_plus(13)?));
    let newpart_ok = (5u64..=31)
        .filter(|&p| is_prime(p))
        .map(newpart_dim_check)
        .collect::<Result<Vec<bool>>>()?
        .into_iter()
        .all(|b| b);
    entries.push(entry(
        "genus.newpart-identity.5..31",
        "g_ns(p) = g_0(p^2) - 2 g_0(p)",
        if newpart_ok { "g_ns(p) = g_0(p^2) - 2 g_0(p)" } else { "mismatch" },
    ));
    entries.push(entry("genus.x0.121", 6, genus_x0(121)));
    entries.push(entry("genus.x0.169", 8, genus_x0(169)));

    // class numbers (Dirichlet vs reduced forms is asserted inside)
    entries.push(entry("class-number.7", 1, class_number(7)?));
    entries.push(entry("class-number.11", 1, class_number(11)?));
    entries.push(entry("class-number.23", 3, class_number(23)?));
    let all_match = (7u64..200)
        .filter(|&p| is_prime(p) && p % 4 == 3)
        .all(|p| class_number(p).is_ok());
    entries.push(entry(
        "class-number.dirichlet-vs-forms.below-200",
        "agree with bound h <= (p-1)/2",
        if all_match { "agree with bound h <= (p-1)/2" } else { "diverge" },
    ));

    // lattice verdict
    let mut lattice_ok = true;
    for p in (5u64..=47).filter(|&p| is_prime(p)) {
        let survivors = crate::lattices::cartan_fixed_sublist(p)?;
        lattice_ok &= survivors == vec![crate::lattices::HomothetyLattice::unit()];
    }
    entries.push(entry(
        "lattice.cartan-fixed.5..47",
        "only Z x Z",
        if lattice_ok { "only Z x Z" } else { "extra classes" },
    ));

    // coset-count oracle
    let mut coset_ok = true;
    for p in (5u64..=31).filter(|&p| is_prime(p)) {
        let ctx = crate::gl2::build_cartan(p)?;
        for t in 0..p {
            for d in 1..p {
                let m = crate::gl2::Mat2::new(p, [0, -(d as i64), 1, t as i64]);
                let got = crate::gl2::count_fixed_cosets(&m, crate::gl2::SubgroupTag::Cartan, &ctx)?;
                let want = match crate::gl2::classify(&m)? {
                    crate::gl2::FrobeniusClass::NonSplit { .. } => 2,
                    _ => 0,
                };
                coset_ok &= got == want;
            }
        }
        coset_ok &= crate::gl2::count_fixed_cosets(
            &crate::gl2::Mat2::scalar(p, 1),
            crate::gl2::SubgroupTag::Cartan,
            &ctx,
        )? == p * (p - 1);
    }
    entries.push(entry(
        "coset-count.oracle.5..31",
        "2 / 0 / p(p-1) by class",
        if coset_ok { "2 / 0 / p(p-1) by class" } else { "mismatch" },
    ));

    // gate suite
    let mut hyp_ok = true;
    for p in (11u64..=97).filter(|&p| is_prime(p)) {
        hyp_ok &= hyperelliptic_gate(p, Variant::Ns)?.established;
    }
    for p in (13u64..=97).filter(|&p| is_prime(p)) {
        hyp_ok &= hyperelliptic_gate(p, Variant::NsPlus)?.established;
    }
    entries.push(entry(
        "gate.hyperelliptic.11..97",
        "not hyperelliptic throughout",
        if hyp_ok { "not hyperelliptic throughout" } else { "gap" },
    ));
    entries.push(entry(
        "gate.cusp-preservation.min-prime",
        37,
        minimal_cusp_preservation_prime(97)?,
    ));
    entries.push(entry(
        "gate.full-aut.open-set.11..97",
        "[37, 61, 73, 97]",
        format!("{:?}", full_aut_open_set(97)?),
    ));
    let admissible: Vec<u64> = (3u64..100)
        .filter(|&p| is_prime(p))
        .filter(|&p| [2u64, 4, 6].iter().any(|&w| ray_class_gate(p, w).unwrap().established))
        .collect();
    entries.push(entry("gate.ray-class.admissible", "[3, 5, 7]", format!("{admissible:?}")));
    entries.push(entry("gate.ray-class.max", 7, ray_class_max_admissible()));

    // cusp-divisor suite
    let mut cusp_ok = true;
    for p in [11u64, 13, 17] {
        for l in [2u64, 3, 5, 7] {
            for c in 1..p {
                for c2 in 1..p {
                    if c == c2 {
                        continue;
                    }
                    for u in [
                        crate::cuspdiv::CuspAutomorphism::Identity,
                        crate::cuspdiv::CuspAutomorphism::W,
                    ] {
                        cusp_ok &= crate::cuspdiv::d_l(
                            u,
                            l,
                            &crate::cuspdiv::CuspDivisor::cusp(p, c),
                            &crate::cuspdiv::CuspDivisor::cusp(p, c2),
                        )?
                        .is_zero();
                    }
                }
                cusp_ok &= crate::cuspdiv::disjoint_support_choice(l, c, p).is_ok();
            }
        }
    }
    entries.push(entry(
        "cuspdiv.commutator-and-support.11-13-17",
        "all zero, choices exist",
        if cusp_ok { "all zero, choices exist" } else { "failure" },
    ));

    // robustness: alpha-independence of the moduli totals
    let mut robust = true;
    for (p, q, variant) in [(11u64, 2u64, Variant::Ns), (13, 2, Variant::NsPlus)] {
        let base = count_points_moduli(p, q, variant)?;
        let mut nonsquares = (2..p).filter(|&a| legendre(a as i64, p).unwrap() == -1);
        nonsquares.next();
        let second = nonsquares.next().unwrap();
        let ctx = crate::gl2::CartanContext::build_with_alpha(p, second)?;
        let alt = crate::counting::count_points_moduli_in_context(&ctx, q, variant)?;
        robust &= base.total == alt.total;
    }
    entries.push(entry(
        "robustness.alpha-independence",
        "totals equal",
        if robust { "totals equal" } else { "alpha-dependent" },
    ));

    let passed = entries.iter().filter(|e| e.pass).count();
    let failed = entries.len() - passed;
    Ok(VerificationManifest { entries, passed, failed })
}

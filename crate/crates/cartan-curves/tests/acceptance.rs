//! Acceptance suite: one test per criterion, every comparison exact integer
//! (tolerance zero). Each test prints its own pass line so a `--nocapture`
//! run reads as a checklist.

use num_rational::Ratio;

use cartan_curves::counting::{
    bundled_records, count_points_moduli, count_points_moduli_in_context, count_points_trace,
    hyperelliptic_bound_check, Variant,
};
use cartan_curves::cuspdiv::{
    d_l, disjoint_support_choice, galois_act, hecke_tl, w_act, CuspAutomorphism, CuspDivisor,
};
use cartan_curves::ellcurve::supersingular_inventory;
use cartan_curves::field::{is_prime, legendre};
use cartan_curves::gates::{
    full_aut_open_set, hyperelliptic_gate, minimal_cusp_preservation_prime, ray_class_gate,
    ray_class_max_admissible,
};
use cartan_curves::gl2::{
    build_cartan, classify, count_fixed_cosets, CartanContext, FrobeniusClass, Mat2, SubgroupTag,
};
use cartan_curves::invariants::{
    class_number, class_number_forms_oracle, genus_ns, genus_ns_plus, newpart_dim_check,
};
use cartan_curves::lattices::{cartan_fixed_sublist, HomothetyLattice};

fn pass(name: &str) {
    println!("PASS {name}");
}

#[test]
fn criterion_01_trace_count_level_121() {
    let records = bundled_records(121).expect("bundled level-121 fixture");
    assert_eq!(count_points_trace(&records, 2, 2).unwrap(), 15);
    pass("criterion 1: trace-formula count #X_ns(11)(F_4) = 15");
}

#[test]
fn criterion_02_trace_count_level_169() {
    let records = bundled_records(169).expect("bundled level-169 fixture");
    assert_eq!(count_points_trace(&records, 2, 2).unwrap(), 11);
    pass("criterion 2: trace-formula count #X_ns+(13)(F_4) = 11");
}

#[test]
fn criterion_03_cross_method_and_breakdown() {
    let m11 = count_points_moduli(11, 2, Variant::Ns).unwrap();
    assert_eq!(m11.total, 15);
    assert_eq!(
        m11.total,
        count_points_trace(&bundled_records(121).unwrap(), 2, 2).unwrap()
    );
    let m13 = count_points_moduli(13, 2, Variant::NsPlus).unwrap();
    assert_eq!(m13.total, 11);
    assert_eq!(
        m13.total,
        count_points_trace(&bundled_records(169).unwrap(), 2, 2).unwrap()
    );
    // per-j breakdown of (11, 2, ns): 11 + 2 + 2 + 0, plus 0 cusps
    let mut points: Vec<u64> = m11.per_j.iter().map(|c| c.points).collect();
    points.sort_unstable();
    assert_eq!(points, vec![0, 2, 2, 11]);
    assert_eq!(m11.rational_cusps, 0);
    assert_eq!(m11.noncuspidal, 15);
    pass("criterion 3: cross-method equality and the 11+2+2+0 breakdown");
}

#[test]
fn criterion_04_mass_formula() {
    for q in [2u64, 3, 5, 7, 13] {
        let inv = supersingular_inventory(q).unwrap();
        assert_eq!(inv.mass, Ratio::new(q as i64 - 1, 24), "q={q}");
    }
    pass("criterion 4: Deuring-Eichler mass (q-1)/24 for q in {2,3,5,7,13}");
}

#[test]
fn criterion_05_supersingular_lower_bound() {
    for p in [11u64, 13, 17] {
        for q in [2u64, 3] {
            let report = count_points_moduli(p, q, Variant::Ns).unwrap();
            let ss = report.supersingular_subtotal.unwrap();
            let bound = Ratio::new((p * (p - 1) * (q - 1)) as i64, 12);
            assert!(
                Ratio::from_integer(ss as i64) >= bound,
                "p={p} q={q}: {ss} < {bound}"
            );
        }
    }
    pass("criterion 5: supersingular subtotal >= p(p-1)(q-1)/12 on {11,13,17}x{2,3}");
}

#[test]
fn criterion_06_genus_suite() {
    assert_eq!(genus_ns(5).unwrap(), 0);
    assert_eq!(genus_ns(7).unwrap(), 1);
    assert_eq!(genus_ns(11).unwrap(), 4);
    assert_eq!(genus_ns(13).unwrap(), 8);
    assert_eq!(genus_ns_plus(7).unwrap(), 0);
    assert_eq!(genus_ns_plus(11).unwrap(), 1);
    assert_eq!(genus_ns_plus(13).unwrap(), 3);
    for p in (5u64..=31).filter(|&p| is_prime(p)) {
        assert!(newpart_dim_check(p).unwrap(), "p={p}");
    }
    pass("criterion 6: genus table and new-part identity g_ns(p) = g_0(p^2) - 2 g_0(p)");
}

#[test]
fn criterion_07_class_numbers() {
    for p in (7u64..200).filter(|&p| is_prime(p) && p % 4 == 3) {
        // the Dirichlet-vs-forms agreement and h <= (p-1)/2 are asserted inside
        let h = class_number(p).unwrap();
        assert_eq!(h, class_number_forms_oracle(p), "p={p}");
        assert!(h <= (p - 1) / 2, "p={p}");
    }
    assert_eq!(class_number(7).unwrap(), 1);
    assert_eq!(class_number(11).unwrap(), 1);
    assert_eq!(class_number(23).unwrap(), 3);
    pass("criterion 7: Dirichlet class numbers match the reduced-forms oracle below 200");
}

#[test]
fn criterion_08_lattice_verdict() {
    for p in (5u64..=47).filter(|&p| is_prime(p)) {
        assert_eq!(
            cartan_fixed_sublist(p).unwrap(),
            vec![HomothetyLattice::unit()],
            "p={p}"
        );
    }
    pass("criterion 8: only Z x Z survives the Cartan fixing filter for 5 <= p <= 47");
}

#[test]
fn criterion_09_coset_count_oracle() {
    for p in (5u64..=31).filter(|&p| is_prime(p)) {
        let ctx = build_cartan(p).unwrap();
        // one representative per characteristic polynomial
        for t in 0..p {
            for d in 1..p {
                let m = Mat2::new(p, [0, -(d as i64), 1, t as i64]);
                let brute = count_fixed_cosets(&m, SubgroupTag::Cartan, &ctx).unwrap();
                let closed = match classify(&m).unwrap() {
                    FrobeniusClass::NonSplit { .. } => 2,
                    FrobeniusClass::SplitDistinct(..) | FrobeniusClass::Jordan(_) => 0,
                    FrobeniusClass::Scalar(_) => unreachable!(),
                };
                assert_eq!(brute, closed, "p={p} t={t} d={d}");
            }
        }
        for l in 1..p {
            assert_eq!(
                count_fixed_cosets(&Mat2::scalar(p, l), SubgroupTag::Cartan, &ctx).unwrap(),
                p * (p - 1),
                "p={p} scalar {l}"
            );
        }
    }
    pass("criterion 9: brute-force coset counts match the 2 / 0 / p(p-1) closed form, p <= 31");
}

#[test]
fn criterion_10_gate_suite() {
    for p in (11u64..=97).filter(|&p| is_prime(p)) {
        assert!(
            hyperelliptic_gate(p, Variant::Ns).unwrap().established,
            "ns p={p}"
        );
    }
    for p in (13u64..=97).filter(|&p| is_prime(p)) {
        assert!(
            hyperelliptic_gate(p, Variant::NsPlus).unwrap().established,
            "ns+ p={p}"
        );
    }
    assert_eq!(minimal_cusp_preservation_prime(97).unwrap(), 37);
    assert_eq!(full_aut_open_set(97).unwrap(), vec![37, 61, 73, 97]);
    let admissible: Vec<u64> = (3u64..100)
        .filter(|&p| is_prime(p))
        .filter(|&p| {
            [2u64, 4, 6]
                .iter()
                .any(|&w| ray_class_gate(p, w).unwrap().established)
        })
        .collect();
    assert_eq!(admissible, vec![3, 5, 7]);
    assert_eq!(ray_class_max_admissible(), 7);
    // the two boundary counts certify non-hyperellipticity directly
    assert!(!hyperelliptic_bound_check(15, 2, 2));
    assert!(!hyperelliptic_bound_check(11, 2, 2));
    pass("criterion 10: hyperelliptic gates, minimal cusp-preservation prime 37, open set {37,61,73,97}, ray-class max 7");
}

#[test]
fn criterion_11_cusp_divisor_suite() {
    for p in [11u64, 13, 17] {
        for l in [2u64, 3, 5, 7] {
            for c in 1..p {
                for c2 in 1..p {
                    if c == c2 {
                        continue;
                    }
                    for u in [CuspAutomorphism::Identity, CuspAutomorphism::W] {
                        let d = d_l(
                            u,
                            l,
                            &CuspDivisor::cusp(p, c),
                            &CuspDivisor::cusp(p, c2),
                        )
                        .unwrap();
                        assert!(d.is_zero(), "p={p} l={l} c={c} c'={c2}");
                    }
                }
                disjoint_support_choice(l, c, p).unwrap();
            }
            // degree multiplicativity on a mixed divisor
            let mut dv = CuspDivisor::cusp(p, 1);
            dv.add_cusp(2, 3);
            dv.add_cusp(3, -1);
            assert_eq!(
                hecke_tl(l, &dv).unwrap().degree(),
                (l as i64 + 1) * dv.degree()
            );
        }
    }
    pass("criterion 11: D_l vanishes for u in {id, w}, degrees scale by l+1, disjoint supports exist");
}

#[test]
fn criterion_12_robustness() {
    // moduli totals are independent of the non-square and coset ordering
    for (p, q, variant) in [(11u64, 2u64, Variant::Ns), (13, 2, Variant::NsPlus)] {
        let base = count_points_moduli(p, q, variant).unwrap();
        let mut nonsquares = (2..p).filter(|&a| legendre(a as i64, p).unwrap() == -1);
        let first = nonsquares.next().unwrap();
        let second = nonsquares.next().unwrap();
        assert_ne!(first, second);
        let ctx = CartanContext::build_with_alpha(p, second).unwrap();
        let alt = count_points_moduli_in_context(&ctx, q, variant).unwrap();
        assert_eq!(base.total, alt.total, "p={p}");
        assert_eq!(
            base.per_j.iter().map(|c| c.points).collect::<Vec<_>>(),
            alt.per_j.iter().map(|c| c.points).collect::<Vec<_>>(),
            "p={p}"
        );
    }
    // divisor-model checks are invariant under torsor relabeling
    let p = 13u64;
    for u in 2..p {
        let relabel = |d: &CuspDivisor| galois_act(u, d).unwrap();
        for t in 1..p {
            let d = CuspDivisor::cusp(p, t);
            assert_eq!(
                relabel(&hecke_tl(3, &d).unwrap()),
                hecke_tl(3, &relabel(&d)).unwrap()
            );
            assert_eq!(relabel(&w_act(&d)), w_act(&relabel(&d)));
        }
        for aut in [CuspAutomorphism::Identity, CuspAutomorphism::W] {
            let dc = relabel(&CuspDivisor::cusp(p, 1));
            let dc2 = relabel(&CuspDivisor::cusp(p, 2));
            assert!(d_l(aut, 3, &dc, &dc2).unwrap().is_zero());
        }
    }
    pass("criterion 12: alpha/ordering independence and torsor-relabeling invariance");
}

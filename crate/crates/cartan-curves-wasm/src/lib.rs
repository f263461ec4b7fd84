//! Browser bindings for the interactive explorer page: curve invariants and
//! theorem gates per level, point counts over `F_{q^2}` by both engines, and
//! the Hecke action on cusps. Every function returns a JSON string the page
//! renders directly; errors surface as rejected values carrying the
//! library's error text.
//!
//! The `*_json` functions are thin `wasm_bindgen` exports over string-error
//! implementations, so the whole crate builds and tests on native targets
//! too (`JsValue` cannot be constructed off-wasm).

use wasm_bindgen::prelude::*;

use cartan_curves::counting::{self, Variant};
use cartan_curves::cuspdiv::{self, CuspDivisor};
use cartan_curves::gates;
use cartan_curves::invariants;
use cartan_curves::lattices;

fn parse_variant(s: &str) -> Result<Variant, String> {
    match s {
        "ns" => Ok(Variant::Ns),
        "ns+" => Ok(Variant::NsPlus),
        other => Err(format!("unknown variant '{other}'")),
    }
}

fn level_report_impl(p: u32) -> Result<String, String> {
    let p = p as u64;
    let inv = invariants::curve_invariants(p).map_err(|e| e.to_string())?;
    let gates = if p >= 11 {
        Some(gates::gate_report(p).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let lattice = if inv.genus_ns >= 2 {
        Some(lattices::normalizer_verdict(p).map_err(|e| e.to_string())?)
    } else {
        None
    };
    let value = serde_json::json!({
        "invariants": inv,
        "gates": gates,
        "lattice": lattice,
    });
    Ok(value.to_string())
}

fn point_count_impl(p: u32, q: u32, variant: &str) -> Result<String, String> {
    let (p, q) = (p as u64, q as u64);
    let variant = parse_variant(variant)?;
    let moduli = counting::count_points_moduli(p, q, variant).map_err(|e| e.to_string())?;
    let trace = counting::bundled_records(p * p)
        .filter(|records| {
            let expected = match variant {
                Variant::Ns => invariants::genus_ns(p),
                Variant::NsPlus => invariants::genus_ns_plus(p),
            };
            matches!(expected, Ok(d) if counting::validate_cover(records, d).is_ok())
        })
        .map(|records| counting::count_points_trace(&records, q, 2))
        .transpose()
        .map_err(|e| e.to_string())?;
    let value = serde_json::json!({
        "moduli": moduli,
        "trace_total": trace,
    });
    Ok(value.to_string())
}

fn cusp_action_impl(p: u32, l: u32) -> Result<String, String> {
    let (p, l) = (p as u64, l as u64);
    let fail = |e: cartan_curves::Error| e.to_string();
    let mut rows = Vec::new();
    for t in 1..p {
        let td = cuspdiv::hecke_tl(l, &CuspDivisor::cusp(p, t)).map_err(fail)?;
        let disjoint = if p >= 11 && l <= 7 {
            Some(cuspdiv::disjoint_support_choice(l, t, p).map_err(fail)?)
        } else {
            None
        };
        rows.push(serde_json::json!({
            "cusp": t,
            "image": td.to_string(),
            "degree": td.degree(),
            "disjoint_partner": disjoint,
        }));
    }
    let mut commutators_vanish = true;
    for c in 1..p {
        for c2 in 1..p {
            if c == c2 {
                continue;
            }
            for u in [
                cuspdiv::CuspAutomorphism::Identity,
                cuspdiv::CuspAutomorphism::W,
            ] {
                commutators_vanish &= cuspdiv::d_l(
                    u,
                    l,
                    &CuspDivisor::cusp(p, c),
                    &CuspDivisor::cusp(p, c2),
                )
                .map_err(fail)?
                .is_zero();
            }
        }
    }
    let value = serde_json::json!({
        "p": p,
        "l": l,
        "rows": rows,
        "operator_identity": cuspdiv::eichler_shimura_shape_check(l, p).map_err(fail)?,
        "commutators_vanish": commutators_vanish,
    });
    Ok(value.to_string())
}

/// Invariants, gate verdicts and the lattice verdict for one level.
#[wasm_bindgen]
pub fn level_report_json(p: u32) -> Result<String, JsValue> {
    level_report_impl(p).map_err(|e| JsValue::from_str(&e))
}

/// Point count of `X_ns(p)` or `X_ns+(p)` over `F_{q^2}` by the moduli
/// engine, with the trace-engine total alongside when the bundled newform
/// data covers the level.
#[wasm_bindgen]
pub fn point_count_json(p: u32, q: u32, variant: &str) -> Result<String, JsValue> {
    point_count_impl(p, q, variant).map_err(|e| JsValue::from_str(&e))
}

/// The Hecke action table on the cusp torsor, the commutator check, and the
/// least disjoint-support partner per cusp.
#[wasm_bindgen]
pub fn cusp_action_json(p: u32, l: u32) -> Result<String, JsValue> {
    cusp_action_impl(p, l).map_err(|e| JsValue::from_str(&e))
}

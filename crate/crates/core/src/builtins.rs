//! The stock of named algebras the workbench is exercised on: the linear
//! Sugihara monoids `S2`..`S8`, the eight-element nonlinear example `E`
//! inside `S5 x S4`, its bounded expansion `E_bot`, and the enriched
//! negative cone `E_neg`.

use crate::algebra::{
    direct_product, ensure_valid, subalgebra, with_bounds, AlgebraParts, FiniteAlgebra, Profile,
};
use crate::order::FinitePoset;
use crate::subset::Subset;
use crate::twist::twist_down;
use crate::{Error, Result};

pub const BUILTIN_NAMES: &[&str] = &[
    "S2", "S3", "S4", "S5", "S6", "S7", "S8", "E", "E_bot", "E_neg",
];

/// Returns the named builtin, fully validated.
pub fn builtin(name: &str) -> Result<FiniteAlgebra> {
    match name {
        "S2" => linear_sugihara(2),
        "S3" => linear_sugihara(3),
        "S4" => linear_sugihara(4),
        "S5" => linear_sugihara(5),
        "S6" => linear_sugihara(6),
        "S7" => linear_sugihara(7),
        "S8" => linear_sugihara(8),
        "E" => nonlinear_e(),
        "E_bot" => {
            let mut a = with_bounds(&nonlinear_e()?)?;
            a.name = "E_bot".into();
            Ok(a)
        }
        "E_neg" => enriched_cone_of_e(),
        _ => Err(Error::UnknownBuiltin(name.to_string())),
    }
}

/// The n-element linear Sugihara monoid: integers `-m..m` without 0 when n
/// is even, with |.|-dominant multiplication and the case-split residual.
pub fn linear_sugihara(n: usize) -> Result<FiniteAlgebra> {
    assert!(n >= 2);
    let m = (n / 2) as i64;
    let carrier: Vec<i64> = if n % 2 == 1 {
        (-m..=m).collect()
    } else {
        (-m..=m).filter(|&x| x != 0).collect()
    };
    let idx = |v: i64| carrier.iter().position(|&w| w == v).unwrap();
    let names: Vec<String> = carrier.iter().map(|v| v.to_string()).collect();
    let poset = FinitePoset::from_leq(names, |a, b| carrier[a] <= carrier[b])?;

    let mult_val = |x: i64, y: i64| -> i64 {
        if x.abs() > y.abs() {
            x
        } else if x.abs() < y.abs() {
            y
        } else {
            x.min(y)
        }
    };
    let arrow_val = |x: i64, y: i64| -> i64 {
        if x <= y {
            (-x).max(y)
        } else {
            (-x).min(y)
        }
    };
    let k = carrier.len();
    let mult: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| idx(mult_val(carrier[i], carrier[j])))
                .collect()
        })
        .collect();
    let arrow: Vec<Vec<usize>> = (0..k)
        .map(|i| {
            (0..k)
                .map(|j| idx(arrow_val(carrier[i], carrier[j])))
                .collect()
        })
        .collect();
    let neg: Vec<usize> = (0..k).map(|i| idx(-carrier[i])).collect();
    let unit = if n % 2 == 1 { idx(0) } else { idx(1) };

    let parts = AlgebraParts {
        mult: Some(mult),
        arrow: Some(arrow),
        unit: Some(unit),
        neg: Some(neg),
        ..Default::default()
    };
    let a = FiniteAlgebra::assemble(format!("S{n}"), poset, Profile::Sugihara, parts)?;
    ensure_valid(&a)?;
    Ok(a)
}

/// The eight listed pairs inside `S5 x S4`.
const E_PAIRS: [(i64, i64); 8] = [
    (-2, -2),
    (-1, -1),
    (-1, 1),
    (0, -1),
    (0, 1),
    (1, -1),
    (1, 1),
    (2, 2),
];

fn nonlinear_e() -> Result<FiniteAlgebra> {
    let s5 = linear_sugihara(5)?;
    let s4 = linear_sugihara(4)?;
    let prod = direct_product(&s5, &s4)?;
    let keep = Subset::from_indices(E_PAIRS.iter().map(|(x, y)| {
        let name = format!("({x},{y})");
        prod.poset
            .index_of(&name)
            .expect("pair exists in the product")
    }));
    let mut e = subalgebra(&prod, keep)?;
    e.name = "E".into();
    ensure_valid(&e)?;
    Ok(e)
}

/// The enriched negative cone of `E` with its five elements renamed
/// `a < b < {c,f} < t` and the designated constant `f`.
fn enriched_cone_of_e() -> Result<FiniteAlgebra> {
    let cone = twist_down(&builtin("E")?)?;
    let letters = ["a", "b", "c", "f", "t"];
    let expected = ["(-2,-2)", "(-1,-1)", "(-1,1)", "(0,-1)", "(0,1)"];
    assert_eq!(cone.poset.names(), &expected.map(String::from));
    let renamed = cone.rename("E_neg", letters.iter().map(|s| s.to_string()).collect())?;
    ensure_valid(&renamed)?;
    Ok(renamed)
}

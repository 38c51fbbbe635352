//! DOT output for Hasse diagrams: covers only (the transitive reduction),
//! drawn bottom to top, with designated points double-bordered. Relevant
//! spaces append their ternary relation as a comment legend.

use rmwb_core::order::FinitePoset;
use rmwb_core::subset::Subset;

use crate::format::Structure;

fn hasse(out: &mut String, poset: &FinitePoset, doubled: Subset) {
    for i in 0..poset.n() {
        if doubled.contains(i) {
            out.push_str(&format!("  \"{}\" [peripheries=2];\n", poset.name(i)));
        } else {
            out.push_str(&format!("  \"{}\";\n", poset.name(i)));
        }
    }
    for (lo, hi) in poset.covers() {
        out.push_str(&format!(
            "  \"{}\" -> \"{}\";\n",
            poset.name(lo),
            poset.name(hi)
        ));
    }
}

pub fn render(s: &Structure) -> String {
    let mut out = String::new();
    out.push_str(&format!("digraph \"{}\" {{\n", s.name()));
    out.push_str("  rankdir=BT;\n");
    match s {
        Structure::Algebra(a) => hasse(&mut out, &a.poset, Subset::EMPTY),
        Structure::Space(x) => hasse(&mut out, &x.poset, x.d),
        Structure::Relevant(r) => {
            let fixed = Subset::from_indices((0..r.n()).filter(|&p| r.prime[p] == p));
            hasse(&mut out, &r.poset, fixed);
            out.push_str("  // R legend\n");
            for (x, y, z) in r.triples() {
                out.push_str(&format!(
                    "  // R: \"{}\" * \"{}\" <= \"{}\"\n",
                    r.poset.name(x),
                    r.poset.name(y),
                    r.poset.name(z)
                ));
            }
        }
    }
    out.push_str("}\n");
    out
}

//! Cross-module property sweeps. Everything here is exhaustive over finite
//! generators (builtins, their derived structures, and all small models
//! produced by enumeration), not sampled.

use rmwb_core::algebra::{
    lattice_tables, prime_filters, validate, with_bounds, AlgebraParts, FiniteAlgebra, Profile,
};
use rmwb_core::builtins::builtin;
use rmwb_core::esakia::{dual_hom, hom_of_space_map, unit_iso};
use rmwb_core::hom::{enumerate_homs, find_isomorphism, Morphism, Signature};
use rmwb_core::natural::{coded_map, hom_dual, plus_algebra};
use rmwb_core::order::{posets_up_to_relabelling, FinitePoset};
use rmwb_core::subset::Subset;
use rmwb_core::twist::{nucleus_twist, twist_down, twist_iso, twist_up};
use rmwb_core::Result;

fn crl_builtins() -> Vec<FiniteAlgebra> {
    let mut out: Vec<FiniteAlgebra> = ["S2", "S3", "S4", "S5", "S6", "S7", "S8", "E"]
        .iter()
        .map(|n| builtin(n).unwrap())
        .collect();
    out.push(builtin("E_bot").unwrap());
    for n in ["S2", "S4", "S7", "E"] {
        out.push(twist_down(&builtin(n).unwrap()).unwrap());
    }
    out.push(builtin("E_neg").unwrap());
    out
}

#[test]
fn residuated_quasi_identities_hold_on_all_builtins() {
    for a in crl_builtins() {
        let n = a.n();
        let t = a.unit_elem();
        for x in 0..n {
            for y in 0..n {
                assert!(a.leq(a.mult_of(x, a.arrow_of(x, y)), y));
                for z in 0..n {
                    assert_eq!(
                        a.mult_of(x, a.join_of(y, z)),
                        a.join_of(a.mult_of(x, y), a.mult_of(x, z))
                    );
                    assert_eq!(
                        a.arrow_of(x, a.meet_of(y, z)),
                        a.meet_of(a.arrow_of(x, y), a.arrow_of(x, z))
                    );
                    assert_eq!(
                        a.arrow_of(a.join_of(x, y), z),
                        a.meet_of(a.arrow_of(x, z), a.arrow_of(y, z))
                    );
                    assert_eq!(
                        a.arrow_of(a.mult_of(x, y), z),
                        a.arrow_of(x, a.arrow_of(y, z))
                    );
                    // semilinear forms
                    assert_eq!(
                        a.mult_of(x, a.meet_of(y, z)),
                        a.meet_of(a.mult_of(x, y), a.mult_of(x, z))
                    );
                    assert_eq!(
                        a.arrow_of(x, a.join_of(y, z)),
                        a.join_of(a.arrow_of(x, y), a.arrow_of(x, z))
                    );
                    assert_eq!(
                        a.arrow_of(a.meet_of(x, y), z),
                        a.join_of(a.arrow_of(x, z), a.arrow_of(y, z))
                    );
                }
                if a.leq(x, y) {
                    for c in 0..n {
                        assert!(a.leq(a.mult_of(x, c), a.mult_of(y, c)));
                        assert!(a.leq(a.arrow_of(c, x), a.arrow_of(c, y)));
                        assert!(a.leq(a.arrow_of(y, c), a.arrow_of(x, c)));
                    }
                }
                assert!(a.leq(t, a.join_of(a.arrow_of(x, y), a.arrow_of(y, x))));
            }
        }
    }
}

#[test]
fn stored_residuals_equal_the_brute_force_maximum() {
    for a in crl_builtins() {
        let mult: Vec<Vec<usize>> = (0..a.n())
            .map(|i| (0..a.n()).map(|j| a.mult_of(i, j)).collect())
            .collect();
        let brute = rmwb_core::algebra::residuated_arrow(&a.poset, &mult).unwrap();
        for x in 0..a.n() {
            for y in 0..a.n() {
                assert_eq!(a.arrow_of(x, y), brute[x][y], "{} at ({x},{y})", a.name);
            }
        }
    }
}

/// All algebras with Boolean constant on at most `max` elements, one per
/// isomorphism class. Every finite distributive lattice is the up-set
/// lattice of a poset with fewer points, so sweeping posets is exhaustive.
fn small_boolean_constant_algebras(max: usize) -> Vec<FiniteAlgebra> {
    let mut reps: Vec<FiniteAlgebra> = Vec::new();
    for pts in 0..max {
        for p in posets_up_to_relabelling(pts) {
            let members = p.up_sets();
            if members.len() > max {
                continue;
            }
            let names: Vec<String> = members.iter().map(|&m| p.render_subset(m)).collect();
            let poset =
                FinitePoset::from_leq(names, |i, j| members[i].is_subset_of(members[j])).unwrap();
            if lattice_tables(&poset).is_err() {
                continue;
            }
            let top = poset.greatest().unwrap();
            let Ok(alg) = FiniteAlgebra::assemble(
                "cand",
                poset,
                Profile::RelStone,
                AlgebraParts {
                    unit: Some(top),
                    ..Default::default()
                },
            ) else {
                continue;
            };
            if !validate(&alg).ok() {
                continue;
            }
            for f in 0..alg.n() {
                let mut cand = alg.clone();
                cand.f = Some(f);
                cand.profile = Profile::Brsa;
                cand.name = format!("B{}f{}", cand.n(), f);
                if !validate(&cand).ok() {
                    continue;
                }
                if reps
                    .iter()
                    .all(|r| find_isomorphism(r, &cand).unwrap().is_none())
                {
                    reps.push(cand);
                }
            }
        }
    }
    reps
}

#[test]
fn join_reaches_the_unit_iff_arrows_collapse() {
    // on every relative Stone algebra in reach: a∨b = t iff a→b = b and
    // b→a = a
    let mut algebras = small_boolean_constant_algebras(6);
    algebras.push(builtin("E_neg").unwrap());
    for a in algebras {
        let t = a.unit_elem();
        for x in 0..a.n() {
            for y in 0..a.n() {
                let joined = a.join_of(x, y) == t;
                let collapsed = a.arrow_of(x, y) == y && a.arrow_of(y, x) == x;
                assert_eq!(joined, collapsed, "{} at ({x},{y})", a.name);
            }
        }
    }
}

#[test]
fn both_twists_are_isomorphic_on_every_small_algebra() {
    let reps = small_boolean_constant_algebras(8);
    // sanity: the sweep finds a healthy population
    assert!(reps.len() >= 30, "only {} algebras found", reps.len());
    for b in &reps {
        let iso = twist_iso(b).unwrap_or_else(|e| panic!("{}: {e}", b.name));
        assert!(iso.is_bijective());
        // carriers coincide exactly when the constant is the unit
        let sigma = nucleus_twist(b).unwrap();
        let up = twist_up(b).unwrap();
        assert_eq!(sigma.n(), up.n());
    }
}

#[test]
fn the_whole_square_closes_on_every_small_model() {
    use rmwb_core::esakia::{counit_iso, dual_space, find_space_isomorphism};
    use rmwb_core::natural::{coded_map_iso, filter_iso, plus_algebra, unit_filter_iso};
    use rmwb_core::relevant::{
        filter_mult, reflection_counit, reflection_iso, relevant_algebra, urquhart_dual,
    };

    for b in small_boolean_constant_algebras(6) {
        // algebra side
        let monoid = twist_up(&b).unwrap();
        let back = twist_down(&monoid).unwrap();
        assert!(find_isomorphism(&b, &back).unwrap().is_some(), "{}", b.name);
        twist_iso(&b).unwrap();

        // filter duality side
        let space = dual_space(&b).unwrap();
        unit_iso(&b).unwrap();
        counit_iso(&space).unwrap();

        // hom duality side
        filter_iso(&monoid).unwrap();
        unit_filter_iso(&monoid).unwrap();
        let dw = hom_dual(&monoid).unwrap();
        coded_map_iso(&dw.space).unwrap();
        let plus = plus_algebra(&dw.space).unwrap();
        assert!(
            find_isomorphism(&monoid, &plus.algebra).unwrap().is_some(),
            "{}",
            b.name
        );
        let dw2 = hom_dual(&plus.algebra).unwrap();
        assert!(
            find_space_isomorphism(&dw.space, &dw2.space)
                .unwrap()
                .is_some(),
            "{}",
            b.name
        );

        // relevant side, on the bounded expansion
        if b.n() <= 5 {
            let bounded = with_bounds(&b).unwrap();
            let monoid_b = twist_up(&bounded).unwrap();
            let urq = urquhart_dual(&monoid_b).unwrap();
            reflection_iso(&monoid_b).unwrap();
            reflection_counit(&urq).unwrap();
            let back = relevant_algebra(&urq).unwrap();
            assert!(
                find_isomorphism(&monoid_b, &back).unwrap().is_some(),
                "{}",
                b.name
            );
            let filters = prime_filters(&monoid_b, true);
            for &x in &filters.members {
                for &y in &filters.members {
                    filter_mult(&monoid_b, x, y).unwrap();
                }
            }
        }
    }
}

#[test]
fn unit_evaluation_is_natural_in_the_algebra() {
    // σ_B ∘ h = (h_*)^* ∘ σ_A for every morphism between the small cones
    let a = builtin("E_neg").unwrap();
    let b = twist_down(&builtin("S3").unwrap()).unwrap();
    let sig = Signature::of_profile(Profile::Brsa);
    let mut homs = enumerate_homs(&a, &b, sig).unwrap();
    homs.push(Morphism::identity(&a));
    for h in homs {
        let sigma_a = unit_iso(&h.source).unwrap();
        let sigma_b = unit_iso(&h.target).unwrap();
        let double = hom_of_space_map(&dual_hom(&h).unwrap()).unwrap();
        for x in 0..h.source.n() {
            let left = sigma_b.map[h.map[x]];
            let right = double.map[sigma_a.map[x]];
            assert_eq!(
                sigma_b.target.name_of(left),
                double.target.name_of(right),
                "naturality fails at {}",
                h.source.name_of(x)
            );
        }
    }
}

#[test]
fn preimages_under_the_nucleus_are_prime_or_improper() {
    for name in ["S2", "S4", "S6", "S8", "E"] {
        let bga = twist_down(&with_bounds(&builtin(name).unwrap()).unwrap()).unwrap();
        let nuc = bga.nucleus_of_f().unwrap();
        let filters = prime_filters(&bga, false);
        let generalized = prime_filters(&bga, true);
        for &x in &filters.members {
            let pre = Subset::from_indices((0..bga.n()).filter(|&a| x.contains(nuc[a])));
            assert!(
                generalized.index_of(pre).is_some(),
                "{name}: preimage is not prime or improper"
            );
            // strict inclusions force accessibility
            for &y in &filters.members {
                if x != y && x.is_subset_of(y) {
                    assert!(
                        pre.is_subset_of(y),
                        "{name}: strict inclusion not accessible"
                    );
                }
            }
        }
    }
}

#[test]
fn designated_points_are_minimal_in_every_kleene_space() {
    for name in ["S2", "S3", "S4", "S5", "E", "E_bot"] {
        let dw = hom_dual(&builtin(name).unwrap()).unwrap();
        let minimal = dw.space.poset.minimal_elements();
        for d in dw.space.d.iter() {
            assert!(minimal.contains(d), "{name}");
        }
    }
}

#[test]
fn coded_map_algebra_laws() {
    // on spaces of at most five points: involution swaps the coordinates,
    // meet intersects/joins them, join does the reverse
    for name in ["S2", "S3", "S4", "S5", "E", "E_bot"] {
        let dw = hom_dual(&builtin(name).unwrap()).unwrap();
        let x = &dw.space;
        if x.n() > 5 {
            continue;
        }
        let full = Subset::full(x.n());
        let ups = x.poset.up_sets();
        let valid: Vec<(Subset, Subset, Vec<usize>)> = ups
            .iter()
            .flat_map(|&u| ups.iter().map(move |&v| (u, v)))
            .filter(|&(u, v)| u.union(v) == full)
            .filter_map(|(u, v)| {
                let c = coded_map(x, u, v).unwrap();
                c.is_morphism.then_some((u, v, c.values))
            })
            .collect();
        for (u1, v1, c1) in &valid {
            let flipped: Vec<usize> = c1.iter().map(|&v| 2 - v).collect();
            assert_eq!(flipped, coded_map(x, *v1, *u1).unwrap().values);
            for (u2, v2, c2) in &valid {
                let met: Vec<usize> = c1.iter().zip(c2).map(|(&a, &b)| a.min(b)).collect();
                assert_eq!(
                    met,
                    coded_map(x, u1.inter(*u2), v1.union(*v2)).unwrap().values
                );
                let joined: Vec<usize> = c1.iter().zip(c2).map(|(&a, &b)| a.max(b)).collect();
                assert_eq!(
                    joined,
                    coded_map(x, u1.union(*u2), v1.inter(*v2)).unwrap().values
                );
            }
        }
    }
}

#[test]
fn every_space_morphism_decomposes_as_a_coded_map() {
    for name in ["S3", "S4", "E", "E_bot"] {
        let dw = hom_dual(&builtin(name).unwrap()).unwrap();
        let x = &dw.space;
        let n = x.n();
        // sweep all 3^n value vectors
        let mut vals = vec![0usize; n];
        loop {
            let is_morphism = {
                let plus = plus_algebra(x).unwrap();
                plus.vectors.binary_search(&vals).is_ok()
            };
            // recover the pair and re-encode
            if is_morphism {
                let u = Subset::from_indices((0..n).filter(|&p| vals[p] >= 1));
                let v = Subset::from_indices((0..n).filter(|&p| vals[p] <= 1));
                let c = coded_map(x, u, v).unwrap();
                assert!(c.is_morphism);
                assert_eq!(c.values, vals);
            }
            let mut i = 0;
            while i < n {
                vals[i] += 1;
                if vals[i] < 3 {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == n {
                break;
            }
        }
    }
}

#[test]
fn values_are_shareable_across_threads() {
    fn assert_send_sync<T: Send + Sync>() {}
    assert_send_sync::<FiniteAlgebra>();
    assert_send_sync::<rmwb_core::esakia::StructuredSpace>();
    assert_send_sync::<rmwb_core::relevant::RelevantSpace>();
    assert_send_sync::<rmwb_core::hom::Morphism>();

    // hom enumeration is pure: running it concurrently returns the same
    // canonical order
    let handles: Vec<_> = (0..4)
        .map(|_| {
            std::thread::spawn(|| -> Result<Vec<Vec<usize>>> {
                let e = builtin("E")?;
                Ok(hom_dual(&e)?.homs)
            })
        })
        .collect();
    let results: Vec<_> = handles
        .into_iter()
        .map(|h| h.join().unwrap().unwrap())
        .collect();
    for w in results.windows(2) {
        assert_eq!(w[0], w[1]);
    }
}

//! Natural duality for the involutive-lattice reducts: hom-duals into the
//! three-element algebra, Sugihara spaces, the encoding of space morphisms
//! by pairs of up-sets, and the transported monoid structure on them.
//!
//! Points of a hom-dual are stored as plain value vectors over the indices
//! `0,1,2` of the three-element target (standing for the values `-1,0,1`):
//! on a finite carrier the subbasis topology is discrete, so nothing more is
//! needed.

use crate::algebra::{ensure_valid, prime_filters, AlgebraParts, FiniteAlgebra, Profile, Table};
use crate::esakia::{
    dual_algebra, dual_hom, dual_space, ensure_valid_space, Flavor, SpaceMap, StructuredSpace,
};
use crate::hom::{enumerate_homs, Morphism, Signature};
use crate::order::{FinitePoset, SubsetFamily};
use crate::subset::Subset;
use crate::twist::{lift_hom, twist_down, twist_up, PairCarrier, PairKind};
use crate::{Error, Result};

/// In the three-element carrier, index 0 is the least lattice element, 1 the
/// middle (which is the *top* of the space order), 2 the greatest.
const MID: usize = 1;

/// The three-element involutive lattice (a chain with the order-reversing
/// involution).
pub fn ilattice_alter_ego() -> FiniteAlgebra {
    let poset =
        FinitePoset::from_covers(vec!["-1".into(), "0".into(), "1".into()], &[(0, 1), (1, 2)])
            .unwrap();
    FiniteAlgebra::assemble(
        "L3",
        poset,
        Profile::ILattice,
        AlgebraParts {
            neg: Some(vec![2, 1, 0]),
            ..Default::default()
        },
    )
    .expect("the three-element involutive lattice assembles")
}

/// The three-element Kleene algebra: the involutive chain with its bounds
/// in the signature.
pub fn kleene_alter_ego() -> FiniteAlgebra {
    let poset =
        FinitePoset::from_covers(vec!["-1".into(), "0".into(), "1".into()], &[(0, 1), (1, 2)])
            .unwrap();
    FiniteAlgebra::assemble(
        "K3",
        poset,
        Profile::Kleene,
        AlgebraParts {
            neg: Some(vec![2, 1, 0]),
            bot: Some(0),
            top: Some(2),
            ..Default::default()
        },
    )
    .expect("the three-element Kleene algebra assembles")
}

/// The space side of the three-element structure: order `-1 < 0 > 1`, both
/// endpoints designated, `Q` relating everything except `-1` with `1`, and
/// the middle element as top in the pointed version.
pub fn alter_ego_space(pointed: bool) -> StructuredSpace {
    let poset =
        FinitePoset::from_covers(vec!["-1".into(), "0".into(), "1".into()], &[(0, 1), (2, 1)])
            .unwrap();
    let q: Vec<Subset> = (0..3)
        .map(|i| Subset::from_indices((0..3).filter(|&j| !matches!((i, j), (0, 2) | (2, 0)))))
        .collect();
    let x = StructuredSpace {
        name: if pointed { "L3~".into() } else { "K3~".into() },
        poset,
        d: Subset::from_indices([0, 2]),
        top: if pointed { Some(MID) } else { None },
        q: Some(q),
        flavor: if pointed {
            Flavor::PointedKleene
        } else {
            Flavor::Kleene
        },
    };
    ensure_valid_space(&x).expect("the alter ego space validates");
    x
}

fn require_sugihara(a: &FiniteAlgebra) -> Result<()> {
    if !a.profile.is_sugihara() {
        return Err(Error::ProfileMismatch {
            expected: "sugihara or sugihara_bounded".into(),
            found: a.profile.as_str().into(),
        });
    }
    Ok(())
}

/// The hom-dual of a Sugihara monoid together with the value vectors of its
/// points, in canonical (lexicographic) order.
#[derive(Debug, Clone)]
pub struct HomDual {
    pub space: StructuredSpace,
    pub homs: Vec<Vec<usize>>,
}

/// Space order on the three values: `v ≤ w` iff `v = w` or `w` is the
/// middle element.
fn space_leq(v: usize, w: usize) -> bool {
    v == w || w == MID
}

fn space_q(v: usize, w: usize) -> bool {
    !matches!((v, w), (0, 2) | (2, 0))
}

/// The hom-dual: all involutive-lattice morphisms into the three-element
/// algebra (Kleene morphisms in the bounded case), ordered pointwise by the
/// space order, with the zero-free maps designated. Unbounded algebras get
/// a pointed space (the constant middle map is the top); bounded ones an
/// unpointed space. `Q` is stored pointwise and checked against
/// comparability by the space validator.
pub fn hom_dual(a: &FiniteAlgebra) -> Result<HomDual> {
    require_sugihara(a)?;
    let bounded = a.profile == Profile::SugiharaBounded;
    let (target, sig) = if bounded {
        (kleene_alter_ego(), Signature::kleene())
    } else {
        (ilattice_alter_ego(), Signature::ilattice())
    };
    let homs: Vec<Vec<usize>> = enumerate_homs(a, &target, sig)?
        .into_iter()
        .map(|m| m.map)
        .collect();
    let t = a.unit_elem();
    for h in &homs {
        assert!(h[t] >= MID, "the unit never maps to the least value");
    }
    let k = homs.len();
    let names: Vec<String> = (0..k).map(|i| format!("h{i}")).collect();
    let poset = FinitePoset::from_leq(names, |h, g| {
        (0..a.n()).all(|e| space_leq(homs[h][e], homs[g][e]))
    })?;
    let d = Subset::from_indices((0..k).filter(|&h| homs[h].iter().all(|&v| v != MID)));
    let top = if bounded {
        None
    } else {
        Some(
            homs.iter()
                .position(|h| h.iter().all(|&v| v == MID))
                .expect("the constant middle map is a morphism in the unbounded signature"),
        )
    };
    let q: Vec<Subset> = (0..k)
        .map(|h| {
            Subset::from_indices(
                (0..k).filter(|&g| (0..a.n()).all(|e| space_q(homs[h][e], homs[g][e]))),
            )
        })
        .collect();
    let space = StructuredSpace {
        name: format!("{}_dw", a.name),
        poset,
        d,
        top,
        q: Some(q),
        flavor: if bounded {
            Flavor::SugiharaUnpointed
        } else {
            Flavor::SugiharaPointed
        },
    };
    ensure_valid_space(&space)?;
    Ok(HomDual { space, homs })
}

fn cone_to_source_indices(a: &FiniteAlgebra, cone: &FiniteAlgebra) -> Vec<usize> {
    (0..cone.n())
        .map(|i| {
            a.poset
                .index_of(cone.name_of(i))
                .expect("cone keeps element names")
        })
        .collect()
}

/// The isomorphism of spaces sending a hom-dual point to the prime filter
/// of the enriched negative cone it induces: `h ↦ h⁻¹[{0,1}] ∩ A⁻`.
pub fn filter_iso(a: &FiniteAlgebra) -> Result<SpaceMap> {
    let dw = hom_dual(a)?;
    let down = twist_down(a)?;
    let target = dual_space(&down)?;
    let generalized = down.profile == Profile::Brsa;
    let filters = prime_filters(&down, generalized);
    let embed = cone_to_source_indices(a, &down);
    let map: Vec<usize> = dw
        .homs
        .iter()
        .map(|h| {
            let mask = Subset::from_indices((0..down.n()).filter(|&i| h[embed[i]] >= MID));
            filters.index_of(mask).ok_or_else(|| Error::Validation {
                subject: a.name.clone(),
                law: "hom induces a prime filter of the cone".into(),
                witness: down.poset.render_subset(mask),
            })
        })
        .collect::<Result<_>>()?;
    let iso = SpaceMap::new(dw.space, target, map)?;
    iso.validate_iso()?;
    Ok(iso)
}

/// The order isomorphism from the hom-dual onto the prime filters
/// containing the unit, `h ↦ h⁻¹[{0,1}]`, returned as the filter family
/// plus the point-to-filter assignment.
#[derive(Debug, Clone)]
pub struct UnitFilterWitness {
    pub family: SubsetFamily,
    pub map: Vec<usize>,
}

pub fn unit_filter_iso(a: &FiniteAlgebra) -> Result<UnitFilterWitness> {
    require_sugihara(a)?;
    let dw = hom_dual(a)?;
    let family = unit_filters(a);
    let map: Vec<usize> = dw
        .homs
        .iter()
        .map(|h| {
            let mask = Subset::from_indices((0..a.n()).filter(|&e| h[e] >= MID));
            family.index_of(mask).ok_or_else(|| Error::Validation {
                subject: a.name.clone(),
                law: "hom induces a prime filter containing the unit".into(),
                witness: a.poset.render_subset(mask),
            })
        })
        .collect::<Result<_>>()?;
    // order isomorphism, both directions
    let mut seen = vec![false; family.len()];
    for &v in &map {
        seen[v] = true;
    }
    if !seen.iter().all(|&s| s) || map.len() != family.len() {
        return Err(Error::MorphismInvalid {
            law: "bijectivity".into(),
            witness: "-".into(),
        });
    }
    for i in 0..map.len() {
        for j in 0..map.len() {
            let le_space = dw.space.poset.leq(i, j);
            let le_filters = family.members[map[i]].is_subset_of(family.members[map[j]]);
            if le_space != le_filters {
                return Err(Error::MorphismInvalid {
                    law: "order isomorphism".into(),
                    witness: format!("(h{i},h{j})"),
                });
            }
        }
    }
    Ok(UnitFilterWitness { family, map })
}

/// Prime filters containing the unit: generalized (with the improper
/// filter) for unbounded algebras, proper only for bounded ones.
pub fn unit_filters(a: &FiniteAlgebra) -> SubsetFamily {
    let generalized = a.profile != Profile::SugiharaBounded;
    let t = a.unit_elem();
    let all = prime_filters(a, generalized);
    SubsetFamily::new(
        a.n(),
        all.members.into_iter().filter(|m| m.contains(t)).collect(),
    )
}

/// The three-valued map encoded by a covering pair of subsets, together
/// with the two sides of the morphism criterion (checked independently and
/// asserted to agree): the map is a space morphism into the alter ego iff
/// both subsets are up-sets, no `Q`-pair joins their complements, their
/// intersection avoids the designated set, and (pointed case) both contain
/// the top.
#[derive(Debug, Clone)]
pub struct CodedMap {
    pub values: Vec<usize>,
    pub is_morphism: bool,
    pub criterion: bool,
}

pub fn coded_map(x: &StructuredSpace, u: Subset, v: Subset) -> Result<CodedMap> {
    if !x.flavor.kleene_axioms() {
        return Err(Error::ProfileMismatch {
            expected: "a Kleene-flavor space".into(),
            found: x.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    let n = x.n();
    if u.union(v) != Subset::full(n) {
        return Err(Error::NotCovering);
    }
    let values: Vec<usize> = (0..n)
        .map(|p| {
            if !v.contains(p) {
                2
            } else if u.contains(p) {
                MID
            } else {
                0
            }
        })
        .collect();
    let is_morphism = coded_values_are_morphism(x, &values);
    let q = x.effective_q();
    let (cu, cv) = (u.complement(n), v.complement(n));
    let mut criterion = x.poset.is_up_set(u)
        && x.poset.is_up_set(v)
        && cu.iter().all(|p| cv.iter().all(|r| !q[p].contains(r)))
        && u.inter(v).is_subset_of(x.d.complement(n));
    if let Some(top) = x.top {
        criterion = criterion && u.contains(top) && v.contains(top);
    }
    assert_eq!(
        is_morphism, criterion,
        "morphism criterion and direct check disagree"
    );
    Ok(CodedMap {
        values,
        is_morphism,
        criterion,
    })
}

fn coded_values_are_morphism(x: &StructuredSpace, values: &[usize]) -> bool {
    let n = x.n();
    let q = x.effective_q();
    for p in 0..n {
        for r in 0..n {
            if x.poset.leq(p, r) && !space_leq(values[p], values[r]) {
                return false;
            }
            if q[p].contains(r) && !space_q(values[p], values[r]) {
                return false;
            }
        }
        if x.d.contains(p) && values[p] == MID {
            return false;
        }
    }
    match x.top {
        Some(t) => values[t] == MID,
        None => true,
    }
}

/// The algebra of all space morphisms into the alter ego, with the value
/// vectors retained in carrier order.
#[derive(Debug, Clone)]
pub struct CodedAlgebra {
    pub algebra: FiniteAlgebra,
    pub vectors: Vec<Vec<usize>>,
}

/// Builds the full monoid on the coded maps of a Sugihara space: lattice
/// operations and involution pointwise, multiplication and residual
/// transported through the complementary-pair twist of the up-set algebra.
/// Along the way it is asserted that the coded maps are exactly the space
/// morphisms into the alter ego.
pub fn plus_algebra(x: &StructuredSpace) -> Result<CodedAlgebra> {
    if !x.flavor.sugihara() {
        return Err(Error::ProfileMismatch {
            expected: "a Sugihara-flavor space".into(),
            found: x.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    let pointed = x.flavor == Flavor::SugiharaPointed;
    let order_space = x.as_order_space();
    let base = dual_algebra(&order_space)?;
    let up = twist_up(&base)?;
    let pairs = PairCarrier::new(&base, PairKind::Complementary)?;
    let mut members = x.poset.up_sets();
    if pointed {
        members.retain(|m| !m.is_empty());
    }

    // every complementary pair encodes a morphism
    let coded: Vec<Vec<usize>> = pairs
        .pairs
        .iter()
        .map(|&(ui, vi)| {
            let c = coded_map(x, members[ui], members[vi])?;
            assert!(c.is_morphism, "complementary pairs always encode morphisms");
            Ok(c.values)
        })
        .collect::<Result<_>>()?;

    // and the encoded morphisms exhaust the valid coded maps
    let mut swept: Vec<Vec<usize>> = Vec::new();
    for &u in &members {
        for &v in &members {
            if u.union(v) != Subset::full(x.n()) {
                continue;
            }
            let c = coded_map(x, u, v)?;
            if c.is_morphism {
                swept.push(c.values);
            }
        }
    }
    swept.sort();
    swept.dedup();
    let mut sorted = coded.clone();
    sorted.sort();
    assert_eq!(
        sorted, swept,
        "pair encoding must exhaust the valid coded maps"
    );

    // brute-force cross-check on small spaces: every morphism into the
    // alter ego is a coded map
    if x.n() <= 10 {
        let mut all = Vec::new();
        let mut vals = vec![0usize; x.n()];
        loop {
            if coded_values_are_morphism(x, &vals) {
                all.push(vals.clone());
            }
            let mut i = 0;
            loop {
                if i == x.n() {
                    break;
                }
                vals[i] += 1;
                if vals[i] < 3 {
                    break;
                }
                vals[i] = 0;
                i += 1;
            }
            if i == x.n() {
                break;
            }
        }
        all.sort();
        assert_eq!(
            sorted, all,
            "every space morphism decomposes as a coded map"
        );
    }

    // canonical carrier order: value vectors ascending
    let mut vectors = coded;
    vectors.sort();
    let k = vectors.len();
    let names: Vec<String> = (0..k).map(|i| format!("c{i}")).collect();
    let poset = FinitePoset::from_leq(names, |i, j| {
        (0..x.n()).all(|p| vectors[i][p] <= vectors[j][p])
    })?;

    let lookup_values = |vals: &Vec<usize>| -> usize {
        vectors
            .binary_search(vals)
            .expect("operation result is a coded map")
    };
    let member_index = |s: Subset| {
        members
            .binary_search(&s)
            .expect("up-set is a carrier member")
    };
    let decode = |vals: &[usize]| -> (usize, usize) {
        let u = Subset::from_indices((0..x.n()).filter(|&p| vals[p] >= MID));
        let v = Subset::from_indices((0..x.n()).filter(|&p| vals[p] <= MID));
        (member_index(u), member_index(v))
    };

    let mut mult: Table = vec![vec![0; k]; k];
    let mut arrow: Table = vec![vec![0; k]; k];
    for i in 0..k {
        for j in 0..k {
            let pi = pairs
                .index_of(decode(&vectors[i]))
                .expect("decoded pair is on the carrier");
            let pj = pairs
                .index_of(decode(&vectors[j]))
                .expect("decoded pair is on the carrier");
            let (um, vm) = pairs.pairs[up.mult_of(pi, pj)];
            mult[i][j] = lookup_values(&coded_map(x, members[um], members[vm])?.values);
            let (ua, va) = pairs.pairs[up.arrow_of(pi, pj)];
            arrow[i][j] = lookup_values(&coded_map(x, members[ua], members[va])?.values);
        }
    }
    let neg: Vec<usize> = (0..k)
        .map(|i| {
            let flipped: Vec<usize> = vectors[i].iter().map(|&v| 2 - v).collect();
            lookup_values(&flipped)
        })
        .collect();
    let unit_vals = coded_map(x, Subset::full(x.n()), x.d.complement(x.n()))?.values;
    let unit = lookup_values(&unit_vals);
    let (bot, top) = if pointed {
        (None, None)
    } else {
        (
            Some(lookup_values(&vec![0; x.n()])),
            Some(lookup_values(&vec![2; x.n()])),
        )
    };
    let parts = AlgebraParts {
        mult: Some(mult),
        arrow: Some(arrow),
        unit: Some(unit),
        neg: Some(neg),
        bot,
        top,
        ..Default::default()
    };
    let profile = if pointed {
        Profile::Sugihara
    } else {
        Profile::SugiharaBounded
    };
    let algebra = FiniteAlgebra::assemble(format!("{}_plus", x.name), poset, profile, parts)?;
    ensure_valid(&algebra)?;
    Ok(CodedAlgebra { algebra, vectors })
}

/// The isomorphism `(U,V) ↦ C_{U,V}` from the complementary-pair twist of
/// the up-set algebra onto the coded-map algebra, validated in the full
/// Sugihara signature.
pub fn coded_map_iso(x: &StructuredSpace) -> Result<Morphism> {
    let plus = plus_algebra(x)?;
    let pointed = x.flavor == Flavor::SugiharaPointed;
    let base = dual_algebra(&x.as_order_space())?;
    let up = twist_up(&base)?;
    let pairs = PairCarrier::new(&base, PairKind::Complementary)?;
    let mut members = x.poset.up_sets();
    if pointed {
        members.retain(|m| !m.is_empty());
    }
    let map: Vec<usize> = pairs
        .pairs
        .iter()
        .map(|&(ui, vi)| {
            let values = coded_map(x, members[ui], members[vi])?.values;
            Ok(plus
                .vectors
                .binary_search(&values)
                .expect("encoded morphism is a carrier element"))
        })
        .collect::<Result<_>>()?;
    let iso = Morphism::new(
        up,
        plus.algebra,
        map,
        Signature::of_profile(if pointed {
            Profile::Sugihara
        } else {
            Profile::SugiharaBounded
        }),
    )?;
    if !iso.is_bijective() {
        return Err(Error::MorphismInvalid {
            law: "bijectivity".into(),
            witness: "-".into(),
        });
    }
    Ok(iso)
}

/// The dual of a Sugihara-monoid morphism on hom-duals: precomposition.
/// The factorisation through the cone duals (`h₊ = ξ⁻¹ ∘ (h↾cone)* ∘ ξ`) is
/// asserted pointwise.
pub fn plus_of_hom(h: &Morphism) -> Result<SpaceMap> {
    require_sugihara(&h.source)?;
    require_sugihara(&h.target)?;
    Morphism::new(
        h.source.clone(),
        h.target.clone(),
        h.map.clone(),
        Signature::of_profile(h.source.profile),
    )?;
    let dw_src = hom_dual(&h.target)?;
    let dw_tgt = hom_dual(&h.source)?;
    let map: Vec<usize> = dw_src
        .homs
        .iter()
        .map(|x| {
            let composed: Vec<usize> = (0..h.source.n()).map(|e| x[h.map[e]]).collect();
            dw_tgt
                .homs
                .iter()
                .position(|g| *g == composed)
                .expect("precomposition with a morphism is a morphism")
        })
        .collect();
    let out = SpaceMap::new(dw_src.space, dw_tgt.space, map)?;

    // factorisation through the enriched-cone duality
    let xi_tgt = filter_iso(&h.source)?;
    let xi_src = filter_iso(&h.target)?;
    let restricted = restrict_to_cone(h)?;
    let dual = dual_hom(&restricted)?;
    for p in 0..out.source.n() {
        assert_eq!(
            xi_tgt.map[out.map[p]], dual.map[xi_src.map[p]],
            "hom-dual map must factor through the cone duality"
        );
    }
    Ok(out)
}

/// Restriction of a Sugihara morphism to the enriched negative cones.
pub fn restrict_to_cone(h: &Morphism) -> Result<Morphism> {
    let src = twist_down(&h.source)?;
    let tgt = twist_down(&h.target)?;
    let embed_src = cone_to_source_indices(&h.source, &src);
    let map: Vec<usize> = (0..src.n())
        .map(|i| {
            let image = h.map[embed_src[i]];
            tgt.poset
                .index_of(h.target.name_of(image))
                .ok_or_else(|| Error::MorphismInvalid {
                    law: "image of a negative element is negative".into(),
                    witness: src.name_of(i).to_string(),
                })
        })
        .collect::<Result<_>>()?;
    Morphism::new(src.clone(), tgt, map, Signature::of_profile(src.profile))
}

/// The dual of a Sugihara-space morphism on coded algebras: precomposition.
/// The factorisation through the pair encoding (`φ⁺ = μ ∘ (φ*)^⋈ ∘ μ⁻¹`) is
/// asserted pointwise.
pub fn plus_of_space_map(phi: &SpaceMap) -> Result<Morphism> {
    if !phi.source.flavor.sugihara() || phi.source.flavor != phi.target.flavor {
        return Err(Error::ProfileMismatch {
            expected: "matching Sugihara-flavor spaces".into(),
            found: format!(
                "{}/{}",
                phi.source.flavor.as_str(),
                phi.target.flavor.as_str()
            ),
        });
    }
    phi.validate()?;
    let plus_src = plus_algebra(&phi.target)?;
    let plus_tgt = plus_algebra(&phi.source)?;
    let map: Vec<usize> = plus_src
        .vectors
        .iter()
        .map(|alpha| {
            let composed: Vec<usize> = (0..phi.source.n()).map(|p| alpha[phi.map[p]]).collect();
            plus_tgt
                .vectors
                .binary_search(&composed)
                .expect("precomposition with a space morphism is a coded map")
        })
        .collect();
    let profile = plus_src.algebra.profile;
    let out = Morphism::new(
        plus_src.algebra,
        plus_tgt.algebra,
        map,
        Signature::of_profile(profile),
    )?;

    // factorisation through the pair encoding
    let mu_src = coded_map_iso(&phi.target)?;
    let mu_tgt = coded_map_iso(&phi.source)?;
    let order_map = SpaceMap::new(
        phi.source.as_order_space(),
        phi.target.as_order_space(),
        phi.map.clone(),
    )?;
    let star = crate::esakia::hom_of_space_map(&order_map)?;
    let lifted = lift_hom(&star, PairKind::Complementary)?;
    for p in 0..mu_src.source.n() {
        assert_eq!(
            out.map[mu_src.map[p]], mu_tgt.map[lifted.map[p]],
            "coded-algebra map must factor through the pair encoding"
        );
    }
    Ok(out)
}

/// The convex prime subalgebras of an odd Sugihara monoid, with the order
/// isomorphism onto the hom-dual (each subalgebra corresponds to the point
/// whose cone filter is its negative part).
#[derive(Debug, Clone)]
pub struct ConvexPrimes {
    pub family: SubsetFamily,
    pub to_point: Vec<usize>,
}

pub fn convex_prime_subalgebras(a: &FiniteAlgebra) -> Result<ConvexPrimes> {
    require_sugihara(a)?;
    ensure_valid(a)?;
    let t = a.unit_elem();
    if a.neg_of(t) != t {
        return Err(Error::NotOdd);
    }
    let n = a.n();
    if n > 24 {
        return Err(Error::CarrierTooLarge { size: n, max: 24 });
    }
    let mut found = Vec::new();
    for raw in 0u64..(1 << n) {
        let s = Subset(raw);
        if !s.contains(t) {
            continue;
        }
        let closed = s.iter().all(|x| {
            s.contains(a.neg_of(x))
                && s.iter()
                    .all(|y| s.contains(a.meet_of(x, y)) && s.contains(a.join_of(x, y)))
        });
        if !closed {
            continue;
        }
        let convex = (0..n).all(|b| {
            s.contains(b)
                || !s
                    .iter()
                    .any(|x| a.leq(x, b) && s.iter().any(|y| a.leq(b, y)))
        });
        if !convex {
            continue;
        }
        let prime = (0..n).all(|x| {
            (0..n).all(|y| !s.contains(a.meet_of(x, y)) || s.contains(x) || s.contains(y))
        });
        if prime {
            found.push(s);
        }
    }
    let family = SubsetFamily::new(n, found);

    // order isomorphism onto the hom-dual via the induced cone filter
    let dw = hom_dual(a)?;
    let down = twist_down(a)?;
    let embed = cone_to_source_indices(a, &down);
    let xi_masks: Vec<Subset> = dw
        .homs
        .iter()
        .map(|h| Subset::from_indices((0..down.n()).filter(|&i| h[embed[i]] >= MID)))
        .collect();
    let to_point: Vec<usize> = family
        .members
        .iter()
        .map(|&c| {
            let cone_part = Subset::from_indices((0..down.n()).filter(|&i| c.contains(embed[i])));
            xi_masks
                .iter()
                .position(|&m| m == cone_part)
                .ok_or_else(|| Error::Validation {
                    subject: a.name.clone(),
                    law: "convex prime subalgebra corresponds to a dual point".into(),
                    witness: a.poset.render_subset(c),
                })
        })
        .collect::<Result<_>>()?;
    let mut seen = vec![false; dw.homs.len()];
    for &p in &to_point {
        seen[p] = true;
    }
    if !seen.iter().all(|&s| s) || to_point.len() != dw.homs.len() {
        return Err(Error::MorphismInvalid {
            law: "bijectivity".into(),
            witness: "-".into(),
        });
    }
    for i in 0..family.len() {
        for j in 0..family.len() {
            let le_sub = family.members[i].is_subset_of(family.members[j]);
            let le_space = dw.space.poset.leq(to_point[i], to_point[j]);
            if le_sub != le_space {
                return Err(Error::MorphismInvalid {
                    law: "order isomorphism".into(),
                    witness: format!(
                        "({},{})",
                        a.poset.render_subset(family.members[i]),
                        a.poset.render_subset(family.members[j])
                    ),
                });
            }
        }
    }
    Ok(ConvexPrimes { family, to_point })
}

//! Prime-filter duality for relative Stone and Gödel algebras with Boolean
//! constant, on finite carriers.
//!
//! Finite specialisation: with the discrete topology every Priestley and
//! Esakia separation condition holds outright, every clopen is just a set,
//! and compactness is vacuous. The validators therefore check only the
//! order-theoretic content of each space class (forest shape, designated
//! minimal points, top), which is the honest finite residue of the
//! topological axioms.

use crate::algebra::{ensure_valid, prime_filters, AlgebraParts, FiniteAlgebra, Profile, Table};
use crate::hom::{Morphism, Signature};
use crate::order::{heyting_arrow_upsets, FinitePoset};
use crate::report::ValidationReport;
use crate::subset::Subset;
use crate::{Error, Result};

/// The structured-space classes handled by the workbench.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Flavor {
    Brs,
    Bg,
    PointedKleene,
    Kleene,
    SugiharaPointed,
    SugiharaUnpointed,
}

impl Flavor {
    pub fn as_str(self) -> &'static str {
        match self {
            Flavor::Brs => "brs",
            Flavor::Bg => "bg",
            Flavor::PointedKleene => "pointed_kleene",
            Flavor::Kleene => "kleene",
            Flavor::SugiharaPointed => "sugihara_pointed",
            Flavor::SugiharaUnpointed => "sugihara_unpointed",
        }
    }

    pub fn parse(s: &str) -> Option<Flavor> {
        Some(match s {
            "brs" => Flavor::Brs,
            "bg" => Flavor::Bg,
            "pointed_kleene" => Flavor::PointedKleene,
            "kleene" => Flavor::Kleene,
            "sugihara_pointed" => Flavor::SugiharaPointed,
            "sugihara_unpointed" => Flavor::SugiharaUnpointed,
            _ => return None,
        })
    }

    pub fn pointed(self) -> bool {
        matches!(
            self,
            Flavor::Brs | Flavor::PointedKleene | Flavor::SugiharaPointed
        )
    }

    pub fn kleene_axioms(self) -> bool {
        matches!(
            self,
            Flavor::PointedKleene
                | Flavor::Kleene
                | Flavor::SugiharaPointed
                | Flavor::SugiharaUnpointed
        )
    }

    pub fn esakia_order(self) -> bool {
        matches!(
            self,
            Flavor::Brs | Flavor::Bg | Flavor::SugiharaPointed | Flavor::SugiharaUnpointed
        )
    }

    pub fn sugihara(self) -> bool {
        matches!(self, Flavor::SugiharaPointed | Flavor::SugiharaUnpointed)
    }
}

/// A finite poset with a designated subset, an optional top, and an optional
/// explicit binary relation `Q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StructuredSpace {
    pub name: String,
    pub poset: FinitePoset,
    pub d: Subset,
    pub top: Option<usize>,
    pub q: Option<Vec<Subset>>,
    pub flavor: Flavor,
}

impl StructuredSpace {
    pub fn n(&self) -> usize {
        self.poset.n()
    }

    /// The stored `Q` if present, else the comparability relation.
    pub fn effective_q(&self) -> Vec<Subset> {
        match &self.q {
            Some(q) => q.clone(),
            None => self.comparability(),
        }
    }

    pub fn comparability(&self) -> Vec<Subset> {
        (0..self.n())
            .map(|i| Subset::from_indices((0..self.n()).filter(|&j| self.poset.comparable(i, j))))
            .collect()
    }

    /// The same points viewed as a plain order space (`brs` or `bg`),
    /// dropping any explicit `Q`.
    pub fn as_order_space(&self) -> StructuredSpace {
        StructuredSpace {
            name: self.name.clone(),
            poset: self.poset.clone(),
            d: self.d,
            top: self.top,
            q: None,
            flavor: if self.flavor.pointed() {
                Flavor::Brs
            } else {
                Flavor::Bg
            },
        }
    }
}

/// Checks the axioms of the space's flavor.
pub fn validate_space(x: &StructuredSpace) -> ValidationReport {
    let mut rep = ValidationReport::new(format!("{} [{}]", x.name, x.flavor.as_str()));
    let n = x.n();
    let carrier = Subset::full(n);
    rep.record(
        "designated subset lies in the carrier",
        if x.d.is_subset_of(carrier) {
            None
        } else {
            Some(format!("{:?}", x.d))
        },
    );

    if x.flavor.pointed() {
        match x.top {
            Some(t) => rep.record(
                "top is the greatest element",
                (0..n)
                    .find(|&i| !x.poset.leq(i, t))
                    .map(|i| x.poset.name(i).to_string()),
            ),
            None => rep.record("top is the greatest element", Some("missing".into())),
        }
    }

    if x.flavor.esakia_order() {
        rep.record(
            "poset is a forest",
            (0..n)
                .find(|&i| !x.poset.is_chain(x.poset.upset(i)))
                .map(|i| x.poset.name(i).to_string()),
        );
        let minimal = x.poset.minimal_elements();
        rep.record(
            "designated elements are minimal",
            x.d.iter()
                .find(|&i| !minimal.contains(i))
                .map(|i| x.poset.name(i).to_string()),
        );
    }

    if x.flavor.sugihara() {
        if let Some(q) = &x.q {
            let comp = x.comparability();
            rep.record(
                "stored Q equals comparability",
                (0..n)
                    .find(|&i| q[i] != comp[i])
                    .map(|i| x.poset.name(i).to_string()),
            );
        }
    }

    if x.flavor.kleene_axioms() {
        let q = x.effective_q();
        rep.record(
            "Q is reflexive",
            (0..n)
                .find(|&i| !q[i].contains(i))
                .map(|i| x.poset.name(i).to_string()),
        );
        let mut w = None;
        'outer: for i in x.d.iter() {
            for j in q[i].iter() {
                if !x.poset.leq(i, j) {
                    w = Some(format!("({},{})", x.poset.name(i), x.poset.name(j)));
                    break 'outer;
                }
            }
        }
        rep.record("x Q y and x designated imply x ≤ y", w);
        let mut w = None;
        'outer2: for i in 0..n {
            for j in q[i].iter() {
                for k in x.poset.upset(j).iter() {
                    if !q[k].contains(i) {
                        w = Some(format!(
                            "({},{},{})",
                            x.poset.name(i),
                            x.poset.name(j),
                            x.poset.name(k)
                        ));
                        break 'outer2;
                    }
                }
            }
        }
        rep.record("x Q y and y ≤ z imply z Q x", w);
    }

    rep
}

pub fn ensure_valid_space(x: &StructuredSpace) -> Result<()> {
    let rep = validate_space(x);
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Error::Validation {
            subject: x.name.clone(),
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        }),
    }
}

/// A point map between two structured spaces. The morphism laws checked
/// depend on the flavor: order spaces (brs/bg/sugihara) use p-morphisms
/// preserving the designated set and its complement; plain Kleene flavors
/// use structure preservation for ≤, Q, the designated set, and the top.
#[derive(Debug, Clone)]
pub struct SpaceMap {
    pub source: StructuredSpace,
    pub target: StructuredSpace,
    pub map: Vec<usize>,
}

impl SpaceMap {
    pub fn new(
        source: StructuredSpace,
        target: StructuredSpace,
        map: Vec<usize>,
    ) -> Result<SpaceMap> {
        if map.len() != source.n() || map.iter().any(|&v| v >= target.n()) {
            return Err(Error::MorphismInvalid {
                law: "totality".into(),
                witness: format!("map length {}", map.len()),
            });
        }
        let m = SpaceMap {
            source,
            target,
            map,
        };
        m.validate()?;
        Ok(m)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.map[i]
    }

    pub fn is_bijective(&self) -> bool {
        let n = self.target.n();
        self.map.len() == n && {
            let mut seen = vec![false; n];
            self.map
                .iter()
                .all(|&v| !std::mem::replace(&mut seen[v], true))
        }
    }

    fn fail(law: &str, witness: String) -> Error {
        Error::MorphismInvalid {
            law: law.into(),
            witness,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (x, y, h) = (&self.source, &self.target, &self.map);
        let n = x.n();
        for i in 0..n {
            for j in 0..n {
                if x.poset.leq(i, j) && !y.poset.leq(h[i], h[j]) {
                    return Err(Self::fail(
                        "monotonicity",
                        format!("({},{})", x.poset.name(i), x.poset.name(j)),
                    ));
                }
            }
        }
        if x.flavor.pointed() {
            let tx = x
                .top
                .ok_or_else(|| Self::fail("top", "missing in source".into()))?;
            let ty = y
                .top
                .ok_or_else(|| Self::fail("top", "missing in target".into()))?;
            if h[tx] != ty {
                return Err(Self::fail("top", x.poset.name(tx).to_string()));
            }
        }
        if x.flavor.kleene_axioms() && !x.flavor.esakia_order() {
            // plain structure preservation
            let qx = x.effective_q();
            let qy = y.effective_q();
            for i in 0..n {
                for j in qx[i].iter() {
                    if !qy[h[i]].contains(h[j]) {
                        return Err(Self::fail(
                            "Q",
                            format!("({},{})", x.poset.name(i), x.poset.name(j)),
                        ));
                    }
                }
            }
            for i in x.d.iter() {
                if !y.d.contains(h[i]) {
                    return Err(Self::fail("designated set", x.poset.name(i).to_string()));
                }
            }
            return Ok(());
        }
        // p-morphism for ≤, plus preservation of the designated set and of
        // its complement
        for i in 0..n {
            for z in y.poset.upset(h[i]).iter() {
                let ok = x.poset.upset(i).iter().any(|j| h[j] == z);
                if !ok {
                    return Err(Self::fail(
                        "p-morphism lifting",
                        format!("({},{})", x.poset.name(i), y.poset.name(z)),
                    ));
                }
            }
        }
        for i in 0..n {
            if x.d.contains(i) && !y.d.contains(h[i]) {
                return Err(Self::fail("designated set", x.poset.name(i).to_string()));
            }
            if !x.d.contains(i) && y.d.contains(h[i]) {
                return Err(Self::fail(
                    "complement of the designated set",
                    x.poset.name(i).to_string(),
                ));
            }
        }
        Ok(())
    }

    /// Validates this map as an isomorphism of spaces: a bijection that is
    /// an order isomorphism, matches designated sets and tops exactly, and
    /// transports `Q` when present.
    pub fn validate_iso(&self) -> Result<()> {
        if !self.is_bijective() {
            return Err(Self::fail("bijectivity", "-".into()));
        }
        let (x, y, h) = (&self.source, &self.target, &self.map);
        for i in 0..x.n() {
            for j in 0..x.n() {
                if x.poset.leq(i, j) != y.poset.leq(h[i], h[j]) {
                    return Err(Self::fail(
                        "order isomorphism",
                        format!("({},{})", x.poset.name(i), x.poset.name(j)),
                    ));
                }
            }
        }
        let image_d = Subset::from_indices(x.d.iter().map(|i| h[i]));
        if image_d != y.d {
            return Err(Self::fail(
                "designated set equality",
                format!("{:?}", image_d),
            ));
        }
        match (x.top, y.top) {
            (Some(tx), Some(ty)) if h[tx] != ty => {
                return Err(Self::fail("top", x.poset.name(tx).to_string()));
            }
            _ => {}
        }
        let qx = x.effective_q();
        let qy = y.effective_q();
        for i in 0..x.n() {
            for j in 0..x.n() {
                if qx[i].contains(j) != qy[h[i]].contains(h[j]) {
                    return Err(Self::fail(
                        "Q isomorphism",
                        format!("({},{})", x.poset.name(i), x.poset.name(j)),
                    ));
                }
            }
        }
        Ok(())
    }

    /// `g ∘ self` (apply `self` first).
    pub fn then(&self, g: &SpaceMap) -> Result<SpaceMap> {
        let map = self.map.iter().map(|&i| g.map[i]).collect();
        SpaceMap::new(self.source.clone(), g.target.clone(), map)
    }

    pub fn inverse(&self) -> Result<SpaceMap> {
        self.validate_iso()?;
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        SpaceMap::new(self.target.clone(), self.source.clone(), inv)
    }
}

fn require_boolean_profile(b: &FiniteAlgebra) -> Result<()> {
    if !matches!(b.profile, Profile::Brsa | Profile::Bga) {
        return Err(Error::ProfileMismatch {
            expected: "brsa or bga".into(),
            found: b.profile.as_str().into(),
        });
    }
    Ok(())
}

/// Names a filter by its least element.
fn filter_name(b: &FiniteAlgebra, filter: Subset) -> String {
    let min = filter
        .iter()
        .find(|&m| filter.is_subset_of(b.poset.upset(m)))
        .expect("a finite filter is a principal up-set");
    format!("^{}", b.name_of(min))
}

/// The dual space of an algebra with Boolean constant: prime filters
/// ordered by inclusion (generalized, i.e. with the improper filter as top,
/// in the bottomless case), designated points the filters omitting `f`.
pub fn dual_space(b: &FiniteAlgebra) -> Result<StructuredSpace> {
    require_boolean_profile(b)?;
    ensure_valid(b)?;
    let generalized = b.profile == Profile::Brsa;
    let filters = prime_filters(b, generalized);
    let names: Vec<String> = filters.members.iter().map(|&m| filter_name(b, m)).collect();
    let poset = FinitePoset::from_leq(names, |i, j| {
        filters.members[i].is_subset_of(filters.members[j])
    })?;
    let f = b.f.unwrap();
    let d = Subset::from_indices((0..filters.len()).filter(|&i| !filters.members[i].contains(f)));
    let top = if generalized { poset.greatest() } else { None };
    if generalized && top.is_none() {
        return Err(Error::Validation {
            subject: b.name.clone(),
            law: "the improper filter is the greatest point".into(),
            witness: "-".into(),
        });
    }
    let x = StructuredSpace {
        name: format!("{}_esk", b.name),
        poset,
        d,
        top,
        q: None,
        flavor: if generalized { Flavor::Brs } else { Flavor::Bg },
    };
    ensure_valid_space(&x)?;
    Ok(x)
}

/// The algebra of up-sets of a space: all up-sets for a `bg` space, the
/// nonempty ones for a pointed `brs` space. Meet and join are intersection
/// and union, the residual is the relative pseudo-complement, the unit is
/// the full carrier and `f` is the complement of the designated set.
pub fn dual_algebra(x: &StructuredSpace) -> Result<FiniteAlgebra> {
    if !matches!(x.flavor, Flavor::Brs | Flavor::Bg) {
        return Err(Error::ProfileMismatch {
            expected: "brs or bg".into(),
            found: x.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    let pointed = x.flavor == Flavor::Brs;
    let mut members = x.poset.up_sets();
    if pointed {
        members.retain(|m| !m.is_empty());
    }
    if members.len() > crate::subset::MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: members.len(),
            max: crate::subset::MAX_CARRIER,
        });
    }
    let index_of = |s: Subset| -> Result<usize> {
        members.binary_search(&s).map_err(|_| Error::Validation {
            subject: x.name.clone(),
            law: "up-set operations close on the carrier".into(),
            witness: x.poset.render_subset(s),
        })
    };
    let n = members.len();
    let names: Vec<String> = members.iter().map(|&m| x.poset.render_subset(m)).collect();
    let poset = FinitePoset::from_leq(names, |i, j| members[i].is_subset_of(members[j]))?;
    let mut arrow: Table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            arrow[i][j] = index_of(heyting_arrow_upsets(&x.poset, members[i], members[j])?)?;
        }
    }
    let d_comp = x.d.complement(x.n());
    let f = index_of(d_comp)?;
    let unit = index_of(Subset::full(x.n()))?;
    let bot = if pointed {
        None
    } else {
        Some(index_of(Subset::EMPTY)?)
    };
    let parts = AlgebraParts {
        arrow: Some(arrow),
        unit: Some(unit),
        f: Some(f),
        bot,
        ..Default::default()
    };
    let profile = if pointed { Profile::Brsa } else { Profile::Bga };
    let out = FiniteAlgebra::assemble(format!("{}_alg", x.name), poset, profile, parts)?;
    ensure_valid(&out)?;
    Ok(out)
}

/// The evaluation isomorphism `a ↦ {x : a ∈ x}` from an algebra onto the
/// up-set algebra of its dual space.
pub fn unit_iso(b: &FiniteAlgebra) -> Result<Morphism> {
    let space = dual_space(b)?;
    let double = dual_algebra(&space)?;
    let generalized = b.profile == Profile::Brsa;
    let filters = prime_filters(b, generalized);
    let map: Vec<usize> = (0..b.n())
        .map(|a| {
            let image = Subset::from_indices(
                (0..filters.len()).filter(|&i| filters.members[i].contains(a)),
            );
            double
                .poset
                .index_of(&space.poset.render_subset(image))
                .ok_or_else(|| Error::Validation {
                    subject: b.name.clone(),
                    law: "evaluation lands on an up-set of the dual".into(),
                    witness: b.name_of(a).to_string(),
                })
        })
        .collect::<Result<_>>()?;
    let iso = Morphism::new(b.clone(), double, map, Signature::of_profile(b.profile))?;
    if !iso.is_bijective() {
        return Err(Error::MorphismInvalid {
            law: "bijectivity".into(),
            witness: "-".into(),
        });
    }
    Ok(iso)
}

/// The evaluation isomorphism `x ↦ {U : x ∈ U}` from a space onto the dual
/// space of its up-set algebra.
pub fn counit_iso(x: &StructuredSpace) -> Result<SpaceMap> {
    let alg = dual_algebra(x)?;
    let double = dual_space(&alg)?;
    let pointed = x.flavor == Flavor::Brs;
    let mut members = x.poset.up_sets();
    if pointed {
        members.retain(|m| !m.is_empty());
    }
    let filters = prime_filters(&alg, pointed);
    let map: Vec<usize> = (0..x.n())
        .map(|p| {
            let filt = Subset::from_indices((0..members.len()).filter(|&i| members[i].contains(p)));
            filters.index_of(filt).ok_or_else(|| Error::Validation {
                subject: x.name.clone(),
                law: "evaluation lands on a prime filter of the up-set algebra".into(),
                witness: x.poset.name(p).to_string(),
            })
        })
        .collect::<Result<_>>()?;
    let iso = SpaceMap::new(x.clone(), double, map)?;
    iso.validate_iso()?;
    Ok(iso)
}

/// The dual of an algebra morphism: preimage on prime filters,
/// contravariantly.
pub fn dual_hom(h: &Morphism) -> Result<SpaceMap> {
    require_boolean_profile(&h.source)?;
    require_boolean_profile(&h.target)?;
    Morphism::new(
        h.source.clone(),
        h.target.clone(),
        h.map.clone(),
        Signature::of_profile(h.source.profile),
    )?;
    let src_space = dual_space(&h.target)?;
    let tgt_space = dual_space(&h.source)?;
    let generalized = h.source.profile == Profile::Brsa;
    let src_filters = prime_filters(&h.target, generalized);
    let tgt_filters = prime_filters(&h.source, generalized);
    let map: Vec<usize> = src_filters
        .members
        .iter()
        .map(|&x| {
            let pre = Subset::from_indices((0..h.source.n()).filter(|&a| x.contains(h.map[a])));
            tgt_filters.index_of(pre).ok_or_else(|| Error::Validation {
                subject: "dual map".into(),
                law: "preimage of a prime filter is a prime filter".into(),
                witness: h.target.poset.render_subset(x),
            })
        })
        .collect::<Result<_>>()?;
    SpaceMap::new(src_space, tgt_space, map)
}

/// The dual of a space morphism: preimage on up-sets, contravariantly.
pub fn hom_of_space_map(phi: &SpaceMap) -> Result<Morphism> {
    phi.validate()?;
    let src_alg = dual_algebra(&phi.target)?;
    let tgt_alg = dual_algebra(&phi.source)?;
    let pointed = phi.source.flavor == Flavor::Brs;
    let mut src_members = phi.target.poset.up_sets();
    let mut tgt_members = phi.source.poset.up_sets();
    if pointed {
        src_members.retain(|m| !m.is_empty());
        tgt_members.retain(|m| !m.is_empty());
    }
    let map: Vec<usize> = src_members
        .iter()
        .map(|&u| {
            let pre = Subset::from_indices((0..phi.source.n()).filter(|&p| u.contains(phi.map[p])));
            tgt_members
                .binary_search(&pre)
                .map_err(|_| Error::Validation {
                    subject: "dual map".into(),
                    law: "preimage of an up-set is an up-set".into(),
                    witness: phi.target.poset.render_subset(u),
                })
        })
        .collect::<Result<_>>()?;
    Morphism::new(
        src_alg.clone(),
        tgt_alg,
        map,
        Signature::of_profile(src_alg.profile),
    )
}

/// The accessibility relation of a `bg` space: the order minus the diagonal
/// over the designated set. Its image is asserted to equal the complement
/// of the designated set, and the reflexive-interpolation law
/// `x≲z ⟺ ∃y (y≲y and x≤y≤z)` is asserted to hold.
///
/// When the space is the dual of an algebra `b`, pass `Some(b)`: the
/// relation recomputed from the nucleus (`x R y ⟺ N⁻¹[x] ⊆ y`) is then
/// asserted to coincide.
pub fn nucleus_relation(
    x: &StructuredSpace,
    source: Option<&FiniteAlgebra>,
) -> Result<Vec<Subset>> {
    if x.flavor != Flavor::Bg {
        return Err(Error::ProfileMismatch {
            expected: "bg".into(),
            found: x.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    let n = x.n();
    let les: Vec<Subset> = (0..n)
        .map(|i| {
            let mut row = x.poset.upset(i);
            if x.d.contains(i) {
                row.remove(i);
            }
            row
        })
        .collect();

    let image = les.iter().fold(Subset::EMPTY, |acc, &r| acc.union(r));
    assert_eq!(
        image,
        x.d.complement(n),
        "image of the accessibility relation"
    );

    for i in 0..n {
        for k in 0..n {
            let via = (0..n).any(|j| les[j].contains(j) && x.poset.leq(i, j) && x.poset.leq(j, k));
            assert_eq!(les[i].contains(k), via, "reflexive interpolation fails");
        }
    }

    if let Some(b) = source {
        let rebuilt = dual_space(b)?;
        if rebuilt.poset != x.poset || rebuilt.d != x.d {
            return Err(Error::Validation {
                subject: x.name.clone(),
                law: "space is the dual of the supplied algebra".into(),
                witness: b.name.clone(),
            });
        }
        let filters = prime_filters(b, false);
        let nuc = b.nucleus_of_f().unwrap();
        let from_nucleus: Vec<Subset> = (0..n)
            .map(|i| {
                let pre = Subset::from_indices(
                    (0..b.n()).filter(|&a| filters.members[i].contains(nuc[a])),
                );
                Subset::from_indices((0..n).filter(|&j| pre.is_subset_of(filters.members[j])))
            })
            .collect();
        assert_eq!(
            les, from_nucleus,
            "nucleus relation differs from the order formula"
        );
    }
    Ok(les)
}

/// First isomorphism between two spaces of the same flavor in canonical
/// search order, or `None`.
pub fn find_space_isomorphism(
    x: &StructuredSpace,
    y: &StructuredSpace,
) -> Result<Option<SpaceMap>> {
    if x.flavor != y.flavor {
        return Err(Error::ProfileMismatch {
            expected: x.flavor.as_str().into(),
            found: y.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    ensure_valid_space(y)?;
    if x.n() != y.n() || x.d.len() != y.d.len() {
        return Ok(None);
    }
    fn rec(x: &StructuredSpace, y: &StructuredSpace, partial: &mut Vec<usize>) -> bool {
        let n = x.n();
        let k = partial.len();
        if k == n {
            return true;
        }
        'cand: for v in 0..n {
            if partial.contains(&v) {
                continue;
            }
            if x.d.contains(k) != y.d.contains(v) {
                continue;
            }
            if x.poset.upset(k).len() != y.poset.upset(v).len()
                || x.poset.downset(k).len() != y.poset.downset(v).len()
            {
                continue;
            }
            match (x.top, y.top) {
                (Some(tx), Some(ty)) => {
                    if (k == tx) != (v == ty) {
                        continue;
                    }
                }
                (None, None) => {}
                _ => return false,
            }
            for p in 0..k {
                if x.poset.leq(p, k) != y.poset.leq(partial[p], v)
                    || x.poset.leq(k, p) != y.poset.leq(v, partial[p])
                {
                    continue 'cand;
                }
            }
            partial.push(v);
            if rec(x, y, partial) {
                return true;
            }
            partial.pop();
        }
        false
    }
    let mut partial: Vec<usize> = Vec::with_capacity(x.n());
    if rec(x, y, &mut partial) {
        let m = SpaceMap::new(x.clone(), y.clone(), partial)?;
        m.validate_iso()?;
        return Ok(Some(m));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::validate;
    use crate::builtins::builtin;
    use crate::hom::enumerate_homs;
    use crate::twist::twist_down;

    fn cone() -> FiniteAlgebra {
        builtin("E_neg").unwrap()
    }

    #[test]
    fn dual_of_the_cone_matches_the_expected_shape() {
        let x = dual_space(&cone()).unwrap();
        assert_eq!(x.n(), 4);
        assert_eq!(x.d.len(), 1);
        let d = x.d.iter().next().unwrap();
        assert_eq!(x.poset.name(d), "^c");
        // shape: one top over one node over two incomparable leaves
        let top = x.top.unwrap();
        assert_eq!(x.poset.name(top), "^a");
        let mid = x.poset.index_of("^b").unwrap();
        let (uc, uf) = (
            x.poset.index_of("^c").unwrap(),
            x.poset.index_of("^f").unwrap(),
        );
        assert!(x.poset.lt(mid, top));
        assert!(x.poset.lt(uc, mid) && x.poset.lt(uf, mid));
        assert!(!x.poset.comparable(uc, uf));
        assert!(x.poset.is_forest());
    }

    #[test]
    fn dual_of_two_chain_with_unit_constant_has_no_designated_points() {
        let two = twist_down(&builtin("S3").unwrap()).unwrap(); // f = t
        let x = dual_space(&two).unwrap();
        assert_eq!(x.n(), 2);
        assert!(x.d.is_empty());
    }

    #[test]
    fn dual_of_the_trivial_algebra_is_one_improper_point() {
        let one = FiniteAlgebra::assemble(
            "1",
            FinitePoset::from_covers(vec!["t".into()], &[]).unwrap(),
            Profile::Brsa,
            crate::algebra::AlgebraParts {
                unit: Some(0),
                f: Some(0),
                ..Default::default()
            },
        )
        .unwrap();
        let x = dual_space(&one).unwrap();
        assert_eq!(x.n(), 1);
        assert!(x.d.is_empty());
        assert_eq!(x.top, Some(0));
    }

    #[test]
    fn dual_algebra_of_one_point_space() {
        let x = StructuredSpace {
            name: "pt".into(),
            poset: FinitePoset::from_covers(vec!["x".into()], &[]).unwrap(),
            d: Subset::EMPTY,
            top: Some(0),
            q: None,
            flavor: Flavor::Brs,
        };
        let a = dual_algebra(&x).unwrap();
        assert_eq!(a.n(), 1);
        assert_eq!(a.f, a.unit);
    }

    #[test]
    fn dual_algebra_of_two_leaves_under_a_top() {
        let poset =
            FinitePoset::from_covers(vec!["l".into(), "r".into(), "t".into()], &[(0, 2), (1, 2)])
                .unwrap();
        let x = StructuredSpace {
            name: "vee".into(),
            poset,
            d: Subset::from_indices([0, 1]),
            top: Some(2),
            q: None,
            flavor: Flavor::Brs,
        };
        let a = dual_algebra(&x).unwrap();
        assert_eq!(a.n(), 4);
        assert_eq!(a.name_of(a.f.unwrap()), "{t}");
        let t = a.unit_elem();
        for u in 0..a.n() {
            assert_eq!(a.join_of(u, a.arrow_of(u, a.f.unwrap())), t);
        }
        assert!(validate(&a).ok());
    }

    #[test]
    fn evaluation_isomorphisms_on_the_cone() {
        let b = cone();
        let iso = unit_iso(&b).unwrap();
        assert!(iso.is_bijective());
        // f evaluates to the complement of the designated point set
        let x = dual_space(&b).unwrap();
        let img = iso.map[b.f.unwrap()];
        let expect = x.poset.render_subset(x.d.complement(x.n()));
        assert_eq!(iso.target.name_of(img), expect);

        let back = counit_iso(&x).unwrap();
        back.validate_iso().unwrap();
    }

    #[test]
    fn dual_of_a_surjection_is_an_order_embedding() {
        let b = cone();
        let two = twist_down(&builtin("S3").unwrap()).unwrap();
        let sig = Signature::of_profile(Profile::Brsa);
        let surj = enumerate_homs(&b, &two, sig)
            .unwrap()
            .into_iter()
            .find(|h| {
                let mut seen = [false; 2];
                for &v in &h.map {
                    seen[v] = true;
                }
                seen.iter().all(|&s| s)
            })
            .expect("a surjective morphism onto the two-chain exists");
        let dual = dual_hom(&surj).unwrap();
        for i in 0..dual.source.n() {
            for j in 0..dual.source.n() {
                if dual.map[i] == dual.map[j] {
                    assert_eq!(i, j);
                }
                if dual.target.poset.leq(dual.map[i], dual.map[j]) {
                    assert!(dual.source.poset.leq(i, j));
                }
            }
        }
    }

    #[test]
    fn identity_dualizes_to_identity() {
        let b = cone();
        let id = Morphism::identity(&b);
        let dd = dual_hom(&id).unwrap();
        assert_eq!(dd.map, (0..dd.source.n()).collect::<Vec<_>>());
    }

    #[test]
    fn accessibility_relation_on_the_bounded_cone() {
        let e_bot = crate::algebra::with_bounds(&builtin("E").unwrap()).unwrap();
        let bga = twist_down(&e_bot).unwrap();
        let x = dual_space(&bga).unwrap();
        let les = nucleus_relation(&x, Some(&bga)).unwrap();
        // the relation is the order minus the designated diagonal
        for i in 0..x.n() {
            for j in 0..x.n() {
                let expect = x.poset.leq(i, j) && !(i == j && x.d.contains(i));
                assert_eq!(les[i].contains(j), expect);
            }
        }
    }

    #[test]
    fn accessibility_equals_order_when_nothing_is_designated() {
        let poset = FinitePoset::from_covers(vec!["a".into(), "b".into()], &[(0, 1)]).unwrap();
        let x = StructuredSpace {
            name: "chain".into(),
            poset: poset.clone(),
            d: Subset::EMPTY,
            top: None,
            q: None,
            flavor: Flavor::Bg,
        };
        let les = nucleus_relation(&x, None).unwrap();
        for i in 0..2 {
            assert_eq!(les[i], poset.upset(i));
        }
    }

    #[test]
    fn space_isomorphism_search_respects_designated_points() {
        let b = cone();
        let x = dual_space(&b).unwrap();
        let iso = find_space_isomorphism(&x, &x).unwrap().unwrap();
        iso.validate_iso().unwrap();
        let mut y = x.clone();
        // ^f and ^c are order-symmetric leaves, so moving the designated
        // point to the other leaf still gives an isomorphic space
        y.d = Subset::singleton(x.poset.index_of("^f").unwrap());
        y.name = "moved".into();
        assert!(find_space_isomorphism(&x, &y).unwrap().is_some());
        let mut z = x.clone();
        z.d = Subset::EMPTY;
        z.name = "cleared".into();
        assert!(find_space_isomorphism(&x, &z).unwrap().is_none());
    }
}

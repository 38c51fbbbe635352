//! Twist representations: the enriched negative cone of a Sugihara monoid,
//! the two pair constructions over an algebra with Boolean constant (one
//! with nucleus-closed second coordinates, one with complementary pairs and
//! the coordinate-swap involution), and the structural isomorphism between
//! them. Pair operations are computed from explicit closed formulas and
//! pinned against transport along the isomorphism in tests; none of the
//! monoid laws on the outputs are assumed, all are revalidated.

use crate::algebra::{ensure_valid, negative_cone, AlgebraParts, FiniteAlgebra, Profile};
use crate::hom::{Morphism, Signature};
use crate::order::FinitePoset;
use crate::{Error, Result};

/// Which pair carrier a twist construction uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PairKind {
    /// `(a,b)` with `a∨b = t` and `Nb = b` for the nucleus `N = f→·`.
    Closed,
    /// `(a,b)` with `a∨b = t` and `a∧b ≤ f`.
    Complementary,
}

/// The pair carrier of a twist construction over a base algebra with
/// Boolean constant, in canonical order (first coordinate ascending, then
/// second).
#[derive(Debug, Clone)]
pub struct PairCarrier {
    pub base: FiniteAlgebra,
    pub pairs: Vec<(usize, usize)>,
    pub kind: PairKind,
}

impl PairCarrier {
    pub fn new(base: &FiniteAlgebra, kind: PairKind) -> Result<PairCarrier> {
        require_boolean_constant(base)?;
        ensure_valid(base)?;
        let t = base.unit_elem();
        let f = base.f.unwrap();
        let nuc = base.nucleus_of_f().unwrap();
        let mut pairs = Vec::new();
        for a in 0..base.n() {
            for b in 0..base.n() {
                if base.join_of(a, b) != t {
                    continue;
                }
                let keep = match kind {
                    PairKind::Closed => nuc[b] == b,
                    PairKind::Complementary => base.leq(base.meet_of(a, b), f),
                };
                if keep {
                    pairs.push((a, b));
                }
            }
        }
        Ok(PairCarrier {
            base: base.clone(),
            pairs,
            kind,
        })
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn index_of(&self, pair: (usize, usize)) -> Option<usize> {
        self.pairs.iter().position(|&p| p == pair)
    }

    pub fn named_pairs(&self) -> Vec<(String, String)> {
        self.pairs
            .iter()
            .map(|&(a, b)| {
                (
                    self.base.name_of(a).to_string(),
                    self.base.name_of(b).to_string(),
                )
            })
            .collect()
    }

    fn poset(&self) -> Result<FinitePoset> {
        let names = self
            .pairs
            .iter()
            .map(|&(a, b)| format!("({},{})", self.base.name_of(a), self.base.name_of(b)))
            .collect();
        // product of the base order with its reverse in the second slot
        FinitePoset::from_leq(names, |x, y| {
            let (a, b) = self.pairs[x];
            let (c, d) = self.pairs[y];
            self.base.leq(a, c) && self.base.leq(d, b)
        })
    }
}

fn require_boolean_constant(b: &FiniteAlgebra) -> Result<()> {
    if !matches!(b.profile, Profile::Brsa | Profile::Bga) {
        return Err(Error::ProfileMismatch {
            expected: "brsa or bga".into(),
            found: b.profile.as_str().into(),
        });
    }
    Ok(())
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

/// The enriched negative cone of a Sugihara monoid: the elements below the
/// unit with the truncated residual and the designated constant `¬t`.
/// Multiplication must coincide with meet on the cone.
pub fn twist_down(a: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    require_sugihara(a)?;
    let cone = negative_cone(a)?;
    for x in 0..cone.n() {
        for y in 0..cone.n() {
            if cone.mult_of(x, y) != cone.meet_of(x, y) {
                return Err(Error::ConeNotBrouwerian {
                    witness: format!("({},{})", cone.name_of(x), cone.name_of(y)),
                });
            }
        }
    }
    let t = a.unit_elem();
    let neg_t = a.neg_of(t);
    let f_new = cone
        .poset
        .index_of(a.name_of(neg_t))
        .ok_or_else(|| Error::Validation {
            subject: a.name.clone(),
            law: "¬t lies in the negative cone".into(),
            witness: a.name_of(neg_t).to_string(),
        })?;
    let profile = if a.profile == Profile::SugiharaBounded {
        Profile::Bga
    } else {
        Profile::Brsa
    };
    let parts = AlgebraParts {
        arrow: cone.arrow.clone(),
        unit: cone.unit,
        f: Some(f_new),
        bot: cone.bot,
        ..Default::default()
    };
    let out = FiniteAlgebra::assemble(format!("{}_down", a.name), cone.poset, profile, parts)?;
    ensure_valid(&out)?;
    Ok(out)
}

fn pair_algebra(
    name: String,
    carrier: &PairCarrier,
    profile: Profile,
    ops: PairOps<'_>,
) -> Result<FiniteAlgebra> {
    let b = &carrier.base;
    let k = carrier.len();
    let poset = carrier.poset()?;
    let lookup = |pair: (usize, usize), what: &str| -> Result<usize> {
        carrier.index_of(pair).ok_or_else(|| Error::Validation {
            subject: name.clone(),
            law: format!("{what} closes on the pair carrier"),
            witness: format!("({},{})", b.name_of(pair.0), b.name_of(pair.1)),
        })
    };
    let mut meet_t = vec![vec![0; k]; k];
    let mut join_t = vec![vec![0; k]; k];
    let mut mult_t = vec![vec![0; k]; k];
    let mut arrow_t = vec![vec![0; k]; k];
    for x in 0..k {
        for y in 0..k {
            let (p, q) = (carrier.pairs[x], carrier.pairs[y]);
            meet_t[x][y] = lookup((b.meet_of(p.0, q.0), b.join_of(p.1, q.1)), "meet")?;
            join_t[x][y] = lookup((b.join_of(p.0, q.0), b.meet_of(p.1, q.1)), "join")?;
            mult_t[x][y] = lookup((ops.mult)(b, p, q), "mult")?;
            arrow_t[x][y] = lookup((ops.arrow)(b, p, q), "arrow")?;
        }
    }
    let neg_t: Vec<usize> = carrier
        .pairs
        .iter()
        .map(|&p| lookup((ops.neg)(b, p), "involution"))
        .collect::<Result<_>>()?;
    let unit = lookup(ops.unit, "unit")?;
    let (bot, top) = if profile == Profile::SugiharaBounded {
        let least = poset.least().ok_or_else(|| Error::NotALattice {
            which: "least element",
            witness: name.clone(),
        })?;
        let bb = b.bot.expect("bounded base has a bottom");
        let designated = lookup((bb, ops.bot_second), "bottom pair")?;
        assert_eq!(
            least, designated,
            "the designated bottom pair must be the least pair"
        );
        (Some(least), poset.greatest())
    } else {
        (None, None)
    };
    let parts = AlgebraParts {
        mult: Some(mult_t),
        arrow: Some(arrow_t),
        unit: Some(unit),
        neg: Some(neg_t),
        bot,
        top,
        ..Default::default()
    };
    let out = FiniteAlgebra::assemble(name, poset, profile, parts)?;
    // The componentwise lattice formulas must agree with the glb/lub of the
    // pair order computed independently by the assembler.
    assert_eq!(
        out.meet, meet_t,
        "pair meet formula disagrees with the pair order"
    );
    assert_eq!(
        out.join, join_t,
        "pair join formula disagrees with the pair order"
    );
    ensure_valid(&out)?;
    Ok(out)
}

type Pair = (usize, usize);
type PairOp<'a> = &'a dyn Fn(&FiniteAlgebra, Pair, Pair) -> Pair;

struct PairOps<'a> {
    mult: PairOp<'a>,
    arrow: PairOp<'a>,
    neg: &'a dyn Fn(&FiniteAlgebra, Pair) -> Pair,
    unit: Pair,
    /// second coordinate of the designated bottom pair `(⊥, ·)` in the
    /// bounded case; the unit in both constructions
    bot_second: usize,
}

/// The twist monoid on nucleus-closed pairs.
pub fn nucleus_twist(b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let carrier = PairCarrier::new(b, PairKind::Closed)?;
    let nuc = b.nucleus_of_f().unwrap();
    let f = b.f.unwrap();
    let t = b.unit_elem();
    let profile = if b.profile == Profile::Bga {
        Profile::SugiharaBounded
    } else {
        Profile::Sugihara
    };
    let mult = move |b: &FiniteAlgebra, (a, b2): (usize, usize), (c, d): (usize, usize)| {
        let e = b.meet_of(b.arrow_of(a, d), b.arrow_of(c, b2));
        (b.arrow_of(e, b.meet_of(a, c)), nuc[e])
    };
    let nuc2 = b.nucleus_of_f().unwrap();
    let arrow = move |b: &FiniteAlgebra, (a, b2): (usize, usize), (c, d): (usize, usize)| {
        let w = b.meet_of(b.arrow_of(a, c), b.arrow_of(d, b2));
        (w, nuc2[b.arrow_of(w, b.meet_of(a, d))])
    };
    let nuc3 = b.nucleus_of_f().unwrap();
    let neg = move |b: &FiniteAlgebra, (a, b2): (usize, usize)| {
        let w = b.meet_of(b.arrow_of(a, f), b2);
        (w, nuc3[b.arrow_of(w, a)])
    };
    pair_algebra(
        format!("{}_sigma", b.name),
        &carrier,
        profile,
        PairOps {
            mult: &mult,
            arrow: &arrow,
            neg: &neg,
            unit: (t, t),
            bot_second: t,
        },
    )
}

/// The twist monoid on complementary pairs, carrying the coordinate-swap
/// involution. Multiplication and residual follow the explicit case
/// formulas for the transported operations.
pub fn twist_up(b: &FiniteAlgebra) -> Result<FiniteAlgebra> {
    let carrier = PairCarrier::new(b, PairKind::Complementary)?;
    let f = b.f.unwrap();
    let t = b.unit_elem();
    let profile = if b.profile == Profile::Bga {
        Profile::SugiharaBounded
    } else {
        Profile::Sugihara
    };
    // s = (((a∧f)→d) ∧ ((c∧f)→b)) → (a∧c), the curried form of the
    // transported product; the second coordinate re-truncates by s→f.
    let mult = move |b: &FiniteAlgebra, (a, b2): (usize, usize), (c, d): (usize, usize)| {
        let e = b.meet_of(
            b.arrow_of(b.meet_of(a, f), d),
            b.arrow_of(b.meet_of(c, f), b2),
        );
        let s = b.arrow_of(e, b.meet_of(a, c));
        let t2 = b.meet_of(e, b.arrow_of(s, f));
        (s, t2)
    };
    let arrow = move |b: &FiniteAlgebra, (a, b2): (usize, usize), (c, d): (usize, usize)| {
        let w = b.meet_of(b.arrow_of(a, c), b.arrow_of(b.meet_of(f, d), b2));
        let v = b.meet_of(
            b.arrow_of(
                b.meet_of(f, b.meet_of(b.arrow_of(a, c), b.arrow_of(d, b2))),
                b.meet_of(a, b.arrow_of(f, d)),
            ),
            b.arrow_of(w, f),
        );
        (w, v)
    };
    let neg = |_b: &FiniteAlgebra, (a, b2): (usize, usize)| (b2, a);
    pair_algebra(
        format!("{}_up", b.name),
        &carrier,
        profile,
        PairOps {
            mult: &mult,
            arrow: &arrow,
            neg: &neg,
            unit: (t, f),
            bot_second: t,
        },
    )
}

/// The isomorphism `(a,b) ↦ (a, Nb)` from the complementary-pair twist to
/// the nucleus-closed twist, validated in the full Sugihara signature
/// (which includes compatibility of the two involutions). The stated
/// inverse `(a,b) ↦ (a, b∧(a→f))` is verified to invert it pointwise.
pub fn twist_iso(b: &FiniteAlgebra) -> Result<Morphism> {
    let up = twist_up(b)?;
    let sigma = nucleus_twist(b)?;
    let up_pairs = PairCarrier::new(b, PairKind::Complementary)?;
    let sigma_pairs = PairCarrier::new(b, PairKind::Closed)?;
    let nuc = b.nucleus_of_f().unwrap();
    let f = b.f.unwrap();

    // (a→f) ∧ (f→b) = b holds on every complementary pair.
    for &(a, b2) in &up_pairs.pairs {
        let lhs = b.meet_of(b.arrow_of(a, f), b.arrow_of(f, b2));
        assert_eq!(
            lhs,
            b2,
            "(a→f)∧(f→b) = b fails at ({},{})",
            b.name_of(a),
            b.name_of(b2)
        );
    }

    let map: Vec<usize> = up_pairs
        .pairs
        .iter()
        .map(|&(a, b2)| {
            sigma_pairs
                .index_of((a, nuc[b2]))
                .expect("(a,Nb) lands on the nucleus-closed carrier")
        })
        .collect();
    let sig = Signature::of_profile(up.profile);
    let iso = Morphism::new(up.clone(), sigma.clone(), map, sig)?;
    if !iso.is_bijective() {
        return Err(Error::MorphismInvalid {
            law: "bijectivity".into(),
            witness: "-".into(),
        });
    }

    // pointwise inverse check both ways
    for (i, &(a, b2)) in sigma_pairs.pairs.iter().enumerate() {
        let back = up_pairs
            .index_of((a, b.meet_of(b2, b.arrow_of(a, f))))
            .expect("inverse formula lands on the complementary carrier");
        assert_eq!(iso.map[back], i, "stated inverse fails to invert");
    }
    for (i, &(a, b2)) in up_pairs.pairs.iter().enumerate() {
        let (c, d) = sigma_pairs.pairs[iso.map[i]];
        let back = up_pairs
            .index_of((c, b.meet_of(d, b.arrow_of(c, f))))
            .unwrap();
        assert_eq!(back, i, "stated inverse fails to invert at ({},{})", a, b2);
    }
    Ok(iso)
}

/// Lifts a morphism of algebras-with-Boolean-constant to the chosen twist:
/// `(a,b) ↦ (h(a), h(b))` on either pair carrier.
pub fn lift_hom(h: &Morphism, kind: PairKind) -> Result<Morphism> {
    require_boolean_constant(&h.source)?;
    require_boolean_constant(&h.target)?;
    // the map must preserve the full signature of its profile, whatever it
    // originally claimed
    Morphism::new(
        h.source.clone(),
        h.target.clone(),
        h.map.clone(),
        Signature::of_profile(h.source.profile),
    )?;
    let build = match kind {
        PairKind::Closed => nucleus_twist,
        PairKind::Complementary => twist_up,
    };
    let src = build(&h.source)?;
    let tgt = build(&h.target)?;
    let src_pairs = PairCarrier::new(&h.source, kind)?;
    let tgt_pairs = PairCarrier::new(&h.target, kind)?;
    let map: Vec<usize> = src_pairs
        .pairs
        .iter()
        .map(|&(a, b2)| {
            tgt_pairs
                .index_of((h.map[a], h.map[b2]))
                .ok_or_else(|| Error::MorphismInvalid {
                    law: "lifted pair lies on the target carrier".into(),
                    witness: format!("({},{})", h.source.name_of(a), h.source.name_of(b2)),
                })
        })
        .collect::<Result<_>>()?;
    Morphism::new(
        src,
        tgt,
        map,
        Signature::of_profile(tgt_pairs_profile(&h.target)),
    )
}

fn tgt_pairs_profile(b: &FiniteAlgebra) -> Profile {
    if b.profile == Profile::Bga {
        Profile::SugiharaBounded
    } else {
        Profile::Sugihara
    }
}

//! Morphisms between operation-table algebras, exhaustive hom enumeration,
//! and isomorphism search with invariant pruning.

use crate::algebra::{ensure_valid, FiniteAlgebra, Profile};
use crate::{Error, Result};

/// The set of operations and constants a map claims to preserve.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Signature {
    pub meet: bool,
    pub join: bool,
    pub mult: bool,
    pub arrow: bool,
    pub neg: bool,
    pub unit: bool,
    pub f: bool,
    pub bot: bool,
    pub top: bool,
}

impl Signature {
    pub fn lattice() -> Signature {
        Signature {
            meet: true,
            join: true,
            ..Default::default()
        }
    }

    /// meet, join, involution
    pub fn ilattice() -> Signature {
        Signature {
            neg: true,
            ..Signature::lattice()
        }
    }

    /// i-lattice signature plus both bounds
    pub fn kleene() -> Signature {
        Signature {
            bot: true,
            top: true,
            ..Signature::ilattice()
        }
    }

    /// The full signature of a profile.
    pub fn of_profile(p: Profile) -> Signature {
        Signature {
            meet: true,
            join: true,
            mult: p.has_free_mult(),
            arrow: p.has_arrow(),
            neg: p.has_neg(),
            unit: p.has_unit(),
            f: p.needs_f(),
            bot: p.needs_bot(),
            top: p.needs_top(),
        }
    }
}

/// A carrier map between two algebras, validated on construction against
/// the signature it claims to preserve.
#[derive(Debug, Clone)]
pub struct Morphism {
    pub source: FiniteAlgebra,
    pub target: FiniteAlgebra,
    pub map: Vec<usize>,
    pub signature: Signature,
}

impl Morphism {
    pub fn new(
        source: FiniteAlgebra,
        target: FiniteAlgebra,
        map: Vec<usize>,
        signature: Signature,
    ) -> Result<Morphism> {
        if map.len() != source.n() || map.iter().any(|&v| v >= target.n()) {
            return Err(Error::MorphismInvalid {
                law: "totality".into(),
                witness: format!("map length {} for carrier {}", map.len(), source.n()),
            });
        }
        let m = Morphism {
            source,
            target,
            map,
            signature,
        };
        m.check()?;
        Ok(m)
    }

    pub fn identity(a: &FiniteAlgebra) -> Morphism {
        Morphism {
            source: a.clone(),
            target: a.clone(),
            map: (0..a.n()).collect(),
            signature: Signature::of_profile(a.profile),
        }
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

    /// `g ∘ self` (apply `self` first).
    pub fn then(&self, g: &Morphism) -> Result<Morphism> {
        let map = self.map.iter().map(|&i| g.map[i]).collect();
        Morphism::new(self.source.clone(), g.target.clone(), map, self.signature)
    }

    pub fn inverse(&self) -> Result<Morphism> {
        if !self.is_bijective() {
            return Err(Error::MorphismInvalid {
                law: "bijectivity".into(),
                witness: "-".into(),
            });
        }
        let mut inv = vec![0; self.map.len()];
        for (i, &v) in self.map.iter().enumerate() {
            inv[v] = i;
        }
        Morphism::new(
            self.target.clone(),
            self.source.clone(),
            inv,
            self.signature,
        )
    }

    fn check(&self) -> Result<()> {
        let (a, b, h, sig) = (&self.source, &self.target, &self.map, self.signature);
        let fail = |law: &str, witness: String| -> Result<()> {
            Err(Error::MorphismInvalid {
                law: law.into(),
                witness,
            })
        };
        for x in 0..a.n() {
            for y in 0..a.n() {
                if sig.meet && h[a.meet_of(x, y)] != b.meet_of(h[x], h[y]) {
                    return fail("meet", wit2(a, x, y));
                }
                if sig.join && h[a.join_of(x, y)] != b.join_of(h[x], h[y]) {
                    return fail("join", wit2(a, x, y));
                }
                if sig.mult && h[a.mult_of(x, y)] != b.mult_of(h[x], h[y]) {
                    return fail("mult", wit2(a, x, y));
                }
                if sig.arrow && h[a.arrow_of(x, y)] != b.arrow_of(h[x], h[y]) {
                    return fail("arrow", wit2(a, x, y));
                }
            }
            if sig.neg && h[a.neg_of(x)] != b.neg_of(h[x]) {
                return fail("neg", a.name_of(x).to_string());
            }
        }
        if sig.unit && h[a.unit_elem()] != b.unit_elem() {
            return fail("unit", a.name_of(a.unit_elem()).to_string());
        }
        if sig.f && h[a.f.unwrap()] != b.f.unwrap() {
            return fail("constant f", a.name_of(a.f.unwrap()).to_string());
        }
        if sig.bot && h[a.bot.unwrap()] != b.bot.unwrap() {
            return fail("constant bot", a.name_of(a.bot.unwrap()).to_string());
        }
        if sig.top && h[a.top.unwrap()] != b.top.unwrap() {
            return fail("constant top", a.name_of(a.top.unwrap()).to_string());
        }
        Ok(())
    }
}

fn wit2(a: &FiniteAlgebra, x: usize, y: usize) -> String {
    format!("({},{})", a.name_of(x), a.name_of(y))
}

/// All signature-preserving maps from `a` to `b`, in lexicographic order of
/// their value vectors. Backtracking over the carrier with forward pruning
/// on every operation whose arguments and value are already assigned.
pub fn enumerate_homs(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    sig: Signature,
) -> Result<Vec<Morphism>> {
    ensure_valid(a)?;
    ensure_valid(b)?;
    let n = a.n();
    let mut out = Vec::new();
    let mut partial: Vec<usize> = Vec::with_capacity(n);
    search(a, b, sig, &mut partial, &mut |map| {
        out.push(Morphism {
            source: a.clone(),
            target: b.clone(),
            map: map.to_vec(),
            signature: sig,
        });
    });
    for m in &out {
        m.check()
            .expect("search only yields signature-preserving maps");
    }
    Ok(out)
}

fn search(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    sig: Signature,
    partial: &mut Vec<usize>,
    emit: &mut dyn FnMut(&[usize]),
) {
    let n = a.n();
    if partial.len() == n {
        emit(partial);
        return;
    }
    for v in 0..b.n() {
        partial.push(v);
        if consistent(a, b, sig, partial, false) {
            search(a, b, sig, partial, emit);
        }
        partial.pop();
    }
}

fn consistent(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    sig: Signature,
    h: &[usize],
    injective: bool,
) -> bool {
    let k = h.len() - 1; // the element just assigned
    if injective && h[..k].contains(&h[k]) {
        return false;
    }
    let constant_ok = |want: Option<usize>, have: Option<usize>| -> bool {
        match (want, have) {
            (Some(ca), Some(cb)) => ca != k || h[k] == cb,
            _ => true,
        }
    };
    if sig.unit && !constant_ok(a.unit, b.unit) {
        return false;
    }
    if sig.f && !constant_ok(a.f, b.f) {
        return false;
    }
    if sig.bot && !constant_ok(a.bot, b.bot) {
        return false;
    }
    if sig.top && !constant_ok(a.top, b.top) {
        return false;
    }
    if sig.neg {
        let nk = a.neg_of(k);
        if nk <= k && h[nk] != b.neg_of(h[k]) {
            return false;
        }
        for x in 0..k {
            if a.neg_of(x) == k && b.neg_of(h[x]) != h[k] {
                return false;
            }
        }
    }
    for x in 0..=k {
        for y in 0..=k {
            if x < k && y < k {
                // previously checked pairs can only gain a newly assigned value
                let fresh = sig.meet && a.meet_of(x, y) == k
                    || sig.join && a.join_of(x, y) == k
                    || sig.mult && a.mult_of(x, y) == k
                    || sig.arrow && a.arrow_of(x, y) == k;
                if !fresh {
                    continue;
                }
            }
            let ops: [(bool, usize, usize); 4] = [
                (sig.meet, a.meet_of(x, y), b.meet_of(h[x], h[y])),
                (sig.join, a.join_of(x, y), b.join_of(h[x], h[y])),
                (
                    sig.mult,
                    if sig.mult { a.mult_of(x, y) } else { 0 },
                    if sig.mult { b.mult_of(h[x], h[y]) } else { 0 },
                ),
                (
                    sig.arrow,
                    if sig.arrow { a.arrow_of(x, y) } else { 0 },
                    if sig.arrow { b.arrow_of(h[x], h[y]) } else { 0 },
                ),
            ];
            for (on, src, tgt) in ops {
                if on && src <= k && h[src] != tgt {
                    return false;
                }
            }
        }
    }
    true
}

/// A profile-signature isomorphism between two validated algebras of the
/// same profile, or `None`. Deterministic: the first witness in canonical
/// search order. Candidates are pruned by order invariants before
/// backtracking.
pub fn find_isomorphism(a: &FiniteAlgebra, b: &FiniteAlgebra) -> Result<Option<Morphism>> {
    if a.profile != b.profile {
        return Err(Error::ProfileMismatch {
            expected: a.profile.as_str().into(),
            found: b.profile.as_str().into(),
        });
    }
    ensure_valid(a)?;
    ensure_valid(b)?;
    if a.n() != b.n() {
        return Ok(None);
    }
    let sig = Signature::of_profile(a.profile);
    let ia = invariants(a);
    let ib = invariants(b);
    {
        let mut sa = ia.clone();
        let mut sb = ib.clone();
        sa.sort();
        sb.sort();
        if sa != sb {
            return Ok(None);
        }
    }
    let n = a.n();
    let mut partial: Vec<usize> = Vec::with_capacity(n);
    if iso_search(a, b, sig, &ia, &ib, &mut partial) {
        let m = Morphism {
            source: a.clone(),
            target: b.clone(),
            map: partial,
            signature: sig,
        };
        m.check().expect("search only yields isomorphisms");
        return Ok(Some(m));
    }
    Ok(None)
}

type Invariant = (usize, usize, usize, usize, u8);

fn invariants(a: &FiniteAlgebra) -> Vec<Invariant> {
    let covers = a.poset.covers();
    (0..a.n())
        .map(|i| {
            let upd = covers.iter().filter(|&&(lo, _)| lo == i).count();
            let dnd = covers.iter().filter(|&&(_, hi)| hi == i).count();
            let mut flags = 0u8;
            for (bit, c) in [a.unit, a.f, a.bot, a.top].into_iter().enumerate() {
                if c == Some(i) {
                    flags |= 1 << bit;
                }
            }
            (
                a.poset.upset(i).len(),
                a.poset.downset(i).len(),
                upd,
                dnd,
                flags,
            )
        })
        .collect()
}

fn iso_search(
    a: &FiniteAlgebra,
    b: &FiniteAlgebra,
    sig: Signature,
    ia: &[Invariant],
    ib: &[Invariant],
    partial: &mut Vec<usize>,
) -> bool {
    let n = a.n();
    if partial.len() == n {
        return true;
    }
    let k = partial.len();
    for v in 0..n {
        if ia[k] != ib[v] {
            continue;
        }
        // order profile must match in both directions
        if !(0..k)
            .all(|x| a.leq(x, k) == b.leq(partial[x], v) && a.leq(k, x) == b.leq(v, partial[x]))
        {
            continue;
        }
        partial.push(v);
        if consistent(a, b, sig, partial, true) && iso_search(a, b, sig, ia, ib, partial) {
            return true;
        }
        partial.pop();
    }
    false
}

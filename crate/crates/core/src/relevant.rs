//! Relevant spaces: the Urquhart dual of a bounded Sugihara monoid, the
//! closed-form case analysis for multiplying prime filters, and the
//! reflection construction that builds a relevant space out of an unpointed
//! Sugihara space by mirroring its non-designated points.

use crate::algebra::{ensure_valid, prime_filters, AlgebraParts, FiniteAlgebra, Profile, Table};
use crate::esakia::{ensure_valid_space, Flavor, SpaceMap, StructuredSpace};
use crate::order::{FinitePoset, SubsetFamily};
use crate::report::ValidationReport;
use crate::subset::Subset;
use crate::{Error, Result};

/// A finite poset with a ternary relation, an antitone involution, and a
/// designated up-set acting as the unit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelevantSpace {
    pub name: String,
    pub poset: FinitePoset,
    /// `r[x][y] = { z : R x y z }`
    pub r: Vec<Vec<Subset>>,
    /// the involution `'`
    pub prime: Vec<usize>,
    pub i_set: Subset,
}

impl RelevantSpace {
    pub fn n(&self) -> usize {
        self.poset.n()
    }

    pub fn holds(&self, x: usize, y: usize, z: usize) -> bool {
        self.r[x][y].contains(z)
    }

    /// `U ⊠ V = { z : ∃x∈U ∃y∈V. Rxyz }`
    pub fn fusion(&self, u: Subset, v: Subset) -> Subset {
        let mut out = Subset::EMPTY;
        for x in u.iter() {
            for y in v.iter() {
                out = out.union(self.r[x][y]);
            }
        }
        out
    }

    /// `U ⇒ V = { x : ∀y,z. (Rxyz and y∈U) implies z∈V }`
    pub fn implication(&self, u: Subset, v: Subset) -> Subset {
        Subset::from_indices(
            (0..self.n()).filter(|&x| u.iter().all(|y| self.r[x][y].is_subset_of(v))),
        )
    }

    /// `¬U = { x : x' ∉ U }`
    pub fn involution_image(&self, u: Subset) -> Subset {
        Subset::from_indices((0..self.n()).filter(|&x| !u.contains(self.prime[x])))
    }

    /// All R-triples, sorted.
    pub fn triples(&self) -> Vec<(usize, usize, usize)> {
        let mut out = Vec::new();
        for x in 0..self.n() {
            for y in 0..self.n() {
                for z in self.r[x][y].iter() {
                    out.push((x, y, z));
                }
            }
        }
        out
    }
}

/// Checks the relevant-space conditions (monotonicity, separation, antitone
/// involution, unit law) together with the laws that cut out the idempotent
/// involutive case: commutativity, lifted associativity, `x⊙x = ↑x`,
/// period-two involution, and the contraposition triple law.
pub fn validate_relevant(s: &RelevantSpace) -> ValidationReport {
    let mut rep = ValidationReport::new(format!("{} [relevant]", s.name));
    let n = s.n();
    let nm = |i: usize| s.poset.name(i).to_string();
    let wit3 = |x: usize, y: usize, z: usize| format!("({},{},{})", nm(x), nm(y), nm(z));

    let ups = s.poset.up_sets();
    let mut w = None;
    'cl: for &u in &ups {
        for &v in &ups {
            if !s.poset.is_up_set(s.fusion(u, v)) || !s.poset.is_up_set(s.implication(u, v)) {
                w = Some(format!(
                    "({},{})",
                    s.poset.render_subset(u),
                    s.poset.render_subset(v)
                ));
                break 'cl;
            }
        }
    }
    rep.record("fusion and implication preserve up-sets", w);

    let mut w = None;
    'mono: for x1 in 0..n {
        for y1 in 0..n {
            for z1 in s.r[x1][y1].iter() {
                for x2 in s.poset.downset(x1).iter() {
                    for y2 in s.poset.downset(y1).iter() {
                        for z2 in s.poset.upset(z1).iter() {
                            if !s.holds(x2, y2, z2) {
                                w = Some(wit3(x2, y2, z2));
                                break 'mono;
                            }
                        }
                    }
                }
            }
        }
    }
    rep.record("R is down-down-up monotone", w);

    let mut w = None;
    'sep: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                if s.holds(x, y, z) {
                    continue;
                }
                let separated = ups.iter().any(|&u| {
                    u.contains(x)
                        && ups
                            .iter()
                            .any(|&v| v.contains(y) && !s.fusion(u, v).contains(z))
                });
                if !separated {
                    w = Some(wit3(x, y, z));
                    break 'sep;
                }
            }
        }
    }
    rep.record("non-triples are separated by up-sets", w);

    let mut w = None;
    for x in 0..n {
        for y in 0..n {
            if s.poset.leq(x, y) && !s.poset.leq(s.prime[y], s.prime[x]) && w.is_none() {
                w = Some(format!("({},{})", nm(x), nm(y)));
            }
        }
    }
    rep.record("involution is antitone", w);

    rep.record(
        "unit set is an up-set",
        if s.poset.is_up_set(s.i_set) {
            None
        } else {
            Some(s.poset.render_subset(s.i_set))
        },
    );
    let mut w = None;
    for y in 0..n {
        for z in 0..n {
            let via = s.i_set.iter().any(|x| s.holds(x, y, z));
            if s.poset.leq(y, z) != via && w.is_none() {
                w = Some(format!("({},{})", nm(y), nm(z)));
            }
        }
    }
    rep.record("y ≤ z iff some unit point relates them", w);

    let mut w = None;
    for x in 0..n {
        for y in 0..n {
            if s.r[x][y] != s.r[y][x] && w.is_none() {
                w = Some(format!("({},{})", nm(x), nm(y)));
            }
        }
    }
    rep.record("fusion is commutative", w);

    let mut w = None;
    'assoc: for x in 0..n {
        for y in 0..n {
            for z in 0..n {
                let left = s.r[y][z]
                    .iter()
                    .fold(Subset::EMPTY, |acc, wp| acc.union(s.r[x][wp]));
                let right = s.r[x][y]
                    .iter()
                    .fold(Subset::EMPTY, |acc, wp| acc.union(s.r[wp][z]));
                if left != right {
                    w = Some(wit3(x, y, z));
                    break 'assoc;
                }
            }
        }
    }
    rep.record("fusion is associative under the set lifting", w);

    // read as a set identity: the points reachable from x with itself are
    // exactly those above x
    rep.record(
        "x⊙x is the principal up-set of x",
        (0..n).find(|&x| s.r[x][x] != s.poset.upset(x)).map(nm),
    );

    rep.record(
        "involution has period two",
        (0..n).find(|&x| s.prime[s.prime[x]] != x).map(nm),
    );

    let mut w = None;
    'contra: for x in 0..n {
        for y in 0..n {
            for z in s.r[x][y].iter() {
                if !s.holds(x, s.prime[z], s.prime[y]) {
                    w = Some(wit3(x, y, z));
                    break 'contra;
                }
            }
        }
    }
    rep.record("z ∈ x⊙y implies y' ∈ x⊙z'", w);

    rep
}

pub fn ensure_valid_relevant(s: &RelevantSpace) -> Result<()> {
    let rep = validate_relevant(s);
    match rep.first_failure() {
        None => Ok(()),
        Some(c) => Err(Error::Validation {
            subject: s.name.clone(),
            law: c.law.clone(),
            witness: c.witness.clone().unwrap_or_default(),
        }),
    }
}

/// A point map between relevant spaces, validated against the relevant-map
/// conditions on construction.
#[derive(Debug, Clone)]
pub struct RelevantMap {
    pub source: RelevantSpace,
    pub target: RelevantSpace,
    pub map: Vec<usize>,
}

impl RelevantMap {
    pub fn new(
        source: RelevantSpace,
        target: RelevantSpace,
        map: Vec<usize>,
    ) -> Result<RelevantMap> {
        if map.len() != source.n() || map.iter().any(|&v| v >= target.n()) {
            return Err(Error::MorphismInvalid {
                law: "totality".into(),
                witness: format!("map length {}", map.len()),
            });
        }
        let m = RelevantMap {
            source,
            target,
            map,
        };
        m.validate()?;
        Ok(m)
    }

    fn fail(law: &str, witness: String) -> Error {
        Error::MorphismInvalid {
            law: law.into(),
            witness,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let (s, t, h) = (&self.source, &self.target, &self.map);
        let n = s.n();
        for x in 0..n {
            for y in 0..n {
                if s.poset.leq(x, y) && !t.poset.leq(h[x], h[y]) {
                    return Err(Self::fail(
                        "monotonicity",
                        format!("({},{})", s.poset.name(x), s.poset.name(y)),
                    ));
                }
            }
        }
        for x in 0..n {
            for y in 0..n {
                for z in s.r[x][y].iter() {
                    if !t.holds(h[x], h[y], h[z]) {
                        return Err(Self::fail(
                            "triples are preserved",
                            format!(
                                "({},{},{})",
                                s.poset.name(x),
                                s.poset.name(y),
                                s.poset.name(z)
                            ),
                        ));
                    }
                }
            }
        }
        // R x y φ(z) in the target lifts to a triple below/above in the source
        for z in 0..n {
            for x in 0..t.n() {
                for y in 0..t.n() {
                    if !t.holds(x, y, h[z]) {
                        continue;
                    }
                    let ok = (0..n).any(|u| {
                        (0..n).any(|v| {
                            s.holds(u, v, z) && t.poset.leq(x, h[u]) && t.poset.leq(y, h[v])
                        })
                    });
                    if !ok {
                        return Err(Self::fail(
                            "triples into the image lift",
                            format!(
                                "({},{},{})",
                                t.poset.name(x),
                                t.poset.name(y),
                                s.poset.name(z)
                            ),
                        ));
                    }
                }
            }
        }
        // R φ(x) y z in the target factors through the source
        for x in 0..n {
            for y in 0..t.n() {
                for z in 0..t.n() {
                    if !t.holds(h[x], y, z) {
                        continue;
                    }
                    let ok = (0..n).any(|u| {
                        (0..n).any(|v| {
                            s.holds(x, u, v) && t.poset.leq(y, h[u]) && t.poset.leq(h[v], z)
                        })
                    });
                    if !ok {
                        return Err(Self::fail(
                            "triples from the image factor",
                            format!(
                                "({},{},{})",
                                s.poset.name(x),
                                t.poset.name(y),
                                t.poset.name(z)
                            ),
                        ));
                    }
                }
            }
        }
        for x in 0..n {
            if h[s.prime[x]] != t.prime[h[x]] {
                return Err(Self::fail("involution", s.poset.name(x).to_string()));
            }
        }
        let preimage = Subset::from_indices((0..n).filter(|&x| t.i_set.contains(h[x])));
        if preimage != s.i_set {
            return Err(Self::fail(
                "unit set preimage",
                s.poset.render_subset(preimage),
            ));
        }
        Ok(())
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

    /// A bijection that is an order isomorphism, commutes with the
    /// involutions, carries the unit set onto the unit set, and matches the
    /// ternary relations in both directions.
    pub fn validate_iso(&self) -> Result<()> {
        if !self.is_bijective() {
            return Err(Self::fail("bijectivity", "-".into()));
        }
        let (s, t, h) = (&self.source, &self.target, &self.map);
        let n = s.n();
        for x in 0..n {
            for y in 0..n {
                if s.poset.leq(x, y) != t.poset.leq(h[x], h[y]) {
                    return Err(Self::fail(
                        "order isomorphism",
                        format!("({},{})", s.poset.name(x), s.poset.name(y)),
                    ));
                }
                for z in 0..n {
                    if s.holds(x, y, z) != t.holds(h[x], h[y], h[z]) {
                        return Err(Self::fail(
                            "triple isomorphism",
                            format!(
                                "({},{},{})",
                                s.poset.name(x),
                                s.poset.name(y),
                                s.poset.name(z)
                            ),
                        ));
                    }
                }
            }
            if h[s.prime[x]] != t.prime[h[x]] {
                return Err(Self::fail("involution", s.poset.name(x).to_string()));
            }
        }
        let image = Subset::from_indices(s.i_set.iter().map(|x| h[x]));
        if image != t.i_set {
            return Err(Self::fail(
                "unit set equality",
                t.poset.render_subset(image),
            ));
        }
        Ok(())
    }

    pub fn then(&self, g: &RelevantMap) -> Result<RelevantMap> {
        let map = self.map.iter().map(|&i| g.map[i]).collect();
        RelevantMap::new(self.source.clone(), g.target.clone(), map)
    }
}

fn require_bounded_sugihara(a: &FiniteAlgebra) -> Result<()> {
    if a.profile != Profile::SugiharaBounded {
        return Err(Error::ProfileMismatch {
            expected: "sugihara_bounded".into(),
            found: a.profile.as_str().into(),
        });
    }
    Ok(())
}

/// `x·y = { c : ∃a∈x ∃b∈y. a·b ≤ c }` on subsets of the carrier.
pub fn complex_product(a: &FiniteAlgebra, x: Subset, y: Subset) -> Subset {
    let mut out = Subset::EMPTY;
    for p in x.iter() {
        for q in y.iter() {
            out = out.union(a.poset.upset(a.mult_of(p, q)));
        }
    }
    out
}

fn filter_prime(a: &FiniteAlgebra, x: Subset) -> Subset {
    Subset::from_indices((0..a.n()).filter(|&e| !x.contains(a.neg_of(e))))
}

/// Multiplies two generalized prime filters by the closed-form case
/// analysis (join when both contain the unit or they are incomparable, the
/// larger absolute value when comparable, the meet on equal absolute
/// values), and asserts the result against the brute-force complex product.
pub fn filter_mult(a: &FiniteAlgebra, x: Subset, y: Subset) -> Result<Subset> {
    require_bounded_sugihara(a)?;
    ensure_valid(a)?;
    let family = prime_filters(a, true);
    for m in [x, y] {
        if family.index_of(m).is_none() {
            return Err(Error::Validation {
                subject: a.name.clone(),
                law: "argument is a generalized prime filter".into(),
                witness: a.poset.render_subset(m),
            });
        }
    }
    let t = a.unit_elem();
    let in_unit = |m: Subset| m.contains(t);
    // |m| = m when the unit lies in m, otherwise m' (which then contains it)
    let abs = |m: Subset| if in_unit(m) { m } else { filter_prime(a, m) };
    let comparable = x.is_subset_of(y) || y.is_subset_of(x);

    let value = if (in_unit(x) && in_unit(y)) || !comparable {
        filter_join(&family, x, y)?
    } else {
        let (ax, ay) = (abs(x), abs(y));
        if ax.is_subset_of(ay) && ax != ay {
            y
        } else if ay.is_subset_of(ax) && ax != ay {
            x
        } else {
            assert_eq!(ax, ay, "comparable filters have comparable absolute values");
            x.inter(y)
        }
    };

    let brute = complex_product(a, x, y);
    assert_eq!(
        value,
        brute,
        "case formula disagrees with the complex product on ({},{})",
        a.poset.render_subset(x),
        a.poset.render_subset(y)
    );
    Ok(value)
}

/// Least upper bound of two filters inside the generalized prime filter
/// family; the minimal common superset is asserted to be unique.
fn filter_join(family: &SubsetFamily, x: Subset, y: Subset) -> Result<Subset> {
    let uppers: Vec<Subset> = family
        .members
        .iter()
        .copied()
        .filter(|&m| x.is_subset_of(m) && y.is_subset_of(m))
        .collect();
    let minimal: Vec<Subset> = uppers
        .iter()
        .copied()
        .filter(|&m| !uppers.iter().any(|&o| o != m && o.is_subset_of(m)))
        .collect();
    match minimal.as_slice() {
        [one] => Ok(*one),
        _ => Err(Error::Validation {
            subject: "filter join".into(),
            law: "a unique least upper bound exists".into(),
            witness: format!("{} candidates", minimal.len()),
        }),
    }
}

/// The Urquhart dual of a bounded Sugihara monoid: proper prime filters,
/// `Rxyz` iff the complex product of `x` and `y` is contained in `z`, the
/// involution `x' = {a : ¬a ∉ x}`, and the unit set of filters containing
/// the monoid unit.
pub fn urquhart_dual(a: &FiniteAlgebra) -> Result<RelevantSpace> {
    require_bounded_sugihara(a)?;
    ensure_valid(a)?;
    let family = prime_filters(a, false);
    let k = family.len();
    let names: Vec<String> = family.members.iter().map(|&m| point_name(a, m)).collect();
    let poset = FinitePoset::from_leq(names, |i, j| {
        family.members[i].is_subset_of(family.members[j])
    })?;
    let mut r: Vec<Vec<Subset>> = vec![vec![Subset::EMPTY; k]; k];
    for i in 0..k {
        for j in 0..k {
            let prod = complex_product(a, family.members[i], family.members[j]);
            r[i][j] =
                Subset::from_indices((0..k).filter(|&z| prod.is_subset_of(family.members[z])));
        }
    }
    let prime: Vec<usize> = family
        .members
        .iter()
        .map(|&m| {
            family
                .index_of(filter_prime(a, m))
                .ok_or_else(|| Error::Validation {
                    subject: a.name.clone(),
                    law: "the involute of a prime filter is a prime filter".into(),
                    witness: a.poset.render_subset(m),
                })
        })
        .collect::<Result<_>>()?;
    let t = a.unit_elem();
    let i_set = Subset::from_indices((0..k).filter(|&i| family.members[i].contains(t)));
    let out = RelevantSpace {
        name: format!("{}_urq", a.name),
        poset,
        r,
        prime,
        i_set,
    };
    ensure_valid_relevant(&out)?;
    Ok(out)
}

fn point_name(a: &FiniteAlgebra, filter: Subset) -> String {
    let min = filter
        .iter()
        .find(|&m| filter.is_subset_of(a.poset.upset(m)))
        .expect("a finite filter is a principal up-set");
    format!("^{}", a.name_of(min))
}

/// The algebra of all up-sets of a relevant space, with fusion,
/// implication, the unit up-set, the involution `¬U = {x : x' ∉ U}`, and
/// the set bounds.
pub fn relevant_algebra(s: &RelevantSpace) -> Result<FiniteAlgebra> {
    ensure_valid_relevant(s)?;
    let members = s.poset.up_sets();
    if members.len() > crate::subset::MAX_CARRIER {
        return Err(Error::CarrierTooLarge {
            size: members.len(),
            max: crate::subset::MAX_CARRIER,
        });
    }
    let n = members.len();
    let index_of = |u: Subset| -> Result<usize> {
        members.binary_search(&u).map_err(|_| Error::Validation {
            subject: s.name.clone(),
            law: "operations close on the up-sets".into(),
            witness: s.poset.render_subset(u),
        })
    };
    let names: Vec<String> = members.iter().map(|&m| s.poset.render_subset(m)).collect();
    let poset = FinitePoset::from_leq(names, |i, j| members[i].is_subset_of(members[j]))?;
    let mut mult: Table = vec![vec![0; n]; n];
    let mut arrow: Table = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            mult[i][j] = index_of(s.fusion(members[i], members[j]))?;
            arrow[i][j] = index_of(s.implication(members[i], members[j]))?;
        }
    }
    let neg: Vec<usize> = members
        .iter()
        .map(|&m| index_of(s.involution_image(m)))
        .collect::<Result<_>>()?;
    let parts = AlgebraParts {
        mult: Some(mult),
        arrow: Some(arrow),
        unit: Some(index_of(s.i_set)?),
        neg: Some(neg),
        bot: Some(index_of(Subset::EMPTY)?),
        top: Some(index_of(Subset::full(s.n()))?),
        ..Default::default()
    };
    let out = FiniteAlgebra::assemble(
        format!("{}_alg", s.name),
        poset,
        Profile::SugiharaBounded,
        parts,
    )?;
    ensure_valid(&out)?;
    Ok(out)
}

/// Point bookkeeping for a reflected space: the original points keep their
/// indices; each non-designated point `i` gains a mirror copy `-i`.
struct Reflection {
    n_orig: usize,
    /// original index of each mirror point, in order
    mirrored: Vec<usize>,
    /// the involution on the enlarged carrier
    minus: Vec<usize>,
}

impl Reflection {
    fn build(x: &StructuredSpace) -> Reflection {
        let n = x.n();
        let mirrored: Vec<usize> = (0..n).filter(|&i| !x.d.contains(i)).collect();
        let mut minus: Vec<usize> = (0..n).collect();
        for (r, &i) in mirrored.iter().enumerate() {
            minus[i] = n + r;
            minus.push(i);
        }
        for i in x.d.iter() {
            minus[i] = i;
        }
        Reflection {
            n_orig: n,
            mirrored,
            minus,
        }
    }

    fn total(&self) -> usize {
        self.n_orig + self.mirrored.len()
    }

    fn original(&self, p: usize) -> usize {
        if p < self.n_orig {
            p
        } else {
            self.mirrored[p - self.n_orig]
        }
    }
}

/// The reflection of an unpointed Sugihara space: the space itself on top,
/// a mirrored copy of its non-designated part below, the order glued by
/// comparability, and the ternary relation generated by the partial
/// multiplication (join, larger absolute value, or meet, when defined).
pub fn reflect_space(x: &StructuredSpace) -> Result<RelevantSpace> {
    if x.flavor != Flavor::SugiharaUnpointed {
        return Err(Error::ProfileMismatch {
            expected: "sugihara_unpointed".into(),
            found: x.flavor.as_str().into(),
        });
    }
    ensure_valid_space(x)?;
    let refl = Reflection::build(x);
    let m = refl.total();
    let n = refl.n_orig;
    let names: Vec<String> = (0..m)
        .map(|p| {
            if p < n {
                x.poset.name(p).to_string()
            } else {
                format!("-{}", x.poset.name(refl.original(p)))
            }
        })
        .collect();
    let leq = |p: usize, q: usize| -> bool {
        match (p < n, q < n) {
            (true, true) => x.poset.leq(p, q),
            (false, false) => x.poset.leq(refl.original(q), refl.original(p)),
            (false, true) => x.poset.comparable(refl.original(p), q),
            (true, false) => false,
        }
    };
    let poset = FinitePoset::from_leq(names, leq)?;

    let abs = |p: usize| refl.original(p);
    let comparable = |p: usize, q: usize| poset.leq(p, q) || poset.leq(q, p);
    let partial_mult = |p: usize, q: usize| -> Option<usize> {
        if (p < n && q < n) || !comparable(p, q) {
            // join, provided it exists
            let uppers = poset.upset(p).inter(poset.upset(q));
            uppers.iter().find(|&w| uppers.is_subset_of(poset.upset(w)))
        } else {
            let (ap, aq) = (abs(p), abs(q));
            if ap == aq {
                Some(if poset.leq(p, q) { p } else { q })
            } else if x.poset.lt(ap, aq) {
                Some(q)
            } else if x.poset.lt(aq, ap) {
                Some(p)
            } else {
                unreachable!("comparable points have comparable absolute values")
            }
        }
    };
    let mut r: Vec<Vec<Subset>> = vec![vec![Subset::EMPTY; m]; m];
    for p in 0..m {
        for q in 0..m {
            if let Some(w) = partial_mult(p, q) {
                r[p][q] = poset.upset(w);
            }
        }
    }
    let out = RelevantSpace {
        name: format!("{}_refl", x.name),
        poset,
        r,
        prime: refl.minus,
        // the unit points are exactly the originals
        i_set: Subset::full(n),
    };
    ensure_valid_relevant(&out)?;
    Ok(out)
}

/// Extracts the unpointed Sugihara space of unit points from a relevant
/// space, with the fixed points of the involution designated.
pub fn project_space(s: &RelevantSpace) -> Result<StructuredSpace> {
    ensure_valid_relevant(s)?;
    let (poset, old) = s.poset.restrict(s.i_set);
    let d = Subset::from_indices((0..old.len()).filter(|&i| s.prime[old[i]] == old[i]));
    let x = StructuredSpace {
        name: format!("{}_proj", s.name),
        poset,
        d,
        top: None,
        q: None,
        flavor: Flavor::SugiharaUnpointed,
    };
    ensure_valid_space(&x)?;
    Ok(x)
}

/// The alignment isomorphism from the Urquhart dual of a bounded Sugihara
/// monoid onto the reflection of its projected unit part: unit filters map
/// to themselves, the rest to the mirror of their involutes.
pub fn reflection_iso(a: &FiniteAlgebra) -> Result<RelevantMap> {
    let urq = urquhart_dual(a)?;
    let projected = project_space(&urq)?;
    let target = reflect_space(&projected)?;
    let i_points: Vec<usize> = urq.i_set.iter().collect();
    let rank_in_i = |p: usize| i_points.iter().position(|&q| q == p);
    let refl = Reflection::build(&projected);
    let map: Vec<usize> = (0..urq.n())
        .map(|p| {
            if let Some(rank) = rank_in_i(p) {
                rank
            } else {
                let mirrored = rank_in_i(urq.prime[p])
                    .expect("the involute of a non-unit point is a unit point");
                refl.minus[mirrored]
            }
        })
        .collect();
    let iso = RelevantMap::new(urq, target, map)?;
    iso.validate_iso()?;
    Ok(iso)
}

/// The isomorphism from the reflection of the projected unit part of a
/// relevant space back onto the space: the identity on the unit points,
/// `z ↦ (-z)'` on the mirrored ones.
pub fn reflection_counit(s: &RelevantSpace) -> Result<RelevantMap> {
    let projected = project_space(s)?;
    let source = reflect_space(&projected)?;
    let old: Vec<usize> = s.i_set.iter().collect();
    let refl = Reflection::build(&projected);
    let map: Vec<usize> = (0..source.n())
        .map(|p| {
            let orig_in_proj = refl.original(p);
            let point_in_s = old[orig_in_proj];
            if p < refl.n_orig {
                point_in_s
            } else {
                s.prime[point_in_s]
            }
        })
        .collect();
    let iso = RelevantMap::new(source, s.clone(), map)?;
    iso.validate_iso()?;
    Ok(iso)
}

/// Lifts a morphism of unpointed Sugihara spaces to the reflections:
/// `φ` on the original points, `-φ(-x)` on the mirrored ones.
pub fn reflect_hom(phi: &SpaceMap) -> Result<RelevantMap> {
    if phi.source.flavor != Flavor::SugiharaUnpointed
        || phi.target.flavor != Flavor::SugiharaUnpointed
    {
        return Err(Error::ProfileMismatch {
            expected: "sugihara_unpointed".into(),
            found: format!(
                "{}/{}",
                phi.source.flavor.as_str(),
                phi.target.flavor.as_str()
            ),
        });
    }
    phi.validate()?;
    let src = reflect_space(&phi.source)?;
    let tgt = reflect_space(&phi.target)?;
    let refl_src = Reflection::build(&phi.source);
    let refl_tgt = Reflection::build(&phi.target);
    let map: Vec<usize> = (0..src.n())
        .map(|p| {
            let image = phi.map[refl_src.original(p)];
            if p < refl_src.n_orig {
                image
            } else {
                refl_tgt.minus[image]
            }
        })
        .collect();
    RelevantMap::new(src, tgt, map)
}

/// Restricts a relevant map to the unit parts.
pub fn project_hom(phi: &RelevantMap) -> Result<SpaceMap> {
    phi.validate()?;
    let src = project_space(&phi.source)?;
    let tgt = project_space(&phi.target)?;
    let old_src: Vec<usize> = phi.source.i_set.iter().collect();
    let old_tgt: Vec<usize> = phi.target.i_set.iter().collect();
    let map: Vec<usize> = (0..src.n())
        .map(|p| {
            let image = phi.map[old_src[p]];
            old_tgt
                .iter()
                .position(|&q| q == image)
                .expect("a relevant map carries unit points to unit points")
        })
        .collect();
    SpaceMap::new(src, tgt, map)
}

/// First isomorphism of relevant spaces in canonical search order, or
/// `None`.
pub fn find_relevant_isomorphism(
    x: &RelevantSpace,
    y: &RelevantSpace,
) -> Result<Option<RelevantMap>> {
    ensure_valid_relevant(x)?;
    ensure_valid_relevant(y)?;
    if x.n() != y.n() || x.i_set.len() != y.i_set.len() {
        return Ok(None);
    }
    fn rec(x: &RelevantSpace, y: &RelevantSpace, partial: &mut Vec<usize>) -> bool {
        let n = x.n();
        let k = partial.len();
        if k == n {
            // full triple check at the leaf
            for a in 0..n {
                for b in 0..n {
                    for c in 0..n {
                        if x.holds(a, b, c) != y.holds(partial[a], partial[b], partial[c]) {
                            return false;
                        }
                    }
                }
            }
            return true;
        }
        'cand: for v in 0..n {
            if partial.contains(&v) {
                continue;
            }
            if x.i_set.contains(k) != y.i_set.contains(v) {
                continue;
            }
            if (x.prime[k] == k) != (y.prime[v] == v) {
                continue;
            }
            if x.poset.upset(k).len() != y.poset.upset(v).len()
                || x.poset.downset(k).len() != y.poset.downset(v).len()
            {
                continue;
            }
            for p in 0..k {
                if x.poset.leq(p, k) != y.poset.leq(partial[p], v)
                    || x.poset.leq(k, p) != y.poset.leq(v, partial[p])
                {
                    continue 'cand;
                }
                if x.prime[p] == k && y.prime[partial[p]] != v {
                    continue 'cand;
                }
            }
            if x.prime[k] <= k && partial.get(x.prime[k]).is_some_and(|&w| y.prime[v] != w) {
                continue;
            }
            partial.push(v);
            if rec(x, y, partial) {
                return true;
            }
            partial.pop();
        }
        false
    }
    let mut partial = Vec::with_capacity(x.n());
    if rec(x, y, &mut partial) {
        let m = RelevantMap::new(x.clone(), y.clone(), partial)?;
        m.validate_iso()?;
        return Ok(Some(m));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::with_bounds;
    use crate::builtins::builtin;
    use crate::hom::find_isomorphism;
    use crate::natural::hom_dual;

    fn bounded(name: &str) -> FiniteAlgebra {
        with_bounds(&builtin(name).unwrap()).unwrap()
    }

    #[test]
    fn urquhart_dual_of_the_two_chain() {
        let s2 = bounded("S2");
        let u = urquhart_dual(&s2).unwrap();
        assert_eq!(u.n(), 1);
        assert_eq!(u.i_set, Subset::singleton(0));
        assert!(u.holds(0, 0, 0));
        assert_eq!(u.prime, vec![0]);
    }

    #[test]
    fn urquhart_dual_of_bounded_e_has_five_points() {
        let e = builtin("E_bot").unwrap();
        let u = urquhart_dual(&e).unwrap();
        assert_eq!(u.n(), 5);
        assert_eq!(u.i_set.len(), 3);
    }

    #[test]
    fn self_involute_point_in_the_four_chain() {
        let s4 = bounded("S4");
        let u = urquhart_dual(&s4).unwrap();
        let p = u.poset.index_of("^1").unwrap();
        assert_eq!(u.prime[p], p);
        // and the larger filters pair with the smaller ones
        let top_filter = u.poset.index_of("^2").unwrap();
        let wide = u.poset.index_of("^-1").unwrap();
        assert_eq!(u.prime[top_filter], wide);
    }

    #[test]
    fn filter_mult_examples_on_the_five_chain() {
        let s5 = bounded("S5");
        let f = |name: &str| s5.poset.upset(s5.poset.index_of(name).unwrap());
        // larger absolute value wins on comparable filters
        let prod = filter_mult(&s5, f("2"), f("1")).unwrap();
        assert_eq!(prod, f("2"));
        // equal absolute values take the meet
        let prod = filter_mult(&s5, f("1"), f("0")).unwrap();
        assert_eq!(prod, f("1"));
    }

    #[test]
    fn filter_mult_is_idempotent_on_every_generalized_prime_filter() {
        for name in ["S2", "S4", "S5"] {
            let a = bounded(name);
            let family = prime_filters(&a, true);
            for &x in &family.members {
                assert_eq!(filter_mult(&a, x, x).unwrap(), x);
            }
        }
    }

    #[test]
    fn case_formula_matches_complex_product_exhaustively() {
        for name in ["S2", "S3", "S4", "S5"] {
            let a = bounded(name);
            let family = prime_filters(&a, true);
            for &x in &family.members {
                for &y in &family.members {
                    // filter_mult panics if the case formula drifts
                    filter_mult(&a, x, y).unwrap();
                }
            }
        }
    }

    #[test]
    fn relevant_algebra_of_a_single_reflexive_point() {
        let poset = FinitePoset::from_covers(vec!["x".into()], &[]).unwrap();
        let s = RelevantSpace {
            name: "pt".into(),
            poset,
            r: vec![vec![Subset::singleton(0)]],
            prime: vec![0],
            i_set: Subset::singleton(0),
        };
        let a = relevant_algebra(&s).unwrap();
        assert_eq!(a.n(), 2);
        let s2 = bounded("S2");
        assert!(find_isomorphism(&a, &s2).unwrap().is_some());
    }

    #[test]
    fn involution_image_of_the_unit_set_on_the_four_chain_dual() {
        let s4 = bounded("S4");
        let u = urquhart_dual(&s4).unwrap();
        // ¬I = {x : x' ∉ I}: only the widest unit filter qualifies, since
        // its involute (the filter of the top element) misses the unit
        let neg_i = u.involution_image(u.i_set);
        let wide = u.poset.index_of("^-1").unwrap();
        assert_eq!(neg_i, Subset::singleton(wide));
    }

    #[test]
    fn urquhart_round_trip_on_bounded_builtins() {
        for name in ["S2", "S3", "S4", "E"] {
            let a = bounded(name);
            let u = urquhart_dual(&a).unwrap();
            let back = relevant_algebra(&u).unwrap();
            assert!(
                find_isomorphism(&a, &back).unwrap().is_some(),
                "{name} is not recovered from its relevant dual"
            );
        }
    }

    #[test]
    fn reflection_of_the_dual_of_bounded_e() {
        let e = builtin("E_bot").unwrap();
        let dw = hom_dual(&e).unwrap();
        let refl = reflect_space(&dw.space).unwrap();
        assert_eq!(refl.n(), 5);
        let urq = urquhart_dual(&e).unwrap();
        let iso = find_relevant_isomorphism(&refl, &urq).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn reflection_of_an_all_designated_space_is_itself() {
        // a single designated point reflects to itself
        let x = StructuredSpace {
            name: "pt".into(),
            poset: FinitePoset::from_covers(vec!["x".into()], &[]).unwrap(),
            d: Subset::singleton(0),
            top: None,
            q: None,
            flavor: Flavor::SugiharaUnpointed,
        };
        let refl = reflect_space(&x).unwrap();
        assert_eq!(refl.n(), 1);
        assert_eq!(refl.prime, vec![0]);
        let back = project_space(&refl).unwrap();
        assert_eq!(back.poset, x.poset);
        assert_eq!(back.d, x.d);
    }

    #[test]
    fn mirrored_point_order_follows_comparability() {
        let e = builtin("E_bot").unwrap();
        let dw = hom_dual(&e).unwrap();
        let refl = reflect_space(&dw.space).unwrap();
        // -h0 is below every original point comparable to h0
        let h0 = dw.space.poset.greatest().unwrap();
        let minus_h0 = refl
            .poset
            .index_of(&format!("-{}", dw.space.poset.name(h0)))
            .unwrap();
        for p in 0..dw.space.n() {
            assert_eq!(
                refl.poset.leq(minus_h0, p),
                dw.space.poset.comparable(h0, p)
            );
        }
    }

    #[test]
    fn projection_of_the_relevant_dual_is_the_hom_dual() {
        let e_bot = builtin("E_bot").unwrap();
        let projected = project_space(&urquhart_dual(&e_bot).unwrap()).unwrap();
        let dw = hom_dual(&e_bot).unwrap();
        let iso = crate::esakia::find_space_isomorphism(&projected, &dw.space).unwrap();
        assert!(iso.is_some());
    }

    #[test]
    fn projection_recovers_the_reflected_space() {
        let e = builtin("E_bot").unwrap();
        let dw = hom_dual(&e).unwrap();
        let refl = reflect_space(&dw.space).unwrap();
        let back = project_space(&refl).unwrap();
        assert_eq!(back.poset.names(), dw.space.poset.names());
        assert_eq!(back.d, dw.space.d);
        for i in 0..back.n() {
            for j in 0..back.n() {
                assert_eq!(back.poset.leq(i, j), dw.space.poset.leq(i, j));
            }
        }
    }

    #[test]
    fn alignment_isos_validate_on_bounded_builtins() {
        for name in ["S2", "S3", "S4", "S5", "E"] {
            let a = bounded(name);
            let gamma = reflection_iso(&a).unwrap();
            gamma.validate_iso().unwrap();
            let urq = urquhart_dual(&a).unwrap();
            let theta = reflection_counit(&urq).unwrap();
            theta.validate_iso().unwrap();
            // the counit is the identity on unit points
            for (rank, p) in urq.i_set.iter().enumerate() {
                assert_eq!(theta.map[rank], p);
            }
        }
    }

    #[test]
    fn gamma_transports_filters_out_of_the_unit_part() {
        let s5 = bounded("S5");
        let urq = urquhart_dual(&s5).unwrap();
        let gamma = reflection_iso(&s5).unwrap();
        // the filter above 2 lies outside the unit part; its image is the
        // mirror of its involute, the filter above -1
        let up2 = urq.poset.index_of("^2").unwrap();
        assert_eq!(urq.poset.name(urq.prime[up2]), "^-1");
        let image = gamma.map[up2];
        assert_eq!(gamma.target.poset.name(image), "-^-1");
        // and unit points stay put
        for p in urq.i_set.iter() {
            assert!(!gamma.target.poset.name(gamma.map[p]).starts_with('-'));
        }
    }

    /// The relevant map dual to an algebra morphism: preimage on filters.
    fn dual_relevant_map(h: &crate::hom::Morphism) -> RelevantMap {
        let src = urquhart_dual(&h.target).unwrap();
        let tgt = urquhart_dual(&h.source).unwrap();
        let src_filters = prime_filters(&h.target, false);
        let tgt_filters = prime_filters(&h.source, false);
        let map: Vec<usize> = src_filters
            .members
            .iter()
            .map(|&x| {
                let pre = Subset::from_indices((0..h.source.n()).filter(|&a| x.contains(h.map[a])));
                tgt_filters
                    .index_of(pre)
                    .expect("preimage of a prime filter is prime")
            })
            .collect();
        RelevantMap::new(src, tgt, map).expect("the dual of a morphism is a relevant map")
    }

    #[test]
    fn counit_is_natural_in_the_relevant_space() {
        use crate::hom::{enumerate_homs, Signature};
        let e_bot = builtin("E_bot").unwrap();
        let s4 = bounded("S4");
        let sig = Signature::of_profile(Profile::SugiharaBounded);
        let homs = enumerate_homs(&e_bot, &s4, sig).unwrap();
        assert!(
            !homs.is_empty(),
            "a bounded morphism from E to the four-chain exists"
        );
        for h in &homs {
            let phi = dual_relevant_map(h);
            let theta_src = reflection_counit(&phi.source).unwrap();
            let theta_tgt = reflection_counit(&phi.target).unwrap();
            let reflected = reflect_hom(&project_hom(&phi).unwrap()).unwrap();
            for p in 0..theta_src.source.n() {
                assert_eq!(
                    phi.map[theta_src.map[p]], theta_tgt.map[reflected.map[p]],
                    "naturality square fails at point {p}"
                );
            }
        }
    }

    #[test]
    fn ordering_lemmas_hold_on_urquhart_duals() {
        for name in ["S4", "S5", "E"] {
            let a = bounded(name);
            let u = urquhart_dual(&a).unwrap();
            let filters = prime_filters(&a, false);
            let t_in = |p: usize| u.i_set.contains(p);
            for p in 0..u.n() {
                // every point is comparable with its involute
                assert!(u.poset.comparable(p, u.prime[p]));
                // the larger of the two contains the unit
                let larger = if u.poset.leq(p, u.prime[p]) {
                    u.prime[p]
                } else {
                    p
                };
                assert!(t_in(larger));
                // fixed points are exactly those whose filter has the unit
                // but not its negation
                let filter = filters.members[p];
                let fixed_char =
                    filter.contains(a.unit_elem()) && !filter.contains(a.neg_of(a.unit_elem()));
                assert_eq!(u.prime[p] == p, fixed_char, "{name}");
                for q in 0..u.n() {
                    if u.poset.comparable(p, q) {
                        // {p,q,p',q'} is a chain
                        let group = [p, q, u.prime[p], u.prime[q]];
                        for &g1 in &group {
                            for &g2 in &group {
                                assert!(u.poset.comparable(g1, g2), "{name}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn reflect_and_project_homs_compose() {
        let e = builtin("E_bot").unwrap();
        let dw = hom_dual(&e).unwrap();
        let id = SpaceMap::new(
            dw.space.clone(),
            dw.space.clone(),
            (0..dw.space.n()).collect(),
        )
        .unwrap();
        let lifted = reflect_hom(&id).unwrap();
        assert_eq!(lifted.map, (0..lifted.source.n()).collect::<Vec<_>>());
        let back = project_hom(&lifted).unwrap();
        assert_eq!(back.map, (0..back.source.n()).collect::<Vec<_>>());
    }
}

//! Finite posets and the order-theoretic predicates everything else consumes.
//!
//! On finite carriers the discrete topology makes every topological side
//! condition (clopen sets, compactness, Priestley separation) automatic, so
//! spaces reduce to posets with extra relations and designated subsets. All
//! enumerations are returned in a canonical order: elements by insertion
//! index, subsets ascending as bitset words.

use crate::subset::{Subset, MAX_CARRIER};
use crate::{Error, Result};

/// A finite partial order over named elements with dense indices `0..n`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FinitePoset {
    names: Vec<String>,
    up: Vec<Subset>,   // up[i] = { j : i <= j }, includes i
    down: Vec<Subset>, // down[i] = { j : j <= i }
}

impl FinitePoset {
    /// Builds a poset from an arbitrary `leq` predicate, checking
    /// reflexivity, antisymmetry and transitivity.
    pub fn from_leq<F: Fn(usize, usize) -> bool>(
        names: Vec<String>,
        leq: F,
    ) -> Result<FinitePoset> {
        let n = names.len();
        if n > MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: n,
                max: MAX_CARRIER,
            });
        }
        check_names(&names)?;
        let mut up = vec![Subset::EMPTY; n];
        for i in 0..n {
            for j in 0..n {
                if leq(i, j) {
                    up[i].insert(j);
                }
            }
        }
        let poset = FinitePoset {
            down: down_from_up(&up),
            names,
            up,
        };
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Reflexive-transitive closure of a cover relation given by index pairs
    /// `(lower, upper)`. Fails with `CycleDetected` if the closure would
    /// break antisymmetry.
    pub fn from_covers(names: Vec<String>, covers: &[(usize, usize)]) -> Result<FinitePoset> {
        let n = names.len();
        if n > MAX_CARRIER {
            return Err(Error::CarrierTooLarge {
                size: n,
                max: MAX_CARRIER,
            });
        }
        check_names(&names)?;
        let mut up: Vec<Subset> = (0..n).map(Subset::singleton).collect();
        for &(lo, hi) in covers {
            if lo >= n || hi >= n {
                return Err(Error::UnknownName(format!("cover index {}", lo.max(hi))));
            }
            up[lo].insert(hi);
        }
        // Warshall-style closure.
        for k in 0..n {
            for i in 0..n {
                if up[i].contains(k) {
                    up[i] = up[i].union(up[k]);
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                if up[i].contains(j) && up[j].contains(i) {
                    return Err(Error::CycleDetected {
                        name: names[i].clone(),
                    });
                }
            }
        }
        let poset = FinitePoset {
            down: down_from_up(&up),
            names,
            up,
        };
        poset.check_axioms()?;
        Ok(poset)
    }

    /// Like [`FinitePoset::from_covers`] but with covers given by name.
    pub fn from_named_covers(
        names: Vec<String>,
        covers: &[(String, String)],
    ) -> Result<FinitePoset> {
        let mut idx = Vec::with_capacity(covers.len());
        for (lo, hi) in covers {
            let li = names
                .iter()
                .position(|n| n == lo)
                .ok_or_else(|| Error::UnknownName(lo.clone()))?;
            let hi = names
                .iter()
                .position(|n| n == hi)
                .ok_or_else(|| Error::UnknownName(hi.clone()))?;
            idx.push((li, hi));
        }
        FinitePoset::from_covers(names, &idx)
    }

    fn check_axioms(&self) -> Result<()> {
        let n = self.n();
        for i in 0..n {
            if !self.up[i].contains(i) {
                return Err(Error::NotAPartialOrder {
                    law: "reflexivity".into(),
                    witness: self.names[i].clone(),
                });
            }
            for j in self.up[i].iter() {
                if i != j && self.up[j].contains(i) {
                    return Err(Error::NotAPartialOrder {
                        law: "antisymmetry".into(),
                        witness: format!("({},{})", self.names[i], self.names[j]),
                    });
                }
                if !self.up[j].is_subset_of(self.up[i]) {
                    let k = self.up[j].diff(self.up[i]).iter().next().unwrap();
                    return Err(Error::NotAPartialOrder {
                        law: "transitivity".into(),
                        witness: format!("({},{},{})", self.names[i], self.names[j], self.names[k]),
                    });
                }
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.names.len()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn leq(&self, i: usize, j: usize) -> bool {
        self.up[i].contains(j)
    }

    pub fn lt(&self, i: usize, j: usize) -> bool {
        i != j && self.leq(i, j)
    }

    pub fn comparable(&self, i: usize, j: usize) -> bool {
        self.leq(i, j) || self.leq(j, i)
    }

    pub fn upset(&self, i: usize) -> Subset {
        self.up[i]
    }

    pub fn downset(&self, i: usize) -> Subset {
        self.down[i]
    }

    pub fn upset_of(&self, s: Subset) -> Subset {
        s.iter().fold(Subset::EMPTY, |acc, i| acc.union(self.up[i]))
    }

    pub fn downset_of(&self, s: Subset) -> Subset {
        s.iter()
            .fold(Subset::EMPTY, |acc, i| acc.union(self.down[i]))
    }

    pub fn is_up_set(&self, s: Subset) -> bool {
        s.iter().all(|i| self.up[i].is_subset_of(s))
    }

    pub fn is_chain(&self, s: Subset) -> bool {
        let elems: Vec<usize> = s.iter().collect();
        elems
            .iter()
            .enumerate()
            .all(|(k, &i)| elems[k + 1..].iter().all(|&j| self.comparable(i, j)))
    }

    pub fn minimal_elements(&self) -> Subset {
        Subset::from_indices((0..self.n()).filter(|&i| self.down[i] == Subset::singleton(i)))
    }

    pub fn maximal_elements(&self) -> Subset {
        Subset::from_indices((0..self.n()).filter(|&i| self.up[i] == Subset::singleton(i)))
    }

    pub fn least(&self) -> Option<usize> {
        (0..self.n()).find(|&i| self.up[i] == Subset::full(self.n()))
    }

    pub fn greatest(&self) -> Option<usize> {
        (0..self.n()).find(|&i| self.down[i] == Subset::full(self.n()))
    }

    /// Greatest lower bound of `i` and `j`, if it exists.
    pub fn glb(&self, i: usize, j: usize) -> Option<usize> {
        let lower = self.down[i].inter(self.down[j]);
        lower.iter().find(|&m| lower.is_subset_of(self.down[m]))
    }

    /// Least upper bound of `i` and `j`, if it exists.
    pub fn lub(&self, i: usize, j: usize) -> Option<usize> {
        let upper = self.up[i].inter(self.up[j]);
        upper.iter().find(|&m| upper.is_subset_of(self.up[m]))
    }

    /// Cover pairs `(lower, upper)` of the transitive reduction, sorted.
    pub fn covers(&self) -> Vec<(usize, usize)> {
        let n = self.n();
        let mut out = Vec::new();
        for i in 0..n {
            for j in self.up[i].iter() {
                if i == j {
                    continue;
                }
                let between = self.up[i]
                    .inter(self.down[j])
                    .diff(Subset::from_indices([i, j]));
                if between.is_empty() {
                    out.push((i, j));
                }
            }
        }
        out.sort();
        out
    }

    /// A forest is a poset in which every principal up-set is a chain.
    pub fn is_forest(&self) -> bool {
        (0..self.n()).all(|i| self.is_chain(self.up[i]))
    }

    /// All up-sets in canonical order, including the empty set and the full
    /// carrier.
    pub fn up_sets(&self) -> Vec<Subset> {
        // Decide membership from maximal elements downwards along a reverse
        // linear extension; an element may enter only if everything strictly
        // above it is already in.
        let order = self.linear_extension();
        let mut acc = vec![Subset::EMPTY];
        for &x in order.iter().rev() {
            let strictly_above = self.up[x].diff(Subset::singleton(x));
            let mut next = Vec::with_capacity(acc.len() * 2);
            for s in acc {
                next.push(s);
                if strictly_above.is_subset_of(s) {
                    next.push(s.union(Subset::singleton(x)));
                }
            }
            acc = next;
        }
        acc.sort();
        acc
    }

    /// Indices sorted compatibly with the order (lower elements first).
    pub fn linear_extension(&self) -> Vec<usize> {
        let mut idx: Vec<usize> = (0..self.n()).collect();
        idx.sort_by_key(|&i| (self.down[i].len(), i));
        idx
    }

    /// Restriction to `keep`; returns the sub-poset together with the vector
    /// of original indices (new index -> old index).
    pub fn restrict(&self, keep: Subset) -> (FinitePoset, Vec<usize>) {
        let old: Vec<usize> = keep.iter().collect();
        let names = old.iter().map(|&i| self.names[i].clone()).collect();
        let poset = FinitePoset::from_leq(names, |a, b| self.leq(old[a], old[b]))
            .expect("restriction of a partial order is a partial order");
        (poset, old)
    }

    /// Renames every element, keeping the order.
    pub fn with_names(&self, names: Vec<String>) -> Result<FinitePoset> {
        if names.len() != self.n() {
            return Err(Error::UnknownName("wrong number of names".into()));
        }
        check_names(&names)?;
        Ok(FinitePoset {
            names,
            up: self.up.clone(),
            down: self.down.clone(),
        })
    }

    pub fn render_subset(&self, s: Subset) -> String {
        let mut out = String::from("{");
        for (k, i) in s.iter().enumerate() {
            if k > 0 {
                out.push(',');
            }
            out.push_str(&self.names[i]);
        }
        out.push('}');
        out
    }
}

fn down_from_up(up: &[Subset]) -> Vec<Subset> {
    let n = up.len();
    (0..n)
        .map(|i| Subset::from_indices((0..n).filter(|&j| up[j].contains(i))))
        .collect()
}

fn check_names(names: &[String]) -> Result<()> {
    for (i, n) in names.iter().enumerate() {
        if n.is_empty() || n.contains(char::is_whitespace) || n.contains('<') || n.contains(':') {
            return Err(Error::UnknownName(format!("invalid element name '{n}'")));
        }
        if names[..i].contains(n) {
            return Err(Error::DuplicateName(n.clone()));
        }
    }
    Ok(())
}

/// `U -> V = {x : upset(x) ∩ U ⊆ V}`, the relative pseudo-complement in the
/// lattice of up-sets.
pub fn heyting_arrow_upsets(p: &FinitePoset, u: Subset, v: Subset) -> Result<Subset> {
    if !p.is_up_set(u) {
        return Err(Error::NotAnUpSet {
            which: "first argument",
        });
    }
    if !p.is_up_set(v) {
        return Err(Error::NotAnUpSet {
            which: "second argument",
        });
    }
    Ok(Subset::from_indices(
        (0..p.n()).filter(|&x| p.upset(x).inter(u).is_subset_of(v)),
    ))
}

/// A canonically ordered family of subsets of one carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SubsetFamily {
    pub ground_size: usize,
    pub members: Vec<Subset>,
}

impl SubsetFamily {
    pub fn new(ground_size: usize, mut members: Vec<Subset>) -> SubsetFamily {
        members.sort();
        members.dedup();
        debug_assert!(members
            .iter()
            .all(|m| m.is_subset_of(Subset::full(ground_size))));
        SubsetFamily {
            ground_size,
            members,
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn index_of(&self, s: Subset) -> Option<usize> {
        self.members.binary_search(&s).ok()
    }
}

/// Enumerates every poset on `n` labelled points for which the identity is a
/// linear extension. Every isomorphism class appears at least once, so this
/// is an exhaustive generator for order-invariant properties.
pub fn posets_up_to_relabelling(n: usize) -> Vec<FinitePoset> {
    let names: Vec<String> = (0..n).map(|i| format!("x{i}")).collect();
    let mut out = Vec::new();
    // down[i] ⊆ {0..i-1} must be down-closed in the part already built.
    fn rec(n: usize, downs: &mut Vec<Subset>, names: &[String], out: &mut Vec<FinitePoset>) {
        let i = downs.len();
        if i == n {
            let downs = downs.clone();
            let poset =
                FinitePoset::from_leq(names.to_vec(), |a, b| a == b || downs[b].contains(a))
                    .expect("generated relation is a partial order");
            out.push(poset);
            return;
        }
        let choices = 1u64 << i;
        'next: for mask in 0..choices {
            let d = Subset(mask);
            // strict down-set must be down-closed.
            for j in d.iter() {
                if !downs[j].is_subset_of(d) {
                    continue 'next;
                }
            }
            downs.push(d);
            rec(n, downs, names, out);
            downs.pop();
        }
    }
    rec(n, &mut Vec::new(), &names, &mut out);
    out
}

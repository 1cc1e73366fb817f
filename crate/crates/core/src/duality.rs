//! Finite duality between Nelson algebras and Nelson spaces.
//!
//! A Nelson space is a finite poset with an order-reversing involution `φ`
//! such that every point is comparable with its image and the interpolation
//! property holds. The spectrum of an algebra is the set of its prime filters
//! ordered by inclusion with the Birula–Rasiowa map; the dual algebra of a
//! space is the lattice of its increasing sets with
//! `∼U = X ∖ φ(U)` and `U -> V = X ∖ ↓(U ∩ φ(U) ∩ (X ∖ V))`.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::{Elem, Homomorphism, NelsonAlgebra, Tables};
use crate::deduction::{phi as br_phi, prime_filters};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// On-disk form: `{"size": k, "leq": [[bool...]], "phi": [...]}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SpaceFile {
    pub size: i64,
    pub leq: Vec<Vec<bool>>,
    pub phi: Vec<i64>,
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NelsonSpace {
    size: usize,
    /// `up[x] = {y : x ≤ y}`
    up: Vec<Subset>,
    /// `down[x] = {y : y ≤ x}`
    down: Vec<Subset>,
    phi: Vec<usize>,
}

/// A violated Nelson-space axiom together with the offending points.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceViolation {
    pub axiom: &'static str,
    pub points: Vec<usize>,
}

impl fmt::Display for SpaceViolation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} fails at points {:?}", self.axiom, self.points)
    }
}

impl NelsonSpace {
    /// Validated construction; the error names the violated axiom.
    pub fn new(leq: impl Fn(usize, usize) -> bool, phi: Vec<usize>) -> Result<Self> {
        let s = Self::unchecked(leq, phi)?;
        match s.violation() {
            Some(v) => Err(Error::InvalidSpace(v.to_string())),
            None => Ok(s),
        }
    }

    /// Builds the relation without checking the space axioms; only the shape
    /// of `phi` is validated.
    pub fn unchecked(leq: impl Fn(usize, usize) -> bool, phi: Vec<usize>) -> Result<Self> {
        let size = phi.len();
        if let Some(x) = (0..size).find(|&x| phi[x] >= size) {
            return Err(Error::format(format!("phi[{x}]"), format!("{} out of range 0..{size}", phi[x])));
        }
        let up: Vec<Subset> = (0..size)
            .map(|x| Subset::from_predicate(size, |y| leq(x, y)))
            .collect();
        let down = (0..size)
            .map(|x| Subset::from_predicate(size, |y| up[y].contains(x)))
            .collect();
        Ok(NelsonSpace { size, up, down, phi })
    }

    pub fn from_file(file: &SpaceFile) -> Result<Self> {
        let size = usize::try_from(file.size)
            .map_err(|_| Error::format("size", format!("{} is negative", file.size)))?;
        if file.leq.len() != size {
            return Err(Error::format("leq", format!("expected {size} rows, found {}", file.leq.len())));
        }
        for (i, row) in file.leq.iter().enumerate() {
            if row.len() != size {
                return Err(Error::format(format!("leq[{i}]"), format!("expected {size} entries, found {}", row.len())));
            }
        }
        if file.phi.len() != size {
            return Err(Error::format("phi", format!("expected {size} entries, found {}", file.phi.len())));
        }
        let mut phi = Vec::with_capacity(size);
        for (i, &v) in file.phi.iter().enumerate() {
            match usize::try_from(v) {
                Ok(v) if v < size => phi.push(v),
                _ => return Err(Error::format(format!("phi[{i}]"), format!("{v} out of range 0..{size}"))),
            }
        }
        Self::new(|x, y| file.leq[x][y], phi)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: SpaceFile = serde_json::from_str(text).map_err(|e| {
            Error::format(format!("line {} column {}", e.line(), e.column()), e.to_string())
        })?;
        Self::from_file(&file)
    }

    pub fn to_file(&self) -> SpaceFile {
        SpaceFile {
            size: self.size as i64,
            leq: (0..self.size)
                .map(|x| (0..self.size).map(|y| self.leq(x, y)).collect())
                .collect(),
            phi: self.phi.iter().map(|&p| p as i64).collect(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(&self.to_file()).expect("space serializes")
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn points(&self) -> std::ops::Range<usize> {
        0..self.size
    }

    #[inline]
    pub fn leq(&self, x: usize, y: usize) -> bool {
        self.up[x].contains(y)
    }

    #[inline]
    pub fn phi(&self, x: usize) -> usize {
        self.phi[x]
    }

    pub fn up(&self, x: usize) -> &Subset {
        &self.up[x]
    }

    pub fn down(&self, x: usize) -> &Subset {
        &self.down[x]
    }

    pub fn phi_set(&self, s: &Subset) -> Subset {
        s.map(|x| self.phi[x])
    }

    /// `↓Y`
    pub fn downset(&self, s: &Subset) -> Subset {
        s.iter()
            .fold(Subset::empty(self.size), |acc, x| acc.union(&self.down[x]))
    }

    pub fn is_increasing(&self, s: &Subset) -> bool {
        s.iter().all(|x| self.up[x].is_subset(s))
    }

    /// `X⁺ = {x : x ≤ φ(x)}`
    pub fn x_plus(&self) -> Subset {
        Subset::from_predicate(self.size, |x| self.leq(x, self.phi[x]))
    }

    /// `X⁻ = {x : φ(x) ≤ x}`
    pub fn x_minus(&self) -> Subset {
        Subset::from_predicate(self.size, |x| self.leq(self.phi[x], x))
    }

    /// First violated axiom, checked in the order: partial order,
    /// involution, dual order, comparability, interpolation.
    pub fn violation(&self) -> Option<SpaceViolation> {
        let n = self.size;
        let v = |axiom, points| Some(SpaceViolation { axiom, points });
        if let Some(x) = (0..n).find(|&x| !self.leq(x, x)) {
            return v("reflexivity", vec![x]);
        }
        for x in 0..n {
            if let Some(y) = self.up[x].iter().find(|&y| y != x && self.leq(y, x)) {
                return v("antisymmetry", vec![x, y]);
            }
        }
        for x in 0..n {
            for y in self.up[x].iter() {
                if let Some(z) = self.up[y].difference(&self.up[x]).iter().next() {
                    return v("transitivity", vec![x, y, z]);
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| self.phi[self.phi[x]] != x) {
            return v("involution", vec![x]);
        }
        for x in 0..n {
            for y in 0..n {
                if self.leq(x, y) != self.leq(self.phi[y], self.phi[x]) {
                    return v("dual order", vec![x, y]);
                }
            }
        }
        if let Some(x) = (0..n).find(|&x| !self.leq(x, self.phi[x]) && !self.leq(self.phi[x], x)) {
            return v("comparability", vec![x]);
        }
        let plus = self.x_plus();
        // the interval [x, φ(x)] for each x in X⁺
        let interval: Vec<Subset> = (0..n)
            .map(|x| self.up[x].intersection(&self.down[self.phi[x]]))
            .collect();
        for x in plus.iter() {
            for y in plus.iter().filter(|&y| y > x) {
                if self.leq(x, self.phi[y])
                    && self.leq(y, self.phi[x])
                    && !interval[x].intersects(&interval[y])
                {
                    return v("interpolation", vec![x, y]);
                }
            }
        }
        None
    }

    pub fn is_valid(&self) -> bool {
        self.violation().is_none()
    }

    /// Connected components of the comparability graph together with the
    /// `φ` links, each sorted, listed by least point.
    pub fn components(&self) -> Vec<Subset> {
        let n = self.size;
        let mut seen = Subset::empty(n);
        let mut out = Vec::new();
        for start in 0..n {
            if seen.contains(start) {
                continue;
            }
            let mut comp = Subset::empty(n);
            let mut stack = vec![start];
            while let Some(x) = stack.pop() {
                if !comp.insert(x) {
                    continue;
                }
                let nbrs = self.up[x].union(&self.down[x]);
                stack.extend(nbrs.iter().filter(|&y| !comp.contains(y)));
                stack.push(self.phi[x]);
            }
            seen = seen.union(&comp);
            out.push(comp);
        }
        out
    }

    /// Subspace on a `φ`-closed set of points, renumbered in increasing
    /// order; also returns the original index of each new point.
    pub fn restrict(&self, points: &Subset) -> Result<(NelsonSpace, Vec<usize>)> {
        let old: Vec<usize> = points.to_vec();
        let mut new_of = vec![usize::MAX; self.size];
        for (i, &p) in old.iter().enumerate() {
            new_of[p] = i;
        }
        if let Some(&p) = old.iter().find(|&&p| !points.contains(self.phi[p])) {
            return Err(Error::InvalidArgument(format!("point set is not φ-closed at {p}")));
        }
        let phi = old.iter().map(|&p| new_of[self.phi[p]]).collect();
        let s = NelsonSpace::unchecked(|x, y| self.leq(old[x], old[y]), phi)?;
        Ok((s, old))
    }

    /// Disjoint union, summands laid out consecutively.
    pub fn disjoint_union(spaces: &[&NelsonSpace]) -> NelsonSpace {
        let mut offset = Vec::with_capacity(spaces.len());
        let mut owner = Vec::new();
        for (i, s) in spaces.iter().enumerate() {
            offset.push(owner.len());
            owner.extend(std::iter::repeat(i).take(s.size));
        }
        let phi = owner
            .iter()
            .enumerate()
            .map(|(p, &i)| offset[i] + spaces[i].phi(p - offset[i]))
            .collect();
        NelsonSpace::unchecked(
            |x, y| owner[x] == owner[y] && spaces[owner[x]].leq(x - offset[owner[x]], y - offset[owner[y]]),
            phi,
        )
        .expect("phi in range")
    }

    /// Every increasing set, in canonical (bitset value) order; `None` when
    /// there are more than `limit`.
    pub fn increasing_sets(&self, limit: usize) -> Option<Vec<Subset>> {
        // maximal points first, so a point is decided after everything above it
        let mut order: Vec<usize> = self.points().collect();
        order.sort_by_key(|&x| self.up[x].count());
        let mut out = Vec::new();
        let mut cur = Subset::empty(self.size);
        if !self.collect_upsets(&order, 0, &mut cur, &mut out, limit) {
            return None;
        }
        out.sort();
        Some(out)
    }

    fn collect_upsets(
        &self,
        order: &[usize],
        i: usize,
        cur: &mut Subset,
        out: &mut Vec<Subset>,
        limit: usize,
    ) -> bool {
        if i == order.len() {
            out.push(cur.clone());
            return out.len() <= limit;
        }
        let x = order[i];
        if !self.collect_upsets(order, i + 1, cur, out, limit) {
            return false;
        }
        if self.up[x].iter().all(|y| y == x || cur.contains(y)) {
            cur.insert(x);
            let ok = self.collect_upsets(order, i + 1, cur, out, limit);
            cur.remove(x);
            return ok;
        }
        true
    }
}

impl fmt::Debug for NelsonSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let covers: Vec<(usize, usize)> = (0..self.size)
            .flat_map(|x| self.up[x].iter().filter(move |&y| y != x).map(move |y| (x, y)))
            .collect();
        f.debug_struct("NelsonSpace")
            .field("size", &self.size)
            .field("lt", &covers)
            .field("phi", &self.phi)
            .finish()
    }
}

/// Order-preserving, `φ`-equivariant map between Nelson spaces.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpaceMorphism {
    pub source: NelsonSpace,
    pub target: NelsonSpace,
    pub map: Vec<usize>,
}

impl SpaceMorphism {
    pub fn new(source: NelsonSpace, target: NelsonSpace, map: Vec<usize>) -> Result<Self> {
        if map.len() != source.size() {
            return Err(Error::InvalidMorphism(format!(
                "map has {} entries for {} points",
                map.len(),
                source.size()
            )));
        }
        if let Some(x) = source.points().find(|&x| map[x] >= target.size()) {
            return Err(Error::InvalidMorphism(format!("image of {x} out of range")));
        }
        for x in source.points() {
            for y in source.up(x).iter() {
                if !target.leq(map[x], map[y]) {
                    return Err(Error::InvalidMorphism(format!("order not preserved at {x} ≤ {y}")));
                }
            }
            if map[source.phi(x)] != target.phi(map[x]) {
                return Err(Error::InvalidMorphism(format!("φ-equivariance fails at {x}")));
            }
        }
        Ok(SpaceMorphism { source, target, map })
    }

    pub fn identity(s: &NelsonSpace) -> Self {
        SpaceMorphism {
            source: s.clone(),
            target: s.clone(),
            map: s.points().collect(),
        }
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `other ∘ self`
    pub fn then(&self, other: &SpaceMorphism) -> Result<SpaceMorphism> {
        if self.target != other.source {
            return Err(Error::InvalidMorphism("morphisms are not composable".into()));
        }
        Ok(SpaceMorphism {
            source: self.source.clone(),
            target: other.target.clone(),
            map: self.map.iter().map(|&y| other.map[y]).collect(),
        })
    }

    /// Whether `X⁺` is mapped into `Y⁺`.
    pub fn preserves_plus(&self) -> bool {
        let plus = self.target.x_plus();
        self.source.x_plus().iter().all(|x| plus.contains(self.map[x]))
    }

    /// Whether the map is a bijection reflecting the order.
    pub fn is_isomorphism(&self) -> bool {
        let image = Subset::from_indices(self.target.size(), self.map.iter().copied());
        self.source.size() == self.target.size()
            && image.is_full()
            && self.source.points().all(|x| {
                self.source
                    .points()
                    .all(|y| self.source.leq(x, y) == self.target.leq(self.map[x], self.map[y]))
            })
    }
}

/// The spectrum of an algebra together with the prime filter behind each
/// point.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Spectrum {
    pub space: NelsonSpace,
    pub filters: Vec<Subset>,
}

impl Spectrum {
    pub fn index_of(&self, p: &Subset) -> Option<usize> {
        self.filters.binary_search(p).ok()
    }
}

pub fn spectrum(a: &NelsonAlgebra) -> Result<Spectrum> {
    if a.is_trivial() {
        return Err(Error::Refused("the trivial algebra has no prime filters".into()));
    }
    let filters = prime_filters(a);
    let index: HashMap<&Subset, usize> = filters.iter().enumerate().map(|(i, p)| (p, i)).collect();
    let phi = filters
        .iter()
        .map(|p| {
            index
                .get(&br_phi(a, p))
                .copied()
                .ok_or_else(|| Error::Inconsistent(format!("φ({p:?}) is not a prime filter")))
        })
        .collect::<Result<Vec<_>>>()?;
    let space = NelsonSpace::unchecked(|x, y| filters[x].is_subset(&filters[y]), phi)?;
    if let Some(v) = space.violation() {
        return Err(Error::Inconsistent(format!("spectrum is not a Nelson space: {v}")));
    }
    Ok(Spectrum { space, filters })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DualBudget {
    /// Largest number of increasing sets materialized as an algebra.
    pub max_elements: usize,
    /// Axioms are re-checked on the result up to this size.
    pub verify_up_to: usize,
}

impl Default for DualBudget {
    fn default() -> Self {
        DualBudget {
            max_elements: 4096,
            verify_up_to: 128,
        }
    }
}

/// The dual algebra of a space with the increasing set behind each element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DualAlgebra {
    pub algebra: NelsonAlgebra,
    pub sets: Vec<Subset>,
}

impl DualAlgebra {
    pub fn index_of(&self, u: &Subset) -> Option<Elem> {
        self.sets.binary_search(u).ok()
    }
}

pub fn dual_algebra(s: &NelsonSpace) -> Result<DualAlgebra> {
    dual_algebra_with(s, DualBudget::default())
}

pub fn dual_algebra_with(s: &NelsonSpace, budget: DualBudget) -> Result<DualAlgebra> {
    if let Some(v) = s.violation() {
        return Err(Error::InvalidSpace(v.to_string()));
    }
    let sets = s.increasing_sets(budget.max_elements).ok_or_else(|| {
        Error::Budget(format!("more than {} increasing sets", budget.max_elements))
    })?;
    let index: HashMap<&Subset, usize> = sets.iter().enumerate().map(|(i, u)| (u, i)).collect();
    let at = |u: Subset| index[&u];
    let full = Subset::full(s.size());
    let tables = Tables::from_fns(
        sets.len(),
        sets.len() - 1,
        |i| at(full.difference(&s.phi_set(&sets[i]))),
        |i, j| at(sets[i].intersection(&sets[j])),
        |i, j| at(sets[i].union(&sets[j])),
        |i, j| {
            let (u, v) = (&sets[i], &sets[j]);
            let bad = u.intersection(&s.phi_set(u)).difference(v);
            at(full.difference(&s.downset(&bad)))
        },
    )?;
    let algebra = if sets.len() <= budget.verify_up_to {
        NelsonAlgebra::try_from(tables)
            .map_err(|e| Error::Inconsistent(format!("dual algebra is not a Nelson algebra: {e}")))?
    } else {
        NelsonAlgebra::trusted(tables)
    };
    Ok(DualAlgebra { algebra, sets })
}

/// The explicit isomorphism `x ↦ {P : x ∈ P}` from `A` onto the dual of
/// its spectrum.
pub fn roundtrip_check(a: &NelsonAlgebra) -> Result<Homomorphism> {
    let sp = spectrum(a)?;
    let dual = dual_algebra(&sp.space)?;
    let map = a
        .elements()
        .map(|x| {
            let u = Subset::from_predicate(sp.space.size(), |p| sp.filters[p].contains(x));
            dual.index_of(&u)
                .ok_or_else(|| Error::Inconsistent(format!("{{P : {x} ∈ P}} is not increasing")))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = Homomorphism::new(a.clone(), dual.algebra, map)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    if !(h.is_injective() && h.is_surjective()) {
        return Err(Error::Inconsistent("round-trip map is not bijective".into()));
    }
    if let Some(f) = h.preservation_failure() {
        return Err(Error::Inconsistent(format!("round-trip map fails at {f}")));
    }
    Ok(h)
}

/// The isomorphism `p ↦ {U : p ∈ U}` from a space onto the spectrum of its
/// dual. The dual of a disjoint union is the product of the duals and the
/// spectrum of a product is the disjoint union of the spectra, so the check
/// runs one connected component at a time and the target is the disjoint
/// union of the component spectra.
pub fn space_roundtrip_check(s: &NelsonSpace) -> Result<SpaceMorphism> {
    if let Some(v) = s.violation() {
        return Err(Error::InvalidSpace(v.to_string()));
    }
    let mut spectra = Vec::new();
    let mut map = vec![0; s.size()];
    let mut offset = 0;
    for comp in s.components() {
        let (sub, old) = s.restrict(&comp)?;
        let dual = dual_algebra(&sub)?;
        let sp = spectrum(&dual.algebra)?;
        for (p, &orig) in old.iter().enumerate() {
            let f = Subset::from_predicate(dual.sets.len(), |u| dual.sets[u].contains(p));
            let i = sp.index_of(&f).ok_or_else(|| {
                Error::Inconsistent(format!("{{U : {orig} ∈ U}} is not a prime filter"))
            })?;
            map[orig] = offset + i;
        }
        offset += sp.space.size();
        spectra.push(sp.space);
    }
    let refs: Vec<&NelsonSpace> = spectra.iter().collect();
    let target = NelsonSpace::disjoint_union(&refs);
    let iso = SpaceMorphism::new(s.clone(), target, map)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    if !iso.is_isomorphism() {
        return Err(Error::Inconsistent("space round-trip map is not an isomorphism".into()));
    }
    Ok(iso)
}

/// `X(h): X(B) -> X(A)`, `P ↦ h⁻¹(P)`, between the canonical spectra.
pub fn dual_of_hom(h: &Homomorphism) -> Result<SpaceMorphism> {
    if let Some(f) = h.preservation_failure() {
        return Err(Error::InvalidMorphism(format!("not a homomorphism ({f})")));
    }
    let (sa, sb) = (spectrum(&h.source)?, spectrum(&h.target)?);
    let map = sb
        .filters
        .iter()
        .map(|p| {
            let pre = Subset::from_predicate(h.source.size(), |x| p.contains(h.apply(x)));
            sa.index_of(&pre)
                .ok_or_else(|| Error::Inconsistent(format!("preimage of {p:?} is not prime")))
        })
        .collect::<Result<Vec<_>>>()?;
    let f = SpaceMorphism::new(sb.space, sa.space, map)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    if !f.preserves_plus() {
        return Err(Error::Inconsistent("dual morphism does not preserve X⁺".into()));
    }
    Ok(f)
}

/// `D(f): D(Y) -> D(X)`, `U ↦ f⁻¹(U)`, between the canonical dual algebras.
pub fn dual_of_morphism(f: &SpaceMorphism) -> Result<Homomorphism> {
    let (dx, dy) = (dual_algebra(&f.source)?, dual_algebra(&f.target)?);
    let map = dy
        .sets
        .iter()
        .map(|u| {
            let pre = Subset::from_predicate(f.source.size(), |x| u.contains(f.apply(x)));
            dx.index_of(&pre)
                .ok_or_else(|| Error::Inconsistent(format!("preimage of {u:?} is not increasing")))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = Homomorphism::new(dy.algebra, dx.algebra, map)
        .map_err(|e| Error::Inconsistent(e.to_string()))?;
    if let Some(w) = h.preservation_failure() {
        return Err(Error::Inconsistent(format!("dual map is not a homomorphism ({w})")));
    }
    Ok(h)
}

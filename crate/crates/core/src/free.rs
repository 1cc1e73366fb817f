//! The free five-valued Nelson algebra `F(n)` through its dual space.
//!
//! Points of `X(F(n))⁺` are the index functions `f: G -> C5`, encoded with
//! values `0..=4` for `0, ¼, ½, ¾, 1`. The space adds a mirror copy of the
//! non-Boolean labels; its connected components have one maximal `X⁺` point
//! each and `F(n)` is the product of the component dual algebras.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use serde::Serialize;

use crate::algebra::{product, Elem, Homomorphism, NelsonAlgebra, Radix};
use crate::deduction::{classify_quotient_by_irreducible, representation_embedding, ChainTag};
use crate::duality::{dual_algebra, DualAlgebra, NelsonSpace};
use crate::error::{Error, Result};
use crate::subset::Subset;

/// Largest `n` for which the free space is built.
pub const MAX_SPACE_N: usize = 4;
/// Largest element count for which `F(n)` is materialized.
pub const MATERIALIZE_LIMIT: u64 = 100_000;

const HALF: u8 = 2;
const ONE: u8 = 4;

/// A function `G -> C5`, one digit `0..=4` per generator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexFunction(Vec<u8>);

impl IndexFunction {
    pub fn new(values: Vec<u8>) -> Result<Self> {
        if values.is_empty() {
            return Err(Error::InvalidArgument("index function of length 0".into()));
        }
        if let Some(v) = values.iter().find(|&&v| v > ONE) {
            return Err(Error::InvalidArgument(format!("value {v} outside 0..=4")));
        }
        Ok(IndexFunction(values))
    }

    pub fn values(&self) -> &[u8] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All `5ⁿ` functions in digit-string order.
    pub fn all(n: usize) -> impl Iterator<Item = IndexFunction> {
        (0..5usize.pow(n as u32)).map(move |i| Self::from_rank(n, i))
    }

    /// Position among all functions of the same length in digit-string order.
    pub fn rank(&self) -> usize {
        self.0.iter().fold(0, |acc, &v| acc * 5 + v as usize)
    }

    pub fn from_rank(n: usize, mut rank: usize) -> Self {
        let mut v = vec![0; n];
        for d in v.iter_mut().rev() {
            *d = (rank % 5) as u8;
            rank /= 5;
        }
        IndexFunction(v)
    }

    pub fn is_maximal(&self) -> bool {
        self.0.iter().all(|v| v % 2 == 0)
    }

    pub fn halves(&self) -> usize {
        self.0.iter().filter(|&&v| v == HALF).count()
    }

    /// The unique maximal function above: `¼ ↦ 0`, `¾ ↦ 1`.
    pub fn maximal_above(&self) -> IndexFunction {
        IndexFunction(
            self.0
                .iter()
                .map(|&v| match v {
                    1 => 0,
                    3 => ONE,
                    v => v,
                })
                .collect(),
        )
    }
}

impl fmt::Display for IndexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for v in &self.0 {
            write!(f, "{v}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for IndexFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "f{self}")
    }
}

impl FromStr for IndexFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let values = s
            .chars()
            .map(|c| match c.to_digit(10) {
                Some(d) if d <= 4 => Ok(d as u8),
                _ => Err(Error::InvalidArgument(format!("`{c}` is not a digit 0-4"))),
            })
            .collect::<Result<Vec<_>>>()?;
        IndexFunction::new(values)
    }
}

impl Serialize for IndexFunction {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// Which chain the image of the generators generates in `C5`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum FunctionClass {
    F2,
    F3,
    F4,
    F5,
}

pub fn classify_function(f: &IndexFunction) -> FunctionClass {
    let has = |v: u8| f.0.contains(&v);
    let quarter = has(1) || has(3);
    match (has(HALF), quarter) {
        (false, false) => FunctionClass::F2,
        (true, false) => FunctionClass::F3,
        (false, true) => FunctionClass::F4,
        (true, true) => FunctionClass::F5,
    }
}

/// The order on `X(F(n))⁺`: `P_h ⊂ P_f`.
pub fn strictly_below(h: &IndexFunction, f: &IndexFunction) -> Result<bool> {
    if h.len() != f.len() {
        return Err(Error::InvalidArgument(format!(
            "index functions of lengths {} and {}",
            h.len(),
            f.len()
        )));
    }
    Ok(f.is_maximal()
        && h != f
        && h.0.iter().zip(&f.0).all(|(&hi, &fi)| {
            (fi != 0 || hi <= 1) && (fi != ONE || hi >= 3) && ((hi == HALF) == (fi == HALF))
        }))
}

/// What a point of the free space stands for.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct PointLabel {
    pub function: IndexFunction,
    /// `true` for `φ(P_f)` when it differs from `P_f`.
    pub mirrored: bool,
}

impl fmt::Display for PointLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.mirrored {
            write!(f, "φ({})", self.function)
        } else {
            write!(f, "{}", self.function)
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeSpace {
    pub n: usize,
    pub space: NelsonSpace,
    /// Points `0..5ⁿ` are `P_f` by rank; the rest are mirrors.
    pub labels: Vec<PointLabel>,
}

impl FreeSpace {
    pub fn plus_point(&self, f: &IndexFunction) -> usize {
        f.rank()
    }

    pub fn mirror_point(&self, f: &IndexFunction) -> usize {
        self.space.phi(f.rank())
    }
}

pub fn free_space(n: usize) -> Result<FreeSpace> {
    if n == 0 {
        return Err(Error::InvalidArgument("n must be at least 1".into()));
    }
    if n > MAX_SPACE_N {
        return Err(Error::Budget(format!("free space for n = {n} exceeds the limit n ≤ {MAX_SPACE_N}")));
    }
    let plus: Vec<IndexFunction> = IndexFunction::all(n).collect();
    let base = plus.len();
    let mut labels: Vec<PointLabel> = plus
        .iter()
        .map(|f| PointLabel { function: f.clone(), mirrored: false })
        .collect();
    let mut phi: Vec<usize> = (0..base).collect();
    for (i, f) in plus.iter().enumerate() {
        if classify_function(f) != FunctionClass::F2 {
            phi[i] = labels.len();
            phi.push(i);
            labels.push(PointLabel { function: f.clone(), mirrored: true });
        }
    }
    let size = labels.len();
    let mut up: Vec<Subset> = (0..size).map(|x| Subset::from_indices(size, [x])).collect();
    for (hi, h) in plus.iter().enumerate() {
        for (fi, f) in plus.iter().enumerate() {
            if strictly_below(h, f)? {
                up[hi].insert(fi);
                // φ(P_f) ≤ φ(P_h)
                up[phi[fi]].insert(phi[hi]);
            }
        }
        if h.is_maximal() {
            up[hi].insert(phi[hi]);
        }
    }
    // transitive closure, row-wise Warshall
    for k in 0..size {
        let row_k = up[k].clone();
        for row in up.iter_mut() {
            if row.contains(k) {
                *row = row.union(&row_k);
            }
        }
    }
    let space = NelsonSpace::unchecked(|x, y| up[x].contains(y), phi)?;
    Ok(FreeSpace { n, space, labels })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ComponentKind {
    Boolean,
    Halved(usize),
}

impl fmt::Display for ComponentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ComponentKind::Boolean => write!(f, "Boolean"),
            ComponentKind::Halved(k) => write!(f, "Halved({k})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Component {
    pub maximal: IndexFunction,
    pub kind: ComponentKind,
    /// Points of the free space, increasing; local point `i` is `points[i]`.
    pub points: Vec<usize>,
    pub space: NelsonSpace,
}

/// Connected components, ordered by the digit string of their maximal label.
pub fn components(fs: &FreeSpace) -> Result<Vec<Component>> {
    let mut out = Vec::new();
    for comp in fs.space.components() {
        let maxima: Vec<&IndexFunction> = comp
            .iter()
            .filter(|&p| p < fs.labels.len() && !fs.labels[p].mirrored && fs.labels[p].function.is_maximal())
            .map(|p| &fs.labels[p].function)
            .collect();
        let [maximal] = maxima.as_slice() else {
            return Err(Error::Inconsistent(format!(
                "component with {} maximal X⁺ points",
                maxima.len()
            )));
        };
        let kind = match maximal.halves() {
            0 => ComponentKind::Boolean,
            k => ComponentKind::Halved(k),
        };
        let (space, points) = fs.space.restrict(&comp)?;
        out.push(Component {
            maximal: (*maximal).clone(),
            kind,
            points,
            space,
        });
    }
    out.sort_by(|a, b| a.maximal.cmp(&b.maximal));
    Ok(out)
}

/// `|F(n)| = 2^{2^{2n}} ∏_{k=1}^{n} (2^{2^{n−k}}+1)^{C(n,k)·2^{n−k}}`
pub fn count_free(n: usize) -> BigUint {
    let two = BigUint::from(2u32);
    let mut total = two.pow(1u32 << (2 * n));
    let mut binom: u32 = 1;
    for k in 1..=n {
        binom = binom * (n + 1 - k) as u32 / k as u32;
        let base = two.pow(1u32 << (n - k)) + 1u32;
        total *= base.pow(binom << (n - k));
    }
    total
}

/// `|F(n)|` as the product of the numbers of increasing sets of the
/// component posets.
pub fn count_via_components(n: usize) -> Result<BigUint> {
    let fs = free_space(n)?;
    Ok(components(&fs)?
        .iter()
        .map(|c| count_downsets(&c.space))
        .product())
}

/// Number of downsets of a poset: exhaustive up to 20 points, otherwise by
/// splitting on a maximal point `m`, `D(P) = D(P ∖ {m}) + D(P ∖ ↓m)`,
/// with connected pieces counted separately.
pub fn count_downsets(s: &NelsonSpace) -> BigUint {
    if s.size() <= 20 {
        return BigUint::from(exhaustive_downsets(s, &Subset::full(s.size())));
    }
    let mut memo = HashMap::new();
    downsets_rec(s, Subset::full(s.size()), &mut memo)
}

fn exhaustive_downsets(s: &NelsonSpace, within: &Subset) -> u64 {
    let pts = within.to_vec();
    let below: Vec<u32> = pts
        .iter()
        .map(|&x| {
            pts.iter()
                .enumerate()
                .filter(|&(_, &y)| s.leq(y, x))
                .fold(0u32, |m, (j, _)| m | 1 << j)
        })
        .collect();
    (0u32..1 << pts.len())
        .filter(|&m| (0..pts.len()).all(|i| m >> i & 1 == 0 || below[i] & !m == 0))
        .count() as u64
}

fn downsets_rec(s: &NelsonSpace, p: Subset, memo: &mut HashMap<Subset, BigUint>) -> BigUint {
    if p.count() <= 20 {
        return BigUint::from(exhaustive_downsets(s, &p));
    }
    if let Some(v) = memo.get(&p) {
        return v.clone();
    }
    let pieces = connected_pieces(s, &p);
    let value = if pieces.len() > 1 {
        pieces
            .into_iter()
            .map(|q| downsets_rec(s, q, memo))
            .product()
    } else {
        let m = p
            .iter()
            .find(|&x| s.up(x).intersection(&p).count() == 1)
            .expect("finite poset has a maximal point");
        let mut without = p.clone();
        without.remove(m);
        let rest = p.difference(s.down(m));
        downsets_rec(s, without, memo) + downsets_rec(s, rest, memo)
    };
    memo.insert(p, value.clone());
    value
}

fn connected_pieces(s: &NelsonSpace, p: &Subset) -> Vec<Subset> {
    let mut left = p.clone();
    let mut out = Vec::new();
    while let Some(start) = left.to_vec().first().copied() {
        let mut piece = Subset::from_indices(p.universe(), [start]);
        let mut frontier = vec![start];
        while let Some(x) = frontier.pop() {
            let nbrs = s.up(x).union(s.down(x)).intersection(p);
            for y in nbrs.iter() {
                if piece.insert(y) {
                    frontier.push(y);
                }
            }
        }
        left = left.difference(&piece);
        out.push(piece);
    }
    out
}

/// One component of `F(n)` with its dual algebra when small enough.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeComponent {
    pub component: Component,
    pub algebra_size: BigUint,
    pub dual: Option<DualAlgebra>,
}

/// The materialized product of the component algebras.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaterializedFree {
    pub algebra: NelsonAlgebra,
    /// Coordinates follow the component order.
    pub radix: Radix,
    /// The free generators as elements of `algebra`.
    pub generators: Vec<Elem>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FreeAlgebraDescription {
    pub n: usize,
    pub space: FreeSpace,
    pub components: Vec<FreeComponent>,
    pub total_count: BigUint,
    pub materialized: Option<MaterializedFree>,
}

pub fn free_algebra(n: usize) -> Result<FreeAlgebraDescription> {
    let space = free_space(n)?;
    let comps = components(&space)?;
    let generators = generator_elements(&space)?;
    let mut out = Vec::with_capacity(comps.len());
    for c in comps {
        let algebra_size = count_downsets(&c.space);
        let dual = if algebra_size <= BigUint::from(4096u32) {
            Some(dual_algebra(&c.space)?)
        } else {
            None
        };
        out.push(FreeComponent { component: c, algebra_size, dual });
    }
    let total_count: BigUint = out.iter().map(|c| &c.algebra_size).product();
    let materialized = if total_count <= BigUint::from(MATERIALIZE_LIMIT) {
        let duals: Vec<&DualAlgebra> = out
            .iter()
            .map(|c| c.dual.as_ref().expect("small components are dualized"))
            .collect();
        let factors: Vec<&NelsonAlgebra> = duals.iter().map(|d| &d.algebra).collect();
        let algebra = product(&factors)?;
        let radix = Radix::new(factors.iter().map(|a| a.size()).collect());
        let generators = generators
            .iter()
            .map(|u| element_of(&out, &radix, u))
            .collect::<Result<Vec<_>>>()?;
        Some(MaterializedFree { algebra, radix, generators })
    } else {
        None
    };
    Ok(FreeAlgebraDescription {
        n,
        space,
        components: out,
        total_count,
        materialized,
    })
}

/// The product element whose coordinates are the traces of `u`.
fn element_of(comps: &[FreeComponent], radix: &Radix, u: &Subset) -> Result<Elem> {
    let coords = comps
        .iter()
        .map(|c| {
            let local = Subset::from_predicate(c.component.points.len(), |i| u.contains(c.component.points[i]));
            let dual = c.dual.as_ref().expect("materialized components are dualized");
            dual.index_of(&local)
                .ok_or_else(|| Error::Inconsistent(format!("{local:?} is not increasing")))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(radix.encode(&coords))
}

/// The free generators as increasing sets of the free space:
/// `U_i = {P_f : f_i = 1} ∪ {φ(P_f) : f_i ≠ 0}`.
pub fn generator_elements(fs: &FreeSpace) -> Result<Vec<Subset>> {
    (0..fs.n)
        .map(|i| {
            let mut u = Subset::empty(fs.space.size());
            for f in IndexFunction::all(fs.n) {
                if f.0[i] == ONE {
                    u.insert(fs.plus_point(&f));
                }
                if f.0[i] != 0 {
                    u.insert(fs.mirror_point(&f));
                }
            }
            if !fs.space.is_increasing(&u) {
                return Err(Error::Inconsistent(format!("generator {i} is not increasing")));
            }
            Ok(u)
        })
        .collect()
}

impl FreeAlgebraDescription {
    /// The increasing set of the free space behind a materialized element.
    pub fn increasing_set(&self, x: Elem) -> Option<Subset> {
        let m = self.materialized.as_ref()?;
        let coords = m.radix.decode(x);
        let mut u = Subset::empty(self.space.space.size());
        for (c, &k) in self.components.iter().zip(&coords) {
            for i in c.dual.as_ref()?.sets[k].iter() {
                u.insert(c.component.points[i]);
            }
        }
        Some(u)
    }

    /// Value in `C5` of the free element with increasing set `u` under the
    /// evaluation at `f`: the number of the points `P_f`, `P_M`, `φ(P_M)`,
    /// `φ(P_f)` lying in `u`, where `M` is the maximal function above `f`.
    pub fn evaluate(&self, u: &Subset, f: &IndexFunction) -> u8 {
        let m = f.maximal_above();
        let pts = [
            self.space.plus_point(f),
            self.space.plus_point(&m),
            self.space.mirror_point(&m),
            self.space.mirror_point(f),
        ];
        pts.iter().filter(|&&p| u.contains(p)).count() as u8
    }
}

/// Positions of a `k`-element chain inside `C5`.
fn chain_in_c5(tag: ChainTag) -> &'static [u8] {
    match tag {
        ChainTag::C2 => &[0, 4],
        ChainTag::C3 => &[0, 2, 4],
        ChainTag::C4 => &[0, 1, 3, 4],
        ChainTag::C5 => &[0, 1, 2, 3, 4],
    }
}

/// The unique homomorphism `F(n) -> target` sending generator `i` to
/// `assignment[i]`, computed coordinatewise through the representation of
/// `target` as a subalgebra of a product of chains inside `C5`.
pub fn extend_map(
    free: &FreeAlgebraDescription,
    target: &NelsonAlgebra,
    assignment: &[Elem],
) -> Result<Homomorphism> {
    let m = free
        .materialized
        .as_ref()
        .ok_or_else(|| Error::Refused(format!("F({}) is not materialized", free.n)))?;
    if assignment.len() != free.n {
        return Err(Error::InvalidArgument(format!(
            "assignment has {} values for {} generators",
            assignment.len(),
            free.n
        )));
    }
    if let Some(&v) = assignment.iter().find(|&&v| v >= target.size()) {
        return Err(Error::InvalidArgument(format!("assigned element {v} out of range")));
    }
    if target.is_trivial() || !target.is_five_valued() {
        return Err(Error::Refused("target must be a non-trivial five-valued algebra".into()));
    }
    let rep = representation_embedding(target)?;
    // per coordinate: chain positions in C5 of each quotient element
    let mut positions: Vec<Vec<u8>> = Vec::new();
    for (d, q) in rep.family.iter().zip(&rep.quotients) {
        let tag = classify_quotient_by_irreducible(target, d)?.tag;
        let order = q
            .quotient
            .chain_order()
            .ok_or_else(|| Error::Inconsistent("quotient is not a chain".into()))?;
        let mut pos = vec![0; order.len()];
        for (rank, &e) in order.iter().enumerate() {
            pos[e] = chain_in_c5(tag)[rank];
        }
        positions.push(pos);
    }
    let index_functions: Vec<IndexFunction> = rep
        .quotients
        .iter()
        .zip(&positions)
        .map(|(q, pos)| IndexFunction(assignment.iter().map(|&a| pos[q.natural_epi.apply(a)]).collect()))
        .collect();
    let image: HashMap<Elem, Elem> = target
        .elements()
        .map(|y| (rep.embedding.apply(y), y))
        .collect();
    let map = m
        .algebra
        .elements()
        .map(|x| {
            let u = free.increasing_set(x).expect("materialized");
            let coords = index_functions
                .iter()
                .zip(&positions)
                .map(|(f, pos)| {
                    let v = free.evaluate(&u, f);
                    pos.iter().position(|&p| p == v).ok_or_else(|| {
                        Error::Inconsistent(format!("value {v} at {f} outside the quotient chain"))
                    })
                })
                .collect::<Result<Vec<_>>>()?;
            image
                .get(&rep.radix.encode(&coords))
                .copied()
                .ok_or_else(|| Error::Inconsistent(format!("coordinates {coords:?} outside the image")))
        })
        .collect::<Result<Vec<_>>>()?;
    let h = Homomorphism::new(m.algebra.clone(), target.clone(), map)?;
    if let Some(f) = h.preservation_failure() {
        return Err(Error::Inconsistent(format!("extension is not a homomorphism ({f})")));
    }
    if let Some(i) = (0..free.n).find(|&i| h.apply(m.generators[i]) != assignment[i]) {
        return Err(Error::Inconsistent(format!("extension disagrees on generator {i}")));
    }
    Ok(h)
}

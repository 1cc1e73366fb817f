//! Filters, deductive systems, quotients and the subdirect representation.

use serde::Serialize;

use crate::algebra::{product, Elem, Homomorphism, NelsonAlgebra, Radix, Tables};
use crate::error::{Error, Result};
use crate::subset::Subset;

pub fn is_filter(a: &Tables, s: &Subset) -> bool {
    s.contains(a.top())
        && s.iter().all(|x| a.elements().all(|y| !a.leq(x, y) || s.contains(y)))
        && s.iter().all(|x| s.iter().all(|y| s.contains(a.meet(x, y))))
}

pub fn is_prime_filter(a: &Tables, s: &Subset) -> bool {
    is_filter(a, s)
        && !s.is_full()
        && a.elements().all(|x| {
            a.elements()
                .all(|y| !s.contains(a.join(x, y)) || s.contains(x) || s.contains(y))
        })
}

/// All filters, in canonical (bitset value) order. In a finite lattice these
/// are exactly the principal filters `[a)`.
pub fn filters(a: &NelsonAlgebra) -> Vec<Subset> {
    let mut out: Vec<Subset> = a.elements().map(|x| a.up(x)).collect();
    out.sort();
    out.dedup();
    out
}

pub fn prime_filters(a: &NelsonAlgebra) -> Vec<Subset> {
    filters(a)
        .into_iter()
        .filter(|f| is_prime_filter(a, f))
        .collect()
}

/// `φ(P) = ∁{x : ∼x ∈ P}` on a prime filter.
pub fn birula_rasiowa(a: &NelsonAlgebra, p: &Subset) -> Result<Subset> {
    if !is_prime_filter(a, p) {
        return Err(Error::InvalidArgument(format!("{p:?} is not a prime filter")));
    }
    Ok(phi(a, p))
}

pub(crate) fn phi(a: &Tables, p: &Subset) -> Subset {
    Subset::from_predicate(a.size(), |x| !p.contains(a.neg(x)))
}

/// Contains top and is closed under modus ponens.
pub fn is_deductive_system(a: &Tables, s: &Subset) -> bool {
    s.contains(a.top())
        && s.iter()
            .all(|x| a.elements().all(|y| !s.contains(a.imp(x, y)) || s.contains(y)))
}

/// Least deductive system containing `seed`, by fixpoint closure.
pub fn generated_ds(a: &Tables, seed: &[Elem]) -> Subset {
    let mut d = Subset::from_indices(a.size(), seed.iter().copied());
    d.insert(a.top());
    loop {
        let mut grew = false;
        for x in d.to_vec() {
            for y in a.elements() {
                if !d.contains(y) && d.contains(a.imp(x, y)) {
                    d.insert(y);
                    grew = true;
                }
            }
        }
        if !grew {
            return d;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeductiveSystemInfo {
    #[serde(serialize_with = "ser_subset")]
    pub ds: Subset,
    pub is_proper: bool,
    pub is_maximal: bool,
    pub is_irreducible: bool,
    pub is_completely_irreducible: bool,
    /// Least element the system is bounded to, if any.
    pub bounded_to: Option<Elem>,
}

pub(crate) fn ser_subset<S: serde::Serializer>(s: &Subset, ser: S) -> std::result::Result<S::Ok, S::Error> {
    ser.collect_seq(s.iter())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct EnumerationBudget {
    pub max_filters: usize,
}

impl Default for EnumerationBudget {
    fn default() -> Self {
        EnumerationBudget {
            max_filters: 1 << 20,
        }
    }
}

pub fn deductive_systems(a: &NelsonAlgebra) -> Result<Vec<DeductiveSystemInfo>> {
    deductive_systems_with(a, EnumerationBudget::default())
}

/// Every deductive system with its taxonomy. Complete irreducibility is
/// decided by boundedness.
pub fn deductive_systems_with(
    a: &NelsonAlgebra,
    budget: EnumerationBudget,
) -> Result<Vec<DeductiveSystemInfo>> {
    // one principal filter per element bounds the filter count
    if a.size() > budget.max_filters {
        return Err(Error::Budget(format!(
            "{} filters exceed the budget of {}; use irreducibles_via_primes",
            a.size(),
            budget.max_filters
        )));
    }
    let all: Vec<Subset> = filters(a)
        .into_iter()
        .filter(|f| is_deductive_system(a, f))
        .collect();
    Ok(all.iter().map(|d| classify_ds(a, d, &all)).collect())
}

fn classify_ds(a: &Tables, d: &Subset, all: &[Subset]) -> DeductiveSystemInfo {
    let is_proper = !d.is_full();
    let above: Vec<&Subset> = all
        .iter()
        .filter(|e| d.is_proper_subset(e))
        .collect();
    let proper_above = above.iter().filter(|e| !e.is_full()).count();
    let is_maximal = is_proper && proper_above == 0;
    let is_irreducible = is_proper
        && !above
            .iter()
            .any(|e1| above.iter().any(|e2| e1.intersection(e2) == *d));
    let bounded_to = if is_proper {
        a.elements()
            .filter(|&x| !d.contains(x))
            .find(|&x| above.iter().all(|e| e.contains(x)))
    } else {
        None
    };
    DeductiveSystemInfo {
        ds: d.clone(),
        is_proper,
        is_maximal,
        is_irreducible,
        is_completely_irreducible: bounded_to.is_some(),
        bounded_to,
    }
}

/// First completely irreducible deductive system that is neither maximal
/// nor strictly below exactly one proper deductive system; `None` when the
/// condition holds throughout.
pub fn ci_containment_failure(a: &NelsonAlgebra) -> Result<Option<Subset>> {
    let all = deductive_systems(a)?;
    Ok(all
        .iter()
        .filter(|d| d.is_completely_irreducible && !d.is_maximal)
        .find(|d| {
            all.iter()
                .filter(|e| e.is_proper && d.ds.is_proper_subset(&e.ds))
                .count()
                != 1
        })
        .map(|d| d.ds.clone()))
}

/// Irreducible deductive systems as the prime filters with `P ⊆ φ(P)`.
pub fn irreducibles_via_primes(a: &NelsonAlgebra) -> Vec<Subset> {
    prime_filters(a)
        .into_iter()
        .filter(|p| p.is_subset(&phi(a, p)))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientResult {
    pub quotient: NelsonAlgebra,
    pub natural_epi: Homomorphism,
    /// Congruence classes, ordered by least member; class `i` is element `i`
    /// of the quotient.
    pub classes: Vec<Subset>,
}

/// `x ≡ y` iff `x->y`, `y->x`, `∼x->∼y`, `∼y->∼x` all lie in `d`.
pub fn congruent(a: &Tables, d: &Subset, x: Elem, y: Elem) -> bool {
    d.contains(a.imp(x, y))
        && d.contains(a.imp(y, x))
        && d.contains(a.imp(a.neg(x), a.neg(y)))
        && d.contains(a.imp(a.neg(y), a.neg(x)))
}

pub fn quotient(a: &NelsonAlgebra, d: &Subset) -> Result<QuotientResult> {
    if !is_deductive_system(a, d) {
        return Err(Error::InvalidArgument(format!("{d:?} is not a deductive system")));
    }
    let n = a.size();
    let mut class_of = vec![usize::MAX; n];
    let mut classes: Vec<Subset> = Vec::new();
    for x in a.elements() {
        if class_of[x] != usize::MAX {
            continue;
        }
        let c = Subset::from_predicate(n, |y| congruent(a, d, x, y));
        for y in c.iter() {
            class_of[y] = classes.len();
        }
        classes.push(c);
    }
    let reps: Vec<Elem> = classes.iter().map(|c| c.iter().next().expect("nonempty")).collect();
    let k = classes.len();
    let tables = Tables::from_fns(
        k,
        class_of[a.top()],
        |i| class_of[a.neg(reps[i])],
        |i, j| class_of[a.meet(reps[i], reps[j])],
        |i, j| class_of[a.join(reps[i], reps[j])],
        |i, j| class_of[a.imp(reps[i], reps[j])],
    )?;
    let quotient = NelsonAlgebra::trusted(tables);
    let natural_epi = Homomorphism::new(a.clone(), quotient.clone(), class_of)?;
    if let Some(f) = natural_epi.preservation_failure() {
        return Err(Error::Inconsistent(format!("≡_D is not a congruence ({f})")));
    }
    Ok(QuotientResult {
        quotient,
        natural_epi,
        classes,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum ChainTag {
    C2,
    C3,
    C4,
    C5,
}

impl ChainTag {
    pub fn size(self) -> usize {
        match self {
            ChainTag::C2 => 2,
            ChainTag::C3 => 3,
            ChainTag::C4 => 4,
            ChainTag::C5 => 5,
        }
    }

    pub fn from_size(n: usize) -> Option<Self> {
        Some(match n {
            2 => ChainTag::C2,
            3 => ChainTag::C3,
            4 => ChainTag::C4,
            5 => ChainTag::C5,
            _ => return None,
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QuotientClassification {
    pub tag: ChainTag,
    /// The unique maximal deductive system containing the input.
    pub maximal: Subset,
    /// Predicted congruence classes, from the top class `D` down to `∼D`.
    pub classes: Vec<Subset>,
}

/// Classifies `A/D` for irreducible `D` in a five-valued algebra from the
/// position of `D` below its maximal extension `M` and of `M` against
/// `φ(M)`, and cross-checks the prediction against [`quotient`].
pub fn classify_quotient_by_irreducible(a: &NelsonAlgebra, d: &Subset) -> Result<QuotientClassification> {
    if !a.is_five_valued() {
        return Err(Error::Refused("algebra is not five-valued".into()));
    }
    if !(is_prime_filter(a, d) && d.is_subset(&phi(a, d))) {
        return Err(Error::InvalidArgument(format!("{d:?} is not an irreducible deductive system")));
    }
    let m = maximal_above(a, d)?;
    let neg_set = |s: &Subset| a.neg_set(s);
    let (phi_m, phi_d) = (phi(a, &m), phi(a, d));
    let (tag, classes) = match (d == &m, m == phi_m) {
        (true, true) => (ChainTag::C2, vec![m.clone(), neg_set(&m)]),
        (true, false) => (
            ChainTag::C3,
            vec![m.clone(), phi_m.difference(&m), neg_set(&m)],
        ),
        (false, true) => (
            ChainTag::C4,
            vec![
                d.clone(),
                m.difference(d),
                phi_d.difference(&m),
                neg_set(d),
            ],
        ),
        (false, false) => (
            ChainTag::C5,
            vec![
                d.clone(),
                m.difference(d),
                phi_m.difference(&m),
                phi_d.difference(&phi_m),
                neg_set(d),
            ],
        ),
    };
    let q = quotient(a, d)?;
    let mut predicted = classes.clone();
    predicted.sort();
    let mut actual = q.classes.clone();
    actual.sort();
    if predicted != actual || !q.quotient.is_chain() {
        return Err(Error::Inconsistent(format!(
            "predicted classes {classes:?} disagree with quotient classes {:?}",
            q.classes
        )));
    }
    Ok(QuotientClassification {
        tag,
        maximal: m,
        classes,
    })
}

/// The unique maximal deductive system containing `d`.
fn maximal_above(a: &NelsonAlgebra, d: &Subset) -> Result<Subset> {
    let maxima: Vec<Subset> = filters(a)
        .into_iter()
        .filter(|f| !f.is_full() && d.is_subset(f) && is_deductive_system(a, f))
        .collect();
    let top: Vec<&Subset> = maxima
        .iter()
        .filter(|m| !maxima.iter().any(|e| m.is_proper_subset(e)))
        .collect();
    match top.as_slice() {
        [m] => Ok((*m).clone()),
        _ => Err(Error::Inconsistent(format!(
            "{} maximal deductive systems above {d:?}",
            top.len()
        ))),
    }
}

/// Image of `A` in the product of its quotients by a separating family.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representation {
    pub family: Vec<Subset>,
    pub quotients: Vec<QuotientResult>,
    pub radix: Radix,
    /// Injective homomorphism `x ↦ (|x|_D)_D` into the product.
    pub embedding: Homomorphism,
}

/// Embeds a non-trivial algebra into the product of its quotients by the
/// irreducible deductive systems.
pub fn representation_embedding(a: &NelsonAlgebra) -> Result<Representation> {
    if a.is_trivial() {
        return Err(Error::Refused("trivial algebra has no irreducible deductive system".into()));
    }
    let family = irreducibles_via_primes(a);
    let meet_all = family
        .iter()
        .fold(Subset::full(a.size()), |acc, d| acc.intersection(d));
    if meet_all != Subset::from_indices(a.size(), [a.top()]) {
        return Err(Error::Inconsistent("irreducibles are not separating".into()));
    }
    let quotients = family
        .iter()
        .map(|d| quotient(a, d))
        .collect::<Result<Vec<_>>>()?;
    let factors: Vec<&NelsonAlgebra> = quotients.iter().map(|q| &q.quotient).collect();
    let target = product(&factors)?;
    let radix = Radix::new(factors.iter().map(|f| f.size()).collect());
    let map = a
        .elements()
        .map(|x| {
            let coords: Vec<Elem> = quotients.iter().map(|q| q.natural_epi.apply(x)).collect();
            radix.encode(&coords)
        })
        .collect();
    let embedding = Homomorphism::new(a.clone(), target, map)?;
    if !embedding.is_injective() {
        return Err(Error::Inconsistent("representation map is not injective".into()));
    }
    if let Some(f) = embedding.preservation_failure() {
        return Err(Error::Inconsistent(format!("representation map fails at {f}")));
    }
    Ok(Representation {
        family,
        quotients,
        radix,
        embedding,
    })
}

/// Given epimorphisms `h1: N -> N1`, `h2: N -> N2` with
/// `ker h1 ⊆ ker h2`, the epimorphism `h: N1 -> N2` with `h ∘ h1 = h2`.
pub fn factor_epimorphism(h1: &Homomorphism, h2: &Homomorphism) -> Result<Homomorphism> {
    if h1.source != h2.source {
        return Err(Error::InvalidArgument("epimorphisms have different sources".into()));
    }
    for (name, h) in [("h1", h1), ("h2", h2)] {
        if !h.is_surjective() {
            return Err(Error::InvalidArgument(format!("{name} is not surjective")));
        }
        if let Some(f) = h.preservation_failure() {
            return Err(Error::InvalidArgument(format!("{name} is not a homomorphism ({f})")));
        }
    }
    let (k1, k2) = (h1.kernel(), h2.kernel());
    if let Some(w) = k1.difference(&k2).iter().next() {
        return Err(Error::InvalidArgument(format!(
            "kernel inclusion fails: element {w} is in ker h1 but not in ker h2"
        )));
    }
    let mut map: Vec<Option<Elem>> = vec![None; h1.target.size()];
    for x in h1.source.elements() {
        let (y, z) = (h1.apply(x), h2.apply(x));
        match map[y] {
            None => map[y] = Some(z),
            Some(prev) if prev != z => {
                return Err(Error::Inconsistent(format!(
                    "factor map is not well defined at {y}"
                )))
            }
            _ => {}
        }
    }
    let map = map.into_iter().map(|v| v.expect("h1 surjective")).collect();
    Homomorphism::new(h1.target.clone(), h2.target.clone(), map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{find_isomorphism, make_chain, product};

    fn set(n: usize, xs: &[Elem]) -> Subset {
        Subset::from_indices(n, xs.iter().copied())
    }

    /// Brute-force filters over all subsets.
    fn filters_oracle(a: &NelsonAlgebra) -> Vec<Subset> {
        let n = a.size();
        let mut out: Vec<Subset> = (0u64..1 << n)
            .map(|m| Subset::from_predicate(n, |i| m >> i & 1 == 1))
            .filter(|s| is_filter(a, s))
            .collect();
        out.sort();
        out
    }

    #[test]
    fn filters_match_subset_enumeration() {
        let c2 = make_chain(2).unwrap();
        let c3 = make_chain(3).unwrap();
        let c5 = make_chain(5).unwrap();
        for a in [
            c5.clone(),
            product(&[&c2, &c2]).unwrap(),
            product(&[&c2, &c3]).unwrap(),
            product(&[&c3, &c3]).unwrap(),
        ] {
            assert_eq!(filters(&a), filters_oracle(&a));
        }
    }

    #[test]
    fn prime_filters_of_chains() {
        let c5 = make_chain(5).unwrap();
        let primes = prime_filters(&c5);
        let expected: Vec<Subset> = vec![set(5, &[4]), set(5, &[3, 4]), set(5, &[2, 3, 4]), set(5, &[1, 2, 3, 4])];
        assert_eq!(primes, expected);
        assert_eq!(prime_filters(&make_chain(2).unwrap()), vec![set(2, &[1])]);
    }

    #[test]
    fn prime_filters_of_square() {
        let c2 = make_chain(2).unwrap();
        let sq = product(&[&c2, &c2]).unwrap();
        // (0,1)=1 and (1,0)=2 are the atoms; primes are [(1,0)) and [(0,1))
        let primes = prime_filters(&sq);
        assert_eq!(primes, vec![set(4, &[1, 3]), set(4, &[2, 3])]);
        for p in &primes {
            assert_eq!(&birula_rasiowa(&sq, p).unwrap(), p);
        }
    }

    #[test]
    fn birula_rasiowa_on_c5() {
        let c5 = make_chain(5).unwrap();
        assert_eq!(birula_rasiowa(&c5, &set(5, &[4])).unwrap(), set(5, &[1, 2, 3, 4]));
        assert_eq!(birula_rasiowa(&c5, &set(5, &[3, 4])).unwrap(), set(5, &[2, 3, 4]));
        let c2 = make_chain(2).unwrap();
        assert_eq!(birula_rasiowa(&c2, &set(2, &[1])).unwrap(), set(2, &[1]));
        assert!(birula_rasiowa(&c5, &set(5, &[0, 1, 2, 3, 4])).is_err());
    }

    #[test]
    fn taxonomy_of_c5() {
        let c5 = make_chain(5).unwrap();
        let ds = deductive_systems(&c5).unwrap();
        let sets: Vec<Vec<Elem>> = ds.iter().map(|d| d.ds.to_vec()).collect();
        assert_eq!(sets, vec![vec![4], vec![3, 4], vec![0, 1, 2, 3, 4]]);
        let maximal: Vec<Vec<Elem>> = ds.iter().filter(|d| d.is_maximal).map(|d| d.ds.to_vec()).collect();
        assert_eq!(maximal, vec![vec![3, 4]]);
        let irr: Vec<Vec<Elem>> = ds.iter().filter(|d| d.is_irreducible).map(|d| d.ds.to_vec()).collect();
        let ci: Vec<Vec<Elem>> = ds.iter().filter(|d| d.is_completely_irreducible).map(|d| d.ds.to_vec()).collect();
        assert_eq!(irr, vec![vec![4], vec![3, 4]]);
        assert_eq!(ci, irr);
        assert_eq!(irreducibles_via_primes(&c5), vec![set(5, &[4]), set(5, &[3, 4])]);
    }

    #[test]
    fn taxonomy_of_c2_and_square() {
        let c2 = make_chain(2).unwrap();
        let ds = deductive_systems(&c2).unwrap();
        assert_eq!(ds.len(), 2);
        assert!(ds[0].is_maximal && ds[0].ds == set(2, &[1]));
        assert_eq!(irreducibles_via_primes(&c2), vec![set(2, &[1])]);

        let sq = product(&[&c2, &c2]).unwrap();
        let ds = deductive_systems(&sq).unwrap();
        let top = ds.iter().find(|d| d.ds == set(4, &[3])).unwrap();
        assert!(!top.is_irreducible && !top.is_maximal);
        let maximal: Vec<Subset> = ds.iter().filter(|d| d.is_maximal).map(|d| d.ds.clone()).collect();
        assert_eq!(maximal, vec![set(4, &[1, 3]), set(4, &[2, 3])]);
        assert_eq!(maximal[0].intersection(&maximal[1]), top.ds);
    }

    #[test]
    fn containment_condition_tracks_five_valuedness() {
        for n in 2..=8 {
            let c = make_chain(n).unwrap();
            assert_eq!(ci_containment_failure(&c).unwrap().is_none(), n <= 5, "C{n}");
        }
        // in C6 the top filter [1) lies below [4/5) and [3/5)
        assert_eq!(ci_containment_failure(&make_chain(6).unwrap()).unwrap(), Some(set(6, &[5])));
    }

    #[test]
    fn budget_is_enforced() {
        let c5 = make_chain(5).unwrap();
        let err = deductive_systems_with(&c5, EnumerationBudget { max_filters: 3 }).unwrap_err();
        assert!(matches!(err, Error::Budget(_)));
    }

    #[test]
    fn generated_deductive_systems() {
        let c5 = make_chain(5).unwrap();
        assert_eq!(generated_ds(&c5, &[3]), set(5, &[3, 4]));
        assert_eq!(generated_ds(&c5, &[]), set(5, &[4]));
        assert_eq!(generated_ds(&c5, &[1]), Subset::full(5));
    }

    #[test]
    fn generated_ds_matches_closed_forms() {
        let c2 = make_chain(2).unwrap();
        let c3 = make_chain(3).unwrap();
        for alg in [make_chain(5).unwrap(), make_chain(6).unwrap(), product(&[&c2, &c3]).unwrap()] {
            let top = alg.top();
            for a in alg.elements() {
                let one = Subset::from_predicate(alg.size(), |x| alg.imp(a, x) == top);
                assert_eq!(generated_ds(&alg, &[a]), one);
                for b in alg.elements() {
                    let two = Subset::from_predicate(alg.size(), |x| alg.imp(a, alg.imp(b, x)) == top);
                    let via_meet = Subset::from_predicate(alg.size(), |x| alg.imp(alg.meet(a, b), x) == top);
                    assert_eq!(generated_ds(&alg, &[a, b]), two);
                    assert_eq!(two, via_meet);
                }
            }
        }
    }

    #[test]
    fn quotients_of_c5() {
        let c5 = make_chain(5).unwrap();
        let q = quotient(&c5, &set(5, &[3, 4])).unwrap();
        assert_eq!(q.classes, vec![set(5, &[0, 1]), set(5, &[2]), set(5, &[3, 4])]);
        assert!(find_isomorphism(&q.quotient, &make_chain(3).unwrap()).is_some());
        assert_eq!(q.natural_epi.kernel(), set(5, &[3, 4]));
        let id = quotient(&c5, &set(5, &[4])).unwrap();
        assert_eq!(id.quotient.tables(), c5.tables());
        assert!(quotient(&c5, &set(5, &[2, 4])).is_err());
    }

    #[test]
    fn quotient_by_projection_kernel() {
        let c5 = make_chain(5).unwrap();
        let c2 = make_chain(2).unwrap();
        let p = product(&[&c5, &c2]).unwrap();
        let r = Radix::new(vec![5, 2]);
        let kernel = set(10, &[r.encode(&[4, 0]), r.encode(&[4, 1])]);
        let q = quotient(&p, &kernel).unwrap();
        assert!(find_isomorphism(&q.quotient, &c5).is_some());
        assert_eq!(q.natural_epi.kernel(), kernel);
    }

    #[test]
    fn classification_examples() {
        let c5 = make_chain(5).unwrap();
        let c = classify_quotient_by_irreducible(&c5, &set(5, &[4])).unwrap();
        assert_eq!(c.tag, ChainTag::C5);
        assert_eq!(c.maximal, set(5, &[3, 4]));
        assert_eq!(c.classes, (0..5).rev().map(|i| set(5, &[i])).collect::<Vec<_>>());

        let c4 = make_chain(4).unwrap();
        let c = classify_quotient_by_irreducible(&c4, &set(4, &[3])).unwrap();
        assert_eq!(c.tag, ChainTag::C4);
        assert_eq!(c.maximal, set(4, &[2, 3]));

        let c2 = make_chain(2).unwrap();
        assert_eq!(classify_quotient_by_irreducible(&c2, &set(2, &[1])).unwrap().tag, ChainTag::C2);
        let c3 = make_chain(3).unwrap();
        assert_eq!(classify_quotient_by_irreducible(&c3, &set(3, &[2])).unwrap().tag, ChainTag::C3);
    }

    #[test]
    fn classification_refusals() {
        let c6 = make_chain(6).unwrap();
        assert!(matches!(
            classify_quotient_by_irreducible(&c6, &set(6, &[5])),
            Err(Error::Refused(_))
        ));
        let c5 = make_chain(5).unwrap();
        // [1/2) is prime but not irreducible
        assert!(matches!(
            classify_quotient_by_irreducible(&c5, &set(5, &[2, 3, 4])),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn representation_examples() {
        let c5 = make_chain(5).unwrap();
        let r = representation_embedding(&c5).unwrap();
        assert_eq!(r.radix.sizes(), &[5, 3]);
        assert!(r.embedding.is_injective());

        let c2 = make_chain(2).unwrap();
        let r = representation_embedding(&c2).unwrap();
        assert_eq!(r.embedding.map, vec![0, 1]);

        let sq = product(&[&c2, &c2]).unwrap();
        let r = representation_embedding(&sq).unwrap();
        assert_eq!(r.radix.sizes(), &[2, 2]);
        assert!(r.embedding.is_surjective() && r.embedding.is_injective());

        let trivial = NelsonAlgebra::try_from(
            Tables::from_fns(1, 0, |_| 0, |_, _| 0, |_, _| 0, |_, _| 0).unwrap(),
        )
        .unwrap();
        assert!(matches!(representation_embedding(&trivial), Err(Error::Refused(_))));
    }

    #[test]
    fn factoring_epimorphisms() {
        let c5 = make_chain(5).unwrap();
        let c4 = make_chain(4).unwrap();
        let c3 = make_chain(3).unwrap();
        let c2 = make_chain(2).unwrap();
        let pi_o = Homomorphism::new(c5.clone(), c3.clone(), vec![0, 0, 1, 2, 2]).unwrap();
        let h = factor_epimorphism(&Homomorphism::identity(&c5), &pi_o).unwrap();
        assert_eq!(h.map, pi_o.map);

        let pi_e = Homomorphism::new(c4.clone(), c2.clone(), vec![0, 0, 1, 1]).unwrap();
        let h = factor_epimorphism(&pi_e, &pi_e).unwrap();
        assert_eq!(h.map, vec![0, 1]);

        // C4 x C2 -> C4 -> C2
        let p = product(&[&c4, &c2]).unwrap();
        let r = Radix::new(vec![4, 2]);
        let proj = Homomorphism::new(p.clone(), c4.clone(), (0..8).map(|i| r.decode(i)[0]).collect()).unwrap();
        let composite = proj.then(&pi_e).unwrap();
        let h = factor_epimorphism(&proj, &composite).unwrap();
        assert_eq!(h.map, pi_e.map);
        assert_eq!(proj.then(&h).unwrap().map, composite.map);

        let err = factor_epimorphism(&pi_o, &Homomorphism::identity(&c5)).unwrap_err();
        assert!(matches!(err, Error::InvalidArgument(m) if m.contains("element 3")));
    }
}

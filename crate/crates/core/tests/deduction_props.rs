mod common;

use nelson::deduction::{
    birula_rasiowa, classify_quotient_by_irreducible, deductive_systems, irreducibles_via_primes, prime_filters,
    quotient, representation_embedding,
};
use nelson::free::free_algebra;
use nelson::{product, NelsonAlgebra};
use proptest::prelude::*;

use common::{chain, corpus};

fn corpus_with_f1() -> Vec<(String, NelsonAlgebra)> {
    let mut out = corpus();
    let f1 = free_algebra(1).unwrap().materialized.unwrap().algebra;
    out.push(("F(1)".into(), f1));
    out
}

#[test]
fn taxonomy_implications_hold() {
    for (name, a) in corpus_with_f1() {
        for d in deductive_systems(&a).unwrap() {
            if d.is_completely_irreducible {
                assert!(d.is_irreducible, "{name}: CI {:?} not irreducible", d.ds);
            }
            if d.is_maximal {
                assert!(d.is_irreducible && d.is_proper, "{name}: maximal {:?}", d.ds);
            }
            if d.is_irreducible {
                assert!(d.is_proper, "{name}: {:?}", d.ds);
            }
        }
    }
}

#[test]
fn irreducibles_agree_with_the_prime_filter_description() {
    for (name, a) in corpus_with_f1() {
        let mut from_taxonomy: Vec<_> = deductive_systems(&a)
            .unwrap()
            .into_iter()
            .filter(|d| d.is_irreducible)
            .map(|d| d.ds)
            .collect();
        let mut from_primes = irreducibles_via_primes(&a);
        from_taxonomy.sort();
        from_primes.sort();
        assert_eq!(from_taxonomy, from_primes, "{name}");
    }
}

#[test]
fn irreducible_and_completely_irreducible_coincide_when_five_valued() {
    for (name, a) in corpus_with_f1().into_iter().filter(|(_, a)| a.is_five_valued()) {
        for d in deductive_systems(&a).unwrap() {
            assert_eq!(d.is_irreducible, d.is_completely_irreducible, "{name}: {:?}", d.ds);
        }
    }
}

#[test]
fn birula_rasiowa_is_an_involution_on_comparable_primes() {
    for (name, a) in corpus_with_f1() {
        let primes = prime_filters(&a);
        for p in &primes {
            let q = birula_rasiowa(&a, p).unwrap();
            assert!(primes.contains(&q), "{name}: φ({p:?}) is not prime");
            assert_eq!(&birula_rasiowa(&a, &q).unwrap(), p, "{name}");
            assert!(p.is_subset(&q) || q.is_subset(p), "{name}: {p:?} and φ incomparable");
        }
    }
}

#[test]
fn quotients_by_irreducibles_are_small_chains() {
    for (name, a) in corpus_with_f1().into_iter().filter(|(_, a)| a.is_five_valued()) {
        for d in irreducibles_via_primes(&a) {
            let q = quotient(&a, &d).unwrap();
            assert!(q.quotient.is_chain(), "{name}: {d:?}");
            assert!((2..=5).contains(&q.quotient.size()), "{name}: {d:?}");
            let c = classify_quotient_by_irreducible(&a, &d).unwrap();
            assert_eq!(c.tag.size(), q.quotient.size(), "{name}: {d:?}");
            assert!(d.is_subset(&c.maximal), "{name}: {d:?}");
        }
    }
}

#[test]
fn representation_is_an_embedding() {
    for (name, a) in corpus_with_f1() {
        let r = representation_embedding(&a).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert!(r.embedding.is_injective() && r.embedding.is_homomorphism(), "{name}");
        assert_eq!(r.family.len(), r.quotients.len(), "{name}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 16, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn representation_of_random_products(sizes in proptest::collection::vec(2usize..=5, 1..=3)) {
        let factors: Vec<NelsonAlgebra> = sizes.iter().map(|&n| chain(n)).collect();
        let refs: Vec<&NelsonAlgebra> = factors.iter().collect();
        let p = product(&refs).unwrap();
        let r = representation_embedding(&p).unwrap();
        prop_assert!(r.embedding.is_injective());
        prop_assert!(r.embedding.is_homomorphism());
        for q in &r.quotients {
            prop_assert!(q.quotient.is_chain());
        }
    }

    #[test]
    fn generated_ds_is_the_least_ds(sizes in proptest::collection::vec(2usize..=4, 1..=2), pick in 0usize..64) {
        let factors: Vec<NelsonAlgebra> = sizes.iter().map(|&n| chain(n)).collect();
        let refs: Vec<&NelsonAlgebra> = factors.iter().collect();
        let p = product(&refs).unwrap();
        let seed = pick % p.size();
        let g = nelson::deduction::generated_ds(p.tables(), &[seed]);
        prop_assert!(g.contains(seed));
        prop_assert!(nelson::deduction::is_deductive_system(p.tables(), &g));
        for d in deductive_systems(&p).unwrap() {
            if d.ds.contains(seed) {
                prop_assert!(g.is_subset(&d.ds));
            }
        }
    }
}

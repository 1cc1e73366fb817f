mod common;

use nelson::algebra::{small_size_class, AxiomVariant, Radix};
use nelson::deduction::{deductive_systems, quotient};
use nelson::duality::{dual_algebra, NelsonSpace};
use nelson::term::five_valued_equivalents;
use nelson::{product, NelsonAlgebra, Tables};
use proptest::prelude::*;

use common::{chain, chain_oracle, corpus, relabel};

#[test]
fn chains_match_the_oracle() {
    for n in 2..=10 {
        assert_eq!(chain(n).tables(), &chain_oracle(n), "C{n}");
    }
}

#[test]
fn corpus_satisfies_both_axiomatizations_and_derived_rules() {
    for (name, a) in corpus() {
        assert!(a.check_axioms(AxiomVariant::Main).all_hold(), "{name}");
        assert!(a.check_axioms(AxiomVariant::Brignole).all_hold(), "{name}");
        assert!(a.check_order().iter().all(|r| r.holds()), "{name}");
        let derived = a.check_derived_rules();
        assert!(derived.all_hold(), "{name}: {:?}", derived.failures().collect::<Vec<_>>());
    }
}

#[test]
fn five_valued_equivalents_hold_on_five_valued_chains() {
    for n in 2..=5 {
        for (name, e) in five_valued_equivalents() {
            assert!(chain(n).holds(&e), "{name} on C{n}");
        }
    }
}

/// Small algebras reached by several constructions, each also relabelled.
fn small_algebras() -> Vec<(String, NelsonAlgebra)> {
    let (c2, c3, c5) = (chain(2), chain(3), chain(5));
    let mut out: Vec<(String, NelsonAlgebra)> = (2..=5).map(|n| (format!("C{n}"), chain(n))).collect();
    out.push(("C2xC2".into(), product(&[&c2, &c2]).unwrap()));
    for seeds in [vec![2], vec![1], vec![3], vec![0]] {
        let (sub, _) = nelson::algebra::generated_subalgebra(&c5, &seeds).unwrap();
        out.push((format!("S({seeds:?}) in C5"), sub));
    }
    let c5c3 = product(&[&c5, &c3]).unwrap();
    for d in deductive_systems(&c5c3).unwrap().into_iter().filter(|d| d.is_proper) {
        let q = quotient(&c5c3, &d.ds).unwrap();
        if q.quotient.size() <= 5 {
            out.push((format!("C5xC3/{:?}", d.ds), q.quotient));
        }
    }
    for k in 1..=4 {
        let s = NelsonSpace::new(|x, y| x <= y, (0..k).rev().collect()).unwrap();
        out.push((format!("D(chain {k})"), dual_algebra(&s).unwrap().algebra));
    }
    let two_points = NelsonSpace::new(|x, y| x == y, vec![0, 1]).unwrap();
    out.push(("D(two fixed points)".into(), dual_algebra(&two_points).unwrap().algebra));
    let relabelled: Vec<(String, NelsonAlgebra)> = out
        .iter()
        .map(|(name, a)| {
            let n = a.size();
            let perm: Vec<usize> = (0..n).map(|x| (x * 2 + 1) % n).collect::<Vec<_>>();
            let perm = if is_permutation(&perm) { perm } else { (0..n).rev().collect() };
            let t = relabel(a, &perm);
            (format!("{name} relabelled"), NelsonAlgebra::try_from(t).unwrap())
        })
        .collect();
    out.extend(relabelled);
    out
}

fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

#[test]
fn algebras_of_size_two_to_five_are_chains_or_the_square() {
    let cases = small_algebras();
    assert!(cases.len() >= 20);
    for (name, a) in cases {
        let (class, iso) = small_size_class(&a).unwrap_or_else(|| panic!("{name} unclassified"));
        assert!(iso.is_homomorphism() && iso.is_injective() && iso.is_surjective(), "{name}");
        let expected = if a.size() == 4 && !a.is_chain() { "C2xC2".to_string() } else { format!("C{}", a.size()) };
        assert_eq!(class, expected, "{name}");
    }
}

/// Deterministic single-entry mutations of small Nelson algebras.
fn mutations() -> Vec<(String, Tables)> {
    let (c2, c3, c4, c5) = (chain(2), chain(3), chain(4), chain(5));
    let square = product(&[&c2, &c2]).unwrap();
    let mut out = Vec::new();
    for (name, a) in [("C3", &c3), ("C4", &c4), ("C5", &c5), ("C2xC2", &square)] {
        let n = a.size();
        for (x, y) in [(0, n - 1), (n - 1, 0), (1, 1), (n - 1, 1)] {
            let v = (a.imp(x, y) + 1) % n;
            out.push((format!("{name} imp[{x}][{y}]={v}"), a.with_imp_entry(x, y, v).unwrap()));
        }
        let v = (a.meet(1, n - 1) + 1) % n;
        out.push((format!("{name} meet[1][{}]={v}", n - 1), a.with_meet_entry(1, n - 1, v).unwrap()));
        let v = (a.join(0, 1) + 1) % n;
        out.push((format!("{name} join[0][1]={v}"), a.with_join_entry(0, 1, v).unwrap()));
        out.push((format!("{name} neg 0<->1"), a.with_swapped_neg(0, 1)));
        out.push((format!("{name} transposed imp"), a.with_transposed_imp()));
    }
    out
}

#[test]
fn main_and_brignole_axioms_agree_on_mutations() {
    let cases = mutations();
    assert!(cases.len() >= 20);
    let mut rejected = 0;
    for (name, t) in &cases {
        let main = t.check_axioms(AxiomVariant::Main).all_hold();
        let brignole = t.check_axioms(AxiomVariant::Brignole).all_hold();
        assert_eq!(main, brignole, "{name}");
        rejected += usize::from(!main);
    }
    assert!(rejected * 2 > cases.len(), "mutations should mostly break the axioms");
}

#[test]
fn nt3_rejects_every_chain_beyond_five() {
    for n in 6..=9 {
        assert!(!chain(n).is_five_valued(), "C{n}");
        assert!(chain(n).is_linear(), "C{n}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn products_of_chains_are_nelson(sizes in proptest::collection::vec(2usize..=4, 1..=3)) {
        let factors: Vec<NelsonAlgebra> = sizes.iter().map(|&n| chain(n)).collect();
        let refs: Vec<&NelsonAlgebra> = factors.iter().collect();
        let p = product(&refs).unwrap();
        prop_assert!(p.check_axioms(AxiomVariant::Main).all_hold());
        prop_assert!(p.is_five_valued());
        // linearity is an identity, so it passes to products
        prop_assert!(p.is_linear());
        let r = Radix::new(sizes.clone());
        for x in p.elements() {
            let c = r.decode(x);
            let nx = r.decode(p.neg(x));
            for (k, f) in factors.iter().enumerate() {
                prop_assert_eq!(nx[k], f.neg(c[k]));
            }
        }
    }

    #[test]
    fn relabelling_preserves_identities(n in 2usize..=7, shift in 0usize..7) {
        let c = chain(n);
        let perm: Vec<usize> = (0..n).map(|x| (x + shift) % n).collect();
        let t = relabel(&c, &perm);
        prop_assert_eq!(t.check_axioms(AxiomVariant::Main).all_hold(), true);
        prop_assert_eq!(t.holds(&nelson::term::nt3()), n <= 5);
    }
}

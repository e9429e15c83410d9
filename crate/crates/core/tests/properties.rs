use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use wordcycles::experiment::exact_moment;
use wordcycles::graph::{canonical_placement, classify, letter_graphs};
use wordcycles::limit::split_table;
use wordcycles::sampler::sample;
use wordcycles::word::{cyclic_reduce, parse_word, power_decompose};
use wordcycles::{
    GraphClass, LimitSpec, Letter, PartialPermGraph, Permutation, ReductionCase, SamplerKind,
    SamplerSpec, TupleSpec, Word, YoungDiagram,
};

fn letters(k: usize, max_len: usize) -> impl Strategy<Value = Vec<Letter>> {
    prop::collection::vec((1..=k, any::<bool>()), 0..=max_len)
        .prop_map(|v| v.into_iter().map(|(g, inv)| Letter::new(g, inv)).collect())
}

fn word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    letters(k, max_len).prop_map(move |l| Word::new(l, k).unwrap())
}

fn nontrivial_word(k: usize, max_len: usize) -> impl Strategy<Value = Word> {
    word(k, max_len).prop_filter("non-trivial", |w| !w.is_identity())
}

fn tuple(k: usize, n: usize, seed: u64) -> Vec<Permutation> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..k).map(|_| sample(&SamplerSpec::uniform(n), &mut rng)).collect()
}

proptest! {
    #[test]
    fn print_parse_round_trip(w in word(3, 16)) {
        let text = w.to_string();
        prop_assert_eq!(parse_word(&text, 3).unwrap(), w.clone());
        prop_assert_eq!(parse_word(&text, 3).unwrap().to_string(), text);
    }

    #[test]
    fn words_are_freely_reduced(w in word(2, 20)) {
        for pair in w.letters().windows(2) {
            prop_assert!(pair[0] != pair[1].inv());
        }
    }

    #[test]
    fn word_times_inverse_is_identity(w in word(3, 12), n in 1usize..12, seed in any::<u64>()) {
        let sig = tuple(3, n, seed);
        let a = w.evaluate(&sig).unwrap();
        let b = w.inverse().evaluate(&sig).unwrap();
        prop_assert!(a.compose(&b).unwrap().is_identity());
        prop_assert!(w.concat(&w.inverse()).is_identity());
    }

    #[test]
    fn evaluation_is_a_homomorphism(u in word(2, 8), v in word(2, 8), seed in any::<u64>()) {
        let sig = tuple(2, 9, seed);
        let lhs = u.concat(&v).evaluate(&sig).unwrap();
        let rhs = u.evaluate(&sig).unwrap().compose(&v.evaluate(&sig).unwrap()).unwrap();
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_evaluates_to_permutation_power(
        omega in nontrivial_word(2, 8),
        d in 1usize..=6,
        seed in any::<u64>(),
    ) {
        let sig = tuple(2, 10, seed);
        let lhs = omega.pow(d).evaluate(&sig).unwrap();
        let rhs = omega.evaluate(&sig).unwrap().pow(d as i64);
        prop_assert_eq!(lhs, rhs);
    }

    #[test]
    fn power_decomposition_round_trips(omega in nontrivial_word(2, 8), d in 1usize..=5) {
        let w = omega.pow(d);
        let pd = power_decompose(&w).unwrap();
        prop_assert_eq!(pd.exponent % d, 0);
        let rebuilt = pd.conjugator.concat(&pd.base.pow(pd.exponent)).concat(&pd.conjugator.inverse());
        prop_assert_eq!(rebuilt, w);
        prop_assert_eq!(power_decompose(&pd.base).unwrap().exponent, 1);
    }

    #[test]
    fn cyclic_reduction_is_a_conjugation(w in word(3, 14), seed in any::<u64>()) {
        let red = cyclic_reduce(&w);
        let rebuilt = red.conjugator.concat(&red.core).concat(&red.conjugator.inverse());
        prop_assert_eq!(&rebuilt, &w);
        prop_assert!(red.core.is_cyclically_reduced());
        match red.case {
            ReductionCase::Trivial => prop_assert!(w.is_identity()),
            ReductionCase::ConjugatePowerOfGenerator { generator, exponent } => {
                prop_assert!(red.core.letters().iter().all(|l| l.generator == generator));
                prop_assert_eq!(red.core.len() as i64, exponent.abs());
            }
            ReductionCase::CyclicallyReducedMixed => {
                let l = red.core.letters();
                prop_assert!(l[0].generator != l[l.len() - 1].generator);
            }
        }
        let sig = tuple(3, 11, seed);
        prop_assert_eq!(
            w.evaluate(&sig).unwrap().cycle_type(),
            red.core.evaluate(&sig).unwrap().cycle_type()
        );
    }

    #[test]
    fn cyclic_invariance(w in word(2, 10), i in 1usize..=2, seed in any::<u64>()) {
        let x = Word::generator_power(i, 1, 2).unwrap();
        let sig = tuple(2, 12, seed);
        prop_assert_eq!(
            x.concat(&w).evaluate(&sig).unwrap().cycle_type(),
            w.concat(&x).evaluate(&sig).unwrap().cycle_type()
        );
    }

    #[test]
    fn cycle_splitting_under_powers(n in 1usize..40, d in 1usize..=6, seed in any::<u64>()) {
        let sigma = tuple(1, n, seed).pop().unwrap();
        let table = split_table(LimitSpec::new(d, n).unwrap());
        let counts = sigma.small_cycle_counts(table.max_source_len());
        let power = sigma.pow(d as i64).small_cycle_counts(n);
        for m in 1..=n {
            prop_assert_eq!(power[m - 1], table.predict(m, &counts));
        }
    }

    #[test]
    fn permutation_group_laws(n in 1usize..15, seed in any::<u64>(), j in -7i64..7) {
        let s = tuple(3, n, seed);
        let (a, b, c) = (&s[0], &s[1], &s[2]);
        prop_assert_eq!(
            a.compose(b).unwrap().compose(c).unwrap(),
            a.compose(&b.compose(c).unwrap()).unwrap()
        );
        prop_assert!(a.compose(&a.inverse()).unwrap().is_identity());
        prop_assert_eq!(a.pow(j).compose(&a.pow(-j)).unwrap(), Permutation::identity(n));
        prop_assert_eq!(a.conjugate(b).unwrap().cycle_type(), a.cycle_type());
        let text = a.to_string();
        prop_assert_eq!(Permutation::parse_with_degree(&text, n).unwrap(), a.clone());
        prop_assert_eq!(a.cycle_type().size(), n);
    }

    #[test]
    fn class_sampler_hits_its_class(rows in prop::collection::vec(1usize..5, 1..5), pad in 0usize..4, seed in any::<u64>()) {
        let ty = YoungDiagram::from_unsorted(rows).unwrap();
        let n = ty.size() + pad;
        let mut full = ty.rows().to_vec();
        full.extend(std::iter::repeat_n(1, pad));
        let want = YoungDiagram::from_unsorted(full.clone()).unwrap();
        let spec = SamplerSpec::new(SamplerKind::ConjugacyClass(want.clone()), n).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..5 {
            prop_assert_eq!(sample(&spec, &mut rng).cycle_type(), want.clone());
        }
    }

    #[test]
    fn sampling_is_seed_deterministic(seed in any::<u64>(), theta in 0.1f64..5.0) {
        for kind in [SamplerKind::Uniform, SamplerKind::NCycle, SamplerKind::Ewens(theta)] {
            let spec = SamplerSpec::new(kind, 20).unwrap();
            let a = sample(&spec, &mut ChaCha8Rng::seed_from_u64(seed));
            let b = sample(&spec, &mut ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(a, b);
        }
    }

    #[test]
    fn placement_and_relabeling_preserve_class(
        straight in prop::collection::vec(1usize..4, 0..3),
        cycles in prop::collection::vec(1usize..4, 0..3),
        extra in 0usize..4,
        seed in any::<u64>(),
    ) {
        let class = GraphClass::new(straight.clone(), cycles.clone()).unwrap();
        let n = class.vertex_count() + extra;
        prop_assume!(n > 0);
        let g = canonical_placement(&straight, &cycles, n).unwrap();
        prop_assert_eq!(classify(&g), class.clone());
        let tau = tuple(1, n, seed).pop().unwrap();
        prop_assert_eq!(classify(&g.relabel(&tau).unwrap()), class);
    }

    #[test]
    fn letter_graphs_sit_inside_permutation_graphs(
        w in nontrivial_word(2, 10),
        n in 2usize..10,
        seed in any::<u64>(),
    ) {
        let sig = tuple(2, n, seed);
        let starts: Vec<usize> = (1..=n.min(3)).collect();
        let graphs = letter_graphs(&w, &sig, &starts).unwrap();
        for (g, s) in graphs.iter().zip(&sig) {
            prop_assert!(g.is_subgraph_of(&PartialPermGraph::of_permutation(s)));
        }
        for (i, g) in graphs.iter().enumerate() {
            prop_assert!(g.edge_count() <= w.letter_count(i + 1) * starts.len());
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn exact_moments_depend_only_on_the_cyclic_core(w in nontrivial_word(2, 7)) {
        let red = cyclic_reduce(&w);
        prop_assume!(red.case == ReductionCase::CyclicallyReducedMixed);
        let t = TupleSpec::from_kinds(&[SamplerKind::Uniform, SamplerKind::Uniform], 4).unwrap();
        for p in [vec![1], vec![0, 1], vec![2, 1]] {
            prop_assert_eq!(
                exact_moment(&w, &t, &p).unwrap(),
                exact_moment(&red.core, &t, &p).unwrap()
            );
        }
    }
}

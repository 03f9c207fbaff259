use acyclic_core::acyclic_coloring::{random_acyclic, verify_acyclic};
use acyclic_core::generators::{bunch_gadget, GadgetSpec};
use acyclic_core::rethreading::{
    build_conflict_graph, choose_odd_set, odd_set_size, rethread_bunch, strip_horizontals, threads,
    RethreadError,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_gadgets_rethread() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for trial in 0..60 {
        let t = rng.gen_range(11..=30);
        let spec = GadgetSpec::random(t, trial, 1, 1);
        let (g, b) = bunch_gadget(&spec).unwrap();
        let k = rng.gen_range(13..=20).max(g.max_degree());
        let gb = strip_horizontals(&g, &b).unwrap();
        let c = random_acyclic(&gb, k, &mut rng, 2_000_000).expect("coloring of the stripped gadget");
        let ths = threads(&gb, &b, &c).unwrap();
        let conf = build_conflict_graph(&ths).unwrap();
        assert!(conf.max_degree() <= 2);
        assert_eq!(choose_odd_set(&conf).len(), odd_set_size(t));
        let out = rethread_bunch(&g, &b, &c, k).unwrap_or_else(|e| panic!("trial {trial}: {e}"));
        assert!(verify_acyclic(&g, &out.coloring).acyclic);
    }
}

#[test]
fn short_bunch_rejected() {
    let (g, b) = bunch_gadget(&GadgetSpec::random(10, 3, 1, 1)).unwrap();
    let gb = strip_horizontals(&g, &b).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(0);
    let c = random_acyclic(&gb, 13, &mut rng, 1_000_000).unwrap();
    assert_eq!(rethread_bunch(&g, &b, &c, 13), Err(RethreadError::TooShort { t: 10 }));
}


use gr1kit::gen::random_instance;
use gr1kit::lang::ast::PatternId;
use gr1kit::patterns::check_template_equivalence;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn templates_match_ltl_on_random_parameters() {
    let atoms = ["a", "b", "c"];
    for pattern in PatternId::ALL {
        let mut rng = ChaCha8Rng::seed_from_u64(pattern as u64 + 100);
        for n in 0..50 {
            let inst = random_instance(&mut rng, pattern, &atoms);
            if let Err(c) = check_template_equivalence(&inst, &atoms, 8) {
                panic!("{pattern} instance {n} {:?}: {c}", inst.params);
            }
        }
    }
}

// temporary probe: find the hanging case
use lindiff_core::diffring::*;
use lindiff_core::division::DivisionMode;
use lindiff_core::engine::*;
use lindiff_core::scalars::{BigRat, CoefPoly, RatFun};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

include!("/root/crate/crates/core/tests/probe_gen.rs");

fn main() {
    let mut rng = StdRng::seed_from_u64(42);
    for case in 0..40 {
        let sys = random_system(&mut rng);
        for mode in [DivisionMode::Janet, DivisionMode::JanetLike] {
            eprintln!("case {case} mode {mode:?} n={} m={} gens={}", sys.ring.num_indep(), sys.ring.num_dep(), sys.gens.len());
            for (i,g) in sys.gens.iter().enumerate() { eprintln!("  gen{i}: {} terms", g.len()); }
            let opts = CompletionOptions { mode, criteria: CriteriaSet::none(), ..Default::default() };
            let basis = janet_basis(&sys.gens, &sys.ring, &sys.ranking, &opts).unwrap();
            eprintln!("  -> basis {} elements", basis.len());
        }
    }
}

// temporary probe for the slow janet-like case
use lindiff_core::diffring::*;
use lindiff_core::division::DivisionMode;
use lindiff_core::engine::*;
use lindiff_core::scalars::{BigRat, CoefPoly, RatFun};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::time::Instant;

include!("../tests/probe_gen.rs");

fn main() {
    let mut rng = StdRng::seed_from_u64(42);
    for case in 0..=26 {
        let sys = random_system(&mut rng);
        if case < 26 {
            continue;
        }
        for (i, g) in sys.gens.iter().enumerate() {
            let parts: Vec<String> = g
                .terms()
                .map(|(m, c)| format!("{:?}*[{:?},{}]", c.render(&sys.ring.coef_sym_names()), m.exps, m.dep))
                .collect();
            eprintln!("gen{i}: {}", parts.join(" + "));
        }
        eprintln!("ranking {:?} {:?}", sys.ranking.order(), sys.ranking.priority());
        let t = Instant::now();
        let b = janet_basis(&sys.gens, &sys.ring, &sys.ranking,
            &CompletionOptions { criteria: CriteriaSet::none(), ..Default::default() }).unwrap();
        eprintln!("janet: {} elements in {:?}", b.len(), t.elapsed());
        for e in b.elements() {
            let csize: usize = e.poly().terms().map(|(_, c)| c.num().terms().count() + c.den().terms().count()).sum();
            eprintln!("  lm={:?} terms={} coefsize={}", e.leading_monomial().exps, e.poly().len(), csize);
        }
    }
}

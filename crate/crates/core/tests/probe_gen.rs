struct Sys {
    ring: RingSpec,
    ranking: Ranking,
    gens: Vec<DiffPoly>,
}
fn random_ratfun(rng: &mut StdRng, nsyms: usize) -> RatFun {
    let constant = BigRat::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into());
    if nsyms == 0 || rng.gen_bool(0.6) {
        return RatFun::constant(constant, nsyms);
    }
    // index-dependent coefficient, linear in one symbol
    let sym = rng.gen_range(0..nsyms);
    let num = CoefPoly::symbol(sym, nsyms)
        .scale(&BigRat::from_integer(rng.gen_range(1i64..=2).into()))
        .add(&CoefPoly::integer(rng.gen_range(-2i64..=2), nsyms));
    RatFun::from_poly(num)
}

/// Exponent vector with bounded total degree.
fn random_exps(rng: &mut StdRng, n: usize, total: u32) -> Vec<u32> {
    let mut exps = vec![0u32; n];
    for _ in 0..total {
        exps[rng.gen_range(0..n)] += 1;
    }
    exps
}

fn random_system(rng: &mut StdRng) -> Sys {
    let n = rng.gen_range(1..=3usize);
    let m = rng.gen_range(1..=2usize);
    let indep: Vec<String> = ["x", "y", "z"][..n].iter().map(|s| s.to_string()).collect();
    let dep: Vec<String> = ["u", "v"][..m].iter().map(|s| s.to_string()).collect();
    let ring = RingSpec::new(indep, dep, vec![], ShiftDirection::Forward).unwrap();
    let order = if rng.gen_bool(0.5) { MonomialOrder::DegRevLex } else { MonomialOrder::Lex };
    let priority = if rng.gen_bool(0.5) { Priority::Top } else { Priority::Pot };
    let ranking = Ranking::new(order, priority, &ring);
    let n_gens = rng.gen_range(1..=4usize);
    // index-dependent coefficients on the recurrence-sized rings, plain
    // rationals on three-axis systems (scheme-generation flavor)
    let index_coeffs = n <= 2;
    let mut gens = Vec::new();
    for _ in 0..n_gens {
        let mut p = DiffPoly::zero(&ring);
        let n_terms = rng.gen_range(2..=4usize);
        for _ in 0..n_terms {
            let total = rng.gen_range(0..=3u32);
            let exps = random_exps(rng, n, total);
            let depi = rng.gen_range(0..m);
            let coef = if index_coeffs {
                random_ratfun(rng, n)
            } else {
                RatFun::constant(
                    BigRat::new(rng.gen_range(-4i64..=4).into(), rng.gen_range(1i64..=3).into()),
                    n,
                )
            };
            p.add_term(Monomial::new(depi, exps), coef);
        }
        if !p.is_zero() {
            gens.push(p);
        }
    }
    if gens.is_empty() {
        gens.push(DiffPoly::term(&ring, 0, vec![1; n], RatFun::one(n)));
    }
    Sys { ring, ranking, gens }
}

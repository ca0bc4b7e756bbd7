//! Acceptance suite: one test per criterion, each printing a pass line
//! with its runtime. Run with `cargo test --test acceptance -- --nocapture`
//! to see the lines.

use std::collections::BTreeMap;
use std::sync::Mutex;
use std::time::{Duration, Instant};

// Criteria carry wall-clock limits, so they must not compete for cores;
// each test serializes on this lock and times itself alone.
static EXCLUSIVE: Mutex<()> = Mutex::new(());

fn run_alone() -> std::sync::MutexGuard<'static, ()> {
    EXCLUSIVE
        .lock()
        .unwrap_or_else(|poisoned| poisoned.into_inner())
}

use pmrank::field::{FieldSpec, Rational, Scalar};
use pmrank::jordan::eigenvalues_in_field;
use pmrank::matrix::ExactMatrix;
use pmrank::minrank::{
    block_cycle_bound, construct_cycle_completion, fmr_cycle, mr_b, mr_bruteforce,
    nonzero_cycle_mr_completion, tmr_exact, tmr_of_triangular, zero_case_mr, DEFAULT_SEARCH_BUDGET,
};
use pmrank::partial::{BlockPartialMatrix, PartialMatrix};
use pmrank::patterns::{is_triangular, DEFAULT_NODE_BUDGET};

fn q() -> FieldSpec {
    FieldSpec::RATIONALS
}

fn gf(p: u64) -> FieldSpec {
    FieldSpec::prime(p).unwrap()
}

fn pass(criterion: u32, what: &str, started: Instant, limit: Option<Duration>) {
    let elapsed = started.elapsed();
    println!(
        "acceptance criterion {criterion}: PASS — {what} ({:.2}s)",
        elapsed.as_secs_f64()
    );
    if let Some(limit) = limit {
        assert!(
            elapsed <= limit,
            "criterion {criterion} took {elapsed:?}, limit {limit:?}"
        );
    }
}

/// The n×n cycle with every entry 1 except the corner.
fn unit_cycle(spec: FieldSpec, n: usize, corner: i64) -> PartialMatrix {
    let rows: Vec<Vec<Option<Scalar>>> = (1..=n)
        .map(|i| {
            (1..=n)
                .map(|j| {
                    if i == j || j == i + 1 {
                        Some(Scalar::integer(spec, 1))
                    } else if i == n && j == 1 {
                        Some(Scalar::integer(spec, corner))
                    } else {
                        None
                    }
                })
                .collect()
        })
        .collect();
    PartialMatrix::from_rows(spec, rows).unwrap()
}

fn intro_example(spec: FieldSpec) -> PartialMatrix {
    unit_cycle(spec, 3, 2)
}

#[test]
fn criterion_1_intro_example_fmr() {
    let _exclusive = run_alone();
    let started = Instant::now();
    let fmr = fmr_cycle(&intro_example(q())).unwrap();
    assert_eq!(fmr, Rational::ratio(3, 2), "fmr of the intro example");
    pass(
        1,
        "fmr([[1,1,?],[?,1,1],[2,?,1]]) = 3/2 exactly",
        started,
        Some(Duration::from_secs(1)),
    );
}

#[test]
fn criterion_2_cycle_classification() {
    let _exclusive = run_alone();
    let started = Instant::now();
    for n in [3usize, 4, 5] {
        for spec in [q(), gf(3)] {
            // h ≠ 1: corner entry 2
            let twisted = unit_cycle(spec, n, 2);
            assert_eq!(
                tmr_exact(&twisted, DEFAULT_NODE_BUDGET).unwrap(),
                1,
                "tmr of the twisted {n}-cycle over {spec}"
            );
            assert_eq!(
                fmr_cycle(&twisted).unwrap(),
                Rational::ratio(n, n - 1),
                "fmr of the twisted {n}-cycle over {spec}"
            );
            let (witness, mr) = nonzero_cycle_mr_completion(&twisted).unwrap();
            assert_eq!(mr, 2, "mr of the twisted {n}-cycle over {spec}");
            assert!(twisted.is_completion(&witness));

            // h = 1: all entries 1
            let aligned = unit_cycle(spec, n, 1);
            assert_eq!(tmr_exact(&aligned, DEFAULT_NODE_BUDGET).unwrap(), 1);
            assert_eq!(fmr_cycle(&aligned).unwrap(), Rational::from_usize(1));
            let (witness, mr) = nonzero_cycle_mr_completion(&aligned).unwrap();
            assert_eq!(mr, 1, "mr of the aligned {n}-cycle over {spec}");
            assert!(aligned.is_completion(&witness));
        }
        // brute force confirms both classes over GF(3)
        let brute_twisted = mr_bruteforce(&unit_cycle(gf(3), n, 2), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(brute_twisted.rank, 2, "oracle mr of the twisted {n}-cycle");
        let brute_aligned = mr_bruteforce(&unit_cycle(gf(3), n, 1), DEFAULT_SEARCH_BUDGET).unwrap();
        assert_eq!(brute_aligned.rank, 1, "oracle mr of the aligned {n}-cycle");
    }
    pass(
        2,
        "cycle classification (n in {3,4,5}, GF(3) and the rationals) matches the oracle",
        started,
        Some(Duration::from_secs(10)),
    );
}

#[test]
fn criterion_3_two_fold_of_the_intro_cycle() {
    let _exclusive = run_alone();
    let started = Instant::now();
    let a = intro_example(gf(3));
    // exhaustive enumeration of 3^12 completions of the 2-fold tensor
    let result = mr_b(&a, 2, DEFAULT_SEARCH_BUDGET).unwrap();
    assert_eq!(result.search_space, 531_441, "3^12 completions");
    assert_eq!(result.rank, 3, "mr_2 of the intro cycle over GF(3)");

    // the block bound predicts exactly 3: n = 3, k = 2, H = 2I, d = 0
    let i2 = ExactMatrix::identity(gf(3), 2);
    let h = i2.scale(&Scalar::integer(gf(3), 2)).unwrap();
    let block =
        BlockPartialMatrix::cycle(gf(3), vec![i2.clone(); 3], vec![i2.clone(); 2], h).unwrap();
    let analysis = block_cycle_bound(&block).unwrap();
    assert_eq!(analysis.d, 0);
    assert_eq!(analysis.integer_bound, 3);
    assert_eq!(analysis.mr_exact, Some(3));

    // and fmr · 2 = 3
    let fmr = fmr_cycle(&intro_example(q())).unwrap();
    assert_eq!(
        fmr.as_ratio() * num_bigint::BigInt::from(2),
        Rational::from_usize(3).as_ratio().clone()
    );
    pass(
        3,
        "mr_2 = 3 by exhaustive 3^12 search, matching the block bound and 2·fmr",
        started,
        Some(Duration::from_secs(300)),
    );
}

struct Xorshift(u64);

impl Xorshift {
    fn next(&mut self) -> u64 {
        self.0 ^= self.0 << 13;
        self.0 ^= self.0 >> 7;
        self.0 ^= self.0 << 17;
        self.0
    }
}

#[test]
fn criterion_4_construction_certificates() {
    let _exclusive = run_alone();
    let started = Instant::now();
    let mut rng = Xorshift(0xC0FFEE);
    let mut passed = 0;
    for case in 0..20 {
        let over_q = case % 2 == 0;
        let n = 3 + (case / 2) % 2; // alternate n = 3 and n = 4
        let k = n - 1;
        let spec = if over_q { q() } else { gf(7) };
        // eigenvalues outside {0, 1}, Jordan-style bidiagonal, conjugated
        let allowed: Vec<i64> = if over_q {
            vec![2, 3, -1, 5, -2]
        } else {
            vec![2, 3, 4, 5, 6]
        };
        let mut j0 = ExactMatrix::zeros(spec, k, k);
        for d in 0..k {
            let pick = allowed[(rng.next() as usize) % allowed.len()];
            j0.set(d, d, Scalar::integer(spec, pick));
        }
        for d in 0..k - 1 {
            if j0.get(d, d) == j0.get(d + 1, d + 1) && rng.next().is_multiple_of(2) {
                j0.set(d, d + 1, spec.one());
            }
        }
        let t = loop {
            let cand = ExactMatrix::from_fn(spec, k, k, |_, _| {
                Scalar::integer(spec, (rng.next() % 11) as i64 - 5)
            });
            if cand.rank() == k {
                break cand;
            }
        };
        let h = t.mul(&j0).unwrap().mul(&t.inverse().unwrap()).unwrap();
        assert!(eigenvalues_in_field(&h).is_some(), "split by construction");

        let completion = construct_cycle_completion(&h, n).unwrap();
        // re-check the certificate independently of the constructor
        let identity = ExactMatrix::identity(spec, k);
        let pattern = BlockPartialMatrix::cycle(
            spec,
            vec![identity.clone(); n],
            vec![identity.clone(); n - 1],
            h,
        )
        .unwrap()
        .lower();
        assert!(
            pattern.is_completion(&completion),
            "case {case}: completion must match the pattern"
        );
        assert_eq!(
            completion.rank(),
            n,
            "case {case}: certified rank must be exactly n"
        );
        passed += 1;
    }
    assert_eq!(passed, 20, "100% of the randomized constructions must pass");
    pass(
        4,
        "20/20 randomized rank-n construction certificates over the rationals and GF(7)",
        started,
        Some(Duration::from_secs(30)),
    );
}

#[test]
#[allow(clippy::needless_range_loop)] // column-wise writes into row-major data
fn criterion_5_triangular_formula_oracle_equivalence() {
    let _exclusive = run_alone();
    let started = Instant::now();
    // exhaustive: every triangular pattern on 3×3, every GF(2) assignment
    let spec = gf(2);
    let mut checked = 0u64;
    for mask in 0u32..512 {
        let known: Vec<(usize, usize)> = (0..9)
            .filter(|b| mask & (1 << b) != 0)
            .map(|b| (b / 3 + 1, b % 3 + 1))
            .collect();
        let pattern = pmrank::partial::Pattern::new(3, 3, known.clone()).unwrap();
        if !is_triangular(&pattern) {
            continue;
        }
        let k = known.len();
        for assignment in 0u32..(1 << k) {
            let values: BTreeMap<(usize, usize), Scalar> = known
                .iter()
                .enumerate()
                .map(|(idx, &pos)| (pos, Scalar::integer(spec, ((assignment >> idx) & 1) as i64)))
                .collect();
            let a = PartialMatrix::new(spec, pattern.clone(), values).unwrap();
            let formula = tmr_of_triangular(&a).unwrap();
            let oracle = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap().rank;
            assert_eq!(
                formula, oracle,
                "pattern mask {mask}, assignment {assignment}"
            );
            checked += 1;
        }
    }
    println!("  exhaustive 3x3 GF(2) triangular instances checked: {checked}");

    // 200 randomized triangular 4×4 instances over GF(3), built from
    // random nested column chains; at most 10 unknowns keeps the oracle
    // inside the budget
    let spec = gf(3);
    let mut rng = Xorshift(0xACCE55);
    let mut randomized = 0;
    while randomized < 200 {
        let mut current: Vec<usize> = (1..=4).filter(|_| !rng.next().is_multiple_of(4)).collect();
        let mut rows: Vec<Vec<Option<Scalar>>> = vec![vec![None; 4]; 4];
        for col in 0..4usize {
            for &r in &current {
                rows[r - 1][col] = Some(Scalar::integer(spec, (rng.next() % 3) as i64));
            }
            let survivors: Vec<usize> = current
                .iter()
                .copied()
                .filter(|_| !rng.next().is_multiple_of(3))
                .collect();
            current = survivors;
        }
        let a = PartialMatrix::from_rows(spec, rows).unwrap();
        if !is_triangular(a.pattern()) || a.unknown_positions().len() > 10 {
            continue;
        }
        let formula = tmr_of_triangular(&a).unwrap();
        let oracle = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap().rank;
        assert_eq!(formula, oracle, "randomized instance {randomized}");
        randomized += 1;
    }
    pass(
        5,
        "triangular closed form equals the oracle on the exhaustive 3x3 corpus and 200 random 4x4 instances",
        started,
        Some(Duration::from_secs(300)),
    );
}

/// The corpus for criteria 6 and 8: all 512 patterns on 3×3 over GF(2),
/// each with one deterministic value assignment.
fn gf2_corpus() -> Vec<PartialMatrix> {
    let spec = gf(2);
    let mut rng = Xorshift(0xC0DE);
    (0u32..512)
        .map(|mask| {
            let rows: Vec<Vec<Option<Scalar>>> = (0..3)
                .map(|i| {
                    (0..3)
                        .map(|j| {
                            if mask & (1 << (i * 3 + j)) != 0 {
                                Some(Scalar::integer(spec, (rng.next() % 2) as i64))
                            } else {
                                None
                            }
                        })
                        .collect()
                })
                .collect();
            PartialMatrix::from_rows(spec, rows).unwrap()
        })
        .collect()
}

#[test]
fn criterion_6_sandwich_and_subadditivity_on_the_corpus() {
    let _exclusive = run_alone();
    let started = Instant::now();
    // per-fold budgets: b = 2 is enumerated up to 2^20 completions
    // (≤ 5 unknowns), b = 3 up to 2^18 (≤ 2 unknowns); every computed
    // value must satisfy the inequalities, with zero violations
    let corpus = gf2_corpus();
    let budgets: BTreeMap<usize, u64> = [(1, 1 << 24), (2, 1 << 20), (3, 1 << 18)].into();
    let mut computed = [0u64; 4];
    for (idx, a) in corpus.iter().enumerate() {
        let tmr = tmr_exact(a, DEFAULT_NODE_BUDGET).unwrap();
        let mut values: BTreeMap<usize, usize> = BTreeMap::new();
        for b in 1..=3usize {
            match mr_b(a, b, budgets[&b]) {
                Ok(result) => {
                    values.insert(b, result.rank);
                    computed[b] += 1;
                }
                Err(pmrank::error::Error::BudgetExceeded { .. }) => {}
                Err(other) => panic!("corpus instance {idx}: {other}"),
            }
        }
        let mr = values[&1]; // 2^9 completions at most: always computed
        assert!(tmr <= mr, "instance {idx}: sandwich tmr ≤ mr");
        for (&b, &value) in &values {
            assert!(
                Rational::from_usize(tmr) <= Rational::ratio(value, b),
                "instance {idx}: tmr ≤ mr_{b}/{b}"
            );
            assert!(
                Rational::ratio(value, b) <= Rational::from_usize(mr),
                "instance {idx}: mr_{b}/{b} ≤ mr"
            );
        }
        if let (Some(&m1), Some(&m2)) = (values.get(&1), values.get(&2)) {
            assert!(m2 <= 2 * m1, "instance {idx}: mr_2 ≤ mr_1 + mr_1");
            if let Some(&m3) = values.get(&3) {
                assert!(m3 <= m1 + m2, "instance {idx}: mr_3 ≤ mr_1 + mr_2");
            }
        }
    }
    println!(
        "  corpus size 512; computed mr_1 for {}, mr_2 for {}, mr_3 for {} instances",
        computed[1], computed[2], computed[3]
    );
    assert_eq!(computed[1], 512, "mr_1 must cover the whole corpus");
    pass(
        6,
        "sandwich and subadditivity hold with zero violations on the GF(2) 3x3 corpus",
        started,
        None,
    );
}

#[test]
fn criterion_7_zero_case_exhaustive() {
    let _exclusive = run_alone();
    let started = Instant::now();
    let spec = gf(3);
    let mut rng = Xorshift(0x5EED);
    let mut checked = 0;
    for mask in 1u32..64 {
        // bit set = that known entry is zero; nonzero entries draw from {1, 2}
        let value = |idx: usize, rng: &mut Xorshift| -> Scalar {
            if mask & (1 << idx) != 0 {
                spec.zero()
            } else {
                Scalar::integer(spec, (rng.next() % 2) as i64 + 1)
            }
        };
        // knowns in the order (1,1),(1,2),(2,2),(2,3),(3,3),(3,1)
        let v: Vec<Scalar> = (0..6).map(|i| value(i, &mut rng)).collect();
        let a = PartialMatrix::from_rows(
            spec,
            vec![
                vec![Some(v[0].clone()), Some(v[1].clone()), None],
                vec![None, Some(v[2].clone()), Some(v[3].clone())],
                vec![Some(v[5].clone()), None, Some(v[4].clone())],
            ],
        )
        .unwrap();
        let (mr, witness) = zero_case_mr(&a).unwrap();
        assert!(a.is_completion(&witness), "mask {mask}: witness completes");
        assert_eq!(witness.rank(), mr, "mask {mask}: witness rank");
        let tmr = tmr_exact(&a, DEFAULT_NODE_BUDGET).unwrap();
        assert_eq!(mr, tmr, "mask {mask}: mr = tmr");
        let oracle = mr_bruteforce(&a, DEFAULT_SEARCH_BUDGET).unwrap().rank;
        assert_eq!(mr, oracle, "mask {mask}: mr matches the oracle");
        checked += 1;
    }
    assert_eq!(checked, 63, "all zero/nonzero assignments with a zero");
    pass(
        7,
        "all 63 zero-entry assignments of the 3-cycle agree with tmr and the oracle",
        started,
        Some(Duration::from_secs(60)),
    );
}

#[test]
fn criterion_8_bounded_fold_sequence() {
    let _exclusive = run_alone();
    let started = Instant::now();
    // The infimum over all fold factors is out of reach at desk scale;
    // this is a bounded check of the first three terms, not a limit
    // computation. On every corpus instance with at most two unknowns the
    // sequence mr_b/b for b ≤ 3 is pinned between tmr and mr.
    let corpus = gf2_corpus();
    let mut checked = 0;
    for a in corpus.iter().filter(|a| a.unknown_positions().len() <= 2) {
        let tmr = tmr_exact(a, DEFAULT_NODE_BUDGET).unwrap();
        let values: Vec<(usize, usize)> = (1..=3)
            .map(|b| (b, mr_b(a, b, DEFAULT_SEARCH_BUDGET).unwrap().rank))
            .collect();
        let mr = values[0].1;
        for &(b, value) in &values {
            assert!(Rational::from_usize(tmr) <= Rational::ratio(value, b));
            assert!(Rational::ratio(value, b) <= Rational::from_usize(mr));
        }
        checked += 1;
    }
    println!("  bounded fold sequences checked on {checked} corpus instances");

    // where the closed form applies the sequence already touches it at
    // b = n−1: the intro cycle has mr_2/2 = 3/2 = fmr
    let a = intro_example(gf(3));
    let mr2 = mr_b(&a, 2, DEFAULT_SEARCH_BUDGET).unwrap().rank;
    assert_eq!(Rational::ratio(mr2, 2), Rational::ratio(3, 2));
    assert_eq!(
        fmr_cycle(&intro_example(q())).unwrap(),
        Rational::ratio(3, 2)
    );
    pass(
        8,
        "bounded check: mr_b/b stays within [tmr, mr] for b ≤ 3 and meets the closed form on the intro cycle",
        started,
        None,
    );
}

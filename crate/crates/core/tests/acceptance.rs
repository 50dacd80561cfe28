//! Acceptance suite: one line per criterion. Exact arithmetic throughout,
//! so every tolerance is zero.

use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use refcosets::catalog::{build, imprimitive_sweep, CatalogKey};
use refcosets::cli::table;
use refcosets::coinv;
use refcosets::cyclo::{Cyclotomic, Rat, RootOfUnity};
use refcosets::groups::{ReflectionCoset, ReflectionGroup};
use refcosets::harmonics::{min_generating_reflections, Harmonics};
use refcosets::linalg::{CycMatrix, Vector};
use refcosets::molien::{n_gutkin, n_of_module, scaling_check, ModuleRep, Molien};
use refcosets::regularity::{self, Existence, Identity};
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;
use std::time::Instant;

/// Zero tolerance: all comparisons are exact equalities in Q(zeta_N).
const TOLERANCE: i64 = 0;
const SWEEP_MAX_ORDER: u64 = 5000;
const SWEEP_MAX_CONDUCTOR: u32 = 12;
const STEINBERG_VECTORS: usize = 50;
const COINV_MAX_ORDER: usize = 1200;
const PROPTEST_CASES: u32 = 64;
const SEED: u64 = 20261018;

/// Reference rows known to disagree with the computation; the analysis is
/// kept with the project notes. The suite still reports them as FAIL.
const KNOWN_REFERENCE_DISCREPANCIES: &[&str] = &["3G422"];

struct Line {
    n: u32,
    name: &'static str,
    pass: bool,
    documented: bool,
    detail: String,
}

fn report(lines: &mut Vec<Line>, l: Line, t: Instant) {
    let status = match (l.pass, l.documented) {
        (true, _) => "PASS",
        (false, true) => "FAIL (documented discrepancy)",
        (false, false) => "FAIL",
    };
    println!("criterion {} [{}]: {} ({:.1}s) {}", l.n, l.name, status, t.elapsed().as_secs_f64(), l.detail);
    lines.push(l);
}

fn key(s: &str) -> CatalogKey {
    s.parse().expect("catalog key")
}

fn catalog_keys() -> Vec<CatalogKey> {
    let mut keys = imprimitive_sweep(SWEEP_MAX_ORDER, SWEEP_MAX_CONDUCTOR);
    keys.extend(CatalogKey::named_twisted());
    for s in ["H3", "G6", "G7", "G5", "swap(G(3,1,2))"] {
        keys.push(key(s));
    }
    keys
}

fn random_coeff(rng: &mut ChaCha8Rng) -> Cyclotomic {
    Cyclotomic::from_int(1, rng.gen_range(-5..=5))
}

fn combine(basis: &[Vector], rng: &mut ChaCha8Rng) -> Vector {
    let n = basis[0].len();
    let mut v = vec![Cyclotomic::zero(1); n];
    for b in basis {
        let c = random_coeff(rng);
        for i in 0..n {
            v[i] += &(&c * &b[i]);
        }
    }
    v
}

/// Random point of a random flat of the arrangement.
fn random_flat_vector(g: &ReflectionGroup, rng: &mut ChaCha8Rng) -> Vector {
    let k = rng.gen_range(0..=g.dim.min(g.arrangement.len()));
    let mut forms = Vec::new();
    for _ in 0..k {
        forms.push(g.arrangement[rng.gen_range(0..g.arrangement.len())].form.clone());
    }
    let basis = if forms.is_empty() {
        let id = CycMatrix::identity(g.dim, g.conductor);
        (0..g.dim).map(|i| id.column(i)).collect()
    } else {
        CycMatrix::from_rows(forms).kernel()
    };
    if basis.is_empty() {
        vec![Cyclotomic::zero(1); g.dim]
    } else {
        combine(&basis, rng)
    }
}

fn main() {
    let start = Instant::now();
    let mut lines = Vec::new();
    println!("acceptance suite (tolerance {TOLERANCE}: exact arithmetic)");

    // shared pass over the catalog for criteria 1 to 4
    let keys = catalog_keys();
    let t = Instant::now();
    let mut c1_rows = 0;
    let mut c1_bad: Vec<String> = Vec::new();
    let mut c1_flagged_g333 = 0;
    let mut c2_candidates = 0u64;
    let mut c2_ideal = 0;
    let mut c2_errors: Vec<String> = Vec::new();
    let mut c3_checked = 0;
    let mut c3_bad: Vec<String> = Vec::new();
    let mut c4_checked = 0;
    let mut c4_bad: Vec<String> = Vec::new();
    let mut cosets: BTreeMap<String, Harmonics> = BTreeMap::new();
    for k in &keys {
        let coset = match build(k) {
            Ok(c) => c,
            Err(e) => {
                c2_errors.push(format!("{k}: {e}"));
                continue;
            }
        };
        let h = Harmonics::new(&coset);
        let ks = k.to_string();
        match table::row_for(k, &h.mol) {
            Ok(row) => {
                if let Some(agrees) = row.agrees {
                    c1_rows += 1;
                    if !agrees {
                        c1_bad.push(format!("{ks}: {}", row.flags.join("; ")));
                    }
                }
                if row.flags.iter().any(|f| f.contains("4,4,6")) {
                    c1_flagged_g333 += 1;
                }
                c2_candidates += row.regular_set.exponent;
            }
            Err(e) => c2_errors.push(format!("{ks}: {e}")),
        }
        if coset.dim() <= 3 {
            match h.three_way_regularity() {
                Ok(_) => c2_ideal += 1,
                Err(e) => c2_errors.push(format!("{ks} ideal route: {e}")),
            }
            for m in [ModuleRep::v(), ModuleRep::vdual()] {
                let ok = match (h.harmonic_module_basis(&m), h.mol.module_factors(&m)) {
                    (Ok(b), Ok(f)) => b.factor_set().factors == f.factors,
                    _ => false,
                };
                c4_checked += 1;
                if !ok {
                    c4_bad.push(format!("{ks} {m}"));
                }
            }
        }
        for id in Identity::suite(coset.conductor()) {
            c3_checked += 1;
            match regularity::verify_identity(&h.mol, &id) {
                Ok(r) if r.holds => {}
                Ok(r) => c3_bad.push(format!("{ks} {}: {} vs {}", r.name, r.lhs, r.rhs)),
                Err(e) => c3_bad.push(format!("{ks} {id}: {e}")),
            }
        }
        if !matches!(k, CatalogKey::Imprimitive { .. } | CatalogKey::Swap(_)) {
            cosets.insert(ks, h);
        }
    }
    let documented = !c1_bad.is_empty()
        && c1_bad.iter().all(|b| {
            KNOWN_REFERENCE_DISCREPANCIES.iter().any(|k| b.starts_with(&format!("{k}:")))
                && !b.contains("degrees differ")
                && !b.contains("codegrees differ")
        });
    report(
        &mut lines,
        Line {
            n: 1,
            name: "table reproduction",
            pass: c1_bad.is_empty() && c1_flagged_g333 == 2,
            documented,
            detail: format!(
                "{c1_rows} reference rows over {} cosets; G(3,3,3) table misprints flagged on {c1_flagged_g333} rows; mismatches: {}",
                keys.len(),
                if c1_bad.is_empty() { "none".into() } else { c1_bad.join(" | ") }
            ),
        },
        t,
    );
    report(
        &mut lines,
        Line {
            n: 2,
            name: "three-way regularity",
            pass: c2_errors.is_empty(),
            documented: false,
            detail: format!(
                "{c2_candidates} candidate roots checked by criterion, multisets and oracle; ideal route on {c2_ideal} rank <= 3 cosets; disagreements: {}",
                if c2_errors.is_empty() { "none".into() } else { c2_errors.join(" | ") }
            ),
        },
        t,
    );
    report(
        &mut lines,
        Line {
            n: 3,
            name: "identity suite",
            pass: c3_bad.is_empty(),
            documented: false,
            detail: format!("{c3_checked} identity instances; failures: {}", if c3_bad.is_empty() { "none".into() } else { c3_bad.join(" | ") }),
        },
        t,
    );

    // criterion 4, slow tier: F4
    let t4 = Instant::now();
    let f4 = Harmonics::new(&build(&CatalogKey::F4Order2).expect("2F4"));
    for m in [ModuleRep::v(), ModuleRep::vdual()] {
        let ok = match (f4.harmonic_module_basis(&m), f4.mol.module_factors(&m)) {
            (Ok(b), Ok(f)) => b.factor_set().factors == f.factors,
            _ => false,
        };
        c4_checked += 1;
        if !ok {
            c4_bad.push(format!("2F4 {m}"));
        }
    }
    report(
        &mut lines,
        Line {
            n: 4,
            name: "factor-route agreement",
            pass: c4_bad.is_empty(),
            documented: false,
            detail: format!(
                "{c4_checked} (coset, module) pairs incl. 2F4 ({:.1}s for 2F4); mismatches: {}",
                t4.elapsed().as_secs_f64(),
                if c4_bad.is_empty() { "none".into() } else { c4_bad.join(" | ") }
            ),
        },
        t,
    );

    let t = Instant::now();
    let (pass5, detail5) = structural(&keys, &cosets, &f4);
    report(&mut lines, Line { n: 5, name: "structural theorems", pass: pass5, documented: false, detail: detail5 }, t);

    let t = Instant::now();
    let (pass6, detail6) = coinvariants(&keys);
    report(&mut lines, Line { n: 6, name: "coinvariant suite", pass: pass6, documented: false, detail: detail6 }, t);

    let t = Instant::now();
    let (pass7, detail7) = properties();
    report(&mut lines, Line { n: 7, name: "property suites", pass: pass7, documented: false, detail: detail7 }, t);

    let unexpected = lines.iter().filter(|l| !l.pass && !l.documented).count();
    let documented = lines.iter().filter(|l| !l.pass && l.documented).count();
    println!(
        "summary: {} passed, {documented} documented discrepancies, {unexpected} unexpected failures ({:.1}s)",
        lines.iter().filter(|l| l.pass).count(),
        start.elapsed().as_secs_f64()
    );
    if unexpected > 0 {
        std::process::exit(1);
    }
}

fn structural(keys: &[CatalogKey], cosets: &BTreeMap<String, Harmonics>, f4: &Harmonics) -> (bool, String) {
    let mut bad: Vec<String> = Vec::new();
    let mut counts: BTreeMap<&str, usize> = BTreeMap::new();
    let mut bump = |k: &'static str| *counts.entry(k).or_default() += 1;

    // Gutkin, three-way N(M), discriminant and gammamij on the named rank <= 3 cosets and 3D4
    let d4 = Harmonics::new(&build(&CatalogKey::D4Order3).expect("3D4"));
    let mut named: Vec<(&str, &Harmonics)> = cosets.iter().map(|(k, h)| (k.as_str(), h)).collect();
    named.retain(|(_, h)| h.coset().dim() <= 3);
    named.push(("3D4", &d4));
    for (k, h) in &named {
        for m in [ModuleRep::v(), ModuleRep::vdual()] {
            match (h.gutkin_check(&m), n_of_module(&h.mol, &m)) {
                (Ok(l), Ok(_)) if !l.is_zero() => bump("gutkin"),
                (a, b) => bad.push(format!("{k} {m} gutkin: {:?} {:?}", a.err(), b.err())),
            }
        }
        match h.disc_matrix(&ModuleRep::v()) {
            Ok(d) if !d.lambda.is_zero() => bump("discriminant"),
            Ok(_) => bad.push(format!("{k}: Delta_V vanishes")),
            Err(e) => bad.push(format!("{k} discriminant: {e}")),
        }
    }

    // wellgen on irreducible cosets, including the negative case G(4,2,2)
    let g422 = Harmonics::new(&build(&key("G(4,2,2)")).expect("G(4,2,2)"));
    let mut wg: Vec<(&str, &Harmonics)> = named.clone();
    wg.push(("2F4", f4));
    wg.push(("G(4,2,2)", &g422));
    for (k, h) in &wg {
        match h.wellgen_structure() {
            Ok(w) => {
                let ok = w.degree_condition == w.well_generated
                    && [w.matrix_check, w.top_degree_sum, w.sigma_matching, w.top_regular].iter().all(|x| *x != Some(false))
                    && w.monic.iter().all(|(_, b)| *b)
                    && (!w.well_generated || w.sigma_matching == Some(true) && w.top_regular == Some(true));
                if ok {
                    bump("wellgen");
                } else {
                    bad.push(format!("{k} wellgen: {w:?}"));
                }
            }
            Err(e) => bad.push(format!("{k} wellgen: {e}")),
        }
    }
    let n422 = min_generating_reflections(&g422.coset().group);
    if n422 != 3 {
        bad.push(format!("G(4,2,2) needs {n422} generating reflections, expected 3"));
    }

    // Steinberg on random flats, eqlists on eigenvectors of gamma, existence
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    let mut seen_groups = BTreeSet::new();
    for k in keys {
        let Ok(coset) = build(k) else {
            bad.push(format!("{k}: build failed"));
            continue;
        };
        let g = &coset.group;
        if seen_groups.insert((g.order(), g.dim, g.generators.len(), k.to_string().split(';').next().unwrap_or("").to_string())) {
            for _ in 0..STEINBERG_VECTORS {
                let v = random_flat_vector(g, &mut rng);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                if g.steinberg_holds(&v) {
                    bump("steinberg");
                } else {
                    bad.push(format!("{k}: Steinberg fails at {v:?}"));
                }
            }
        }
        let mol = Molien::new(&coset);
        match regularity::existence_check(&mol) {
            Ok(_) => bump("existence"),
            Err(e) => bad.push(format!("{k} existence: {e}")),
        }
        if coset.dim() <= 3 {
            let ord = coset.gamma_order;
            let eig = coset.gamma.eigen_multiset(ord).expect("finite order");
            let distinct: BTreeSet<RootOfUnity> = eig.into_iter().collect();
            for z in distinct {
                let e = (&coset.gamma - &CycMatrix::scalar(coset.dim(), &z.at_conductor(coset.conductor()))).kernel();
                if e.is_empty() {
                    continue;
                }
                let v = combine(&e, &mut rng);
                if v.iter().all(|x| x.is_zero()) {
                    continue;
                }
                match regularity::eqlists_check(&mol, &v) {
                    Ok(true) => bump("eqlists"),
                    Ok(false) => bad.push(format!("{k}: eqlists fails for the {z}-eigenvector")),
                    Err(e) => bad.push(format!("{k} eqlists: {e}")),
                }
            }
        }
    }
    // constructed reducible example: mu_2 x mu_2 with gamma = diag(1, zeta_3)
    let one = Cyclotomic::from_int(1, 1);
    let gens = vec![CycMatrix::diag(&[-one.clone(), one.clone()]), CycMatrix::diag(&[one.clone(), -one.clone()])];
    let g = ReflectionGroup::enumerate(2, &gens, 100, 1).expect("mu2 x mu2");
    let c = ReflectionCoset::new(Arc::new(g), CycMatrix::diag(&[one, Cyclotomic::zeta(3, 1)]), 100).expect("coset");
    match regularity::existence_check(&Molien::new(&c)) {
        Ok(Existence::Reduction(_)) => bump("existence"),
        other => bad.push(format!("reducible example: expected a reduction witness, got {:?}", other.map(|_| ()))),
    }
    let swap = build(&key("swap(G(3,1,2))")).expect("swap");
    match regularity::reduction_witness(&swap) {
        Ok(w) if w.orbit_lengths == vec![2] => bump("existence"),
        other => bad.push(format!("swap example: {:?}", other.map(|w| w.orbit_lengths))),
    }

    let summary: Vec<String> = counts.iter().map(|(k, v)| format!("{k} {v}")).collect();
    let detail = format!(
        "{}; G(4,2,2) minimal generating reflections {n422}; failures: {}",
        summary.join(", "),
        if bad.is_empty() { "none".into() } else { bad.join(" | ") }
    );
    (bad.is_empty(), detail)
}

fn coinvariants(keys: &[CatalogKey]) -> (bool, String) {
    let mut groups: BTreeMap<String, Arc<ReflectionGroup>> = BTreeMap::new();
    for k in keys {
        let base = match k {
            CatalogKey::Imprimitive { d, e, r, .. } => CatalogKey::Imprimitive { d: *d, e: *e, r: *r, twist: None },
            CatalogKey::Swap(_) => continue,
            other => other.clone(),
        };
        if base.expected_order() > COINV_MAX_ORDER as u64 || groups.contains_key(&base.to_string()) {
            continue;
        }
        if let Ok(c) = build(&base) {
            if c.group.order() <= COINV_MAX_ORDER && !c.group.is_trivial() {
                groups.insert(base.to_string(), c.group.clone());
            }
        }
    }
    for s in ["G(3,3,3)", "G(4,2,2)", "D4", "F4", "G5", "G7"] {
        groups.insert(s.to_string(), build(&key(s)).expect("group").group);
    }
    let mut bad = Vec::new();
    let (mut eqdims, mut induction) = (0, 0);
    for (k, g) in &groups {
        let Ok(degrees) = coinv::group_degrees(g) else {
            bad.push(format!("{k}: degrees"));
            continue;
        };
        let gc = coinv::coinvariant_character(g, &degrees);
        if !coinv::regular_character_check(g, &gc) {
            bad.push(format!("{k}: regular character"));
        }
        let dmax = *degrees.iter().max().unwrap_or(&1) as u64;
        for d in (1..=dmax).filter(|d| degrees.iter().any(|&x| x as u64 % d == 0)) {
            for kk in 0..d as i64 {
                eqdims += 1;
                if coinv::eqdims_check(&gc, &degrees, d, kk, 0) != Ok(true) {
                    bad.push(format!("{k}: eqdims d = {d}, k = {kk}"));
                }
            }
        }
        for (x, v) in coinv::induction_sample(g) {
            let Ok(z) = refcosets::groups::theta_v(&g.elements[x], &v) else {
                bad.push(format!("{k}: sample vector is not an eigenvector"));
                continue;
            };
            let d = z.as_root_of_unity().map_or(1, |z| z.order) as i64;
            for kk in 0..d {
                induction += 1;
                match coinv::induction_check_with(g, &gc, x, &v, kk) {
                    Ok(r) if r.holds => {}
                    Ok(_) => bad.push(format!("{k}: induction fails at element {x}, k = {kk}")),
                    Err(e) => bad.push(format!("{k}: induction at element {x}: {e}")),
                }
            }
        }
    }
    let detail = format!(
        "{} groups with |G| <= {COINV_MAX_ORDER}; {eqdims} eqdims cases; {induction} induction cases; failures: {}",
        groups.len(),
        if bad.is_empty() { "none".into() } else { bad.join(" | ") }
    );
    (bad.is_empty(), detail)
}

fn runner(salt: u64) -> TestRunner {
    let mut seed = [0u8; 32];
    seed[..8].copy_from_slice(&(SEED ^ salt).to_le_bytes());
    TestRunner::new_with_rng(
        Config { cases: PROPTEST_CASES, failure_persistence: None, ..Config::default() },
        TestRng::from_seed(RngAlgorithm::ChaCha, &seed),
    )
}

const CONDUCTORS: &[u32] = &[1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 16, 20, 24];

fn cyc(n: u32) -> impl Strategy<Value = Cyclotomic> {
    let phi = refcosets::cyclo::euler_phi(n);
    proptest::collection::vec((-9i64..=9, 1i64..=4), phi).prop_map(move |c| {
        Cyclotomic::from_coeffs(n, c.into_iter().map(|(a, b)| Rat::new(a, b)).collect()).expect("valid coefficients")
    })
}

fn triple() -> impl Strategy<Value = (Cyclotomic, Cyclotomic, Cyclotomic)> {
    proptest::sample::select(CONDUCTORS.to_vec()).prop_flat_map(|n| (cyc(n), cyc(n), cyc(n)))
}

fn outcome<T: std::fmt::Debug>(r: Result<(), proptest::test_runner::TestError<T>>) -> Result<(), String> {
    r.map_err(|e| e.to_string())
}

fn properties() -> (bool, String) {
    let mut bad = Vec::new();
    let mut ran = Vec::new();
    let mut record = |name: &str, r: Result<(), String>| match r {
        Ok(()) => ran.push(name.to_string()),
        Err(e) => bad.push(format!("{name}: {e}")),
    };
    // field axioms
    let r = runner(1).run(&triple(), |(a, b, c)| {
        prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
        prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
        prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        prop_assert_eq!(&a * &b, &b * &a);
        if !a.is_zero() {
            prop_assert!((&a * &a.inv().unwrap()).is_one());
        }
        Ok(())
    });
    record("field axioms", outcome(r));
    // Galois composition and multiplicativity
    let strat = proptest::sample::select(CONDUCTORS.to_vec())
        .prop_flat_map(|n| (Just(n), cyc(n), cyc(n), 1i64..=n as i64, 1i64..=n as i64));
    let r = runner(2).run(&strat, |(n, a, b, k, l)| {
        use num_integer::Integer;
        let n64 = n as i64;
        prop_assume!(k.gcd(&n64) == 1 && l.gcd(&n64) == 1);
        let kl = (k * l).rem_euclid(n64.max(1));
        prop_assert_eq!(a.galois(l).unwrap().galois(k).unwrap(), a.galois(kl).unwrap());
        prop_assert_eq!((&a * &b).galois(k).unwrap(), &a.galois(k).unwrap() * &b.galois(k).unwrap());
        Ok(())
    });
    record("Galois composition", outcome(r));
    // root of unity round trip
    let r = runner(3).run(&(1u64..=60, 0i64..60), |(n, k)| {
        let z = RootOfUnity::new(n, k);
        prop_assert_eq!(z.to_cyclotomic().as_root_of_unity(), Some(z));
        Ok(())
    });
    record("root of unity round trip", outcome(r));

    // scaling law, inequalities and N(Lambda^m M) = N(M) on small cosets
    let small = ["G(4,2,2)", "G(4,2,2;zeta=2)", "3G422", "G(3,1,2;zeta=1)", "A2", "G(6,6,2;zeta=3)", "2G333", "G(3,3,3)", "G5"];
    let mols: Vec<(String, Molien)> = small.iter().map(|s| (s.to_string(), Molien::new(&build(&key(s)).expect("coset")))).collect();
    let strat = (0..mols.len(), 1u64..=12, 0i64..12, proptest::bool::ANY);
    let mut cfg_runner = runner(4);
    cfg_runner = TestRunner::new_with_rng(Config { cases: 24, failure_persistence: None, ..Config::default() }, cfg_runner.new_rng());
    let r = cfg_runner.run(&strat, |(i, n, k, dual)| {
        let (name, mol) = &mols[i];
        let m = if dual { ModuleRep::vdual() } else { ModuleRep::v() };
        let z = RootOfUnity::new(n, k);
        prop_assert!(scaling_check(mol, &m, z).map_err(|e| TestCaseError::fail(e.to_string()))?, "{} {} {}", name, m, z);
        Ok(())
    });
    record("scaling law", outcome(r));
    let r = runner(5).run(&(0..mols.len(), 1i64..=60), |(i, s)| {
        use num_integer::Integer;
        let (name, mol) = &mols[i];
        let n = mol.coset.conductor() as i64;
        prop_assume!(s.gcd(&n) == 1);
        let count = |m: &ModuleRep| -> Result<usize, TestCaseError> {
            Ok(mol.module_factors(m).map_err(|e| TestCaseError::fail(e.to_string()))?.u().len())
        };
        let u = count(&ModuleRep::v())?;
        let ustar = count(&ModuleRep::vdual())?;
        prop_assert!(mol.coset.group.is_trivial() || ustar >= 1, "{}: |U*| = 0", name);
        prop_assert!(u <= count(&ModuleRep::v().galois(s))?, "{} sigma {}", name, s);
        prop_assert!(u <= count(&ModuleRep::vdual().galois(s))?, "{} sigma {}", name, s);
        let r = mol.coset.dim();
        for m in [ModuleRep::v().galois(s), ModuleRep::vdual().galois(s)] {
            let g = &mol.coset.group;
            prop_assert_eq!(n_gutkin(g, &m.clone().exterior(r)), n_gutkin(g, &m), "{} {}", name, m);
        }
        Ok(())
    });
    record("inequalities and exterior power N", outcome(r));

    let detail = format!(
        "{} suites ({}), seed {SEED}; failures: {}",
        ran.len() + bad.len(),
        ran.join(", "),
        if bad.is_empty() { "none".into() } else { bad.join(" | ") }
    );
    (bad.is_empty(), detail)
}

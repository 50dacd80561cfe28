use proptest::prelude::*;
use refcosets::catalog::{build, CatalogKey};
use refcosets::cyclo::{Cyclotomic, RootOfUnity};
use refcosets::groups::ReflectionCoset;
use refcosets::linalg::UniPoly;
use refcosets::molien::Molien;
use std::sync::OnceLock;

fn coset(key: &str) -> ReflectionCoset {
    build(&key.parse::<CatalogKey>().unwrap()).unwrap()
}

fn g422() -> &'static ReflectionCoset {
    static C: OnceLock<ReflectionCoset> = OnceLock::new();
    C.get_or_init(|| coset("3G422"))
}

fn g5() -> &'static ReflectionCoset {
    static C: OnceLock<ReflectionCoset> = OnceLock::new();
    C.get_or_init(|| coset("2G5"))
}

fn b3() -> &'static ReflectionCoset {
    static C: OnceLock<ReflectionCoset> = OnceLock::new();
    C.get_or_init(|| coset("G(2,1,3)"))
}

fn pick(c: &ReflectionCoset, i: usize) -> usize {
    i % c.group.order()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn det_is_multiplicative(i in 0usize..10_000, j in 0usize..10_000) {
        for c in [g422(), g5(), b3()] {
            let g = &c.group;
            let (a, b) = (pick(c, i), pick(c, j));
            let ab = &g.elements[a] * &g.elements[b];
            prop_assert_eq!(ab.det().unwrap(), g.det(a) * g.det(b));
            prop_assert_eq!(g.det(g.mul_index(a, b)), &ab.det().unwrap());
        }
    }

    #[test]
    fn char_series_matches_eigenvalues(i in 0usize..10_000) {
        for c in [g422(), g5(), b3()] {
            let x = &c.group.elements[pick(c, i)];
            let q = x.char_series().unwrap();
            let n = x.conductor();
            let mut want = UniPoly::one();
            for l in x.eigen_multiset(1 << 12).unwrap() {
                let lin = UniPoly::new(vec![Cyclotomic::one(n), -l.at_conductor(n)]);
                want = want.mul(&lin);
            }
            prop_assert_eq!(&q, &want);
            prop_assert_eq!(q.coeff(1), -x.trace());
            let r = x.rows();
            let sign = Cyclotomic::from_int(n, if r % 2 == 0 { 1 } else { -1 });
            prop_assert_eq!(q.coeff(r), &x.det().unwrap() * &sign);
        }
    }

    #[test]
    fn eigenvalues_are_conjugation_invariant(i in 0usize..10_000, j in 0usize..10_000) {
        for c in [g422(), g5(), b3()] {
            let g = &c.group;
            let (a, h) = (pick(c, i), pick(c, j));
            let conj = g.mul_index(g.mul_index(a, h), g.inverse_index(a));
            prop_assert_eq!(g.class_of(conj), g.class_of(h));
            prop_assert_eq!(
                g.elements[conj].eigen_multiset(1 << 12).unwrap(),
                g.elements[h].eigen_multiset(1 << 12).unwrap()
            );
            let gc = &c.gamma * &g.elements[h];
            let cg = &g.elements[h] * &c.gamma;
            prop_assert_eq!(gc.eigen_multiset(1 << 12).unwrap(), cg.eigen_multiset(1 << 12).unwrap());
        }
    }

    #[test]
    fn eigenvalue_product_is_det(i in 0usize..10_000) {
        for c in [g422(), g5(), b3()] {
            let x = &c.group.elements[pick(c, i)];
            let prod = x.eigen_multiset(1 << 12).unwrap().iter().fold(RootOfUnity::ONE, |a, l| a.mul(l));
            prop_assert_eq!(prod.to_cyclotomic().to_conductor(x.conductor()), x.det().unwrap().to_conductor(x.conductor()));
        }
    }
}

const ARRANGEMENT_KEYS: &[&str] =
    &["A2", "G(2,1,3)", "G(4,2,2)", "G(3,3,3)", "4G333", "3G422", "2G5", "2G7", "3D4", "swap(G(3,1,2))"];

#[test]
fn arrangement_consistency() {
    for key in ARRANGEMENT_KEYS {
        let c = coset(key);
        let g = &c.group;
        let n = g.conductor;
        let mut seen = vec![0usize; g.order()];
        let mut count = 0;
        for h in &g.arrangement {
            assert_eq!(h.members.len() as u64, h.e - 1, "{key}");
            assert_eq!(g.det(h.distinguished).as_root_of_unity(), Some(RootOfUnity::new(h.e, 1)), "{key}");
            for &m in &h.members {
                seen[m] += 1;
                let x = &g.elements[m];
                assert_eq!(x.fixed_dim(), g.dim - 1, "{key}");
                let fixed = (x - &refcosets::linalg::CycMatrix::identity(g.dim, n)).kernel();
                for v in fixed {
                    assert!(h.eval(&v).is_zero(), "{key}");
                }
            }
            count += h.members.len();
        }
        assert_eq!(count, g.reflections.len(), "{key}");
        for &r in &g.reflections {
            assert_eq!(seen[r], 1, "{key}");
        }
        assert!(c.normalization_consistent(), "{key}");
    }
}

#[test]
fn degree_counts() {
    for key in ARRANGEMENT_KEYS {
        let c = coset(key);
        let mol = Molien::new(&c);
        let deg = mol.v_factors().unwrap();
        let codeg = mol.codegree_factors().unwrap();
        let d = deg.degrees();
        assert_eq!(d.iter().product::<i64>() as usize, c.group.order(), "{key}");
        assert_eq!(d.iter().map(|x| x - 1).sum::<i64>() as usize, c.group.reflections.len(), "{key}");
        let cd = codeg.degrees();
        assert_eq!(cd.iter().map(|x| x + 1).sum::<i64>() as usize, c.group.arrangement.len(), "{key}");
        for (_, eps) in deg.pairs().into_iter().chain(codeg.pairs()) {
            assert_eq!(c.gamma_order % eps.order, 0, "{key}");
        }
    }
}

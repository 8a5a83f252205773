mod common;

use common::{rel, sequences, sigma as naive_sigma};
use plap_core::ops::{self, ScanOptions};
use plap_core::{dn, eigen, nd, Case, Chain, Class, Exponent, Side, TestFunction};

fn e(p: f64) -> Exponent {
    Exponent::new(p).unwrap()
}

fn firsts(chain: &Chain, p: f64) -> (f64, f64, f64) {
    let ex = e(p);
    let d = ops::delta_seq(chain, &ex, 1).unwrap().values[0];
    let (dp, db) = ops::cut_sequences(chain, &ex, 1, &ScanOptions::default()).unwrap();
    (d, dp.values[0], db.values[0])
}

fn closed(chain: &Chain, p: f64) -> (f64, f64, f64) {
    let imp = ops::improved_estimates(chain, &e(p)).unwrap();
    (imp.delta1, imp.delta1_prime, imp.delta_bar1)
}

fn assert_triple(got: (f64, f64, f64), want: (f64, f64, f64), tol: f64) {
    assert!(rel(got.0, want.0) < tol, "delta1 {} vs {}", got.0, want.0);
    assert!(rel(got.1, want.1) < tol, "delta1' {} vs {}", got.1, want.1);
    assert!(rel(got.2, want.2) < tol, "delta-bar1 {} vs {}", got.2, want.2);
}

#[test]
fn nd_uniform_forty_first_steps() {
    let c = Chain::uniform(40, Case::Nd).unwrap();
    let frozen = (736.2670602731058, 646.0, 646.0);
    assert_triple(sequences(&c, 2.0, 1), frozen, 1e-13);
    assert_triple(firsts(&c, 2.0), frozen, 1e-12);
    assert_triple(closed(&c, 2.0), frozen, 1e-12);
}

#[test]
fn nd_uniform_forty_below_two() {
    let c = Chain::uniform(40, Case::Nd).unwrap();
    let frozen = (147.51239448807084, 134.8588613524569, 132.86948965052417);
    assert_triple(sequences(&c, 1.5, 1), frozen, 1e-13);
    assert_triple(closed(&c, 1.5), frozen, 1e-12);
    assert!(frozen.2 <= frozen.1);
}

#[test]
fn nd_uniform_two_brute_force() {
    let c = Chain::uniform(2, Case::Nd).unwrap();
    let p2 = (5.210343431045078, 14.0 / 3.0, 14.0 / 3.0);
    let p3 = (12.993104596248633, 11.896080788876851, 12.0);
    assert_triple(sequences(&c, 2.0, 1), p2, 1e-14);
    assert_triple(sequences(&c, 3.0, 1), p3, 1e-14);
    assert_triple(firsts(&c, 2.0), p2, 1e-13);
    assert_triple(firsts(&c, 3.0), p3, 1e-13);
}

#[test]
fn later_steps_match_explicit_iteration() {
    let chains = [
        Chain::new(Case::Nd, vec![1.0, 3.0, 0.5, 2.0], vec![2.0, 0.7, 1.5, 4.0]).unwrap(),
        Chain::new(Case::Dn, vec![0.4, 2.0, 1.0, 3.0], vec![1.0, 5.0, 0.3, 2.0]).unwrap(),
    ];
    for c in &chains {
        for p in [1.5, 2.0, 4.0] {
            let ex = e(p);
            let d = ops::delta_seq(c, &ex, 3).unwrap().values;
            let (dp, db) = ops::cut_sequences(c, &ex, 3, &ScanOptions::default()).unwrap();
            for n in 1..=3 {
                let want = sequences(c, p, n);
                let got = (d[n - 1], dp.values[n - 1], db.values[n - 1]);
                assert_triple(got, want, 1e-12);
            }
        }
    }
}

#[test]
fn nd_basic_bounds() {
    let (lo, hi) = nd::basic_bounds(&Chain::uniform(0, Case::Nd).unwrap(), &e(2.0)).unwrap();
    assert_eq!((lo, hi), (0.25, 1.0));
    let c = Chain::uniform(40, Case::Nd).unwrap();
    let (lo, hi) = nd::basic_bounds(&c, &e(2.0)).unwrap();
    assert!(rel(lo, 1.0 / 1764.0) < 1e-14 && rel(hi, 1.0 / 441.0) < 1e-14);
    let lambda = eigen::solve(&c, &e(2.0), eigen::DEFAULT_TOL).unwrap().lambda;
    assert!(lo < lambda && lambda < hi);
    let g = Chain::geometric(1.0, 2.0, 15, Case::Nd).unwrap();
    let (lo, hi) = nd::basic_bounds(&g, &e(3.0)).unwrap();
    let lambda = eigen::solve(&g, &e(3.0), eigen::DEFAULT_TOL).unwrap().lambda;
    assert!(lo <= lambda && lambda <= hi);
}

#[test]
fn geometric_sigma() {
    // Limit value r / (a (r - 1) (r^(p*-1) - 1)^(p-1)) at p = 2: 20/361.
    let g = Chain::geometric(1.0, 20.0, 80, Case::Nd).unwrap();
    let s = nd::sigma(&g, &e(2.0)).unwrap();
    assert!(rel(s.value, 20.0 / 361.0) < 1e-6);
    assert!(rel(s.value, naive_sigma(&g, 2.0)) < 1e-12);
}

#[test]
fn geometric_delta_bar_limit() {
    // (r^p* - 1) / (a (r^(p*-1) - 1)^p (r - 1)) for a = 1, r = 20.
    let g = Chain::geometric(1.0, 20.0, 80, Case::Nd).unwrap();
    for p in [1.5, 2.0, 3.0, 7.0] {
        let q = p / (p - 1.0);
        let r: f64 = 20.0;
        let limit = (r.powf(q) - 1.0) / ((r.powf(q - 1.0) - 1.0).powf(p) * (r - 1.0));
        let imp = nd::improved_estimates(&g, &e(p)).unwrap();
        assert!(rel(imp.delta_bar1, limit) < 1e-10, "p = {p}");
    }
    let imp = nd::improved_estimates(&g, &e(2.0)).unwrap();
    assert!(rel(imp.delta_bar1, imp.delta1_prime) < 1e-10);
}

#[test]
fn dn_uniform_first_steps() {
    let c = Chain::uniform(40, Case::Dn).unwrap();
    let frozen = (701.1957044396054, 615.1666666666666, 615.1666666666666);
    assert_triple(sequences(&c, 2.0, 1), frozen, 1e-13);
    assert_triple(firsts(&c, 2.0), frozen, 1e-12);
    assert_triple(closed(&c, 2.0), frozen, 1e-12);

    let low = (59.16687464779797, 56.926626753548675, 55.82197869326518);
    assert_triple(sequences(&c, 1.2, 1), low, 1e-13);
    assert_triple(closed(&c, 1.2), low, 1e-12);
    assert!(low.2 <= low.1);

    let c10 = Chain::uniform(10, Case::Dn).unwrap();
    let high = (347.4060619291629, 301.6304419762198, 306.0);
    assert_triple(sequences(&c10, 3.0, 1), high, 1e-13);
    assert_triple(closed(&c10, 3.0), high, 1e-12);
    assert!(high.2 >= high.1);
}

#[test]
fn dn_basic_bounds_bracket() {
    let c = Chain::uniform(40, Case::Dn).unwrap();
    let (lo, hi) = dn::basic_bounds(&c, &e(2.0)).unwrap();
    assert!(rel(lo, 1.0 / 1680.0) < 1e-14 && rel(hi, 1.0 / 420.0) < 1e-14);
    let lambda = eigen::solve(&c, &e(2.0), eigen::DEFAULT_TOL).unwrap().lambda;
    assert!(lo < lambda && lambda < hi);
    let g = Chain::geometric(0.5, 1.5, 12, Case::Dn).unwrap();
    let (lo, hi) = dn::basic_bounds(&g, &e(4.0)).unwrap();
    let lambda = eigen::solve(&g, &e(4.0), eigen::DEFAULT_TOL).unwrap().lambda;
    assert!(lo <= lambda && lambda <= hi);
}

#[test]
fn dn_sequences_converge() {
    let c = Chain::uniform(40, Case::Dn).unwrap();
    let lambda = eigen::solve(&c, &e(2.0), eigen::DEFAULT_TOL).unwrap().lambda;
    let d = dn::delta_seq(&c, &e(2.0), 30).unwrap();
    assert!(rel(1.0 / d.values[29], lambda) < 1e-6);
    let r = Chain::new(
        Case::Dn,
        (0..20).map(|i| 1.0 + (i as f64 * 0.7).sin().abs()).collect(),
        (0..20).map(|i| 0.5 + (i as f64 * 1.3).cos().abs()).collect(),
    )
    .unwrap();
    let lambda = eigen::solve(&r, &e(1.5), eigen::DEFAULT_TOL).unwrap().lambda;
    let dp = dn::delta_prime_seq(&r, &e(1.5), 1).unwrap();
    assert!(1.0 / dp.values[0] >= lambda * (1.0 - 1e-12));
}

#[test]
fn nd_sequences_converge() {
    let c = Chain::uniform(40, Case::Nd).unwrap();
    let lambda = eigen::solve(&c, &e(2.0), eigen::DEFAULT_TOL).unwrap().lambda;
    let d = nd::delta_seq(&c, &e(2.0), 30).unwrap();
    assert!(rel(1.0 / d.values[29], lambda) < 1e-6);
}

#[test]
fn eigenfunction_identities() {
    for case in [Case::Nd, Case::Dn] {
        let c = Chain::geometric(1.0, 1.7, 20, case).unwrap();
        for p in [1.5, 2.0, 3.5] {
            let ex = e(p);
            let sol = eigen::solve(&c, &ex, eigen::DEFAULT_TOL).unwrap();
            let lambda = sol.lambda;
            let scaled: Vec<f64> = sol.g.iter().map(|g| g * lambda.powf(ex.pstar() - 1.0)).collect();
            for v in ops::op_ii(&c, &ex, &scaled).unwrap() {
                assert!(rel(v.value().unwrap(), 1.0 / lambda) < 1e-9);
            }
            // Differences of g in linear scale lose digits where g flattens out.
            for v in ops::op_i(&c, &ex, &sol.g).unwrap() {
                assert!(rel(v.value().unwrap(), 1.0 / lambda) < 1e-7, "{case} p={p}");
            }
            let len = sol.g.len();
            let w: Vec<f64> = (0..len)
                .map(|i| match (case, i + 1 < len) {
                    (_, true) => sol.g[i + 1] / sol.g[i],
                    (Case::Nd, false) => 0.0,
                    (Case::Dn, false) => 1.0,
                })
                .collect();
            for v in ops::op_r(&c, &ex, &w).unwrap() {
                assert!(rel(v.value().unwrap(), lambda) < 1e-6, "{case} p={p}");
            }
        }
    }
}

#[test]
fn dn_truncated_ratios() {
    // Ratios of the eigenfunction of the chain cut at m, then 1: R~ = lambda^(m) up to m.
    let c = Chain::geometric(1.0, 1.4, 12, Case::Dn).unwrap();
    let ex = e(2.5);
    let m = 7;
    let cut = c.truncate_dn(m).unwrap();
    let sol = eigen::solve(&cut, &ex, eigen::DEFAULT_TOL).unwrap();
    let w: Vec<f64> = (0..c.len())
        .map(|i| if i + 1 < m { sol.g[i + 1] / sol.g[i] } else { 1.0 })
        .collect();
    let r = dn::op_rtilde(&c, &ex, &w, m).unwrap();
    for v in &r[..m] {
        assert!(rel(v.value().unwrap(), sol.lambda) < 1e-9);
    }
    let b = ops::bound_from_test_function(&c, &ex, &TestFunction::new(w, Class::WTilde, Some(m)), Side::Upper)
        .unwrap();
    let lambda = eigen::solve(&c, &ex, eigen::DEFAULT_TOL).unwrap().lambda;
    assert!(b.value >= lambda * (1.0 - 1e-12));
}

#[test]
fn nd_certificates() {
    let c = Chain::uniform(40, Case::Nd).unwrap();
    let ex = e(2.0);
    let sol = eigen::solve(&c, &ex, eigen::DEFAULT_TOL).unwrap();
    // A decreasing candidate gives a lower bound.
    let f: Vec<f64> = (0..=40).map(|i| 41.0 - i as f64).collect();
    let lo = nd::bound_from_test_function(&c, &ex, &TestFunction::new(f, Class::FI, None), Side::Lower).unwrap();
    assert!(lo.value <= sol.lambda + 1e-12);
    // Start of the lower-bound sequence.
    let nh = plap_core::nu_hat(&c, &ex);
    let f1: Vec<f64> = (0..=40).map(|i| nh.nuhat[i..].iter().sum::<f64>().powf(1.0 / ex.pstar())).collect();
    let b = nd::bound_from_test_function(&c, &ex, &TestFunction::new(f1, Class::FII, None), Side::Lower).unwrap();
    let d1 = nd::delta_seq(&c, &ex, 1).unwrap().values[0];
    assert!(rel(b.value, 1.0 / d1) < 1e-12);
    // Ratios of the eigenfunction truncated at m give an upper bound.
    let m = 25;
    let cut = eigen::solve(&c.truncate_nd(m).unwrap(), &ex, eigen::DEFAULT_TOL).unwrap();
    let w: Vec<f64> = (0..=40).map(|i| if i < m { cut.g[i + 1] / cut.g[i] } else { 0.0 }).collect();
    let hi = nd::bound_from_test_function(&c, &ex, &TestFunction::new(w, Class::WTilde, Some(m)), Side::Upper).unwrap();
    assert!(hi.value >= sol.lambda - 1e-12);
}

#[test]
fn one_state_values() {
    let c = Chain::new(Case::Dn, vec![2.0], vec![3.0]).unwrap();
    for p in [1.3, 2.0, 6.0] {
        let imp = dn::improved_estimates(&c, &e(p)).unwrap();
        for v in [imp.delta1, imp.delta1_prime, imp.delta_bar1] {
            assert!(rel(v, 2.0 / 3.0) < 1e-14);
        }
        assert!(rel(dn::sigma(&c, &e(p)).unwrap().value, 2.0 / 3.0) < 1e-14);
    }
    let u = Chain::uniform(0, Case::Nd).unwrap();
    let d = nd::delta_seq(&u, &e(2.0), 4).unwrap();
    assert!(d.values.iter().all(|v| rel(*v, 1.0) < 1e-14));
}

#[test]
fn geometric_first_steps_match_explicit_sums() {
    // Explicit finite-N sums for mu_k = r^k, nu_k = a r^(k+1).
    let (a, r, n) = (1.0f64, 20.0f64, 80usize);
    let g = Chain::geometric(a, r, n, Case::Nd).unwrap();
    for p in [1.5, 2.0, 3.0] {
        let q = p / (p - 1.0);
        let d1 = (0..=n)
            .map(|i| {
                (i..=n)
                    .map(|j| {
                        let (i, j) = (i as f64, j as f64);
                        (r.powf(i - j + (j - i + 1.0) / p) - r.powf(i - j - i / p)).powf(q - 1.0)
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
            .powf(p - 1.0)
            / (a * r * (r.powf(1.0 / p) - 1.0));
        let d1p = (0..=n)
            .map(|l| {
                (l..=n)
                    .map(|j| {
                        let (l, j) = (l as f64, j as f64);
                        ((r.powf(l + 1.0) - 1.0) / (r.powf(j) * (r - 1.0)) + (j - l) * r.powf(l - j))
                            .powf(q - 1.0)
                    })
                    .sum::<f64>()
            })
            .fold(0.0, f64::max)
            .powf(p - 1.0)
            / (a * r);
        let imp = nd::improved_estimates(&g, &e(p)).unwrap();
        assert!(rel(imp.delta1, d1) < 1e-12, "p = {p}");
        assert!(rel(imp.delta1_prime, d1p) < 1e-12, "p = {p}");
    }
}

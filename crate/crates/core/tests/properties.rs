use dunkl_core::dunkl_poly::DunklContext;
use dunkl_core::numeric::{DunklTransform, KernelStrategy};
use dunkl_core::rational::{q, qi};
use dunkl_core::report::{CheckRecord, SuiteReport};
use dunkl_core::riesz::{lowering_check, RieszFamily};
use dunkl_core::symbols::{certify_elliptic, sobolev_norm_spectral, Ellipticity};
use dunkl_core::testfn::TestFn;
use dunkl_core::{Monomial, Multiplicity, Poly, RootSystem, RootSystemName, Q};
use num_complex::Complex64;
use proptest::prelude::*;
use serde_json::json;

fn system(idx: usize) -> RootSystemName {
    [RootSystemName::Rank1, RootSystemName::A(1), RootSystemName::A(2)][idx].clone()
}

fn k_value(idx: usize) -> Q {
    [qi(0), q(1, 2), qi(1), qi(2)][idx].clone()
}

/// Polynomial from `(exponents, numerator, denominator)` triples.
fn poly_from(dim: usize, terms: &[(Vec<u32>, i64, i64)]) -> Poly {
    Poly::from_terms(
        dim,
        terms.iter().map(|(e, n, d)| (Monomial(e[..dim].to_vec()), q(*n, *d))),
    )
}

fn terms(max_exp: u32) -> impl Strategy<Value = Vec<(Vec<u32>, i64, i64)>> {
    prop::collection::vec(
        (prop::collection::vec(0..=max_exp, 3), -9i64..=9, 1i64..=4),
        1..6,
    )
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 24, ..ProptestConfig::default() })]

    #[test]
    fn dunkl_operators_commute(
        s in 0usize..3,
        ki in 0usize..4,
        t in terms(2),
        xi in prop::collection::vec(-3i64..=3, 3),
        eta in prop::collection::vec(-3i64..=3, 3),
    ) {
        let rs = RootSystem::new(system(s)).unwrap();
        let k = Multiplicity::uniform(&rs, k_value(ki)).unwrap();
        let ctx = DunklContext::new(&rs, &k);
        let d = ctx.dim();
        let p = poly_from(d, &t);
        let xi: Vec<Q> = xi[..d].iter().map(|v| qi(*v)).collect();
        let eta: Vec<Q> = eta[..d].iter().map(|v| qi(*v)).collect();
        let a = ctx.dunkl_t(&xi, &ctx.dunkl_t(&eta, &p).unwrap()).unwrap();
        let b = ctx.dunkl_t(&eta, &ctx.dunkl_t(&xi, &p).unwrap()).unwrap();
        prop_assert_eq!(a, b);
    }

    #[test]
    fn certificate_scales_linearly(
        dim in 1usize..=2,
        lower in terms(1),
        num in 1i64..=20,
        den in 1i64..=7,
    ) {
        // top part |x|² plus lower-order noise
        let mut p = Poly::norm_sq(dim);
        let noise = poly_from(dim, &lower);
        p.add_scaled(&noise.homogeneous_part(1), &qi(1));
        p.add_scaled(&noise.homogeneous_part(0), &qi(1));
        let lam = q(num, den);
        let base = certify_elliptic(&p).unwrap();
        let scaled = certify_elliptic(&p.scale(&lam)).unwrap();
        match (base, scaled) {
            (Ellipticity::Elliptic(a), Ellipticity::Elliptic(b)) => {
                let l = num as f64 / den as f64;
                prop_assert!((b.c - l * a.c).abs() <= 1e-12 * b.c.max(1.0));
                prop_assert!((b.margin - l * a.margin).abs() <= 1e-12 * b.margin.max(1.0));
            }
            other => prop_assert!(false, "unexpected verdict {:?}", other),
        }
    }

    #[test]
    fn report_passes_iff_every_check_passes(
        checks in prop::collection::vec((0u32..50, 0.0f64..2.0, 0.5f64..1.5), 0..20),
    ) {
        let records: Vec<CheckRecord> = checks
            .iter()
            .map(|(id, m, t)| CheckRecord::at_most(format!("c{id:02}"), json!({}), *m, *t))
            .collect();
        let all = records.iter().all(|r| r.pass);
        let r = SuiteReport::new("p", 0, records);
        prop_assert_eq!(r.pass, all);
        prop_assert!(r.checks.windows(2).all(|w| w[0].id <= w[1].id));
        prop_assert_eq!(r.failures().count() == 0, r.pass);
    }
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 8, ..ProptestConfig::default() })]

    #[test]
    fn sobolev_norm_grows_with_order(
        ki in 0usize..2,
        t in terms(3),
        a in 1i64..=4,
        s in 0.0f64..3.0,
        ds in 0.0f64..2.0,
    ) {
        let rs = RootSystem::new(RootSystemName::Rank1).unwrap();
        let k = Multiplicity::uniform(&rs, qi(ki as i64)).unwrap();
        let tr = DunklTransform::new(&rs, &k, KernelStrategy::Auto).unwrap();
        let g = tr.grid(12.0, 48).unwrap();
        let phi = TestFn::new(poly_from(1, &t), q(a, 2)).unwrap();
        let fh = tr.forward(&g.sample(|x| phi.eval_complex(x)), &g).unwrap();
        let lo = sobolev_norm_spectral(&fh, s);
        let hi = sobolev_norm_spectral(&fh, s + ds);
        prop_assert!(lo <= hi * (1.0 + 1e-14));
    }

    #[test]
    fn lowering_depth_does_not_matter(
        case in 0usize..3,
        re in 0.2f64..2.0,
        im in -1.0f64..1.0,
        m1 in 0usize..3,
        m2 in 0usize..3,
    ) {
        let (n, k) = [(1, qi(0)), (2, qi(0)), (2, q(1, 2))][case].clone();
        let fam = RieszFamily::new(n, k).unwrap();
        let mu = Complex64::new(fam.mu0() + re, im);
        let x0 = Poly::var(n, 0);
        let phi = TestFn::new(&Poly::one(n) + &(&x0 * &x0), qi(1)).unwrap();
        let r = lowering_check(&fam, mu, &phi, m1, m2).unwrap();
        prop_assert!(r.err <= 1e-8, "err {}", r.err);
    }

    #[test]
    fn laplace_shift_by_one(
        case in 0usize..3,
        re in 0.3f64..1.5,
        im in -1.0f64..1.0,
        z in prop::collection::vec((0.5f64..3.0, -2.0f64..2.0), 2),
    ) {
        // L R_μ(z) = Δ(z) · L R_{μ+1}(z), both sides by quadrature
        let (n, k) = [(1, qi(0)), (2, qi(0)), (2, qi(1))][case].clone();
        let fam = RieszFamily::new(n, k).unwrap();
        let mu = Complex64::new(fam.mu0() + re, im);
        let z: Vec<Complex64> = z[..n].iter().map(|(a, b)| Complex64::new(*a, *b)).collect();
        let dz: Complex64 = z.iter().product();
        let lhs = fam.laplace(mu, &z).unwrap();
        let rhs = fam.laplace(mu + 1.0, &z).unwrap();
        prop_assert_eq!(lhs.lowered_by, 0);
        let want = dz * rhs.value;
        prop_assert!((lhs.value - want).norm() <= 1e-8 * want.norm());
    }
}

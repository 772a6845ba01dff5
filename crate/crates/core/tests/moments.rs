mod common;

use haargauss::moments::{
    bilinear_fourth_moment, chi_square_central_stats, entry_monomial_moment, sigma_trace_sums, trace_power_moment,
    MonomialPattern,
};
use haargauss::numerics::par_replicates;
use haargauss::sampling::{gram_schmidt_coupling, sample_haar_submatrix};
use haargauss::{Dims, RngStream};

#[test]
fn two_index_monomials_match_o2_quadrature() {
    for pat in MonomialPattern::ALL.iter().filter(|p| p.min_n() <= 2) {
        let quad = common::o2_average(|g| pat.evaluate(|i, j| g[i][j]), 64);
        let exact = entry_monomial_moment(*pat, 2).unwrap().to_f64();
        assert!((quad - exact).abs() < 1e-14, "{pat:?}: quadrature {quad}, exact {exact}");
    }
}

#[test]
fn monomials_match_monte_carlo_at_n5() {
    let n = 5;
    let d = Dims::new(n, 3, 3).unwrap();
    let blocks = par_replicates(200_000, |i| sample_haar_submatrix(d, &mut RngStream::new(201, i))).unwrap();
    for pat in MonomialPattern::ALL {
        let xs: Vec<f64> = blocks.iter().map(|z| pat.evaluate(|i, j| z.get(i, j))).collect();
        let (m, se) = common::mean_se(&xs);
        let exact = entry_monomial_moment(pat, n).unwrap().to_f64();
        assert!((m - exact).abs() <= 4.0 * se, "{pat:?}: MC {m} (se {se}) vs {exact}");
    }
}

#[test]
fn trace_moments_match_monomial_assembly() {
    for (n, p, q) in [(4, 2, 3), (6, 6, 6), (12, 5, 7), (30, 2, 9)] {
        let d = Dims::new(n, p, q).unwrap();
        for k in 1..=3u32 {
            let closed = trace_power_moment(k, d).unwrap();
            let assembled = common::trace_moment_by_monomials(k as usize, n, p, q).unwrap();
            assert_eq!(closed, assembled, "k={k}, {d}");
        }
    }
}

#[test]
fn sigma_sums_match_monte_carlo() {
    let d = Dims::new(50, 5, 4).unwrap();
    let (n, p, q) = (d.n(), d.p(), d.q());
    let draws = par_replicates(50_000, |i| {
        let f = gram_schmidt_coupling(n, q, &mut RngStream::new(202, i))?;
        let mut tr = 0.0;
        let mut tr2 = 0.0;
        for j in 1..q {
            for a in 0..j {
                tr += f.gamma[a][..p].iter().map(|v| v * v).sum::<f64>();
                for b in 0..j {
                    let ip: f64 = f.gamma[a][..p].iter().zip(&f.gamma[b][..p]).map(|(x, y)| x * y).sum();
                    tr2 += ip * ip;
                }
            }
        }
        Ok((tr, tr2))
    })
    .unwrap();
    let exact = sigma_trace_sums(d);
    let a: Vec<f64> = draws.iter().map(|d| d.0).collect();
    let b: Vec<f64> = draws.iter().map(|d| d.1).collect();
    let (m, se) = common::mean_se(&a);
    assert!((m - exact.sum_e_tr.to_f64()).abs() <= 4.0 * se, "sum E tr: {m} vs {}", exact.sum_e_tr);
    let (m, se) = common::mean_se(&b);
    assert!((m - exact.sum_e_tr2.to_f64()).abs() <= 4.0 * se, "sum E tr^2: {m} vs {}", exact.sum_e_tr2);
}

#[test]
fn bilinear_fourth_moment_matches_monte_carlo() {
    let dot = 0.5f64;
    let a = [1.0, 0.0, 0.0];
    let b = [dot, (1.0 - dot * dot).sqrt(), 0.0];
    let xs = par_replicates(200_000, |i| {
        let mut s = RngStream::new(203, i);
        let mut y = [0.0; 3];
        s.fill_gaussian(&mut y);
        let ay: f64 = a.iter().zip(&y).map(|(u, v)| u * v).sum();
        let by: f64 = b.iter().zip(&y).map(|(u, v)| u * v).sum();
        Ok(ay * ay * by * by)
    })
    .unwrap();
    let (m, se) = common::mean_se(&xs);
    let exact = bilinear_fourth_moment(dot).unwrap();
    assert!((m - exact).abs() <= 4.0 * se, "{m} vs {exact}");
}

#[test]
fn chi_square_central_moments_match_quadrature_and_monte_carlo() {
    let c = |k: i32| common::gaussian_expectation(|x| (x * x - 1.0).powi(k), 20);
    let s1 = chi_square_central_stats(1);
    assert!((c(3) - s1.third_central.to_f64()).abs() < 1e-10);
    assert!((c(4) - s1.fourth_central.to_f64()).abs() < 1e-9);

    let m = 3;
    let s = chi_square_central_stats(m);
    let xs = par_replicates(200_000, |i| {
        let mut st = RngStream::new(204, i);
        let mut g = [0.0; 3];
        st.fill_gaussian(&mut g);
        Ok(g.iter().map(|v| v * v).sum::<f64>() - m as f64)
    })
    .unwrap();
    let cubes: Vec<f64> = xs.iter().map(|x| x.powi(3)).collect();
    let (m3, se3) = common::mean_se(&cubes);
    assert!((m3 - s.third_central.to_f64()).abs() <= 4.0 * se3, "{m3} vs {}", s.third_central);
    let squares: Vec<f64> = xs.iter().map(|x| x * x).collect();
    let (v, sev) = common::variance_se(&squares);
    assert!((v - s.var_sq_centered.to_f64()).abs() <= 4.0 * sev, "{v} vs {}", s.var_sq_centered);
}

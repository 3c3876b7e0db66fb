use num_complex::Complex64;

use rayleigh_bounds::quadrature::derive_seed;
use rayleigh_bounds::simulator::{
    average_periodogram, gen_fading, gen_fading_cholesky, gen_inputs, simulate_channel, InputKind,
};
use rayleigh_bounds::PsdModel;

fn pooled(model: &PsdModel, n: usize, reals: usize, seed: u64) -> Vec<Complex64> {
    (0..reals).flat_map(|r| gen_fading(model, n, derive_seed(seed, &[r as u64])).unwrap().h).collect()
}

#[test]
fn raised_cosine_periodogram_stays_in_band() {
    for rolloff in [0.1, 0.2] {
        let m = PsdModel::raised_cosine(0.1, rolloff, 1.0).unwrap();
        let n = 2048;
        let p = average_periodogram(&m, n, 64, 11).unwrap();
        let total: f64 = p.iter().sum();
        // margin of a few bins for periodogram leakage
        let edge = m.support_edge() + 4.0 / n as f64;
        let out: f64 = p
            .iter()
            .enumerate()
            .filter(|&(k, _)| {
                let f = if k <= n / 2 { k as f64 } else { k as f64 - n as f64 } / n as f64;
                f.abs() > edge
            })
            .map(|(_, v)| v)
            .sum();
        assert!(out / total < 0.02, "rolloff {rolloff}: out-of-band fraction {}", out / total);
    }
}

#[test]
fn samples_are_circular_gaussian() {
    let m = PsdModel::jakes(0.05, 1.0).unwrap();
    let h = pooled(&m, 512, 200, 5);
    let k = h.len() as f64;
    let p2 = h.iter().map(|c| c.norm_sqr()).sum::<f64>() / k;
    let p4 = h.iter().map(|c| c.norm_sqr().powi(2)).sum::<f64>() / k;
    let re2 = h.iter().map(|c| c.re * c.re).sum::<f64>() / k;
    let re4 = h.iter().map(|c| c.re.powi(4)).sum::<f64>() / k;
    let pseudo = h.iter().map(|c| c * c).sum::<Complex64>() / k;
    assert!((p2 - 1.0).abs() < 0.05, "power {p2}");
    // E|h|⁴ / (E|h|²)² = 2 and E x⁴ / (E x²)² = 3 for a proper complex Gaussian
    assert!((p4 / (p2 * p2) - 2.0).abs() < 0.1, "|h| kurtosis {}", p4 / (p2 * p2));
    assert!((re4 / (re2 * re2) - 3.0).abs() < 0.2, "Re kurtosis {}", re4 / (re2 * re2));
    assert!(pseudo.norm() < 0.05, "pseudo-covariance {pseudo}");
}

#[test]
fn lag_correlations_match_model() {
    let m = PsdModel::rectangular(0.05, 1.0).unwrap();
    let reals = 400;
    let n = 256;
    for cholesky in [false, true] {
        let mut acc = [Complex64::new(0.0, 0.0); 6];
        for r in 0..reals {
            let seed = derive_seed(21, &[r as u64]);
            let h = if cholesky { gen_fading_cholesky(&m, n, seed) } else { gen_fading(&m, n, seed) }.unwrap().h;
            for (lag, a) in acc.iter_mut().enumerate() {
                *a += (lag..n).map(|i| h[i] * h[i - lag].conj()).sum::<Complex64>() / (n - lag) as f64;
            }
        }
        for (lag, a) in acc.iter().enumerate() {
            let est = a.re / reals as f64;
            let want = m.autocorr(lag as i64);
            assert!((est - want).abs() < 0.05, "cholesky={cholesky} lag {lag}: {est} vs {want}");
        }
    }
}

#[test]
fn output_power_adds_up() {
    let m = PsdModel::jakes(0.1, 2.0).unwrap();
    let (sx2, sn2) = (3.0, 0.5);
    let mut acc = 0.0;
    let mut count = 0usize;
    for r in 0..50u64 {
        let real = gen_fading(&m, 1000, r).unwrap();
        let x = gen_inputs(InputKind::Pg, 1000, sx2, r + 100).unwrap();
        let y = simulate_channel(&real, &x, sn2, r + 200).unwrap();
        acc += y.iter().map(|c| c.norm_sqr()).sum::<f64>();
        count += y.len();
    }
    let p = acc / count as f64;
    let want = sx2 * 2.0 + sn2;
    assert!((p / want - 1.0).abs() < 0.05, "{p} vs {want}");
}

#[test]
fn constant_modulus_and_on_off_inputs() {
    let x = gen_inputs(InputKind::Cm(8), 1000, 2.0, 1).unwrap();
    assert!(x.iter().all(|c| (c.norm_sqr() - 2.0).abs() < 1e-12));
    let y = gen_inputs(InputKind::OnOff { beta: 4.0 }, 20_000, 1.0, 1).unwrap();
    let on = y.iter().filter(|c| c.norm_sqr() > 0.0).count() as f64 / y.len() as f64;
    assert!((on - 0.25).abs() < 0.02, "on fraction {on}");
    assert!(y.iter().all(|c| c.norm_sqr() == 0.0 || (c.norm_sqr() - 4.0).abs() < 1e-12));
    assert!(gen_inputs(InputKind::OnOff { beta: 0.5 }, 10, 1.0, 1).is_err());
}

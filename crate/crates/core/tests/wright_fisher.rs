use kimura_core::wf::generation_for_time;
use kimura_core::{simulate, InitialCondition, MeasureSolution, WfConfig};

fn run(x0: f64, seed: u64) -> kimura_core::WfTrajectoryStats {
    simulate(&WfConfig { population_size: 100, x0, generations: 600, replicates: 20_000, seed }).unwrap()
}

#[test]
fn symmetric_start_fixes_and_dies_equally() {
    let s = run(0.5, 11);
    for g in 0..=s.generations() {
        let p = s.fixed_fraction[g];
        let q = s.extinct_fraction[g];
        // standard error of the difference of two multinomial cell fractions
        let se = ((p + q - (p - q).powi(2)) / s.replicates as f64).sqrt();
        assert!((p - q).abs() <= 3.0 * se + 1e-12, "g = {g}");
    }
}

#[test]
fn mean_frequency_is_a_martingale() {
    let s = run(0.3, 12);
    for g in (0..=s.generations()).step_by(50) {
        assert!((s.mean_frequency[g] - 0.3).abs() <= 3.0 * s.frequency_stderr[g] + 1e-12, "g = {g}");
    }
    let last = s.generations();
    let p = s.fixed_fraction[last];
    assert!((p - 0.3).abs() <= 3.0 * s.fraction_stderr(0.3));
}

#[test]
fn fixation_tracks_the_diffusion() {
    let s = run(0.3, 13);
    let sol = MeasureSolution::with_defaults(&InitialCondition::Delta { x0: 0.3 }).unwrap();
    for t in [1.0, 1.5, 2.0, 3.0] {
        let g = generation_for_time(t, 100);
        let b = sol.fixation_probability(t).unwrap();
        let p = s.fixed_fraction[g];
        let se = s.fraction_stderr(b).max(s.fraction_stderr(p));
        assert!((p - b).abs() <= 4.0 * se, "t = {t}: {p} vs {b}");
    }
}

#[test]
fn heterozygosity_decays_like_mode_zero() {
    let s = run(0.4, 14);
    let h0 = s.mean_heterozygosity[0];
    for g in (0..=s.generations()).step_by(100) {
        let t = s.diffusion_times[g];
        let ratio = s.mean_heterozygosity[g] / h0;
        let se = s.heterozygosity_stderr[g] / h0;
        assert!((ratio - (-2.0 * t).exp()).abs() <= 3.0 * se + 1.0 / 100.0, "t = {t}");
    }
}

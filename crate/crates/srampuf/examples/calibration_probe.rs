// scratch probe for tuning the paper-calibration defaults
use srampuf::analysis::{bit_alias, inter_stats, intra_stats, max_bit_error};
use srampuf::sram::{apply_aging, new_population, sample_readout, AgingProfile, PopulationConfig};

fn main() {
    let cfg = PopulationConfig::paper_calibration();
    let t0 = std::time::Instant::now();
    let pop = new_population(&cfg, 0xC0FFEE).unwrap();
    println!("population generated in {:?}", t0.elapsed());

    // one readout per device
    let t = std::time::Instant::now();
    let inter: Vec<_> = (0..pop.n_devices())
        .map(|d| sample_readout(&pop, d, 0).unwrap())
        .collect();
    println!("inter readouts in {:?}", t.elapsed());

    let t = std::time::Instant::now();
    let rep = inter_stats(&inter, 1024).unwrap();
    println!(
        "inter: mean dist {:.4} hmin {:.4} p1 {:.4}  ({:?})",
        rep.per_block.iter().map(|b| b.distance.mean).sum::<f64>() / rep.per_block.len() as f64,
        rep.hmin_hat,
        rep.p1_hat,
        t.elapsed()
    );

    let alias = bit_alias(&inter).unwrap();
    let mut hist = [0u32; 50];
    for &a in &alias {
        hist[((a * 50.0) as usize).min(49)] += 1;
    }
    let peak_lo = hist[15..24].iter().max().unwrap();
    let peak_hi = hist[26..35].iter().max().unwrap();
    let valley = hist[23..27].iter().min().unwrap();
    println!("alias: peak_lo {peak_lo} valley {valley} peak_hi {peak_hi}");
    let lo_mode = 15 + hist[15..24].iter().enumerate().max_by_key(|(_, c)| **c).unwrap().0;
    let hi_mode = 26 + hist[26..35].iter().enumerate().max_by_key(|(_, c)| **c).unwrap().0;
    println!("alias modes near {:.2} and {:.2}", lo_mode as f64 / 50.0 + 0.01, hi_mode as f64 / 50.0 + 0.01);

    // intra: 700 readouts of device 0
    let t = std::time::Instant::now();
    let intra: Vec<_> = (0..700).map(|i| sample_readout(&pop, 0, i).unwrap()).collect();
    let rep = intra_stats(&intra, 1024).unwrap();
    println!(
        "intra: mean dist {:.4} hmin {:.4}  ({:?})",
        rep.per_block.iter().map(|b| b.distance.mean).sum::<f64>() / rep.per_block.len() as f64,
        rep.hmin_hat,
        t.elapsed()
    );

    // max per-bit error with many readouts, ground-truth pattern as the
    // designated reference
    let t = std::time::Instant::now();
    let mut many = vec![srampuf::sram::SramReadout {
        device_id: 0,
        readout_index: u32::MAX,
        bits: pop.pattern(0).unwrap().clone(),
    }];
    many.extend((0..8000).map(|i| sample_readout(&pop, 0, i).unwrap()));
    let m = max_bit_error(&many, 1024).unwrap();
    println!("max bit error {:.4} ({:?})", m.overall, t.elapsed());
    let true_max = pop
        .flip_probs()
        .iter()
        .cloned()
        .fold(0.0f64, f64::max);
    println!("ground-truth max flip prob {true_max:.4}");

    // aging
    let aged = apply_aging(&pop, &AgingProfile::paper_profile()).unwrap();
    let mut heavy = 0.0;
    let mut light = 0.0;
    let mut total = 0.0;
    for d in 0..aged.n_devices() {
        let r = sample_readout(&aged, d, 0).unwrap();
        let w = r.bits.count_ones() as f64 / r.length_bits() as f64;
        total += w;
        if aged.is_heavy_use(d) {
            heavy += w;
        } else {
            light += w;
        }
    }
    let n = aged.n_devices() as f64;
    println!(
        "aged: mean weight {:.4}, heavy-light diff {:.4}",
        total / n,
        heavy / (n / 2.0) - light / (n / 2.0)
    );
}

use std::fs;

use pseudosys::laws::{gen_ps, gen_signal, iteration_rng};
use pseudosys::text::{format_signal, format_system};
use rand::Rng;

fn main() {
    fs::create_dir_all("corpus").unwrap();
    let mut idx = 1;
    // Signal files, one to three blocks each.
    for i in 0..12u64 {
        let mut rng = iteration_rng(0xC0FFEE, i);
        let k = rng.gen_range(1..=3);
        let mut out = String::new();
        for j in 0..k {
            let dim = rng.gen_range(1..=2);
            let s = gen_signal(&mut rng, dim, false);
            if j > 0 {
                out.push('\n');
            }
            out.push_str(&format_signal(&format!("s{j}"), &s));
        }
        fs::write(format!("corpus/signals_{idx:02}.txt"), out).unwrap();
        idx += 1;
    }
    // System files.
    for i in 0..8u64 {
        let mut rng = iteration_rng(0xBEEF, i);
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);
        let f = gen_ps(&mut rng, m, n, false, true);
        fs::write(
            format!("corpus/system_{idx:02}.txt"),
            format_system("f", &f),
        )
        .unwrap();
        idx += 1;
    }
}

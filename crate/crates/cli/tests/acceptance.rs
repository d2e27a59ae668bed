//! End-to-end acceptance suite.  Each test covers one acceptance
//! criterion and prints a single pass/fail line; run with
//! `cargo test -p pseudosys-cli --test acceptance -- --nocapture` to see
//! them.

use std::collections::BTreeSet;
use std::path::PathBuf;
use std::process::Command;
use std::time::{Duration, Instant};

use rand::Rng;
use rand_chacha::ChaCha8Rng;

use pseudosys::delay::{delay_membership, pure_delay_states};
use pseudosys::laws::{gen_ps, gen_signal, iteration_rng, run_identity_suite, run_transfer_suite};
use pseudosys::properties::{boundary_report, state_function, Cell, Side, StateLevel, TimeLevel};
use pseudosys::text::{format_signal, format_system, parse_signal_file, parse_system_file};
use pseudosys::{
    window_extrema, BVec, DelayParams, LeftTail, Pattern, PseudoSystem, RightTail, Signal, Time,
    WindowMode,
};

fn report(name: &str, ok: bool, detail: &str) {
    println!("acceptance: {name}: {}", if ok { "pass" } else { "fail" });
    assert!(ok, "{name} failed: {detail}");
}

fn qt(q: i64) -> Time {
    Time::new(q, 4)
}

fn bv(s: &str) -> BVec {
    BVec::from_bits(s).unwrap()
}

fn relation_of(f: &PseudoSystem) -> BTreeSet<(Signal, Signal)> {
    f.pairs()
        .map(|(iu, ix)| (f.inputs()[iu].clone(), f.states()[ix].clone()))
        .collect()
}

#[test]
fn identity_law_suite() {
    let start = Instant::now();
    let out = run_identity_suite(1, 1000, None);
    let elapsed = start.elapsed();
    report(
        "identity laws, 1000 seeded instances",
        out.passed() && out.iterations == 1000 && elapsed < Duration::from_secs(60),
        &format!("failure={:?} elapsed={elapsed:?}", out.failure),
    );
}

#[test]
fn strictness_witnesses() {
    let out = run_identity_suite(1, 50, None);
    let witnesses = [
        "pairing_union_strictness_witness",
        "complement_pairing_strictness_witness",
        "serial_strictness_witness",
        "intersect_phi_strictness_witness",
        "union_middle_failure_witness",
    ];
    let ok = out.passed()
        && witnesses
            .iter()
            .all(|w| out.counters.get(w) == Some(&out.iterations));
    report(
        "strict-inclusion and union-failure witnesses",
        ok,
        &format!("failure={:?} counters={:?}", out.failure, out.counters),
    );
}

#[test]
fn classification_lattice() {
    // Reports on random instances never violate the cell grid, the
    // race-free cardinality bound, or the vacuity rules.
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..1000u64 {
        let mut rng = iteration_rng(1, i);
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);
        let f = gen_ps(&mut rng, m, n, false, false);
        for side in [Side::Initial, Side::Final] {
            let r = boundary_report(&f, side);
            if !r.check_conformance() {
                ok = false;
                detail = format!("iteration {i}: {r:?}");
            }
        }
    }

    // The constant map: every input answers with the single constant
    // state mu.  It classifies in the strongest cell on both sides and
    // both state functions are identically {mu}.
    let mu = bv("1");
    let inputs = vec![
        Signal::constant(bv("0")),
        Signal::make(
            1,
            LeftTail::Const(bv("0")),
            vec![(Time::int(0), bv("1"))],
            RightTail::Const,
        )
        .unwrap(),
    ];
    let f = PseudoSystem::new(
        1,
        1,
        inputs.clone(),
        vec![Signal::constant(mu.clone())],
        &[(0, 0), (1, 0)],
    )
    .unwrap();
    for side in [Side::Initial, Side::Final] {
        let r = boundary_report(&f, side);
        if r.state_level != StateLevel::Constant
            || r.time_level != TimeLevel::Fix
            || r.cell != Some(Cell::I)
            || r.constant_value.as_ref() != Some(&mu)
        {
            ok = false;
            detail = format!("constant map {side:?}: {r:?}");
        }
        let sf = state_function(&f, side).unwrap();
        let want: BTreeSet<BVec> = [mu.clone()].into();
        if sf.theta != want || inputs.iter().any(|u| sf.phi_of(u) != want) {
            ok = false;
            detail = format!("constant map state function {side:?}: {sf:?}");
        }
    }
    report("classification lattice conformance", ok, &detail);
}

#[test]
fn transfer_law_suite() {
    let out = run_transfer_suite(2, 200, None);
    // The exact state-function equalities must be part of what ran.
    let ok = out.passed()
        && out.iterations == 200
        && out.counters.contains_key("serial_delta_formula")
        && out.counters.contains_key("product_phi_law");
    report(
        "transfer laws, 200 seeded instances",
        ok,
        &format!("failure={:?}", out.failure),
    );
}

/// A plain one-dimensional signal with up to six events on the quarter
/// grid.
fn gen_delay_input(rng: &mut ChaCha8Rng) -> Signal {
    let k = rng.gen_range(1..=6);
    let mut quarters: Vec<i64> = Vec::new();
    while quarters.len() < k {
        let q = rng.gen_range(-20..=20);
        if !quarters.contains(&q) {
            quarters.push(q);
        }
    }
    quarters.sort_unstable();
    let events: Vec<(Time, BVec)> = quarters
        .into_iter()
        .map(|q| (qt(q), if rng.gen_bool(0.5) { bv("1") } else { bv("0") }))
        .collect();
    let left = LeftTail::Const(if rng.gen_bool(0.5) { bv("1") } else { bv("0") });
    Signal::make(1, left, events, RightTail::Const).unwrap()
}

#[test]
fn delay_correctness() {
    let start = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..500u64 {
        let mut rng = iteration_rng(3, i);
        let u = gen_delay_input(&mut rng);
        let d = qt(rng.gen_range(1..=8));
        let p = DelayParams::new(d).unwrap();

        // Every shift in (0, d] is a solution.
        let taus: Vec<Time> = (1..=4).map(|k| d * k / 4).collect();
        for tau in &taus {
            if !delay_membership(&u, &u.shift(*tau), p).unwrap() {
                ok = false;
                detail = format!("iteration {i}: shift {tau} rejected");
            }
        }
        for x in pure_delay_states(&u, p, &taus).unwrap() {
            if !delay_membership(&u, &x, p).unwrap() {
                ok = false;
                detail = format!("iteration {i}: pure-delay state rejected");
            }
        }

        // The unshifted input fails exactly when it switches.
        let switches = u.first_departure().is_some();
        if delay_membership(&u, &u, p).unwrap() == switches {
            ok = false;
            detail = format!("iteration {i}: self-membership wrong");
        }

        for mode in [WindowMode::Inf, WindowMode::Sup] {
            let w = window_extrema(&u, d, mode).unwrap();
            // Breakpoints only at event times and event times + d.
            let allowed: Vec<Time> =
                u.events().iter().flat_map(|(t, _)| [*t, *t + d]).collect();
            if w.segs().iter().any(|s| !allowed.contains(&s.time)) {
                ok = false;
                detail = format!("iteration {i}: stray window breakpoint");
            }
            // Dense-grid oracle: fold u over [t - d, t) directly.
            let lo = u.first_time() - d - Time::int(1);
            let hi = u.last_time() + d + Time::int(1);
            let mut probes: Vec<Time> = vec![lo, hi];
            probes.extend(u.breakpoints_in(lo, hi));
            probes.extend(w.segs().iter().map(|s| s.time));
            probes.sort();
            probes.dedup();
            let mids: Vec<Time> = probes.windows(2).map(|p| (p[0] + p[1]) / 2).collect();
            probes.extend(mids);
            for t in probes {
                let mut acc = u.value_at(t - d).clone();
                let mut s = t - d + Time::new(1, 64);
                while s < t {
                    acc = match mode {
                        WindowMode::Inf => acc.and(u.value_at(s)),
                        WindowMode::Sup => acc.or(u.value_at(s)),
                    };
                    s = s + Time::new(1, 64);
                }
                if w.value_at(t) != &acc {
                    ok = false;
                    detail = format!("iteration {i}: oracle disagreement at {t}");
                }
            }
        }
    }
    let elapsed = start.elapsed();
    report(
        "delay membership and window extrema, 500 instances",
        ok && elapsed < Duration::from_secs(30),
        &format!("{detail} elapsed={elapsed:?}"),
    );
}

#[test]
fn inverse_of_periodic_input_loses_initial_states() {
    // Instances whose input universe contains an admissible input with a
    // genuinely periodic left tail.  Such an input has no initial value,
    // so after inversion it is a reachable state without a limit.
    let mut ok = true;
    let mut detail = String::new();
    for i in 0..100u64 {
        let mut rng = iteration_rng(5, i);
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);

        let bits = |rng: &mut ChaCha8Rng, flip: bool| -> BVec {
            let s: String = (0..m)
                .map(|j| {
                    let b = rng.gen_bool(0.5) ^ (flip && j == 0);
                    if b {
                        '1'
                    } else {
                        '0'
                    }
                })
                .collect();
            BVec::from_bits(&s).unwrap()
        };
        let v = bits(&mut rng, false);
        let pat = Pattern::new(vec![
            (qt(rng.gen_range(1..=4)), v.clone()),
            (qt(rng.gen_range(1..=4)), v.complement()),
        ])
        .unwrap();
        let psig = Signal::make(
            m,
            LeftTail::Periodic(pat),
            vec![(qt(rng.gen_range(-4..=4)), bits(&mut rng, false))],
            RightTail::Const,
        )
        .unwrap();
        assert!(matches!(psig.left_tail(), LeftTail::Periodic(_)));

        let mut inputs = vec![psig.clone(), gen_signal(&mut rng, m, false)];
        inputs.dedup();
        let states: Vec<Signal> = vec![gen_signal(&mut rng, n, false)];
        let rel: Vec<(usize, usize)> = (0..inputs.len()).map(|iu| (iu, 0)).collect();
        let f = PseudoSystem::new(m, n, inputs, states, &rel).unwrap();

        let r = boundary_report(&f.inverse(), Side::Initial);
        if r.state_level != StateLevel::None {
            ok = false;
            detail = format!("iteration {i}: {r:?}");
        }
    }
    report(
        "inverse with periodic-left-tail input classifies state level none",
        ok,
        &detail,
    );
}

#[test]
fn induced_system_is_the_unique_maximal_system() {
    let mut ok = true;
    let mut detail = String::new();
    let mut done = 0u64;
    let mut i = 0u64;
    while done < 50 {
        let mut rng = iteration_rng(7, i);
        i += 1;
        let m = rng.gen_range(1..=2);
        let n = rng.gen_range(1..=2);
        let f = gen_ps(&mut rng, m, n, false, false);
        let pairs: Vec<(usize, usize)> = f.pairs().collect();
        if pairs.len() > 8 {
            continue;
        }
        done += 1;

        // Every sub-table that is a system, by brute force.
        let mut systems: Vec<PseudoSystem> = Vec::new();
        for mask in 0u32..(1 << pairs.len()) {
            let rel: Vec<(usize, usize)> = pairs
                .iter()
                .enumerate()
                .filter(|(j, _)| mask & (1 << j) != 0)
                .map(|(_, p)| *p)
                .collect();
            let sub = PseudoSystem::new(
                m,
                n,
                f.inputs().to_vec(),
                f.states().to_vec(),
                &rel,
            )
            .unwrap();
            if sub.is_system() {
                systems.push(sub);
            }
        }

        match f.induced_system() {
            Ok(ind) => {
                let ind_rel = relation_of(&ind);
                let maximal = ind.is_system()
                    && systems
                        .iter()
                        .all(|s| relation_of(s).is_subset(&ind_rel));
                let fixed = (relation_of(&f) == ind_rel) == f.is_system();
                if !(maximal && fixed) {
                    ok = false;
                    detail = format!("instance {i}: maximal={maximal} fixed={fixed}");
                }
            }
            Err(_) => {
                if !systems.is_empty() || f.is_system() {
                    ok = false;
                    detail = format!(
                        "instance {i}: no induced system but {} system sub-tables",
                        systems.len()
                    );
                }
            }
        }
    }
    report(
        "induced system maximality on 50 exhaustive tiny instances",
        ok,
        &detail,
    );
}

#[test]
fn cli_determinism_and_roundtrips() {
    let bin = env!("CARGO_BIN_EXE_pseudosys");
    let run = || {
        Command::new(bin)
            .args(["laws", "--seed", "1", "--iters", "100"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    let mut ok = a.status.success() && a.stdout == b.stdout && a.stderr == b.stderr;
    let mut detail = String::from("law reports differ between runs");

    let corpus: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "corpus"]
        .iter()
        .collect();
    let mut entries: Vec<PathBuf> = std::fs::read_dir(&corpus)
        .unwrap()
        .map(|e| e.unwrap().path())
        .collect();
    entries.sort();
    if entries.len() < 20 {
        ok = false;
        detail = format!("corpus has only {} files", entries.len());
    }
    for path in entries {
        let src = std::fs::read_to_string(&path).unwrap();
        let formatted = if src.lines().any(|l| l.starts_with("system ")) {
            let doc = parse_system_file(&src).unwrap();
            let out = format_system(&doc.name, &doc.system);
            if parse_system_file(&out).unwrap().system != doc.system {
                ok = false;
            }
            out
        } else {
            let sigs = parse_signal_file(&src).unwrap();
            let out: String = sigs
                .iter()
                .enumerate()
                .map(|(j, ns)| {
                    let sep = if j > 0 { "\n" } else { "" };
                    format!("{sep}{}", format_signal(&ns.name, &ns.signal))
                })
                .collect();
            if parse_signal_file(&out).unwrap() != sigs {
                ok = false;
            }
            out
        };
        if formatted != src {
            ok = false;
            detail = format!("{} is not serialized canonically", path.display());
        }
    }
    report("deterministic CLI reports and corpus round-trips", ok, &detail);
}

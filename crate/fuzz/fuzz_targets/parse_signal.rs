#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudosys::text::{format_signal, parse_signal_file};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    // Must never panic; accepted input must round-trip exactly.
    if let Ok(sigs) = parse_signal_file(src) {
        for ns in &sigs {
            let out = format_signal(&ns.name, &ns.signal);
            let back = parse_signal_file(&out).expect("canonical output must parse");
            assert_eq!(back.len(), 1);
            assert_eq!(back[0].signal, ns.signal);
        }
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use pseudosys::text::{format_system, parse_system_file};

fuzz_target!(|data: &[u8]| {
    let Ok(src) = std::str::from_utf8(data) else {
        return;
    };
    if let Ok(doc) = parse_system_file(src) {
        let out = format_system(&doc.name, &doc.system);
        let back = parse_system_file(&out).expect("canonical output must parse");
        assert_eq!(back.system, doc.system);
    }
});

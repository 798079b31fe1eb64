#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(t) = circle_ideals::parse_trigpoly(text) else { return };
    let printed = t.to_string();
    let back = circle_ideals::parse_trigpoly(&printed).expect("printed polynomial parses");
    let scale = t.max_abs_coeff().max(1.0);
    assert!(back.sub(&t).max_abs_coeff() <= 1e-12 * scale, "{text} -> {printed}");
});

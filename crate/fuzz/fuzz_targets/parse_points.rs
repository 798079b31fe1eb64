#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match circle_ideals::parse_points(text) {
        Ok(d) => {
            let mut last = -1.0;
            for e in d.entries() {
                assert!(e.multiplicity > 0);
                assert!((0.0..std::f64::consts::TAU).contains(&e.point.theta()));
                assert!(e.point.theta() > last);
                last = e.point.theta();
            }
        }
        Err(err) => assert!(err.position() <= text.len()),
    }
});

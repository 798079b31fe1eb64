#![no_main]

use libfuzzer_sys::fuzz_target;

fuzz_target!(|data: &[u8]| {
    let Ok(text) = std::str::from_utf8(data) else { return };
    match circle_ideals::expr::parse(text) {
        Ok(e) => {
            // lowering may reject, but never panic; a printed tree parses again
            let _ = circle_ideals::expr::lower(&e);
            assert!(circle_ideals::expr::parse(&e.to_string()).is_ok(), "{e}");
        }
        Err(err) => assert!(err.position() <= text.len()),
    }
});

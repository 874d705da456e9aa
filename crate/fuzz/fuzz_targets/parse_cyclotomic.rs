#![no_main]

use libfuzzer_sys::fuzz_target;

// The text form is canonical: parse, print, parse is the identity.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if s.len() > 512 {
        return;
    }
    if let Ok(x) = cyclo::parse(s) {
        let printed = x.to_string();
        let y = cyclo::parse(&printed).expect("printed value parses");
        assert_eq!(x, y);
        assert_eq!(printed, y.to_string());
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use trilat::tracefield::FieldClaim;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(c) = FieldClaim::parse(s) {
        let again = FieldClaim::parse(&c.to_string()).expect("printed claim parses");
        assert_eq!(c, again);
        let _ = c.degree();
    }
});

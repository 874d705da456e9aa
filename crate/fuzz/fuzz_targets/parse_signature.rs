#![no_main]

use libfuzzer_sys::fuzz_target;
use trilat::stabilizer::FuchsianSignature;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(sig) = FuchsianSignature::parse(s) {
        let again = FuchsianSignature::parse(&sig.to_string()).expect("printed signature parses");
        assert_eq!(sig, again);
        let _ = sig.chi();
    }
});

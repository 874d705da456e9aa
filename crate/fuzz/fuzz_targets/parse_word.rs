#![no_main]

use libfuzzer_sys::fuzz_target;
use trilat::Word;

// Printing a parsed word and parsing it again gives the same word.
fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(w) = Word::parse(s) {
        let again = Word::parse(&w.to_string()).expect("printed word parses");
        assert_eq!(w, again);
    }
});

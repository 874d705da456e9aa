#![no_main]

use libfuzzer_sys::fuzz_target;
use trilat::catalog::{Catalog, EMBEDDED_SOURCES};

// First byte picks which data file to replace, the rest is its text.
// Loading must return an error or a catalog, never panic.
fuzz_target!(|data: &[u8]| {
    let Some((&which, rest)) = data.split_first() else { return };
    let Ok(text) = std::str::from_utf8(rest) else { return };
    let mut sources = EMBEDDED_SOURCES;
    sources[which as usize % 4] = text;
    let _ = Catalog::from_sources(sources[0], sources[1], sources[2], sources[3]);
});

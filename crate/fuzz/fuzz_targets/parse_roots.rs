#![no_main]

use libfuzzer_sys::fuzz_target;
use supergaudin::io::{RootsFile, SolveReport};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(r) = RootsFile::parse(s) {
        assert_eq!(RootsFile::parse(&r.to_json()).unwrap(), r);
        for e in &r.solutions {
            let _ = e.complex_roots();
            let _ = e.exact_roots();
        }
    }
    if let Ok(rep) = SolveReport::parse(s) {
        assert_eq!(SolveReport::parse(&rep.to_json()).unwrap(), rep);
    }
});

#![no_main]

use libfuzzer_sys::fuzz_target;
use supergaudin::io::ProblemFile;

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(p) = ProblemFile::parse(s) {
        assert_eq!(ProblemFile::parse(&p.to_json()).unwrap(), p);
        // Building modules is bounded by the default size cap; keep inputs small.
        if p.m + p.n <= 3 && p.sites.len() <= 3 {
            let _ = p.chain();
        }
    }
});

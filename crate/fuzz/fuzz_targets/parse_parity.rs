#![no_main]

use libfuzzer_sys::fuzz_target;
use supergaudin::superalg::{cartan_matrix, ParitySequence};

fuzz_target!(|data: &[u8]| {
    let Ok(s) = std::str::from_utf8(data) else { return };
    if let Ok(ps) = ParitySequence::parse(s) {
        assert_eq!(ps.to_string().len(), ps.len());
        let rd = cartan_matrix(&ps);
        assert_eq!(rd.cartan.len(), ps.rank());
        assert_eq!(ParitySequence::parse(&ps.to_string()).unwrap(), ps);
    }
});
